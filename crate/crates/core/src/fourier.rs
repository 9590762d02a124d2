//! The Boolean Fourier transform and its stochastic/empirical extensions.
//!
//! For a table `f` on `{-1,+1}^d` the uniform coefficients are
//! `f_S = 2^-d sum_x f(x) chi_S(x)`, so `f(x) = sum_S f_S chi_S(x)`.
//!
//! For a joint feature/label distribution the *stochastic* coefficients are
//! `a_S = 2^-d E[Y chi_S(X)]`; their plug-in estimates from a sample are
//! `ahat_S = 2^-d (1/n) sum_i y(i) chi_S(x(i))`. The `2^-d` scale is kept in
//! stored coefficients so the loss and bound formulas transcribe literally;
//! use [`Spectrum::coeff_rescaled`] where an identity needs the `2^d`-scaled
//! value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cube::{check_same_dim, chi_eval_bits, SubsetMask, MAX_POINT_DIM, MAX_TABLE_DIM};
use crate::dataset::Dataset;
use crate::dist::JointDistribution;
use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped when serializing a
/// spectrum. Computation never drops entries.
const SERIALIZE_EPS: f64 = 1e-15;

/// A coefficient map `S -> real`; absent subsets mean coefficient zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    dim: usize,
    coeffs: BTreeMap<SubsetMask, f64>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumEntry {
    s: u32,
    v: f64,
}

#[derive(Serialize, Deserialize)]
struct SpectrumFile {
    dim: usize,
    coeffs: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_POINT_DIM {
            return Err(Error::BadDim {
                dim,
                max: MAX_POINT_DIM,
            });
        }
        Ok(Spectrum {
            dim,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, s: SubsetMask, v: f64) -> Result<()> {
        check_same_dim(s.dim(), self.dim)?;
        if v == 0.0 {
            self.coeffs.remove(&s);
        } else {
            self.coeffs.insert(s, v);
        }
        Ok(())
    }

    /// Coefficient of `S` (zero when absent).
    pub fn coeff(&self, s: SubsetMask) -> f64 {
        debug_assert_eq!(s.dim(), self.dim);
        self.coeffs.get(&s).copied().unwrap_or(0.0)
    }

    /// `2^d * coeff(S)`: the scale some identities need.
    pub fn coeff_rescaled(&self, s: SubsetMask) -> f64 {
        self.coeff(s) * (1u64 << self.dim) as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, f64)> + '_ {
        self.coeffs.iter().map(|(&s, &v)| (s, v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of squared coefficients (Parseval's left-hand side).
    pub fn energy(&self) -> f64 {
        self.coeffs.values().map(|v| v * v).sum()
    }

    /// JSON `{"dim": d, "coeffs": [{"s": <mask>, "v": <coeff>}, ...]}`;
    /// entries with `|v| < 1e-15` are omitted.
    pub fn to_json(&self) -> String {
        let coeffs = self
            .iter()
            .filter(|(_, v)| v.abs() >= SERIALIZE_EPS)
            .map(|(s, v)| SpectrumEntry { s: s.bits(), v })
            .collect();
        serde_json::to_string_pretty(&SpectrumFile {
            dim: self.dim,
            coeffs,
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: SpectrumFile = serde_json::from_str(s)?;
        let mut out = Spectrum::new(file.dim)?;
        for e in &file.coeffs {
            out.set(SubsetMask::new(e.s, file.dim)?, e.v)?;
        }
        Ok(out)
    }
}

/// In-place unnormalized Walsh-Hadamard transform:
/// `buf[s] <- sum_x (-1)^popcount(s & x) buf[x]`. Self-inverse up to the
/// factor `len`. Panics unless the length is a power of two.
pub fn walsh_hadamard_in_place(buf: &mut [f64]) {
    assert!(buf.len().is_power_of_two(), "length must be a power of two");
    let mut half = 1;
    while half < buf.len() {
        let mut start = 0;
        while start < buf.len() {
            for i in start..start + half {
                let a = buf[i];
                let b = buf[i + half];
                buf[i] = a + b;
                buf[i + half] = a - b;
            }
            start += 2 * half;
        }
        half *= 2;
    }
}

fn dim_of_table(len: usize, max_dim: usize) -> Result<usize> {
    if !len.is_power_of_two() || len < 2 {
        return Err(Error::Invalid(format!(
            "table length {len} is not a power of two >= 2"
        )));
    }
    let d = len.trailing_zeros() as usize;
    if d > max_dim {
        return Err(Error::BadDim {
            dim: d,
            max: max_dim,
        });
    }
    Ok(d)
}

/// Uniform Fourier coefficients of a value table over all `2^d` points
/// (index = point bits): `f_S = 2^-d sum_x f(x) chi_S(x)`. O(d 2^d).
pub fn uniform_fourier(table: &[f64]) -> Result<Spectrum> {
    let d = dim_of_table(table.len(), MAX_TABLE_DIM)?;
    let mut buf = table.to_vec();
    walsh_hadamard_in_place(&mut buf);
    let scale = 1.0 / table.len() as f64;
    let mut out = Spectrum::new(d)?;
    for (bits, &v) in buf.iter().enumerate() {
        out.set(SubsetMask::new(bits as u32, d)?, v * scale)?;
    }
    Ok(out)
}

/// Evaluate a spectrum back into a value table: `f(x) = sum_S f_S chi_S(x)`.
pub fn inverse_fourier(s: &Spectrum) -> Result<Vec<f64>> {
    if s.dim() > MAX_TABLE_DIM {
        return Err(Error::BadDim {
            dim: s.dim(),
            max: MAX_TABLE_DIM,
        });
    }
    let mut buf = vec![0.0; 1 << s.dim()];
    for (mask, v) in s.iter() {
        buf[mask.bits() as usize] = v;
    }
    walsh_hadamard_in_place(&mut buf);
    Ok(buf)
}

/// Raw table `g(x) = P(x, +1) - P(x, -1)` whose uniform Fourier transform
/// carries every stochastic coefficient: `a_S = 2^-d WHT(g)[S]`.
pub(crate) fn label_diff_wht(dist: &JointDistribution) -> Vec<f64> {
    let mut buf: Vec<f64> = (0..1u32 << dist.dim())
        .map(|bits| dist.label_diff(bits))
        .collect();
    walsh_hadamard_in_place(&mut buf);
    buf
}

/// Stochastic Fourier coefficient `a_S = 2^-d E[Y chi_S(X)]`, summed exactly
/// over the probability table.
pub fn stochastic_coeff(dist: &JointDistribution, s: SubsetMask) -> Result<f64> {
    check_same_dim(dist.dim(), s.dim())?;
    let mut acc = 0.0;
    for bits in 0..1u32 << dist.dim() {
        acc += dist.label_diff(bits) * chi_eval_bits(s.bits(), bits) as f64;
    }
    Ok(acc / (1u64 << dist.dim()) as f64)
}

/// All stochastic coefficients with `|S| <= max_degree`, via one transform.
pub fn stochastic_spectrum(dist: &JointDistribution, max_degree: usize) -> Result<Spectrum> {
    let d = dist.dim();
    let wht = label_diff_wht(dist);
    let scale = 1.0 / (1u64 << d) as f64;
    let mut out = Spectrum::new(d)?;
    for bits in 0..1u32 << d {
        if (bits.count_ones() as usize) <= max_degree {
            out.set(SubsetMask::new(bits, d)?, wht[bits as usize] * scale)?;
        }
    }
    Ok(out)
}

/// Empirical coefficient `ahat_S = 2^-d (1/n) sum_i y(i) chi_S(x(i))`.
///
/// Datasets are nonempty by construction, so the empty-sample error path
/// lives in [`Dataset::new`].
pub fn empirical_coeff(data: &Dataset, s: SubsetMask) -> Result<f64> {
    check_same_dim(data.dim(), s.dim())?;
    let mut acc = 0i64;
    for &(x, y) in data.samples() {
        acc += (y * chi_eval_bits(s.bits(), x.bits())) as i64;
    }
    Ok(acc as f64 / data.n() as f64 / (1u64 << data.dim()) as f64)
}

/// All empirical coefficients with `|S| <= max_degree`.
pub fn empirical_spectrum(data: &Dataset, max_degree: usize) -> Result<Spectrum> {
    let d = data.dim();
    let subsets = crate::cube::enumerate_subsets(d, max_degree, crate::cube::EnumMode::UpToK)?;
    let mut out = Spectrum::new(d)?;
    for s in subsets {
        out.set(s, empirical_coeff(data, s)?)?;
    }
    Ok(out)
}

/// Uniform bound on `sup_j |ahat_{S_j} - a_{S_j}|` over `m` subsets that
/// holds with probability at least `1 - delta` for `n` i.i.d. samples:
/// `2^-d sqrt(2 log(2m / delta) / n)`.
///
/// Each summand `y chi_S(x)` lies in `[-1, 1]`, so Hoeffding gives the
/// two-sided tail `2 exp(-n eps^2 / 2)` for one coefficient; a union bound
/// over the `m` subsets and solving `2m exp(-n eps^2 / 2) = delta` yields
/// the constant above.
pub fn concentration_bound(n: usize, m: usize, delta: f64, d: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("n must be >= 1".into()));
    }
    if m == 0 {
        return Err(Error::Invalid("m must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadDelta(delta));
    }
    Ok((2.0 * (2.0 * m as f64 / delta).ln() / n as f64).sqrt() / (1u64 << d) as f64)
}
