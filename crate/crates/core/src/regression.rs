//! Least-squares polynomial fits on coordinate subsets, exact conditional
//! projections, and the sign-predictor model format.
//!
//! A degree-`k` polynomial on a `k`-element subset `J` is spanned by the
//! `2^k` monomials `{chi_S : S subset of J}`, so fitting on `J` is a small
//! normal-equation solve and the exact minimizer under a known distribution
//! is the conditional expectation `E[Y | X^J]` expressed in that basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cube::{check_same_dim, chi_eval_bits, CubePoint, SubsetMask, MAX_POINT_DIM};
use crate::dataset::Dataset;
use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::fourier::{uniform_fourier, walsh_hadamard_in_place, Spectrum};
use crate::linalg::psd_min_norm_solve;

/// Relative eigenvalue cutoff for the pseudoinverse; unobserved restriction
/// patterns make the Gram matrix singular and this keeps the solution the
/// deterministic minimum-norm one.
const PINV_CUTOFF: f64 = 1e-10;

/// Largest subset size for the per-subset fits (`2^k` basis functions).
pub const MAX_FIT_SUBSET: usize = 8;

/// Largest basis size for full-dimensional degree-bounded fits.
pub const MAX_FIT_BASIS: usize = 512;

/// A real polynomial in the monomial (character) basis: a finite map
/// `S -> c_S` meaning `p(x) = sum_S c_S chi_S(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePolynomial {
    dim: usize,
    terms: BTreeMap<SubsetMask, f64>,
}

impl SparsePolynomial {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_POINT_DIM {
            return Err(Error::BadDim {
                dim,
                max: MAX_POINT_DIM,
            });
        }
        Ok(SparsePolynomial {
            dim,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        let mut p = SparsePolynomial::zero(dim)?;
        p.set_term(SubsetMask::empty(dim), c)?;
        Ok(p)
    }

    pub fn monomial(s: SubsetMask, c: f64) -> Result<Self> {
        let mut p = SparsePolynomial::zero(s.dim())?;
        p.set_term(s, c)?;
        Ok(p)
    }

    pub fn from_terms<I: IntoIterator<Item = (SubsetMask, f64)>>(
        dim: usize,
        terms: I,
    ) -> Result<Self> {
        let mut p = SparsePolynomial::zero(dim)?;
        for (s, c) in terms {
            check_same_dim(s.dim(), dim)?;
            if c != 0.0 {
                *p.terms.entry(s).or_insert(0.0) += c;
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Max `|S|` with a nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn term(&self, s: SubsetMask) -> f64 {
        debug_assert_eq!(s.dim(), self.dim);
        self.terms.get(&s).copied().unwrap_or(0.0)
    }

    /// Set a coefficient; zero removes the term.
    pub fn set_term(&mut self, s: SubsetMask, c: f64) -> Result<()> {
        check_same_dim(s.dim(), self.dim)?;
        if c == 0.0 {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, c);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (SubsetMask, f64)> + '_ {
        self.terms.iter().map(|(&s, &c)| (s, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Whether every term lies inside `j`.
    pub fn supported_on(&self, j: SubsetMask) -> bool {
        self.terms.keys().all(|s| s.is_subset_of(j))
    }

    /// `p(x) = sum_S c_S chi_S(x)`.
    ///
    /// Panics if dimensions disagree.
    pub fn eval(&self, x: CubePoint) -> f64 {
        assert_eq!(x.dim(), self.dim, "dimension mismatch in eval");
        self.eval_bits(x.bits())
    }

    #[inline]
    pub(crate) fn eval_bits(&self, x_bits: u32) -> f64 {
        self.terms
            .iter()
            .map(|(s, &c)| c * chi_eval_bits(s.bits(), x_bits) as f64)
            .sum()
    }

    /// Interpolate a full value table (index = point bits) into the basis.
    pub fn from_value_table(values: &[f64]) -> Result<Self> {
        Ok(uniform_fourier(values)?.into())
    }

    /// Values on all `2^d` points.
    pub fn value_table(&self) -> Result<Vec<f64>> {
        crate::fourier::inverse_fourier(&self.to_spectrum())
    }

    pub fn to_spectrum(&self) -> Spectrum {
        let mut spec = Spectrum::new(self.dim).expect("valid dim");
        for (s, c) in self.terms() {
            spec.set(s, c).expect("same dim");
        }
        spec
    }
}

impl From<Spectrum> for SparsePolynomial {
    fn from(spec: Spectrum) -> Self {
        let mut p = SparsePolynomial::zero(spec.dim()).expect("valid dim");
        for (s, v) in spec.iter() {
            p.set_term(s, v).expect("same dim");
        }
        p
    }
}

/// A sign-threshold predictor `g(x) = sign(p(x) - theta)` with the frozen
/// convention `sign(0) = +1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    poly: SparsePolynomial,
    theta: f64,
}

impl Predictor {
    pub fn new(poly: SparsePolynomial, theta: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&theta) {
            return Err(Error::Invalid(format!("theta {theta} outside [-1, 1]")));
        }
        Ok(Predictor { poly, theta })
    }

    /// Plain sign predictor (`theta = 0`).
    pub fn sign_of(poly: SparsePolynomial) -> Self {
        Predictor { poly, theta: 0.0 }
    }

    pub fn poly(&self) -> &SparsePolynomial {
        &self.poly
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    /// `sign(p(x) - theta)`, with `sign(0) = +1`.
    pub fn predict(&self, x: CubePoint) -> i8 {
        assert_eq!(x.dim(), self.dim(), "dimension mismatch in predict");
        self.predict_bits(x.bits())
    }

    #[inline]
    pub(crate) fn predict_bits(&self, x_bits: u32) -> i8 {
        if self.poly.eval_bits(x_bits) - self.theta >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// The `+-1` prediction table over all `2^d` points.
    pub fn prediction_table(&self) -> Result<Vec<f64>> {
        if self.dim() > crate::cube::MAX_TABLE_DIM {
            return Err(Error::BadDim {
                dim: self.dim(),
                max: crate::cube::MAX_TABLE_DIM,
            });
        }
        Ok((0..1u32 << self.dim())
            .map(|bits| self.predict_bits(bits) as f64)
            .collect())
    }
}

#[derive(Serialize, Deserialize)]
struct ModelTerm {
    s: u32,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    #[serde(rename = "type")]
    kind: String,
    dim: usize,
    subset: u32,
    terms: Vec<ModelTerm>,
    theta: f64,
}

/// Serialize a trained predictor plus its chosen subset as model JSON:
/// `{"type":"sign-poly","dim":d,"subset":<mask>,"terms":[{"s":..,"c":..}],"theta":..}`.
pub fn model_to_json(predictor: &Predictor, subset: SubsetMask) -> String {
    let terms = predictor
        .poly()
        .terms()
        .map(|(s, c)| ModelTerm { s: s.bits(), c })
        .collect();
    serde_json::to_string_pretty(&ModelFile {
        kind: "sign-poly".into(),
        dim: predictor.dim(),
        subset: subset.bits(),
        terms,
        theta: predictor.theta(),
    })
    .expect("serializable")
}

pub fn model_from_json(s: &str) -> Result<(Predictor, SubsetMask)> {
    let file: ModelFile = serde_json::from_str(s)?;
    if file.kind != "sign-poly" {
        return Err(Error::Invalid(format!(
            "unknown model type `{}`",
            file.kind
        )));
    }
    let subset = SubsetMask::new(file.subset, file.dim)?;
    let poly = SparsePolynomial::from_terms(
        file.dim,
        file.terms
            .iter()
            .map(|t| SubsetMask::new(t.s, file.dim).map(|s| (s, t.c)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok((Predictor::new(poly, file.theta)?, subset))
}

/// The bound polynomial `U(x) = x^3 + (3/2) x^2 + (3/2) x`, defined for
/// `x >= 0`; it controls excess 0-1 loss by conditional-mean approximation
/// error, and satisfies `U(x) <= 4x` on `[0, 1]` with equality at 1.
pub fn u_poly(x: f64) -> f64 {
    debug_assert!(x >= 0.0, "u_poly domain is x >= 0, got {x}");
    x * x * x + 1.5 * x * x + 1.5 * x
}

/// Per-restriction-pattern sample aggregates on a subset `j`: cell weights
/// `w[z]` and label means `m[z] = (1/n) sum_{i: pattern z} y_i`.
fn pattern_aggregates(data: &Dataset, j: SubsetMask) -> (Vec<f64>, Vec<f64>) {
    let cells = 1usize << j.len();
    let mut w = vec![0.0; cells];
    let mut m = vec![0.0; cells];
    let inv_n = 1.0 / data.n() as f64;
    for &(x, y) in data.samples() {
        let z = x.restrict(j) as usize;
        w[z] += inv_n;
        m[z] += y as f64 * inv_n;
    }
    (w, m)
}

/// Turn compact coefficients (indexed by submask of the compact cube on `j`)
/// into a polynomial on the full cube.
fn compact_to_poly(dim: usize, j: SubsetMask, compact: &[f64]) -> Result<SparsePolynomial> {
    let mut p = SparsePolynomial::zero(dim)?;
    for (sigma, &c) in compact.iter().enumerate() {
        if c != 0.0 {
            p.set_term(j.spread(sigma as u32), c)?;
        }
    }
    Ok(p)
}

/// Least-squares fit of the labels by a polynomial on the coordinates of
/// `j`: minimizes `(1/n) sum_i (y_i - p(x_i))^2` over `span{chi_S : S in j}`
/// by solving the `2^|j| x 2^|j|` normal equations; rank-deficient systems
/// (unobserved patterns) resolve to the minimum-norm solution.
pub fn least_squares_fit(data: &Dataset, j: SubsetMask) -> Result<SparsePolynomial> {
    check_same_dim(data.dim(), j.dim())?;
    let k = j.len();
    if k > MAX_FIT_SUBSET {
        return Err(Error::CapExceeded {
            what: "fit subset size",
            got: k,
            cap: MAX_FIT_SUBSET,
        });
    }
    let cells = 1usize << k;
    let (mut w, mut m) = pattern_aggregates(data, j);

    // Gram and right-hand side come from one transform each:
    //   G[sigma][tau] = mean chi_{sigma xor tau} = WHT(w)[sigma ^ tau]
    //   v[sigma]      = mean y chi_sigma        = WHT(m)[sigma]
    walsh_hadamard_in_place(&mut w);
    walsh_hadamard_in_place(&mut m);
    let mut gram = vec![0.0; cells * cells];
    for sigma in 0..cells {
        for tau in 0..cells {
            gram[sigma * cells + tau] = w[sigma ^ tau];
        }
    }
    let coeffs = psd_min_norm_solve(&gram, &m, cells, PINV_CUTOFF);
    compact_to_poly(data.dim(), j, &coeffs)
}

/// Exact minimizer of `||Y - p(X^J)||_{2,D}` over polynomials on `j`: the
/// conditional expectation `E[Y | X^J = z]` written in the `chi_S` basis.
/// Zero-probability patterns get value 0 (they never enter a `D`-weighted
/// norm).
pub fn mmse_projection_exact(dist: &JointDistribution, j: SubsetMask) -> Result<SparsePolynomial> {
    check_same_dim(dist.dim(), j.dim())?;
    let k = j.len();
    let cells = 1usize << k;
    let mut mass = vec![0.0; cells];
    let mut diff = vec![0.0; cells];
    for bits in 0..1u32 << dist.dim() {
        let x = CubePoint::new(bits, dist.dim())?;
        let z = x.restrict(j) as usize;
        mass[z] += dist.x_marginal(bits);
        diff[z] += dist.label_diff(bits);
    }
    let mut values: Vec<f64> = mass
        .iter()
        .zip(&diff)
        .map(|(&den, &num)| if den > 0.0 { num / den } else { 0.0 })
        .collect();
    // interpolate the 2^k value table into compact coefficients
    walsh_hadamard_in_place(&mut values);
    let scale = 1.0 / cells as f64;
    let compact: Vec<f64> = values.iter().map(|v| v * scale).collect();
    compact_to_poly(dist.dim(), j, &compact)
}

/// The degree-limited stochastic-coefficient projection
/// `f^J(x) = sum_{S in J} a_S chi_S(x)`, built from the exact distribution.
pub fn fourier_projection_exact(
    dist: &JointDistribution,
    j: SubsetMask,
) -> Result<SparsePolynomial> {
    check_same_dim(dist.dim(), j.dim())?;
    let wht = crate::fourier::label_diff_wht(dist);
    let scale = 1.0 / (1u64 << dist.dim()) as f64;
    let mut p = SparsePolynomial::zero(dist.dim())?;
    for s in j.subsets() {
        p.set_term(s, wht[s.bits() as usize] * scale)?;
    }
    Ok(p)
}

/// The same projection with empirical coefficients
/// `fhat^J(x) = sum_{S in J} ahat_S chi_S(x)`.
pub fn fourier_projection_empirical(data: &Dataset, j: SubsetMask) -> Result<SparsePolynomial> {
    check_same_dim(data.dim(), j.dim())?;
    let mut p = SparsePolynomial::zero(data.dim())?;
    for s in j.subsets() {
        p.set_term(s, crate::fourier::empirical_coeff(data, s)?)?;
    }
    Ok(p)
}
