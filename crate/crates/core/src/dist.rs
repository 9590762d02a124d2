//! Explicit joint distributions on `{-1,+1}^d x {-1,+1}`.
//!
//! The exact oracles need the full probability table, so distributions are
//! stored densely: `2^(d+1)` entries indexed by `(point_bits << 1) | label`,
//! with label index 0 for `y = +1` and 1 for `y = -1`.

use serde::{Deserialize, Serialize};

use crate::cube::{check_same_dim, CubePoint, SubsetMask, MAX_TABLE_DIM};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{CounterRng, RngSeed};

const SUM_TOL: f64 = 1e-12;

/// Truth table of a Boolean function on `k` inputs. Entry `z` is the output
/// (`+1`/`-1`) on the restriction pattern `z` (same bit-means-minus-one
/// convention as [`CubePoint`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    arity: usize,
    values: Vec<i8>,
}

impl TruthTable {
    pub fn new(arity: usize, values: Vec<i8>) -> Result<Self> {
        if arity > 16 {
            return Err(Error::CapExceeded {
                what: "truth table arity",
                got: arity,
                cap: 16,
            });
        }
        if values.len() != 1 << arity {
            return Err(Error::Invalid(format!(
                "truth table needs {} entries, got {}",
                1 << arity,
                values.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::BadLabel(v as i32));
        }
        Ok(TruthTable { arity, values })
    }

    /// Table as a packed integer: bit `z` set means output `-1` on pattern
    /// `z`. Requires `arity <= 6`.
    pub fn from_bits(arity: usize, bits: u64) -> Result<Self> {
        if arity > 6 {
            return Err(Error::CapExceeded {
                what: "packed truth table arity",
                got: arity,
                cap: 6,
            });
        }
        let values = (0..1u64 << arity)
            .map(|z| if bits >> z & 1 == 0 { 1 } else { -1 })
            .collect();
        TruthTable::new(arity, values)
    }

    /// Parity of all `k` inputs: `+1` iff an even number of them are `-1`.
    pub fn parity(arity: usize) -> Result<Self> {
        let values = (0..1u32 << arity)
            .map(|z| if z.count_ones() & 1 == 0 { 1 } else { -1 })
            .collect();
        TruthTable::new(arity, values)
    }

    /// Majority vote; requires odd arity so there are no ties.
    pub fn majority(arity: usize) -> Result<Self> {
        if arity.is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "majority needs odd arity, got {arity}"
            )));
        }
        let values = (0..1u32 << arity)
            .map(|z| {
                if (z.count_ones() as usize) < arity.div_ceil(2) {
                    1
                } else {
                    -1
                }
            })
            .collect();
        TruthTable::new(arity, values)
    }

    /// Uniformly random table.
    pub fn random(arity: usize, rng: &mut CounterRng) -> Result<Self> {
        let values = (0..1usize << arity).map(|_| rng.next_sign()).collect();
        TruthTable::new(arity, values)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn value(&self, pattern: u32) -> i8 {
        self.values[pattern as usize]
    }
}

#[derive(Serialize, Deserialize)]
struct DistEntry {
    x: u32,
    y: i8,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct DistFile {
    dim: usize,
    table: Vec<DistEntry>,
}

/// A probability table on `{-1,+1}^d x {-1,+1}`: the "unknown" joint
/// distribution of features and label, made concrete so exact losses,
/// projections and optima can be summed directly.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    dim: usize,
    table: Vec<f64>,
}

impl JointDistribution {
    /// Validates: `1 <= d <= 20`, length `2^(d+1)`, entries nonnegative,
    /// total mass 1 within 1e-12.
    pub fn new(dim: usize, table: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > MAX_TABLE_DIM {
            return Err(Error::BadDim {
                dim,
                max: MAX_TABLE_DIM,
            });
        }
        if table.len() != 1 << (dim + 1) {
            return Err(Error::BadDistribution(format!(
                "table length {} != 2^{}",
                table.len(),
                dim + 1
            )));
        }
        if let Some((i, &p)) = table
            .iter()
            .enumerate()
            .find(|(_, &p)| !p.is_finite() || p < 0.0)
        {
            return Err(Error::BadDistribution(format!(
                "entry {i} is {p}, expected a nonnegative finite probability"
            )));
        }
        let sum: f64 = table.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::BadDistribution(format!(
                "entries sum to {sum}, expected 1 within {SUM_TOL}"
            )));
        }
        Ok(JointDistribution { dim, table })
    }

    /// Normalize arbitrary nonnegative weights into a distribution.
    pub fn from_weights(dim: usize, weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() || sum <= 0.0 {
            return Err(Error::BadDistribution(
                "weights must have positive total mass".into(),
            ));
        }
        let table = weights.into_iter().map(|w| w / sum).collect();
        JointDistribution::new(dim, table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(x_bits: u32, y: i8) -> usize {
        ((x_bits as usize) << 1) | usize::from(y == -1)
    }

    /// `P(X = x, Y = y)`.
    pub fn prob(&self, x: CubePoint, y: i8) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        self.table[Self::index(x.bits(), y)]
    }

    pub(crate) fn prob_bits(&self, x_bits: u32, y: i8) -> f64 {
        self.table[Self::index(x_bits, y)]
    }

    /// `P(X = x)`.
    pub fn x_marginal(&self, x_bits: u32) -> f64 {
        self.table[Self::index(x_bits, 1)] + self.table[Self::index(x_bits, -1)]
    }

    /// `P(X = x, Y = +1) - P(X = x, Y = -1)`; the unnormalized conditional
    /// label mean.
    pub fn label_diff(&self, x_bits: u32) -> f64 {
        self.table[Self::index(x_bits, 1)] - self.table[Self::index(x_bits, -1)]
    }

    /// `E[Y | X = x]`, or 0 when `P(X = x) = 0`.
    pub fn cond_mean(&self, x_bits: u32) -> f64 {
        let mass = self.x_marginal(x_bits);
        if mass > 0.0 {
            self.label_diff(x_bits) / mass
        } else {
            0.0
        }
    }

    /// Uniform on points, label an independent fair coin: the "nothing to
    /// learn" distribution with optimal loss 1/2 for every class.
    pub fn uniform_x_fair_label(dim: usize) -> Result<Self> {
        let n = 1usize << (dim + 1);
        JointDistribution::new(dim, vec![1.0 / n as f64; n])
    }

    /// All mass on a single `(x, y)`.
    pub fn point_mass(x: CubePoint, y: i8) -> Result<Self> {
        if y != 1 && y != -1 {
            return Err(Error::BadLabel(y as i32));
        }
        let mut table = vec![0.0; 1 << (x.dim() + 1)];
        table[Self::index(x.bits(), y)] = 1.0;
        JointDistribution::new(x.dim(), table)
    }

    /// The uniform marginal on points, for [`JointDistribution::planted_junta`].
    pub fn uniform_marginal(dim: usize) -> Vec<f64> {
        vec![1.0 / (1u64 << dim) as f64; 1 << dim]
    }

    /// Planted junta: the label is `f(x^J)` flipped independently with
    /// probability `eta`, i.e. `D(x, y) = marginal(x) * ((1-eta) if
    /// y = f(x^J) else eta)`. With `eta = 0` the label is a deterministic
    /// `|J|`-junta; the optimal loss of the class equals `eta`.
    pub fn planted_junta(
        dim: usize,
        junta: SubsetMask,
        truth: &TruthTable,
        marginal: &[f64],
        eta: f64,
    ) -> Result<Self> {
        check_same_dim(junta.dim(), dim)?;
        if truth.arity() != junta.len() {
            return Err(Error::Invalid(format!(
                "truth table arity {} != |J| = {}",
                truth.arity(),
                junta.len()
            )));
        }
        if !(0.0..0.5).contains(&eta) {
            return Err(Error::BadNoiseRate(eta));
        }
        if marginal.len() != 1 << dim {
            return Err(Error::BadDistribution(format!(
                "marginal length {} != 2^{dim}",
                marginal.len()
            )));
        }
        let mut table = vec![0.0; 1 << (dim + 1)];
        for x_bits in 0..1u32 << dim {
            let x = CubePoint::new(x_bits, dim)?;
            let f = truth.value(x.restrict(junta));
            let m = marginal[x_bits as usize];
            table[Self::index(x_bits, f)] = m * (1.0 - eta);
            table[Self::index(x_bits, -f)] = m * eta;
        }
        JointDistribution::new(dim, table)
    }

    /// `n` i.i.d. draws by inverse CDF over the precomputed cumulative
    /// table; O(log) per draw and deterministic given the seed.
    pub fn sample(&self, n: usize, seed: RngSeed) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        let mut cum = Vec::with_capacity(self.table.len());
        let mut acc = 0.0;
        for &p in &self.table {
            acc += p;
            cum.push(acc);
        }
        let last_nonzero = self
            .table
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("a distribution has positive mass");
        let mut rng = CounterRng::new(seed);
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_f64();
            let idx = cum.partition_point(|&c| c <= u).min(last_nonzero);
            let x_bits = (idx >> 1) as u32;
            let y = if idx & 1 == 0 { 1 } else { -1 };
            samples.push((CubePoint::new(x_bits, self.dim)?, y));
        }
        Dataset::new(self.dim, samples)
    }

    /// Total-variation distance to another distribution on the same cube.
    pub fn total_variation(&self, other: &JointDistribution) -> Result<f64> {
        check_same_dim(self.dim, other.dim)?;
        let sum: f64 = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(&p, &q)| (p - q).abs())
            .sum();
        Ok(sum / 2.0)
    }

    /// JSON with one entry per nonzero cell: `{"dim": d, "table": [{"x":
    /// <mask>, "y": 1|-1, "p": <prob>}, ...]}`. Omitted cells are zero.
    pub fn to_json(&self) -> String {
        let mut entries = Vec::new();
        for x_bits in 0..1u32 << self.dim {
            for y in [1i8, -1] {
                let p = self.prob_bits(x_bits, y);
                if p != 0.0 {
                    entries.push(DistEntry { x: x_bits, y, p });
                }
            }
        }
        serde_json::to_string_pretty(&DistFile {
            dim: self.dim,
            table: entries,
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: DistFile = serde_json::from_str(s)?;
        if file.dim == 0 || file.dim > MAX_TABLE_DIM {
            return Err(Error::BadDim {
                dim: file.dim,
                max: MAX_TABLE_DIM,
            });
        }
        let mut table = vec![0.0; 1 << (file.dim + 1)];
        for e in &file.table {
            if e.y != 1 && e.y != -1 {
                return Err(Error::BadLabel(e.y as i32));
            }
            if e.x >> file.dim != 0 {
                return Err(Error::BadDistribution(format!(
                    "point mask {} outside dimension {}",
                    e.x, file.dim
                )));
            }
            table[Self::index(e.x, e.y)] += e.p;
        }
        JointDistribution::new(file.dim, table)
    }
}
