//! The five learning procedures. Each consumes a training set and returns a
//! sign predictor plus a [`LearnReport`].
//!
//! Selection ties (subset, truth table, threshold) always break toward the
//! smallest canonical index, so repeated runs are bit-for-bit reproducible.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::cube::{chi_eval_bits, enumerate_subsets, EnumMode, SubsetMask, MAX_TABLE_DIM};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fourier::{empirical_spectrum, walsh_hadamard_in_place};
use crate::linalg::psd_min_norm_solve;
use crate::oracle::{empirical_loss, empirical_square_loss};
use crate::regression::{
    least_squares_fit, Predictor, SparsePolynomial, MAX_FIT_BASIS, MAX_FIT_SUBSET,
};

/// Caps for the exhaustive learner: `2^(2^k) * C(d,k)` truth-table
/// evaluations.
pub const MAX_ERM_K: usize = 4;
pub const MAX_ERM_DIM: usize = 16;

/// The available learning procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    /// Per-subset least-squares regression, sign of the best fit.
    L2,
    /// Empirical Fourier coefficients, subset chosen by 0-1 loss.
    Fourier,
    /// Exhaustive truth-table search (exact empirical minimizer).
    Erm,
    /// One degree-bounded fit on all coordinates plus a threshold scan.
    Threshold,
    /// Sign of the empirical conditional label mean.
    MmseSign,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::L2,
        Algorithm::Fourier,
        Algorithm::Erm,
        Algorithm::Threshold,
        Algorithm::MmseSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::L2 => "l2",
            Algorithm::Fourier => "fourier",
            Algorithm::Erm => "erm",
            Algorithm::Threshold => "threshold",
            Algorithm::MmseSign => "mmse-sign",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(Algorithm::L2),
            "fourier" => Ok(Algorithm::Fourier),
            "erm" => Ok(Algorithm::Erm),
            "threshold" => Ok(Algorithm::Threshold),
            "mmse-sign" => Ok(Algorithm::MmseSign),
            other => Err(Error::Invalid(format!(
                "unknown algorithm `{other}` (expected l2, fourier, erm, threshold, mmse-sign)"
            ))),
        }
    }
}

/// Training summary. `empirical_loss` always equals re-evaluating the
/// returned predictor on the training set.
#[derive(Debug, Clone)]
pub struct LearnReport {
    /// The selected subset; learners that fit all coordinates report the
    /// full mask.
    pub chosen_subset: SubsetMask,
    /// 0-1 loss of the returned predictor on the training set.
    pub empirical_loss: f64,
    /// Mean squared residual of the fitted polynomial (for `erm` the
    /// predictor itself, where it equals four times the 0-1 loss).
    pub empirical_square_loss: f64,
    /// Per-subset selection scores, when the learner scanned subsets:
    /// square losses for `l2`, 0-1 losses for `fourier` and `erm`.
    pub per_subset_losses: Option<BTreeMap<SubsetMask, f64>>,
    /// Wall-clock training time.
    pub seconds: f64,
    /// Non-fatal conditions (e.g. underdetermined fits).
    pub warnings: Vec<String>,
}

/// Dispatch by algorithm name; `k` is ignored by `mmse-sign`.
pub fn run(alg: Algorithm, data: &Dataset, k: usize) -> Result<(Predictor, LearnReport)> {
    match alg {
        Algorithm::L2 => l2_algorithm(data, k),
        Algorithm::Fourier => stochastic_fourier(data, k),
        Algorithm::Erm => erm_bruteforce(data, k),
        Algorithm::Threshold => l2_threshold(data, k),
        Algorithm::MmseSign => sign_mmse(data),
    }
}

/// Subsetwise least-squares: for every `|J| = k` fit the best polynomial on
/// `J`, keep the fit with the smallest empirical square loss, and return its
/// sign. The returned 0-1 loss never exceeds the square loss.
pub fn l2_algorithm(data: &Dataset, k: usize) -> Result<(Predictor, LearnReport)> {
    let start = Instant::now();
    let mut best: Option<(f64, SubsetMask, SparsePolynomial)> = None;
    let mut per_subset = BTreeMap::new();
    for j in enumerate_subsets(data.dim(), k, EnumMode::ExactlyK)? {
        let fit = least_squares_fit(data, j)?;
        let sq = empirical_square_loss(data, &fit)?;
        per_subset.insert(j, sq);
        if best.as_ref().is_none_or(|(b, _, _)| sq < *b) {
            best = Some((sq, j, fit));
        }
    }
    let (square, subset, poly) = best.expect("at least one subset");
    let predictor = Predictor::sign_of(poly);
    let zero_one = empirical_loss(data, &predictor)?.zero_one;
    debug_assert!(zero_one <= square + 1e-12, "0-1 loss above square loss");
    let report = LearnReport {
        chosen_subset: subset,
        empirical_loss: zero_one,
        empirical_square_loss: square,
        per_subset_losses: Some(per_subset),
        seconds: start.elapsed().as_secs_f64(),
        warnings: Vec::new(),
    };
    Ok((predictor, report))
}

/// Fourier learner: estimate every coefficient with `|S| <= k` once, then
/// for each `|J| = k` form `fhat^J` by coefficient lookup and pick the
/// subset whose sign predictor has the least empirical 0-1 loss.
pub fn stochastic_fourier(data: &Dataset, k: usize) -> Result<(Predictor, LearnReport)> {
    let start = Instant::now();
    if k > MAX_FIT_SUBSET {
        return Err(Error::CapExceeded {
            what: "fourier subset size",
            got: k,
            cap: MAX_FIT_SUBSET,
        });
    }
    let spectrum = empirical_spectrum(data, k)?;
    let mut best: Option<(f64, SubsetMask, Predictor)> = None;
    let mut per_subset = BTreeMap::new();
    for j in enumerate_subsets(data.dim(), k, EnumMode::ExactlyK)? {
        let mut poly = SparsePolynomial::zero(data.dim())?;
        for s in j.subsets() {
            poly.set_term(s, spectrum.coeff(s))?;
        }
        let g = Predictor::sign_of(poly);
        let loss = empirical_loss(data, &g)?.zero_one;
        per_subset.insert(j, loss);
        if best.as_ref().is_none_or(|(b, _, _)| loss < *b) {
            best = Some((loss, j, g));
        }
    }
    let (zero_one, subset, predictor) = best.expect("at least one subset");
    let square = empirical_square_loss(data, predictor.poly())?;
    let report = LearnReport {
        chosen_subset: subset,
        empirical_loss: zero_one,
        empirical_square_loss: square,
        per_subset_losses: Some(per_subset),
        seconds: start.elapsed().as_secs_f64(),
        warnings: Vec::new(),
    };
    Ok((predictor, report))
}

/// One least-squares fit over all monomials of degree `<= k` on all `d`
/// coordinates (no subset scan), then an exact scan for the threshold
/// minimizing the empirical 0-1 loss of `sign[p - theta]`.
pub fn l2_threshold(data: &Dataset, k: usize) -> Result<(Predictor, LearnReport)> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let basis = enumerate_subsets(data.dim(), k, EnumMode::UpToK)?;
    let m = basis.len();
    if m > MAX_FIT_BASIS {
        return Err(Error::CapExceeded {
            what: "degree-bounded basis size",
            got: m,
            cap: MAX_FIT_BASIS,
        });
    }
    if m > data.n() {
        warnings.push(format!(
            "underdetermined fit: {m} basis functions for {} samples; using the minimum-norm solution",
            data.n()
        ));
    }

    // normal equations; the Gram entry for (S, T) is the sample mean of
    // chi_{S xor T}, so cache means per distinct symmetric difference
    let inv_n = 1.0 / data.n() as f64;
    let mut mean_cache: HashMap<u32, f64> = HashMap::new();
    let mut chi_mean = |mask: u32| -> f64 {
        *mean_cache.entry(mask).or_insert_with(|| {
            data.samples()
                .iter()
                .map(|&(x, _)| chi_eval_bits(mask, x.bits()) as f64)
                .sum::<f64>()
                * inv_n
        })
    };
    let mut gram = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let v = chi_mean(basis[a].bits() ^ basis[b].bits());
            gram[a * m + b] = v;
            gram[b * m + a] = v;
        }
    }
    let mut rhs = vec![0.0; m];
    for (a, s) in basis.iter().enumerate() {
        rhs[a] = data
            .samples()
            .iter()
            .map(|&(x, y)| (y * chi_eval_bits(s.bits(), x.bits())) as f64)
            .sum::<f64>()
            * inv_n;
    }
    let coeffs = psd_min_norm_solve(&gram, &rhs, m, 1e-10);
    let poly =
        SparsePolynomial::from_terms(data.dim(), basis.iter().zip(&coeffs).map(|(&s, &c)| (s, c)))?;

    // Exact threshold scan: the empirical loss is piecewise constant in
    // theta with breakpoints at the fitted values, so the midpoints of the
    // sorted distinct clipped values plus the endpoints +-1 realize every
    // achievable loss on [-1, 1].
    let values: Vec<f64> = data.samples().iter().map(|&(x, _)| poly.eval(x)).collect();
    let mut clipped: Vec<f64> = values.iter().map(|v| v.clamp(-1.0, 1.0)).collect();
    clipped.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    clipped.dedup();
    let mut candidates = Vec::with_capacity(clipped.len() + 1);
    candidates.push(-1.0);
    for w in clipped.windows(2) {
        candidates.push((w[0] + w[1]) / 2.0);
    }
    candidates.push(1.0);
    candidates.dedup();

    let mut best_theta = candidates[0];
    let mut best_wrong = u64::MAX;
    for &theta in &candidates {
        let wrong = data
            .samples()
            .iter()
            .zip(&values)
            .filter(|(&(_, y), &v)| {
                let pred: i8 = if v - theta >= 0.0 { 1 } else { -1 };
                pred != y
            })
            .count() as u64;
        if wrong < best_wrong {
            best_wrong = wrong;
            best_theta = theta;
        }
    }

    let square = empirical_square_loss(data, &poly)?;
    let predictor = Predictor::new(poly, best_theta)?;
    let zero_one = empirical_loss(data, &predictor)?.zero_one;
    debug_assert!(
        zero_one <= 0.5 * square + 1e-12,
        "threshold scan above the square-loss bound"
    );
    let report = LearnReport {
        chosen_subset: SubsetMask::full(data.dim()),
        empirical_loss: zero_one,
        empirical_square_loss: square,
        per_subset_losses: None,
        seconds: start.elapsed().as_secs_f64(),
        warnings,
    };
    Ok((predictor, report))
}

/// Exhaustive empirical risk minimization: every truth table on every
/// `k`-subset, smallest `(subset mask, table index)` on ties. Exact but
/// doubly exponential in `k`, hence the caps.
pub fn erm_bruteforce(data: &Dataset, k: usize) -> Result<(Predictor, LearnReport)> {
    let start = Instant::now();
    if k > MAX_ERM_K {
        return Err(Error::CapExceeded {
            what: "erm subset size",
            got: k,
            cap: MAX_ERM_K,
        });
    }
    if data.dim() > MAX_ERM_DIM {
        return Err(Error::CapExceeded {
            what: "erm dimension",
            got: data.dim(),
            cap: MAX_ERM_DIM,
        });
    }
    let cells = 1usize << k;
    let mut best: Option<(u64, SubsetMask, u64)> = None;
    let mut per_subset = BTreeMap::new();
    for j in enumerate_subsets(data.dim(), k, EnumMode::ExactlyK)? {
        let mut plus = vec![0u64; cells];
        let mut minus = vec![0u64; cells];
        for &(x, y) in data.samples() {
            let z = x.restrict(j) as usize;
            if y == 1 {
                plus[z] += 1;
            } else {
                minus[z] += 1;
            }
        }
        let mut subset_best = u64::MAX;
        // bit z of the table set means the junta outputs -1 on pattern z
        for table in 0..1u64 << cells {
            let mut wrong = 0u64;
            for z in 0..cells {
                wrong += if table >> z & 1 == 1 {
                    plus[z]
                } else {
                    minus[z]
                };
            }
            if wrong < subset_best {
                subset_best = wrong;
            }
            if best.as_ref().is_none_or(|(b, _, _)| wrong < *b) {
                best = Some((wrong, j, table));
            }
        }
        per_subset.insert(j, subset_best as f64 / data.n() as f64);
    }
    let (_, subset, table) = best.expect("at least one table");

    // interpolate the +-1 table into the character basis on the subset; the
    // coefficients are exact dyadic rationals, so the sign is unambiguous
    let mut vals: Vec<f64> = (0..cells)
        .map(|z| if table >> z & 1 == 1 { -1.0 } else { 1.0 })
        .collect();
    walsh_hadamard_in_place(&mut vals);
    let mut poly = SparsePolynomial::zero(data.dim())?;
    for (sigma, &v) in vals.iter().enumerate() {
        poly.set_term(subset.spread(sigma as u32), v / cells as f64)?;
    }
    let predictor = Predictor::sign_of(poly);
    let loss = empirical_loss(data, &predictor)?;
    let report = LearnReport {
        chosen_subset: subset,
        empirical_loss: loss.zero_one,
        empirical_square_loss: loss.square,
        per_subset_losses: Some(per_subset),
        seconds: start.elapsed().as_secs_f64(),
        warnings: Vec::new(),
    };
    Ok((predictor, report))
}

/// Sign of the empirical conditional mean: predict the majority label of
/// each observed point (`+1` on unseen points). The polynomial form is the
/// full-degree interpolation of the mean table, and the empirical loss
/// equals the empirical optimum over all Boolean functions.
pub fn sign_mmse(data: &Dataset) -> Result<(Predictor, LearnReport)> {
    let start = Instant::now();
    let d = data.dim();
    if d > MAX_TABLE_DIM {
        return Err(Error::BadDim {
            dim: d,
            max: MAX_TABLE_DIM,
        });
    }
    let mut count = vec![0.0f64; 1 << d];
    let mut sum = vec![0.0f64; 1 << d];
    for &(x, y) in data.samples() {
        count[x.bits() as usize] += 1.0;
        sum[x.bits() as usize] += y as f64;
    }
    let table: Vec<f64> = count
        .iter()
        .zip(&sum)
        .map(|(&c, &s)| if c > 0.0 { s / c } else { 0.0 })
        .collect();
    let poly = SparsePolynomial::from_value_table(&table)?;
    let square = empirical_square_loss(data, &poly)?;
    let predictor = Predictor::sign_of(poly);
    let loss = empirical_loss(data, &predictor)?;
    let report = LearnReport {
        chosen_subset: SubsetMask::full(d),
        empirical_loss: loss.zero_one,
        empirical_square_loss: square,
        per_subset_losses: None,
        seconds: start.elapsed().as_secs_f64(),
        warnings: Vec::new(),
    };
    Ok((predictor, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{chi_eval, CubePoint};
    use crate::dist::{JointDistribution, TruthTable};
    use crate::oracle::{exact_loss, opt_exact, threshold_expectation};
    use crate::rng::{CounterRng, RngSeed};

    fn planted(dim: usize, junta: &[usize], eta: f64) -> (JointDistribution, SubsetMask) {
        let j = SubsetMask::from_one_based(junta, dim).unwrap();
        let d = JointDistribution::planted_junta(
            dim,
            j,
            &TruthTable::parity(j.len()).unwrap(),
            &JointDistribution::uniform_marginal(dim),
            eta,
        )
        .unwrap();
        (d, j)
    }

    fn random_distribution(dim: usize, rng: &mut CounterRng) -> JointDistribution {
        let weights = (0..1usize << (dim + 1)).map(|_| rng.next_exp()).collect();
        JointDistribution::from_weights(dim, weights).unwrap()
    }

    #[test]
    fn l2_realizable_planted_junta() {
        let (dist, j) = planted(6, &[2, 5], 0.0);
        let data = dist.sample(500, RngSeed::new(0xC0, 0)).unwrap();
        let (g, report) = l2_algorithm(&data, 2).unwrap();
        assert_eq!(report.chosen_subset, j);
        assert_eq!(report.empirical_loss, 0.0);
        assert_eq!(exact_loss(&dist, &g).unwrap().zero_one, 0.0);
    }

    #[test]
    fn l2_with_k_equal_d_matches_mmse_sign_rule() {
        let mut rng = CounterRng::new(RngSeed::new(0xC1, 0));
        let dist = random_distribution(4, &mut rng);
        let data = dist.sample(80, RngSeed::new(0xC2, 0)).unwrap();
        let (g, report) = l2_algorithm(&data, 4).unwrap();
        assert_eq!(report.chosen_subset, SubsetMask::full(4));
        // on observed points with a clear majority, the fit reproduces the
        // conditional mean, so the signs agree with the mmse rule
        let (m, _) = sign_mmse(&data).unwrap();
        let mut count = [0.0f64; 16];
        let mut sum = [0.0f64; 16];
        for &(x, y) in data.samples() {
            count[x.bits() as usize] += 1.0;
            sum[x.bits() as usize] += y as f64;
        }
        for bits in 0..16u32 {
            if count[bits as usize] > 0.0 {
                let mean: f64 = sum[bits as usize] / count[bits as usize];
                if mean.abs() > 1e-9 {
                    let x = CubePoint::new(bits, 4).unwrap();
                    assert_eq!(g.predict(x), m.predict(x));
                    assert_eq!(g.predict(x) as f64, mean.signum());
                }
            }
        }
    }

    #[test]
    fn l2_degree_zero_predicts_majority_label() {
        let x0 = CubePoint::new(0, 3).unwrap();
        let x1 = CubePoint::new(5, 3).unwrap();
        let data = Dataset::new(3, vec![(x0, 1), (x1, 1), (x0, -1)]).unwrap();
        let (g, report) = l2_algorithm(&data, 0).unwrap();
        assert!(report.chosen_subset.is_empty());
        for bits in 0..8 {
            assert_eq!(g.predict_bits(bits), 1);
        }
        assert!((report.empirical_loss - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fourier_realizable_uniform_parity() {
        let (dist, j) = planted(8, &[1, 6], 0.0);
        let data = dist.sample(2000, RngSeed::new(0xC3, 0)).unwrap();
        let (g, report) = stochastic_fourier(&data, 2).unwrap();
        assert_eq!(report.chosen_subset, j);
        assert_eq!(report.empirical_loss, 0.0);
        assert_eq!(exact_loss(&dist, &g).unwrap().zero_one, 0.0);
    }

    #[test]
    fn fourier_and_l2_choose_the_same_subset_on_clear_margins() {
        let (dist, j) = planted(8, &[3, 7], 0.0);
        let mut agreements = 0;
        for seed in 0..50u64 {
            let data = dist.sample(2000, RngSeed::new(0xC4, seed)).unwrap();
            let (_, l2r) = l2_algorithm(&data, 2).unwrap();
            let (_, fr) = stochastic_fourier(&data, 2).unwrap();
            let margin_ok = |losses: &BTreeMap<SubsetMask, f64>, chosen: SubsetMask| {
                let best = losses[&chosen];
                losses
                    .iter()
                    .filter(|(&s, _)| s != chosen)
                    .all(|(_, &v)| v > best + 1e-9)
            };
            let non_degenerate =
                margin_ok(l2r.per_subset_losses.as_ref().unwrap(), l2r.chosen_subset)
                    && margin_ok(fr.per_subset_losses.as_ref().unwrap(), fr.chosen_subset);
            if non_degenerate {
                assert_eq!(l2r.chosen_subset, fr.chosen_subset, "seed {seed}");
                assert_eq!(l2r.chosen_subset, j);
                agreements += 1;
            }
        }
        assert!(agreements >= 45, "only {agreements}/50 non-degenerate runs");
    }

    #[test]
    fn fourier_on_fair_coin_has_half_exact_loss() {
        let dist = JointDistribution::uniform_x_fair_label(5).unwrap();
        let data = dist.sample(400, RngSeed::new(0xC5, 0)).unwrap();
        let (g, _) = stochastic_fourier(&data, 1).unwrap();
        // every +-1 predictor has exact loss exactly 1/2 under a fair
        // independent label
        assert_eq!(exact_loss(&dist, &g).unwrap().zero_one, 0.5);
    }

    #[test]
    fn threshold_realizable_monotone_junta() {
        // y = x_1: degree-1 fit recovers it and theta = 0 gives zero loss
        let dim = 4;
        let data = {
            let samples = (0..16u32)
                .map(|bits| {
                    let x = CubePoint::new(bits, dim).unwrap();
                    (x, x.coord(0))
                })
                .collect();
            Dataset::new(dim, samples).unwrap()
        };
        let (g, report) = l2_threshold(&data, 1).unwrap();
        assert_eq!(report.empirical_loss, 0.0);
        for &(x, y) in data.samples() {
            assert_eq!(g.predict(x), y);
        }
    }

    #[test]
    fn threshold_scan_beats_analytic_expectation() {
        let mut rng = CounterRng::new(RngSeed::new(0xC6, 0));
        for trial in 0..20 {
            let dist = random_distribution(5, &mut rng);
            let data = dist.sample(100, RngSeed::new(0xC7, trial)).unwrap();
            let (g, report) = l2_threshold(&data, 2).unwrap();
            let t = threshold_expectation(&data, g.poly()).unwrap();
            // minimum over thresholds <= mean over random threshold
            assert!(report.empirical_loss <= t.expected_loss + 1e-12);
            assert!(report.empirical_loss <= 0.5 * report.empirical_square_loss + 1e-12);
        }
    }

    #[test]
    fn threshold_chaining_on_many_random_datasets() {
        let mut rng = CounterRng::new(RngSeed::new(0xC8, 0));
        for trial in 0..100 {
            let dist = random_distribution(6, &mut rng);
            let data = dist.sample(60, RngSeed::new(0xC9, trial)).unwrap();
            let (_, report) = l2_threshold(&data, 2).unwrap();
            assert!(
                report.empirical_loss <= 0.5 * report.empirical_square_loss + 1e-12,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn erm_is_the_empirical_minimum() {
        let mut rng = CounterRng::new(RngSeed::new(0xCA, 0));
        for trial in 0..25 {
            let dist = random_distribution(6, &mut rng);
            let data = dist.sample(150, RngSeed::new(0xCB, trial)).unwrap();
            let k = 1 + (trial as usize % 2);
            let (_, erm) = erm_bruteforce(&data, k).unwrap();
            let (_, l2) = l2_algorithm(&data, k).unwrap();
            let (_, four) = stochastic_fourier(&data, k).unwrap();
            assert!(
                erm.empirical_loss <= l2.empirical_loss + 1e-15,
                "trial {trial}"
            );
            assert!(
                erm.empirical_loss <= four.empirical_loss + 1e-15,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn erm_realizable_is_zero() {
        let (dist, j) = planted(7, &[1, 4], 0.0);
        let data = dist.sample(300, RngSeed::new(0xCC, 0)).unwrap();
        let (g, report) = erm_bruteforce(&data, 2).unwrap();
        assert_eq!(report.empirical_loss, 0.0);
        assert_eq!(report.chosen_subset, j);
        for &(x, y) in data.samples() {
            assert_eq!(g.predict(x), y);
        }
    }

    #[test]
    fn erm_on_full_support_matches_opt_exact() {
        let mut rng = CounterRng::new(RngSeed::new(0xCD, 0));
        for trial in 0..10u64 {
            let dim = 4 + (trial as usize % 3);
            let dist = random_distribution(dim, &mut rng);
            // enumerate the distribution itself as a weighted dataset by
            // sampling heavily so every cell is observed
            let data = dist.sample(4000, RngSeed::new(0xCE, trial)).unwrap();
            let emp = data.empirical_distribution().unwrap();
            for k in [1usize, 2] {
                let (_, report) = erm_bruteforce(&data, k).unwrap();
                let (opt, _) = opt_exact(&emp, k).unwrap();
                assert!(
                    (report.empirical_loss - opt).abs() < 1e-12,
                    "trial {trial} k {k}: erm {} vs opt {opt}",
                    report.empirical_loss
                );
            }
        }
    }

    #[test]
    fn erm_caps_enforced() {
        let dist = JointDistribution::uniform_x_fair_label(4).unwrap();
        let data = dist.sample(10, RngSeed::new(0xCF, 0)).unwrap();
        assert!(erm_bruteforce(&data, 5).is_err());

        let wide = Dataset::new(
            17,
            vec![(CubePoint::new(0, 17).unwrap(), 1), (CubePoint::new(1, 17).unwrap(), -1)],
        )
        .unwrap();
        assert!(erm_bruteforce(&wide, 1).is_err());
    }

    #[test]
    fn threshold_basis_cap_and_underdetermined_warning() {
        // sum_{l<=3} C(20,l) = 1351 > 512: rejected
        let wide = Dataset::new(
            20,
            vec![(CubePoint::new(0, 20).unwrap(), 1), (CubePoint::new(1, 20).unwrap(), -1)],
        )
        .unwrap();
        assert!(l2_threshold(&wide, 3).is_err());

        // 22 basis functions for 10 samples: fits, but warns
        let dist = JointDistribution::uniform_x_fair_label(6).unwrap();
        let data = dist.sample(10, RngSeed::new(0xD7, 0)).unwrap();
        let (_, report) = l2_threshold(&data, 2).unwrap();
        assert!(!report.warnings.is_empty());
        assert!(report.warnings[0].contains("underdetermined"));
    }

    #[test]
    fn sign_mmse_achieves_empirical_bayes_optimum() {
        let mut rng = CounterRng::new(RngSeed::new(0xD0, 0));
        for trial in 0..15u64 {
            let dim = 3 + (trial as usize % 3);
            let dist = random_distribution(dim, &mut rng);
            let data = dist.sample(90, RngSeed::new(0xD1, trial)).unwrap();
            let (_, report) = sign_mmse(&data).unwrap();
            let emp = data.empirical_distribution().unwrap();
            let bayes: f64 = 0.5
                - 0.5
                    * (0..1u32 << dim)
                        .map(|b| emp.label_diff(b).abs())
                        .sum::<f64>();
            assert!(
                (report.empirical_loss - bayes).abs() < 1e-12,
                "trial {trial}: {} vs {bayes}",
                report.empirical_loss
            );
        }
    }

    #[test]
    fn sign_mmse_constant_dataset() {
        let x = CubePoint::new(0b10, 2).unwrap();
        let data = Dataset::new(2, vec![(x, 1); 7]).unwrap();
        let (g, report) = sign_mmse(&data).unwrap();
        assert_eq!(g.predict(x), 1);
        assert_eq!(report.empirical_loss, 0.0);
    }

    #[test]
    fn sign_mmse_agrees_with_bayes_rule_at_scale() {
        let (dist, j) = planted(6, &[1, 3, 6], 0.2);
        let data = dist.sample(100_000, RngSeed::new(0xD2, 0)).unwrap();
        let (g, _) = sign_mmse(&data).unwrap();
        // the Bayes rule is the planted parity; with ~1500 samples per point
        // every conditional mean has the right sign
        for bits in 0..64u32 {
            let x = CubePoint::new(bits, 6).unwrap();
            assert_eq!(g.predict(x), chi_eval(j, x).unwrap(), "x = {bits}");
        }
    }

    #[test]
    fn reports_are_self_consistent_and_deterministic() {
        let mut rng = CounterRng::new(RngSeed::new(0xD3, 0));
        let dist = random_distribution(5, &mut rng);
        let data = dist.sample(120, RngSeed::new(0xD4, 0)).unwrap();
        for alg in Algorithm::ALL {
            let k = 2;
            let (g1, r1) = run(alg, &data, k).unwrap();
            let (g2, r2) = run(alg, &data, k).unwrap();
            assert_eq!(g1, g2, "{alg} predictor not deterministic");
            assert_eq!(r1.chosen_subset, r2.chosen_subset);
            assert_eq!(r1.empirical_loss, r2.empirical_loss);
            // report matches re-evaluation
            let re = empirical_loss(&data, &g1).unwrap().zero_one;
            assert!(
                (r1.empirical_loss - re).abs() < 1e-12,
                "{alg} report {} vs re-eval {re}",
                r1.empirical_loss
            );
        }
    }

    #[test]
    fn algorithm_names_roundtrip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert!("nope".parse::<Algorithm>().is_err());
    }
}
