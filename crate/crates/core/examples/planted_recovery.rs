//! Recover a planted noisy junta with all three subset learners and watch
//! the exact loss approach the noise floor as the sample size grows.
//!
//! Run: cargo run --release -p juntas --example planted_recovery

use juntas::dist::TruthTable;
use juntas::learners::{self, Algorithm};
use juntas::oracle::{exact_loss, opt_exact};
use juntas::{JointDistribution, RngSeed, SubsetMask};

fn main() -> Result<(), juntas::Error> {
    let dim = 10;
    let k = 3;
    let eta = 0.3;
    let junta = SubsetMask::from_one_based(&[1, 4, 7], dim)?;
    let dist = JointDistribution::planted_junta(
        dim,
        junta,
        &TruthTable::parity(k)?,
        &JointDistribution::uniform_marginal(dim),
        eta,
    )?;
    let (opt, _) = opt_exact(&dist, k)?;

    println!("planted junta {junta} in d = {dim}, parity label, eta = {eta}");
    println!("optimal {k}-junta loss: {opt:.4}");
    println!();
    println!(
        "{:>6}  {:>10}  {:>12}  {:>12}  subset",
        "n", "algorithm", "exact loss", "excess"
    );

    for n in [50usize, 200, 1000] {
        let data = dist.sample(n, RngSeed::new(2024, n as u64))?;
        for alg in [Algorithm::L2, Algorithm::Fourier, Algorithm::Erm] {
            let (predictor, report) = learners::run(alg, &data, k)?;
            let loss = exact_loss(&dist, &predictor)?.zero_one;
            println!(
                "{n:>6}  {:>10}  {loss:>12.4}  {:>12.4}  {}",
                alg.name(),
                loss - opt,
                report.chosen_subset
            );
        }
    }
    Ok(())
}
