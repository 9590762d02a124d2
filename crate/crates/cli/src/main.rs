//! `juntas` — train, evaluate and verify k-junta learners on explicit
//! Boolean-cube distributions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

mod experiment;

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use juntas::learners::{self, Algorithm};
use juntas::oracle::{empirical_loss, exact_loss, opt_exact, LossReport};
use juntas::regression::{model_from_json, model_to_json};
use juntas::rng::{CounterRng, RngSeed};
use juntas::verify;
use juntas::{Dataset, JointDistribution, SubsetMask, TruthTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "juntas",
    about = "Agnostic k-junta learners with exact oracles on the Boolean cube",
    version
)]
struct Cli {
    /// Base seed for every randomized step (verify defaults to its own
    /// fixed seed when this is not given).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path; each command has a default.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format for stdout reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a joint-distribution JSON file and print its optimal junta loss.
    GenDist(GenDistArgs),
    /// Draw an i.i.d. dataset CSV from a distribution JSON.
    Sample(SampleArgs),
    /// Train a predictor on a dataset CSV and write its model JSON.
    Learn(LearnArgs),
    /// Evaluate a model file on a dataset (empirical) and/or a distribution (exact).
    Eval(EvalArgs),
    /// Run an (algorithm x n x seed) grid from a TOML config into a results CSV.
    Experiment(ExperimentArgs),
    /// Run the identity/inequality/recovery verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenDistArgs {
    /// Cube dimension d.
    #[arg(long)]
    d: Option<usize>,
    /// Planted junta coordinates, 1-based, e.g. `1,4,7`.
    #[arg(long, value_delimiter = ',')]
    junta: Vec<usize>,
    /// Junta truth table: `parity`, `majority`, `random`, or a 0/1 string
    /// with one char per restriction pattern (`1` = output -1).
    #[arg(long, default_value = "parity")]
    table: String,
    /// Label flip probability in [0, 0.5).
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Point marginal: `uniform` or `random`.
    #[arg(long, default_value = "uniform")]
    marginal: String,
    /// Uniform points with an independent fair-coin label (no junta).
    #[arg(long)]
    uniform_label: bool,
    /// Re-emit an existing distribution JSON after validation.
    #[arg(long)]
    from_table: Option<PathBuf>,
    /// Junta size to report the optimal loss for (default: the planted size).
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct SampleArgs {
    /// Distribution JSON path.
    #[arg(long)]
    dist: PathBuf,
    /// Number of samples.
    #[arg(long)]
    n: usize,
    /// Stream id (trials use distinct streams under one seed).
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

#[derive(Args)]
struct LearnArgs {
    /// Algorithm: l2, fourier, erm, threshold, mmse-sign.
    #[arg(long)]
    alg: String,
    /// Junta size / degree bound (ignored by mmse-sign).
    #[arg(long)]
    k: Option<usize>,
    /// Training CSV path.
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Model JSON path.
    #[arg(long)]
    model: PathBuf,
    /// Dataset CSV for the empirical loss.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Distribution JSON for the exact loss.
    #[arg(long)]
    dist: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment TOML config path.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the named checks (repeatable); default runs all.
    #[arg(long = "check")]
    checks: Vec<String>,
    /// Trial-count override for the per-trial suites.
    #[arg(long)]
    trials: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let seed = cli.seed;
    let out = cli.out;
    let format = cli.format;
    match cli.cmd {
        Cmd::GenDist(args) => cmd_gen_dist(args, seed.unwrap_or(0), out, format),
        Cmd::Sample(args) => cmd_sample(args, seed.unwrap_or(0), out),
        Cmd::Learn(args) => cmd_learn(args, out, format),
        Cmd::Eval(args) => cmd_eval(args, format),
        Cmd::Experiment(args) => experiment::cmd_experiment(args.config, seed.unwrap_or(0), out),
        Cmd::Verify(args) => cmd_verify(args, seed.unwrap_or(verify::DEFAULT_SEED), format),
    }
}

fn parse_truth_table(spec: &str, arity: usize, rng: &mut CounterRng) -> Result<TruthTable> {
    match spec {
        "parity" => Ok(TruthTable::parity(arity)?),
        "majority" => Ok(TruthTable::majority(arity)?),
        "random" => Ok(TruthTable::random(arity, rng)?),
        bits if bits.chars().all(|c| c == '0' || c == '1') => {
            if bits.len() != 1 << arity {
                bail!(
                    "truth-table string needs {} chars for arity {arity}, got {}",
                    1usize << arity,
                    bits.len()
                );
            }
            let values = bits
                .chars()
                .map(|c| if c == '0' { 1i8 } else { -1 })
                .collect();
            Ok(TruthTable::new(arity, values)?)
        }
        other => bail!("unknown truth table `{other}` (parity, majority, random, or a 0/1 string)"),
    }
}

fn build_marginal(spec: &str, dim: usize, rng: &mut CounterRng) -> Result<Vec<f64>> {
    match spec {
        "uniform" => Ok(JointDistribution::uniform_marginal(dim)),
        "random" => {
            let weights: Vec<f64> = (0..1usize << dim).map(|_| rng.next_exp()).collect();
            let total: f64 = weights.iter().sum();
            Ok(weights.into_iter().map(|w| w / total).collect())
        }
        other => bail!("unknown marginal `{other}` (uniform or random)"),
    }
}

/// Build a planted-junta distribution from CLI-style pieces; shared with
/// the experiment runner.
pub(crate) fn build_planted(
    dim: usize,
    junta_one_based: &[usize],
    table: &str,
    marginal: &str,
    eta: f64,
    seed: u64,
) -> Result<JointDistribution> {
    let junta = SubsetMask::from_one_based(junta_one_based, dim)?;
    let mut rng = CounterRng::new(RngSeed::new(seed, 0x0061_7267));
    let truth = parse_truth_table(table, junta.len(), &mut rng)?;
    let marginal = build_marginal(marginal, dim, &mut rng)?;
    Ok(JointDistribution::planted_junta(
        dim, junta, &truth, &marginal, eta,
    )?)
}

fn cmd_gen_dist(
    args: GenDistArgs,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode> {
    let dist = if let Some(path) = &args.from_table {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        JointDistribution::from_json(&text)?
    } else if args.uniform_label {
        let d = args.d.ok_or_else(|| anyhow!("--d is required"))?;
        JointDistribution::uniform_x_fair_label(d)?
    } else {
        let d = args.d.ok_or_else(|| anyhow!("--d is required"))?;
        if args.junta.is_empty() {
            bail!("--junta is required unless --uniform-label or --from-table is given");
        }
        build_planted(d, &args.junta, &args.table, &args.marginal, args.eta, seed)?
    };

    let default_k = if args.junta.is_empty() {
        1
    } else {
        args.junta.len()
    };
    let k = args.k.unwrap_or(default_k).min(dist.dim());
    // the optimum scan is capped at d = 16; larger tables are still valid
    let opt = if dist.dim() <= juntas::oracle::MAX_OPT_DIM {
        Some(opt_exact(&dist, k)?)
    } else {
        None
    };

    let path = out.unwrap_or_else(|| PathBuf::from("dist.json"));
    fs::write(&path, dist.to_json()).with_context(|| format!("writing {}", path.display()))?;

    let (opt_json, mask_json) = match opt {
        Some((v, argmax)) => (serde_json::json!(v), serde_json::json!(argmax.bits())),
        None => (serde_json::Value::Null, serde_json::Value::Null),
    };
    match format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "path": path.display().to_string(),
                "dim": dist.dim(),
                "k": k,
                "opt": opt_json,
                "opt_subset_mask": mask_json,
            })
        ),
        Format::Csv => {
            println!("path,dim,k,opt,opt_subset_mask");
            println!(
                "{},{},{},{},{}",
                path.display(),
                dist.dim(),
                k,
                opt_json,
                mask_json
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(args: SampleArgs, seed: u64, out: Option<PathBuf>) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.dist)
        .with_context(|| format!("reading {}", args.dist.display()))?;
    let dist = JointDistribution::from_json(&text)?;
    let data = dist.sample(args.n, RngSeed::new(seed, args.stream))?;
    let path = out.unwrap_or_else(|| PathBuf::from("dataset.csv"));
    fs::write(&path, data.to_csv_string())
        .with_context(|| format!("writing {}", path.display()))?;
    println!(
        "{}",
        serde_json::json!({
            "path": path.display().to_string(),
            "n": data.n(),
            "dim": data.dim(),
        })
    );
    Ok(ExitCode::SUCCESS)
}

fn load_dataset(path: &Path) -> Result<Dataset> {
    let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Dataset::from_csv(BufReader::new(file))?)
}

fn cmd_learn(args: LearnArgs, out: Option<PathBuf>, format: Format) -> Result<ExitCode> {
    let alg = Algorithm::from_str(&args.alg)?;
    let data = load_dataset(&args.data)?;
    let k = match (alg, args.k) {
        (Algorithm::MmseSign, k) => k.unwrap_or(0),
        (_, Some(k)) => k,
        (_, None) => bail!("--k is required for {alg}"),
    };
    let (predictor, report) = learners::run(alg, &data, k)?;
    let path = out.unwrap_or_else(|| PathBuf::from("model.json"));
    fs::write(&path, model_to_json(&predictor, report.chosen_subset))
        .with_context(|| format!("writing {}", path.display()))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "algorithm": alg.name(),
                "k": k,
                "n": data.n(),
                "dim": data.dim(),
                "model_path": path.display().to_string(),
                "chosen_subset_mask": report.chosen_subset.bits(),
                "chosen_subset": report.chosen_subset.to_string(),
                "empirical_loss": report.empirical_loss,
                "empirical_square_loss": report.empirical_square_loss,
                "seconds": report.seconds,
            })
        ),
        Format::Csv => {
            println!("algorithm,k,n,dim,subset_mask,emp_loss,emp_square_loss,seconds");
            println!(
                "{},{},{},{},{},{},{},{}",
                alg.name(),
                k,
                data.n(),
                data.dim(),
                report.chosen_subset.bits(),
                report.empirical_loss,
                report.empirical_square_loss,
                report.seconds
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_to_json(r: &LossReport) -> serde_json::Value {
    serde_json::json!({
        "zero_one": r.zero_one,
        "square": r.square,
        "inner": r.inner,
    })
}

fn cmd_eval(args: EvalArgs, format: Format) -> Result<ExitCode> {
    if args.data.is_none() && args.dist.is_none() {
        bail!("eval needs --data (empirical) and/or --dist (exact)");
    }
    let text = fs::read_to_string(&args.model)
        .with_context(|| format!("reading {}", args.model.display()))?;
    let (predictor, _) = model_from_json(&text)?;
    let mut rows: Vec<(&str, LossReport)> = Vec::new();
    if let Some(path) = &args.data {
        let data = load_dataset(path)?;
        rows.push(("empirical", empirical_loss(&data, &predictor)?));
    }
    if let Some(path) = &args.dist {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let dist = JointDistribution::from_json(&text)?;
        rows.push(("exact", exact_loss(&dist, &predictor)?));
    }
    match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (kind, r) in &rows {
                obj.insert(kind.to_string(), report_to_json(r));
            }
            println!("{}", serde_json::Value::Object(obj));
        }
        Format::Csv => {
            println!("kind,zero_one,square,inner");
            for (kind, r) in &rows {
                println!("{kind},{},{},{}", r.zero_one, r.square, r.inner);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, seed: u64, format: Format) -> Result<ExitCode> {
    let names: Vec<String> = if args.checks.is_empty() {
        verify::CHECKS.iter().map(|s| s.to_string()).collect()
    } else {
        args.checks
    };
    let mut reports = Vec::with_capacity(names.len());
    for name in &names {
        reports.push(verify::run_check(name, args.trials, seed)?);
    }
    if format == Format::Csv {
        println!("check,trials,violations,max_gap");
    }
    let mut all_passed = true;
    for r in &reports {
        match format {
            Format::Json => println!("{}", r.to_json()),
            Format::Csv => println!("{},{},{},{}", r.check, r.trials, r.violations, r.max_gap),
        }
        if !r.passed() {
            all_passed = false;
            eprintln!(
                "check `{}` failed: {} violations / {} trials (allowed {}){}",
                r.check,
                r.violations,
                r.trials,
                r.allowed,
                r.detail
                    .as_deref()
                    .map(|d| format!("; {d}"))
                    .unwrap_or_default()
            );
        }
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
