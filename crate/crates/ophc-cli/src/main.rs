//! Command-line front end: calibration, testing, power studies, boundary
//! curves, and complexification of real series.
//!
//! Exit codes: `0` accept (or success for non-test commands), `1` reject,
//! `2` any error.

mod formats;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use formats::ThresholdRecord;
use ophc::harness::{
    calibrate_null, compare_q_modes, empirical_pvalue, empirical_upper_quantile, histogram,
    power_trial_spectrum, COMPARISON_Q_MODES, HISTOGRAM_BINS,
};
use ophc::{
    boundary, complexify, ophc_test, oversampled_transform, q_rule, theory_threshold,
    ExperimentConfig, SigmaMode,
};

#[derive(Parser)]
#[command(name = "ophc", version, about = "Sparse periodicity detection by higher criticism over an over-sampled periodogram")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test one complex series for hidden periodicities.
    Test(TestArgs),
    /// Calibrate the null distribution of the statistic by Monte Carlo.
    Calibrate(CalibrateArgs),
    /// Estimate testing power across transform-length choices.
    Power(PowerArgs),
    /// Emit detection-boundary curves as CSV.
    Boundary(BoundaryArgs),
    /// Fold a real series of length 2n into a complex series of length n.
    Complexify(ComplexifyArgs),
}

#[derive(Args)]
struct TestArgs {
    /// Input series file (`index,re,im` CSV).
    #[arg(long)]
    series: PathBuf,
    /// Explicit transform length; overrides --q-mode.
    #[arg(long)]
    q: Option<usize>,
    /// Rule for q: theory|simulation|standard|full.
    #[arg(long, default_value = "simulation")]
    q_mode: String,
    /// Grid size p (required for --q-mode full).
    #[arg(long)]
    p: Option<u64>,
    /// Noise scale: `known:VALUE` or `estimated`.
    #[arg(long, default_value = "known:1.0")]
    sigma: String,
    /// Statistic form: interval|pvalue.
    #[arg(long, default_value = "pvalue")]
    form: String,
    /// Explicit decision threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Threshold record written by `calibrate`.
    #[arg(long)]
    threshold_file: Option<PathBuf>,
    /// Use the conservative theory threshold ln^2 N.
    #[arg(long)]
    theory_threshold: bool,
    /// Null HC* samples (`trial,hc_star` CSV); enables the empirical
    /// p-value and, absent other sources, the threshold at --level.
    #[arg(long)]
    null_samples: Option<PathBuf>,
    /// Test level used when deriving a threshold from --null-samples.
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Optionally dump the computed periodogram (`m,re_v,im_v,I` CSV).
    #[arg(long)]
    periodogram_out: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Series length N.
    #[arg(long)]
    n: usize,
    /// Explicit transform length; overrides --q-mode.
    #[arg(long)]
    q: Option<usize>,
    /// Rule for q: theory|simulation|standard|full.
    #[arg(long, default_value = "simulation")]
    q_mode: String,
    /// Grid size p (required for --q-mode full).
    #[arg(long)]
    p: Option<u64>,
    /// Statistic form: interval|pvalue.
    #[arg(long, default_value = "pvalue")]
    form: String,
    /// Number of Monte Carlo trials.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Test level; the threshold is the (1-level) empirical quantile.
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Master seed.
    #[arg(long, default_value_t = 271_828)]
    seed: u64,
    /// Output directory (threshold.txt, null_samples.csv, null_hist.csv).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PowerArgs {
    /// Grid size p.
    #[arg(long, default_value_t = 1_000_000)]
    p: u64,
    /// Series length N.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Number of atoms s.
    #[arg(long, default_value_t = 20)]
    s: usize,
    /// Signal strength r (amplitude A = sqrt(r p ln p / N)).
    #[arg(long, default_value_t = 0.3)]
    r: f64,
    /// Comma-separated q modes to compare.
    #[arg(long, default_value = "simulation,standard,full")]
    q_modes: String,
    /// Known noise scale used for the `known` cells, as `known:VALUE`.
    #[arg(long, default_value = "known:1.0")]
    sigma: String,
    /// Statistic form: interval|pvalue.
    #[arg(long, default_value = "pvalue")]
    form: String,
    /// Trials per cell (calibration and power).
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Test level.
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Master seed.
    #[arg(long, default_value_t = 271_828)]
    seed: u64,
    /// Output directory (power.csv, config.txt, per-q null exports).
    #[arg(long)]
    out: PathBuf,
    /// Also log every drawn alternative spectrum to this CSV (one row per
    /// atom; intended for small --trials runs).
    #[arg(long)]
    log_spectra: Option<PathBuf>,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Grid exponent gamma in [0, 1).
    #[arg(long, default_value_t = 0.3)]
    gamma: f64,
    /// First alpha of the grid; defaults to (1+gamma)/2 + 0.001.
    #[arg(long)]
    alpha_start: Option<f64>,
    /// Last alpha of the grid (inclusive up to rounding).
    #[arg(long, default_value_t = 0.999)]
    alpha_end: f64,
    /// Grid step.
    #[arg(long, default_value_t = 0.001)]
    alpha_step: f64,
    /// Output CSV (`alpha,rho_star,rho_star_gamma`).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ComplexifyArgs {
    /// Single-column real input of even length 2n.
    #[arg(long)]
    input: PathBuf,
    /// Output series file (`index,re,im` CSV) of length n.
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Test(args) => cmd_test(args),
        Command::Calibrate(args) => cmd_calibrate(args).map(|()| 0),
        Command::Power(args) => cmd_power(args).map(|()| 0),
        Command::Boundary(args) => cmd_boundary(args).map(|()| 0),
        Command::Complexify(args) => cmd_complexify(args).map(|()| 0),
    }
}

fn resolve_q(explicit: Option<usize>, q_mode: &str, n: usize, p: Option<u64>) -> Result<usize> {
    if let Some(q) = explicit {
        if q == 0 {
            bail!("--q must be positive");
        }
        return Ok(q);
    }
    Ok(q_rule(n, formats::parse_q_mode(q_mode)?, p)?)
}

fn cmd_test(args: TestArgs) -> Result<i32> {
    let series = formats::read_series(&args.series)?;
    let q = resolve_q(args.q, &args.q_mode, series.len(), args.p)?;
    let sigma = formats::parse_sigma(&args.sigma)?;
    let form = formats::parse_form(&args.form)?;

    let null_samples = args
        .null_samples
        .as_deref()
        .map(formats::read_null_samples)
        .transpose()?;

    let threshold = if let Some(t) = args.threshold {
        t
    } else if let Some(path) = &args.threshold_file {
        let record = formats::read_threshold_record(path)?;
        if record.q != q {
            eprintln!(
                "warning: threshold was calibrated for q={}, testing at q={q}",
                record.q
            );
        }
        record.threshold
    } else if args.theory_threshold {
        theory_threshold(series.len())
    } else if let Some(samples) = &null_samples {
        empirical_upper_quantile(samples, args.level)?
    } else {
        bail!(
            "no threshold source: pass --threshold, --threshold-file, \
             --theory-threshold, or --null-samples"
        );
    };

    let mut result = ophc_test(&series, q, sigma, form, threshold)?;
    if let Some(samples) = &null_samples {
        result.empirical_pvalue = Some(empirical_pvalue(result.hc_star, samples)?);
    }

    if let Some(path) = &args.periodogram_out {
        let normalized = series.scaled(1.0 / result.sigma_used);
        formats::write_periodogram(path, &oversampled_transform(&normalized, q)?)?;
    }

    println!("hc_star={}", result.hc_star);
    println!("argmax_t={}", result.argmax_t);
    println!("argmax_count={}", result.argmax_count);
    println!("q={}", result.q);
    println!("form={}", result.form);
    println!("sigma={}", result.sigma_used);
    println!("threshold={}", result.threshold_used);
    println!("reject={}", result.reject);
    if let Some(p) = result.empirical_pvalue {
        println!("empirical_pvalue={p}");
    }
    Ok(if result.reject { 1 } else { 0 })
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<()> {
    let q = resolve_q(args.q, &args.q_mode, args.n, args.p)?;
    let form = formats::parse_form(&args.form)?;
    if !(args.level > 0.0 && args.level < 1.0) {
        bail!("--level must lie in (0, 1)");
    }
    if (args.trials as f64) < 20.0 / args.level {
        eprintln!(
            "warning: {} trials resolve the {} quantile coarsely (at least {} recommended)",
            args.trials,
            1.0 - args.level,
            (20.0 / args.level).ceil() as usize
        );
    }
    let calibration = calibrate_null(args.n, q, form, args.trials, args.level, args.seed)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    formats::write_threshold_record(
        &args.out.join("threshold.txt"),
        &ThresholdRecord {
            n: args.n,
            q,
            form,
            level: args.level,
            threshold: calibration.threshold,
            trials: args.trials,
            seed: args.seed,
        },
    )?;
    formats::write_null_samples(&args.out.join("null_samples.csv"), &calibration.samples)?;
    let hist = histogram(&calibration.samples, HISTOGRAM_BINS)?;
    formats::write_histogram(&args.out.join("null_hist.csv"), &hist)?;
    println!("threshold={}", calibration.threshold);
    println!("out={}", args.out.display());
    Ok(())
}

fn cmd_power(args: PowerArgs) -> Result<()> {
    let q_modes = formats::parse_q_modes(&args.q_modes)?;
    let q_modes = if q_modes.is_empty() {
        COMPARISON_Q_MODES.to_vec()
    } else {
        q_modes
    };
    let sigma_mode = formats::parse_sigma(&args.sigma)?;
    if matches!(sigma_mode, SigmaMode::Estimated) {
        bail!("--sigma selects the known cells' scale; pass `known:VALUE`");
    }
    let base = ExperimentConfig {
        p: args.p,
        n: args.n,
        s: args.s,
        r: args.r,
        q_mode: q_modes[0],
        sigma_mode,
        statistic_form: formats::parse_form(&args.form)?,
        trials: args.trials,
        level: args.level,
        master_seed: args.seed,
    };
    let table = compare_q_modes(&base, &q_modes)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    formats::write_power_csv(&args.out.join("power.csv"), &table.rows)?;
    formats::write_null_distributions(&args.out, &table.nulls, HISTOGRAM_BINS)?;
    formats::write_config_record(&args.out.join("config.txt"), &base, &q_modes)?;
    if let Some(path) = &args.log_spectra {
        let entries = (0..args.trials as u64)
            .map(|trial| Ok((trial, power_trial_spectrum(&base, trial)?)))
            .collect::<Result<Vec<_>>>()?;
        formats::write_spectra_csv(path, &entries)?;
    }
    for row in &table.rows {
        println!(
            "q={} q_mode={} sigma={} power={:.4} threshold={:.6}",
            row.q,
            row.q_mode,
            row.sigma_mode.as_str(),
            row.power,
            row.threshold
        );
    }
    println!("out={}", args.out.display());
    Ok(())
}

fn cmd_boundary(args: BoundaryArgs) -> Result<()> {
    if !(0.0..1.0).contains(&args.gamma) {
        bail!("--gamma must lie in [0, 1)");
    }
    if !(args.alpha_step > 0.0) {
        bail!("--alpha-step must be positive");
    }
    let start = args
        .alpha_start
        .unwrap_or((1.0 + args.gamma) / 2.0 + 0.001);
    let mut alphas = Vec::new();
    let mut alpha = start;
    while alpha <= args.alpha_end + args.alpha_step / 2.0 {
        alphas.push(alpha);
        alpha += args.alpha_step;
    }
    if alphas.is_empty() {
        bail!("empty alpha grid");
    }
    let rows = boundary::boundary_curve(args.gamma, &alphas)?;
    formats::write_boundary_csv(&args.out, &rows)?;
    println!("rows={} out={}", rows.len(), args.out.display());
    Ok(())
}

fn cmd_complexify(args: ComplexifyArgs) -> Result<()> {
    let values = formats::read_real_column(&args.input)?;
    let series = complexify(&values)?;
    formats::write_series(&args.out, &series)?;
    println!("n={} out={}", series.len(), args.out.display());
    Ok(())
}
