//! File formats owned by the command-line tool.
//!
//! Everything is plain text: CSV for series, periodograms, histograms,
//! power tables and boundary curves; `key=value` records for thresholds and
//! experiment configs. Floats are written with 17 significant digits so a
//! write/read round trip reproduces them bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

use ophc::harness::{Histogram, NullDistribution, PowerRow};
use ophc::{ComplexSeries, HcForm, Periodogram, QMode, SigmaMode, SparseSpectrum};

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

// ---------------------------------------------------------------- series

/// Writes the `index,re,im` series format, indices 1..N.
pub fn write_series(path: &Path, series: &ComplexSeries) -> Result<()> {
    let mut out = String::from("index,re,im\n");
    for (i, z) in series.samples().iter().enumerate() {
        writeln!(out, "{},{},{}", i + 1, fmt_f64(z.re), fmt_f64(z.im))?;
    }
    fs::write(path, out).with_context(|| format!("writing series {}", path.display()))
}

/// Reads the `index,re,im` format; malformed rows are reported with their
/// 1-based row number and indices must run contiguously from 1.
pub fn read_series(path: &Path) -> Result<ComplexSeries> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading series {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "index,re,im" => {}
        Some((_, header)) => bail!("row 1: expected header `index,re,im`, found `{header}`"),
        None => bail!("empty series file"),
    }
    let mut samples = Vec::new();
    for (lineno, line) in lines {
        let row = lineno + 1; // 1-based, header is row 1
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (idx, re, im) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), Some(c), None) => (a, b, c),
            _ => bail!("row {row}: expected 3 comma-separated fields"),
        };
        let idx: usize = idx
            .trim()
            .parse()
            .with_context(|| format!("row {row}: bad index `{idx}`"))?;
        if idx != samples.len() + 1 {
            bail!("row {row}: index {idx} out of order (expected {})", samples.len() + 1);
        }
        let re: f64 = re
            .trim()
            .parse()
            .with_context(|| format!("row {row}: bad real part `{re}`"))?;
        let im: f64 = im
            .trim()
            .parse()
            .with_context(|| format!("row {row}: bad imaginary part `{im}`"))?;
        samples.push(Complex64::new(re, im));
    }
    ComplexSeries::new(samples).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// Single-column real input (one value per row) for complexification.
pub fn read_real_column(path: &Path) -> Result<Vec<f64>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: f64 = line
            .trim()
            .parse()
            .with_context(|| format!("row {}: bad value `{line}`", lineno + 1))?;
        values.push(v);
    }
    Ok(values)
}

// ----------------------------------------------------------- periodogram

/// Periodogram CSV: `m,re_v,im_v,I`.
pub fn write_periodogram(path: &Path, pg: &Periodogram) -> Result<()> {
    let mut out = String::from("m,re_v,im_v,I\n");
    for (m0, (v, i)) in pg.spectrum().iter().zip(pg.intensities()).enumerate() {
        writeln!(out, "{},{},{},{}", m0 + 1, fmt_f64(v.re), fmt_f64(v.im), fmt_f64(*i))?;
    }
    fs::write(path, out).with_context(|| format!("writing periodogram {}", path.display()))
}

// ------------------------------------------------------ threshold record

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRecord {
    pub n: usize,
    pub q: usize,
    pub form: HcForm,
    pub level: f64,
    pub threshold: f64,
    pub trials: usize,
    pub seed: u64,
}

/// `key=value` threshold record.
pub fn write_threshold_record(path: &Path, rec: &ThresholdRecord) -> Result<()> {
    let text = format!(
        "N={}\nq={}\nform={}\nlevel={}\nthreshold={}\ntrials={}\nseed={}\nversion={}\n",
        rec.n,
        rec.q,
        rec.form,
        fmt_f64(rec.level),
        fmt_f64(rec.threshold),
        rec.trials,
        rec.seed,
        env!("CARGO_PKG_VERSION"),
    );
    fs::write(path, text).with_context(|| format!("writing threshold record {}", path.display()))
}

pub fn read_threshold_record(path: &Path) -> Result<ThresholdRecord> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading threshold record {}", path.display()))?;
    let mut n = None;
    let mut q = None;
    let mut form = None;
    let mut level = None;
    let mut threshold = None;
    let mut trials = None;
    let mut seed = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("bad record line `{line}`"))?;
        match key.trim() {
            "N" => n = Some(value.trim().parse()?),
            "q" => q = Some(value.trim().parse()?),
            "form" => form = Some(parse_form(value.trim())?),
            "level" => level = Some(value.trim().parse()?),
            "threshold" => threshold = Some(value.trim().parse()?),
            "trials" => trials = Some(value.trim().parse()?),
            "seed" => seed = Some(value.trim().parse()?),
            _ => {} // forward compatible
        }
    }
    Ok(ThresholdRecord {
        n: n.context("record missing N")?,
        q: q.context("record missing q")?,
        form: form.context("record missing form")?,
        level: level.context("record missing level")?,
        threshold: threshold.context("record missing threshold")?,
        trials: trials.context("record missing trials")?,
        seed: seed.context("record missing seed")?,
    })
}

// -------------------------------------------------------- sample exports

/// Null sample CSV: `trial,hc_star`.
pub fn write_null_samples(path: &Path, samples: &[f64]) -> Result<()> {
    let mut out = String::from("trial,hc_star\n");
    for (t, s) in samples.iter().enumerate() {
        writeln!(out, "{},{}", t, fmt_f64(*s))?;
    }
    fs::write(path, out).with_context(|| format!("writing null samples {}", path.display()))
}

pub fn read_null_samples(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading null samples {}", path.display()))?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let (_, value) = line
            .split_once(',')
            .with_context(|| format!("row {}: expected `trial,hc_star`", lineno + 1))?;
        samples.push(
            value
                .trim()
                .parse()
                .with_context(|| format!("row {}: bad hc_star `{value}`", lineno + 1))?,
        );
    }
    if samples.is_empty() {
        bail!("{}: no samples", path.display());
    }
    Ok(samples)
}

/// Histogram CSV: `bin_lo,bin_hi,count`.
pub fn write_histogram(path: &Path, hist: &Histogram) -> Result<()> {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (b, count) in hist.counts.iter().enumerate() {
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(hist.edges[b]),
            fmt_f64(hist.edges[b + 1]),
            count
        )?;
    }
    fs::write(path, out).with_context(|| format!("writing histogram {}", path.display()))
}

// ----------------------------------------------------------- power table

/// Power table CSV: `q,q_mode,sigma_mode,trials,rejections,power,threshold`.
pub fn write_power_csv(path: &Path, rows: &[PowerRow]) -> Result<()> {
    let mut out = String::from("q,q_mode,sigma_mode,trials,rejections,power,threshold\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.q,
            row.q_mode,
            row.sigma_mode.as_str(),
            row.trials,
            row.rejections,
            fmt_f64(row.power),
            fmt_f64(row.threshold)
        )?;
    }
    fs::write(path, out).with_context(|| format!("writing power table {}", path.display()))
}

/// Per-q null exports accompanying a power table.
pub fn write_null_distributions(dir: &Path, nulls: &[NullDistribution], bins: usize) -> Result<()> {
    for null in nulls {
        let hist = ophc::harness::histogram(&null.samples, bins)
            .map_err(|e| anyhow::anyhow!("histogram for q={}: {e}", null.q))?;
        write_histogram(&dir.join(format!("null_hist_q{}.csv", null.q)), &hist)?;
        write_null_samples(&dir.join(format!("null_samples_q{}.csv", null.q)), &null.samples)?;
    }
    Ok(())
}

// -------------------------------------------------------- boundary curve

/// Boundary CSV: `alpha,rho_star,rho_star_gamma`.
pub fn write_boundary_csv(path: &Path, rows: &[(f64, f64, f64)]) -> Result<()> {
    let mut out = String::from("alpha,rho_star,rho_star_gamma\n");
    for (alpha, rs, rg) in rows {
        writeln!(out, "{},{},{}", fmt_f64(*alpha), fmt_f64(*rs), fmt_f64(*rg))?;
    }
    fs::write(path, out).with_context(|| format!("writing boundary curve {}", path.display()))
}

// ------------------------------------------------------- experiment docs

/// `key=value` experiment description stamped with the code version.
pub fn write_config_record(
    path: &Path,
    config: &ophc::ExperimentConfig,
    q_modes: &[QMode],
) -> Result<()> {
    let q_modes = q_modes
        .iter()
        .map(|m| m.as_str())
        .collect::<Vec<_>>()
        .join(",");
    let sigma_mode = match config.sigma_mode {
        SigmaMode::Known(s) => format!("known:{s}"),
        SigmaMode::Estimated => "estimated".to_string(),
    };
    let text = format!(
        "p={}\nn={}\ns={}\nr={}\nq_mode={}\nsigma_mode={}\nstatistic_form={}\ntrials={}\nlevel={}\nmaster_seed={}\nversion={}\n",
        config.p,
        config.n,
        config.s,
        config.r,
        q_modes,
        sigma_mode,
        config.statistic_form,
        config.trials,
        config.level,
        config.master_seed,
        env!("CARGO_PKG_VERSION"),
    );
    fs::write(path, text).with_context(|| format!("writing config {}", path.display()))
}

/// Spectrum log CSV: one row per atom, `trial,p,tau,re,im`. Power trials
/// share their alternative draws across cells, so one entry per trial
/// describes every cell.
pub fn write_spectra_csv(path: &Path, entries: &[(u64, SparseSpectrum)]) -> Result<()> {
    let mut out = String::from("trial,p,tau,re,im\n");
    for (trial, spectrum) in entries {
        for (tau, beta) in spectrum.support().iter().zip(spectrum.amplitudes()) {
            writeln!(
                out,
                "{},{},{},{},{}",
                trial,
                spectrum.p(),
                tau,
                fmt_f64(beta.re),
                fmt_f64(beta.im)
            )?;
        }
    }
    fs::write(path, out).with_context(|| format!("writing spectra {}", path.display()))
}

// ---------------------------------------------------------- flag parsing

pub fn parse_form(s: &str) -> Result<HcForm> {
    match s {
        "interval" => Ok(HcForm::Interval),
        "pvalue" => Ok(HcForm::PValue),
        _ => bail!("unknown form `{s}` (expected `interval` or `pvalue`)"),
    }
}

pub fn parse_q_mode(s: &str) -> Result<QMode> {
    match s {
        "theory" => Ok(QMode::Theory),
        "simulation" => Ok(QMode::Simulation),
        "standard" => Ok(QMode::Standard),
        "full" => Ok(QMode::Full),
        _ => bail!("unknown q-mode `{s}` (expected theory|simulation|standard|full)"),
    }
}

pub fn parse_q_modes(s: &str) -> Result<Vec<QMode>> {
    s.split(',').map(|part| parse_q_mode(part.trim())).collect()
}

/// `known:VALUE` or `estimated`.
pub fn parse_sigma(s: &str) -> Result<SigmaMode> {
    if s == "estimated" {
        return Ok(SigmaMode::Estimated);
    }
    if let Some(value) = s.strip_prefix("known:") {
        let v: f64 = value
            .parse()
            .with_context(|| format!("bad sigma value `{value}`"))?;
        return Ok(SigmaMode::Known(v));
    }
    bail!("unknown sigma mode `{s}` (expected `known:VALUE` or `estimated`)")
}
