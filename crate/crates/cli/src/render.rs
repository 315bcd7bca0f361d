//! Plain-text and CSV renderings of the command outputs.

use std::fmt::Write as _;

use serde::Serialize;

use harmony_core::reproduce::Check;
use harmony_core::signal::OracleReport;
use harmony_core::tuning::INTERVAL_NAMES;
use harmony_core::{
    AnalysisResult, ApproximationTrace, CorrelationReport, Error, Fraction, RankTable,
    Reproduction, TuningTable,
};

/// Correlations and p values printed without the leading zero, as in rating studies.
pub fn bare(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else if let Some(rest) = s.strip_prefix("-0.") {
        format!("-.{rest}")
    } else {
        s
    }
}

pub fn analysis(out: &mut String, r: &AnalysisResult, f1: Option<f64>) {
    let per_tone: Vec<String> = r.inversion_h.iter().map(Fraction::to_string).collect();
    writeln!(out, "harmony      {}", r.harmony).ok();
    writeln!(out, "tuning       {}", r.tuning).ok();
    writeln!(out, "raw h        {}", r.raw_h).ok();
    writeln!(out, "h per tone   {}", per_tone.join(" ")).ok();
    writeln!(out, "mean h       {:.1}", r.mean_h).ok();
    writeln!(out, "mean log2 h  {:.3}", r.mean_log_h).ok();
    if let Some(f1) = f1 {
        writeln!(out, "lowest tone  {f1:.2} Hz").ok();
        writeln!(out, "period       {:.3} ms", 1000.0 * r.raw_h as f64 / f1).ok();
    }
    for (name, value) in &r.extras {
        writeln!(out, "{name:<12} {}", trim_float(*value)).ok();
    }
}

fn trim_float(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

pub fn rank_table(out: &mut String, t: &RankTable) {
    writeln!(out, "{} ranked by {}", t.tuning, t.measure).ok();
    writeln!(
        out,
        "{:>5}  {:<28} {:>2}  {:>10}",
        "rank", "semitones", "k", "value"
    )
    .ok();
    for row in &t.rows {
        writeln!(
            out,
            "{:>5}  {:<28} {:>2}  {:>10}",
            row.rank,
            row.harmony.to_string(),
            row.cardinality,
            t.measure.format_value(row.value)
        )
        .ok();
    }
}

pub fn correlations(out: &mut String, reports: &[CorrelationReport]) {
    writeln!(
        out,
        "{:<16} {:<24} {:<16} {:<6} {:>6} {:>6} {:>4}",
        "dataset", "measure", "tuning", "mode", "r", "p", "n"
    )
    .ok();
    for r in reports {
        writeln!(
            out,
            "{:<16} {:<24} {:<16} {:<6} {:>6} {:>6} {:>4}",
            r.dataset.to_string(),
            r.measure,
            r.tuning.as_deref().unwrap_or("printed"),
            r.mode.to_string(),
            bare(r.r, 3),
            bare(r.p, 4),
            r.n
        )
        .ok();
    }
}

pub fn correlations_csv(out: &mut String, reports: &[CorrelationReport]) {
    writeln!(out, "dataset;measure;tuning;mode;r;p;n").ok();
    for r in reports {
        writeln!(
            out,
            "{};{};{};{};{:.3};{:.4};{}",
            r.dataset,
            r.measure,
            r.tuning.as_deref().unwrap_or(""),
            r.mode,
            r.r,
            r.p,
            r.n
        )
        .ok();
    }
}

/// One row of a tuning table as shown to users.
#[derive(Serialize)]
pub struct TuningEntry {
    pub semitone: usize,
    pub interval: &'static str,
    pub ratio: Option<Fraction>,
    pub value: f64,
    pub deviation_percent: f64,
}

#[derive(Serialize)]
pub struct TuningView {
    pub name: String,
    pub deviation_bound_percent: Option<f64>,
    pub entries: Vec<TuningEntry>,
}

pub fn tuning_view(t: &TuningTable) -> Result<TuningView, Error> {
    let ratios = t.ratios().ok();
    let entries = INTERVAL_NAMES
        .iter()
        .enumerate()
        .map(|(k, interval)| {
            Ok(TuningEntry {
                semitone: k,
                interval,
                ratio: ratios.map(|r| r[k]),
                value: t.ratio_value(k),
                deviation_percent: t.deviation(k)?,
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(TuningView {
        name: t.label(),
        deviation_bound_percent: t.deviation_bound,
        entries,
    })
}

pub fn tuning(out: &mut String, t: &TuningTable) -> Result<(), Error> {
    let view = tuning_view(t)?;
    writeln!(out, "{}", view.name).ok();
    for e in &view.entries {
        let ratio = e.ratio.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{:>2}  {:<15} {:>9}  {:>8.5}  {:>+6.2}%",
            e.semitone, e.interval, ratio, e.value, e.deviation_percent
        )
        .ok();
    }
    Ok(())
}

pub fn approximation(out: &mut String, trace: &ApproximationTrace) {
    writeln!(out, "target     {}", trace.target).ok();
    writeln!(out, "precision  {}", trace.precision).ok();
    for (i, (m, (l, r))) in trace.mediants.iter().zip(&trace.parents).enumerate() {
        writeln!(
            out,
            "{:>4}  {:<12} from {}/{} and {}/{}",
            i + 1,
            m.to_string(),
            l.0,
            l.1,
            r.0,
            r.1
        )
        .ok();
    }
    writeln!(
        out,
        "result     {} (relative error {:.3e})",
        trace.result,
        trace.relative_error()
    )
    .ok();
}

pub fn oracle(out: &mut String, r: &OracleReport) {
    writeln!(out, "harmony          {} ({})", r.harmony, r.tuning).ok();
    writeln!(out, "lowest tone      {} Hz", r.f1).ok();
    writeln!(out, "lcm periodicity  {}", r.raw_h).ok();
    match (r.detected_period, r.implied_h, r.relative_error) {
        (Some(tau), Some(h), Some(e)) => {
            writeln!(out, "detected period  {:.6} ms", tau * 1000.0).ok();
            writeln!(out, "implied h        {h:.6}").ok();
            writeln!(out, "relative error   {e:.2e}").ok();
        }
        _ => {
            writeln!(out, "detected period  none within the search horizon").ok();
        }
    }
    writeln!(
        out,
        "agreement        {}",
        if r.agrees { "yes" } else { "no" }
    )
    .ok();
}

fn check_status(c: &Check) -> &'static str {
    match (c.passed, c.gated) {
        (true, _) => "PASS",
        (false, true) => "FAIL",
        (false, false) => "INFO",
    }
}

pub fn reproduction(out: &mut String, run: &Reproduction, verbose: bool) {
    let failed = run.mismatches().count();
    let informational = run.checks.iter().filter(|c| !c.gated && !c.passed).count();
    for c in &run.checks {
        if verbose || !c.passed {
            writeln!(
                out,
                "{}  {}  expected {}  computed {}  (tolerance {})",
                check_status(c),
                c.description,
                c.expected,
                format_computed(c),
                c.tolerance
            )
            .ok();
        }
    }
    writeln!(
        out,
        "{}: {} checks, {} mismatches, {} informational differences",
        run.target,
        run.checks.len(),
        failed,
        informational
    )
    .ok();
}

/// Shows the computed value with a few more digits than the tolerance resolves.
fn format_computed(c: &Check) -> String {
    let decimals = (-c.tolerance.log10()).ceil().max(0.0) as usize + 1;
    format!("{:.*}", decimals, c.computed)
}

pub fn reproductions_csv(out: &mut String, runs: &[Reproduction]) {
    writeln!(
        out,
        "target;description;tuning;expected;computed;tolerance;gated;passed"
    )
    .ok();
    for run in runs {
        for c in &run.checks {
            writeln!(
                out,
                "{};{};{};{};{};{};{};{}",
                run.target,
                c.description,
                c.tuning.map(|t| t.to_string()).unwrap_or_default(),
                c.expected,
                c.computed,
                c.tolerance,
                c.gated,
                c.passed
            )
            .ok();
        }
    }
}
