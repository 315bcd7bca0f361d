use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use harmony_core::empirics::correlate_measure_with;
use harmony_core::measures::measure_vector;
use harmony_core::rationals::approximate;
use harmony_core::signal::oracle_check;
use harmony_core::{
    analyze, parse_pitch_spec, rank_table, rational_tuning, reproduce, CorrelationReport,
    DatasetId, EmpiricalDataset, Error, Measure, MeasureSource, Mode, Reproduction, Target,
    TuningName, TuningTable,
};

mod render;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "harmony",
    version,
    about = "Periodicity-based consonance analysis"
)]
struct Cli {
    /// Output format.
    #[arg(long, short, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct TuningArgs {
    /// equal, pythagorean, kirnberger3, rational or just.
    #[arg(long, short, default_value = "just")]
    tuning: String,

    /// Deviation bound for the rational tuning as a fraction (0.01 = 1%).
    #[arg(long)]
    deviation: Option<f64>,
}

impl TuningArgs {
    fn resolve(&self) -> Result<TuningTable, Error> {
        let name: TuningName = self.tuning.parse()?;
        match (name, self.deviation) {
            (TuningName::Rational, Some(d)) => rational_tuning(d),
            (_, Some(_)) => Err(Error::InvalidArgument {
                name: "deviation",
                reason: "only applies to the rational tuning".into(),
            }),
            (name, None) => Ok(TuningTable::builtin(name)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Periodicity of one chord or scale.
    Analyze {
        /// Semitones ("0,4,7") or pitch names ("C4 E4 G4").
        #[arg(long, short)]
        chord: String,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Use only the lowest tone as reference.
        #[arg(long)]
        no_inversions: bool,
        /// Fold all tones into one octave first.
        #[arg(long)]
        reduce_octave: bool,
        /// Also compute rival measures: "all" or a comma list of gradus, omega, brefeld, similarity.
        #[arg(long)]
        measures: Option<String>,
    },
    /// Rank every one-octave harmony by a measure.
    Rank {
        #[arg(long, short, default_value = "log_periodicity")]
        measure: String,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Only harmonies with this many tones (1 to 12).
        #[arg(long, short)]
        cardinality: Option<usize>,
        /// Keep the first N rows.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Correlate measures with an embedded rating dataset.
    Correlate {
        /// dyads, triads, complete_triads or church_modes.
        #[arg(long, short)]
        dataset: String,
        /// Measure names, or "all" for every computable measure and printed column.
        #[arg(long, short, value_delimiter = ',', default_value = "periodicity")]
        measure: Vec<String>,
        #[command(flatten)]
        tuning: TuningArgs,
        #[arg(long, default_value = "ranks")]
        mode: String,
        /// Read the measure from the dataset's printed column instead of computing it.
        #[arg(long)]
        printed: bool,
        #[arg(long)]
        no_inversions: bool,
    },
    /// Show a tuning table.
    Tuning {
        #[arg(long, short, default_value = "just")]
        name: String,
        #[arg(long)]
        deviation: Option<f64>,
    },
    /// Approximate a real number by a fraction.
    Approximate {
        #[arg(long, short, allow_negative_numbers = true)]
        value: f64,
        #[arg(long, short, default_value_t = 0.01, allow_negative_numbers = true)]
        precision: f64,
    },
    /// Check the lcm period against the autocorrelation of the sounding tones.
    Oracle {
        #[arg(long, short)]
        chord: String,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Frequency of the lowest tone; defaults to the named pitch or 440 Hz.
        #[arg(long)]
        f1: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Recompute a published table and diff it against the printed values.
    Reproduce {
        /// table2, table3, table4, table6, cor2, cor3 or all.
        target: String,
        /// Restrict tuning-dependent checks to one tuning.
        #[arg(long, short)]
        tuning: Option<String>,
        /// List every check, not only the mismatches.
        #[arg(long, short)]
        verbose: bool,
    },
}

enum Failure {
    Usage(String),
    Mismatch(Option<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Mismatch(Some(e.to_string()))
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize") + "\n"
}

fn run(cli: Cli) -> Result<String, (String, Failure)> {
    let format = cli.format;
    let mut out = String::new();
    let result = dispatch(cli.command, format, &mut out);
    result.map(|()| out.clone()).map_err(|f| (out, f))
}

fn dispatch(command: Command, format: Format, out: &mut String) -> Result<(), Failure> {
    match command {
        Command::Analyze {
            chord,
            tuning,
            no_inversions,
            reduce_octave,
            measures,
        } => {
            let spec = parse_pitch_spec(&chord)?;
            let t = tuning.resolve()?;
            let harmony = if reduce_octave {
                spec.harmony.reduced_to_octave()
            } else {
                spec.harmony
            };
            let mut result = analyze(&harmony, &t, !no_inversions)?;
            if let Some(list) = measures {
                let wanted = parse_measure_list(&list)?;
                let v = measure_vector(&harmony, &t)?;
                for name in wanted {
                    let value = match name {
                        "gradus" => Some(v.gradus as f64),
                        "omega" => Some(v.omega as f64),
                        "brefeld" => v.brefeld,
                        _ => v.similarity,
                    };
                    if let Some(value) = value {
                        result.extras.insert(name.to_string(), value);
                    }
                }
            }
            match format {
                Format::Json => out.push_str(&json(&result)),
                Format::Csv => {
                    writeln!(out, "{}", harmony_core::AnalysisResult::CSV_HEADER).ok();
                    writeln!(out, "{}", result.csv_row()).ok();
                }
                Format::Text => render::analysis(out, &result, spec.lowest_frequency),
            }
        }
        Command::Rank {
            measure,
            tuning,
            cardinality,
            top,
        } => {
            let m: Measure = measure.parse()?;
            let table = rank_table(&tuning.resolve()?, m, cardinality, top)?;
            match format {
                Format::Json => out.push_str(&json(&table)),
                Format::Csv => out.push_str(&table.to_csv()),
                Format::Text => render::rank_table(out, &table),
            }
        }
        Command::Correlate {
            dataset,
            measure,
            tuning,
            mode,
            printed,
            no_inversions,
        } => {
            let id: DatasetId = dataset.parse()?;
            let data = EmpiricalDataset::load(id)?;
            let mode: Mode = mode.parse()?;
            let t = tuning.resolve()?;
            let sources = correlation_sources(&data, &measure, printed);
            let reports = sources
                .iter()
                .map(|s| correlate_measure_with(&data, s, &t, mode, !no_inversions))
                .collect::<Result<Vec<CorrelationReport>, Error>>()?;
            match format {
                Format::Json => out.push_str(&json(&reports)),
                Format::Csv => render::correlations_csv(out, &reports),
                Format::Text => render::correlations(out, &reports),
            }
        }
        Command::Tuning { name, deviation } => {
            let t = TuningArgs {
                tuning: name,
                deviation,
            }
            .resolve()?;
            match format {
                Format::Json => out.push_str(&json(&render::tuning_view(&t)?)),
                Format::Csv => out.push_str(&t.to_csv()?),
                Format::Text => render::tuning(out, &t)?,
            }
        }
        Command::Approximate { value, precision } => {
            let trace = approximate(value, precision)?;
            match format {
                Format::Json => out.push_str(&json(&trace)),
                Format::Csv => {
                    writeln!(out, "step;mediant;left;right").ok();
                    for (i, (m, (l, r))) in trace.mediants.iter().zip(&trace.parents).enumerate() {
                        writeln!(out, "{};{m};{}/{};{}/{}", i + 1, l.0, l.1, r.0, r.1).ok();
                    }
                }
                Format::Text => render::approximation(out, &trace),
            }
        }
        Command::Oracle {
            chord,
            tuning,
            f1,
            tolerance,
        } => {
            let spec = parse_pitch_spec(&chord)?;
            let f1 = f1.or(spec.lowest_frequency).unwrap_or(440.0);
            let report = oracle_check(&spec.harmony, &tuning.resolve()?, f1, tolerance)?;
            match format {
                Format::Json => out.push_str(&json(&report)),
                Format::Csv => {
                    writeln!(
                        out,
                        "semitones;tuning;f1;raw_h;detected_period;implied_h;agrees"
                    )
                    .ok();
                    writeln!(
                        out,
                        "{};{};{};{};{};{};{}",
                        report.harmony,
                        report.tuning,
                        report.f1,
                        report.raw_h,
                        report
                            .detected_period
                            .map(|v| v.to_string())
                            .unwrap_or_default(),
                        report.implied_h.map(|v| v.to_string()).unwrap_or_default(),
                        report.agrees
                    )
                    .ok();
                }
                Format::Text => render::oracle(out, &report),
            }
            if !report.agrees {
                return Err(Failure::Mismatch(None));
            }
        }
        Command::Reproduce {
            target,
            tuning,
            verbose,
        } => {
            let targets: Vec<Target> = if target.trim().eq_ignore_ascii_case("all") {
                Target::ALL.to_vec()
            } else {
                vec![target.parse()?]
            };
            let tuning: Option<TuningName> = tuning.map(|t| t.parse()).transpose()?;
            let runs = targets
                .into_iter()
                .map(|t| reproduce(t, tuning))
                .collect::<Result<Vec<Reproduction>, Error>>()?;
            match format {
                Format::Json => out.push_str(&json(&runs)),
                Format::Csv => render::reproductions_csv(out, &runs),
                Format::Text => {
                    for run in &runs {
                        render::reproduction(out, run, verbose);
                    }
                }
            }
            if !runs.iter().all(Reproduction::success) {
                return Err(Failure::Mismatch(None));
            }
        }
    }
    Ok(())
}

const RIVAL_MEASURES: [&str; 4] = ["gradus", "omega", "brefeld", "similarity"];

fn parse_measure_list(list: &str) -> Result<Vec<&'static str>, Error> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(RIVAL_MEASURES.to_vec());
    }
    list.split(',')
        .map(|name| {
            let name = name.trim().to_ascii_lowercase();
            RIVAL_MEASURES
                .into_iter()
                .find(|m| *m == name)
                .ok_or(Error::UnknownMeasure(name))
        })
        .collect()
}

fn correlation_sources(
    data: &EmpiricalDataset,
    names: &[String],
    printed: bool,
) -> Vec<MeasureSource> {
    if names.iter().any(|n| n.trim().eq_ignore_ascii_case("all")) {
        let computed = Measure::ALL.into_iter().map(MeasureSource::Computed);
        let columns = data
            .static_column_names()
            .into_iter()
            .map(|c| MeasureSource::Static(c.to_string()));
        return computed.chain(columns).collect();
    }
    names
        .iter()
        .map(|n| {
            if printed {
                MeasureSource::Static(n.trim().to_string())
            } else {
                MeasureSource::parse(n)
            }
        })
        .collect()
}

fn main() -> ExitCode {
    // clap exits with status 2 on its own usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, failure)) => {
            print!("{out}");
            match failure {
                Failure::Usage(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(EXIT_USAGE)
                }
                Failure::Mismatch(msg) => {
                    if let Some(msg) = msg {
                        eprintln!("error: {msg}");
                    }
                    ExitCode::from(EXIT_MISMATCH)
                }
            }
        }
    }
}
