//! Periodicity-based consonance analysis.
//!
//! Frequency ratios of chord tones are approximated by fractions; the lcm of
//! their denominators measures how long the combined waveform takes to
//! repeat, relative to the period of the lowest tone. Short periods predict
//! consonance. The crate also provides rival measures, the rating datasets
//! they are validated against, and the correlation statistics.

pub mod empirics;
pub mod enumeration;
pub mod error;
pub mod measures;
pub mod periodicity;
pub mod pitch;
pub mod rationals;
pub mod reproduce;
pub mod signal;
pub mod tuning;

pub use empirics::{
    correlate_measure, CorrelationReport, DatasetId, EmpiricalDataset, MeasureSource, Mode,
};
pub use enumeration::{enumerate_harmonies, rank_table, RankTable};
pub use error::{Error, Result};
pub use measures::{Measure, MeasureVector};
pub use periodicity::{analyze, raw_periodicity, AnalysisResult, Harmony};
pub use pitch::{parse_pitch_spec, PitchSpec};
pub use rationals::{approximate, mediant_sequence, ApproximationTrace, Fraction};
pub use reproduce::{reproduce, Reproduction, Target};
pub use signal::ToneStack;
pub use tuning::{builtin_tuning, rational_tuning, TuningName, TuningTable};
