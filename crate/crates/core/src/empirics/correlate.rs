use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::stats::{pearson, rank_with_ties, significance};
use super::{static_higher_is_consonant, DatasetId, EmpiricalDataset};
use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::tuning::TuningTable;

/// Whether to correlate rankings or raw values against the empirical data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ranks,
    Values,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ranks => "ranks",
            Mode::Values => "values",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ranks" | "rank" => Ok(Mode::Ranks),
            "values" | "value" => Ok(Mode::Values),
            _ => Err(Error::invalid(
                "mode",
                format!("`{s}` (valid: ranks, values)"),
            )),
        }
    }
}

/// A measure computed from the tuning, or a column printed in the dataset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MeasureSource {
    Computed(Measure),
    Static(String),
}

impl MeasureSource {
    /// Computable measure names win; anything else names a static column.
    pub fn parse(name: &str) -> MeasureSource {
        match name.parse::<Measure>() {
            Ok(m) => MeasureSource::Computed(m),
            Err(_) => MeasureSource::Static(name.trim().to_string()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            MeasureSource::Computed(m) => m.as_str(),
            MeasureSource::Static(s) => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub dataset: DatasetId,
    pub measure: String,
    /// Absent for static columns, which do not depend on a tuning.
    pub tuning: Option<String>,
    pub mode: Mode,
    pub r: f64,
    pub n: usize,
    pub p: f64,
}

/// Correlates a measure with the empirical column, averaging over inversions.
pub fn correlate_measure(
    d: &EmpiricalDataset,
    source: &MeasureSource,
    t: &TuningTable,
    mode: Mode,
) -> Result<CorrelationReport> {
    correlate_measure_with(d, source, t, mode, true)
}

/// Both sides are oriented so that larger means less consonant before
/// correlating, so agreement always yields a positive `r`.
///
/// Rank mode uses every row; value mode skips rows without a rating.
pub fn correlate_measure_with(
    d: &EmpiricalDataset,
    source: &MeasureSource,
    t: &TuningTable,
    mode: Mode,
    average_inversions: bool,
) -> Result<CorrelationReport> {
    let measure: Vec<Option<f64>> = match source {
        MeasureSource::Computed(m) => d
            .items
            .iter()
            .map(|item| {
                let v = m.evaluate(&item.harmony, t, average_inversions)?;
                Ok(Some(m.dissonance(v)))
            })
            .collect::<Result<_>>()?,
        MeasureSource::Static(name) => {
            let column = d
                .static_column(name)
                .ok_or_else(|| Error::MeasureUnavailable {
                    measure: name.clone(),
                    dataset: d.id.to_string(),
                })?;
            let flip = static_higher_is_consonant(name);
            column
                .iter()
                .map(|v| v.map(|v| if flip { -v } else { v }))
                .collect()
        }
    };
    let empirical: Vec<Option<f64>> = match mode {
        Mode::Ranks => d.items.iter().map(|i| Some(i.empirical)).collect(),
        Mode::Values => {
            if !d.has_rating() {
                return Err(Error::invalid(
                    "mode",
                    format!("dataset `{}` has ranks only", d.id),
                ));
            }
            let flip = d.id.rating_higher_is_consonant();
            d.items
                .iter()
                .map(|i| i.rating.map(|v| if flip { -v } else { v }))
                .collect()
        }
    };
    let (x, y): (Vec<f64>, Vec<f64>) = empirical
        .iter()
        .zip(&measure)
        .filter_map(|(e, m)| Some(((*e)?, (*m)?)))
        .unzip();
    let r = match mode {
        Mode::Ranks => pearson(&x, &rank_with_ties(&y, true))?,
        Mode::Values => pearson(&x, &y)?,
    };
    Ok(CorrelationReport {
        dataset: d.id,
        measure: source.name().to_string(),
        tuning: matches!(source, MeasureSource::Computed(_)).then(|| t.label()),
        mode,
        r,
        n: x.len(),
        p: significance(r, x.len())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::TuningName;

    fn load(id: DatasetId) -> EmpiricalDataset {
        EmpiricalDataset::from_csv(id, id.embedded_csv()).unwrap()
    }

    fn r(id: DatasetId, measure: &str, tuning: TuningName, mode: Mode) -> f64 {
        let t = TuningTable::builtin(tuning);
        correlate_measure(&load(id), &MeasureSource::parse(measure), &t, mode)
            .unwrap()
            .r
    }

    #[test]
    fn reference_correlations() {
        use DatasetId::*;
        use TuningName::*;
        assert!((r(Triads, "periodicity", Just, Mode::Ranks) - 0.846).abs() < 0.0005);
        assert!((r(CompleteTriads, "log_periodicity", Just, Mode::Values) - 0.810).abs() < 0.0005);
        assert!((r(Dyads, "similarity", Just, Mode::Ranks) - 0.977).abs() < 0.0005);
        assert!((r(ChurchModes, "log_periodicity", Rational, Mode::Ranks) - 0.964).abs() < 0.0005);
    }

    #[test]
    fn static_columns_need_no_tuning() {
        let t = TuningTable::builtin(TuningName::Just);
        let rep = correlate_measure(
            &load(DatasetId::Dyads),
            &MeasureSource::parse("roughness"),
            &t,
            Mode::Ranks,
        )
        .unwrap();
        assert_eq!(rep.tuning, None);
        assert!((rep.r - 0.967).abs() < 0.0005);
    }

    #[test]
    fn value_mode_skips_unrated_rows() {
        let t = TuningTable::builtin(TuningName::Just);
        let rep = correlate_measure(
            &load(DatasetId::ChurchModes),
            &MeasureSource::Computed(Measure::LogPeriodicity),
            &t,
            Mode::Values,
        )
        .unwrap();
        assert_eq!(rep.n, 6);
    }

    #[test]
    fn unavailable_inputs() {
        let t = TuningTable::builtin(TuningName::Just);
        let dyads = load(DatasetId::Dyads);
        assert!(matches!(
            correlate_measure(
                &dyads,
                &MeasureSource::parse("instability"),
                &t,
                Mode::Ranks
            ),
            Err(Error::MeasureUnavailable { .. })
        ));
        assert!(correlate_measure(
            &dyads,
            &MeasureSource::Computed(Measure::Periodicity),
            &t,
            Mode::Values
        )
        .is_err());
        let eq = TuningTable::builtin(TuningName::Equal);
        assert!(matches!(
            correlate_measure(
                &dyads,
                &MeasureSource::Computed(Measure::Periodicity),
                &eq,
                Mode::Ranks
            ),
            Err(Error::IrrationalTuning(_))
        ));
    }
}
