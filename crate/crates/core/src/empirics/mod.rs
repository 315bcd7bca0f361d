//! Embedded rating datasets and the correlation statistics run against them.

mod correlate;
pub mod stats;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodicity::Harmony;

pub use correlate::{
    correlate_measure, correlate_measure_with, CorrelationReport, MeasureSource, Mode,
};

/// Environment variable naming a directory that replaces the embedded CSV files.
pub const DATA_DIR_ENV: &str = "HARMONY_DATA_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetId {
    Dyads,
    Triads,
    CompleteTriads,
    ChurchModes,
}

impl DatasetId {
    pub const ALL: [DatasetId; 4] = [
        DatasetId::Dyads,
        DatasetId::Triads,
        DatasetId::CompleteTriads,
        DatasetId::ChurchModes,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DatasetId::Dyads => "dyads",
            DatasetId::Triads => "triads",
            DatasetId::CompleteTriads => "complete_triads",
            DatasetId::ChurchModes => "church_modes",
        }
    }

    pub fn expected_len(&self) -> usize {
        match self {
            DatasetId::Dyads | DatasetId::Triads => 13,
            DatasetId::CompleteTriads => 19,
            DatasetId::ChurchModes => 7,
        }
    }

    /// Church-mode ratings are preferences; the triad ratings grow with dissonance.
    pub fn rating_higher_is_consonant(&self) -> bool {
        matches!(self, DatasetId::ChurchModes)
    }

    pub fn embedded_csv(&self) -> &'static str {
        match self {
            DatasetId::Dyads => include_str!("../../data/dyads.csv"),
            DatasetId::Triads => include_str!("../../data/triads.csv"),
            DatasetId::CompleteTriads => include_str!("../../data/complete_triads.csv"),
            DatasetId::ChurchModes => include_str!("../../data/church_modes.csv"),
        }
    }
}

impl fmt::Display for DatasetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        DatasetId::ALL
            .into_iter()
            .find(|d| d.as_str() == key)
            .ok_or_else(|| {
                Error::invalid(
                    "dataset",
                    format!("`{s}` (valid: dyads, triads, complete_triads, church_modes)"),
                )
            })
    }
}

/// Whether a larger value in the named static column means more consonant.
pub fn static_higher_is_consonant(column: &str) -> bool {
    matches!(column, "sonance" | "similarity")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalItem {
    pub label: String,
    pub harmony: Harmony,
    /// Empirical rank, 1 = most consonant; ties carry averaged ranks.
    pub empirical: f64,
    pub rating: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StaticColumn {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

/// A table of rated harmonies with the printed values of other measures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalDataset {
    pub id: DatasetId,
    pub items: Vec<EmpiricalItem>,
    has_rating: bool,
    pub static_columns: Vec<StaticColumn>,
}

const FIXED_COLUMNS: [&str; 3] = ["label", "semitones", "empirical"];

fn dataset_error(id: DatasetId, msg: impl fmt::Display) -> Error {
    Error::Dataset(format!("{id}: {msg}"))
}

fn parse_optional(id: DatasetId, field: &str) -> Result<Option<f64>> {
    if field.trim().is_empty() {
        return Ok(None);
    }
    field
        .trim()
        .parse::<f64>()
        .map(Some)
        .map_err(|_| dataset_error(id, format!("`{field}` is not a number")))
}

impl EmpiricalDataset {
    /// Loads the dataset from `$HARMONY_DATA_DIR/<id>.csv` when the variable is
    /// set, otherwise from the copy compiled into the library.
    pub fn load(id: DatasetId) -> Result<Self> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Self::load_from_dir(id, Path::new(&dir)),
            None => Self::from_csv(id, id.embedded_csv()),
        }
    }

    pub fn load_from_dir(id: DatasetId, dir: &Path) -> Result<Self> {
        let path = dir.join(format!("{id}.csv"));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| dataset_error(id, format!("{}: {e}", path.display())))?;
        Self::from_csv(id, &text)
    }

    pub fn from_csv(id: DatasetId, text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b';')
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| dataset_error(id, e))?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names.len() < 3 || names[..3] != FIXED_COLUMNS {
            return Err(dataset_error(
                id,
                "header must start with label;semitones;empirical",
            ));
        }
        let has_rating = names.get(3) == Some(&"rating");
        let first_static = if has_rating { 4 } else { 3 };
        let mut static_columns: Vec<StaticColumn> = names[first_static..]
            .iter()
            .map(|n| StaticColumn {
                name: n.to_string(),
                values: Vec::new(),
            })
            .collect();

        let mut items = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| dataset_error(id, e))?;
            let tones = record[1]
                .split(',')
                .map(|t| t.trim().parse::<i32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| dataset_error(id, format!("bad semitones `{}`", &record[1])))?;
            if tones.first() != Some(&0) {
                return Err(dataset_error(
                    id,
                    format!("`{}` must start at 0", &record[1]),
                ));
            }
            let label = record[0].to_string();
            let empirical = parse_optional(id, &record[2])?
                .ok_or_else(|| dataset_error(id, format!("{label} has no empirical rank")))?;
            let rating = if has_rating {
                parse_optional(id, &record[3])?
            } else {
                None
            };
            for (col, field) in static_columns
                .iter_mut()
                .zip(record.iter().skip(first_static))
            {
                col.values.push(parse_optional(id, field)?);
            }
            items.push(EmpiricalItem {
                harmony: Harmony::with_unisons(tones)?.with_label(label.clone()),
                label,
                empirical,
                rating,
            });
        }
        if items.len() != id.expected_len() {
            return Err(dataset_error(
                id,
                format!("expected {} rows, found {}", id.expected_len(), items.len()),
            ));
        }
        Ok(EmpiricalDataset {
            id,
            items,
            has_rating,
            static_columns,
        })
    }

    /// Serializes back to the `;`-separated layout it was read from.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(b';')
            .from_writer(Vec::new());
        let mut header: Vec<&str> = FIXED_COLUMNS.to_vec();
        if self.has_rating {
            header.push("rating");
        }
        header.extend(self.static_columns.iter().map(|c| c.name.as_str()));
        w.write_record(&header)
            .map_err(|e| dataset_error(self.id, e))?;
        let show = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for (row, item) in self.items.iter().enumerate() {
            let mut fields = vec![
                item.label.clone(),
                item.harmony.to_string(),
                item.empirical.to_string(),
            ];
            if self.has_rating {
                fields.push(show(item.rating));
            }
            fields.extend(self.static_columns.iter().map(|c| show(c.values[row])));
            w.write_record(&fields)
                .map_err(|e| dataset_error(self.id, e))?;
        }
        let bytes = w.into_inner().map_err(|e| dataset_error(self.id, e))?;
        String::from_utf8(bytes).map_err(|e| dataset_error(self.id, e))
    }

    pub fn has_rating(&self) -> bool {
        self.has_rating
    }

    pub fn static_column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.static_columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn static_column_names(&self) -> Vec<&str> {
        self.static_columns
            .iter()
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_datasets_load_with_expected_sizes() {
        for id in DatasetId::ALL {
            let d = EmpiricalDataset::from_csv(id, id.embedded_csv()).unwrap();
            assert_eq!(d.len(), id.expected_len(), "{id}");
            assert!(d.items.iter().all(|i| i.harmony.semitones()[0] == 0));
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        for id in DatasetId::ALL {
            let d = EmpiricalDataset::from_csv(id, id.embedded_csv()).unwrap();
            assert_eq!(d.to_csv().unwrap(), id.embedded_csv(), "{id}");
            let again = EmpiricalDataset::from_csv(id, &d.to_csv().unwrap()).unwrap();
            assert_eq!(again, d);
        }
    }

    #[test]
    fn unison_and_missing_rating() {
        let dyads =
            EmpiricalDataset::from_csv(DatasetId::Dyads, DatasetId::Dyads.embedded_csv()).unwrap();
        assert_eq!(dyads.items[0].harmony.semitones(), &[0, 0]);
        assert!(!dyads.has_rating());
        let modes = EmpiricalDataset::from_csv(
            DatasetId::ChurchModes,
            DatasetId::ChurchModes.embedded_csv(),
        )
        .unwrap();
        assert_eq!(modes.items[6].label, "Locrian");
        assert_eq!(modes.items[6].rating, None);
        assert_eq!(modes.static_column("sonance").unwrap()[0], Some(0.147));
    }

    #[test]
    fn malformed_csv_is_reported() {
        let bad = "label;semitones;empirical\nx;0,4;1\n";
        assert!(matches!(
            EmpiricalDataset::from_csv(DatasetId::Dyads, bad),
            Err(Error::Dataset(_))
        ));
        let bad = "name;semitones;empirical\n";
        assert!(EmpiricalDataset::from_csv(DatasetId::Dyads, bad).is_err());
        let bad = "label;semitones;empirical\nx;4,7;1\n";
        assert!(EmpiricalDataset::from_csv(DatasetId::Dyads, bad).is_err());
    }

    #[test]
    fn dataset_names() {
        assert_eq!(
            "complete-triads".parse::<DatasetId>().unwrap(),
            DatasetId::CompleteTriads
        );
        assert!("tetrads".parse::<DatasetId>().is_err());
    }
}
