//! Tuning tables: the five built-in tunings and generated rational tunings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rationals::{approximate, Fraction};

pub const INTERVAL_NAMES: [&str; 13] = [
    "unison",
    "minor second",
    "major second",
    "minor third",
    "major third",
    "perfect fourth",
    "tritone",
    "perfect fifth",
    "minor sixth",
    "major sixth",
    "minor seventh",
    "major seventh",
    "octave",
];

/// Deviation bound of the built-in rational tuning (1%).
pub const DEFAULT_DEVIATION: f64 = 0.01;

/// Rational tunings above this bound let neighbouring semitones collide.
pub const MAX_DEVIATION: f64 = 0.06;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TuningName {
    Equal,
    Pythagorean,
    Kirnberger3,
    Rational,
    Just,
}

impl TuningName {
    pub const ALL: [TuningName; 5] = [
        TuningName::Equal,
        TuningName::Pythagorean,
        TuningName::Kirnberger3,
        TuningName::Rational,
        TuningName::Just,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TuningName::Equal => "equal",
            TuningName::Pythagorean => "pythagorean",
            TuningName::Kirnberger3 => "kirnberger3",
            TuningName::Rational => "rational",
            TuningName::Just => "just",
        }
    }
}

impl fmt::Display for TuningName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TuningName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        TuningName::ALL
            .into_iter()
            .find(|t| t.as_str() == key)
            .ok_or_else(|| Error::UnknownTuning {
                given: s.to_string(),
            })
    }
}

/// Frequency ratios of the semitones 0..=12 for one tuning.
///
/// Equal temperament carries no ratios since its intervals are irrational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TuningTable {
    pub name: TuningName,
    ratios: Option<[Fraction; 13]>,
    /// Maximal deviation from equal temperament in percent (rational tunings only).
    pub deviation_bound: Option<f64>,
}

fn table(pairs: [(u64, u64); 13]) -> [Fraction; 13] {
    pairs.map(|(n, d)| Fraction::new(n, d).expect("static tuning ratios are positive"))
}

const PYTHAGOREAN: [(u64, u64); 13] = [
    (1, 1),
    (256, 243),
    (9, 8),
    (32, 27),
    (81, 64),
    (4, 3),
    (729, 512),
    (3, 2),
    (128, 81),
    (27, 16),
    (16, 9),
    (243, 128),
    (2, 1),
];

const KIRNBERGER3: [(u64, u64); 13] = [
    (1, 1),
    (25, 24),
    (9, 8),
    (6, 5),
    (5, 4),
    (4, 3),
    (45, 32),
    (3, 2),
    (25, 16),
    (5, 3),
    (16, 9),
    (15, 8),
    (2, 1),
];

const JUST: [(u64, u64); 13] = [
    (1, 1),
    (16, 15),
    (9, 8),
    (6, 5),
    (5, 4),
    (4, 3),
    (7, 5),
    (3, 2),
    (8, 5),
    (5, 3),
    (9, 5),
    (15, 8),
    (2, 1),
];

/// Looks up one of the five built-in tunings by name.
pub fn builtin_tuning(name: &str) -> Result<TuningTable> {
    Ok(TuningTable::builtin(name.parse()?))
}

/// Builds the tuning whose semitone `k` is the smallest-denominator fraction
/// within relative deviation `d` of `2^(k/12)`. `d` is a fraction, so 1% is `0.01`.
pub fn rational_tuning(d: f64) -> Result<TuningTable> {
    if !(d > 0.0 && d < MAX_DEVIATION) {
        return Err(Error::invalid(
            "deviation",
            format!("{d} is outside (0, {MAX_DEVIATION})"),
        ));
    }
    let mut ratios = [Fraction::ONE; 13];
    for (k, slot) in ratios.iter_mut().enumerate() {
        *slot = approximate(equal_ratio(k as i32), d)?.result;
    }
    if let Some(k) = (1..13).find(|&k| ratios[k] <= ratios[k - 1]) {
        return Err(Error::invalid(
            "deviation",
            format!("semitones {} and {k} collide at {}", k - 1, ratios[k]),
        ));
    }
    Ok(TuningTable {
        name: TuningName::Rational,
        ratios: Some(ratios),
        deviation_bound: Some(d * 100.0),
    })
}

/// `2^(k/12)`.
pub fn equal_ratio(k: i32) -> f64 {
    (k as f64 / 12.0).exp2()
}

impl TuningTable {
    pub fn builtin(name: TuningName) -> TuningTable {
        let ratios = match name {
            TuningName::Equal => None,
            TuningName::Pythagorean => Some(table(PYTHAGOREAN)),
            TuningName::Kirnberger3 => Some(table(KIRNBERGER3)),
            TuningName::Just => Some(table(JUST)),
            TuningName::Rational => {
                return rational_tuning(DEFAULT_DEVIATION).expect("1% rational tuning is valid")
            }
        };
        TuningTable {
            name,
            ratios,
            deviation_bound: None,
        }
    }

    /// A short identifier, e.g. `just` or `rational(1.1%)` for non-default bounds.
    pub fn label(&self) -> String {
        match self.deviation_bound {
            Some(d) if (d - DEFAULT_DEVIATION * 100.0).abs() > 1e-12 => {
                // strip binary noise such as 1.0999999999999999
                let d = (d * 1e9).round() / 1e9;
                format!("{}({d}%)", self.name)
            }
            _ => self.name.to_string(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.ratios.is_some()
    }

    pub fn ratios(&self) -> Result<&[Fraction; 13]> {
        self.ratios
            .as_ref()
            .ok_or_else(|| Error::IrrationalTuning(self.name.to_string()))
    }

    /// Ratio of semitone offset `n`, which may be negative or beyond the octave:
    /// `ratios[n mod 12] * 2^(n div 12)` with floor-based division.
    pub fn ratio_for_semitone(&self, n: i32) -> Result<Fraction> {
        let ratios = self.ratios()?;
        ratios[n.rem_euclid(12) as usize].scale_pow2(n.div_euclid(12))
    }

    /// Real-valued ratio of semitone `k`, available for every tuning.
    pub fn ratio_value(&self, k: usize) -> f64 {
        match &self.ratios {
            Some(r) => r[k].to_f64(),
            None => equal_ratio(k as i32),
        }
    }

    /// Signed deviation of semitone `k` (0..=12) from equal temperament, in percent.
    pub fn deviation(&self, k: usize) -> Result<f64> {
        if k > 12 {
            return Err(Error::invalid("semitone", format!("{k} is outside 0..=12")));
        }
        Ok((self.ratio_value(k) / equal_ratio(k as i32) - 1.0) * 100.0)
    }

    /// CSV export with header `semitone,interval_name,numerator,denominator,deviation_percent`.
    ///
    /// Equal temperament leaves the numerator and denominator columns empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "semitone",
            "interval_name",
            "numerator",
            "denominator",
            "deviation_percent",
        ])
        .map_err(csv_error)?;
        for (k, name) in INTERVAL_NAMES.iter().enumerate() {
            let (num, den) = match &self.ratios {
                Some(r) => (r[k].numer().to_string(), r[k].denom().to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([
                k.to_string(),
                name.to_string(),
                num,
                den,
                format!("{:.2}", self.deviation(k)?),
            ])
            .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Dataset(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Dataset(e.to_string()))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Dataset(e.to_string())
}
