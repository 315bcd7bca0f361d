//! Rival consonance measures computed from the same frequency ratios.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodicity::{analyze, Harmony};
use crate::rationals::{big_omega, lcm_many, prime_factor_multiset, Fraction};
use crate::tuning::TuningTable;

/// Ratios of every tone relative to the lowest one.
fn lowest_tone_ratios(h: &Harmony, t: &TuningTable) -> Result<Vec<Fraction>> {
    h.semitones()
        .iter()
        .map(|&n| t.ratio_for_semitone(n))
        .collect()
}

/// Ratios of all unordered tone pairs.
fn pairwise_ratios(h: &Harmony, t: &TuningTable, measure: &'static str) -> Result<Vec<Fraction>> {
    if h.len() < 2 {
        return Err(Error::UndefinedMeasure {
            measure,
            reason: "a single tone".into(),
        });
    }
    let s = h.semitones();
    let mut out = Vec::with_capacity(s.len() * (s.len() - 1) / 2);
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            out.push(t.ratio_for_semitone(s[j] - s[i])?);
        }
    }
    Ok(out)
}

/// `lcm(a_i) * lcm(b_i)` over the lowest-tone ratios `a_i/b_i`.
fn euler_product(h: &Harmony, t: &TuningTable) -> Result<u64> {
    let ratios = lowest_tone_ratios(h, t)?;
    let nums: Vec<u64> = ratios.iter().map(Fraction::numer).collect();
    let dens: Vec<u64> = ratios.iter().map(Fraction::denom).collect();
    lcm_many(&nums)?
        .checked_mul(lcm_many(&dens)?)
        .ok_or(Error::Overflow("euler product"))
}

/// Euler's gradus suavitatis `1 + sum m_i (p_i - 1)`.
pub fn gradus_suavitatis(h: &Harmony, t: &TuningTable) -> Result<u64> {
    let factors = prime_factor_multiset(euler_product(h, t)?)?;
    Ok(1 + factors
        .iter()
        .map(|&(p, m)| m as u64 * (p - 1))
        .sum::<u64>())
}

/// Number of prime factors, with multiplicity, of the same product.
pub fn omega_measure(h: &Harmony, t: &TuningTable) -> Result<u32> {
    big_omega(euler_product(h, t)?)
}

/// Geometric mean of all numerators and denominators of the pairwise intervals.
pub fn brefeld_value(h: &Harmony, t: &TuningTable) -> Result<f64> {
    let ratios = pairwise_ratios(h, t, "brefeld")?;
    let log_sum: f64 = ratios
        .iter()
        .map(|r| (r.numer() as f64).ln() + (r.denom() as f64).ln())
        .sum();
    Ok((log_sum / (2 * ratios.len()) as f64).exp())
}

/// Mean of `(a + b - 1) / (a b)` over the pairwise intervals, in percent.
pub fn percentage_similarity(h: &Harmony, t: &TuningTable) -> Result<f64> {
    let ratios = pairwise_ratios(h, t, "similarity")?;
    let total: f64 = ratios
        .iter()
        .map(|r| {
            let (a, b) = (r.numer() as f64, r.denom() as f64);
            (a + b - 1.0) / (a * b)
        })
        .sum();
    Ok(100.0 * total / ratios.len() as f64)
}

/// Parametric roughness curve `(x/a * e^(1 - x/a))^b`, peaking at 1 for `x = a`.
pub fn roughness_curve(x: f64, a: f64, b: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::invalid("a", format!("{a} must be positive")));
    }
    if b.is_nan() || b <= 0.0 {
        return Err(Error::invalid("b", format!("{b} must be positive")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::invalid("x", format!("{x} must be non-negative")));
    }
    let u = x / a;
    Ok((u * (1.0 - u).exp()).powf(b))
}

/// The rival measures of one harmony. Pairwise measures are absent for a single tone.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureVector {
    pub gradus: u64,
    pub omega: u32,
    pub brefeld: Option<f64>,
    pub similarity: Option<f64>,
}

pub fn measure_vector(h: &Harmony, t: &TuningTable) -> Result<MeasureVector> {
    let pairwise = h.len() >= 2;
    Ok(MeasureVector {
        gradus: gradus_suavitatis(h, t)?,
        omega: omega_measure(h, t)?,
        brefeld: pairwise.then(|| brefeld_value(h, t)).transpose()?,
        similarity: pairwise.then(|| percentage_similarity(h, t)).transpose()?,
    })
}

/// A computable consonance measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Periodicity,
    LogPeriodicity,
    Similarity,
    Gradus,
    Omega,
    Brefeld,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Periodicity,
        Measure::LogPeriodicity,
        Measure::Similarity,
        Measure::Gradus,
        Measure::Omega,
        Measure::Brefeld,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Periodicity => "periodicity",
            Measure::LogPeriodicity => "log_periodicity",
            Measure::Similarity => "similarity",
            Measure::Gradus => "gradus",
            Measure::Omega => "omega",
            Measure::Brefeld => "brefeld",
        }
    }

    /// Similarity grows with consonance; every other measure shrinks.
    pub fn higher_is_consonant(&self) -> bool {
        matches!(self, Measure::Similarity)
    }

    /// Whether the measure needs at least two tones.
    pub fn is_pairwise(&self) -> bool {
        matches!(self, Measure::Similarity | Measure::Brefeld)
    }

    pub fn evaluate(&self, h: &Harmony, t: &TuningTable, average_inversions: bool) -> Result<f64> {
        Ok(match self {
            Measure::Periodicity => analyze(h, t, average_inversions)?.mean_h,
            Measure::LogPeriodicity => analyze(h, t, average_inversions)?.mean_log_h,
            Measure::Similarity => percentage_similarity(h, t)?,
            Measure::Gradus => gradus_suavitatis(h, t)? as f64,
            Measure::Omega => omega_measure(h, t)? as f64,
            Measure::Brefeld => brefeld_value(h, t)?,
        })
    }

    /// Formats a value at the precision used in printed tables.
    pub fn format_value(&self, value: f64) -> String {
        match self {
            Measure::Periodicity => format!("{value:.1}"),
            Measure::LogPeriodicity | Measure::Brefeld => format!("{value:.3}"),
            Measure::Similarity => format!("{value:.2}"),
            Measure::Gradus | Measure::Omega => format!("{value:.0}"),
        }
    }

    /// Maps a value so that larger always means less consonant.
    pub fn dissonance(&self, value: f64) -> f64 {
        if self.higher_is_consonant() {
            -value
        } else {
            value
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let found = match key.as_str() {
            "h" | "relative_periodicity" => Some(Measure::Periodicity),
            "log" | "log_h" | "logarithmic_periodicity" => Some(Measure::LogPeriodicity),
            _ => Measure::ALL.into_iter().find(|m| m.as_str() == key),
        };
        found.ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::TuningName;

    fn just() -> TuningTable {
        TuningTable::builtin(TuningName::Just)
    }

    fn harmony(s: &[i32]) -> Harmony {
        Harmony::new(s.to_vec()).unwrap()
    }

    #[test]
    fn gradus_examples() {
        assert_eq!(gradus_suavitatis(&harmony(&[0, 7]), &just()).unwrap(), 4);
        assert_eq!(gradus_suavitatis(&harmony(&[0]), &just()).unwrap(), 1);
        assert_eq!(gradus_suavitatis(&harmony(&[0, 12]), &just()).unwrap(), 2);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_measure(&harmony(&[0, 7]), &just()).unwrap(), 2);
        assert_eq!(omega_measure(&harmony(&[0]), &just()).unwrap(), 0);
        assert_eq!(omega_measure(&harmony(&[0, 4]), &just()).unwrap(), 3);
    }

    #[test]
    fn brefeld_examples() {
        let v = brefeld_value(&harmony(&[0, 7]), &just()).unwrap();
        assert!((v - 6f64.sqrt()).abs() < 1e-12);
        let v = brefeld_value(&harmony(&[0, 12]), &just()).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
        // pairwise 5/4, 3/2 and 6/5
        let v = brefeld_value(&harmony(&[0, 4, 7]), &just()).unwrap();
        assert!((v - 3600f64.powf(1.0 / 6.0)).abs() < 1e-12);
        assert!(matches!(
            brefeld_value(&harmony(&[0]), &just()),
            Err(Error::UndefinedMeasure { .. })
        ));
    }

    #[test]
    fn similarity_examples() {
        let s = |x: &[i32]| percentage_similarity(&harmony(x), &just()).unwrap();
        assert!((s(&[0, 7]) - 200.0 / 3.0).abs() < 1e-9);
        assert!((s(&[0, 4, 7]) - 46.666_666_666).abs() < 1e-6);
        assert!((s(&[0, 12]) - 100.0).abs() < 1e-12);
        assert!((s(&[0, 3, 6]) - 32.70).abs() < 0.005);
        let unison = Harmony::with_unisons(vec![0, 0]).unwrap();
        assert_eq!(percentage_similarity(&unison, &just()).unwrap(), 100.0);
    }

    #[test]
    fn roughness_examples() {
        assert_eq!(roughness_curve(0.3, 0.3, 2.0).unwrap(), 1.0);
        assert_eq!(roughness_curve(0.0, 0.25, 2.0).unwrap(), 0.0);
        let v = roughness_curve(0.5, 0.25, 2.0).unwrap();
        assert!((v - (2.0 * (-1f64).exp()).powi(2)).abs() < 1e-12);
        assert!(roughness_curve(0.1, 0.0, 2.0).is_err());
        assert!(roughness_curve(-0.1, 0.2, 2.0).is_err());
    }

    #[test]
    fn vector_skips_pairwise_for_single_tone() {
        let v = measure_vector(&harmony(&[0]), &just()).unwrap();
        assert_eq!(
            (v.gradus, v.omega, v.brefeld, v.similarity),
            (1, 0, None, None)
        );
        let v = measure_vector(&harmony(&[0, 7]), &just()).unwrap();
        assert_eq!(v.gradus, 4);
        assert!(v.similarity.is_some());
    }

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.as_str().parse::<Measure>().unwrap(), m);
        }
        assert_eq!("log".parse::<Measure>().unwrap(), Measure::LogPeriodicity);
        assert!("tonalness".parse::<Measure>().is_err());
        assert_eq!(Measure::Similarity.dissonance(40.0), -40.0);
        assert_eq!(Measure::Gradus.dissonance(4.0), 4.0);
    }
}
