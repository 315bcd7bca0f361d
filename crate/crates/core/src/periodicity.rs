//! Relative and logarithmic periodicity of harmonies.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rationals::{lcm_many, Fraction};
use crate::tuning::TuningTable;

/// A chord or scale as semitone offsets above its lowest tone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Harmony {
    semitones: Vec<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl Harmony {
    /// Sorts the tones and shifts them so the lowest is 0. Duplicates are rejected.
    pub fn new(semitones: impl Into<Vec<i32>>) -> Result<Self> {
        let h = Self::with_unisons(semitones)?;
        if let Some(w) = h.semitones.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidHarmony(format!(
                "tone {} appears more than once",
                w[0]
            )));
        }
        Ok(h)
    }

    /// Like [`Harmony::new`] but keeps repeated tones, as in the unison dyad `0,0`.
    pub fn with_unisons(semitones: impl Into<Vec<i32>>) -> Result<Self> {
        let mut semitones = semitones.into();
        if semitones.is_empty() {
            return Err(Error::InvalidHarmony("no tones given".into()));
        }
        semitones.sort_unstable();
        let low = semitones[0];
        for s in &mut semitones {
            *s = s
                .checked_sub(low)
                .ok_or_else(|| Error::InvalidHarmony("tone range too wide".into()))?;
        }
        Ok(Harmony {
            semitones,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn semitones(&self) -> &[i32] {
        &self.semitones
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.semitones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.semitones.is_empty()
    }

    /// Drops repeated tones.
    pub fn distinct_tones(&self) -> Harmony {
        let mut semitones = self.semitones.clone();
        semitones.dedup();
        Harmony {
            semitones,
            label: self.label.clone(),
        }
    }

    /// Folds every tone into the octave above the lowest one, merging tones
    /// that land on the same pitch class.
    pub fn reduced_to_octave(&self) -> Harmony {
        let mut pcs: Vec<i32> = self.semitones.iter().map(|s| s.rem_euclid(12)).collect();
        pcs.sort_unstable();
        pcs.dedup();
        Harmony {
            semitones: pcs,
            label: self.label.clone(),
        }
    }
}

impl fmt::Display for Harmony {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.semitones.iter().map(i32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Harmony {
    type Err = Error;

    /// Parses comma- or whitespace-separated integers such as `0,4,7`.
    fn from_str(s: &str) -> Result<Self> {
        let mut tones = Vec::new();
        for (i, tok) in s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .enumerate()
        {
            tones.push(tok.parse::<i32>().map_err(|_| Error::Parse {
                token: tok.to_string(),
                position: i + 1,
                reason: "expected an integer semitone offset".into(),
            })?);
        }
        Harmony::new(tones)
    }
}

/// Periodicity analysis of one harmony under one tuning.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisResult {
    pub harmony: Harmony,
    pub tuning: String,
    /// Periodicity relative to the lowest tone, without inversion averaging.
    pub raw_h: u64,
    /// `h'_j` for each tone `j` taken as reference.
    pub inversion_h: Vec<Fraction>,
    pub mean_h: f64,
    pub mean_log_h: f64,
    pub extras: BTreeMap<String, f64>,
}

impl AnalysisResult {
    pub const CSV_HEADER: &'static str = "semitones;tuning;raw_h;mean_h;mean_log_h";

    /// One `;`-separated row; `mean_h` to one decimal and `mean_log_h` to three.
    pub fn csv_row(&self) -> String {
        format!(
            "{};{};{};{:.1};{:.3}",
            self.harmony, self.tuning, self.raw_h, self.mean_h, self.mean_log_h
        )
    }
}

/// Offsets of the harmony relative to its tone `i`.
pub fn inversion_offsets(h: &Harmony, i: usize) -> Result<Vec<i32>> {
    let reference = *h.semitones.get(i).ok_or_else(|| {
        Error::invalid(
            "inversion index",
            format!("{i} is out of range for {} tones", h.len()),
        )
    })?;
    Ok(h.semitones.iter().map(|s| s - reference).collect())
}

fn ratios_of(offsets: &[i32], t: &TuningTable) -> Result<Vec<Fraction>> {
    offsets.iter().map(|&n| t.ratio_for_semitone(n)).collect()
}

/// lcm of the ratio denominators, i.e. the period relative to the lowest tone.
pub fn raw_periodicity(h: &Harmony, t: &TuningTable) -> Result<u64> {
    let dens: Vec<u64> = ratios_of(&h.semitones, t)?
        .iter()
        .map(Fraction::denom)
        .collect();
    lcm_many(&dens)
}

/// `h'_i`: the periodicity with tone `i` as reference, rescaled to the period
/// of the lowest tone by the lowest ratio of that view.
pub fn inversion_periodicity(h: &Harmony, t: &TuningTable, i: usize) -> Result<Fraction> {
    let ratios = ratios_of(&inversion_offsets(h, i)?, t)?;
    let dens: Vec<u64> = ratios.iter().map(Fraction::denom).collect();
    let lowest = ratios.iter().min().expect("harmonies are nonempty");
    Fraction::integer(lcm_many(&dens)?)?.checked_mul(lowest)
}

/// Computes raw, averaged and logarithmic periodicity. With
/// `average_inversions` off only the lowest tone serves as reference.
pub fn analyze(h: &Harmony, t: &TuningTable, average_inversions: bool) -> Result<AnalysisResult> {
    let views = if average_inversions { h.len() } else { 1 };
    let inversion_h = (0..views)
        .map(|i| inversion_periodicity(h, t, i))
        .collect::<Result<Vec<_>>>()?;
    // keep the sum exact so means such as 32/3 do not pick up rounding drift
    let total = inversion_h[1..]
        .iter()
        .try_fold(inversion_h[0], |acc, x| acc.checked_add(x))?;
    let mean_h = total
        .checked_mul(&Fraction::new(1, views as u64)?)?
        .to_f64();
    let mean_log_h = inversion_h.iter().map(Fraction::log2).sum::<f64>() / views as f64;
    Ok(AnalysisResult {
        harmony: h.clone(),
        tuning: t.label(),
        raw_h: inversion_h[0].numer(),
        inversion_h,
        mean_h,
        mean_log_h,
        extras: BTreeMap::new(),
    })
}

/// Frequency of the common period of all tones when the lowest sounds at `f1`.
pub fn fundamental_frequency(h: &Harmony, t: &TuningTable, f1: f64) -> Result<f64> {
    if !(f1.is_finite() && f1 > 0.0) {
        return Err(Error::invalid(
            "frequency",
            format!("{f1} Hz is not positive"),
        ));
    }
    Ok(f1 / raw_periodicity(h, t)? as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::{TuningName, TuningTable};

    fn just() -> TuningTable {
        TuningTable::builtin(TuningName::Just)
    }

    fn harmony(s: &[i32]) -> Harmony {
        Harmony::new(s.to_vec()).unwrap()
    }

    fn frac(n: u64, d: u64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    #[test]
    fn harmony_normalization() {
        let h = Harmony::new(vec![7, 3, 10]).unwrap();
        assert_eq!(h.semitones(), &[0, 4, 7]);
        assert!(Harmony::new(vec![0, 4, 4]).is_err());
        assert!(Harmony::new(Vec::<i32>::new()).is_err());
        assert_eq!(
            Harmony::with_unisons(vec![0, 0]).unwrap().semitones(),
            &[0, 0]
        );
        assert_eq!(
            "0, 16 19".parse::<Harmony>().unwrap().semitones(),
            &[0, 16, 19]
        );
        assert!(matches!(
            "0,x".parse::<Harmony>(),
            Err(Error::Parse { position: 2, .. })
        ));
        assert_eq!(
            harmony(&[0, 16, 19]).reduced_to_octave().semitones(),
            &[0, 4, 7]
        );
        assert_eq!(harmony(&[0, 12]).reduced_to_octave().semitones(), &[0]);
    }

    #[test]
    fn raw_periodicity_examples() {
        assert_eq!(raw_periodicity(&harmony(&[0, 4, 7]), &just()).unwrap(), 4);
        assert_eq!(raw_periodicity(&harmony(&[0]), &just()).unwrap(), 1);
        assert_eq!(raw_periodicity(&harmony(&[0, 16, 19]), &just()).unwrap(), 2);
        let chromatic: Vec<i32> = (0..12).collect();
        assert_eq!(raw_periodicity(&harmony(&chromatic), &just()).unwrap(), 120);
        assert_eq!(
            raw_periodicity(&harmony(&[0, 12, 19, 24]), &just()).unwrap(),
            1
        );
    }

    #[test]
    fn equal_temperament_is_rejected() {
        let eq = TuningTable::builtin(TuningName::Equal);
        assert!(matches!(
            analyze(&harmony(&[0, 4, 7]), &eq, true),
            Err(Error::IrrationalTuning(_))
        ));
    }

    #[test]
    fn inversion_views() {
        let h = harmony(&[0, 3, 9]);
        assert_eq!(inversion_offsets(&h, 0).unwrap(), vec![0, 3, 9]);
        assert_eq!(inversion_offsets(&h, 1).unwrap(), vec![-3, 0, 6]);
        assert_eq!(inversion_offsets(&h, 2).unwrap(), vec![-9, -6, 0]);
        assert!(inversion_offsets(&h, 3).is_err());
    }

    #[test]
    fn diminished_triad_worked_example() {
        let r = analyze(&harmony(&[0, 3, 9]), &just(), true).unwrap();
        assert_eq!(r.inversion_h, vec![frac(15, 1), frac(25, 1), frac(6, 1)]);
        assert!((r.mean_h - 46.0 / 3.0).abs() < 1e-12);
        // log2 of the cube root of 15*25*6
        assert!((r.mean_log_h - 2250f64.log2() / 3.0).abs() < 1e-12);
        assert_eq!(r.raw_h, 15);
    }

    #[test]
    fn spread_major_triad() {
        let r = analyze(&harmony(&[0, 16, 19]), &just(), true).unwrap();
        assert_eq!(r.mean_h, 2.0);
        assert_eq!(r.mean_log_h, 1.0);
    }

    #[test]
    fn chromatic_scale() {
        let chromatic: Vec<i32> = (0..12).collect();
        let r = analyze(&harmony(&chromatic), &just(), true).unwrap();
        assert_eq!(r.raw_h, 120);
        assert!((r.mean_h - 1009.0 / 6.0).abs() < 1e-9);
        assert!((r.mean_log_h - 7.4).abs() < 0.05);
    }

    #[test]
    fn without_inversions_only_the_root_view_counts() {
        let r = analyze(&harmony(&[0, 3, 9]), &just(), false).unwrap();
        assert_eq!(r.inversion_h, vec![frac(15, 1)]);
        assert_eq!(r.mean_h, 15.0);
    }

    #[test]
    fn augmented_and_emaj9() {
        let aug = analyze(&harmony(&[0, 4, 8]), &just(), true).unwrap();
        assert!((aug.mean_h - 61.0 / 3.0).abs() < 1e-12);
        let e = analyze(&harmony(&[0, 2, 4, 7, 11]), &just(), true).unwrap();
        assert!((e.mean_log_h - 3.751).abs() < 5e-4);
    }

    #[test]
    fn fundamentals() {
        let f = fundamental_frequency(&harmony(&[0, 4, 7]), &just(), 440.0).unwrap();
        assert_eq!(f, 110.0);
        assert_eq!(
            fundamental_frequency(&harmony(&[0]), &just(), 440.0).unwrap(),
            440.0
        );
        let f = fundamental_frequency(&harmony(&[0, 16, 19]), &just(), 130.8).unwrap();
        assert!((f - 65.4).abs() < 1e-12);
        assert!(fundamental_frequency(&harmony(&[0]), &just(), 0.0).is_err());
    }

    #[test]
    fn csv_row_format() {
        let r = analyze(&harmony(&[0, 3, 9]), &just(), true).unwrap();
        assert_eq!(r.csv_row(), "0,3,9;just;15;15.3;3.712");
    }
}
