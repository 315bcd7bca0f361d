//! Exhaustive ranking of all harmonies within one octave.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::periodicity::Harmony;
use crate::tuning::TuningTable;

/// Number of one-octave harmonies containing the root: `2^11`.
pub const HARMONY_COUNT: usize = 2048;

const VALUE_TIE_TOLERANCE: f64 = 1e-9;

fn check_cardinality(cardinality: Option<usize>) -> Result<()> {
    match cardinality {
        Some(k) if !(1..=12).contains(&k) => Err(Error::invalid(
            "cardinality",
            format!("{k} is outside 1..=12"),
        )),
        _ => Ok(()),
    }
}

/// Every subset of `0..12` that contains 0, optionally of one size only, in
/// lexicographic order of the semitone lists.
pub fn enumerate_harmonies(cardinality: Option<usize>) -> Result<Vec<Harmony>> {
    check_cardinality(cardinality)?;
    let mut out: Vec<Vec<i32>> = (0u32..1 << 11)
        .filter(|mask| cardinality.is_none_or(|k| mask.count_ones() as usize + 1 == k))
        .map(|mask| {
            std::iter::once(0)
                .chain((1..12).filter(|i| mask >> (i - 1) & 1 == 1))
                .collect()
        })
        .collect();
    out.sort_unstable();
    out.into_iter().map(Harmony::new).collect()
}

/// `C(11, k - 1)`: how many one-octave harmonies have `k` tones.
pub fn category_size(k: usize) -> usize {
    if !(1..=12).contains(&k) {
        return 0;
    }
    let r = k - 1;
    (0..r).fold(1, |acc, i| acc * (11 - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankRow {
    /// Competition rank within the row's cardinality; ties share the best rank.
    pub rank: usize,
    pub harmony: Harmony,
    pub cardinality: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankTable {
    pub tuning: String,
    pub measure: Measure,
    pub cardinality: Option<usize>,
    pub rows: Vec<RankRow>,
}

impl RankTable {
    pub const CSV_HEADER: &'static str = "rank;semitones;cardinality;value";

    pub fn find(&self, semitones: &[i32]) -> Option<&RankRow> {
        self.rows
            .iter()
            .find(|r| r.harmony.semitones() == semitones)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{};{};{};{}\n",
                row.rank,
                row.harmony,
                row.cardinality,
                self.measure.format_value(row.value)
            ));
        }
        out
    }
}

/// Evaluates `measure` (averaged over inversions) for every harmony of the
/// category, most consonant first, keeping the first `top` rows.
///
/// Ties in value are ordered by semitone list so output is reproducible.
/// Single tones are left out for pairwise measures, which need an interval.
pub fn rank_table(
    t: &TuningTable,
    measure: Measure,
    cardinality: Option<usize>,
    top: Option<usize>,
) -> Result<RankTable> {
    t.ratios()?;
    let harmonies: Vec<Harmony> = enumerate_harmonies(cardinality)?
        .into_iter()
        .filter(|h| !(measure.is_pairwise() && h.len() < 2))
        .collect();
    let mut scored = harmonies
        .into_par_iter()
        .map(|h| {
            let v = measure.evaluate(&h, t, true)?;
            Ok((measure.dissonance(v), v, h))
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| a.2.semitones().cmp(b.2.semitones()))
    });

    // (last oriented value, last rank, rows seen) per cardinality
    let mut state = [(f64::NAN, 0usize, 0usize); 13];
    let mut rows = Vec::with_capacity(scored.len());
    for (key, value, harmony) in scored {
        let k = harmony.len();
        let (last, last_rank, seen) = &mut state[k];
        *seen += 1;
        let tied = (key - *last).abs() <= VALUE_TIE_TOLERANCE * key.abs().max(1.0);
        if !tied {
            *last_rank = *seen;
        }
        *last = key;
        rows.push(RankRow {
            rank: *last_rank,
            harmony,
            cardinality: k,
            value,
        });
    }
    if let Some(n) = top {
        rows.truncate(n);
    }
    Ok(RankTable {
        tuning: t.label(),
        measure,
        cardinality,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::TuningName;

    #[test]
    fn category_counts() {
        assert_eq!(enumerate_harmonies(None).unwrap().len(), HARMONY_COUNT);
        assert_eq!(enumerate_harmonies(Some(7)).unwrap().len(), 462);
        let single = enumerate_harmonies(Some(1)).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].semitones(), &[0]);
        assert_eq!((1..=12).map(category_size).sum::<usize>(), HARMONY_COUNT);
        for k in 1..=12 {
            assert_eq!(
                enumerate_harmonies(Some(k)).unwrap().len(),
                category_size(k)
            );
        }
        assert!(enumerate_harmonies(Some(0)).is_err());
        assert!(enumerate_harmonies(Some(13)).is_err());
    }

    #[test]
    fn lexicographic_order() {
        let all = enumerate_harmonies(None).unwrap();
        assert_eq!(all[0].semitones(), &[0]);
        assert_eq!(all[1].semitones(), &[0, 1]);
        assert_eq!(all[2].semitones(), &[0, 1, 2]);
        assert_eq!(all.last().unwrap().semitones(), &[0, 11]);
        assert!(all.windows(2).all(|w| w[0].semitones() < w[1].semitones()));
    }

    #[test]
    fn emaj9_tops_five_tone_category() {
        let just = TuningTable::builtin(TuningName::Just);
        let t = rank_table(&just, Measure::LogPeriodicity, Some(5), Some(1)).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].harmony.semitones(), &[0, 2, 4, 7, 11]);
        assert!((t.rows[0].value - 3.751).abs() < 5e-4);
    }

    #[test]
    fn competition_ranks_share_ties() {
        let just = TuningTable::builtin(TuningName::Just);
        let t = rank_table(&just, Measure::Periodicity, Some(2), None).unwrap();
        // fourth and major sixth both average to 3
        let fourth = t.find(&[0, 5]).unwrap();
        let sixth = t.find(&[0, 9]).unwrap();
        assert_eq!(fourth.rank, sixth.rank);
        assert_eq!(t.find(&[0, 7]).unwrap().rank, 1);
        assert!(t.rows.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn similarity_ranks_high_values_first() {
        let just = TuningTable::builtin(TuningName::Just);
        let t = rank_table(&just, Measure::Similarity, None, None).unwrap();
        assert_eq!(t.rows.len(), HARMONY_COUNT - 1);
        assert_eq!(t.rows[0].harmony.semitones(), &[0, 7]);
    }

    #[test]
    fn csv_has_stable_header() {
        let just = TuningTable::builtin(TuningName::Just);
        let t = rank_table(&just, Measure::LogPeriodicity, Some(3), Some(2)).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(RankTable::CSV_HEADER));
        assert_eq!(lines.next(), Some("1;0,5,9;3;1.585"));
    }

    #[test]
    fn equal_temperament_cannot_be_ranked() {
        let eq = TuningTable::builtin(TuningName::Equal);
        assert!(rank_table(&eq, Measure::Periodicity, Some(3), None).is_err());
    }
}
