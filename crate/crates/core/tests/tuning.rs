mod common;

use common::{PRINTED_DEVIATIONS, RATIONAL_COLUMN};
use harmony_core::{approximate, rational_tuning, Fraction, TuningName, TuningTable};
use proptest::prelude::*;

const RATIONAL_VALUED: [TuningName; 4] = [
    TuningName::Pythagorean,
    TuningName::Kirnberger3,
    TuningName::Rational,
    TuningName::Just,
];

#[test]
fn rational_tuning_matches_printed_column() {
    let t = rational_tuning(0.01).unwrap();
    for (k, &(a, b)) in RATIONAL_COLUMN.iter().enumerate() {
        assert_eq!(
            t.ratios().unwrap()[k],
            Fraction::new(a, b).unwrap(),
            "semitone {k}"
        );
    }
    assert_eq!(
        t.ratios().unwrap(),
        TuningTable::builtin(TuningName::Rational).ratios().unwrap()
    );
}

#[test]
fn deviations_match_printed_percentages() {
    for (name, printed) in PRINTED_DEVIATIONS {
        let t = TuningTable::builtin(name);
        for (k, &expected) in printed.iter().enumerate() {
            let got = t.deviation(k).unwrap();
            assert!(
                (got - expected).abs() <= 0.005 + 1e-9,
                "{name} semitone {k}: {got:.4} vs {expected}"
            );
        }
    }
}

#[test]
fn slightly_wider_bound_gives_just_tuning() {
    let t = rational_tuning(0.011).unwrap();
    assert_eq!(
        t.ratios().unwrap(),
        TuningTable::builtin(TuningName::Just).ratios().unwrap()
    );
}

#[test]
fn tables_are_strictly_increasing_and_span_an_octave() {
    for name in RATIONAL_VALUED {
        let r = TuningTable::builtin(name).ratios().unwrap().to_owned();
        assert_eq!(r[0], Fraction::ONE);
        assert_eq!(r[12], Fraction::integer(2).unwrap());
        assert!(r.windows(2).all(|w| w[0] < w[1]), "{name}");
    }
}

#[test]
fn csv_export_has_stable_header() {
    let csv = TuningTable::builtin(TuningName::Just).to_csv().unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("semitone,interval_name,numerator,denominator,deviation_percent")
    );
    assert_eq!(lines.nth(10), Some("10,minor seventh,9,5,1.02"));
}

proptest! {
    #[test]
    fn octave_doubling(n in -60i32..60, which in 0usize..4) {
        let t = TuningTable::builtin(RATIONAL_VALUED[which]);
        let up = t.ratio_for_semitone(n + 12).unwrap();
        let doubled = t.ratio_for_semitone(n).unwrap().scale_pow2(1).unwrap();
        prop_assert_eq!(up, doubled);
        prop_assert_eq!(t.ratio_for_semitone(0).unwrap(), Fraction::ONE);
    }

    #[test]
    fn rational_bound_is_respected(d in 0.0001f64..0.06) {
        match rational_tuning(d) {
            Ok(t) => {
                for k in 0..=12 {
                    prop_assert!(t.deviation(k).unwrap().abs() <= d * 100.0 + 1e-9);
                }
            }
            // rejected exactly when two neighbouring semitones share a fraction
            Err(_) => {
                let column: Vec<Fraction> = (0..13)
                    .map(|k| approximate((k as f64 / 12.0).exp2(), d).unwrap().result)
                    .collect();
                prop_assert!(column.windows(2).any(|w| w[1] <= w[0]), "d = {}", d);
            }
        }
    }
}
