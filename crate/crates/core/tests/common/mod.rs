//! Printed reference values shared by the integration tests.
#![allow(dead_code)]

use harmony_core::{Harmony, TuningName, TuningTable};

pub fn h(semitones: &[i32]) -> Harmony {
    Harmony::new(semitones.to_vec()).unwrap()
}

pub fn tuning(name: TuningName) -> TuningTable {
    TuningTable::builtin(name)
}

pub fn just() -> TuningTable {
    tuning(TuningName::Just)
}

pub fn rational() -> TuningTable {
    tuning(TuningName::Rational)
}

/// Rational column of the tuning table for semitones 0..=12.
pub const RATIONAL_COLUMN: [(u64, u64); 13] = [
    (1, 1),
    (16, 15),
    (9, 8),
    (6, 5),
    (5, 4),
    (4, 3),
    (17, 12),
    (3, 2),
    (8, 5),
    (5, 3),
    (16, 9),
    (15, 8),
    (2, 1),
];

/// Printed deviations from equal temperament in percent, per tuning, semitones 0..=12.
pub const PRINTED_DEVIATIONS: [(TuningName, [f64; 13]); 4] = [
    (
        TuningName::Pythagorean,
        [
            0.0, -0.56, 0.23, -0.34, 0.45, -0.11, 0.68, 0.11, -0.45, 0.34, -0.23, 0.57, 0.0,
        ],
    ),
    (
        TuningName::Kirnberger3,
        [
            0.0, -1.68, 0.23, 0.91, -0.79, -0.11, -0.56, 0.11, -1.57, -0.90, -0.23, -0.68, 0.0,
        ],
    ),
    (
        TuningName::Rational,
        [
            0.0, 0.68, 0.23, 0.91, -0.79, -0.11, 0.17, 0.11, 0.79, -0.90, -0.23, -0.68, 0.0,
        ],
    ),
    (
        TuningName::Just,
        [
            0.0, 0.68, 0.23, 0.91, -0.79, -0.11, -1.01, 0.11, 0.79, -0.90, 1.02, -0.68, 0.0,
        ],
    ),
];

/// Dyads: offsets, averaged periodicity and similarity in percent (just tuning).
pub const DYADS: [(&[i32], f64, f64); 13] = [
    (&[0, 0], 1.0, 100.0),
    (&[0, 12], 1.0, 100.0),
    (&[0, 7], 2.0, 66.67),
    (&[0, 5], 3.0, 50.0),
    (&[0, 4], 4.0, 40.0),
    (&[0, 9], 3.0, 46.67),
    (&[0, 8], 5.0, 30.0),
    (&[0, 3], 5.0, 33.33),
    (&[0, 6], 6.0, 31.43),
    (&[0, 10], 7.0, 28.89),
    (&[0, 2], 8.5, 22.22),
    (&[0, 11], 8.0, 18.33),
    (&[0, 1], 15.0, 12.5),
];

/// Triads: offsets, averaged periodicity (one decimal) and similarity in percent (just tuning).
pub const TRIADS: [(&[i32], f64, f64); 13] = [
    (&[0, 4, 7], 4.0, 46.67),
    (&[0, 3, 8], 5.0, 37.78),
    (&[0, 5, 9], 3.0, 45.56),
    (&[0, 3, 7], 10.0, 46.67),
    (&[0, 4, 9], 12.0, 45.56),
    (&[0, 5, 8], 15.0, 37.78),
    (&[0, 5, 7], 10.7, 46.30),
    (&[0, 2, 7], 14.3, 46.30),
    (&[0, 5, 10], 11.0, 42.96),
    (&[0, 3, 6], 17.0, 32.70),
    (&[0, 3, 9], 15.3, 37.14),
    (&[0, 6, 9], 13.3, 37.14),
    (&[0, 4, 8], 20.3, 36.67),
];

/// Church modes with printed log periodicity under just and rational tuning.
pub const CHURCH_MODES: [(&str, [i32; 7], f64, f64); 7] = [
    ("Ionian", [0, 2, 4, 5, 7, 9, 11], 5.701, 6.453),
    ("Mixolydian", [0, 2, 4, 5, 7, 9, 10], 5.998, 6.607),
    ("Lydian", [0, 2, 4, 6, 7, 9, 11], 5.830, 6.584),
    ("Dorian", [0, 2, 3, 5, 7, 9, 10], 5.863, 6.615),
    ("Aeolian", [0, 2, 3, 5, 7, 8, 10], 6.158, 6.767),
    ("Phrygian", [0, 1, 3, 5, 7, 8, 10], 6.023, 6.778),
    ("Locrian", [0, 1, 3, 5, 6, 8, 10], 6.033, 6.790),
];
