//! Parsing of chords given as semitone lists or scientific pitch names.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodicity::Harmony;

/// Concert pitch of A4 in Hz.
pub const A4_HZ: f64 = 440.0;
const A4_MIDI: i32 = 69;

/// A parsed chord with the frequency of its lowest tone when pitch names were given.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PitchSpec {
    pub harmony: Harmony,
    pub lowest_frequency: Option<f64>,
}

fn parse_error(token: &str, position: usize, reason: &str) -> Error {
    Error::Parse {
        token: token.to_string(),
        position,
        reason: reason.to_string(),
    }
}

/// MIDI number of a pitch name such as `C#4`, `Bb3` or `E-1`.
pub fn midi_number(token: &str, position: usize) -> Result<i32> {
    let mut chars = token.chars();
    let letter = chars
        .next()
        .ok_or_else(|| parse_error(token, position, "empty pitch"))?;
    let pc = match letter.to_ascii_uppercase() {
        'C' => 0,
        'D' => 2,
        'E' => 4,
        'F' => 5,
        'G' => 7,
        'A' => 9,
        'B' => 11,
        _ => return Err(parse_error(token, position, "note letter must be A to G")),
    };
    let rest = chars.as_str();
    let (accidental, octave) = match rest.chars().next() {
        Some('#') => (1, &rest[1..]),
        Some('b') => (-1, &rest[1..]),
        _ => (0, rest),
    };
    if octave.starts_with(['#', 'b']) {
        return Err(parse_error(
            token,
            position,
            "at most one accidental is allowed",
        ));
    }
    let octave: i32 = octave
        .parse()
        .map_err(|_| parse_error(token, position, "expected an octave number"))?;
    octave
        .checked_add(1)
        .and_then(|o| o.checked_mul(12))
        .and_then(|m| m.checked_add(pc + accidental))
        .ok_or_else(|| parse_error(token, position, "octave out of range"))
}

/// Frequency of a MIDI note in twelve-tone equal temperament.
pub fn midi_frequency(midi: i32) -> f64 {
    A4_HZ * ((midi - A4_MIDI) as f64 / 12.0).exp2()
}

/// Parses `"0,4,7"` or `"C4 E4 G4"`; tokens may be separated by commas or
/// whitespace. Pitch names fix only semitone positions, never the tuning.
pub fn parse_pitch_spec(text: &str) -> Result<PitchSpec> {
    let tokens: Vec<&str> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    let first = tokens
        .first()
        .ok_or(Error::EmptyInput("pitch specification"))?;
    let named = first.starts_with(|c: char| c.is_ascii_alphabetic());

    let mut values = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let v = if named {
            midi_number(tok, i + 1)?
        } else {
            tok.parse::<i32>()
                .map_err(|_| parse_error(tok, i + 1, "expected an integer semitone offset"))?
        };
        if let Some(j) = values.iter().position(|&w| w == v) {
            return Err(Error::InvalidHarmony(format!(
                "`{tok}` (position {}) repeats `{}` (position {})",
                i + 1,
                tokens[j],
                j + 1
            )));
        }
        values.push(v);
    }
    let lowest = *values.iter().min().expect("at least one token");
    Ok(PitchSpec {
        harmony: Harmony::new(values)?,
        lowest_frequency: named.then(|| midi_frequency(lowest)),
    })
}
