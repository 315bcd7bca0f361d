//! Closed-form autocorrelation of a sum of pure tones, used as an independent
//! check on the lcm-based periodicity.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodicity::{raw_periodicity, Harmony};
use crate::tuning::TuningTable;

/// Relative tolerance of a full-height peak, multiplied by the tone count.
pub const PEAK_EPSILON: f64 = 1e-9;

/// Sine tones of ascending frequency.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToneStack {
    frequencies: Vec<f64>,
}

impl ToneStack {
    pub fn new(frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::EmptyInput("tone stack"));
        }
        if let Some(f) = frequencies.iter().find(|f| !(f.is_finite() && **f > 0.0)) {
            return Err(Error::invalid(
                "frequency",
                format!("{f} Hz is not positive"),
            ));
        }
        if frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("frequencies", "must be strictly ascending"));
        }
        Ok(ToneStack { frequencies })
    }

    /// The tones of a harmony whose lowest tone sounds at `f1`.
    pub fn from_harmony(h: &Harmony, t: &TuningTable, f1: f64) -> Result<Self> {
        let freqs = h
            .semitones()
            .iter()
            .map(|&n| Ok(f1 * t.ratio_for_semitone(n)?.to_f64()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(freqs)
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn lowest_period(&self) -> f64 {
        1.0 / self.frequencies[0]
    }

    pub fn shortest_period(&self) -> f64 {
        1.0 / self.frequencies[self.frequencies.len() - 1]
    }

    /// `rho(tau) = 1/2 * sum cos(2 pi f_i tau)`.
    pub fn autocorrelation(&self, tau: f64) -> f64 {
        0.5 * self
            .frequencies
            .iter()
            .map(|f| (TAU * f * tau).cos())
            .sum::<f64>()
    }

    /// Default scan step: fine against both the lowest and the highest tone.
    pub fn default_grid_step(&self) -> f64 {
        (self.lowest_period() / 1000.0).min(self.shortest_period() / 20.0)
    }

    /// Smallest `tau > 0` within `horizon` lowest periods where the
    /// autocorrelation returns to its value at 0, or `None` if there is none.
    ///
    /// The grid is scanned for local maxima that are high enough to sit next to
    /// a full peak. Each is polished by golden-section search and accepted once
    /// it reaches `rho(0) - k * PEAK_EPSILON`.
    pub fn detect_period(&self, horizon: f64, grid_step: Option<f64>) -> Result<Option<f64>> {
        if !(horizon >= 1.0 && horizon.is_finite()) {
            return Err(Error::invalid("horizon", format!("{horizon} is below 1")));
        }
        let step = grid_step.unwrap_or_else(|| self.default_grid_step());
        let max_step = self.shortest_period() / 20.0;
        if !(step > 0.0 && step <= max_step * (1.0 + 1e-12)) {
            return Err(Error::invalid(
                "grid step",
                format!("{step} s is outside (0, {max_step}]"),
            ));
        }
        let k = self.frequencies.len() as f64;
        let peak = self.autocorrelation(0.0);
        let accept = peak - PEAK_EPSILON * k;
        // rho drops at most 1/4 sum(w^2) d^2 within distance d of a full peak
        let curvature: f64 = self.frequencies.iter().map(|f| (TAU * f).powi(2)).sum();
        let coarse = accept - 0.25 * curvature * step * step;

        let limit = horizon * self.lowest_period();
        let n = (limit / step).ceil() as usize + 1;
        let rho = |i: usize| self.autocorrelation(i as f64 * step);
        let (mut prev, mut cur) = (rho(0), rho(1));
        for i in 1..n {
            let next = rho(i + 1);
            if cur >= coarse && cur >= prev && cur >= next {
                let tau = self.polish((i - 1) as f64 * step, (i + 1) as f64 * step);
                if tau <= limit * (1.0 + 1e-12) && self.autocorrelation(tau) >= accept {
                    return Ok(Some(tau));
                }
            }
            (prev, cur) = (cur, next);
        }
        Ok(None)
    }

    /// Golden-section maximization of the autocorrelation on `[a, b]`.
    fn polish(&self, mut a: f64, mut b: f64) -> f64 {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (self.autocorrelation(c), self.autocorrelation(d));
        for _ in 0..200 {
            if b - a <= f64::EPSILON * b.abs() {
                break;
            }
            if fc >= fd {
                b = d;
                (d, fd) = (c, fc);
                c = b - inv_phi * (b - a);
                fc = self.autocorrelation(c);
            } else {
                a = c;
                (c, fc) = (d, fd);
                d = a + inv_phi * (b - a);
                fd = self.autocorrelation(d);
            }
        }
        if fc >= fd {
            c
        } else {
            d
        }
    }
}

/// Outcome of comparing the detected period with the lcm prediction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub harmony: Harmony,
    pub tuning: String,
    pub f1: f64,
    pub raw_h: u64,
    pub detected_period: Option<f64>,
    pub implied_h: Option<f64>,
    pub relative_error: Option<f64>,
    pub agrees: bool,
}

/// Detects the period of `h` sounded at `f1` and compares it with `raw_h / f1`.
///
/// The search horizon is one lowest period beyond the prediction.
pub fn oracle_check(h: &Harmony, t: &TuningTable, f1: f64, tolerance: f64) -> Result<OracleReport> {
    let raw_h = raw_periodicity(h, t)?;
    let stack = ToneStack::from_harmony(&h.distinct_tones(), t, f1)?;
    let detected = stack.detect_period(raw_h as f64 + 1.0, None)?;
    let implied_h = detected.map(|tau| tau * f1);
    let relative_error = implied_h.map(|v| v / raw_h as f64 - 1.0);
    Ok(OracleReport {
        harmony: h.clone(),
        tuning: t.label(),
        f1,
        raw_h,
        detected_period: detected,
        implied_h,
        relative_error,
        agrees: relative_error.is_some_and(|e| e.abs() <= tolerance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::TuningName;

    #[test]
    fn autocorrelation_examples() {
        let s = ToneStack::new(vec![440.0, 550.0, 660.0]).unwrap();
        assert_eq!(s.autocorrelation(0.0), 1.5);
        assert!((s.autocorrelation(4.0 / 440.0) - 1.5).abs() < 1e-12);
        let one = ToneStack::new(vec![440.0]).unwrap();
        assert!((one.autocorrelation(1.0 / 440.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn detects_major_triad_period() {
        let s = ToneStack::new(vec![440.0, 550.0, 660.0]).unwrap();
        let tau = s.detect_period(5.0, None).unwrap().unwrap();
        assert!((tau * 440.0 / 4.0 - 1.0).abs() < 1e-7, "{tau}");
    }

    #[test]
    fn detects_single_tone_period() {
        let s = ToneStack::new(vec![440.0]).unwrap();
        let tau = s.detect_period(2.0, None).unwrap().unwrap();
        assert!((tau * 440.0 - 1.0).abs() < 1e-7, "{tau}");
    }

    #[test]
    fn irrational_fifth_has_no_period() {
        let s = ToneStack::new(vec![440.0, 440.0 * (7.0f64 / 12.0).exp2()]).unwrap();
        assert_eq!(s.detect_period(10.0, None).unwrap(), None);
    }

    #[test]
    fn rejects_bad_stacks_and_arguments() {
        assert!(ToneStack::new(vec![]).is_err());
        assert!(ToneStack::new(vec![440.0, 440.0]).is_err());
        assert!(ToneStack::new(vec![-1.0]).is_err());
        let s = ToneStack::new(vec![440.0]).unwrap();
        assert!(s.detect_period(0.5, None).is_err());
        assert!(s.detect_period(2.0, Some(1.0)).is_err());
    }

    #[test]
    fn oracle_matches_lcm() {
        let just = TuningTable::builtin(TuningName::Just);
        let h = Harmony::new(vec![0, 3, 9]).unwrap();
        let r = oracle_check(&h, &just, 220.0, 1e-6).unwrap();
        assert_eq!(r.raw_h, 15);
        assert!(r.agrees, "{r:?}");
    }
}
