//! Rank correlation and its one-sided significance.

use crate::error::{Error, Result};

/// Values closer than this (relative) share a rank. Exact ties can differ in
/// the last bits once logarithms are averaged in different orders.
pub const TIE_TOLERANCE: f64 = 1e-9;

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Ranks starting at 1; tied values share the mean of the positions they span.
pub fn rank_with_ties(values: &[f64], ascending: bool) -> Vec<f64> {
    let key = |i: usize| if ascending { values[i] } else { -values[i] };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && tied(key(order[start]), key(order[end])) {
            end += 1;
        }
        // positions start+1 ..= end
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

/// Pearson's product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::invalid(
            "samples",
            format!("lengths differ ({} vs {})", x.len(), y.len()),
        ));
    }
    if x.len() < 3 {
        return Err(Error::invalid("samples", "need at least 3 pairs"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "a sample has zero variance".into(),
        ));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's coefficient: Pearson on tie-averaged ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    pearson(&rank_with_ties(x, true), &rank_with_ties(y, true))
}

/// One-sided p-value for `H1: r > 0` from `t = r sqrt(n-2) / sqrt(1-r^2)`
/// on `n - 2` degrees of freedom.
pub fn significance(r: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::invalid("sample size", format!("{n} is below 3")));
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::invalid("r", format!("{r} is outside [-1, 1]")));
    }
    if r == 1.0 {
        return Ok(0.0);
    }
    if r == -1.0 {
        return Ok(1.0);
    }
    let df = (n - 2) as f64;
    Ok(student_t_sf(r * df.sqrt() / (1.0 - r * r).sqrt(), df))
}

/// Upper tail `P(T > t)` of Student's t distribution.
pub fn student_t_sf(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 0.5;
    }
    let tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    if t > 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // the continued fraction converges fast only on this side of the mean
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

const CF_MAX_ITERATIONS: usize = 200;
const CF_EPSILON: f64 = 1e-15;
const CF_TINY: f64 = 1e-300;

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + even * d);
        c = guard(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + odd * d);
        c = guard(1.0 + odd / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPSILON {
            break;
        }
    }
    h
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for positive arguments (Lanczos).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_average_ties() {
        assert_eq!(rank_with_ties(&[1.0, 1.0, 2.0], true), vec![1.5, 1.5, 3.0]);
        assert_eq!(rank_with_ties(&[3.0, 1.0, 2.0], true), vec![3.0, 1.0, 2.0]);
        assert_eq!(rank_with_ties(&[3.0, 1.0, 2.0], false), vec![1.0, 3.0, 2.0]);
        let col = [
            1.0, 1.0, 2.0, 3.0, 4.0, 3.0, 5.0, 5.0, 6.0, 7.0, 8.5, 8.0, 15.0,
        ];
        assert_eq!(
            rank_with_ties(&col, true),
            vec![1.5, 1.5, 3.0, 4.5, 6.0, 4.5, 7.5, 7.5, 9.0, 10.0, 12.0, 11.0, 13.0]
        );
        assert!(rank_with_ties(&[], true).is_empty());
    }

    #[test]
    fn near_equal_values_tie() {
        let a = 3.133_000_000_000_001;
        assert_eq!(rank_with_ties(&[a, 3.133, 1.0], true), vec![2.5, 2.5, 1.0]);
    }

    #[test]
    fn pearson_basics() {
        let x = [1.0, 2.0, 3.0, 5.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let y: Vec<f64> = x.iter().map(|v| -2.0 * v).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(
            pearson(&x, &[1.0; 4]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(pearson(&x, &x[..3]).is_err());
        assert!(pearson(&x[..2], &x[..2]).is_err());
    }

    #[test]
    fn significance_examples() {
        assert!((significance(0.607, 13).unwrap() - 0.0139).abs() < 5e-5);
        assert!((significance(0.786, 7).unwrap() - 0.0181).abs() < 5e-5);
        assert_eq!(significance(0.0, 9).unwrap(), 0.5);
        assert_eq!(significance(1.0, 9).unwrap(), 0.0);
        assert_eq!(significance(-1.0, 9).unwrap(), 1.0);
        assert!(significance(0.5, 2).is_err());
        assert!(significance(1.5, 9).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!(ln_gamma(1.0).abs() < 1e-13);
        assert!(ln_gamma(2.0).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        // I_x(1, 1) = x and I_x(a, 1) = x^a
        for x in [0.1, 0.5, 0.9] {
            assert!((regularized_incomplete_beta(1.0, 1.0, x) - x).abs() < 1e-12);
            assert!((regularized_incomplete_beta(3.0, 1.0, x) - x.powi(3)).abs() < 1e-12);
        }
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 0.0), 0.0);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 1.0), 1.0);
    }

    #[test]
    fn t_tail_with_one_degree_of_freedom_is_cauchy() {
        for t in [-3.0, -0.5, 0.7, 2.0, 10.0] {
            let cauchy = 0.5 - f64::atan(t) / std::f64::consts::PI;
            assert!((student_t_sf(t, 1.0) - cauchy).abs() < 1e-12, "t = {t}");
        }
    }
}
