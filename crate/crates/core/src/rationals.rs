//! Exact positive fractions, lcm and prime factorization, and rational
//! approximation of reals by Stern-Brocot search.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Iteration cap for the approximation loops.
pub const MAX_ITERATIONS: usize = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

/// Least common multiple of a nonempty list of positive integers.
pub fn lcm_many(values: &[u64]) -> Result<u64> {
    let (first, rest) = values.split_first().ok_or(Error::EmptyInput("lcm input"))?;
    if values.contains(&0) {
        return Err(Error::invalid("lcm input", "values must be positive"));
    }
    rest.iter().try_fold(*first, |acc, &v| checked_lcm(acc, v))
}

/// Prime factorization of `n` as ascending `(prime, multiplicity)` pairs.
///
/// `1` factors into the empty list.
pub fn prime_factor_multiset(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::invalid(
            "factorization input",
            "zero has no factorization",
        ));
    }
    let mut n = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut m = 0;
        while n.is_multiple_of(p) {
            n /= p;
            m += 1;
        }
        if m > 0 {
            factors.push((p, m));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Ok(factors)
}

/// Number of prime factors of `n` counted with multiplicity (big omega).
pub fn big_omega(n: u64) -> Result<u32> {
    Ok(prime_factor_multiset(n)?.iter().map(|&(_, m)| m).sum())
}

/// A positive fraction, always stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::invalid(
                "fraction",
                format!("{num}/{den} is not a positive ratio"),
            ));
        }
        let g = gcd(num, den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn log2(&self) -> f64 {
        (self.num as f64).log2() - (self.den as f64).log2()
    }

    pub fn recip(&self) -> Self {
        Fraction {
            num: self.den,
            den: self.num,
        }
    }

    pub fn checked_mul(&self, other: &Fraction) -> Result<Fraction> {
        // cross-reduce first so intermediate products stay small
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        let num = (self.num / g1)
            .checked_mul(other.num / g2)
            .ok_or(Error::Overflow("fraction product"))?;
        let den = (self.den / g2)
            .checked_mul(other.den / g1)
            .ok_or(Error::Overflow("fraction product"))?;
        Ok(Fraction { num, den })
    }

    pub fn checked_add(&self, other: &Fraction) -> Result<Fraction> {
        let den = checked_lcm(self.den, other.den)?;
        let lhs = self
            .num
            .checked_mul(den / self.den)
            .ok_or(Error::Overflow("fraction sum"))?;
        let rhs = other
            .num
            .checked_mul(den / other.den)
            .ok_or(Error::Overflow("fraction sum"))?;
        let num = lhs
            .checked_add(rhs)
            .ok_or(Error::Overflow("fraction sum"))?;
        Fraction::new(num, den)
    }

    /// Multiplies by `2^exp`, where `exp` may be negative.
    pub fn scale_pow2(&self, exp: i32) -> Result<Fraction> {
        let factor = 1u64
            .checked_shl(exp.unsigned_abs())
            .filter(|_| exp.unsigned_abs() < 64)
            .ok_or(Error::Overflow("octave scaling"))?;
        let factor = Fraction {
            num: factor,
            den: 1,
        };
        if exp >= 0 {
            self.checked_mul(&factor)
        } else {
            self.checked_mul(&factor.recip())
        }
    }

    /// Relative deviation `self / x - 1`.
    pub fn relative_error(&self, x: f64) -> f64 {
        self.to_f64() / x - 1.0
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            token: s.to_string(),
            position: 1,
            reason: reason.to_string(),
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n = n
            .parse::<u64>()
            .map_err(|_| bad("numerator is not a positive integer"))?;
        let d = d
            .parse::<u64>()
            .map_err(|_| bad("denominator is not a positive integer"))?;
        Fraction::new(n, d).map_err(|_| bad("fraction must be positive"))
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A search bound `a/b`; unlike [`Fraction`] it may be `0/1`.
pub type Bound = (u64, u64);

/// Record of one run of [`approximate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproximationTrace {
    pub target: f64,
    pub precision: f64,
    /// Every fraction formed during the search, in order.
    pub mediants: Vec<Fraction>,
    /// The two parents whose numerators and denominators sum to the matching mediant.
    pub parents: Vec<(Bound, Bound)>,
    pub result: Fraction,
}

impl ApproximationTrace {
    pub fn relative_error(&self) -> f64 {
        self.result.relative_error(self.target)
    }
}

struct Window {
    lo: f64,
    hi: f64,
}

impl Window {
    fn contains(&self, (a, b): Bound) -> bool {
        let (a, b) = (a as f64, b as f64);
        self.lo * b <= a && a <= self.hi * b
    }

    fn below(&self, (a, b): Bound) -> bool {
        (a as f64) < self.lo * b as f64
    }
}

fn mediant_of(l: Bound, r: Bound) -> Result<Bound> {
    Ok((
        l.0.checked_add(r.0).ok_or(Error::Overflow("mediant"))?,
        l.1.checked_add(r.1).ok_or(Error::Overflow("mediant"))?,
    ))
}

/// `base + k * step`, component-wise.
fn jump(base: Bound, step: Bound, k: u64) -> Result<Bound> {
    let go = |x: u64, s: u64| {
        s.checked_mul(k)
            .and_then(|v| v.checked_add(x))
            .ok_or(Error::Overflow("mediant jump"))
    };
    Ok((go(base.0, step.0)?, go(base.1, step.1)?))
}

fn to_fraction(b: Bound) -> Result<Fraction> {
    Fraction::new(b.0, b.1)
}

/// Approximates `x` by the fraction with the smallest denominator inside
/// `[(1-p)x, (1+p)x]`.
///
/// Accelerated Stern-Brocot search: the bounds start at the integers around
/// `x` and each step jumps over the whole run of mediants that would fall on
/// the same side of the window. Comparisons are done in double precision by
/// cross-multiplication.
pub fn approximate(x: f64, p: f64) -> Result<ApproximationTrace> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid(
            "target",
            format!("{x} is not a positive real"),
        ));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(
            "precision",
            format!("{p} is outside (0, 1)"),
        ));
    }
    let window = Window {
        lo: (1.0 - p) * x,
        hi: (1.0 + p) * x,
    };
    let floor = x.floor();
    if floor >= u64::MAX as f64 {
        return Err(Error::Overflow("approximation bounds"));
    }
    let floor = floor as u64;
    let mut trace = ApproximationTrace {
        target: x,
        precision: p,
        mediants: Vec::new(),
        parents: Vec::new(),
        result: Fraction::ONE,
    };

    // An integer end point inside the window already has denominator 1.
    for candidate in [floor, floor + 1] {
        if candidate > 0 && window.contains((candidate, 1)) {
            trace.result = Fraction::integer(candidate)?;
            return Ok(trace);
        }
    }

    let mut left: Bound = (floor, 1);
    let mut right: Bound = (floor + 1, 1);
    for _ in 0..MAX_ITERATIONS {
        let mid = mediant_of(left, right)?;
        trace.mediants.push(to_fraction(mid)?);
        trace.parents.push((left, right));
        if window.contains(mid) {
            trace.result = to_fraction(mid)?;
            return Ok(trace);
        }

        let (moved, parents) = if window.below(mid) {
            // raise the left bound k times towards the right one
            let (al, bl) = (left.0 as f64, left.1 as f64);
            let (ar, br) = (right.0 as f64, right.1 as f64);
            let k = ((window.lo * bl - al) / (ar - window.lo * br))
                .floor()
                .max(1.0) as u64;
            let next = jump(left, right, k)?;
            left = next;
            (next, (left_before(next, right), right))
        } else {
            let (al, bl) = (left.0 as f64, left.1 as f64);
            let (ar, br) = (right.0 as f64, right.1 as f64);
            let k = ((ar - window.hi * br) / (window.hi * bl - al))
                .floor()
                .max(1.0) as u64;
            let next = jump(right, left, k)?;
            right = next;
            (next, (left, left_before(next, left)))
        };
        trace.mediants.push(to_fraction(moved)?);
        trace.parents.push(parents);
        if window.contains(moved) {
            trace.result = to_fraction(moved)?;
            return Ok(trace);
        }
    }
    Err(Error::NoConvergence(MAX_ITERATIONS))
}

/// The fraction one step back along a jump: `moved - step`.
fn left_before(moved: Bound, step: Bound) -> Bound {
    (moved.0 - step.0, moved.1 - step.1)
}

/// Successive mediants of the plain binary search between `0/1` and `1/1`
/// towards `x`, keeping each one that approximates `x` strictly better than
/// every earlier one.
///
/// Stops early when a mediant hits `x` exactly.
pub fn mediant_sequence(x: f64, steps: usize) -> Result<Vec<Fraction>> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::invalid("target", format!("{x} is outside (0, 1)")));
    }
    let mut left: Bound = (0, 1);
    let mut right: Bound = (1, 1);
    let mut best = f64::INFINITY;
    let mut out = Vec::with_capacity(steps);
    let mut iterations = 0;
    while out.len() < steps {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence(MAX_ITERATIONS));
        }
        let mid = mediant_of(left, right)?;
        let value = mid.0 as f64 / mid.1 as f64;
        let err = (value - x).abs();
        if err < best {
            best = err;
            out.push(to_fraction(mid)?);
        }
        match value.partial_cmp(&x) {
            Some(Ordering::Less) => left = mid,
            Some(Ordering::Greater) => right = mid,
            _ => break,
        }
    }
    Ok(out)
}
