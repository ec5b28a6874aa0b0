//! Finite unions of half-open intervals with endpoints in `ℚ·π`.
//!
//! Endpoints are stored as the rational coefficient of π, so `[π/2, π)` is
//! `[1/2, 1)`. All operations are exact.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::scalar::ratio;
use crate::Error;

/// `(numerator, denominator)`.
pub type Fraction = (i64, i64);

/// Sorted, disjoint, nonempty, non-adjacent half-open intervals `[a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    intervals: Vec<(BigRational, BigRational)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Normalizes an arbitrary list of `[a, b)` pairs (empty ones dropped).
    pub fn new(list: impl IntoIterator<Item = (BigRational, BigRational)>) -> Self {
        let mut v: Vec<_> = list.into_iter().filter(|(a, b)| a < b).collect();
        v.sort();
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    /// `[a, b)` in units of π.
    pub fn interval(a: BigRational, b: BigRational) -> Self {
        Self::new([(a, b)])
    }

    /// Convenience for `[an/ad·π, bn/bd·π)`.
    pub fn from_ratios(list: &[(Fraction, Fraction)]) -> Self {
        Self::new(list.iter().map(|&((an, ad), (bn, bd))| (ratio(an, ad), ratio(bn, bd))))
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure in units of π.
    pub fn measure(&self) -> BigRational {
        self.intervals.iter().fold(BigRational::zero(), |acc, (a, b)| acc + (b - a))
    }

    /// Membership of `x·π`.
    pub fn contains(&self, x: &BigRational) -> bool {
        let idx = self.intervals.partition_point(|(a, _)| a <= x);
        idx > 0 && *x < self.intervals[idx - 1].1
    }

    /// Membership of the real number `omega` (radians).
    pub fn contains_radians(&self, omega: f64) -> bool {
        let x = omega / PI;
        let idx = self.intervals.partition_point(|(a, _)| a.to_f64().unwrap_or(f64::NAN) <= x);
        idx > 0 && x < self.intervals[idx - 1].1.to_f64().unwrap_or(f64::NAN)
    }

    pub fn boolean(&self, other: &Self, op: SetOp) -> Self {
        let mut pts: Vec<BigRational> = self
            .intervals
            .iter()
            .chain(&other.intervals)
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        let two = ratio(2, 1);
        let pieces = pts.windows(2).filter_map(|w| {
            let mid = (&w[0] + &w[1]) / &two;
            let (x, y) = (self.contains(&mid), other.contains(&mid));
            let keep = match op {
                SetOp::Union => x || y,
                SetOp::Intersect => x && y,
                SetOp::Difference => x && !y,
            };
            keep.then(|| (w[0].clone(), w[1].clone()))
        });
        Self::new(pieces)
    }

    pub fn union(&self, o: &Self) -> Self {
        self.boolean(o, SetOp::Union)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        self.boolean(o, SetOp::Intersect)
    }

    pub fn difference(&self, o: &Self) -> Self {
        self.boolean(o, SetOp::Difference)
    }

    /// `{scale·x + shift}`; a negative scale reverses orientation and the
    /// half-open convention is restored on the image.
    pub fn affine(&self, scale: &BigRational, shift: &BigRational) -> Result<Self, Error> {
        if scale.is_zero() {
            return Err(Error::DegenerateScale);
        }
        Ok(Self::new(self.intervals.iter().map(|(a, b)| {
            let (x, y) = (a * scale + shift, b * scale + shift);
            if scale.is_positive() {
                (x, y)
            } else {
                (y, x)
            }
        })))
    }

    pub fn translate(&self, shift: &BigRational) -> Self {
        Self { intervals: self.intervals.iter().map(|(a, b)| (a + shift, b + shift)).collect() }
    }

    /// Pairs of `[num, den]` endpoints, for JSON dumps.
    pub fn endpoint_pairs(&self) -> Vec<[[String; 2]; 2]> {
        self.intervals
            .iter()
            .map(|(a, b)| [rational_pair(a), rational_pair(b)])
            .collect()
    }
}

fn rational_pair(r: &BigRational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

/// A set invariant under translation by `period` (units of π), stored as its
/// trace on `[0, period)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicIntervalSet {
    period: BigRational,
    base: IntervalSet,
}

/// JSON form of a periodic set: base intervals on `[0, period)` in units of π.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicDump {
    pub period: [String; 2],
    pub intervals: Vec<[[String; 2]; 2]>,
}

impl PeriodicIntervalSet {
    /// The periodization `∪_n (set + n·period)`.
    pub fn periodize(period: BigRational, set: &IntervalSet) -> Result<Self, Error> {
        if !period.is_positive() {
            return Err(Error::Grid("period must be positive".into()));
        }
        let mut pieces = Vec::new();
        for (a, b) in set.intervals() {
            if b - a >= period {
                return Ok(Self { base: IntervalSet::interval(BigRational::zero(), period.clone()), period });
            }
            let k = (a / &period).floor();
            let (a0, b0) = (a - &k * &period, b - &k * &period);
            if b0 <= period {
                pieces.push((a0, b0));
            } else {
                pieces.push((a0, period.clone()));
                pieces.push((BigRational::zero(), b0 - &period));
            }
        }
        Ok(Self { base: IntervalSet::new(pieces), period })
    }

    pub fn period(&self) -> &BigRational {
        &self.period
    }

    pub fn base(&self) -> &IntervalSet {
        &self.base
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let k = (x / &self.period).floor();
        self.base.contains(&(x - k * &self.period))
    }

    /// Trace on a finite window `[lo, hi)`.
    pub fn restrict(&self, lo: &BigRational, hi: &BigRational) -> IntervalSet {
        let window = IntervalSet::interval(lo.clone(), hi.clone());
        let first: BigInt = (lo / &self.period).floor().to_integer() - 1;
        let last: BigInt = (hi / &self.period).ceil().to_integer() + 1;
        let mut n = first;
        let mut pieces = Vec::new();
        while n <= last {
            let shift = BigRational::from_integer(n.clone()) * &self.period;
            pieces.extend(self.base.translate(&shift).intervals().iter().cloned());
            n += 1;
        }
        IntervalSet::new(pieces).intersect(&window)
    }

    /// Set equality, decided on a common period.
    pub fn same_set(&self, o: &Self) -> bool {
        let l = rational_lcm(&self.period, &o.period);
        let zero = BigRational::zero();
        self.restrict(&zero, &l) == o.restrict(&zero, &l)
    }

    /// Density: measure per unit length.
    pub fn density(&self) -> BigRational {
        self.base.measure() / &self.period
    }

    pub fn dump(&self) -> PeriodicDump {
        PeriodicDump { period: rational_pair(&self.period), intervals: self.base.endpoint_pairs() }
    }
}

fn rational_lcm(a: &BigRational, b: &BigRational) -> BigRational {
    let num = (a.numer() * b.denom()).lcm(&(b.numer() * a.denom()));
    BigRational::new(num, a.denom() * b.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(list: &[(Fraction, Fraction)]) -> IntervalSet {
        IntervalSet::from_ratios(list)
    }

    #[test]
    fn adjacent_intervals_merge() {
        let a = s(&[((0, 1), (1, 1))]);
        let b = s(&[((1, 1), (2, 1))]);
        assert_eq!(a.union(&b), s(&[((0, 1), (2, 1))]));
    }

    #[test]
    fn intersection_and_difference() {
        let a = s(&[((0, 1), (2, 1))]);
        let b = s(&[((1, 1), (3, 1))]);
        assert_eq!(a.intersect(&b), s(&[((1, 1), (2, 1))]));
        assert_eq!(a.difference(&b), s(&[((0, 1), (1, 1))]));
    }

    #[test]
    fn affine_images() {
        let a = s(&[((1, 2), (1, 1))]);
        assert_eq!(a.affine(&ratio(2, 1), &ratio(0, 1)).unwrap(), s(&[((1, 1), (2, 1))]));
        let b = s(&[((0, 1), (1, 1))]);
        assert_eq!(b.affine(&ratio(1, 1), &ratio(2, 1)).unwrap(), s(&[((2, 1), (3, 1))]));
        assert!(matches!(b.affine(&ratio(0, 1), &ratio(0, 1)), Err(Error::DegenerateScale)));
        let c0 = s(&[((-1, 1), (-1, 2)), ((1, 2), (1, 1))]);
        assert_eq!(
            c0.affine(&ratio(2, 1), &ratio(0, 1)).unwrap(),
            s(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))])
        );
    }

    #[test]
    fn half_open_membership() {
        let a = s(&[((0, 1), (1, 1))]);
        assert!(a.contains(&ratio(0, 1)));
        assert!(!a.contains(&ratio(1, 1)));
    }

    #[test]
    fn periodic_reduction_and_restriction() {
        let e = PeriodicIntervalSet::periodize(ratio(4, 1), &s(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))])).unwrap();
        assert_eq!(e.base(), &s(&[((1, 1), (3, 1))]));
        assert!(e.contains(&ratio(5, 1)));
        assert!(!e.contains(&ratio(3, 1)));
        let w = e.restrict(&ratio(-4, 1), &ratio(4, 1));
        assert_eq!(w, s(&[((-3, 1), (-1, 1)), ((1, 1), (3, 1))]));
        let e8 = PeriodicIntervalSet::periodize(ratio(8, 1), &s(&[((1, 1), (3, 1)), ((5, 1), (7, 1))])).unwrap();
        assert!(e.same_set(&e8));
    }
}
