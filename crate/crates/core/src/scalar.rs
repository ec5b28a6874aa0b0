//! Scalars: exact elements of ℚ(√2) and the [`Scalar`] trait shared with `Complex64`.
//!
//! A value `q·2^e` with `e ∈ ½ℤ` is either rational or a rational multiple of √2,
//! and sums of both kinds land in ℚ(√2). Storing `a + b√2` keeps the field closed.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Which arithmetic a value uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Exact,
    Float,
}

/// Exact real number `rational + root2·√2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    rational: BigRational,
    root2: BigRational,
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: divide in the float domain after scaling.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl ExactScalar {
    pub fn new(rational: BigRational, root2: BigRational) -> Self {
        Self { rational, root2 }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self { rational: q, root2: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(ratio(num, den))
    }

    pub fn sqrt2() -> Self {
        Self { rational: BigRational::zero(), root2: BigRational::one() }
    }

    /// `2^(e_half/2)`.
    pub fn pow2_half(e_half: i64) -> Self {
        let two = BigRational::from_integer(2.into());
        let pow = |k: i64| -> BigRational {
            if k >= 0 {
                num_traits::pow(two.clone(), k as usize)
            } else {
                num_traits::pow(two.clone(), (-k) as usize).recip()
            }
        };
        if e_half.rem_euclid(2) == 0 {
            Self::from_rational(pow(e_half / 2))
        } else {
            Self { rational: BigRational::zero(), root2: pow((e_half - 1).div_euclid(2)) }
        }
    }

    /// `q·2^(e_half/2)`.
    pub fn scaled(q: BigRational, e_half: i64) -> Self {
        Self::pow2_half(e_half) * Self::from_rational(q)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn root2_part(&self) -> &BigRational {
        &self.root2
    }

    pub fn is_rational(&self) -> bool {
        self.root2.is_zero()
    }

    /// Canonical `(q, e_half)` with `q` a 2-adic unit when the value is a single
    /// monomial `q·2^(e_half/2)`. Zero maps to `(0, 0)`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        let (mut q, mut e) = match (self.rational.is_zero(), self.root2.is_zero()) {
            (true, true) => return Some((BigRational::zero(), 0)),
            (false, true) => (self.rational.clone(), 0i64),
            (true, false) => (self.root2.clone(), 1i64),
            (false, false) => return None,
        };
        let two = BigInt::from(2);
        let mut numer = q.numer().clone();
        let mut denom = q.denom().clone();
        while (&numer % &two).is_zero() {
            numer /= &two;
            e += 2;
        }
        while (&denom % &two).is_zero() {
            denom /= &two;
            e -= 2;
        }
        q = BigRational::new(numer, denom);
        Some((q, e))
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.rational) + ratio_to_f64(&self.root2) * std::f64::consts::SQRT_2
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.root2.is_zero()
    }

    /// Field inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let two = BigRational::from_integer(2.into());
        let norm = &self.rational * &self.rational - &two * &self.root2 * &self.root2;
        Some(Self { rational: &self.rational / &norm, root2: -(&self.root2 / &norm) })
    }

    /// Sign of the real number, decided exactly.
    pub fn signum(&self) -> i32 {
        let a = &self.rational;
        let b = &self.root2;
        let sa = if a.is_zero() { 0 } else if a.is_positive() { 1 } else { -1 };
        let sb = if b.is_zero() { 0 } else if b.is_positive() { 1 } else { -1 };
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // Opposite signs: compare a² with 2b².
        let lhs = a * a;
        let rhs = BigRational::from_integer(2.into()) * b * b;
        if lhs > rhs {
            sa
        } else if lhs < rhs {
            sb
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.root2.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "{}√2", self.root2),
            (false, false) => write!(f, "{} + {}√2", self.rational, self.root2),
        }
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar { rational: &self.rational + &o.rational, root2: &self.root2 + &o.root2 }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar { rational: &self.rational - &o.rational, root2: &self.root2 - &o.root2 }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let two = BigRational::from_integer(2.into());
        ExactScalar {
            rational: &self.rational * &o.rational + two * &self.root2 * &o.root2,
            root2: &self.rational * &o.root2 + &self.root2 * &o.rational,
        }
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &ExactScalar) -> ExactScalar {
        self * &o.recip().expect("division by exact zero")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { rational: -self.rational, root2: -self.root2 }
    }
}

/// Arithmetic needed by polynomial, sequence and matrix code.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_exact(x: &ExactScalar) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64;
    /// `2^(e_half/2)` in this scalar kind.
    fn pow2_half(e_half: i64) -> Self;
}

impl Scalar for ExactScalar {
    const KIND: ScalarKind = ScalarKind::Exact;
    fn zero() -> Self {
        ExactScalar::from_int(0)
    }
    fn one() -> Self {
        ExactScalar::from_int(1)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar::from_ratio(num, den)
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn pow2_half(e_half: i64) -> Self {
        ExactScalar::pow2_half(e_half)
    }
}

impl Scalar for Complex64 {
    const KIND: ScalarKind = ScalarKind::Float;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.to_complex()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn pow2_half(e_half: i64) -> Self {
        Complex64::new(2f64.powf(e_half as f64 / 2.0), 0.0)
    }
}
