//! Laurent polynomials `Σ c_n zⁿ` on the unit circle.

use num_complex::Complex64;

use crate::scalar::{ExactScalar, Scalar, ScalarKind};
use crate::Error;

/// Finitely supported two-sided coefficient sequence. Canonical form has no
/// zero coefficient at either end; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<S> {
    lo: i64,
    coeffs: Vec<S>,
}

pub type ExactPoly = LaurentPoly<ExactScalar>;
pub type FloatPoly = LaurentPoly<Complex64>;

impl<S: Scalar> LaurentPoly<S> {
    pub fn new(lo: i64, coeffs: Vec<S>) -> Self {
        let mut p = Self { lo, coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { lo: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(0, vec![c])
    }

    pub fn monomial(n: i64, c: S) -> Self {
        Self::new(n, vec![c])
    }

    /// Integer coefficients starting at degree `lo`.
    pub fn from_ints(lo: i64, cs: &[i64]) -> Self {
        Self::new(lo, cs.iter().map(|&c| S::from_ratio(c, 1)).collect())
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lo = 0;
            return;
        }
        self.coeffs.drain(..lead);
        self.lo += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree; equals `lo - 1` for the zero polynomial.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `hi - lo`, or 0 for the zero polynomial.
    pub fn degree_span(&self) -> i64 {
        (self.coeffs.len() as i64 - 1).max(0)
    }

    pub fn coeff(&self, n: i64) -> S {
        let i = n - self.lo;
        if i < 0 || i >= self.coeffs.len() as i64 {
            S::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero `(degree, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &S)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Mean over the circle.
    pub fn mean(&self) -> S {
        self.coeff(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        // Horner in z, then the z^lo factor.
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex();
        }
        acc * z.powi(self.lo as i32)
    }

    /// Value at `z = ±1`, exact in the scalar kind.
    pub fn eval_sign(&self, negative: bool) -> S {
        self.terms().fold(S::zero(), |acc, (n, c)| {
            if negative && n.rem_euclid(2) == 1 {
                acc - c.clone()
            } else {
                acc + c.clone()
            }
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        Self::new(lo, (lo..=hi).map(|n| self.coeff(n) + o.coeff(n)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Coefficient convolution.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(self.lo + o.lo, out)
    }

    /// `z^k · p`.
    pub fn shift(&self, k: i64) -> Self {
        Self { lo: if self.is_zero() { 0 } else { self.lo + k }, coeffs: self.coeffs.clone() }
    }

    /// `conj(p)(z) = Σ conj(c_n) z^{-n}`, the pointwise conjugate on the circle.
    pub fn reflect_conj(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(-self.hi(), self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// `|p|²` as a Laurent polynomial.
    pub fn modulus_squared(&self) -> Self {
        self.mul(&self.reflect_conj())
    }

    /// `q_n = p_{2n}`, so that `q(z) = ½Σ_{w²=z} p(w)`.
    pub fn downsample_even(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lo = self.lo.div_euclid(2) + i64::from(self.lo.rem_euclid(2) != 0);
        let hi = self.hi().div_euclid(2);
        if lo > hi {
            return Self::zero();
        }
        Self::new(lo, (lo..=hi).map(|n| self.coeff(2 * n)).collect())
    }

    /// `p(z^k)` for `k ≥ 1`.
    pub fn upsample(&self, k: i64) -> Self {
        assert!(k >= 1, "upsampling factor must be positive");
        if self.is_zero() {
            return Self::zero();
        }
        let span = (self.coeffs.len() - 1) * k as usize + 1;
        let mut out = vec![S::zero(); span];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k as usize] = c.clone();
        }
        Self::new(self.lo * k, out)
    }

    /// `∫ conj(p)·q dμ = Σ conj(p_n) q_n`.
    pub fn inner(&self, o: &Self) -> S {
        self.terms().fold(S::zero(), |acc, (n, c)| acc + c.conj() * o.coeff(n))
    }

    pub fn to_float(&self) -> FloatPoly {
        LaurentPoly::new(self.lo, self.coeffs.iter().map(|c| c.to_complex()).collect())
    }

    pub fn kind(&self) -> ScalarKind {
        S::KIND
    }
}

impl FloatPoly {
    /// Largest coefficient modulus, or 0.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        Self::new(
            self.lo,
            self.coeffs
                .iter()
                .map(|c| if c.norm() <= tol { Complex64::new(0.0, 0.0) } else { *c })
                .collect(),
        )
    }
}

/// A polynomial whose scalar kind is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Exact(ExactPoly),
    Float(FloatPoly),
}

impl AnyPoly {
    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyPoly::Exact(_) => ScalarKind::Exact,
            AnyPoly::Float(_) => ScalarKind::Float,
        }
    }

    pub fn to_float(&self) -> FloatPoly {
        match self {
            AnyPoly::Exact(p) => p.to_float(),
            AnyPoly::Float(p) => p.clone(),
        }
    }
}

/// Two polynomials promoted to a common kind; float wins.
pub enum PolyPair {
    Exact(ExactPoly, ExactPoly),
    Float(FloatPoly, FloatPoly),
}

pub fn promote(p: &AnyPoly, q: &AnyPoly) -> PolyPair {
    match (p, q) {
        (AnyPoly::Exact(a), AnyPoly::Exact(b)) => PolyPair::Exact(a.clone(), b.clone()),
        _ => PolyPair::Float(p.to_float(), q.to_float()),
    }
}

/// Product of two polynomials of the same kind.
pub fn laurent_mul(p: &AnyPoly, q: &AnyPoly) -> Result<AnyPoly, Error> {
    match (p, q) {
        (AnyPoly::Exact(a), AnyPoly::Exact(b)) => Ok(AnyPoly::Exact(a.mul(b))),
        (AnyPoly::Float(a), AnyPoly::Float(b)) => Ok(AnyPoly::Float(a.mul(b))),
        _ => Err(Error::KindMismatch { left: p.kind(), right: q.kind() }),
    }
}
