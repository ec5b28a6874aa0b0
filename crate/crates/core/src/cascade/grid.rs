//! Piecewise-constant functions on dyadic grids and the cascade operator
//! `(Mh)(x) = Σ c_n h(2x − n)`, exact on cells.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::filter::QmfFilter;
use crate::laurent::{AnyPoly, LaurentPoly};
use crate::rng::{self, ProbeRng};
use crate::scalar::{ExactScalar, Scalar};
use crate::Error;

/// `h = Σ_k values[k]·χ_{[(n₀+k)2^{−J}, (n₀+k+1)2^{−J})}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn<S> {
    level: u32,
    offset: i64,
    values: Vec<S>,
}

pub type ExactGridFn = GridFn<ExactScalar>;

impl<S: Scalar> GridFn<S> {
    pub fn new(level: u32, offset: i64, values: Vec<S>) -> Self {
        let mut h = Self { level, offset, values };
        h.trim();
        h
    }

    pub fn zero(level: u32) -> Self {
        Self { level, offset: 0, values: Vec::new() }
    }

    /// `scale·χ_[a, b)` for integers `a < b`.
    pub fn box_int(a: i64, b: i64, scale: S) -> Self {
        Self::new(0, a, vec![scale; (b - a).max(0) as usize])
    }

    /// `χ_[a, b)` for dyadic rationals; errors on non-dyadic endpoints.
    pub fn indicator(a: &BigRational, b: &BigRational) -> Result<Self, Error> {
        let (Some(la), Some(lb), true) = (dyadic_level(a), dyadic_level(b), a < b) else {
            return Err(Error::Grid(format!("[{a}, {b}) needs dyadic endpoints with a < b")));
        };
        let level = la.max(lb);
        let scale = BigRational::from_integer(num_bigint::BigInt::one() << level);
        let lo = (a * &scale).to_integer().to_i64().ok_or_else(|| Error::Grid("endpoint too large".into()))?;
        let hi = (b * &scale).to_integer().to_i64().ok_or_else(|| Error::Grid("endpoint too large".into()))?;
        Ok(Self::new(level, lo, vec![S::one(); (hi - lo) as usize]))
    }

    fn trim(&mut self) {
        let lead = self.values.iter().take_while(|v| v.is_zero()).count();
        if lead == self.values.len() {
            self.values.clear();
            self.offset = 0;
            return;
        }
        self.values.drain(..lead);
        self.offset += lead as i64;
        while self.values.last().is_some_and(|v| v.is_zero()) {
            self.values.pop();
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Cell index range `[offset, offset + len)`.
    pub fn end(&self) -> i64 {
        self.offset + self.values.len() as i64
    }

    pub fn cell(&self, i: i64) -> S {
        let k = i - self.offset;
        if k < 0 || k >= self.values.len() as i64 {
            S::zero()
        } else {
            self.values[k as usize].clone()
        }
    }

    /// Support hull `[a, b)` as floats.
    pub fn support(&self) -> (f64, f64) {
        let d = (self.level as f64).exp2();
        (self.offset as f64 / d, self.end() as f64 / d)
    }

    pub fn eval(&self, x: f64) -> S {
        let i = (x * (self.level as f64).exp2()).floor() as i64;
        self.cell(i)
    }

    /// Same function on a finer grid.
    pub fn refine(&self, level: u32) -> Self {
        assert!(level >= self.level, "refine only goes to finer levels");
        let r = 1usize << (level - self.level);
        if self.is_zero() {
            return Self::zero(level);
        }
        let values = self.values.iter().flat_map(|v| std::iter::repeat_n(v.clone(), r)).collect();
        Self { level, offset: self.offset * r as i64, values }
    }

    /// The same function on the coarsest grid that represents it.
    pub fn coarsen(&self) -> Self {
        let mut h = self.clone();
        while h.level > 0 && !h.is_zero() {
            let start = h.offset.div_euclid(2) * 2;
            let end = h.end() + h.end().rem_euclid(2);
            let pairs_equal = (start..end).step_by(2).all(|i| h.cell(i) == h.cell(i + 1));
            if !pairs_equal {
                break;
            }
            let values = (start..end).step_by(2).map(|i| h.cell(i)).collect();
            h = Self::new(h.level - 1, start / 2, values);
        }
        if h.is_zero() {
            h.level = 0;
        }
        h
    }

    /// `ω·ĥ(ω)`, periodic with period `2π·2^J`.
    pub fn fourier_numerator(&self, omega: f64) -> Complex64 {
        let d = (-(self.level as f64)).exp2();
        let s: Complex64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v.to_complex() * Complex64::from_polar(1.0, -omega * (self.offset + k as i64) as f64 * d))
            .sum();
        s * Complex64::from_polar(2.0 * (omega * d / 2.0).sin(), -omega * d / 2.0)
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let l = a.level.max(b.level);
        (a.refine(l), b.refine(l))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = Self::aligned(self, o);
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let lo = a.offset.min(b.offset);
        let hi = a.end().max(b.end());
        Self::new(a.level, lo, (lo..hi).map(|i| a.cell(i) + b.cell(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.level, self.offset, self.values.iter().map(|v| v.clone() * s.clone()).collect())
    }

    /// `h(x − k)`.
    pub fn translate(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { level: self.level, offset: self.offset + (k << self.level), values: self.values.clone() }
    }

    /// `⟨h₁, h₂⟩ = ∫ conj(h₁) h₂ dx`.
    pub fn inner(&self, o: &Self) -> S {
        let (a, b) = Self::aligned(self, o);
        let lo = a.offset.max(b.offset);
        let hi = a.end().min(b.end());
        let s = (lo..hi).fold(S::zero(), |acc, i| acc + a.cell(i).conj() * b.cell(i));
        s * S::pow2_half(-2 * a.level as i64)
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self)
    }

    /// `π(α)h = Σ α_n h(x − n)`.
    pub fn pi_alpha(&self, alpha: &LaurentPoly<S>) -> Self {
        alpha
            .terms()
            .fold(Self::zero(self.level), |acc, (n, a)| acc.add(&self.translate(n).scale(a)))
    }

    /// `(Uh)(x) = 2^{−1/2} h(x/2)`; output level `J − 1` after refining `J = 0` inputs.
    pub fn dilate_half(&self) -> Self {
        let h = if self.level == 0 { self.refine(1) } else { self.clone() };
        Self::new(h.level - 1, h.offset, h.values.iter().map(|v| v.clone() * S::pow2_half(-1)).collect())
    }

    pub fn to_complex(&self) -> GridFn<Complex64> {
        GridFn {
            level: self.level,
            offset: self.offset,
            values: self.values.iter().map(Scalar::to_complex).collect(),
        }
    }

    /// Exact Fourier transform `ĥ(ω) = ∫ e^{−iωx} h(x) dx`.
    pub fn fourier(&self, omega: f64) -> Complex64 {
        let d = (-(self.level as f64)).exp2();
        let cell = Complex64::from_polar(d * sinc(omega * d / 2.0), -omega * d / 2.0);
        let s: Complex64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v.to_complex() * Complex64::from_polar(1.0, -omega * (self.offset + k as i64) as f64 * d))
            .sum();
        s * cell
    }
}

/// `sin(t)/t` with the removable singularity filled.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// Smallest `J` with `x·2^J ∈ ℤ`, or `None` if `x` is not dyadic.
pub fn dyadic_level(x: &BigRational) -> Option<u32> {
    let mut d = x.denom().clone();
    let two = num_bigint::BigInt::from(2);
    let mut level = 0;
    while d > num_bigint::BigInt::one() {
        if !(&d % &two).is_zero() {
            return None;
        }
        d /= &two;
        level += 1;
    }
    Some(level)
}

fn cascade_generic<S: Scalar>(c: &LaurentPoly<S>, h: &GridFn<S>) -> GridFn<S> {
    let step = 1i64 << h.level;
    if h.is_zero() || c.is_zero() {
        return GridFn::zero(h.level + 1);
    }
    let lo = h.offset + c.lo() * step;
    let hi = h.end() - 1 + c.hi() * step;
    let out = (lo..=hi)
        .map(|i| c.terms().fold(S::zero(), |acc, (n, cn)| acc + cn.clone() * h.cell(i - n * step)))
        .collect();
    GridFn::new(h.level + 1, lo, out)
}

/// `(M*h)(x) = ½ Σ conj(c_n) h((x + n)/2)`; output level `J − 1` after refining `J = 0` inputs.
pub fn cascade_adjoint_generic<S: Scalar>(c: &LaurentPoly<S>, h: &GridFn<S>) -> GridFn<S> {
    let h = if h.level == 0 { h.refine(1) } else { h.clone() };
    let level = h.level - 1;
    if h.is_zero() || c.is_zero() {
        return GridFn::zero(level);
    }
    let step = 1i64 << level;
    // Cell i reads level-J cells i + n·2^{J−1}.
    let lo = h.offset - c.hi() * step;
    let hi = h.end() - 1 - c.lo() * step;
    let half = S::from_ratio(1, 2);
    let out = (lo..=hi)
        .map(|i| {
            let s = c.terms().fold(S::zero(), |acc, (n, cn)| acc + cn.conj() * h.cell(i + n * step));
            s * half.clone()
        })
        .collect();
    GridFn::new(level, lo, out)
}

/// Generic cascade step for any scalar kind.
pub fn cascade_step_generic<S: Scalar>(c: &LaurentPoly<S>, h: &GridFn<S>) -> GridFn<S> {
    cascade_generic(c, h)
}

/// One cascade step on an exact grid function.
pub fn cascade_step(filter: &QmfFilter, h: &ExactGridFn) -> Result<ExactGridFn, Error> {
    match filter {
        QmfFilter::Laurent(AnyPoly::Exact(c)) => Ok(cascade_generic(c, h)),
        QmfFilter::Laurent(AnyPoly::Float(_)) => Err(Error::UnsupportedRepresentation { expected: "exact laurent" }),
        QmfFilter::Band(_) => Err(Error::UnsupportedRepresentation { expected: "laurent" }),
    }
}

/// One cascade step on a float grid function (any laurent filter).
pub fn cascade_step_float(filter: &QmfFilter, h: &GridFn<Complex64>) -> Result<GridFn<Complex64>, Error> {
    let c = filter.mask_float().ok_or(Error::UnsupportedRepresentation { expected: "laurent" })?;
    Ok(cascade_generic(&c, h))
}

/// `p₂(h₁, h₂)(z) = Σ_k z^k ∫ conj(h₁(x − k)) h₂(x) dx`.
pub fn correlation<S: Scalar>(h1: &GridFn<S>, h2: &GridFn<S>) -> LaurentPoly<S> {
    let (a, b) = GridFn::aligned(h1, h2);
    if a.is_zero() || b.is_zero() {
        return LaurentPoly::zero();
    }
    let unit = 1i64 << a.level;
    // Shifted supports overlap iff a.offset + k·unit < b.end and b.offset < a.end + k·unit.
    let k_lo = (b.offset - a.end()).div_euclid(unit);
    let k_hi = (b.end() - a.offset).div_euclid(unit) + 1;
    LaurentPoly::new(k_lo, (k_lo..=k_hi).map(|k| a.translate(k).inner(&b)).collect())
}

/// Random rational grid function with at most `max_cells` cells at level `≤ max_level`.
pub fn random_grid_fn(rng: &mut ProbeRng, max_level: u32, max_cells: usize) -> ExactGridFn {
    use rand::Rng;
    let level = rng.gen_range(0..=max_level);
    let len = rng.gen_range(1..=max_cells);
    let offset = rng.gen_range(-8..=8);
    let values = (0..len).map(|_| rng::rational(rng, 5, 4)).collect();
    GridFn::new(level, offset, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::ExactPoly;
    use crate::ruelle::apply_weight;
    use crate::scalar::ratio;

    fn one_third_box() -> ExactGridFn {
        GridFn::box_int(0, 3, ExactScalar::from_ratio(1, 3))
    }

    #[test]
    fn haar_fixed_point() {
        let phi = GridFn::box_int(0, 1, ExactScalar::from_int(1));
        let m = cascade_step(&QmfFilter::haar(), &phi).unwrap();
        assert_eq!(m, phi.refine(1));
    }

    #[test]
    fn cubic_fixed_point() {
        let phi = one_third_box();
        let m = cascade_step(&QmfFilter::cubic(), &phi).unwrap();
        assert_eq!(m, phi.refine(1));
        let z = ExactGridFn::zero(2);
        assert!(cascade_step(&QmfFilter::cubic(), &z).unwrap().is_zero());
        assert!(cascade_step(&QmfFilter::shannon(), &z).is_err());
    }

    #[test]
    fn correlations() {
        let phi = GridFn::box_int(0, 1, ExactScalar::from_int(1));
        assert_eq!(correlation(&phi, &phi), ExactPoly::one());
        let p = correlation(&one_third_box(), &one_third_box());
        assert_eq!(p, ExactPoly::from_ints(-2, &[1, 2, 3, 2, 1]).scale(&ExactScalar::from_ratio(1, 9)));
        let shifted = GridFn::box_int(1, 2, ExactScalar::from_int(1));
        assert_eq!(correlation(&phi, &shifted), ExactPoly::monomial(1, ExactScalar::from_int(1)));
    }

    #[test]
    fn transfer_identity_on_random_inputs() {
        let mut rng = rng::seeded(7);
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            let crate::laurent::AnyPoly::Exact(w) = f.modulus_squared().unwrap() else { panic!() };
            for _ in 0..10 {
                let h = random_grid_fn(&mut rng, 3, 16);
                let lhs = apply_weight(&w, &correlation(&h, &h));
                let mh = cascade_step(&f, &h).unwrap();
                assert_eq!(lhs, correlation(&mh, &mh));
                assert_eq!(lhs.mean(), mh.norm_sq());
            }
        }
    }

    #[test]
    fn adjoint_cascade() {
        let mut g = rng::seeded(21);
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            let c = f.mask_exact().unwrap().clone();
            for _ in 0..10 {
                let (h, k) = (random_grid_fn(&mut g, 3, 12), random_grid_fn(&mut g, 3, 12));
                let lhs = cascade_generic(&c, &h).inner(&k);
                let rhs = h.inner(&cascade_adjoint_generic(&c, &k));
                assert_eq!(lhs, rhs);
            }
        }
        // M*M = π(|m₀|²), which for Haar spreads φ onto its neighbours.
        let phi = GridFn::box_int(0, 1, ExactScalar::from_int(1));
        let c = QmfFilter::haar().mask_exact().unwrap().clone();
        let w = c.modulus_squared().scale(&ExactScalar::from_ratio(1, 2));
        assert_eq!(cascade_adjoint_generic(&c, &cascade_generic(&c, &phi)).coarsen(), phi.pi_alpha(&w));
    }

    #[test]
    fn dyadic_indicator() {
        let h: ExactGridFn = GridFn::indicator(&ratio(1, 4), &ratio(3, 2)).unwrap();
        assert_eq!(h.level(), 2);
        assert_eq!(h.norm_sq(), ExactScalar::from_ratio(5, 4));
        assert!(ExactGridFn::indicator(&ratio(0, 1), &ratio(7, 5)).is_err());
    }

    #[test]
    fn fourier_of_box() {
        let phi: ExactGridFn = GridFn::box_int(0, 1, ExactScalar::from_int(1));
        for &w in &[0.3, -2.0, 7.5, 1e-9] {
            let expect = Complex64::from_polar(1.0, -w / 2.0) * ((w / 2.0).sin() / (w / 2.0));
            assert!((phi.fourier(w) - expect).norm() < 1e-14);
        }
        // Refinement leaves the transform unchanged.
        assert!((phi.refine(3).fourier(2.2) - phi.fourier(2.2)).norm() < 1e-14);
    }

    #[test]
    fn dilation_halves_level() {
        let phi: ExactGridFn = GridFn::box_int(0, 1, ExactScalar::from_int(1));
        let u = phi.dilate_half();
        assert_eq!(u, GridFn::box_int(0, 2, ExactScalar::pow2_half(-1)));
        assert_eq!(u.norm_sq(), ExactScalar::from_int(1));
    }
}
