//! Quadrature mirror filters: validation, high-pass partner, iterated products,
//! the kernel `D_n = |m₀⁽ⁿ⁾|²` and zero sets.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::interval::{IntervalSet, PeriodicIntervalSet};
use crate::laurent::{AnyPoly, ExactPoly, FloatPoly, LaurentPoly};
use crate::scalar::{ratio, ExactScalar, Scalar, ScalarKind};
use crate::Error;

/// Tolerance for float-kind filter identities.
pub const FLOAT_TOL: f64 = 1e-12;

/// Default cap on the degree span of iterated products.
pub const DEFAULT_DEGREE_BOUND: i64 = 1 << 16;

/// A low-pass filter `m₀`.
#[derive(Clone, Debug, PartialEq)]
pub enum QmfFilter {
    /// Mask `c_n = √2·a_n`, so `m₀(z) = mask(z)/√2`.
    Laurent(AnyPoly),
    /// `m₀ = √2·χ_support`, support of period 2π (stored in units of π).
    Band(PeriodicIntervalSet),
}

/// `c₀(z) ∈ [-π, π)` with `z = e^{-iω}`.
pub fn c0(z: Complex64) -> f64 {
    let w = -z.arg();
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Reduces `ω` (radians) into `[-π, π)`.
pub fn reduce_angle(omega: f64) -> f64 {
    (omega + PI).rem_euclid(2.0 * PI) - PI
}

impl QmfFilter {
    pub fn exact_mask(lo: i64, mask: &[(i64, i64)]) -> Self {
        QmfFilter::Laurent(AnyPoly::Exact(ExactPoly::new(
            lo,
            mask.iter().map(|&(n, d)| ExactScalar::from_ratio(n, d)).collect(),
        )))
    }

    pub fn float_mask(lo: i64, mask: &[f64]) -> Self {
        QmfFilter::Laurent(AnyPoly::Float(FloatPoly::new(
            lo,
            mask.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )))
    }

    /// Band filter with support `∪ set + 2πn`.
    pub fn band(set: &IntervalSet) -> Self {
        QmfFilter::Band(PeriodicIntervalSet::periodize(ratio(2, 1), set).expect("positive period"))
    }

    pub fn haar() -> Self {
        Self::exact_mask(0, &[(1, 1), (1, 1)])
    }

    /// `m₀(z) = (1 + z³)/√2`.
    pub fn cubic() -> Self {
        Self::exact_mask(0, &[(1, 1), (0, 1), (0, 1), (1, 1)])
    }

    pub fn shannon() -> Self {
        Self::band(&IntervalSet::from_ratios(&[((-1, 2), (1, 2))]))
    }

    /// Daubechies 4-tap mask in the `c_n = √2·a_n` scaling.
    pub fn daubechies4() -> Self {
        let s = 3f64.sqrt();
        Self::float_mask(0, &[(1.0 + s) / 4.0, (3.0 + s) / 4.0, (3.0 - s) / 4.0, (1.0 - s) / 4.0])
    }

    pub fn is_band(&self) -> bool {
        matches!(self, QmfFilter::Band(_))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            QmfFilter::Laurent(_) => "laurent",
            QmfFilter::Band(_) => "band",
        }
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        match self {
            QmfFilter::Laurent(p) => p.kind(),
            QmfFilter::Band(_) => ScalarKind::Exact,
        }
    }

    pub fn mask_exact(&self) -> Option<&ExactPoly> {
        match self {
            QmfFilter::Laurent(AnyPoly::Exact(p)) => Some(p),
            _ => None,
        }
    }

    pub fn mask_float(&self) -> Option<FloatPoly> {
        match self {
            QmfFilter::Laurent(p) => Some(p.to_float()),
            QmfFilter::Band(_) => None,
        }
    }

    pub fn band_support(&self) -> Option<&PeriodicIntervalSet> {
        match self {
            QmfFilter::Band(s) => Some(s),
            _ => None,
        }
    }

    /// Support on `[-π, π)`.
    pub fn band_window(&self) -> Option<IntervalSet> {
        self.band_support().map(|s| s.restrict(&ratio(-1, 1), &ratio(1, 1)))
    }

    /// `m₀(z)` for `z` on the circle.
    pub fn m0(&self, z: Complex64) -> Complex64 {
        match self {
            QmfFilter::Laurent(p) => {
                let v = match p {
                    AnyPoly::Exact(q) => q.eval(z),
                    AnyPoly::Float(q) => q.eval(z),
                };
                v / SQRT_2
            }
            QmfFilter::Band(_) => self.m0_omega(c0(z)),
        }
    }

    /// `m₀(e^{-iω})`.
    pub fn m0_omega(&self, omega: f64) -> Complex64 {
        match self {
            QmfFilter::Band(s) => {
                let inside = s.base().contains_radians(reduce_angle(omega).rem_euclid(2.0 * PI));
                Complex64::new(if inside { SQRT_2 } else { 0.0 }, 0.0)
            }
            _ => self.m0(Complex64::from_polar(1.0, -omega)),
        }
    }

    /// Exact `m₀` membership test for a band filter at `x·π`.
    pub fn band_contains(&self, x: &BigRational) -> Option<bool> {
        self.band_support().map(|s| s.contains(x))
    }

    /// `|m₀|²` in the filter's own scalar kind.
    pub fn modulus_squared(&self) -> Result<AnyPoly, Error> {
        match self {
            QmfFilter::Laurent(AnyPoly::Exact(p)) => {
                Ok(AnyPoly::Exact(p.modulus_squared().scale(&ExactScalar::from_ratio(1, 2))))
            }
            QmfFilter::Laurent(AnyPoly::Float(p)) => {
                Ok(AnyPoly::Float(p.modulus_squared().scale(&Complex64::new(0.5, 0.0))))
            }
            QmfFilter::Band(_) => Err(Error::UnsupportedRepresentation { expected: "laurent" }),
        }
    }

    /// Parses the JSON filter definition format.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing \"kind\"".into()))?;
        match kind {
            "laurent" => {
                let offset = v.get("offset").map_or(Ok(0), |o| {
                    o.as_i64().ok_or_else(|| Error::Parse("\"offset\" must be an integer".into()))
                })?;
                let scalar = v.get("scalar").and_then(Value::as_str).unwrap_or("exact");
                let mask = v
                    .get("mask")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("missing \"mask\" array".into()))?;
                match scalar {
                    "exact" => {
                        let cs = mask.iter().map(parse_exact).collect::<Result<Vec<_>, _>>()?;
                        Ok(QmfFilter::Laurent(AnyPoly::Exact(ExactPoly::new(offset, cs))))
                    }
                    "float" => {
                        let cs = mask
                            .iter()
                            .map(|e| parse_exact(e).map(|x| x.to_f64()).or_else(|_| parse_float(e)))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Self::float_mask(offset, &cs))
                    }
                    other => Err(Error::Parse(format!("unknown scalar kind {other:?}"))),
                }
            }
            "band" => {
                let support = v.get("support").ok_or_else(|| Error::Parse("missing \"support\"".into()))?;
                let arr = support.as_array().ok_or_else(|| Error::Parse("\"support\" must be an array".into()))?;
                // Either one interval [[a_num,a_den],[b_num,b_den]] or a list of them.
                let nested = arr.first().and_then(Value::as_array).and_then(|x| x.first()).is_some_and(Value::is_array);
                let intervals: Vec<&Value> = if nested { arr.iter().collect() } else { vec![support] };
                let mut pieces = Vec::new();
                for iv in intervals {
                    let ends = iv.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                        Error::Parse("interval must be [[a_num,a_den],[b_num,b_den]]".into())
                    })?;
                    let a = parse_rational(&ends[0])?;
                    let b = parse_rational(&ends[1])?;
                    if a >= b {
                        return Err(Error::Parse("interval endpoints must satisfy a < b".into()));
                    }
                    pieces.push((a, b));
                }
                Ok(Self::band(&IntervalSet::new(pieces)))
            }
            other => Err(Error::Parse(format!("unknown filter kind {other:?}"))),
        }
    }
}

fn parse_int(v: &Value) -> Result<BigInt, Error> {
    if let Some(i) = v.as_i64() {
        return Ok(i.into());
    }
    if let Some(s) = v.as_str() {
        return s.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("integer {s:?}: {e}")));
    }
    Err(Error::Parse(format!("expected an integer, found {v}")))
}

fn parse_rational(v: &Value) -> Result<BigRational, Error> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let n = parse_int(&pair[0])?;
            let d = parse_int(&pair[1])?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        Value::Number(_) if v.is_i64() => Ok(BigRational::from_integer(parse_int(v)?)),
        _ => Err(Error::Parse(format!("expected [num, den] or integer, found {v} (floats are not exact)"))),
    }
}

fn parse_exact(v: &Value) -> Result<ExactScalar, Error> {
    parse_rational(v).map(ExactScalar::from_rational)
}

fn parse_float(v: &Value) -> Result<f64, Error> {
    v.as_f64().ok_or_else(|| Error::Parse(format!("expected a number, found {v}")))
}

/// One axiom check.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Residual as a float; exact checks also fill `exact_residual`.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub kind: &'static str,
    pub scalar: ScalarKind,
    pub checks: Vec<AxiomCheck>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn exact_check(name: &'static str, r: &ExactScalar) -> AxiomCheck {
    AxiomCheck { name, pass: r.is_zero(), residual: r.to_f64().abs(), exact_residual: Some(r.to_string()) }
}

fn float_check(name: &'static str, r: f64) -> AxiomCheck {
    AxiomCheck { name, pass: r <= FLOAT_TOL, residual: r, exact_residual: None }
}

/// Largest `|Σ_n c_n conj(c_{n-2k}) − 2δ_k|` over `k`, on the even coefficients of `|c|²`.
fn qmf_defect<S: Scalar>(mask: &LaurentPoly<S>) -> Vec<S> {
    let auto = mask.modulus_squared();
    let mut out = Vec::new();
    let (lo, hi) = (auto.lo().div_euclid(2), auto.hi().div_euclid(2));
    for k in lo..=hi {
        let target = if k == 0 { S::from_ratio(2, 1) } else { S::zero() };
        out.push(auto.coeff(2 * k) - target);
    }
    out
}

/// Checks the low-pass, QMF and regularity axioms.
pub fn validate(filter: &QmfFilter) -> ValidationReport {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    match filter {
        QmfFilter::Laurent(AnyPoly::Exact(mask)) => {
            let low = mask.eval_sign(false) - ExactScalar::from_int(2);
            checks.push(exact_check("lowpass", &low));
            let defects = qmf_defect(mask);
            let worst = defects.iter().map(ExactScalar::abs).fold(ExactScalar::from_int(0), |a, b| {
                if (&b - &a).signum() > 0 {
                    b
                } else {
                    a
                }
            });
            checks.push(exact_check("qmf", &worst));
            checks.push(AxiomCheck { name: "continuity", pass: true, residual: 0.0, exact_residual: None });
            notes.push("laurent filters are trigonometric polynomials, hence continuous".into());
        }
        QmfFilter::Laurent(AnyPoly::Float(mask)) => {
            let low = (mask.eval_sign(false) - Complex64::new(2.0, 0.0)).norm();
            checks.push(float_check("lowpass", low));
            let worst = qmf_defect(mask).iter().map(|c| c.norm()).fold(0.0, f64::max);
            checks.push(float_check("qmf", worst));
            checks.push(AxiomCheck { name: "continuity", pass: true, residual: 0.0, exact_residual: None });
            notes.push("laurent filters are trigonometric polynomials, hence continuous".into());
        }
        QmfFilter::Band(support) => {
            let base = support.base();
            let shifted = PeriodicIntervalSet::periodize(ratio(2, 1), &base.translate(&ratio(1, 1)))
                .expect("positive period");
            let overlap = base.intersect(shifted.base()).measure();
            let cover = base.union(shifted.base()).measure();
            let defect = overlap + (ratio(2, 1) - cover).abs();
            checks.push(AxiomCheck {
                name: "qmf",
                pass: defect.is_zero(),
                residual: defect.to_f64().unwrap_or(f64::NAN),
                exact_residual: Some(format!("{defect}π")),
            });
            let window = support.restrict(&ratio(-1, 1), &ratio(1, 1));
            let zero = BigRational::zero();
            let near_zero = window.intervals().iter().any(|(a, b)| a.is_negative() && *b > zero);
            checks.push(AxiomCheck {
                name: "lowpass",
                pass: near_zero,
                residual: if near_zero { 0.0 } else { 1.0 },
                exact_residual: None,
            });
            checks.push(AxiomCheck { name: "continuity", pass: true, residual: 0.0, exact_residual: None });
            notes.push(
                "band filter: continuity at z=1 holds on a neighborhood of ω=0; elsewhere only almost everywhere".into(),
            );
            let at_pi = support.contains(&ratio(1, 1)) || support.contains(&ratio(-1, 1));
            notes.push(format!("m0(-1) = {}", if at_pi { "√2" } else { "0" }));
        }
    }
    ValidationReport { kind: filter.kind_name(), scalar: filter.scalar_kind(), checks, notes }
}

/// The high-pass partner `m₁(z) = z·conj(m₀(−z))`.
#[derive(Clone, Debug, PartialEq)]
pub enum HighPass {
    /// Mask `(m₁)_n = (−1)^{1−n} conj(c_{1−n})`, same √2 scaling as `m₀`.
    Laurent(AnyPoly),
    /// `|m₁| = √2·χ` of this set; `m₁(e^{-iω}) = e^{-iω}·√2·χ(ω)`.
    Band(PeriodicIntervalSet),
}

fn high_pass_mask<S: Scalar>(c: &LaurentPoly<S>) -> LaurentPoly<S> {
    if c.is_zero() {
        return LaurentPoly::zero();
    }
    let lo = 1 - c.hi();
    let hi = 1 - c.lo();
    LaurentPoly::new(
        lo,
        (lo..=hi)
            .map(|n| {
                let v = c.coeff(1 - n).conj();
                if (1 - n).rem_euclid(2) == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect(),
    )
}

impl HighPass {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            HighPass::Laurent(p) => p.to_float().eval(z) / SQRT_2,
            HighPass::Band(s) => {
                let inside = s.base().contains_radians(c0(z).rem_euclid(2.0 * PI));
                if inside {
                    z * SQRT_2
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }
}

pub fn high_pass(filter: &QmfFilter) -> HighPass {
    match filter {
        QmfFilter::Laurent(AnyPoly::Exact(c)) => HighPass::Laurent(AnyPoly::Exact(high_pass_mask(c))),
        QmfFilter::Laurent(AnyPoly::Float(c)) => HighPass::Laurent(AnyPoly::Float(high_pass_mask(c))),
        QmfFilter::Band(s) => {
            // |m₀(−z)| at ω is |m₀| at ω+π.
            let shifted = s.base().translate(&ratio(1, 1));
            HighPass::Band(PeriodicIntervalSet::periodize(ratio(2, 1), &shifted).expect("positive period"))
        }
    }
}

/// `{ω ∈ [−π, π) : [2^k ω] ∈ set}` for `set ⊂ [−π, π)` (units of π).
pub fn preimage_pow2(set: &IntervalSet, k: u32) -> IntervalSet {
    let scale = BigRational::new(BigInt::one(), BigInt::one() << k);
    let reps = 1i64 << k;
    let mut pieces = Vec::new();
    for m in -reps..reps {
        let shift = ratio(2 * m, 1) * &scale;
        let img = set.affine(&scale, &shift).expect("nonzero scale");
        pieces.extend(img.intervals().iter().cloned());
    }
    IntervalSet::new(pieces).intersect(&IntervalSet::from_ratios(&[((-1, 1), (1, 1))]))
}

/// `m₀⁽ⁿ⁾(z) = Π_{k<n} m₀(z^{2^k})`.
#[derive(Clone, Debug, PartialEq)]
pub enum FilterProduct {
    Laurent(AnyPoly),
    /// `2^{n/2}·χ_set` with `set ⊂ [−π, π)`.
    Band { n: u32, set: IntervalSet },
}

fn product_poly<S: Scalar>(mask: &LaurentPoly<S>, n: u32, bound: i64) -> Result<LaurentPoly<S>, Error> {
    let span = mask.degree_span();
    let total = span.saturating_mul((1i64 << n.min(62)) - 1);
    if total > bound {
        return Err(Error::Overflow { degree: total, bound });
    }
    let mut acc = LaurentPoly::one();
    for k in 0..n {
        acc = acc.mul(&mask.upsample(1 << k));
    }
    Ok(acc.scale(&S::pow2_half(-(n as i64))))
}

pub fn filter_product(filter: &QmfFilter, n: u32, bound: i64) -> Result<FilterProduct, Error> {
    assert!(n >= 1, "product depth must be at least 1");
    match filter {
        QmfFilter::Laurent(AnyPoly::Exact(c)) => Ok(FilterProduct::Laurent(AnyPoly::Exact(product_poly(c, n, bound)?))),
        QmfFilter::Laurent(AnyPoly::Float(c)) => Ok(FilterProduct::Laurent(AnyPoly::Float(product_poly(c, n, bound)?))),
        QmfFilter::Band(_) => {
            let base = filter.band_window().expect("band");
            let mut set = base.clone();
            for k in 1..n {
                set = set.intersect(&preimage_pow2(&base, k));
            }
            Ok(FilterProduct::Band { n, set })
        }
    }
}

/// `D_n = |m₀⁽ⁿ⁾|²`.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelDn {
    Laurent { n: u32, poly: AnyPoly },
    /// Height `2ⁿ` on `set ⊂ [−π, π)`.
    Band { n: u32, set: IntervalSet },
}

impl KernelDn {
    /// `∫ D_n dμ`; exact for exact and band kinds.
    pub fn mean_exact(&self) -> Option<ExactScalar> {
        match self {
            KernelDn::Laurent { poly: AnyPoly::Exact(p), .. } => Some(p.mean()),
            KernelDn::Laurent { .. } => None,
            KernelDn::Band { n, set } => {
                let h = BigRational::from_integer(BigInt::one() << *n);
                Some(ExactScalar::from_rational(h * set.measure() / ratio(2, 1)))
            }
        }
    }

    pub fn mean_f64(&self) -> f64 {
        match self {
            KernelDn::Laurent { poly, .. } => poly.to_float().mean().re,
            _ => self.mean_exact().expect("exact").to_f64(),
        }
    }

    pub fn eval_omega(&self, omega: f64) -> f64 {
        match self {
            KernelDn::Laurent { poly, .. } => poly.to_float().eval(Complex64::from_polar(1.0, -omega)).re,
            KernelDn::Band { n, set } => {
                if set.contains_radians(reduce_angle(omega)) {
                    (1u64 << n) as f64
                } else {
                    0.0
                }
            }
        }
    }
}

pub fn kernel_dn(filter: &QmfFilter, n: u32, bound: i64) -> Result<KernelDn, Error> {
    match filter_product(filter, n, bound)? {
        FilterProduct::Laurent(AnyPoly::Exact(p)) => Ok(KernelDn::Laurent { n, poly: AnyPoly::Exact(p.modulus_squared()) }),
        FilterProduct::Laurent(AnyPoly::Float(p)) => Ok(KernelDn::Laurent { n, poly: AnyPoly::Float(p.modulus_squared()) }),
        FilterProduct::Band { n, set } => Ok(KernelDn::Band { n, set }),
    }
}

/// Zeros of `m₀` on the circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ZeroSet {
    /// `c₀(N(m₀))`, exact.
    #[serde(serialize_with = "ser_interval")]
    Band(IntervalSet),
    /// Isolated roots as `ω ∈ [−π, π)`; the zero set has measure zero.
    Points { omegas: Vec<f64>, measure_zero: bool },
}

fn ser_interval<S: serde::Serializer>(s: &IntervalSet, ser: S) -> Result<S::Ok, S::Error> {
    s.endpoint_pairs().serialize(ser)
}

const ROOT_GRID: usize = 1 << 14;

fn refine_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    // Golden-section search on the modulus.
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-13 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if f(x1) <= f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    0.5 * (a + b)
}

pub fn zero_set(filter: &QmfFilter) -> ZeroSet {
    match filter {
        QmfFilter::Band(_) => {
            let w = filter.band_window().expect("band");
            ZeroSet::Band(IntervalSet::from_ratios(&[((-1, 1), (1, 1))]).difference(&w))
        }
        QmfFilter::Laurent(_) => {
            let f = |omega: f64| filter.m0_omega(omega).norm();
            let step = 2.0 * PI / ROOT_GRID as f64;
            let vals: Vec<f64> = (0..ROOT_GRID).map(|j| f(-PI + j as f64 * step)).collect();
            let mut roots = Vec::new();
            for j in 0..ROOT_GRID {
                let prev = vals[(j + ROOT_GRID - 1) % ROOT_GRID];
                let next = vals[(j + 1) % ROOT_GRID];
                if vals[j] <= prev && vals[j] < next && vals[j] < 1e-2 {
                    let centre = -PI + j as f64 * step;
                    let w = refine_min(&f, centre - step, centre + step);
                    if f(w) < 1e-6 {
                        roots.push(reduce_angle(w));
                    }
                }
            }
            roots.sort_by(f64::total_cmp);
            ZeroSet::Points { omegas: roots, measure_zero: true }
        }
    }
}

/// `c₀(σ^{−k}(N(m₀)))` for a band filter.
pub fn zero_set_preimage(filter: &QmfFilter, k: u32) -> Result<IntervalSet, Error> {
    match zero_set(filter) {
        ZeroSet::Band(n) => Ok(preimage_pow2(&n, k)),
        ZeroSet::Points { .. } => Err(Error::UnsupportedRepresentation { expected: "band" }),
    }
}

/// Low-pass mean `∫ m₀⁽ⁿ⁾ dμ`; `(a₀)ⁿ` for causal masks.
pub fn product_mean(p: &FilterProduct) -> Option<ExactScalar> {
    match p {
        FilterProduct::Laurent(AnyPoly::Exact(q)) => Some(q.mean()),
        _ => None,
    }
}

/// Radians for an endpoint stored in units of π.
pub fn to_radians(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN) * PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::grid_point;

    #[test]
    fn reference_filters_validate() {
        for f in [QmfFilter::haar(), QmfFilter::cubic(), QmfFilter::shannon(), QmfFilter::daubechies4()] {
            let r = validate(&f);
            assert!(r.all_pass(), "{r:?}");
        }
        let r = validate(&QmfFilter::haar());
        assert!(r.checks.iter().all(|c| c.residual == 0.0));
    }

    #[test]
    fn perturbed_haar_fails_qmf() {
        let r = validate(&QmfFilter::exact_mask(0, &[(1, 1), (11, 10)]));
        assert!(!r.check("qmf").unwrap().pass);
    }

    #[test]
    fn shannon_vanishes_at_minus_one() {
        let f = QmfFilter::shannon();
        assert_eq!(f.m0(Complex64::new(-1.0, 0.0)).norm(), 0.0);
        assert_eq!(f.m0(Complex64::new(1.0, 0.0)).re, SQRT_2);
        assert!(validate(&f).notes.iter().any(|n| n == "m0(-1) = 0"));
    }

    #[test]
    fn haar_high_pass_mask() {
        let HighPass::Laurent(AnyPoly::Exact(m1)) = high_pass(&QmfFilter::haar()) else { panic!() };
        assert_eq!(m1, ExactPoly::from_ints(0, &[-1, 1]));
        // Oracle: z·conj(m₀(−z)) at 64 samples.
        let f = QmfFilter::haar();
        let hp = high_pass(&f);
        for j in 0..64 {
            let z = grid_point(j, 64);
            let direct = z * f.m0(-z).conj();
            assert!((hp.eval(z) - direct).norm() < 1e-14);
        }
        assert!(hp.eval(Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shannon_high_pass_support() {
        let f = QmfFilter::shannon();
        let HighPass::Band(s) = high_pass(&f) else { panic!() };
        let w = s.restrict(&ratio(-1, 1), &ratio(1, 1));
        assert_eq!(w, IntervalSet::from_ratios(&[((-1, 1), (-1, 2)), ((1, 2), (1, 1))]));
        let hp = high_pass(&f);
        for j in 0..64 {
            let z = grid_point(j, 64);
            let direct = z * f.m0(-z).conj();
            assert!((hp.eval(z) - direct).norm() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn haar_product_depth_two() {
        let FilterProduct::Laurent(AnyPoly::Exact(p)) = filter_product(&QmfFilter::haar(), 2, DEFAULT_DEGREE_BOUND).unwrap()
        else {
            panic!()
        };
        assert_eq!(p, ExactPoly::from_ints(0, &[1, 1, 1, 1]).scale(&ExactScalar::from_ratio(1, 2)));
        let f = QmfFilter::haar();
        for j in 0..64 {
            let z = grid_point(j, 64);
            assert!((p.eval(z) - f.m0(z) * f.m0(z * z)).norm() < 1e-13);
        }
    }

    #[test]
    fn product_recursion_and_overflow_guard() {
        let f = QmfFilter::cubic();
        let c = f.mask_exact().unwrap().clone();
        for n in 1..6 {
            let FilterProduct::Laurent(AnyPoly::Exact(a)) = filter_product(&f, n, DEFAULT_DEGREE_BOUND).unwrap() else { panic!() };
            let FilterProduct::Laurent(AnyPoly::Exact(b)) = filter_product(&f, n + 1, DEFAULT_DEGREE_BOUND).unwrap() else { panic!() };
            let step = c.upsample(1 << n).scale(&ExactScalar::pow2_half(-1));
            assert_eq!(a.mul(&step), b);
        }
        assert!(matches!(filter_product(&f, 10, 100), Err(Error::Overflow { .. })));
    }

    #[test]
    fn kernel_means_are_one() {
        for f in [QmfFilter::haar(), QmfFilter::cubic(), QmfFilter::shannon()] {
            for n in 1..=8 {
                let d = kernel_dn(&f, n, DEFAULT_DEGREE_BOUND).unwrap();
                assert_eq!(d.mean_exact().unwrap(), ExactScalar::from_int(1), "n={n}");
            }
        }
        let d = kernel_dn(&QmfFilter::daubechies4(), 4, DEFAULT_DEGREE_BOUND).unwrap();
        assert!((d.mean_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shannon_kernel_depth_two() {
        let KernelDn::Band { set, .. } = kernel_dn(&QmfFilter::shannon(), 2, DEFAULT_DEGREE_BOUND).unwrap() else { panic!() };
        assert_eq!(set, IntervalSet::from_ratios(&[((-1, 4), (1, 4))]));
    }

    #[test]
    fn zero_sets() {
        let ZeroSet::Points { omegas, measure_zero } = zero_set(&QmfFilter::haar()) else { panic!() };
        assert!(measure_zero);
        assert_eq!(omegas.len(), 1);
        assert!((omegas[0].abs() - PI).abs() < 1e-9);
        let ZeroSet::Band(n) = zero_set(&QmfFilter::shannon()) else { panic!() };
        assert_eq!(n, IntervalSet::from_ratios(&[((-1, 1), (-1, 2)), ((1, 2), (1, 1))]));
        let p2 = zero_set_preimage(&QmfFilter::shannon(), 2).unwrap();
        assert_eq!(
            p2,
            IntervalSet::from_ratios(&[((-7, 8), (-5, 8)), ((-3, 8), (-1, 8)), ((1, 8), (3, 8)), ((5, 8), (7, 8))])
        );
    }

    #[test]
    fn json_parsing() {
        let f = QmfFilter::from_json(r#"{"kind":"laurent","offset":0,"mask":[[1,1],[1,1]]}"#).unwrap();
        assert_eq!(f, QmfFilter::haar());
        assert!(QmfFilter::from_json(r#"{"kind":"laurent","offset":0,"mask":[0.5,1.5]}"#).is_err());
        let s = QmfFilter::from_json(r#"{"kind":"band","support":[[-1,2],[1,2]]}"#).unwrap();
        assert_eq!(s, QmfFilter::shannon());
        let d = QmfFilter::from_json(r#"{"kind":"laurent","scalar":"float","offset":0,"mask":[0.5,[3,2]]}"#).unwrap();
        assert_eq!(d.scalar_kind(), ScalarKind::Float);
    }
}
