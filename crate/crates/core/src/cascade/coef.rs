//! Subdivision on coefficient sequences: `Sξ = a(z)ξ(z²)` with `a = c/√2`,
//! its adjoint, the Cuntz pair `(S₀, S₁)` and dyadic approximants.

use serde::Serialize;

use crate::filter::{high_pass, HighPass, QmfFilter};
use crate::laurent::{promote, AnyPoly, LaurentPoly, PolyPair};
use crate::scalar::{Scalar, ScalarKind};
use crate::Error;

use super::grid::GridFn;

/// Finitely supported two-sided sequence `ξ`, stored as `Σ ξ_n zⁿ`.
pub type CoefSeq<S> = LaurentPoly<S>;

/// Depth cap for [`dyadic_approximant`]; the support grows like `2^k`.
pub const MAX_APPROX_DEPTH: u32 = 24;

/// `(Sξ)_n = Σ_k a_{n−2k} ξ_k`.
pub fn subdivide<S: Scalar>(a: &LaurentPoly<S>, xi: &CoefSeq<S>) -> CoefSeq<S> {
    a.mul(&xi.upsample(2))
}

/// `(S*ξ)_k = Σ_n conj(a_{n−2k}) ξ_n`.
pub fn subdivide_adjoint<S: Scalar>(a: &LaurentPoly<S>, xi: &CoefSeq<S>) -> CoefSeq<S> {
    a.reflect_conj().mul(xi).downsample_even()
}

fn normalized(mask: &AnyPoly) -> AnyPoly {
    match mask {
        AnyPoly::Exact(c) => AnyPoly::Exact(c.scale(&Scalar::pow2_half(-1))),
        AnyPoly::Float(c) => AnyPoly::Float(c.scale(&Scalar::pow2_half(-1))),
    }
}

fn low_pass_coeffs(filter: &QmfFilter) -> Result<AnyPoly, Error> {
    match filter {
        QmfFilter::Laurent(c) => Ok(normalized(c)),
        QmfFilter::Band(_) => Err(Error::UnsupportedRepresentation { expected: "laurent" }),
    }
}

fn high_pass_coeffs(filter: &QmfFilter) -> Result<AnyPoly, Error> {
    match high_pass(filter) {
        HighPass::Laurent(c) => Ok(normalized(&c)),
        HighPass::Band(_) => Err(Error::UnsupportedRepresentation { expected: "laurent" }),
    }
}

fn apply(a: &AnyPoly, xi: &AnyPoly, adjoint: bool) -> AnyPoly {
    match promote(a, xi) {
        PolyPair::Exact(a, x) if adjoint => AnyPoly::Exact(subdivide_adjoint(&a, &x)),
        PolyPair::Exact(a, x) => AnyPoly::Exact(subdivide(&a, &x)),
        PolyPair::Float(a, x) if adjoint => AnyPoly::Float(subdivide_adjoint(&a, &x)),
        PolyPair::Float(a, x) => AnyPoly::Float(subdivide(&a, &x)),
    }
}

pub fn subdivision_step(filter: &QmfFilter, xi: &AnyPoly) -> Result<AnyPoly, Error> {
    Ok(apply(&low_pass_coeffs(filter)?, xi, false))
}

pub fn subdivision_adjoint(filter: &QmfFilter, xi: &AnyPoly) -> Result<AnyPoly, Error> {
    Ok(apply(&low_pass_coeffs(filter)?, xi, true))
}

/// Residual of one Cuntz relation over the probe basis.
#[derive(Clone, Debug, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub max_residual: f64,
    /// `Some(true)` when every residual is exactly zero; `None` for float filters.
    pub exact_zero: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuntzReport {
    pub scalar: ScalarKind,
    pub probes: Vec<i64>,
    pub relations: Vec<RelationResidual>,
}

impl CuntzReport {
    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.max_residual).fold(0.0, f64::max)
    }

    pub fn all_exact(&self) -> bool {
        self.relations.iter().all(|r| r.exact_zero == Some(true))
    }
}

fn relation_residuals<S: Scalar>(s0: &LaurentPoly<S>, s1: &LaurentPoly<S>, probes: &[i64]) -> Vec<RelationResidual> {
    let pair = [s0, s1];
    let delta = |k: i64| LaurentPoly::monomial(k, S::one());
    let mut out = Vec::new();
    let mut record = |name: String, diffs: Vec<LaurentPoly<S>>| {
        let max = diffs.iter().map(|d| d.to_float().max_abs()).fold(0.0, f64::max);
        let exact = (S::KIND == ScalarKind::Exact).then(|| diffs.iter().all(LaurentPoly::is_zero));
        out.push(RelationResidual { relation: name, max_residual: max, exact_zero: exact });
    };
    for i in 0..2 {
        for j in 0..2 {
            let diffs = probes
                .iter()
                .map(|&k| {
                    let lhs = subdivide_adjoint(pair[i], &subdivide(pair[j], &delta(k)));
                    if i == j {
                        lhs.sub(&delta(k))
                    } else {
                        lhs
                    }
                })
                .collect();
            record(format!("S{i}*S{j} = {}", if i == j { "id" } else { "0" }), diffs);
        }
    }
    let diffs = probes
        .iter()
        .map(|&k| {
            let d = delta(k);
            let sum = subdivide(s0, &subdivide_adjoint(s0, &d)).add(&subdivide(s1, &subdivide_adjoint(s1, &d)));
            sum.sub(&d)
        })
        .collect();
    record("S0 S0* + S1 S1* = id".into(), diffs);
    out
}

/// Checks the Cuntz relations for `S₀` (from `m₀`) and `S₁` (from `m₁`) on `δ_k`, `k ∈ probes`.
pub fn cuntz_pair(filter: &QmfFilter, probes: &[i64]) -> Result<CuntzReport, Error> {
    let (a0, a1) = (low_pass_coeffs(filter)?, high_pass_coeffs(filter)?);
    let relations = match promote(&a0, &a1) {
        PolyPair::Exact(s0, s1) => relation_residuals(&s0, &s1, probes),
        PolyPair::Float(s0, s1) => relation_residuals(&s0, &s1, probes),
    };
    Ok(CuntzReport { scalar: a0.kind(), probes: probes.to_vec(), relations })
}

/// `S^k ξ` laid out on the level-`k` grid: cell `j` holds `(S^k ξ)_j`.
pub fn dyadic_approximant<S: Scalar>(a: &LaurentPoly<S>, xi: &CoefSeq<S>, k: u32) -> Result<GridFn<S>, Error> {
    if k > MAX_APPROX_DEPTH {
        return Err(Error::Overflow { degree: i64::from(k), bound: i64::from(MAX_APPROX_DEPTH) });
    }
    let seq = (0..k).fold(xi.clone(), |acc, _| subdivide(a, &acc));
    Ok(GridFn::new(k, seq.lo(), seq.coeffs().to_vec()))
}

/// [`dyadic_approximant`] with the subdivision coefficients taken from an exact filter.
pub fn dyadic_approximant_exact(
    filter: &QmfFilter,
    xi: &CoefSeq<crate::scalar::ExactScalar>,
    k: u32,
) -> Result<GridFn<crate::scalar::ExactScalar>, Error> {
    match low_pass_coeffs(filter)? {
        AnyPoly::Exact(a) => dyadic_approximant(&a, xi, k),
        AnyPoly::Float(_) => Err(Error::UnsupportedRepresentation { expected: "exact laurent" }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::grid::cascade_step;
    use crate::laurent::ExactPoly;
    use crate::rng;
    use crate::scalar::ExactScalar;

    fn exact(p: AnyPoly) -> ExactPoly {
        match p {
            AnyPoly::Exact(p) => p,
            AnyPoly::Float(_) => panic!("expected exact"),
        }
    }

    #[test]
    fn haar_delta() {
        let s = exact(subdivision_step(&QmfFilter::haar(), &AnyPoly::Exact(ExactPoly::one())).unwrap());
        let r = ExactScalar::pow2_half(-1);
        assert_eq!(s, LaurentPoly::new(0, vec![r.clone(), r]));
        let z = exact(subdivision_step(&QmfFilter::haar(), &AnyPoly::Exact(ExactPoly::zero())).unwrap());
        assert!(z.is_zero());
        assert!(subdivision_step(&QmfFilter::shannon(), &AnyPoly::Exact(ExactPoly::one())).is_err());
    }

    #[test]
    fn adjointness_and_isometry() {
        let mut g = rng::seeded(3);
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            for _ in 0..20 {
                let xi = rng::exact_poly(&mut g, -3, 3);
                let eta = rng::exact_poly(&mut g, -5, 5);
                let sxi = exact(subdivision_step(&f, &AnyPoly::Exact(xi.clone())).unwrap());
                let seta = exact(subdivision_adjoint(&f, &AnyPoly::Exact(eta.clone())).unwrap());
                assert_eq!(sxi.inner(&eta), xi.inner(&seta));
                assert_eq!(exact(subdivision_adjoint(&f, &AnyPoly::Exact(sxi)).unwrap()), xi);
            }
        }
    }

    #[test]
    fn cuntz_relations() {
        let probes: Vec<i64> = (-4..=4).collect();
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            let r = cuntz_pair(&f, &probes).unwrap();
            assert!(r.all_exact(), "{r:?}");
        }
        let r = cuntz_pair(&QmfFilter::daubechies4(), &probes).unwrap();
        assert!(r.max_residual() <= 1e-12, "{r:?}");
        assert_eq!(r.relations.len(), 5);
    }

    #[test]
    fn approximant_matches_cascade() {
        let delta = ExactPoly::one();
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            let mut h = GridFn::box_int(0, 1, ExactScalar::from_int(1));
            for k in 0..7 {
                let approx = dyadic_approximant_exact(&f, &delta, k).unwrap();
                assert_eq!(approx.scale(&ExactScalar::pow2_half(k as i64)), h);
                h = cascade_step(&f, &h).unwrap();
            }
        }
        let haar = dyadic_approximant_exact(&QmfFilter::haar(), &delta, 3).unwrap();
        assert_eq!(haar, GridFn::new(3, 0, vec![ExactScalar::pow2_half(-3); 8]));
        assert!(dyadic_approximant_exact(&QmfFilter::haar(), &delta, 40).is_err());
    }
}
