//! The synthesis map `C_F α = π(α)F = Σ α_n F(· − n)`, its intertwining of `S₀`
//! with the dilation `U h = 2^{−1/2} h(·/2)`, and the Gram identity
//! `⟨C_F α, C_F β⟩ = ∫ conj(α) β p₂(F) dμ`.

use serde::Serialize;

use crate::filter::QmfFilter;
use crate::laurent::{ExactPoly, LaurentPoly};
use crate::scalar::{ExactScalar, Scalar};
use crate::Error;

use super::coef::subdivide;
use super::grid::{cascade_step, correlation, ExactGridFn, GridFn};

#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerReport {
    /// `max |MF − F|` over cells; the check is only meaningful when this is 0.
    pub fixed_point_residual: f64,
    pub intertwine_max: f64,
    pub intertwine_exact: bool,
    pub gram_max: f64,
    pub gram_exact: bool,
    pub probes: usize,
    pub pairs: usize,
}

impl IntertwinerReport {
    pub fn all_exact(&self) -> bool {
        self.fixed_point_residual == 0.0 && self.intertwine_exact && self.gram_exact
    }
}

fn max_cell<S: Scalar>(h: &GridFn<S>) -> f64 {
    h.values().iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

/// `∫ conj(α) β p dμ`; `p` is Hermitian so the orientation of the product is immaterial.
pub fn weighted_pairing<S: Scalar>(alpha: &LaurentPoly<S>, beta: &LaurentPoly<S>, p: &LaurentPoly<S>) -> S {
    alpha.reflect_conj().mul(beta).mul(p).coeff(0)
}

/// Compares `C_F(S₀α)` with `U(C_F α)` for each probe, and the Gram identity on `pairs`.
pub fn intertwiner_check(
    filter: &QmfFilter,
    f: &ExactGridFn,
    probes: &[ExactPoly],
    pairs: &[(ExactPoly, ExactPoly)],
) -> Result<IntertwinerReport, Error> {
    let c = filter.mask_exact().ok_or(Error::UnsupportedRepresentation { expected: "exact laurent" })?;
    let a = c.scale(&ExactScalar::pow2_half(-1));
    let fixed = max_cell(&cascade_step(filter, f)?.sub(f));

    let diffs: Vec<ExactGridFn> = probes
        .iter()
        .map(|alpha| f.pi_alpha(&subdivide(&a, alpha)).sub(&f.pi_alpha(alpha).dilate_half()))
        .collect();
    let p = correlation(f, f);
    let gram: Vec<ExactScalar> = pairs
        .iter()
        .map(|(x, y)| f.pi_alpha(x).inner(&f.pi_alpha(y)) - weighted_pairing(x, y, &p))
        .collect();
    Ok(IntertwinerReport {
        fixed_point_residual: fixed,
        intertwine_max: diffs.iter().map(max_cell).fold(0.0, f64::max),
        intertwine_exact: diffs.iter().all(GridFn::is_zero),
        gram_max: gram.iter().map(Scalar::magnitude).fold(0.0, f64::max),
        gram_exact: gram.iter().all(ExactScalar::is_zero),
        probes: probes.len(),
        pairs: pairs.len(),
    })
}

/// `⟨Mh₁, Mh₂⟩ − ⟨h₁, π(|m₀|²)h₂⟩` and `⟨Mh₁, Mh₂⟩ − ∫|m₀|² p(h₁,h₂) dμ`, both exact.
pub fn mstar_m_defects(filter: &QmfFilter, h1: &ExactGridFn, h2: &ExactGridFn) -> Result<(ExactScalar, ExactScalar), Error> {
    let c = filter.mask_exact().ok_or(Error::UnsupportedRepresentation { expected: "exact laurent" })?;
    let w = c.modulus_squared().scale(&ExactScalar::from_ratio(1, 2));
    let lhs = cascade_step(filter, h1)?.inner(&cascade_step(filter, h2)?);
    let via_pi = h1.inner(&h2.pi_alpha(&w));
    let via_p = w.mul(&correlation(h1, h2)).coeff(0);
    Ok((&lhs - &via_pi, &lhs - &via_p))
}
