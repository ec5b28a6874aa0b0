//! Sequence model of a sub-isometry: vectors `(l₀, l₁, …)` with
//! `‖(l_n)‖² = Σ_n ‖π₀(m₀⁽ⁿ⁾) l_n‖²`, where `π₀` is multiplication on an
//! `N`-point circle grid, and `M` is the right shift.

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::grid_point;
use crate::filter::QmfFilter;
use crate::laurent::{AnyPoly, ExactPoly, FloatPoly};
use crate::rng::{self, ProbeRng};
use crate::ruelle::{adjoint_weight, apply_weight, ruelle_adjoint};
use crate::scalar::ExactScalar;
use crate::Error;

pub type ModelVector = Vec<Vec<Complex64>>;

#[derive(Clone, Debug)]
pub struct SubIsometryModel {
    filter: QmfFilter,
    n_levels: usize,
    n: usize,
    /// `|m₀(z_j)|²` on the grid.
    w: Vec<f64>,
    /// `|m₀⁽ⁿ⁾(z_j)|²` per level.
    weights: Vec<Vec<f64>>,
}

impl SubIsometryModel {
    pub fn new(filter: &QmfFilter, n_levels: usize, n: usize) -> Result<Self, Error> {
        if !n.is_power_of_two() || n_levels == 0 {
            return Err(Error::Grid(format!("need a power-of-two grid and at least one level, got N = {n}")));
        }
        let w: Vec<f64> = (0..n).map(|j| filter.m0(grid_point(j, n)).norm_sqr()).collect();
        let mut weights = vec![vec![1.0; n]];
        for k in 1..n_levels {
            let prev = &weights[k - 1];
            // |m₀⁽ᵏ⁾(z)|² = |m₀⁽ᵏ⁻¹⁾(z)|²·|m₀(z^{2^{k−1}})|².
            let next = (0..n).map(|j| prev[j] * w[power_index(j, k - 1, n)]).collect();
            weights.push(next);
        }
        Ok(Self { filter: filter.clone(), n_levels, n, w, weights })
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn random_vector(&self, rng: &mut ProbeRng) -> ModelVector {
        (0..self.n_levels).map(|_| (0..self.n).map(|_| rng::complex(rng)).collect()).collect()
    }

    pub fn inner(&self, v: &ModelVector, u: &ModelVector) -> Complex64 {
        let s: Complex64 = (0..self.n_levels)
            .flat_map(|k| (0..self.n).map(move |j| (k, j)))
            .map(|(k, j)| self.weights[k][j] * v[k][j].conj() * u[k][j])
            .sum();
        s / self.n as f64
    }

    pub fn norm_sq(&self, v: &ModelVector) -> f64 {
        self.inner(v, v).re
    }

    /// `(l₀, l₁, …) ↦ (0, l₀, l₁, …)`, truncated to the model depth.
    pub fn shift(&self, v: &ModelVector) -> ModelVector {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.n]];
        out.extend(v.iter().take(self.n_levels - 1).cloned());
        out
    }

    /// `(l₀, l₁, …) ↦ (π(|m₀|²)l₁, π(|m₀(z²)|²)l₂, …)`.
    pub fn adjoint(&self, v: &ModelVector) -> ModelVector {
        (0..self.n_levels)
            .map(|k| match v.get(k + 1) {
                Some(next) => (0..self.n).map(|j| self.w[power_index(j, k, self.n)] * next[j]).collect(),
                None => vec![Complex64::new(0.0, 0.0); self.n],
            })
            .collect()
    }

    /// `π(α)` acts on level `n` as multiplication by `α(z^{2ⁿ})`.
    pub fn pi(&self, alpha: impl Fn(Complex64) -> Complex64, v: &ModelVector) -> ModelVector {
        (0..self.n_levels)
            .map(|k| (0..self.n).map(|j| alpha(grid_point(power_index(j, k, self.n), self.n)) * v[k][j]).collect())
            .collect()
    }

    /// `R*α = |m₀|²α(z²)`, as a polynomial for laurent filters and pointwise otherwise.
    fn r_star(&self, alpha: &FloatPoly) -> Result<Box<dyn Fn(Complex64) -> Complex64 + '_>, Error> {
        match &self.filter {
            QmfFilter::Laurent(_) => {
                let p = ruelle_adjoint(&self.filter, &AnyPoly::Float(alpha.clone()))?.to_float();
                Ok(Box::new(move |z| p.eval(z)))
            }
            QmfFilter::Band(_) => {
                let a = alpha.clone();
                Ok(Box::new(move |z| self.filter.m0(z).norm_sqr() * a.eval(z * z)))
            }
        }
    }
}

/// Index of `z_j^{2^k}` on the `n`-grid.
fn power_index(j: usize, k: usize, n: usize) -> usize {
    (j << k.min(63)) % n
}

fn max_diff(a: &ModelVector, b: &ModelVector) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub filter: String,
    pub n_levels: usize,
    pub grid: usize,
    pub trials: usize,
    pub seed: u64,
    /// `M*π(α)M = π(R*α)`.
    pub relation_1: f64,
    /// `π(α)M = Mπ(α(z²))`.
    pub relation_2: f64,
    /// `⟨Mv, u⟩ = ⟨v, M*u⟩`.
    pub adjointness: f64,
    /// `M*M = π(|m₀|²)`.
    pub mstar_m: f64,
    /// `M*(l₀, 0, …) = 0`.
    pub kernel: f64,
    /// `‖v‖² = Σ_n ‖component_n‖²`.
    pub wold_sum: f64,
}

impl ModelReport {
    pub fn max_residual(&self) -> f64 {
        [self.relation_1, self.relation_2, self.adjointness, self.mstar_m, self.kernel, self.wold_sum]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Checks the defining identities of the model on `trials` random probes.
pub fn abstract_model_check(
    filter: &QmfFilter,
    n_levels: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ModelReport, Error> {
    let model = SubIsometryModel::new(filter, n_levels, n)?;
    let mut g = rng::seeded(seed);
    let zero = vec![Complex64::new(0.0, 0.0); n];
    let mut r = ModelReport {
        filter: filter.kind_name().into(),
        n_levels,
        grid: n,
        trials,
        seed,
        relation_1: 0.0,
        relation_2: 0.0,
        adjointness: 0.0,
        mstar_m: 0.0,
        kernel: 0.0,
        wold_sum: 0.0,
    };
    for _ in 0..trials {
        let mut v = model.random_vector(&mut g);
        let u = model.random_vector(&mut g);
        let alpha = rng::float_poly(&mut g, -2, 2);
        let a = |z: Complex64| alpha.eval(z);

        r.relation_2 = r.relation_2.max(max_diff(&model.pi(a, &model.shift(&v)), &model.shift(&model.pi(|z| alpha.eval(z * z), &v))));
        r.adjointness = r
            .adjointness
            .max((model.inner(&model.shift(&v), &u) - model.inner(&v, &model.adjoint(&u))).norm());

        let parts: Vec<ModelVector> = (0..n_levels)
            .map(|k| (0..n_levels).map(|i| if i == k { v[i].clone() } else { zero.clone() }).collect())
            .collect();
        let sum: f64 = parts.iter().map(|p| model.norm_sq(p)).sum();
        r.wold_sum = r.wold_sum.max((model.norm_sq(&v) - sum).abs());
        r.kernel = r.kernel.max(max_diff(&model.adjoint(&parts[0]), &vec![zero.clone(); n_levels]));

        // The shift drops the top level, so both sides are compared on vectors that leave it empty.
        *v.last_mut().expect("nonempty") = zero.clone();
        let lhs = model.adjoint(&model.pi(a, &model.shift(&v)));
        r.relation_1 = r.relation_1.max(max_diff(&lhs, &model.pi(model.r_star(&alpha)?, &v)));
        let mm = model.adjoint(&model.shift(&v));
        r.mstar_m = r.mstar_m.max(max_diff(&mm, &model.pi(|z| Complex64::from(filter.m0(z).norm_sqr()), &v)));
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutantReport {
    pub r_fixed: bool,
    /// `|m₀|²α₀ = |m₀|²α₀(z²)`.
    pub identity_holds: bool,
    /// Highest degree at which the identity fails, with the coefficient of the difference.
    pub witness: Option<(i64, String)>,
}

/// Exact test of `Rα₀ = α₀` and of `|m₀(z)|²α₀(z) = |m₀(z)|²α₀(z²)`.
pub fn commutant_check(filter: &QmfFilter, alpha: &ExactPoly) -> Result<CommutantReport, Error> {
    let w = match filter.modulus_squared()? {
        AnyPoly::Exact(w) => w,
        AnyPoly::Float(_) => return Err(Error::UnsupportedRepresentation { expected: "exact laurent" }),
    };
    let r_fixed = apply_weight(&w, alpha).sub(alpha).is_zero();
    let diff = w.mul(alpha).sub(&adjoint_weight(&w, alpha));
    let witness = (!diff.is_zero()).then(|| {
        let top = diff.hi();
        let c: ExactScalar = diff.coeff(top);
        (top, c.to_string())
    });
    Ok(CommutantReport { r_fixed, identity_holds: diff.is_zero(), witness })
}
