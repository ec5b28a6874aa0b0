//! Discrete Zak transform `(Zh)(z, x) = Σ_n zⁿ h(x + n)` on the grid
//! `z_j = e^{−2πij/n_z}`, `x_k = k/n_x`, and the operator dictionary on it.
//!
//! Only `x ∈ [0, 1)` is stored; reads elsewhere go through
//! `H(z, x + 1) = z⁻¹ H(z, x)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::cascade::grid::GridFn;
use crate::circle::grid_point;
use crate::filter::QmfFilter;
use crate::laurent::{AnyPoly, FloatPoly, LaurentPoly};
use crate::rng::{self, ProbeRng};
use crate::ruelle::{ruelle_adjoint, ruelle_apply};
use crate::scalar::Scalar;
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct ZakArray {
    n_z: usize,
    n_x: usize,
    /// First integer translate used by [`zak_inverse`].
    origin: i64,
    /// Row-major, `values[j·n_x + k] = H(z_j, x_k)`.
    values: Vec<Complex64>,
}

fn check_pow2(n: usize, what: &str) -> Result<(), Error> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::Grid(format!("{what} = {n} must be a power of two")))
    }
}

impl ZakArray {
    pub fn new(n_z: usize, n_x: usize, values: Vec<Complex64>) -> Result<Self, Error> {
        check_pow2(n_z, "n_z")?;
        check_pow2(n_x, "n_x")?;
        if values.len() != n_z * n_x {
            return Err(Error::Grid(format!("expected {} values, got {}", n_z * n_x, values.len())));
        }
        Ok(Self { n_z, n_x, origin: -(n_z as i64) / 2, values })
    }

    pub fn from_fn(n_z: usize, n_x: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self, Error> {
        check_pow2(n_z, "n_z")?;
        check_pow2(n_x, "n_x")?;
        let values = (0..n_z * n_x).map(|i| f(i / n_x, i % n_x)).collect();
        Self::new(n_z, n_x, values)
    }

    pub fn random(rng: &mut ProbeRng, n_z: usize, n_x: usize) -> Result<Self, Error> {
        let values = (0..n_z * n_x).map(|_| rng::complex(rng)).collect();
        Self::new(n_z, n_x, values)
    }

    pub fn n_z(&self) -> usize {
        self.n_z
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn z(&self, j: usize) -> Complex64 {
        grid_point(j, self.n_z)
    }

    /// `H(z_j, k/n_x)` for any integer `k`, via quasi-periodicity.
    pub fn get(&self, j: usize, k: i64) -> Complex64 {
        let n_x = self.n_x as i64;
        let (q, r) = (k.div_euclid(n_x), k.rem_euclid(n_x));
        let base = self.values[(j % self.n_z) * self.n_x + r as usize];
        // H(z, x + q) = z^{−q} H(z, x).
        base * grid_point(j % self.n_z, self.n_z).powi(-(q as i32))
    }

    /// `mean_z mean_x |H|²`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(Complex64::norm_sqr).sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs_diff(&self, o: &Self) -> Result<f64, Error> {
        if (self.n_z, self.n_x) != (o.n_z, o.n_x) {
            return Err(Error::Grid(format!(
                "grids differ: {}x{} vs {}x{}",
                self.n_z, self.n_x, o.n_z, o.n_x
            )));
        }
        Ok(self.values.iter().zip(&o.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Keeps every `factor`-th x sample.
    pub fn subsample_x(&self, factor: usize) -> Result<Self, Error> {
        if factor == 0 || !self.n_x.is_multiple_of(factor) {
            return Err(Error::Grid(format!("cannot subsample {} x-points by {factor}", self.n_x)));
        }
        let n_x = self.n_x / factor;
        Ok(Self {
            values: (0..self.n_z * n_x).map(|i| self.values[(i / n_x) * self.n_x + (i % n_x) * factor]).collect(),
            n_x,
            ..self.clone()
        })
    }

    /// `p₃(H₁, H₂)(z_j) = ∫_0^1 conj(H₁) H₂ dx` at each z-sample.
    pub fn pairing(&self, o: &Self) -> Result<Vec<Complex64>, Error> {
        if (self.n_z, self.n_x) != (o.n_z, o.n_x) {
            return Err(Error::Grid("pairing needs identical grids".into()));
        }
        Ok((0..self.n_z)
            .map(|j| {
                let row = j * self.n_x..(j + 1) * self.n_x;
                let s: Complex64 = self.values[row.clone()].iter().zip(&o.values[row]).map(|(a, b)| a.conj() * b).sum();
                s / self.n_x as f64
            })
            .collect())
    }
}

/// Integer translates `n` with `h(x + n) ≠ 0` possible for `x ∈ [0, 1)`.
fn translate_range<S: Scalar>(h: &GridFn<S>) -> (i64, i64) {
    let unit = 1i64 << h.level();
    (h.offset().div_euclid(unit), (h.end() - 1).div_euclid(unit))
}

/// `H(z_j, x_k) = Σ_n z_jⁿ h(x_k + n)`.
pub fn zak_forward<S: Scalar>(h: &GridFn<S>, n_z: usize, n_x: usize) -> Result<ZakArray, Error> {
    check_pow2(n_z, "n_z")?;
    check_pow2(n_x, "n_x")?;
    let unit = 1usize << h.level();
    if n_x < unit {
        return Err(Error::Grid(format!("n_x = {n_x} does not resolve level {}", h.level())));
    }
    let (first, last) = if h.is_zero() { (0, 0) } else { translate_range(h) };
    if last - first >= n_z as i64 {
        return Err(Error::Grid(format!("support spans {} translates, more than n_z = {n_z}", last - first + 1)));
    }
    let hc = h.to_complex();
    let per = (n_x / unit) as i64;
    let mut zak = ZakArray::from_fn(n_z, n_x, |j, k| {
        let z = grid_point(j, n_z);
        (first..=last)
            .map(|n| z.powi(n as i32) * hc.cell(k as i64 / per + n * unit as i64))
            .sum()
    })?;
    zak.origin = first;
    Ok(zak)
}

/// Zak transform of a pointwise function supported in `[lo, hi)`, for rows of the dictionary
/// whose left-hand side leaves the space of grid functions.
pub fn zak_forward_fn(
    f: impl Fn(f64) -> Complex64,
    lo: i64,
    hi: i64,
    n_z: usize,
    n_x: usize,
) -> Result<ZakArray, Error> {
    let mut zak = ZakArray::from_fn(n_z, n_x, |j, k| {
        let z = grid_point(j, n_z);
        let x = k as f64 / n_x as f64;
        (lo..hi).map(|n| z.powi(n as i32) * f(x + n as f64)).sum()
    })?;
    zak.origin = lo;
    Ok(zak)
}

/// `(Z*H)(x + n) = mean_j z_j^{−n} H(z_j, x)` for `n` in `[origin, origin + n_z)`.
pub fn zak_inverse(zak: &ZakArray) -> GridFn<Complex64> {
    let (n_z, n_x) = (zak.n_z, zak.n_x);
    let level = n_x.trailing_zeros();
    let values = (0..n_z as i64)
        .flat_map(|t| {
            let n = zak.origin + t;
            (0..n_x).map(move |k| {
                let s: Complex64 = (0..n_z).map(|j| grid_point(j, n_z).powi(-(n as i32)) * zak.values[j * n_x + k]).sum();
                s / n_z as f64
            })
        })
        .collect();
    GridFn::new(level, zak.origin * n_x as i64, chop(values))
}

fn chop(values: Vec<Complex64>) -> Vec<Complex64> {
    values.into_iter().map(|v| if v.norm() < 1e-13 { Complex64::new(0.0, 0.0) } else { v }).collect()
}

/// Rows of the operator dictionary.
#[derive(Clone, Debug)]
pub enum DictOp {
    /// `T_n h(x) = h(x + n)` ↦ `z^{−n} H`.
    Translation(i64),
    /// `π(α)h = Σ α_n h(· − n)` ↦ `α(z) H`.
    PiAlpha(FloatPoly),
    /// `M̃H(z, x) = 2^{−1/2} Σ_{w²=z} m₀(w) H(w, 2x)`; `(n_z, n_x) → (n_z/2, 2n_x)`.
    M(QmfFilter),
    /// `M̃*H(z, x) = 2^{−1/2} conj(m₀(z)) (H(z², x/2) + z H(z², (x+1)/2))`; `(n_z, n_x) → (2n_z, n_x/2)`.
    MStar(QmfFilter),
    /// `Ẽ_t H(z, x) = e^{itx} H(z e^{it}, x)` for `t = 2πq/n_z`.
    Et(i64),
    /// `T̃_{1/2} H(z, x) = H(z, x + ½)`.
    HalfShift,
}

pub fn dict_apply(op: &DictOp, h: &ZakArray) -> Result<ZakArray, Error> {
    let (n_z, n_x) = (h.n_z, h.n_x);
    match op {
        DictOp::Translation(n) => ZakArray::from_fn(n_z, n_x, |j, k| h.z(j).powi(-(*n as i32)) * h.values[j * n_x + k]),
        DictOp::PiAlpha(alpha) => ZakArray::from_fn(n_z, n_x, |j, k| alpha.eval(h.z(j)) * h.values[j * n_x + k]),
        DictOp::M(filter) => {
            if n_z < 2 {
                return Err(Error::Grid("M needs n_z ≥ 2".into()));
            }
            let half = n_z / 2;
            ZakArray::from_fn(half, 2 * n_x, |j, k| {
                // Square roots of z_j on the n_z-grid: indices j and j + n_z/2.
                [j, j + half]
                    .iter()
                    .map(|&jw| filter.m0(h.z(jw)) * h.get(jw, k as i64))
                    .sum::<Complex64>()
                    * std::f64::consts::FRAC_1_SQRT_2
            })
        }
        DictOp::MStar(filter) => {
            if n_x < 2 {
                return Err(Error::Grid("M* needs n_x ≥ 2".into()));
            }
            let out_z = 2 * n_z;
            ZakArray::from_fn(out_z, n_x / 2, |j, k| {
                let z = grid_point(j, out_z);
                // z_j² is sample j mod n_z of the input grid; x/2 and (x+1)/2 are samples k and k + n_x/2.
                let jj = j % n_z;
                let s = h.get(jj, k as i64) + z * h.get(jj, (k + n_x / 2) as i64);
                filter.m0(z).conj() * s * std::f64::consts::FRAC_1_SQRT_2
            })
        }
        DictOp::Et(q) => ZakArray::from_fn(n_z, n_x, |j, k| {
            let t = 2.0 * PI * *q as f64 / n_z as f64;
            let x = k as f64 / n_x as f64;
            // z_j e^{it} = z_{j−q}.
            let jj = (j as i64 - q).rem_euclid(n_z as i64) as usize;
            Complex64::from_polar(1.0, t * x) * h.values[jj * n_x + k]
        }),
        DictOp::HalfShift => {
            if n_x % 2 != 0 {
                return Err(Error::Grid("half shift needs even n_x".into()));
            }
            ZakArray::from_fn(n_z, n_x, |j, k| h.get(j, (k + n_x / 2) as i64))
        }
    }
}

/// Largest residual of the Fourier row `Z(Fh)(e^{i2πω}, x) = e^{−i2πxω} Zh(e^{−i2πx}, ω)`
/// at `ω = a/n`, `x = b/n`, for `h` and `Fh` given pointwise and negligible outside `[−12, 12)`.
pub fn fourier_row_residual(
    h: impl Fn(f64) -> Complex64,
    fh: impl Fn(f64) -> Complex64,
    n: usize,
) -> Result<f64, Error> {
    let zh = zak_forward_fn(h, -12, 12, n, n)?;
    let zf = zak_forward_fn(fh, -12, 12, n, n)?;
    let mut max = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            // e^{i2πa/n} = z_{−a}.
            let lhs = zf.get((n - a) % n, b as i64);
            let phase = Complex64::from_polar(1.0, -2.0 * PI * (a * b) as f64 / (n * n) as f64);
            max = max.max((lhs - phase * zh.get(b, a as i64)).norm());
        }
    }
    Ok(max)
}

/// `Σ_i c_i e^{−π(x−b_i)²} e^{i2πc_i x}` and its transform under `Fh(ξ) = ∫h(x)e^{−i2πxξ}dx`.
#[derive(Clone, Debug)]
pub struct GaussianMix(Vec<(Complex64, f64, f64)>);

impl GaussianMix {
    pub fn random(rng: &mut ProbeRng, terms: usize) -> Self {
        Self((0..terms).map(|_| (rng::complex(rng), 2.0 * rng::unit_f64(rng) - 1.0, 2.0 * rng::unit_f64(rng) - 1.0)).collect())
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.0
            .iter()
            .map(|&(w, b, c)| w * (-PI * (x - b).powi(2)).exp() * Complex64::from_polar(1.0, 2.0 * PI * c * x))
            .sum()
    }

    pub fn eval_fourier(&self, xi: f64) -> Complex64 {
        self.0
            .iter()
            .map(|&(w, b, c)| w * (-PI * (xi - c).powi(2)).exp() * Complex64::from_polar(1.0, -2.0 * PI * b * (xi - c)))
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationStats {
    pub relation: String,
    pub max_residual: f64,
    pub mean_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub n_z: usize,
    pub n_x: usize,
    pub trials: usize,
    pub seed: u64,
    pub relations: Vec<RelationStats>,
}

impl HarnessReport {
    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.max_residual).fold(0.0, f64::max)
    }
}

fn stats(name: &str, v: &[f64]) -> RelationStats {
    RelationStats {
        relation: name.into(),
        max_residual: v.iter().copied().fold(0.0, f64::max),
        mean_residual: if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 },
    }
}

fn float_of(p: AnyPoly) -> FloatPoly {
    p.to_float()
}

/// Both commutation relations on random arrays `H` and random `α` of degree ≤ 4:
/// `M̃*π̃(α)M̃H = π̃(R*α)H` and `M̃π̃(α)M̃*H = π̃(Rα)H + π̃(R(e₁α))T̃_{1/2}H`.
/// The relation `α = 𝟙` of the first kind is reported separately.
pub fn commutation_harness(
    filter: &QmfFilter,
    trials: usize,
    n_z: usize,
    n_x: usize,
    seed: u64,
) -> Result<HarnessReport, Error> {
    let mut g = rng::seeded(seed);
    let cases: Vec<(ZakArray, FloatPoly)> = (0..trials)
        .map(|_| Ok((ZakArray::random(&mut g, n_z, n_x)?, rng::float_poly(&mut g, -2, 2))))
        .collect::<Result<_, Error>>()?;
    let one = LaurentPoly::one();
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    let mut r0 = Vec::new();
    for (h, alpha) in &cases {
        let relation_one = |a: &FloatPoly| -> Result<f64, Error> {
            let lhs = dict_apply(&DictOp::MStar(filter.clone()), &dict_apply(&DictOp::PiAlpha(a.clone()), &dict_apply(&DictOp::M(filter.clone()), h)?)?)?;
            let r_star = float_of(ruelle_adjoint(filter, &AnyPoly::Float(a.clone()))?);
            lhs.max_abs_diff(&dict_apply(&DictOp::PiAlpha(r_star), h)?)
        };
        r1.push(relation_one(alpha)?);
        r0.push(relation_one(&one)?);

        let lhs = dict_apply(&DictOp::M(filter.clone()), &dict_apply(&DictOp::PiAlpha(alpha.clone()), &dict_apply(&DictOp::MStar(filter.clone()), h)?)?)?;
        let r_alpha = float_of(ruelle_apply(filter, &AnyPoly::Float(alpha.clone()))?);
        let r_e1 = float_of(ruelle_apply(filter, &AnyPoly::Float(alpha.shift(1)))?);
        let a = dict_apply(&DictOp::PiAlpha(r_alpha), h)?;
        let b = dict_apply(&DictOp::PiAlpha(r_e1), &dict_apply(&DictOp::HalfShift, h)?)?;
        let rhs = ZakArray::new(n_z, n_x, a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect())?;
        r2.push(lhs.max_abs_diff(&rhs)?);
    }
    Ok(HarnessReport {
        n_z,
        n_x,
        trials,
        seed,
        relations: vec![
            stats("M* pi(alpha) M = pi(R* alpha)", &r1),
            stats("M pi(alpha) M* = pi(R alpha) + pi(R(e1 alpha)) T_1/2", &r2),
            stats("M* M = pi(|m0|^2)", &r0),
        ],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub trials: usize,
    /// `max |‖Zh‖² − ‖h‖²|`.
    pub norm_max: f64,
    /// `max |Z*Zh − h|`.
    pub round_trip_max: f64,
    /// `Z(χ_[0,1)) ≡ 1` with no rounding at all.
    pub box_is_one: bool,
}

/// Isometry and inversion on random grid functions of level ≤ 3 and span ≤ 16 cells.
pub fn zak_isometry_check(trials: usize, seed: u64) -> Result<IsometryReport, Error> {
    let mut g = rng::seeded(seed);
    let (mut norm_max, mut round_trip_max) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let h = crate::cascade::random_grid_fn(&mut g, 3, 16);
        let z = zak_forward(&h, 32, 16)?;
        norm_max = norm_max.max((z.norm_sq() - h.norm_sq().to_f64()).abs());
        let diff = zak_inverse(&z).sub(&h.to_complex());
        round_trip_max = round_trip_max.max(diff.values().iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let one = Complex64::new(1.0, 0.0);
    let box_is_one = zak_forward(&GridFn::box_int(0, 1, crate::scalar::ExactScalar::from_int(1)), 64, 64)?
        .values()
        .iter()
        .all(|v| *v == one);
    Ok(IsometryReport { trials, norm_max, round_trip_max, box_is_one })
}

/// Every row of the operator dictionary on `trials` random inputs. Grid-function
/// rows compare against the Zak transform of the operator applied in `x`; the
/// modulation and Fourier rows compare against pointwise Zak sums.
pub fn dictionary_check(filter: &QmfFilter, trials: usize, seed: u64) -> Result<Vec<RelationStats>, Error> {
    use crate::cascade::{cascade_adjoint_generic, cascade_step_generic, random_grid_fn};
    let c = filter.mask_float().ok_or(Error::UnsupportedRepresentation { expected: "laurent" })?;
    let mut g = rng::seeded(seed);
    let (n_z, n_x) = (64, 8);
    let mut rows: [Vec<f64>; 6] = Default::default();
    for _ in 0..trials {
        let h = random_grid_fn(&mut g, 2, 8).to_complex();
        let zh = zak_forward(&h, n_z, n_x)?;
        let shift = (rng::unit_f64(&mut g) * 7.0) as i64 - 3;
        rows[0].push(dict_apply(&DictOp::Translation(shift), &zh)?.max_abs_diff(&zak_forward(&h.translate(-shift), n_z, n_x)?)?);
        let alpha = rng::float_poly(&mut g, -2, 2);
        rows[1].push(dict_apply(&DictOp::PiAlpha(alpha.clone()), &zh)?.max_abs_diff(&zak_forward(&h.pi_alpha(&alpha), n_z, n_x)?)?);
        let m = zak_forward(&cascade_step_generic(&c, &h), n_z / 2, 2 * n_x)?;
        rows[2].push(dict_apply(&DictOp::M(filter.clone()), &zh)?.max_abs_diff(&m)?);
        let ms = zak_forward(&cascade_adjoint_generic(&c, &h), 2 * n_z, n_x / 2)?;
        rows[3].push(dict_apply(&DictOp::MStar(filter.clone()), &zh)?.max_abs_diff(&ms)?);
        let q = (rng::unit_f64(&mut g) * n_z as f64) as i64;
        let t = 2.0 * PI * q as f64 / n_z as f64;
        let (lo, hi) = if h.is_zero() { (0, 0) } else { translate_range(&h) };
        let direct = zak_forward_fn(|x| Complex64::from_polar(1.0, t * x) * h.eval(x), lo - 1, hi + 2, n_z, n_x)?;
        rows[4].push(dict_apply(&DictOp::Et(q), &zh)?.max_abs_diff(&direct)?);
        let mix = GaussianMix::random(&mut g, 3);
        rows[5].push(fourier_row_residual(|x| mix.eval(x), |x| mix.eval_fourier(x), 16)?);
    }
    let names = ["T_n -> z^-n", "pi(alpha) -> alpha(z)", "M", "M*", "E_t", "F"];
    Ok(names.iter().zip(&rows).map(|(n, v)| stats(n, v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::grid::{cascade_adjoint_generic, cascade_step_generic, correlation, random_grid_fn};
    use crate::scalar::ExactScalar;

    fn box01() -> GridFn<ExactScalar> {
        GridFn::box_int(0, 1, ExactScalar::from_int(1))
    }

    #[test]
    fn scaling_box_is_constant() {
        let z = zak_forward(&box01(), 16, 8).unwrap();
        assert!(z.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        let back = zak_inverse(&z);
        assert!(back.sub(&box01().to_complex()).values().iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn shifted_box_is_pure_phase() {
        let h = GridFn::box_int(1, 2, ExactScalar::from_int(1));
        let z = zak_forward(&h, 16, 4).unwrap();
        for j in 0..16 {
            for k in 0..4 {
                assert!((z.get(j, k) - z.z(j)).norm() < 1e-15);
            }
        }
        let phase = ZakArray::from_fn(16, 4, |j, _| grid_point(j, 16)).unwrap();
        let back = zak_inverse(&phase);
        assert!(back.sub(&h.to_complex()).values().iter().all(|v| v.norm() < 1e-13));
    }

    #[test]
    fn isometry_and_round_trip() {
        let mut g = rng::seeded(1);
        for _ in 0..50 {
            let h = random_grid_fn(&mut g, 3, 16);
            let z = zak_forward(&h, 32, 16).unwrap();
            assert!((z.norm_sq() - h.norm_sq().to_f64()).abs() < 1e-12);
            let back = zak_inverse(&z);
            let diff = back.sub(&h.to_complex());
            assert!(diff.values().iter().all(|v| v.norm() < 1e-12));
        }
    }

    #[test]
    fn quasi_periodicity() {
        let mut g = rng::seeded(2);
        let h = random_grid_fn(&mut g, 2, 10);
        let z = zak_forward(&h, 32, 8).unwrap();
        let direct = zak_forward_fn(|x| h.to_complex().eval(x), -10, 12, 32, 8).unwrap();
        assert!(z.max_abs_diff(&direct).unwrap() < 1e-13);
        for j in 0..32 {
            assert!((z.get(j, 8 + 3) - z.z(j).inv() * z.get(j, 3)).norm() < 1e-14);
        }
        assert!(zak_forward(&h, 32, 2).is_err() || h.level() <= 1);
    }

    #[test]
    fn dictionary_rows() {
        let mut g = rng::seeded(4);
        let haar = QmfFilter::haar();
        let c = haar.mask_float().unwrap();
        for _ in 0..20 {
            let h = random_grid_fn(&mut g, 2, 8).to_complex();
            let zh = zak_forward(&h, 64, 8).unwrap();
            let t = dict_apply(&DictOp::Translation(3), &zh).unwrap();
            assert!(t.max_abs_diff(&zak_forward(&h.translate(-3), 64, 8).unwrap()).unwrap() < 1e-10);
            let alpha = rng::float_poly(&mut g, -2, 2);
            let p = dict_apply(&DictOp::PiAlpha(alpha.clone()), &zh).unwrap();
            assert!(p.max_abs_diff(&zak_forward(&h.pi_alpha(&alpha), 64, 8).unwrap()).unwrap() < 1e-10);
            let m = dict_apply(&DictOp::M(haar.clone()), &zh).unwrap();
            let mh = cascade_step_generic(&c, &h);
            assert!(m.max_abs_diff(&zak_forward(&mh, 32, 16).unwrap()).unwrap() < 1e-10);
            let ms = dict_apply(&DictOp::MStar(haar.clone()), &zh).unwrap();
            let msh = cascade_adjoint_generic(&c, &h);
            assert!(ms.max_abs_diff(&zak_forward(&msh, 128, 4).unwrap()).unwrap() < 1e-10);
            let e = dict_apply(&DictOp::Et(5), &zh).unwrap();
            let t = 2.0 * PI * 5.0 / 64.0;
            let hc = h.clone();
            let direct = zak_forward_fn(move |x| Complex64::from_polar(1.0, t * x) * hc.eval(x), -12, 14, 64, 8).unwrap();
            assert!(e.max_abs_diff(&direct).unwrap() < 1e-10);
        }
        let zh = zak_forward(&box01(), 8, 4).unwrap();
        assert!(dict_apply(&DictOp::Et(0), &zh).unwrap().max_abs_diff(&zh).unwrap() == 0.0);
        let one = ZakArray::from_fn(8, 4, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let t = dict_apply(&DictOp::Translation(2), &one).unwrap();
        assert!((t.get(1, 0) - one.z(1).powi(-2)).norm() < 1e-15);
    }

    #[test]
    fn haar_fixed_point_in_zak_domain() {
        let zh = zak_forward(&box01(), 16, 4).unwrap();
        let m = dict_apply(&DictOp::M(QmfFilter::haar()), &zh).unwrap();
        let expect = zak_forward(&box01(), 8, 8).unwrap();
        assert!(m.max_abs_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn fourier_row() {
        // e^{−πx²} is its own transform.
        let g = |x: f64| Complex64::new((-PI * x * x).exp(), 0.0);
        assert!(fourier_row_residual(g, g, 16).unwrap() < 1e-10);
        let mut r = rng::seeded(3);
        let mix = GaussianMix::random(&mut r, 2);
        assert!(fourier_row_residual(|x| mix.eval(x), |x| mix.eval_fourier(x), 8).unwrap() < 1e-10);
        // The transform is not the identity on a generic mix.
        assert!(fourier_row_residual(|x| mix.eval(x), |x| mix.eval(x), 8).unwrap() > 1e-3);
    }

    #[test]
    fn library_checks() {
        let iso = zak_isometry_check(10, 1).unwrap();
        assert!(iso.box_is_one && iso.norm_max < 1e-12 && iso.round_trip_max < 1e-12);
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            let rows = dictionary_check(&f, 5, 2).unwrap();
            assert_eq!(rows.len(), 6);
            assert!(rows.iter().all(|r| r.max_residual < 1e-10), "{rows:?}");
        }
    }

    #[test]
    fn harness_haar() {
        let r = commutation_harness(&QmfFilter::haar(), 5, 64, 64, 9).unwrap();
        assert!(r.max_residual() <= 1e-10, "{r:?}");
        let r = commutation_harness(&QmfFilter::cubic(), 3, 32, 16, 9).unwrap();
        assert!(r.max_residual() <= 1e-10, "{r:?}");
        let zero = ZakArray::from_fn(8, 8, |_, _| Complex64::new(0.0, 0.0)).unwrap();
        let m = dict_apply(&DictOp::M(QmfFilter::haar()), &zero).unwrap();
        assert_eq!(m.norm_sq(), 0.0);
    }

    #[test]
    fn p3_matches_correlation_and_transfer() {
        let mut g = rng::seeded(8);
        let f = QmfFilter::cubic();
        let c = f.mask_float().unwrap();
        for _ in 0..10 {
            let (h1, h2) = (random_grid_fn(&mut g, 2, 8).to_complex(), random_grid_fn(&mut g, 2, 8).to_complex());
            let (z1, z2) = (zak_forward(&h1, 64, 8).unwrap(), zak_forward(&h2, 64, 8).unwrap());
            let p = correlation(&h1, &h2);
            let p3 = z1.pairing(&z2).unwrap();
            for (j, v) in p3.iter().enumerate() {
                assert!((v - p.eval(grid_point(j, 64))).norm() < 1e-10);
            }
            // R(p(H₁,H₂)) = p(Z M h₁, Z M h₂).
            let rp = float_of(ruelle_apply(&f, &AnyPoly::Float(p)).unwrap());
            let (m1, m2) = (cascade_step_generic(&c, &h1), cascade_step_generic(&c, &h2));
            let zm = zak_forward(&m1, 64, 16).unwrap().pairing(&zak_forward(&m2, 64, 16).unwrap()).unwrap();
            for (j, v) in zm.iter().enumerate() {
                assert!((v - rp.eval(grid_point(j, 64))).norm() < 1e-10);
            }
        }
    }
}
