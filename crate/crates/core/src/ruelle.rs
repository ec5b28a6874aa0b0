//! The transfer operator `(Rξ)(z) = ½Σ_{w²=z} |m₀(w)|² ξ(w)`, its adjoint
//! `(R*ξ)(z) = |m₀(z)|² ξ(z²)`, truncated matrices, fixed spaces and a
//! peripheral spectral scan.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::{grid_point, SampledCircleFn};
use crate::filter::QmfFilter;
use crate::laurent::{AnyPoly, LaurentPoly};
use crate::scalar::{Scalar, ScalarKind};
use crate::Error;

/// `Rξ` given the coefficients `w` of `|m₀|²`: `(Rξ)_n = (wξ)_{2n}`.
pub fn apply_weight<S: Scalar>(w: &LaurentPoly<S>, xi: &LaurentPoly<S>) -> LaurentPoly<S> {
    w.mul(xi).downsample_even()
}

/// `R*ξ = w·ξ(z²)`.
pub fn adjoint_weight<S: Scalar>(w: &LaurentPoly<S>, xi: &LaurentPoly<S>) -> LaurentPoly<S> {
    w.mul(&xi.upsample(2))
}

fn same_kind(filter: &QmfFilter, xi: &AnyPoly) -> Result<(AnyPoly, AnyPoly), Error> {
    let w = filter.modulus_squared()?;
    match (&w, xi) {
        (AnyPoly::Exact(_), AnyPoly::Exact(_)) | (AnyPoly::Float(_), AnyPoly::Float(_)) => Ok((w, xi.clone())),
        (AnyPoly::Float(_), AnyPoly::Exact(x)) => Ok((w, AnyPoly::Float(x.to_float()))),
        (AnyPoly::Exact(w), AnyPoly::Float(_)) => Ok((AnyPoly::Float(w.to_float()), xi.clone())),
    }
}

/// `Rξ` for a laurent filter; an exact filter with an exact `ξ` stays exact.
pub fn ruelle_apply(filter: &QmfFilter, xi: &AnyPoly) -> Result<AnyPoly, Error> {
    Ok(match same_kind(filter, xi)? {
        (AnyPoly::Exact(w), AnyPoly::Exact(x)) => AnyPoly::Exact(apply_weight(&w, &x)),
        (AnyPoly::Float(w), AnyPoly::Float(x)) => AnyPoly::Float(apply_weight(&w, &x)),
        _ => unreachable!("kinds aligned"),
    })
}

pub fn ruelle_adjoint(filter: &QmfFilter, xi: &AnyPoly) -> Result<AnyPoly, Error> {
    Ok(match same_kind(filter, xi)? {
        (AnyPoly::Exact(w), AnyPoly::Exact(x)) => AnyPoly::Exact(adjoint_weight(&w, &x)),
        (AnyPoly::Float(w), AnyPoly::Float(x)) => AnyPoly::Float(adjoint_weight(&w, &x)),
        _ => unreachable!("kinds aligned"),
    })
}

/// `Rξ` on the `N`-grid from samples of `ξ` on the `2N`-grid (any filter kind).
pub fn ruelle_apply_sampled(filter: &QmfFilter, xi_fine: &SampledCircleFn) -> Result<SampledCircleFn, Error> {
    let two_n = xi_fine.n_samples();
    if two_n < 2 {
        return Err(Error::Grid("need at least two samples".into()));
    }
    let n = two_n / 2;
    let v = xi_fine.values();
    SampledCircleFn::new(
        (0..n)
            .map(|j| {
                let (w1, w2) = (grid_point(j, two_n), grid_point(j + n, two_n));
                (v[j] * filter.m0(w1).norm_sqr() + v[j + n] * filter.m0(w2).norm_sqr()) * 0.5
            })
            .collect(),
    )
}

/// Pointwise `½Σ_{w²=z}|m₀(w)|²ξ(w)` for a closed-form `ξ`.
pub fn ruelle_pointwise(filter: &QmfFilter, xi: impl Fn(Complex64) -> Complex64, z: Complex64) -> Complex64 {
    let w = z.sqrt();
    (xi(w) * filter.m0(w).norm_sqr() + xi(-w) * filter.m0(-w).norm_sqr()) * 0.5
}

/// Fourier coefficient `k` of `|m₀|²` for a band filter, from exact interval
/// integrals: `(1/π)∫_S e^{ikθ} dθ`.
pub fn band_weight_coeff(filter: &QmfFilter, k: i64) -> Result<Complex64, Error> {
    let s = filter.band_support().ok_or(Error::UnsupportedRepresentation { expected: "band" })?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in s.base().intervals() {
        let (a, b) = (crate::filter::to_radians(a), crate::filter::to_radians(b));
        acc += if k == 0 {
            Complex64::new(b - a, 0.0)
        } else {
            let kf = k as f64;
            (Complex64::from_polar(1.0, kf * b) - Complex64::from_polar(1.0, kf * a)) / Complex64::new(0.0, kf)
        };
    }
    Ok(acc / PI)
}

/// `R` restricted to Laurent degrees `−N..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix<S> {
    pub degree_bound: i64,
    /// `rows[m+N][k+N]` is coefficient `m` of `R(e_k)`.
    pub rows: Vec<Vec<S>>,
}

impl<S: Scalar> TransferMatrix<S> {
    fn from_weight(n: i64, w: impl Fn(i64) -> S) -> Self {
        let dim = (2 * n + 1) as usize;
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| w(2 * (i as i64 - n) - (j as i64 - n))).collect())
            .collect();
        Self { degree_bound: n, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn to_complex(&self) -> TransferMatrix<Complex64> {
        TransferMatrix {
            degree_bound: self.degree_bound,
            rows: self.rows.iter().map(|r| r.iter().map(Scalar::to_complex).collect()).collect(),
        }
    }

    pub fn to_poly(&self, v: &[S]) -> LaurentPoly<S> {
        LaurentPoly::new(-self.degree_bound, v.to_vec())
    }
}

/// Matrix for a filter in its own kind; band filters produce a float matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Exact(TransferMatrix<crate::scalar::ExactScalar>),
    Float(TransferMatrix<Complex64>),
}

/// Largest degree appearing in `|m₀|²`; the range `−N..=N` is `R`-invariant for `N` at least this.
pub fn invariant_degree(filter: &QmfFilter) -> Result<i64, Error> {
    let w = filter.modulus_squared()?.to_float();
    Ok(w.hi().max(-w.lo()).max(0))
}

pub fn transfer_matrix(filter: &QmfFilter, n: i64) -> Result<AnyMatrix, Error> {
    match filter {
        QmfFilter::Band(_) => {
            let coeffs: Vec<Complex64> =
                (-3 * n..=3 * n).map(|k| band_weight_coeff(filter, k)).collect::<Result<_, _>>()?;
            Ok(AnyMatrix::Float(TransferMatrix::from_weight(n, |k| coeffs[(k + 3 * n) as usize])))
        }
        _ => match filter.modulus_squared()? {
            AnyPoly::Exact(w) => Ok(AnyMatrix::Exact(TransferMatrix::from_weight(n, |k| w.coeff(k)))),
            AnyPoly::Float(w) => Ok(AnyMatrix::Float(TransferMatrix::from_weight(n, |k| w.coeff(k)))),
        },
    }
}

/// Nullspace of a matrix. Exact scalars use fraction-free (Bareiss) forward
/// elimination; floats use partial pivoting and treat entries `≤ tol` as zero.
// Row operations read clearest with explicit indices.
#[allow(clippy::needless_range_loop)]
pub fn nullspace<S: Scalar>(mut a: Vec<Vec<S>>, tol: f64) -> Vec<Vec<S>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let exact = S::KIND == ScalarKind::Exact;
    let negligible = |x: &S| if exact { x.is_zero() } else { x.magnitude() <= tol };
    let mut pivots = Vec::new();
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let p = if exact {
            (r..rows).find(|&i| !a[i][c].is_zero())
        } else {
            (r..rows)
                .max_by(|&i, &j| a[i][c].magnitude().total_cmp(&a[j][c].magnitude()))
                .filter(|&i| !negligible(&a[i][c]))
        };
        let Some(p) = p else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            let f = a[i][c].clone();
            for j in c + 1..cols {
                a[i][j] = if exact {
                    (piv.clone() * a[i][j].clone() - f.clone() * a[r][j].clone()) / prev.clone()
                } else {
                    a[i][j].clone() - f.clone() / piv.clone() * a[r][j].clone()
                };
            }
            a[i][c] = S::zero();
        }
        if exact {
            prev = piv;
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut x = vec![S::zero(); cols];
        x[free] = S::one();
        for &(pr, pc) in pivots.iter().rev() {
            let s = (pc + 1..cols).fold(S::zero(), |acc, j| acc + a[pr][j].clone() * x[j].clone());
            x[pc] = -s / a[pr][pc].clone();
        }
        basis.push(x);
    }
    basis
}

fn minus_identity<S: Scalar>(m: &TransferMatrix<S>) -> Vec<Vec<S>> {
    let mut a = m.rows.clone();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = row[i].clone() - S::one();
    }
    a
}

/// Basis of `{ξ : Rξ = ξ, degrees in −N..=N}`.
#[derive(Clone, Debug, PartialEq)]
pub enum FixedSpace {
    Exact(Vec<LaurentPoly<crate::scalar::ExactScalar>>),
    /// Float basis with `max ‖Tξ − ξ‖` over the basis.
    Float { basis: Vec<LaurentPoly<Complex64>>, residual: f64 },
}

impl FixedSpace {
    pub fn dimension(&self) -> usize {
        match self {
            FixedSpace::Exact(b) => b.len(),
            FixedSpace::Float { basis, .. } => basis.len(),
        }
    }
}

pub const RANK_TOL: f64 = 1e-10;

pub fn fixed_space(filter: &QmfFilter, n: i64) -> Result<FixedSpace, Error> {
    if !filter.is_band() {
        let need = invariant_degree(filter)?;
        if n < need {
            return Err(Error::DegreeBound { got: n, need });
        }
    }
    Ok(match transfer_matrix(filter, n)? {
        AnyMatrix::Exact(m) => {
            FixedSpace::Exact(nullspace(minus_identity(&m), 0.0).into_iter().map(|v| m.to_poly(&v)).collect())
        }
        AnyMatrix::Float(m) => {
            let vs = nullspace(minus_identity(&m), RANK_TOL);
            let residual = vs
                .iter()
                .map(|v| {
                    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                    let tv = m.apply(v);
                    tv.iter().zip(v).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / norm
                })
                .fold(0.0, f64::max);
            FixedSpace::Float { basis: vs.iter().map(|v| m.to_poly(v)).collect(), residual }
        }
    })
}

/// One peripheral eigenvalue estimate.
#[derive(Clone, Debug, Serialize)]
pub struct Eigen {
    pub re: f64,
    pub im: f64,
    /// `‖Tv − λv‖/‖v‖` for the recovered eigenvector of the full matrix.
    pub residual: f64,
    #[serde(skip)]
    pub vector: Vec<Complex64>,
}

impl Eigen {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralScan {
    pub degree_bound: i64,
    pub peripheral: Vec<Eigen>,
    /// Eigenvalue estimates with `|λ| ≥ 1 − ε` and `λ ≠ 1`.
    pub non_unit_peripheral: bool,
    pub multiplicity_of_one: usize,
    pub inconclusive: bool,
    pub note: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub max_vectors: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub epsilon: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { max_vectors: 8, max_iter: 20_000, tol: 1e-11, epsilon: 1e-6 }
    }
}

type CMat = Vec<Vec<Complex64>>;

fn matvec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: CMat, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).expect("nonempty");
        a.swap(c, p);
        b.swap(c, p);
        let piv = if a[c][c].norm() == 0.0 { Complex64::new(1e-300, 0.0) } else { a[c][c] };
        for i in c + 1..n {
            let f = a[i][c] / piv;
            for j in c..n {
                let t = a[c][j];
                a[i][j] -= f * t;
            }
            let t = b[c];
            b[i] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        let piv = if a[i][i].norm() == 0.0 { Complex64::new(1e-300, 0.0) } else { a[i][i] };
        x[i] = (b[i] - s) / piv;
    }
    x
}

/// Eigenvector for `λ` by shifted inverse iteration.
fn inverse_iteration(a: &CMat, lambda: Complex64, start: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let shift = lambda + Complex64::new(1e-9, 1e-9);
    let mut m = a.clone();
    for (i, row) in m.iter_mut().enumerate().take(n) {
        row[i] -= shift;
    }
    let mut v = start.to_vec();
    normalize(&mut v);
    for _ in 0..4 {
        v = solve(m.clone(), v);
        normalize(&mut v);
    }
    v
}

fn residual(a: &CMat, lambda: Complex64, v: &[Complex64]) -> f64 {
    let av = matvec(a, v);
    let r: Vec<Complex64> = av.iter().zip(v).map(|(x, y)| x - lambda * y).collect();
    norm(&r) / norm(v)
}

/// Householder deflation: removes the eigendirection `v` of `b`.
fn deflate(b: &CMat, v: &[Complex64]) -> CMat {
    let m = b.len();
    let mut v = v.to_vec();
    normalize(&mut v);
    let phase = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { Complex64::new(1.0, 0.0) };
    let alpha = -phase;
    let mut u = v.clone();
    u[0] -= alpha;
    let un = norm(&u);
    if un < 1e-14 {
        return b[1..].iter().map(|r| r[1..].to_vec()).collect();
    }
    u.iter_mut().for_each(|x| *x /= un);
    // H = I − 2uuᴴ, then B' = H B H.
    let apply_h = |x: &[Complex64]| -> Vec<Complex64> {
        let d = dot(&u, x) * 2.0;
        x.iter().zip(&u).map(|(xi, ui)| xi - ui * d).collect()
    };
    let cols: Vec<Vec<Complex64>> = (0..m).map(|j| apply_h(&b.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    // cols[j] = H·B e_j; now multiply on the right by H: (HB)H = ((H (HB)ᴴ))ᴴ.
    let hb: CMat = (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect();
    let rows: CMat = hb
        .iter()
        .map(|r| {
            let conj: Vec<Complex64> = r.iter().map(|x| x.conj()).collect();
            apply_h(&conj).iter().map(|x| x.conj()).collect()
        })
        .collect();
    rows[1..].iter().map(|r| r[1..].to_vec()).collect()
}

fn start_vector(m: usize) -> Vec<Complex64> {
    (0..m).map(|i| Complex64::new(1.0 + 0.37 * (i as f64).sin(), 0.21 * (i as f64 * 1.3).cos())).collect()
}

/// Power iteration on `b`; either one converged eigenvalue or a pair from a
/// two-term recurrence fit when the dominant eigenvalues share a modulus.
fn dominant(b: &CMat, cfg: &ScanConfig) -> Option<Vec<Complex64>> {
    let mut v = start_vector(b.len());
    normalize(&mut v);
    let mut lambda = Complex64::new(0.0, 0.0);
    for _ in 0..cfg.max_iter {
        let mut w = matvec(b, &v);
        lambda = dot(&v, &w);
        if residual(b, lambda, &v) <= cfg.tol {
            return Some(vec![lambda]);
        }
        if norm(&w) < 1e-300 {
            return Some(vec![Complex64::new(0.0, 0.0)]);
        }
        normalize(&mut w);
        v = w;
    }
    // Equal-modulus pair: fit B²v = a·Bv + c·v.
    let x1 = matvec(b, &v);
    let x2 = matvec(b, &x1);
    let (g11, g12, g22) = (dot(&v, &v), dot(&v, &x1), dot(&x1, &x1));
    let (r1, r2) = (dot(&v, &x2), dot(&x1, &x2));
    let det = g11 * g22 - g12 * g12.conj();
    if det.norm() < 1e-14 {
        return (residual(b, lambda, &v) < 1e-6).then(|| vec![lambda]);
    }
    let c = (g22 * r1 - g12 * r2) / det;
    let a = (g11 * r2 - g12.conj() * r1) / det;
    let fit: Vec<Complex64> = x2.iter().zip(&x1).zip(&v).map(|((p, q), s)| p - a * q - c * s).collect();
    if norm(&fit) > 1e-8 * norm(&x2).max(1e-300) {
        return None;
    }
    let disc = (a * a + c * 4.0).sqrt();
    Some(vec![(a + disc) / 2.0, (a - disc) / 2.0])
}

/// Peripheral spectrum of the truncated transfer matrix.
pub fn spectral_scan(filter: &QmfFilter, n: i64, cfg: &ScanConfig) -> Result<SpectralScan, Error> {
    let full: CMat = match transfer_matrix(filter, n)? {
        AnyMatrix::Exact(m) => m.to_complex().rows,
        AnyMatrix::Float(m) => m.rows,
    };
    let mut b = full.clone();
    let mut found: Vec<Eigen> = Vec::new();
    let mut inconclusive = false;
    'outer: while found.len() < cfg.max_vectors && !b.is_empty() {
        let Some(lams) = dominant(&b, cfg) else {
            inconclusive = true;
            break;
        };
        for lam in lams {
            if lam.norm() < 1.0 - cfg.epsilon || b.is_empty() || found.len() >= cfg.max_vectors {
                break 'outer;
            }
            let vb = inverse_iteration(&b, lam, &start_vector(b.len()));
            let vf = inverse_iteration(&full, lam, &start_vector(full.len()));
            let res = residual(&full, lam, &vf);
            found.push(Eigen { re: lam.re, im: lam.im, residual: res, vector: vf });
            b = deflate(&b, &vb);
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let multiplicity_of_one = found.iter().filter(|e| (e.value() - one).norm() <= cfg.epsilon).count();
    let non_unit_peripheral = found
        .iter()
        .any(|e| e.value().norm() >= 1.0 - cfg.epsilon && (e.value() - one).norm() > cfg.epsilon);
    Ok(SpectralScan {
        degree_bound: n,
        peripheral: found,
        non_unit_peripheral,
        multiplicity_of_one,
        inconclusive,
        note: "finite truncation only; no completeness claim for the continuous spectrum",
    })
}

/// `(Rⁿf)₀ = ∫ D_n f dμ` for `n = 0..=n_max`.
pub fn meyer_paiva_limit<S: Scalar>(w: &LaurentPoly<S>, f: &LaurentPoly<S>, n_max: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut cur = f.clone();
    for _ in 0..=n_max {
        out.push(cur.mean());
        cur = apply_weight(w, &cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{ExactPoly, FloatPoly};
    use crate::scalar::ExactScalar;

    fn exact_w(f: &QmfFilter) -> ExactPoly {
        match f.modulus_squared().unwrap() {
            AnyPoly::Exact(w) => w,
            _ => panic!(),
        }
    }

    fn alpha0() -> ExactPoly {
        ExactPoly::from_ints(-2, &[1, 2, 3, 2, 1]).scale(&ExactScalar::from_ratio(1, 9))
    }

    #[test]
    fn constant_is_fixed() {
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            assert_eq!(apply_weight(&exact_w(&f), &ExactPoly::one()), ExactPoly::one());
        }
    }

    #[test]
    fn haar_on_z() {
        let f = QmfFilter::haar();
        let r = apply_weight(&exact_w(&f), &ExactPoly::monomial(1, ExactScalar::from_int(1)));
        assert_eq!(r, ExactPoly::from_ints(0, &[1, 1]).scale(&ExactScalar::from_ratio(1, 2)));
        for j in 0..128 {
            let z = grid_point(j, 128);
            let direct = ruelle_pointwise(&f, |w| w, z);
            assert!((direct - r.eval(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn cubic_eigenfunction() {
        let f = QmfFilter::cubic();
        assert_eq!(apply_weight(&exact_w(&f), &alpha0()), alpha0());
    }

    #[test]
    fn adjoint_iterates_give_kernel() {
        for f in [QmfFilter::haar(), QmfFilter::cubic()] {
            let w = exact_w(&f);
            let mut d = ExactPoly::one();
            for n in 1..=5 {
                d = adjoint_weight(&w, &d);
                let crate::filter::KernelDn::Laurent { poly: AnyPoly::Exact(k), .. } =
                    crate::filter::kernel_dn(&f, n, 1 << 16).unwrap()
                else {
                    panic!()
                };
                assert_eq!(d, k);
            }
        }
    }

    #[test]
    fn fixed_spaces() {
        let FixedSpace::Exact(b) = fixed_space(&QmfFilter::haar(), 2).unwrap() else { panic!() };
        assert_eq!(b.len(), 1);
        let w = exact_w(&QmfFilter::haar());
        for v in &b {
            assert_eq!(&apply_weight(&w, v), v);
        }
        let f = QmfFilter::cubic();
        let FixedSpace::Exact(b) = fixed_space(&f, 4).unwrap() else { panic!() };
        assert!(b.len() >= 2);
        // 𝟙 and α₀ both lie in the span: solve via nullspace of [basis | target].
        for target in [ExactPoly::one(), alpha0()] {
            let mut cols: Vec<Vec<ExactScalar>> = b.iter().map(|p| (-4..=4).map(|k| p.coeff(k)).collect()).collect();
            cols.push((-4..=4).map(|k| target.coeff(k)).collect());
            let mat: Vec<Vec<ExactScalar>> = (0..9).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            let ns = nullspace(mat, 0.0);
            assert!(ns.iter().any(|v| !v.last().unwrap().is_zero()));
        }
        assert!(matches!(fixed_space(&f, 2), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn shannon_sampled_fixed_space() {
        let FixedSpace::Float { basis, residual } = fixed_space(&QmfFilter::shannon(), 8).unwrap() else { panic!() };
        assert!(!basis.is_empty());
        assert!(residual <= 1e-10);
    }

    #[test]
    fn band_weights_match_closed_form() {
        // Shannon: |m₀|² = 2χ_{[−π/2,π/2)}, coefficient k = 2 sin(kπ/2)/(kπ).
        let f = QmfFilter::shannon();
        for k in -6..=6i64 {
            let c = band_weight_coeff(&f, k).unwrap();
            let expect = if k == 0 { 1.0 } else { 2.0 * (k as f64 * PI / 2.0).sin() / (k as f64 * PI) };
            assert!((c - Complex64::new(expect, 0.0)).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn sampled_application_matches_coefficients() {
        let f = QmfFilter::cubic();
        let xi = alpha0().to_float();
        let fine = SampledCircleFn::sample(&xi, 64).unwrap();
        let r = ruelle_apply_sampled(&f, &fine).unwrap();
        let expect = SampledCircleFn::sample(&xi, 32).unwrap();
        assert!(r.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn spectral_scans() {
        let cfg = ScanConfig::default();
        let s = spectral_scan(&QmfFilter::haar(), 4, &cfg).unwrap();
        assert_eq!(s.multiplicity_of_one, 1);
        assert!(!s.non_unit_peripheral);
        for e in &s.peripheral {
            assert!(e.residual <= 1e-8);
        }
        let s = spectral_scan(&QmfFilter::cubic(), 4, &cfg).unwrap();
        assert!(s.multiplicity_of_one >= 2, "{s:?}");
        for e in &s.peripheral {
            assert!(e.residual <= 1e-8, "{e:?}");
        }
    }

    #[test]
    fn meyer_paiva_haar() {
        let w = exact_w(&QmfFilter::haar());
        let seq = meyer_paiva_limit(&w, &ExactPoly::monomial(1, ExactScalar::from_int(1)), 10);
        for (n, v) in seq.iter().enumerate() {
            assert_eq!(*v, ExactScalar::from_int(1) - ExactScalar::pow2_half(-2 * n as i64));
        }
        let g = ExactPoly::from_ints(0, &[1, -1]);
        let seq = meyer_paiva_limit(&w, &g, 30);
        assert!(seq[30].to_f64().abs() < 1e-8);
        let fw: FloatPoly = w.to_float();
        let ones = meyer_paiva_limit(&fw, &FloatPoly::one(), 5);
        assert!(ones.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }
}
