//! Functions sampled on the grid `z_j = e^{-2πij/N}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::laurent::{FloatPoly, LaurentPoly};
use crate::scalar::Scalar;
use crate::Error;

/// `z_j = e^{-2πij/N}`.
pub fn grid_point(j: usize, n: usize) -> Complex64 {
    let k = (j % n) as f64;
    Complex64::from_polar(1.0, -2.0 * PI * k / n as f64)
}

/// Values of a circle function on the `N`-point grid, `N` a power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCircleFn {
    values: Vec<Complex64>,
}

impl SampledCircleFn {
    pub fn new(values: Vec<Complex64>) -> Result<Self, Error> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(Error::Grid(format!("sample count {} is not a power of two", values.len())));
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self, Error> {
        Self::new((0..n).map(|j| f(grid_point(j, n))).collect())
    }

    pub fn sample<S: Scalar>(p: &LaurentPoly<S>, n: usize) -> Result<Self, Error> {
        Self::from_fn(n, |z| p.eval(z))
    }

    pub fn n_samples(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Trigonometric interpolant with degrees `lo..=lo+N-1` recovered by the
    /// discrete Fourier sum; exact for polynomials whose span is below `N`.
    pub fn interpolate(&self, lo: i64) -> FloatPoly {
        let n = self.values.len();
        let coeffs = (0..n as i64)
            .map(|i| {
                let deg = lo + i;
                let s: Complex64 = self
                    .values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * grid_point(j, n).powi(-(deg.rem_euclid(n as i64)) as i32))
                    .sum();
                s / n as f64
            })
            .collect();
        FloatPoly::new(lo, coeffs)
    }

    /// Mean over the grid, the quadrature of `∫ f dμ`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.values.iter().zip(&o.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::ExactPoly;

    #[test]
    fn grid_orientation() {
        let z = grid_point(1, 4);
        assert!((z - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn interpolation_round_trip() {
        let p = ExactPoly::from_ints(-3, &[1, 0, 2, 5, -1, 0, 7]);
        let s = SampledCircleFn::sample(&p, 16).unwrap();
        let back = s.interpolate(-8).chop(1e-12);
        let expect = p.to_float();
        assert_eq!(back.lo(), expect.lo());
        assert!(back.sub(&expect).max_abs() <= 1e-12);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(SampledCircleFn::new(vec![Complex64::new(0.0, 0.0); 6]).is_err());
    }
}
