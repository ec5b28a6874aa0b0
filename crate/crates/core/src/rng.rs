//! Seeded generators for reproducible random probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::laurent::{ExactPoly, FloatPoly};
use crate::scalar::ExactScalar;

pub type ProbeRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> ProbeRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational `p/q` with `|p| ≤ max_num`, `1 ≤ q ≤ max_den`.
pub fn rational(rng: &mut ProbeRng, max_num: i64, max_den: i64) -> ExactScalar {
    let p = rng.gen_range(-max_num..=max_num);
    let q = rng.gen_range(1..=max_den);
    ExactScalar::from_ratio(p, q)
}

/// Exact polynomial with degrees in `lo..=hi` and small rational coefficients.
pub fn exact_poly(rng: &mut ProbeRng, lo: i64, hi: i64) -> ExactPoly {
    ExactPoly::new(lo, (lo..=hi).map(|_| rational(rng, 9, 7)).collect())
}

/// Complex polynomial with degrees in `lo..=hi`, coefficients in the unit box.
pub fn float_poly(rng: &mut ProbeRng, lo: i64, hi: i64) -> FloatPoly {
    FloatPoly::new(
        lo,
        (lo..=hi)
            .map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

/// Polynomial with nonnegative values on the circle: `|q|²`.
pub fn nonneg_poly(rng: &mut ProbeRng, span: i64) -> FloatPoly {
    let q = float_poly(rng, 0, span);
    q.modulus_squared()
}

pub fn unit_f64(rng: &mut ProbeRng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

pub fn complex(rng: &mut ProbeRng) -> num_complex::Complex64 {
    num_complex::Complex64::new(unit_f64(rng), unit_f64(rng))
}
