//! Reproducible sample points for residual checks.

use crate::funcexpr::Domain;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub const DEFAULT_SEED: u64 = 42;

/// `count` points uniform in the disc |z| ≤ radius.
pub fn random_in_disc(radius: f64, count: usize, seed: u64) -> Vec<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rho = radius * rng.gen::<f64>().sqrt();
            let th = 2.0 * PI * rng.gen::<f64>();
            C::from_polar(rho, th)
        })
        .collect()
}

/// `count` equally spaced points on |z| = radius, offset by half a step so
/// no point lands on the real axis.
pub fn on_circle(radius: f64, count: usize) -> Vec<C> {
    (0..count).map(|k| C::from_polar(radius, 2.0 * PI * (k as f64 + 0.5) / count as f64)).collect()
}

/// Residual sample set: 100 points on |z| = 1.5 plus 20 random points in
/// |z| ≤ 2 for the plane; disc sets use |z| = 0.6 and |z| ≤ 0.7.
pub fn residual_samples(domain: Domain, seed: u64) -> Vec<C> {
    let (ring, ball) = match domain {
        Domain::Plane => (1.5, 2.0),
        Domain::Disc => (0.6, 0.7),
    };
    let mut v = on_circle(ring, 100);
    v.extend(random_in_disc(ball, 20, seed));
    v
}
