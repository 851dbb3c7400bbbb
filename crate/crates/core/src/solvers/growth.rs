//! Growth of a numerically propagated solution: m, T = m (entire
//! solutions have no poles) and log M from a fan of rays.

use super::ray::{integrate_ray, RayOptions, RaySolution};
use super::SolverError;
use crate::equation::Equation;
use crate::nevanlinna::{GrowthRecord, GrowthSeries};
use crate::par;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthOptions {
    pub theta_count: usize,
    pub max_theta_count: usize,
    /// relative change of m(r) at which ray doubling stops
    pub m_tol: f64,
    pub ray_tol: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions { theta_count: 64, max_theta_count: 1024, m_tol: 1e-3, ray_tol: 1e-9 }
    }
}

/// Rays plus the growth series assembled from them.
#[derive(Debug, Clone)]
pub struct SolutionGrowth {
    pub series: GrowthSeries,
    pub rays: Vec<RaySolution>,
    pub converged: bool,
}

fn ray_theta(k: usize, count: usize) -> f64 {
    2.0 * PI * k as f64 / count as f64
}

fn run_rays(eq: &Equation, ic: &[C], radii: &[f64], thetas: &[f64], tol: f64) -> Result<Vec<RaySolution>, SolverError> {
    let r_max = *radii.last().expect("non-empty grid");
    par::map(thetas, |&th| integrate_ray(eq, th, 0.0, r_max, ic, radii, RayOptions { tol, richardson: false }))
        .into_iter()
        .collect()
}

fn m_values(rays: &[RaySolution], radii: &[f64]) -> Vec<Option<f64>> {
    radii
        .iter()
        .map(|&r| {
            let mut acc = 0.0;
            for ray in rays {
                acc += ray.log_abs_at(r)?.max(0.0);
            }
            Some(acc / rays.len() as f64)
        })
        .collect()
}

/// Growth series of the solution with state `ic` at the origin over the
/// ascending grid `radii`.
pub fn solution_growth(
    eq: &Equation,
    ic: &[C],
    radii: &[f64],
    grid: &str,
    opts: GrowthOptions,
) -> Result<SolutionGrowth, SolverError> {
    if radii.is_empty() {
        return Err(SolverError::Invalid("empty radius grid".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(SolverError::Invalid("radius grid must be positive and increasing".into()));
    }
    super::ray::check_inputs(eq, ic, 0.0, *radii.last().unwrap())?;
    let mut count = opts.theta_count.max(4);
    let thetas: Vec<f64> = (0..count).map(|k| ray_theta(k, count)).collect();
    let mut rays = run_rays(eq, ic, radii, &thetas, opts.ray_tol)?;
    let mut m = m_values(&rays, radii);
    let mut converged = false;
    while count < opts.max_theta_count {
        let odd: Vec<f64> = (0..count).map(|k| ray_theta(2 * k + 1, 2 * count)).collect();
        let extra = run_rays(eq, ic, radii, &odd, opts.ray_tol)?;
        let mut merged = Vec::with_capacity(2 * count);
        for (a, b) in rays.into_iter().zip(extra) {
            merged.push(a);
            merged.push(b);
        }
        rays = merged;
        count *= 2;
        let m2 = m_values(&rays, radii);
        let done = m.iter().zip(&m2).all(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => (a - b).abs() < opts.m_tol * b.abs().max(1.0),
            _ => true,
        });
        m = m2;
        if done {
            converged = true;
            break;
        }
    }
    let records = radii
        .iter()
        .zip(&m)
        .map(|(&r, mv)| match mv {
            None => GrowthRecord::missing(r),
            Some(mv) => {
                let (mut best, mut th) = (f64::NEG_INFINITY, 0.0);
                for ray in &rays {
                    let v = ray.log_abs_at(r).unwrap_or(f64::NEG_INFINITY);
                    if v > best {
                        best = v;
                        th = ray.theta;
                    }
                }
                GrowthRecord { r, m: Some(*mv), n: Some(0.0), t: Some(*mv), log_m: Some(best), argmax_theta: Some(th) }
            }
        })
        .collect();
    Ok(SolutionGrowth {
        series: GrowthSeries { domain: eq.domain(), grid: grid.to_string(), records },
        rays,
        converged,
    })
}

/// `theta,r,log_abs_f` lines for every recorded ray point.
pub fn ray_dump_csv(rays: &[RaySolution]) -> String {
    use std::fmt::Write;
    let mut s = String::from("theta,r,log_abs_f\n");
    for ray in rays {
        for p in &ray.points {
            let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", ray.theta, p.r, p.log_abs_f());
        }
    }
    s
}
