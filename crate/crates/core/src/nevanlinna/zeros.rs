//! Argument-principle zero counting and the integrated counting function.

use super::NevError;
use crate::funcexpr::FunctionExpr;
use crate::par;
use crate::scaled::Scaled;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const START_NODES: usize = 256;
const MAX_DEPTH: usize = 40;

fn sample(f: &FunctionExpr, a: Scaled, r: f64, th: f64) -> Result<Scaled, NevError> {
    Ok(f.eval_scaled(C::from_polar(r, th))?.sub(a))
}

fn segment(
    f: &FunctionExpr,
    a: Scaled,
    r: f64,
    (t0, g0): (f64, Scaled),
    (t1, g1): (f64, Scaled),
    depth: usize,
) -> Result<f64, NevError> {
    let d = g1.div(g0).arg();
    if d.abs() < PI / 2.0 {
        return Ok(d);
    }
    if depth >= MAX_DEPTH {
        return Err(NevError::PhaseTracking { r });
    }
    let tm = 0.5 * (t0 + t1);
    let gm = sample(f, a, r, tm)?;
    if gm.is_zero() {
        return Err(NevError::ZeroOnContour { r });
    }
    Ok(segment(f, a, r, (t0, g0), (tm, gm), depth + 1)? + segment(f, a, r, (tm, gm), (t1, g1), depth + 1)?)
}

/// Winding number of f − a along |z| = r: zeros minus poles inside, with
/// multiplicity. Increments are halved until each is below π/2.
pub fn count_zeros(f: &FunctionExpr, a: C, r: f64) -> Result<i64, NevError> {
    let a = Scaled::from_c(a);
    let thetas: Vec<f64> = (0..=START_NODES).map(|j| 2.0 * PI * j as f64 / START_NODES as f64).collect();
    let vals: Vec<Result<Scaled, NevError>> = par::map(&thetas[..START_NODES], |&t| sample(f, a, r, t));
    let mut vals: Vec<Scaled> = vals.into_iter().collect::<Result<_, _>>()?;
    if vals.iter().any(|v| v.is_zero()) {
        return Err(NevError::ZeroOnContour { r });
    }
    if vals.iter().any(|v| v.is_nan() || v.is_infinite()) {
        return Err(NevError::PhaseTracking { r });
    }
    vals.push(vals[0]);
    let incs: Vec<Result<f64, NevError>> = par::map_range(START_NODES, |j| {
        segment(f, a, r, (thetas[j], vals[j]), (thetas[j + 1], vals[j + 1]), 0)
    });
    let mut total = 0.0;
    for inc in incs {
        total += inc?;
    }
    let w = total / (2.0 * PI);
    if (w - w.round()).abs() > 1e-3 {
        return Err(NevError::PhaseTracking { r });
    }
    Ok(w.round() as i64)
}

/// [`count_zeros`] with the radius nudged outward (by 1e-9·r, growing ×10)
/// when an a-point sits on the contour. Returns the count and radius used.
pub fn count_zeros_nudged(f: &FunctionExpr, a: C, r: f64) -> Result<(i64, f64), NevError> {
    let mut rr = r;
    let mut nudge = 1e-9;
    let mut last = None;
    for _ in 0..4 {
        match count_zeros(f, a, rr) {
            Ok(n) => return Ok((n, rr)),
            Err(e @ (NevError::ZeroOnContour { .. } | NevError::PhaseTracking { .. })) => {
                last = Some(e);
                rr = r * (1.0 + nudge);
                nudge *= 10.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Smallest radius probed; a-points inside it are treated as lying at the origin.
fn origin_radius(r: f64) -> f64 {
    1e-9 * r.min(1.0)
}

fn locate_jumps(
    f: &FunctionExpr,
    a: C,
    (t0, n0): (f64, i64),
    (t1, n1): (f64, i64),
    out: &mut Vec<(f64, i64)>,
) -> Result<(), NevError> {
    if n0 == n1 {
        return Ok(());
    }
    if t1 / t0 - 1.0 < 1e-12 {
        out.push(((t0 * t1).sqrt(), n1 - n0));
        return Ok(());
    }
    let tm = (t0 * t1).sqrt();
    let (nm, tm) = count_zeros_nudged(f, a, tm)?;
    locate_jumps(f, a, (t0, n0), (tm, nm), out)?;
    locate_jumps(f, a, (tm, nm), (t1, n1), out)
}

/// Radii and sizes of the jumps of n(t, a, f) on (0, r], plus n(0).
pub fn jump_set(f: &FunctionExpr, a: C, r: f64) -> Result<(i64, Vec<(f64, i64)>), NevError> {
    let rho0 = origin_radius(r);
    let (n0, rho0) = count_zeros_nudged(f, a, rho0)?;
    let k = ((r / rho0).ln() * 4.0).ceil().max(16.0) as usize;
    let ts: Vec<f64> = (0..=k).map(|i| rho0 * (r / rho0).powf(i as f64 / k as f64)).collect();
    let counts: Vec<Result<(i64, f64), NevError>> = par::map(&ts[1..], |&t| count_zeros_nudged(f, a, t));
    let mut pts = vec![(rho0, n0)];
    for c in counts {
        let (n, t) = c?;
        pts.push((t, n));
    }
    let mut jumps = Vec::new();
    for w in pts.windows(2) {
        locate_jumps(f, a, w[0], w[1], &mut jumps)?;
    }
    Ok((n0, jumps))
}

/// N(r, a, f) = n(0)·log r + Σ_j Δn_j·log(r/t_j) over the located jumps.
pub fn counting_n(f: &FunctionExpr, a: C, r: f64) -> Result<f64, NevError> {
    let (n0, jumps) = jump_set(f, a, r)?;
    let mut s = n0 as f64 * r.ln();
    for (t, dn) in jumps {
        if t < r {
            s += dn as f64 * (r / t).ln();
        }
    }
    Ok(s)
}
