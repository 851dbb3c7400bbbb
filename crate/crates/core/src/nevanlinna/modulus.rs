//! Maximum modulus and maximum-curve tracing.

use super::NevError;
use crate::funcexpr::FunctionExpr;
use crate::par;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const COARSE: usize = 512;
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxModulus {
    pub log_m: f64,
    pub theta: f64,
}

fn log_abs(f: &FunctionExpr, r: f64, th: f64) -> Result<f64, NevError> {
    Ok(f.eval_log(C::from_polar(r, th))?.ln_abs)
}

/// Coarse scan size: the quadrature floor for narrow peaks, at least COARSE.
fn coarse_count(f: &FunctionExpr, r: f64) -> usize {
    super::quad::start_nodes(r, f.domain() == crate::funcexpr::Domain::Disc).max(COARSE)
}

fn coarse(f: &FunctionExpr, r: f64) -> Result<Vec<f64>, NevError> {
    let n = coarse_count(f, r);
    par::map_range(n, |j| log_abs(f, r, 2.0 * PI * j as f64 / n as f64))
        .into_iter()
        .collect()
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Golden-section refinement of a coarse maximum at node `j`.
fn polish(f: &FunctionExpr, r: f64, vals: &[f64], j: usize) -> Result<MaxModulus, NevError> {
    let n = vals.len();
    let h = 2.0 * PI / n as f64;
    let th = j as f64 * h;
    let best = vals[j];
    let left = vals[(j + n - 1) % n];
    let right = vals[(j + 1) % n];
    let tie = TIE * best.abs().max(1.0);
    if (best - left).abs() <= tie && (best - right).abs() <= tie {
        return Ok(MaxModulus { log_m: best, theta: th });
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (th - h, th + h);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = log_abs(f, r, c)?;
    let mut fd = log_abs(f, r, d)?;
    for _ in 0..80 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = log_abs(f, r, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = log_abs(f, r, d)?;
        }
    }
    let t = 0.5 * (a + b);
    let v = log_abs(f, r, t)?;
    if v > best + 1e-13 * best.abs().max(1.0) {
        Ok(MaxModulus { log_m: v, theta: t.rem_euclid(2.0 * PI) })
    } else {
        Ok(MaxModulus { log_m: best, theta: th })
    }
}

/// log M(r, f) and an angle where it is attained. Among equal maxima the
/// smallest coarse angle wins, so f(z) = z reports θ = 0.
pub fn max_modulus(f: &FunctionExpr, r: f64) -> Result<MaxModulus, NevError> {
    let vals = coarse(f, r)?;
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m.is_nan() {
        return Err(NevError::Undefined { r });
    }
    let tie = TIE * m.abs().max(1.0);
    let j = vals.iter().position(|v| *v >= m - tie).unwrap_or(0);
    polish(f, r, &vals, j)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxCurve {
    pub radii: Vec<f64>,
    pub thetas: Vec<f64>,
    pub log_m: Vec<f64>,
    /// `jumps[k]` is set when θ moved by more than the threshold between
    /// radii k−1 and k.
    pub jumps: Vec<bool>,
}

impl MaxCurve {
    pub fn points(&self) -> Vec<C> {
        self.radii.iter().zip(&self.thetas).map(|(r, t)| C::from_polar(*r, *t)).collect()
    }

    pub fn has_jumps(&self) -> bool {
        self.jumps.iter().any(|j| *j)
    }
}

pub const JUMP_THRESHOLD: f64 = 0.5;

/// Follows one branch of the maximum set: among near-ties the candidate
/// closest to the previous angle is taken.
pub fn trace_max_curve(f: &FunctionExpr, radii: &[f64]) -> Result<MaxCurve, NevError> {
    let mut out = MaxCurve { radii: radii.to_vec(), thetas: vec![], log_m: vec![], jumps: vec![] };
    let mut prev: Option<f64> = None;
    for &r in radii {
        let vals = coarse(f, r)?;
        let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m.is_nan() {
            return Err(NevError::Undefined { r });
        }
        let tie = 1e-9 * m.abs().max(1.0);
        let cands = (0..vals.len()).filter(|&j| vals[j] >= m - tie);
        let h = 2.0 * PI / vals.len() as f64;
        let j = match prev {
            None => cands.min().unwrap(),
            Some(p) => cands
                .min_by(|&a, &b| circ_dist(a as f64 * h, p).total_cmp(&circ_dist(b as f64 * h, p)))
                .unwrap(),
        };
        let mm = polish(f, r, &vals, j)?;
        out.jumps.push(prev.is_some_and(|p| circ_dist(mm.theta, p) > JUMP_THRESHOLD));
        prev = Some(mm.theta);
        out.thetas.push(mm.theta);
        out.log_m.push(mm.log_m);
    }
    Ok(out)
}
