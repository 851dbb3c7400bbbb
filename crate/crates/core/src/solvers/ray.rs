//! Dormand–Prince 5(4) propagation of the companion system along a ray,
//! with the state renormalized into [0.5, 2] after every accepted step.

use super::SolverError;
use crate::equation::{Equation, OperatorKind};
use crate::funcexpr::Domain;
use num_complex::Complex64 as C;

pub const DEFAULT_RAY_TOL: f64 = 1e-10;
const MAX_STEPS: usize = 2_000_000;

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const NODES: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Renormalized state at one radius of the output grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPoint {
    pub r: f64,
    /// (f, f', …, f^{(n−1)}) divided by e^{log_scale}
    pub state: Vec<C>,
    pub log_scale: f64,
}

impl RayPoint {
    pub fn log_abs_f(&self) -> f64 {
        self.state[0].norm().ln() + self.log_scale
    }

    /// Component k of the true state, as (mantissa, log scale).
    pub fn component(&self, k: usize) -> crate::scaled::Scaled {
        crate::scaled::Scaled::new(self.state[k], self.log_scale)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaySolution {
    pub theta: f64,
    pub r0: f64,
    pub points: Vec<RayPoint>,
    pub steps: usize,
    /// radius at which propagation stopped early, if it did
    pub truncated_at: Option<f64>,
    /// change of the final log|f| when the tolerance is halved
    pub richardson_delta: Option<f64>,
    pub tol: f64,
}

impl RaySolution {
    pub fn richardson_ok(&self) -> Option<bool> {
        self.richardson_delta.map(|d| d < 10.0 * self.tol * self.last_log_abs().abs().max(1.0))
    }

    pub fn last_log_abs(&self) -> f64 {
        self.points.last().map(|p| p.log_abs_f()).unwrap_or(f64::NAN)
    }

    pub fn log_abs_at(&self, r: f64) -> Option<f64> {
        self.points.iter().find(|p| p.r == r).map(|p| p.log_abs_f())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayOptions {
    pub tol: f64,
    pub richardson: bool,
}

impl Default for RayOptions {
    fn default() -> Self {
        RayOptions { tol: DEFAULT_RAY_TOL, richardson: false }
    }
}

fn norm(y: &[C]) -> f64 {
    y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

struct System<'a> {
    eq: &'a Equation,
    dir: C,
}

impl System<'_> {
    /// d/dt of the companion state at z = t·e^{iθ}; None if a coefficient
    /// is not finite there.
    fn rhs(&self, t: f64, y: &[C], out: &mut [C]) -> Option<()> {
        let z = self.dir * t;
        let n = y.len();
        let mut last = C::new(0.0, 0.0);
        for (j, a) in self.eq.coeffs.iter().enumerate() {
            let v = a.eval_scaled(z).ok()?.to_complex();
            if !v.re.is_finite() || !v.im.is_finite() {
                return None;
            }
            last -= v * y[j];
        }
        for k in 0..n - 1 {
            out[k] = self.dir * y[k + 1];
        }
        out[n - 1] = self.dir * last;
        Some(())
    }
}

fn propagate(eq: &Equation, theta: f64, r0: f64, ic: &[C], stops: &[f64], tol: f64) -> RaySolution {
    let n = ic.len();
    let sys = System { eq, dir: C::from_polar(1.0, theta) };
    let mut y: Vec<C> = ic.to_vec();
    let nrm = norm(&y);
    let mut scale = nrm.ln();
    y.iter_mut().for_each(|c| *c /= nrm);

    let mut points = Vec::with_capacity(stops.len());
    let mut t = r0;
    let mut stop_iter = stops.iter().copied().filter(|&s| s >= r0).peekable();
    while let Some(&s) = stop_iter.peek() {
        if s == r0 {
            points.push(RayPoint { r: s, state: y.clone(), log_scale: scale });
            stop_iter.next();
        } else {
            break;
        }
    }
    let r_end = stops.iter().copied().fold(r0, f64::max);
    let mut h = ((r_end - r0) / 100.0).min(0.01).max(1e-6);
    let mut k: Vec<Vec<C>> = vec![vec![C::new(0.0, 0.0); n]; 7];
    let mut tmp = vec![C::new(0.0, 0.0); n];
    let mut steps = 0usize;
    let mut truncated_at = None;
    let mut fsal = false;

    'outer: while let Some(&target) = stop_iter.peek() {
        if t >= target {
            points.push(RayPoint { r: target, state: y.clone(), log_scale: scale });
            stop_iter.next();
            continue;
        }
        if steps >= MAX_STEPS {
            truncated_at = Some(t);
            break;
        }
        let hh = h.min(target - t);
        let land = hh == target - t;
        if !fsal && sys.rhs(t, &y, &mut k[0]).is_none() {
            truncated_at = Some(t);
            break;
        }
        for s in 0..6 {
            for i in 0..n {
                let mut acc = y[i];
                for (m, a) in A[s].iter().enumerate().take(s + 1) {
                    if *a != 0.0 {
                        acc += k[m][i] * (hh * a);
                    }
                }
                tmp[i] = acc;
            }
            let (_, tail) = k.split_at_mut(s + 1);
            if sys.rhs(t + NODES[s] * hh, &tmp, &mut tail[0]).is_none() {
                truncated_at = Some(t);
                break 'outer;
            }
        }
        // tmp now holds the 5th-order solution (last stage row equals B5)
        let ynorm = norm(&y).max(norm(&tmp));
        let mut err = 0.0f64;
        for i in 0..n {
            let mut e = C::new(0.0, 0.0);
            for m in 0..7 {
                e += k[m][i] * (B5[m] - B4[m]);
            }
            let e = (e * hh).norm();
            let sc = y[i].norm().max(tmp[i].norm()) + 1e-3 * ynorm;
            err = err.max(e / sc);
        }
        let allowed = tol * hh;
        if err <= allowed {
            t = if land { target } else { t + hh };
            y.copy_from_slice(&tmp);
            k.swap(0, 6);
            fsal = true;
            steps += 1;
            let nrm = norm(&y);
            if !(0.5..=2.0).contains(&nrm) {
                if nrm == 0.0 || !nrm.is_finite() {
                    truncated_at = Some(t);
                    break;
                }
                y.iter_mut().for_each(|c| *c /= nrm);
                scale += nrm.ln();
                k[0].iter_mut().for_each(|c| *c /= nrm);
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * (allowed / err).powf(0.25)).clamp(0.2, 5.0) };
            if !land {
                h = hh * fac;
            }
        } else {
            let fac = if err.is_finite() { (0.9 * (allowed / err).powf(0.25)).clamp(0.1, 0.9) } else { 0.1 };
            h = hh * fac;
            if h < 1e-13 * t.abs().max(1.0) {
                truncated_at = Some(t);
                break;
            }
        }
    }
    RaySolution { theta, r0, points, steps, truncated_at, richardson_delta: None, tol }
}

/// Propagates the solution with state `ic` at r0·e^{iθ} along the ray and
/// records it at every radius in `stops` (ascending, ≤ r_max).
pub fn integrate_ray(
    eq: &Equation,
    theta: f64,
    r0: f64,
    r_max: f64,
    ic: &[C],
    stops: &[f64],
    opts: RayOptions,
) -> Result<RaySolution, SolverError> {
    check_inputs(eq, ic, r0, r_max)?;
    let mut grid: Vec<f64> = stops.iter().copied().filter(|&s| s >= r0 && s <= r_max).collect();
    if grid.last() != Some(&r_max) {
        grid.push(r_max);
    }
    let mut sol = propagate(eq, theta, r0, ic, &grid, opts.tol);
    if opts.richardson && sol.truncated_at.is_none() {
        let fine = propagate(eq, theta, r0, ic, &grid, opts.tol / 2.0);
        sol.richardson_delta = Some((fine.last_log_abs() - sol.last_log_abs()).abs());
    }
    Ok(sol)
}

pub(crate) fn check_inputs(eq: &Equation, ic: &[C], r0: f64, r_max: f64) -> Result<(), SolverError> {
    if eq.kind != OperatorKind::Derivative {
        return Err(SolverError::NotDerivative);
    }
    if eq.order() == 0 {
        return Err(SolverError::Invalid("equation of order 0".into()));
    }
    if ic.len() != eq.order() {
        return Err(SolverError::Invalid(format!(
            "initial state has {} entries, equation order is {}",
            ic.len(),
            eq.order()
        )));
    }
    if ic.iter().all(|c| *c == C::new(0.0, 0.0)) {
        return Err(SolverError::ZeroInitialCondition);
    }
    if ic.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(SolverError::Invalid("initial state is not finite".into()));
    }
    if !(r0 >= 0.0 && r_max > r0) {
        return Err(SolverError::Invalid(format!("need 0 <= r0 < r_max, got r0={r0}, r_max={r_max}")));
    }
    if eq.domain() == Domain::Disc && r_max >= 1.0 {
        return Err(SolverError::RadiusOutsideDomain(r_max));
    }
    Ok(())
}

/// Solution state at z_end for the state `ic` given at the origin, as
/// (renormalized state, log scale).
pub fn state_at(eq: &Equation, ic: &[C], z_end: C, tol: f64) -> Result<RayPoint, SolverError> {
    let r = z_end.norm();
    if r == 0.0 {
        check_inputs(eq, ic, 0.0, 1e-3)?;
        let nrm = norm(ic);
        return Ok(RayPoint { r: 0.0, state: ic.iter().map(|c| c / nrm).collect(), log_scale: nrm.ln() });
    }
    let sol = integrate_ray(eq, z_end.arg(), 0.0, r, ic, &[r], RayOptions { tol, richardson: false })?;
    if let Some(t) = sol.truncated_at {
        return Err(SolverError::Truncated { theta: sol.theta, r: t });
    }
    Ok(sol.points.last().cloned().expect("end point recorded"))
}
