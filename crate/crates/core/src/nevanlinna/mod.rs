//! Nevanlinna functionals computed numerically: proximity m(r, f),
//! counting N(r, a, f), characteristic T(r, f), maximum modulus, circle and
//! area integrals of |f|^κ, deficiencies, and disc growth indicators.
//!
//! All magnitudes are natural logarithms (nats).

mod modulus;
pub(crate) mod quad;
mod series;
pub mod stats;
mod zeros;

pub use modulus::{max_modulus, trace_max_curve, MaxCurve, MaxModulus, JUMP_THRESHOLD};
pub use series::{CsvError, GridSet, GrowthRecord, GrowthSeries, GROWTH_HEADER};
pub use stats::{tail_liminf, tail_limsup, TailEstimate};
pub use zeros::{count_zeros, count_zeros_nudged, counting_n, jump_set};

use crate::funcexpr::{Domain, ExprError, FunctionExpr};
use crate::grid::tail_start;
use crate::par;
use crate::scaled::Scaled;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Default quadrature tolerance (relative once estimates exceed 1 nat).
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default trim fraction for tail statistics.
pub const DEFAULT_TRIM: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NevError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("quadrature did not converge at r = {r}: last two estimates {prev} and {last}")]
    NoConvergence { r: f64, prev: f64, last: f64 },
    #[error("an a-point lies on |z| = {r}; nudge the radius")]
    ZeroOnContour { r: f64 },
    #[error("phase tracking did not stabilize on |z| = {r}; nudge the radius")]
    PhaseTracking { r: f64 },
    #[error("function value undefined on |z| = {r}")]
    Undefined { r: f64 },
    #[error("radius {r} is outside the domain")]
    RadiusOutsideDomain { r: f64 },
    #[error("T(r, f) is bounded on the grid; the deficiency is undefined")]
    BoundedCharacteristic,
    #[error("{0}")]
    Invalid(String),
}

/// A value a ∈ ℂ or ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Finite(C),
    Infinity,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Infinity => f.write_str("inf"),
            Target::Finite(c) if c.im == 0.0 => write!(f, "{}", c.re),
            Target::Finite(c) => write!(f, "{}{:+}i", c.re, c.im),
        }
    }
}

fn check_radius(f: &FunctionExpr, r: f64) -> Result<(), NevError> {
    if !(r > 0.0 && r.is_finite()) || (f.domain() == Domain::Disc && r >= 1.0) {
        return Err(NevError::RadiusOutsideDomain { r });
    }
    Ok(())
}

fn start_nodes(f: &FunctionExpr, r: f64) -> usize {
    quad::start_nodes(r, f.domain() == Domain::Disc)
}

fn ln_abs_at(f: &FunctionExpr, r: f64, th: f64) -> f64 {
    f.eval_log(C::from_polar(r, th)).map(|v| v.ln_abs).unwrap_or(f64::NAN)
}

/// m(r, f) = (1/2π)∫ log⁺|f(re^{iθ})| dθ.
pub fn proximity(f: &FunctionExpr, r: f64, tol: f64) -> Result<f64, NevError> {
    check_radius(f, r)?;
    quad::circle_mean_positive(&|th| ln_abs_at(f, r, th), r, tol, start_nodes(f, r))
}

/// m(r, a, f): m(r, f) for a = ∞, otherwise m(r, 1/(f − a)).
pub fn proximity_to(f: &FunctionExpr, a: Target, r: f64, tol: f64) -> Result<f64, NevError> {
    match a {
        Target::Infinity => proximity(f, r, tol),
        Target::Finite(a) => {
            check_radius(f, r)?;
            let sa = Scaled::from_c(a);
            let l = |th: f64| match f.eval_scaled(C::from_polar(r, th)) {
                Ok(v) => -v.sub(sa).ln_abs(),
                Err(_) => f64::NAN,
            };
            quad::circle_mean_positive(&l, r, tol, start_nodes(f, r))
        }
    }
}

/// T(r, f) = m(r, f) + N(r, f). Poles are the zeros of the denominator when
/// the expression is a quotient at top level; other trees are treated as
/// analytic, so T = m.
pub fn characteristic(f: &FunctionExpr, r: f64, tol: f64) -> Result<f64, NevError> {
    Ok(proximity(f, r, tol)? + pole_counting(f, r)?)
}

fn pole_counting(f: &FunctionExpr, r: f64) -> Result<f64, NevError> {
    match f.as_quotient() {
        Some((_, den)) if den.as_constant().is_none() => counting_n(&den, C::new(0.0, 0.0), r),
        _ => Ok(0.0),
    }
}

/// m, N, T and log M at one radius.
pub fn growth_record(f: &FunctionExpr, r: f64, tol: f64) -> Result<GrowthRecord, NevError> {
    let m = proximity(f, r, tol)?;
    let n = pole_counting(f, r)?;
    let mm = max_modulus(f, r)?;
    Ok(GrowthRecord { r, m: Some(m), n: Some(n), t: Some(m + n), log_m: Some(mm.log_m), argmax_theta: Some(mm.theta) })
}

pub fn growth_series(f: &FunctionExpr, radii: &[f64], grid: &str, tol: f64) -> Result<GrowthSeries, NevError> {
    let recs: Vec<Result<GrowthRecord, NevError>> = par::map(radii, |&r| growth_record(f, r, tol));
    Ok(GrowthSeries { domain: f.domain(), grid: grid.to_string(), records: recs.into_iter().collect::<Result<_, _>>()? })
}

/// ln ∫₀^{2π} |f(re^{iθ})|^κ dθ, accumulated in the log domain.
pub fn circle_p_integral_log(f: &FunctionExpr, r: f64, kappa: f64, tol: f64) -> Result<f64, NevError> {
    check_radius(f, r)?;
    if !(kappa > 0.0) {
        return Err(NevError::Invalid(format!("exponent must be positive, got {kappa}")));
    }
    quad::circle_log_integral(&|th| kappa * ln_abs_at(f, r, th), r, tol, start_nodes(f, r))
}

/// ∫₀^{2π} |f(re^{iθ})|^κ dθ (may overflow to ∞; see [`circle_p_integral_log`]).
pub fn circle_p_integral(f: &FunctionExpr, r: f64, kappa: f64, tol: f64) -> Result<f64, NevError> {
    Ok(circle_p_integral_log(f, r, kappa, tol)?.exp())
}

const AREA_MAX_PANELS: usize = 256;

/// ln ∫_{D(0,r)} |f|^κ dA = ln ∫₀^r ρ ∫₀^{2π}|f(ρe^{iθ})|^κ dθ dρ, with
/// Gauss–Legendre panels in ρ doubled until the log changes by < tol.
pub fn area_p_integral_log(f: &FunctionExpr, r: f64, kappa: f64, tol: f64) -> Result<f64, NevError> {
    check_radius(f, r)?;
    let (x, w) = quad::gl8();
    let eval = |panels: usize| -> Result<f64, NevError> {
        let h = r / panels as f64;
        let mut pts = Vec::with_capacity(panels * x.len());
        for p in 0..panels {
            for (xi, wi) in x.iter().zip(w) {
                pts.push((h * (p as f64 + 0.5 + 0.5 * xi), 0.5 * h * wi));
            }
        }
        let terms: Vec<Result<f64, NevError>> = par::map(&pts, |&(rho, wt)| {
            Ok(wt.ln() + rho.ln() + circle_p_integral_log(f, rho, kappa, tol)?)
        });
        let terms: Vec<f64> = terms.into_iter().collect::<Result<_, _>>()?;
        Ok(quad::log_sum_exp(&terms))
    };
    let mut panels = 2;
    let mut prev = eval(panels)?;
    loop {
        panels *= 2;
        let est = eval(panels)?;
        if (est - prev).abs() < tol.max(1e-12) * 10.0 || est == f64::INFINITY {
            return Ok(est);
        }
        if panels >= AREA_MAX_PANELS {
            return Err(NevError::NoConvergence { r, prev, last: est });
        }
        prev = est;
    }
}

pub fn area_p_integral(f: &FunctionExpr, r: f64, kappa: f64, tol: f64) -> Result<f64, NevError> {
    Ok(area_p_integral_log(f, r, kappa, tol)?.exp())
}

/// Per-radius ratios m(r, a, f)/T(r, f) and their liminf estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DeficiencyReport {
    pub target: Target,
    pub radii: Vec<f64>,
    pub proximity: Vec<f64>,
    pub characteristic: Vec<f64>,
    pub ratios: Vec<f64>,
    pub liminf: TailEstimate,
}

pub fn deficiency(f: &FunctionExpr, a: Target, radii: &[f64], tol: f64, trim: f64) -> Result<DeficiencyReport, NevError> {
    if radii.len() < 3 {
        return Err(NevError::Invalid("deficiency needs at least 3 radii".into()));
    }
    let rows: Vec<Result<(f64, f64), NevError>> =
        par::map(radii, |&r| Ok((characteristic(f, r, tol)?, proximity_to(f, a, r, tol)?)));
    let rows: Vec<(f64, f64)> = rows.into_iter().collect::<Result<_, _>>()?;
    let t: Vec<f64> = rows.iter().map(|x| x.0).collect();
    let m: Vec<f64> = rows.iter().map(|x| x.1).collect();
    let (t0, t1) = (t[0], t[t.len() - 1]);
    if !(t1 - t0 >= 1.0) {
        return Err(NevError::BoundedCharacteristic);
    }
    let ratios: Vec<f64> = m.iter().zip(&t).map(|(m, t)| if *t > 0.0 { m / t } else { f64::NAN }).collect();
    let liminf = tail_liminf(&ratios, trim);
    Ok(DeficiencyReport { target: a, radii: radii.to_vec(), proximity: m, characteristic: t, ratios, liminf })
}

/// T(r)/(−log(1−r)) along a grid accumulating at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub index: f64,
    pub increasing: bool,
    pub threshold: f64,
    pub admissible: bool,
    /// set when the grid stops short of 0.99
    pub coarse_grid: bool,
}

pub const DEFAULT_ADMISSIBILITY_THRESHOLD: f64 = 3.0;

pub fn admissibility_index(f: &FunctionExpr, radii: &[f64], threshold: f64, tol: f64) -> Result<Admissibility, NevError> {
    if f.domain() != Domain::Disc {
        return Err(NevError::Invalid("admissibility is defined for disc functions".into()));
    }
    let t: Vec<Result<f64, NevError>> = par::map(radii, |&r| characteristic(f, r, tol));
    let t: Vec<f64> = t.into_iter().collect::<Result<_, _>>()?;
    let ratios: Vec<f64> = radii.iter().zip(&t).map(|(r, t)| t / -(1.0 - r).ln()).collect();
    Ok(admissibility_from_ratios(radii, ratios, threshold))
}

/// Admissibility verdict from precomputed ratios T(r)/(−log(1−r)).
pub fn admissibility_from_ratios(radii: &[f64], ratios: Vec<f64>, threshold: f64) -> Admissibility {
    let s = tail_start(ratios.len());
    let tail = &ratios[s..];
    let index = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ups = tail.windows(2).filter(|w| w[1] > w[0]).count();
    let increasing = tail.len() >= 2 && tail[tail.len() - 1] > tail[0] && 3 * ups >= 2 * (tail.len() - 1);
    Admissibility {
        radii: radii.to_vec(),
        ratios,
        index,
        increasing,
        threshold,
        admissible: increasing && index > threshold,
        coarse_grid: radii.last().is_none_or(|r| *r < 0.99),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KorenblumProbe {
    pub log_sup: f64,
    pub sup: f64,
    pub at: C,
}

/// max over the sample grid of (1 − |z|²)^q |f(z)|.
pub fn korenblum_probe(f: &FunctionExpr, q: f64, radii: &[f64]) -> Result<KorenblumProbe, NevError> {
    const ANGLES: usize = 256;
    let mut best = KorenblumProbe { log_sup: f64::NEG_INFINITY, sup: 0.0, at: C::new(0.0, 0.0) };
    for &r in radii {
        check_radius(f, r)?;
        let w = q * (1.0 - r * r).ln();
        let vals = par::map_range(ANGLES, |j| ln_abs_at(f, r, 2.0 * PI * j as f64 / ANGLES as f64));
        for (j, v) in vals.into_iter().enumerate() {
            if v.is_nan() {
                return Err(NevError::Undefined { r });
            }
            if v + w > best.log_sup {
                best.log_sup = v + w;
                best.at = C::from_polar(r, 2.0 * PI * j as f64 / ANGLES as f64);
            }
        }
    }
    best.sup = best.log_sup.exp();
    Ok(best)
}

/// limsup over the grid of |E ∩ [r, 1)|/(1 − r); flagged point r_k covers
/// [r_k, r_{k+1}) and the last one covers [r_k, 1).
pub fn density_upper(set: &GridSet) -> f64 {
    let r = set.radii();
    let mask = set.mask();
    let n = r.len();
    if n == 0 {
        return 0.0;
    }
    let cell = |k: usize| if k + 1 < n { r[k + 1] - r[k] } else { 1.0 - r[k] };
    let mut best: f64 = 0.0;
    for i in tail_start(n)..n {
        let measure: f64 = (i..n).filter(|&k| mask[k]).map(cell).sum();
        best = best.max(measure / (1.0 - r[i]));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperOrder {
    /// log(d log L / d log r)/log r maximized over the tail and clamped at 0,
    /// with L = log M when available and T otherwise
    pub estimate: f64,
    /// the same derivative form applied to T
    pub from_t: f64,
    /// log log T / log r over the tail
    pub naive: f64,
    pub low_confidence: bool,
}

fn slope_estimate(pts: &[(f64, f64)]) -> f64 {
    let mut est = f64::NEG_INFINITY;
    for w in pts.windows(2) {
        let slope = (w[1].1.ln() - w[0].1.ln()) / (w[1].0.ln() - w[0].0.ln());
        let rm = (w[0].0 * w[1].0).sqrt();
        if slope > 0.0 && rm > 1.0 {
            est = est.max(slope.ln() / rm.ln());
        }
    }
    est.max(0.0)
}

/// Hyper-order estimate from a plane growth series. The log-derivative form
/// converges much faster at desk radii than log log T / log r (for
/// exp(e^z), log M = e^r gives exactly 1 at every radius).
pub fn hyper_order(series: &GrowthSeries) -> HyperOrder {
    let tail_of = |v: Vec<(f64, f64)>| -> Vec<(f64, f64)> {
        let s = tail_start(v.len());
        v[s..].to_vec()
    };
    let t_pts = tail_of(series.records.iter().filter_map(|r| r.t.map(|t| (r.r, t))).collect());
    let m_pts = tail_of(series.records.iter().filter_map(|r| r.log_m.map(|m| (r.r, m))).collect());
    let low = t_pts.len() < 2
        || t_pts.iter().any(|(_, t)| *t <= std::f64::consts::E)
        || series.domain != Domain::Plane;
    if low {
        return HyperOrder { estimate: 0.0, from_t: 0.0, naive: 0.0, low_confidence: true };
    }
    let from_t = slope_estimate(&t_pts);
    let estimate = if m_pts.len() >= 2 && m_pts.iter().all(|(_, m)| *m > 0.0) {
        slope_estimate(&m_pts)
    } else {
        from_t
    };
    let naive = t_pts
        .iter()
        .filter(|(r, _)| *r > 1.0)
        .map(|(r, t)| t.ln().ln() / r.ln())
        .fold(f64::NEG_INFINITY, f64::max);
    HyperOrder { estimate, from_t, naive: naive.max(0.0), low_confidence: false }
}

#[cfg(test)]
mod tests;
