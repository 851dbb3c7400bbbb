//! Dominance index search over the coefficient conditions, curve
//! conditions along maximum curves, and conclusion ratios for solutions.
//!
//! Limsup values come from finite grids, so a selected index is
//! "numerically consistent with" the hypothesis, not a proof of it.

use crate::funcexpr::{Domain, FunctionExpr};
use crate::nevanlinna::{
    self, area_p_integral_log, characteristic, circle_p_integral_log, max_modulus, tail_liminf, tail_limsup,
    GrowthSeries, MaxCurve, NevError, TailEstimate,
};
use crate::par;
use std::fmt::Write;

/// A candidate index holds when its trimmed estimate is below 1 − this.
pub const DECISION_MARGIN: f64 = 1e-6;
pub const DEFAULT_ETA: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DominanceError {
    #[error("curve exponents must exceed 1, got {0}")]
    Eta(f64),
    #[error("expected {expected} curve exponents, got {got}")]
    EtaCount { expected: usize, got: usize },
    #[error("index p = {p} must satisfy 0 <= p < n = {n}")]
    BadIndex { p: usize, n: usize },
    #[error("empty radius grid")]
    EmptyGrid,
    #[error(transparent)]
    Nevanlinna(#[from] NevError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    /// Σ T(r,A_j)/T(r,A_p)
    Characteristic,
    /// Σ log⁺M(r,A_j)/log⁺M(r,A_p)
    MaxModulus,
    /// Σ (n−j)/(n−p) ∫|A_j|^{1/(n−j)}dθ / ∫|A_p|^{1/(n−p)}dθ
    CircleIntegral,
    /// the same with area integrals over D(0,r)
    AreaIntegral,
}

impl ConditionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::Characteristic => "characteristic",
            ConditionKind::MaxModulus => "max-modulus",
            ConditionKind::CircleIntegral => "circle-integral",
            ConditionKind::AreaIntegral => "area-integral",
        }
    }

    pub fn parse(s: &str) -> Option<ConditionKind> {
        [Self::Characteristic, Self::MaxModulus, Self::CircleIntegral, Self::AreaIntegral]
            .into_iter()
            .find(|k| k.name() == s)
    }

    fn weighted(self) -> bool {
        matches!(self, ConditionKind::CircleIntegral | ConditionKind::AreaIntegral)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub p: usize,
    pub ratios: Vec<f64>,
    pub estimate: TailEstimate,
    pub holds: bool,
    /// |trimmed estimate − 1|
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub kind: ConditionKind,
    pub domain: Domain,
    pub radii: Vec<f64>,
    pub trim: f64,
    /// scanned candidates, in increasing p, up to the selected one
    pub candidates: Vec<Candidate>,
    pub selected: Option<usize>,
    /// radii at which some coefficient quantity could not be computed
    pub failed_radii: Vec<f64>,
}

impl DominanceReport {
    pub fn candidate(&self, p: usize) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.p == p)
    }

    /// `p,r,ratio,trimmed,selected`
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,r,ratio,trimmed,selected\n");
        for c in &self.candidates {
            let sel = u8::from(self.selected == Some(c.p));
            for (r, v) in self.radii.iter().zip(&c.ratios) {
                let _ = writeln!(s, "{},{:.16e},{:.16e},{:.16e},{}", c.p, r, v, c.estimate.trimmed, sel);
            }
        }
        s
    }
}

/// ln of the per-coefficient quantity at r; −∞ for the zero function.
fn log_quantity(a: &FunctionExpr, j: usize, n: usize, kind: ConditionKind, r: f64, tol: f64) -> Result<f64, NevError> {
    if a.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    let kappa = 1.0 / (n - j) as f64;
    match kind {
        ConditionKind::Characteristic => Ok(characteristic(a, r, tol)?.ln()),
        ConditionKind::MaxModulus => Ok(max_modulus(a, r)?.log_m.max(0.0).ln()),
        ConditionKind::CircleIntegral => circle_p_integral_log(a, r, kappa, tol),
        ConditionKind::AreaIntegral => area_p_integral_log(a, r, kappa, tol),
    }
}

fn ratio_term(w: f64, lq_j: f64, lq_p: f64) -> f64 {
    if lq_j == f64::NEG_INFINITY {
        0.0
    } else if lq_p == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        w * (lq_j - lq_p).exp()
    }
}

/// Smallest p whose ratio sum has trimmed tail limsup below 1.
pub fn find_p(a: &[FunctionExpr], kind: ConditionKind, radii: &[f64], trim: f64, tol: f64) -> Result<DominanceReport, DominanceError> {
    let n = a.len();
    let domain = a.iter().fold(Domain::Plane, |d, e| d.join(e.domain()));
    if radii.is_empty() {
        return Err(DominanceError::EmptyGrid);
    }
    let mut report = DominanceReport {
        kind,
        domain,
        radii: radii.to_vec(),
        trim,
        candidates: Vec::new(),
        selected: None,
        failed_radii: Vec::new(),
    };
    if n == 0 {
        return Ok(report);
    }
    // lq[j][i]: log-quantity of A_j at radii[i]; NaN where it failed
    let lq: Vec<Vec<f64>> = (0..n)
        .map(|j| par::map(radii, |&r| log_quantity(&a[j], j, n, kind, r, tol).unwrap_or(f64::NAN)))
        .collect();
    report.failed_radii =
        radii.iter().enumerate().filter(|(i, _)| lq.iter().any(|q| q[*i].is_nan())).map(|(_, r)| *r).collect();
    for p in 0..n {
        let ratios: Vec<f64> = (0..radii.len())
            .map(|i| {
                let mut sum = 0.0;
                for j in p + 1..n {
                    let w = if kind.weighted() { (n - j) as f64 / (n - p) as f64 } else { 1.0 };
                    sum += ratio_term(w, lq[j][i], lq[p][i]);
                }
                if p + 1 == n {
                    0.0
                } else {
                    sum
                }
            })
            .collect();
        let estimate = tail_limsup(&ratios, trim);
        let holds = p + 1 == n || estimate.trimmed < 1.0 - DECISION_MARGIN;
        report.candidates.push(Candidate { p, margin: (estimate.trimmed - 1.0).abs(), ratios, estimate, holds });
        if holds {
            report.selected = Some(p);
            break;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveReport {
    pub p: usize,
    pub eta: Vec<f64>,
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub estimate: TailEstimate,
    pub holds: bool,
    /// the traced curve jumped between branches
    pub low_confidence: bool,
}

impl CurveReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,ratio\n");
        for (r, v) in self.radii.iter().zip(&self.ratios) {
            let _ = writeln!(s, "{r:.16e},{v:.16e}");
        }
        s
    }
}

/// Σ_{j>p} (1/η_j)|A_j(z)|^{η_j}/|A_p(z)| at the points of a maximum
/// curve of A_p. `eta` lists η_{p+1}, …, η_{n−1}; None means all 2.
pub fn curve_dominance(
    a: &[FunctionExpr],
    p: usize,
    eta: Option<&[f64]>,
    curve: &MaxCurve,
    trim: f64,
) -> Result<CurveReport, DominanceError> {
    let n = a.len();
    if p >= n {
        return Err(DominanceError::BadIndex { p, n });
    }
    let eta: Vec<f64> = match eta {
        Some(e) => e.to_vec(),
        None => vec![DEFAULT_ETA; n - p - 1],
    };
    if eta.len() != n - p - 1 {
        return Err(DominanceError::EtaCount { expected: n - p - 1, got: eta.len() });
    }
    if let Some(&bad) = eta.iter().find(|&&e| !(e > 1.0)) {
        return Err(DominanceError::Eta(bad));
    }
    let pts = curve.points();
    let ratios = par::map(&pts, |&z| {
        let lp = match a[p].eval_log(z) {
            Ok(v) => v.ln_abs,
            Err(_) => return f64::NAN,
        };
        let mut sum = 0.0;
        for (k, j) in (p + 1..n).enumerate() {
            if a[j].is_zero() {
                continue;
            }
            let lj = match a[j].eval_log(z) {
                Ok(v) => v.ln_abs,
                Err(_) => return f64::NAN,
            };
            if lj == f64::NEG_INFINITY {
                continue;
            }
            sum += (eta[k] * lj - lp - eta[k].ln()).exp();
        }
        sum
    });
    let estimate = tail_limsup(&ratios, trim);
    Ok(CurveReport {
        p,
        eta,
        radii: curve.radii.clone(),
        holds: estimate.trimmed < 1.0 - DECISION_MARGIN,
        ratios,
        estimate,
        low_confidence: curve.has_jumps(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConclusionKind {
    /// log T(r,f)/T(r,A_p), a ≳ claim
    LogTOverT,
    /// log T(r,f)/log M(r,A_p), a ≍ claim
    LogTOverLogM,
    /// log T(r,f)/log ∫|A_p|^{1/(n−p)}dθ, a ≍ claim
    LogTOverLogCircle,
    /// log T(r,f)/log ∫_{D(0,r)}|A_p|^{1/(n−p)}dm, a ≍ claim
    LogTOverLogArea,
}

impl ConclusionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConclusionKind::LogTOverT => "logT/T",
            ConclusionKind::LogTOverLogM => "logT/logM",
            ConclusionKind::LogTOverLogCircle => "logT/logCircle",
            ConclusionKind::LogTOverLogArea => "logT/logArea",
        }
    }

    pub fn default_window(self) -> Window {
        match self {
            ConclusionKind::LogTOverT => Window { lo: 0.2, hi: None },
            _ => Window { lo: 0.2, hi: Some(5.0) },
        }
    }
}

/// Acceptance window for tail ratios; `hi` is None for one-sided claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: Option<f64>,
}

/// Denominator values of a conclusion ratio on their own grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub kind: ConclusionKind,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl Reference {
    /// T or log M of A_p from its growth series.
    pub fn from_series(series: &GrowthSeries, kind: ConclusionKind) -> Reference {
        let values = match kind {
            ConclusionKind::LogTOverLogM => series.log_m_values(),
            _ => series.t_values(),
        };
        Reference { kind, radii: series.radii(), values }
    }

    /// log of the circle or area integral of |A_p|^{1/(n−p)}.
    pub fn integral(ap: &FunctionExpr, n: usize, p: usize, area: bool, radii: &[f64], tol: f64) -> Reference {
        let kappa = 1.0 / (n - p) as f64;
        let values = par::map(radii, |&r| {
            let v = if area { area_p_integral_log(ap, r, kappa, tol) } else { circle_p_integral_log(ap, r, kappa, tol) };
            v.unwrap_or(f64::NAN)
        });
        let kind = if area { ConclusionKind::LogTOverLogArea } else { ConclusionKind::LogTOverLogCircle };
        Reference { kind, radii: radii.to_vec(), values }
    }

    /// Value at r, linear in log r between grid points.
    pub fn at(&self, r: f64) -> f64 {
        if let Some(i) = self.radii.iter().position(|&x| x == r) {
            return self.values[i];
        }
        let k = self.radii.partition_point(|&x| x < r);
        if k == 0 || k == self.radii.len() {
            return f64::NAN;
        }
        let (r0, r1) = (self.radii[k - 1], self.radii[k]);
        let w = (r.ln() - r0.ln()) / (r1.ln() - r0.ln());
        self.values[k - 1] * (1.0 - w) + self.values[k] * w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConclusionTable {
    pub kind: ConclusionKind,
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub liminf: TailEstimate,
    pub limsup: TailEstimate,
    pub window: Window,
    pub within_window: bool,
    /// the reference was interpolated onto the solution grid
    pub resampled: bool,
}

impl ConclusionTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,ratio\n");
        for (r, v) in self.radii.iter().zip(&self.ratios) {
            let _ = writeln!(s, "{r:.16e},{v:.16e}");
        }
        s
    }
}

/// Per-radius log T(r,f)/reference(r) with tail window check.
pub fn conclusion_check(f: &GrowthSeries, reference: &Reference, window: Option<Window>, trim: f64) -> ConclusionTable {
    let kind = reference.kind;
    let window = window.unwrap_or_else(|| kind.default_window());
    let radii = f.radii();
    let resampled = radii != reference.radii;
    let ratios: Vec<f64> = f
        .records
        .iter()
        .map(|rec| match rec.t {
            Some(t) if t > 0.0 => t.ln() / reference.at(rec.r),
            _ => f64::NAN,
        })
        .collect();
    let liminf = tail_liminf(&ratios, trim);
    let limsup = tail_limsup(&ratios, trim);
    let within_window = liminf.trimmed >= window.lo && window.hi.map_or(true, |hi| limsup.trimmed <= hi);
    ConclusionTable { kind, radii, ratios, liminf, limsup, window, within_window, resampled }
}

/// Growth series of a coefficient, for use as a conclusion reference.
pub fn coefficient_series(ap: &FunctionExpr, radii: &[f64], tol: f64) -> Result<GrowthSeries, DominanceError> {
    Ok(nevanlinna::growth_series(ap, radii, "list", tol)?)
}

#[cfg(test)]
mod tests;
