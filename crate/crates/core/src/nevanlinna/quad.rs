//! Circle quadrature: periodic trapezoid with node doubling, kink-aware
//! integration of positive parts, and log-domain accumulation.

use super::NevError;
use crate::par;
use std::f64::consts::PI;
use std::sync::OnceLock;

pub(crate) const MIN_NODES: usize = 64;
pub(crate) const MAX_LEVELS: usize = 14;

/// Initial node count for a circle of radius r: eight nodes per angular
/// feature width, taken as 1 − r in the disc and 1/r in the plane. Without
/// this floor, two coarse levels can both miss a narrow peak and agree.
pub(crate) fn start_nodes(r: f64, disc: bool) -> usize {
    let width = if disc { (1.0 - r).max(1e-6) } else { 1.0 / r.max(1.0) };
    let want = (16.0 * PI / width).ceil() as usize;
    want.next_power_of_two().clamp(MIN_NODES, MIN_NODES << 10)
}

fn node_cap(start: usize) -> usize {
    (MIN_NODES << MAX_LEVELS).max(start << 4)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

pub(crate) fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(8))
}

pub(crate) fn gl_integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gl8();
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * f(mid + 0.5 * h * xi);
        }
    }
    0.5 * h * s
}

fn finite_or_nudged(l: &(dyn Fn(f64) -> f64 + Sync), th: f64) -> f64 {
    let v = l(th);
    if v == f64::INFINITY {
        // a pole exactly on a node; the log singularity is integrable
        let w = l(th + 1e-9);
        if w.is_finite() {
            return w;
        }
        return 800.0;
    }
    v
}

/// Root of `l` in [a, b] given opposite signs (Illinois variant of regula falsi).
fn kink(l: &dyn Fn(f64) -> f64, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut side = 0;
    for _ in 0..100 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        let c = if fa.is_finite() && fb.is_finite() && fa != fb {
            (a * fb - b * fa) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        let c = if c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let fc = l(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Mean over θ of max(0, l(θ)) at a fixed node count, l sampled at `vals`.
fn positive_mean(l: &(dyn Fn(f64) -> f64 + Sync), vals: &[f64]) -> f64 {
    let n = vals.len();
    let h = 2.0 * PI / n as f64;
    let pos = |v: f64| v > 0.0;
    let changes: Vec<usize> = (0..n).filter(|&j| pos(vals[j]) != pos(vals[(j + 1) % n])).collect();
    if changes.is_empty() {
        return vals.iter().map(|v| v.max(0.0)).sum::<f64>() / n as f64;
    }
    // roots on each sign-change segment
    let roots: Vec<(usize, f64)> = changes
        .iter()
        .map(|&j| {
            let a = j as f64 * h;
            (j, kink(l, a, vals[j], a + h, vals[(j + 1) % n]))
        })
        .collect();
    let mut total = 0.0;
    let m = roots.len();
    for i in 0..m {
        let (j, start) = roots[i];
        // positive arc begins where the segment goes from ≤0 to >0
        if pos(vals[j]) {
            continue;
        }
        let (_, mut end) = roots[(i + 1) % m];
        if end <= start {
            end += 2.0 * PI;
        }
        let panels = (((end - start) / h).ceil() as usize).div_ceil(2).max(1);
        total += gl_integrate(&|t| l(t).max(0.0), start, end, panels);
    }
    total / (2.0 * PI)
}

/// (1/2π)∫₀^{2π} max(0, l(θ)) dθ by node doubling until successive
/// estimates differ by less than `tol·max(1, |estimate|)`.
pub(crate) fn circle_mean_positive(
    l: &(dyn Fn(f64) -> f64 + Sync),
    r: f64,
    tol: f64,
    start: usize,
) -> Result<f64, NevError> {
    let mut n = start.max(MIN_NODES);
    let mut vals: Vec<f64> = par::map_range(n, |j| finite_or_nudged(l, 2.0 * PI * j as f64 / n as f64));
    if vals.iter().any(|v| v.is_nan()) {
        return Err(NevError::Undefined { r });
    }
    let mut prev = positive_mean(l, &vals);
    loop {
        let n2 = 2 * n;
        let odd: Vec<f64> =
            par::map_range(n, |j| finite_or_nudged(l, 2.0 * PI * (2 * j + 1) as f64 / n2 as f64));
        if odd.iter().any(|v| v.is_nan()) {
            return Err(NevError::Undefined { r });
        }
        let mut merged = Vec::with_capacity(n2);
        for j in 0..n {
            merged.push(vals[j]);
            merged.push(odd[j]);
        }
        vals = merged;
        n = n2;
        let est = positive_mean(l, &vals);
        if (est - prev).abs() < tol * est.abs().max(1.0) {
            return Ok(est);
        }
        if n >= node_cap(start) {
            return Err(NevError::NoConvergence { r, prev, last: est });
        }
        prev = est;
    }
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// ln ∫₀^{2π} e^{l(θ)} dθ by doubling the periodic trapezoid rule.
pub(crate) fn circle_log_integral(
    l: &(dyn Fn(f64) -> f64 + Sync),
    r: f64,
    tol: f64,
    start: usize,
) -> Result<f64, NevError> {
    let mut n = start.max(MIN_NODES);
    let mut vals: Vec<f64> = par::map_range(n, |j| l(2.0 * PI * j as f64 / n as f64));
    let est_of = |v: &[f64]| (2.0 * PI / v.len() as f64).ln() + log_sum_exp(v);
    let mut prev = est_of(&vals);
    // width of e^{l} at the dominant peak from the curvature of l; if the
    // capped grid still puts only a few nodes under it, skip the doubling
    if let Some(j) = (0..n).filter(|&j| vals[j].is_finite()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])) {
        let h = 2.0 * PI / n as f64;
        let (t, v) = golden_max(l, h * (j as f64 - 1.0), h * (j as f64 + 1.0));
        let d = h / 16.0;
        let curv = -(l(t + d) - 2.0 * v + l(t - d)) / (d * d);
        if curv > 0.0 {
            let nodes = (2.0 * PI / curv).sqrt() * node_cap(start) as f64 / (2.0 * PI);
            if nodes < PEAK_NODES {
                if let Some(v) = peak_log_integral(l, tol, start) {
                    return Ok(v);
                }
            }
        }
    }
    while n < node_cap(start) {
        if vals.iter().any(|v| v.is_nan()) {
            return Err(NevError::Undefined { r });
        }
        if prev == f64::INFINITY {
            return Ok(prev);
        }
        let n2 = 2 * n;
        let odd: Vec<f64> = par::map_range(n, |j| l(2.0 * PI * (2 * j + 1) as f64 / n2 as f64));
        let mut merged = Vec::with_capacity(n2);
        for j in 0..n {
            merged.push(vals[j]);
            merged.push(odd[j]);
        }
        vals = merged;
        n = n2;
        let est = est_of(&vals);
        if est == f64::NEG_INFINITY || (est - prev).abs() < log_tol(tol, est) {
            return Ok(est);
        }
        if n >= node_cap(start) {
            return peak_log_integral(l, tol, start).ok_or(NevError::NoConvergence { r, prev, last: est });
        }
        prev = est;
    }
    Err(NevError::NoConvergence { r, prev, last: prev })
}

/// Tolerance on a log-integral near `level`: the integrand values carry
/// absolute rounding error of order ε·|level|, so no rule can do better.
fn log_tol(tol: f64, level: f64) -> f64 {
    tol.max(64.0 * f64::EPSILON * level.abs())
}

/// Peaks of l below the global maximum by more than this are dropped.
const PEAK_DROP: f64 = 60.0;
/// Fewest trapezoid nodes under a peak for the uniform rule to be tried.
const PEAK_NODES: f64 = 4.0;
/// Graded subpanels between a peak and the neighbouring node.
const PEAK_GRADES: i32 = 48;
const ADAPT_DEPTH: usize = 40;

/// Maximum of l on [a, b] by golden-section search.
fn golden_max(l: &(dyn Fn(f64) -> f64 + Sync), mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (l(c), l(d));
    for _ in 0..80 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = l(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = l(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisects until the halves agree with the whole to `eps` plus a relative
/// `noise` floor.
fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, eps: f64, noise: f64, depth: usize) -> Option<f64> {
    let m = 0.5 * (a + b);
    let (left, right) = (gl_integrate(f, a, m, 1), gl_integrate(f, m, b, 1));
    let sum = left + right;
    if (sum - whole).abs() <= eps + noise * sum.abs() {
        return Some(sum);
    }
    if depth == 0 {
        return None;
    }
    Some(adapt(f, a, m, left, eps, noise, depth - 1)? + adapt(f, m, b, right, eps, noise, depth - 1)?)
}

/// ln ∫₀^{2π} e^{l(θ)} dθ when e^{l} has peaks far narrower than the
/// features of l: the local maxima of l on the start grid are refined,
/// and e^{l − L} is integrated adaptively on panels graded toward each peak.
fn peak_log_integral(l: &(dyn Fn(f64) -> f64 + Sync), tol: f64, start: usize) -> Option<f64> {
    let n = start.max(MIN_NODES);
    let h = 2.0 * PI / n as f64;
    let vals: Vec<f64> = par::map_range(n, |j| l(h * j as f64));
    if vals.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return None;
    }
    let maxima: Vec<usize> = (0..n)
        .filter(|&j| {
            let v = vals[j];
            v > f64::NEG_INFINITY && v >= vals[(j + n - 1) % n] && v >= vals[(j + 1) % n]
        })
        .collect();
    if maxima.is_empty() {
        return Some(f64::NEG_INFINITY);
    }
    let peaks: Vec<(usize, f64, f64)> = par::map(&maxima, |&j| {
        let (t, v) = golden_max(l, h * (j as f64 - 1.0), h * (j as f64 + 1.0));
        (j, t, v)
    });
    let top = peaks.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return None;
    }
    // breakpoints: every node plus a graded ladder on both sides of each peak
    let mut cuts: Vec<f64> = (0..=n).map(|j| h * j as f64).collect();
    for &(_, t, v) in &peaks {
        if v < top - PEAK_DROP {
            continue;
        }
        let t = t.rem_euclid(2.0 * PI);
        cuts.push(t);
        for k in 0..PEAK_GRADES {
            let d = h * 2f64.powi(-k);
            for c in [t - d, t + d] {
                cuts.push(c.rem_euclid(2.0 * PI));
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let f = |th: f64| {
        let v = l(th);
        if v.is_nan() {
            f64::NAN
        } else {
            (v - top).exp()
        }
    };
    let coarse: Vec<f64> = par::map_range(cuts.len() - 1, |i| gl_integrate(&f, cuts[i], cuts[i + 1], 1));
    let total: f64 = coarse.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    let eps = 1e-2 * tol * total / coarse.len() as f64;
    let noise = log_tol(0.0, top);
    let parts: Vec<Option<f64>> =
        par::map_range(coarse.len(), |i| adapt(&f, cuts[i], cuts[i + 1], coarse[i], eps, noise, ADAPT_DEPTH));
    let mut sum = 0.0;
    for p in parts {
        sum += p?;
    }
    Some(top + sum.ln())
}
