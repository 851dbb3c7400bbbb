//! Special functions on the complex plane: Γ (Lanczos), polygamma, and the
//! Mittag-Leffler function E_α together with its derivatives.

use crate::dd::{CDd, Dd};
use crate::scaled::Scaled;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// True when `z` is a pole of Γ.
pub fn is_gamma_pole(z: C) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// ln sin(πz), stable for large |Im z|.
fn ln_sin_pi(z: C) -> C {
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(πz) = e^{-iπz}(e^{2iπz} - 1)/(2i)
        let i = C::i();
        -i * PI * z + ((2.0 * i * PI * z).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// Complex log-gamma. The imaginary part is correct modulo 2π.
pub fn ln_gamma(z: C) -> C {
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        return C::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = C::new(LANCZOS_P[0], 0.0);
    for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
        x += *p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Γ(z) in scaled form; poles give the infinite sentinel.
pub fn gamma(z: C) -> Scaled {
    if is_gamma_pole(z) {
        return Scaled::infinity();
    }
    if z.re >= 0.5 && z.norm() < 140.0 {
        // direct Lanczos product, avoids the exp(ln) round trip
        let w = z - 1.0;
        let mut x = C::new(LANCZOS_P[0], 0.0);
        for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
            x += *p / (w + i as f64);
        }
        let t = w + LANCZOS_G + 0.5;
        let lp = (w + 0.5) * t.ln() - t;
        return Scaled::exp_of(lp).mul_c((2.0 * PI).sqrt() * x);
    }
    Scaled::exp_of(ln_gamma(z))
}

const BERNOULLI_2N: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, i| a * i as f64)
}

/// Polygamma ψ^{(k)}(z); k = 0 is the digamma function.
pub fn polygamma(k: usize, z: C) -> C {
    if is_gamma_pole(z) {
        return C::new(f64::INFINITY, 0.0);
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let kf = factorial(k);
    let mut acc = C::new(0.0, 0.0);
    let mut w = z;
    // recurrence ψ^{(k)}(w) = ψ^{(k)}(w+1) - (-1)^k k! / w^{k+1}
    while w.re < 20.0 || w.norm() < 20.0 {
        acc -= sign * kf / w.powu(k as u32 + 1);
        w += 1.0;
    }
    let inv = 1.0 / w;
    let mut s;
    if k == 0 {
        s = w.ln() - 0.5 * inv;
        let inv2 = inv * inv;
        let mut p = inv2;
        for (n, b) in BERNOULLI_2N.iter().enumerate() {
            let two_n = 2.0 * (n + 1) as f64;
            s -= *b / two_n * p;
            p *= inv2;
        }
    } else {
        // (-1)^{k+1}[(k-1)!/w^k + k!/(2w^{k+1}) + Σ B_2n (2n+k-1)!/((2n)! w^{2n+k})]
        let wk = inv.powu(k as u32);
        s = factorial(k - 1) * wk + kf * 0.5 * wk * inv;
        let inv2 = inv * inv;
        let mut p = wk * inv2;
        for (n, b) in BERNOULLI_2N.iter().enumerate() {
            let two_n = 2 * (n + 1);
            let c = factorial(two_n + k - 1) / factorial(two_n);
            s += *b * c * p;
            p *= inv2;
        }
        s *= -sign;
    }
    s + acc
}

/// Rational approximation p/q of `alpha` with q ≤ 16, if exact to 1e-14.
fn small_rational(alpha: f64) -> Option<(u64, u64)> {
    for q in 1..=16u64 {
        let p = (alpha * q as f64).round();
        if p >= 1.0 && (p / q as f64 - alpha).abs() < 1e-14 {
            return Some((p as u64, q));
        }
    }
    None
}

fn ln_falling(k: usize, m: usize) -> f64 {
    ((k - m + 1)..=k).map(|i| (i as f64).ln()).sum()
}

/// Largest log-magnitude term of the series and the index where terms start
/// to shrink for good.
fn series_extent(alpha: f64, m: usize, lnw: f64) -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut peak = m;
    let mut k = m;
    loop {
        let t = ln_falling(k, m) - ln_gamma(C::new(alpha * k as f64 + 1.0, 0.0)).re
            + (k - m) as f64 * lnw;
        if t > best {
            best = t;
            peak = k;
        }
        if k > peak + 8 && t < best - 50.0 {
            break;
        }
        k += 1;
        if k > 200_000 {
            break;
        }
    }
    (best, peak)
}

/// m-th derivative of the Mittag-Leffler function, E_α^{(m)}(w) =
/// Σ_{k≥m} k!/(k-m)! · w^{k-m} / Γ(αk+1).
///
/// Rational α with small denominator is summed in double-double with
/// Γ(αk+1) built by exact Pochhammer steps inside each residue class mod q;
/// other α, or arguments whose terms overflow, use log-domain terms.
pub fn mittag_leffler(alpha: f64, m: usize, w: C) -> Scaled {
    assert!(alpha > 0.0, "Mittag-Leffler order must be positive");
    if w == C::new(0.0, 0.0) {
        let v = factorial(m) / gamma(C::new(alpha * m as f64 + 1.0, 0.0)).to_complex().re;
        return Scaled::from_c(C::new(v, 0.0));
    }
    let lnw = w.norm().ln();
    if m == 0 && alpha <= 1.0 && (lnw / alpha) >= ASYMPTOTIC_LN_EXP {
        return ml_asymptotic(alpha, w);
    }
    let (max_ln, peak) = series_extent(alpha, m, lnw);
    if max_ln < 650.0 {
        if let Some((p, q)) = small_rational(alpha) {
            return Scaled::from_c(ml_dd(p, q, m, w, peak));
        }
    }
    ml_log(alpha, m, w, max_ln, peak)
}

/// The expansion below is used once |w|^{1/α} exceeds e^this, where its
/// optimal truncation error (about e^{−|w|^{1/α}}) is negligible.
const ASYMPTOTIC_LN_EXP: f64 = 3.7;

/// 1/Γ(x) for real x, zero at the poles of Γ.
fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x > 0.0 {
        return 1.0 / gamma(C::new(x, 0.0)).to_complex().re;
    }
    (PI * x).sin() * gamma(C::new(1.0 - x, 0.0)).to_complex().re / PI
}

/// E_α(w) ≈ [|arg w| < απ] (1/α) exp(w^{1/α}) − Σ_{k≥1} w^{−k}/Γ(1−αk) for
/// 0 < α ≤ 1 and large |w|; the divergent sum is cut at its smallest term.
fn ml_asymptotic(alpha: f64, w: C) -> Scaled {
    let mut alg = C::new(0.0, 0.0);
    let inv = w.inv();
    let mut pw = C::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..400 {
        pw *= inv;
        let t = pw * rgamma(1.0 - alpha * k as f64);
        let size = t.norm();
        if size == 0.0 {
            continue;
        }
        if size > last {
            break;
        }
        alg -= t;
        last = size;
        if size < 1e-18 * alg.norm() {
            break;
        }
    }
    let alg = Scaled::from_c(alg);
    if w.arg().abs() < alpha * PI {
        Scaled::exp_of(w.powf(1.0 / alpha)).mul_c(C::new(1.0 / alpha, 0.0)).add(alg)
    } else {
        alg
    }
}

const HALF_LN_2PI: Dd = Dd { hi: 0.918_938_533_204_672_8, lo: -3.878_294_158_067_241_4e-17 };

/// Γ(x) in double-double for 0 < x ≤ 170: Stirling series at x + N ≥ 40,
/// divided by the Pochhammer product.
fn gamma_dd(x: Dd) -> Dd {
    // B_{2k} / (2k (2k − 1)) as numerator / denominator
    const STIRLING: [(f64, f64); 10] = [
        (1.0, 12.0),
        (-1.0, 360.0),
        (1.0, 1260.0),
        (-1.0, 1680.0),
        (1.0, 1188.0),
        (-691.0, 360_360.0),
        (1.0, 156.0),
        (-3617.0, 122_400.0),
        (43867.0, 244_188.0),
        (-174_611.0, 125_400.0),
    ];
    let mut y = x;
    let mut poch = Dd::ONE;
    while y.hi < 40.0 {
        poch = poch * y;
        y = y + Dd::ONE;
    }
    let inv = y.recip();
    let inv2 = inv * inv;
    let mut p = inv;
    let mut corr = Dd::ZERO;
    for (n, d) in STIRLING {
        corr = corr + p * Dd::from_f64(n) / Dd::from_f64(d);
        p = p * inv2;
    }
    let ln_g = (y - Dd::from_f64(0.5)) * y.ln() - y + HALF_LN_2PI + corr;
    ln_g.exp() / poch
}

fn ml_dd(p: u64, q: u64, m: usize, w: C, peak: usize) -> C {
    let qd = Dd::from_f64(q as f64);
    // x_k = (p k + q)/q exactly in double-double
    let x_of = |k: usize| Dd::from_f64((p * k as u64 + q) as f64) / qd;
    // 1/Γ(x_r) for the first member of each residue class
    let mut inv_gamma: Vec<Dd> = Vec::with_capacity(q as usize);
    for r in 0..q as usize {
        let x = x_of(r);
        inv_gamma.push(gamma_dd(x).recip());
    }
    let wd = CDd::from_c64(w);
    let mut power = CDd::ONE; // w^{k-m}
    let mut sum = CDd::ZERO;
    let mut k = 0usize;
    loop {
        let class = k % q as usize;
        if k >= q as usize {
            // Γ(x_k) = Γ(x_{k-q}) · Π_{i<p} (x_{k-q} + i)
            let base = x_of(k - q as usize);
            let mut prod = Dd::ONE;
            for i in 0..p {
                prod = prod * (base + Dd::from_f64(i as f64));
            }
            inv_gamma[class] = inv_gamma[class] / prod;
        }
        if k >= m {
            let falling = ((k - m + 1)..=k).fold(Dd::ONE, |a, i| a * Dd::from_f64(i as f64));
            let term = power.scale(falling * inv_gamma[class]);
            sum = sum + term;
            if k > peak && term.norm_f64() < 1e-18 * sum.norm_f64() {
                break;
            }
            power = power * wd;
        }
        k += 1;
        if k > 400_000 {
            break;
        }
    }
    sum.to_c64()
}

fn ml_log(alpha: f64, m: usize, w: C, max_ln: f64, peak: usize) -> Scaled {
    let lw = w.ln();
    // Neumaier-compensated complex sum of e^{ln t_k - max_ln}
    let mut sum = C::new(0.0, 0.0);
    let mut comp = C::new(0.0, 0.0);
    let mut k = m;
    loop {
        let ln_t = C::new(
            ln_falling(k, m) - ln_gamma(C::new(alpha * k as f64 + 1.0, 0.0)).re - max_ln,
            0.0,
        ) + (k - m) as f64 * lw;
        let t = ln_t.exp();
        for (s, c, x) in [(&mut sum.re, &mut comp.re, t.re), (&mut sum.im, &mut comp.im, t.im)] {
            let nt = *s + x;
            if s.abs() >= x.abs() {
                *c += (*s - nt) + x;
            } else {
                *c += (x - nt) + *s;
            }
            *s = nt;
        }
        if k > peak && t.norm() < 1e-18 * (sum + comp).norm() {
            break;
        }
        k += 1;
        if k > 400_000 {
            break;
        }
    }
    Scaled::new(sum + comp, max_ln)
}
