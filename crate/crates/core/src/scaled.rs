//! Complex numbers carried as `mant · e^scale`, so values like exp(e^{148})
//! stay representable. Values inside the ordinary `f64` range keep
//! `scale == 0` and behave exactly like plain complex arithmetic.

use num_complex::Complex64 as C;

const LO: f64 = 1e-150;
const HI: f64 = 1e150;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mant: C,
    pub scale: f64,
}

impl Scaled {
    pub fn new(mant: C, scale: f64) -> Scaled {
        Scaled { mant, scale }.renorm()
    }

    pub fn from_c(c: C) -> Scaled {
        if c.re.is_infinite() || c.im.is_infinite() {
            return Scaled::infinity();
        }
        Scaled { mant: c, scale: 0.0 }.renorm()
    }

    pub fn zero() -> Scaled {
        Scaled { mant: C::new(0.0, 0.0), scale: 0.0 }
    }

    pub fn one() -> Scaled {
        Scaled { mant: C::new(1.0, 0.0), scale: 0.0 }
    }

    /// Infinite sentinel (pole); the phase is not meaningful.
    pub fn infinity() -> Scaled {
        Scaled { mant: C::new(1.0, 0.0), scale: f64::INFINITY }
    }

    pub fn nan() -> Scaled {
        Scaled { mant: C::new(f64::NAN, f64::NAN), scale: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0 || self.scale == f64::NEG_INFINITY
    }

    pub fn is_infinite(&self) -> bool {
        self.scale == f64::INFINITY
    }

    pub fn is_nan(&self) -> bool {
        self.mant.re.is_nan() || self.mant.im.is_nan() || self.scale.is_nan()
    }

    fn renorm(self) -> Scaled {
        if self.is_nan() {
            return Scaled::nan();
        }
        if self.scale == f64::INFINITY {
            return Scaled::infinity();
        }
        let a = self.mant.norm();
        if a == 0.0 || self.scale == f64::NEG_INFINITY {
            return Scaled::zero();
        }
        if a.is_infinite() {
            // rescale components before taking the norm
            let m = self.mant / 1e300;
            return Scaled { mant: m, scale: self.scale + 300.0 * std::f64::consts::LN_10 }.renorm();
        }
        if (LO..=HI).contains(&a) {
            return self;
        }
        let s = self.scale + a.ln();
        if s.is_infinite() {
            return if s > 0.0 { Scaled::infinity() } else { Scaled::zero() };
        }
        Scaled { mant: self.mant / a, scale: s }
    }

    /// e^w for a plain complex exponent.
    pub fn exp_of(w: C) -> Scaled {
        if w.re.is_nan() || w.im.is_nan() {
            return Scaled::nan();
        }
        if w.re == f64::INFINITY {
            return Scaled::infinity();
        }
        if w.re == f64::NEG_INFINITY {
            return Scaled::zero();
        }
        if w.re.abs() <= 700.0 {
            return Scaled::from_c(w.exp());
        }
        Scaled { mant: C::new(w.im.cos(), w.im.sin()), scale: w.re }
    }

    /// e^self
    pub fn exp(self) -> Scaled {
        if self.is_nan() {
            return Scaled::nan();
        }
        if self.is_zero() {
            return Scaled::one();
        }
        if self.is_infinite() {
            return Scaled::nan();
        }
        let w = self.to_complex();
        if w.re.is_infinite() || w.im.is_infinite() {
            // |w| beyond f64: the real part decides between 0 and ∞
            let re_sign = self.mant.re;
            return if re_sign > 0.0 { Scaled::infinity() } else if re_sign < 0.0 { Scaled::zero() } else { Scaled::nan() };
        }
        Scaled::exp_of(w)
    }

    /// Plain complex value; overflows to ∞ and underflows to 0.
    pub fn to_complex(&self) -> C {
        if self.is_infinite() {
            return C::new(f64::INFINITY, 0.0);
        }
        if self.scale == 0.0 {
            return self.mant;
        }
        let e = self.scale.exp();
        if e.is_infinite() {
            return C::new(
                if self.mant.re == 0.0 { 0.0 } else { self.mant.re.signum() * f64::INFINITY },
                if self.mant.im == 0.0 { 0.0 } else { self.mant.im.signum() * f64::INFINITY },
            );
        }
        self.mant * e
    }

    pub fn ln_abs(&self) -> f64 {
        if self.is_nan() {
            return f64::NAN;
        }
        if self.is_infinite() {
            return f64::INFINITY;
        }
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.norm().ln() + self.scale
    }

    pub fn arg(&self) -> f64 {
        self.mant.arg()
    }

    /// Principal logarithm as a plain complex number.
    pub fn ln(&self) -> C {
        C::new(self.ln_abs(), self.arg())
    }

    pub fn mul(self, o: Scaled) -> Scaled {
        if self.is_nan() || o.is_nan() {
            return Scaled::nan();
        }
        if self.is_infinite() || o.is_infinite() {
            return if self.is_zero() || o.is_zero() { Scaled::nan() } else { Scaled::infinity() };
        }
        if self.is_zero() || o.is_zero() {
            return Scaled::zero();
        }
        Scaled { mant: self.mant * o.mant, scale: self.scale + o.scale }.renorm()
    }

    pub fn mul_c(self, c: C) -> Scaled {
        self.mul(Scaled::from_c(c))
    }

    pub fn div(self, o: Scaled) -> Scaled {
        if self.is_nan() || o.is_nan() {
            return Scaled::nan();
        }
        if o.is_zero() {
            return if self.is_zero() { Scaled::nan() } else { Scaled::infinity() };
        }
        if o.is_infinite() {
            return if self.is_infinite() { Scaled::nan() } else { Scaled::zero() };
        }
        if self.is_infinite() {
            return Scaled::infinity();
        }
        if self.is_zero() {
            return Scaled::zero();
        }
        Scaled { mant: self.mant / o.mant, scale: self.scale - o.scale }.renorm()
    }

    pub fn recip(self) -> Scaled {
        Scaled::one().div(self)
    }

    pub fn neg(self) -> Scaled {
        Scaled { mant: -self.mant, scale: self.scale }
    }

    pub fn add(self, o: Scaled) -> Scaled {
        if self.is_nan() || o.is_nan() {
            return Scaled::nan();
        }
        if self.is_infinite() || o.is_infinite() {
            return if self.is_infinite() && o.is_infinite() { Scaled::nan() } else { Scaled::infinity() };
        }
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        if self.scale == o.scale {
            return Scaled { mant: self.mant + o.mant, scale: self.scale }.renorm();
        }
        let (hi, lo) = if self.scale > o.scale { (self, o) } else { (o, self) };
        let d = lo.scale - hi.scale;
        if d < -745.0 {
            return hi;
        }
        Scaled { mant: hi.mant + lo.mant * d.exp(), scale: hi.scale }.renorm()
    }

    pub fn sub(self, o: Scaled) -> Scaled {
        self.add(o.neg())
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: i64) -> Scaled {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = self;
        let mut acc = Scaled::one();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// Principal-branch power self^c.
    pub fn powc(self, c: C) -> Scaled {
        if c.im == 0.0 && c.re == c.re.round() && c.re.abs() <= 64.0 {
            return self.powi(c.re as i64);
        }
        if self.is_zero() {
            return if c.re > 0.0 { Scaled::zero() } else { Scaled::infinity() };
        }
        if self.is_infinite() {
            return if c.re > 0.0 { Scaled::infinity() } else { Scaled::zero() };
        }
        Scaled::exp_of(c * self.ln())
    }

    pub fn to_log(&self) -> crate::funcexpr::LogValue {
        crate::funcexpr::LogValue { ln_abs: self.ln_abs(), phase: self.arg() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_values_stay_plain() {
        let a = Scaled::from_c(C::new(3.0, -1.0));
        let b = Scaled::from_c(C::new(0.5, 2.0));
        assert_eq!(a.mul(b).to_complex(), C::new(3.0, -1.0) * C::new(0.5, 2.0));
        assert_eq!(a.add(b).to_complex(), C::new(3.5, 1.0));
        assert_eq!(a.div(b).to_complex(), C::new(3.0, -1.0) / C::new(0.5, 2.0));
    }

    #[test]
    fn huge_exponentials_keep_log_magnitude() {
        let w = Scaled::from_c(C::new(5.0, 0.0).exp());
        let v = w.exp().exp();
        assert!(v.ln_abs().is_infinite() || v.ln_abs() > 1e60);
        let v = w.exp();
        assert!((v.ln_abs() - 5f64.exp()).abs() < 1e-12);
        let big = Scaled::exp_of(C::new(1e5, 0.3));
        let s = big.add(big.mul_c(C::new(2.0, 0.0)));
        assert!((s.ln_abs() - 1e5 - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn zero_and_poles() {
        assert!(Scaled::one().div(Scaled::zero()).is_infinite());
        assert!(Scaled::zero().ln_abs() == f64::NEG_INFINITY);
        assert!(Scaled::zero().powc(C::new(-0.5, 0.0)).is_infinite());
    }
}
