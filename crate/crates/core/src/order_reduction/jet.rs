//! Truncated Taylor series at a point: `c[k]` = f^{(k)}(z0)/k!.

use num_complex::Complex64 as C;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Jet(pub Vec<C>);

impl Jet {
    /// Jet from derivative values f^{(k)}(z0).
    pub fn from_derivatives(d: &[C]) -> Jet {
        let mut fact = 1.0;
        Jet(d
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if k > 0 {
                    fact *= k as f64;
                }
                v / fact
            })
            .collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// f^{(k)}(z0)
    pub fn derivative_value(&self, k: usize) -> C {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0[k] * fact
    }

    pub fn derivative(&self) -> Jet {
        Jet((1..self.len()).map(|k| self.0[k] * k as f64).collect())
    }

    /// Series quotient; None when the divisor's constant term vanishes
    /// relative to the jet's size.
    pub fn div(&self, d: &Jet) -> Option<Jet> {
        let n = self.len().min(d.len());
        let scale = d.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if d.0[0].norm() <= 1e-120 * scale || d.0[0].norm() == 0.0 {
            return None;
        }
        let mut q = vec![C::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = self.0[k];
            for i in 1..=k {
                acc -= d.0[i] * q[k - i];
            }
            q[k] = acc / d.0[0];
        }
        Some(Jet(q))
    }
}
