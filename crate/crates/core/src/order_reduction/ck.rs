//! The polynomials C_p, …, C_n as monomial lists.
//!
//! A monomial is a multi-index (l_0, …, l_p) standing for the product over
//! levels t of the level-t factor of order l_t: f_{t,1}^{(l_t)}/f_{t,1} for
//! the derivative kind, and a shifted difference quotient for Δ and Δ_q.

use crate::equation::binomial;
use std::collections::BTreeMap;

pub type Poly = BTreeMap<Vec<usize>, u64>;

#[derive(Debug, Clone, PartialEq)]
pub struct CkSet {
    pub n: usize,
    pub p: usize,
    /// `polys[k − p]` is C_k for k = p..=n; C_p is the single zero monomial
    polys: Vec<Poly>,
}

impl CkSet {
    /// C_k for p ≤ k ≤ n.
    pub fn ck(&self, k: usize) -> &Poly {
        &self.polys[k - self.p]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.polys.iter().enumerate().map(move |(i, c)| (i + self.p, c))
    }

    /// `k; l0,l1,...,lp; K` lines for C_{p+1}, …, C_n.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, poly) in self.iter().skip(1) {
            for (idx, kc) in poly {
                let ls: Vec<String> = idx.iter().map(|l| l.to_string()).collect();
                s.push_str(&format!("{k}; {}; {kc}\n", ls.join(",")));
            }
        }
        s
    }
}

fn add_into(acc: &mut Poly, mono: Vec<usize>, c: u64) {
    if c != 0 {
        *acc.entry(mono).or_insert(0) += c;
    }
}

/// Runs the level-by-level recursion from level p down to level 0, then
/// attaches the level-p factors.
///
/// `d[i][s]` holds C_{i, p−m, s+m} for the current m; at m = 0 it is 1 on
/// the diagonal and 0 above it.
pub fn build_ck(n: usize, p: usize) -> CkSet {
    assert!(p < n, "need 0 <= p < n");
    let w = p + 1;
    let top = n - p;
    let zero = vec![0usize; w];
    let mut d: Vec<Vec<Poly>> = (0..=top)
        .map(|i| {
            (0..=top)
                .map(|s| {
                    let mut poly = Poly::new();
                    if s == i {
                        poly.insert(zero.clone(), 1);
                    }
                    poly
                })
                .collect()
        })
        .collect();
    for m in 0..p {
        let level = p - m - 1;
        let mut next: Vec<Vec<Poly>> = vec![vec![Poly::new(); top + 1]; top + 1];
        for i in 0..=top {
            for j in i..=top {
                let mut acc = Poly::new();
                for s in i..=j {
                    let b = binomial(j + m + 1, s + m + 1);
                    for (mono, c) in &d[i][s] {
                        let mut mono = mono.clone();
                        mono[level] = j - s;
                        add_into(&mut acc, mono, b * c);
                    }
                }
                next[i][j] = acc;
            }
        }
        d = next;
    }
    let polys = (p..=n)
        .map(|k| {
            let j = k - p;
            let mut acc = Poly::new();
            for (i, row) in d.iter().enumerate().take(j + 1) {
                for (mono, c) in &row[j] {
                    let mut mono = mono.clone();
                    mono[p] = i;
                    add_into(&mut acc, mono, *c);
                }
            }
            acc
        })
        .collect();
    CkSet { n, p, polys }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(entries: &[(&[usize], u64)]) -> Poly {
        entries.iter().map(|(k, v)| (k.to_vec(), *v)).collect()
    }

    #[test]
    fn hand_values() {
        let c = build_ck(2, 1);
        assert_eq!(c.ck(2), &poly(&[(&[1, 0], 2), (&[0, 1], 1)]));
        let c = build_ck(3, 1);
        assert_eq!(c.ck(3), &poly(&[(&[2, 0], 3), (&[1, 1], 3), (&[0, 2], 1)]));
        assert_eq!(c.ck(2), &poly(&[(&[1, 0], 2), (&[0, 1], 1)]));
        assert_eq!(c.ck(1), &poly(&[(&[0, 0], 1)]));
    }

    #[test]
    fn p_zero_is_the_equation() {
        let c = build_ck(3, 0);
        for k in 1..=3 {
            assert_eq!(c.ck(k), &poly(&[(&[k], 1)]));
        }
    }

    #[test]
    fn text_lines() {
        let t = build_ck(2, 1).to_text();
        assert_eq!(t, "2; 0,1; 1\n2; 1,0; 2\n");
    }
}
