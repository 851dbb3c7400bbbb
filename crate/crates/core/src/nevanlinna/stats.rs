//! Tail-window statistics standing in for limsup / liminf over r outside
//! an exceptional set.

use crate::grid::tail_start;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TailEstimate {
    pub untrimmed: f64,
    pub trimmed: f64,
    /// first grid index of the tail window
    pub start: usize,
    /// number of tail values dropped by trimming
    pub dropped: usize,
}

fn tail_values(values: &[f64]) -> (usize, Vec<f64>) {
    let s = tail_start(values.len());
    (s, values[s..].iter().copied().filter(|v| !v.is_nan()).collect())
}

fn dropped(len: usize, trim: f64) -> usize {
    let k = (trim * len as f64).round() as usize;
    k.min(len.saturating_sub(1))
}

/// limsup estimate: max over the final third, and the max after dropping
/// the largest `trim` fraction of those values.
pub fn tail_limsup(values: &[f64], trim: f64) -> TailEstimate {
    let (start, mut v) = tail_values(values);
    if v.is_empty() {
        return TailEstimate { untrimmed: f64::NAN, trimmed: f64::NAN, start, dropped: 0 };
    }
    v.sort_by(|a, b| b.total_cmp(a));
    let k = dropped(v.len(), trim);
    TailEstimate { untrimmed: v[0], trimmed: v[k], start, dropped: k }
}

/// liminf estimate: min over the final third, and the min after dropping
/// the smallest `trim` fraction.
pub fn tail_liminf(values: &[f64], trim: f64) -> TailEstimate {
    let (start, mut v) = tail_values(values);
    if v.is_empty() {
        return TailEstimate { untrimmed: f64::NAN, trimmed: f64::NAN, start, dropped: 0 };
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let k = dropped(v.len(), trim);
    TailEstimate { untrimmed: v[0], trimmed: v[k], start, dropped: k }
}
