//! Per-radius growth records and exceptional-set masks, with CSV I/O.

use crate::funcexpr::Domain;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRecord {
    pub r: f64,
    pub m: Option<f64>,
    pub n: Option<f64>,
    pub t: Option<f64>,
    pub log_m: Option<f64>,
    pub argmax_theta: Option<f64>,
}

impl GrowthRecord {
    pub fn missing(r: f64) -> GrowthRecord {
        GrowthRecord { r, m: None, n: None, t: None, log_m: None, argmax_theta: None }
    }
}

/// Samples of m, N, T (all in nats) and log M along a radius grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSeries {
    pub domain: Domain,
    pub grid: String,
    pub records: Vec<GrowthRecord>,
}

pub const GROWTH_HEADER: &str = "r,m,N,T,logM,argmax_theta";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct CsvError {
    pub line: usize,
    pub reason: String,
}

pub(crate) fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

fn parse_opt(s: &str, line: usize) -> Result<Option<f64>, CsvError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|_| CsvError { line, reason: format!("bad number '{s}'") })
}

impl GrowthSeries {
    pub fn radii(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.r).collect()
    }

    /// T values with NaN for missing radii.
    pub fn t_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t.unwrap_or(f64::NAN)).collect()
    }

    pub fn log_m_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.log_m.unwrap_or(f64::NAN)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(GROWTH_HEADER);
        s.push('\n');
        for r in &self.records {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                fmt_f(r.r),
                fmt_opt(r.m),
                fmt_opt(r.n),
                fmt_opt(r.t),
                fmt_opt(r.log_m),
                fmt_opt(r.argmax_theta)
            );
        }
        s
    }

    pub fn from_csv(text: &str, domain: Domain) -> Result<GrowthSeries, CsvError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == GROWTH_HEADER => {}
            _ => return Err(CsvError { line: 1, reason: format!("expected header '{GROWTH_HEADER}'") }),
        }
        let mut records = Vec::new();
        for (i, l) in lines {
            if l.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 6 {
                return Err(CsvError { line: i + 1, reason: "expected 6 fields".into() });
            }
            let r = parse_opt(f[0], i + 1)?.ok_or(CsvError { line: i + 1, reason: "missing r".into() })?;
            records.push(GrowthRecord {
                r,
                m: parse_opt(f[1], i + 1)?,
                n: parse_opt(f[2], i + 1)?,
                t: parse_opt(f[3], i + 1)?,
                log_m: parse_opt(f[4], i + 1)?,
                argmax_theta: parse_opt(f[5], i + 1)?,
            });
        }
        let grid = format!(
            "list:{}",
            records.iter().map(|r| format!("{:e}", r.r)).collect::<Vec<_>>().join(",")
        );
        Ok(GrowthSeries { domain, grid, records })
    }
}

/// Boolean mask over a radius grid (an estimated exceptional set).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    radii: Vec<f64>,
    mask: Vec<bool>,
}

impl GridSet {
    /// Fails unless the mask and grid have equal length.
    pub fn new(radii: Vec<f64>, mask: Vec<bool>) -> Option<GridSet> {
        (radii.len() == mask.len()).then_some(GridSet { radii, mask })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,flag\n");
        for (r, m) in self.radii.iter().zip(&self.mask) {
            let _ = writeln!(s, "{},{}", fmt_f(*r), u8::from(*m));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_with_missing_values() {
        let s = GrowthSeries {
            domain: Domain::Plane,
            grid: "list:1,2".into(),
            records: vec![
                GrowthRecord { r: 1.0, m: Some(0.1), n: Some(0.0), t: Some(0.1), log_m: Some(1.0 / 3.0), argmax_theta: Some(0.0) },
                GrowthRecord::missing(2.0),
            ],
        };
        let csv = s.to_csv();
        assert!(csv.starts_with("r,m,N,T,logM,argmax_theta\n1.0000000000000000e0,"));
        assert!(csv.contains("2.0000000000000000e0,,,,,"));
        let back = GrowthSeries::from_csv(&csv, Domain::Plane).unwrap();
        assert_eq!(back.records, s.records);
    }

    #[test]
    fn grid_set_checks_length() {
        assert!(GridSet::new(vec![0.5, 0.7], vec![true]).is_none());
        let g = GridSet::new(vec![0.5], vec![true]).unwrap();
        assert_eq!(g.to_csv(), "r,flag\n5.0000000000000000e-1,1\n");
    }
}
