//! Radius grids and their textual specifications.
//!
//! | spec                     | radii                                   |
//! |--------------------------|-----------------------------------------|
//! | `geom:START:END:COUNT`   | geometric from START to END             |
//! | `ratio:R0:RHO:COUNT`     | r_k = R0·RHO^k                          |
//! | `disc:KMIN:KMAX:DIV`     | r_k = 1 − 2^{−k/DIV}, k = KMIN..=KMAX   |
//! | `discgeom:START:END:COUNT` | 1 − r geometric from 1−START to 1−END |
//! | `lin:START:END:COUNT`    | evenly spaced                           |
//! | `list:a,b,c`             | explicit                                |

use crate::funcexpr::Domain;
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid grid spec '{spec}': {reason}")]
pub struct GridError {
    pub spec: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    spec: String,
    radii: Vec<f64>,
}

fn fail<T>(spec: &str, reason: impl Into<String>) -> Result<T, GridError> {
    Err(GridError { spec: spec.to_string(), reason: reason.into() })
}

impl Grid {
    pub fn parse(spec: &str) -> Result<Grid, GridError> {
        let spec = spec.trim();
        let (kind, rest) = match spec.split_once(':') {
            Some(x) => x,
            None => return fail(spec, "expected KIND:ARGS"),
        };
        let nums = |n: usize| -> Result<Vec<f64>, GridError> {
            let v: Result<Vec<f64>, _> = rest.split(':').map(|x| x.trim().parse::<f64>()).collect();
            match v {
                Ok(v) if v.len() == n => Ok(v),
                _ => fail(spec, format!("expected {n} numeric fields")),
            }
        };
        let count = |x: f64| -> Result<usize, GridError> {
            if x >= 1.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                fail(spec, "count must be a positive integer")
            }
        };
        let radii: Vec<f64> = match kind {
            "geom" => {
                let v = nums(3)?;
                let n = count(v[2])?;
                if !(v[0] > 0.0 && v[1] >= v[0]) {
                    return fail(spec, "need 0 < START <= END");
                }
                geometric(v[0], v[1], n)
            }
            "lin" => {
                let v = nums(3)?;
                let n = count(v[2])?;
                if !(v[0] > 0.0 && v[1] >= v[0]) {
                    return fail(spec, "need 0 < START <= END");
                }
                (0..n)
                    .map(|k| if n == 1 { v[0] } else { v[0] + (v[1] - v[0]) * k as f64 / (n - 1) as f64 })
                    .collect()
            }
            "ratio" => {
                let v = nums(3)?;
                let n = count(v[2])?;
                if !(v[0] > 0.0 && v[1] > 1.0) {
                    return fail(spec, "need R0 > 0 and RHO > 1");
                }
                (0..n).map(|k| v[0] * v[1].powi(k as i32)).collect()
            }
            "disc" => {
                let v = nums(3)?;
                if v[0] < 0.0 || v[1] < v[0] || v[2] <= 0.0 || v[0].fract() != 0.0 || v[1].fract() != 0.0 {
                    return fail(spec, "need integers 0 <= KMIN <= KMAX and DIV > 0");
                }
                (v[0] as i64..=v[1] as i64).map(|k| 1.0 - 2f64.powf(-(k as f64) / v[2])).collect()
            }
            "discgeom" => {
                let v = nums(3)?;
                let n = count(v[2])?;
                if !(0.0 <= v[0] && v[0] <= v[1] && v[1] < 1.0) {
                    return fail(spec, "need 0 <= START <= END < 1");
                }
                geometric(1.0 - v[0], 1.0 - v[1], n).into_iter().map(|d| 1.0 - d).collect()
            }
            "list" => {
                let v: Result<Vec<f64>, _> = rest.split(',').map(|x| x.trim().parse::<f64>()).collect();
                match v {
                    Ok(v) if !v.is_empty() => v,
                    _ => return fail(spec, "expected comma-separated numbers"),
                }
            }
            _ => return fail(spec, format!("unknown grid kind '{kind}'")),
        };
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return fail(spec, "radii must be positive");
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return fail(spec, "radii must be strictly increasing");
        }
        Ok(Grid { spec: spec.to_string(), radii })
    }

    /// Default grid: plane r_k = r₀·1.15^k, disc r_k = 1 − 2^{−k/4}.
    pub fn default_for(domain: Domain) -> Grid {
        match domain {
            Domain::Plane => Grid::parse("ratio:2:1.15:25").unwrap(),
            Domain::Disc => Grid::parse("disc:4:28:4").unwrap(),
        }
    }

    pub fn from_radii(radii: Vec<f64>) -> Grid {
        let spec = format!(
            "list:{}",
            radii.iter().map(|r| format!("{r:e}")).collect::<Vec<_>>().join(",")
        );
        Grid { spec, radii }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Checks the grid against a domain (disc radii must stay below 1).
    pub fn fits(&self, domain: Domain) -> bool {
        domain == Domain::Plane || self.radii.iter().all(|r| *r < 1.0)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

fn geometric(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let q = (b / a).ln() / (n - 1) as f64;
    (0..n)
        .map(|k| if k == n - 1 { b } else { a * (q * k as f64).exp() })
        .collect()
}

/// Index where the tail window (final third) of a length-n sequence starts.
pub fn tail_start(n: usize) -> usize {
    (2 * n) / 3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let g = Grid::parse("geom:1:100:3").unwrap();
        assert_eq!(g.radii()[2], 100.0);
        assert!((g.radii()[1] - 10.0).abs() < 1e-12);
        let g = Grid::parse("disc:1:3:1").unwrap();
        assert_eq!(g.radii(), &[0.5, 0.75, 0.875]);
        assert!(Grid::parse("disc:0:2:1").is_err());
        let g = Grid::parse("discgeom:0.9:0.99:2").unwrap();
        assert!((g.radii()[1] - 0.99).abs() < 1e-15);
        assert_eq!(Grid::parse("list:1,2,3").unwrap().len(), 3);
        assert_eq!(Grid::parse("lin:1:3:3").unwrap().radii(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Grid::parse("geom:0:1:3").is_err());
        assert!(Grid::parse("list:3,2").is_err());
        assert!(Grid::parse("spiral:1").is_err());
        assert!(Grid::parse("ratio:1:1.1:0").is_err());
    }

    #[test]
    fn defaults_fit_their_domains() {
        assert!(Grid::default_for(Domain::Disc).fits(Domain::Disc));
        let p = Grid::default_for(Domain::Plane);
        assert!((p.radii()[1] / p.radii()[0] - 1.15).abs() < 1e-12);
    }

    #[test]
    fn tail_is_final_third() {
        assert_eq!(tail_start(9), 6);
        assert_eq!(tail_start(10), 6);
    }
}
