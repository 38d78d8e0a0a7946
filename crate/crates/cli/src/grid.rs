//! λ-grid specifications of the form `min:max:count[:log]`.

use std::fmt;
use std::str::FromStr;

/// An evaluation grid: `count` points from `min` to `max`, spaced linearly
/// or geometrically. Both endpoints always land exactly on the grid.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    /// Materialize the grid points.
    pub fn build(&self) -> Vec<f64> {
        let n = self.count;
        let mut pts: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect();
        pts[0] = self.min;
        pts[n - 1] = self.max;
        pts
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let (min, max, count, log) = match parts.as_slice() {
            [min, max, count] => (min, max, count, false),
            [min, max, count, scale] => {
                let log = match *scale {
                    "log" => true,
                    "linear" => false,
                    other => {
                        return Err(format!("unknown scale `{other}`; use `log` or `linear`"))
                    }
                };
                (min, max, count, log)
            }
            _ => return Err(format!("`{s}` does not match min:max:count[:log]")),
        };
        let min: f64 = min.parse().map_err(|e| format!("grid min: {e}"))?;
        let max: f64 = max.parse().map_err(|e| format!("grid max: {e}"))?;
        let count: usize = count.parse().map_err(|e| format!("grid count: {e}"))?;
        if !(min.is_finite() && max.is_finite() && 0.0 < min && min < max) {
            return Err(format!("need 0 < min < max, got {min}:{max}"));
        }
        if count < 2 {
            return Err(format!("need at least 2 grid points, got {count}"));
        }
        Ok(Self { min, max, count, log })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}
