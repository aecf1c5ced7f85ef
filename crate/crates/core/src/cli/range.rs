use std::fmt;
use std::str::FromStr;

use crate::numerics::{linspace, logspace};

/// A grid of values: `min:max:count`, `log:min:max:count`, a comma list or a
/// single number.
#[derive(Debug, Clone, PartialEq)]
pub enum RangeSpec {
    List(Vec<f64>),
    Linear { min: f64, max: f64, count: usize },
    Log { min: f64, max: f64, count: usize },
}

impl RangeSpec {
    pub fn single(x: f64) -> Self {
        RangeSpec::List(vec![x])
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            RangeSpec::List(ref v) => v.clone(),
            RangeSpec::Linear { min, max, count } => linspace(min, max, count),
            RangeSpec::Log { min, max, count } => logspace(min, max, count),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RangeSpec::List(v) => v.len(),
            RangeSpec::Linear { count, .. } | RangeSpec::Log { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shape problems of the range itself, prefixed with `name`.
    pub fn diagnostics(&self, name: &str) -> Vec<String> {
        let mut out = Vec::new();
        match *self {
            RangeSpec::List(ref v) => {
                if v.is_empty() {
                    out.push(format!("{name} grid is empty"));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    out.push(format!("{name} values must be finite"));
                }
            }
            RangeSpec::Linear { min, max, count } | RangeSpec::Log { min, max, count } => {
                if !min.is_finite() || !max.is_finite() {
                    out.push(format!("{name} range bounds must be finite"));
                } else if min > max {
                    out.push(format!("{name} range needs min <= max"));
                } else if count == 1 && min != max {
                    out.push(format!("{name} range with distinct bounds needs count >= 2"));
                }
                if count == 0 {
                    out.push(format!("{name} grid is empty"));
                }
                if matches!(self, RangeSpec::Log { .. }) && !(min > 0.0) {
                    out.push(format!("{name} log range needs min > 0"));
                }
            }
        }
        out
    }
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let text = text.trim();
        let (log, body) = match text.strip_prefix("log:") {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let number = |part: &str| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{}` is not a number", part.trim()))
        };
        if body.contains(':') {
            let parts: Vec<&str> = body.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("range `{text}` must look like min:max:count"));
            }
            let min = number(parts[0])?;
            let max = number(parts[1])?;
            let count = parts[2]
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("range count `{}` is not a non-negative integer", parts[2].trim()))?;
            return Ok(if log {
                RangeSpec::Log { min, max, count }
            } else {
                RangeSpec::Linear { min, max, count }
            });
        }
        if log {
            return Err(format!("`log:` range `{text}` must look like log:min:max:count"));
        }
        body.split(',')
            .map(number)
            .collect::<Result<Vec<f64>, String>>()
            .map(RangeSpec::List)
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeSpec::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                write!(f, "{}", parts.join(","))
            }
            RangeSpec::Linear { min, max, count } => write!(f, "{min:?}:{max:?}:{count}"),
            RangeSpec::Log { min, max, count } => write!(f, "log:{min:?}:{max:?}:{count}"),
        }
    }
}
