//! The driving function `t -> kappa(t)` controlling per-step coin dephasing.
//!
//! `kappa` is the coherence retention factor: 1 leaves the coin untouched,
//! 0 measures it completely, and negative values flip the sign of the coin
//! coherences (still a valid channel for `kappa` in `[-1, 1]`). `t` is the
//! integer step index; the channel preceding flip `t` uses `kappa(t)`, so the
//! first applied value is `kappa(1)`. `kappa(0)` is still defined (the
//! boundary convention, e.g. `cos 0 = 1`) and is what trajectory records show
//! for the initial state.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// One piecewise-constant interval `[t_start, t_end)`; `t_end = None` means
/// unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub t_start: usize,
    pub t_end: Option<usize>,
    pub value: f64,
}

/// A driving schedule for the coin measurement strength.
#[derive(Debug, Clone, PartialEq)]
pub enum DrivingSchedule {
    /// `kappa(t) = c`.
    Constant(f64),
    /// `kappa(t) = cos(eta * t)`, `eta` in radians per step.
    Cosine(f64),
    /// Linear ramp from `lo` to `hi` over `period` steps, instant reset.
    Sawtooth { period: usize, lo: f64, hi: f64 },
    /// Piecewise-constant values on contiguous intervals.
    Piecewise(Vec<Piece>),
    /// Explicit per-step table; `kappa(t) = values[t]`.
    Table(Vec<f64>),
}

fn check_value(value: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::ScheduleValueOutOfRange { value });
    }
    Ok(value)
}

impl DrivingSchedule {
    pub fn constant(c: f64) -> Result<Self> {
        check_value(c)?;
        Ok(Self::Constant(c))
    }

    pub fn cosine(eta: f64) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::ScheduleValueOutOfRange { value: eta });
        }
        Ok(Self::Cosine(eta))
    }

    /// The default sawtooth: period 40, ramping 0 -> 1.
    pub fn sawtooth_default() -> Self {
        Self::Sawtooth { period: 40, lo: 0.0, hi: 1.0 }
    }

    pub fn sawtooth(period: usize, lo: f64, hi: f64) -> Result<Self> {
        check_value(lo)?;
        check_value(hi)?;
        if period == 0 {
            return Err(Error::InvalidConfig {
                detail: "sawtooth period must be >= 1".into(),
            });
        }
        Ok(Self::Sawtooth { period, lo, hi })
    }

    /// Pieces must be contiguous (`t_start` of each equals `t_end` of the
    /// previous) with only the last allowed to be unbounded.
    pub fn piecewise(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidConfig {
                detail: "piecewise schedule needs at least one interval".into(),
            });
        }
        let mut expected_start = pieces[0].t_start;
        for (i, p) in pieces.iter().enumerate() {
            check_value(p.value)?;
            if p.t_start != expected_start {
                return Err(Error::InvalidConfig {
                    detail: format!(
                        "piecewise intervals must be contiguous; interval {i} starts at {} but {} was expected",
                        p.t_start, expected_start
                    ),
                });
            }
            match p.t_end {
                Some(end) if end <= p.t_start => {
                    return Err(Error::InvalidConfig {
                        detail: format!("interval {i} is empty ({}..{end})", p.t_start),
                    });
                }
                Some(end) => expected_start = end,
                None => {
                    if i + 1 != pieces.len() {
                        return Err(Error::InvalidConfig {
                            detail: "only the last piecewise interval may be unbounded".into(),
                        });
                    }
                }
            }
        }
        Ok(Self::Piecewise(pieces))
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            check_value(v)?;
        }
        if values.is_empty() {
            return Err(Error::InvalidConfig {
                detail: "table schedule needs at least one value".into(),
            });
        }
        Ok(Self::Table(values))
    }

    /// Evaluate `kappa(t)`.
    pub fn kappa_at(&self, t: usize) -> Result<f64> {
        let v = match self {
            Self::Constant(c) => *c,
            Self::Cosine(eta) => (eta * t as f64).cos(),
            Self::Sawtooth { period, lo, hi } => {
                lo + (hi - lo) * ((t % period) as f64) / (*period as f64)
            }
            Self::Piecewise(pieces) => {
                let piece = pieces.iter().find(|p| {
                    t >= p.t_start && p.t_end.map_or(true, |end| t < end)
                });
                match piece {
                    Some(p) => p.value,
                    None => return Err(Error::ScheduleNotCovered { t }),
                }
            }
            Self::Table(values) => match values.get(t) {
                Some(v) => *v,
                None => {
                    return Err(Error::ScheduleOutOfRange { t, len: values.len() })
                }
            },
        };
        debug_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v));
        Ok(v)
    }

    /// Human-readable label for logs and CSV headers, e.g. `cos(t/10)`.
    pub fn describe(&self) -> String {
        match self {
            Self::Constant(c) => format!("const({c})"),
            Self::Cosine(eta) => describe_cosine(*eta),
            Self::Sawtooth { period, lo, hi } => format!("saw({period},{lo},{hi})"),
            Self::Piecewise(pieces) => {
                let body: Vec<String> = pieces
                    .iter()
                    .map(|p| match p.t_end {
                        Some(end) => format!("({},{},{})", p.t_start, end, p.value),
                        None => format!("({},\u{221e},{})", p.t_start, p.value),
                    })
                    .collect();
                format!("piecewise[{}]", body.join(","))
            }
            Self::Table(values) => format!("table(len={})", values.len()),
        }
    }

    /// The exact flag grammar that parses back to this schedule.
    pub fn spec_string(&self) -> String {
        match self {
            Self::Constant(c) => format!("const:{c}"),
            Self::Cosine(eta) => format!("cos:{eta}"),
            Self::Sawtooth { period, lo, hi } => format!("saw:{period}:{lo}:{hi}"),
            Self::Piecewise(pieces) => {
                let body: Vec<String> = pieces
                    .iter()
                    .map(|p| match p.t_end {
                        Some(end) => format!("{}-{}={}", p.t_start, end, p.value),
                        None => format!("{}-inf={}", p.t_start, p.value),
                    })
                    .collect();
                format!("piecewise:{}", body.join(","))
            }
            Self::Table(values) => {
                let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                format!("table:{}", body.join(","))
            }
        }
    }
}

/// Render `cos(eta t)` with a small rational `eta = p/q` as `cos(pt/q)`.
fn describe_cosine(eta: f64) -> String {
    for q in 1..=1000u64 {
        let p = eta * q as f64;
        if (p - p.round()).abs() < 1e-9 && p.round().abs() >= 1.0 {
            let p = p.round() as i64;
            return match (p, q) {
                (1, 1) => "cos(t)".to_string(),
                (1, _) => format!("cos(t/{q})"),
                (_, 1) => format!("cos({p}t)"),
                _ => format!("cos({p}t/{q})"),
            };
        }
    }
    format!("cos({eta}t)")
}

impl fmt::Display for DrivingSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn parse_err(input: &str, detail: impl Into<String>) -> Error {
    Error::ScheduleParse {
        input: input.to_string(),
        detail: detail.into(),
    }
}

fn parse_f64(input: &str, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| parse_err(input, format!("`{field}` is not a number")))
}

impl FromStr for DrivingSchedule {
    type Err = Error;

    /// Grammar: `cos:<eta>`, `const:<c>`, `saw[:<period>:<lo>:<hi>]`,
    /// `piecewise:<t0>-<t1>=<v>,...` (`inf` for an open end),
    /// `table:<v0>,<v1>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (s, None),
        };
        match kind {
            "cos" => {
                let eta = parse_f64(s, rest.ok_or_else(|| parse_err(s, "missing frequency"))?)?;
                Self::cosine(eta)
            }
            "const" => {
                let c = parse_f64(s, rest.ok_or_else(|| parse_err(s, "missing value"))?)?;
                Self::constant(c)
            }
            "saw" => match rest {
                None => Ok(Self::sawtooth_default()),
                Some(r) => {
                    let parts: Vec<&str> = r.split(':').collect();
                    if parts.len() != 3 {
                        return Err(parse_err(s, "expected saw:<period>:<lo>:<hi>"));
                    }
                    let period = parts[0]
                        .parse::<usize>()
                        .map_err(|_| parse_err(s, "period must be a positive integer"))?;
                    Self::sawtooth(period, parse_f64(s, parts[1])?, parse_f64(s, parts[2])?)
                }
            },
            "piecewise" => {
                let r = rest.ok_or_else(|| parse_err(s, "missing intervals"))?;
                let mut pieces = Vec::new();
                for part in r.split(',') {
                    let (range, value) = part
                        .split_once('=')
                        .ok_or_else(|| parse_err(s, format!("`{part}` lacks `=<value>`")))?;
                    let (start, end) = range
                        .split_once('-')
                        .ok_or_else(|| parse_err(s, format!("`{range}` lacks `<t0>-<t1>`")))?;
                    let t_start = start
                        .parse::<usize>()
                        .map_err(|_| parse_err(s, format!("bad interval start `{start}`")))?;
                    let t_end = if end == "inf" {
                        None
                    } else {
                        Some(end.parse::<usize>().map_err(|_| {
                            parse_err(s, format!("bad interval end `{end}` (use `inf` for open)"))
                        })?)
                    };
                    pieces.push(Piece { t_start, t_end, value: parse_f64(s, value)? });
                }
                Self::piecewise(pieces)
            }
            "table" => {
                let r = rest.ok_or_else(|| parse_err(s, "missing values"))?;
                let values: Result<Vec<f64>> = r.split(',').map(|v| parse_f64(s, v)).collect();
                Self::table(values?)
            }
            other => Err(parse_err(s, format!("unknown schedule kind `{other}`"))),
        }
    }
}
