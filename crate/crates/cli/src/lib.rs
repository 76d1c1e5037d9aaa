//! Commands behind the `hpot` binary. Each one returns a [`Report`] carrying
//! the plain-text rendering, a JSON rendering and the exit status, so tests
//! can drive them without spawning a process.

pub mod config;
mod constant;
mod expand;
mod oracle;
mod resolve;
mod selftest;
mod value;
mod verify;

use hpot::expansion::ExpansionError;
use hpot::oracle::OracleError;
use hpot::walk::WalkError;
use rug::float::Round;
use rug::Float;
use thiserror::Error;

pub use config::{Format, Method, RunConfig};
pub use constant::cmd_constant;
pub use expand::{cmd_expand, expand_report};
pub use oracle::{cmd_oracle, cmd_oracle_compare, read_points};
pub use resolve::{fourier_values, resolve_expansion, Resolved};
pub use selftest::cmd_selftest_lemmas;
pub use value::cmd_value;
pub use verify::{cmd_verify, verify_report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Error = 1,
    CheckFailed = 2,
    Budget = 3,
}

impl Status {
    pub fn from_check(ok: bool) -> Status {
        if ok {
            Status::Success
        } else {
            Status::CheckFailed
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Budget(_)
            | CliError::Oracle(OracleError::Budget(_) | OracleError::NoConvergence(_))
            | CliError::Expansion(ExpansionError::Fit(_)) => Status::Budget,
            _ => Status::Error,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub status: Status,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.text.clone(),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// `x` rounded to `digits` significant decimal digits, in positional
/// notation when the exponent is small.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest);
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (s.clone(), 0),
    };
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m.to_string()),
        None => ("", mant),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant.as_str(), ""));
    let all: String = format!("{int}{frac}");
    // Position of the decimal point counted from the start of `all`.
    let point = int.len() as i64 + exp;
    if !(-6..=21).contains(&point) {
        return format!("{sign}{}.{}e{}", &all[..1], &all[1..], point - 1);
    }
    if point <= 0 {
        format!("{sign}0.{}{all}", "0".repeat((-point) as usize))
    } else if point as usize >= all.len() {
        format!("{sign}{all}{}", "0".repeat(point as usize - all.len()))
    } else {
        let (a, b) = all.split_at(point as usize);
        format!("{sign}{a}.{b}")
    }
}

/// Short scientific form for error sizes.
pub fn short(x: f64) -> String {
    format!("{x:.2e}")
}
