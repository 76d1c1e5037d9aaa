use std::fmt::Write;

use hpot::exact_values::mccrea_whipple;
use hpot::expansion::is_simple_walk;
use hpot::oracle::potential_fourier;
use hpot::walk::WalkSpec;
use serde_json::json;

use crate::{decimal, short, CliError, Report, RunConfig, Status};

/// Digits shown for a single value.
const DIGITS: usize = 40;

/// `a(x, y)`: exact for the simple walk, Fourier otherwise.
pub fn cmd_value(cfg: &RunConfig, at: (i64, i64), exact: bool) -> Result<Report, CliError> {
    cfg.validate()?;
    let walk = WalkSpec::load(&cfg.walk)?;
    let simple = is_simple_walk(&walk);
    if exact && !simple {
        return Err(CliError::Usage(format!("exact values are available for the simple walk only, not {}", walk.name)));
    }
    let v = if simple { mccrea_whipple(at.0, at.1) } else { potential_fourier(&walk, at, cfg.precision)? };
    let digits = decimal(&v.eval(cfg.precision), DIGITS);
    let mut text = String::new();
    let head = format!("a({}, {})", at.0, at.1);
    if exact {
        writeln!(text, "{head} = {}", v.exact_text().expect("exact value")).unwrap();
        writeln!(text, "{} = {digits}", " ".repeat(head.len())).unwrap();
    } else {
        writeln!(text, "{head} = {digits}").unwrap();
    }
    let bound = v.error_bound();
    if bound > 0.0 {
        writeln!(text, "error bound {}", short(bound)).unwrap();
    }
    let json = json!({
        "walk": walk.name,
        "at": [at.0, at.1],
        "exact": if exact { v.exact_text() } else { None },
        "value": digits,
        "error": short(bound),
    });
    Ok(Report { text, json, status: Status::Success })
}
