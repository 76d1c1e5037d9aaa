use std::fmt::Write;

use hpot::exact_values::{error_constant_scan, McCreaWhipple};
use hpot::expansion::is_simple_walk;
use hpot::numeric;
use hpot::walk::WalkSpec;
use rug::Float;
use serde_json::json;

use crate::{decimal, CliError, Report, RunConfig, Status};

/// Scans `|z|^2 |a(z) - (2/pi) log|z| - lambda|` over `1 <= |z| <= r_max`
/// using exact simple-walk values.
pub fn cmd_constant(cfg: &RunConfig) -> Result<Report, CliError> {
    let walk = WalkSpec::load(&cfg.walk)?;
    if !is_simple_walk(&walk) {
        return Err(CliError::Usage(format!("the constant scan needs the simple walk, got {}", walk.name)));
    }
    if !(cfg.r_max >= 1.0) {
        return Err(CliError::Usage(format!("r-max must be at least 1, got {}", cfg.r_max)));
    }
    let mut table = McCreaWhipple::new();
    let scan = error_constant_scan(&mut table, cfg.r_max);
    let asymptote = Float::with_val(64, numeric::pi(64) * 6u32).recip();
    let (x, y) = scan.argmax;

    let mut text = String::new();
    writeln!(text, "points     {} with 1 <= |z| <= {}", scan.points, cfg.r_max).unwrap();
    writeln!(text, "argmax     z = ({x}, {y}), |z| = {:.6}", ((x * x + y * y) as f64).sqrt()).unwrap();
    writeln!(text, "maximum    {:.10}", scan.value).unwrap();
    writeln!(text, "signed     {:.10}", scan.signed).unwrap();
    writeln!(text, "asymptote  1/(6 pi) = {}", decimal(&asymptote, 10)).unwrap();
    let json = json!({
        "points": scan.points,
        "r_max": cfg.r_max,
        "argmax": [x, y],
        "value": format!("{:.10}", scan.value),
        "signed": format!("{:.10}", scan.signed),
        "asymptote": decimal(&asymptote, 10),
    });
    Ok(Report { text, json, status: Status::Success })
}
