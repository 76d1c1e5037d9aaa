use std::fmt::Write;

use hpot::exact_values::{McCreaWhipple, PotentialValue};
use hpot::expansion::is_simple_walk;
use hpot::oracle::{potential_convolution, potential_direct_sum, potential_fourier, DirectSumOptions, OracleError};
use hpot::walk::WalkSpec;
use serde_json::json;

use crate::{decimal, short, CliError, Method, Report, RunConfig, Status};

fn evaluate(cfg: &RunConfig, walk: &WalkSpec, method: Method, at: (i64, i64)) -> Result<PotentialValue, OracleError> {
    match method {
        Method::Sum => potential_direct_sum(walk, at, &DirectSumOptions::default()),
        Method::Fourier => potential_fourier(walk, at, cfg.precision),
        Method::Conv => potential_convolution(walk, at, cfg.conv_radius, cfg.conv_iterations),
    }
}

/// One oracle at one point.
pub fn cmd_oracle(cfg: &RunConfig, method: Method, at: (i64, i64)) -> Result<Report, CliError> {
    cfg.validate()?;
    let walk = WalkSpec::load(&cfg.walk)?;
    let v = evaluate(cfg, &walk, method, at)?;
    let digits = if method == Method::Fourier { 40 } else { 17 };
    let value = decimal(&v.eval(cfg.precision), digits);
    let text = format!("a({}, {}) = {value}\nerror bound {} ({})\n", at.0, at.1, short(v.error_bound()), method.name());
    let json = json!({
        "walk": walk.name,
        "method": method.name(),
        "at": [at.0, at.1],
        "value": value,
        "error": short(v.error_bound()),
    });
    Ok(Report { text, json, status: Status::Success })
}

/// Lattice points, one `x y` pair per line; `#` starts a comment.
pub fn read_points(path: &str) -> Result<Vec<(i64, i64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<i64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("{path}:{}: {e}", n + 1)))?;
        match nums[..] {
            [x, y] => out.push((x, y)),
            _ => return Err(CliError::Usage(format!("{path}:{}: expected two integers", n + 1))),
        }
    }
    Ok(out)
}

/// Every applicable oracle at every point, with pairwise agreement checked
/// against the sum of the stated error bounds plus `tolerance`.
pub fn cmd_oracle_compare(cfg: &RunConfig, points: &[(i64, i64)], tolerance: f64) -> Result<Report, CliError> {
    cfg.validate()?;
    let walk = WalkSpec::load(&cfg.walk)?;
    let simple = is_simple_walk(&walk);
    let reach = points.iter().map(|p| p.0.abs().max(p.1.abs())).max().unwrap_or(0);
    let table = simple.then(|| McCreaWhipple::with_size(reach as usize));

    let mut text = String::new();
    writeln!(text, "walk {}", walk.name).unwrap();
    writeln!(text, "{:>12} {:>8} {:>24} {:>10}", "point", "method", "value", "bound").unwrap();
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut rows = Vec::new();
    for &p in points {
        let mut got: Vec<(&str, PotentialValue)> = Vec::new();
        if let Some(t) = &table {
            got.push(("exact", t.get(p.0, p.1).expect("table covers the points")));
        }
        for m in [Method::Sum, Method::Fourier, Method::Conv] {
            match evaluate(cfg, &walk, m, p) {
                Ok(v) => got.push((m.name(), v)),
                Err(OracleError::Unsupported(_) | OracleError::Invalid(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        let mut entries = Vec::new();
        for (name, v) in &got {
            let x = v.to_f64();
            writeln!(text, "{:>12} {name:>8} {x:>24.17} {:>10}", format!("({}, {})", p.0, p.1), short(v.error_bound()))
                .unwrap();
            entries.push(json!({ "method": name, "value": format!("{x:.17}"), "error": short(v.error_bound()) }));
        }
        for i in 0..got.len() {
            for j in i + 1..got.len() {
                let gap = (got[i].1.to_f64() - got[j].1.to_f64()).abs();
                worst = worst.max(gap);
                if gap > got[i].1.error_bound() + got[j].1.error_bound() + tolerance {
                    ok = false;
                    writeln!(text, "  disagreement {} vs {}: {}", got[i].0, got[j].0, short(gap)).unwrap();
                }
            }
        }
        rows.push(json!({ "at": [p.0, p.1], "values": entries }));
    }
    writeln!(text, "largest pairwise gap {}", short(worst)).unwrap();
    let json = json!({ "walk": walk.name, "points": rows, "largest_gap": short(worst), "agree": ok });
    Ok(Report { text, json, status: Status::from_check(ok) })
}
