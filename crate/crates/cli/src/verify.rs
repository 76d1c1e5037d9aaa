use std::f64::consts::PI;
use std::fmt::Write;

use hpot::exact_values::{diagonal_value, McCreaWhipple, PotentialValue};
use hpot::expansion::{decay_report, diagonal_points, geometric_radii, is_simple_walk, sample_points, Lambda, UnknownValue};
use hpot::oracle::potential_fourier_many;
use hpot::walk::WalkSpec;
use rug::Float;
use serde_json::json;

use crate::{resolve_expansion, short, CliError, Report, Resolved, RunConfig, Status};

/// Points along each ray, nearest lattice point per radius.
fn rays(walk: &WalkSpec, radii: &[f64], count: usize, prec: u32) -> Vec<(String, Vec<(i64, i64)>)> {
    if count == 0 {
        return vec![("diagonal".into(), diagonal_points(walk, radii))];
    }
    let sector = 2.0 * PI / walk.rotational_symmetry_order() as f64;
    (0..count)
        .map(|j| {
            let theta = sector * (j as f64 + 0.5) / count as f64;
            let mut pts: Vec<(i64, i64)> =
                radii.iter().map(|&r| sample_points(walk, &[r], &[theta], prec)[0].coords).collect();
            pts.dedup();
            (format!("{:.4} rad", theta), pts)
        })
        .collect()
}

fn reference_values(walk: &WalkSpec, pts: &[(i64, i64)], prec: u32) -> Result<Vec<PotentialValue>, CliError> {
    if !is_simple_walk(walk) {
        return Ok(potential_fourier_many(walk, pts, prec)?);
    }
    if pts.iter().all(|p| p.0 == p.1) {
        return Ok(pts.iter().map(|p| diagonal_value(p.0.unsigned_abs())).collect());
    }
    let reach = pts.iter().map(|p| p.0.abs().max(p.1.abs())).max().unwrap_or(0);
    let table = McCreaWhipple::with_size(reach as usize);
    Ok(pts.iter().map(|p| table.get(p.0, p.1).expect("table covers the rays")).collect())
}

/// Error of the order-`K` expansion against an oracle along rays, with the
/// fitted log-log decay slope.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let walk = WalkSpec::load(&cfg.walk)?;
    let resolved = resolve_expansion(&walk, cfg.order, cfg.fit_order, &cfg.fit)?;
    verify_report(cfg, &walk, &resolved)
}

/// The verify report for an already resolved expansion.
pub fn verify_report(cfg: &RunConfig, walk: &WalkSpec, resolved: &Resolved) -> Result<Report, CliError> {
    let prec = cfg.precision;
    let e = resolved.at_order(cfg.order);
    let (lo, hi, n) = cfg.verify_radii;
    let radii = geometric_radii(lo, hi, n);
    let rays = rays(walk, &radii, cfg.rays, prec);
    let shortest = rays.iter().map(|r| r.1.len()).min().unwrap_or(0);
    if shortest < 2 {
        return Err(CliError::Usage("need at least two distinct points per ray".into()));
    }
    let pts: Vec<Vec<(i64, i64)>> = rays.iter().map(|r| r.1[..shortest].to_vec()).collect();

    let mut values = Vec::with_capacity(pts.len());
    let mut floor = 0.0f64;
    for p in &pts {
        let v = reference_values(walk, p, prec)?;
        floor = floor.max(v.iter().map(|x| x.error_bound()).fold(0.0, f64::max));
        values.push(v.iter().map(|x| x.eval(prec)).collect::<Vec<Float>>());
    }
    // Uncertainty carried into the model by fitted constants.
    if let Lambda::Numeric { err, .. } = e.lambda() {
        floor += err;
    }
    for v in e.unknown_values().iter().flatten() {
        if let UnknownValue::Numeric { err, .. } = v {
            floor += err;
        }
    }
    let report = decay_report(&e, &pts, &values, prec)?;
    let smallest = report.rays.iter().flat_map(|r| r.errors.iter().map(|x| x.1)).fold(f64::INFINITY, f64::min);
    let resolved_enough = floor <= 0.1 * smallest;
    let pass = report.passes(cfg.order, cfg.slope_tolerance);

    let mut text = String::new();
    writeln!(text, "walk       {}", walk.name).unwrap();
    writeln!(text, "order      {}", cfg.order).unwrap();
    writeln!(text, "oracle     {}", if is_simple_walk(walk) { "exact values" } else { "fourier" }).unwrap();
    writeln!(text, "floor      {}", short(floor)).unwrap();
    let mut rays_json = Vec::new();
    for ((name, _), (ray, p)) in rays.iter().zip(report.rays.iter().zip(&pts)) {
        writeln!(text).unwrap();
        writeln!(text, "ray {name}, slope {:.3}", ray.slope).unwrap();
        writeln!(text, "{:>16} {:>12} {:>12} {:>12}", "point", "|z|", "error", "|z|^K err").unwrap();
        for ((r, err), q) in ray.errors.iter().zip(p) {
            let scaled = err * r.powi(cfg.order as i32);
            writeln!(text, "{:>16} {r:>12.4} {:>12} {:>12}", format!("({}, {})", q.0, q.1), short(*err), short(scaled))
                .unwrap();
        }
        rays_json.push(json!({
            "ray": name,
            "slope": format!("{:.4}", ray.slope),
            "points": p.iter().zip(&ray.errors).map(|(q, (r, err))| json!({
                "at": [q.0, q.1],
                "radius": format!("{r:.6}"),
                "error": short(*err),
            })).collect::<Vec<_>>(),
        }));
    }
    writeln!(text).unwrap();
    writeln!(text, "slope      {:.3} (need <= {:.1})", report.slope, -(cfg.order as f64) + cfg.slope_tolerance).unwrap();
    writeln!(text, "max |z|^K err  {}", short(report.max_scaled)).unwrap();
    let status = if !resolved_enough {
        writeln!(text, "result     oracle precision insufficient for order {}", cfg.order).unwrap();
        Status::Budget
    } else {
        writeln!(text, "result     {}", if pass { "pass" } else { "FAIL" }).unwrap();
        Status::from_check(pass)
    };
    let json = json!({
        "walk": walk.name,
        "order": cfg.order,
        "floor": short(floor),
        "rays": rays_json,
        "slope": format!("{:.4}", report.slope),
        "max_scaled": short(report.max_scaled),
        "pass": pass,
        "precision_sufficient": resolved_enough,
    });
    Ok(Report { text, json, status })
}
