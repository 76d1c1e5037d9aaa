use std::fmt::Write;

use hpot::expansion::{
    check_degree_bounds, check_klhalf, check_parity, to_real_form, Coefficient, Expansion, Lambda, UnknownValue,
};
use hpot::walk::WalkSpec;
use serde_json::{json, Value};

use crate::{decimal, resolve_expansion, short, CliError, Report, Resolved, RunConfig, Status};

fn coefficient_json(c: &Coefficient, prec: u32) -> Value {
    match c {
        Coefficient::Exact(x) => json!({ "exact": x.to_string(), "value": decimal(&x.eval_re(prec), 20) }),
        Coefficient::Numeric { value, err } => json!({ "value": decimal(&value.re, 20), "error": short(*err) }),
        Coefficient::Unresolved => Value::Null,
    }
}

fn coefficient_text(c: &Coefficient, prec: u32) -> (String, String) {
    match c {
        Coefficient::Exact(x) => (x.to_string(), decimal(&x.eval_re(prec), 17)),
        Coefficient::Numeric { value, err } => (format!("~ +- {}", short(*err)), decimal(&value.re, 17)),
        Coefficient::Unresolved => ("unresolved".into(), String::new()),
    }
}

/// Structural checks on an expansion, in display order.
pub(crate) fn structural_checks(e: &Expansion, walk: &WalkSpec) -> Result<Vec<(&'static str, bool)>, CliError> {
    let table = to_real_form(e)?;
    let rev = walk.is_reversible();
    Ok(vec![("klhalf", check_klhalf(e)), ("degree", check_degree_bounds(&table, rev)), ("parity", check_parity(e, rev))])
}

/// The real-form table `Re(c z^p / |z|^e)` of the resolved expansion.
pub fn cmd_expand(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let walk = WalkSpec::load(&cfg.walk)?;
    let resolved = resolve_expansion(&walk, cfg.order, cfg.fit_order, &cfg.fit)?;
    expand_report(cfg, &walk, &resolved)
}

/// The expand report for an already resolved expansion.
pub fn expand_report(cfg: &RunConfig, walk: &WalkSpec, resolved: &Resolved) -> Result<Report, CliError> {
    let e = resolved.at_order(cfg.order);
    let prec = cfg.precision;
    let table = to_real_form(&e)?;

    let mut checks = structural_checks(&e, walk)?;
    if let Some(fit) = &resolved.fit {
        checks.push(("fit", fit.residual < cfg.fit_tolerance && fit.held_out < cfg.fit_tolerance));
    }
    let ok = checks.iter().all(|c| c.1);

    let mut text = String::new();
    writeln!(text, "walk       {}", walk.name).unwrap();
    writeln!(text, "order      {}", cfg.order).unwrap();
    writeln!(text, "log coeff  {}   (of log(z conj z))", e.alpha()).unwrap();
    let lambda_json = match e.lambda() {
        Lambda::Exact(c) => {
            let v = decimal(&c.eval(prec), 30);
            writeln!(text, "lambda     {c} = {v}").unwrap();
            json!({ "exact": c.to_string(), "value": v })
        }
        Lambda::Numeric { value, err } => {
            let v = decimal(value, 30);
            writeln!(text, "lambda     {v} +- {}", short(*err)).unwrap();
            json!({ "value": v, "error": short(*err) })
        }
        Lambda::Unresolved => Value::Null,
    };

    let mut harmonics = Vec::new();
    for (u, v) in e.unknowns().iter().zip(e.unknown_values()) {
        let (shown, j) = match v {
            Some(UnknownValue::Exact(x)) => (format!("{x}  exact"), json!({ "exact": x.to_string() })),
            Some(UnknownValue::Numeric { value, err }) => (
                format!("{} +- {}  numeric", decimal(value, 20), short(*err)),
                json!({ "value": decimal(value, 20), "error": short(*err) }),
            ),
            None => ("unresolved".into(), Value::Null),
        };
        writeln!(text, "harmonic   level {} along {}: {shown}", u.level, u.direction).unwrap();
        harmonics.push(json!({ "level": u.level, "direction": u.direction.to_string(), "value": j }));
    }

    writeln!(text).unwrap();
    writeln!(text, "{:>6} {:>6} {:>9}  {:<34} {}", "order", "power", "exponent", "coefficient", "value").unwrap();
    let mut terms = Vec::new();
    for t in &table.entries {
        let (c, v) = coefficient_text(&t.coeff, prec);
        writeln!(text, "{:>6} {:>6} {:>9}  {c:<34} {v}", t.order(), t.power, t.exponent).unwrap();
        terms.push(json!({
            "order": t.order(),
            "power": t.power,
            "exponent": t.exponent,
            "coefficient": coefficient_json(&t.coeff, prec),
        }));
    }
    writeln!(text).unwrap();
    let fit_json = match &resolved.fit {
        Some(f) => {
            writeln!(
                text,
                "fit        order {}, residual {}, held-out {}, {} of {} harmonic levels exact",
                resolved.expansion.order(),
                short(f.residual),
                short(f.held_out),
                f.reconstructed.iter().filter(|b| **b).count(),
                f.reconstructed.len()
            )
            .unwrap();
            json!({
                "residual": short(f.residual),
                "held_out": short(f.held_out),
                "reconstructed": f.reconstructed,
            })
        }
        None => Value::Null,
    };
    let shown: Vec<String> = checks.iter().map(|(n, b)| format!("{n} {}", if *b { "ok" } else { "FAILED" })).collect();
    writeln!(text, "checks     {}", shown.join(", ")).unwrap();

    let json = json!({
        "walk": walk.name,
        "field_radicand": walk.d,
        "order": cfg.order,
        "log_coefficient": e.alpha().to_string(),
        "lambda": lambda_json,
        "harmonics": harmonics,
        "terms": terms,
        "fit": fit_json,
        "checks": checks.iter().map(|(n, b)| ((*n).to_string(), Value::Bool(*b))).collect::<serde_json::Map<_, _>>(),
    });
    Ok(Report { text, json, status: if ok { Status::Success } else { Status::CheckFailed } })
}
