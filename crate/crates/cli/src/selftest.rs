use std::fmt::Write;

use hpot::numeric::binomial;
use hpot::oracle::{f_sum, local_clt, multinomial_clt_check, theta_sum_check};
use hpot::walk::WalkSpec;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde_json::json;

use crate::{short, CliError, Report, Status};

struct Check {
    name: &'static str,
    detail: String,
    ok: bool,
}

fn f_sum_decay() -> Result<Check, CliError> {
    let mut detail = Vec::new();
    let mut ok = true;
    for s in [1.5, 2.0, 3.0] {
        let scaled: Vec<f64> =
            [50.0f64, 100.0, 200.0, 400.0].iter().map(|&r| Ok(f_sum(s, 1, 1, r)?.gap() * r.powi(5))).collect::<Result<_, CliError>>()?;
        ok &= scaled.windows(2).all(|w| w[1] < w[0]);
        detail.push(format!("s={s}: r^5 gap {} -> {}", short(scaled[0]), short(scaled[3])));
    }
    Ok(Check { name: "f_sum decay", detail: detail.join("; "), ok })
}

fn theta_shift() -> Result<Check, CliError> {
    let a = [[2.0, 1.0], [0.5, 1.5]];
    let base = theta_sum_check(a, [0.0, 0.0], 50.0)?;
    let shifted = theta_sum_check(a, [0.3, -0.7], 50.0)?;
    let gap = (base.direct - shifted.direct).abs();
    Ok(Check {
        name: "theta shift",
        detail: format!("shift changes the sum by {}, gap to pi n/|det A| {}", short(gap), short(base.relative_gap())),
        ok: gap < 1e-10,
    })
}

fn binomial_clt() -> Result<Check, CliError> {
    let half = Rational::from((1, 2));
    let c = multinomial_clt_check(&[half.clone(), half], 1000, &[Rational::new(), Rational::new()])?;
    Ok(Check { name: "binomial clt", detail: format!("relative gap {} at n = 1000", short(c.relative_gap())), ok: c.relative_gap() < 1e-3 })
}

fn local_clt_normalization() -> Result<Check, CliError> {
    let walk = WalkSpec::bundled("z2-simple")?;
    let n = 100u32;
    let c = binomial(n, n / 2);
    let exact = (Rational::from(&c * &c) / Rational::from(Integer::from(4).pow(n))).to_f64();
    let rel = (local_clt(&walk, n as u64, (0, 0))? / exact - 1.0).abs();
    Ok(Check { name: "local clt", detail: format!("relative error {} at n = 100", short(rel)), ok: rel <= 0.02 })
}

/// The desk checks behind the direct-sum oracle.
pub fn cmd_selftest_lemmas() -> Result<Report, CliError> {
    let checks = [f_sum_decay()?, theta_shift()?, binomial_clt()?, local_clt_normalization()?];
    let mut text = String::new();
    for c in &checks {
        writeln!(text, "{} {:<14} {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail).unwrap();
    }
    let ok = checks.iter().all(|c| c.ok);
    let json = json!({
        "checks": checks.iter().map(|c| json!({ "name": c.name, "pass": c.ok, "detail": c.detail })).collect::<Vec<_>>(),
        "pass": ok,
    });
    Ok(Report { text, json, status: Status::from_check(ok) })
}
