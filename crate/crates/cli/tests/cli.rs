use std::process::Command;

use hpot::expansion::to_real_form;
use hpot::scalar::{PiGraded, SymbolicConstant};
use hpot::walk::WalkSpec;
use hpot_cli::{cmd_expand, resolve_expansion, Format, RunConfig, Status};
use serde_json::Value;

fn hpot(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hpot")).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn structured_output_round_trips() {
    let cfg = RunConfig { format: Format::Structured, ..RunConfig::with_walk("z2-simple") };
    let report = cmd_expand(&cfg).unwrap();
    let parsed: Value = serde_json::from_str(&report.render(Format::Structured)).unwrap();
    let walk = WalkSpec::bundled("z2-simple").unwrap();
    let e = resolve_expansion(&walk, 9, cfg.fit_order, &cfg.fit).unwrap().at_order(9);
    let table = to_real_form(&e).unwrap();
    let terms = parsed["terms"].as_array().unwrap();
    assert_eq!(terms.len(), table.entries.len());
    for (t, want) in terms.iter().zip(&table.entries) {
        let text = t["coefficient"]["exact"].as_str().unwrap();
        let back = PiGraded::parse_with(text, walk.d).unwrap();
        assert_eq!(Some(&back), want.coeff.as_exact());
        assert_eq!(back.to_string(), text);
        assert_eq!(t["power"].as_u64(), Some(want.power as u64));
        assert_eq!(t["exponent"].as_u64(), Some(want.exponent as u64));
    }
    let lambda: SymbolicConstant = parsed["lambda"]["exact"].as_str().unwrap().parse().unwrap();
    assert_eq!(lambda.to_string(), parsed["lambda"]["exact"].as_str().unwrap());
    assert_eq!(parsed["log_coefficient"].as_str().unwrap(), "0 + (1)/pi");
}

#[test]
fn triangular_structured_coefficients_parse_in_the_field() {
    let (out, _, code) = hpot(&["expand", "--walk", "tri-directed", "--order", "4", "--format", "structured"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let d = v["field_radicand"].as_u64().unwrap() as u32;
    assert_eq!(d, 3);
    for t in v["terms"].as_array().unwrap() {
        let text = t["coefficient"]["exact"].as_str().unwrap();
        assert_eq!(PiGraded::parse_with(text, d).unwrap().to_string(), text);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["expand", "--walk", "z2-simple", "--order", "12", "--format", "structured"];
    assert_eq!(hpot(&args).0, hpot(&args).0);
    let args = ["oracle", "--walk", "z2-king", "--at", "4", "-3"];
    assert_eq!(hpot(&args).0, hpot(&args).0);
}

#[test]
fn exit_codes() {
    assert_eq!(hpot(&["expand", "--order", "25"]).2, Status::Budget.code());
    assert_eq!(hpot(&["expand", "--precision", "32"]).2, Status::Budget.code());
    assert_eq!(hpot(&["no-such-command"]).2, Status::Error.code());
    assert_eq!(hpot(&["expand", "--walk", "no-such-walk"]).2, Status::Error.code());
    assert_eq!(hpot(&["value", "--walk", "z2-king", "--at", "1", "0", "--exact"]).2, Status::Error.code());
    // A slope bound no expansion can meet is a check failure.
    let (out, _, code) = hpot(&["verify", "--order", "4", "--slope-tolerance=-5"]);
    assert_eq!(code, Status::CheckFailed.code(), "{out}");
}

#[test]
fn verify_reports_order_two_constant() {
    let (out, _, code) = hpot(&["verify", "--order", "2", "--format", "structured"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let scaled: f64 = v["max_scaled"].as_str().unwrap().parse().unwrap();
    assert!(scaled < 0.07, "{scaled}");
}

#[test]
fn oracle_compare_over_a_point_file() {
    let dir = std::env::temp_dir().join(format!("hpot-points-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("points.txt");
    std::fs::write(&file, "# x y\n1 0\n3 -2\n\n7, 5\n").unwrap();
    let (out, err, code) = hpot(&["oracle", "compare", "--points", file.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code, 0, "{out}{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["agree"], Value::Bool(true));
    let methods: Vec<&str> =
        v["points"][1]["values"].as_array().unwrap().iter().map(|m| m["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["exact", "sum", "fourier", "conv"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn single_oracles_agree_with_exact_value() {
    let exact = 17.0 - 48.0 / std::f64::consts::PI;
    for method in ["sum", "fourier"] {
        let (out, _, code) = hpot(&["oracle", "--method", method, "--at", "3", "0", "--format", "structured"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let x: f64 = v["value"].as_str().unwrap().parse().unwrap();
        assert!((x - exact).abs() < 1e-8, "{method}: {x}");
    }
}

#[test]
fn triangular_decay_at_order_five() {
    let walk = WalkSpec::bundled("tri-directed").unwrap();
    let cfg = RunConfig { order: 5, ..RunConfig::with_walk("tri-directed") };
    let resolved = resolve_expansion(&walk, 5, cfg.fit_order, &cfg.fit).unwrap();
    let report = hpot_cli::verify_report(&cfg, &walk, &resolved).unwrap();
    let slope: f64 = report.json["slope"].as_str().unwrap().parse().unwrap();
    assert_eq!(report.status, Status::Success);
    assert!(slope <= -5.7, "{slope}");
}
