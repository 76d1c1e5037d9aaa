//! One line per acceptance criterion. Run with `--nocapture` to see them.
//!
//! The triangular table (criterion 3) is printed as FAIL: the published
//! signs of its even-order entries are not what the walk produces. The test
//! still passes when the mismatch is exactly that known set and the
//! computed signs are confirmed against the Fourier oracle.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use hpot::exact_values::{diagonal_value, error_constant_scan, simple_walk_lambda, McCreaWhipple, PotentialValue};
use hpot::expansion::{
    check_degree_bounds, check_klhalf, check_parity, coefficient_unit, sample_points, solve_expansion, to_real_form,
    Expansion, Lambda, RealFormTable,
};
use hpot::oracle::{potential_convolution_iterate, potential_direct_sum, potential_fourier_many, DirectSumOptions};
use hpot::scalar::{eval_complex, ExactComplex, FieldElement, PiGraded};
use hpot::walk::WalkSpec;
use hpot_cli::{cmd_selftest_lemmas, expand_report, resolve_expansion, verify_report, Resolved, RunConfig, Status};
use rug::Rational;

const WALKS: [&str; 3] = ["z2-simple", "z2-king", "tri-directed"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn over_pi(unit: &FieldElement, n: i64, d: i64) -> PiGraded {
    PiGraded::over_pi(ExactComplex::real(unit.scale(&Rational::from((n, d)))))
}

/// Entries of the real-form table as `(power, exponent, exact coefficient)`.
fn exact_entries(t: &RealFormTable) -> Vec<(u32, u32, Option<PiGraded>)> {
    t.entries.iter().map(|e| (e.power, e.exponent, e.coeff.as_exact().cloned())).collect()
}

fn table_matches(e: &Expansion, order: u32, unit: &FieldElement, want: &[(u32, u32, i64, i64)]) -> (bool, String) {
    let got = exact_entries(&to_real_form(&e.truncated(order)).unwrap());
    let want: Vec<_> = want.iter().map(|&(p, x, n, d)| (p, x, Some(over_pi(unit, n, d)))).collect();
    let missing = want.iter().filter(|w| !got.contains(w)).count();
    (got == want, format!("{} entries, {missing} mismatched", got.len()))
}

struct Fixture {
    cfg: RunConfig,
    resolved: Vec<(WalkSpec, Resolved)>,
}

impl Fixture {
    fn new() -> Self {
        let cfg = RunConfig::default();
        let resolved = WALKS
            .iter()
            .map(|name| {
                let walk = WalkSpec::bundled(name).unwrap();
                let r = resolve_expansion(&walk, cfg.order, cfg.fit_order, &cfg.fit).unwrap();
                (walk, r)
            })
            .collect();
        Fixture { cfg, resolved }
    }

    fn get(&self, name: &str) -> &(WalkSpec, Resolved) {
        self.resolved.iter().find(|(w, _)| w.name == name).unwrap()
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let walk = WalkSpec::bundled("z2-simple").unwrap();
    let r = resolve_expansion(&walk, 9, cfg.fit_order, &cfg.fit).unwrap();
    let report = expand_report(&cfg, &walk, &r).unwrap();
    let (table_ok, detail) = table_matches(
        &r.expansion,
        9,
        &FieldElement::one(),
        &[
            (4, 6, -1, 6),
            (4, 8, -3, 20),
            (8, 12, -5, 24),
            (8, 14, -51, 56),
            (12, 18, -35, 36),
            (8, 16, -217, 160),
            (12, 20, -45, 4),
            (16, 24, -1925, 192),
        ],
    );
    let lambda_ok = *r.expansion.lambda() == Lambda::Exact(simple_walk_lambda());
    let secs = start.elapsed().as_secs_f64();
    outcome(
        table_ok && lambda_ok && report.status == Status::Success && secs <= 60.0,
        format!("{detail}; lambda = {} exact: {lambda_ok}; {secs:.2} s", simple_walk_lambda()),
    )
}

fn criterion_2(fx: &Fixture) -> Outcome {
    let (walk, r) = fx.get("z2-king");
    let fit = r.fit.as_ref().unwrap();
    let (table_ok, detail) = table_matches(
        &r.expansion,
        9,
        &FieldElement::one(),
        &[
            (4, 6, 1, 9),
            (4, 8, 11, 90),
            (8, 12, -5, 36),
            (8, 14, -167, 252),
            (12, 18, 35, 54),
            (8, 16, -1673, 2160),
            (12, 20, 15, 2),
            (16, 24, -1925, 288),
        ],
    );
    let harmonic_exact = fit.reconstructed[..2].iter().all(|b| *b);
    let status = expand_report(&fx.cfg, walk, r).unwrap().status;
    outcome(
        table_ok && harmonic_exact && fit.residual < 1e-10 && status == Status::Success,
        format!("{detail}; fit residual {:.1e}, held-out {:.1e}", fit.residual, fit.held_out),
    )
}

/// Published triangular entries, all positive multiples of `sqrt 3 / pi`.
const TRIANGULAR_PUBLISHED: [(u32, u32, i64, i64); 11] = [
    (3, 4, 1, 6),
    (6, 8, 1, 12),
    (3, 6, 1, 18),
    (9, 12, 5, 54),
    (6, 10, 17, 135),
    (12, 16, 35, 216),
    (9, 14, 19, 54),
    (15, 20, 7, 18),
    (6, 12, 85, 1134),
    (12, 18, 98, 81),
    (18, 24, 385, 324),
];

/// Entries whose published sign is the opposite of the computed one.
const TRIANGULAR_SIGN_FLIPS: [(u32, u32); 6] = [(6, 8), (6, 10), (12, 16), (12, 18), (18, 24), (6, 12)];

/// `2 alpha log|z| + lambda + sum_j c_j Re(z^p_j) / |z|^e_j` in `f64`.
fn real_form_model(alpha: f64, lambda: f64, terms: &[(u32, u32, f64)], z: (f64, f64)) -> f64 {
    let r = z.0.hypot(z.1);
    let theta = z.1.atan2(z.0);
    let series: f64 = terms.iter().map(|&(p, e, c)| c * (p as f64 * theta).cos() * r.powi(p as i32 - e as i32)).sum();
    2.0 * alpha * r.ln() + lambda + series
}

/// Returns (pass against published table, documented deviation confirmed, detail).
fn criterion_3(fx: &Fixture) -> (Outcome, bool) {
    let (walk, r) = fx.get("tri-directed");
    let fit = r.fit.as_ref().unwrap();
    let unit = coefficient_unit(walk).unwrap();
    let got = exact_entries(&to_real_form(&r.expansion.truncated(6)).unwrap());

    let mut flipped = BTreeSet::new();
    let mut magnitudes_ok = got.len() == TRIANGULAR_PUBLISHED.len();
    for &(p, x, n, d) in &TRIANGULAR_PUBLISHED {
        let published = over_pi(&unit, n, d);
        match got.iter().find(|g| g.0 == p && g.1 == x).and_then(|g| g.2.clone()) {
            Some(c) if c == published => {}
            Some(c) if c == over_pi(&unit, -n, d) => {
                flipped.insert((p, x));
            }
            _ => magnitudes_ok = false,
        }
    }
    let odd_present = got.iter().any(|g| (g.0 as i64 - g.1 as i64) % 2 != 0);
    let exact_fit = fit.residual < 1e-10 && fit.reconstructed[..2].iter().all(|b| *b);
    let documented: BTreeSet<(u32, u32)> = TRIANGULAR_SIGN_FLIPS.iter().cloned().collect();

    // Which sign pattern does the Fourier oracle support? Compare both
    // models, with the higher-order computed terms added to each.
    let e9 = r.expansion.truncated(9);
    let alpha = e9.alpha().to_f64();
    let lambda = e9.lambda().eval(64).unwrap().to_f64();
    let ours: Vec<(u32, u32, f64)> =
        to_real_form(&e9).unwrap().entries.iter().map(|t| (t.power, t.exponent, t.coeff.re_f64().unwrap())).collect();
    let published: Vec<(u32, u32, f64)> = ours
        .iter()
        .map(|&(p, x, c)| if documented.contains(&(p, x)) { (p, x, -c) } else { (p, x, c) })
        .collect();
    let pts: Vec<(i64, i64)> = [(20.0, 0.3), (28.0, 1.1), (35.0, 2.0)]
        .iter()
        .map(|&(rad, th)| sample_points(walk, &[rad], &[th], 53)[0].coords)
        .collect();
    let oracle = potential_fourier_many(walk, &pts, 128).unwrap();
    let (mut err_ours, mut err_published) = (0.0f64, 0.0f64);
    for (p, v) in pts.iter().zip(&oracle) {
        let z = eval_complex(&walk.point(p.0, p.1), 53).to_f64();
        let a = v.to_f64();
        err_ours = err_ours.max((real_form_model(alpha, lambda, &ours, z) - a).abs());
        err_published = err_published.max((real_form_model(alpha, lambda, &published, z) - a).abs());
    }
    let evidence = err_ours < 1e-9 && err_published > 1e3 * err_ours;

    let pass = magnitudes_ok && flipped.is_empty() && odd_present && exact_fit;
    let known = magnitudes_ok && flipped == documented && odd_present && exact_fit && evidence;
    let detail = format!(
        "magnitudes exact: {magnitudes_ok}; odd orders present: {odd_present}; {} published signs disagree {:?}; \
         oracle error with computed signs {err_ours:.1e}, with published signs {err_published:.1e}",
        flipped.len(),
        flipped,
    );
    (outcome(pass, detail), known)
}

fn criterion_4() -> Outcome {
    let t = McCreaWhipple::with_size(51);
    let diagonal_ok = (0..=50).all(|m| t.get(m, m).unwrap() == diagonal_value(m as u64));
    let exact = |x: i64, y: i64| t.get(x, y).unwrap().exact.unwrap();
    let mut laplacian_ok = true;
    for x in -30i64..=30 {
        for y in -30i64..=30 {
            let c = exact(x, y);
            let mut n = Rational::from(&c.0 * 4u32) * -1i32;
            let mut q = Rational::from(&c.1 * 4u32) * -1i32;
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let v = exact(x + dx, y + dy);
                n += v.0;
                q += v.1;
            }
            let want = if (x, y) == (0, 0) { 4 } else { 0 };
            laplacian_ok &= n == want && q == 0;
        }
    }
    let small = t.get(1, 1).unwrap() == PotentialValue::exact(Rational::new(), Rational::from(4))
        && t.get(1, 0).unwrap() == PotentialValue::exact(Rational::from(1), Rational::new());
    outcome(
        diagonal_ok && laplacian_ok && small,
        format!("diagonal m <= 50: {diagonal_ok}; Laplacian on |x|,|y| <= 30: {laplacian_ok}; a(1,1), a(1,0): {small}"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut t = McCreaWhipple::new();
    let scan = error_constant_scan(&mut t, 400.0);
    let asymptote = 1.0 / (6.0 * PI);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        scan.argmax == (3, 0)
            && (scan.value - 0.06882).abs() <= 5e-5
            && (asymptote - 0.05305).abs() <= 1e-5
            && secs <= 600.0,
        format!(
            "max {:.6} at {:?} over {} points, 1/(6 pi) = {asymptote:.6}; {secs:.1} s",
            scan.value, scan.argmax, scan.points
        ),
    )
}

fn criterion_6() -> Outcome {
    let want = [
        over_pi(&FieldElement::one(), 2, 1),
        over_pi(&FieldElement::one(), 4, 3),
        over_pi(&FieldElement::sqrt_of(3), 1, 1),
    ];
    let mut shown = Vec::new();
    let mut ok = true;
    for (name, w) in WALKS.iter().zip(&want) {
        let walk = WalkSpec::bundled(name).unwrap();
        let tau = walk.tau_constant().unwrap();
        let alpha = solve_expansion(&walk, 4).unwrap().alpha().clone();
        ok &= tau == *w && alpha.scale(&Rational::from(2)) == tau;
        shown.push(format!("{name}: {tau}"));
    }
    outcome(ok, shown.join(", "))
}

/// 25 lattice points spread over `2 <= |z| <= 38` on a golden-angle spiral.
fn spread_points(walk: &WalkSpec) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = (0..25)
        .map(|j| {
            let r = 2.0 + 36.0 * ((j as f64 + 0.5) / 25.0).sqrt();
            let theta = j as f64 * 2.399_963_229_728_653;
            sample_points(walk, &[r], &[theta], 53)[0].coords
        })
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut ok = true;
    let grid = potential_convolution_iterate(&WalkSpec::bundled("z2-simple").unwrap(), 200, 8).unwrap();
    for name in WALKS {
        let walk = WalkSpec::bundled(name).unwrap();
        let pts = spread_points(&walk);
        ok &= pts.len() == 25;
        let fourier = potential_fourier_many(&walk, &pts, 128).unwrap();
        for (p, f) in pts.iter().zip(&fourier) {
            let mut vals = vec![f.to_f64(), potential_direct_sum(&walk, *p, &DirectSumOptions::default()).unwrap().to_f64()];
            if name == "z2-simple" {
                vals.push(grid.potential(p.0, p.1).unwrap());
            }
            for i in 0..vals.len() {
                for j in i + 1..vals.len() {
                    worst = worst.max((vals[i] - vals[j]).abs());
                }
            }
            count += 1;
        }
    }
    let simple = WalkSpec::bundled("z2-simple").unwrap();
    let exact_pts: Vec<(i64, i64)> = spread_points(&simple).into_iter().take(10).collect();
    let table = McCreaWhipple::with_size(40);
    let fourier = potential_fourier_many(&simple, &exact_pts, 128).unwrap();
    let exact_gap = exact_pts
        .iter()
        .zip(&fourier)
        .map(|(p, f)| (table.get(p.0, p.1).unwrap().to_f64() - f.to_f64()).abs())
        .fold(0.0, f64::max);
    outcome(
        ok && worst < 1e-6 && exact_gap < 1e-10,
        format!("{count} points, largest pairwise gap {worst:.1e}; Fourier vs exact at 10 points {exact_gap:.1e}"),
    )
}

fn criterion_8(fx: &Fixture) -> Outcome {
    let mut ok = true;
    for (walk, r) in &fx.resolved {
        let e = r.at_order(9);
        let rev = walk.is_reversible();
        ok &= check_klhalf(&e) && check_degree_bounds(&to_real_form(&e).unwrap(), rev) && check_parity(&e, rev);
    }
    let mut mutated = fx.get("z2-simple").1.at_order(9);
    mutated.insert_term(-1, -1, over_pi(&FieldElement::one(), 1, 1));
    let caught = !check_klhalf(&mutated);
    outcome(ok && caught, format!("checks pass on all three walks: {ok}; injected beta(-1,-1) rejected: {caught}"))
}

fn criterion_9() -> Outcome {
    let r = cmd_selftest_lemmas().unwrap();
    outcome(r.status == Status::Success, r.text.lines().map(str::trim).collect::<Vec<_>>().join("; "))
}

fn criterion_10(fx: &Fixture) -> Outcome {
    let mut ok = true;
    let mut shown = Vec::new();
    for (walk, r) in &fx.resolved {
        let report = verify_report(&fx.cfg, walk, r).unwrap();
        let slope: f64 = report.json["slope"].as_str().unwrap().parse().unwrap();
        ok &= slope <= -9.7 && report.json["precision_sufficient"] == true;
        shown.push(format!("{}: {slope:.3}", walk.name));
    }
    outcome(ok, format!("diagonal slopes over |z| in [20, 200]: {}", shown.join(", ")))
}

#[test]
fn acceptance_criteria() {
    let fx = Fixture::new();
    let (c3, c3_known) = criterion_3(&fx);
    let results = [
        criterion_1(),
        criterion_2(&fx),
        c3,
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(&fx),
        criterion_9(),
        criterion_10(&fx),
    ];
    let mut unexpected = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let n = i + 1;
        let note = if n == 3 && !r.pass && c3_known { " [known deviation: published signs]" } else { "" };
        println!("criterion {n:>2}: {}{note}  {}", if r.pass { "PASS" } else { "FAIL" }, r.detail);
        if !r.pass && !(n == 3 && c3_known) {
            unexpected.push(n);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
