use hpot::expansion::{
    fit_harmonic_numeric, fix_harmonic_exact_z2, solve_expansion, to_real_form, Coefficient, FitOptions, FitReport,
    Lambda, UnknownValue,
};
use hpot::oracle::potential_fourier_many;
use hpot::scalar::{ExactComplex, FieldElement, PiGraded};
use hpot::walk::WalkSpec;
use rug::{Float, Rational};

/// Order used while fitting; the reported table is truncated afterwards.
const FIT_ORDER: u32 = 22;

fn fourier(walk: &WalkSpec, prec: u32) -> impl Fn(&[(i64, i64)]) -> Result<Vec<Float>, String> + '_ {
    move |pts| {
        let vals = potential_fourier_many(walk, pts, prec).map_err(|e| e.to_string())?;
        Ok(vals.iter().map(|v| v.eval(prec)).collect())
    }
}

fn fit(name: &str) -> FitReport {
    let w = WalkSpec::bundled(name).unwrap();
    let e = solve_expansion(&w, FIT_ORDER).unwrap();
    let opts = FitOptions::default();
    fit_harmonic_numeric(&e, fourier(&w, opts.prec), &opts).unwrap()
}

fn over_pi(n: i64, d: i64, unit: &FieldElement) -> PiGraded {
    PiGraded::over_pi(ExactComplex::real(unit.scale(&Rational::from((n, d)))))
}

fn assert_table(rep: &FitReport, order: u32, unit: &FieldElement, want: &[(u32, u32, i64, i64)]) {
    let tab = to_real_form(&rep.expansion.truncated(order)).unwrap();
    let got: Vec<_> = tab
        .entries
        .iter()
        .map(|t| (t.power, t.exponent, t.coeff.as_exact().expect("exact entry").clone()))
        .collect();
    let want: Vec<_> = want.iter().map(|&(p, x, n, d)| (p, x, over_pi(n, d, unit))).collect();
    assert_eq!(got, want);
}

#[test]
fn king_table_from_numeric_fit() {
    let rep = fit("z2-king");
    assert!(rep.residual < 1e-10, "{}", rep.residual);
    assert!(rep.held_out < 1e-10, "{}", rep.held_out);
    assert!(rep.reconstructed[0] && rep.reconstructed[1]);
    let one = FieldElement::one();
    assert_table(
        &rep,
        8,
        &one,
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
    let Lambda::Numeric { value, err } = rep.expansion.lambda() else { panic!("lambda should be numeric") };
    assert!(*err < 1e-20);
    assert!((value.to_f64() - 0.919_381_905_480_420_3).abs() < 1e-15);
}

#[test]
fn triangular_table_from_numeric_fit() {
    let rep = fit("tri-directed");
    assert!(rep.residual < 1e-10, "{}", rep.residual);
    assert!(rep.reconstructed[0] && rep.reconstructed[1]);
    let s3 = FieldElement::sqrt_of(3);
    assert_table(
        &rep,
        6,
        &s3,
        &[
            (3, 4, 1, 6),
            (6, 8, -1, 12),
            (3, 6, 1, 18),
            (9, 12, 5, 54),
            (6, 10, -17, 135),
            (12, 16, -35, 216),
            (9, 14, 19, 54),
            (15, 20, 7, 18),
            (6, 12, -85, 1134),
            (12, 18, -98, 81),
            (18, 24, -385, 324),
        ],
    );
}

#[test]
fn simple_walk_fit_agrees_with_exact_fix() {
    let rep = fit("z2-simple");
    let exact = fix_harmonic_exact_z2(&solve_expansion(&WalkSpec::bundled("z2-simple").unwrap(), 8).unwrap()).unwrap();
    for j in 0..2 {
        let Some(UnknownValue::Exact(got)) = &rep.expansion.unknown_values()[j] else { panic!("unknown {j} not exact") };
        let Some(UnknownValue::Exact(want)) = &exact.unknown_values()[j] else { unreachable!() };
        assert_eq!(got, want);
    }
    let Lambda::Numeric { value, .. } = rep.expansion.lambda() else { panic!("lambda should be numeric") };
    let want = exact.lambda().eval(128).unwrap();
    assert!((Float::with_val(128, value - &want)).abs().to_f64() < 1e-22);
    for (k, l) in [(0, -4), (2, -6), (0, -8)] {
        let (Coefficient::Exact(a), Coefficient::Exact(b)) =
            (rep.expansion.truncated(8).coefficient(k, l), exact.coefficient(k, l))
        else {
            panic!("({k},{l}) not exact")
        };
        assert_eq!(a, b);
    }
}
