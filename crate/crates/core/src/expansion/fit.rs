use std::f64::consts::PI;

use rug::ops::Pow;
use rug::Float;

use super::{coefficient_unit, Expansion, ExpansionError, Lambda, UnknownValue};
use crate::numeric::{self, least_squares, MpComplex};
use crate::scalar::{eval_field, rational_reconstruct, ExactComplex, PiGraded};
use crate::walk::WalkSpec;

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub radii: Vec<f64>,
    /// Ray angles in radians.
    pub rays: Vec<f64>,
    pub max_denominator: u64,
    pub prec: u32,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            radii: vec![40.0, 56.0, 80.0, 113.0, 160.0],
            rays: (0..16).map(|j| 2.0 * PI * j as f64 / 16.0).collect(),
            max_denominator: 10_000,
            prec: 192,
        }
    }
}

/// A lattice point near a requested radius and ray.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub coords: (i64, i64),
    pub z: MpComplex,
}

#[derive(Clone, Debug)]
pub struct FitReport {
    pub expansion: Expansion,
    /// Largest `|a - model|` over the fit points.
    pub residual: f64,
    /// Largest `|a - model|` over points not used in the fit.
    pub held_out: f64,
    /// Which unknowns ended up exact.
    pub reconstructed: Vec<bool>,
    pub condition: f64,
}

/// Angle reduced modulo the walk's rotations and reflection.
fn canonical_angle(walk: &WalkSpec, theta: f64) -> f64 {
    let period = 2.0 * PI / walk.rotational_symmetry_order() as f64;
    let t = theta.rem_euclid(period);
    match walk.reflection() {
        Some(zeta) => {
            let (re, im) = zeta.to_f64();
            let r = (im.atan2(re) - t).rem_euclid(period);
            let r = if (period - r) < 1e-12 { 0.0 } else { r };
            t.min(r)
        }
        None => t,
    }
}

/// Nearest lattice points to `r e^(i theta)`, with symmetry-equivalent
/// duplicates removed.
pub fn sample_points(walk: &WalkSpec, radii: &[f64], rays: &[f64], prec: u32) -> Vec<SamplePoint> {
    let (b1, b2) = (walk.basis[0].to_f64(), walk.basis[1].to_f64());
    let det = b1.0 * b2.1 - b1.1 * b2.0;
    let mut seen: Vec<(f64, f64)> = Vec::new();
    let mut out = Vec::new();
    for &r in radii {
        for &t in rays {
            let (x, y) = (r * t.cos(), r * t.sin());
            let n1 = ((x * b2.1 - y * b2.0) / det).round() as i64;
            let n2 = ((b1.0 * y - b1.1 * x) / det).round() as i64;
            let z = crate::scalar::eval_complex(&walk.point(n1, n2), prec);
            let (zx, zy) = z.to_f64();
            let key = (zx.hypot(zy), canonical_angle(walk, zy.atan2(zx)));
            if seen.iter().any(|s| (s.0 - key.0).abs() < 1e-9 && (s.1 - key.1).abs() < 1e-9) {
                continue;
            }
            seen.push(key);
            out.push(SamplePoint { coords: (n1, n2), z });
        }
    }
    out
}

struct Design {
    /// `a(z) - known part` per point.
    rhs: Vec<Float>,
    /// `phi_j(z)` for the free unknowns, per point.
    phi: Vec<Vec<Float>>,
}

fn design(e: &Expansion, pts: &[SamplePoint], vals: &[Float], free: &[usize], prec: u32) -> Result<Design, ExpansionError> {
    let mut rhs = Vec::with_capacity(pts.len());
    let mut phi = Vec::with_capacity(pts.len());
    for (p, v) in pts.iter().zip(vals) {
        let (base, parts) = e.evaluate_parts(&p.z, prec)?;
        let mut b = Float::with_val(prec, v - &base);
        for (j, val) in e.unknown_values().iter().enumerate() {
            if let Some(UnknownValue::Exact(c)) = val {
                b -= c.eval_re(prec) * &parts[j];
            }
        }
        rhs.push(b);
        phi.push(free.iter().map(|&j| parts[j].clone()).collect());
    }
    Ok(Design { rhs, phi })
}

struct Solved {
    lambda: (Float, f64),
    free: Vec<(Float, f64)>,
    condition: f64,
}

fn solve(e: &Expansion, d: &Design, free: &[usize], r0: f64, prec: u32) -> Result<Solved, ExpansionError> {
    let scales: Vec<Float> =
        free.iter().map(|&j| Float::with_val(prec, r0).pow(e.unknowns()[j].level)).collect();
    let rows: Vec<Vec<Float>> = d
        .phi
        .iter()
        .map(|row| {
            let mut r = vec![Float::with_val(prec, 1)];
            r.extend(row.iter().zip(&scales).map(|(p, s)| Float::with_val(prec, p * s)));
            r
        })
        .collect();
    let ls = least_squares(&rows, &d.rhs).ok_or_else(|| ExpansionError::Fit("design matrix is rank deficient".into()))?;
    let lambda = (ls.x[0].clone(), ls.std_err[0].to_f64());
    let free = (0..free.len())
        .map(|i| {
            let v = Float::with_val(prec, &ls.x[i + 1] * &scales[i]);
            let err = Float::with_val(prec, &ls.std_err[i + 1] * &scales[i]).to_f64();
            (v, err)
        })
        .collect();
    Ok(Solved { lambda, free, condition: ls.cond_estimate })
}

fn max_error(e: &Expansion, pts: &[SamplePoint], vals: &[Float], prec: u32) -> Result<f64, ExpansionError> {
    let mut worst = 0.0f64;
    for (p, v) in pts.iter().zip(vals) {
        let m = e.evaluate(&p.z, prec)?;
        worst = worst.max((m - v).abs().to_f64());
    }
    Ok(worst)
}

fn apply(e: &mut Expansion, free: &[usize], s: &Solved) {
    for (&j, (v, err)) in free.iter().zip(&s.free) {
        e.set_unknown(j, UnknownValue::Numeric { value: v.clone(), err: *err });
    }
    e.set_lambda(Lambda::Numeric { value: s.lambda.0.clone(), err: s.lambda.1 });
}

/// Least-squares fit of `lambda` and the unresolved harmonic unknowns to
/// oracle values, followed by rational reconstruction of each unknown in
/// units of `1/pi` or `sqrt(d)/pi` and a held-out check of the result.
///
/// `oracle` maps lattice coordinates to potential values.
pub fn fit_harmonic_numeric<F>(e: &Expansion, oracle: F, opts: &FitOptions) -> Result<FitReport, ExpansionError>
where
    F: Fn(&[(i64, i64)]) -> Result<Vec<Float>, String>,
{
    let prec = opts.prec;
    let walk = e.walk();
    let pts = sample_points(walk, &opts.radii, &opts.rays, prec);
    let mids: Vec<f64> = opts.radii.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
    let held = sample_points(walk, &mids, &opts.rays, prec);
    let free: Vec<usize> = (0..e.unknowns().len()).filter(|&j| e.unknown_values()[j].is_none()).collect();
    if pts.len() < free.len() + 2 {
        return Err(ExpansionError::Fit(format!("{} sample points for {} parameters", pts.len(), free.len() + 1)));
    }
    let coords: Vec<_> = pts.iter().map(|p| p.coords).collect();
    let vals = oracle(&coords).map_err(ExpansionError::Fit)?;
    let held_coords: Vec<_> = held.iter().map(|p| p.coords).collect();
    let held_vals = oracle(&held_coords).map_err(ExpansionError::Fit)?;
    let r0 = opts.radii.iter().cloned().fold(f64::INFINITY, f64::min);

    let d = design(e, &pts, &vals, &free, prec)?;
    let first = solve(e, &d, &free, r0, prec)?;
    let mut numeric_model = e.clone();
    apply(&mut numeric_model, &free, &first);
    let numeric_held = max_error(&numeric_model, &held, &held_vals, prec)?;

    // Reconstruct in level order. A candidate is kept only if the refit with
    // it fixed predicts the held-out points as well as the free fit does.
    let unit = coefficient_unit(walk)?;
    let unit_f = eval_field(&unit, prec);
    let pi = numeric::pi(prec);
    let floor = 2f64.powi(-(prec as i32) / 2);
    let mut exact = e.clone();
    let mut remaining = free.clone();
    let mut current = first;
    let mut best_held = numeric_held;
    for &j in &free {
        let pos = remaining.iter().position(|&i| i == j).expect("still free");
        let (v, err) = &current.free[pos];
        let x = Float::with_val(prec, v * &pi) / &unit_f;
        let x_err = err * PI / unit_f.to_f64();
        let Some(p) = rational_reconstruct(&x, opts.max_denominator) else { continue };
        if x_err * p.denom().to_f64() * opts.max_denominator as f64 > 0.1 {
            continue;
        }
        let mut trial = exact.clone();
        trial.set_unknown(j, UnknownValue::Exact(PiGraded::over_pi(ExactComplex::real(unit.scale(&p)))));
        let mut rest = remaining.clone();
        rest.remove(pos);
        let d = design(&trial, &pts, &vals, &rest, prec)?;
        let refit = solve(&trial, &d, &rest, r0, prec)?;
        let mut probe = trial.clone();
        apply(&mut probe, &rest, &refit);
        let held_err = max_error(&probe, &held, &held_vals, prec)?;
        if held_err > 2.0 * best_held + floor {
            continue;
        }
        best_held = best_held.max(held_err);
        exact = trial;
        remaining = rest;
        current = refit;
    }
    apply(&mut exact, &remaining, &current);
    let model = exact;
    let held_out = max_error(&model, &held, &held_vals, prec)?;
    let residual = max_error(&model, &pts, &vals, prec)?;
    let reconstructed = model.unknown_values().iter().map(|v| matches!(v, Some(UnknownValue::Exact(_)))).collect();
    Ok(FitReport { expansion: model, residual, held_out, reconstructed, condition: current.condition })
}
