use rug::Float;

use super::{Expansion, ExpansionError};
use crate::numeric::log_log_slope;
use crate::scalar::eval_complex;
use crate::walk::WalkSpec;

/// Lattice coordinates `(m, m)` with `|z|` closest to each radius.
pub fn diagonal_points(walk: &WalkSpec, radii: &[f64]) -> Vec<(i64, i64)> {
    let unit = {
        let (x, y) = eval_complex(&walk.point(1, 1), 53).to_f64();
        x.hypot(y)
    };
    let mut out: Vec<(i64, i64)> = radii
        .iter()
        .map(|r| {
            let m = (r / unit).round().max(1.0) as i64;
            (m, m)
        })
        .collect();
    out.dedup();
    out
}

/// `n` radii spaced geometrically over `[lo, hi]`.
pub fn geometric_radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1).max(1) as f64)).collect()
}

#[derive(Clone, Debug)]
pub struct RayDecay {
    /// `(|z|, |a(z) - expansion(z)|)` along the ray.
    pub errors: Vec<(f64, f64)>,
    pub slope: f64,
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub rays: Vec<RayDecay>,
    /// Slope of the largest error across rays at each radius.
    pub slope: f64,
    /// Largest `|z|^K` times the error.
    pub max_scaled: f64,
}

impl DecayReport {
    /// Whether the error falls off at least like `|z|^(-K + tol)`.
    pub fn passes(&self, order: u32, tol: f64) -> bool {
        self.slope <= -(order as f64) + tol
    }
}

/// Compares the expansion with reference values, ray by ray; every ray must
/// hold the same number of points, in increasing radius.
pub fn decay_report(
    e: &Expansion,
    rays: &[Vec<(i64, i64)>],
    values: &[Vec<Float>],
    prec: u32,
) -> Result<DecayReport, ExpansionError> {
    let mut out = Vec::with_capacity(rays.len());
    let mut max_scaled = 0.0f64;
    for (pts, vals) in rays.iter().zip(values) {
        let mut errors = Vec::with_capacity(pts.len());
        for (p, v) in pts.iter().zip(vals) {
            let z = eval_complex(&e.walk().point(p.0, p.1), prec);
            let (x, y) = z.to_f64();
            let r = x.hypot(y);
            let err = Float::with_val(prec, e.evaluate(&z, prec)? - v).abs().to_f64();
            max_scaled = max_scaled.max(err * r.powi(e.order() as i32));
            errors.push((r, err));
        }
        let (rs, es): (Vec<f64>, Vec<f64>) = errors.iter().cloned().unzip();
        out.push(RayDecay { slope: log_log_slope(&rs, &es), errors });
    }
    let n = out.iter().map(|r| r.errors.len()).min().unwrap_or(0);
    let rs: Vec<f64> = (0..n).map(|i| out.iter().map(|r| r.errors[i].0).sum::<f64>() / out.len() as f64).collect();
    let env: Vec<f64> = (0..n).map(|i| out.iter().map(|r| r.errors[i].1).fold(0.0, f64::max)).collect();
    Ok(DecayReport { slope: log_log_slope(&rs, &env), rays: out, max_scaled })
}
