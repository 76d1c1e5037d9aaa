//! `a(n) = (2 pi)^-2 int (1 - e^{i<theta, n>}) / (1 - phi(theta)) d theta`
//! over `[-pi, pi]^2` in lattice coordinates.
//!
//! With `w = e^{i theta_2}`, the inner integral is a contour integral whose
//! only pole inside the unit circle is the small root of
//! `A w^2 + (B - 1) w + C`, where `A, B, C` collect the steps moving `+1, 0,
//! -1` along the inner axis. The outer integrand is analytic on `[0, pi]`
//! with a removable singularity at `0`, so composite Gauss–Legendre
//! converges geometrically.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::{Float, Rational};

use super::OracleError;
use crate::exact_values::PotentialValue;
use crate::numeric::{self, gauss_legendre, MpComplex};
use crate::walk::WalkSpec;

const HIGH: usize = 32;
const LOW: usize = 20;

/// The walk split along the inner axis.
struct Split {
    /// `(outer step, probability)` for inner steps `+1`, `0`, `-1`.
    rows: [Vec<(i64, Rational)>; 3],
    /// Whether lattice coordinates are swapped to make axis 2 the inner one.
    swapped: bool,
}

fn split(walk: &WalkSpec) -> Result<Split, OracleError> {
    for swapped in [false, true] {
        let mut rows: [Vec<(i64, Rational)>; 3] = Default::default();
        let mut ok = true;
        for s in &walk.steps {
            let (outer, inner) = if swapped { (s.coords.1, s.coords.0) } else { s.coords };
            match inner {
                1 => rows[0].push((outer, s.p.clone())),
                0 => rows[1].push((outer, s.p.clone())),
                -1 => rows[2].push((outer, s.p.clone())),
                _ => ok = false,
            }
        }
        if ok && !rows[0].is_empty() && !rows[2].is_empty() {
            return Ok(Split { rows, swapped });
        }
    }
    Err(OracleError::Unsupported(format!("{}: no lattice axis with steps in {{-1, 0, 1}}", walk.name)))
}

/// Per-node data shared by all points.
struct Node {
    theta: Float,
    weight: Float,
    /// Pole inside the unit circle for `n2 >= 0` and for `n2 < 0`.
    root_pos: MpComplex,
    root_neg: MpComplex,
    /// `1 / P'(root)`, the same for both.
    inv_dp: MpComplex,
}

fn row_sum(row: &[(i64, Rational)], e: &MpComplex, einv: &MpComplex, prec: u32) -> MpComplex {
    let mut acc = MpComplex::zero(prec);
    for (c, p) in row {
        let f = if *c >= 0 { e.powu(*c as u64) } else { einv.powu((-c) as u64) };
        acc = &acc + &f.scale(&Float::with_val(prec, p));
    }
    acc
}

fn node(sp: &Split, theta: Float, weight: Float, prec: u32) -> Node {
    let e = MpComplex::cis(&theta);
    let einv = e.conj();
    let a = row_sum(&sp.rows[0], &e, &einv, prec);
    let b = &row_sum(&sp.rows[1], &e, &einv, prec) - &MpComplex::real(Float::with_val(prec, 1));
    let c = row_sum(&sp.rows[2], &e, &einv, prec);
    let ac4 = (&a * &c).scale(&Float::with_val(prec, 4));
    let mut s = (&(&b * &b) - &ac4).sqrt();
    if (&b + &s).norm_sqr() < (&b - &s).norm_sqr() {
        s = -&s;
    }
    // q = -(b + S)/2; roots q/A, C/q with P'(C/q) = S, P'(q/A) = -S.
    let q = (&b + &s).scale(&Float::with_val(prec, -0.5));
    let r_c = c.div(&q);
    let r_a = q.div(&a);
    let (root_pos, root_neg, dp) = if r_c.norm_sqr() < r_a.norm_sqr() {
        (r_c, a.div(&q), s)
    } else {
        (r_a, q.div(&c), -&s)
    };
    Node { theta, weight, root_pos, root_neg, inv_dp: dp.recip() }
}

fn nodes(sp: &Split, panels: usize, order: usize, prec: u32) -> Vec<Node> {
    let rule = gauss_legendre(order, prec);
    let pi = numeric::pi(prec);
    let h = Float::with_val(prec, &pi / panels as u32);
    let mut out = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let mid = Float::with_val(prec, &h * k as u32) + Float::with_val(prec, &h / 2u32);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = Float::with_val(prec, &mid + Float::with_val(prec, x * &h) / 2u32);
            out.push((t, Float::with_val(prec, w * &h) / 2u32));
        }
    }
    out.into_par_iter().map(|(t, w)| node(sp, t, w, prec)).collect()
}

/// `(1/pi) Re int_0^pi (e^{i theta n1} r^|n2| - 1) / P'(r) d theta`.
fn integrate(nodes: &[Node], n1: i64, n2: i64, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    let one = MpComplex::real(Float::with_val(prec, 1));
    for nd in nodes {
        let r = if n2 >= 0 { nd.root_pos.powu(n2 as u64) } else { nd.root_neg.powu((-n2) as u64) };
        let phase = MpComplex::cis(&Float::with_val(prec, &nd.theta * n1));
        let t = &(&(&phase * &r) - &one) * &nd.inv_dp;
        acc += Float::with_val(prec, &t.re * &nd.weight);
    }
    acc / numeric::pi(prec)
}

fn panel_count(n1: i64, n2: i64) -> usize {
    let reach = n1.abs().max(n2.abs()).max(1) as f64;
    let h = (0.25f64).min(1.5 / reach);
    (std::f64::consts::PI / h).ceil() as usize
}

/// Largest accepted error relative to the requested precision, in bits.
const SLACK_BITS: u32 = 8;

/// `a` at lattice coordinates, each to about `prec` bits.
pub fn potential_fourier_many(walk: &WalkSpec, pts: &[(i64, i64)], prec: u32) -> Result<Vec<PotentialValue>, OracleError> {
    if walk.lattice_index() != 1 {
        return Err(OracleError::Unsupported(format!("{}: steps generate a proper sublattice", walk.name)));
    }
    let sp = split(walk)?;
    let wp = prec + 64;
    let tol = 2f64.powi(-((prec - SLACK_BITS) as i32));
    let mut out: Vec<Option<PotentialValue>> = vec![None; pts.len()];
    let mut pending: Vec<usize> = (0..pts.len()).collect();
    let mut refine = 1usize;
    while !pending.is_empty() {
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for &i in &pending {
            let (n1, n2) = pts[i];
            if (n1, n2) == (0, 0) {
                out[i] = Some(PotentialValue::numeric(Float::with_val(prec, 0), 0.0));
                continue;
            }
            groups.entry(panel_count(n1, n2) * refine).or_default().push(i);
        }
        let mut failed = Vec::new();
        for (panels, idx) in groups {
            let hi = nodes(&sp, panels, HIGH, wp);
            let lo = nodes(&sp, panels, LOW, wp);
            let vals: Vec<(usize, Float, f64)> = idx
                .par_iter()
                .map(|&i| {
                    let (n1, n2) = if sp.swapped { (pts[i].1, pts[i].0) } else { pts[i] };
                    let a = integrate(&hi, n1, n2, wp);
                    let b = integrate(&lo, n1, n2, wp);
                    let err = Float::with_val(wp, &a - &b).abs().to_f64();
                    (i, a, err)
                })
                .collect();
            for (i, a, err) in vals {
                if err <= tol || refine >= 4 {
                    out[i] = Some(PotentialValue::numeric(Float::with_val(prec, &a), err.max(tol / 256.0)));
                } else {
                    failed.push(i);
                }
            }
        }
        pending = failed;
        refine *= 2;
    }
    let out: Vec<PotentialValue> = out.into_iter().map(|v| v.expect("every point evaluated")).collect();
    if let Some(v) = out.iter().find(|v| v.error_bound() > tol) {
        return Err(OracleError::NoConvergence(v.error_bound()));
    }
    Ok(out)
}

pub fn potential_fourier(walk: &WalkSpec, z: (i64, i64), prec: u32) -> Result<PotentialValue, OracleError> {
    Ok(potential_fourier_many(walk, &[z], prec)?.remove(0))
}
