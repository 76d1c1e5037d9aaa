//! `a(z) = sum_n P_n(0) - P_n(-z)` summed to `N`, plus a Gaussian tail, with
//! Richardson extrapolation over `N, 2N, 4N`.

use rug::{Complete, Float, Integer, Rational};

use super::clt::LatticeGaussian;
use super::OracleError;
use crate::exact_values::PotentialValue;
use crate::walk::WalkSpec;

#[derive(Clone, Debug)]
pub struct DirectSumOptions {
    /// First cutoff; defaults to `max(c |z|^2, 20000)`.
    pub n: Option<u64>,
    pub c: f64,
    /// Fail when the reported error exceeds this.
    pub tolerance: Option<f64>,
}

impl Default for DirectSumOptions {
    fn default() -> Self {
        DirectSumOptions { n: None, c: 20.0, tolerance: None }
    }
}

/// Walks with a closed form for `P_n` along a fixed point.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Family {
    Simple,
    Directed,
    /// Eight neighbours, summed as the walk that may also stay put.
    King,
}

fn family(walk: &WalkSpec) -> Option<Family> {
    let mut steps: Vec<((i64, i64), Rational)> = walk.steps.iter().map(|s| (s.coords, s.p.clone())).collect();
    steps.sort();
    let uniform = |k: i64| steps.iter().all(|(_, p)| *p == Rational::from((1, k)));
    let coords: Vec<(i64, i64)> = steps.iter().map(|s| s.0).collect();
    let mut simple = vec![(-1, 0), (0, -1), (0, 1), (1, 0)];
    simple.sort();
    let mut king: Vec<(i64, i64)> = (-1..=1).flat_map(|x| (-1..=1).map(move |y| (x, y))).filter(|&v| v != (0, 0)).collect();
    king.sort();
    let mut directed = vec![(-1, -1), (0, 1), (1, 0)];
    directed.sort();
    if coords == simple && uniform(4) {
        Some(Family::Simple)
    } else if coords == king && uniform(8) {
        Some(Family::King)
    } else if coords == directed && uniform(3) {
        Some(Family::Directed)
    } else {
        None
    }
}

pub(crate) fn is_simple_lattice_walk(walk: &WalkSpec) -> bool {
    family(walk) == Some(Family::Simple)
}

fn ln_factorial_ratio(n: u64, parts: &[u64]) -> f64 {
    // Exact multinomial; only used at the start of a recurrence.
    let mut m = Integer::factorial(n as u32).complete();
    for &k in parts {
        m /= Integer::factorial(k as u32).complete();
    }
    Float::with_val(128, &m).ln().to_f64()
}

/// `C(n, (n+u)/2) / 2^n` for `n < len`, zero where parity or range forbids.
fn binomial_walk(u: i64, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    let u = u.unsigned_abs();
    let mut ln = -(u as f64) * std::f64::consts::LN_2;
    let mut n = u;
    while (n as usize) < len {
        out[n as usize] = ln.exp();
        let k = (n + u) / 2;
        ln += (((n + 2) * (n + 1)) as f64 / (4.0 * ((k + 1) * (n - k + 1)) as f64)).ln();
        n += 2;
    }
    out
}

/// `P_n(z)` for the directed triangular walk in lattice coordinates.
fn directed_walk(z: (i64, i64), len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    let k0 = 0.max(-z.0).max(-z.1);
    let (mut i, mut j, mut k) = ((k0 + z.0) as u64, (k0 + z.1) as u64, k0 as u64);
    let mut n = i + j + k;
    if n as usize >= len {
        return out;
    }
    let mut ln = ln_factorial_ratio(n, &[i, j, k]) - n as f64 * 3f64.ln();
    while (n as usize) < len {
        out[n as usize] = ln.exp();
        let r = ((n + 1) * (n + 2)) as f64 * (n + 3) as f64 / (27.0 * ((i + 1) * (j + 1)) as f64 * (k + 1) as f64);
        ln += r.ln();
        (i, j, k, n) = (i + 1, j + 1, k + 1, n + 3);
    }
    out
}

/// `P(X_1 + ... + X_n = x)` for `X` uniform on `{-1, 0, 1}`, for each target.
fn trinomial_walk(targets: &[i64], len: usize) -> Vec<Vec<f64>> {
    let reach = targets.iter().map(|t| t.unsigned_abs() as usize).max().unwrap_or(0);
    let width = |n: usize| n.min(12 * ((2 * n) as f64 / 3.0).sqrt().ceil() as usize + reach + 2);
    let wmax = width(len);
    let centre = wmax + 1;
    let mut cur = vec![0.0; 2 * wmax + 3];
    let mut next = cur.clone();
    cur[centre] = 1.0;
    let mut out = vec![vec![0.0; len]; targets.len()];
    for n in 0..len {
        for (o, &t) in out.iter_mut().zip(targets) {
            if t.unsigned_abs() as usize <= n {
                o[n] = cur[(centre as i64 + t) as usize];
            }
        }
        let w = width(n + 1);
        for x in centre - w..=centre + w {
            next[x] = (cur[x - 1] + cur[x] + cur[x + 1]) / 3.0;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    out
}

/// `P_n(0) - P_n(w)` for `n < len`.
fn differences(fam: Family, w: (i64, i64), len: usize) -> Vec<f64> {
    match fam {
        Family::Simple => {
            let b0 = binomial_walk(0, len);
            let (bu, bv) = (binomial_walk(w.0 + w.1, len), binomial_walk(w.0 - w.1, len));
            (0..len).map(|n| b0[n] * b0[n] - bu[n] * bv[n]).collect()
        }
        Family::Directed => {
            let (p0, pw) = (directed_walk((0, 0), len), directed_walk(w, len));
            p0.iter().zip(&pw).map(|(a, b)| a - b).collect()
        }
        Family::King => {
            let t = trinomial_walk(&[0, w.0, w.1], len);
            (0..len).map(|n| t[0][n] * t[0][n] - t[1][n] * t[2][n]).collect()
        }
    }
}

fn digamma(x: f64) -> f64 {
    let x2 = 1.0 / (x * x);
    x.ln() - 0.5 / x - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 / 252.0))
}

/// `sum_{j>=0} (a + j)^-s` for large `a`.
fn hurwitz_tail(s: f64, a: f64) -> f64 {
    let b2k = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut acc = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in b2k.iter().enumerate() {
        acc += b / fact * rising * a.powf(-s - (2 * k + 1) as f64);
        let m = (2 * k + 1) as f64;
        rising *= (s + m) * (s + m + 1.0);
        fact *= (m + 2.0) * (m + 3.0);
    }
    acc
}

/// Gaussian estimate of `sum_{n>=N} P_n(0) - P_n(w)` for `N` a multiple of
/// the period.
fn tail(g: &LatticeGaussian, w: (i64, i64), big_n: u64) -> f64 {
    let q = g.period as f64;
    let c = g.residue(w) as f64;
    let nf = big_n as f64;
    let harmonic = if c == 0.0 { 0.0 } else { (digamma((nf + c) / q) - digamma(nf / q)) / q };
    // sum_{n = N + c (mod q)} (1 - e^{-B/n}) / n as a power series in B.
    let b = g.quadratic(w);
    let mut smooth = 0.0;
    let mut term = 1.0;
    for k in 1..40 {
        term *= -b / k as f64;
        let t = -term * hurwitz_tail((k + 1) as f64, (nf + c) / q) / q.powi(k as i32 + 1);
        smooth += t;
        if t.abs() < 1e-20 * smooth.abs() {
            break;
        }
    }
    g.tau_prime * (harmonic + smooth)
}

/// `a(z)` at lattice coordinates by summing the step distribution directly.
pub fn potential_direct_sum(walk: &WalkSpec, z: (i64, i64), opts: &DirectSumOptions) -> Result<PotentialValue, OracleError> {
    if z == (0, 0) {
        return Ok(PotentialValue::numeric(Float::with_val(53, 0), 0.0));
    }
    let fam = family(walk)
        .ok_or_else(|| OracleError::Unsupported(format!("{}: no closed form for P_n; use the Fourier oracle", walk.name)))?;
    let (g, scale) = match fam {
        Family::King => {
            let lazy: Vec<((i64, i64), f64)> =
                (-1..=1).flat_map(|x| (-1..=1).map(move |y| ((x, y), 1.0 / 9.0))).collect();
            (LatticeGaussian::from_steps(&lazy).expect("centred"), 8.0 / 9.0)
        }
        _ => (LatticeGaussian::new(walk)?, 1.0),
    };
    let (x, y) = crate::scalar::eval_complex(&walk.point(z.0, z.1), 53).to_f64();
    let r2 = x * x + y * y;
    let floor = (opts.c * r2).ceil() as u64;
    let n0 = match opts.n {
        Some(n) if n < floor => {
            return Err(OracleError::Invalid(format!("N = {n} is below {} |z|^2 = {floor}", opts.c)));
        }
        Some(n) => n,
        None => floor.max(20_000),
    };
    let q = g.period as u64;
    let n0 = n0.div_ceil(q) * q;
    let w = (-z.0, -z.1);
    let d = differences(fam, w, 4 * n0 as usize);
    let mut partial = 0.0;
    let mut abs = 0.0;
    let mut est = Vec::new();
    for (n, t) in d.iter().enumerate() {
        if n as u64 == n0 || n as u64 == 2 * n0 {
            est.push(partial + tail(&g, w, n as u64));
        }
        partial += t;
        abs += t.abs();
    }
    est.push(partial + tail(&g, w, 4 * n0));
    let r12 = 2.0 * est[1] - est[0];
    let r23 = 2.0 * est[2] - est[1];
    let value = (4.0 * r23 - r12) / 3.0;
    let rounding = 4.0 * n0 as f64 * f64::EPSILON * abs.max(1.0);
    let err = scale * ((value - r23).abs() + rounding);
    let value = scale * value;
    if let Some(tol) = opts.tolerance {
        if err > tol {
            return Err(OracleError::NoConvergence(err));
        }
    }
    Ok(PotentialValue::numeric(Float::with_val(64, value), err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_values::McCreaWhipple;
    use std::f64::consts::PI;

    #[test]
    fn simple_walk_diagonal_neighbour() {
        let w = WalkSpec::bundled("z2-simple").unwrap();
        let v = potential_direct_sum(&w, (1, 1), &DirectSumOptions::default()).unwrap();
        assert!((v.to_f64() - 4.0 / PI).abs() <= v.error_bound().max(1e-12), "{} {}", v.to_f64(), v.error_bound());
        assert!(v.error_bound() < 1e-9);
    }

    #[test]
    fn origin_is_zero() {
        for name in ["z2-simple", "z2-king", "tri-directed", "tri-six"] {
            let w = WalkSpec::bundled(name).unwrap();
            assert_eq!(potential_direct_sum(&w, (0, 0), &DirectSumOptions::default()).unwrap().to_f64(), 0.0);
        }
    }

    #[test]
    fn simple_walk_against_exact() {
        let w = WalkSpec::bundled("z2-simple").unwrap();
        let table = McCreaWhipple::with_size(20);
        for p in [(1, 0), (3, 2), (7, -5), (0, 12), (-20, 9)] {
            let v = potential_direct_sum(&w, p, &DirectSumOptions::default()).unwrap();
            let exact = table.get(p.0, p.1).unwrap().to_f64();
            let err = (v.to_f64() - exact).abs();
            assert!(err <= v.error_bound(), "{p:?}: {err:e} vs bound {:e}", v.error_bound());
        }
    }

    #[test]
    fn king_and_directed_agree_with_fourier() {
        let king = WalkSpec::bundled("z2-king").unwrap();
        let tri = WalkSpec::bundled("tri-directed").unwrap();
        for (w, p) in [(&king, (5, 0)), (&king, (3, -7)), (&tri, (1, 0)), (&tri, (-3, 5))] {
            let v = potential_direct_sum(w, p, &DirectSumOptions::default()).unwrap();
            let f = super::super::potential_fourier(w, p, 80).unwrap();
            let diff = (v.to_f64() - f.to_f64()).abs();
            assert!(diff < 1e-8 && diff <= v.error_bound(), "{} {p:?}: {diff:e}", w.name);
        }
    }

    #[test]
    fn cutoff_below_floor_is_rejected() {
        let w = WalkSpec::bundled("z2-simple").unwrap();
        let opts = DirectSumOptions { n: Some(100), ..Default::default() };
        assert!(matches!(potential_direct_sum(&w, (10, 0), &opts), Err(OracleError::Invalid(_))));
    }

    #[test]
    fn unsupported_walk_is_reported() {
        let w = WalkSpec::bundled("tri-six").unwrap();
        assert!(matches!(potential_direct_sum(&w, (1, 0), &DirectSumOptions::default()), Err(OracleError::Unsupported(_))));
    }
}
