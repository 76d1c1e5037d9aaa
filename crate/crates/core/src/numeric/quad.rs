use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut p0 = Float::with_val(p, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let t = Float::with_val(p, x * &p1) * (2 * k - 1);
        let p2 = (t - Float::with_val(p, &p0 * (k - 1))) / k;
        p0 = p1;
        p1 = p2;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = (Float::with_val(p, x * &p1) - &p0) * n as u32;
    let den = Float::with_val(p, x.square_ref()) - 1u32;
    (p1, num / den)
}

fn compute(n: usize, prec: u32) -> GaussRule {
    let wp = prec + 32;
    let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        for _ in 0..100 {
            let (pn, dp) = legendre(n, &x);
            let dx = pn / &dp;
            x -= &dx;
            if dx.abs() < tol {
                break;
            }
        }
        let (_, dp) = legendre(n, &x);
        // w = 2 / ((1 - x^2) P_n'(x)^2)
        let one_m = Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref());
        let w = Float::with_val(wp, 2) / (one_m * dp.square());
        nodes.push(Float::with_val(prec, &x));
        weights.push(Float::with_val(prec, &w));
    }
    GaussRule { nodes, weights }
}

/// Cached `n`-point rule at `prec` bits.
pub fn gauss_legendre(n: usize, prec: u32) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&(n, prec)) {
        return r.clone();
    }
    let rule = Arc::new(compute(n, prec));
    cache.lock().unwrap().insert((n, prec), rule.clone());
    rule
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn integrates_polynomials_exactly() {
        let r = gauss_legendre(12, 200);
        // x^22 over [-1,1] is 2/23.
        let mut s = Float::with_val(200, 0);
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            s += x.clone().pow(22u32) * w;
        }
        let err = s - Float::with_val(200, 2) / 23u32;
        assert!(err.abs() < Float::with_val(200, 1e-55));
    }

    #[test]
    fn weights_sum_to_two() {
        let r = gauss_legendre(31, 128);
        let s: Float = r.weights.iter().fold(Float::with_val(128, 0), |a, w| a + w);
        assert!((s - 2u32).abs() < 1e-35);
    }
}
