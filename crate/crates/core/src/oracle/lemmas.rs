//! Desk-scale checks of the estimates the direct approach rests on.

use rug::{Complete, Float, Integer, Rational};

use super::OracleError;
use crate::numeric::{self, hurwitz_zeta};

const PREC: u32 = 256;

/// A direct evaluation next to its closed-form leading behaviour.
#[derive(Clone, Debug)]
pub struct Comparison<T> {
    pub direct: T,
    pub asymptotic: T,
}

impl Comparison<Float> {
    pub fn gap(&self) -> f64 {
        Float::with_val(PREC, &self.direct - &self.asymptotic).abs().to_f64()
    }
}

impl Comparison<f64> {
    pub fn relative_gap(&self) -> f64 {
        (self.direct / self.asymptotic - 1.0).abs()
    }
}

/// `sum_{n >= 1, n = j (mod q)} n^-s e^{-r/n}` against `Gamma(s-1) / (q r^(s-1))`.
///
/// For `s = 1` the summand is `(e^{-r/n} - 1) / n` and the comparison is
/// `-(log r)/q + (psi(j/q) + log q - gamma)/q`.
pub fn f_sum(s: f64, j: i64, q: u64, r: f64) -> Result<Comparison<Float>, OracleError> {
    if s < 1.0 || q == 0 || r <= 0.0 {
        return Err(OracleError::Invalid(format!("need s >= 1, q >= 1, r > 0; got s={s}, q={q}, r={r}")));
    }
    let qi = q as i64;
    let j0 = (j - 1).rem_euclid(qi) + 1;
    let log_variant = s == 1.0;
    let sf = Float::with_val(PREC, s);
    let rf = Float::with_val(PREC, r);

    // Below the cut sum directly; above it expand e^{-r/n} in r/n.
    let cut = ((8.0 * r).max(512.0) as i64 / qi + 1) * qi + j0;
    let mut direct = Float::with_val(PREC, 0);
    let mut n = j0;
    while n < cut {
        let nf = Float::with_val(PREC, n);
        let e = Float::with_val(PREC, &rf / &nf).exp().recip();
        if log_variant {
            direct += (e - 1u32) / nf;
        } else {
            direct += e / Float::with_val(PREC, rug::ops::Pow::pow(&nf, &sf));
        }
        n += qi;
    }
    let qf = Float::with_val(PREC, q);
    let a = Float::with_val(PREC, cut) / &qf;
    let eps = Float::with_val(PREC, 1) >> PREC;
    let mut coeff = Float::with_val(PREC, 1);
    for k in 0u32..400 {
        if k > 0 {
            coeff *= &rf;
            coeff = -coeff;
            coeff /= k;
        }
        if log_variant && k == 0 {
            continue;
        }
        let sigma = Float::with_val(PREC, &sf + k);
        let qs = Float::with_val(PREC, rug::ops::Pow::pow(&qf, &sigma));
        let term = Float::with_val(PREC, &coeff * hurwitz_zeta(&sigma, &a)) / qs;
        let small = term.cmp_abs(&eps) == Some(std::cmp::Ordering::Less);
        direct += term;
        if small {
            break;
        }
    }

    let asymptotic = if log_variant {
        let psi = Float::with_val(PREC, Float::with_val(PREC, j0) / &qf).digamma();
        (psi + Float::with_val(PREC, q).ln() - numeric::euler_gamma(PREC) - rf.ln()) / &qf
    } else {
        let g = Float::with_val(PREC, s - 1.0).gamma();
        g / (qf * Float::with_val(PREC, rug::ops::Pow::pow(&rf, s - 1.0)))
    };
    Ok(Comparison { direct, asymptotic })
}

/// The multinomial probability of counts `p_i n + w_i` against its Gaussian
/// approximation `exp(-sum w_i^2 / (2 p_i n)) / ((2 pi n)^((k-1)/2) sqrt(prod p_i))`.
pub fn multinomial_clt_check(p: &[Rational], n: u64, w: &[Rational]) -> Result<Comparison<f64>, OracleError> {
    if p.len() != w.len() || p.is_empty() {
        return Err(OracleError::Invalid("p and w must have the same nonzero length".into()));
    }
    if p.iter().sum::<Rational>() != 1 || p.iter().any(|x| *x <= 0) {
        return Err(OracleError::Invalid("p must be a positive probability vector".into()));
    }
    if w.iter().sum::<Rational>() != 0 {
        return Err(OracleError::Invalid("offsets must sum to zero".into()));
    }
    let mut counts = Vec::with_capacity(p.len());
    for (pi, wi) in p.iter().zip(w) {
        let c = Rational::from(pi * n) + wi;
        if *c.denom() != 1 || c < 0 {
            return Err(OracleError::Invalid(format!("count {c} is not a nonnegative integer")));
        }
        counts.push(c.numer().to_u32().ok_or_else(|| OracleError::Invalid("count too large".into()))?);
    }
    let mut exact = Rational::from(Integer::factorial(n as u32).complete());
    for (pi, &c) in p.iter().zip(&counts) {
        exact /= Integer::factorial(c).complete();
        exact *= rug::ops::Pow::pow(pi.clone(), c);
    }
    let nf = n as f64;
    let k = p.len() as f64;
    let prod: f64 = p.iter().map(|x| x.to_f64()).product();
    let expo: f64 = p.iter().zip(w).map(|(pi, wi)| wi.to_f64().powi(2) / (2.0 * pi.to_f64() * nf)).sum();
    let clt = (-expo).exp() / ((2.0 * std::f64::consts::PI * nf).powf((k - 1.0) / 2.0) * prod.sqrt());
    Ok(Comparison { direct: Float::with_val(PREC, &exact).to_f64(), asymptotic: clt })
}

/// `sum_{z in Z^2} exp(-|A(z + v)|^2 / n)` against `pi n / |det A|`.
pub fn theta_sum_check(a: [[f64; 2]; 2], v: [f64; 2], n: f64) -> Result<Comparison<f64>, OracleError> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det == 0.0 || n <= 0.0 {
        return Err(OracleError::Invalid("A must be invertible and n positive".into()));
    }
    // Smallest singular value of A.
    let g = [
        a[0][0] * a[0][0] + a[1][0] * a[1][0],
        a[0][0] * a[0][1] + a[1][0] * a[1][1],
        a[0][1] * a[0][1] + a[1][1] * a[1][1],
    ];
    let tr = g[0] + g[2];
    let disc = ((g[0] - g[2]).powi(2) + 4.0 * g[1] * g[1]).sqrt();
    let sigma_min = ((tr - disc) / 2.0).max(det * det / tr).sqrt();
    let radius = ((41.0 * n).sqrt() / sigma_min + v[0].hypot(v[1]) + 2.0).ceil() as i64;
    let mut sum = 0.0;
    for x in -radius..=radius {
        for y in -radius..=radius {
            let (px, py) = (x as f64 + v[0], y as f64 + v[1]);
            let (ax, ay) = (a[0][0] * px + a[0][1] * py, a[1][0] * px + a[1][1] * py);
            sum += (-(ax * ax + ay * ay) / n).exp();
        }
    }
    Ok(Comparison { direct: sum, asymptotic: std::f64::consts::PI * n / det.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn f_sum_leading_terms() {
        let c = f_sum(2.0, 1, 1, 100.0).unwrap();
        assert!((c.asymptotic.to_f64() - 0.01).abs() < 1e-18);
        assert!(c.gap() < 1e-8, "{}", c.gap());
        let c = f_sum(2.0, 1, 2, 100.0).unwrap();
        assert!((c.asymptotic.to_f64() - 0.005).abs() < 1e-18);
        assert!(c.gap() < 1e-8, "{}", c.gap());
    }

    #[test]
    fn f_sum_log_variant_settles() {
        let vals: Vec<f64> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&r| {
                let c = f_sum(1.0, 1, 1, r).unwrap();
                c.direct.to_f64() + r.ln()
            })
            .collect();
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-6);
        }
        let gamma = 0.577_215_664_901_532_9;
        assert!((vals[0] + 2.0 * gamma).abs() < 1e-10);
        assert!(f_sum(1.0, 2, 3, 1e3).unwrap().gap() < 1e-10);
    }

    #[test]
    fn f_sum_gap_is_superpolynomial() {
        for s in [1.5, 2.0, 3.0] {
            let scaled: Vec<f64> = [50.0, 100.0, 200.0, 400.0]
                .iter()
                .map(|&r: &f64| f_sum(s, 1, 1, r).unwrap().gap() * r.powi(5))
                .collect();
            assert!(scaled.windows(2).all(|w| w[1] < w[0]), "s={s}: {scaled:?}");
            assert!(scaled[3] < 1e-6, "s={s}: {scaled:?}");
        }
    }

    #[test]
    fn f_sum_rejects_bad_input() {
        assert!(f_sum(0.5, 1, 1, 10.0).is_err());
        assert!(f_sum(2.0, 1, 0, 10.0).is_err());
    }

    #[test]
    fn binomial_and_quadrinomial() {
        let half = Rational::from((1, 2));
        let c = multinomial_clt_check(&[half.clone(), half], 1000, &[Rational::new(), Rational::new()]).unwrap();
        assert!((c.asymptotic - (2.0 / (PI * 1000.0)).sqrt()).abs() < 1e-15);
        assert!(c.relative_gap() < 1e-3, "{}", c.relative_gap());
        let q = Rational::from((1, 4));
        let w: Vec<Rational> = [10, -10, 0, 0].iter().map(|&x| Rational::from(x)).collect();
        let c = multinomial_clt_check(&[q.clone(), q.clone(), q.clone(), q], 400, &w).unwrap();
        assert!(c.relative_gap() < 1e-2, "{}", c.relative_gap());
    }

    #[test]
    fn multinomial_rejects_unbalanced_offsets() {
        let half = Rational::from((1, 2));
        let w = [Rational::from(1), Rational::from(0)];
        assert!(multinomial_clt_check(&[half.clone(), half], 10, &w).is_err());
    }

    #[test]
    fn theta_sums() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        let c = theta_sum_check(id, [0.0, 0.0], 100.0).unwrap();
        assert!(c.relative_gap() < 1e-10);
        let shifted = theta_sum_check(id, [0.3, -0.7], 100.0).unwrap();
        assert!((shifted.direct - c.direct).abs() < 1e-10);
        let ratio = theta_sum_check(id, [0.0, 0.0], 4.0).unwrap().direct / theta_sum_check(id, [0.0, 0.0], 1.0).unwrap().direct;
        assert!((ratio - 4.0).abs() < 1e-3, "{ratio}");
        let skew = theta_sum_check([[2.0, 1.0], [0.5, 1.5]], [0.1, 0.2], 50.0).unwrap();
        assert!(skew.relative_gap() < 1e-10);
    }
}
