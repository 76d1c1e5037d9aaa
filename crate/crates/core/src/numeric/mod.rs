//! Multiprecision helpers shared by the solver and the oracles: complex
//! arithmetic over MPFR floats, quadrature nodes, least squares and the
//! Euler–Maclaurin tail machinery.

mod cplx;
mod linalg;
mod quad;

pub use cplx::MpComplex;
pub use linalg::{least_squares, LeastSquares};
pub use quad::{gauss_legendre, GaussRule};

use rug::float::Constant;
use rug::{Float, Rational};

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn ln2(prec: u32) -> Float {
    Float::with_val(prec, Constant::Log2)
}

pub fn from_rational(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

pub fn sqrt_u(d: u32, prec: u32) -> Float {
    Float::with_val(prec, d).sqrt()
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::new();
    }
    Rational::from(rug::Integer::from(rug::Integer::binomial_u(n, k)))
}

/// `sum_{j>=0} (a + j)^-s` by Euler–Maclaurin; accurate when `a` is well
/// above `s / (2 pi)` and above about 100.
pub fn hurwitz_zeta(s: &Float, a: &Float) -> Float {
    let prec = s.prec().max(a.prec());
    let s1 = Float::with_val(prec, s - 1u32);
    let a_s = Float::with_val(prec, rug::ops::Pow::pow(a, s)).recip();
    let mut acc = Float::with_val(prec, a * &a_s) / &s1 + Float::with_val(prec, &a_s / 2u32);
    let a2 = Float::with_val(prec, a * a).recip();
    let eps = Float::with_val(prec, &acc >> prec).abs();
    // t = s (s+1) ... (s+2k-2) a^(-s-2k+1) / (2k)!
    let mut t = Float::with_val(prec, s * &a_s) / a / 2u32;
    for k in 1u32..200 {
        let term = Float::with_val(prec, &t * &crate::exact_values::bernoulli(2 * k));
        let small = term.cmp_abs(&eps) == Some(std::cmp::Ordering::Less);
        acc += term;
        if small {
            break;
        }
        t *= Float::with_val(prec, s + (2 * k - 1)) * Float::with_val(prec, s + 2 * k) * &a2;
        t /= (2 * k + 1) * (2 * k + 2);
    }
    acc
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
