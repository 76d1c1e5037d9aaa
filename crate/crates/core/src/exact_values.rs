//! Exact values of the simple-walk potential on Z^2 and the asymptotics of
//! the odd harmonic sum that fixes its harmonic coefficients.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer, Rational};

use crate::numeric;
use crate::scalar::SymbolicConstant;

/// `n + q/pi` exactly, a float with an error bound, or both.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialValue {
    pub exact: Option<(Rational, Rational)>,
    pub numeric: Option<(Float, f64)>,
}

impl PotentialValue {
    pub fn exact(n: Rational, q: Rational) -> Self {
        PotentialValue { exact: Some((n, q)), numeric: None }
    }

    pub fn numeric(value: Float, err: f64) -> Self {
        PotentialValue { exact: None, numeric: Some((value, err)) }
    }

    /// Evaluates to `prec` correct bits; exact values are evaluated with
    /// enough guard bits to absorb the cancellation between `n` and `q/pi`.
    pub fn eval(&self, prec: u32) -> Float {
        if let Some((n, q)) = &self.exact {
            let size = n.numer().significant_bits().max(q.numer().significant_bits());
            let wp = prec + size + 32;
            let v = Float::with_val(wp, n) + Float::with_val(wp, q) / numeric::pi(wp);
            return Float::with_val(prec, v);
        }
        let (v, _) = self.numeric.as_ref().expect("value has a representation");
        Float::with_val(prec, v)
    }

    pub fn to_f64(&self) -> f64 {
        self.eval(64).to_f64()
    }

    pub fn error_bound(&self) -> f64 {
        match (&self.exact, &self.numeric) {
            (Some(_), _) => 0.0,
            (None, Some((_, e))) => *e,
            (None, None) => f64::INFINITY,
        }
    }

    /// `"n + (q)/pi"`.
    pub fn exact_text(&self) -> Option<String> {
        self.exact.as_ref().map(|(n, q)| format!("{n} + ({q})/pi"))
    }
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rational {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut b = table.lock().unwrap();
    while b.len() <= n as usize {
        let m = b.len() as u32;
        let mut s = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            s += numeric::binomial(m + 1, k as u32) * bk.clone();
        }
        b.push(-s / Rational::from(m + 1));
    }
    b[n as usize].clone()
}

/// `a(m + i m) = (4/pi) sum_{j=1}^m 1/(2j-1)`.
pub fn diagonal_value(m: u64) -> PotentialValue {
    PotentialValue::exact(Rational::new(), odd_harmonic_sum(m) * 4u32)
}

/// `sum_{j=1}^m 1/(2j-1)`.
pub fn odd_harmonic_sum(m: u64) -> Rational {
    let mut s = Rational::new();
    for j in 1..=m {
        s += Rational::from((1, 2 * j - 1));
    }
    s
}

/// `sum_{j<=m} 1/(2j-1) ~ log_coeff * ln m + (gamma_coeff * gamma + log2_coeff * ln 2) + sum_j c_j m^-j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSeries {
    pub log_coeff: Rational,
    pub gamma_coeff: Rational,
    pub log2_coeff: Rational,
    /// `j -> c_j` for `1 <= j <= J`, zeros included.
    pub inverse_powers: BTreeMap<u32, Rational>,
}

impl DiagonalSeries {
    /// The constant term times `factor / pi` as a symbolic constant.
    pub fn scaled_constant(&self, factor: &Rational) -> SymbolicConstant {
        SymbolicConstant::new(
            Rational::new(),
            Rational::from(&self.gamma_coeff * factor),
            Rational::from(&self.log2_coeff * factor),
        )
    }

    pub fn eval(&self, m: f64, prec: u32) -> Float {
        let lm = Float::with_val(prec, m).ln();
        let mut v = lm * numeric::from_rational(&self.log_coeff, prec)
            + numeric::euler_gamma(prec) * numeric::from_rational(&self.gamma_coeff, prec)
            + numeric::ln2(prec) * numeric::from_rational(&self.log2_coeff, prec);
        for (j, c) in &self.inverse_powers {
            v += numeric::from_rational(c, prec) / Float::with_val(prec, m).pow_u(*j);
        }
        v
    }
}

trait PowU {
    fn pow_u(self, e: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(self, e: u32) -> Float {
        use rug::ops::Pow;
        self.pow(e)
    }
}

/// Euler–Maclaurin expansion of the odd harmonic sum through `m^-J`, from
/// `H_2m - H_m / 2`.
pub fn odd_harmonic_asymptotics(j_max: u32) -> DiagonalSeries {
    let mut inverse_powers = BTreeMap::new();
    for j in 1..=j_max {
        let c = if j % 2 == 1 {
            Rational::new()
        } else {
            // B_2k/(2k) (1/2 - 2^-2k)
            let k2 = j;
            let pow = Rational::from((1, Integer::from(1) << k2));
            bernoulli(k2) / Rational::from(k2) * (Rational::from((1, 2)) - pow)
        };
        inverse_powers.insert(j, c);
    }
    DiagonalSeries {
        log_coeff: Rational::from((1, 2)),
        gamma_coeff: Rational::from((1, 2)),
        log2_coeff: Rational::from(1),
        inverse_powers,
    }
}

/// Exact simple-walk potential on the wedge `0 <= y <= x <= size`, filled by
/// the McCrea–Whipple sweep and queried with full 8-fold symmetry.
#[derive(Clone, Debug, Default)]
pub struct McCreaWhipple {
    /// `cols[x][y]` for `0 <= y <= x`, stored as `(n, q)`.
    cols: Vec<Vec<(Rational, Rational)>>,
}

fn sub(a: &(Rational, Rational), b: &(Rational, Rational)) -> (Rational, Rational) {
    (Rational::from(&a.0 - &b.0), Rational::from(&a.1 - &b.1))
}

impl McCreaWhipple {
    pub fn new() -> Self {
        McCreaWhipple { cols: Vec::new() }
    }

    /// Table filled through column `size`.
    pub fn with_size(size: usize) -> Self {
        let mut t = Self::new();
        t.fill(size);
        t
    }

    pub fn size(&self) -> usize {
        self.cols.len().saturating_sub(1)
    }

    fn at(&self, x: i64, y: i64) -> &(Rational, Rational) {
        let (x, y) = canonical(x, y);
        &self.cols[x as usize][y as usize]
    }

    /// Extends the sweep through column `size`.
    pub fn fill(&mut self, size: usize) {
        let zero = (Rational::new(), Rational::new());
        if self.cols.is_empty() {
            self.cols.push(vec![zero.clone()]);
        }
        let mut diag = odd_harmonic_sum(self.cols.len() as u64 - 1);
        while self.cols.len() <= size {
            let x = self.cols.len() as i64 - 1;
            let mut col = Vec::with_capacity(x as usize + 2);
            for y in 0..x {
                // Laplacian at (x, y) solved for a(x+1, y).
                let four = {
                    let v = self.at(x, y);
                    (Rational::from(&v.0 * 4u32), Rational::from(&v.1 * 4u32))
                };
                let mut v = sub(&four, self.at(x - 1, y));
                v = sub(&v, self.at(x, y + 1));
                v = sub(&v, self.at(x, y - 1));
                col.push(v);
            }
            if x == 0 {
                col.push((Rational::from(1), Rational::new()));
            } else {
                // Laplacian at (x, x) with the reflection a(x, x+1) = a(x+1, x).
                let v = self.at(x, x);
                let two = (Rational::from(&v.0 * 2u32), Rational::from(&v.1 * 2u32));
                col.push(sub(&two, self.at(x, x - 1)));
            }
            diag += Rational::from((1, 2 * (x + 1) - 1));
            col.push((Rational::new(), Rational::from(&diag * 4u32)));
            self.cols.push(col);
        }
    }

    /// Exact `a(x, y)`; the table must cover `max(|x|, |y|)`.
    pub fn get(&self, x: i64, y: i64) -> Option<PotentialValue> {
        let (cx, cy) = canonical(x, y);
        let col = self.cols.get(cx as usize)?;
        let (n, q) = col.get(cy as usize)?;
        Some(PotentialValue::exact(n.clone(), q.clone()))
    }
}

fn canonical(x: i64, y: i64) -> (i64, i64) {
    let (x, y) = (x.abs(), y.abs());
    if y > x {
        (y, x)
    } else {
        (x, y)
    }
}

/// Exact `a(x, y)` for the simple walk, filling a fresh table.
pub fn mccrea_whipple(x: i64, y: i64) -> PotentialValue {
    let (cx, _) = canonical(x, y);
    McCreaWhipple::with_size(cx as usize).get(x, y).expect("table covers the point")
}

/// `lambda` of the simple walk, `(2 gamma + 3 log 2) / pi`.
pub fn simple_walk_lambda() -> SymbolicConstant {
    SymbolicConstant::new(Rational::new(), Rational::from(2), Rational::from(3))
}

/// Largest `|z|^2 |a(z) - (2/pi) log|z| - lambda|` over lattice points with
/// `1 <= |z| <= r_max`.
#[derive(Clone, Debug)]
pub struct ConstantScan {
    /// Canonical representative `0 <= y <= x`.
    pub argmax: (i64, i64),
    pub value: f64,
    /// The same quantity with its sign, at the maximiser.
    pub signed: f64,
    pub points: usize,
}

pub fn error_constant_scan(table: &mut McCreaWhipple, r_max: f64) -> ConstantScan {
    let reach = r_max.floor() as i64;
    table.fill(reach.max(1) as usize);
    let prec = 64;
    let lambda = simple_walk_lambda().eval(prec);
    let two_over_pi = Float::with_val(prec, 2) / numeric::pi(prec);
    let pts: Vec<(i64, i64)> = (1..=reach)
        .flat_map(|x| (0..=x).map(move |y| (x, y)))
        .filter(|&(x, y)| ((x * x + y * y) as f64).sqrt() <= r_max)
        .collect();
    let mut best = ConstantScan { argmax: (0, 0), value: f64::NEG_INFINITY, signed: 0.0, points: pts.len() };
    for &(x, y) in &pts {
        let r2 = Float::with_val(prec, x * x + y * y);
        let a = table.get(x, y).expect("filled").eval(prec);
        let log_r = Float::with_val(prec, r2.ln_ref()) / 2u32;
        let rest = a - Float::with_val(prec, &two_over_pi * &log_r) - &lambda;
        let v = (rest * r2).to_f64();
        if v.abs() > best.value {
            best = ConstantScan { argmax: (x, y), value: v.abs(), signed: v, points: pts.len() };
        }
    }
    best
}
