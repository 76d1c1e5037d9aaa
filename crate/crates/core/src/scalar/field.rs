use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::{Integer, Rational};

use super::ScalarError;

/// An element `a + b*sqrt(d)` of a real quadratic field, or of Q when `b == 0`.
///
/// Rational elements are stored with `d == 0` so they combine with elements of
/// any field. Irrational elements carry a square-free `d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    a: Rational,
    b: Rational,
    d: u32,
}

/// Splits `d` into `s^2 * f` with `f` square-free.
fn square_free_part(d: u32) -> (u32, u32) {
    let mut s = 1u32;
    let mut f = d;
    let mut p = 2u32;
    while p * p <= f {
        while f % (p * p) == 0 {
            f /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, f)
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational, d: u32) -> Self {
        let (s, f) = square_free_part(d);
        let b = b * Integer::from(s);
        match f {
            0 => Self::rational(a),
            1 => Self::rational(a + b),
            _ if b == 0 => Self::rational(a),
            _ => FieldElement { a, b, d: f },
        }
    }

    pub fn rational(a: Rational) -> Self {
        FieldElement { a, b: Rational::new(), d: 0 }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::new())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    pub fn from_frac(n: i64, m: i64) -> Self {
        Self::rational(Rational::from((n, m)))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: u32) -> Self {
        Self::new(Rational::new(), Rational::from(1), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// The radicand, 0 for rational elements.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    fn common_d(&self, other: &Self) -> Result<u32, ScalarError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(ScalarError::FieldMismatch(x, y)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.common_d(other)?;
        Ok(Self::new(
            Rational::from(&self.a + &other.a),
            Rational::from(&self.b + &other.b),
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        let d = self.common_d(other)?;
        let bd = Rational::from(&self.b * &other.b) * Integer::from(d);
        let a = Rational::from(&self.a * &other.a) + bd;
        let b = Rational::from(&self.a * &other.b) + Rational::from(&self.b * &other.a);
        Ok(Self::new(a, b, d))
    }

    /// `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        FieldElement { a: self.a.clone(), b: Rational::from(-&self.b), d: self.d }
    }

    /// `a^2 - d*b^2`, always rational.
    pub fn norm(&self) -> Rational {
        let aa = Rational::from(&self.a * &self.a);
        let bb = Rational::from(&self.b * &self.b) * Integer::from(self.d);
        aa - bb
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        let n = self.norm();
        if n == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        let inv = n.recip();
        Ok(Self::new(
            Rational::from(&self.a * &inv),
            Rational::from(-&self.b) * inv,
            self.d,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(Rational::from(&self.a * r), Rational::from(&self.b * r), self.d)
    }

    /// Exact sign. Uses the norm to decide when the two parts disagree.
    pub fn signum(&self) -> i32 {
        let sa = self.a.cmp0() as i32;
        let sb = self.b.cmp0() as i32;
        if sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        if sa == 0 {
            return sb;
        }
        // a and b*sqrt(d) have opposite signs: the larger magnitude wins.
        let aa = Rational::from(&self.a * &self.a);
        let bb = Rational::from(&self.b * &self.b) * Integer::from(self.d);
        match aa.cmp(&bb) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Exact square root when it lies in Q or in Q(sqrt(d')) as a rational
    /// multiple of a single surd.
    pub fn sqrt_exact(&self) -> Option<Self> {
        let r = self.as_rational()?;
        if *r < 0 {
            return None;
        }
        if *r == 0 {
            return Some(Self::zero());
        }
        let (num, den) = (r.numer().clone(), r.denom().clone());
        // sqrt(n/m) = sqrt(n*m)/m
        let nm = num * &den;
        let (s, rem) = nm.clone().sqrt_rem(Integer::new());
        if rem == 0 {
            return Some(Self::rational(Rational::from((s, den))));
        }
        let nm32 = nm.to_u32()?;
        let (sq, f) = square_free_part(nm32);
        Some(Self::new(Rational::new(), Rational::from((sq, den)), f))
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * f64::from(self.d).sqrt()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: Rational::from(-&self.a), b: Rational::from(-&self.b), d: self.d }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            return write!(f, "{}", self.a);
        }
        if self.a != 0 {
            write!(f, "{}", self.a)?;
            if self.b > 0 {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*s", self.b)
    }
}

fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    t.parse::<Rational>().map_err(|_| ScalarError::Parse(s.to_string()))
}

impl FieldElement {
    /// Parses `"a/b"`, `"a/b+c/e*s"`, `"s"`, `"-1/2*s"` and the like. `s`
    /// stands for `sqrt(d)`.
    pub fn parse_with(s: &str, d: u32) -> Result<Self, ScalarError> {
        let bad = || ScalarError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        // Split into signed summands at '+'/'-' that are not leading and not
        // part of an exponent-free rational (rationals have no inner signs).
        let mut parts = Vec::new();
        let mut start = 0;
        for (i, c) in t.char_indices() {
            if i > 0 && (c == '+' || c == '-') {
                parts.push(&t[start..i]);
                start = i;
            }
        }
        parts.push(&t[start..]);
        let mut a = Rational::new();
        let mut b = Rational::new();
        for p in parts {
            let (sign, body) = match p.as_bytes()[0] {
                b'-' => (-1, &p[1..]),
                b'+' => (1, &p[1..]),
                _ => (1, p),
            };
            if body.is_empty() {
                return Err(bad());
            }
            if let Some(coef) = body.strip_suffix('s') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() { Rational::from(1) } else { parse_rational(coef)? };
                if d == 0 {
                    return Err(ScalarError::MissingRadicand(s.to_string()));
                }
                b += c * sign;
            } else {
                a += parse_rational(body)? * sign;
            }
        }
        Ok(Self::new(a, b, d))
    }
}

impl FromStr for FieldElement {
    type Err = ScalarError;
    /// Parses a rational element; use [`FieldElement::parse_with`] for surds.
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        Self::parse_with(s, 0)
    }
}
