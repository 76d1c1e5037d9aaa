use std::fmt;
use std::ops::{Add, Neg, Sub};

use rug::{Float, Rational};

use super::{ExactComplex, FieldElement, ScalarError};
use crate::numeric::{self, MpComplex};

/// `c0 + c1 / pi` with exact complex parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiGraded {
    pub c0: ExactComplex,
    pub c1: ExactComplex,
}

impl PiGraded {
    pub fn new(c0: ExactComplex, c1: ExactComplex) -> Self {
        PiGraded { c0, c1 }
    }

    pub fn zero() -> Self {
        PiGraded { c0: ExactComplex::zero(), c1: ExactComplex::zero() }
    }

    /// `c / pi`.
    pub fn over_pi(c: ExactComplex) -> Self {
        PiGraded { c0: ExactComplex::zero(), c1: c }
    }

    pub fn constant(c: ExactComplex) -> Self {
        PiGraded { c0: c, c1: ExactComplex::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.c0.is_real() && self.c1.is_real()
    }

    pub fn conj(&self) -> Self {
        PiGraded { c0: self.c0.conj(), c1: self.c1.conj() }
    }

    /// Real part, as a graded value with real components.
    pub fn re(&self) -> Self {
        PiGraded {
            c0: ExactComplex::real(self.c0.re.clone()),
            c1: ExactComplex::real(self.c1.re.clone()),
        }
    }

    pub fn im(&self) -> Self {
        PiGraded {
            c0: ExactComplex::real(self.c0.im.clone()),
            c1: ExactComplex::real(self.c1.im.clone()),
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(PiGraded { c0: self.c0.checked_add(&o.c0)?, c1: self.c1.checked_add(&o.c1)? })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(PiGraded { c0: self.c0.checked_sub(&o.c0)?, c1: self.c1.checked_sub(&o.c1)? })
    }

    pub fn mul_exact(&self, k: &ExactComplex) -> Result<Self, ScalarError> {
        Ok(PiGraded { c0: self.c0.checked_mul(k)?, c1: self.c1.checked_mul(k)? })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        PiGraded { c0: self.c0.scale(r), c1: self.c1.scale(r) }
    }

    /// Product of graded values; a `pi^-2` part is rejected.
    pub fn checked_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        if !self.c1.is_zero() && !o.c1.is_zero() {
            return Err(ScalarError::PiSquared);
        }
        let c0 = self.c0.checked_mul(&o.c0)?;
        let c1 = self.c0.checked_mul(&o.c1)?.checked_add(&self.c1.checked_mul(&o.c0)?)?;
        Ok(PiGraded { c0, c1 })
    }

    pub fn eval(&self, prec: u32) -> MpComplex {
        let wp = prec + 16;
        let pi = numeric::pi(wp);
        let a = eval_complex(&self.c0, wp);
        let b = eval_complex(&self.c1, wp);
        let v = &a + &b.scale(&pi.recip());
        MpComplex::new(Float::with_val(prec, &v.re), Float::with_val(prec, &v.im))
    }

    /// Real part evaluated at `prec` bits.
    pub fn eval_re(&self, prec: u32) -> Float {
        self.eval(prec).re
    }

    pub fn to_f64(&self) -> f64 {
        self.eval_re(64).to_f64()
    }

    /// Parses `"c0 + (c1)/pi"`; a bare `"(c1)/pi"` or `"c0"` is also accepted.
    pub fn parse_with(s: &str, d: u32) -> Result<Self, ScalarError> {
        let t = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        if let Some(head) = t.strip_suffix(")/pi") {
            let (c0, c1) = match head.rfind(" + (") {
                Some(i) => (&head[..i], &head[i + 4..]),
                None => ("0", head.strip_prefix('(').ok_or_else(bad)?),
            };
            return Ok(PiGraded {
                c0: ExactComplex::parse_with(c0, d)?,
                c1: ExactComplex::parse_with(c1, d)?,
            });
        }
        Ok(PiGraded::constant(ExactComplex::parse_with(t, d)?))
    }
}

pub fn eval_field(x: &FieldElement, prec: u32) -> Float {
    let a = numeric::from_rational(x.a(), prec);
    if x.is_rational() {
        return a;
    }
    let b = numeric::from_rational(x.b(), prec) * numeric::sqrt_u(x.d(), prec);
    a + b
}

pub fn eval_complex(z: &ExactComplex, prec: u32) -> MpComplex {
    MpComplex::new(eval_field(&z.re, prec), eval_field(&z.im, prec))
}

impl Add for &PiGraded {
    type Output = PiGraded;
    fn add(self, o: &PiGraded) -> PiGraded {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &PiGraded {
    type Output = PiGraded;
    fn sub(self, o: &PiGraded) -> PiGraded {
        self.checked_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &PiGraded {
    type Output = PiGraded;
    fn neg(self) -> PiGraded {
        PiGraded { c0: -&self.c0, c1: -&self.c1 }
    }
}

impl fmt::Display for PiGraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})/pi", self.c0, self.c1)
    }
}

/// `rational + (gamma * euler_gamma + log2 * ln 2) / pi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicConstant {
    pub rational: Rational,
    pub gamma: Rational,
    pub log2: Rational,
}

impl SymbolicConstant {
    pub fn new(rational: Rational, gamma: Rational, log2: Rational) -> Self {
        SymbolicConstant { rational, gamma, log2 }
    }

    pub fn zero() -> Self {
        SymbolicConstant { rational: Rational::new(), gamma: Rational::new(), log2: Rational::new() }
    }

    pub fn sum(&self, o: &Self) -> Self {
        SymbolicConstant {
            rational: Rational::from(&self.rational + &o.rational),
            gamma: Rational::from(&self.gamma + &o.gamma),
            log2: Rational::from(&self.log2 + &o.log2),
        }
    }

    pub fn eval(&self, prec: u32) -> Float {
        let wp = prec + 16;
        let g = numeric::euler_gamma(wp) * numeric::from_rational(&self.gamma, wp);
        let l = numeric::ln2(wp) * numeric::from_rational(&self.log2, wp);
        let v = numeric::from_rational(&self.rational, wp) + (g + l) / numeric::pi(wp);
        Float::with_val(prec, v)
    }
}

impl fmt::Display for SymbolicConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({}*gamma + {}*log2)/pi", self.rational, self.gamma, self.log2)
    }
}

impl std::str::FromStr for SymbolicConstant {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        let bad = || ScalarError::Parse(s.to_string());
        let (r, rest) = s.trim().split_once(" + (").ok_or_else(bad)?;
        let inner = rest.strip_suffix(")/pi").ok_or_else(bad)?;
        let (g, l) = inner.split_once("*gamma + ").ok_or_else(bad)?;
        let l = l.strip_suffix("*log2").ok_or_else(bad)?;
        let p = |x: &str| x.trim().parse::<Rational>().map_err(|_| bad());
        Ok(SymbolicConstant { rational: p(r)?, gamma: p(g)?, log2: p(l)? })
    }
}
