use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use super::{FieldElement, ScalarError};

/// `re + i*im` with both parts in the same quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: FieldElement,
    pub im: FieldElement,
}

impl ExactComplex {
    pub fn new(re: FieldElement, im: FieldElement) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: FieldElement) -> Self {
        ExactComplex { re, im: FieldElement::zero() }
    }

    pub fn zero() -> Self {
        Self::real(FieldElement::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        ExactComplex { re: FieldElement::zero(), im: FieldElement::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(FieldElement::from_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::real(FieldElement::rational(r))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The radicand shared by both parts, 0 if both are rational.
    pub fn d(&self) -> u32 {
        self.re.d().max(self.im.d())
    }

    pub fn conj(&self) -> Self {
        ExactComplex { re: self.re.clone(), im: -&self.im }
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> Result<FieldElement, ScalarError> {
        self.re.checked_mul(&self.re)?.checked_add(&self.im.checked_mul(&self.im)?)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(ExactComplex { re: self.re.checked_add(&o.re)?, im: self.im.checked_add(&o.im)? })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(ExactComplex { re: self.re.checked_sub(&o.re)?, im: self.im.checked_sub(&o.im)? })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        let re = self.re.checked_mul(&o.re)?.checked_sub(&self.im.checked_mul(&o.im)?)?;
        let im = self.re.checked_mul(&o.im)?.checked_add(&self.im.checked_mul(&o.re)?)?;
        Ok(ExactComplex { re, im })
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        let n = self.norm_sqr()?;
        if n.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let inv = n.inverse()?;
        Ok(ExactComplex { re: self.re.checked_mul(&inv)?, im: (-&self.im).checked_mul(&inv)? })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ScalarError> {
        self.checked_mul(&o.inverse()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ExactComplex { re: self.re.scale(r), im: self.im.scale(r) }
    }

    pub fn scale_field(&self, f: &FieldElement) -> Self {
        ExactComplex { re: &self.re * f, im: &self.im * f }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.checked_mul(&b)?;
            }
            n >>= 1;
            if n > 0 {
                b = b.checked_mul(&b)?;
            }
        }
        Ok(acc)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Parses the `Display` form: `re` or `(re)+(im)*i`.
    pub fn parse_with(s: &str, d: u32) -> Result<Self, ScalarError> {
        let t = s.trim();
        if let Some(body) = t.strip_suffix(")*i") {
            let (re, im) = body
                .strip_prefix('(')
                .and_then(|b| b.split_once(")+("))
                .ok_or_else(|| ScalarError::Parse(s.to_string()))?;
            return Ok(ExactComplex {
                re: FieldElement::parse_with(re, d)?,
                im: FieldElement::parse_with(im, d)?,
            });
        }
        Ok(Self::real(FieldElement::parse_with(t, d)?))
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex { re: -&self.re, im: -&self.im }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&ExactComplex> for &ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: &ExactComplex) -> ExactComplex {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: ExactComplex) -> ExactComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: &ExactComplex) -> ExactComplex {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl From<FieldElement> for ExactComplex {
    fn from(f: FieldElement) -> Self {
        Self::real(f)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({})+({})*i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega() -> ExactComplex {
        ExactComplex::new(
            FieldElement::from_frac(-1, 2),
            FieldElement::parse_with("1/2*s", 3).unwrap(),
        )
    }

    #[test]
    fn cube_root_of_unity() {
        let w = omega();
        assert_eq!(w.pow(3).unwrap(), ExactComplex::one());
        assert_eq!(&(&ExactComplex::one() + &w) + &w.pow(2).unwrap(), ExactComplex::zero());
        assert_eq!(w.pow(-1).unwrap(), w.conj());
    }

    #[test]
    fn division_and_i() {
        let i = ExactComplex::i();
        assert_eq!(&i * &i, ExactComplex::from_int(-1));
        let z = ExactComplex::new(FieldElement::from_int(1), FieldElement::from_int(1));
        assert_eq!(z.pow(4).unwrap(), ExactComplex::from_int(-4));
        assert_eq!(z.checked_div(&z).unwrap(), ExactComplex::one());
        assert!(ExactComplex::zero().inverse().is_err());
    }

    #[test]
    fn text_round_trip() {
        for z in [omega(), ExactComplex::i(), ExactComplex::from_int(-7), omega().conj()] {
            let s = z.to_string();
            assert_eq!(ExactComplex::parse_with(&s, 3).unwrap(), z, "{s}");
        }
        assert_eq!(omega().to_string(), "(-1/2)+(1/2*s)*i");
    }
}
