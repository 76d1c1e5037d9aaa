use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

/// A complex number with MPFR parts. MPC is not linked, so the handful of
/// operations the oracles need live here.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        MpComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        MpComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn real(re: Float) -> Self {
        let p = re.prec();
        MpComplex { re, im: Float::new(p) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// `e^{i t}`.
    pub fn cis(t: &Float) -> Self {
        let (s, c) = t.clone().sin_cos(Float::new(t.prec()));
        MpComplex { re: c, im: s }
    }

    pub fn conj(&self) -> Self {
        MpComplex { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, f: &Float) -> Self {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re * f), im: Float::with_val(p, &self.im * f) }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -&self.im) / &n,
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self * &o.recip()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return Self::zero(p);
        }
        // sqrt((r + |re|)/2) is computed without cancellation; the other part
        // follows from im / (2 * that).
        let t = ((r + Float::with_val(p, self.re.abs_ref())) / 2u32).sqrt();
        if self.re.is_sign_positive() {
            let im = Float::with_val(p, &self.im / &t) / 2u32;
            MpComplex { re: t, im }
        } else {
            let re = Float::with_val(p, self.im.abs_ref()) / &t / 2u32;
            let im = if self.im.is_sign_negative() { -t } else { t };
            MpComplex { re, im }
        }
    }

    /// Non-negative integer power by squaring.
    pub fn powu(&self, mut n: u64) -> Self {
        let p = self.prec();
        let mut acc = MpComplex::real(Float::with_val(p, 1));
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            n >>= 1;
            if n > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &MpComplex {
    type Output = MpComplex;
    fn add(self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &MpComplex {
    type Output = MpComplex;
    fn sub(self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &MpComplex {
    type Output = MpComplex;
    fn mul(self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        MpComplex { re: rr - ii, im: ri + ir }
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }
}
