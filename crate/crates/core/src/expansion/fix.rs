use rug::Rational;

use super::{Expansion, ExpansionError, Lambda, UnknownValue};
use crate::exact_values::odd_harmonic_asymptotics;
use crate::scalar::{ExactComplex, FieldElement, PiGraded, SymbolicConstant};
use crate::walk::WalkSpec;

/// Four unit steps `+-1, +-i` with probability `1/4` each.
pub fn is_simple_walk(w: &WalkSpec) -> bool {
    let quarter = Rational::from((1, 4));
    let units = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    w.steps.len() == 4
        && w.steps.iter().all(|s| s.p == quarter)
        && units.iter().all(|&(x, y)| {
            let v = ExactComplex::new(FieldElement::from_int(x), FieldElement::from_int(y));
            w.steps.iter().any(|s| s.v == v)
        })
}

/// Fixes every harmonic unknown and `lambda` of a simple-walk expansion by
/// matching it along the diagonal `z = m(1+i)` against the exact diagonal
/// values `(4/pi) sum_{j<=m} 1/(2j-1)`, one power of `1/m` at a time.
pub fn fix_harmonic_exact_z2(e: &Expansion) -> Result<Expansion, ExpansionError> {
    if !is_simple_walk(e.walk()) {
        return Err(ExpansionError::NotSimpleWalk(e.walk().name.clone()));
    }
    let mut out = e.clone();
    let series = odd_harmonic_asymptotics(e.order());
    let four = Rational::from(4);

    // alpha log(2 m^2) = 2 alpha log m + alpha log 2; the log m parts agree
    // by construction, the constant gives lambda.
    let alpha = e.alpha();
    let a1 = alpha.c1.re.as_rational().filter(|_| alpha.c0.is_zero() && alpha.c1.im.is_zero());
    let a1 = a1.ok_or(ExpansionError::DiagonalMismatch(0))?.clone();
    if Rational::from(&a1 * 2u32) != Rational::from(&series.log_coeff * &four) {
        return Err(ExpansionError::DiagonalMismatch(0));
    }
    let c = series.scaled_constant(&four);
    let lambda = SymbolicConstant::new(c.rational.clone(), c.gamma.clone(), c.log2 - a1);

    let w = ExactComplex::new(FieldElement::one(), FieldElement::one());
    for j in 1..=e.order() {
        let target = PiGraded::over_pi(ExactComplex::from_rational(series.inverse_powers[&j].clone() * &four));
        // sum_{k+l=-j} beta_kl (1+i)^k (1-i)^l, affine in the unknowns.
        let mut constant = PiGraded::zero();
        let mut free: Option<(usize, ExactComplex)> = None;
        for (k, l) in e.slots().filter(|(k, l)| k + l == -(j as i64)) {
            let f = w.pow(k)?.checked_mul(&w.conj().pow(l)?)?;
            let a = e.affine(k, l).expect("slot exists");
            constant = constant.checked_add(&a.constant.mul_exact(&f)?)?;
            for (i, c) in a.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let cf = c.checked_mul(&f)?;
                match &out.unknown_values()[i] {
                    Some(UnknownValue::Exact(v)) => constant = constant.checked_add(&v.mul_exact(&cf)?)?,
                    Some(UnknownValue::Numeric { .. }) => return Err(ExpansionError::Unresolved),
                    None if e.unknowns()[i].level == j => {
                        let acc = match free.take() {
                            Some((fi, fc)) if fi == i => fc.checked_add(&cf)?,
                            Some(_) => return Err(ExpansionError::DiagonalMismatch(j)),
                            None => cf,
                        };
                        free = Some((i, acc));
                    }
                    None => return Err(ExpansionError::DiagonalMismatch(j)),
                }
            }
        }
        let rest = target.checked_sub(&constant)?;
        match free {
            None if rest.is_zero() => {}
            None => return Err(ExpansionError::DiagonalMismatch(j)),
            Some((i, a)) => {
                if a.is_zero() {
                    return Err(ExpansionError::DiagonalMismatch(j));
                }
                let u = rest.mul_exact(&a.inverse()?)?;
                if !u.is_real() {
                    return Err(ExpansionError::DiagonalMismatch(j));
                }
                out.set_unknown(i, UnknownValue::Exact(u));
            }
        }
    }
    out.set_lambda(Lambda::Exact(lambda));
    Ok(out)
}
