use rug::{Float, Integer, Rational};

/// Best rational approximation with denominator at most `max_den`, accepted
/// only if `|x - p/q| < 1 / (2 q max_den)`.
///
/// Walks the continued-fraction convergents of `x`; any fraction meeting the
/// acceptance bound is necessarily one of them, and the first one found has
/// the smallest denominator.
pub fn rational_reconstruct(x: &Float, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let prec = x.prec();
    let max_den_i = Integer::from(max_den);
    let exact = x.to_rational()?;
    let mut rest = exact.clone();
    // Convergents h/k via the standard recurrence.
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    for _ in 0..4 * prec {
        let a = rest.clone().floor().into_numer_denom().0;
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > max_den_i {
            return None;
        }
        let cand = Rational::from((h2.clone(), k2.clone()));
        let err = Rational::from(&exact - &cand).abs();
        let bound = Rational::from((1, Integer::from(&k2 * &max_den_i) * 2u32));
        if err < bound {
            return Some(cand);
        }
        let frac = rest - Rational::from(a);
        if frac == 0 {
            return None;
        }
        rest = frac.recip();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    None
}
