//! Differential operators in `z, zbar` and their action on the term algebra
//! spanned by `z^k zbar^l` and `log(z zbar)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::{Integer, Rational};

use crate::numeric;
use crate::scalar::{ExactComplex, PiGraded};
use crate::walk::WalkSpec;

/// `sum c_ab d_z^a d_zbar^b`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiffOperator {
    pub coeffs: BTreeMap<(u32, u32), ExactComplex>,
}

/// A monomial `z^k zbar^l`, or `log(z zbar)` when `is_log` (then `k = l = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub k: i64,
    pub l: i64,
    pub is_log: bool,
}

impl Monomial {
    pub fn power(k: i64, l: i64) -> Self {
        Monomial { k, l, is_log: false }
    }

    pub const LOG: Monomial = Monomial { k: 0, l: 0, is_log: true };

    /// Homogeneity degree `k + l`.
    pub fn order(&self) -> i64 {
        self.k + self.l
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: PiGraded,
    pub mono: Monomial,
}

/// `x (x - 1) ... (x - n + 1)`.
fn falling(x: i64, n: u32) -> Integer {
    let mut acc = Integer::from(1);
    for j in 0..n as i64 {
        acc *= x - j;
    }
    acc
}

/// `d_z^a d_zbar^b` applied to a monomial: `Some((factor, result))` or
/// `None` when the derivative vanishes.
pub fn monomial_action(a: u32, b: u32, m: Monomial) -> Option<(Integer, Monomial)> {
    if m.is_log {
        return match (a, b) {
            (0, 0) => Some((Integer::from(1), m)),
            (a, 0) | (0, a) => {
                // d^a log = (-1)^(a-1) (a-1)! z^-a
                let mut f = Integer::from(Integer::factorial(a - 1));
                if a % 2 == 0 {
                    f = -f;
                }
                let out = if b == 0 {
                    Monomial::power(-(a as i64), 0)
                } else {
                    Monomial::power(0, -(a as i64))
                };
                Some((f, out))
            }
            _ => None,
        };
    }
    let f = falling(m.k, a) * falling(m.l, b);
    (f != 0).then(|| (f, Monomial::power(m.k - a as i64, m.l - b as i64)))
}

impl DiffOperator {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lines `"a b c_ab"`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for ((a, b), c) in &self.coeffs {
            writeln!(s, "{a} {b} {c}").unwrap();
        }
        s
    }

    /// Whether `c_ba = conj(c_ab)` for every pair.
    pub fn is_self_conjugate(&self) -> bool {
        self.coeffs.iter().all(|((a, b), c)| {
            self.coeffs.get(&(*b, *a)).map(|d| *d == c.conj()).unwrap_or(false)
        })
    }

    /// The operator's action on one monomial, merged by result.
    pub fn act(&self, m: Monomial) -> Vec<(ExactComplex, Monomial)> {
        let mut out: BTreeMap<Monomial, ExactComplex> = BTreeMap::new();
        for ((a, b), c) in &self.coeffs {
            if let Some((f, r)) = monomial_action(*a, *b, m) {
                let t = c.scale(&Rational::from(f));
                let e = out.entry(r).or_insert_with(ExactComplex::zero);
                *e = &*e + &t;
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (c, m)).collect()
    }
}

/// `D_n = (1/n!) sum_m C(n,m) mu_{m,n-m} d_z^m d_zbar^(n-m)`.
pub fn taylor_operator(walk: &WalkSpec, n: u32) -> DiffOperator {
    let nf = Rational::from(Integer::from(Integer::factorial(n)));
    let mut coeffs = BTreeMap::new();
    for m in 0..=n {
        let mu = walk.moment(m, n - m);
        if mu.is_zero() {
            continue;
        }
        let c = mu.scale(&(numeric::binomial(n, m) / nf.clone()));
        coeffs.insert((m, n - m), c);
    }
    DiffOperator { coeffs }
}

pub fn apply_operator(op: &DiffOperator, t: &Term) -> Vec<Term> {
    op.act(t.mono)
        .into_iter()
        .map(|(c, mono)| Term { coeff: t.coeff.mul_exact(&c).expect("coefficient field"), mono })
        .filter(|t| !t.coeff.is_zero())
        .collect()
}

/// Merges equal monomials and drops cancelled coefficients.
pub fn merge_terms(terms: impl IntoIterator<Item = Term>) -> Vec<Term> {
    let mut acc: BTreeMap<Monomial, PiGraded> = BTreeMap::new();
    for t in terms {
        let e = acc.entry(t.mono).or_insert_with(PiGraded::zero);
        *e = &*e + &t.coeff;
    }
    let mut out: Vec<Term> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(mono, coeff)| Term { coeff, mono })
        .collect();
    out.sort_by_key(|t| (-t.mono.order(), t.mono.k));
    out
}

/// `(sum_{n=1}^{K} D_n) f`, keeping terms of order `>= -K`.
pub fn residual(walk: &WalkSpec, terms: &[Term], k_max: u32) -> Vec<Term> {
    let ops: Vec<DiffOperator> = (1..=k_max).map(|n| taylor_operator(walk, n)).collect();
    let mut out = Vec::new();
    for t in terms {
        for op in &ops {
            out.extend(apply_operator(op, t).into_iter().filter(|r| r.mono.order() >= -(k_max as i64)));
        }
    }
    merge_terms(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::MpComplex;
    use crate::scalar::{eval_complex, FieldElement};
    use rug::Float;

    fn ec(n: i64, m: i64) -> ExactComplex {
        ExactComplex::real(FieldElement::from_frac(n, m))
    }

    fn simple() -> WalkSpec {
        WalkSpec::bundled("z2-simple").unwrap()
    }

    #[test]
    fn simple_walk_operators() {
        let w = simple();
        assert!(taylor_operator(&w, 1).is_zero());
        let d2 = taylor_operator(&w, 2);
        assert_eq!(d2.coeffs.len(), 1);
        assert_eq!(d2.coeffs[&(1, 1)], ExactComplex::one());
        let d4 = taylor_operator(&w, 4);
        let want: BTreeMap<_, _> =
            [((0, 4), ec(1, 24)), ((2, 2), ec(1, 4)), ((4, 0), ec(1, 24))].into_iter().collect();
        assert_eq!(d4.coeffs, want);
        assert_eq!(d4.dump(), "0 4 1/24\n2 2 1/4\n4 0 1/24\n");
    }

    #[test]
    fn d4_matches_cartesian_form() {
        // (1/48)(d_x^4 + d_y^4) with d_x = d_z + d_zbar, d_y = i(d_z - d_zbar).
        let mut cart: BTreeMap<(u32, u32), ExactComplex> = BTreeMap::new();
        for m in 0..=4u32 {
            let c = numeric::binomial(4, m);
            let x = ExactComplex::from_rational(c.clone());
            // i^4 (−1)^(4−m)
            let y = ExactComplex::from_rational(c * if (4 - m) % 2 == 0 { 1 } else { -1 });
            let s = (&x + &y).scale(&Rational::from((1, 48)));
            if !s.is_zero() {
                cart.insert((m, 4 - m), s);
            }
        }
        assert_eq!(taylor_operator(&simple(), 4).coeffs, cart);
    }

    #[test]
    fn monomial_rules() {
        assert_eq!(monomial_action(1, 1, Monomial::power(3, 5)), Some((Integer::from(15), Monomial::power(2, 4))));
        assert_eq!(monomial_action(1, 0, Monomial::LOG), Some((Integer::from(1), Monomial::power(-1, 0))));
        assert_eq!(monomial_action(2, 0, Monomial::power(-3, 0)), Some((Integer::from(12), Monomial::power(-5, 0))));
        assert_eq!(monomial_action(1, 1, Monomial::LOG), None);
        assert_eq!(monomial_action(3, 0, Monomial::power(2, 1)), None);
    }

    #[test]
    fn d2_on_inverse_z_times_zbar() {
        let t = Term { coeff: PiGraded::constant(ExactComplex::one()), mono: Monomial::power(-1, 1) };
        let r = apply_operator(&taylor_operator(&simple(), 2), &t);
        assert_eq!(r, vec![Term { coeff: PiGraded::constant(ExactComplex::from_int(-1)), mono: Monomial::power(-2, 0) }]);
    }

    #[test]
    fn residual_of_log_term() {
        let t = Term { coeff: PiGraded::over_pi(ExactComplex::from_int(2)), mono: Monomial::LOG };
        let r = residual(&simple(), &[t], 6);
        // (2/pi)(1/24)(-1)(-2)(-3) z^-4 and its conjugate; the mixed part vanishes.
        let c = PiGraded::over_pi(ec(-1, 2));
        assert_eq!(
            r,
            vec![
                Term { coeff: c.clone(), mono: Monomial::power(-4, 0) },
                Term { coeff: c, mono: Monomial::power(0, -4) },
            ]
        );
    }

    fn eval_mono(m: Monomial, z: &MpComplex) -> MpComplex {
        let pos = |w: &MpComplex, e: i64| {
            let r = w.powu(e.unsigned_abs());
            if e < 0 { r.recip() } else { r }
        };
        if m.is_log {
            return MpComplex::real(z.norm_sqr().ln());
        }
        &pos(z, m.k) * &pos(&z.conj(), m.l)
    }

    /// Decay of `Delta f - sum_{n<=N} D_n f` for `f = z^k zbar^l`.
    #[test]
    fn truncated_taylor_error_decays() {
        let prec = 320;
        for name in ["z2-simple", "tri-directed"] {
            let w = WalkSpec::bundled(name).unwrap();
            let n_max = 5u32;
            let ops: Vec<DiffOperator> = (1..=n_max).map(|n| taylor_operator(&w, n)).collect();
            for mono in [Monomial::power(1, -2), Monomial::LOG, Monomial::power(3, -1)] {
                let mut rs = Vec::new();
                let mut errs = Vec::new();
                for r in [10.0f64, 30.0, 100.0, 300.0, 1000.0] {
                    let z = MpComplex::from_f64(r * 0.6, r * 0.8, prec);
                    let f0 = eval_mono(mono, &z);
                    let mut lap = MpComplex::zero(prec);
                    for s in &w.steps {
                        let v = eval_complex(&s.v, prec);
                        let fv = &eval_mono(mono, &(&z + &v)) - &f0;
                        lap = &lap + &fv.scale(&Float::with_val(prec, &s.p));
                    }
                    let mut approx = MpComplex::zero(prec);
                    for op in &ops {
                        for (c, m) in op.act(mono) {
                            approx = &approx + &(&eval_complex(&c, prec) * &eval_mono(m, &z));
                        }
                    }
                    rs.push(r);
                    errs.push((&lap - &approx).abs().to_f64());
                }
                let slope = numeric::log_log_slope(&rs, &errs);
                let want = (mono.order() - n_max as i64 - 1) as f64;
                // Vanishing moments can make the decay faster, never slower.
                assert!(slope < want + 0.15, "{name} {mono:?}: {slope} vs {want}");
            }
        }
    }

    #[test]
    fn operator_parity_and_balance() {
        for name in crate::walk::bundled_names() {
            let w = WalkSpec::bundled(name).unwrap();
            assert!(taylor_operator(&w, 1).is_zero());
            for n in 2..=10 {
                assert!(taylor_operator(&w, n).is_self_conjugate());
            }
            if w.is_reversible() {
                for m in 1..=5 {
                    assert!(taylor_operator(&w, 2 * m + 1).is_zero(), "{name} D_{}", 2 * m + 1);
                }
            }
        }
    }

    #[test]
    fn six_walk_fourth_operator_is_bilaplacian() {
        let w = WalkSpec::bundled("tri-six").unwrap();
        assert!(taylor_operator(&w, 3).is_zero());
        assert!(taylor_operator(&w, 5).is_zero());
        let d4 = taylor_operator(&w, 4);
        assert_eq!(d4.coeffs.keys().copied().collect::<Vec<_>>(), vec![(2, 2)]);
        // mu22 = 1 so c_22 = 6/24.
        assert_eq!(d4.coeffs[&(2, 2)], ec(1, 4));
    }
}
