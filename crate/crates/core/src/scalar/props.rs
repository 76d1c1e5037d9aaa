use proptest::prelude::*;
use rug::{Float, Rational};

use super::*;

fn field_elem(d: u32) -> impl Strategy<Value = FieldElement> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(move |(a, b, c, e)| {
        FieldElement::new(Rational::from((a, b)), Rational::from((c, e)), d)
    })
}

proptest! {
    #[test]
    fn field_axioms(x in field_elem(3), y in field_elem(3), z in field_elem(3)) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), FieldElement::one());
        }
    }

    #[test]
    fn signum_matches_float(x in field_elem(5)) {
        let v = eval_field(&x, 256);
        let s = if v.is_zero() { 0 } else if v.is_sign_positive() { 1 } else { -1 };
        prop_assert_eq!(x.signum(), s);
    }

    #[test]
    fn complex_conjugation_is_multiplicative(
        a in field_elem(3), b in field_elem(3), c in field_elem(3), e in field_elem(3)
    ) {
        let z = ExactComplex::new(a, b);
        let w = ExactComplex::new(c, e);
        prop_assert_eq!((&z * &w).conj(), &z.conj() * &w.conj());
    }

    #[test]
    fn reconstruct_round_trip(p in -1_000_000i64..=1_000_000, q in 1i64..=1_000_000) {
        let r = Rational::from((p, q));
        let x = Float::with_val(128, &r);
        prop_assert_eq!(rational_reconstruct(&x, 1_000_000), Some(r));
    }

    #[test]
    fn field_text_round_trip(x in field_elem(7)) {
        prop_assert_eq!(FieldElement::parse_with(&x.to_string(), 7).unwrap(), x);
    }
}
