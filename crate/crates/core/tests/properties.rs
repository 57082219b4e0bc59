//! Property tests for the arithmetic and linear-algebra invariants.

use num_bigint::BigInt;
use proptest::prelude::*;

use padic_spectral::linalg::PadicMatrix;
use padic_spectral::padic::{AbsValue, PadicNumber, PrecisionContext};

fn ctx(p: u64) -> PrecisionContext {
    PrecisionContext::new(p, 32).unwrap()
}

fn arb_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

/// Nonzero rational with numerator and denominator in a small box.
fn arb_rational() -> impl Strategy<Value = (i64, i64)> {
    (
        prop_oneof![-10_000i64..-1, 1i64..10_000],
        prop_oneof![-10_000i64..-1, 1i64..10_000],
    )
}

fn num(p: u64, n: i64, d: i64) -> PadicNumber {
    PadicNumber::from_rational(n, d, &ctx(p)).unwrap()
}

proptest! {
    #[test]
    fn ultrametric_addition(p in arb_prime(), a in arb_rational(), b in arb_rational()) {
        let x = num(p, a.0, a.1);
        let y = num(p, b.0, b.1);
        let vx = x.valuation().unwrap();
        let vy = y.valuation().unwrap();
        let sum = x.add(&y);
        match sum.valuation() {
            Some(vs) => {
                prop_assert!(vs >= vx.min(vy));
                if vx != vy {
                    prop_assert_eq!(vs, vx.min(vy));
                }
            }
            None => {
                // The sum vanished to precision; that forces equal valuations.
                prop_assert_eq!(vx, vy);
            }
        }
    }

    #[test]
    fn valuation_is_additive(p in arb_prime(), a in arb_rational(), b in arb_rational()) {
        let x = num(p, a.0, a.1);
        let y = num(p, b.0, b.1);
        let prod = x.mul(&y);
        prop_assert_eq!(
            prod.valuation().unwrap(),
            x.valuation().unwrap() + y.valuation().unwrap()
        );
    }

    #[test]
    fn inverse_is_involutive(p in arb_prime(), a in arb_rational()) {
        let x = num(p, a.0, a.1);
        if x.valuation().unwrap().abs() < 8 {
            let back = x.inv().unwrap().inv().unwrap();
            prop_assert!(back.eq_to_precision(&x));
        }
    }

    #[test]
    fn residue_is_a_ring_homomorphism(
        p in arb_prime(),
        a in -500i64..500,
        b in -500i64..500,
    ) {
        let c = ctx(p);
        let x = PadicNumber::from_integer(a, &c);
        let y = PadicNumber::from_integer(b, &c);
        let rx = x.residue().unwrap();
        let ry = y.residue().unwrap();
        prop_assert_eq!(x.add(&y).residue().unwrap(), rx.add(&ry));
        prop_assert_eq!(x.mul(&y).residue().unwrap(), rx.mul(&ry));
    }

    #[test]
    fn reduction_commutes_with_charpoly(
        p in arb_prime(),
        entries in prop::collection::vec(-50i64..50, 9),
    ) {
        let c = ctx(p);
        let m = PadicMatrix::from_integer_entries(3, &entries, &c);
        let lhs = m.charpoly().reduce().unwrap();
        let rhs = m.reduce().unwrap().charpoly();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_commutes_with_multiplication(
        p in arb_prime(),
        a in prop::collection::vec(-50i64..50, 9),
        b in prop::collection::vec(-50i64..50, 9),
    ) {
        let c = ctx(p);
        let ma = PadicMatrix::from_integer_entries(3, &a, &c);
        let mb = PadicMatrix::from_integer_entries(3, &b, &c);
        let lhs = ma.mul(&mb).unwrap().reduce().unwrap();
        let rhs = ma.reduce().unwrap().mul(&mb.reduce().unwrap());
        prop_assert!(lhs.eq(&rhs));
    }

    #[test]
    fn sup_norm_is_submultiplicative(
        p in arb_prime(),
        a in prop::collection::vec(arb_rational(), 4),
        b in prop::collection::vec(arb_rational(), 4),
    ) {
        let c = ctx(p);
        let build = |vals: &[(i64, i64)]| {
            let mut m = PadicMatrix::zero(2, &c);
            for (k, (n, d)) in vals.iter().enumerate() {
                m.set(k / 2, k % 2, PadicNumber::from_rational(*n, *d, &c).unwrap());
            }
            m
        };
        let ma = build(&a);
        let mb = build(&b);
        let (AbsValue::Exact(na), AbsValue::Exact(nb)) = (ma.sup_norm(), mb.sup_norm()) else {
            unreachable!("entries are nonzero rationals");
        };
        match ma.mul(&mb).unwrap().sup_norm() {
            AbsValue::Exact(nprod) => prop_assert!(nprod <= na + nb),
            AbsValue::AtMost(bound) => prop_assert!(bound <= na + nb),
        }
    }

    #[test]
    fn abs_value_matches_rational_valuation(p in arb_prime(), a in arb_rational()) {
        let x = num(p, a.0, a.1);
        let expected = padic_spectral::padic::rational_abs_exponent(
            &BigInt::from(a.0),
            &BigInt::from(a.1),
            p,
        )
        .unwrap();
        prop_assert_eq!(x.abs_value(), AbsValue::Exact(expected));
    }
}
