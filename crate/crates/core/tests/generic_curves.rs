//! The same Weierstrass code over integers, rationals and p-adic integers.

use num_bigint::BigInt;
use num_rational::BigRational;

use locyc_core::padic::{PadicInt, PadicValuation};
use locyc_core::tate::tate_a_invariants;
use locyc_core::{IntegerCurve, PadicCurve, RationalCurve};

#[test]
fn integer_and_rational_invariants_agree() {
    let c = [1i64, -4, 0, -1, 0];
    let zi = IntegerCurve::new(c[0].into(), c[1].into(), c[2].into(), c[3].into(), c[4].into()).unwrap();
    let q = |n: i64| BigRational::from_integer(n.into());
    let qr = RationalCurve::new(q(c[0]), q(c[1]), q(c[2]), q(c[3]), q(c[4])).unwrap();
    let (a, b) = (zi.invariants(), qr.invariants());
    assert_eq!(BigRational::from_integer(a.delta.clone()), b.delta);
    assert_eq!(BigRational::from_integer(a.c4.clone()), b.c4);
    assert_eq!(a.delta, BigInt::from(289));
}

#[test]
fn tate_curve_over_z_p_has_multiplicative_reduction() {
    for p in [5u64, 7, 11] {
        let n = 8 * p as u32;
        let (a4, a6) = tate_a_invariants(p, n).unwrap();
        let one = PadicInt::one(p, n).unwrap();
        let zero = PadicInt::zero(p, n).unwrap();
        let e = PadicCurve::new(one, zero.clone(), zero, a4, a6).unwrap();
        let inv = e.invariants();
        // delta = q prod (1 - q^n)^24 has valuation v(q) = 2p; c4 is a unit
        assert_eq!(inv.delta.valuation(), PadicValuation::Finite(2 * p as u32));
        assert!(inv.c4.is_unit());
        // delta ≡ q (mod q^2)
        let q = PadicInt::prime_power(p, 2 * p as u32, n).unwrap();
        assert!(inv.delta.congruent(&q, 4 * p as u32).unwrap());
    }
}

#[test]
fn singular_padic_model_is_rejected() {
    let z = || PadicInt::zero(5, 10).unwrap();
    assert!(PadicCurve::new(z(), z(), z(), z(), z()).is_err());
}
