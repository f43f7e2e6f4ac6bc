use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{CurveError, RationalCurve, Result};
use num_integer::Integer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Good,
    Multiplicative,
    AdditiveOrUndetermined,
}

/// Reduction type at one prime. `v_c4` is `None` when `c4 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionType {
    #[serde(with = "crate::decimal")]
    pub prime: BigInt,
    pub kind: ReductionKind,
    pub v_delta_min: u32,
    pub v_c4: Option<u32>,
}

/// Valuation of a nonzero integer at a prime of any size; `None` for zero.
pub fn big_valuation(n: &BigInt, prime: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(prime);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

fn integral_at(x: &BigRational, prime: &BigInt) -> bool {
    !x.denom().is_multiple_of(prime)
}

/// Valuation of a rational that is integral at `prime`.
fn rational_valuation(x: &BigRational, prime: &BigInt) -> Option<u32> {
    big_valuation(x.numer(), prime)
}

/// Classifies reduction at `prime` using only the minimality shortcut
/// `v(c4) < 4 or v(delta) < 12`. Without that shortcut, and without
/// `already_minimal`, the answer is `AdditiveOrUndetermined`.
/// `prime` is trusted to be prime.
pub fn reduction_type(model: &RationalCurve, prime: &BigInt, already_minimal: bool) -> Result<ReductionType> {
    if model.coefficients().iter().any(|c| !integral_at(c, prime)) {
        return Err(CurveError::NotIntegral(prime.clone()));
    }
    let inv = model.invariants();
    let v_delta = rational_valuation(&inv.delta, prime).expect("nonsingular model");
    let v_c4 = rational_valuation(&inv.c4, prime);
    let minimal = already_minimal || v_delta < 12 || v_c4.is_some_and(|v| v < 4);
    let kind = match (minimal, v_delta, v_c4) {
        (true, 0, _) => ReductionKind::Good,
        (true, _, Some(0)) => ReductionKind::Multiplicative,
        _ => ReductionKind::AdditiveOrUndetermined,
    };
    Ok(ReductionType { prime: prime.clone(), kind, v_delta_min: v_delta, v_c4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::two_model;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn examples() {
        let m = two_model(&int(0), &int(1), &int(17)).unwrap();
        assert_eq!(reduction_type(&m, &int(2), false).unwrap().kind, ReductionKind::Good);

        let m = RationalCurve::split_integral(&int(0), &int(1), &int(17)).unwrap();
        let r = reduction_type(&m, &int(17), false).unwrap();
        assert_eq!(r.kind, ReductionKind::Multiplicative);
        assert_eq!((r.v_delta_min, r.v_c4), (2, Some(0)));

        // y^2 = x^3 - x
        let m = RationalCurve::split_integral(&int(-1), &int(0), &int(1)).unwrap();
        assert_eq!(m.invariants().delta, BigRational::from_integer(int(64)));
        assert_eq!(reduction_type(&m, &int(5), false).unwrap().kind, ReductionKind::Good);
        // additive at 2 for this model, at least undetermined
        assert_eq!(reduction_type(&m, &int(2), false).unwrap().kind, ReductionKind::AdditiveOrUndetermined);
    }

    #[test]
    fn non_minimal_model_is_undetermined() {
        // scale y^2 = x(x-1)(x-17) by u = 1/5: delta picks up 5^12
        let m = RationalCurve::split_integral(&int(0), &int(25), &int(425)).unwrap();
        let r = reduction_type(&m, &int(5), false).unwrap();
        assert_eq!(r.kind, ReductionKind::AdditiveOrUndetermined);
        assert!(r.v_delta_min >= 12);
        let r = reduction_type(&m, &int(5), true).unwrap();
        assert_eq!(r.kind, ReductionKind::AdditiveOrUndetermined);
    }

    #[test]
    fn non_integral_rejected() {
        let half = BigRational::new(1.into(), 2.into());
        let z = || BigRational::zero();
        let m = RationalCurve::new(z(), z(), z(), BigRational::from_integer(int(-1)), half).unwrap();
        assert!(matches!(reduction_type(&m, &int(2), false), Err(CurveError::NotIntegral(_))));
        assert!(reduction_type(&m, &int(3), false).is_ok());
    }
}
