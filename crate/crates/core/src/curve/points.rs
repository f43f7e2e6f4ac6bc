use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{CurveError, RationalCurve, Result};

/// Largest `ell` accepted by the naive counter.
pub const DEFAULT_POINT_COUNT_BOUND: u64 = 1_000_000;

fn is_small_odd_prime(n: u64) -> bool {
    n >= 3 && n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn reduce(x: &BigRational, ell: u64) -> Option<u64> {
    let m = BigInt::from(ell);
    let den = x.denom().mod_floor(&m);
    let inv = den.modinv(&m)?;
    (x.numer() * inv).mod_floor(&m).to_u64()
}

/// `#E(F_ell)`, point at infinity included, by summing Legendre symbols of
/// `4x^3 + b2 x^2 + 2 b4 x + b6`.
pub fn count_points_mod_ell(model: &RationalCurve, ell: u64, bound: u64) -> Result<u64> {
    if !is_small_odd_prime(ell) {
        return Err(CurveError::NotOddPrime(ell));
    }
    if ell > bound {
        return Err(CurveError::AboveBound { ell, bound });
    }
    let inv = model.invariants();
    let reduced = [&inv.b2, &inv.b4, &inv.b6, &inv.delta].map(|x| reduce(x, ell));
    let [Some(b2), Some(b4), Some(b6), Some(delta)] = reduced else {
        return Err(CurveError::NotIntegral(BigInt::from(ell)));
    };
    if delta == 0 {
        return Err(CurveError::BadReduction(ell));
    }
    let ell_u = ell as usize;
    let mut chi = vec![-1i8; ell_u];
    chi[0] = 0;
    for y in 1..=ell / 2 {
        chi[((y * y) % ell) as usize] = 1;
    }
    let m = ell as u128;
    let (b2, b4, b6) = (b2 as u128, b4 as u128, b6 as u128);
    let mut total = ell as i64 + 1;
    for x in 0..m {
        let v = ((4 * x % m * x % m * x) % m + b2 * x % m * x % m + 2 * b4 % m * x % m + b6) % m;
        total += chi[v as usize] as i64;
    }
    Ok(total as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// Direct enumeration of the long Weierstrass equation.
    fn brute(model: &RationalCurve, ell: u64) -> u64 {
        let c: Vec<i128> = model.coefficients().iter().map(|x| reduce(x, ell).unwrap() as i128).collect();
        let m = ell as i128;
        let mut n = 1;
        for x in 0..m {
            for y in 0..m {
                let lhs = y * y + c[0] * x * y + c[2] * y;
                let rhs = x * x * x + c[1] * x * x + c[3] * x + c[4];
                if (lhs - rhs).rem_euclid(m) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn legendre_17_small_fields() {
        let m = RationalCurve::split_integral(&int(0), &int(1), &int(17)).unwrap();
        assert_eq!(count_points_mod_ell(&m, 3, DEFAULT_POINT_COUNT_BOUND).unwrap(), 4);
        assert_eq!(count_points_mod_ell(&m, 5, DEFAULT_POINT_COUNT_BOUND).unwrap(), brute(&m, 5));
        assert!(matches!(count_points_mod_ell(&m, 17, 100), Err(CurveError::BadReduction(17))));
        assert!(matches!(count_points_mod_ell(&m, 9, 100), Err(CurveError::NotOddPrime(9))));
        assert!(matches!(count_points_mod_ell(&m, 101, 100), Err(CurveError::AboveBound { .. })));
    }

    #[test]
    fn non_split_model_matches_enumeration() {
        let m = crate::curve::two_model(&int(0), &int(1), &int(17)).unwrap();
        for ell in [3u64, 5, 7, 11, 13, 19, 23, 29, 31] {
            assert_eq!(count_points_mod_ell(&m, ell, 100).unwrap(), brute(&m, ell), "ell = {ell}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn hasse_and_two_torsion(a in -200i64..200, b in -200i64..200, c in -200i64..200, idx in 0usize..20) {
            prop_assume!(a != b && b != c && a != c);
            let ells = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73];
            let ell = ells[idx];
            let m = RationalCurve::split_integral(&int(a), &int(b), &int(c)).unwrap();
            prop_assume!(!(m.invariants().delta.numer() % ell as i64).is_zero());
            let n = count_points_mod_ell(&m, ell, DEFAULT_POINT_COUNT_BOUND).unwrap();
            let dev = (ell as i64 + 1 - n as i64).abs();
            prop_assert!((dev * dev) as u64 <= 4 * ell);
            prop_assert_eq!(n % 4, 0);
            prop_assert_eq!(n, brute(&m, ell));
        }
    }
}
