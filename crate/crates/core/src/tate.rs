//! Tate-curve series at `q = p^(2p)` and the normalized 2-torsion abscissae.
//!
//! All series are evaluated exactly modulo `p^M`. Summation stops at the
//! first index whose summand valuation bound reaches `M`:
//!
//! * `s_k(q)`: the `n`-th term `n^k q^n / (1 - q^n)` has valuation `>= 2pn`.
//! * `X(-1, q)`: the `n`-th summand has valuation `>= 2pn`.
//! * `X(±q^(1/2), q)`: the `n`-th summand contains `q^(n - 1/2) = p^(p(2n-1))`
//!   and so has valuation `>= p(2n - 1)`.
//!
//! Every omitted term therefore vanishes modulo `p^M`, and increasing `M`
//! never changes digits already produced.
//!
//! The 2-torsion abscissae are moved to the model
//! `y^2 = x^3 + (16 a4 - 1/3) x + 64 a6 - (16/3) a4 + 2/27` through
//! `x'' = (36 x + 3) / 9`. [`oracle_cubic_roots`] finds the same three values
//! as roots of that cubic without touching the `X(u, q)` series.

use num_bigint::BigInt;
use thiserror::Error;

use crate::padic::{PadicError, PadicInt, PadicPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TateError {
    #[error("p = {0} is not a prime >= 5")]
    UnsupportedPrime(u64),
    #[error("precision {precision} is too small (need more than {needed})")]
    PrecisionTooSmall { precision: u32, needed: u32 },
    #[error("cubic roots did not separate as expected: {0}")]
    RootSeparation(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

pub type Result<T> = std::result::Result<T, TateError>;

/// Deterministic primality for the small primes accepted here.
pub fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn check_prime(p: u64) -> Result<()> {
    if p < 5 || !is_small_prime(p) {
        return Err(TateError::UnsupportedPrime(p));
    }
    Ok(())
}

/// The nontrivial 2-torsion points of the Tate curve, by their parameter `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionPoint {
    /// `u = -1`
    MinusOne,
    /// `u = q^(1/2) = p^p`
    SqrtQ,
    /// `u = -q^(1/2)`
    MinusSqrtQ,
}

impl TorsionPoint {
    pub fn from_index(which: u8) -> Option<Self> {
        match which {
            1 => Some(Self::MinusOne),
            2 => Some(Self::SqrtQ),
            3 => Some(Self::MinusSqrtQ),
            _ => None,
        }
    }
}

fn q_exponent(p: u64) -> u32 {
    2 * p as u32
}

/// `z / (1 - z)^2` for `z` with `1 - z` a unit.
fn lambert(z: &PadicInt) -> Result<PadicInt> {
    let one = PadicInt::one(z.prime(), z.precision())?;
    let denom = (&one - z).pow(2);
    Ok(z * &denom.inv()?)
}

/// `s_k(q) = sum_{n >= 1} n^k q^n / (1 - q^n)` at `q = p^(2p)`, modulo `p^M`.
pub fn s_k(p: u64, k: u32, precision: u32) -> Result<PadicInt> {
    let e = q_exponent(p);
    let mut acc = PadicInt::zero(p, precision)?;
    let one = PadicInt::one(p, precision)?;
    let mut n = 1u32;
    while e * n < precision {
        let qn = PadicInt::prime_power(p, e * n, precision)?;
        let term = qn.scale(&BigInt::from(n).pow(k)) * (&one - &qn).inv()?;
        acc = acc + term;
        n += 1;
    }
    Ok(acc)
}

/// `(a4, a6)` of the Tate curve `y^2 + xy = x^3 + a4 x + a6` at `q = p^(2p)`:
/// `a4 = -5 s3`, `a6 = -(5 s3 + 7 s5) / 12`.
///
/// The factor 5 in `a4` is required for the `X(u, q)` values to be the
/// 2-torsion abscissae of this curve (`x1 = -1/4 - 4q + ...`).
pub fn tate_a_invariants(p: u64, precision: u32) -> Result<(PadicInt, PadicInt)> {
    check_prime(p)?;
    let s3 = s_k(p, 3, precision)?;
    let s5 = s_k(p, 5, precision)?;
    let a4 = -s3.scale(&BigInt::from(5));
    let twelfth = PadicInt::from_ratio(1, 12, p, precision)?;
    let a6 = -((s3.scale(&BigInt::from(5)) + s5.scale(&BigInt::from(7))) * twelfth);
    Ok((a4, a6))
}

/// `X(u, q)` at `q = p^(2p)` for one of the three 2-torsion parameters.
pub fn two_torsion_x(p: u64, point: TorsionPoint, precision: u32) -> Result<PadicInt> {
    check_prime(p)?;
    let e = q_exponent(p);
    let half = p as u32;
    let pw = |k: u32| PadicInt::prime_power(p, k, precision);
    let neg = |x: PadicInt| -x;

    let leading = match point {
        TorsionPoint::MinusOne => PadicInt::from_ratio(-1, 4, p, precision)?,
        TorsionPoint::SqrtQ => lambert(&pw(half)?)?,
        TorsionPoint::MinusSqrtQ => lambert(&neg(pw(half)?))?,
    };
    let mut acc = leading;
    let mut n = 1u32;
    loop {
        let bound = match point {
            TorsionPoint::MinusOne => e * n,
            _ => half * (2 * n - 1),
        };
        if bound >= precision {
            break;
        }
        // (q^n u, q^n / u)
        let (up, down) = match point {
            TorsionPoint::MinusOne => (neg(pw(e * n)?), neg(pw(e * n)?)),
            TorsionPoint::SqrtQ => (pw(half * (2 * n + 1))?, pw(half * (2 * n - 1))?),
            TorsionPoint::MinusSqrtQ => (neg(pw(half * (2 * n + 1))?), neg(pw(half * (2 * n - 1))?)),
        };
        let qn = pw(e * n)?;
        let summand = lambert(&up)? + lambert(&down)? - lambert(&qn)?.scale(&BigInt::from(2));
        acc = acc + summand;
        n += 1;
    }
    Ok(acc)
}

/// Tate-curve data at `q = p^(2p)`: the curve invariants, the normalized
/// 2-torsion abscissae and the unit factors of their differences.
///
/// With `h = p^p`:
/// `x''2 - x''1 = 1 + 8 alpha h`, `x''3 - x''1 = 1 - 8 beta h`,
/// `x''2 - x''3 = 16 gamma h`. The unit factors are known to `precision - p` digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateBundle {
    pub prime: u64,
    pub precision: u32,
    pub a4: PadicInt,
    pub a6: PadicInt,
    pub x1: PadicInt,
    pub x2: PadicInt,
    pub x3: PadicInt,
    pub xpp1: PadicInt,
    pub xpp2: PadicInt,
    pub xpp3: PadicInt,
    pub alpha: PadicInt,
    pub beta: PadicInt,
    pub gamma: PadicInt,
}

/// `4p + 1`, the working precision of the construction.
pub fn construction_precision(p: u64) -> u32 {
    4 * p as u32 + 1
}

impl TateBundle {
    /// `q = p^(2p)`
    pub fn q_exponent(&self) -> u32 {
        q_exponent(self.prime)
    }

    /// `q^(1/2) = p^p`
    pub fn sqrt_q_exponent(&self) -> u32 {
        self.prime as u32
    }

    pub fn xpp(&self) -> [&PadicInt; 3] {
        [&self.xpp1, &self.xpp2, &self.xpp3]
    }
}

/// Bundle at the construction precision `4p + 1`.
pub fn build_bundle(p: u64) -> Result<TateBundle> {
    build_bundle_at(p, construction_precision(p))
}

/// Bundle at an arbitrary precision `M > p`.
pub fn build_bundle_at(p: u64, precision: u32) -> Result<TateBundle> {
    check_prime(p)?;
    let h = p as u32;
    if precision <= h {
        return Err(TateError::PrecisionTooSmall { precision, needed: h });
    }
    let (a4, a6) = tate_a_invariants(p, precision)?;
    let x1 = two_torsion_x(p, TorsionPoint::MinusOne, precision)?;
    let x2 = two_torsion_x(p, TorsionPoint::SqrtQ, precision)?;
    let x3 = two_torsion_x(p, TorsionPoint::MinusSqrtQ, precision)?;
    let three = PadicInt::from_i64(3, p, precision)?;
    let ninth = PadicInt::from_ratio(1, 9, p, precision)?;
    let normalize = |x: &PadicInt| (x.scale(&BigInt::from(36)) + three.clone()) * ninth.clone();
    let (xpp1, xpp2, xpp3) = (normalize(&x1), normalize(&x2), normalize(&x3));

    let one = PadicInt::one(p, precision)?;
    let eighth = PadicInt::from_ratio(1, 8, p, precision)?;
    let sixteenth = PadicInt::from_ratio(1, 16, p, precision)?;
    let alpha = ((&xpp2 - &xpp1) - one.clone()).shift_down(h)? * eighth.clone();
    let beta = (one - (&xpp3 - &xpp1)).shift_down(h)? * eighth;
    let gamma = (&xpp2 - &xpp3).shift_down(h)? * sixteenth;

    Ok(TateBundle { prime: p, precision, a4, a6, x1, x2, x3, xpp1, xpp2, xpp3, alpha, beta, gamma })
}

/// The normalized cubic `x^3 + (16 a4 - 1/3) x + 64 a6 - (16/3) a4 + 2/27`.
pub fn normalized_cubic(a4: &PadicInt, a6: &PadicInt) -> Result<PadicPoly> {
    let p = a4.prime();
    let n = a4.precision().min(a6.precision());
    let third = PadicInt::from_ratio(1, 3, p, n)?;
    let linear = a4.scale(&BigInt::from(16)) - third;
    let constant = a6.scale(&BigInt::from(64)) - a4.scale(&BigInt::from(16)) * PadicInt::from_ratio(1, 3, p, n)?
        + PadicInt::from_ratio(2, 27, p, n)?;
    Ok(PadicPoly::new(vec![constant, linear, PadicInt::zero(p, n)?, PadicInt::one(p, n)?])?)
}

/// Roots of the normalized cubic by Hensel lifting, ordered as
/// `(x''1, x''2, x''3)`.
///
/// The simple root modulo `p` is lifted directly. The other two roots agree
/// modulo `p^p`; they are separated by rescaling around their midpoint
/// `-x''1 / 2` with step `p^k` for `k = 1, 2, ...` until the rescaled cubic
/// has two distinct roots modulo `p`. Separation at any level other than `p`
/// is reported as an error. The root with `(x - 1/3) / p^p ≡ 8 (mod p)` is
/// `x''2`.
pub fn oracle_cubic_roots(p: u64, precision: u32) -> Result<(PadicInt, PadicInt, PadicInt)> {
    check_prime(p)?;
    let h = p as u32;
    let work = precision + h;
    let (a4, a6) = tate_a_invariants(p, work)?;
    let f = normalized_cubic(&a4, &a6)?;

    let roots = f.roots_mod_p();
    let deriv = f.derivative();
    let unit_at = |r: u64| deriv.eval(&PadicInt::from_i64(r as i64, p, work).expect("valid")).is_unit();
    let simple: Vec<u64> = roots.iter().copied().filter(|&r| unit_at(r)).collect();
    let double: Vec<u64> = roots.iter().copied().filter(|&r| !unit_at(r)).collect();
    if simple.len() != 1 || double.len() != 1 {
        return Err(TateError::RootSeparation(format!(
            "expected one simple and one double root mod {p}, found simple {simple:?}, double {double:?}"
        )));
    }
    let first = f.lift_simple_root(simple[0])?;
    let midpoint = -(&first * &PadicInt::from_ratio(1, 2, p, work)?);

    let mut level = 1u32;
    let (t_roots, rescaled) = loop {
        if 2 * level >= work {
            return Err(TateError::RootSeparation("ran out of precision before the roots separated".into()));
        }
        let step = PadicInt::prime_power(p, level, work)?;
        let g = f.compose_affine(&midpoint, &step).shift_down(2 * level)?;
        let t = g.roots_mod_p();
        if t.len() == 2 {
            break (t, g);
        }
        level += 1;
    };
    if level != h {
        return Err(TateError::RootSeparation(format!("roots separated at level {level}, expected {h}")));
    }
    let third = PadicInt::from_ratio(1, 3, p, work)?;
    let mut second = None;
    let mut third_root = None;
    for t in t_roots {
        let lifted = rescaled.lift_simple_root(t)?;
        let root = &midpoint + &lifted.shift_up(h);
        let tag = (&root - &third).shift_down(h)?.truncate(1)?;
        if tag == PadicInt::from_i64(8, p, 1)? {
            second = Some(root);
        } else if tag == PadicInt::from_i64(-8, p, 1)? {
            third_root = Some(root);
        }
    }
    match (second, third_root) {
        (Some(b), Some(c)) => Ok((first.truncate(precision)?, b.truncate(precision)?, c.truncate(precision)?)),
        _ => Err(TateError::RootSeparation("clustered roots are not 1/3 ± 8 p^p modulo p^(p+1)".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Pow};

    fn pw(p: u64, k: u32) -> BigInt {
        Pow::pow(BigInt::from(p), k)
    }

    fn from_q(x: &BigRational, p: u64, m: u32) -> PadicInt {
        PadicInt::from_rational(x.numer(), x.denom(), p, m).unwrap()
    }

    fn rat(n: BigInt) -> BigRational {
        BigRational::from_integer(n)
    }

    /// Exact rational value of the first `terms` summands of `s_k`.
    fn s_k_rational(p: u64, k: u32, terms: u32) -> BigRational {
        let q = rat(pw(p, 2 * p as u32));
        let mut acc = rat(BigInt::from(0));
        for n in 1..=terms {
            let qn = Pow::pow(&q, n);
            let one = BigRational::one();
            acc += rat(Pow::pow(BigInt::from(n), k)) * &qn / (one - &qn);
        }
        acc
    }

    /// Exact rational value of the truncated `X(u, q)` series, with
    /// `u = ±q^(1/2)` handled through `h = p^p`.
    fn x_rational(p: u64, point: TorsionPoint, terms: u32) -> BigRational {
        let h = rat(pw(p, p as u32));
        let q = &h * &h;
        let one = BigRational::one();
        let lam = |z: &BigRational| z / ((&one - z) * (&one - z));
        let (u, uinv) = match point {
            TorsionPoint::MinusOne => (-one.clone(), -one.clone()),
            TorsionPoint::SqrtQ => (h.clone(), one.clone() / &h),
            TorsionPoint::MinusSqrtQ => (-h.clone(), -(one.clone() / &h)),
        };
        let mut acc = lam(&u);
        for n in 1..=terms {
            let qn = Pow::pow(&q, n);
            acc += lam(&(&qn * &u)) + lam(&(&qn * &uinv)) - rat(BigInt::from(2)) * lam(&qn);
        }
        acc
    }

    #[test]
    fn s_k_values_p5() {
        let p = 5;
        let q = |k: u32| PadicInt::from_integer(&pw(p, k), p, 21).unwrap();
        let s1 = s_k(p, 1, 21).unwrap();
        assert_eq!(s1, q(10) + q(20).scale(&3.into()));
        assert_eq!(s1, from_q(&s_k_rational(p, 1, 2), p, 21));
        let s3 = s_k(p, 3, 21).unwrap();
        assert_eq!(s3, q(10) + q(20).scale(&9.into()));
        assert_eq!(s3, from_q(&s_k_rational(p, 3, 2), p, 21));
        let s5 = s_k(p, 5, 21).unwrap();
        assert_eq!(s5, from_q(&s_k_rational(p, 5, 2), p, 21));
        for p in [5, 7, 11] {
            assert!(s_k(p, 3, 1).unwrap().is_zero());
        }
    }

    #[test]
    fn tate_invariants_p5() {
        let p = 5;
        let q = |k: u32| PadicInt::from_integer(&pw(p, k), p, 21).unwrap();
        let (a4, a6) = tate_a_invariants(p, 21).unwrap();
        assert_eq!(a4, -(q(10).scale(&5.into()) + q(20).scale(&45.into())));
        assert_eq!(a6, -(q(10) + q(20).scale(&23.into())));
        let (a4, a6) = tate_a_invariants(7, 1).unwrap();
        assert!(a4.is_zero() && a6.is_zero());
    }

    #[test]
    fn two_torsion_series_match_rational_truncation() {
        for p in [5u64, 7] {
            let m = 6 * p as u32 + 1;
            for (point, terms) in [(TorsionPoint::MinusOne, 4), (TorsionPoint::SqrtQ, 5), (TorsionPoint::MinusSqrtQ, 5)]
            {
                let exact = x_rational(p, point, terms);
                assert_eq!(two_torsion_x(p, point, m).unwrap(), from_q(&exact, p, m), "{p} {point:?}");
            }
        }
    }

    #[test]
    fn two_torsion_leading_terms() {
        let p = 5;
        let m = 21;
        let c = |n: i64, d: i64| PadicInt::from_ratio(n, d, p, m).unwrap();
        let pp = |k: u32, coeff: i64| PadicInt::from_integer(&(pw(p, k) * coeff), p, m).unwrap();
        // -1/4 - 4q + O(q^2)
        let x1 = two_torsion_x(p, TorsionPoint::MinusOne, m).unwrap();
        assert!(x1.congruent(&(c(-1, 4) + pp(10, -4)), 20).unwrap());
        // 2h + 2q + 8h^3 + O(q^2)
        let x2 = two_torsion_x(p, TorsionPoint::SqrtQ, m).unwrap();
        assert!(x2.congruent(&(pp(5, 2) + pp(10, 2) + pp(15, 8)), 20).unwrap());
        let x3 = two_torsion_x(p, TorsionPoint::MinusSqrtQ, m).unwrap();
        assert!(x3.congruent(&(pp(5, -2) + pp(10, 2) + pp(15, -8)), 20).unwrap());
    }

    #[test]
    fn bundle_expansions() {
        for p in [5u64, 7] {
            let b = build_bundle(p).unwrap();
            let r = construction_precision(p);
            let hp = p as u32;
            let c = |n: i64, d: i64| PadicInt::from_ratio(n, d, p, r).unwrap();
            let pp = |k: u32, coeff: i64| PadicInt::from_integer(&(pw(p, k) * coeff), p, r).unwrap();
            assert!(b.xpp1.congruent(&(c(-2, 3) + pp(2 * hp, -16)), 4 * hp).unwrap());
            assert!(b.xpp2.congruent(&(c(1, 3) + pp(hp, 8)), 2 * hp).unwrap());
            assert!(b.xpp3.congruent(&(c(1, 3) + pp(hp, -8)), 2 * hp).unwrap());
            for u in [&b.alpha, &b.beta, &b.gamma] {
                assert_eq!(u.precision(), r - hp);
                assert!(u.congruent(&PadicInt::one(p, 1).unwrap(), 1).unwrap());
            }
        }
    }

    #[test]
    fn normalization_chain() {
        let p = 7;
        let b = build_bundle(p).unwrap();
        let r = b.precision;
        let ninth = PadicInt::from_ratio(1, 9, p, r).unwrap();
        let three = PadicInt::from_i64(3, p, r).unwrap();
        assert_eq!(b.xpp2, (b.x2.scale(&36.into()) + three) * ninth);
        assert_eq!(b.q_exponent(), 14);
        assert_eq!(b.sqrt_q_exponent(), 7);
    }

    #[test]
    fn oracle_agrees_with_series() {
        for p in [5u64, 7] {
            let b = build_bundle(p).unwrap();
            let (r1, r2, r3) = oracle_cubic_roots(p, b.precision).unwrap();
            assert_eq!((&r1, &r2, &r3), (&b.xpp1, &b.xpp2, &b.xpp3));
        }
    }

    #[test]
    fn vieta_identities() {
        for p in [5u64, 7, 11] {
            let b = build_bundle(p).unwrap();
            let r = b.precision;
            let [x1, x2, x3] = b.xpp();
            assert!((&(x1 + x2) + x3).is_zero());
            let third = PadicInt::from_ratio(1, 3, p, r).unwrap();
            let e2 = &(&(x1 * x2) + &(x2 * x3)) + &(x3 * x1);
            assert_eq!(e2, b.a4.scale(&16.into()) - third.clone());
            let constant =
                b.a6.scale(&64.into()) - b.a4.scale(&16.into()) * third + PadicInt::from_ratio(2, 27, p, r).unwrap();
            assert_eq!(&(x1 * x2) * x3, -constant);
        }
    }

    #[test]
    fn difference_structure() {
        for p in [5u64, 7, 11] {
            let b = build_bundle(p).unwrap();
            let n = b.alpha.precision();
            let h = PadicInt::prime_power(p, p as u32, n).unwrap();
            let one = PadicInt::one(p, n).unwrap();
            let t = |x: &PadicInt| x.truncate(n).unwrap();
            assert_eq!(t(&(&b.xpp2 - &b.xpp1)), &one + &(&b.alpha.scale(&8.into()) * &h));
            assert_eq!(t(&(&b.xpp3 - &b.xpp1)), &one - &(&b.beta.scale(&8.into()) * &h));
            assert_eq!(t(&(&b.xpp2 - &b.xpp3)), &b.gamma.scale(&16.into()) * &h);
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let p = 5;
        let lo = build_bundle_at(p, 21).unwrap();
        let hi = build_bundle_at(p, 31).unwrap();
        for (a, b) in lo.xpp().iter().zip(hi.xpp()) {
            assert!(a.congruent(b, 21).unwrap());
        }
        assert!(lo.a6.congruent(&hi.a6, 21).unwrap());
    }

    #[test]
    fn rejects_small_or_composite_primes() {
        for p in [2u64, 3, 4, 6, 9] {
            assert_eq!(build_bundle(p).unwrap_err(), TateError::UnsupportedPrime(p));
        }
    }
}
