use num_bigint::BigInt;
#[cfg(test)]
use num_bigint::BigUint;
use num_integer::Integer;
#[cfg(test)]
use num_traits::Zero;

use super::{pow_u, valuation_of, IntPoly, PadicError, PadicInt, Result};

/// A root of an integer polynomial certified by Hensel's lemma in the
/// form with derivative slack: if `p^j | f(a)` and `tau = v_p(f'(a))` with
/// `j >= 2 tau + 1`, there is a unique `p`-adic root congruent to `a`
/// modulo `p^(j - tau)`.
#[derive(Debug, Clone)]
pub struct HenselLift {
    poly: IntPoly,
    prime: u64,
    tau: u32,
    start: BigInt,
    known: u32,
}

fn describe(v: Option<u32>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

/// Checks the lifting hypotheses at `alpha` and returns the certified root.
///
/// `tau` must equal the computed valuation of `f'(alpha)`; a mismatch is
/// reported together with the computed valuations.
pub fn hensel_lift(f: &IntPoly, alpha: &BigInt, prime: u64, j: u32, tau: u32) -> Result<HenselLift> {
    if prime < 2 {
        return Err(PadicError::InvalidPrime(prime));
    }
    let value_v = valuation_of(&f.eval(alpha), prime);
    let deriv_v = valuation_of(&f.derivative().eval(alpha), prime);
    let ok = deriv_v == Some(tau) && value_v.is_none_or(|v| v >= j) && j > 2 * tau;
    if !ok {
        return Err(PadicError::HenselPrecondition {
            j,
            tau,
            value_valuation: describe(value_v),
            derivative_valuation: describe(deriv_v),
        });
    }
    Ok(HenselLift { poly: f.clone(), prime, tau, start: alpha.clone(), known: j - tau })
}

impl HenselLift {
    pub fn tau(&self) -> u32 {
        self.tau
    }

    /// Precision to which the root is pinned by the starting approximation.
    pub fn certified_precision(&self) -> u32 {
        self.known
    }

    /// The starting point, read modulo `p^(j - tau)`.
    pub fn approximation(&self) -> PadicInt {
        PadicInt::from_integer(&self.start, self.prime, self.known).expect("validated prime")
    }

    /// The root modulo `p^precision`, by Newton steps. Each step at least
    /// doubles the slack `v_p(f(b)) - 2 tau`.
    pub fn refine(&self, precision: u32) -> PadicInt {
        let p = self.prime;
        let target = precision.max(1);
        let deriv = self.poly.derivative();
        let work = BigInt::from(pow_u(p, target + self.tau));
        let p_tau = BigInt::from(pow_u(p, self.tau));
        let mut beta = self.start.mod_floor(&work);
        loop {
            let value = self.poly.eval(&beta);
            let Some(v) = valuation_of(&value, p) else { break };
            if v >= target + self.tau {
                break;
            }
            let d = deriv.eval(&beta);
            debug_assert_eq!(valuation_of(&d, p), Some(self.tau));
            let unit = PadicInt::from_integer(&(d / &p_tau), p, target + self.tau).expect("valid");
            let inv = unit.inv().expect("derivative unit part");
            let step = BigInt::from(inv.residue().clone()) * (value / &p_tau);
            beta = (beta - step).mod_floor(&work);
        }
        PadicInt::from_integer(&beta, p, target).expect("valid prime")
    }
}

/// Brute-force root count used by tests: residues `x` modulo `p^k` with
/// `x ≡ alpha (mod p^m)` and `f(x) ≡ 0 (mod p^(k + tau))`.
#[cfg(test)]
pub(crate) fn enumerate_roots(f: &IntPoly, alpha: &BigInt, p: u64, m: u32, k: u32, tau: u32) -> Vec<BigUint> {
    let pk = pow_u(p, k);
    let pm = BigInt::from(pow_u(p, m));
    let check = BigInt::from(pow_u(p, k + tau));
    let mut out = Vec::new();
    let mut x = BigUint::zero();
    while x < pk {
        let xi = BigInt::from(x.clone());
        if (&xi - alpha).mod_floor(&pm).is_zero() && f.eval(&xi).mod_floor(&check).is_zero() {
            out.push(x.clone());
        }
        x += 1u32;
    }
    out
}
