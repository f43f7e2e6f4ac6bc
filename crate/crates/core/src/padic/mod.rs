//! Truncated p-adic integers.
//!
//! A [`PadicInt`] is an element of `Z_p` known modulo `p^N`. The residue is
//! always kept as the least nonnegative representative, so two values with the
//! same prime, precision and residue are bit-identical.
//!
//! Precision follows the absolute model: `add`, `sub` and `mul` return a value
//! at the smaller of the two operand precisions, and an exact division by
//! `p^k` ([`PadicInt::shift_down`]) loses `k` digits.

mod hensel;
mod poly;

pub use hensel::{hensel_lift, HenselLift};
pub use poly::{IntPoly, PadicPoly};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("prime must be at least 2, got {0}")]
    InvalidPrime(u64),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("operands live over different primes ({left} and {right})")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("value is not a unit in Z_{prime}")]
    NotAUnit { prime: u64 },
    #[error("denominator {den} is divisible by {prime}")]
    DenominatorDivisibleByPrime { den: BigInt, prime: u64 },
    #[error("value has odd valuation {0}; square root leaves Z_p")]
    OddValuation(u32),
    #[error("unit part is not a square modulo {0}")]
    NonResidue(u64),
    #[error("seed {seed} does not square to the unit part modulo {prime}")]
    InvalidSeed { seed: BigInt, prime: u64 },
    #[error("square roots are only supported for odd primes")]
    EvenPrimeSqrt,
    #[error("cannot divide by {prime}^{shift}: valuation is only {valuation}")]
    InsufficientValuation { prime: u64, shift: u32, valuation: u32 },
    #[error("requested precision {requested} exceeds available precision {available}")]
    PrecisionUnavailable { requested: u32, available: u32 },
    #[error(
        "Hensel precondition violated: requested j={j}, tau={tau}; \
         computed v_p(f(alpha))={value_valuation}, v_p(f'(alpha))={derivative_valuation}"
    )]
    HenselPrecondition { j: u32, tau: u32, value_valuation: String, derivative_valuation: String },
}

pub type Result<T> = std::result::Result<T, PadicError>;

/// Valuation of a truncated p-adic integer.
///
/// `AtLeast(N)` is returned for a zero residue at precision `N`; at that
/// precision it behaves as `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicValuation {
    Finite(u32),
    AtLeast(u32),
}

impl PadicValuation {
    /// Lower bound on the true valuation.
    pub fn lower_bound(self) -> u32 {
        match self {
            PadicValuation::Finite(v) | PadicValuation::AtLeast(v) => v,
        }
    }

    pub fn is_at_least(self, k: u32) -> bool {
        self.lower_bound() >= k
    }
}

impl fmt::Display for PadicValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicValuation::Finite(v) => write!(f, "{v}"),
            PadicValuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// An element of `Z_p` known modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    prime: u64,
    precision: u32,
    residue: BigUint,
}

pub(crate) fn pow_u(prime: u64, exp: u32) -> BigUint {
    Pow::pow(BigUint::from(prime), exp)
}

/// `p`-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation_of(n: &BigInt, prime: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(prime);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

fn check_prime(prime: u64, precision: u32) -> Result<()> {
    if prime < 2 {
        return Err(PadicError::InvalidPrime(prime));
    }
    if precision == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    Ok(())
}

impl PadicInt {
    /// Embeds an integer, reducing it to the least nonnegative residue.
    pub fn from_integer(value: &BigInt, prime: u64, precision: u32) -> Result<Self> {
        check_prime(prime, precision)?;
        let modulus = BigInt::from(pow_u(prime, precision));
        let residue = value.mod_floor(&modulus).to_biguint().expect("mod_floor is nonnegative");
        Ok(Self { prime, precision, residue })
    }

    pub fn from_i64(value: i64, prime: u64, precision: u32) -> Result<Self> {
        Self::from_integer(&BigInt::from(value), prime, precision)
    }

    /// `num / den` in `Z_p`; `den` must be prime to `p`.
    pub fn from_rational(num: &BigInt, den: &BigInt, prime: u64, precision: u32) -> Result<Self> {
        check_prime(prime, precision)?;
        if den.is_zero() || (den % BigInt::from(prime)).is_zero() {
            return Err(PadicError::DenominatorDivisibleByPrime { den: den.clone(), prime });
        }
        let d = Self::from_integer(den, prime, precision)?;
        let n = Self::from_integer(num, prime, precision)?;
        Ok(n * d.inv()?)
    }

    pub fn from_ratio(num: i64, den: i64, prime: u64, precision: u32) -> Result<Self> {
        Self::from_rational(&BigInt::from(num), &BigInt::from(den), prime, precision)
    }

    pub fn zero(prime: u64, precision: u32) -> Result<Self> {
        Self::from_i64(0, prime, precision)
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self> {
        Self::from_i64(1, prime, precision)
    }

    /// `p^k` at the given precision (zero when `k >= precision`).
    pub fn prime_power(prime: u64, k: u32, precision: u32) -> Result<Self> {
        check_prime(prime, precision)?;
        let residue = if k >= precision { BigUint::zero() } else { pow_u(prime, k) };
        Ok(Self { prime, precision, residue })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// `p^precision`.
    pub fn modulus(&self) -> BigUint {
        pow_u(self.prime, self.precision)
    }

    /// Signed representative in `(-p^N/2, p^N/2]`.
    pub fn centered(&self) -> BigInt {
        let m = self.modulus();
        let r = BigInt::from(self.residue.clone());
        if &self.residue * 2u32 > m {
            r - BigInt::from(m)
        } else {
            r
        }
    }

    fn make(&self, precision: u32, value: BigInt) -> Self {
        let modulus = BigInt::from(pow_u(self.prime, precision));
        let residue = value.mod_floor(&modulus).to_biguint().expect("nonnegative");
        Self { prime: self.prime, precision, residue }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(PadicError::PrimeMismatch { left: self.prime, right: other.prime });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let n = self.precision.min(other.precision);
        Ok(self.make(n, BigInt::from(&self.residue + &other.residue)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let n = self.precision.min(other.precision);
        Ok(self.make(n, BigInt::from(self.residue.clone()) - BigInt::from(other.residue.clone())))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let n = self.precision.min(other.precision);
        Ok(self.make(n, BigInt::from(&self.residue * &other.residue)))
    }

    /// Multiplies by an ordinary integer; precision is unchanged.
    pub fn scale(&self, k: &BigInt) -> Self {
        self.make(self.precision, BigInt::from(self.residue.clone()) * k)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let m = self.modulus();
        Self { prime: self.prime, precision: self.precision, residue: self.residue.modpow(&BigUint::from(exp), &m) }
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn valuation(&self) -> PadicValuation {
        if self.residue.is_zero() {
            return PadicValuation::AtLeast(self.precision);
        }
        let v = valuation_of(&BigInt::from(self.residue.clone()), self.prime).expect("nonzero");
        PadicValuation::Finite(v)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == PadicValuation::Finite(0)
    }

    /// Multiplicative inverse of a unit, at the same precision.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(PadicError::NotAUnit { prime: self.prime });
        }
        let m = BigInt::from(self.modulus());
        let g = BigInt::from(self.residue.clone()).extended_gcd(&m);
        debug_assert!(g.gcd.is_one());
        Ok(self.make(self.precision, g.x))
    }

    /// Exact division by `p^k`. The result is known to `precision - k` digits.
    pub fn shift_down(&self, k: u32) -> Result<Self> {
        let v = self.valuation();
        if !v.is_at_least(k) {
            return Err(PadicError::InsufficientValuation { prime: self.prime, shift: k, valuation: v.lower_bound() });
        }
        if k >= self.precision {
            return Err(PadicError::PrecisionUnavailable { requested: k + 1, available: self.precision });
        }
        let residue = &self.residue / pow_u(self.prime, k);
        Ok(Self { prime: self.prime, precision: self.precision - k, residue })
    }

    /// Exact multiplication by `p^k`; the result is known to `precision + k` digits.
    pub fn shift_up(&self, k: u32) -> Self {
        Self { prime: self.prime, precision: self.precision + k, residue: &self.residue * pow_u(self.prime, k) }
    }

    /// Forgets digits beyond `precision`.
    pub fn truncate(&self, precision: u32) -> Result<Self> {
        if precision > self.precision {
            return Err(PadicError::PrecisionUnavailable { requested: precision, available: self.precision });
        }
        check_prime(self.prime, precision)?;
        Ok(Self { prime: self.prime, precision, residue: &self.residue % pow_u(self.prime, precision) })
    }

    /// Whether `self ≡ other (mod p^k)`. Requires `k` within both precisions.
    pub fn congruent(&self, other: &Self, k: u32) -> Result<bool> {
        self.same_prime(other)?;
        let avail = self.precision.min(other.precision);
        if k > avail {
            return Err(PadicError::PrecisionUnavailable { requested: k, available: avail });
        }
        let m = pow_u(self.prime, k);
        Ok(&self.residue % &m == &other.residue % &m)
    }

    /// Base-`p` digits, least significant first, one per digit of precision.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigUint::from(self.prime);
        let mut n = self.residue.clone();
        let mut out = Vec::with_capacity(self.precision as usize);
        for _ in 0..self.precision {
            let (q, r) = n.div_rem(&p);
            out.push(r.to_u64().expect("digit below p"));
            n = q;
        }
        out
    }

    /// Renders `c0 + c1*p + c2*p^2 + ... + O(p^N)`, skipping zero digits.
    pub fn expansion(&self, max_digits: u32) -> String {
        let shown = max_digits.min(self.precision);
        let digits = self.digits();
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().take(shown as usize).enumerate() {
            if d == 0 {
                continue;
            }
            let term = match i {
                0 => format!("{d}"),
                1 => format!("{d}*{}", self.prime),
                _ => format!("{d}*{}^{i}", self.prime),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            terms.push("0".to_string());
        }
        format!("{} + O({}^{})", terms.join(" + "), self.prime, shown)
    }

    /// Square root of a value of even valuation, on the branch selected by
    /// `seed`, which must square to the unit part modulo `p`.
    ///
    /// For `a = p^(2v) u` known mod `p^N`, the result is known mod `p^(N - v)`.
    pub fn sqrt(&self, seed: &BigInt) -> Result<Self> {
        if self.prime == 2 {
            return Err(PadicError::EvenPrimeSqrt);
        }
        let v = match self.valuation() {
            PadicValuation::AtLeast(n) => {
                // every x with v(x) >= ceil(N/2) squares to zero
                let half = n.div_ceil(2);
                return Self::zero(self.prime, half);
            }
            PadicValuation::Finite(v) => v,
        };
        if v % 2 == 1 {
            return Err(PadicError::OddValuation(v));
        }
        let unit = self.shift_down(v)?;
        let p = self.prime;
        let u0 = (&unit.residue % p).to_u64().expect("small");
        if legendre_small(u0, p) != 1 {
            return Err(PadicError::NonResidue(p));
        }
        let s0 = seed.mod_floor(&BigInt::from(p)).to_u64().expect("small");
        if (s0 * s0) % p != u0 {
            return Err(PadicError::InvalidSeed { seed: seed.clone(), prime: p });
        }
        // Newton on x^2 - u; 2x is a unit for odd p
        let n = unit.precision;
        let mut x = Self::from_i64(s0 as i64, p, n)?;
        let mut known = 1u32;
        while known < n {
            let fx = x.pow(2) - unit.clone();
            let step = fx * x.scale(&BigInt::from(2)).inv()?;
            x = x - step;
            known = known.saturating_mul(2);
        }
        let half = v / 2;
        let residue = x.residue * pow_u(p, half);
        Ok(Self { prime: p, precision: self.precision - half, residue })
    }
}

fn legendre_small(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = BigUint::from((p - 1) / 2);
    let r = BigUint::from(a).modpow(&e, &BigUint::from(p));
    if r.is_one() {
        1
    } else {
        -1
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expansion(self.precision))
    }
}

impl Add for PadicInt {
    type Output = PadicInt;

    /// Panics when the primes differ; use [`PadicInt::checked_add`] to handle that.
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("p-adic prime mismatch")
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;

    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("p-adic prime mismatch")
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;

    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("p-adic prime mismatch")
    }
}

impl<'a> Add<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;

    fn add(self, rhs: &PadicInt) -> PadicInt {
        self.checked_add(rhs).expect("p-adic prime mismatch")
    }
}

impl<'a> Sub<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;

    fn sub(self, rhs: &PadicInt) -> PadicInt {
        self.checked_sub(rhs).expect("p-adic prime mismatch")
    }
}

impl<'a> Mul<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;

    fn mul(self, rhs: &PadicInt) -> PadicInt {
        self.checked_mul(rhs).expect("p-adic prime mismatch")
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;

    fn neg(self) -> Self {
        let value = match self.residue.is_zero() {
            true => BigInt::zero(),
            false => BigInt::from_biguint(Sign::Minus, self.residue.clone()),
        };
        self.make(self.precision, value)
    }
}
