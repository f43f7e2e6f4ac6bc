//! The congruence system fixing the curve modulo `64 p^r`, and the three
//! affine linear forms whose simultaneous prime values finish the
//! construction.
//!
//! With `M = 64 p^r` the targets are
//!
//! * `s1 ≡ 1 (mod 64)`,  `s1 ≡ x''2 - x''1 (mod p^r)`
//! * `s2 ≡ 17 (mod 64)`, `s2 ≡ x''3 - x''1 (mod p^r)`
//! * `a0 ≡ 0 (mod 64)`,  `a0 ≡ x''1 (mod p^r)`
//!
//! and the forms are `Q1 = s1 + M X`, `Q2 = s2 + M Y`,
//! `Q3 = (s1 - s2) / (16 p^p) + 4 p^(r-p) (X - Y)`, so that
//! `Q1 - Q2 = 16 p^p Q3` identically.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::PadicInt;
use crate::tate::TateBundle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("bundle precision {have} is below the required {need}")]
    PrecisionTooLow { have: u32, need: u32 },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("form {form} takes the nonpositive value {value} at ({x}, {y})")]
    NonpositiveValue { form: &'static str, value: BigInt, x: BigInt, y: BigInt },
    #[error("linear forms are not admissible: {0}")]
    Inadmissible(String),
}

pub type Result<T> = std::result::Result<T, TargetError>;

pub(crate) fn big_pow(p: u64, e: u32) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

/// Least nonnegative `x` with `x ≡ a (mod m)` and `x ≡ b (mod n)` for coprime `m`, `n`.
pub fn crt(a: &BigInt, m: &BigInt, b: &BigInt, n: &BigInt) -> BigInt {
    let inv = m.mod_floor(n).modinv(n).expect("coprime moduli");
    let k = ((b - a) * inv).mod_floor(n);
    (a + m * k).mod_floor(&(m * n))
}

/// Residue targets for one prime `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceTarget {
    pub p: u64,
    pub r: u32,
    #[serde(with = "crate::decimal")]
    pub s1: BigInt,
    #[serde(with = "crate::decimal")]
    pub s2: BigInt,
    #[serde(with = "crate::decimal")]
    pub a0_residue: BigInt,
    #[serde(with = "crate::decimal")]
    pub q3_constant: BigInt,
}

impl CongruenceTarget {
    /// `64 p^r`
    pub fn modulus(&self) -> BigInt {
        big_pow(self.p, self.r) * 64
    }

    /// `16 p^p`
    pub fn q3_divisor(&self) -> BigInt {
        big_pow(self.p, self.p as u32) * 16
    }
}

fn centered_residue(x: &PadicInt) -> BigInt {
    BigInt::from(x.residue().clone())
}

/// Solves the congruence system from the normalized 2-torsion abscissae.
pub fn build_targets(bundle: &TateBundle) -> Result<CongruenceTarget> {
    let p = bundle.prime;
    let r = crate::tate::construction_precision(p);
    if bundle.precision < r {
        return Err(TargetError::PrecisionTooLow { have: bundle.precision, need: r });
    }
    let pr = big_pow(p, r);
    let m64 = BigInt::from(64);
    let [x1, x2, x3] = bundle.xpp().map(centered_residue);
    let s1 = crt(&BigInt::one(), &m64, &(&x2 - &x1), &pr);
    let s2 = crt(&BigInt::from(17), &m64, &(&x3 - &x1), &pr);
    let a0_residue = crt(&BigInt::zero(), &m64, &x1, &pr);
    let divisor = big_pow(p, p as u32) * 16;
    let (q3_constant, rem) = (&s1 - &s2).div_rem(&divisor);
    if !rem.is_zero() {
        return Err(TargetError::Consistency(format!("16*{p}^{p} does not divide s1 - s2")));
    }
    if !(&q3_constant - BigInt::one()).mod_floor(&BigInt::from(p)).is_zero() {
        return Err(TargetError::Consistency(format!("q3 constant is not 1 mod {p}")));
    }
    Ok(CongruenceTarget { p, r, s1, s2, a0_residue, q3_constant })
}

/// `constant + cx X + cy Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: BigInt,
    pub cx: BigInt,
    pub cy: BigInt,
}

impl LinearForm {
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.constant + &self.cx * x + &self.cy * y
    }

    fn content(&self) -> BigInt {
        self.cx.gcd(&self.cy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormTriple {
    pub q1: LinearForm,
    pub q2: LinearForm,
    pub q3: LinearForm,
}

pub fn linear_forms(target: &CongruenceTarget) -> LinearFormTriple {
    let m = target.modulus();
    let c3: BigInt = big_pow(target.p, target.r - target.p as u32) * 4;
    LinearFormTriple {
        q1: LinearForm { constant: target.s1.clone(), cx: m.clone(), cy: BigInt::zero() },
        q2: LinearForm { constant: target.s2.clone(), cx: BigInt::zero(), cy: m },
        q3: LinearForm { constant: target.q3_constant.clone(), cx: c3.clone(), cy: -c3 },
    }
}

impl LinearFormTriple {
    pub fn forms(&self) -> [(&'static str, &LinearForm); 3] {
        [("Q1", &self.q1), ("Q2", &self.q2), ("Q3", &self.q3)]
    }

    /// Pairwise linear independence of the homogeneous parts, and no prime
    /// among `{2, 3, 5, p}` dividing both a form's content and its constant.
    pub fn check_admissible(&self, p: u64) -> Result<()> {
        let forms = self.forms();
        for i in 0..3 {
            for j in i + 1..3 {
                let (a, b) = (forms[i].1, forms[j].1);
                if (&a.cx * &b.cy - &a.cy * &b.cx).is_zero() {
                    return Err(TargetError::Inadmissible(format!("{} and {} are dependent", forms[i].0, forms[j].0)));
                }
            }
        }
        for (name, f) in forms {
            let content = f.content();
            for ell in [2u64, 3, 5, p] {
                let ell = BigInt::from(ell);
                if content.is_multiple_of(&ell) && f.constant.is_multiple_of(&ell) {
                    return Err(TargetError::Inadmissible(format!("{ell} divides every value of {name}")));
                }
            }
        }
        Ok(())
    }
}

/// The curve `y^2 = (x - a0)(x - b0)(x - c0)` at a solution point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssembledCurve {
    pub a0: BigInt,
    pub b0: BigInt,
    pub c0: BigInt,
    pub q1: BigInt,
    pub q2: BigInt,
    pub q3: BigInt,
}

pub fn assemble_curve(target: &CongruenceTarget, x0: &BigInt, y0: &BigInt) -> Result<AssembledCurve> {
    let forms = linear_forms(target);
    let mut values = Vec::with_capacity(3);
    for (name, f) in forms.forms() {
        let v = f.eval(x0, y0);
        if v.sign() != Sign::Plus {
            return Err(TargetError::NonpositiveValue { form: name, value: v, x: x0.clone(), y: y0.clone() });
        }
        values.push(v);
    }
    let q3 = values.pop().expect("three values");
    let q2 = values.pop().expect("three values");
    let q1 = values.pop().expect("three values");
    let a0 = target.a0_residue.mod_floor(&target.modulus());
    let b0 = &a0 + &q1;
    let c0 = &a0 + &q2;
    debug_assert_eq!(&b0 - &c0, &q3 * target.q3_divisor());
    debug_assert!(!q3.is_negative());
    Ok(AssembledCurve { a0, b0, c0, q1, q2, q3 })
}
