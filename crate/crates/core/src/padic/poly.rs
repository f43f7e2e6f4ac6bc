use num_bigint::BigInt;
use num_traits::Zero;

use super::{PadicError, PadicInt, Result};

/// Dense integer polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^n - c`.
    pub fn binomial(n: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = -c;
        coeffs[n] = BigInt::from(1);
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![BigInt::zero()]);
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
        Self::new(coeffs)
    }
}

/// Polynomial with truncated p-adic coefficients over a single prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicPoly {
    coeffs: Vec<PadicInt>,
}

impl PadicPoly {
    /// Coefficients in ascending degree; all must share the same prime.
    pub fn new(coeffs: Vec<PadicInt>) -> Result<Self> {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        let p = coeffs[0].prime();
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(PadicError::PrimeMismatch { left: p, right: c.prime() });
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[PadicInt] {
        &self.coeffs
    }

    pub fn prime(&self) -> u64 {
        self.coeffs[0].prime()
    }

    /// Smallest coefficient precision.
    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(PadicInt::precision).min().expect("nonempty")
    }

    pub fn eval(&self, x: &PadicInt) -> PadicInt {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            let z = self.coeffs[0].scale(&BigInt::zero());
            return Self { coeffs: vec![z] };
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&BigInt::from(i))).collect();
        Self { coeffs }
    }

    /// Coefficients of `g(t) = f(center + step * t)`.
    pub fn compose_affine(&self, center: &PadicInt, step: &PadicInt) -> Self {
        // Horner over polynomials in t
        let mut acc: Vec<PadicInt> = vec![self.coeffs.last().expect("nonempty").clone()];
        for c in self.coeffs.iter().rev().skip(1) {
            let mut next: Vec<PadicInt> = acc.iter().map(|a| a * center).collect();
            next.push(acc.last().expect("nonempty").scale(&BigInt::zero()));
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = &next[i + 1] + &(a * step);
            }
            next[0] = &next[0] + c;
            acc = next;
        }
        Self { coeffs: acc }
    }

    /// Divides every coefficient exactly by `p^k`.
    pub fn shift_down(&self, k: u32) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.shift_down(k)).collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs })
    }

    /// Residues `x` in `[0, p)` with `f(x) ≡ 0 (mod p)`.
    pub fn roots_mod_p(&self) -> Vec<u64> {
        let p = self.prime();
        (0..p)
            .filter(|&x| {
                let xp = PadicInt::from_i64(x as i64, p, 1).expect("valid prime");
                let reduced: Vec<PadicInt> =
                    self.coeffs.iter().map(|c| c.truncate(1).expect("precision >= 1")).collect();
                Self { coeffs: reduced }.eval(&xp).is_zero()
            })
            .collect()
    }

    /// Lifts a simple root known modulo `p` to the full coefficient precision
    /// by Newton iteration. Fails if the derivative is not a unit there.
    pub fn lift_simple_root(&self, approx: u64) -> Result<PadicInt> {
        let p = self.prime();
        let n = self.precision();
        let d = self.derivative();
        let mut x = PadicInt::from_i64(approx as i64, p, n)?;
        if !d.eval(&x).is_unit() {
            return Err(PadicError::NotAUnit { prime: p });
        }
        let mut known = 1u32;
        while known < n {
            let step = &self.eval(&x) * &d.eval(&x).inv()?;
            x = &x - &step;
            known = known.saturating_mul(2);
        }
        Ok(x)
    }
}
