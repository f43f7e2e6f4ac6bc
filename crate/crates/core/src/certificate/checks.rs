use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Certificate;
use crate::curve::{
    count_points_mod_ell, reduction_type, split_delta_and_reduced_c4, tate_form_change, two_model, RationalCurve,
    ReductionKind, DEFAULT_POINT_COUNT_BOUND,
};
use crate::padic::{hensel_lift, IntPoly, PadicInt};
use crate::scalar::Scalar;
use crate::search::{is_prime, Verdict};
use crate::target::{build_targets, linear_forms};
use crate::tate::{build_bundle, construction_precision, is_small_prime, tate_a_invariants, TateBundle};
use crate::PadicCurve;

/// Largest `p` the checker will recompute series for.
pub const MAX_SUPPORTED_PRIME: u64 = 97;

/// Largest `ell` tried when looking for a point count that is not `0 mod p`.
pub const NON_TORSION_SEARCH_BOUND: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
}

impl CheckId {
    pub const ALL: [CheckId; 12] = [
        CheckId::C1,
        CheckId::C2,
        CheckId::C3,
        CheckId::C4,
        CheckId::C5,
        CheckId::C6,
        CheckId::C7,
        CheckId::C8,
        CheckId::C9,
        CheckId::C10,
        CheckId::C11,
        CheckId::C12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::C1 => "congruences",
            CheckId::C2 => "prime structure",
            CheckId::C3 => "residues mod p",
            CheckId::C4 => "discriminant identity",
            CheckId::C5 => "reduced c4",
            CheckId::C6 => "good reduction at 2",
            CheckId::C7 => "multiplicative reduction at p",
            CheckId::C8 => "multiplicative reduction at q1, q2, q3",
            CheckId::C9 => "Tate parameter congruence",
            CheckId::C10 => "Hensel root of x^(2p) - q0",
            CheckId::C11 => "torsion structure",
            CheckId::C12 => "local cyclicity ledger",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }

    pub fn get(&self, id: CheckId) -> &CheckResult {
        &self.checks[id as usize]
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{:<4} {:<4} {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.name)?;
            for d in &c.details {
                writeln!(f, "           {d}")?;
            }
        }
        write!(f, "verdict: {}", if self.all_passed() { "all checks passed" } else { "FAILED" })
    }
}

/// Accumulates claims; the check passes iff every claim holds.
struct Claims {
    passed: bool,
    details: Vec<String>,
}

impl Claims {
    fn new() -> Self {
        Self { passed: true, details: Vec::new() }
    }

    fn claim(&mut self, ok: bool, what: impl Into<String>) -> bool {
        self.passed &= ok;
        self.details.push(format!("{} {}", if ok { "ok:  " } else { "FAIL:" }, what.into()));
        ok
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(format!("note: {}", what.into()));
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.claim(false, what);
    }

    fn finish(self, id: CheckId) -> CheckResult {
        CheckResult { id: id.to_string(), name: id.name().into(), passed: self.passed, details: self.details }
    }
}

fn pow(p: u64, e: u32) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

fn supported(p: u64) -> bool {
    (5..=MAX_SUPPORTED_PRIME).contains(&p) && is_small_prime(p)
}

fn residue(x: &PadicInt) -> BigInt {
    BigInt::from(x.residue().clone())
}

fn fresh_bundle(p: u64, c: &mut Claims) -> Option<TateBundle> {
    match build_bundle(p) {
        Ok(b) => Some(b),
        Err(e) => {
            c.fail(format!("series recomputation failed: {e}"));
            None
        }
    }
}

fn split_model(cert: &Certificate, c: &mut Claims) -> Option<RationalCurve> {
    match RationalCurve::split_integral(&cert.a0, &cert.b0, &cert.c0) {
        Ok(m) => Some(m),
        Err(e) => {
            c.fail(format!("y^2 = (x-a0)(x-b0)(x-c0) is not an elliptic curve: {e}"));
            None
        }
    }
}

fn c1(cert: &Certificate, c: &mut Claims) {
    let p = cert.p;
    let r = construction_precision(p);
    c.claim(cert.r == r, format!("r = 4p+1 = {r} (certificate: {})", cert.r));
    let Some(bundle) = fresh_bundle(p, c) else { return };
    let pr = pow(p, r);
    let m64 = BigInt::from(64);
    let fresh = bundle.xpp().map(residue);
    let recorded = [&cert.series.xpp1, &cert.series.xpp2, &cert.series.xpp3];
    for (i, (f, rec)) in fresh.iter().zip(recorded).enumerate() {
        c.claim(f == rec, format!("recorded x''{} matches the recomputed series mod p^r", i + 1));
    }
    for (name, v, k, i) in [("a0", &cert.a0, 0, 0), ("b0", &cert.b0, 1, 1), ("c0", &cert.c0, 17, 2)] {
        c.claim(v.mod_floor(&m64) == BigInt::from(k), format!("{name} ≡ {k} (mod 64)"));
        c.claim(v.mod_floor(&pr) == fresh[i], format!("{name} ≡ x''{} (mod p^{r})", i + 1));
    }
    match build_targets(&bundle) {
        Ok(t) => {
            c.claim(cert.s1 == t.s1, "s1 is the least CRT solution of s1 ≡ 1 (mod 64), s1 ≡ x''2 - x''1 (mod p^r)");
            c.claim(cert.s2 == t.s2, "s2 is the least CRT solution of s2 ≡ 17 (mod 64), s2 ≡ x''3 - x''1 (mod p^r)");
        }
        Err(e) => c.fail(format!("target recomputation failed: {e}")),
    }
}

fn c2(cert: &Certificate, c: &mut Claims) {
    let p = cert.p;
    let (q1, q2, q3) = (&cert.q1, &cert.q2, &cert.q3);
    c.claim(q1 == &(&cert.b0 - &cert.a0), "q1 = b0 - a0");
    c.claim(q2 == &(&cert.c0 - &cert.a0), "q2 = c0 - a0");
    c.claim(&cert.b0 - &cert.c0 == q3 * pow(p, p as u32) * 16, "b0 - c0 = 16 p^p q3");
    let Some(bundle) = fresh_bundle(p, c) else { return };
    match build_targets(&bundle) {
        Ok(t) => {
            let forms = linear_forms(&t);
            for ((name, f), q) in forms.forms().into_iter().zip([q1, q2, q3]) {
                c.claim(&f.eval(&cert.x0, &cert.y0) == q, format!("{name}(x0, y0) = {}", name.to_lowercase()));
            }
        }
        Err(e) => c.fail(format!("target recomputation failed: {e}")),
    }
    let verdicts: Vec<Verdict> = [q1, q2, q3].iter().map(|q| is_prime(q).verdict).collect();
    for (i, v) in verdicts.iter().enumerate() {
        c.claim(*v != Verdict::Composite, format!("q{} is prime ({v:?})", i + 1));
    }
    c.claim(q1 != q2 && q2 != q3 && q1 != q3, "q1, q2, q3 pairwise distinct");
    let two = BigInt::from(2);
    let pp = BigInt::from(p);
    c.claim([q1, q2, q3].iter().all(|q| **q != two && **q != pp), "no qi equals 2 or p");
    if cert.primality.is_empty() {
        c.note("no primality evidence recorded; verdicts recomputed");
    } else {
        let consistent = cert.primality.len() == 3
            && cert.primality.iter().zip([q1, q2, q3]).zip(&verdicts).all(|((e, q), v)| &e.n == q && e.verdict == *v);
        c.claim(consistent, "recorded primality evidence matches q1, q2, q3 and the recomputed verdicts");
    }
}

fn c3(cert: &Certificate, c: &mut Claims) {
    let pp = BigInt::from(cert.p);
    for (i, q) in [&cert.q1, &cert.q2, &cert.q3].iter().enumerate() {
        c.claim(q.mod_floor(&pp).is_one(), format!("q{} ≡ 1 (mod p)", i + 1));
    }
}

fn c4(cert: &Certificate, c: &mut Claims) {
    let Some(model) = split_model(cert, c) else { return };
    let delta = model.invariants().delta;
    let prod = &cert.q1 * &cert.q2 * &cert.q3;
    let expected = pow(2, 12) * pow(cert.p, 2 * cert.p as u32) * &prod * &prod;
    c.claim(delta == BigRational::from_integer(expected), "discriminant = 2^12 p^(2p) q1^2 q2^2 q3^2");
}

fn c5(cert: &Certificate, c: &mut Claims) {
    let Ok((_, c4r)) = split_delta_and_reduced_c4(&cert.a0, &cert.b0, &cert.c0) else {
        c.fail("a0, b0, c0 are not pairwise distinct");
        return;
    };
    let Some(model) = split_model(cert, c) else { return };
    c.claim(model.invariants().c4 == BigRational::from_integer(&c4r * 16), "standard c4 = 16 c4_reduced");
    let pp = pow(cert.p, cert.p as u32);
    c.claim(c4r == &cert.q1 * &cert.q1 - &pp * 16 * &cert.q2 * &cert.q3, "c4_reduced = q1^2 - 16 p^p q2 q3");
    let prod = &cert.q1 * &cert.q2 * &cert.q3;
    c.claim(c4r.gcd(&prod).is_one(), "gcd(c4_reduced, q1 q2 q3) = 1");
    c.claim(c4r.mod_floor(&pp).is_one(), "c4_reduced ≡ 1 (mod p^p)");
}

fn c6(cert: &Certificate, c: &mut Claims) {
    match two_model(&cert.a0, &cert.b0, &cert.c0) {
        Ok(m) => {
            c.claim(m.integer_coefficients().is_some(), "model after x = 4x' + 1, y = 8y' + 4x' is integral");
            let d = m.invariants().delta;
            let odd = d.is_integer() && d.to_integer().is_odd();
            c.claim(odd, format!("its discriminant ({} digits) is odd", d.numer().to_string().len()));
            match reduction_type(&m, &BigInt::from(2), false) {
                Ok(rt) => c.claim(rt.kind == ReductionKind::Good, format!("reduction at 2 is {:?}", rt.kind)),
                Err(e) => c.claim(false, format!("reduction at 2: {e}")),
            };
        }
        Err(e) => c.fail(format!("no good model at 2: {e}")),
    }
}

fn c7(cert: &Certificate, c: &mut Claims) {
    let p = cert.p;
    let Some(split) = split_model(cert, c) else { return };
    let model = match split.transform(&tate_form_change()) {
        Ok(m) => m,
        Err(e) => return c.fail(format!("transform failed: {e}")),
    };
    c.note("model after x = 4x' + 1/3, y = 8y' + 4x' (denominators divide 1728)");
    match reduction_type(&model, &BigInt::from(p), false) {
        Ok(rt) => {
            c.claim(true, format!("model is integral at {p}"));
            c.claim(rt.v_delta_min >= p as u32, format!("v_p(discriminant) = {} >= p", rt.v_delta_min));
            c.claim(rt.v_c4 == Some(0), format!("v_p(c4) = {:?} is 0", rt.v_c4));
            c.claim(rt.kind == ReductionKind::Multiplicative, format!("minimal, reduction {:?}", rt.kind));
        }
        Err(e) => c.fail(format!("{e}")),
    }
}

fn c8(cert: &Certificate, c: &mut Claims) {
    let Some(model) = split_model(cert, c) else { return };
    for (i, q) in [&cert.q1, &cert.q2, &cert.q3].iter().enumerate() {
        if *q <= &BigInt::one() {
            c.fail(format!("q{} is not a prime", i + 1));
            continue;
        }
        match reduction_type(&model, q, false) {
            Ok(rt) => {
                let ok = rt.v_delta_min == 2 && rt.v_c4 == Some(0) && rt.kind == ReductionKind::Multiplicative;
                c.claim(
                    ok,
                    format!(
                        "at q{}: v(discriminant) = {}, v(c4) = {:?}, reduction {:?}",
                        i + 1,
                        rt.v_delta_min,
                        rt.v_c4,
                        rt.kind
                    ),
                );
            }
            Err(e) => c.fail(format!("at q{}: {e}", i + 1)),
        }
    }
}

/// `v_p(1/j_E - 1/j(E_q)) >= 4p + 1`, both sides at `6p + 1` digits.
fn tate_congruence(cert: &Certificate, c: &mut Claims) -> bool {
    let p = cert.p;
    let target = construction_precision(p);
    let work = target + 2 * p as u32;
    let Some(model) = split_model(cert, c) else { return false };
    let inv = model.invariants();
    if inv.c4.is_zero() {
        c.fail("c4 = 0");
        return false;
    }
    let inv_j = inv.delta / inv.c4.cube();
    let ours = match PadicInt::from_rational(inv_j.numer(), inv_j.denom(), p, work) {
        Ok(x) => x,
        Err(e) => {
            c.fail(format!("1/j_E is not p-integral: {e}"));
            return false;
        }
    };
    let tate = (|| {
        let (a4, a6) = tate_a_invariants(p, work).ok()?;
        let one = PadicInt::one(p, work).ok()?;
        let zero = PadicInt::zero(p, work).ok()?;
        let curve = PadicCurve::new(one, zero.clone(), zero, a4, a6).ok()?;
        let inv = curve.invariants();
        let c4_inv = inv.c4.inv().ok()?;
        Some(inv.delta * c4_inv.cube())
    })();
    let Some(tate) = tate else {
        c.fail("Tate-curve 1/j could not be computed");
        return false;
    };
    let diff = &ours - &tate;
    let v = diff.valuation();
    c.note(format!("v_p(1/j_E) = {}", ours.valuation()));
    c.claim(v.is_at_least(target), format!("v_p(1/j_E - 1/j(E_q)) = {v} >= 4p+1 = {target}"))
}

fn c9(cert: &Certificate, c: &mut Claims) {
    tate_congruence(cert, c);
}

fn c10(cert: &Certificate, c: &mut Claims) {
    let p = cert.p;
    if !tate_congruence(cert, c) {
        c.fail("the class of q0 mod p^(4p+1) is not certified");
        return;
    }
    let j = construction_precision(p);
    let h = p as u32;
    // any representative of the certified class; the argument only uses the class
    let q0: BigInt = pow(p, 2 * h) + pow(p, j) * 3;
    c.note(format!("q0 = p^(2p) + 3 p^(4p+1) represents the class of p^(2p) mod p^{j}"));
    let f = IntPoly::binomial(2 * p as usize, q0.clone());
    let pb = BigInt::from(p);
    let v_f = crate::padic::valuation_of(&f.eval(&pb), p);
    c.claim(v_f.is_some_and(|v| v >= j), format!("v_p(f(p)) = v_p(p^(2p) - q0) = {v_f:?} >= {j}"));
    let tau = crate::padic::valuation_of(&f.derivative().eval(&pb), p);
    c.claim(tau == Some(2 * h), format!("tau = v_p(f'(p)) = {tau:?} = 2p"));
    c.claim(j > 4 * h, format!("j = {j} >= 2 tau + 1 = {}", 4 * h + 1));
    match hensel_lift(&f, &pb, p, j, 2 * h) {
        Ok(lift) => {
            let beta = lift.refine(6 * h);
            let p_adic_p = PadicInt::from_i64(p as i64, p, 6 * h).expect("valid");
            c.claim(beta.congruent(&p_adic_p, 2 * h + 1).unwrap_or(false), format!("beta ≡ p (mod p^{})", 2 * h + 1));
            let q0_padic = PadicInt::from_integer(&q0, p, 6 * h).expect("valid");
            c.claim(beta.pow(2 * h) == q0_padic, format!("beta^(2p) ≡ q0 (mod p^{})", 6 * h));
        }
        Err(e) => c.fail(format!("Hensel lift: {e}")),
    }
}

fn c11(cert: &Certificate, c: &mut Claims) {
    let Some(model) = split_model(cert, c) else { return };
    c.claim(true, "full rational 2-torsion: (a0, 0), (b0, 0), (c0, 0) with a0, b0, c0 distinct integers");
    let delta = model.invariants().delta.to_integer();
    let p = cert.p;
    let found = (3..=NON_TORSION_SEARCH_BOUND).step_by(2).filter(|&l| is_small_prime(l) && l != p).find_map(|ell| {
        if delta.is_multiple_of(&BigInt::from(ell)) {
            return None;
        }
        let n = count_points_mod_ell(&model, ell, DEFAULT_POINT_COUNT_BOUND).ok()?;
        (n % p != 0).then_some((ell, n))
    });
    match found {
        Some((ell, n)) => {
            c.claim(true, format!("#E(F_{ell}) = {n} ≢ 0 (mod {p}): no rational {p}-torsion"));
        }
        None => c.fail(format!("no good ell <= {NON_TORSION_SEARCH_BOUND} with #E(F_ell) ≢ 0 (mod {p})")),
    }
}

fn c12(cert: &Certificate, results: &[CheckResult]) -> CheckResult {
    let mut c = Claims::new();
    let ok = |id: CheckId| results[id as usize].passed;
    let p = cert.p;
    c.claim(
        ok(CheckId::C8) && ok(CheckId::C3),
        "at q1, q2, q3: multiplicative reduction (C8) and qi ≡ 1 mod p (C3); \
         the local image is trivial or cyclic of order qi",
    );
    c.claim(
        ok(CheckId::C9) && ok(CheckId::C10),
        format!(
            "at {p}: Tate parameter q0 ≡ p^(2p) (C9) with q0 = beta^(2p), beta ∈ Z_p (C10), so q0^(1/2) and \
             q0^(1/p) lie in Z_p; the local image is cyclic of order {p} - 1"
        ),
    );
    c.note("at 2 and every other prime of good reduction: unramified, so the decomposition group is cyclic");
    c.claim(
        ok(CheckId::C7) && ok(CheckId::C8) && ok(CheckId::C6) && ok(CheckId::C11),
        "surjectivity onto GL2(F_p): semistable (C6, C7, C8), full 2-torsion and no p-torsion corroborated (C11), \
         p >= 5; the conclusion rests on Mazur's theorem on rational isogenies, cited and not verified here",
    );
    c.finish(CheckId::C12)
}

fn run(id: CheckId, cert: &Certificate) -> CheckResult {
    let mut c = Claims::new();
    if !supported(cert.p) {
        c.fail(format!("p = {} is not a prime in [5, {MAX_SUPPORTED_PRIME}]", cert.p));
        return c.finish(id);
    }
    match id {
        CheckId::C1 => c1(cert, &mut c),
        CheckId::C2 => c2(cert, &mut c),
        CheckId::C3 => c3(cert, &mut c),
        CheckId::C4 => c4(cert, &mut c),
        CheckId::C5 => c5(cert, &mut c),
        CheckId::C6 => c6(cert, &mut c),
        CheckId::C7 => c7(cert, &mut c),
        CheckId::C8 => c8(cert, &mut c),
        CheckId::C9 => c9(cert, &mut c),
        CheckId::C10 => c10(cert, &mut c),
        CheckId::C11 => c11(cert, &mut c),
        CheckId::C12 => unreachable!("derived from the others"),
    }
    c.finish(id)
}

/// Runs C1 to C11 independently (in parallel) and derives C12 from them.
/// The embedded check list of `cert`, if any, is ignored.
pub fn verify(cert: &Certificate) -> CheckReport {
    let mut checks: Vec<CheckResult> = CheckId::ALL[..11].par_iter().map(|&id| run(id, cert)).collect();
    let ledger = if supported(cert.p) { c12(cert, &checks) } else { run_unsupported_ledger(cert) };
    checks.push(ledger);
    CheckReport { checks }
}

fn run_unsupported_ledger(cert: &Certificate) -> CheckResult {
    let mut c = Claims::new();
    c.fail(format!("p = {} is not a prime in [5, {MAX_SUPPORTED_PRIME}]", cert.p));
    c.finish(CheckId::C12)
}
