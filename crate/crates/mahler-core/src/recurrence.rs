//! Exact linear recurrences of nonnegative integers: term generation,
//! characteristic polynomials, and the decision procedures that gate
//! every analytic construction downstream.
//!
//! All decisions here are exact. Strict dominance of the positive
//! characteristic root is settled by primitivity of the coefficient
//! support (the companion digraph is strongly connected, so the
//! spectrum has a modulus tie iff gcd(n, {i : c_i > 0}) > 1), the
//! root-of-unity ratio test by resultants and cyclotomic division, and
//! the zero-factor shift index by rational power equations plus
//! saturated-state cycle detection.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::factor::{irreducible_over_q, IrredWitness, Irreducibility};
use crate::poly::roots::unique_positive_root;
use crate::poly::{cyclotomic, euler_phi, root_ratio_resultant, IPoly};
use crate::report::{overall, Clause, Verdict};
use crate::scalars::cerr::{CCtx, CErr};
use crate::scalars::dyadic::Dyadic;
use crate::scalars::{Place, Rat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("order must be at least 2")]
    OrderTooSmall,
    #[error("last coefficient must be nonzero")]
    LastCoeffZero,
    #[error("coefficients must be nonnegative")]
    NegativeCoeff,
    #[error("initial terms must be nonnegative")]
    NegativeInit,
    #[error("initial terms must not all be zero")]
    AllZeroInit,
    #[error("need exactly as many initial terms as coefficients")]
    InitLengthMismatch,
    #[error("scale must satisfy 0 < |a| < 1 at the chosen place")]
    BadScale,
    #[error("requires the archimedean condition to hold")]
    ConditionNotMet,
    #[error("characteristic polynomial has repeated roots")]
    NonSquarefree,
    #[error("a factor 1 - a^R_k beta vanishes for infinitely many k")]
    NoValidShift,
}

pub struct LinearRecurrence {
    c: Vec<u64>,
    init: Vec<BigInt>,
    cache: Mutex<Vec<BigInt>>,
}

impl Clone for LinearRecurrence {
    fn clone(&self) -> Self {
        LinearRecurrence {
            c: self.c.clone(),
            init: self.init.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for LinearRecurrence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearRecurrence")
            .field("c", &self.c)
            .field("init", &self.init)
            .finish()
    }
}

impl PartialEq for LinearRecurrence {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.init == other.init
    }
}
impl Eq for LinearRecurrence {}

pub fn make_recurrence(c: &[i64], init: &[i64]) -> Result<LinearRecurrence, RecurrenceError> {
    if c.len() < 2 {
        return Err(RecurrenceError::OrderTooSmall);
    }
    if init.len() != c.len() {
        return Err(RecurrenceError::InitLengthMismatch);
    }
    if c.iter().any(|&x| x < 0) {
        return Err(RecurrenceError::NegativeCoeff);
    }
    if init.iter().any(|&x| x < 0) {
        return Err(RecurrenceError::NegativeInit);
    }
    if *c.last().unwrap() == 0 {
        return Err(RecurrenceError::LastCoeffZero);
    }
    if init.iter().all(|&x| x == 0) {
        return Err(RecurrenceError::AllZeroInit);
    }
    Ok(LinearRecurrence::from_parts(
        c.iter().map(|&x| x as u64).collect(),
        init.iter().map(|&x| BigInt::from(x)).collect(),
    ))
}

impl LinearRecurrence {
    fn from_parts(c: Vec<u64>, init: Vec<BigInt>) -> Self {
        let cache = Mutex::new(init.clone());
        LinearRecurrence { c, init, cache }
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.init
    }

    /// R_k, exactly.
    pub fn term(&self, k: usize) -> BigInt {
        let mut cache = self.cache.lock().unwrap();
        self.extend_cache(&mut cache, k + 1);
        cache[k].clone()
    }

    /// R_0 .. R_{count-1}.
    pub fn terms(&self, count: usize) -> Vec<BigInt> {
        let mut cache = self.cache.lock().unwrap();
        self.extend_cache(&mut cache, count);
        cache[..count].to_vec()
    }

    fn extend_cache(&self, cache: &mut Vec<BigInt>, len: usize) {
        let n = self.order();
        while cache.len() < len {
            let k = cache.len();
            let mut next = BigInt::zero();
            for (i, &ci) in self.c.iter().enumerate() {
                if ci != 0 {
                    next += BigInt::from(ci) * &cache[k - 1 - i];
                }
            }
            debug_assert!(k >= n);
            cache.push(next);
        }
    }

    /// X^n - c_1 X^{n-1} - ... - c_n.
    pub fn char_poly(&self) -> IPoly {
        let n = self.order();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        for (i, &ci) in self.c.iter().enumerate() {
            coeffs[n - 1 - i] = -BigInt::from(ci);
        }
        IPoly::new(coeffs)
    }

    /// True iff R_1 != 0 and R_k R_{k+2} = R_{k+1}^2 for 0 <= k <= n-2,
    /// which forces the whole sequence geometric.
    pub fn is_geometric(&self) -> bool {
        let n = self.order();
        let t = self.terms(n + 1);
        if t[1].is_zero() {
            return false;
        }
        (0..=n - 2).all(|k| &t[k] * &t[k + 2] == &t[k + 1] * &t[k + 1])
    }

    /// min(R_k, ..., R_{k+n-1}); nondecreasing in k.
    pub fn window_min(&self, k: usize) -> BigInt {
        let n = self.order();
        let t = self.terms(k + n);
        t[k..k + n].iter().min().unwrap().clone()
    }

    /// Smallest k with window_min(k) > 0, if any within the cap.
    pub fn first_window_positive(&self, cap: usize) -> Option<usize> {
        (0..cap).find(|&k| self.window_min(k).is_positive())
    }

    pub fn sum_coeffs(&self) -> u64 {
        self.c.iter().sum()
    }

    /// gcd of the order with every index carrying a positive
    /// coefficient; 1 certifies a strictly dominant positive root.
    pub fn support_gcd(&self) -> u64 {
        let mut d = self.order() as u64;
        for (i, &ci) in self.c.iter().enumerate() {
            if ci != 0 {
                d = d.gcd(&(i as u64 + 1));
            }
        }
        d
    }
}

/// Same coefficients, initial window moved to R_{k0}..R_{k0+n-1}.
pub fn shift(rec: &LinearRecurrence, k0: usize) -> LinearRecurrence {
    let n = rec.order();
    let t = rec.terms(k0 + n);
    LinearRecurrence::from_parts(rec.c.clone(), t[k0..k0 + n].to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioVerdict {
    No,
    /// Smallest m for which some ratio of distinct roots is a
    /// primitive m-th root of unity.
    Yes(u64),
}

/// Decide whether any ratio of two distinct roots of phi is a root of
/// unity, via the exact ratio polynomial and a cyclotomic scan.
pub fn ratio_roots_root_of_unity(phi: &IPoly) -> Result<RatioVerdict, RecurrenceError> {
    if !phi.is_squarefree() {
        return Err(RecurrenceError::NonSquarefree);
    }
    let n = phi.deg().expect("nonconstant polynomial required");
    if n < 2 {
        return Ok(RatioVerdict::No);
    }
    let mut psi = root_ratio_resultant(phi);
    let x_minus_1 = IPoly::from_i64(&[-1, 1]);
    for _ in 0..n {
        psi = psi
            .div_exact(&x_minus_1)
            .expect("ratio polynomial lacks its diagonal factor");
    }
    let psi = psi.primitive_part();
    let d = psi.deg().unwrap_or(0);
    if d == 0 {
        return Ok(RatioVerdict::No);
    }
    // phi(m) >= sqrt(m/2), so phi(m) <= d bounds m by 2d^2
    for m in 2..=2 * (d as u64) * (d as u64) {
        if euler_phi(m) as usize > d {
            continue;
        }
        let (_, r) = psi.div_rem_monic(&cyclotomic(m));
        if r.is_zero() {
            return Ok(RatioVerdict::Yes(m));
        }
    }
    Ok(RatioVerdict::No)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionReport {
    pub place: String,
    pub clauses: Vec<Clause>,
    pub overall: Verdict,
}

impl ConditionReport {
    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }
}

/// Decide the archimedean condition (for the infinite place) or its
/// stronger p-adic refinement (irreducibility plus root dominance, with
/// the implied archimedean clauses also reported).
pub fn check_condition(rec: &LinearRecurrence, place: &Place) -> ConditionReport {
    let phi = rec.char_poly();
    let mut clauses = Vec::new();

    if matches!(place, Place::P(_)) {
        clauses.push(irreducible_clause(&phi));
        clauses.push(perron_clause(rec));
    }

    let at1 = phi.eval_int(&BigInt::one());
    let atm1 = phi.eval_int(&BigInt::from(-1));
    let pm_verdict = if !at1.is_zero() && !atm1.is_zero() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    clauses.push(Clause::new(
        "phi_pm1_nonzero",
        pm_verdict,
        format!("charpoly(1) = {at1}, charpoly(-1) = {atm1}"),
    ));

    clauses.push(match ratio_roots_root_of_unity(&phi) {
        Ok(RatioVerdict::No) => Clause::new(
            "ratio_not_root_of_unity",
            Verdict::Pass,
            "root-ratio polynomial has no cyclotomic factor",
        ),
        Ok(RatioVerdict::Yes(m)) => Clause::new(
            "ratio_not_root_of_unity",
            Verdict::Fail,
            format!("some root ratio is a primitive {m}-th root of unity"),
        ),
        Err(_) => Clause::new(
            "ratio_not_root_of_unity",
            Verdict::Unknown,
            "characteristic polynomial has repeated roots",
        ),
    });

    clauses.push(if rec.is_geometric() {
        let ratio = Rat::new(rec.term(1), rec.term(0));
        Clause::new(
            "not_geometric",
            Verdict::Fail,
            format!("terms form a geometric progression with ratio {ratio}"),
        )
    } else {
        Clause::new("not_geometric", Verdict::Pass, geometric_refutation(rec))
    });

    let overall = overall(clauses.iter().map(|c| c.verdict));
    ConditionReport {
        place: place.to_string(),
        clauses,
        overall,
    }
}

fn geometric_refutation(rec: &LinearRecurrence) -> String {
    let n = rec.order();
    let t = rec.terms(n + 1);
    if t[1].is_zero() {
        return "second term is zero".into();
    }
    for k in 0..=n - 2 {
        if &t[k] * &t[k + 2] != &t[k + 1] * &t[k + 1] {
            return format!(
                "term({k})*term({}) = {} differs from term({})^2 = {}",
                k + 2,
                &t[k] * &t[k + 2],
                k + 1,
                &t[k + 1] * &t[k + 1]
            );
        }
    }
    unreachable!("called only on non-geometric input")
}

fn irreducible_clause(phi: &IPoly) -> Clause {
    match irreducible_over_q(phi) {
        Irreducibility::Irreducible(w) => {
            let evidence = match w {
                IrredWitness::Degree => "degree 1".to_string(),
                IrredWitness::LinearFactorScreen => {
                    "no rational root, degree at most 3".to_string()
                }
                IrredWitness::ModularIrreducible(p) => {
                    format!("irreducible modulo {p}")
                }
                IrredWitness::DegreePatterns(ps) => {
                    format!("incompatible factor-degree patterns modulo {ps:?}")
                }
                IrredWitness::Recombination(p) => {
                    format!("no modular factor subset lifts from p = {p}")
                }
            };
            Clause::new("irreducible", Verdict::Pass, evidence)
        }
        Irreducibility::Reducible(g) => Clause::new(
            "irreducible",
            Verdict::Fail,
            format!("factor found: {}", g.render("X")),
        ),
        Irreducibility::Unknown(reason) => Clause::new("irreducible", Verdict::Unknown, reason),
    }
}

fn perron_clause(rec: &LinearRecurrence) -> Clause {
    let d = rec.support_gcd();
    if d == 1 {
        Clause::new(
            "perron_dominant",
            Verdict::Pass,
            "coefficient support has gcd 1: companion matrix is primitive, \
             so the positive root strictly dominates",
        )
    } else {
        Clause::new(
            "perron_dominant",
            Verdict::Fail,
            format!(
                "coefficient support has gcd {d}: spectrum is invariant under \
                 rotation by a {d}-th root of unity, so the modulus is tied"
            ),
        )
    }
}

/// Isolated characteristic roots with the certified positive root
/// bracketed separately.
pub struct CharPolyAnalysis {
    pub phi: IPoly,
    pub roots: Vec<CErr>,
    pub perron: CErr,
}

pub fn analyze_char_poly(
    rec: &LinearRecurrence,
    prec: u32,
) -> Result<CharPolyAnalysis, crate::poly::roots::RootError> {
    let phi = rec.char_poly();
    let roots = crate::poly::roots::certified_roots(&phi, prec)?;
    let (lb, ub) = unique_positive_root(&phi, prec);
    Ok(CharPolyAnalysis {
        phi,
        roots,
        perron: ball_from_bracket(&lb, &ub),
    })
}

fn ball_from_bracket(lb: &Dyadic, ub: &Dyadic) -> CErr {
    let center = lb.add_exact(ub).mul_pow2(-1);
    let err = ub.sub_exact(lb).abs().mul_pow2(-1);
    CErr::real_ball(center, err)
}

/// Perron root and the leading coefficient of R_k ~ c rho^k, estimated
/// at index k with the spread of the last ten ratios folded into the
/// returned error radius.
pub fn growth_estimate(
    rec: &LinearRecurrence,
    k: usize,
) -> Result<(CErr, CErr), RecurrenceError> {
    if check_condition(rec, &Place::Inf).overall != Verdict::Pass {
        return Err(RecurrenceError::ConditionNotMet);
    }
    let big_k = k.max(20);
    let ctx = CCtx::new(256);
    let (lb, ub) = unique_positive_root(&rec.char_poly(), 320);
    let rho = ball_from_bracket(&lb, &ub);
    let rho_inv = rho.recip(&ctx).expect("positive root is nonzero");
    let terms = rec.terms(big_k + 1);
    let mut ratios = Vec::new();
    for kk in big_k - 9..=big_k {
        let t = CErr::from_rat(&Rat::from_integer(terms[kk].clone()), &ctx);
        let r = t.mul(&rho_inv.pow(&BigUint::from(kk), &ctx), &ctx);
        ratios.push(r);
    }
    let last = ratios.last().unwrap().clone();
    let mut err = last.err.clone();
    for r in &ratios {
        let dev = r.center_dist_ub(&last).up_add(&r.err);
        err = Dyadic::max_val(&err, &dev);
    }
    let c = CErr {
        re: last.re,
        im: last.im,
        err,
    };
    Ok((rho, c))
}

/// Exponent values R with a^R * beta = 1 for some listed beta: the
/// recurrence indices hitting these values are exactly the vanishing
/// factors 1 - a^{R_k} beta.
pub(crate) fn forbidden_exponents(a: &Rat, betas: &[Rat]) -> Vec<BigInt> {
    let (an, ad) = (a.numer().abs(), a.denom().abs());
    let a_neg = a.numer().is_negative();
    let mut out = Vec::new();
    for beta in betas {
        if beta.is_zero() {
            continue;
        }
        let (bn, bd) = (beta.numer().abs(), beta.denom().abs());
        let b_neg = beta.numer().is_negative();
        // a^R = 1/beta in lowest terms forces an^R = bd, ad^R = bn
        let r = if ad > BigInt::one() {
            exact_power_log(&ad, &bn)
        } else {
            exact_power_log(&an, &bd)
        };
        let Some(r) = r else { continue };
        if pow_big(&an, r) != bd || pow_big(&ad, r) != bn {
            continue;
        }
        let sign_ok = if a_neg && r % 2 == 1 { b_neg } else { !b_neg };
        if sign_ok {
            out.push(BigInt::from(r));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn pow_big(base: &BigInt, e: u64) -> BigInt {
    base.pow(e.try_into().unwrap_or(u32::MAX))
}

/// r with base^r = target, for base >= 2.
fn exact_power_log(base: &BigInt, target: &BigInt) -> Option<u64> {
    if target.is_one() {
        return Some(0);
    }
    if base <= &BigInt::one() {
        return None;
    }
    let mut acc = base.clone();
    let mut r = 1u64;
    while &acc < target {
        acc *= base;
        r += 1;
    }
    (&acc == target).then_some(r)
}

/// Smallest k0 with 1 - a^{R_k} beta_j nonzero for every k >= k0 and
/// every j. Exact: the finitely many forbidden term values are found by
/// solving rational power equations, then the index set hitting them is
/// decided by cycle detection on value-saturated windows.
pub fn compute_k0(
    rec: &LinearRecurrence,
    a: &Rat,
    betas: &[Rat],
    place: &Place,
) -> Result<usize, RecurrenceError> {
    validate_scale(a, place)?;
    let forbidden = forbidden_exponents(a, betas);
    let hits = indices_with_term_in(rec, &forbidden)?;
    Ok(hits.last().map_or(0, |b| b + 1))
}

/// Every k with R_k in `targets`. The walk clamps values above max(targets),
/// so states live in a finite set and either cycle cleanly (finite answer) or
/// revisit a hit inside the cycle (infinitely many, reported as NoValidShift).
pub(crate) fn indices_with_term_in(
    rec: &LinearRecurrence,
    targets: &[BigInt],
) -> Result<Vec<usize>, RecurrenceError> {
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    let cap = targets.iter().max().unwrap() + 1;
    let n = rec.order();
    let clamp = |v: BigInt| if v > cap { cap.clone() } else { v };

    let mut state: Vec<BigInt> = rec.init.iter().cloned().map(&clamp).collect();
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut hits: Vec<usize> = Vec::new();
    let mut k = 0usize;
    loop {
        if let Some(&cycle_start) = seen.get(&state) {
            // indices >= cycle_start recur forever
            if hits.last().is_some_and(|&b| b >= cycle_start) {
                return Err(RecurrenceError::NoValidShift);
            }
            return Ok(hits);
        }
        seen.insert(state.clone(), k);
        if targets.contains(&state[0]) {
            hits.push(k);
        }
        let mut next = BigInt::zero();
        for (i, &ci) in rec.c.iter().enumerate() {
            if ci != 0 {
                next += BigInt::from(ci) * &state[n - 1 - i];
            }
        }
        state.rotate_left(1);
        state[n - 1] = clamp(next);
        k += 1;
        assert!(k <= 1_000_000, "saturated state walk failed to cycle");
    }
}

pub(crate) fn validate_scale(a: &Rat, place: &Place) -> Result<(), RecurrenceError> {
    match place {
        Place::Inf => {
            if a.is_zero() || a.abs() >= Rat::from_integer(BigInt::one()) {
                return Err(RecurrenceError::BadScale);
            }
        }
        Place::P(p) => {
            if a.is_zero() || crate::scalars::padic::padic_val_rat(a, *p) <= 0 {
                return Err(RecurrenceError::BadScale);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn fib() -> LinearRecurrence {
        make_recurrence(&[1, 1], &[1, 2]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(make_recurrence(&[1, 1], &[1, 2]).is_ok());
        assert_eq!(
            make_recurrence(&[1, 1], &[0, 0]),
            Err(RecurrenceError::AllZeroInit)
        );
        assert_eq!(
            make_recurrence(&[1, 0], &[1, 1]),
            Err(RecurrenceError::LastCoeffZero)
        );
        assert_eq!(make_recurrence(&[2], &[1]), Err(RecurrenceError::OrderTooSmall));
        assert_eq!(
            make_recurrence(&[1, -1], &[1, 1]),
            Err(RecurrenceError::NegativeCoeff)
        );
        assert_eq!(
            make_recurrence(&[1, 1], &[1, -1]),
            Err(RecurrenceError::NegativeInit)
        );
        assert_eq!(
            make_recurrence(&[1, 1], &[1, 1, 1]),
            Err(RecurrenceError::InitLengthMismatch)
        );
    }

    #[test]
    fn terms_match_unrolling() {
        let r = fib();
        let t: Vec<i64> = (0..5).map(|k| r.term(k).to_i64().unwrap()).collect();
        assert_eq!(t, vec![1, 2, 3, 5, 8]);
        let r2 = make_recurrence(&[1, 2], &[1, 2]).unwrap();
        assert_eq!(r2.term(2), BigInt::from(4));
        assert_eq!(r2.term(0), BigInt::from(1));
    }

    #[test]
    fn matrix_power_cross_oracle() {
        // companion-matrix power vs iterative unrolling
        let r = make_recurrence(&[2, 0, 3], &[1, 0, 2]).unwrap();
        let n = r.order();
        let mut mat = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            mat[0][i] = BigInt::from(r.coeffs()[i]);
        }
        for i in 1..n {
            mat[i][i - 1] = BigInt::one();
        }
        let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| {
            let mut z = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for l in 0..n {
                    for j in 0..n {
                        z[i][j] += &x[i][l] * &y[l][j];
                    }
                }
            }
            z
        };
        // state vector (R_{k+n-1},...,R_k); after one application of mat
        // it advances by one index
        let mut pw = mat.clone();
        for k in 1..=200usize {
            // top row of mat^k dotted with (R_{n-1},...,R_0) = R_{n-1+k}
            let mut top = BigInt::zero();
            for j in 0..n {
                top += &pw[0][j] * r.term(n - 1 - j);
            }
            assert_eq!(top, r.term(n - 1 + k), "k = {k}");
            pw = mul(&pw, &mat);
        }
    }

    #[test]
    fn geometric_detection() {
        assert!(make_recurrence(&[1, 2], &[1, 2]).unwrap().is_geometric());
        assert!(!fib().is_geometric());
        assert!(!make_recurrence(&[1, 1], &[0, 1]).unwrap().is_geometric());
    }

    #[test]
    fn ratio_verdicts() {
        assert_eq!(
            ratio_roots_root_of_unity(&fib().char_poly()).unwrap(),
            RatioVerdict::No
        );
        assert_eq!(
            ratio_roots_root_of_unity(&IPoly::from_i64(&[-2, 0, 1])).unwrap(),
            RatioVerdict::Yes(2)
        );
        assert_eq!(
            ratio_roots_root_of_unity(&IPoly::from_i64(&[2, -3, 1])).unwrap(),
            RatioVerdict::No
        );
        assert_eq!(
            ratio_roots_root_of_unity(&IPoly::from_i64(&[1, -2, 1])),
            Err(RecurrenceError::NonSquarefree)
        );
    }

    #[test]
    fn condition_fibonacci_both_places() {
        let inf = check_condition(&fib(), &Place::Inf);
        assert_eq!(inf.overall, Verdict::Pass);
        assert_eq!(inf.clauses.len(), 3);
        let pm = inf.clause("phi_pm1_nonzero").unwrap();
        assert!(pm.evidence.contains("-1") && pm.evidence.contains("1"));
        let p2 = check_condition(&fib(), &Place::P(2));
        assert_eq!(p2.overall, Verdict::Pass);
        assert_eq!(p2.clauses.len(), 5);
        assert_eq!(p2.clause("irreducible").unwrap().verdict, Verdict::Pass);
        assert_eq!(p2.clause("perron_dominant").unwrap().verdict, Verdict::Pass);
        assert_eq!(p2.place, "p:2");
    }

    #[test]
    fn condition_geometric_fails() {
        let r = make_recurrence(&[1, 2], &[1, 2]).unwrap();
        let rep = check_condition(&r, &Place::Inf);
        assert_eq!(rep.overall, Verdict::Fail);
        assert_eq!(rep.clause("not_geometric").unwrap().verdict, Verdict::Fail);
        assert!(rep
            .clause("not_geometric")
            .unwrap()
            .evidence
            .contains("ratio 2"));
    }

    #[test]
    fn condition_modulus_tie_fails() {
        // X^2 - 2: roots +-sqrt(2), modulus tied, ratio -1
        let r = make_recurrence(&[0, 2], &[1, 1]).unwrap();
        let rep = check_condition(&r, &Place::P(3));
        assert_eq!(rep.overall, Verdict::Fail);
        assert_eq!(
            rep.clause("perron_dominant").unwrap().verdict,
            Verdict::Fail
        );
        assert_eq!(
            rep.clause("ratio_not_root_of_unity").unwrap().verdict,
            Verdict::Fail
        );
        assert!(rep
            .clause("ratio_not_root_of_unity")
            .unwrap()
            .evidence
            .contains("2-th root"));
    }

    #[test]
    fn growth_estimate_golden_ratio() {
        let (rho, c) = growth_estimate(&fib(), 120).unwrap();
        // oracle: root of X^2-X-1 is (1+sqrt(5))/2; leading coefficient
        // is phi^2/sqrt(5) = (5+3*sqrt(5))/10
        let phi_ref = 1.618033988749894848;
        let c_ref = 1.170820393249936909;
        assert!((rho.re.to_f64_approx() - phi_ref).abs() < 1e-12);
        assert!((c.re.to_f64_approx() - c_ref).abs() < 1e-9);
        assert!(c.err.to_f64_approx() < 1e-9);
        let r2 = make_recurrence(&[2, 1], &[1, 2]).unwrap();
        let (rho2, _) = growth_estimate(&r2, 60).unwrap();
        assert!((rho2.re.to_f64_approx() - 2.414213562373095049).abs() < 1e-12);
    }

    #[test]
    fn growth_estimate_requires_condition() {
        let r = make_recurrence(&[1, 2], &[1, 2]).unwrap();
        assert!(matches!(
            growth_estimate(&r, 60),
            Err(RecurrenceError::ConditionNotMet)
        ));
    }

    #[test]
    fn k0_examples() {
        let r = fib();
        let half = Rat::new(1.into(), 2.into());
        let q = |n: i64| Rat::from_integer(BigInt::from(n));
        assert_eq!(
            compute_k0(&r, &half, &[q(2)], &Place::Inf).unwrap(),
            1 // 1 - (1/2)^{R_0} * 2 = 0 at R_0 = 1 only
        );
        assert_eq!(compute_k0(&r, &half, &[q(3)], &Place::Inf).unwrap(), 0);
        assert_eq!(compute_k0(&r, &half, &[q(1)], &Place::Inf).unwrap(), 0);
        // R_k = 5 occurs at k = 3: forbidden exponent from beta = 32
        assert_eq!(compute_k0(&r, &half, &[q(32)], &Place::Inf).unwrap(), 4);
        assert_eq!(
            compute_k0(&r, &half, &[q(2), q(32)], &Place::Inf).unwrap(),
            4
        );
        // negative scale: (-1/2)^R * (-32) = 1 needs odd R = 5
        let neg_half = Rat::new((-1).into(), 2.into());
        assert_eq!(
            compute_k0(&r, &neg_half, &[q(-32)], &Place::Inf).unwrap(),
            4
        );
        assert_eq!(compute_k0(&r, &neg_half, &[q(32)], &Place::Inf).unwrap(), 0);
    }

    #[test]
    fn k0_padic_scale_rules() {
        let r = fib();
        let two = Rat::from_integer(2.into());
        // |2|_2 = 1/2: valid scale 2-adically, forbidden exponent from
        // beta = 1/4 is R = 2, which occurs at k = 1
        let quarter = Rat::new(1.into(), 4.into());
        assert_eq!(compute_k0(&r, &two, &[quarter], &Place::P(2)).unwrap(), 2);
        assert_eq!(
            compute_k0(&r, &two, &[Rat::from_integer(3.into())], &Place::P(2)).unwrap(),
            0
        );
        assert!(matches!(
            compute_k0(&r, &Rat::from_integer(3.into()), &[], &Place::P(2)),
            Err(RecurrenceError::BadScale)
        ));
        assert!(matches!(
            compute_k0(&r, &Rat::new(1.into(), 2.into()), &[], &Place::P(2)),
            Err(RecurrenceError::BadScale)
        ));
        assert!(matches!(
            compute_k0(&r, &two, &[], &Place::Inf),
            Err(RecurrenceError::BadScale)
        ));
    }

    #[test]
    fn k0_periodic_sequences() {
        // c = (0,1): sequence repeats 1,2,1,2,...; the value 1 recurs
        // forever so no shift clears beta = 2
        let r = make_recurrence(&[0, 1], &[1, 2]).unwrap();
        let half = Rat::new(1.into(), 2.into());
        assert!(matches!(
            compute_k0(&r, &half, &[Rat::from_integer(2.into())], &Place::Inf),
            Err(RecurrenceError::NoValidShift)
        ));
        assert_eq!(
            compute_k0(&r, &half, &[Rat::from_integer(8.into())], &Place::Inf).unwrap(),
            0
        );
    }

    #[test]
    fn shift_moves_window() {
        let s = shift(&fib(), 2);
        assert_eq!(s.initial(), &[BigInt::from(3), BigInt::from(5)]);
        assert_eq!(s.coeffs(), fib().coeffs());
        assert_eq!(s.term(2), BigInt::from(8));
    }

    #[test]
    fn char_poly_analysis_isolates_roots() {
        let a = analyze_char_poly(&fib(), 128).unwrap();
        assert_eq!(a.roots.len(), 2);
        assert_eq!(a.phi.deg(), Some(2));
        assert!((a.perron.re.to_f64_approx() - 1.618033988749895).abs() < 1e-12);
    }
}
