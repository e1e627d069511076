//! Evaluation of the recurrence-generated series and products, with a
//! certified truncation bound at every place.
//!
//! Everything here exploits that evaluation points are rational: the
//! K-term partial sum is an exact rational (or an exact rational jet),
//! so the only error sources are the discarded tail and the final
//! embedding into a complex ball or a finite-precision p-adic. Tails
//! are controlled by the window bound: window_min is nondecreasing, and
//! doubles every `order` steps once the coefficient sum is at least 2,
//! so past a cut the terms are dominated block-by-block by a geometric
//! series with ratio <= 1/2 (archimedean) or their valuations grow at
//! least linearly in the doubling count (p-adic).
//!
//! Summation is ascending in k and the truncation index depends only on
//! the inputs, so results are bit-for-bit reproducible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::recurrence::{
    forbidden_exponents, indices_with_term_in, validate_scale, LinearRecurrence, RecurrenceError,
};
use crate::scalars::cerr::{CCtx, CErr};
use crate::scalars::jet::{BiJet, JetCtx};
use crate::scalars::padic::{padic_val_rat, PAdic, PCtx};
use crate::scalars::{Dyadic, Place, Rat, Round, Scalar, TailBound};
use crate::transform::{monomial_exponents, MPoint};

/// Which member of the family an instance evaluates. The single-point
/// series and products take the scale from the instance; the
/// multi-variable forms replace it by a point acted on by the exponent
/// matrix and are evaluated through the dedicated `_multi` entry points.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionId {
    /// m-th derived series: m! * sum a^{(m+1) R_k} x^k. m = 0 is the plain series.
    F { m: u32 },
    /// prod (1 - a^{R_k} y)
    G,
    /// sum a^{R_k} x^k / (1 - a^{R_k} y)
    H,
    /// sum_k a^{R_k} x^k prod_{j != k} (1 - a^{R_j} y)
    Theta,
    /// d(Theta)/dy
    Xi,
    /// sum x^k z^{d^k}
    GDary { d: u32 },
    /// sum x^k M(z_k)^{m+1}, no factorial
    FMulti { m: u32 },
    /// prod (1 - beta M(z_k))
    GMulti { beta: Rat },
    /// sum x^k (M(z_k) / (1 - beta M(z_k)))^{m+1}
    HMulti { m: u32, beta: Rat },
}

#[derive(Debug)]
pub struct FunctionInstance {
    rec: LinearRecurrence,
    a: Rat,
    place: Place,
    id: FunctionId,
}

impl FunctionInstance {
    pub fn new(
        rec: LinearRecurrence,
        a: Rat,
        place: Place,
        id: FunctionId,
    ) -> Result<Self, EvalError> {
        check_place(&place)?;
        validate_scale(&a, &place)?;
        match &id {
            FunctionId::GDary { d } if *d < 2 => {
                return Err(EvalError::BadPoint("base d must be at least 2".into()))
            }
            FunctionId::GMulti { beta } | FunctionId::HMulti { beta, .. } if beta.is_zero() => {
                return Err(EvalError::BadPoint("beta must be nonzero".into()))
            }
            _ => {}
        }
        Ok(FunctionInstance { rec, a, place, id })
    }

    pub fn recurrence(&self) -> &LinearRecurrence {
        &self.rec
    }
    pub fn scale(&self) -> &Rat {
        &self.a
    }
    pub fn place(&self) -> Place {
        self.place
    }
    pub fn id(&self) -> &FunctionId {
        &self.id
    }

    /// The distinguished point (1, ..., 1, a) at which the multi-variable
    /// forms specialize to the single-point ones.
    pub fn gamma_point(&self) -> Result<MPoint, EvalError> {
        let n = self.rec.order();
        let mut coords = vec![rat_one(); n];
        coords[n - 1] = self.a.clone();
        MPoint::new(coords, self.place).map_err(|e| EvalError::BadPoint(e.to_string()))
    }
}

#[derive(Error, Debug, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
    #[error("denominator 1 - a^(R_k) y vanishes at k = {0}")]
    PoleAtY(usize),
    #[error("point outside the certified convergence domain: {0}")]
    NotInDomain(String),
    #[error("bad evaluation point: {0}")]
    BadPoint(String),
    #[error("no certified truncation: {0}")]
    TruncationFailed(String),
    #[error("{0}")]
    Unsupported(String),
}

/// A value at one place.
#[derive(Clone, Debug)]
pub enum Value {
    C(CErr),
    P(PAdic),
}

impl Value {
    pub fn as_complex(&self) -> Option<&CErr> {
        match self {
            Value::C(c) => Some(c),
            _ => None,
        }
    }
    pub fn as_padic(&self) -> Option<&PAdic> {
        match self {
            Value::P(p) => Some(p),
            _ => None,
        }
    }
}

/// Evaluation output: the embedded partial sum, the place it lives at,
/// the last included index, the certified bound on everything
/// discarded, and the indices of product factors that vanish exactly
/// (only products set these). The true value lies within (embedding
/// error + tail) of `value`.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Value,
    pub place: Place,
    pub truncation_k: usize,
    pub tail: TailBound,
    pub flags: Vec<usize>,
}

impl EvalResult {
    /// The value with the tail folded into its uncertainty.
    pub fn certified(&self, prec: u32) -> Value {
        match &self.value {
            Value::C(c) => {
                let mut c = c.clone();
                c.absorb_tail(&self.tail, &CCtx::new(prec + 32));
                Value::C(c)
            }
            Value::P(p) => {
                let Place::P(pp) = self.place else {
                    unreachable!("p-adic value at an archimedean place")
                };
                let mut p = p.clone();
                p.absorb_tail(&self.tail, &PCtx::new(pp, prec).expect("place validated"));
                Value::P(p)
            }
        }
    }
}

/// How many factors of the product vanish at beta, with their indices:
/// the multiplicity of beta as a root of the product.
#[derive(Clone, Debug, PartialEq)]
pub struct NBeta {
    pub count: usize,
    pub witnesses: Vec<usize>,
}

/// Indices k with a^{-R_k} = beta. The exponent equation is solved
/// exactly, then the index set is enumerated by the saturated-state
/// walk; infinitely many solutions surface as an error.
pub fn n_beta(inst: &FunctionInstance, beta: &Rat) -> Result<NBeta, EvalError> {
    if beta.is_zero() {
        return Err(EvalError::BadPoint("beta must be nonzero".into()));
    }
    let targets = forbidden_exponents(&inst.a, std::slice::from_ref(beta));
    let witnesses = indices_with_term_in(&inst.rec, &targets)?;
    Ok(NBeta {
        count: witnesses.len(),
        witnesses,
    })
}

#[derive(Clone, Debug)]
pub enum JetValue {
    C(BiJet<CErr>),
    P(BiJet<PAdic>),
}

/// Jet output; every coefficient already carries its truncation tail in
/// its uncertainty (error radius, or capped precision).
#[derive(Clone, Debug)]
pub struct JetResult {
    pub jet: JetValue,
    pub truncation_k: usize,
}

// ---------------------------------------------------------------------------
// rational helpers

fn rat_one() -> Rat {
    Rat::from_integer(BigInt::one())
}

fn rat_zero() -> Rat {
    Rat::from_integer(BigInt::zero())
}

fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn rat_pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << e as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

pub(crate) fn rat_powu(q: &Rat, e: u32) -> Rat {
    if e == 0 {
        return rat_one();
    }
    Rat::new(q.numer().pow(e), q.denom().pow(e))
}

pub(crate) fn a_pow(a: &Rat, r: &BigInt) -> Result<Rat, EvalError> {
    let e = r.to_u32().ok_or_else(|| {
        EvalError::TruncationFailed(format!("term exponent {r} exceeds the supported range"))
    })?;
    Ok(rat_powu(a, e))
}

fn factorial(m: u32) -> BigInt {
    (1..=u64::from(m)).map(BigInt::from).product()
}

/// Upper Dyadic bound of a nonnegative rational.
fn dy_ub(q: &Rat) -> Dyadic {
    debug_assert!(!q.is_negative());
    Dyadic::from_rat(q, 64, Round::Ceil).0
}

fn check_place(place: &Place) -> Result<(), EvalError> {
    if let Place::P(p) = place {
        PCtx::new(*p, 1).map_err(|e| EvalError::BadPoint(e.to_string()))?;
    }
    Ok(())
}

fn embed(q: &Rat, place: &Place, prec: u32) -> Value {
    match place {
        Place::Inf => Value::C(CErr::from_rat(q, &CCtx::new(prec + 32))),
        Place::P(p) => Value::P(PAdic::from_rat(
            q,
            &PCtx::new(*p, prec).expect("place validated"),
        )),
    }
}

/// p-adic valuation of a rational, with +infinity collapsed to a large
/// sentinel so it survives saturating arithmetic.
const VAL_INF: i64 = i64::MAX / 4;

fn val_or_inf(q: &Rat, p: u64) -> i64 {
    if q.is_zero() {
        VAL_INF
    } else {
        padic_val_rat(q, p)
    }
}

// ---------------------------------------------------------------------------
// tail machinery

const FROM_CAP: usize = 4096;
const WINDOW_CLAMP: u32 = 1 << 20;

fn win_u32(rec: &LinearRecurrence, at: usize) -> u32 {
    rec.window_min(at)
        .to_u32()
        .unwrap_or(WINDOW_CLAMP)
        .min(WINDOW_CLAMP)
}

/// Upper bound for sum_{k >= from} u^{R_{k+shift}} * xa^k (u in [0,1),
/// xa >= 0, both absolute values), or None when the block-geometric
/// argument does not close at this cut. Blocks of `order` consecutive
/// terms shrink by at least u^w * xa^order per block -- with the window
/// doubling available only when the coefficient sum is >= 2 -- so the
/// whole tail is at most twice the first block once that ratio is <= 1/2.
fn arch_series_tail(
    rec: &LinearRecurrence,
    u: &Rat,
    xa: &Rat,
    from: usize,
    shift: usize,
) -> Option<Rat> {
    let n = rec.order() as u32;
    let w = win_u32(rec, from + shift);
    let uw = rat_powu(u, w);
    let xan = rat_powu(xa, n);
    let r0 = if rec.sum_coeffs() >= 2 {
        &uw * &xan
    } else {
        xan
    };
    if r0 * rat_int(2) > rat_one() {
        return None;
    }
    let one = rat_one();
    let xhead = if *xa <= one {
        rat_powu(xa, from as u32)
    } else {
        rat_powu(xa, from as u32 + n)
    };
    Some(rat_int(2) * rat_int(i64::from(n)) * uw * xhead)
}

/// Lower bound for min_{k >= from} (R_{k+shift} * va + k * vx), va >= 1,
/// or None when the valuations do not certifiably go to infinity.
fn nonarch_series_tail(
    rec: &LinearRecurrence,
    va: i64,
    vx: i64,
    from: usize,
    shift: usize,
) -> Option<i64> {
    let n = rec.order() as i64;
    let w = i64::from(win_u32(rec, from + shift));
    if w == 0 && vx <= 0 {
        return None;
    }
    if vx >= 0 {
        // both parts nondecreasing in k: the first term is the minimum
        return Some(w.saturating_mul(va).saturating_add((from as i64).saturating_mul(vx)));
    }
    if rec.sum_coeffs() < 2 {
        // no window doubling against a negative drift
        return None;
    }
    // block j covers k in [from + j*n, from + (j+1)*n): exponents at
    // least w * 2^j there, k*vx above its value at the right endpoint
    let mut best = i64::MAX;
    for j in 0..64i64 {
        let m_j = w.saturating_mul(1i64 << j.min(40));
        let head = (from as i64 + (j + 1) * n).saturating_mul(vx);
        best = best.min(m_j.saturating_mul(va).saturating_add(head));
        if m_j.saturating_mul(va) >= n.saturating_mul(vx.abs()) {
            // later blocks only gain: each step adds m_j*va + n*vx >= 0
            return Some(best);
        }
    }
    None
}

fn arch_target(prec: u32) -> Rat {
    rat_pow2(-(i64::from(prec)) - 16)
}

fn find_k<T>(mut f: impl FnMut(usize) -> Option<T>) -> Result<(usize, T), EvalError> {
    for k in 0..FROM_CAP {
        if let Some(t) = f(k) {
            return Ok((k, t));
        }
    }
    Err(EvalError::TruncationFailed(
        "no truncation index certified the tail; the series may diverge at this point".into(),
    ))
}

// ---------------------------------------------------------------------------
// exact jet cores
//
// Every evaluator is the (0,0) corner of a jet computation, so the cores
// below produce an exact rational jet together with per-column tail
// bounds (uniform in the x-derivative order l, indexed by the
// y-derivative order m) and are shared between value and jet entry
// points.

type RJet = BiJet<Rat>;

enum PlaceTails {
    Arch(Vec<Rat>),
    NonArch(Vec<i64>),
}

struct Core {
    jet: RJet,
    k: usize,
    tails: PlaceTails,
    flags: Vec<usize>,
}

fn rctx(lx: usize, my: usize) -> JetCtx<Rat> {
    JetCtx::new(lx, my, ())
}

fn core_to_result(core: Core, place: &Place, prec: u32) -> EvalResult {
    let tail = match &core.tails {
        PlaceTails::Arch(v) => TailBound::Arch(dy_ub(&v[0])),
        PlaceTails::NonArch(v) => TailBound::NonArch(v[0]),
    };
    EvalResult {
        value: embed(core.jet.value(), place, prec),
        place: *place,
        truncation_k: core.k,
        tail,
        flags: core.flags,
    }
}

fn embed_core(core: Core, place: &Place, lx: usize, my: usize, prec: u32) -> JetResult {
    let jet = match place {
        Place::Inf => {
            let cctx = CCtx::new(prec + 32);
            let jctx = JetCtx::new(lx, my, cctx.clone());
            let PlaceTails::Arch(tails) = &core.tails else {
                unreachable!("place mismatch in jet tails")
            };
            let mut grid = Vec::with_capacity(lx + 1);
            for l in 0..=lx {
                let mut row = Vec::with_capacity(my + 1);
                for m in 0..=my {
                    let mut c = CErr::from_rat(core.jet.coeff(l, m), &cctx);
                    c.absorb_tail(&TailBound::Arch(dy_ub(&tails[m])), &cctx);
                    row.push(c);
                }
                grid.push(row);
            }
            JetValue::C(BiJet::try_new(grid, &jctx).expect("grid dimensions"))
        }
        Place::P(p) => {
            let pctx = PCtx::new(*p, prec).expect("place validated");
            let jctx = JetCtx::new(lx, my, pctx.clone());
            let PlaceTails::NonArch(tails) = &core.tails else {
                unreachable!("place mismatch in jet tails")
            };
            let mut grid = Vec::with_capacity(lx + 1);
            for l in 0..=lx {
                let mut row = Vec::with_capacity(my + 1);
                for m in 0..=my {
                    let mut c = PAdic::from_rat(core.jet.coeff(l, m), &pctx);
                    c.absorb_tail(&TailBound::NonArch(tails[m]), &pctx);
                    row.push(c);
                }
                grid.push(row);
            }
            JetValue::P(BiJet::try_new(grid, &jctx).expect("grid dimensions"))
        }
    };
    JetResult {
        jet,
        truncation_k: core.k,
    }
}

/// Exact powers a^{R_k} for k <= kk.
fn term_scales(rec: &LinearRecurrence, a: &Rat, kk: usize) -> Result<Vec<Rat>, EvalError> {
    rec.terms(kk + 1).iter().map(|r| a_pow(a, r)).collect()
}

fn f_jet_core(
    inst: &FunctionInstance,
    x0: &Rat,
    lx: usize,
    my: usize,
    mm: u32,
    prec: u32,
) -> Result<Core, EvalError> {
    let rec = &inst.rec;
    let fact = Rat::from_integer(factorial(mm));
    let msucc = mm + 1;

    // x0 = 0: only k = l contributes to coeff(l, .), so the jet up to
    // order lx is exact with no tail at all.
    let (kk, tails) = if x0.is_zero() {
        let zero_tails = match inst.place {
            Place::Inf => PlaceTails::Arch(vec![rat_zero(); my + 1]),
            Place::P(_) => PlaceTails::NonArch(vec![VAL_INF; my + 1]),
        };
        (lx, zero_tails)
    } else {
        match inst.place {
            Place::Inf => {
                let um = rat_powu(&inst.a.abs(), msucc);
                let xa = if lx == 0 {
                    x0.abs()
                } else {
                    rat_one() + x0.abs()
                };
                let bound = arch_target(prec);
                let (kk, t) = find_k(|k| {
                    let t = arch_series_tail(rec, &um, &xa, k + 1, 0)? * &fact;
                    (t <= bound).then_some(t)
                })?;
                let kk = kk.max(lx);
                let mut tails = vec![rat_zero(); my + 1];
                tails[0] = t;
                (kk, PlaceTails::Arch(tails))
            }
            Place::P(p) => {
                let va = padic_val_rat(&inst.a, p) * i64::from(msucc);
                let vx = padic_val_rat(x0, p);
                let adj = if vx > 0 { lx as i64 * vx } else { 0 };
                let target = i64::from(prec) + 8;
                let (kk, t) = find_k(|k| {
                    let t = nonarch_series_tail(rec, va, vx, k + 1, 0)? - adj;
                    (t >= target).then_some(t)
                })?;
                let kk = kk.max(lx);
                let mut tails = vec![VAL_INF; my + 1];
                tails[0] = t;
                (kk, PlaceTails::NonArch(tails))
            }
        }
    };

    let ctx = rctx(lx, my);
    let rs = rec.terms(kk + 1);
    let xj = BiJet::variable_x(x0.clone(), &ctx);
    let mut xpow = <RJet as Scalar>::one(&ctx);
    let mut acc = <RJet as Scalar>::zero(&ctx);
    for (k, r) in rs.iter().enumerate() {
        let coef = a_pow(&inst.a, &(r * BigInt::from(msucc)))? * &fact;
        acc = acc.add(&xpow.mul(&BiJet::constant(coef, &ctx), &ctx), &ctx);
        if k < kk {
            xpow = xpow.mul(&xj, &ctx);
        }
    }
    Ok(Core {
        jet: acc,
        k: kk,
        tails,
        flags: vec![],
    })
}

/// Per-column (in m) bounds for the coefficients of the missing far
/// factors prod_{k > K} (1 - a^{R_k}(y0 + Y)) minus one, archimedean:
/// column 0 is at most 2*tq, column j >= 1 at most tq1^j * (1 + 2*tq),
/// where tq1 bounds sum_{k>K} u^{R_k} and tq = |y0| * tq1.
fn qhat_bounds_arch(my: usize, tq: &Rat, tq1: &Rat) -> Vec<Rat> {
    let mut out = vec![rat_int(2) * tq];
    let scale = rat_one() + rat_int(2) * tq;
    let mut p = rat_one();
    for _ in 1..=my {
        p = &p * tq1;
        out.push(&p * &scale);
    }
    out
}

fn qhat_vals_nonarch(my: usize, vq0: i64, vstep: i64) -> Vec<i64> {
    let mut out = vec![vq0];
    for j in 1..=my as i64 {
        out.push(vstep.saturating_mul(j));
    }
    out
}

/// Tail columns for a product correction D = P * (Qhat - 1): combine the
/// known coefficient magnitudes of P (max over rows l) with the far-factor
/// column bounds.
fn product_tail_arch(pmax: &[Rat], qb: &[Rat]) -> Vec<Rat> {
    let my = pmax.len() - 1;
    (0..=my)
        .map(|m| {
            (0..=m)
                .map(|mp| &pmax[mp] * &qb[m - mp])
                .fold(rat_zero(), |a, b| a + b)
        })
        .collect()
}

fn product_tail_nonarch(pmin: &[i64], qv: &[i64]) -> Vec<i64> {
    let my = pmin.len() - 1;
    (0..=my)
        .map(|m| {
            (0..=m)
                .map(|mp| pmin[mp].saturating_add(qv[m - mp]))
                .min()
                .unwrap()
        })
        .collect()
}

/// Column-wise coefficient magnitudes of an exact jet: max over l of
/// |coeff(l, m)| resp. min over l of val(coeff(l, m)).
fn jet_col_mags(jet: &RJet, lx: usize, my: usize) -> Vec<Rat> {
    (0..=my)
        .map(|m| {
            (0..=lx)
                .map(|l| jet.coeff(l, m).abs())
                .max()
                .unwrap()
        })
        .collect()
}

fn jet_col_vals(jet: &RJet, lx: usize, my: usize, p: u64) -> Vec<i64> {
    (0..=my)
        .map(|m| {
            (0..=lx)
                .map(|l| val_or_inf(jet.coeff(l, m), p))
                .min()
                .unwrap()
        })
        .collect()
}

fn g_jet_core(
    inst: &FunctionInstance,
    y0: &Rat,
    lx: usize,
    my: usize,
    prec: u32,
) -> Result<Core, EvalError> {
    let rec = &inst.rec;
    let flags = if y0.is_zero() {
        vec![]
    } else {
        n_beta(inst, y0)?.witnesses
    };
    let startk = flags.last().copied().unwrap_or(0);

    // choose the cut
    enum Cut {
        Arch { tq: Rat, tq1: Rat },
        NonArch { vq0: i64, vstep: i64 },
    }
    let (kk, cut) = match inst.place {
        Place::Inf => {
            let u = inst.a.abs();
            let ya = y0.abs();
            let bound = arch_target(prec);
            let one = rat_one();
            find_k(|k| {
                if k < startk {
                    return None;
                }
                let tq1 = arch_series_tail(rec, &u, &one, k + 1, 0)?;
                let tq = &ya * &tq1;
                let small = rat_int(2) * &tq <= one && (my == 0 || rat_int(2) * &tq1 <= one);
                (small && tq <= bound).then_some(Cut::Arch { tq, tq1 })
            })?
        }
        Place::P(p) => {
            let va = padic_val_rat(&inst.a, p);
            let vy = val_or_inf(y0, p);
            let target = i64::from(prec) + 8;
            find_k(|k| {
                if k < startk {
                    return None;
                }
                let w = i64::from(win_u32(rec, k + 1));
                let vstep = w.saturating_mul(va);
                let vq0 = vstep.saturating_add(vy);
                (vq0 >= target.max(1) && vstep >= target)
                    .then_some(Cut::NonArch { vq0, vstep })
            })?
        }
    };

    // exact product jet
    let ctx = rctx(lx, my);
    let aps = term_scales(rec, &inst.a, kk)?;
    let yj = BiJet::variable_y(y0.clone(), &ctx);
    let one_jet = <RJet as Scalar>::one(&ctx);
    let mut prod = one_jet.clone();
    for ap in &aps {
        let factor = one_jet.sub(&yj.mul(&BiJet::constant(ap.clone(), &ctx), &ctx), &ctx);
        prod = prod.mul(&factor, &ctx);
    }

    let tails = match cut {
        Cut::Arch { tq, tq1 } => {
            let qb = qhat_bounds_arch(my, &tq, &tq1);
            let pmax = jet_col_mags(&prod, lx, my);
            PlaceTails::Arch(product_tail_arch(&pmax, &qb))
        }
        Cut::NonArch { vq0, vstep } => {
            let Place::P(p) = inst.place else { unreachable!() };
            let qv = qhat_vals_nonarch(my, vq0, vstep);
            let pmin = jet_col_vals(&prod, lx, my, p);
            PlaceTails::NonArch(product_tail_nonarch(&pmin, &qv))
        }
    };
    Ok(Core {
        jet: prod,
        k: kk,
        tails,
        flags,
    })
}

fn h_jet_core(
    inst: &FunctionInstance,
    x0: &Rat,
    y0: &Rat,
    lx: usize,
    my: usize,
    prec: u32,
) -> Result<Core, EvalError> {
    let rec = &inst.rec;
    if !y0.is_zero() {
        let nb = n_beta(inst, y0)?;
        if let Some(&k) = nb.witnesses.first() {
            return Err(EvalError::PoleAtY(k));
        }
    }

    let (kk, tails) = if x0.is_zero() {
        // only k = l reaches row l of the jet, and poles are excluded
        // everywhere by the exact scan above
        let zero_tails = match inst.place {
            Place::Inf => PlaceTails::Arch(vec![rat_zero(); my + 1]),
            Place::P(_) => PlaceTails::NonArch(vec![VAL_INF; my + 1]),
        };
        (lx, zero_tails)
    } else {
        match inst.place {
        Place::Inf => {
            let u = inst.a.abs();
            let ya = y0.abs();
            let xa = if lx == 0 {
                x0.abs()
            } else {
                rat_one() + x0.abs()
            };
            let bound = arch_target(prec);
            let (kk, tails) = find_k(|k| {
                // far denominators at least 1/2 in absolute value
                let w = win_u32(rec, k + 1);
                if rat_powu(&u, w) * &ya * rat_int(2) > rat_one() {
                    return None;
                }
                let mut tails = Vec::with_capacity(my + 1);
                for m in 0..=my as u32 {
                    let um = rat_powu(&u, m + 1);
                    let t = arch_series_tail(rec, &um, &xa, k + 1, 0)?
                        * rat_pow2(i64::from(m) + 1);
                    if t > bound {
                        return None;
                    }
                    tails.push(t);
                }
                Some(tails)
            })?;
            (kk.max(lx), PlaceTails::Arch(tails))
        }
        Place::P(p) => {
            let va = padic_val_rat(&inst.a, p);
            let vy = val_or_inf(y0, p);
            let vx = padic_val_rat(x0, p);
            let adj = if vx > 0 { lx as i64 * vx } else { 0 };
            let target = i64::from(prec) + 8;
            let (kk, tails) = find_k(|k| {
                // far a^{R_k} y0 of positive valuation: unit denominators
                let w = i64::from(win_u32(rec, k + 1));
                if w.saturating_mul(va).saturating_add(vy) < 1 {
                    return None;
                }
                let mut tails = Vec::with_capacity(my + 1);
                for m in 0..=my as i64 {
                    let t = nonarch_series_tail(rec, va * (m + 1), vx, k + 1, 0)? - adj;
                    if t < target {
                        return None;
                    }
                    tails.push(t);
                }
                Some(tails)
            })?;
            (kk.max(lx), PlaceTails::NonArch(tails))
        }
        }
    };

    let ctx = rctx(lx, my);
    let aps = term_scales(rec, &inst.a, kk)?;
    let xj = BiJet::variable_x(x0.clone(), &ctx);
    let yj = BiJet::variable_y(y0.clone(), &ctx);
    let one_jet = <RJet as Scalar>::one(&ctx);
    let mut xpow = one_jet.clone();
    let mut acc = <RJet as Scalar>::zero(&ctx);
    for (k, ap) in aps.iter().enumerate() {
        let apc = BiJet::constant(ap.clone(), &ctx);
        let den = one_jet.sub(&yj.mul(&apc, &ctx), &ctx);
        let inv = den.recip(&ctx).expect("poles excluded exactly");
        acc = acc.add(&xpow.mul(&apc, &ctx).mul(&inv, &ctx), &ctx);
        if k < kk {
            xpow = xpow.mul(&xj, &ctx);
        }
    }
    Ok(Core {
        jet: acc,
        k: kk,
        tails,
        flags: vec![],
    })
}

fn theta_jet_core(
    inst: &FunctionInstance,
    x0: &Rat,
    y0: &Rat,
    lx: usize,
    my: usize,
    prec: u32,
) -> Result<Core, EvalError> {
    let rec = &inst.rec;
    let flags = if y0.is_zero() {
        vec![]
    } else {
        n_beta(inst, y0)?.witnesses
    };
    let startk = flags.last().copied().unwrap_or(0).max(lx);

    enum Cut {
        Arch { tq: Rat, tq1: Rat, tx1: Rat },
        NonArch { vq0: i64, vstep: i64, vterm: i64 },
    }
    let (kk, cut) = match inst.place {
        Place::Inf => {
            let u = inst.a.abs();
            let ya = y0.abs();
            let xa = if lx == 0 {
                x0.abs()
            } else {
                rat_one() + x0.abs()
            };
            let bound = arch_target(prec);
            let one = rat_one();
            find_k(|k| {
                if k < startk {
                    return None;
                }
                let tq1 = arch_series_tail(rec, &u, &one, k + 1, 0)?;
                let tx1 = arch_series_tail(rec, &u, &xa, k + 1, 0)?;
                let tq = &ya * &tq1;
                let small = rat_int(2) * &tq <= one && (my == 0 || rat_int(2) * &tq1 <= one);
                (small && tq <= bound && tx1 <= bound).then_some(Cut::Arch { tq, tq1, tx1 })
            })?
        }
        Place::P(p) => {
            let va = padic_val_rat(&inst.a, p);
            let vy = val_or_inf(y0, p);
            let vx = val_or_inf(x0, p);
            let adj = if !x0.is_zero() && vx > 0 {
                lx as i64 * vx
            } else {
                0
            };
            let target = i64::from(prec) + 8;
            find_k(|k| {
                if k < startk {
                    return None;
                }
                let w = i64::from(win_u32(rec, k + 1));
                let vstep = w.saturating_mul(va);
                let vq0 = vstep.saturating_add(vy);
                if vq0 < target.max(1) || vstep < target {
                    return None;
                }
                let vterm = if x0.is_zero() {
                    VAL_INF
                } else {
                    let t = nonarch_series_tail(rec, va, vx, k + 1, 0)? - adj;
                    if t < target {
                        return None;
                    }
                    t
                };
                Some(Cut::NonArch { vq0, vstep, vterm })
            })?
        }
    };

    // exact sum with prefix/suffix products, so vanishing factors are
    // handled exactly rather than by division
    let ctx = rctx(lx, my);
    let aps = term_scales(rec, &inst.a, kk)?;
    let yj = BiJet::variable_y(y0.clone(), &ctx);
    let xj = BiJet::variable_x(x0.clone(), &ctx);
    let one_jet = <RJet as Scalar>::one(&ctx);
    let factors: Vec<RJet> = aps
        .iter()
        .map(|ap| one_jet.sub(&yj.mul(&BiJet::constant(ap.clone(), &ctx), &ctx), &ctx))
        .collect();
    let mut pre = vec![one_jet.clone()];
    for f in &factors {
        pre.push(pre.last().unwrap().mul(f, &ctx));
    }
    let mut suf = vec![one_jet.clone(); kk + 2];
    for i in (0..=kk).rev() {
        suf[i] = factors[i].mul(&suf[i + 1], &ctx);
    }
    let mut xpow = one_jet.clone();
    let mut acc = <RJet as Scalar>::zero(&ctx);
    for (k, ap) in aps.iter().enumerate() {
        let others = pre[k].mul(&suf[k + 1], &ctx);
        let term = xpow
            .mul(&BiJet::constant(ap.clone(), &ctx), &ctx)
            .mul(&others, &ctx);
        acc = acc.add(&term, &ctx);
        if k < kk {
            xpow = xpow.mul(&xj, &ctx);
        }
    }

    let tails = match cut {
        Cut::Arch { tq, tq1, tx1 } => {
            let qb = qhat_bounds_arch(my, &tq, &tq1);
            let smax = jet_col_mags(&acc, lx, my);
            let mut tails = product_tail_arch(&smax, &qb);
            if flags.is_empty() {
                // far terms: each carries every near factor, bounded by
                // bfull, and y-derivatives pull out factors a^{R_j},
                // bounded columnwise by powers of asum
                let ya = y0.abs();
                let bfull = aps
                    .iter()
                    .fold(rat_one(), |acc, ap| acc * (rat_one() + ap.abs() * &ya))
                    * (rat_one() + rat_int(2) * &tq);
                let asum = aps.iter().fold(tq1.clone(), |acc, ap| acc + ap.abs());
                let mut apow = rat_one();
                for (m, t) in tails.iter_mut().enumerate() {
                    if m > 0 {
                        apow = &apow * &asum;
                    }
                    *t = &*t + &apow * &bfull * &tx1;
                }
            }
            PlaceTails::Arch(tails)
        }
        Cut::NonArch { vq0, vstep, vterm } => {
            let Place::P(p) = inst.place else { unreachable!() };
            let qv = qhat_vals_nonarch(my, vq0, vstep);
            let smin = jet_col_vals(&acc, lx, my, p);
            let mut tails = product_tail_nonarch(&smin, &qv);
            if flags.is_empty() {
                // near factors of the far terms, valuations exact
                let vnear: i64 = aps
                    .iter()
                    .map(|ap| {
                        let f = rat_one() - ap * y0;
                        val_or_inf(&f, p).min(0)
                    })
                    .sum();
                let far = vterm.saturating_add(vnear);
                for t in tails.iter_mut() {
                    *t = (*t).min(far);
                }
            }
            PlaceTails::NonArch(tails)
        }
    };
    Ok(Core {
        jet: acc,
        k: kk,
        tails,
        flags,
    })
}

/// d(Theta)/dy as a jet, from a Theta jet one order deeper in y.
fn xi_from_theta(core: Core, lx: usize, my: usize) -> Core {
    let ctx = rctx(lx, my);
    let mut grid = Vec::with_capacity(lx + 1);
    for l in 0..=lx {
        let mut row = Vec::with_capacity(my + 1);
        for m in 0..=my {
            row.push(core.jet.coeff(l, m + 1) * rat_int(m as i64 + 1));
        }
        grid.push(row);
    }
    let jet = BiJet::try_new(grid, &ctx).expect("grid dimensions");
    let tails = match core.tails {
        PlaceTails::Arch(v) => PlaceTails::Arch(
            (0..=my).map(|m| &v[m + 1] * rat_int(m as i64 + 1)).collect(),
        ),
        PlaceTails::NonArch(v) => PlaceTails::NonArch(v[1..].to_vec()),
    };
    Core {
        jet,
        k: core.k,
        tails,
        flags: core.flags,
    }
}

// ---------------------------------------------------------------------------
// public evaluators

/// F_m(x) = m! * sum a^{(m+1) R_k} x^k; m = 0 is the plain series.
pub fn eval_f(
    inst: &FunctionInstance,
    x: &Rat,
    m: u32,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    let core = f_jet_core(inst, x, 0, 0, m, prec)?;
    Ok(core_to_result(core, &inst.place, prec))
}

pub fn eval_g(inst: &FunctionInstance, y: &Rat, prec: u32) -> Result<EvalResult, EvalError> {
    let core = g_jet_core(inst, y, 0, 0, prec)?;
    Ok(core_to_result(core, &inst.place, prec))
}

pub fn eval_h(
    inst: &FunctionInstance,
    x: &Rat,
    y: &Rat,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    let core = h_jet_core(inst, x, y, 0, 0, prec)?;
    Ok(core_to_result(core, &inst.place, prec))
}

pub fn eval_theta(
    inst: &FunctionInstance,
    x: &Rat,
    y: &Rat,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    let core = theta_jet_core(inst, x, y, 0, 0, prec)?;
    Ok(core_to_result(core, &inst.place, prec))
}

pub fn eval_xi(
    inst: &FunctionInstance,
    x: &Rat,
    y: &Rat,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    let core = theta_jet_core(inst, x, y, 0, 1, prec)?;
    let core = xi_from_theta(core, 0, 0);
    Ok(core_to_result(core, &inst.place, prec))
}

/// Taylor jet of the instance's function at (x0, y0), to x-order lx and
/// y-order my. Coefficients carry their truncation tails.
pub fn jet_eval(
    inst: &FunctionInstance,
    x0: &Rat,
    y0: &Rat,
    lx: usize,
    my: usize,
    prec: u32,
) -> Result<JetResult, EvalError> {
    let core = match &inst.id {
        FunctionId::F { m } => f_jet_core(inst, x0, lx, my, *m, prec)?,
        FunctionId::G => g_jet_core(inst, y0, lx, my, prec)?,
        FunctionId::H => h_jet_core(inst, x0, y0, lx, my, prec)?,
        FunctionId::Theta => theta_jet_core(inst, x0, y0, lx, my, prec)?,
        FunctionId::Xi => {
            let c = theta_jet_core(inst, x0, y0, lx, my + 1, prec)?;
            xi_from_theta(c, lx, my)
        }
        other => {
            return Err(EvalError::Unsupported(format!(
                "jets are provided for F, G, H, Theta, Xi; not {other:?}"
            )))
        }
    };
    Ok(embed_core(core, &inst.place, lx, my, prec))
}

/// sum x^k z^{d^k}, the d-ary analogue; |z| < 1 at the place.
pub fn eval_gdary(
    x: &Rat,
    z: &Rat,
    d: u32,
    place: &Place,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    check_place(place)?;
    if d < 2 {
        return Err(EvalError::BadPoint("base d must be at least 2".into()));
    }
    if z.is_zero() {
        return Ok(EvalResult {
            value: embed(&rat_zero(), place, prec),
            place: *place,
            truncation_k: 0,
            tail: match place {
                Place::Inf => TailBound::Arch(Dyadic::zero()),
                Place::P(_) => TailBound::NonArch(VAL_INF),
            },
            flags: vec![],
        });
    }
    let dpow = |k: usize| -> Result<u32, EvalError> {
        let e = (u64::from(d)).checked_pow(k as u32).filter(|&e| e <= 1 << 24);
        e.map(|e| e as u32).ok_or_else(|| {
            EvalError::TruncationFailed("d-ary exponent exceeds the supported range".into())
        })
    };

    let (kk, tail) = match place {
        Place::Inf => {
            if z.abs() >= rat_one() {
                return Err(EvalError::BadPoint(
                    "need |z| < 1 at the archimedean place".into(),
                ));
            }
            let xa = x.abs();
            let za = z.abs();
            let bound = arch_target(prec);
            let (kk, t) = find_k(|k| {
                let e = dpow(k + 1).ok()?;
                let zae = rat_powu(&za, e);
                let head = rat_powu(&xa, k as u32 + 1) * &zae;
                // ratio of consecutive terms at most |x| * |z|^{d^{k+1}}
                let ok = rat_int(2) * &xa * zae <= rat_one();
                let t = rat_int(2) * head;
                (ok && t <= bound).then_some(t)
            })?;
            (kk, TailBound::Arch(dy_ub(&t)))
        }
        Place::P(p) => {
            let vz = padic_val_rat(z, *p);
            if vz < 1 {
                return Err(EvalError::BadPoint(
                    "need |z|_p < 1, i.e. positive valuation".into(),
                ));
            }
            let vx = val_or_inf(x, *p);
            let target = i64::from(prec) + 8;
            let vxe = if x.is_zero() { 0 } else { vx };
            let (kk, t) = find_k(|k| {
                // min over far terms of d^j * vz + j * vx; once the
                // exponent increment d^j (d-1) vz outweighs |vx| the
                // term valuations only climb, so the scan covers the min
                let mut best = i64::MAX;
                let mut e = i64::from(dpow(k + 1).ok()?);
                let mut j = (k + 1) as i64;
                loop {
                    best = best.min(e.saturating_mul(vz).saturating_add(j.saturating_mul(vxe)));
                    if e.saturating_mul(i64::from(d) - 1).saturating_mul(vz) >= vxe.abs() {
                        break;
                    }
                    e = e.saturating_mul(i64::from(d));
                    j += 1;
                }
                (best >= target).then_some(best)
            })?;
            (kk, TailBound::NonArch(t))
        }
    };

    let mut acc = rat_zero();
    let mut xpow = rat_one();
    for k in 0..=kk {
        acc = acc + &xpow * rat_powu(z, dpow(k)?);
        if k < kk {
            xpow = xpow * x;
        }
    }
    Ok(EvalResult {
        value: embed(&acc, place, prec),
        place: *place,
        truncation_k: kk,
        tail,
        flags: vec![],
    })
}

// ---------------------------------------------------------------------------
// multi-variable forms: the scale a is replaced by a point z acted on
// coordinatewise by the exponent matrix; M(z_k) = z^{E(k)} with E(k) the
// k-th monomial exponent vector.

/// Certifies the convergence polydisc condition and picks the coordinate
/// whose decay controls the tails: all |z_j| <= 1 with at least one
/// strict (resp. all valuations >= 0 with at least one >= 1), preferring
/// the latest such coordinate since its exponent is the least shifted.
fn multi_domain(rec: &LinearRecurrence, z: &MPoint) -> Result<(usize, usize), EvalError> {
    let n = rec.order();
    if z.coords().len() != n {
        return Err(EvalError::BadPoint(format!(
            "point has {} coordinates, recurrence order is {}",
            z.coords().len(),
            n
        )));
    }
    let best = match z.place() {
        Place::Inf => {
            let one = rat_one();
            for c in z.coords() {
                if c.abs() > one {
                    return Err(EvalError::NotInDomain(
                        "need every |z_j| <= 1 at the archimedean place".into(),
                    ));
                }
            }
            z.coords().iter().rposition(|c| c.abs() < one)
        }
        Place::P(p) => {
            for c in z.coords() {
                if padic_val_rat(c, p) < 0 {
                    return Err(EvalError::NotInDomain(
                        "need every coordinate of nonnegative valuation".into(),
                    ));
                }
            }
            z.coords().iter().rposition(|c| padic_val_rat(c, p) >= 1)
        }
    };
    let j = best.ok_or_else(|| {
        EvalError::NotInDomain("need some coordinate strictly inside the unit disc".into())
    })?;
    Ok((j, n - 1 - j))
}

/// Exact M(z_k) = prod z_j^{R_{k+n-1-j}}.
pub(crate) fn monomial_value(rec: &LinearRecurrence, z: &MPoint, k: usize) -> Result<Rat, EvalError> {
    let es = monomial_exponents(rec, k);
    let mut acc = rat_one();
    for (zj, e) in z.coords().iter().zip(&es) {
        acc = acc * a_pow(zj, e)?;
    }
    Ok(acc)
}

/// sum x^k M(z_k)^{m+1} (no factorial).
pub fn eval_f_multi(
    rec: &LinearRecurrence,
    x: &Rat,
    z: &MPoint,
    m: u32,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    let (j, shift) = multi_domain(rec, z)?;
    let place = z.place();
    let msucc = m + 1;
    let (kk, tail) = match place {
        Place::Inf => {
            let um = rat_powu(&z.coords()[j].abs(), msucc);
            let xa = x.abs();
            let bound = arch_target(prec);
            let (kk, t) = find_k(|k| {
                let t = arch_series_tail(rec, &um, &xa, k + 1, shift)?;
                (t <= bound).then_some(t)
            })?;
            (kk, TailBound::Arch(dy_ub(&t)))
        }
        Place::P(p) => {
            let vj = padic_val_rat(&z.coords()[j], p) * i64::from(msucc);
            let vx = val_or_inf(x, p);
            let target = i64::from(prec) + 8;
            if x.is_zero() {
                (0, TailBound::NonArch(VAL_INF))
            } else {
                let (kk, t) = find_k(|k| {
                    let t = nonarch_series_tail(rec, vj, vx, k + 1, shift)?;
                    (t >= target).then_some(t)
                })?;
                (kk, TailBound::NonArch(t))
            }
        }
    };
    let mut acc = rat_zero();
    let mut xpow = rat_one();
    for k in 0..=kk {
        acc = acc + &xpow * rat_powu(&monomial_value(rec, z, k)?, msucc);
        if k < kk {
            xpow = xpow * x;
        }
    }
    Ok(EvalResult {
        value: embed(&acc, &place, prec),
        place,
        truncation_k: kk,
        tail,
        flags: vec![],
    })
}

/// prod (1 - beta M(z_k)).
pub fn eval_g_multi(
    rec: &LinearRecurrence,
    z: &MPoint,
    beta: &Rat,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    if beta.is_zero() {
        return Err(EvalError::BadPoint("beta must be nonzero".into()));
    }
    let (j, shift) = multi_domain(rec, z)?;
    let place = z.place();
    let (kk, far) = match place {
        Place::Inf => {
            let u = z.coords()[j].abs();
            let ba = beta.abs();
            let bound = arch_target(prec);
            let one = rat_one();
            let (kk, tq) = find_k(|k| {
                let tq = arch_series_tail(rec, &u, &one, k + 1, shift)? * &ba;
                (rat_int(2) * &tq <= one && tq <= bound).then_some(tq)
            })?;
            (kk, Ok(tq))
        }
        Place::P(p) => {
            let vj = padic_val_rat(&z.coords()[j], p);
            let vb = padic_val_rat(beta, p);
            let target = i64::from(prec) + 8;
            let (kk, v) = find_k(|k| {
                let w = i64::from(win_u32(rec, k + 1 + shift));
                let v = w.saturating_mul(vj).saturating_add(vb);
                (v >= target.max(1)).then_some(v)
            })?;
            (kk, Err(v))
        }
    };
    let mut prod = rat_one();
    let mut flags = vec![];
    for k in 0..=kk {
        let f = rat_one() - beta * monomial_value(rec, z, k)?;
        if f.is_zero() {
            flags.push(k);
        }
        prod = prod * f;
    }
    let tail = match far {
        Ok(tq) => TailBound::Arch(dy_ub(&(prod.abs() * rat_int(2) * tq))),
        Err(v) => {
            let vp = match place {
                Place::P(p) => val_or_inf(&prod, p),
                _ => unreachable!(),
            };
            TailBound::NonArch(vp.saturating_add(v))
        }
    };
    Ok(EvalResult {
        value: embed(&prod, &place, prec),
        place,
        truncation_k: kk,
        tail,
        flags,
    })
}

/// sum x^k (M(z_k) / (1 - beta M(z_k)))^{m+1}.
pub fn eval_h_multi(
    rec: &LinearRecurrence,
    x: &Rat,
    z: &MPoint,
    beta: &Rat,
    m: u32,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    if beta.is_zero() {
        return Err(EvalError::BadPoint("beta must be nonzero".into()));
    }
    let (j, shift) = multi_domain(rec, z)?;
    let place = z.place();
    let msucc = m + 1;
    let (kk, tail) = match place {
        Place::Inf => {
            let u = z.coords()[j].abs();
            let um = rat_powu(&u, msucc);
            let ba = beta.abs();
            let xa = x.abs();
            let bound = arch_target(prec);
            let one = rat_one();
            let (kk, t) = find_k(|k| {
                // far |beta M| <= 1/2, so far denominators at least 1/2
                let tq = arch_series_tail(rec, &u, &one, k + 1, shift)? * &ba;
                if rat_int(2) * &tq > one {
                    return None;
                }
                let t = arch_series_tail(rec, &um, &xa, k + 1, shift)?
                    * rat_pow2(i64::from(msucc));
                (t <= bound).then_some(t)
            })?;
            (kk, TailBound::Arch(dy_ub(&t)))
        }
        Place::P(p) => {
            let vj = padic_val_rat(&z.coords()[j], p);
            let vb = padic_val_rat(beta, p);
            let vx = val_or_inf(x, p);
            let target = i64::from(prec) + 8;
            let (kk, t) = find_k(|k| {
                let w = i64::from(win_u32(rec, k + 1 + shift));
                if w.saturating_mul(vj).saturating_add(vb) < 1 {
                    return None;
                }
                if x.is_zero() {
                    return Some(VAL_INF);
                }
                let t = nonarch_series_tail(rec, vj * i64::from(msucc), vx, k + 1, shift)?;
                (t >= target).then_some(t)
            })?;
            (kk, TailBound::NonArch(t))
        }
    };
    let mut acc = rat_zero();
    let mut xpow = rat_one();
    for k in 0..=kk {
        let mv = monomial_value(rec, z, k)?;
        let den = rat_one() - beta * &mv;
        if den.is_zero() {
            return Err(EvalError::PoleAtY(k));
        }
        acc = acc + &xpow * rat_powu(&(mv / den), msucc);
        if k < kk {
            xpow = xpow * x;
        }
    }
    Ok(EvalResult {
        value: embed(&acc, &place, prec),
        place,
        truncation_k: kk,
        tail,
        flags: vec![],
    })
}

/// Dispatch by the instance's id; single-point ids only, with x/y as the
/// function requires (GDary reads its z from the y slot).
pub fn eval_at(
    inst: &FunctionInstance,
    x: Option<&Rat>,
    y: Option<&Rat>,
    prec: u32,
) -> Result<EvalResult, EvalError> {
    fn need<'a>(v: Option<&'a Rat>, what: &str) -> Result<&'a Rat, EvalError> {
        v.ok_or_else(|| EvalError::BadPoint(format!("{what} coordinate required")))
    }
    match &inst.id {
        FunctionId::F { m } => eval_f(inst, need(x, "x")?, *m, prec),
        FunctionId::G => eval_g(inst, need(y, "y")?, prec),
        FunctionId::H => eval_h(inst, need(x, "x")?, need(y, "y")?, prec),
        FunctionId::Theta => eval_theta(inst, need(x, "x")?, need(y, "y")?, prec),
        FunctionId::Xi => eval_xi(inst, need(x, "x")?, need(y, "y")?, prec),
        FunctionId::GDary { d } => eval_gdary(need(x, "x")?, need(y, "z")?, *d, &inst.place, prec),
        other => Err(EvalError::Unsupported(format!(
            "{other:?} takes a transformed point; use the multi evaluators"
        ))),
    }
}

/// The scales used at every index of a truncation, exposed for reporting.
pub fn truncation_exponents(rec: &LinearRecurrence, kk: usize) -> BTreeMap<usize, BigInt> {
    rec.terms(kk + 1).into_iter().enumerate().collect()
}
