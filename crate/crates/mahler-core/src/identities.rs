//! The identity catalog: every functional equation and derivative
//! relation the evaluators are supposed to satisfy, checked by
//! computing both sides through independent code paths and certifying
//! the residual against a place-appropriate tolerance.
//!
//! Alongside the catalog live the derivative-transfer polynomials
//! (pure, mixed, and their substitution inverses), the shift
//! decomposition that factors the finitely many vanishing head factors
//! off the product, and exact rank certificates for the two linear
//! families of rational functions whose independence the relation
//! searches rely on.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Zero};

use crate::functions::{
    a_pow, eval_f_multi, eval_g, eval_g_multi, eval_gdary, eval_h, eval_h_multi, eval_theta,
    jet_eval, monomial_value, n_beta, rat_powu, EvalError, FunctionId, FunctionInstance,
    JetResult, JetValue, Value,
};
use crate::poly::multi::MPoly;
use crate::recurrence::{compute_k0, shift, LinearRecurrence, RecurrenceError};
use crate::report::Verdict;
use crate::scalars::cerr::{CCtx, CErr};
use crate::scalars::jet::JetCtx;
use crate::scalars::padic::{PAdic, PCtx};
use crate::scalars::{Dyadic, Place, Rat, Scalar};
use crate::transform::{apply, MPoint, OmegaTransform, TransformError};

/// Integer polynomials in the 2m transfer variables. Convention:
/// `var(i-1)` is X_i and `var(m+i-1)` is Y_i for a block of order m,
/// so `eval` takes `[x_1..x_m, y_1..y_m]`.
pub type IntPoly = MPoly;

fn rz() -> Rat {
    Rat::from_integer(BigInt::zero())
}

fn ro() -> Rat {
    Rat::from_integer(BigInt::one())
}

fn int_rat(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

// ---------------------------------------------------------------------------
// transfer polynomials

fn xvar(i: u32) -> IntPoly {
    MPoly::var(i as usize - 1)
}

fn yvar(m: u32, i: u32) -> IntPoly {
    MPoly::var((m + i - 1) as usize)
}

/// A_m with G^{(m)}(y) = G(y) A_m(X_1, .., X_m), where X_i stands for
/// the (i-1)-th y-derivative of H at (1, y). From G' = -G X_1 the
/// recursion is A_1 = -X_1, A_{m+1} = -X_1 A_m + sum_i dA_m/dX_i X_{i+1}
/// (differentiating shifts every argument up by one).
fn a_poly(m: u32) -> IntPoly {
    assert!(m >= 1);
    static CACHE: OnceLock<Mutex<Vec<IntPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![MPoly::var(0).neg()]));
    let mut cache = cache.lock().unwrap();
    while cache.len() < m as usize {
        let last = cache.last().unwrap().clone();
        let mut next = MPoly::var(0).neg().mul(&last);
        for i in 0..cache.len() {
            next = next.add(&last.partial_deriv(i).mul(&MPoly::var(i + 1)));
        }
        cache.push(next);
    }
    cache[m as usize - 1].clone()
}

/// The pure and mixed transfer polynomials (A_m, B_m).
///
/// B_m carries x-derivatives along: with X_i the (i-1)-th y-derivative
/// of H at (1, y) and Y_i the (l, i-1) mixed derivative of H at (x, y),
///
///   d^{l+m} Theta / dx^l dy^m = G * (H^{(l,m)} + B_m(X, Y)),
///
/// and B_m = sum_{h=0}^{m-1} binom(m, h) A_{m-h}(X) Y_{h+1}, a Leibniz
/// expansion of (G A_{m-h})^{(h)} against H^{(l,0)}.
pub fn transfer_polys(m: u32) -> (IntPoly, IntPoly) {
    assert!(m >= 1, "transfer order must be at least 1");
    let a = a_poly(m);
    let mut b = MPoly::zero();
    for h in 0..m {
        let c = binomial(BigInt::from(m), BigInt::from(h));
        b = b.add(&a_poly(m - h).mul(&yvar(m, h + 1)).mul_scalar(&c));
    }
    (a, b)
}

/// The inverse transfer C_m: with X_i = (1/G) Theta^{(0,i-1)}(1, y) and
/// Y_i = (1/G) Theta^{(l,i-1)}(x, y),
///
///   H^{(l,m)} = (1/G) Theta^{(l,m)} + C_m(X, Y).
///
/// Obtained by inverting the forward relation order by order: the
/// H-derivatives are solved as polynomials in the Theta-data and fed
/// back into -B_m.
pub fn transfer_polys_c(m: u32) -> IntPoly {
    assert!(m >= 1, "transfer order must be at least 1");
    let mut hx: Vec<IntPoly> = vec![xvar(1)];
    let mut hy: Vec<IntPoly> = vec![yvar(m, 1)];
    for j in 1..m {
        let bj = transfer_polys(j).1;
        let mut sx = hx.clone();
        sx.extend(hx.iter().cloned());
        let mut sy = hx.clone();
        sy.extend(hy.iter().cloned());
        hx.push(xvar(j + 1).sub(&bj.subst(&sx)));
        hy.push(yvar(m, j + 1).sub(&bj.subst(&sy)));
    }
    let bm = transfer_polys(m).1;
    let mut s = hx;
    s.extend(hy);
    bm.subst(&s).neg()
}

// ---------------------------------------------------------------------------
// identity catalog

pub const IDENTITY_IDS: [&str; 11] = [
    "THETA_X0",
    "THETA_1Y",
    "THETA_GH",
    "GPRIME",
    "MAHLER_GD",
    "MAHLER_S4_G",
    "MAHLER_S4_H",
    "MAHLER_S4_F",
    "SHIFT_G",
    "SHIFT_THETA",
    "DER_TRANSFER",
];

/// Inputs for one identity check. Identities ignore the fields they do
/// not read; a missing required one skips the case with a reason.
/// MAHLER_GD reads its z argument from the `y` slot, matching the
/// evaluation dispatcher; the multi-variable checks default `z` to the
/// distinguished point (1, .., 1, a) and check the functional equation
/// at orbit index `shift_k`. SHIFT_THETA defaults x to 1 and y to beta.
#[derive(Clone, Debug)]
pub struct IdentityParams {
    pub rec: LinearRecurrence,
    pub a: Rat,
    pub place: Place,
    pub x: Option<Rat>,
    pub y: Option<Rat>,
    pub beta: Option<Rat>,
    pub z: Option<Vec<Rat>>,
    pub l: usize,
    pub m: usize,
    pub d: u32,
    pub shift_k: usize,
    pub prec: u32,
}

impl IdentityParams {
    pub fn new(rec: LinearRecurrence, a: Rat, place: Place) -> Self {
        IdentityParams {
            rec,
            a,
            place,
            x: None,
            y: None,
            beta: None,
            z: None,
            l: 0,
            m: 0,
            d: 2,
            shift_k: 0,
            prec: 256,
        }
    }
}

/// What "the two sides agree" means at each place.
#[derive(Clone, Debug, PartialEq)]
pub enum Tolerance {
    /// |residual| at most this (archimedean).
    Abs(Dyadic),
    /// Residual valuation at least this (p-adic).
    Val(i64),
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Abs(d) => write!(f, "|r| <= {}", d.to_decimal(3)),
            Tolerance::Val(v) => write!(f, "val(r) >= {v}"),
        }
    }
}

/// Acceptance threshold at `prec` working bits or digits: 2^-(prec-76)
/// absorbs the certified evaluation error of both sides with room for
/// the derivative extractions; p-adically the residual must vanish to
/// within 8 guard digits of working precision.
pub fn tolerance(place: &Place, prec: u32) -> Tolerance {
    match place {
        Place::Inf => Tolerance::Abs(Dyadic::power_of_two(-(i64::from(prec) - 76))),
        Place::P(_) => Tolerance::Val(i64::from(prec) - 8),
    }
}

/// One checked identity instance. `residual` is the certified
/// difference of the two sides, absent when the case was skipped; an
/// UNKNOWN verdict always carries the reason in `note` and is rendered
/// as skipped, never as a pass.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub id: String,
    pub params: String,
    pub residual: Option<Value>,
    pub tolerance: Tolerance,
    pub verdict: Verdict,
    pub note: String,
}

impl IdentityCase {
    /// Rendered residual bound, for tables.
    pub fn residual_text(&self) -> String {
        match &self.residual {
            None => "-".into(),
            Some(Value::C(c)) => format!("|r| <= {}", c.abs_ub().to_decimal(3)),
            Some(Value::P(p)) => format!("val(r) >= {}", p.valuation().lower_bound()),
        }
    }
}

/// A check that could not run; the payload is the reason shown to the
/// user. Every evaluation failure (pole, domain, unshiftable
/// recurrence) converts into this rather than a verdict.
#[derive(Debug)]
struct Skip(String);

impl From<EvalError> for Skip {
    fn from(e: EvalError) -> Self {
        Skip(e.to_string())
    }
}
impl From<RecurrenceError> for Skip {
    fn from(e: RecurrenceError) -> Self {
        Skip(e.to_string())
    }
}
impl From<TransformError> for Skip {
    fn from(e: TransformError) -> Self {
        Skip(e.to_string())
    }
}

/// Check one identity from the catalog against the given inputs.
pub fn verify(id: &str, pr: &IdentityParams) -> IdentityCase {
    let tol = tolerance(&pr.place, pr.prec);
    let (residual, verdict, note) = match run_check(id, pr) {
        Ok(r) => (Some(r.clone()), judge(&r, &tol), String::new()),
        Err(Skip(why)) => (None, Verdict::Unknown, why),
    };
    IdentityCase {
        id: id.into(),
        params: params_text(pr),
        residual,
        tolerance: tol,
        verdict,
        note,
    }
}

fn judge(r: &Value, tol: &Tolerance) -> Verdict {
    let ok = match (r, tol) {
        (Value::C(c), Tolerance::Abs(bound)) => c.abs_ub().cmp_value(bound) != Ordering::Greater,
        (Value::P(p), Tolerance::Val(v)) => p.valuation().lower_bound() >= *v,
        _ => panic!("place mismatch between residual and tolerance"),
    };
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn params_text(pr: &IdentityParams) -> String {
    let mut s = format!(
        "a={} place={} l={} m={} prec={}",
        pr.a, pr.place, pr.l, pr.m, pr.prec
    );
    if let Some(x) = &pr.x {
        s.push_str(&format!(" x={x}"));
    }
    if let Some(y) = &pr.y {
        s.push_str(&format!(" y={y}"));
    }
    if let Some(b) = &pr.beta {
        s.push_str(&format!(" beta={b}"));
    }
    if let Some(z) = &pr.z {
        let zs: Vec<String> = z.iter().map(|c| c.to_string()).collect();
        s.push_str(&format!(" z=({})", zs.join(",")));
    }
    if pr.d != 2 {
        s.push_str(&format!(" d={}", pr.d));
    }
    if pr.shift_k != 0 {
        s.push_str(&format!(" k={}", pr.shift_k));
    }
    s
}

fn run_check(id: &str, pr: &IdentityParams) -> Result<Value, Skip> {
    let ops = Ops::new(&pr.place, pr.prec)?;
    match id {
        "THETA_X0" => theta_x0(pr, &ops),
        "THETA_1Y" => theta_1y(pr, &ops),
        "THETA_GH" => theta_gh(pr, &ops),
        "GPRIME" => gprime(pr, &ops),
        "MAHLER_GD" => mahler_gdary(pr, &ops),
        "MAHLER_S4_G" => mahler_multi_g(pr, &ops),
        "MAHLER_S4_H" => mahler_multi_h(pr, &ops),
        "MAHLER_S4_F" => mahler_multi_f(pr, &ops),
        "SHIFT_G" => shift_g(pr, &ops),
        "SHIFT_THETA" => shift_theta(pr, &ops),
        "DER_TRANSFER" => der_transfer(pr, &ops),
        _ => Err(Skip(format!("unknown identity id {id}"))),
    }
}

// ---------------------------------------------------------------------------
// place-dispatched arithmetic

/// Arithmetic on certified values dispatched by place, so the checks
/// read like the identities they verify. The contexts match the ones
/// the evaluators embed with, keeping residual error accounting
/// consistent.
enum Ops {
    C(CCtx),
    P(PCtx),
}

impl Ops {
    fn new(place: &Place, prec: u32) -> Result<Self, Skip> {
        match place {
            Place::Inf => Ok(Ops::C(CCtx::new(prec + 32))),
            Place::P(p) => PCtx::new(*p, prec).map(Ops::P).map_err(|e| Skip(e.to_string())),
        }
    }

    fn from_rat(&self, q: &Rat) -> Value {
        match self {
            Ops::C(ctx) => Value::C(CErr::from_rat(q, ctx)),
            Ops::P(ctx) => Value::P(PAdic::from_rat(q, ctx)),
        }
    }

    fn add(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Ops::C(ctx), Value::C(x), Value::C(y)) => Value::C(x.add(y, ctx)),
            (Ops::P(ctx), Value::P(x), Value::P(y)) => Value::P(x.add(y, ctx)),
            _ => panic!("place mismatch in identity arithmetic"),
        }
    }

    fn sub(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Ops::C(ctx), Value::C(x), Value::C(y)) => Value::C(x.sub(y, ctx)),
            (Ops::P(ctx), Value::P(x), Value::P(y)) => Value::P(x.sub(y, ctx)),
            _ => panic!("place mismatch in identity arithmetic"),
        }
    }

    fn mul(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Ops::C(ctx), Value::C(x), Value::C(y)) => Value::C(x.mul(y, ctx)),
            (Ops::P(ctx), Value::P(x), Value::P(y)) => Value::P(x.mul(y, ctx)),
            _ => panic!("place mismatch in identity arithmetic"),
        }
    }

    /// The (l, m) mixed derivative out of a jet evaluation.
    fn deriv(&self, jr: &JetResult, l: usize, m: usize) -> Value {
        match (self, &jr.jet) {
            (Ops::C(ctx), JetValue::C(j)) => {
                Value::C(j.deriv(l, m, &JetCtx::new(l, m, ctx.clone())))
            }
            (Ops::P(ctx), JetValue::P(j)) => {
                Value::P(j.deriv(l, m, &JetCtx::new(l, m, ctx.clone())))
            }
            _ => panic!("place mismatch in jet extraction"),
        }
    }

    fn eval_poly(&self, p: &IntPoly, vals: &[Value]) -> Value {
        match self {
            Ops::C(ctx) => {
                let vs: Vec<CErr> = vals
                    .iter()
                    .map(|v| v.as_complex().expect("place mismatch").clone())
                    .collect();
                Value::C(p.eval(&vs, ctx))
            }
            Ops::P(ctx) => {
                let vs: Vec<PAdic> = vals
                    .iter()
                    .map(|v| v.as_padic().expect("place mismatch").clone())
                    .collect();
                Value::P(p.eval(&vs, ctx))
            }
        }
    }
}

/// Of two residuals at the same place, the one with the weaker bound.
fn worse_of(a: Value, b: Value) -> Value {
    match (&a, &b) {
        (Value::C(x), Value::C(y)) => {
            if x.abs_ub().cmp_value(&y.abs_ub()) == Ordering::Less {
                b
            } else {
                a
            }
        }
        (Value::P(x), Value::P(y)) => {
            if x.valuation().lower_bound() <= y.valuation().lower_bound() {
                a
            } else {
                b
            }
        }
        _ => panic!("place mismatch in residual combination"),
    }
}

// ---------------------------------------------------------------------------
// individual checks

fn inst(pr: &IdentityParams, id: FunctionId) -> Result<FunctionInstance, Skip> {
    Ok(FunctionInstance::new(pr.rec.clone(), pr.a.clone(), pr.place, id)?)
}

fn need<'a>(v: &'a Option<Rat>, what: &str) -> Result<&'a Rat, Skip> {
    v.as_ref().ok_or_else(|| Skip(format!("{what} required")))
}

/// d^l Theta / dx^l (x, 0) = F^{(l)}(x).
fn theta_x0(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let x = need(&pr.x, "x")?;
    let l = pr.l;
    let tj = jet_eval(&inst(pr, FunctionId::Theta)?, x, &rz(), l, 0, pr.prec)?;
    let fj = jet_eval(&inst(pr, FunctionId::F { m: 0 })?, x, &rz(), l, 0, pr.prec)?;
    Ok(ops.sub(&ops.deriv(&tj, l, 0), &ops.deriv(&fj, l, 0)))
}

/// d^m Theta / dy^m (1, y) = -G^{(m+1)}(y).
fn theta_1y(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let y = need(&pr.y, "y")?;
    let m = pr.m;
    let tj = jet_eval(&inst(pr, FunctionId::Theta)?, &ro(), y, 0, m, pr.prec)?;
    let gj = jet_eval(&inst(pr, FunctionId::G)?, &rz(), y, 0, m + 1, pr.prec)?;
    Ok(ops.add(&ops.deriv(&tj, 0, m), &ops.deriv(&gj, 0, m + 1)))
}

/// Theta = G * H away from the poles of H.
fn theta_gh(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let x = need(&pr.x, "x")?;
    let y = need(&pr.y, "y")?;
    let t = eval_theta(&inst(pr, FunctionId::Theta)?, x, y, pr.prec)?.certified(pr.prec);
    let g = eval_g(&inst(pr, FunctionId::G)?, y, pr.prec)?.certified(pr.prec);
    let h = eval_h(&inst(pr, FunctionId::H)?, x, y, pr.prec)?.certified(pr.prec);
    Ok(ops.sub(&t, &ops.mul(&g, &h)))
}

/// G'(y) = -G(y) H(1, y).
fn gprime(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let y = need(&pr.y, "y")?;
    let gj = jet_eval(&inst(pr, FunctionId::G)?, &rz(), y, 0, 1, pr.prec)?;
    let h = eval_h(&inst(pr, FunctionId::H)?, &ro(), y, pr.prec)?.certified(pr.prec);
    Ok(ops.add(&ops.deriv(&gj, 0, 1), &ops.mul(&ops.deriv(&gj, 0, 0), &h)))
}

/// g(x; z) = x g(x; z^d) + z for the d-ary comparison series.
fn mahler_gdary(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let x = need(&pr.x, "x")?;
    let z = need(&pr.y, "z (in the y slot)")?;
    let lhs = eval_gdary(x, z, pr.d, &pr.place, pr.prec)?.certified(pr.prec);
    let inner = eval_gdary(x, &rat_powu(z, pr.d), pr.d, &pr.place, pr.prec)?.certified(pr.prec);
    let rhs = ops.add(&ops.mul(&ops.from_rat(x), &inner), &ops.from_rat(z));
    Ok(ops.sub(&lhs, &rhs))
}

fn s4_point(pr: &IdentityParams) -> Result<MPoint, Skip> {
    let coords = match &pr.z {
        Some(c) => c.clone(),
        None => {
            let n = pr.rec.order();
            let mut c = vec![ro(); n];
            c[n - 1] = pr.a.clone();
            c
        }
    };
    Ok(MPoint::new(coords, pr.place)?)
}

/// The orbit points z_k and z_{k+1} and the monomial value M(z_k).
fn orbit_pair(pr: &IdentityParams) -> Result<(MPoint, MPoint, Rat), Skip> {
    let om = OmegaTransform::companion(&pr.rec);
    let zk = apply(&om, &s4_point(pr)?, pr.shift_k)?;
    let zk1 = apply(&om, &zk, 1)?;
    let mz = monomial_value(&pr.rec, &zk, 0)?;
    Ok((zk, zk1, mz))
}

/// g_j(z) = (1 - beta M(z)) g_j(transformed z).
fn mahler_multi_g(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let beta = need(&pr.beta, "beta")?;
    let (zk, zk1, mz) = orbit_pair(pr)?;
    let lhs = eval_g_multi(&pr.rec, &zk, beta, pr.prec)?.certified(pr.prec);
    let tail = eval_g_multi(&pr.rec, &zk1, beta, pr.prec)?.certified(pr.prec);
    let factor = ops.from_rat(&(ro() - beta * &mz));
    Ok(ops.sub(&lhs, &ops.mul(&factor, &tail)))
}

/// h_jm(x; z) = x h_jm(x; transformed z) + (M(z) / (1 - beta M(z)))^{m+1}.
fn mahler_multi_h(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let x = need(&pr.x, "x")?;
    let beta = need(&pr.beta, "beta")?;
    let m = pr.m as u32;
    let (zk, zk1, mz) = orbit_pair(pr)?;
    let den = ro() - beta * &mz;
    if den.is_zero() {
        return Err(Skip("leading factor 1 - beta M(z) vanishes".into()));
    }
    let lhs = eval_h_multi(&pr.rec, x, &zk, beta, m, pr.prec)?.certified(pr.prec);
    let tail = eval_h_multi(&pr.rec, x, &zk1, beta, m, pr.prec)?.certified(pr.prec);
    let lead = ops.from_rat(&rat_powu(&(mz / den), m + 1));
    let rhs = ops.add(&ops.mul(&ops.from_rat(x), &tail), &lead);
    Ok(ops.sub(&lhs, &rhs))
}

/// f_m(x; z) = x f_m(x; transformed z) + M(z)^{m+1}.
fn mahler_multi_f(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let x = need(&pr.x, "x")?;
    let m = pr.m as u32;
    let (zk, zk1, mz) = orbit_pair(pr)?;
    let lhs = eval_f_multi(&pr.rec, x, &zk, m, pr.prec)?.certified(pr.prec);
    let tail = eval_f_multi(&pr.rec, x, &zk1, m, pr.prec)?.certified(pr.prec);
    let rhs = ops.add(&ops.mul(&ops.from_rat(x), &tail), &ops.from_rat(&rat_powu(&mz, m + 1)));
    Ok(ops.sub(&lhs, &rhs))
}

// ---------------------------------------------------------------------------
// shift decomposition

/// Exact data of the decomposition G = P Q G-tilde at beta: the shift
/// index, the multiplicity, the head scales a^{R_k} for k < k0, and
/// the shifted recurrence behind the tail functions.
struct ShiftData {
    k0: usize,
    nn: usize,
    avals: Vec<Rat>,
    srec: LinearRecurrence,
    binv: Rat,
}

fn shift_setup(pr: &IdentityParams) -> Result<(ShiftData, Rat), Skip> {
    let beta = need(&pr.beta, "beta")?.clone();
    let nb = n_beta(&inst(pr, FunctionId::G)?, &beta)?;
    let k0 = compute_k0(&pr.rec, &pr.a, std::slice::from_ref(&beta), &pr.place)?;
    let mut avals = Vec::with_capacity(k0);
    for k in 0..k0 {
        avals.push(a_pow(&pr.a, &pr.rec.term(k))?);
    }
    let srec = shift(&pr.rec, k0);
    let binv = ro() / &beta;
    Ok((ShiftData { k0, nn: nb.count, avals, srec, binv }, beta))
}

/// G(y) = [prod_{k < k0} (1 - a^{R_k} y)] G-tilde(y): the head product
/// carries every vanishing factor, the tail is the product over the
/// shifted recurrence.
fn shift_g(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let (sd, beta) = shift_setup(pr)?;
    let y = pr.y.clone().unwrap_or(beta);
    let lhs = eval_g(&inst(pr, FunctionId::G)?, &y, pr.prec)?.certified(pr.prec);
    let mut head = ro();
    for av in &sd.avals {
        head = head * (ro() - av * &y);
    }
    let si = FunctionInstance::new(sd.srec.clone(), pr.a.clone(), pr.place, FunctionId::G)?;
    let tail = eval_g(&si, &y, pr.prec)?.certified(pr.prec);
    Ok(ops.sub(&lhs, &ops.mul(&ops.from_rat(&head), &tail)))
}

/// The two-term decomposition of Theta across the shift,
///
///   Theta(x, y) = x^{k0} [prod_{k<k0} (1 - a^{R_k} y)] Theta~(x, y)
///               + [sum_{k<k0} a^{R_k} x^k prod_{j!=k} (1 - a^{R_j} y)] G~(y),
///
/// checked as stated at (x, y), and again after l x-derivatives and
/// N + m y-derivatives at (x, beta), where the vanishing factors
/// (1 - y/beta)^N and (1 - y/beta)^{max(N-1,0)} contribute only their
/// top derivative and the multinomial weights below. The residual is
/// the weaker of the two.
fn shift_theta(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let (sd, beta) = shift_setup(pr)?;
    let x = pr.x.clone().unwrap_or_else(ro);
    let y = pr.y.clone().unwrap_or_else(|| beta.clone());
    if sd.nn + pr.m > 24 {
        return Err(Skip("combined y-derivative order too large".into()));
    }

    let sti = FunctionInstance::new(sd.srec.clone(), pr.a.clone(), pr.place, FunctionId::Theta)?;
    let sgi = FunctionInstance::new(sd.srec.clone(), pr.a.clone(), pr.place, FunctionId::G)?;

    let r_value = {
        let lhs = eval_theta(&inst(pr, FunctionId::Theta)?, &x, &y, pr.prec)?.certified(pr.prec);
        let mut pq = rat_powu(&x, sd.k0 as u32);
        for av in &sd.avals {
            pq = pq * (ro() - av * &y);
        }
        let mut head = rz();
        for (k, av) in sd.avals.iter().enumerate() {
            let mut t = av * rat_powu(&x, k as u32);
            for (j, aj) in sd.avals.iter().enumerate() {
                if j != k {
                    t = t * (ro() - aj * &y);
                }
            }
            head = head + t;
        }
        let tt = eval_theta(&sti, &x, &y, pr.prec)?.certified(pr.prec);
        let gt = eval_g(&sgi, &y, pr.prec)?.certified(pr.prec);
        let rhs = ops.add(
            &ops.mul(&ops.from_rat(&pq), &tt),
            &ops.mul(&ops.from_rat(&head), &gt),
        );
        ops.sub(&lhs, &rhs)
    };

    let r_deriv = shift_theta_deriv(pr, ops, &sd, &sti, &sgi, &beta, &x)?;
    Ok(worse_of(r_value, r_deriv))
}

/// The (l, N+m) mixed derivative of the decomposition at (x, beta).
fn shift_theta_deriv(
    pr: &IdentityParams,
    ops: &Ops,
    sd: &ShiftData,
    sti: &FunctionInstance,
    sgi: &FunctionInstance,
    beta: &Rat,
    x: &Rat,
) -> Result<Value, Skip> {
    let (l, m) = (pr.l, pr.m);
    let nn = sd.nn;
    let mi = nn.min(1);
    let e = nn.saturating_sub(1);

    let tj = jet_eval(&inst(pr, FunctionId::Theta)?, x, beta, l, nn + m, pr.prec)?;
    let stj = jet_eval(sti, x, beta, l, m, pr.prec)?;
    let sgj = jet_eval(sgi, &rz(), beta, 0, m + mi, pr.prec)?;

    let lhs = ops.deriv(&tj, l, nn + m);

    // Q: the head factors that do not vanish at beta, as dense
    // polynomial coefficients in y
    let mut qc = vec![ro()];
    for av in &sd.avals {
        if av != &sd.binv {
            poly_mul_one_minus(&mut qc, av);
        }
    }
    // top derivatives of (1 - y/beta)^N and (1 - y/beta)^{max(N-1,0)}
    let p_top = int_rat(&factorial_big(nn)) * rat_powu(&-sd.binv.clone(), nn as u32);
    let u_top = int_rat(&factorial_big(e)) * rat_powu(&-sd.binv.clone(), e as u32);
    let wks = struck_products(sd, e);

    let mut rhs = ops.from_rat(&rz());
    for h1 in 0..=l {
        let rd = monomial_deriv(sd.k0, l - h1, x);
        if rd.is_zero() {
            continue;
        }
        let lb = binomial(BigInt::from(l), BigInt::from(h1));
        let mut inner = ops.from_rat(&rz());
        for h2 in 0..=m {
            let c = multinom3(nn + m, nn, m - h2, h2);
            let scal = int_rat(&c) * &p_top * poly_deriv_eval(&qc, m - h2, beta);
            if scal.is_zero() {
                continue;
            }
            inner = ops.add(&inner, &ops.mul(&ops.from_rat(&scal), &ops.deriv(&stj, h1, h2)));
        }
        rhs = ops.add(&rhs, &ops.mul(&ops.from_rat(&(int_rat(&lb) * rd)), &inner));
    }
    for h3 in 0..=(m + mi) {
        let c = multinom3(nn + m, e, m + mi - h3, h3);
        let scal = int_rat(&c) * &u_top * v_partial(sd, &wks, l, m + mi - h3, x, beta);
        if scal.is_zero() {
            continue;
        }
        rhs = ops.add(&rhs, &ops.mul(&ops.from_rat(&scal), &ops.deriv(&sgj, 0, h3)));
    }
    Ok(ops.sub(&lhs, &rhs))
}

/// For each k < k0 the dense coefficients of prod_{j != k}
/// (1 - a^{R_j} y) with `strike` copies of the vanishing factor struck:
/// they cancel exactly against the (1 - y/beta)^{max(N-1,0)} prefactor,
/// so the quotient stays polynomial.
fn struck_products(sd: &ShiftData, strike: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::with_capacity(sd.k0);
    for k in 0..sd.k0 {
        let mut c = vec![ro()];
        let mut struck = 0usize;
        for (j, av) in sd.avals.iter().enumerate() {
            if j == k {
                continue;
            }
            if struck < strike && av == &sd.binv {
                struck += 1;
                continue;
            }
            poly_mul_one_minus(&mut c, av);
        }
        assert_eq!(struck, strike, "multiplicity bookkeeping is inconsistent");
        out.push(c);
    }
    out
}

/// d^{i+j} / dx^i dy^j of sum_k a^{R_k} x^k W_k(y) at (x, beta).
fn v_partial(sd: &ShiftData, wks: &[Vec<Rat>], i: usize, j: usize, x: &Rat, beta: &Rat) -> Rat {
    let mut acc = rz();
    for (k, av) in sd.avals.iter().enumerate() {
        let xd = monomial_deriv(k, i, x);
        if xd.is_zero() {
            continue;
        }
        acc = acc + av * xd * poly_deriv_eval(&wks[k], j, beta);
    }
    acc
}

/// Multiply dense coefficients by (1 - s y).
fn poly_mul_one_minus(c: &mut Vec<Rat>, s: &Rat) {
    let mut out = vec![rz(); c.len() + 1];
    for (i, ci) in c.iter().enumerate() {
        out[i] = &out[i] + ci;
        out[i + 1] = &out[i + 1] - ci * s;
    }
    *c = out;
}

/// j-th derivative of the dense polynomial at y.
fn poly_deriv_eval(c: &[Rat], j: usize, y: &Rat) -> Rat {
    let mut acc = rz();
    let mut ypow = ro();
    for (i, ci) in c.iter().enumerate().skip(j) {
        acc = acc + ci * int_rat(&falling(i, j)) * &ypow;
        ypow = ypow * y;
    }
    acc
}

fn falling(n: usize, j: usize) -> BigInt {
    if j > n {
        return BigInt::zero();
    }
    let mut f = BigInt::one();
    for t in 0..j {
        f *= BigInt::from(n - t);
    }
    f
}

/// (x^n)^{(j)} at x.
fn monomial_deriv(n: usize, j: usize, x: &Rat) -> Rat {
    if j > n {
        return rz();
    }
    int_rat(&falling(n, j)) * rat_powu(x, (n - j) as u32)
}

fn factorial_big(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= BigInt::from(i);
    }
    f
}

fn multinom3(n: usize, i: usize, j: usize, k: usize) -> BigInt {
    debug_assert_eq!(n, i + j + k);
    binomial(BigInt::from(n), BigInt::from(i)) * binomial(BigInt::from(n - i), BigInt::from(j))
}

/// Mixed-derivative transfer through the product:
/// Theta^{(l,m)} = G (H^{(l,m)} + B_m(X, Y)) with X_i the pure
/// y-derivatives of H at (1, y) and Y_i the mixed ones at (x, y).
/// At y = 0 the right side collapses to the derived series.
fn der_transfer(pr: &IdentityParams, ops: &Ops) -> Result<Value, Skip> {
    let x = need(&pr.x, "x")?;
    let y = need(&pr.y, "y")?;
    let (l, m) = (pr.l, pr.m);
    let hi = inst(pr, FunctionId::H)?;

    let tj = jet_eval(&inst(pr, FunctionId::Theta)?, x, y, l, m, pr.prec)?;
    let lhs = ops.deriv(&tj, l, m);

    let g = eval_g(&inst(pr, FunctionId::G)?, y, pr.prec)?.certified(pr.prec);
    let hj = jet_eval(&hi, x, y, l, m, pr.prec)?;
    let mut rhs = ops.deriv(&hj, l, m);
    if m >= 1 {
        let h1j = jet_eval(&hi, &ro(), y, 0, m - 1, pr.prec)?;
        let bm = transfer_polys(m as u32).1;
        let mut vals = Vec::with_capacity(2 * m);
        for i in 0..m {
            vals.push(ops.deriv(&h1j, 0, i));
        }
        for i in 0..m {
            vals.push(ops.deriv(&hj, l, i));
        }
        rhs = ops.add(&rhs, &ops.eval_poly(&bm, &vals));
    }
    Ok(ops.sub(&lhs, &ops.mul(&g, &rhs)))
}

// ---------------------------------------------------------------------------
// rank certificates

/// Which linear family the certificate is for.
///
/// RRR: {1} with {X^{m+1}} and {(X / (1 - beta_j X))^{m+1}} up to
/// order M; full column rank certifies that no nontrivial combination
/// is constant. SSS: {X / (1 - beta_j X)} alone, the log-derivative
/// family; full column rank rules out multiplicative relations
/// prod (1 - beta_j X)^{d_j} = 1 with integer exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    RRR,
    SSS,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum RankError {
    #[error("betas must be pairwise distinct: {0} repeats")]
    DuplicateBeta(String),
    #[error("betas must be nonzero")]
    ZeroBeta,
}

/// The exact Taylor-coefficient matrix of the family, its rank, and a
/// basis of its right kernel; `full_column_rank` is the certificate.
#[derive(Clone, Debug)]
pub struct RankCheck {
    pub mode: RankMode,
    pub betas: Vec<Rat>,
    pub order: u32,
    pub matrix: Vec<Vec<Rat>>,
    pub rank: usize,
    pub kernel: Vec<Vec<Rat>>,
}

impl RankCheck {
    pub fn ncols(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    pub fn full_column_rank(&self) -> bool {
        self.rank == self.ncols()
    }
}

/// Build the coefficient matrix to one more row than columns (RRR) or
/// s + 2 rows (SSS) and compute its exact rank. `order` is the maximal
/// power M for RRR and ignored for SSS.
pub fn rank_check(mode: RankMode, betas: &[Rat], order: u32) -> Result<RankCheck, RankError> {
    if betas.iter().any(|b| b.is_zero()) {
        return Err(RankError::ZeroBeta);
    }
    for (i, b) in betas.iter().enumerate() {
        if betas[..i].contains(b) {
            return Err(RankError::DuplicateBeta(b.to_string()));
        }
    }
    let s = betas.len();
    let mm = order as usize;
    let (rows, cols) = match mode {
        RankMode::RRR => ((s + 1) * (mm + 1) + 2, 1 + (s + 1) * (mm + 1)),
        RankMode::SSS => (s + 2, s),
    };
    let mut mat = vec![vec![rz(); cols]; rows];
    match mode {
        RankMode::RRR => {
            mat[0][0] = ro();
            for m in 0..=mm {
                mat[m + 1][1 + m] = ro();
            }
            // (X / (1 - b X))^{m+1} has Taylor coefficient
            // binom(t-1, m) b^{t-m-1} at X^t
            for (j, b) in betas.iter().enumerate() {
                for m in 0..=mm {
                    let col = 1 + (mm + 1) * (j + 1) + m;
                    for t in (m + 1)..rows {
                        mat[t][col] = int_rat(&binomial(BigInt::from(t - 1), BigInt::from(m)))
                            * rat_powu(b, (t - m - 1) as u32);
                    }
                }
            }
        }
        RankMode::SSS => {
            for (j, b) in betas.iter().enumerate() {
                for t in 1..rows {
                    mat[t][j] = rat_powu(b, (t - 1) as u32);
                }
            }
        }
    }
    let (rank, kernel) = rank_and_kernel(&mat);
    Ok(RankCheck { mode, betas: betas.to_vec(), order, matrix: mat, rank, kernel })
}

/// Exact rank and right kernel. Rows are scaled integral (row scaling
/// changes neither), then fraction-free elimination divides each 2x2
/// update by the previous pivot; the divisions are exact by the
/// Sylvester determinant identity, and that exactness is asserted.
/// Kernel vectors come from back-substitution on the reduced rows, one
/// per non-pivot column.
fn rank_and_kernel(mat: &[Vec<Rat>]) -> (usize, Vec<Vec<Rat>>) {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    if cols == 0 {
        return (0, vec![]);
    }
    let mut a: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|row| {
            let mut l = BigInt::one();
            for q in row {
                l = l.lcm(q.denom());
            }
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pivot_row) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot_row);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "fraction-free elimination left a remainder");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = pivots.len();

    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut kernel = Vec::new();
    for fc in 0..cols {
        if pivot_cols.contains(&fc) {
            continue;
        }
        let mut v = vec![rz(); cols];
        v[fc] = ro();
        for &(prow, pcol) in pivots.iter().rev() {
            let mut sum = rz();
            for j in (pcol + 1)..cols {
                if !v[j].is_zero() && !a[prow][j].is_zero() {
                    sum = sum + int_rat(&a[prow][j]) * &v[j];
                }
            }
            v[pcol] = -sum / int_rat(&a[prow][pcol]);
        }
        kernel.push(v);
    }
    (rank, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::make_recurrence;

    fn fib() -> LinearRecurrence {
        make_recurrence(&[1, 1], &[1, 2]).unwrap()
    }

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn ri(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn base() -> IdentityParams {
        IdentityParams::new(fib(), rq(1, 2), Place::Inf)
    }

    fn base_p2() -> IdentityParams {
        IdentityParams::new(fib(), ri(2), Place::P(2))
    }

    fn assert_pass(case: &IdentityCase) {
        assert_eq!(
            case.verdict,
            Verdict::Pass,
            "{} [{}] note={:?} residual={}",
            case.id,
            case.params,
            case.note,
            case.residual_text()
        );
    }

    #[test]
    fn transfer_polys_match_hand_expansion() {
        let x1 = IntPoly::var(0);
        let x2 = IntPoly::var(1);
        let x3 = IntPoly::var(2);

        let (a1, b1) = transfer_polys(1);
        assert_eq!(a1, x1.neg());
        assert_eq!(b1, x1.mul(&IntPoly::var(1)).neg()); // -X1 Y1, block 1

        let (a2, b2) = transfer_polys(2);
        assert_eq!(a2, x1.mul(&x1).sub(&x2));
        // B2 = A2 Y1 + 2 A1 Y2 = (X1^2 - X2) Y1 - 2 X1 Y2, block 2
        let y1 = IntPoly::var(2);
        let y2 = IntPoly::var(3);
        let want = x1.mul(&x1).sub(&x2).mul(&y1).sub(&x1.mul(&y2).mul_scalar(&BigInt::from(2)));
        assert_eq!(b2, want);

        let (a3, b3) = transfer_polys(3);
        let want =
            x1.pow(3).neg().add(&x1.mul(&x2).mul_scalar(&BigInt::from(3))).sub(&x3);
        assert_eq!(a3, want);
        // the binom(3,2) A1 Y3 term of B3
        assert_eq!(b3.coeff(&[1, 0, 0, 0, 0, 1]), BigInt::from(-3));
    }

    #[test]
    fn inverse_transfer_round_trips_exactly() {
        assert_eq!(transfer_polys_c(1), IntPoly::var(0).mul(&IntPoly::var(1)));

        // run the forward relations on arbitrary exact rationals, then
        // check the inverse recovers the H-derivative with zero error
        let u: Vec<Rat> = (0..4).map(|j| rq(j + 2, 2 * j + 3)).collect();
        let v: Vec<Rat> = (0..4).map(|j| rq(2 * j - 5, j + 4)).collect();
        for m in 1..=3usize {
            let mut s = vec![u[0].clone()];
            let mut t = vec![v[0].clone()];
            for j in 1..=m {
                let bj = transfer_polys(j as u32).1;
                let mut args: Vec<Rat> = u[..j].to_vec();
                args.extend_from_slice(&u[..j]);
                s.push(&u[j] + bj.eval(&args, &()));
                let mut args: Vec<Rat> = u[..j].to_vec();
                args.extend_from_slice(&v[..j]);
                t.push(&v[j] + bj.eval(&args, &()));
            }
            let cm = transfer_polys_c(m as u32);
            let mut args: Vec<Rat> = s[..m].to_vec();
            args.extend_from_slice(&t[..m]);
            let recovered = &t[m] + cm.eval(&args, &());
            assert_eq!(recovered, v[m], "inverse transfer failed at order {m}");
        }
    }

    #[test]
    fn product_derivatives_follow_transfer_polys() {
        let prec = 256;
        let ops = Ops::new(&Place::Inf, prec).unwrap();
        let gi = FunctionInstance::new(fib(), rq(1, 2), Place::Inf, FunctionId::G).unwrap();
        let hi = FunctionInstance::new(fib(), rq(1, 2), Place::Inf, FunctionId::H).unwrap();
        let tol = Dyadic::power_of_two(-180);
        for y in [rq(1, 3), rq(2, 5), rq(-1, 2), rq(3, 7), rq(-2, 7)] {
            let gj = jet_eval(&gi, &rz(), &y, 0, 5, prec).unwrap();
            let hj = jet_eval(&hi, &ro(), &y, 0, 4, prec).unwrap();
            let g = ops.deriv(&gj, 0, 0);
            for m in 1..=5usize {
                let am = transfer_polys(m as u32).0;
                let vals: Vec<Value> = (0..m).map(|i| ops.deriv(&hj, 0, i)).collect();
                let rhs = ops.mul(&g, &ops.eval_poly(&am, &vals));
                let r = ops.sub(&ops.deriv(&gj, 0, m), &rhs);
                let ub = r.as_complex().unwrap().abs_ub();
                assert!(
                    ub.cmp_value(&tol) != Ordering::Greater,
                    "order {m} at y={y}: residual {}",
                    ub.to_decimal(4)
                );
            }
        }
    }

    #[test]
    fn catalog_verifies_end_to_end() {
        assert_eq!(IDENTITY_IDS.len(), 11);
        for id in IDENTITY_IDS {
            let mut pr = base();
            match id {
                "THETA_X0" => {
                    pr.x = Some(rq(1, 3));
                    pr.l = 2;
                }
                "THETA_1Y" => {
                    pr.y = Some(rq(1, 3));
                    pr.m = 2;
                }
                "THETA_GH" => {
                    pr.x = Some(rq(1, 3));
                    pr.y = Some(rq(1, 5));
                }
                "GPRIME" => pr.y = Some(rq(1, 3)),
                "MAHLER_GD" => {
                    pr.x = Some(rq(1, 3));
                    pr.y = Some(rq(1, 2));
                }
                "MAHLER_S4_G" => {
                    pr.beta = Some(ri(1));
                    pr.shift_k = 2;
                }
                "MAHLER_S4_H" => {
                    pr.x = Some(rq(1, 2));
                    pr.beta = Some(ri(1));
                    pr.m = 1;
                    pr.shift_k = 1;
                }
                "MAHLER_S4_F" => {
                    pr.x = Some(rq(1, 2));
                    pr.m = 1;
                    pr.shift_k = 1;
                }
                "SHIFT_G" => pr.beta = Some(ri(2)),
                "SHIFT_THETA" => {
                    pr.beta = Some(ri(2));
                    pr.x = Some(rq(1, 3));
                    pr.y = Some(rq(1, 5));
                    pr.l = 1;
                    pr.m = 1;
                }
                "DER_TRANSFER" => {
                    pr.x = Some(rq(1, 3));
                    pr.y = Some(rq(1, 5));
                    pr.l = 1;
                    pr.m = 2;
                }
                _ => unreachable!(),
            }
            assert_pass(&verify(id, &pr));
        }
    }

    #[test]
    fn theta_1y_holds_at_stated_tolerance() {
        for m in 0..=3usize {
            let mut pr = base();
            pr.y = Some(rq(1, 3));
            pr.m = m;
            let case = verify("THETA_1Y", &pr);
            assert_pass(&case);
            let Tolerance::Abs(d) = &case.tolerance else {
                panic!("archimedean tolerance expected")
            };
            assert_eq!(d.cmp_value(&Dyadic::power_of_two(-180)), Ordering::Equal);
        }
    }

    #[test]
    fn multi_identities_hold_along_the_orbit() {
        for k in 0..=10usize {
            let mut pr = base();
            pr.beta = Some(ri(1));
            pr.shift_k = k;
            assert_pass(&verify("MAHLER_S4_G", &pr));
        }
        for k in 0..=4usize {
            for m in 0..=1usize {
                let mut pr = base();
                pr.x = Some(rq(1, 2));
                pr.beta = Some(ri(1));
                pr.m = m;
                pr.shift_k = k;
                assert_pass(&verify("MAHLER_S4_H", &pr));
            }
            for m in 0..=2usize {
                let mut pr = base();
                pr.x = Some(rq(1, 2));
                pr.m = m;
                pr.shift_k = k;
                assert_pass(&verify("MAHLER_S4_F", &pr));
            }
        }
    }

    #[test]
    fn shift_decomposition_certifies_zeros() {
        // beta = 2 = a^{-R_0}: one vanishing factor, k0 = 1
        assert_eq!(compute_k0(&fib(), &rq(1, 2), &[ri(2)], &Place::Inf).unwrap(), 1);
        for y in [ri(2), rq(1, 3)] {
            let mut pr = base();
            pr.beta = Some(ri(2));
            pr.y = Some(y);
            assert_pass(&verify("SHIFT_G", &pr));
        }
        // beta = 4 = a^{-R_1}: k0 = 2, head (1 - y/2)(1 - y/4)
        assert_eq!(compute_k0(&fib(), &rq(1, 2), &[ri(4)], &Place::Inf).unwrap(), 2);
        let mut pr = base();
        pr.beta = Some(ri(4));
        pr.y = Some(rq(1, 2));
        assert_pass(&verify("SHIFT_G", &pr));

        // across the factorization, G'(beta) = p q G~(beta) with
        // p the top derivative of the vanishing factor and q the rest
        // of the head: at beta = 4, p = -1/4 and q = 1 - 4/2 = -1
        let prec = 256;
        let ops = Ops::new(&Place::Inf, prec).unwrap();
        let gi = FunctionInstance::new(fib(), rq(1, 2), Place::Inf, FunctionId::G).unwrap();
        let g4 = eval_g(&gi, &ri(4), prec).unwrap();
        assert_eq!(g4.flags, vec![1]);
        let gj = jet_eval(&gi, &rz(), &ri(4), 0, 1, prec).unwrap();
        let srec = shift(&fib(), 2);
        assert_eq!(srec.initial(), &[BigInt::from(3), BigInt::from(5)]);
        let sgi = FunctionInstance::new(srec, rq(1, 2), Place::Inf, FunctionId::G).unwrap();
        let gt = eval_g(&sgi, &ri(4), prec).unwrap().certified(prec);
        let r = ops.sub(&ops.deriv(&gj, 0, 1), &ops.mul(&ops.from_rat(&rq(1, 4)), &gt));
        let ub = r.as_complex().unwrap().abs_ub();
        assert!(
            ub.cmp_value(&Dyadic::power_of_two(-180)) != Ordering::Greater,
            "residual {}",
            ub.to_decimal(4)
        );
    }

    #[test]
    fn shift_theta_handles_all_orders() {
        for l in 0..=2usize {
            for m in 0..=2usize {
                let mut pr = base();
                pr.beta = Some(ri(2));
                pr.x = Some(rq(1, 3));
                pr.y = Some(rq(1, 7));
                pr.l = l;
                pr.m = m;
                assert_pass(&verify("SHIFT_THETA", &pr));
            }
        }
    }

    #[test]
    fn shift_theta_handles_multiplicity_two() {
        // R = 1, 1, 2, 2, 4, 4, ...: beta = 2 kills two factors
        let rec = make_recurrence(&[0, 2], &[1, 1]).unwrap();
        let gi = FunctionInstance::new(rec.clone(), rq(1, 2), Place::Inf, FunctionId::G).unwrap();
        let nb = n_beta(&gi, &ri(2)).unwrap();
        assert_eq!((nb.count, nb.witnesses.clone()), (2, vec![0, 1]));
        for l in 0..=1usize {
            for m in 0..=1usize {
                let mut pr = IdentityParams::new(rec.clone(), rq(1, 2), Place::Inf);
                pr.beta = Some(ri(2));
                pr.x = Some(rq(1, 3));
                pr.y = Some(rq(1, 7));
                pr.l = l;
                pr.m = m;
                assert_pass(&verify("SHIFT_THETA", &pr));
            }
        }
        // same multiplicity-two situation 2-adically at beta = 1/2
        let mut pr = IdentityParams::new(rec, ri(2), Place::P(2));
        pr.beta = Some(rq(1, 2));
        pr.x = Some(rq(1, 5));
        pr.y = Some(rq(1, 3));
        pr.l = 1;
        pr.m = 1;
        assert_pass(&verify("SHIFT_THETA", &pr));
    }

    #[test]
    fn derivative_transfer_specializes_at_y_zero() {
        for (l, m) in [(0usize, 1usize), (1, 1), (2, 2), (0, 3)] {
            let mut pr = base();
            pr.x = Some(rq(2, 5));
            pr.y = Some(rz());
            pr.l = l;
            pr.m = m;
            assert_pass(&verify("DER_TRANSFER", &pr));
        }
    }

    #[test]
    fn identities_hold_p_adically() {
        let cases: [(&str, Option<Rat>, Option<Rat>, usize, usize); 5] = [
            ("THETA_1Y", None, Some(rq(1, 3)), 0, 1),
            ("THETA_GH", Some(rq(1, 5)), Some(rq(1, 3)), 0, 0),
            ("GPRIME", None, Some(rq(1, 3)), 0, 0),
            ("DER_TRANSFER", Some(rq(1, 5)), Some(rq(1, 3)), 1, 1),
            ("MAHLER_GD", Some(rq(1, 3)), Some(ri(2)), 0, 0),
        ];
        for (id, x, y, l, m) in cases {
            let mut pr = base_p2();
            pr.x = x;
            pr.y = y;
            pr.l = l;
            pr.m = m;
            let case = verify(id, &pr);
            assert_pass(&case);
            assert_eq!(case.tolerance, Tolerance::Val(248));
        }
        let mut pr = base_p2();
        pr.beta = Some(ri(1));
        pr.shift_k = 1;
        assert_pass(&verify("MAHLER_S4_G", &pr));
        // beta = a^{-R_0} = 1/2 vanishes 2-adically; shift past it
        let mut pr = base_p2();
        pr.beta = Some(rq(1, 2));
        pr.x = Some(rq(1, 5));
        pr.y = Some(rq(1, 3));
        pr.l = 1;
        pr.m = 1;
        assert_pass(&verify("SHIFT_THETA", &pr));
    }

    #[test]
    fn rank_certificates() {
        // single beta = 1, order 0: columns 1, X, X/(1-X)
        let rc = rank_check(RankMode::RRR, &[ri(1)], 0).unwrap();
        assert_eq!((rc.matrix.len(), rc.ncols()), (4, 3));
        assert_eq!(rc.rank, 3);
        assert!(rc.full_column_rank());
        assert!(rc.kernel.is_empty());

        let rc = rank_check(RankMode::RRR, &[ri(1), ri(2)], 1).unwrap();
        assert_eq!(rc.ncols(), 7);
        assert!(rc.full_column_rank());

        let rc = rank_check(RankMode::RRR, &[rq(1, 2), ri(-3), rq(7, 5), ri(2)], 3).unwrap();
        assert_eq!((rc.matrix.len(), rc.ncols()), (22, 21));
        assert!(rc.full_column_rank());

        let rc = rank_check(RankMode::SSS, &[ri(1), ri(2)], 0).unwrap();
        assert_eq!((rc.matrix.len(), rc.ncols()), (4, 2));
        assert!(rc.full_column_rank());
        assert!(rc.kernel.is_empty());

        assert_eq!(rank_check(RankMode::SSS, &[rz()], 0).unwrap_err(), RankError::ZeroBeta);
        assert!(matches!(
            rank_check(RankMode::RRR, &[ri(2), ri(2)], 1).unwrap_err(),
            RankError::DuplicateBeta(_)
        ));
    }

    #[test]
    fn rank_kernel_spans_dependencies() {
        let m = vec![vec![ri(1), ri(2)], vec![ri(2), ri(4)], vec![ri(3), ri(6)]];
        let (rank, ker) = rank_and_kernel(&m);
        assert_eq!(rank, 1);
        assert_eq!(ker.len(), 1);
        for row in &m {
            let s = &row[0] * &ker[0][0] + &row[1] * &ker[0][1];
            assert!(s.is_zero());
        }

        // a zero column is skipped, not a pivot
        let m = vec![vec![rz(), ri(1)], vec![rz(), ri(2)]];
        let (rank, ker) = rank_and_kernel(&m);
        assert_eq!((rank, ker.len()), (1, 1));
        assert_eq!(ker[0], vec![ro(), rz()]);

        // rationals with mixed denominators
        let m = vec![
            vec![rq(1, 2), rq(1, 3), rq(5, 6)],
            vec![rq(1, 4), rq(1, 5), rq(9, 20)],
            vec![rq(3, 4), rq(8, 15), rq(77, 60)],
        ];
        let (rank, ker) = rank_and_kernel(&m);
        assert_eq!(rank, 2); // third column is the sum of the first two
        assert_eq!(ker.len(), 1);
        for row in &m {
            let s: Rat = row.iter().zip(&ker[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn skipped_cases_carry_reasons() {
        let case = verify("NO_SUCH_ID", &base());
        assert_eq!(case.verdict, Verdict::Unknown);
        assert!(case.note.contains("unknown identity"));
        assert!(case.residual.is_none());

        // pole of H
        let mut pr = base();
        pr.x = Some(ri(1));
        pr.y = Some(ri(2));
        let case = verify("THETA_GH", &pr);
        assert_eq!(case.verdict, Verdict::Unknown);
        assert!(case.note.contains("vanishes"), "note: {}", case.note);

        // missing input
        let case = verify("GPRIME", &base());
        assert_eq!(case.verdict, Verdict::Unknown);
        assert!(case.note.contains("required"));

        // multi point outside the certified domain
        let mut pr = base();
        pr.beta = Some(ri(1));
        pr.z = Some(vec![ri(2), ri(3)]);
        let case = verify("MAHLER_S4_G", &pr);
        assert_eq!(case.verdict, Verdict::Unknown);
        assert!(!case.note.is_empty());
    }
}
