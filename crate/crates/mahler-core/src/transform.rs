//! The multiplicative transformation: an exponent matrix acting on points
//! coordinatewise by monomials, iteration being exact matrix powers.
//!
//! Alongside the orbit machinery this hosts the executable condition
//! checks: nonsingularity without root-of-unity eigenvalues, entry growth
//! O(rho^k), coordinate log-decay with an explicit constant, and the
//! absence of multiplicative relations along the orbit (decided by an
//! exact exponent-lattice kernel at the real place, and by the cofactor
//! criterion at a finite place).

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::factor::{irreducible_over_q, Irreducibility};
use crate::poly::roots::certified_roots;
use crate::poly::{bareiss_det_poly, cyclotomic, euler_phi, IPoly};
use crate::recurrence::{check_condition, make_recurrence, LinearRecurrence};
use crate::report::{overall, Clause, Verdict};
use crate::scalars::cerr::{CCtx, CErr};
use crate::scalars::padic::padic_val_rat;
use crate::scalars::{Dyadic, Place, Rat, Round, Scalar};

/// Cap on the estimated bit size of any coordinate produced by `apply`.
pub const DEFAULT_RESULT_BITS: u64 = 1 << 20;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("matrix entries must be nonnegative")]
    NegativeEntry,
    #[error("point coordinates must be nonzero")]
    ZeroCoordinate,
    #[error("point dimension {0} does not match matrix size {1}")]
    DimensionMismatch(usize, usize),
    #[error("orbit coordinate would exceed {0} bits")]
    ExponentTooLarge(u64),
}

type IMat = Vec<Vec<BigInt>>;

fn rat_one() -> Rat {
    Rat::from_integer(BigInt::one())
}

fn identity_mat(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

#[derive(Debug)]
pub struct OmegaTransform {
    mat: IMat,
    powers: Mutex<Vec<IMat>>,
}

impl Clone for OmegaTransform {
    fn clone(&self) -> Self {
        OmegaTransform {
            mat: self.mat.clone(),
            powers: Mutex::new(self.powers.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for OmegaTransform {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl OmegaTransform {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, TransformError> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|row| row.len() != n) {
            return Err(TransformError::NotSquare);
        }
        if entries.iter().flatten().any(|&e| e < 0) {
            return Err(TransformError::NegativeEntry);
        }
        let mat: IMat =
            entries.iter().map(|row| row.iter().map(|&e| BigInt::from(e)).collect()).collect();
        Ok(OmegaTransform { powers: Mutex::new(vec![identity_mat(n), mat.clone()]), mat })
    }

    /// Companion matrix of the recurrence: coefficients down the first
    /// column, ones on the superdiagonal.
    pub fn companion(rec: &LinearRecurrence) -> Self {
        let n = rec.order();
        let mut mat = vec![vec![BigInt::zero(); n]; n];
        for (i, &c) in rec.coeffs().iter().enumerate() {
            mat[i][0] = BigInt::from(c);
        }
        for i in 0..n - 1 {
            mat[i][i + 1] = BigInt::one();
        }
        OmegaTransform { powers: Mutex::new(vec![identity_mat(n), mat.clone()]), mat }
    }

    pub fn n(&self) -> usize {
        self.mat.len()
    }

    pub fn matrix(&self) -> &IMat {
        &self.mat
    }

    pub fn power(&self, k: usize) -> IMat {
        let mut cache = self.powers.lock().unwrap();
        while cache.len() <= k {
            let next = mat_mul(cache.last().unwrap(), &self.mat);
            cache.push(next);
        }
        cache[k].clone()
    }

    pub fn det(&self) -> BigInt {
        crate::poly::bareiss_det_int(self.mat.clone())
    }

    pub fn char_poly(&self) -> IPoly {
        let n = self.n();
        let x = IPoly::new(vec![BigInt::zero(), BigInt::one()]);
        let m: Vec<Vec<IPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = IPoly::constant(-self.mat[i][j].clone());
                        if i == j {
                            x.add(&c)
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        bareiss_det_poly(m)
    }

    /// Recover the recurrence whose companion this matrix is, if it has
    /// that shape.
    pub fn companion_recurrence(&self) -> Option<LinearRecurrence> {
        let n = self.n();
        if n < 2 {
            return None;
        }
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.mat[i][0].to_i64()?);
            for j in 1..n {
                let want_one = j == i + 1;
                if want_one && !self.mat[i][j].is_one() {
                    return None;
                }
                if !want_one && !self.mat[i][j].is_zero() {
                    return None;
                }
            }
        }
        let mut init = vec![0i64; n];
        init[0] = 1;
        make_recurrence(&c, &init).ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MPoint {
    coords: Vec<Rat>,
    place: Place,
}

impl MPoint {
    pub fn new(coords: Vec<Rat>, place: Place) -> Result<Self, TransformError> {
        if coords.iter().any(|z| z.is_zero()) {
            return Err(TransformError::ZeroCoordinate);
        }
        Ok(MPoint { coords, place })
    }

    pub fn from_i64(coords: &[(i64, i64)], place: Place) -> Result<Self, TransformError> {
        let cs = coords
            .iter()
            .map(|&(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
            .collect();
        MPoint::new(cs, place)
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn place(&self) -> Place {
        self.place
    }
}

/// Cost in bits of one power of `z`: zero for units, otherwise
/// exponent times the bit size of the fraction.
fn coord_weight(z: &Rat) -> u64 {
    let n = z.numer().magnitude().bits().saturating_sub(1);
    let d = z.denom().magnitude().bits().saturating_sub(1);
    n + d
}

pub fn apply(om: &OmegaTransform, z: &MPoint, k: usize) -> Result<MPoint, TransformError> {
    apply_capped(om, z, k, DEFAULT_RESULT_BITS)
}

pub fn apply_capped(
    om: &OmegaTransform,
    z: &MPoint,
    k: usize,
    cap_bits: u64,
) -> Result<MPoint, TransformError> {
    let n = om.n();
    if z.coords.len() != n {
        return Err(TransformError::DimensionMismatch(z.coords.len(), n));
    }
    let pk = om.power(k);
    let weights: Vec<u64> = z.coords.iter().map(coord_weight).collect();
    for row in &pk {
        let mut bits = 0u64;
        for (e, &w) in row.iter().zip(&weights) {
            if w == 0 {
                continue;
            }
            let e64 = e.to_u64().ok_or(TransformError::ExponentTooLarge(cap_bits))?;
            bits = bits.saturating_add(e64.saturating_mul(w));
        }
        if bits > cap_bits {
            return Err(TransformError::ExponentTooLarge(cap_bits));
        }
    }
    let coords = pk
        .iter()
        .map(|row| {
            let mut acc = rat_one();
            for (e, zj) in row.iter().zip(&z.coords) {
                if zj.is_one() {
                    continue;
                }
                if *zj == -rat_one() {
                    if e.bit(0) {
                        acc = -acc;
                    }
                    continue;
                }
                let e32 = e.to_u32().expect("guarded by bit cap");
                acc *= Rat::new(zj.numer().pow(e32), zj.denom().pow(e32));
            }
            acc
        })
        .collect();
    Ok(MPoint { coords, place: z.place })
}

/// The exponent vector (R_{k+n-1}, ..., R_k) of the monomial carried to
/// index k by the transformation.
pub fn monomial_exponents(rec: &LinearRecurrence, k: usize) -> Vec<BigInt> {
    let n = rec.order();
    let mut v = rec.terms(k + n);
    v.drain(..k);
    v.reverse();
    v
}

/// No zero eigenvalue and no root-of-unity eigenvalue. Any root of unity
/// among the eigenvalues would contribute a cyclotomic factor of degree
/// phi(m) <= n to the characteristic polynomial, so scanning m with
/// phi(m) <= n (hence m <= 2n^2) is exhaustive.
pub fn check_i(om: &OmegaTransform) -> Clause {
    let d = om.det();
    if d.is_zero() {
        return Clause::new("I", Verdict::Fail, "matrix is singular");
    }
    let chi = om.char_poly();
    let n = om.n() as u64;
    let m_max = 2 * n * n + 1;
    for m in 1..=m_max {
        if euler_phi(m) > n {
            continue;
        }
        let g = chi.gcd(&cyclotomic(m));
        if g.deg().unwrap_or(0) > 0 {
            return Clause::new(
                "I",
                Verdict::Fail,
                format!("eigenvalue is a primitive {m}-th root of unity"),
            );
        }
    }
    Clause::new(
        "I",
        Verdict::Pass,
        format!("det = {d}; no root-of-unity eigenvalue (cyclotomic scan m <= {m_max})"),
    )
}

fn dyadic_pow(b: &Dyadic, k: u64, prec: u32, mode: Round) -> Dyadic {
    let mut acc = Dyadic::one();
    let mut base = b.round(prec, mode).0;
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul_exact(&base).round(prec, mode).0;
        }
        base = base.mul_exact(&base).round(prec, mode).0;
        k >>= 1;
    }
    acc
}

/// Entry growth O(rho^k). Certified when the matrix is the companion of
/// a recurrence whose root ratios exclude dominance ties (then the
/// Perron root is simple and strictly dominant, so entries ~ rho^k);
/// otherwise an empirical bound on max-entry/rho^k over k <= k_max.
pub fn check_ii(om: &OmegaTransform, k_max: usize) -> Clause {
    if let Some(rec) = om.companion_recurrence() {
        let rep = check_condition(&rec, &Place::Inf);
        if rep.overall == Verdict::Pass {
            return Clause::new(
                "II",
                Verdict::Pass,
                format!(
                    "certified: companion of recurrence c={:?} with simple strictly dominant root",
                    rec.coeffs()
                ),
            );
        }
    }
    let chi = om.char_poly();
    let (rlo, rhi) = match crate::poly::roots::spectral_radius(&chi, 192) {
        Ok(b) => b,
        Err(e) => return Clause::new("II", Verdict::Unknown, format!("root isolation failed: {e}")),
    };
    if rlo.signum() <= 0 {
        return Clause::new(
            "II",
            Verdict::Unknown,
            "spectral radius not separated from zero",
        );
    }
    let k_max = k_max.max(8);
    let lo_k = k_max / 2;
    // exact entries over certified rho^k brackets
    let ratio = |k: usize| -> (Dyadic, Dyadic) {
        let m = om.power(k).into_iter().flatten().max().unwrap();
        let m = Dyadic::from_bigint(m);
        let down = dyadic_pow(&rhi, k as u64, 96, Round::Ceil);
        let up = dyadic_pow(&rlo, k as u64, 96, Round::Floor);
        let qlb = m.div_round(&down, 96, Round::Floor).0;
        let qub = m.div_round(&up, 96, Round::Ceil).0;
        (qlb, qub)
    };
    let (first_lb, first_ub) = ratio(lo_k);
    let (last_lb, _) = ratio(k_max);
    let growth = first_ub.mul_exact(&Dyadic::from_rat(&Rat::new(BigInt::from(11), BigInt::from(10)), 96, Round::Ceil).0);
    if last_lb.cmp_value(&growth) == std::cmp::Ordering::Greater {
        return Clause::new(
            "II",
            Verdict::Fail,
            format!("max-entry/rho^k grows: ratio at k={k_max} exceeds 1.1x ratio at k={lo_k}"),
        );
    }
    let mut min_lb = first_lb;
    let mut max_ub = first_ub;
    for k in lo_k + 1..=k_max {
        let (lb, ub) = ratio(k);
        min_lb = Dyadic::min_val(&min_lb, &lb);
        max_ub = Dyadic::max_val(&max_ub, &ub);
    }
    if min_lb.signum() > 0 {
        let spread = max_ub.div_round(&min_lb, 96, Round::Ceil).0;
        let bound = Dyadic::from_rat(&Rat::new(BigInt::from(3), BigInt::from(2)), 96, Round::Floor).0;
        if spread.cmp_value(&bound) != std::cmp::Ordering::Greater {
            return Clause::new(
                "II",
                Verdict::Pass,
                format!(
                    "empirical: max-entry/rho^k spread {} over k in [{lo_k},{k_max}]",
                    spread.to_decimal(3)
                ),
            );
        }
    }
    Clause::new(
        "II",
        Verdict::Unknown,
        format!("max-entry/rho^k neither clearly bounded nor clearly growing up to k={k_max}"),
    )
}

/// One coordinate's log at the place, as an exact-endpoint interval.
fn log_weight(z: &Rat, place: &Place, prec: u32) -> (Dyadic, Dyadic) {
    match place {
        Place::Inf => {
            let a = z.abs();
            if a.is_one() {
                return (Dyadic::zero(), Dyadic::zero());
            }
            let (v, e) = Dyadic::ln_rat(&a, prec);
            (v.sub_exact(&e), v.add_exact(&e))
        }
        Place::P(p) => {
            let v = padic_val_rat(z, *p);
            if v == 0 {
                return (Dyadic::zero(), Dyadic::zero());
            }
            let (lp, e) = Dyadic::ln_rat(&Rat::from_integer(BigInt::from(*p)), prec);
            let lo = lp.sub_exact(&e);
            let hi = lp.add_exact(&e);
            let c = Dyadic::from_i64(-v);
            let (a, b) = (c.mul_exact(&lo), c.mul_exact(&hi));
            if v > 0 {
                (b, a)
            } else {
                (a, b)
            }
        }
    }
}

/// Coordinate log-decay along the orbit: log|alpha_i^(k)| <= -c rho^k.
/// Logs are exact exponent vectors against certified log-weights of the
/// base coordinates; the verdict and the largest certified c come from
/// the window [k_max-9, k_max].
pub fn check_iii(om: &OmegaTransform, z: &MPoint, k_max: usize, prec: u32) -> (Clause, Option<Dyadic>) {
    let n = om.n();
    if z.coords.len() != n {
        return (
            Clause::new("III", Verdict::Unknown, "point dimension mismatch"),
            None,
        );
    }
    let chi = om.char_poly();
    let (rlo, rhi) = match crate::poly::roots::spectral_radius(&chi, prec) {
        Ok(b) => b,
        Err(e) => {
            return (Clause::new("III", Verdict::Unknown, format!("root isolation failed: {e}")), None)
        }
    };
    if rlo.signum() <= 0 {
        return (
            Clause::new("III", Verdict::Unknown, "spectral radius not separated from zero"),
            None,
        );
    }
    let k_hi = k_max.max(10);
    let k_lo = k_hi - 9;
    for attempt in 0..2 {
        let wprec = prec << attempt;
        let weights: Vec<(Dyadic, Dyadic)> =
            z.coords.iter().map(|c| log_weight(c, &z.place, wprec)).collect();
        let mut c_min: Option<Dyadic> = None;
        let mut straddle = false;
        for k in k_lo..=k_hi {
            let pk = om.power(k);
            let rho_pow_ub = dyadic_pow(&rhi, k as u64, wprec, Round::Ceil);
            for (i, row) in pk.iter().enumerate() {
                let mut lo = Dyadic::zero();
                let mut hi = Dyadic::zero();
                for (e, (wlo, whi)) in row.iter().zip(&weights) {
                    let ed = Dyadic::from_bigint(e.clone());
                    lo = lo.add_exact(&ed.mul_exact(wlo));
                    hi = hi.add_exact(&ed.mul_exact(whi));
                }
                if hi.signum() < 0 {
                    // certified negative; fold -hi/rho^k into the c estimate
                    let c = hi.neg().div_round(&rho_pow_ub, wprec, Round::Floor).0;
                    c_min = Some(match c_min {
                        None => c,
                        Some(prev) => Dyadic::min_val(&prev, &c),
                    });
                } else if lo.signum() > 0 || (lo.is_zero() && hi.is_zero()) {
                    return (
                        Clause::new(
                            "III",
                            Verdict::Fail,
                            format!("log|alpha_{}^({k})| >= 0", i + 1),
                        ),
                        None,
                    );
                } else {
                    straddle = true;
                }
            }
        }
        if !straddle {
            let c = c_min.expect("window is nonempty");
            let clause = Clause::new(
                "III",
                Verdict::Pass,
                format!(
                    "log|alpha_i^(k)| < 0 for all i, k in [{k_lo},{k_hi}]; largest certified c = {}",
                    c.to_decimal(12)
                ),
            );
            return (clause, Some(c));
        }
    }
    (
        Clause::new(
            "III",
            Verdict::Unknown,
            "log enclosure straddles zero after precision escalation",
        ),
        None,
    )
}

#[derive(Clone, Debug)]
pub struct IvBounds {
    pub height: u64,
    pub progression_max: u64,
    pub prec: u32,
}

impl Default for IvBounds {
    fn default() -> Self {
        IvBounds { height: 20, progression_max: 12, prec: 192 }
    }
}

enum BaseReduction {
    AllUnits,
    Base { g: Vec<BigInt> },
    Unsupported(String),
}

/// Strip a positive rational > 1 to its primitive root: the unique
/// non-power q with w = q^e, e maximal.
fn primitive_base(w: &Rat) -> (Rat, u64) {
    let num = w.numer().magnitude().clone();
    let den = w.denom().magnitude().clone();
    let emax = num.bits().max(2) - 1;
    for e in (2..=emax).rev() {
        let rn = num.nth_root(e as u32);
        let rd = den.nth_root(e as u32);
        if rn.pow(e as u32) == num && rd.pow(e as u32) == den {
            return (Rat::new(rn.into(), rd.into()), e);
        }
    }
    (w.clone(), 1)
}

/// Exponent t >= 1 with q^t = w, for q, w > 1; None if w is not a power
/// of q. Reduced fractions make the numerator and denominator split.
fn power_of_base(q: &Rat, w: &Rat) -> Option<u64> {
    let qn = q.numer().magnitude();
    let qd = q.denom().magnitude();
    let wn = w.numer().magnitude();
    let wd = w.denom().magnitude();
    let mut acc_n = qn.clone();
    let mut acc_d = qd.clone();
    let mut t = 1u64;
    while &acc_n < wn {
        acc_n *= qn;
        acc_d *= qd;
        t += 1;
    }
    (&acc_n == wn && &acc_d == wd).then_some(t)
}

fn common_base(coords: &[Rat]) -> BaseReduction {
    if coords.iter().any(|z| z.is_negative()) {
        return BaseReduction::Unsupported("negative coordinate".into());
    }
    let first = match coords.iter().find(|z| !z.is_one()) {
        None => return BaseReduction::AllUnits,
        Some(z) => z,
    };
    let big = if *first > rat_one() { first.clone() } else { first.recip() };
    let (q, _) = primitive_base(&big);
    let mut g = Vec::with_capacity(coords.len());
    for z in coords {
        if z.is_one() {
            g.push(BigInt::zero());
            continue;
        }
        let (w, sign) = if *z > rat_one() { (z.clone(), 1) } else { (z.recip(), -1) };
        match power_of_base(&q, &w) {
            Some(t) => g.push(BigInt::from(sign * t as i64)),
            None => {
                return BaseReduction::Unsupported(format!(
                    "coordinate {z} is not a rational power of the common base {q}"
                ))
            }
        }
    }
    BaseReduction::Base { g }
}

fn mat_vec(m: &IMat, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).fold(BigInt::zero(), |s, t| s + t))
        .collect()
}

/// Primitive basis of the integer kernel {x : rows . x = 0}.
fn int_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|e| Rat::from_integer(e.clone())).collect())
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].recip();
        for j in col..n {
            let v = &m[rank][j] * &inv;
            m[rank][j] = v;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..n {
                    let v = &m[r][j] - &f * &m[rank][j];
                    m[r][j] = v;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![Rat::from_integer(BigInt::zero()); n];
        x[free] = Rat::from_integer(BigInt::one());
        for col in 0..n {
            if let Some(pr) = pivot_of_col[col] {
                x[col] = -m[pr][free].clone();
            }
        }
        let mut denom = BigInt::one();
        for v in &x {
            denom = num_integer::lcm(denom, v.denom().clone());
        }
        let mut iv: Vec<BigInt> = x.iter().map(|v| v.numer() * (&denom / v.denom())).collect();
        let mut content = BigInt::zero();
        for v in &iv {
            content = num_integer::gcd(content, v.clone());
        }
        if !content.is_zero() && !content.is_one() {
            for v in iv.iter_mut() {
                *v = &*v / &content;
            }
        }
        basis.push(iv);
    }
    basis
}

fn inf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|e| e.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Exact search for a multiplicative relation along an arithmetic
/// progression of orbit indices. Once every coordinate is a power of one
/// base q > 1, a relation at index k means the integer vector i is
/// orthogonal to Omega^k g; the span of those vectors over any
/// progression stabilizes within n+1 steps, so a kernel computation
/// decides relations of every height at once.
fn masser_search(om: &OmegaTransform, z: &MPoint, bounds: &IvBounds) -> Clause {
    let n = om.n();
    let g = match common_base(&z.coords) {
        BaseReduction::Unsupported(why) => {
            return Clause::new(
                "IV",
                Verdict::Unknown,
                format!("masser-search: unsupported point ({why})"),
            )
        }
        BaseReduction::AllUnits => {
            let mut w = vec![0i64; n];
            w[n - 1] = 1;
            return Clause::new(
                "IV",
                Verdict::Fail,
                format!("masser-search: relation i={w:?}, every orbit coordinate equals 1"),
            );
        }
        BaseReduction::Base { g } => g,
    };
    for b in 1..=bounds.progression_max {
        for a in 1..=b {
            let rows: Vec<Vec<BigInt>> =
                (0..=n).map(|l| mat_vec(&om.power((a + l as u64 * b) as usize), &g)).collect();
            let kernel = int_kernel(&rows, n);
            if let Some(w) = kernel.into_iter().min_by_key(|v| inf_norm(v)) {
                let tall = if inf_norm(&w) > BigInt::from(bounds.height) {
                    " (exceeds height bound)"
                } else {
                    ""
                };
                return Clause::new(
                    "IV",
                    Verdict::Fail,
                    format!("masser-search: relation i={w:?} along k = {a} + l*{b}{tall}"),
                );
            }
        }
    }
    Clause::new(
        "IV",
        Verdict::Pass,
        format!(
            "masser-search: no relation along any progression with modulus <= {} (exact kernels, any height)",
            bounds.progression_max
        ),
    )
}

fn laplace_det(m: &[Vec<CErr>], ctx: &CCtx) -> CErr {
    let n = m.len();
    if n == 0 {
        return CErr::one(ctx);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = CErr::zero(ctx);
    for j in 0..n {
        if m[0][j].is_exact_zero() {
            continue;
        }
        let minor: Vec<Vec<CErr>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
            .collect();
        let term = m[0][j].mul(&laplace_det(&minor, ctx), ctx);
        acc = if j % 2 == 0 { acc.add(&term, ctx) } else { acc.sub(&term, ctx) };
    }
    acc
}

/// The cofactor criterion at a finite place: with irreducible
/// characteristic polynomial and a certified strictly dominant root
/// rho > 1, the first-column cofactors of Omega - rho*E are nonzero, and
/// sum_i |A_i1| log|alpha_i|_p < 0 certifies the full condition set.
fn cofactor_test(om: &OmegaTransform, z: &MPoint, p: u64, prec: u32) -> Clause {
    let chi = om.char_poly();
    match irreducible_over_q(&chi) {
        Irreducibility::Irreducible(_) => {}
        Irreducibility::Reducible(f) => {
            return Clause::new(
                "IV",
                Verdict::Unknown,
                format!(
                    "cofactor-test: characteristic polynomial has factor {}; hypotheses not met",
                    f.render("X")
                ),
            )
        }
        Irreducibility::Unknown(why) => {
            return Clause::new(
                "IV",
                Verdict::Unknown,
                format!("cofactor-test: irreducibility undecided ({why})"),
            )
        }
    }
    let n = om.n();
    for attempt in 0..2 {
        let wprec = prec << attempt;
        let ctx = CCtx::new(wprec);
        let Ok(roots) = certified_roots(&chi, wprec) else { continue };
        let top = roots
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.abs_ub().cmp_value(&b.abs_ub()))
            .map(|(i, _)| i)
            .expect("chi has roots");
        let rho = &roots[top];
        let dominated = roots
            .iter()
            .enumerate()
            .all(|(i, r)| i == top || r.abs_ub().cmp_value(&rho.abs_lb()) == std::cmp::Ordering::Less);
        let above_one = rho.abs_lb().cmp_value(&Dyadic::one()) == std::cmp::Ordering::Greater;
        if !dominated || !above_one {
            continue;
        }
        // the strictly dominant root of a nonnegative matrix is the real
        // Perron root; fold any imaginary slop of its disk into the radius
        let rho_ball =
            CErr::real_ball(rho.re.clone(), rho.err.up_add(&rho.im.abs()));
        let b: Vec<Vec<CErr>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = CErr::from_rat(&Rat::from_integer(om.mat[i][j].clone()), &ctx);
                        if i == j {
                            e.sub(&rho_ball, &ctx)
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        let mut cof = Vec::with_capacity(n);
        for i in 0..n {
            let minor: Vec<Vec<CErr>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (1..n).map(|c| b[r][c].clone()).collect())
                .collect();
            let d = laplace_det(&minor, &ctx);
            cof.push(if i % 2 == 0 { d } else { d.neg(&ctx) });
        }
        if cof.iter().any(|a| a.contains_zero()) {
            continue;
        }
        let (lp, le) = Dyadic::ln_rat(&Rat::from_integer(BigInt::from(p)), wprec);
        let (lp_lo, lp_hi) = (lp.sub_exact(&le), lp.add_exact(&le));
        let mut sum_lo = Dyadic::zero();
        let mut sum_hi = Dyadic::zero();
        for (a, zi) in cof.iter().zip(&z.coords) {
            let v = padic_val_rat(zi, p);
            if v == 0 {
                continue;
            }
            let c = Dyadic::from_i64(-v);
            let (flo, fhi) = if v > 0 {
                (c.mul_exact(&lp_hi), c.mul_exact(&lp_lo))
            } else {
                (c.mul_exact(&lp_lo), c.mul_exact(&lp_hi))
            };
            let (alo, ahi) = (a.abs_lb(), a.abs_ub());
            let corners =
                [alo.mul_exact(&flo), alo.mul_exact(&fhi), ahi.mul_exact(&flo), ahi.mul_exact(&fhi)];
            let mut tlo = corners[0].clone();
            let mut thi = corners[0].clone();
            for t in &corners[1..] {
                tlo = Dyadic::min_val(&tlo, t);
                thi = Dyadic::max_val(&thi, t);
            }
            sum_lo = sum_lo.add_exact(&tlo);
            sum_hi = sum_hi.add_exact(&thi);
        }
        if sum_hi.signum() < 0 {
            return Clause::new(
                "IV",
                Verdict::Pass,
                format!(
                    "cofactor-test: cofactors nonzero, sum(|A_i1| log|alpha_i|_p) <= {} < 0; certifies (I), (II), (III)_p, (IV)_p",
                    sum_hi.to_decimal(6)
                ),
            );
        }
        if sum_lo.signum() > 0 {
            return Clause::new(
                "IV",
                Verdict::Unknown,
                format!(
                    "cofactor-test: criterion sum >= {} > 0; sufficient condition does not apply",
                    sum_lo.to_decimal(6)
                ),
            );
        }
    }
    Clause::new(
        "IV",
        Verdict::Unknown,
        "cofactor-test: enclosures straddle zero after precision escalation",
    )
}

/// Orbit-relation check, dispatched on the place of the point: exact
/// exponent-lattice search at the real place, cofactor criterion at a
/// finite one.
pub fn check_iv(om: &OmegaTransform, z: &MPoint, bounds: &IvBounds) -> Clause {
    if z.coords.len() != om.n() {
        return Clause::new("IV", Verdict::Unknown, "point dimension mismatch");
    }
    match z.place {
        Place::Inf => masser_search(om, z, bounds),
        Place::P(p) => cofactor_test(om, z, p, bounds.prec),
    }
}

pub fn iv_method(place: &Place) -> &'static str {
    match place {
        Place::Inf => "masser-search",
        Place::P(_) => "cofactor-test",
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct OmegaConditionReport {
    pub place: String,
    pub clauses: Vec<Clause>,
    pub c_estimate: Option<String>,
    pub iv_method: String,
    pub overall: Verdict,
}

impl OmegaConditionReport {
    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }
}

pub fn check_omega_conditions(
    om: &OmegaTransform,
    z: &MPoint,
    k_max: usize,
    bounds: &IvBounds,
) -> OmegaConditionReport {
    let c1 = check_i(om);
    let c2 = check_ii(om, k_max);
    let (c3, c) = check_iii(om, z, k_max, bounds.prec);
    let c4 = check_iv(om, z, bounds);
    let clauses = vec![c1, c2, c3, c4];
    OmegaConditionReport {
        place: z.place.to_string(),
        overall: overall(clauses.iter().map(|c| c.verdict)),
        c_estimate: c.map(|d| d.to_decimal(12)),
        iv_method: iv_method(&z.place).to_string(),
        clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> LinearRecurrence {
        make_recurrence(&[1, 1], &[1, 2]).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn bmat(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&e| BigInt::from(e)).collect()).collect()
    }

    #[test]
    fn companion_shapes() {
        let om = OmegaTransform::companion(&fib());
        assert_eq!(om.matrix(), &bmat(&[&[1, 1], &[1, 0]]));
        let rec = make_recurrence(&[2, 0, 1], &[1, 1, 1]).unwrap();
        let om3 = OmegaTransform::companion(&rec);
        assert_eq!(om3.matrix(), &bmat(&[&[2, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(om.power(3), bmat(&[&[3, 2], &[2, 1]]));
        assert_eq!(om.char_poly(), IPoly::from_i64(&[-1, -1, 1]));
        assert_eq!(om.det(), BigInt::from(-1));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            OmegaTransform::new(vec![vec![1, 2], vec![3]]).unwrap_err(),
            TransformError::NotSquare
        );
        assert_eq!(
            OmegaTransform::new(vec![vec![1, -2], vec![3, 1]]).unwrap_err(),
            TransformError::NegativeEntry
        );
        assert_eq!(
            MPoint::new(vec![Rat::from_integer(BigInt::zero())], Place::Inf).unwrap_err(),
            TransformError::ZeroCoordinate
        );
        let om = OmegaTransform::companion(&fib());
        let z = MPoint::new(vec![rat(1, 2)], Place::Inf).unwrap();
        assert_eq!(apply(&om, &z, 1).unwrap_err(), TransformError::DimensionMismatch(1, 2));
    }

    #[test]
    fn apply_orbit_examples() {
        let om = OmegaTransform::companion(&fib());
        let a = rat(3, 5);
        let z = MPoint::new(vec![rat_one(), a.clone()], Place::Inf).unwrap();
        assert_eq!(apply(&om, &z, 0).unwrap(), z);
        let k1 = apply(&om, &z, 1).unwrap();
        assert_eq!(k1.coords(), &[a.clone(), rat_one()]);
        let k3 = apply(&om, &z, 3).unwrap();
        assert_eq!(k3.coords(), &[&a * &a, a.clone()]);
    }

    #[test]
    fn apply_handles_negative_one() {
        let om = OmegaTransform::companion(&fib());
        let z = MPoint::new(vec![-rat_one(), rat(1, 3)], Place::Inf).unwrap();
        // exponents (F_{k+1}, F_k) = (3, 2) at k = 3
        let w = apply(&om, &z, 3).unwrap();
        assert_eq!(w.coords()[0], -rat(1, 9));
        assert_eq!(w.coords()[1], rat(1, 3));
    }

    #[test]
    fn semigroup_law() {
        let om = OmegaTransform::companion(&make_recurrence(&[2, 0, 3], &[1, 0, 2]).unwrap());
        let z = MPoint::new(vec![rat(2, 3), rat(5, 7), rat(1, 2)], Place::Inf).unwrap();
        for (a, b) in [(1usize, 2usize), (2, 3), (4, 1), (3, 3)] {
            let lhs = apply(&om, &z, a + b).unwrap();
            let rhs = apply(&om, &apply(&om, &z, b).unwrap(), a).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn monomial_exponent_examples() {
        let rec = fib();
        let e0 = monomial_exponents(&rec, 0);
        assert_eq!(e0, vec![BigInt::from(2), BigInt::from(1)]);
        assert_eq!(monomial_exponents(&rec, 3), vec![BigInt::from(8), BigInt::from(5)]);
    }

    #[test]
    fn monomial_exponents_match_matrix_action() {
        for rec in [fib(), make_recurrence(&[2, 0, 3], &[1, 0, 2]).unwrap()] {
            let om = OmegaTransform::companion(&rec);
            let n = rec.order();
            let e0 = monomial_exponents(&rec, 0);
            for k in 0..=60 {
                let pk = om.power(k);
                let acted: Vec<BigInt> = (0..n)
                    .map(|j| (0..n).map(|i| &e0[i] * &pk[i][j]).fold(BigInt::zero(), |s, t| s + t))
                    .collect();
                assert_eq!(acted, monomial_exponents(&rec, k), "k={k}");
            }
        }
    }

    #[test]
    fn exponent_cap_is_enforced() {
        let om = OmegaTransform::companion(&fib());
        let z = MPoint::new(vec![rat(2, 1), rat_one()], Place::Inf).unwrap();
        assert!(apply(&om, &z, 10).is_ok());
        assert_eq!(
            apply_capped(&om, &z, 60, 1000).unwrap_err(),
            TransformError::ExponentTooLarge(1000)
        );
        // units never hit the cap, however large the exponents
        let u = MPoint::new(vec![rat_one(), -rat_one()], Place::Inf).unwrap();
        assert!(apply_capped(&om, &u, 200, 8).is_ok());
    }

    #[test]
    fn condition_i_examples() {
        let om = OmegaTransform::companion(&fib());
        let c = check_i(&om);
        assert_eq!(c.verdict, Verdict::Pass);
        assert!(c.evidence.contains("det = -1"), "{}", c.evidence);

        let swap = OmegaTransform::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(check_i(&swap).verdict, Verdict::Fail);

        let sing = OmegaTransform::new(vec![vec![1, 1], vec![0, 0]]).unwrap();
        let c = check_i(&sing);
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(c.evidence.contains("singular"));
    }

    #[test]
    fn condition_ii_examples() {
        let om = OmegaTransform::companion(&fib());
        let c = check_ii(&om, 60);
        assert_eq!(c.verdict, Verdict::Pass);
        assert!(c.evidence.contains("certified"), "{}", c.evidence);

        let shear = OmegaTransform::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(check_ii(&shear, 60).verdict, Verdict::Fail);

        let dense = OmegaTransform::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        let c = check_ii(&dense, 60);
        assert_eq!(c.verdict, Verdict::Pass);
        assert!(c.evidence.contains("empirical"), "{}", c.evidence);
    }

    #[test]
    fn condition_iii_examples() {
        let om = OmegaTransform::companion(&fib());
        let inside = MPoint::new(vec![rat_one(), rat(1, 2)], Place::Inf).unwrap();
        let (c, cval) = check_iii(&om, &inside, 60, 192);
        assert_eq!(c.verdict, Verdict::Pass);
        let cval = cval.unwrap();
        // binding row gives c -> log2/(phi*sqrt5) = 0.19156...
        assert_eq!(cval.cmp_value(&Dyadic::from_rat(&rat(19, 100), 96, Round::Floor).0), std::cmp::Ordering::Greater);
        assert_eq!(cval.cmp_value(&Dyadic::from_rat(&rat(192, 1000), 96, Round::Floor).0), std::cmp::Ordering::Less);

        let outside = MPoint::new(vec![rat_one(), rat(2, 1)], Place::Inf).unwrap();
        let (c, cval) = check_iii(&om, &outside, 60, 192);
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(cval.is_none());

        let padic = MPoint::new(vec![rat_one(), rat(2, 1)], Place::P(2)).unwrap();
        let (c, cval) = check_iii(&om, &padic, 60, 192);
        assert_eq!(c.verdict, Verdict::Pass);
        assert!(cval.is_some());
    }

    #[test]
    fn condition_iv_masser_examples() {
        let om = OmegaTransform::companion(&fib());
        let b = IvBounds::default();

        let good = MPoint::new(vec![rat_one(), rat(1, 2)], Place::Inf).unwrap();
        let c = check_iv(&om, &good, &b);
        assert_eq!(c.verdict, Verdict::Pass);
        assert!(c.evidence.contains("masser-search"), "{}", c.evidence);

        let units = MPoint::new(vec![rat_one(), rat_one()], Place::Inf).unwrap();
        let c = check_iv(&om, &units, &b);
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(c.evidence.contains("relation"), "{}", c.evidence);

        let indep = MPoint::new(vec![rat(2, 1), rat(3, 1)], Place::Inf).unwrap();
        let c = check_iv(&om, &indep, &b);
        assert_eq!(c.verdict, Verdict::Unknown);
        assert!(c.evidence.contains("unsupported"), "{}", c.evidence);

        let neg = MPoint::new(vec![rat_one(), rat(-2, 1)], Place::Inf).unwrap();
        assert_eq!(check_iv(&om, &neg, &b).verdict, Verdict::Unknown);

        // powers of a shared base reduce and pass
        let powers = MPoint::new(vec![rat(4, 1), rat(8, 1)], Place::Inf).unwrap();
        assert_eq!(check_iv(&om, &powers, &b).verdict, Verdict::Pass);
    }

    #[test]
    fn condition_iv_cofactor_examples() {
        let om = OmegaTransform::companion(&fib());
        let b = IvBounds::default();
        let z = MPoint::new(vec![rat_one(), rat(2, 1)], Place::P(2)).unwrap();
        let c = check_iv(&om, &z, &b);
        assert_eq!(c.verdict, Verdict::Pass);
        assert!(c.evidence.contains("cofactor-test"), "{}", c.evidence);
        // |A_11| log|1|_2 + |A_21| log|2|_2 = -log 2 = -0.693147...
        assert!(c.evidence.contains("-6.93147e-1"), "{}", c.evidence);

        let om2 = OmegaTransform::companion(&make_recurrence(&[2, 1], &[1, 1]).unwrap());
        let c = check_iv(&om2, &z, &b);
        assert_eq!(c.verdict, Verdict::Pass);

        // reducible characteristic polynomial: hypotheses not met
        let geo = OmegaTransform::companion(&make_recurrence(&[1, 2], &[1, 1]).unwrap());
        let c = check_iv(&geo, &z, &b);
        assert_eq!(c.verdict, Verdict::Unknown);
        assert!(c.evidence.contains("factor"), "{}", c.evidence);
    }

    #[test]
    fn cofactor_route_agrees_with_direct_checks() {
        let b = IvBounds::default();
        for rec in [fib(), make_recurrence(&[2, 1], &[1, 1]).unwrap(),
                    make_recurrence(&[1, 1, 1], &[1, 1, 2]).unwrap()] {
            let om = OmegaTransform::companion(&rec);
            let n = om.n();
            let mut coords = vec![rat_one(); n];
            coords[n - 1] = rat(2, 1);
            let z = MPoint::new(coords, Place::P(2)).unwrap();
            let iv = check_iv(&om, &z, &b);
            assert_eq!(iv.verdict, Verdict::Pass, "{}", iv.evidence);
            assert_eq!(check_i(&om).verdict, Verdict::Pass);
            assert_eq!(check_ii(&om, 60).verdict, Verdict::Pass);
            assert_eq!(check_iii(&om, &z, 60, 192).0.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn kernel_helper_is_primitive_and_orthogonal() {
        let rows = bmat(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = int_kernel(&rows, 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for r in &rows {
                let dot: BigInt = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
            let mut content = BigInt::zero();
            for e in v {
                content = num_integer::gcd(content, e.clone());
            }
            assert!(content.is_one());
        }
    }

    #[test]
    fn omega_report_shape() {
        let om = OmegaTransform::companion(&fib());
        let z = MPoint::new(vec![rat_one(), rat(2, 1)], Place::P(2)).unwrap();
        let rep = check_omega_conditions(&om, &z, 60, &IvBounds::default());
        assert_eq!(rep.overall, Verdict::Pass);
        assert_eq!(rep.iv_method, "cofactor-test");
        assert!(rep.c_estimate.is_some());
        let ids: Vec<&str> = rep.clauses.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, vec!["I", "II", "III", "IV"]);
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"overall\":\"PASS\""));
    }
}
