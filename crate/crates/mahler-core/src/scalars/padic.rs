//! Finite-precision p-adic numbers: exact valuation plus a unit known
//! modulo p^prec. Cancellation in sums lowers the known precision; a sum
//! that vanishes to the full known precision becomes an O(p^abs) zero, so
//! "residual has valuation >= N" is a checkable verdict, not a guess.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rat, Scalar, ScalarError, TailBound};

pub const DEFAULT_PREC_DIGITS: u32 = 64;

/// Sentinel absolute precision for an exact zero.
pub const EXACT_ZERO_ABS: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
pub struct PCtx {
    pub p: u64,
    pub prec: u32,
}

impl PCtx {
    pub fn new(p: u64, prec: u32) -> Result<Self, ScalarError> {
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(PCtx { p, prec })
    }

    fn modulus(&self, digits: i64) -> BigUint {
        BigUint::from(self.p).pow(digits.max(0) as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PAdic {
    /// value = O(p^abs): all that is known is v_p >= abs.
    Zero { abs: i64 },
    /// value = p^v * (unit + O(p^prec)), unit in [1, p^prec) coprime to p.
    NonZero { v: i64, unit: BigUint, prec: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(i64),
    AtLeast(i64),
}

impl Valuation {
    pub fn lower_bound(&self) -> i64 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => *v,
        }
    }
}

impl PAdic {
    pub fn exact_zero() -> Self {
        PAdic::Zero { abs: EXACT_ZERO_ABS }
    }

    pub fn valuation(&self) -> Valuation {
        match self {
            PAdic::Zero { abs } => Valuation::AtLeast(*abs),
            PAdic::NonZero { v, .. } => Valuation::Exact(*v),
        }
    }

    /// Known absolute precision: the value is determined mod p^(this).
    pub fn abs_prec(&self) -> i64 {
        match self {
            PAdic::Zero { abs } => *abs,
            PAdic::NonZero { v, prec, .. } => v + prec,
        }
    }

    fn truncate_abs(&self, abs_cap: i64, ctx: &PCtx) -> Self {
        match self {
            PAdic::Zero { abs } => PAdic::Zero { abs: (*abs).min(abs_cap) },
            PAdic::NonZero { v, unit, prec } => {
                if abs_cap <= *v {
                    PAdic::Zero { abs: abs_cap }
                } else {
                    let new_prec = (*prec).min(abs_cap - v).min(ctx.prec as i64);
                    PAdic::NonZero {
                        v: *v,
                        unit: unit.mod_floor(&ctx.modulus(new_prec)),
                        prec: new_prec,
                    }
                }
            }
        }
    }
}

impl Scalar for PAdic {
    type Ctx = PCtx;

    fn from_rat(q: &Rat, ctx: &PCtx) -> Self {
        if q.is_zero() {
            return PAdic::exact_zero();
        }
        let p = ctx.p;
        let vn = padic_val_int(q.numer(), p);
        let vd = padic_val_int(q.denom(), p);
        let v = vn - vd;
        let prec = ctx.prec as i64;
        let m = ctx.modulus(prec);
        let pe_n = BigInt::from(p).pow(vn as u32);
        let pe_d = BigInt::from(p).pow(vd as u32);
        let n_unit = q.numer() / pe_n;
        let d_unit = q.denom() / pe_d;
        let n_red = n_unit.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap();
        let d_red = d_unit.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap();
        let unit = (n_red * inv_mod(&d_red, &m)).mod_floor(&m);
        PAdic::NonZero { v, unit, prec }
    }

    fn zero(_: &PCtx) -> Self {
        PAdic::exact_zero()
    }

    fn one(ctx: &PCtx) -> Self {
        PAdic::NonZero { v: 0, unit: BigUint::one(), prec: ctx.prec as i64 }
    }

    fn add(&self, other: &Self, ctx: &PCtx) -> Self {
        match (self, other) {
            (PAdic::Zero { abs: a }, PAdic::Zero { abs: b }) => PAdic::Zero { abs: *a.min(b) },
            (PAdic::Zero { abs }, x) | (x, PAdic::Zero { abs }) => x.truncate_abs(*abs, ctx),
            (
                PAdic::NonZero { v: v1, unit: u1, prec: p1 },
                PAdic::NonZero { v: v2, unit: u2, prec: p2 },
            ) => {
                let abs_out = (v1 + p1).min(v2 + p2);
                let vmin = *v1.min(v2);
                let window = abs_out - vmin;
                if window <= 0 {
                    return PAdic::Zero { abs: abs_out };
                }
                let m = ctx.modulus(window);
                let t1 = (u1 * BigUint::from(ctx.p).pow((v1 - vmin) as u32)).mod_floor(&m);
                let t2 = (u2 * BigUint::from(ctx.p).pow((v2 - vmin) as u32)).mod_floor(&m);
                let s = (t1 + t2).mod_floor(&m);
                if s.is_zero() {
                    return PAdic::Zero { abs: abs_out };
                }
                let w = padic_val_uint(&s, ctx.p);
                let unit = &s / BigUint::from(ctx.p).pow(w as u32);
                PAdic::NonZero { v: vmin + w, unit, prec: window - w }
            }
        }
    }

    fn sub(&self, other: &Self, ctx: &PCtx) -> Self {
        self.add(&other.neg(ctx), ctx)
    }

    fn mul(&self, other: &Self, ctx: &PCtx) -> Self {
        match (self, other) {
            (PAdic::Zero { abs: a }, PAdic::Zero { abs: b }) => {
                if *a == EXACT_ZERO_ABS || *b == EXACT_ZERO_ABS {
                    PAdic::exact_zero()
                } else {
                    PAdic::Zero { abs: (a + b).min(EXACT_ZERO_ABS) }
                }
            }
            (PAdic::Zero { abs }, PAdic::NonZero { v, .. })
            | (PAdic::NonZero { v, .. }, PAdic::Zero { abs }) => {
                if *abs == EXACT_ZERO_ABS {
                    PAdic::exact_zero()
                } else {
                    PAdic::Zero { abs: (abs + v).min(EXACT_ZERO_ABS) }
                }
            }
            (
                PAdic::NonZero { v: v1, unit: u1, prec: p1 },
                PAdic::NonZero { v: v2, unit: u2, prec: p2 },
            ) => {
                let prec = (*p1.min(p2)).min(ctx.prec as i64);
                let m = ctx.modulus(prec);
                PAdic::NonZero { v: v1 + v2, unit: (u1 * u2).mod_floor(&m), prec }
            }
        }
    }

    fn neg(&self, ctx: &PCtx) -> Self {
        match self {
            PAdic::Zero { .. } => self.clone(),
            PAdic::NonZero { v, unit, prec } => {
                let m = ctx.modulus(*prec);
                PAdic::NonZero { v: *v, unit: (&m - unit).mod_floor(&m), prec: *prec }
            }
        }
    }

    fn recip(&self, ctx: &PCtx) -> Result<Self, ScalarError> {
        match self {
            PAdic::Zero { abs } => Err(if *abs == EXACT_ZERO_ABS {
                ScalarError::DivisionByZero
            } else {
                ScalarError::InsufficientPrecision
            }),
            PAdic::NonZero { v, unit, prec } => {
                let prec = (*prec).min(ctx.prec as i64);
                let m = ctx.modulus(prec);
                Ok(PAdic::NonZero {
                    v: -v,
                    unit: inv_mod(&unit.mod_floor(&m), &m),
                    prec,
                })
            }
        }
    }

    fn pow(&self, e: &BigUint, ctx: &PCtx) -> Self {
        if e.is_zero() {
            return Self::one(ctx);
        }
        match self {
            PAdic::Zero { abs } => {
                if *abs == EXACT_ZERO_ABS {
                    PAdic::exact_zero()
                } else {
                    let ei = e.to_i64().unwrap_or(i64::MAX / 8);
                    PAdic::Zero { abs: abs.saturating_mul(ei).min(EXACT_ZERO_ABS) }
                }
            }
            PAdic::NonZero { v, unit, prec } => {
                let ei = e
                    .to_i64()
                    .expect("p-adic power exponent exceeds i64");
                let m = ctx.modulus(*prec);
                PAdic::NonZero {
                    v: v.checked_mul(ei).expect("p-adic valuation overflow"),
                    unit: unit.modpow(e, &m),
                    prec: *prec,
                }
            }
        }
    }

    fn absorb_tail(&mut self, t: &TailBound, ctx: &PCtx) {
        match t {
            TailBound::NonArch(vb) => *self = self.truncate_abs(*vb, ctx),
            TailBound::Arch(_) => panic!("archimedean tail absorbed into p-adic"),
        }
    }

    fn mag(&self, _: &PCtx) -> TailBound {
        TailBound::NonArch(self.valuation().lower_bound())
    }

    fn is_exact_zero(&self) -> bool {
        matches!(self, PAdic::Zero { abs } if *abs == EXACT_ZERO_ABS)
    }
}

impl PAdic {
    pub fn div(&self, other: &Self, ctx: &PCtx) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.recip(ctx)?, ctx))
    }

    /// Exact rational reduction oracle: the canonical residue of a
    /// p-integral rational mod p^digits.
    pub fn residue_of_rat(q: &Rat, ctx: &PCtx) -> Option<BigUint> {
        if padic_val_int(q.denom(), ctx.p) != 0 {
            return None;
        }
        let m = ctx.modulus(ctx.prec as i64);
        let n = q.numer().mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap();
        let d = q.denom().mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap();
        Some((n * inv_mod(&d, &m)).mod_floor(&m))
    }

    /// The value's residue mod p^digits when it is p-integral and known
    /// that far.
    pub fn residue(&self, ctx: &PCtx) -> Option<BigUint> {
        match self {
            PAdic::Zero { abs } => {
                if *abs >= ctx.prec as i64 {
                    Some(BigUint::zero())
                } else {
                    None
                }
            }
            PAdic::NonZero { v, unit, prec } => {
                if *v < 0 || v + prec < ctx.prec as i64 {
                    return None;
                }
                let m = ctx.modulus(ctx.prec as i64);
                Some((unit * BigUint::from(ctx.p).pow(*v as u32)).mod_floor(&m))
            }
        }
    }
}

/// v_p of a nonzero big integer.
pub fn padic_val_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = n.abs();
    loop {
        let (q, r) = cur.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

fn padic_val_uint(n: &BigUint, p: u64) -> i64 {
    padic_val_int(&BigInt::from(n.clone()), p)
}

/// v_p of a nonzero rational.
pub fn padic_val_rat(q: &Rat, p: u64) -> i64 {
    assert!(!q.is_zero(), "valuation of zero");
    padic_val_int(q.numer(), p) - padic_val_int(q.denom(), p)
}

/// |q|_p = p^(-v_p(q)) as an exact rational; |0|_p = 0.
pub fn padic_abs(q: &Rat, p: u64) -> Result<Rat, ScalarError> {
    if !is_prime(p) {
        return Err(ScalarError::NotPrime(p));
    }
    if q.is_zero() {
        return Ok(<Rat as Zero>::zero());
    }
    let v = padic_val_rat(q, p);
    let pb = BigInt::from(p);
    Ok(if v >= 0 {
        Rat::new(BigInt::one(), num_traits::pow::pow(pb, v as usize))
    } else {
        Rat::from_integer(num_traits::pow::pow(pb, (-v) as usize))
    })
}

/// Trial-division primality, adequate for desk-scale p.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse of u mod m for gcd(u, m) = 1.
pub fn inv_mod(u: &BigUint, m: &BigUint) -> BigUint {
    let e = BigInt::from(u.clone()).extended_gcd(&BigInt::from(m.clone()));
    assert!(e.gcd.is_one(), "inverse of non-unit");
    e.x.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn ctx2() -> PCtx {
        PCtx::new(2, 16).unwrap()
    }

    #[test]
    fn valuations_and_abs() {
        assert_eq!(padic_val_rat(&r(12, 1), 2), 2);
        assert_eq!(padic_abs(&r(12, 1), 2).unwrap(), r(1, 4));
        assert_eq!(padic_abs(&r(5, 8), 2).unwrap(), r(8, 1));
        assert_eq!(padic_abs(&r(0, 1), 2).unwrap(), r(0, 1));
        assert!(padic_abs(&r(1, 1), 6).is_err());
    }

    #[test]
    fn from_rat_unit_digits() {
        let c = ctx2();
        let x = PAdic::from_rat(&r(12, 1), &c);
        match &x {
            PAdic::NonZero { v, unit, prec } => {
                assert_eq!(*v, 2);
                assert_eq!(unit, &BigUint::from(3u32));
                assert_eq!(*prec, 16);
            }
            _ => panic!(),
        }
        // -1 = ...1111 in Z_2
        let m1 = PAdic::from_rat(&r(-1, 1), &c);
        match &m1 {
            PAdic::NonZero { v, unit, .. } => {
                assert_eq!(*v, 0);
                assert_eq!(unit, &((BigUint::one() << 16u32) - BigUint::one()));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn cancellation_tracks_precision() {
        let c = ctx2();
        let a = PAdic::from_rat(&r(1, 1), &c);
        let b = PAdic::from_rat(&r(-1, 1), &c);
        let s = a.add(&b, &c);
        assert_eq!(s, PAdic::Zero { abs: 16 });
        // (1 + 2^10) - 1 keeps valuation 10 with 6 digits left
        let x = PAdic::from_rat(&r(1025, 1), &c);
        let d = x.add(&b, &c);
        match d {
            PAdic::NonZero { v, prec, .. } => {
                assert_eq!(v, 10);
                assert_eq!(prec, 6);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn arithmetic_matches_rational_oracle() {
        let c = PCtx::new(3, 12).unwrap();
        let qs = [r(5, 7), r(-2, 11), r(9, 4), r(1, 1)];
        for a in &qs {
            for b in &qs {
                let pa = PAdic::from_rat(a, &c);
                let pb = PAdic::from_rat(b, &c);
                let sum = pa.add(&pb, &c);
                let prod = pa.mul(&pb, &c);
                let sum_q = a + b;
                let prod_q = a * b;
                if !sum_q.is_zero() && padic_val_rat(&sum_q, 3) >= 0 {
                    assert_eq!(
                        sum.residue(&c),
                        PAdic::residue_of_rat(&sum_q, &c),
                        "sum {a} + {b}"
                    );
                }
                assert_eq!(prod.residue(&c), PAdic::residue_of_rat(&prod_q, &c));
            }
        }
    }

    #[test]
    fn division_and_errors() {
        let c = ctx2();
        let x = PAdic::from_rat(&r(3, 1), &c);
        let y = PAdic::from_rat(&r(12, 1), &c);
        let q = y.div(&x, &c).unwrap();
        assert_eq!(q.residue(&c), PAdic::residue_of_rat(&r(4, 1), &c));
        assert_eq!(
            PAdic::exact_zero().recip(&c),
            Err(ScalarError::DivisionByZero)
        );
        assert_eq!(
            (PAdic::Zero { abs: 5 }).recip(&c),
            Err(ScalarError::InsufficientPrecision)
        );
    }

    #[test]
    fn pow_scales_valuation() {
        let c = ctx2();
        let x = PAdic::from_rat(&r(6, 1), &c);
        let y = x.pow(&BigUint::from(5u32), &c);
        assert_eq!(y.valuation(), Valuation::Exact(5));
        assert_eq!(y.residue(&c), PAdic::residue_of_rat(&r(7776, 1), &c));
    }
}
