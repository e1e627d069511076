//! Complex ball arithmetic: dyadic midpoint, upward-rounded error radius.
//!
//! Every operation rounds the midpoint to the context precision and folds
//! the rounding slop into `err`, so the invariant "true value within err
//! of mid" survives arbitrary composition.

use num_bigint::BigUint;
use num_traits::Zero;

use super::dyadic::{Dyadic, Round};
use super::{Rat, Scalar, ScalarError, TailBound};

pub const DEFAULT_PREC_BITS: u32 = 256;

#[derive(Clone, Debug)]
pub struct CCtx {
    pub prec: u32,
}

impl CCtx {
    pub fn new(prec: u32) -> Self {
        CCtx { prec }
    }
}

#[derive(Clone, Debug)]
pub struct CErr {
    pub re: Dyadic,
    pub im: Dyadic,
    pub err: Dyadic,
}

impl CErr {
    pub fn exact_zero() -> Self {
        CErr { re: Dyadic::zero(), im: Dyadic::zero(), err: Dyadic::zero() }
    }

    pub fn from_dyadic(re: Dyadic) -> Self {
        CErr { re, im: Dyadic::zero(), err: Dyadic::zero() }
    }

    pub fn real_ball(re: Dyadic, err: Dyadic) -> Self {
        CErr { re, im: Dyadic::zero(), err }
    }

    pub fn from_rat_pair(re: &Rat, im: &Rat, ctx: &CCtx) -> Self {
        let (r, er) = Dyadic::from_rat(re, ctx.prec, Round::Nearest);
        let (i, ei) = Dyadic::from_rat(im, ctx.prec, Round::Nearest);
        CErr { re: r, im: i, err: er.up_add(&ei) }
    }

    /// Upper bound on |center|; |re| + |im| avoids square roots and is
    /// within sqrt(2) of tight, which is all the bounds need.
    pub fn center_mag_ub(&self) -> Dyadic {
        self.re.abs().up_add(&self.im.abs())
    }

    /// Upper bound on |value| over the whole ball.
    pub fn mag_ub(&self) -> Dyadic {
        self.center_mag_ub().up_add(&self.err)
    }

    /// Lower bound on |value| over the whole ball; zero when the ball may
    /// contain zero. Uses |center| >= max(|re|, |im|).
    pub fn mag_lb(&self) -> Dyadic {
        let lb = Dyadic::max_val(&self.re.abs(), &self.im.abs());
        let (lo, _) = lb.sub_exact(&self.err).round(super::ERR_PREC, Round::Floor);
        if lo.is_negative() { Dyadic::zero() } else { lo }
    }

    pub fn contains_zero(&self) -> bool {
        self.mag_lb().is_zero()
    }

    /// Tight upper bound on |value|: sqrt(re^2 + im^2) rounded up, plus
    /// the radius. Worth the sqrt when a factor sqrt(2) of slack matters.
    pub fn abs_ub(&self) -> Dyadic {
        let sq = self.re.mul_exact(&self.re).add_exact(&self.im.mul_exact(&self.im));
        sq.sqrt_ub().up_add(&self.err)
    }

    /// Tight lower bound on |value| over the ball, floored at zero.
    pub fn abs_lb(&self) -> Dyadic {
        let sq = self.re.mul_exact(&self.re).add_exact(&self.im.mul_exact(&self.im));
        let (lo, _) = sq.sqrt_lb().sub_exact(&self.err).round(super::ERR_PREC, Round::Floor);
        if lo.is_negative() { Dyadic::zero() } else { lo }
    }

    pub fn conj(&self) -> Self {
        CErr { re: self.re.clone(), im: self.im.neg(), err: self.err.clone() }
    }

    /// Midpoint distance |self.mid - other.mid|, upper bound.
    pub fn center_dist_ub(&self, other: &CErr) -> Dyadic {
        let dr = self.re.sub_exact(&other.re).abs();
        let di = self.im.sub_exact(&other.im).abs();
        dr.up_add(&di)
    }

    /// Lower bound on midpoint distance: max(|d_re|, |d_im|), exact.
    pub fn center_dist_lb(&self, other: &CErr) -> Dyadic {
        let dr = self.re.sub_exact(&other.re).abs();
        let di = self.im.sub_exact(&other.im).abs();
        Dyadic::max_val(&dr, &di)
    }

    pub fn scale_pow2(&self, k: i64) -> Self {
        CErr {
            re: self.re.mul_pow2(k),
            im: self.im.mul_pow2(k),
            err: self.err.mul_pow2(k),
        }
    }
}

impl Scalar for CErr {
    type Ctx = CCtx;

    fn from_rat(q: &Rat, ctx: &CCtx) -> Self {
        let (r, e) = Dyadic::from_rat(q, ctx.prec, Round::Nearest);
        CErr { re: r, im: Dyadic::zero(), err: e }
    }

    fn zero(_: &CCtx) -> Self {
        CErr::exact_zero()
    }

    fn one(_: &CCtx) -> Self {
        CErr::from_dyadic(Dyadic::one())
    }

    fn add(&self, other: &Self, ctx: &CCtx) -> Self {
        let (r, er) = self.re.add_round(&other.re, ctx.prec);
        let (i, ei) = self.im.add_round(&other.im, ctx.prec);
        CErr {
            re: r,
            im: i,
            err: self.err.up_add(&other.err).up_add(&er.up_add(&ei)),
        }
    }

    fn sub(&self, other: &Self, ctx: &CCtx) -> Self {
        self.add(&other.neg(ctx), ctx)
    }

    fn mul(&self, other: &Self, ctx: &CCtx) -> Self {
        let p = ctx.prec;
        let (ac, e1) = self.re.mul_round(&other.re, p);
        let (bd, e2) = self.im.mul_round(&other.im, p);
        let (ad, e3) = self.re.mul_round(&other.im, p);
        let (bc, e4) = self.im.mul_round(&other.re, p);
        let (re, e5) = ac.add_round(&bd.neg(), p);
        let (im, e6) = ad.add_round(&bc, p);
        let rnd = e1.up_add(&e2).up_add(&e3).up_add(&e4).up_add(&e5).up_add(&e6);
        let cross = self
            .center_mag_ub()
            .up_mul(&other.err)
            .up_add(&other.center_mag_ub().up_mul(&self.err))
            .up_add(&self.err.up_mul(&other.err));
        CErr { re, im, err: cross.up_add(&rnd) }
    }

    fn neg(&self, _: &CCtx) -> Self {
        CErr { re: self.re.neg(), im: self.im.neg(), err: self.err.clone() }
    }

    fn recip(&self, ctx: &CCtx) -> Result<Self, ScalarError> {
        let p = ctx.prec;
        let center_lb = Dyadic::max_val(&self.re.abs(), &self.im.abs());
        let (value_lb, _) = center_lb.sub_exact(&self.err).round(super::ERR_PREC, Round::Floor);
        if value_lb.signum() <= 0 {
            return Err(if self.re.is_zero() && self.im.is_zero() && self.err.is_zero() {
                ScalarError::DivisionByZero
            } else {
                ScalarError::InsufficientPrecision
            });
        }
        // 1/z = conj(z) / |z|^2 on the midpoint
        let d = self
            .re
            .mul_exact(&self.re)
            .add_exact(&self.im.mul_exact(&self.im));
        let (re, e1) = self.re.div_round(&d, p, Round::Nearest);
        let (im_pos, e2) = self.im.div_round(&d, p, Round::Nearest);
        // |1/z - 1/zc| <= err / (|z| |zc|) with |z| >= value_lb, |zc| >= center_lb
        let denom_lo = value_lb.mul_exact(&center_lb).round(super::ERR_PREC, Round::Floor).0;
        let prop = self.err.up_div(&denom_lo);
        Ok(CErr {
            re,
            im: im_pos.neg(),
            err: prop.up_add(&e1).up_add(&e2),
        })
    }

    fn pow(&self, e: &BigUint, ctx: &CCtx) -> Self {
        let mut acc = CErr::from_dyadic(Dyadic::one());
        let mut base = self.clone();
        let mut bits = e.clone();
        if bits.is_zero() {
            return acc;
        }
        while !bits.is_zero() {
            if bits.bit(0) {
                acc = acc.mul(&base, ctx);
            }
            bits >>= 1u8;
            if !bits.is_zero() {
                base = base.mul(&base, ctx);
            }
        }
        acc
    }

    fn absorb_tail(&mut self, t: &TailBound, _: &CCtx) {
        match t {
            TailBound::Arch(b) => self.err = self.err.up_add(b),
            TailBound::NonArch(_) => panic!("p-adic tail absorbed into complex ball"),
        }
    }

    fn mag(&self, _: &CCtx) -> TailBound {
        TailBound::Arch(self.mag_ub())
    }

    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.err.is_zero()
    }
}

impl CErr {
    pub fn div(&self, other: &Self, ctx: &CCtx) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.recip(ctx)?, ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ctx() -> CCtx {
        CCtx::new(128)
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn third_round_trip() {
        let c = ctx();
        let third = CErr::from_rat(&r(1, 3), &c);
        assert!(!third.err.is_zero());
        let three = third.recip(&c).unwrap();
        let diff = three.sub(&CErr::from_rat(&r(3, 1), &c), &c);
        assert!(diff.mag_ub().cmp_value(&Dyadic::power_of_two(-120)).is_lt());
    }

    #[test]
    fn complex_mul_i_squared() {
        let c = ctx();
        let i = CErr { re: Dyadic::zero(), im: Dyadic::one(), err: Dyadic::zero() };
        let m1 = i.mul(&i, &c);
        assert_eq!(m1.re, Dyadic::from_i64(-1));
        assert!(m1.im.is_zero());
        assert!(m1.err.is_zero());
    }

    #[test]
    fn err_dominates_true_value() {
        let c = ctx();
        // (1/3 + i/7)^3 computed two ways: in balls, and exactly
        let z = CErr::from_rat_pair(&r(1, 3), &r(1, 7), &c);
        let z3 = z.pow(&BigUint::from(3u32), &c);
        // exact: (1/3 + i/7)^3 = re + i im with
        // re = 1/27 - 3*(1/3)*(1/49) = 1/27 - 1/49
        // im = 3*(1/9)*(1/7) - 1/343
        let re = r(1, 27) - r(1, 49);
        let im = r(1, 21) - r(1, 343);
        let exact = CErr::from_rat_pair(&re, &im, &CCtx::new(300));
        let diff = z3.sub(&exact, &c);
        assert!(diff.center_mag_ub().cmp_value(&z3.err.up_add(&exact.err)).is_le());
    }

    #[test]
    fn recip_of_straddling_ball_fails() {
        let c = ctx();
        let fuzzy = CErr { re: Dyadic::power_of_two(-100), im: Dyadic::zero(), err: Dyadic::one() };
        assert!(matches!(fuzzy.recip(&c), Err(ScalarError::InsufficientPrecision)));
        let zero = CErr::exact_zero();
        assert!(matches!(zero.recip(&c), Err(ScalarError::DivisionByZero)));
    }

    #[test]
    fn pow_zero_is_one() {
        let c = ctx();
        let z = CErr::from_rat(&r(5, 7), &c);
        let one = z.pow(&BigUint::zero(), &c);
        assert_eq!(one.re, Dyadic::one());
    }
}
