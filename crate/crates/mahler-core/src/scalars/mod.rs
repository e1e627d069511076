//! Number backends and the scalar interface the evaluators are generic over.

pub mod dyadic;
pub mod cerr;
pub mod padic;
pub mod jet;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use dyadic::{Dyadic, Round, ERR_PREC};

/// Exact rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// A place of Q: the archimedean absolute value or a p-adic one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Place {
    Inf,
    P(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Inf => write!(f, "inf"),
            Place::P(p) => write!(f, "p:{p}"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("ball contains zero at this precision")]
    InsufficientPrecision,
    #[error("jet has zero constant term")]
    ZeroConstantTerm,
    #[error("jet order mismatch: ({0},{1}) vs ({2},{3})")]
    OrderMismatch(usize, usize, usize, usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero input")]
    ZeroInput,
}

/// Tail contribution of a truncated series or product: an absolute bound
/// at the archimedean place, a valuation lower bound at a p-adic one.
#[derive(Clone, Debug)]
pub enum TailBound {
    Arch(Dyadic),
    NonArch(i64),
}

impl TailBound {
    pub fn combine_max(&self, other: &TailBound) -> TailBound {
        match (self, other) {
            (TailBound::Arch(a), TailBound::Arch(b)) => TailBound::Arch(a.up_add(b)),
            (TailBound::NonArch(a), TailBound::NonArch(b)) => TailBound::NonArch(*a.min(b)),
            _ => panic!("mixed places in tail bounds"),
        }
    }
}

/// Common interface of the numeric backends. Contexts carry precision
/// (and the prime, for p-adics); every operation takes the context
/// explicitly so evaluation code has a single precision story.
pub trait Scalar: Clone + std::fmt::Debug {
    type Ctx: Clone;

    fn from_rat(q: &Rat, ctx: &Self::Ctx) -> Self;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn add(&self, other: &Self, ctx: &Self::Ctx) -> Self;
    fn sub(&self, other: &Self, ctx: &Self::Ctx) -> Self;
    fn mul(&self, other: &Self, ctx: &Self::Ctx) -> Self;
    fn neg(&self, ctx: &Self::Ctx) -> Self;
    fn recip(&self, ctx: &Self::Ctx) -> Result<Self, ScalarError>;
    fn pow(&self, e: &BigUint, ctx: &Self::Ctx) -> Self;
    /// Add the truncation tail of a series/product into the value's
    /// uncertainty. Panics on a place mismatch; that is an internal bug.
    fn absorb_tail(&mut self, t: &TailBound, ctx: &Self::Ctx);
    /// Magnitude information: an upper bound on |.| (arch) or a lower
    /// bound on the valuation (non-arch).
    fn mag(&self, ctx: &Self::Ctx) -> TailBound;
    fn is_exact_zero(&self) -> bool;
}

/// Exact rationals as a backend: the test oracle for small truncations.
impl Scalar for Rat {
    type Ctx = ();

    fn from_rat(q: &Rat, _: &()) -> Self {
        q.clone()
    }
    fn zero(_: &()) -> Self {
        <Rat as num_traits::Zero>::zero()
    }
    fn one(_: &()) -> Self {
        num_traits::One::one()
    }
    fn add(&self, other: &Self, _: &()) -> Self {
        self + other
    }
    fn sub(&self, other: &Self, _: &()) -> Self {
        self - other
    }
    fn mul(&self, other: &Self, _: &()) -> Self {
        self * other
    }
    fn neg(&self, _: &()) -> Self {
        -self
    }
    fn recip(&self, _: &()) -> Result<Self, ScalarError> {
        if self.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Rat::new(self.denom().clone(), self.numer().clone()))
        }
    }
    fn pow(&self, e: &BigUint, _: &()) -> Self {
        let mut acc: Rat = num_traits::One::one();
        let mut base = self.clone();
        let mut bits = e.clone();
        while !bits.is_zero() {
            if bits.bit(0) {
                acc *= &base;
            }
            base = &base * &base;
            bits >>= 1u8;
        }
        acc
    }
    fn absorb_tail(&mut self, _: &TailBound, _: &()) {}
    fn mag(&self, _: &()) -> TailBound {
        let (d, e) = Dyadic::from_rat(&self.abs(), ERR_PREC, Round::Ceil);
        TailBound::Arch(d.up_add(&e))
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

/// |n|/d for n/d in lowest terms.
pub fn house(q: &Rat) -> Rat {
    q.abs()
}

/// The reduced denominator.
pub fn denominator(q: &Rat) -> BigInt {
    q.denom().clone()
}

/// max(house, denominator): the height-style norm used in the Liouville
/// lower bound.
pub fn height_norm(q: &Rat) -> Rat {
    let h = house(q);
    let d = Rat::from_integer(q.denom().clone());
    if h >= d { h } else { d }
}

/// |q|_place for a nonzero rational, as an exact rational.
pub fn abs_at_place(q: &Rat, place: Place) -> Result<Rat, ScalarError> {
    if q.is_zero() {
        return Err(ScalarError::ZeroInput);
    }
    match place {
        Place::Inf => Ok(q.abs()),
        Place::P(p) => {
            if !padic::is_prime(p) {
                return Err(ScalarError::NotPrime(p));
            }
            let v = padic::padic_val_rat(q, p);
            let pb = BigInt::from(p);
            Ok(if v >= 0 {
                Rat::new(BigInt::from(1), num_traits::pow::pow(pb, v as usize))
            } else {
                Rat::from_integer(num_traits::pow::pow(pb, (-v) as usize))
            })
        }
    }
}

/// Degree-one Liouville inequality: |q|_place >= height_norm(q)^-2 for
/// nonzero rational q. Returns (|q|_place, bound, holds).
pub fn liouville_check(q: &Rat, place: Place) -> Result<(Rat, Rat, bool), ScalarError> {
    let a = abs_at_place(q, place)?;
    let n = height_norm(q);
    let bound = (&n * &n).recip();
    let holds = a >= bound;
    Ok((a, bound, holds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn height_parts() {
        let q = r(-3, 4);
        assert_eq!(house(&q), r(3, 4));
        assert_eq!(denominator(&q), BigInt::from(4));
        assert_eq!(height_norm(&q), r(4, 1));
        assert_eq!(height_norm(&r(7, 2)), r(7, 2));
        // height of 0: house 0, den 1, norm 1
        assert_eq!(height_norm(&r(0, 1)), r(1, 1));
    }

    #[test]
    fn height_inequalities_spot() {
        // norm(a+b) <= 2 norm(a) norm(b), norm(ab) <= norm(a) norm(b)
        for (a, b) in [(r(3, 4), r(-5, 6)), (r(7, 1), r(1, 9)), (r(-2, 3), r(-2, 3))] {
            let s = &a + &b;
            let p = &a * &b;
            let na = height_norm(&a);
            let nb = height_norm(&b);
            assert!(height_norm(&s) <= r(2, 1) * &na * &nb);
            assert!(height_norm(&p) <= &na * &nb);
        }
    }

    #[test]
    fn liouville_both_places() {
        let q = r(3, 8);
        let (a, bound, holds) = liouville_check(&q, Place::Inf).unwrap();
        assert_eq!(a, r(3, 8));
        assert_eq!(bound, r(1, 64));
        assert!(holds);
        let (a2, bound2, holds2) = liouville_check(&q, Place::P(2)).unwrap();
        assert_eq!(a2, r(8, 1));
        assert_eq!(bound2, r(1, 64));
        assert!(holds2);
        assert!(liouville_check(&r(0, 1), Place::Inf).is_err());
    }

    #[test]
    fn rat_backend_pow() {
        let q = r(2, 3);
        let e = BigUint::from(5u32);
        assert_eq!(Scalar::pow(&q, &e, &()), r(32, 243));
    }
}
