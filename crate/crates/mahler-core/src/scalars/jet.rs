//! Truncated bivariate Taylor jets over any scalar backend. A jet of
//! order (lx, my) carries coefficients c[l][m] of x^l y^m, so c[l][m] is
//! the mixed partial divided by l! m!. Running an evaluation on jets
//! yields all mixed partials up to the chosen orders in one pass.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Rat, Scalar, ScalarError, TailBound};

#[derive(Clone, Debug)]
pub struct JetCtx<S: Scalar> {
    pub lx: usize,
    pub my: usize,
    pub base: S::Ctx,
}

impl<S: Scalar> JetCtx<S> {
    pub fn new(lx: usize, my: usize, base: S::Ctx) -> Self {
        JetCtx { lx, my, base }
    }
}

#[derive(Clone, Debug)]
pub struct BiJet<S> {
    c: Vec<Vec<S>>,
}

impl<S: Scalar> BiJet<S> {
    pub fn try_new(c: Vec<Vec<S>>, ctx: &JetCtx<S>) -> Result<Self, ScalarError> {
        if c.len() != ctx.lx + 1 || c.iter().any(|row| row.len() != ctx.my + 1) {
            let got_m = c.first().map_or(0, |r| r.len().saturating_sub(1));
            return Err(ScalarError::OrderMismatch(
                c.len().saturating_sub(1),
                got_m,
                ctx.lx,
                ctx.my,
            ));
        }
        Ok(BiJet { c })
    }

    pub fn constant(s: S, ctx: &JetCtx<S>) -> Self {
        let mut j = Self::zero(ctx);
        j.c[0][0] = s;
        j
    }

    /// The coordinate jet x0 + x.
    pub fn variable_x(x0: S, ctx: &JetCtx<S>) -> Self {
        let mut j = Self::constant(x0, ctx);
        if ctx.lx >= 1 {
            j.c[1][0] = S::one(&ctx.base);
        }
        j
    }

    /// The coordinate jet y0 + y.
    pub fn variable_y(y0: S, ctx: &JetCtx<S>) -> Self {
        let mut j = Self::constant(y0, ctx);
        if ctx.my >= 1 {
            j.c[0][1] = S::one(&ctx.base);
        }
        j
    }

    pub fn coeff(&self, l: usize, m: usize) -> &S {
        &self.c[l][m]
    }

    pub fn value(&self) -> &S {
        &self.c[0][0]
    }

    /// The mixed partial d^{l+m} f / dx^l dy^m, i.e. coeff * l! * m!.
    pub fn deriv(&self, l: usize, m: usize, ctx: &JetCtx<S>) -> S {
        let mut f = BigUint::one();
        for i in 2..=l {
            f *= BigUint::from(i);
        }
        for i in 2..=m {
            f *= BigUint::from(i);
        }
        let fq = Rat::from_integer(f.into());
        self.c[l][m].mul(&S::from_rat(&fq, &ctx.base), &ctx.base)
    }

    fn dims_match(&self, other: &Self) {
        assert!(
            self.c.len() == other.c.len() && self.c[0].len() == other.c[0].len(),
            "jet order mismatch: ({}, {}) vs ({}, {})",
            self.c.len() - 1,
            self.c[0].len() - 1,
            other.c.len() - 1,
            other.c[0].len() - 1,
        );
    }
}

impl<S: Scalar> Scalar for BiJet<S> {
    type Ctx = JetCtx<S>;

    fn from_rat(q: &Rat, ctx: &JetCtx<S>) -> Self {
        Self::constant(S::from_rat(q, &ctx.base), ctx)
    }

    fn zero(ctx: &JetCtx<S>) -> Self {
        BiJet {
            c: vec![vec![S::zero(&ctx.base); ctx.my + 1]; ctx.lx + 1],
        }
    }

    fn one(ctx: &JetCtx<S>) -> Self {
        Self::constant(S::one(&ctx.base), ctx)
    }

    fn add(&self, other: &Self, ctx: &JetCtx<S>) -> Self {
        self.dims_match(other);
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(r1, r2)| {
                r1.iter()
                    .zip(r2)
                    .map(|(a, b)| a.add(b, &ctx.base))
                    .collect()
            })
            .collect();
        BiJet { c }
    }

    fn sub(&self, other: &Self, ctx: &JetCtx<S>) -> Self {
        self.add(&other.neg(ctx), ctx)
    }

    fn mul(&self, other: &Self, ctx: &JetCtx<S>) -> Self {
        self.dims_match(other);
        let mut out = Self::zero(ctx);
        for l in 0..=ctx.lx {
            for m in 0..=ctx.my {
                let mut acc = S::zero(&ctx.base);
                for i in 0..=l {
                    for j in 0..=m {
                        if self.c[i][j].is_exact_zero() || other.c[l - i][m - j].is_exact_zero() {
                            continue;
                        }
                        acc = acc.add(&self.c[i][j].mul(&other.c[l - i][m - j], &ctx.base), &ctx.base);
                    }
                }
                out.c[l][m] = acc;
            }
        }
        out
    }

    fn neg(&self, ctx: &JetCtx<S>) -> Self {
        let c = self
            .c
            .iter()
            .map(|row| row.iter().map(|a| a.neg(&ctx.base)).collect())
            .collect();
        BiJet { c }
    }

    fn recip(&self, ctx: &JetCtx<S>) -> Result<Self, ScalarError> {
        let b00 = self.c[0][0].recip(&ctx.base).map_err(|e| match e {
            ScalarError::DivisionByZero => ScalarError::ZeroConstantTerm,
            other => other,
        })?;
        let mut out = Self::zero(ctx);
        out.c[0][0] = b00.clone();
        // graded triangular solve: (a * b)[l][m] = 0 for (l, m) != (0, 0)
        for l in 0..=ctx.lx {
            for m in 0..=ctx.my {
                if l == 0 && m == 0 {
                    continue;
                }
                let mut acc = S::zero(&ctx.base);
                for i in 0..=l {
                    for j in 0..=m {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        if self.c[i][j].is_exact_zero() {
                            continue;
                        }
                        acc = acc.add(&self.c[i][j].mul(&out.c[l - i][m - j], &ctx.base), &ctx.base);
                    }
                }
                out.c[l][m] = acc.mul(&b00, &ctx.base).neg(&ctx.base);
            }
        }
        Ok(out)
    }

    fn pow(&self, e: &BigUint, ctx: &JetCtx<S>) -> Self {
        let mut result = Self::one(ctx);
        if e.is_zero() {
            return result;
        }
        let bits = e.bits();
        for i in (0..bits).rev() {
            result = result.mul(&result, ctx);
            if e.bit(i) {
                result = result.mul(self, ctx);
            }
        }
        result
    }

    fn absorb_tail(&mut self, t: &TailBound, ctx: &JetCtx<S>) {
        // the caller's bound must hold for every coefficient in the jet
        for row in &mut self.c {
            for s in row {
                s.absorb_tail(t, &ctx.base);
            }
        }
    }

    fn mag(&self, ctx: &JetCtx<S>) -> TailBound {
        let mut acc: Option<TailBound> = None;
        for row in &self.c {
            for s in row {
                let m = s.mag(&ctx.base);
                acc = Some(match acc {
                    None => m,
                    Some(prev) => prev.combine_max(&m),
                });
            }
        }
        acc.expect("empty jet")
    }

    fn is_exact_zero(&self) -> bool {
        self.c.iter().all(|row| row.iter().all(|s| s.is_exact_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn ctx(lx: usize, my: usize) -> JetCtx<Rat> {
        JetCtx::new(lx, my, ())
    }

    #[test]
    fn square_of_one_plus_x() {
        let c = ctx(1, 0);
        let j = BiJet::variable_x(rq(1, 1), &c);
        let sq = j.mul(&j, &c);
        assert_eq!(sq.coeff(0, 0), &rq(1, 1));
        assert_eq!(sq.coeff(1, 0), &rq(2, 1));
    }

    #[test]
    fn geometric_series_from_recip() {
        let c = ctx(0, 2);
        let one_minus_y = BiJet::constant(rq(1, 1), &c)
            .sub(&BiJet::variable_y(rq(0, 1), &c), &c);
        let inv = one_minus_y.recip(&c).unwrap();
        for m in 0..=2 {
            assert_eq!(inv.coeff(0, m), &rq(1, 1));
        }
        let check = one_minus_y.mul(&inv, &c);
        assert_eq!(check.coeff(0, 0), &rq(1, 1));
        assert_eq!(check.coeff(0, 1), &rq(0, 1));
        assert_eq!(check.coeff(0, 2), &rq(0, 1));
    }

    #[test]
    fn recip_of_constant() {
        let c = ctx(1, 1);
        let j = BiJet::constant(rq(2, 1), &c);
        let inv = j.recip(&c).unwrap();
        assert_eq!(inv.coeff(0, 0), &rq(1, 2));
        assert_eq!(inv.coeff(1, 1), &rq(0, 1));
    }

    #[test]
    fn zero_constant_term_rejected() {
        let c = ctx(1, 1);
        let j = BiJet::variable_y(rq(0, 1), &c);
        assert!(matches!(j.recip(&c), Err(ScalarError::ZeroConstantTerm)));
    }

    #[test]
    fn mixed_product_rule() {
        // f = (1+x)(1+y): coeff(1,1) of f^2 = d^2/dxdy (1+x)^2(1+y)^2 / 1 at 0 -> 4
        let c = ctx(1, 1);
        let f = BiJet::variable_x(rq(1, 1), &c).mul(&BiJet::variable_y(rq(1, 1), &c), &c);
        let f2 = f.pow(&BigUint::from(2u32), &c);
        assert_eq!(f2.coeff(1, 1), &rq(4, 1));
        assert_eq!(f2.deriv(1, 1, &c), rq(4, 1));
    }

    #[test]
    fn try_new_checks_shape() {
        let c = ctx(1, 1);
        let bad = BiJet::try_new(vec![vec![rq(1, 1)]], &c);
        assert!(matches!(bad, Err(ScalarError::OrderMismatch(0, 0, 1, 1))));
    }
}
