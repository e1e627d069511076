//! Sparse multivariate polynomials over Z, used for the derivative
//! transfer polynomials and their substitution inverses. Exponent
//! vectors are kept trailing-zero-trimmed so arity grows on demand.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::scalars::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![], c);
        }
        MPoly { terms }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable with index i (zero-based).
    pub fn var(i: usize) -> Self {
        let mut e = vec![0u32; i + 1];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        MPoly { terms }
    }

    pub fn monomial(exps: &[u32], c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps.to_vec()), c);
        }
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Total degree, None for the zero polynomial.
    pub fn total_deg(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        MPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let mut e = vec![0u32; n];
                for (i, slot) in e.iter_mut().enumerate() {
                    *slot = e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0);
                }
                let entry = terms.entry(trim(e)).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    pub fn partial_deriv(&self, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.get(i).copied().unwrap_or(0);
            if d == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] = d - 1;
            terms.insert(trim(e2), c * BigInt::from(d));
        }
        MPoly { terms }
    }

    /// Substitute variable i with subs[i]; subs must cover every
    /// variable appearing in self.
    pub fn subst(&self, subs: &[MPoly]) -> Self {
        assert!(subs.len() >= self.nvars(), "substitution list too short");
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    term = term.mul(&subs[i].pow(d));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluate with vals[i] for variable i.
    pub fn eval<S: Scalar>(&self, vals: &[S], ctx: &S::Ctx) -> S {
        assert!(vals.len() >= self.nvars(), "value list too short");
        let mut acc = S::zero(ctx);
        for (e, c) in &self.terms {
            let mut term = S::from_rat(&crate::scalars::Rat::from_integer(c.clone()), ctx);
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    let p = vals[i].pow(&BigUint::from(d), ctx);
                    term = term.mul(&p, ctx);
                }
            }
            acc = acc.add(&term, ctx);
        }
        acc
    }

    /// Render with the given variable names, deterministic term order.
    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut factors = Vec::new();
            for (i, &d) in e.iter().enumerate() {
                if d == 1 {
                    factors.push(names[i].to_string());
                } else if d > 1 {
                    factors.push(format!("{}^{}", names[i], d));
                }
            }
            let body = factors.join("*");
            let piece = if body.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                body
            } else if (-c).to_i32() == Some(1) {
                format!("-{body}")
            } else {
                format!("{c}*{body}")
            };
            parts.push(piece);
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rat;

    fn x(i: usize) -> MPoly {
        MPoly::var(i)
    }

    #[test]
    fn ring_operations() {
        let p = x(0).add(&x(1)); // x + y
        let q = p.mul(&p); // x^2 + 2xy + y^2
        assert_eq!(q.coeff(&[2, 0]), BigInt::from(1));
        assert_eq!(q.coeff(&[1, 1]), BigInt::from(2));
        assert_eq!(q.coeff(&[0, 2]), BigInt::from(1));
        assert_eq!(q.num_terms(), 3);
        assert!(p.sub(&p).is_zero());
        assert_eq!(q.total_deg(), Some(2));
        assert_eq!(p.pow(2), q);
        assert_eq!(p.pow(0), MPoly::one());
    }

    #[test]
    fn derivative_and_subst() {
        // d/dx (x^2 y + 3x) = 2xy + 3
        let f = MPoly::monomial(&[2, 1], 1).add(&MPoly::monomial(&[1], 3));
        let fx = f.partial_deriv(0);
        assert_eq!(fx.coeff(&[1, 1]), BigInt::from(2));
        assert_eq!(fx.coeff(&[0, 0]), BigInt::from(3));
        assert!(f.partial_deriv(2).is_zero());
        // substitute x -> y^2, y -> 1+y into x*y
        let g = x(0).mul(&x(1));
        let s = g.subst(&[x(1).pow(2), MPoly::one().add(&x(1))]);
        // y^2 * (1+y) = y^2 + y^3
        assert_eq!(s.coeff(&[0, 2]), BigInt::from(1));
        assert_eq!(s.coeff(&[0, 3]), BigInt::from(1));
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn evaluation_matches_expansion() {
        // f = x^2 - 2xy at x=3/2, y=1/3: 9/4 - 1 = 5/4
        let f = MPoly::monomial(&[2], 1).add(&MPoly::monomial(&[1, 1], -2));
        let v: Rat = f.eval(
            &[Rat::new(3.into(), 2.into()), Rat::new(1.into(), 3.into())],
            &(),
        );
        assert_eq!(v, Rat::new(5.into(), 4.into()));
    }

    #[test]
    fn rendering_is_stable() {
        let f = MPoly::monomial(&[2], 1)
            .add(&MPoly::monomial(&[1, 1], -3))
            .add(&MPoly::constant(7));
        assert_eq!(f.render(&["x", "y"]), "7 - 3*x*y + x^2");
        assert_eq!(x(0).neg().render(&["x"]), "-x");
    }
}
