//! Univariate polynomials over Z and Q with the exact machinery the
//! condition checks lean on: fraction-free determinants over Z[X],
//! resultants, cyclotomic construction, primitive-PRS gcd, and generic
//! evaluation through any scalar backend.

pub mod factor;
pub mod multi;
pub mod roots;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalars::{Dyadic, Rat, Scalar};

/// Dense polynomial over Z; c[i] is the coefficient of X^i, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPoly {
    c: Vec<BigInt>,
}

impl IPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IPoly { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(a: BigInt) -> Self {
        Self::new(vec![a])
    }

    pub fn monomial(k: usize, a: BigInt) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in other.c.iter().enumerate() {
            c[i] += b;
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IPoly {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn mul_scalar(&self, a: &BigInt) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        IPoly {
            c: self.c.iter().map(|x| x * a).collect(),
        }
    }

    /// Multiply by X^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        IPoly { c }
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, a)| a * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::from_integer(BigInt::zero());
        for a in self.c.iter().rev() {
            acc = acc * x + Rat::from_integer(a.clone());
        }
        acc
    }

    /// Exact dyadic evaluation; dyadics are closed under ring ops, so the
    /// sign of the result is rigorous.
    pub fn eval_dyadic_exact(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul_exact(x).add_exact(&Dyadic::from_bigint(a.clone()));
        }
        acc
    }

    pub fn eval_scalar<S: Scalar>(&self, x: &S, ctx: &S::Ctx) -> S {
        let mut acc = S::zero(ctx);
        for a in self.c.iter().rev() {
            let term = S::from_rat(&Rat::from_integer(a.clone()), ctx);
            acc = acc.mul(x, ctx).add(&term, ctx);
        }
        acc
    }

    /// gcd of coefficients, nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = g.gcd(a);
        }
        g
    }

    /// content-free copy with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IPoly {
            c: self.c.iter().map(|a| a / &g).collect(),
        }
    }

    /// Division with remainder by a monic divisor, staying in Z[X].
    pub fn div_rem_monic(&self, d: &Self) -> (Self, Self) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.deg().unwrap();
        let mut rem = self.c.clone();
        let mut quo = vec![BigInt::zero(); self.c.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap().clone();
            if !q.is_zero() {
                quo[k] = q.clone();
                for (i, a) in d.c.iter().enumerate() {
                    let idx = k + i;
                    let t = &rem[idx] - a * &q;
                    rem[idx] = t;
                }
            }
            rem.pop();
        }
        (Self::new(quo), Self::new(rem))
    }

    /// Exact quotient in Z[X] if the division is exact, else None.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = RPoly::from_ipoly(self).div_rem(&RPoly::from_ipoly(d));
        if !r.is_zero() {
            return None;
        }
        let (num, den) = q.clear_denoms();
        if den.is_one() {
            Some(num)
        } else {
            None
        }
    }

    /// Primitive-PRS gcd, returned primitive with positive leading
    /// coefficient; content gcd folded back in.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().mul_scalar(&other.content().abs());
        }
        if other.is_zero() {
            return self.primitive_part().mul_scalar(&self.content().abs());
        }
        let cont = self.content().gcd(&other.content());
        let mut f = self.primitive_part();
        let mut g = other.primitive_part();
        if f.deg() < g.deg() {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            let r = f.pseudo_rem(&g);
            if r.is_zero() {
                return g.primitive_part().mul_scalar(&cont);
            }
            f = g;
            g = r.primitive_part();
        }
    }

    /// r with lc(g)^(deg f - deg g + 1) * f = q*g + r, deg r < deg g.
    fn pseudo_rem(&self, g: &Self) -> Self {
        let df = self.deg().expect("zero dividend");
        let dg = g.deg().expect("zero divisor");
        if df < dg {
            return self.clone();
        }
        let lg = g.lc();
        let mut r = self.clone();
        for _ in 0..=(df - dg) {
            let dr = match r.deg() {
                Some(d) if d >= dg => d,
                _ => {
                    r = r.mul_scalar(&lg);
                    continue;
                }
            };
            let lead = r.lc();
            r = r.mul_scalar(&lg).sub(&g.shift_up(dr - dg).mul_scalar(&lead));
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        match self.deg() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).deg() == Some(0),
        }
    }

    /// The product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.deg() == Some(0) {
            return self.primitive_part();
        }
        let (q, r) = RPoly::from_ipoly(self).div_rem(&RPoly::from_ipoly(&g));
        debug_assert!(r.is_zero());
        q.clear_denoms().0.primitive_part()
    }

    pub fn max_coeff_abs(&self) -> BigInt {
        self.c
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Human-readable form, highest degree first.
    pub fn render(&self, var: &str) -> String {
        let Some(d) = self.deg() else {
            return "0".into();
        };
        let mut s = String::new();
        for i in (0..=d).rev() {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if s.is_empty() {
                if a.is_negative() {
                    s.push('-');
                }
            } else if a.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let unit_coeff = mag.is_one() && i > 0;
            if !unit_coeff {
                s.push_str(&mag.to_string());
            }
            if i > 0 {
                if !unit_coeff {
                    s.push('*');
                }
                s.push_str(var);
                if i > 1 {
                    s.push_str(&format!("^{i}"));
                }
            }
        }
        s
    }
}

/// Resultant of two integer polynomials via fraction-free elimination of
/// the Sylvester matrix.
pub fn resultant_int(f: &IPoly, g: &IPoly) -> BigInt {
    let (df, dg) = match (f.deg(), g.deg()) {
        (Some(a), Some(b)) => (a, b),
        _ => return BigInt::zero(),
    };
    if df == 0 && dg == 0 {
        return BigInt::one();
    }
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for row in 0..dg {
        for (i, a) in f.c.iter().enumerate() {
            m[row][row + df - i] = a.clone();
        }
    }
    for row in 0..df {
        for (i, b) in g.c.iter().enumerate() {
            m[dg + row][row + dg - i] = b.clone();
        }
    }
    bareiss_det_int(m)
}

pub fn bareiss_det_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Fraction-free determinant of a matrix over Z[X]; every interior
/// division is exact by the Bareiss identity.
pub fn bareiss_det_poly(mut m: Vec<Vec<IPoly>>) -> IPoly {
    let n = m.len();
    if n == 0 {
        return IPoly::one();
    }
    let mut sign = 1i32;
    let mut prev = IPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return IPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev).expect("inexact pivot division");
            }
            m[i][k] = IPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        d.neg()
    } else {
        d
    }
}

/// Resultant in Y of f(Y) and f(X*Y), as a polynomial in X. Its roots
/// are the pairwise ratios of the roots of f (for f(0) != 0).
pub fn root_ratio_resultant(f: &IPoly) -> IPoly {
    let n = f.deg().expect("constant polynomial");
    assert!(n >= 1);
    let rows = 2 * n;
    let mut m = vec![vec![IPoly::zero(); rows]; rows];
    // n rows of f(Y): constant-in-X entries
    for row in 0..n {
        for (i, a) in f.c.iter().enumerate() {
            m[row][row + n - i] = IPoly::constant(a.clone());
        }
    }
    // n rows of f(XY): Y^i coefficient is a_i X^i
    for row in 0..n {
        for (i, a) in f.c.iter().enumerate() {
            m[n + row][row + n - i] = IPoly::monomial(i, a.clone());
        }
    }
    bareiss_det_poly(m)
}

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The m-th cyclotomic polynomial, by dividing X^m - 1 by the cyclotomic
/// polynomials of the proper divisors.
pub fn cyclotomic(m: u64) -> IPoly {
    assert!(m >= 1);
    let mut num = IPoly::monomial(m as usize, BigInt::one()).sub(&IPoly::one());
    for d in 1..m {
        if m % d == 0 {
            let (q, r) = num.div_rem_monic(&cyclotomic(d));
            debug_assert!(r.is_zero());
            num = q;
        }
    }
    num
}

/// Dense polynomial over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPoly {
    c: Vec<Rat>,
}

impl RPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RPoly { c }
    }

    pub fn zero() -> Self {
        RPoly { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rat::from_integer(BigInt::one()))
    }

    pub fn constant(a: Rat) -> Self {
        Self::new(vec![a])
    }

    pub fn from_ipoly(p: &IPoly) -> Self {
        Self::new(p.c.iter().map(|a| Rat::from_integer(a.clone())).collect())
    }

    /// 1 + c*X (a factor in the products the generating functions use).
    pub fn one_plus_cx(c: Rat) -> Self {
        Self::new(vec![Rat::from_integer(BigInt::one()), c])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.c
            .get(i)
            .cloned()
            .unwrap_or_else(|| Rat::from_integer(BigInt::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut c = vec![Rat::from_integer(BigInt::zero()); n];
        for (i, a) in self.c.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in other.c.iter().enumerate() {
            c[i] += b;
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RPoly {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let zero = Rat::from_integer(BigInt::zero());
        let mut c = vec![zero; self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn mul_scalar(&self, a: &Rat) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        RPoly {
            c: self.c.iter().map(|x| x * a).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, a)| a * Rat::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.deg().expect("division by zero polynomial");
        let lead = d.c[dd].clone();
        let mut rem = self.c.clone();
        let mut quo = vec![Rat::from_integer(BigInt::zero()); self.c.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lead;
            if !q.is_zero() {
                quo[k] = q.clone();
                for (i, a) in d.c.iter().enumerate() {
                    let t = &rem[k + i] - a * &q;
                    rem[k + i] = t;
                }
            }
            rem.pop();
        }
        (Self::new(quo), Self::new(rem))
    }

    /// Quotient when the division is known exact; panics otherwise.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::from_integer(BigInt::zero());
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_scalar<S: Scalar>(&self, x: &S, ctx: &S::Ctx) -> S {
        let mut acc = S::zero(ctx);
        for a in self.c.iter().rev() {
            acc = acc.mul(x, ctx).add(&S::from_rat(a, ctx), ctx);
        }
        acc
    }

    /// (p, d) with d > 0, d*self = p in Z[X].
    pub fn clear_denoms(&self) -> (IPoly, BigInt) {
        let mut den = BigInt::one();
        for a in &self.c {
            den = den.lcm(a.denom());
        }
        let c = self
            .c
            .iter()
            .map(|a| a.numer() * (&den / a.denom()))
            .collect();
        (IPoly::new(c), den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IPoly {
        IPoly::from_i64(c)
    }

    #[test]
    fn ring_ops_and_normalization() {
        let f = p(&[1, 2, 1]); // (1+X)^2
        let g = p(&[1, 1]);
        assert_eq!(g.mul(&g), f);
        assert_eq!(f.sub(&f), IPoly::zero());
        assert_eq!(f.deg(), Some(2));
        assert_eq!(p(&[0, 0, 0]).deg(), None);
        assert_eq!(f.derivative(), p(&[2, 2]));
    }

    #[test]
    fn monic_division() {
        let f = p(&[-6, 11, -6, 1]); // (X-1)(X-2)(X-3)
        let (q, r) = f.div_rem_monic(&p(&[-2, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[3, -4, 1]));
        let (_, r2) = f.div_rem_monic(&p(&[1, 1]));
        assert_eq!(r2, IPoly::constant(BigInt::from(-24))); // f(-1)
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = p(&[1, 1]).mul(&p(&[1, 1])).mul(&p(&[-2, 1]));
        let g = p(&[1, 1]).mul(&p(&[3, 1]));
        assert_eq!(f.gcd(&g), p(&[1, 1]));
        assert!(!f.is_squarefree());
        assert_eq!(f.squarefree_part(), p(&[1, 1]).mul(&p(&[-2, 1])));
        assert!(p(&[-1, 0, 0, 1]).is_squarefree());
        // content handling: gcd(2f, 4f) keeps content 2
        let two_f = p(&[2, 2]);
        let four_f = p(&[4, 4]);
        assert_eq!(two_f.gcd(&four_f), p(&[2, 2]));
    }

    #[test]
    fn resultants_match_root_products() {
        // res(X^2-2, X^2-3) = prod (r_i - s_j) over roots = (2-3)^2 ... = 1
        let f = p(&[-2, 0, 1]);
        let g = p(&[-3, 0, 1]);
        assert_eq!(resultant_int(&f, &g), BigInt::from(1));
        // res(X-2, X-3) = -1... convention: res = prod f-roots into g: g(2) = -1
        assert_eq!(resultant_int(&p(&[-2, 1]), &p(&[-3, 1])), BigInt::from(-1));
        // shared root -> 0
        assert_eq!(
            resultant_int(&p(&[-2, 1]).mul(&p(&[1, 1])), &p(&[-2, 1])),
            BigInt::zero()
        );
    }

    #[test]
    fn ratio_resultant_fibonacci() {
        // X^2 - X - 1: ratios of the two roots are 1, 1, r, 1/r with
        // r = phi/psi = -phi^2; the resultant must vanish at X = 1 (twice)
        // and have the minimal polynomial of -phi^2 as remaining factor.
        let f = p(&[-1, -1, 1]);
        let r = root_ratio_resultant(&f);
        assert_eq!(r.deg(), Some(4));
        assert_eq!(r.eval_int(&BigInt::one()), BigInt::zero());
        let stripped = r
            .div_exact(&p(&[-1, 1]).mul(&p(&[-1, 1])))
            .expect("double root at 1");
        // -phi^2 and -psi^2 are roots of X^2 + 3X + 1
        assert_eq!(stripped.primitive_part(), p(&[1, 3, 1]));
    }

    #[test]
    fn ratio_resultant_x2_minus_2() {
        // roots +-sqrt(2): ratios 1, 1, -1, -1
        let r = root_ratio_resultant(&p(&[-2, 0, 1]));
        let one = p(&[-1, 1]);
        let stripped = r.div_exact(&one.mul(&one)).unwrap();
        // remaining roots are -1, -1
        assert_eq!(stripped.primitive_part(), p(&[1, 2, 1]));
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(97), 96);
    }

    #[test]
    fn rational_division() {
        let f = RPoly::from_ipoly(&p(&[2, 3, 1]));
        let g = RPoly::new(vec![
            Rat::new(BigInt::from(1), BigInt::from(2)),
            Rat::from_integer(BigInt::one()),
        ]);
        // f = (X+1)(X+2); g = X + 1/2
        let (q, r) = f.div_rem(&g);
        let back = q.mul(&g).add(&r);
        assert_eq!(back, f);
        assert!(!r.is_zero());
        let exact = f.div_exact(&RPoly::from_ipoly(&p(&[1, 1])));
        assert_eq!(exact, RPoly::from_ipoly(&p(&[2, 1])));
    }

    #[test]
    fn clear_denoms_round_trip() {
        let f = RPoly::new(vec![
            Rat::new(BigInt::from(1), BigInt::from(6)),
            Rat::new(BigInt::from(-2), BigInt::from(3)),
        ]);
        let (ip, d) = f.clear_denoms();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(ip, p(&[1, -4]));
    }

    #[test]
    fn scalar_eval_matches_rational() {
        use crate::scalars::cerr::{CCtx, CErr};
        let f = p(&[-1, -1, 1]);
        let x = Rat::new(BigInt::from(3), BigInt::from(7));
        let exact = f.eval_rat(&x);
        let ctx = CCtx::new(128);
        let ball = f.eval_scalar(&CErr::from_rat(&x, &ctx), &ctx);
        let exact_ball = CErr::from_rat(&exact, &ctx);
        let d = ball.sub(&exact_ball, &ctx);
        assert!(d.center_mag_ub().cmp_value(&Dyadic::power_of_two(-100)).is_le());
    }

    #[test]
    fn exact_dyadic_eval_sign() {
        // phi = X^2 - X - 1 at 3/2 < phi: negative; at 27/16 > phi: positive
        let f = p(&[-1, -1, 1]);
        assert_eq!(f.eval_dyadic_exact(&Dyadic::new(BigInt::from(3), -1)).signum(), -1);
        assert_eq!(f.eval_dyadic_exact(&Dyadic::new(BigInt::from(27), -4)).signum(), 1);
    }
}
