//! Dyadic floats m * 2^e with explicit rounding.
//!
//! This is the number layer under the complex ball type: midpoints are
//! rounded to the working precision, error radii live at `ERR_PREC` bits
//! and are only ever rounded upward, so derived bounds stay valid.
//! Unbounded exponents matter here: radii like 2^-5000 must not flush to
//! zero the way an f64 radius would.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;

/// Precision for error-radius arithmetic. Radii are bounds, not values;
/// 32 bits of mantissa is plenty.
pub const ERR_PREC: u32 = 32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Round {
    Nearest,
    Floor,
    Ceil,
}

/// m * 2^e, canonical: m odd, or m = 0 with e = 0.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.m, self.e)
    }
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap();
        if tz > 0 {
            Dyadic { m: m >> tz, e: e + tz as i64 }
        } else {
            Dyadic { m, e }
        }
    }

    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        Dyadic { m: BigInt::one(), e: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// 2^e as a dyadic.
    pub fn power_of_two(e: i64) -> Self {
        Dyadic { m: BigInt::one(), e }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.sign() == Sign::Minus
    }

    pub fn signum(&self) -> i8 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { m: -&self.m, e: self.e }
    }

    pub fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    /// Smallest t with |self| < 2^t; None for zero.
    pub fn mag_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.e + self.m.magnitude().bits() as i64)
        }
    }

    pub fn bits(&self) -> u64 {
        self.m.magnitude().bits()
    }

    /// self * 2^k, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            self.clone()
        } else {
            Dyadic { m: self.m.clone(), e: self.e + k }
        }
    }

    pub fn to_rat(&self) -> Rat {
        if self.e >= 0 {
            Rat::from_integer(&self.m << self.e as u64)
        } else {
            Rat::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    /// Round to `prec` significant bits. Returns (rounded, |rounded - self|
    /// as an upper bound at ERR_PREC bits).
    pub fn round(&self, prec: u32, mode: Round) -> (Self, Self) {
        let bits = self.m.magnitude().bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let s = bits - prec as u64;
        let mag = self.m.magnitude();
        let q: BigUint = mag >> s;
        let r: BigUint = mag - (&q << s);
        let negative = self.m.sign() == Sign::Minus;
        let inc = match mode {
            Round::Nearest => {
                let half = BigUint::one() << (s - 1);
                match r.cmp(&half) {
                    Ordering::Less => false,
                    Ordering::Greater => true,
                    Ordering::Equal => q.is_odd(),
                }
            }
            Round::Floor => negative && !r.is_zero(),
            Round::Ceil => !negative && !r.is_zero(),
        };
        let q2 = if inc { q + 1u32 } else { q };
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        let rounded = Dyadic::new(BigInt::from_biguint(sign, q2), self.e + s as i64);
        let err_mag = if inc { (BigUint::one() << s) - r } else { r };
        let err = Dyadic::new(BigInt::from_biguint(Sign::Plus, err_mag), self.e);
        (rounded, err.up(ERR_PREC))
    }

    /// Upper bound at `prec` bits (assumes self >= 0).
    pub fn up(&self, prec: u32) -> Self {
        debug_assert!(!self.is_negative());
        self.round(prec, Round::Ceil).0
    }

    /// Lower bound at `prec` bits (assumes self >= 0).
    pub fn down(&self, prec: u32) -> Self {
        debug_assert!(!self.is_negative());
        self.round(prec, Round::Floor).0
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ta = self.mag_exp().unwrap();
        let tb = other.mag_exp().unwrap();
        if ta != tb {
            let mag_cmp = ta.cmp(&tb);
            return if sa > 0 { mag_cmp } else { mag_cmp.reverse() };
        }
        let d = self.e - other.e;
        if d >= 0 {
            (&self.m << d as u64).cmp(&other.m)
        } else {
            self.m.cmp(&(&other.m << (-d) as u64))
        }
    }

    pub fn max_val(a: &Self, b: &Self) -> Self {
        if a.cmp_value(b) == Ordering::Less { b.clone() } else { a.clone() }
    }

    pub fn min_val(a: &Self, b: &Self) -> Self {
        if a.cmp_value(b) == Ordering::Greater { b.clone() } else { a.clone() }
    }

    /// Exact sum. Callers keep exponent gaps bounded.
    pub fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.e.min(other.e);
        let ma = &self.m << (self.e - e) as u64;
        let mb = &other.m << (other.e - e) as u64;
        Dyadic::new(ma + mb, e)
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.m * &other.m, self.e + other.e)
    }

    /// Rounded sum with error bound; negligible operands are absorbed into
    /// the bound instead of forcing giant alignments.
    pub fn add_round(&self, other: &Self, prec: u32) -> (Self, Self) {
        if self.is_zero() {
            return other.round(prec, Round::Nearest);
        }
        if other.is_zero() {
            return self.round(prec, Round::Nearest);
        }
        let ta = self.mag_exp().unwrap();
        let tb = other.mag_exp().unwrap();
        let gap_cap = prec as i64 + 8;
        if ta - tb > gap_cap {
            let (v, e) = self.round(prec, Round::Nearest);
            let tail = Dyadic::power_of_two(tb);
            return (v, e.up_add(&tail));
        }
        if tb - ta > gap_cap {
            let (v, e) = other.round(prec, Round::Nearest);
            let tail = Dyadic::power_of_two(ta);
            return (v, e.up_add(&tail));
        }
        self.add_exact(other).round(prec, Round::Nearest)
    }

    pub fn mul_round(&self, other: &Self, prec: u32) -> (Self, Self) {
        self.mul_exact(other).round(prec, Round::Nearest)
    }

    /// Quotient rounded in `mode` at `prec` bits, plus an error bound.
    /// Directed modes give valid one-sided bounds.
    pub fn div_round(&self, other: &Self, prec: u32, mode: Round) -> (Self, Self) {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let bits_a = self.m.magnitude().bits();
        let bits_b = other.m.magnitude().bits();
        let sh = (prec as u64 + 2 + bits_b).saturating_sub(bits_a);
        let num = self.m.magnitude() << sh;
        let (q, r) = num.div_rem(other.m.magnitude());
        let negative = (self.m.sign() == Sign::Minus) != (other.m.sign() == Sign::Minus);
        let e = self.e - other.e - sh as i64;
        if r.is_zero() {
            let sign = if negative { Sign::Minus } else { Sign::Plus };
            return Dyadic::new(BigInt::from_biguint(sign, q), e).round(prec, mode);
        }
        // true magnitude lies strictly between q*2^e and (q+1)*2^e
        let inc = match mode {
            Round::Floor => negative,
            Round::Ceil => !negative,
            Round::Nearest => (&r << 1u8) >= *other.m.magnitude(),
        };
        let q2 = if inc { q + 1u32 } else { q };
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        let (v, e2) = Dyadic::new(BigInt::from_biguint(sign, q2), e).round(prec, mode);
        (v, e2.up_add(&Dyadic::power_of_two(e)))
    }

    pub fn from_rat(q: &Rat, prec: u32, mode: Round) -> (Self, Self) {
        Dyadic::from_bigint(q.numer().clone()).div_round(
            &Dyadic::from_bigint(q.denom().clone()),
            prec,
            mode,
        )
    }

    /// Upper-bound addition for nonnegative quantities.
    pub fn up_add(&self, other: &Self) -> Self {
        debug_assert!(!self.is_negative() && !other.is_negative());
        if self.is_zero() {
            return other.up(ERR_PREC);
        }
        if other.is_zero() {
            return self.up(ERR_PREC);
        }
        let ta = self.mag_exp().unwrap();
        let tb = other.mag_exp().unwrap();
        let gap_cap = ERR_PREC as i64 + 4;
        if ta - tb > gap_cap {
            return self
                .up(ERR_PREC)
                .add_exact(&Dyadic::power_of_two(tb))
                .up(ERR_PREC);
        }
        if tb - ta > gap_cap {
            return other
                .up(ERR_PREC)
                .add_exact(&Dyadic::power_of_two(ta))
                .up(ERR_PREC);
        }
        self.add_exact(other).up(ERR_PREC)
    }

    /// Upper-bound product for nonnegative quantities.
    pub fn up_mul(&self, other: &Self) -> Self {
        debug_assert!(!self.is_negative() && !other.is_negative());
        self.mul_exact(other).up(ERR_PREC)
    }

    /// Upper-bound quotient for nonnegative quantities, other > 0.
    pub fn up_div(&self, other: &Self) -> Self {
        debug_assert!(!self.is_negative() && other.signum() > 0);
        self.div_round(other, ERR_PREC, Round::Ceil).0
    }

    /// Upper bound for self^k, self >= 0.
    pub fn up_pow(&self, k: u64) -> Self {
        let mut acc = Dyadic::one();
        let mut base = self.up(ERR_PREC);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.up_mul(&base);
            }
            base = base.up_mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Directed square root of a nonnegative dyadic. Floor gives s with
    /// s^2 <= self, Ceil gives s with s^2 >= self.
    pub fn sqrt_round(&self, prec: u32, mode: Round) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        assert!(mode != Round::Nearest, "directed modes only");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let b = self.m.magnitude().bits() as i64;
        let want = 2 * prec as i64 + 4;
        // scale by 4^t so the operand is an integer with enough bits
        let t = ((want - b - self.e).max(-self.e).max(0) + 1) / 2 + 1;
        let n = self.m.magnitude() << ((self.e + 2 * t) as u64);
        let r = n.sqrt();
        match mode {
            Round::Floor => Dyadic::new(BigInt::from(r), -t).down(prec),
            _ => {
                let exact = &r * &r == n;
                let up = if exact { r } else { r + BigUint::one() };
                Dyadic::new(BigInt::from(up), -t).up(prec)
            }
        }
    }

    pub fn sqrt_lb(&self) -> Self {
        self.sqrt_round(ERR_PREC, Round::Floor)
    }

    pub fn sqrt_ub(&self) -> Self {
        self.sqrt_round(ERR_PREC, Round::Ceil)
    }

    /// Natural log of a positive dyadic: (value, error bound).
    pub fn ln(&self, prec: u32) -> (Self, Self) {
        assert!(self.signum() > 0, "ln of non-positive dyadic");
        let w = prec + 32;
        let bits = self.m.magnitude().bits();
        let g = self.e + bits as i64 - 1;
        // self = f * 2^g with f in [1,2)
        let f = Dyadic { m: self.m.clone(), e: -(bits as i64 - 1) };
        let (mut val, mut err) = atanh_series(&f, w);
        val = val.mul_pow2(1);
        err = err.up(ERR_PREC).mul_pow2(1).up(ERR_PREC);
        if g != 0 {
            let (ln2, ln2e) = ln2(w);
            let gd = Dyadic::from_i64(g);
            val = val.add_exact(&gd.mul_exact(&ln2));
            err = err.up_add(&gd.abs().up_mul(&ln2e));
        }
        let (v, e2) = val.round(prec, Round::Nearest);
        (v, err.up_add(&e2))
    }

    /// ln(n/d) for a positive rational.
    pub fn ln_rat(q: &Rat, prec: u32) -> (Self, Self) {
        assert!(q.numer().sign() == Sign::Plus, "ln of non-positive rational");
        let (ln_n, en) = Dyadic::from_bigint(q.numer().clone()).ln(prec);
        let (ln_d, ed) = Dyadic::from_bigint(q.denom().clone()).ln(prec);
        (ln_n.sub_exact(&ln_d), en.up_add(&ed))
    }

    /// Decimal string with `sig` significant digits, normalized scientific
    /// notation, round-half-even. Deterministic byte-for-byte.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let t = self.mag_exp().unwrap();
        // first guess for floor(log10 |v|), then correct by scaling
        let mut d10 = ((t - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let k = d10 - sig as i64 + 1; // |v| / 10^k should have sig digits
            let mut num = self.m.magnitude().clone();
            let mut den = BigUint::one();
            if self.e >= 0 {
                num <<= self.e as u64;
            } else {
                den <<= (-self.e) as u64;
            }
            if k >= 0 {
                den *= BigUint::from(10u32).pow(k as u32);
            } else {
                num *= BigUint::from(10u32).pow((-k) as u32);
            }
            let (q, r) = num.div_rem(&den);
            let twice_r = &r << 1u8;
            let q = match twice_r.cmp(&den) {
                Ordering::Less => q,
                Ordering::Greater => q + 1u32,
                Ordering::Equal => {
                    if q.is_odd() { q + 1u32 } else { q }
                }
            };
            let lo = BigUint::from(10u32).pow(sig as u32 - 1);
            let hi = BigUint::from(10u32).pow(sig as u32);
            if sig > 1 && q < lo {
                d10 -= 1;
                continue;
            }
            if q >= hi {
                d10 += 1;
                continue;
            }
            let digits = q.to_str_radix(10);
            let mut s = String::new();
            if neg {
                s.push('-');
            }
            s.push_str(&digits[..1]);
            if sig > 1 {
                s.push('.');
                s.push_str(&digits[1..]);
            }
            s.push('e');
            s.push_str(&d10.to_string());
            return s;
        }
    }

    /// Parse a decimal literal ("-12.34e-5", "7", "0.25"). Returns the
    /// value rounded to `prec` bits plus the rounding error bound.
    pub fn from_decimal(s: &str, prec: u32) -> Result<(Self, Self), String> {
        let q = parse_decimal_rat(s)?;
        Ok(Dyadic::from_rat(&q, prec, Round::Nearest))
    }
}

/// atanh((f-1)/(f+1)) for f in [1,2): u stays in [0, 1/3].
fn atanh_series(f: &Dyadic, w: u32) -> (Dyadic, Dyadic) {
    let one = Dyadic::one();
    let (u, ue) = f.sub_exact(&one).div_round(&f.add_exact(&one), w, Round::Nearest);
    series_from_u(&u, &ue, w)
}

/// ln 2 = 2*atanh(1/3).
fn ln2(w: u32) -> (Dyadic, Dyadic) {
    let (u, ue) = Dyadic::from_rat(&Rat::new(BigInt::one(), BigInt::from(3)), w, Round::Nearest);
    let (v, e) = series_from_u(&u, &ue, w);
    (v.mul_pow2(1), e.up(ERR_PREC).mul_pow2(1).up(ERR_PREC))
}

/// sum u^(2k+1)/(2k+1) for 0 <= u <= 1/3, as a real ball.
fn series_from_u(u: &Dyadic, ue: &Dyadic, w: u32) -> (Dyadic, Dyadic) {
    if u.is_zero() && ue.is_zero() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let u_ub = u.abs().up_add(ue);
    let (u2, u2r) = u.mul_round(u, w);
    let u2e = u_ub.up_mul(ue).mul_pow2(1).up_add(&ue.up_mul(ue)).up_add(&u2r);
    let u2_ub = u2.abs().up_add(&u2e);
    let mut term = u.clone();
    let mut term_e = ue.clone();
    let mut sum = u.clone();
    let mut sum_e = ue.clone();
    let target = Dyadic::power_of_two(-(w as i64));
    for k in 1..10_000u64 {
        let (t2, tr) = term.mul_round(&u2, w);
        term_e = term
            .abs()
            .up_add(&term_e)
            .up_mul(&u2e)
            .up_add(&term_e.up_mul(&u2_ub))
            .up_add(&tr);
        term = t2;
        let odd = Dyadic::from_i64(2 * k as i64 + 1);
        let (c, cr) = term.div_round(&odd, w, Round::Nearest);
        let ce = term_e.up_div(&odd).up_add(&cr);
        let (s2, sr) = sum.add_round(&c, w);
        sum = s2;
        sum_e = sum_e.up_add(&ce).up_add(&sr);
        let t_ub = term.abs().up_add(&term_e);
        if t_ub.cmp_value(&target) == Ordering::Less {
            sum_e = sum_e.up_add(&t_ub);
            break;
        }
    }
    (sum, sum_e)
}

pub fn parse_decimal_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = s[i + 1..]
                .parse()
                .map_err(|_| format!("bad exponent in {s:?}"))?;
            (&s[..i], exp)
        }
        None => (s, 0),
    };
    let (mant, neg) = match mant.strip_prefix('-') {
        Some(rest) => (rest, true),
        None => (mant.strip_prefix('+').unwrap_or(mant), false),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("bad number {s:?}"));
    }
    let digits: String = [int_part, frac_part].concat();
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad number {s:?}"));
    }
    let n: BigInt = digits.parse().map_err(|_| format!("bad number {s:?}"))?;
    let n = if neg { -n } else { n };
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let q = if shift >= 0 {
        Rat::from_integer(n * num_traits::pow::pow(ten, shift as usize))
    } else {
        Rat::new(n, num_traits::pow::pow(ten, (-shift) as usize))
    };
    Ok(q)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

/// Convenience: f64 approximation for diagnostics only, never for bounds.
impl Dyadic {
    pub fn to_f64_approx(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.m.magnitude().bits();
        let (top, shift) = if bits > 64 {
            let sh = bits - 64;
            ((self.m.magnitude() >> sh).to_u64().unwrap(), sh as i64)
        } else {
            (self.m.magnitude().to_u64().unwrap(), 0)
        };
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * top as f64 * 2f64.powi((self.e + shift).clamp(-1400, 1400) as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64) -> Dyadic {
        Dyadic::from_i64(v)
    }

    #[test]
    fn canonical_form() {
        let x = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(x, Dyadic::new(BigInt::from(3), 2));
        assert!(Dyadic::new(BigInt::zero(), 17).is_zero());
    }

    #[test]
    fn rounding_modes() {
        // 0b1011 = 11, round to 2 bits
        let x = d(11);
        let (n, e) = x.round(2, Round::Nearest);
        assert_eq!(n, d(12));
        assert_eq!(e, d(1));
        let (f, _) = x.round(2, Round::Floor);
        assert_eq!(f, d(8));
        let (c, _) = x.round(2, Round::Ceil);
        assert_eq!(c, d(12));
        let (fneg, _) = d(-11).round(2, Round::Floor);
        assert_eq!(fneg, d(-12));
        let (cneg, _) = d(-11).round(2, Round::Ceil);
        assert_eq!(cneg, d(-8));
    }

    #[test]
    fn ties_to_even() {
        let (a, _) = d(10).round(2, Round::Nearest); // 0b1010 -> tie -> 0b10|00
        assert_eq!(a, d(8));
        let (b, _) = d(14).round(2, Round::Nearest); // 0b1110 -> tie -> 0b100|00
        assert_eq!(b, d(16));
    }

    #[test]
    fn division_directed() {
        let (lo, _) = d(1).div_round(&d(3), 20, Round::Floor);
        let (hi, _) = d(1).div_round(&d(3), 20, Round::Ceil);
        assert!(lo.cmp_value(&hi) == Ordering::Less);
        let third = Rat::new(BigInt::one(), BigInt::from(3));
        assert!(lo.to_rat() < third && third < hi.to_rat());
        let gap = hi.sub_exact(&lo);
        assert!(gap.cmp_value(&Dyadic::power_of_two(-18)) == Ordering::Less);
    }

    #[test]
    fn exact_division_no_error() {
        let (q, e) = d(12).div_round(&d(3), 50, Round::Nearest);
        assert_eq!(q, d(4));
        assert!(e.is_zero());
    }

    #[test]
    fn sqrt_brackets_value() {
        let two = Dyadic::from_i64(2);
        let lo = two.sqrt_round(80, Round::Floor);
        let hi = two.sqrt_round(80, Round::Ceil);
        assert!(lo.cmp_value(&hi).is_le());
        assert!(lo.mul_exact(&lo).cmp_value(&two).is_le());
        assert!(hi.mul_exact(&hi).cmp_value(&two).is_ge());
        let gap = hi.sub_exact(&lo);
        assert!(gap.cmp_value(&Dyadic::power_of_two(-75)).is_le());
        // exact square stays exact in both directions
        let nine = Dyadic::from_i64(9);
        assert_eq!(nine.sqrt_round(40, Round::Floor), Dyadic::from_i64(3));
        assert_eq!(nine.sqrt_round(40, Round::Ceil), Dyadic::from_i64(3));
        assert_eq!(Dyadic::zero().sqrt_lb(), Dyadic::zero());
    }

    #[test]
    fn ln_two_value() {
        let (v, e) = d(2).ln(128);
        // ln 2 = 0.693147180559945309417232121458...
        let (lo, _) = Dyadic::from_decimal("0.6931471805599453094172", 128).unwrap();
        let diff = v.sub_exact(&lo).abs();
        assert!(diff.cmp_value(&Dyadic::power_of_two(-60)) == Ordering::Less);
        assert!(e.cmp_value(&Dyadic::power_of_two(-120)) == Ordering::Less);
    }

    #[test]
    fn ln_product_law() {
        let (l6, e6) = d(6).ln(96);
        let (l2, _) = d(2).ln(96);
        let (l3, _) = d(3).ln(96);
        let diff = l6.sub_exact(&l2.add_exact(&l3)).abs();
        assert!(diff.cmp_value(&e6.up_add(&Dyadic::power_of_two(-90))) == Ordering::Less);
    }

    #[test]
    fn decimal_roundtrip() {
        let x = Dyadic::new(BigInt::from(-7), -3); // -0.875
        assert_eq!(x.to_decimal(4), "-8.750e-1");
        assert_eq!(Dyadic::zero().to_decimal(6), "0");
        let (y, e) = Dyadic::from_decimal("-8.75e-1", 64).unwrap();
        assert_eq!(y, x);
        assert!(e.is_zero());
    }

    #[test]
    fn decimal_carry() {
        let x = Dyadic::new(BigInt::from(999), 0);
        assert_eq!(x.to_decimal(2), "1.0e3");
    }

    #[test]
    fn up_add_absorbs_small() {
        let big = Dyadic::one();
        let tiny = Dyadic::power_of_two(-4000);
        let s = big.up_add(&tiny);
        assert!(s.cmp_value(&big) == Ordering::Greater);
        assert!(s.sub_exact(&big).cmp_value(&Dyadic::power_of_two(-20)) == Ordering::Less);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Dyadic::from_decimal("abc", 32).is_err());
        assert!(Dyadic::from_decimal("1.2.3", 32).is_err());
        assert!(Dyadic::from_decimal("", 32).is_err());
    }
}
