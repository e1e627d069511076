//! Certified complex root enclosures. Floating-point Durand-Kerner
//! supplies guesses; an interval Newton step over ball arithmetic turns
//! each guess into a proof that its disk holds exactly one simple root.
//! The unique positive root of a sign-change polynomial is bracketed
//! separately by exact dyadic bisection, which never trusts floats.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::IPoly;
use crate::scalars::cerr::{CCtx, CErr};
use crate::scalars::{Dyadic, Scalar};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("polynomial has repeated roots")]
    NotSquarefree,
    #[error("root certification failed: {0}")]
    CertificationFailed(String),
    #[error("coefficients exceed certifiable float range")]
    CoefficientOverflow,
}

/// Bracket the unique positive real root of f to width <= 2^-bits.
/// Requires f(0) < 0 < f(B) at the Cauchy bound B with positive leading
/// coefficient — the shape every admissible characteristic polynomial
/// has. All evaluations are exact, so the bracket is rigorous.
pub fn unique_positive_root(f: &IPoly, bits: u32) -> (Dyadic, Dyadic) {
    assert!(f.lc().is_positive(), "leading coefficient must be positive");
    assert!(
        f.eval_int(&BigInt::zero()).is_negative(),
        "constant term must be negative"
    );
    // Cauchy: all roots have |z| < 1 + max|c_i| / lc <= 1 + max|c_i|
    let bound = BigInt::from(1) + f.max_coeff_abs();
    let mut lo = Dyadic::zero();
    let mut hi = Dyadic::from_bigint(bound);
    debug_assert!(f.eval_dyadic_exact(&hi).signum() > 0);
    loop {
        let width = hi.sub_exact(&lo);
        if width.cmp_value(&Dyadic::power_of_two(-(bits as i64))).is_le() {
            return (lo, hi);
        }
        let mid = lo.add_exact(&hi).mul_pow2(-1);
        match f.eval_dyadic_exact(&mid).signum() {
            0 => return (mid.clone(), mid),
            s if s < 0 => lo = mid,
            _ => hi = mid,
        }
    }
}

/// Certified disks, one per root, pairwise disjoint, each of radius
/// <= 2^-prec. Requires a squarefree polynomial of degree >= 1.
pub fn certified_roots(f: &IPoly, prec: u32) -> Result<Vec<CErr>, RootError> {
    let n = f.deg().filter(|&d| d >= 1).expect("degree >= 1 required");
    if !f.is_squarefree() {
        return Err(RootError::NotSquarefree);
    }
    if n == 1 {
        // exact rational root -c0/c1
        let ctx = CCtx::new(prec + 64);
        let root = crate::scalars::Rat::new(-f.coeff(0), f.coeff(1));
        return Ok(vec![CErr::from_rat(&root, &ctx)]);
    }
    let seeds = durand_kerner(f, n)?;
    let ctx = CCtx::new(prec + 64);
    let fd = f.derivative();
    let scale = seeds
        .iter()
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    let mut disks = Vec::with_capacity(n);
    for z in &seeds {
        let disk = certify_one(f, &fd, *z, scale, prec, &ctx).ok_or_else(|| {
            RootError::CertificationFailed(format!("no certified disk near {z}"))
        })?;
        disks.push(disk);
    }
    // pairwise disjoint disks, each holding exactly one root, count = deg:
    // every root of f is accounted for
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let dist = disks[i].center_dist_lb(&disks[j]);
            let rsum = disks[i].err.up_add(&disks[j].err);
            if dist.cmp_value(&rsum).is_le() {
                return Err(RootError::CertificationFailed(
                    "certified disks overlap".into(),
                ));
            }
        }
    }
    disks.sort_by(|a, b| a.re.cmp_value(&b.re).then(a.im.cmp_value(&b.im)));
    Ok(disks)
}

/// Enclosure (lo, hi) of the spectral radius max |root|; squarefree
/// reduction happens internally.
pub fn spectral_radius(f: &IPoly, prec: u32) -> Result<(Dyadic, Dyadic), RootError> {
    let sf = f.squarefree_part();
    let roots = certified_roots(&sf, prec)?;
    let mut lo = Dyadic::zero();
    let mut hi = Dyadic::zero();
    for r in &roots {
        lo = Dyadic::max_val(&lo, &r.abs_lb());
        hi = Dyadic::max_val(&hi, &r.abs_ub());
    }
    Ok((lo, hi))
}

fn durand_kerner(f: &IPoly, n: usize) -> Result<Vec<Complex64>, RootError> {
    let lc = f.lc();
    let coeffs: Option<Vec<f64>> = f
        .coeffs()
        .iter()
        .map(|c| {
            let q = crate::scalars::Rat::new(c.clone(), lc.clone());
            let v = q.numer().to_f64()? / q.denom().to_f64()?;
            v.is_finite().then_some(v)
        })
        .collect();
    let coeffs = coeffs.ok_or(RootError::CoefficientOverflow)?;
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // deterministic spiral seeds, no symmetry with the real axis
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 0.37 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Complex64::from_polar(bound * (0.3 + 0.5 * k as f64 / n as f64), theta)
        })
        .collect();
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= zs[k] - zs[j];
                }
            }
            if denom.norm() == 0.0 {
                // coincident iterates: nudge deterministically
                denom = Complex64::new(1e-12, 1e-12);
            }
            let step = eval(zs[k]) / denom;
            zs[k] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * bound {
            break;
        }
    }
    Ok(zs)
}

fn dyadic_from_f64(x: f64) -> Dyadic {
    // exact: f64 is dyadic
    let (m, e, s) = {
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        if exp == 0 {
            (frac, -1074, sign)
        } else {
            (frac | (1u64 << 52), exp - 1075, sign)
        }
    };
    Dyadic::new(BigInt::from(m as i64 * s), e)
}

fn certify_one(
    f: &IPoly,
    fd: &IPoly,
    z: Complex64,
    scale: f64,
    prec: u32,
    ctx: &CCtx,
) -> Option<CErr> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return None;
    }
    let center = CErr {
        re: dyadic_from_f64(z.re),
        im: dyadic_from_f64(z.im),
        err: Dyadic::zero(),
    };
    let mut radius = dyadic_from_f64((1e-10 * scale.max(1.0)).max(1e-280));
    for _attempt in 0..60 {
        let disk = CErr {
            re: center.re.clone(),
            im: center.im.clone(),
            err: radius.clone(),
        };
        if let Some(next) = newton_image(f, fd, &disk, ctx) {
            // next subset of interior(disk) proves a unique simple root;
            // iterate the contraction until the radius is small enough
            let mut cur = next;
            for _ in 0..80 {
                if cur.err.cmp_value(&Dyadic::power_of_two(-(prec as i64))).is_le() {
                    return Some(cur);
                }
                let tightened = newton_image(f, fd, &cur, ctx)?;
                if tightened.err.cmp_value(&cur.err).is_ge() {
                    // stalled: rounding floor reached
                    return Some(cur);
                }
                cur = tightened;
            }
            return Some(cur);
        }
        radius = radius.mul_pow2(2);
        if radius.cmp_value(&dyadic_from_f64(scale.max(1.0) * 0.25)).is_ge() {
            break;
        }
    }
    None
}

/// One interval Newton step: N = mid - f(mid)/f'(disk). Returns N when
/// N is contained in the open disk (the certification), else None.
fn newton_image(f: &IPoly, fd: &IPoly, disk: &CErr, ctx: &CCtx) -> Option<CErr> {
    let mid = CErr {
        re: disk.re.clone(),
        im: disk.im.clone(),
        err: Dyadic::zero(),
    };
    let fm = f.eval_scalar(&mid, ctx);
    let fpd = fd.eval_scalar(disk, ctx);
    let quot = fm.div(&fpd, ctx).ok()?;
    let next = mid.sub(&quot, ctx);
    let dist = next.center_dist_ub(disk).up_add(&next.err);
    if dist.cmp_value(&disk.err).is_lt() {
        Some(next)
    } else {
        None
    }
}
