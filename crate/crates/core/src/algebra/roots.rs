//! Root finding: Aberth–Ehrlich in double precision for starting values,
//! then Newton refinement in [`crate::fixed`] arithmetic.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
// shadowed by std's inherent float methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use super::IntPolynomial;
use crate::fixed::{bits_for_digits, CFixed, Fixed};
use crate::{Error, Result};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;
/// Half-width of the band around `|ω| = 1` classified as on the circle.
pub const TOL_CIRCLE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootClass {
    /// `|ω| < 1`
    Minus,
    /// `|ω| = 1`
    Zero,
    /// `|ω| > 1`
    Plus,
}

impl RootClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RootClass::Minus => "minus",
            RootClass::Zero => "zero",
            RootClass::Plus => "plus",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    pub value: Complex64,
    pub precise: CFixed,
    pub cls: RootClass,
    /// Partial-fraction coefficient `f_m / f'(ω)`.
    pub b: Complex64,
}

#[derive(Clone, Debug)]
pub struct RootData {
    pub roots: Vec<Root>,
    pub digits: u32,
}

impl RootData {
    pub fn of_class(&self, cls: RootClass) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(move |r| r.cls == cls)
    }

    pub fn count(&self, cls: RootClass) -> usize {
        self.of_class(cls).count()
    }

    /// `max |ω|` over roots inside the circle, 0 if there are none.
    pub fn inner_radius(&self) -> f64 {
        self.of_class(RootClass::Minus)
            .map(|r| r.value.norm())
            .fold(0.0, f64::max)
    }

    /// `min |ω|` over roots outside the circle, infinity if there are none.
    pub fn outer_radius(&self) -> f64 {
        self.of_class(RootClass::Plus)
            .map(|r| r.value.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest real root greater than one.
    pub fn dominant_real(&self) -> Option<&Root> {
        self.roots
            .iter()
            .filter(|r| r.value.im == 0.0 && r.value.re > 1.0)
            .max_by(|a, b| a.value.re.partial_cmp(&b.value.re).unwrap_or(Ordering::Equal))
    }

    /// `|1/f(z) − (1/f_m) Σ b_ω/(z − ω)|`
    pub fn partial_fraction_residual(&self, f: &IntPolynomial, z: Complex64) -> f64 {
        let fm = f.leading() as f64;
        let sum: Complex64 = self.roots.iter().map(|r| r.b / (z - r.value)).sum();
        (f.eval(z).inv() - sum / fm).norm()
    }
}

fn aberth(f: &IntPolynomial) -> Vec<Complex64> {
    let m = f.degree();
    let c = f.coeffs();
    let lead = c[m] as f64;
    // Fujiwara-style bound on the root moduli
    let radius = (0..m)
        .map(|k| (c[k] as f64 / lead).abs().powf(1.0 / (m - k) as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let lower = (c[0] as f64).abs() / ((c[0] as f64).abs() + c.iter().map(|x| (*x as f64).abs()).sum::<f64>());
    let r0 = (radius * lower).sqrt().max(0.5);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let t = core::f64::consts::TAU * k as f64 / m as f64 + 0.4;
            Complex64::from_polar(r0, t)
        })
        .collect();
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for i in 0..m {
            let p = f.eval(z[i]);
            let dp = f.eval_derivative(z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn newton(f: &IntPolynomial, start: Complex64, bits: u32, digits: u32, real: bool) -> Result<CFixed> {
    let mut z = CFixed::from_c64(start, bits);
    if real {
        z.im = Fixed::zero(bits);
    }
    let target = bits - 48;
    for _ in 0..100 {
        let (p, dp) = f.eval_fixed(&z);
        let Some(mut step) = p.div(&dp) else {
            // f'(z) vanishes numerically or f(z) is exactly zero
            if p.below_pow2(bits) {
                return Ok(z);
            }
            return Err(Error::NonSquarefree);
        };
        if real {
            step.im = Fixed::zero(bits);
        }
        z = z.sub(&step);
        if step.below_pow2(target) {
            return Ok(z);
        }
    }
    Err(Error::PrecisionExhausted { digits })
}

fn modulus_class(z: &CFixed) -> RootClass {
    let bits = z.bits();
    let n2 = z.norm_sqr();
    let lo = Fixed::from_f64((1.0 - TOL_CIRCLE) * (1.0 - TOL_CIRCLE), bits);
    let hi = Fixed::from_f64((1.0 + TOL_CIRCLE) * (1.0 + TOL_CIRCLE), bits);
    if n2 < lo {
        RootClass::Minus
    } else if n2 > hi {
        RootClass::Plus
    } else {
        RootClass::Zero
    }
}

/// Computes and classifies all roots of `f` at `digits` decimal digits.
pub fn find_roots(f: &IntPolynomial, digits: u32) -> Result<RootData> {
    if !f.is_squarefree() {
        return Err(Error::NonSquarefree);
    }
    let digits = digits.max(30);
    let bits = bits_for_digits(digits);
    let half = bits / 2;
    let starts = aberth(f);

    let mut precise = Vec::with_capacity(starts.len());
    for z in &starts {
        // near-real starting values are refined on the real line first
        let near_real = z.im.abs() < 1e-7 * z.norm().max(1.0);
        let refined = if near_real {
            newton(f, *z, bits, digits, true).or_else(|_| newton(f, *z, bits, digits, false))?
        } else {
            newton(f, *z, bits, digits, false)?
        };
        let refined = if !refined.im.is_zero_value() && refined.im.below_pow2(half) {
            newton(f, refined.to_c64(), bits, digits, true)?
        } else {
            refined
        };
        precise.push(refined);
    }

    // conjugate pairs are made exact
    let n = precise.len();
    let mut paired = alloc::vec![false; n];
    for i in 0..n {
        if paired[i] || precise[i].im.is_zero_value() || precise[i].im.is_negative() {
            continue;
        }
        let target = precise[i].conj();
        let j = (0..n)
            .filter(|&j| !paired[j] && j != i && precise[j].im.is_negative())
            .min_by(|&a, &b| {
                let da = precise[a].sub(&target).norm_sqr();
                let db = precise[b].sub(&target).norm_sqr();
                da.cmp(&db)
            })
            .ok_or(Error::PrecisionExhausted { digits })?;
        if !precise[j].sub(&target).below_pow2(half) {
            return Err(Error::PrecisionExhausted { digits });
        }
        precise[j] = target;
        paired[i] = true;
        paired[j] = true;
    }
    if precise.iter().enumerate().any(|(i, z)| !z.im.is_zero_value() && !paired[i]) {
        return Err(Error::PrecisionExhausted { digits });
    }

    // distinct roots
    for i in 0..n {
        for j in i + 1..n {
            if precise[i].sub(&precise[j]).below_pow2(half) {
                return Err(Error::PrecisionExhausted { digits });
            }
        }
    }

    let tol_exp = (digits as u64 * 33220 / 20000) as u32;
    let mut roots = Vec::with_capacity(n);
    for z in precise {
        let (p, dp) = f.eval_fixed(&z);
        if !p.below_pow2(tol_exp) {
            return Err(Error::PrecisionExhausted { digits });
        }
        if dp.below_pow2(tol_exp) {
            return Err(Error::NonSquarefree);
        }
        let cls = modulus_class(&z);
        roots.push(Root { value: z.to_c64(), precise: z, cls, b: Complex64::new(0.0, 0.0) });
    }

    if f.is_reciprocal() {
        pair_reciprocal(&roots, half, digits)?;
        for r in roots.iter_mut().filter(|r| r.cls == RootClass::Zero) {
            r.value /= r.value.norm();
        }
    }

    roots.sort_by(|a, b| {
        b.value
            .norm()
            .partial_cmp(&a.value.norm())
            .unwrap_or(Ordering::Equal)
            .then(b.value.im.partial_cmp(&a.value.im).unwrap_or(Ordering::Equal))
            .then(b.value.re.partial_cmp(&a.value.re).unwrap_or(Ordering::Equal))
    });
    let mut data = RootData { roots, digits };
    partial_fractions(f, &mut data)?;
    Ok(data)
}

fn pair_reciprocal(roots: &[Root], half: u32, digits: u32) -> Result<()> {
    for r in roots.iter().filter(|r| r.cls != RootClass::Zero) {
        let bits = r.precise.bits();
        let one = CFixed::from_int(1, bits);
        let ok = roots
            .iter()
            .any(|s| s.cls != r.cls && s.cls != RootClass::Zero && r.precise.mul(&s.precise).sub(&one).below_pow2(half));
        if !ok {
            return Err(Error::PrecisionExhausted { digits });
        }
    }
    Ok(())
}

/// Fills `b_ω = f_m / f'(ω)` for every root. Conjugate roots receive
/// conjugate coefficients.
pub fn partial_fractions(f: &IntPolynomial, r: &mut RootData) -> Result<()> {
    let lead = BigInt::from(f.leading());
    let n = r.roots.len();
    for i in 0..n {
        let z = r.roots[i].precise.clone();
        if z.im.is_negative() {
            continue;
        }
        let (_, dp) = f.eval_fixed(&z);
        let num = CFixed::from_int(1, z.bits()).mul_int(&lead);
        let b = num.div(&dp).ok_or(Error::NonSquarefree)?.to_c64();
        r.roots[i].b = b;
        if !z.im.is_zero_value() {
            let conj = z.conj();
            if let Some(j) = (0..n).find(|&j| r.roots[j].precise == conj) {
                r.roots[j].b = b.conj();
            }
        }
    }
    Ok(())
}
