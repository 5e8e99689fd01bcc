use alloc::vec::Vec;

use super::cyclotomic::{cyclotomic_factors, euler_phi};
use super::roots::{RootClass, RootData};
use super::{IntPolynomial, Reciprocity};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PolyClass {
    /// No root on the unit circle.
    pub hyperbolic: bool,
    /// Some root is a root of unity (exact test).
    pub cyclotomic: bool,
    /// One root outside the circle, all others inside.
    pub pisot: bool,
    /// Reciprocal, even degree, one real root `> 1`, its reciprocal, and
    /// `m − 2 ≥ 1` roots on the circle; never cyclotomic.
    pub salem: bool,
    /// `f_i = f_{m−i}` for all `i`.
    pub reciprocal: bool,
}

/// Classifies `f` from its roots. The cyclotomic flag is decided by exact
/// division; the others by the root classes.
///
/// A root in the circle band of a polynomial that is neither reciprocal nor
/// divisible by a cyclotomic polynomial cannot be placed reliably and gives
/// [`Error::Inconclusive`].
pub fn classify(f: &IntPolynomial, r: &RootData) -> Result<PolyClass> {
    let m = f.degree();
    let reciprocal = f.reciprocity() == Some(Reciprocity::Symmetric);
    let cyclotomic = !cyclotomic_factors(f).is_empty();
    let plus = r.count(RootClass::Plus);
    let zero = r.count(RootClass::Zero);
    let minus = r.count(RootClass::Minus);
    debug_assert_eq!(plus + zero + minus, m);

    if zero > 0 && !reciprocal && !cyclotomic {
        return Err(Error::Inconclusive);
    }

    let pisot = plus == 1 && zero == 0 && minus == m - 1;
    let dominant_real = r
        .of_class(RootClass::Plus)
        .any(|root| root.value.im == 0.0 && root.value.re > 1.0);
    let salem = reciprocal
        && !cyclotomic
        && m % 2 == 0
        && plus == 1
        && minus == 1
        && zero == m - 2
        && zero >= 1
        && dominant_real;
    Ok(PolyClass { hyperbolic: zero == 0, cyclotomic, pisot, salem, reciprocal })
}

/// Cheap evidence that `f` factors over `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducibilityWarning {
    /// `f(p/q) = 0`
    RationalRoot { p: i64, q: i64 },
    /// `Φ_n` is a proper factor of `f`.
    CyclotomicFactor(u64),
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as i64);
            if d * d != n {
                out.push((n / d) as i64);
            }
        }
        d += 1;
    }
    out
}

/// Rational-root and cyclotomic-factor screen. Irreducibility is never
/// proved; an empty result only means no factor of these kinds was found.
/// Rational roots are searched only when `|f_0|, f_m ≤ 10^8`.
pub fn reducibility_warnings(f: &IntPolynomial) -> Vec<ReducibilityWarning> {
    let mut out = Vec::new();
    let m = f.degree();
    if m > 1 && f.constant().abs() <= 100_000_000 && f.leading() <= 100_000_000 {
        for p in divisors(f.constant()) {
            for q in divisors(f.leading()) {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for p in [p, -p] {
                    // q^m f(p/q) = Σ f_k p^k q^(m−k), exactly in i128 when it fits
                    let val = f
                        .coeffs()
                        .iter()
                        .enumerate()
                        .try_fold(0i128, |acc, (k, &c)| {
                            let pk = (p as i128).checked_pow(k as u32)?;
                            let qk = (q as i128).checked_pow((m - k) as u32)?;
                            acc.checked_add((c as i128).checked_mul(pk)?.checked_mul(qk)?)
                        });
                    if val == Some(0) {
                        out.push(ReducibilityWarning::RationalRoot { p, q });
                    }
                }
            }
        }
    }
    for n in cyclotomic_factors(f) {
        if euler_phi(n) < m as u64 {
            out.push(ReducibilityWarning::CyclotomicFactor(n));
        }
    }
    out
}
