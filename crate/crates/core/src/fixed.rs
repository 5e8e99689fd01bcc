//! Binary fixed-point reals and complex numbers over arbitrary-size integers.
//!
//! A [`Fixed`] stores `mant / 2^bits`. All operands of a binary operation
//! share the same `bits`; products and quotients truncate toward negative
//! infinity, so each operation carries an absolute error below `2^-bits`.

use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
// shadowed by std's inherent float methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{Signed, ToPrimitive, Zero};

/// Number of bits needed to hold `digits` decimal digits, plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    // log2(10) < 3.3220
    (digits as u64 * 33220 / 10000) as u32 + 64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    mant: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed { mant: BigInt::zero(), bits }
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        Fixed { mant: BigInt::from(v) << bits as usize, bits }
    }

    /// The value `mant / 2^bits`.
    pub fn from_raw(mant: BigInt, bits: u32) -> Self {
        Fixed { mant, bits }
    }

    pub fn from_bigint(v: &BigInt, bits: u32) -> Self {
        Fixed { mant: v << bits as usize, bits }
    }

    /// Exact when `x` is a multiple of `2^-bits`, otherwise rounded down.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "non-finite value");
        if x == 0.0 {
            return Fixed::zero(bits);
        }
        let raw = x.to_bits();
        let exp = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let mut mant = BigInt::from(m);
        if x < 0.0 {
            mant = -mant;
        }
        let shift = e + bits as i64;
        let mant = if shift >= 0 {
            mant << shift as usize
        } else {
            mant >> (-shift) as usize
        };
        Fixed { mant, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    /// Re-expresses the value with a different number of fractional bits.
    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits) as usize,
            Ordering::Less => &self.mant >> (self.bits - bits) as usize,
        };
        Fixed { mant, bits }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        // keep 64 significant bits, then scale
        let len = self.mant.bits() as i64;
        let drop = (len - 64).max(0);
        let top = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        let scale = drop - self.bits as i64;
        top * pow2(scale)
    }

    /// `floor(self)` as an integer.
    pub fn floor(&self) -> BigInt {
        self.mant.div_floor(&(BigInt::from(1) << self.bits as usize))
    }

    pub fn abs(&self) -> Self {
        Fixed { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn is_zero_value(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Fixed { mant: &self.mant * k, bits: self.bits }
    }

    pub fn div(&self, rhs: &Fixed) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        let num = &self.mant << self.bits as usize;
        Fixed { mant: num.div_floor(&rhs.mant), bits: self.bits }
    }

    /// `|self| < 2^-k`
    pub fn below_pow2(&self, k: u32) -> bool {
        if k >= self.bits {
            return self.mant.is_zero();
        }
        self.mant.abs() < (BigInt::from(1) << (self.bits - k) as usize)
    }
}

fn pow2(e: i64) -> f64 {
    // 2^e without overflow in intermediate steps
    let mut r = 1.0f64;
    let mut e = e;
    while e > 1000 {
        r *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        r *= 2f64.powi(-1000);
        e += 1000;
    }
    r * 2f64.powi(e as i32)
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.bits, other.bits);
        self.mant.cmp(&other.mant)
    }
}

impl<'a> Add<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, rhs.bits);
        Fixed { mant: &self.mant + &rhs.mant, bits: self.bits }
    }
}

impl<'a> Sub<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, rhs.bits);
        Fixed { mant: &self.mant - &rhs.mant, bits: self.bits }
    }
}

impl<'a> Mul<&'a Fixed> for &'a Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, rhs.bits);
        Fixed { mant: (&self.mant * &rhs.mant) >> self.bits as usize, bits: self.bits }
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed { mant: -self.mant, bits: self.bits }
    }
}

/// Complex number with [`Fixed`] parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl CFixed {
    pub fn zero(bits: u32) -> Self {
        CFixed { re: Fixed::zero(bits), im: Fixed::zero(bits) }
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        CFixed { re: Fixed::from_int(v, bits), im: Fixed::zero(bits) }
    }

    pub fn from_c64(z: Complex64, bits: u32) -> Self {
        CFixed { re: Fixed::from_f64(z.re, bits), im: Fixed::from_f64(z.im, bits) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn bits(&self) -> u32 {
        self.re.bits
    }

    pub fn add(&self, rhs: &CFixed) -> CFixed {
        CFixed { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    pub fn sub(&self, rhs: &CFixed) -> CFixed {
        CFixed { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    pub fn mul(&self, rhs: &CFixed) -> CFixed {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        CFixed { re, im }
    }

    pub fn add_int(&self, k: &BigInt) -> CFixed {
        let bits = self.bits();
        CFixed { re: &self.re + &Fixed::from_bigint(k, bits), im: self.im.clone() }
    }

    pub fn mul_int(&self, k: &BigInt) -> CFixed {
        CFixed { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn norm_sqr(&self) -> Fixed {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Returns `None` when `rhs` is zero at this precision.
    pub fn div(&self, rhs: &CFixed) -> Option<CFixed> {
        let den = rhs.norm_sqr();
        if den.mant.is_zero() {
            return None;
        }
        let re = &(&self.re * &rhs.re) + &(&self.im * &rhs.im);
        let im = &(&self.im * &rhs.re) - &(&self.re * &rhs.im);
        Some(CFixed { re: re.div(&den), im: im.div(&den) })
    }

    pub fn conj(&self) -> CFixed {
        CFixed { re: self.re.clone(), im: -self.im.clone() }
    }

    /// max(|re|, |im|) < 2^-k
    pub fn below_pow2(&self, k: u32) -> bool {
        self.re.below_pow2(k) && self.im.below_pow2(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip_is_exact_for_dyadics() {
        for &x in &[0.0, 1.0, -2.5, 0.1, 1e-30, -123456.789, 3.0f64.sqrt()] {
            let f = Fixed::from_f64(x, 256);
            assert_eq!(f.to_f64(), x);
        }
    }

    #[test]
    fn floor_rounds_down_for_negatives() {
        assert_eq!(Fixed::from_f64(-0.5, 64).floor(), BigInt::from(-1));
        assert_eq!(Fixed::from_f64(2.75, 64).floor(), BigInt::from(2));
        assert_eq!(Fixed::from_int(-3, 64).floor(), BigInt::from(-3));
    }

    #[test]
    fn arithmetic_matches_f64() {
        let bits = 200;
        let a = Fixed::from_f64(1.75, bits);
        let b = Fixed::from_f64(-0.3125, bits);
        assert_eq!((&a * &b).to_f64(), 1.75 * -0.3125);
        assert_eq!(a.div(&b).to_f64(), 1.75 / -0.3125);
        assert_eq!((&a - &b).to_f64(), 1.75 + 0.3125);
    }

    #[test]
    fn complex_division_inverts_multiplication() {
        let bits = 300;
        let a = CFixed::from_c64(Complex64::new(0.5, -1.25), bits);
        let b = CFixed::from_c64(Complex64::new(-2.0, 0.75), bits);
        let q = a.mul(&b).div(&b).unwrap();
        assert!(q.sub(&a).below_pow2(280));
    }
}
