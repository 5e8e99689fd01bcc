//! The companion-matrix automorphism of `T^m`.
//!
//! Coordinates live on the dyadic grid `2^-64 Z / Z`, stored as `u64`.
//! `M_f` is an integer matrix, so it acts on that grid exactly through
//! wrapping arithmetic and orbits carry no rounding error at all.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::IntPolynomial;
use crate::{Error, Result};

const SCALE: f64 = 18446744073709551616.0; // 2^64

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<u64>,
}

impl TorusPoint {
    pub fn zero(m: usize) -> Self {
        TorusPoint { coords: alloc::vec![0; m] }
    }

    /// Reduces each coordinate into `[0, 1)` and rounds it to the nearest
    /// multiple of `2^-64`; a coordinate that lands on `1.0` becomes `0.0`.
    pub fn from_f64(coords: &[f64]) -> Self {
        let coords = coords
            .iter()
            .map(|&x| {
                let frac = x - num_traits::Float::floor(x);
                let scaled = num_traits::Float::round(frac * SCALE);
                if scaled >= SCALE {
                    0
                } else {
                    scaled as u64
                }
            })
            .collect();
        TorusPoint { coords }
    }

    pub fn from_raw(coords: Vec<u64>) -> Self {
        TorusPoint { coords }
    }

    pub fn raw(&self) -> &[u64] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|&c| c as f64 / SCALE).collect()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

fn check(f: &IntPolynomial, x: &TorusPoint) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if x.dim() != f.degree() {
        return Err(Error::PreconditionViolated("torus point dimension must equal the degree"));
    }
    Ok(())
}

fn forward(f: &[i64], window: &[u64]) -> u64 {
    let m = window.len();
    let mut acc = 0u64;
    for k in 0..m {
        acc = acc.wrapping_sub((f[k] as u64).wrapping_mul(window[k]));
    }
    acc
}

fn backward(f: &[i64], window: &[u64]) -> u64 {
    // f_0 = ±1 is its own inverse
    let m = window.len();
    let mut acc = 0u64;
    for k in 1..=m {
        acc = acc.wrapping_add((f[k] as u64).wrapping_mul(window[k - 1]));
    }
    acc.wrapping_mul(f[0] as u64).wrapping_neg()
}

/// `M_f^n x mod 1`, exact on the `2^-64` grid.
pub fn companion_apply(f: &IntPolynomial, x: &TorusPoint, n: i64) -> Result<TorusPoint> {
    check(f, x)?;
    if n < 0 && !f.is_unit() {
        return Err(Error::NotInvertible);
    }
    let c = f.coeffs();
    let mut w: VecDeque<u64> = x.coords.iter().copied().collect();
    if n >= 0 {
        for _ in 0..n {
            let next = forward(c, w.make_contiguous());
            w.pop_front();
            w.push_back(next);
        }
    } else {
        for _ in 0..n.unsigned_abs() {
            let prev = backward(c, w.make_contiguous());
            w.pop_back();
            w.push_front(prev);
        }
    }
    Ok(TorusPoint { coords: w.into() })
}

/// First coordinates `(M_f^n x)_0` for `n = lo..=hi`, as raw grid values.
///
/// These satisfy `Σ_k f_k w_{n+k} ≡ 0 (mod 1)`; indices below zero need
/// `|f_0| = 1`.
pub fn torus_orbit(f: &IntPolynomial, x: &TorusPoint, lo: i64, hi: i64) -> Result<Vec<u64>> {
    check(f, x)?;
    if lo < 0 && !f.is_unit() {
        return Err(Error::NotInvertible);
    }
    let m = f.degree() as i64;
    let c = f.coeffs();
    // seq holds w_{start}, w_{start+1}, ...
    let mut seq: VecDeque<u64> = x.coords.iter().copied().collect();
    let mut start = 0i64;
    while start + (seq.len() as i64) <= hi {
        let len = seq.len();
        let tail: Vec<u64> = seq.range(len - m as usize..).copied().collect();
        seq.push_back(forward(c, &tail));
    }
    while start > lo {
        let head: Vec<u64> = seq.range(..m as usize).copied().collect();
        seq.push_front(backward(c, &head));
        start -= 1;
    }
    let from = (lo - start) as usize;
    let to = (hi - start) as usize;
    Ok(seq.range(from..=to).copied().collect())
}
