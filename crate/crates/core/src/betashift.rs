//! Beta-transformations, the quasi-greedy expansion `e*` of one, and Parry
//! admissibility.
//!
//! When `β` is a root of a monic integer polynomial the expansion of one is
//! computed exactly in `Z[β]`: every remainder is an integer vector of
//! coefficients of `1, β, ..., β^(m−1)`, only the floor of its value is
//! decided numerically (with precision raised until the decision is
//! certain), and a repeated remainder proves eventual periodicity.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
// shadowed by std's inherent float methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{IntPolynomial, RootData};
use crate::fixed::Fixed;
use crate::seqspace::Window;
use crate::{Error, Result};

/// Prefix length computed up front when `e*` is not known to be periodic.
pub const DEFAULT_PREFIX: usize = 4096;
/// Remainders examined in `Z[β]` before giving up on a period.
const EXACT_STATE_CAP: usize = 20_000;
/// Precision ceiling for a single floor decision.
const MAX_BITS: u32 = 1 << 16;

#[derive(Clone, Debug)]
enum Source {
    /// Real root of a monic polynomial, remainders kept in `Z[β]`.
    Exact { f: IntPolynomial, state: Vec<BigInt>, seen: BTreeMap<Vec<BigInt>, usize> },
    /// Real root of a non-monic polynomial, digits from fixed-point arithmetic.
    Root { f: IntPolynomial },
    /// Exploratory: the double `β` taken as an exact dyadic number.
    Float,
}

#[derive(Clone, Debug)]
pub struct BetaSystem {
    beta: f64,
    digit_max: i64,
    source: Source,
    /// Greedy digits of one computed so far (before any quasi-greedy fix-up).
    greedy: Vec<i64>,
    /// `(preperiod, period)` of `e*` once known.
    period: Option<(usize, usize)>,
    /// Quasi-greedy digits; with a period this holds exactly `pre + per` digits.
    estar: Vec<i64>,
}

/// `β` to `bits` fractional bits by Newton's method from a double.
fn refine_real_root(f: &IntPolynomial, approx: f64, bits: u32) -> Fixed {
    let work = bits + 32;
    let mut x = Fixed::from_f64(approx, work);
    for _ in 0..200 {
        let mut p = Fixed::zero(work);
        let mut dp = Fixed::zero(work);
        for &c in f.coeffs().iter().rev() {
            dp = &(&dp * &x) + &p;
            p = &(&p * &x) + &Fixed::from_int(c, work);
        }
        let step = p.div(&dp);
        x = &x - &step;
        if step.below_pow2(work - 8) {
            break;
        }
    }
    x.with_bits(bits)
}

fn eval_in(f_coeffs: &[BigInt], beta: &Fixed) -> Fixed {
    let bits = beta.bits();
    let mut acc = Fixed::zero(bits);
    for c in f_coeffs.iter().rev() {
        acc = &(&acc * beta) + &Fixed::from_bigint(c, bits);
    }
    acc
}

impl BetaSystem {
    /// `β` is the largest real root of `f` greater than one.
    pub fn from_poly(f: &IntPolynomial, roots: &RootData) -> Result<Self> {
        let beta = roots.dominant_real().ok_or(Error::NoBetaRoot)?.value.re;
        let source = if f.is_monic() {
            let mut state = alloc::vec![BigInt::zero(); f.degree()];
            state[0] = BigInt::one();
            Source::Exact { f: f.clone(), state, seen: BTreeMap::new() }
        } else {
            Source::Root { f: f.clone() }
        };
        let mut bs = BetaSystem::empty(beta, source);
        bs.extend(DEFAULT_PREFIX.min(512));
        Ok(bs)
    }

    /// Exploratory system for a decimal `β > 1`. Digits are exact for the
    /// double nearest to `β`, not for `β` itself.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta > 1.0) || !beta.is_finite() {
            return Err(Error::PreconditionViolated("beta must be a finite number > 1"));
        }
        let mut bs = BetaSystem::empty(beta, Source::Float);
        bs.extend(DEFAULT_PREFIX);
        Ok(bs)
    }

    fn empty(beta: f64, source: Source) -> Self {
        BetaSystem {
            beta,
            digit_max: (beta - 1.0).ceil() as i64,
            source,
            greedy: Vec::new(),
            period: None,
            estar: Vec::new(),
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `⌈β − 1⌉`
    pub fn digit_max(&self) -> i64 {
        self.digit_max
    }

    /// `(preperiod, period)` of `e*`, when proved.
    pub fn period_info(&self) -> Option<(usize, usize)> {
        self.period
    }

    /// Digits come from exact arithmetic in `Z[β]`.
    pub fn is_exact(&self) -> bool {
        matches!(self.source, Source::Exact { .. })
    }

    /// `β` as a fixed-point number with `bits` fractional bits.
    pub fn beta_fixed(&self, bits: u32) -> Fixed {
        match &self.source {
            Source::Exact { f, .. } | Source::Root { f } => refine_real_root(f, self.beta, bits),
            Source::Float => Fixed::from_f64(self.beta, bits),
        }
    }

    /// Number of digits of `e*` available without extension; unbounded once
    /// the period is known.
    pub fn known_len(&self) -> usize {
        if self.period.is_some() {
            usize::MAX
        } else {
            self.estar.len()
        }
    }

    /// `e*_k` for `k ≥ 1`.
    pub fn estar_digit(&self, k: usize) -> Result<i64> {
        debug_assert!(k >= 1);
        if let Some((pre, per)) = self.period {
            let i = if k <= pre { k - 1 } else { pre + (k - 1 - pre) % per };
            return Ok(self.estar[i]);
        }
        self.estar.get(k - 1).copied().ok_or(Error::EstarExhausted { needed: k })
    }

    /// First `n` digits of `e*`, extending the cache as needed.
    pub fn estar_prefix(&mut self, n: usize) -> Vec<i64> {
        self.extend(n);
        (1..=n).map(|k| self.estar_digit(k).unwrap_or(0)).collect()
    }

    /// Makes at least `n` digits of `e*` available.
    pub fn extend(&mut self, n: usize) {
        if self.period.is_some() || self.estar.len() >= n {
            return;
        }
        match &self.source {
            Source::Exact { .. } => self.extend_exact(n),
            _ => self.extend_approx(n),
        }
    }

    fn finish_finite(&mut self) {
        // greedy d_1..d_p with d_p > 0 gives quasi-greedy (d_1..d_{p−1}(d_p − 1))^∞
        let mut word = self.greedy.clone();
        if let Some(last) = word.last_mut() {
            *last -= 1;
        }
        self.period = Some((0, word.len()));
        self.estar = word;
    }

    fn extend_exact(&mut self, n: usize) {
        let Source::Exact { f, state, seen } = &mut self.source else { unreachable!() };
        let f = f.clone();
        let mut state = core::mem::take(state);
        // remainders seen so far, keyed to the number of digits emitted before them
        let mut seen = core::mem::take(seen);
        let m = f.degree();
        let fc: Vec<BigInt> = f.to_bigint();
        let mut bits = 128u32;
        let mut beta_fx = refine_real_root(&f, self.beta, bits);
        let target = n.max(EXACT_STATE_CAP.min(n.saturating_mul(4)));
        while self.greedy.len() < target {
            if let Some(&first) = seen.get(&state) {
                self.estar = self.greedy.clone();
                self.period = Some((first, self.greedy.len() - first));
                break;
            }
            seen.insert(state.clone(), self.greedy.len());
            // x = β · state, reduced with β^m = −Σ_{k<m} f_k β^k
            let top = state[m - 1].clone();
            let mut x = alloc::vec![BigInt::zero(); m];
            for k in 0..m {
                if k > 0 {
                    x[k] = state[k - 1].clone();
                }
                x[k] -= &top * &fc[k];
            }
            let digit = if x[1..].iter().all(Zero::is_zero) {
                x[0].clone()
            } else {
                // floor of the value, certified against the evaluation error
                loop {
                    let val = eval_in(&x, &beta_fx);
                    let d = val.floor();
                    let frac = &val - &Fixed::from_bigint(&d, bits);
                    let size = x.iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
                    let margin = bits.saturating_sub(size + m as u32 + 16);
                    let one = Fixed::from_int(1, bits);
                    let certain = margin > 32 && !frac.below_pow2(margin) && !(&one - &frac).below_pow2(margin);
                    if certain || bits >= MAX_BITS {
                        break d;
                    }
                    bits *= 2;
                    beta_fx = refine_real_root(&f, self.beta, bits);
                }
            };
            x[0] -= &digit;
            self.greedy.push(digit.to_i64().expect("digit fits in i64"));
            state = x;
            if state.iter().all(Zero::is_zero) {
                self.finish_finite();
                break;
            }
        }
        if self.period.is_none() {
            self.estar = self.greedy.clone();
        }
        self.source = Source::Exact { f, state, seen };
    }

    fn extend_approx(&mut self, n: usize) {
        let log2b = self.beta.log2();
        let bits = 192 + (n as f64 * log2b * 1.05) as u32;
        let beta = self.beta_fixed(bits);
        let mut r = Fixed::from_int(1, bits);
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let x = &beta * &r;
            let d = x.floor();
            r = &x - &Fixed::from_bigint(&d, bits);
            digits.push(d.to_i64().unwrap_or(0));
            if r.is_zero_value() {
                self.greedy = digits;
                self.finish_finite();
                return;
            }
        }
        self.greedy = digits.clone();
        self.estar = digits;
    }
}

/// First `n` greedy digits of `x ∈ [0, 1)`:
/// `Σ d_k β^−k ≤ x < Σ d_k β^−k + β^−n`.
pub fn beta_expand(bs: &BetaSystem, x: f64, n: usize) -> Vec<i64> {
    let bits = 256 + (n as f64 * bs.beta.log2() * 1.05) as u32;
    let beta = bs.beta_fixed(bits);
    let mut r = Fixed::from_f64(x, bits);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let y = &beta * &r;
        let d = y.floor();
        r = &y - &Fixed::from_bigint(&d, bits);
        out.push(d.to_i64().unwrap_or(0).clamp(0, bs.digit_max));
    }
    out
}

fn check_digits(bs: &BetaSystem, v: &Window<i64>) -> Result<()> {
    for (i, &d) in v.values().iter().enumerate() {
        if d < 0 || d > bs.digit_max {
            return Err(Error::DigitOutOfRange { index: v.lo() + i as i64, digit: d });
        }
    }
    Ok(())
}

/// Parry admissibility of the zero-extended sequence: every suffix
/// `(v_s, v_{s+1}, ...)` is `⪯ e*`. One-sided mode checks only suffixes
/// starting at indices `s ≥ 1`.
///
/// Runs in linear time by tracking the longest suffix read so far that is
/// a prefix of `e*`: reading a digit below the next digit of `e*` frees every
/// pending suffix at once, since `σ^k e* ⪯ e*`.
///
/// Zero extension never creates a violation (the tail of `e*` is not all
/// zero), so the verdict is the same whether edge suffixes are read
/// zero-padded or skipped.
pub fn is_admissible(bs: &BetaSystem, v: &Window<i64>, two_sided: bool) -> Result<bool> {
    check_digits(bs, v)?;
    let start = if two_sided { v.lo() } else { v.lo().max(1) };
    let mut level = 0usize;
    for n in start..=v.hi() {
        let a = v.get(n);
        let e = bs.estar_digit(level + 1)?;
        match a.cmp(&e) {
            Ordering::Greater => return Ok(false),
            Ordering::Equal => level += 1,
            Ordering::Less => level = 0,
        }
    }
    Ok(true)
}

/// Same as [`is_admissible`], extending `e*` first when needed.
pub fn is_admissible_mut(bs: &mut BetaSystem, v: &Window<i64>, two_sided: bool) -> Result<bool> {
    bs.extend(v.len() + 1);
    is_admissible(bs, v, two_sided)
}

/// Lexicographic comparison of an admissible suffix with `e*`, for callers
/// that need the order itself.
pub fn compare_with_estar(bs: &BetaSystem, digits: &[i64]) -> Result<Ordering> {
    for (i, &d) in digits.iter().enumerate() {
        let e = bs.estar_digit(i + 1)?;
        if d != e {
            return Ok(d.cmp(&e));
        }
    }
    // equal prefix followed by zeros, while e* never ends in zeros
    Ok(Ordering::Less)
}

/// `η(v) = Σ v_n β^−n` together with the bound
/// `digit_max · β^−hi / (1 − β^−1)` on any continuation past the window.
pub fn eta_eval(bs: &BetaSystem, v: &Window<i64>) -> (f64, f64) {
    let b = bs.beta;
    let value = v
        .values()
        .iter()
        .enumerate()
        .map(|(i, &d)| d as f64 * b.powf(-((v.lo() + i as i64) as f64)))
        .sum();
    let tail = bs.digit_max as f64 * b.powf(-(v.hi() as f64)) / (1.0 - 1.0 / b);
    (value, tail)
}

/// `v′_n = v_n` for `n ≤ 0` and `w_n` for `n > 0`; needs `w⁺ ≺ v⁺`.
pub fn splice(bs: &BetaSystem, v: &Window<i64>, w: &Window<i64>) -> Result<Window<i64>> {
    let hi = v.hi().max(w.hi()).max(1);
    let mut order = Ordering::Equal;
    for n in 1..=hi {
        match w.get(n).cmp(&v.get(n)) {
            Ordering::Equal => continue,
            o => {
                order = o;
                break;
            }
        }
    }
    if order != Ordering::Less {
        return Err(Error::PreconditionViolated("future of w must be strictly below future of v"));
    }
    let lo = v.lo().min(w.lo()).min(0);
    let out = Window::from_fn(lo, hi, |n| if n <= 0 { v.get(n) } else { w.get(n) });
    if !is_admissible(bs, &out, true)? {
        return Err(Error::PreconditionViolated("spliced sequence is not admissible"));
    }
    Ok(out)
}

/// Eventual period of `e*`: the proved one when known, otherwise the
/// smallest `q` (then smallest `p`) with `e*_{k+q} = e*_k` for
/// `p < k ≤ n_max − q`, where the periodic part repeats at least twice and
/// covers at least half of the first `n_max` digits.
/// `None` means nothing was found, not that `e*` is aperiodic.
pub fn sofic_probe(bs: &mut BetaSystem, n_max: usize) -> Option<(usize, usize)> {
    if let Some(p) = bs.period {
        return Some(p);
    }
    bs.extend(n_max);
    if let Some(p) = bs.period {
        return Some(p);
    }
    let e = &bs.estar[..n_max.min(bs.estar.len())];
    let n = e.len();
    for q in 1..=n / 2 {
        // last position breaking the q-periodicity
        let mut p = 0;
        for k in (0..n - q).rev() {
            if e[k] != e[k + q] {
                p = k + 1;
                break;
            }
        }
        if n - p >= 2 * q && 2 * (n - p) >= n {
            return Some((p, q));
        }
    }
    None
}

#[cfg(test)]
mod tests;
