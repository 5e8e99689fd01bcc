//! Finite windows onto two-sided sequences and the central subspace.
//!
//! A [`Window`] stores `v_lo, ..., v_hi`; every coordinate outside is zero.
//! The shift convention is `(σ v)_n = v_{n+1}`, so shifting by `k` moves the
//! window to `[lo − k, hi − k]`.

use alloc::vec::Vec;
use core::ops::{AddAssign, Mul, Sub};

use num_complex::Complex64;
// shadowed by std's inherent float methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::algebra::{IntPolynomial, Root};
use crate::{Error, Result};

/// Growth class the window is a representative of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Growth {
    /// Bounded sequence.
    Bounded,
    /// `|v_n| = O(|n| + 1)`
    Linear,
}

/// How `f(σ)` treats coordinates that need inputs outside the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Edge {
    /// Output only where every input lies inside the window.
    #[default]
    Strict,
    /// Treat the outside as zero and return the full support of the result.
    Lenient,
}

/// Element type of a window: integers (exact) or reals.
pub trait Scalar: Copy + PartialEq + Zero + AddAssign + Mul<Output = Self> + Sub<Output = Self> {
    fn from_i64(v: i64) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Window<T> {
    lo: i64,
    values: Vec<T>,
    growth: Growth,
}

impl<T: Scalar> Window<T> {
    pub fn new(lo: i64, values: Vec<T>, growth: Growth) -> Self {
        Window { lo, values, growth }
    }

    pub fn bounded(lo: i64, values: Vec<T>) -> Self {
        Window::new(lo, values, Growth::Bounded)
    }

    pub fn zeros(lo: i64, hi: i64) -> Self {
        let len = (hi - lo + 1).max(0) as usize;
        Window::bounded(lo, alloc::vec![T::zero(); len])
    }

    /// `δ_at` on the window `[at, at]`.
    pub fn impulse(at: i64) -> Self {
        Window::bounded(at, alloc::vec![T::from_i64(1)])
    }

    /// Window on `[lo, hi]` with `v_n = g(n)`.
    pub fn from_fn(lo: i64, hi: i64, g: impl FnMut(i64) -> T) -> Self {
        Window::bounded(lo, (lo..=hi).map(g).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last index; `lo − 1` for an empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    pub fn with_growth(mut self, growth: Growth) -> Self {
        self.growth = growth;
        self
    }

    /// `v_n`, zero outside the window.
    pub fn get(&self, n: i64) -> T {
        let i = n - self.lo;
        if i < 0 || i >= self.values.len() as i64 {
            T::zero()
        } else {
            self.values[i as usize]
        }
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo > hi || (self.lo <= lo && hi <= self.hi())
    }

    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(Error::WindowTooSmall { needed_lo: lo, needed_hi: hi })
        }
    }

    /// The same sequence viewed on `[lo, hi]` (zero-padded or cut).
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        Window { lo, values: (lo..=hi).map(|n| self.get(n)).collect(), growth: self.growth }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Window<f64> {
        Window { lo: self.lo, values: self.values.iter().map(|v| v.to_f64()).collect(), growth: self.growth }
    }

    /// Coordinatewise difference on the union of both windows.
    pub fn sub(&self, other: &Window<T>) -> Self {
        if self.is_empty() && other.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        Window {
            lo,
            values: (lo..=hi).map(|n| self.get(n) - other.get(n)).collect(),
            growth: self.growth,
        }
    }
}

/// `(shift(v, k))_n = v_{n+k}`
pub fn shift<T: Scalar>(v: &Window<T>, k: i64) -> Window<T> {
    Window { lo: v.lo - k, values: v.values.clone(), growth: v.growth }
}

/// `f(σ)v`, i.e. `result_n = Σ_k f_k v_{n+k}`.
///
/// Strict mode returns `[lo, hi − m]` and fails with
/// [`Error::EmptyResult`] when that is empty; lenient mode returns
/// `[lo − m, hi]` with the outside of `v` read as zero.
pub fn apply_poly<T: Scalar>(f: &IntPolynomial, v: &Window<T>, edge: Edge) -> Result<Window<T>> {
    let m = f.degree() as i64;
    let (lo, hi) = match edge {
        Edge::Strict => (v.lo(), v.hi() - m),
        Edge::Lenient => (v.lo() - m, v.hi()),
    };
    if hi < lo {
        return Err(Error::EmptyResult);
    }
    let coeffs: Vec<T> = f.coeffs().iter().map(|&c| T::from_i64(c)).collect();
    let values = (lo..=hi)
        .map(|n| {
            let mut acc = T::zero();
            for (k, &c) in coeffs.iter().enumerate() {
                acc += c * v.get(n + k as i64);
            }
            acc
        })
        .collect();
    Ok(Window { lo, values, growth: v.growth })
}

/// One term `c · ω^n` of a central vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralTerm {
    pub omega: Complex64,
    pub c: Complex64,
}

/// `n ↦ Σ_ω c_ω ω^n` over the roots of `f` on the unit circle.
///
/// Coefficients of conjugate roots are conjugate, so the sequence is real.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CentralVector {
    pub terms: Vec<CentralTerm>,
}

/// Lower and upper bounds on a supremum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupBracket {
    pub lower: f64,
    pub upper: f64,
}

pub const DEFAULT_HORIZON: usize = 4096;
const REAL_TOL: f64 = 1e-10;

/// `ω^n` through polar form, which keeps `|ω^n| = |ω|^n` for large `|n|`.
pub fn root_power(omega: Complex64, n: i64) -> Complex64 {
    let (r, theta) = omega.to_polar();
    let modulus = if r == 1.0 { 1.0 } else { r.powf(n as f64) };
    Complex64::from_polar(modulus, theta * n as f64)
}

impl CentralVector {
    /// Zero vector with one term per given root.
    pub fn zero<'a>(roots: impl IntoIterator<Item = &'a Root>) -> Self {
        Self::from_roots(roots, |_| Complex64::zero())
    }

    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Root>, mut coeff: impl FnMut(&Root) -> Complex64) -> Self {
        CentralVector {
            terms: roots.into_iter().map(|r| CentralTerm { omega: r.value, c: coeff(r) }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_ω c_ω ω^n`, with the imaginary residual reported separately.
    pub fn eval_complex(&self, n: i64) -> Complex64 {
        self.terms.iter().map(|t| t.c * root_power(t.omega, n)).sum()
    }

    /// `Σ_ω |c_ω|`, an upper bound for the sup-norm of the sequence.
    pub fn l1(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).sum()
    }

    /// Termwise sum; both vectors must list the same roots in the same order.
    pub fn add(&self, other: &CentralVector) -> CentralVector {
        debug_assert_eq!(self.len(), other.len());
        CentralVector {
            terms: self
                .terms
                .iter()
                .zip(&other.terms)
                .map(|(a, b)| CentralTerm { omega: a.omega, c: a.c + b.c })
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> CentralVector {
        CentralVector { terms: self.terms.iter().map(|t| CentralTerm { omega: t.omega, c: t.c * s }).collect() }
    }

    /// Largest `|c_ω − conj(c_ω̄)|` over the terms.
    pub fn conjugate_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                self.terms
                    .iter()
                    .filter(|s| (s.omega - t.omega.conj()).norm() < 1e-9)
                    .map(|s| (s.c - t.c.conj()).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

/// Real value `Σ_ω c_ω ω^n`.
pub fn central_eval(c: &CentralVector, n: i64) -> Result<f64> {
    let z = c.eval_complex(n);
    let tol = REAL_TOL * c.l1().max(1.0);
    if z.im.abs() > tol {
        return Err(Error::NotReal { residual: z.im.abs() });
    }
    Ok(z.re)
}

/// `c_ω ↦ ω^k c_ω`, the shift acting on coefficients.
pub fn shift_central(c: &CentralVector, k: i64) -> CentralVector {
    CentralVector {
        terms: c
            .terms
            .iter()
            .map(|t| CentralTerm { omega: t.omega, c: t.c * root_power(t.omega, k) })
            .collect(),
    }
}

/// Bracket for `sup_n |Σ c_ω ω^n|`: the maximum over `n ∈ [0, horizon)`
/// from below and `Σ |c_ω|` from above.
pub fn central_sup_norm(c: &CentralVector, horizon: usize) -> SupBracket {
    let upper = c.l1();
    let mut powers: Vec<Complex64> = c.terms.iter().map(|t| t.c).collect();
    let mut lower = 0.0f64;
    for n in 0..horizon.max(1) {
        if n > 0 && n % 256 == 0 {
            // resynchronise to keep rounding from accumulating
            for (p, t) in powers.iter_mut().zip(&c.terms) {
                *p = t.c * root_power(t.omega, n as i64);
            }
        }
        let s: Complex64 = powers.iter().sum();
        lower = lower.max(s.re.abs());
        for (p, t) in powers.iter_mut().zip(&c.terms) {
            *p *= t.omega;
        }
    }
    SupBracket { lower: lower.min(upper), upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{find_roots, RootClass};
    use alloc::vec;
    use proptest::prelude::*;

    fn salem4() -> IntPolynomial {
        IntPolynomial::new(vec![1, -1, -1, -1, 1]).unwrap()
    }

    #[test]
    fn shift_moves_impulse_left() {
        let d0 = Window::<i64>::impulse(0);
        let s = shift(&d0, 1);
        assert_eq!(s.lo(), -1);
        assert_eq!(s.get(-1), 1);
        assert_eq!(s.get(0), 0);
        assert_eq!(shift(&d0, 0), d0);
        assert_eq!(shift(&shift(&d0, 2), -2), d0);
    }

    #[test]
    fn apply_linear_poly_to_impulse() {
        let f = IntPolynomial::new(vec![-2, 1]).unwrap();
        let out = apply_poly(&f, &Window::<i64>::impulse(0), Edge::Lenient).unwrap();
        assert_eq!((out.lo(), out.hi()), (-1, 0));
        assert_eq!(out.values(), &[1, -2]);
        assert_eq!(apply_poly(&f, &Window::<i64>::impulse(0), Edge::Strict), Err(Error::EmptyResult));
        let zero = Window::<i64>::zeros(-5, 5);
        assert!(apply_poly(&f, &zero, Edge::Strict).unwrap().values().iter().all(|&x| x == 0));
    }

    #[test]
    fn golden_kills_root_powers() {
        let f = IntPolynomial::new(vec![-1, -1, 1]).unwrap();
        let r = find_roots(&f, 40).unwrap();
        for root in &r.roots {
            let w = Window::from_fn(-20, 20, |n| root.value.powi(n as i32).re);
            let out = apply_poly(&f, &w, Edge::Strict).unwrap();
            let scale = w.sup_norm();
            assert!(out.sup_norm() < 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn cosine_from_a_conjugate_pair() {
        let theta = 0.7f64;
        let w = Complex64::from_polar(1.0, theta);
        let c = CentralVector {
            terms: vec![
                CentralTerm { omega: w, c: Complex64::new(0.5, 0.0) },
                CentralTerm { omega: w.conj(), c: Complex64::new(0.5, 0.0) },
            ],
        };
        for n in -30..30 {
            assert!((central_eval(&c, n).unwrap() - (n as f64 * theta).cos()).abs() < 1e-12);
            let s = shift_central(&c, 1);
            assert!((central_eval(&s, n).unwrap() - central_eval(&c, n + 1).unwrap()).abs() < 1e-12);
        }
        let b = central_sup_norm(&c, 100_000);
        assert_eq!(b.upper, 1.0);
        assert!(b.lower > 1.0 - 1e-6);
        let zero = CentralVector::default();
        assert_eq!(central_sup_norm(&zero, 10), SupBracket { lower: 0.0, upper: 0.0 });
    }

    #[test]
    fn unbalanced_vector_is_not_real() {
        let w = Complex64::from_polar(1.0, 0.7);
        let c = CentralVector { terms: vec![CentralTerm { omega: w, c: Complex64::new(1.0, 0.0) }] };
        assert!(matches!(central_eval(&c, 1), Err(Error::NotReal { .. })));
    }

    fn random_central(seed: [f64; 2]) -> CentralVector {
        let f = salem4();
        let r = find_roots(&f, 60).unwrap();
        let c = Complex64::new(seed[0], seed[1]);
        CentralVector::from_roots(r.of_class(RootClass::Zero), |root| if root.value.im > 0.0 { c } else { c.conj() })
    }

    proptest! {
        #[test]
        fn apply_commutes_with_shift(
            lo in -20i64..20,
            vals in proptest::collection::vec(-9i64..=9, 5..30),
            k in -10i64..10,
        ) {
            let f = salem4();
            let v = Window::bounded(lo, vals);
            let a = apply_poly(&f, &shift(&v, k), Edge::Strict).unwrap();
            let b = shift(&apply_poly(&f, &v, Edge::Strict).unwrap(), k);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn central_vectors_lie_in_kernel(re in -5.0f64..5.0, im in -5.0f64..5.0, n in -1000i64..1000) {
            let c = random_central([re, im]);
            let f = salem4();
            let s: f64 = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, &fk)| fk as f64 * central_eval(&c, n + k as i64).unwrap())
                .sum();
            prop_assert!(s.abs() < 1e-9 * c.l1().max(1.0));
        }

        #[test]
        fn shift_central_composes(re in -5.0f64..5.0, im in -5.0f64..5.0, a in -500i64..500, b in -500i64..500) {
            let c = random_central([re, im]);
            let lhs = shift_central(&shift_central(&c, a), b);
            let rhs = shift_central(&c, a + b);
            for (x, y) in lhs.terms.iter().zip(&rhs.terms) {
                prop_assert!((x.c - y.c).norm() < 1e-12 * c.l1().max(1.0));
            }
            for (x, y) in lhs.terms.iter().zip(&c.terms) {
                prop_assert!((x.c.norm() - y.c.norm()).abs() < 1e-12 * c.l1().max(1.0));
            }
        }

        #[test]
        fn sup_bracket_is_ordered_and_tight(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let c = random_central([re, im]);
            let short = central_sup_norm(&c, 64);
            let long = central_sup_norm(&c, DEFAULT_HORIZON);
            prop_assert!(short.lower <= long.lower && long.lower <= long.upper);
            if long.upper > 1e-6 {
                prop_assert!(long.upper / long.lower < 3.0);
            }
        }
    }
}
