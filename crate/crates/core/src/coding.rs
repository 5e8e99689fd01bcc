//! One-sided homoclinic points, the coding map `ξ*`, the cocycle `d(n, v)`
//! and the torus encoding.
//!
//! With `a_ω = b_ω / f_m` the three sequences are
//!
//! ```text
//! w+_n =  Σ_{|ω|<1} a_ω ω^(n−1)            (n ≥ 1)
//!      = −Σ_{|ω|≥1} a_ω ω^(n−1)            (n ≤ 0)
//! w−_n =  Σ_{|ω|≤1} a_ω ω^(n−1)            (n ≥ 1)
//!      = −Σ_{|ω|>1} a_ω ω^(n−1)            (n ≤ 0)
//! w0_n =  Σ_{|ω|=1} a_ω ω^(n−1)            (all n)
//! ```
//!
//! so that `f(σ)w± = δ_0` and `w+ + w0 = w−`.

use alloc::vec::Vec;

use num_complex::Complex64;
// shadowed by std's inherent float methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::algebra::{cyclotomic, torus_orbit, IntPolynomial, RootClass, RootData, TorusPoint};
use crate::seqspace::{apply_poly, root_power, CentralTerm, CentralVector, Edge, Window};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
struct Term {
    omega: Complex64,
    a: Complex64,
}

impl Term {
    fn at(&self, n: i64) -> Complex64 {
        self.a * root_power(self.omega, n - 1)
    }
}

#[derive(Clone, Debug)]
pub struct Homoclinic {
    f: IntPolynomial,
    roots: RootData,
    minus: Vec<Term>,
    zero: Vec<Term>,
    plus: Vec<Term>,
    wdelta0: CentralVector,
}

fn sum(terms: &[Term], n: i64) -> f64 {
    terms.iter().map(|t| t.at(n)).sum::<Complex64>().re
}

/// Builds the homoclinic data of a noncyclotomic `f`.
pub fn homoclinic(f: &IntPolynomial, roots: &RootData) -> Result<Homoclinic> {
    if cyclotomic::has_cyclotomic_factor(f) {
        return Err(Error::CyclotomicInput);
    }
    let fm = f.leading() as f64;
    let terms = |cls| -> Vec<Term> {
        roots.of_class(cls).map(|r| Term { omega: r.value, a: r.b / fm }).collect()
    };
    let zero = terms(RootClass::Zero);
    let wdelta0 = CentralVector {
        terms: zero.iter().map(|t| CentralTerm { omega: t.omega, c: t.a / t.omega }).collect(),
    };
    Ok(Homoclinic {
        f: f.clone(),
        roots: roots.clone(),
        minus: terms(RootClass::Minus),
        zero,
        plus: terms(RootClass::Plus),
        wdelta0,
    })
}

impl Homoclinic {
    pub fn poly(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn roots(&self) -> &RootData {
        &self.roots
    }

    pub fn wdelta_plus(&self, n: i64) -> f64 {
        if n >= 1 {
            sum(&self.minus, n)
        } else {
            -(sum(&self.zero, n) + sum(&self.plus, n))
        }
    }

    pub fn wdelta_minus(&self, n: i64) -> f64 {
        if n >= 1 {
            sum(&self.minus, n) + sum(&self.zero, n)
        } else {
            -sum(&self.plus, n)
        }
    }

    /// `w0` as a central vector: `c_ω = a_ω / ω`.
    pub fn wdelta0(&self) -> &CentralVector {
        &self.wdelta0
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.zero.is_empty()
    }

    /// `max |ω|` over roots inside the circle.
    pub fn inner_radius(&self) -> f64 {
        self.minus.iter().map(|t| t.omega.norm()).fold(0.0, f64::max)
    }

    /// `min |ω|` over roots outside the circle.
    pub fn outer_radius(&self) -> f64 {
        self.plus.iter().map(|t| t.omega.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Bound `C` with `|w+_n| ≤ C·λ^(n−1)` for `n ≥ 1`, `λ` the inner radius.
    pub fn decay_constant(&self) -> f64 {
        self.minus.iter().map(|t| t.a.norm()).sum()
    }

    /// Σ_{j ≤ hi} |w−_j| restricted to `j ≤ 0` terms, and Σ_{j ≥ lo} |w+_j| for
    /// `j ≥ 1`: geometric bounds used for truncation.
    fn minus_tail(&self, hi: i64) -> f64 {
        // Σ_{j ≤ hi} |ω|^(j−1) for |ω| > 1, hi ≤ 0
        self.plus
            .iter()
            .map(|t| {
                let r = t.omega.norm();
                t.a.norm() * r.powf((hi - 1) as f64) / (1.0 - 1.0 / r)
            })
            .sum()
    }

    fn plus_tail(&self, lo: i64) -> f64 {
        // Σ_{j ≥ lo} |ω|^(j−1) for |ω| < 1, lo ≥ 1
        self.minus
            .iter()
            .map(|t| {
                let r = t.omega.norm();
                t.a.norm() * r.powf((lo - 1) as f64) / (1.0 - r)
            })
            .sum()
    }
}

/// Values of `ξ*(v)` with a certified bound on what was left out.
#[derive(Clone, Debug, PartialEq)]
pub struct XiWindow {
    pub w: Window<f64>,
    pub tail_bound: f64,
}

fn table(lo: i64, hi: i64, g: impl Fn(i64) -> f64) -> Vec<f64> {
    (lo..=hi).map(g).collect()
}

/// `ξ*(v)_k = Σ_{n≥0} v_n w−_{k−n} + Σ_{n<0} v_n w+_{k−n}` on `[out_lo, out_hi]`
/// for `v` zero outside its window (no tail).
pub fn xi_bar_star_on(h: &Homoclinic, v: &Window<i64>, out_lo: i64, out_hi: i64) -> Window<f64> {
    if v.is_empty() || out_hi < out_lo {
        return Window::zeros(out_lo, out_hi);
    }
    let (jlo, jhi) = (out_lo - v.hi(), out_hi - v.lo());
    let wm = table(jlo, jhi, |j| h.wdelta_minus(j));
    let wp = table(jlo, jhi, |j| h.wdelta_plus(j));
    Window::from_fn(out_lo, out_hi, |k| {
        let mut acc = 0.0;
        for (i, &vn) in v.values().iter().enumerate() {
            if vn == 0 {
                continue;
            }
            let n = v.lo() + i as i64;
            let j = (k - n - jlo) as usize;
            acc += vn as f64 * if n >= 0 { wm[j] } else { wp[j] };
        }
        acc
    })
}

/// `ξ*(v)` for finitely supported `v`, on `[lo − m, hi + m]`.
pub fn xi_bar_star(h: &Homoclinic, v: &Window<i64>) -> XiWindow {
    let m = h.f.degree() as i64;
    XiWindow { w: xi_bar_star_on(h, v, v.lo() - m, v.hi() + m), tail_bound: 0.0 }
}

/// `ξ*` of a bounded sequence known only on the window of `v`, with
/// `|v_n| ≤ sup_bound` outside. The result on `[out_lo, out_hi]` is within
/// `tail_bound` of the true value in every coordinate.
///
/// The tail is geometric only when the unknown past uses `w+` and the
/// unknown future uses `w−`, i.e. `v.lo() ≤ 0 ≤ v.hi() + 1`, and the output
/// lies inside the window; otherwise the bound is infinite.
pub fn xi_bar_star_view(h: &Homoclinic, v: &Window<i64>, sup_bound: f64, out_lo: i64, out_hi: i64) -> XiWindow {
    let w = xi_bar_star_on(h, v, out_lo, out_hi);
    let ok = v.lo() <= 0 && v.hi() >= -1 && v.lo() <= out_lo && out_hi <= v.hi();
    let tail_bound = if sup_bound == 0.0 {
        0.0
    } else if !ok {
        f64::INFINITY
    } else {
        // unknown n > hi contribute w−_{k−n}, k − n ≤ out_hi − hi − 1;
        // unknown n < lo contribute w+_{k−n}, k − n ≥ out_lo − lo + 1
        sup_bound * (h.minus_tail(out_hi - v.hi() - 1) + h.plus_tail(out_lo - v.lo() + 1))
    };
    XiWindow { w, tail_bound }
}

/// Smallest margin `t ≥ 0` such that the view on `[lo + t, hi − t]` has a
/// tail bound below `tol` for inputs bounded by `sup_bound`.
pub fn truncation_margin(h: &Homoclinic, sup_bound: f64, tol: f64) -> i64 {
    let mut t = 0i64;
    while sup_bound * (h.minus_tail(-t - 1) + h.plus_tail(t + 1)) >= tol {
        t += 1;
        if t > 1_000_000 {
            break;
        }
    }
    t
}

/// `d(n, v)` in coefficient form.
///
/// ```text
/// d(n, v) =  Σ_{j=0}^{n−1} v_j σ^(n−j) w0       (n > 0)
///         = −Σ_{j=1}^{|n|} v_{−j} σ^(n+j) w0    (n < 0)
/// ```
pub fn cocycle_d(h: &Homoclinic, n: i64, v: &Window<i64>) -> Result<CentralVector> {
    if n > 0 {
        v.require(0, n - 1)?;
    } else if n < 0 {
        v.require(n, -1)?;
    }
    let terms = h
        .wdelta0
        .terms
        .iter()
        .map(|t| {
            let mut s = Complex64::zero();
            if n > 0 {
                for j in 0..n {
                    s = (s + v.get(j) as f64) * t.omega;
                }
            } else if n < 0 {
                let inv = t.omega.inv();
                for j in 1..=-n {
                    s = s * inv + v.get(-j) as f64;
                }
                s = -s;
            }
            CentralTerm { omega: t.omega, c: t.c * s }
        })
        .collect();
    Ok(CentralVector { terms })
}

/// `(w_n)` for `n ∈ [lo, hi]`: first coordinates of the orbit `M_f^n x`,
/// lifted to `[0, 1)`.
pub fn torus_lift(f: &IntPolynomial, x: &TorusPoint, lo: i64, hi: i64) -> Result<Window<f64>> {
    let raw = torus_orbit(f, x, lo, hi)?;
    Ok(Window::bounded(lo, raw.iter().map(|&r| r as f64 / 18446744073709551616.0).collect()))
}

/// `v = f(σ)w` on `[lo, hi]` for the `[0, 1)`-lift `w` of the orbit of `x`.
///
/// The orbit is exact on the `2^-64` grid, so `v_n` is computed as an exact
/// integer; a nonzero fractional part signals a broken invariant.
pub fn encode_torus(f: &IntPolynomial, x: &TorusPoint, lo: i64, hi: i64) -> Result<Window<i64>> {
    let m = f.degree() as i64;
    let raw = torus_orbit(f, x, lo, hi + m)?;
    let c = f.coeffs();
    let mut values = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for i in 0..=(hi - lo) {
        let total: i128 = (0..=m as usize).map(|k| c[k] as i128 * raw[i as usize + k] as i128).sum();
        let frac = total & ((1i128 << 64) - 1);
        if frac != 0 {
            return Err(Error::NonIntegerResidual { residual: frac as f64 / 18446744073709551616.0 });
        }
        values.push((total >> 64) as i64);
    }
    Ok(Window::bounded(lo, values))
}

/// `sup_{n∈[lo,hi]} |f(σ)(ξ*(v) − w)_n|` for `v = encode_torus(x)` and `w`
/// the orbit lift; near zero means `ξ*(v) − w` lies in `ker f(σ)`.
pub fn pseudocover_residual(h: &Homoclinic, x: &TorusPoint, lo: i64, hi: i64) -> Result<f64> {
    let m = h.f.degree() as i64;
    let v = encode_torus(&h.f, x, lo, hi)?;
    let w = torus_lift(&h.f, x, lo, hi + m)?;
    let xi = xi_bar_star_on(h, &v, lo, hi + m);
    let diff = xi.sub(&w);
    Ok(apply_poly(&h.f, &diff, Edge::Strict)?.sup_norm())
}

/// One row of the tightness profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DboundRow {
    pub bound: f64,
    pub k: i64,
    pub fraction: f64,
}

/// `Σ_ω |c_ω|` of `d(k, v)` for `k = 0..=k_max`, built incrementally via
/// `d(k+1) = σ d(k) + v_k w0`.
pub fn cocycle_norms_forward(h: &Homoclinic, v: &Window<i64>, k_max: i64) -> Vec<f64> {
    let mut c: Vec<Complex64> = alloc::vec![Complex64::zero(); h.wdelta0.len()];
    let mut out = Vec::with_capacity(k_max as usize + 1);
    out.push(0.0);
    for k in 0..k_max {
        let vk = v.get(k) as f64;
        for (ci, t) in c.iter_mut().zip(&h.wdelta0.terms) {
            *ci = (*ci + t.c * vk) * t.omega;
        }
        out.push(c.iter().map(|z| z.norm()).sum());
    }
    out
}

/// Same for `d(−k, v)`, `k = 0..=k_max`, via `d(−k−1) = σ^{-1} d(−k) − v_{−k−1} w0`.
pub fn cocycle_norms_backward(h: &Homoclinic, v: &Window<i64>, k_max: i64) -> Vec<f64> {
    let mut c: Vec<Complex64> = alloc::vec![Complex64::zero(); h.wdelta0.len()];
    let mut out = Vec::with_capacity(k_max as usize + 1);
    out.push(0.0);
    for k in 0..k_max {
        let vk = v.get(-k - 1) as f64;
        for (ci, t) in c.iter_mut().zip(&h.wdelta0.terms) {
            *ci = *ci * t.omega.inv() - t.c * vk;
        }
        out.push(c.iter().map(|z| z.norm()).sum());
    }
    out
}

/// For each bound `K` and `k ∈ [−k_max, k_max]`, the fraction of samples
/// whose `‖d(k, v)‖` upper bracket is at most `K`. Reports a profile only.
pub fn weak_dbound_diagnostic(
    h: &Homoclinic,
    samples: &[Window<i64>],
    bounds: &[f64],
    k_max: i64,
) -> Result<Vec<DboundRow>> {
    let mut norms = Vec::with_capacity(samples.len());
    for v in samples {
        v.require(-k_max, k_max - 1)?;
        norms.push((cocycle_norms_backward(h, v, k_max), cocycle_norms_forward(h, v, k_max)));
    }
    let total = samples.len().max(1) as f64;
    let mut rows = Vec::with_capacity(bounds.len() * (2 * k_max as usize + 1));
    for &bound in bounds {
        for k in -k_max..=k_max {
            let hits = norms
                .iter()
                .filter(|(back, fwd)| {
                    let x = if k >= 0 { fwd[k as usize] } else { back[(-k) as usize] };
                    x <= bound
                })
                .count();
            let fraction = if samples.is_empty() { 1.0 } else { hits as f64 / total };
            rows.push(DboundRow { bound, k, fraction });
        }
    }
    Ok(rows)
}

/// `v_n = ⌈w_n⌉` for the central sequence `w` on `[lo, hi]`. Then
/// `f(σ)v = f(σ)(v − w)` has sup-norm below `‖f‖₁` while `v` itself can be
/// as large as the coefficients of `w`.
pub fn ceil_central(c: &CentralVector, lo: i64, hi: i64) -> Window<i64> {
    Window::from_fn(lo, hi, |n| c.eval_complex(n).re.ceil() as i64)
}
