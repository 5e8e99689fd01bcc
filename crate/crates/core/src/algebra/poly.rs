use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fixed::CFixed;
use crate::{Error, Result};

/// Integer polynomial `f(u) = f_0 + f_1 u + ... + f_m u^m` with `m > 0`,
/// `f_m > 0` and `f_0 != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

/// Symmetry of the coefficient list under `i -> m - i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reciprocity {
    /// `f_i = f_{m-i}`
    Symmetric,
    /// `f_i = -f_{m-i}`; such an `f` vanishes at `u = 1`.
    Antisymmetric,
}

impl IntPolynomial {
    /// Builds `f` from `f_0, ..., f_m`. Trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidPolynomial("degree must be positive"));
        }
        if *coeffs.last().unwrap() < 0 {
            return Err(Error::InvalidPolynomial("leading coefficient must be positive"));
        }
        if coeffs[0] == 0 {
            return Err(Error::InvalidPolynomial("constant coefficient must be nonzero"));
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        self.coeffs[self.degree()]
    }

    pub fn constant(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// `|f_0| = 1`, i.e. the companion matrix is invertible over `Z`.
    pub fn is_unit(&self) -> bool {
        self.constant().abs() == 1
    }

    /// `‖f‖₁ = Σ |f_k|`
    pub fn l1_norm(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn reciprocity(&self) -> Option<Reciprocity> {
        let m = self.degree();
        let c = &self.coeffs;
        if (0..=m).all(|i| c[i] == c[m - i]) {
            Some(Reciprocity::Symmetric)
        } else if (0..=m).all(|i| c[i] == -c[m - i]) {
            Some(Reciprocity::Antisymmetric)
        } else {
            None
        }
    }

    pub fn is_reciprocal(&self) -> bool {
        self.reciprocity() == Some(Reciprocity::Symmetric)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..=self.degree()).rev() {
            acc = acc * z + (k as f64) * self.coeffs[k] as f64;
        }
        acc
    }

    /// `(f(z), f'(z))` at fixed precision.
    pub fn eval_fixed(&self, z: &CFixed) -> (CFixed, CFixed) {
        let bits = z.bits();
        let mut p = CFixed::zero(bits);
        let mut dp = CFixed::zero(bits);
        for &c in self.coeffs.iter().rev() {
            dp = dp.mul(z).add(&p);
            p = p.mul(z).add_int(&BigInt::from(c));
        }
        (p, dp)
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn derivative_bigint(&self) -> Vec<BigInt> {
        (1..=self.degree())
            .map(|k| BigInt::from(k as i64) * self.coeffs[k])
            .collect()
    }

    /// True iff `gcd(f, f') = 1` over `Q`.
    pub fn is_squarefree(&self) -> bool {
        let g = poly_gcd(self.to_bigint(), self.derivative_bigint());
        g.len() == 1
    }
}

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn primitive_part(mut p: Vec<BigInt>) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in p.iter_mut() {
            *c /= &g;
        }
    }
    p
}

/// Pseudo-remainder of `a` by `b` (both trimmed, `b` nonzero).
fn pseudo_rem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db && !(a.len() == 1 && a[0].is_zero()) {
        let da = a.len() - 1;
        let la = a[da].clone();
        for c in a.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            a[da - db + i] -= &la * bc;
        }
        a.pop();
        trim(&mut a);
        if a.is_empty() {
            a.push(BigInt::zero());
        }
    }
    a
}

/// Greatest common divisor over `Q`, returned primitive; a constant is `[c]`.
pub(crate) fn poly_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let (mut a, mut b) = (primitive_part(a), primitive_part(b));
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        core::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 && b[0].is_zero() {
            return a;
        }
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = primitive_part(pseudo_rem(a, &b));
        a = b;
        b = r;
    }
}

/// Exact test `g | f` over `Z` for monic `g`.
pub(crate) fn divides_monic(g: &[i128], f: &[i64]) -> bool {
    let dg = g.len() - 1;
    if f.len() - 1 < dg {
        return false;
    }
    let mut r: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
    for top in (dg..r.len()).rev() {
        let q = r[top].clone();
        if q.is_zero() {
            continue;
        }
        for (i, &gc) in g.iter().enumerate() {
            r[top - dg + i] -= &q * gc;
        }
    }
    r[..dg].iter().all(|c| c.is_zero())
}
