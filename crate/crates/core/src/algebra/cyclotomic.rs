//! Exact cyclotomic-factor detection.
//!
//! `Φ_n` has degree `φ(n)`, and `φ(n) ≥ sqrt(n/2)`, so a degree-`m`
//! polynomial can only contain `Φ_n` for `n ≤ 2m²`. Every such `n` with
//! `φ(n) ≤ m` is tested by exact division over the integers.

use alloc::vec;
use alloc::vec::Vec;

use super::poly::divides_monic;
use super::IntPolynomial;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn mul_binomial(p: &[i128], d: usize) -> Vec<i128> {
    // p * (u^d - 1)
    let mut out = vec![0i128; p.len() + d];
    for (i, &c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_binomial(p: &[i128], d: usize) -> Vec<i128> {
    // exact p / (u^d - 1), highest coefficient first
    let n = p.len() - 1 - d;
    let mut r = p.to_vec();
    let mut q = vec![0i128; n + 1];
    for k in (0..=n).rev() {
        let c = r[k + d];
        q[k] = c;
        r[k + d] -= c;
        r[k] += c;
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: u64) -> Vec<i128> {
    let mut num = vec![1i128];
    let mut den = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            match mobius(n / d) {
                1 => num = mul_binomial(&num, d as usize),
                -1 => den.push(d as usize),
                _ => {}
            }
        }
    }
    for d in den {
        num = div_binomial(&num, d);
    }
    num
}

/// Indices `n` with `Φ_n | f`, ascending.
pub fn cyclotomic_factors(f: &IntPolynomial) -> Vec<u64> {
    let m = f.degree() as u64;
    (1..=2 * m * m)
        .filter(|&n| euler_phi(n) <= m)
        .filter(|&n| divides_monic(&cyclotomic_poly(n), f.coeffs()))
        .collect()
}

/// True iff `f` has a root of unity among its roots.
pub fn has_cyclotomic_factor(f: &IntPolynomial) -> bool {
    !cyclotomic_factors(f).is_empty()
}
