use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::algebra::{find_roots, IntPolynomial};
use crate::betashift::is_admissible;

fn system(c: &[i64]) -> BetaSystem {
    let f = IntPolynomial::new(c.to_vec()).unwrap();
    let r = find_roots(&f, 60).unwrap();
    BetaSystem::from_poly(&f, &r).unwrap()
}

const GOLDEN: &[i64] = &[-1, -1, 1];
const TWO: &[i64] = &[-2, 1];
const SALEM4: &[i64] = &[1, -1, -1, -1, 1];
const LEHMER: &[i64] = &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];

#[test]
fn golden_chain_is_two_states() {
    let mut bs = system(GOLDEN);
    let chain = build_chain(&mut bs, 4).unwrap();
    assert!(chain.is_exact());
    assert_eq!(chain.len(), 2);
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    assert!((p.lambda - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
    assert!((entropy(&p) - 0.481_211_825_059_603_4).abs() < 1e-10);
}

#[test]
fn binary_chain_is_full_shift() {
    let mut bs = system(TWO);
    let chain = build_chain(&mut bs, 3).unwrap();
    assert_eq!(chain.len(), 2);
    assert_eq!(chain.edges().count(), 4);
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    assert!((p.lambda - 2.0).abs() < 1e-12);
    assert!((entropy(&p) - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn exact_chains_reproduce_beta() {
    for (c, states) in [(SALEM4, 5), (LEHMER, 76)] {
        let mut bs = system(c);
        let chain = build_chain(&mut bs, 100).unwrap();
        assert!(chain.is_exact());
        assert_eq!(chain.len(), states);
        let p = perron(&chain, DEFAULT_TOL).unwrap();
        assert!((p.lambda - bs.beta()).abs() < 1e-10, "{} vs {}", p.lambda, bs.beta());
    }
}

#[test]
fn truncated_scan_increases_to_beta() {
    let mut bs = system(SALEM4);
    let depths: Vec<usize> = (5..=60).step_by(5).collect();
    let scan = lambda_scan(&mut bs, &depths, DEFAULT_TOL).unwrap();
    for w in scan.windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-12);
        assert!((w[1].1 - bs.beta()).abs() <= (w[0].1 - bs.beta()).abs() + 1e-12);
    }
    let (_, l60) = scan.last().unwrap();
    assert!((l60 - bs.beta()).abs() < 1e-6);
    assert!(!build_truncated(&mut bs, 50).unwrap().is_exact());
}

#[test]
fn eigen_equations_and_stochasticity() {
    for c in [GOLDEN, TWO, SALEM4, LEHMER] {
        let mut bs = system(c);
        for chain in [build_chain(&mut bs, 80).unwrap(), build_truncated(&mut bs, 30).unwrap()] {
            let p = perron(&chain, DEFAULT_TOL).unwrap();
            assert!(p.x.iter().chain(&p.y).all(|&v| v > 0.0));
            assert!((p.x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for a in 0..chain.len() {
                let py: f64 = chain.successors(a).iter().map(|&b| p.y[b]).sum();
                assert!((py - p.lambda * p.y[a]).abs() < 1e-10);
                let total: f64 = (0..chain.len()).map(|b| transition_probability(&chain, &p, a, b)).sum();
                assert!((total - 1.0).abs() < 1e-10, "{:?} {} {} {}", c, chain.len(), a, total);
            }
            let mut xp = vec![0.0; chain.len()];
            for (a, b) in chain.edges() {
                xp[b] += p.x[a];
            }
            for a in 0..chain.len() {
                assert!((xp[a] - p.lambda * p.x[a]).abs() < 1e-10);
            }
        }
    }
}

fn paths(chain: &HofbauerChain, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..chain.len()).map(|s| vec![s]).collect();
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                let last = *p.last().unwrap();
                chain.successors(last).iter().map(move |&t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    out
}

#[test]
fn cylinder_normalisation_and_additivity() {
    let mut chains = Vec::new();
    for c in [GOLDEN, TWO, SALEM4] {
        let mut bs = system(c);
        chains.push(build_chain(&mut bs, 10).unwrap());
    }
    let mut bs = system(SALEM4);
    chains.push(build_truncated(&mut bs, 30).unwrap());
    for chain in &chains {
        assert!(chain.len() <= 40);
        let p = perron(chain, DEFAULT_TOL).unwrap();
        for len in 1..=6 {
            let total: f64 = paths(chain, len)
                .iter()
                .map(|q| cylinder_measure(chain, &p, q).unwrap().stationary)
                .sum();
            assert!((total - 1.0).abs() < 1e-10);
            if len < 6 {
                for q in paths(chain, len) {
                    let whole = cylinder_measure(chain, &p, &q).unwrap();
                    let parts: f64 = chain
                        .successors(*q.last().unwrap())
                        .iter()
                        .map(|&t| {
                            let mut r = q.clone();
                            r.push(t);
                            cylinder_measure(chain, &p, &r).unwrap().stationary
                        })
                        .sum();
                    assert!((whole.stationary - parts).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn binary_cylinders_are_dyadic() {
    let mut bs = system(TWO);
    let chain = build_chain(&mut bs, 3).unwrap();
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    for len in 1..=6 {
        for q in paths(&chain, len) {
            let m = cylinder_measure(&chain, &p, &q).unwrap();
            assert!((m.stationary - 0.5f64.powi(len as i32)).abs() < 1e-12);
            assert!((m.conditional - 0.5f64.powi(len as i32 - 1)).abs() < 1e-12);
        }
    }
    assert_eq!(cylinder_measure(&chain, &p, &[]), Err(Error::InvalidPath));
    assert_eq!(cylinder_measure(&chain, &p, &[0, 7]), Err(Error::InvalidPath));
}

#[test]
fn invalid_transition_rejected() {
    let mut bs = system(GOLDEN);
    let chain = build_chain(&mut bs, 4).unwrap();
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    let level = (0..chain.len()).find(|&s| chain.states()[s].kind == StateKind::Level(1)).unwrap();
    assert_eq!(cylinder_measure(&chain, &p, &[level, level]), Err(Error::InvalidPath));
}

#[test]
fn samples_are_admissible() {
    for c in [GOLDEN, TWO, SALEM4, LEHMER] {
        let mut bs = system(c);
        let chain = build_chain(&mut bs, 100).unwrap();
        let p = perron(&chain, DEFAULT_TOL).unwrap();
        for stream in 0..4 {
            let w = sample_path_stream(&chain, &p, 250_000, 11, stream);
            assert!(is_admissible(&bs, &w, true).unwrap());
        }
    }
}

#[test]
fn sampling_is_deterministic() {
    let mut bs = system(SALEM4);
    let chain = build_chain(&mut bs, 10).unwrap();
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    assert_eq!(sample_path(&chain, &p, 1000, 5), sample_path(&chain, &p, 1000, 5));
    assert_ne!(sample_path(&chain, &p, 1000, 5), sample_path(&chain, &p, 1000, 6));
}

#[test]
fn binary_samples_are_fair_bits() {
    let mut bs = system(TWO);
    let chain = build_chain(&mut bs, 3).unwrap();
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    let w = sample_path(&chain, &p, 10_000, 3);
    let ones = w.values().iter().filter(|&&d| d == 1).count() as f64;
    let n = 10_000.0;
    let chi2 = 2.0 * (ones - n / 2.0).powi(2) / (n / 2.0);
    // 1% critical value of chi-square with one degree of freedom
    assert!(chi2 < 6.635);
}

fn block_entropy(d: &[i64], k: usize) -> f64 {
    let mut counts: BTreeMap<&[i64], usize> = BTreeMap::new();
    for w in d.windows(k) {
        *counts.entry(w).or_default() += 1;
    }
    let total = (d.len() - k + 1) as f64;
    counts.values().map(|&c| c as f64 / total).map(|q| -q * q.ln()).sum()
}

#[test]
fn golden_samples_avoid_11_and_have_parry_entropy() {
    let mut bs = system(GOLDEN);
    let chain = build_chain(&mut bs, 4).unwrap();
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    let w = sample_path(&chain, &p, 100_000, 17);
    assert!(w.values().windows(2).all(|x| x != [1, 1]));
    let rate = block_entropy(w.values(), 11) - block_entropy(w.values(), 10);
    assert!((rate - entropy(&p)).abs() < 0.05);
}
