//! The Hofbauer–Takahashi chain of a beta-shift.
//!
//! States are the free states `(a)` for digits `a < e*_1`, which may be
//! followed by anything, and the level states `k ≥ 1` carrying digit `e*_k`
//! after a word that ends in `e*_1 ... e*_k`. Transitions:
//!
//! * free → every free state and level 1;
//! * level `k` → free states with `a < e*_{k+1}` and level `k + 1`.
//!
//! When `e*` is eventually periodic with preperiod `p` and period `q`,
//! level `p + q + 1` behaves exactly like level `p + 1`, which closes the
//! chain into a finite one whose Perron value is `β`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

// shadowed by std's inherent float methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::betashift::BetaSystem;
use crate::rng;
use crate::seqspace::Window;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Free,
    Level(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct State {
    pub kind: StateKind,
    /// Digit emitted when the chain enters this state.
    pub digit: i64,
}

#[derive(Clone, Debug)]
pub struct HofbauerChain {
    depth: usize,
    states: Vec<State>,
    succ: Vec<Vec<usize>>,
    exact: bool,
}

/// Perron value and positive eigenvectors, each normalised to sum one.
#[derive(Clone, Debug)]
pub struct Perron {
    pub lambda: f64,
    /// Left eigenvector: `xP = λx`.
    pub x: Vec<f64>,
    /// Right eigenvector: `Py = λy`.
    pub y: Vec<f64>,
}

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_ITER: usize = 1_000_000;

impl HofbauerChain {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Closed into the exact finite chain rather than truncated.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ.get(a).is_some_and(|s| s.contains(&b))
    }

    pub fn label(&self, s: usize) -> alloc::string::String {
        match self.states[s].kind {
            StateKind::Free => alloc::format!("A{}", self.states[s].digit),
            StateKind::Level(k) => alloc::format!("L{k}"),
        }
    }
}

/// Builds the chain to depth `D`, closed exactly when the period of `e*` is
/// known and `p + q ≤ D`, otherwise truncated at level `D`.
pub fn build_chain(bs: &mut BetaSystem, depth: usize) -> Result<HofbauerChain> {
    match bs.period_info() {
        Some((p, q)) if p + q <= depth => build(bs, depth, Some((p, q))),
        _ => build(bs, depth, None),
    }
}

/// Truncated chain with levels `1..=D`, the continuation out of level `D`
/// dropped, regardless of periodicity. Its Perron value increases to `β`.
pub fn build_truncated(bs: &mut BetaSystem, depth: usize) -> Result<HofbauerChain> {
    build(bs, depth, None)
}

fn build(bs: &mut BetaSystem, depth: usize, closure: Option<(usize, usize)>) -> Result<HofbauerChain> {
    let depth = depth.max(1);
    bs.extend(depth + 2);
    let e = |k: usize| bs.estar_digit(k);
    let e1 = e(1)?;
    let levels = match closure {
        Some((p, q)) => p + q,
        None => depth,
    };
    // p = 0 with e*_q < e*_1: level q has full follower and merges with a free state
    let merge_last = matches!(closure, Some((0, q)) if e(q)? < e1);

    let mut states: Vec<State> = (0..e1).map(|a| State { kind: StateKind::Free, digit: a }).collect();
    let free = states.len();
    let level_count = if merge_last { levels - 1 } else { levels };
    for k in 1..=level_count {
        states.push(State { kind: StateKind::Level(k), digit: e(k)? });
    }
    let level_index = |k: usize| -> Option<usize> {
        let k = match closure {
            Some((p, q)) if k > p + q => p + 1 + (k - p - 1) % q,
            Some(_) => k,
            None if k > depth => return None,
            None => k,
        };
        if merge_last && k == levels {
            Some(e(k).ok()? as usize)
        } else {
            Some(free + k - 1)
        }
    };

    let mut succ = vec![Vec::new(); states.len()];
    for (a, out) in succ.iter_mut().enumerate().take(free) {
        let _ = a;
        out.extend(0..free);
        out.extend(level_index(1));
    }
    for k in 1..=level_count {
        let s = free + k - 1;
        let next = e(k + 1)?;
        succ[s].extend((0..free).filter(|&a| (a as i64) < next));
        succ[s].extend(level_index(k + 1));
    }
    let chain = HofbauerChain { depth, states, succ, exact: closure.is_some() };
    Ok(core_of(chain))
}

fn reach(succ: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(s) = queue.pop_front() {
        for &t in &succ[s] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Keeps the strongly connected component of the free state `0`.
fn core_of(chain: HofbauerChain) -> HofbauerChain {
    let n = chain.states.len();
    let fwd = reach(&chain.succ, 0);
    let mut pred = vec![Vec::new(); n];
    for (a, b) in chain.edges() {
        pred[b].push(a);
    }
    let back = reach(&pred, 0);
    let keep: Vec<bool> = (0..n).map(|s| fwd[s] && back[s]).collect();
    let mut index = vec![usize::MAX; n];
    let mut states = Vec::new();
    for s in 0..n {
        if keep[s] {
            index[s] = states.len();
            states.push(chain.states[s]);
        }
    }
    let succ = (0..n)
        .filter(|&s| keep[s])
        .map(|s| chain.succ[s].iter().filter(|&&t| keep[t]).map(|&t| index[t]).collect())
        .collect();
    HofbauerChain { depth: chain.depth, states, succ, exact: chain.exact }
}

fn normalise(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

/// Power iteration for `Py = λy` and `xP = λx`, stopped when the residual
/// `max |Py − λy|` (and the same for `x`) drops below `tol`.
pub fn perron(chain: &HofbauerChain, tol: f64) -> Result<Perron> {
    let n = chain.len();
    if n == 0 {
        return Err(Error::NotIrreducible);
    }
    let apply_right = |y: &[f64]| -> Vec<f64> {
        chain.succ.iter().map(|s| s.iter().map(|&t| y[t]).sum()).collect()
    };
    let apply_left = |x: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (a, b) in chain.edges() {
            out[b] += x[a];
        }
        out
    };
    let iterate = |apply: &dyn Fn(&[f64]) -> Vec<f64>| -> Result<(f64, Vec<f64>)> {
        let mut v = vec![1.0 / n as f64; n];
        for _ in 0..MAX_ITER {
            let w = apply(&v);
            let lambda: f64 = w.iter().sum::<f64>() / v.iter().sum::<f64>();
            let resid = w
                .iter()
                .zip(&v)
                .map(|(a, b)| if *b > 0.0 { (a / (lambda * b) - 1.0).abs() } else { f64::INFINITY })
                .fold(0.0, f64::max);
            v = w;
            normalise(&mut v);
            if resid < tol {
                return Ok((lambda, v));
            }
        }
        Err(Error::NoConvergence)
    };
    let (lambda, y) = iterate(&apply_right)?;
    let (_, x) = iterate(&apply_left)?;
    Ok(Perron { lambda, x, y })
}

/// `log λ`, the entropy of the Parry measure.
pub fn entropy(p: &Perron) -> f64 {
    p.lambda.ln()
}

/// `P(a, a') y(a') / (λ y(a))`
pub fn transition_probability(chain: &HofbauerChain, p: &Perron, a: usize, b: usize) -> f64 {
    if chain.has_edge(a, b) {
        p.y[b] / (p.lambda * p.y[a])
    } else {
        0.0
    }
}

/// `π(a) = x(a) y(a) / Σ x y`
pub fn stationary(p: &Perron) -> Vec<f64> {
    let mut pi: Vec<f64> = p.x.iter().zip(&p.y).map(|(a, b)| a * b).collect();
    normalise(&mut pi);
    pi
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderMeasure {
    /// `π(a_0) λ^−(n−1) y(a_{n−1}) / y(a_0)`
    pub stationary: f64,
    /// `λ^−(n−1) y(a_{n−1}) / y(a_0)`, the measure given the first state.
    pub conditional: f64,
}

pub fn cylinder_measure(chain: &HofbauerChain, p: &Perron, path: &[usize]) -> Result<CylinderMeasure> {
    let (&first, &last) = match (path.first(), path.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidPath),
    };
    if path.iter().any(|&s| s >= chain.len()) || path.windows(2).any(|w| !chain.has_edge(w[0], w[1])) {
        return Err(Error::InvalidPath);
    }
    let conditional = p.lambda.powi(-(path.len() as i32 - 1)) * p.y[last] / p.y[first];
    let pi = stationary(p);
    Ok(CylinderMeasure { stationary: pi[first] * conditional, conditional })
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = f64::INFINITY;
    }
    out
}

/// Stationary Markov path of length `n` projected to digits, on `[0, n − 1]`.
/// Uses stream 0 of `seed`; see [`crate::rng`].
pub fn sample_path(chain: &HofbauerChain, p: &Perron, n: usize, seed: u64) -> Window<i64> {
    sample_path_stream(chain, p, n, seed, 0)
}

/// As [`sample_path`], from an explicit stream of `seed`.
pub fn sample_path_stream(chain: &HofbauerChain, p: &Perron, n: usize, seed: u64, stream: u64) -> Window<i64> {
    let mut rng = rng::stream(seed, stream);
    let start = cumulative(stationary(p).into_iter());
    let tables: Vec<Vec<f64>> = (0..chain.len())
        .map(|a| cumulative(chain.succ[a].iter().map(|&b| transition_probability(chain, p, a, b))))
        .collect();
    let pick = |table: &[f64], u: f64| table.iter().position(|&c| u < c).unwrap_or(table.len() - 1);
    let mut digits = Vec::with_capacity(n);
    if n == 0 {
        return Window::bounded(0, digits);
    }
    let mut s = pick(&start, rng::uniform(&mut rng));
    digits.push(chain.states[s].digit);
    for _ in 1..n {
        let i = pick(&tables[s], rng::uniform(&mut rng));
        s = chain.succ[s][i];
        digits.push(chain.states[s].digit);
    }
    Window::bounded(0, digits)
}

/// `(D, λ_D)` for truncated chains of the given depths.
pub fn lambda_scan(bs: &mut BetaSystem, depths: &[usize], tol: f64) -> Result<Vec<(usize, f64)>> {
    depths
        .iter()
        .map(|&d| {
            let chain = build_truncated(bs, d)?;
            Ok((d, perron(&chain, tol)?.lambda))
        })
        .collect()
}

#[cfg(test)]
mod tests;
