//! Zero insertion making the cocycle `d` bounded while keeping most of the
//! entropy of the beta-shift.
//!
//! A sequence is cut into stages of `J` sub-blocks of `s` digits. Writing
//! `‖·‖` for the coefficient bound `Σ |c_ω|` of `d(n, v)`, a stage is *good*
//! (lies in `B_{K,J}`) when `‖d(k, block)‖ ≤ K` for `k = 0..=sJ`. Good
//! stages are copied after a run of `j < L` zeros chosen so that the running
//! cocycle ends the stage with norm at most `K`; bad stages additionally get
//! `l_t < L` zeros before each later sub-block so that every sub-block ends
//! at norm at most `K`. Each choice keeps the running norm at most `2K`, so
//! the output satisfies `‖d(j, σ^{j'} v*)‖ ≤ 4K` on the processed range.
//!
//! The sub-block length defaults to `⌈K⌉`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// shadowed by std's inherent float methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::algebra::{find_roots, IntPolynomial, RootClass, RootData};
use crate::betashift::{is_admissible_mut, BetaSystem};
use crate::coding::{cocycle_d, cocycle_norms_forward, homoclinic, Homoclinic};
use crate::hofbauer::{build_chain, perron, sample_path_stream, DEFAULT_TOL};
use crate::rng;
use crate::seqspace::{central_sup_norm, shift, root_power, Window, DEFAULT_HORIZON};
use crate::{Error, Result};

/// Largest `L` tried by the back-off in [`salem_modify_auto`] by default.
pub const L_CAP: usize = 1 << 10;
/// Search limit for a single trial in [`minimality_l`].
const L_SEARCH: usize = 1 << 20;

/// `L` found by [`minimality_l`] together with the number of pairs tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Minimality {
    pub l: usize,
    pub trials: usize,
}

fn circle_roots(r: &RootData) -> Result<Vec<Complex64>> {
    let circle: Vec<Complex64> = r.of_class(RootClass::Zero).map(|x| x.value).collect();
    if circle.is_empty() {
        return Err(Error::NotSalem);
    }
    // a root of unity would make the rotation periodic rather than minimal
    for w in &circle {
        let mut p = *w;
        for _ in 0..1000 {
            if (p - 1.0).norm() < 1e-9 {
                return Err(Error::NotSalem);
            }
            p *= *w;
        }
    }
    Ok(circle)
}

/// Uniform point of the closed unit disc.
fn disc(rng: &mut impl rand_core::RngCore) -> Complex64 {
    let r = rng::uniform(rng).sqrt();
    let t = core::f64::consts::TAU * rng::uniform(rng);
    Complex64::from_polar(r, t)
}

/// Random vector with `‖·‖_∞ ≤ 1` whose entries at conjugate roots are
/// conjugate, as for coefficient vectors of real central sequences.
fn symmetric_vector(circle: &[Complex64], rng: &mut impl rand_core::RngCore) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); circle.len()];
    for i in 0..circle.len() {
        if circle[i].im < 0.0 {
            continue;
        }
        let z = disc(rng);
        out[i] = if circle[i].im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
        if let Some(k) = (0..circle.len()).find(|&k| k != i && (circle[k] - circle[i].conj()).norm() < 1e-9) {
            out[k] = out[i].conj();
        }
    }
    out
}

/// Smallest `L` such that every tested pair `(v, w)` of conjugate-symmetric
/// vectors with `‖v‖_∞, ‖w‖_∞ ≤ 1` has some `l < L` with
/// `‖M^l v + w‖_∞ ≤ 1`, where `M` multiplies entry `i` by `ω_i`.
pub fn minimality_l(r: &RootData, trials: usize, seed: u64) -> Result<Minimality> {
    minimality_l_at(r, trials, seed, 1.0)
}

/// [`minimality_l`] with the target ball `‖M^l v + w‖_∞ ≤ threshold`.
pub fn minimality_l_at(r: &RootData, trials: usize, seed: u64, threshold: f64) -> Result<Minimality> {
    let circle = circle_roots(r)?;
    let mut rng = rng::stream(seed, 0);
    let mut l = 1;
    for _ in 0..trials {
        let v = symmetric_vector(&circle, &mut rng);
        let w = symmetric_vector(&circle, &mut rng);
        l = l.max(first_hit(&circle, &v, &w, threshold)? + 1);
    }
    Ok(Minimality { l, trials })
}

fn first_hit(circle: &[Complex64], v: &[Complex64], w: &[Complex64], threshold: f64) -> Result<usize> {
    let mut cur = v.to_vec();
    for l in 0..L_SEARCH {
        if l > 0 && l % 1024 == 0 {
            for (c, (om, x)) in cur.iter_mut().zip(circle.iter().zip(v)) {
                *c = x * root_power(*om, l as i64);
            }
        }
        if cur.iter().zip(w).all(|(a, b)| (a + b).norm() <= threshold) {
            return Ok(l);
        }
        for (c, om) in cur.iter_mut().zip(circle) {
            *c *= om;
        }
    }
    Err(Error::NoConvergence)
}

/// Which side of the sup-norm bracket decides membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Verdict {
    /// `Σ |c_ω|`: membership certifies the bound.
    #[default]
    Upper,
    /// Sampled maximum: failure certifies a violation.
    Lower,
}

/// `‖d(k, v)‖ ≤ K` for `k = 0..=⌈K⌉J` (upper bracket).
pub fn in_bkj(h: &Homoclinic, v: &Window<i64>, k: f64, j: usize) -> Result<bool> {
    in_bkj_with(h, v, k, j, Verdict::Upper)
}

pub fn in_bkj_with(h: &Homoclinic, v: &Window<i64>, k: f64, j: usize, verdict: Verdict) -> Result<bool> {
    let n = sub_block_len(k) * j;
    v.require(0, n as i64 - 1)?;
    match verdict {
        Verdict::Upper => Ok(cocycle_norms_forward(h, v, n as i64).iter().all(|&x| x <= k)),
        Verdict::Lower => {
            for step in 0..=n as i64 {
                if central_sup_norm(&cocycle_d(h, step, v)?, DEFAULT_HORIZON).lower > k {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `⌈K⌉`, at least one.
pub fn sub_block_len(k: f64) -> usize {
    (k.ceil() as usize).max(1)
}

/// Record of the insertions made by [`salem_modify`].
#[derive(Clone, Debug, PartialEq)]
pub struct InsertionLog {
    pub k: f64,
    pub j: usize,
    pub l: usize,
    pub sub_block: usize,
    pub stages: usize,
    /// Zeros inserted inside stage `i`.
    pub l_list: Vec<usize>,
    /// Zeros inserted before stage `i`; always 0 for the first stage.
    pub j_list: Vec<usize>,
    /// Whether the input block of stage `i` was in `B_{K,J}`.
    pub good: Vec<bool>,
    /// Output length of the modified part, starting at index 0.
    pub processed: usize,
}

impl InsertionLog {
    /// `0 ≤ l^(i) ≤ J(L−1)`, `0 ≤ j^(i) ≤ L−1`, and
    /// `Σ_{i<m} l^(i) ≤ J(L−1)·#{bad stages before m}` for every `m`.
    pub fn bounds_hold(&self) -> bool {
        let cap = self.j * (self.l - 1);
        let per = self.l_list.iter().all(|&x| x <= cap) && self.j_list.iter().all(|&x| x < self.l);
        let mut total = 0;
        let mut bad = 0;
        let cumulative = self.l_list.iter().zip(&self.good).all(|(&x, &g)| {
            total += x;
            bad += usize::from(!g);
            total <= cap * bad
        });
        let good_clean = self.l_list.iter().zip(&self.good).all(|(&x, &g)| !g || x == 0);
        per && cumulative && good_clean
    }

    pub fn inserted(&self) -> usize {
        self.l_list.iter().sum::<usize>() + self.j_list.iter().sum::<usize>()
    }
}

/// Running cocycle coefficients `d(n, out)` of the output built so far.
struct Cursor<'a> {
    omega: Vec<Complex64>,
    c0: Vec<Complex64>,
    coef: Vec<Complex64>,
    out: &'a mut Vec<i64>,
}

fn norm(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm()).sum()
}

impl Cursor<'_> {
    /// Norms after `zeros` zeros followed by `digits`: (running max, final).
    fn probe(&self, zeros: usize, digits: &[i64]) -> (f64, f64) {
        let mut c: Vec<Complex64> =
            self.coef.iter().zip(&self.omega).map(|(x, w)| x * root_power(*w, zeros as i64)).collect();
        let mut worst = norm(&c);
        for &d in digits {
            for ((x, w), c0) in c.iter_mut().zip(&self.omega).zip(&self.c0) {
                *x = (*x + c0 * d as f64) * w;
            }
            worst = worst.max(norm(&c));
        }
        (worst, norm(&c))
    }

    fn push(&mut self, zeros: usize, digits: &[i64]) {
        for (x, w) in self.coef.iter_mut().zip(&self.omega) {
            *x *= root_power(*w, zeros as i64);
        }
        self.out.extend(core::iter::repeat_n(0, zeros));
        for &d in digits {
            for ((x, w), c0) in self.coef.iter_mut().zip(&self.omega).zip(&self.c0) {
                *x = (*x + c0 * d as f64) * w;
            }
            self.out.push(d);
        }
    }

    /// Smallest `z < cap` with running norm ≤ 2K and final norm ≤ K.
    fn choose(&self, cap: usize, k: f64, digits: &[i64]) -> Option<usize> {
        (0..cap).find(|&z| {
            let (worst, last) = self.probe(z, digits);
            worst <= 2.0 * k && last <= k
        })
    }
}

/// Inserts zeros into `v` on `[0, mJs)` (`s = ⌈K⌉`) as described in the
/// module documentation; `v*_n = v_n` for `n < 0` and the input after the
/// last stage follows unchanged.
pub fn salem_modify(
    h: &Homoclinic,
    bs: &mut BetaSystem,
    v: &Window<i64>,
    k: f64,
    j: usize,
    l: usize,
    stages: usize,
) -> Result<(Window<i64>, InsertionLog)> {
    let s = sub_block_len(k);
    salem_modify_blocks(h, bs, v, k, j, l, stages, s)
}

/// [`salem_modify`] with an explicit sub-block length `s`.
#[allow(clippy::too_many_arguments)]
pub fn salem_modify_blocks(
    h: &Homoclinic,
    bs: &mut BetaSystem,
    v: &Window<i64>,
    k: f64,
    j: usize,
    l: usize,
    stages: usize,
    s: usize,
) -> Result<(Window<i64>, InsertionLog)> {
    if j == 0 || l == 0 || s == 0 || !(k > 0.0) {
        return Err(Error::PreconditionViolated("need K > 0 and J, L, s ≥ 1"));
    }
    let stage_len = j * s;
    let consumed = stages * stage_len;
    v.require(0, consumed as i64 - 1)?;
    if !is_admissible_mut(bs, v, true)? {
        return Err(Error::PreconditionViolated("input is not admissible"));
    }
    let terms = &h.wdelta0().terms;
    let mut out: Vec<i64> = Vec::with_capacity(consumed + stages * j * l);
    let mut cur = Cursor {
        omega: terms.iter().map(|t| t.omega).collect(),
        c0: terms.iter().map(|t| t.c).collect(),
        coef: vec![Complex64::zero(); terms.len()],
        out: &mut out,
    };
    let mut log = InsertionLog {
        k,
        j,
        l,
        sub_block: s,
        stages,
        l_list: Vec::with_capacity(stages),
        j_list: Vec::with_capacity(stages),
        good: Vec::with_capacity(stages),
        processed: 0,
    };
    let input: Vec<i64> = (0..consumed as i64).map(|n| v.get(n)).collect();
    for stage in 0..stages {
        let block = &input[stage * stage_len..(stage + 1) * stage_len];
        let norms = cocycle_norms_forward(h, &Window::bounded(0, block.to_vec()), stage_len as i64);
        let good = norms.iter().all(|&x| x <= k);
        // the first stage starts from d = 0, so no alignment is possible or needed
        let align_cap = if stage == 0 { 1 } else { l };
        let fail = |step| Error::InsertionFailed { stage, step, l };
        let mut inserted = 0;
        let jz;
        if good {
            jz = cur.choose(align_cap, k, block).ok_or(fail(0))?;
            cur.push(jz, block);
        } else {
            jz = cur.choose(align_cap, k, &block[..s]).ok_or(fail(0))?;
            cur.push(jz, &block[..s]);
            for t in 1..j {
                let sub = &block[t * s..(t + 1) * s];
                let z = cur.choose(l, k, sub).ok_or(fail(t))?;
                cur.push(z, sub);
                inserted += z;
            }
        }
        log.j_list.push(jz);
        log.l_list.push(inserted);
        log.good.push(good);
    }
    log.processed = out.len();
    let mut values: Vec<i64> = (v.lo()..0).map(|n| v.get(n)).collect();
    values.extend_from_slice(&out);
    values.extend((consumed as i64..=v.hi()).map(|n| v.get(n)));
    Ok((Window::bounded(v.lo().min(0), values), log))
}

/// Retries [`salem_modify`] with `L ← 2L` after each `InsertionFailed`,
/// up to `l_cap`; the last failure is returned.
#[allow(clippy::too_many_arguments)]
pub fn salem_modify_auto(
    h: &Homoclinic,
    bs: &mut BetaSystem,
    v: &Window<i64>,
    k: f64,
    j: usize,
    l_start: usize,
    stages: usize,
    l_cap: usize,
) -> Result<(Window<i64>, InsertionLog)> {
    let mut l = l_start.max(1);
    loop {
        match salem_modify(h, bs, v, k, j, l, stages) {
            Err(Error::InsertionFailed { .. }) if l * 2 <= l_cap => l *= 2,
            other => return other,
        }
    }
}

/// `max ‖d(j, σ^{j'} v)‖` over `j ∈ [0, j_max]`, `j' ∈ [jp_lo, jp_hi]`
/// (upper bracket) and whether it is at most `bound`.
pub fn verify_dbound(
    h: &Homoclinic,
    v: &Window<i64>,
    bound: f64,
    j_max: i64,
    jp_lo: i64,
    jp_hi: i64,
) -> Result<(bool, f64)> {
    if j_max > 0 {
        v.require(jp_lo, jp_hi + j_max - 1)?;
    }
    let mut worst = 0.0f64;
    for jp in jp_lo..=jp_hi {
        let norms = cocycle_norms_forward(h, &shift(v, jp), j_max);
        worst = norms.into_iter().fold(worst, f64::max);
    }
    Ok((worst <= bound, worst))
}

/// Equally weighted admissible windows; an ensemble standing in for a
/// shift-invariant measure by pooling all shifts of every sample.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure {
    samples: Vec<Window<i64>>,
}

impl EmpiricalMeasure {
    pub fn new(bs: &mut BetaSystem, samples: Vec<Window<i64>>) -> Result<Self> {
        for v in &samples {
            if !is_admissible_mut(bs, v, true)? {
                return Err(Error::PreconditionViolated("sample is not admissible"));
            }
        }
        Ok(EmpiricalMeasure { samples })
    }

    pub fn samples(&self) -> &[Window<i64>] {
        &self.samples
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyEstimate {
    /// `log(#distinct blocks) / block`
    pub counting: f64,
    /// `H_block / block` with plug-in block frequencies.
    pub shannon: f64,
    pub distinct: usize,
}

/// Block-counting and plug-in Shannon entropy of an ensemble.
pub fn entropy_estimate(mu: &EmpiricalMeasure, block: usize) -> EntropyEstimate {
    let mut counts: BTreeMap<&[i64], usize> = BTreeMap::new();
    let mut total = 0usize;
    for v in &mu.samples {
        if block == 0 || v.len() < block {
            continue;
        }
        for w in v.values().windows(block) {
            *counts.entry(w).or_default() += 1;
            total += 1;
        }
    }
    if total == 0 {
        return EntropyEstimate { counting: 0.0, shannon: 0.0, distinct: 0 };
    }
    let b = block as f64;
    let shannon = counts
        .values()
        .map(|&c| c as f64 / total as f64)
        .map(|p| -p * p.ln())
        .sum::<f64>()
        / b;
    EntropyEstimate { counting: (counts.len() as f64).ln() / b, shannon, distinct: counts.len() }
}

/// Smallest `K` such that at least a `quantile` fraction of the samples lie
/// in `B_{K,J}`: the fixed point `K = q(⌈K⌉J)` of the quantile `q(n)` of
/// `max_{k ≤ n} ‖d(k, v)‖`.
pub fn calibrate_k(h: &Homoclinic, samples: &[Window<i64>], j: usize, quantile: f64) -> Result<f64> {
    if samples.is_empty() || j == 0 {
        return Err(Error::EmptyResult);
    }
    let len = samples.iter().map(|v| v.hi() + 1).min().unwrap_or(0).max(0);
    let running: Vec<Vec<f64>> = samples
        .iter()
        .map(|v| {
            let mut m = 0.0f64;
            cocycle_norms_forward(h, v, len)
                .into_iter()
                .map(|x| {
                    m = m.max(x);
                    m
                })
                .collect()
        })
        .collect();
    let idx = ((quantile * samples.len() as f64).ceil() as usize).clamp(1, samples.len()) - 1;
    let mut s = 1usize;
    loop {
        let n = s * j;
        if n as i64 > len {
            return Err(Error::WindowTooSmall { needed_lo: 0, needed_hi: n as i64 - 1 });
        }
        let mut at: Vec<f64> = running.iter().map(|r| r[n]).collect();
        at.sort_by(|a, b| a.total_cmp(b));
        let q = at[idx];
        if q <= s as f64 {
            // the first success has q > s − 1, so ⌈q⌉ = s unless q = 0
            return Ok(q.max(f64::MIN_POSITIVE));
        }
        s += 1;
    }
}

/// Parameters of [`construct`]. `k = None` calibrates, `l = None` starts the
/// back-off from [`minimality_l`], `stages = None` uses as many full stages
/// as fit.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructParams {
    pub k: Option<f64>,
    pub j: usize,
    pub l: Option<usize>,
    pub l_cap: usize,
    pub stages: Option<usize>,
    pub samples: usize,
    pub length: usize,
    /// Digits kept before index 0 in every sample.
    pub past: usize,
    pub calibration_samples: usize,
    pub quantile: f64,
    pub minimality_trials: usize,
    pub depth: usize,
    pub block: usize,
    pub seed: u64,
}

impl Default for ConstructParams {
    fn default() -> Self {
        ConstructParams {
            k: None,
            j: 8,
            l: None,
            l_cap: L_CAP,
            stages: None,
            samples: 10,
            length: 2000,
            past: 200,
            calibration_samples: 200,
            quantile: 0.9,
            minimality_trials: 1000,
            depth: 200,
            block: 12,
            seed: 0,
        }
    }
}

/// Per-sample outcome of [`construct`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub index: usize,
    pub log: InsertionLog,
    pub worst: f64,
    pub ok: bool,
    pub prefix_preserved: bool,
    pub admissible: bool,
    pub vstar: Window<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructReport {
    pub beta: f64,
    pub k: f64,
    pub l_start: usize,
    pub stages: usize,
    pub samples: Vec<SampleReport>,
    pub entropy: EntropyEstimate,
}

/// Error from [`construct`] tagged with the pipeline stage that raised it.
#[derive(Clone, Debug, PartialEq)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl core::fmt::Display for StageError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

fn at(stage: &'static str) -> impl Fn(Error) -> StageError {
    move |error| StageError { stage, error }
}

/// The whole pipeline: classify, homoclinic data, Parry samples from the
/// Hofbauer chain, calibration of `K` and `L`, zero insertion on every
/// sample, the `4K` check on the processed range and the entropy of the
/// modified parts.
///
/// Sample `i` uses stream `i` of `seed`, calibration sample `i` stream
/// `1_000_000 + i`, and [`minimality_l`] stream 0 of `seed + 1`.
pub fn construct(f: &IntPolynomial, p: &ConstructParams) -> core::result::Result<ConstructReport, StageError> {
    let roots = find_roots(f, crate::algebra::DEFAULT_DIGITS).map_err(at("roots"))?;
    let class = crate::algebra::classify(f, &roots).map_err(at("classify"))?;
    if !class.salem {
        return Err(StageError { stage: "classify", error: Error::NotSalem });
    }
    let h = homoclinic(f, &roots).map_err(at("homoclinic"))?;
    let mut bs = BetaSystem::from_poly(f, &roots).map_err(at("betashift"))?;
    let chain = build_chain(&mut bs, p.depth).map_err(at("hofbauer"))?;
    let perron = perron(&chain, DEFAULT_TOL).map_err(at("hofbauer"))?;
    let draw = |stream: u64| shift(&sample_path_stream(&chain, &perron, p.past + p.length, p.seed, stream), p.past as i64);
    let k = match p.k {
        Some(k) => k,
        None => {
            let cal: Vec<Window<i64>> =
                (0..p.calibration_samples as u64).map(|i| draw(1_000_000 + i)).collect();
            calibrate_k(&h, &cal, p.j, p.quantile).map_err(at("calibrate"))?
        }
    };
    let l_start = match p.l {
        Some(l) => l,
        None => minimality_l(&roots, p.minimality_trials, p.seed.wrapping_add(1)).map_err(at("minimality"))?.l,
    };
    let stage_len = sub_block_len(k) * p.j;
    let stages = p.stages.unwrap_or(p.length / stage_len);
    if stages == 0 {
        return Err(StageError {
            stage: "modify",
            error: Error::WindowTooSmall { needed_lo: 0, needed_hi: stage_len as i64 - 1 },
        });
    }
    let mut reports = Vec::with_capacity(p.samples);
    let mut modified = Vec::with_capacity(p.samples);
    for i in 0..p.samples {
        let v = draw(i as u64);
        let (vstar, log) = if p.l.is_some() {
            salem_modify(&h, &mut bs, &v, k, p.j, l_start, stages)
        } else {
            salem_modify_auto(&h, &mut bs, &v, k, p.j, l_start, stages, p.l_cap)
        }
        .map_err(at("modify"))?;
        let n = log.processed as i64;
        let (ok, worst) = verify_dbound(&h, &vstar, 4.0 * k, n / 2, 0, n - n / 2).map_err(at("verify"))?;
        let prefix_preserved = (v.lo()..0).all(|t| vstar.get(t) == v.get(t));
        let admissible = is_admissible_mut(&mut bs, &vstar, true).map_err(at("verify"))?;
        modified.push(vstar.restrict(0, n - 1));
        reports.push(SampleReport { index: i, log, worst, ok, prefix_preserved, admissible, vstar });
    }
    let mu = EmpiricalMeasure::new(&mut bs, modified).map_err(at("entropy"))?;
    Ok(ConstructReport {
        beta: bs.beta(),
        k,
        l_start,
        stages,
        samples: reports,
        entropy: entropy_estimate(&mu, p.block),
    })
}
