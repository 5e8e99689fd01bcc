//! End-to-end acceptance checks, one line per criterion.
//!
//! Run with `cargo test -p salem-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand_core::RngCore;
use salem_core::algebra::{classify, find_roots, IntPolynomial, RootClass, TorusPoint};
use salem_core::betashift::{beta_expand, is_admissible_mut, BetaSystem};
use salem_core::coding::{
    ceil_central, cocycle_d, encode_torus, homoclinic, pseudocover_residual, xi_bar_star, Homoclinic,
};
use salem_core::hofbauer::{build_chain, entropy, lambda_scan, perron, sample_path, sample_path_stream, DEFAULT_TOL};
use salem_core::rng;
use salem_core::salem::{construct, verify_dbound, ConstructParams};
use salem_core::seqspace::{shift, shift_central, CentralTerm, CentralVector, Window};

const GOLDEN: &[i64] = &[-1, -1, 1];
const SALEM4: &[i64] = &[1, -1, -1, -1, 1];
const LEHMER: &[i64] = &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];
const POLYS: [&[i64]; 3] = [GOLDEN, SALEM4, LEHMER];

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::new(c.to_vec()).unwrap()
}

fn hom(c: &[i64]) -> Homoclinic {
    let f = poly(c);
    homoclinic(&f, &find_roots(&f, 60).unwrap()).unwrap()
}

fn beta_system(c: &[i64]) -> BetaSystem {
    let f = poly(c);
    BetaSystem::from_poly(&f, &find_roots(&f, 60).unwrap()).unwrap()
}

/// `(f(σ)w)_n = Σ_k f_k w_{n+k}`, straight from the definition.
fn apply_f(c: &[i64], w: impl Fn(i64) -> f64, n: i64) -> f64 {
    c.iter().enumerate().map(|(k, &fk)| fk as f64 * w(n + k as i64)).sum()
}

fn uniform_int(r: &mut impl RngCore, lo: i64, hi: i64) -> i64 {
    lo + rng::below(r, (hi - lo + 1) as u64) as i64
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn homoclinic_identities() -> Outcome {
    let mut worst = 0.0f64;
    for c in POLYS {
        let h = hom(c);
        for n in -30..=30 {
            let delta = if n == 0 { 1.0 } else { 0.0 };
            worst = worst.max((apply_f(c, |t| h.wdelta_plus(t), n) - delta).abs());
            worst = worst.max((apply_f(c, |t| h.wdelta_minus(t), n) - delta).abs());
            let w0 = h.wdelta0().eval_complex(n).re;
            worst = worst.max((h.wdelta_plus(n) + w0 - h.wdelta_minus(n)).abs());
        }
    }
    outcome(worst < 1e-9, format!("max residual {worst:.2e}"))
}

fn xi_round_trip() -> Outcome {
    let mut r = rng::stream(2, 0);
    let mut worst = 0.0f64;
    for c in POLYS {
        let h = hom(c);
        let m = c.len() as i64 - 1;
        for _ in 0..500 {
            let v = Window::from_fn(-6, 6, |_| uniform_int(&mut r, -5, 5));
            let xi = xi_bar_star(&h, &v).w;
            for n in xi.lo()..=xi.hi() - m {
                worst = worst.max((apply_f(c, |t| xi.get(t), n) - v.get(n) as f64).abs());
            }
        }
    }
    outcome(worst < 1e-8, format!("max residual {worst:.2e} over 3x500 vectors"))
}

fn cocycle_distance(a: &CentralVector, b: &CentralVector) -> f64 {
    a.terms.iter().zip(&b.terms).map(|(x, y)| (x.c - y.c).norm()).sum()
}

fn cocycle_equation() -> Outcome {
    let mut r = rng::stream(3, 0);
    let mut worst = 0.0f64;
    for c in [SALEM4, LEHMER] {
        let h = hom(c);
        for _ in 0..200 {
            let m = uniform_int(&mut r, -8, 8);
            let n = uniform_int(&mut r, -8, 8);
            let v = Window::from_fn(-20, 20, |_| uniform_int(&mut r, -5, 5));
            let lhs = cocycle_d(&h, m, &shift(&v, n))
                .unwrap()
                .add(&shift_central(&cocycle_d(&h, n, &v).unwrap(), m));
            let rhs = cocycle_d(&h, m + n, &v).unwrap();
            worst = worst.max(cocycle_distance(&lhs, &rhs));
        }
    }
    outcome(worst < 1e-10, format!("max defect {worst:.2e}"))
}

/// Every suffix of the zero-padded digit string is `⪯ e*`, compared naively.
fn admissible_naive(digits: &[i64], estar: &[i64]) -> bool {
    (0..digits.len()).all(|s| {
        for (k, &e) in estar.iter().enumerate() {
            let d = digits.get(s + k).copied().unwrap_or(0);
            if d != e {
                return d < e;
            }
        }
        true
    })
}

fn greedy_consistency() -> Outcome {
    let mut r = rng::stream(4, 0);
    let mut worst_ratio = 0.0f64;
    let mut admissible = true;
    for c in POLYS {
        let mut bs = beta_system(c);
        let beta = bs.beta();
        let estar = bs.estar_prefix(200);
        for _ in 0..500 {
            let x = rng::uniform(&mut r);
            let d = beta_expand(&bs, x, 60);
            let w = Window::bounded(1, d.clone());
            admissible &= is_admissible_mut(&mut bs, &w, true).unwrap() && admissible_naive(&d, &estar);
            let eta: f64 = d.iter().enumerate().map(|(k, &dk)| dk as f64 * beta.powi(-(k as i32 + 1))).sum();
            worst_ratio = worst_ratio.max((eta - x).abs() / beta.powi(-59));
        }
    }
    outcome(
        admissible && worst_ratio < 1.0,
        format!("admissible={admissible}, max |η(e(x)) − x| / β^-59 = {worst_ratio:.3}"),
    )
}

fn hofbauer_exactness() -> Outcome {
    let mut g = beta_system(GOLDEN);
    let pg = perron(&build_chain(&mut g, 10).unwrap(), DEFAULT_TOL).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let golden_err = (pg.lambda - phi).abs();
    let mut two = beta_system(&[-2, 1]);
    let p2 = perron(&build_chain(&mut two, 10).unwrap(), DEFAULT_TOL).unwrap();
    let two_err = (entropy(&p2) - 2f64.ln()).abs();
    let mut s = beta_system(SALEM4);
    let depths: Vec<usize> = (5..=60).step_by(5).collect();
    let scan = lambda_scan(&mut s, &depths, DEFAULT_TOL).unwrap();
    let beta = s.beta();
    let monotone = scan.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12 && w[1].1 <= beta + 1e-12);
    let last = (scan.last().unwrap().1 - beta).abs();
    outcome(
        golden_err < 1e-10 && two_err < 1e-10 && monotone && last < 1e-6,
        format!("|λ−φ|={golden_err:.1e}, |h−log 2|={two_err:.1e}, scan monotone={monotone}, |λ_60−β|={last:.1e}"),
    )
}

fn block_entropy(d: &[i64], k: usize) -> f64 {
    let mut counts = std::collections::HashMap::new();
    for w in d.windows(k) {
        *counts.entry(w).or_insert(0usize) += 1;
    }
    let total = (d.len() - k + 1) as f64;
    counts.values().map(|&c| c as f64 / total).map(|q| -q * q.ln()).sum()
}

fn golden_sampling() -> Outcome {
    let mut bs = beta_system(GOLDEN);
    let chain = build_chain(&mut bs, 10).unwrap();
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    let w = sample_path(&chain, &p, 100_000, 6);
    let elevens = w.values().windows(2).filter(|x| x == &[1, 1]).count();
    let rate = block_entropy(w.values(), 11) - block_entropy(w.values(), 10);
    let target = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    outcome(
        elevens == 0 && (rate - target).abs() < 0.05,
        format!("'11' factors={elevens}, entropy rate {rate:.4} vs log φ {target:.4}"),
    )
}

/// Enumerates `h` on `[−4, 4]` with `|h_n| ≤ 2`, highest index first. Once
/// `h_n..h_{n+m}` are fixed, `u_n = v_n + (f(σ)h)_n` is final, so digits
/// outside `[0, digit_max]` prune the branch.
fn perturbations(c: &[i64], v: &Window<i64>, bs: &mut BetaSystem, h: &mut [i64; 9], idx: usize, found: &mut (usize, usize)) {
    let m = c.len() - 1;
    let at = |h: &[i64; 9], n: i64| if (-4..=4).contains(&n) { h[(4 - n) as usize] } else { 0 };
    let u = |h: &[i64; 9], n: i64| v.get(n) + (0..=m).map(|k| c[k] * at(h, n + k as i64)).sum::<i64>();
    if idx == 9 {
        if h.iter().all(|&x| x == 0) {
            return;
        }
        let lo = -4 - m as i64;
        if (lo..-4).any(|n| !(0..=bs.digit_max()).contains(&u(h, n))) {
            return;
        }
        found.0 += 1;
        let w = Window::from_fn(v.lo(), v.hi(), |n| u(h, n));
        if is_admissible_mut(bs, &w, true).unwrap() {
            found.1 += 1;
        }
        return;
    }
    let n = 4 - idx as i64;
    for x in -2..=2 {
        h[idx] = x;
        if (0..=bs.digit_max()).contains(&u(h, n)) {
            perturbations(c, v, bs, h, idx + 1, found);
        }
    }
    h[idx] = 0;
}

fn rigidity_brute_force() -> Outcome {
    let mut bs = beta_system(SALEM4);
    let chain = build_chain(&mut bs, 50).unwrap();
    let p = perron(&chain, DEFAULT_TOL).unwrap();
    let mut found = (0, 0);
    for i in 0..50 {
        let v = shift(&sample_path_stream(&chain, &p, 41, 7, i), 20);
        perturbations(SALEM4, &v, &mut bs, &mut [0; 9], 0, &mut found);
    }
    outcome(
        found.1 == 0,
        format!("{} of {} nonzero h with valid digits keep v + f(σ)h admissible", found.1, found.0),
    )
}

fn torus_encoding() -> Outcome {
    let mut r = rng::stream(8, 0);
    let mut worst_digit = true;
    let mut worst_resid = 0.0f64;
    for c in POLYS {
        let f = poly(c);
        let h = hom(c);
        let l1 = f.l1_norm() as i64;
        for _ in 0..100 {
            let x = TorusPoint::from_raw((0..c.len() - 1).map(|_| r.next_u64()).collect());
            let v = encode_torus(&f, &x, -20, 20).unwrap();
            worst_digit &= v.values().iter().all(|d| d.abs() <= l1);
            worst_resid = worst_resid.max(pseudocover_residual(&h, &x, -20, 20).unwrap());
        }
    }
    outcome(
        worst_digit && worst_resid < 1e-7,
        format!("digits within ‖f‖₁: {worst_digit}, max residual {worst_resid:.2e}"),
    )
}

fn unbounded_ceiling() -> Outcome {
    let mut r = rng::stream(9, 0);
    let mut ok = true;
    let mut detail = String::new();
    for c in [SALEM4, LEHMER] {
        let f = poly(c);
        let roots = find_roots(&f, 60).unwrap();
        let circle: Vec<Complex64> = roots.of_class(RootClass::Zero).map(|x| x.value).collect();
        let mut terms = Vec::new();
        for &w in circle.iter().filter(|w| w.im > 0.0) {
            let coeff = Complex64::from_polar(1000.0 * rng::uniform(&mut r), 6.283 * rng::uniform(&mut r));
            terms.push(CentralTerm { omega: w, c: coeff });
            terms.push(CentralTerm { omega: w.conj(), c: coeff.conj() });
        }
        let central = CentralVector { terms };
        let v = ceil_central(&central, -200, 200);
        let m = c.len() as i64 - 1;
        let fv = (-200..=200 - m).map(|n| apply_f(c, |t| v.get(t) as f64, n).abs()).fold(0.0, f64::max);
        let big = v.values().iter().map(|x| x.abs()).max().unwrap();
        ok &= fv < f.l1_norm() as f64 && big > 100;
        detail += &format!("deg {}: ‖f(σ)v‖={fv}, max|v|={big}; ", c.len() - 1);
    }
    outcome(ok, detail.trim_end_matches("; ").to_string())
}

fn construction() -> (Outcome, f64) {
    let f = poly(SALEM4);
    let run = |j| construct(&f, &ConstructParams { j, ..ConstructParams::default() }).unwrap();
    let r8 = run(8);
    let r16 = run(16);
    let ok_frac = r8.samples.iter().filter(|s| s.ok).count() as f64 / r8.samples.len() as f64;
    let prefix = r8.samples.iter().all(|s| s.prefix_preserved);
    let logs = r8.samples.iter().all(|s| s.log.bounds_hold());
    let admissible = r8.samples.iter().all(|s| s.admissible);
    let lb = r8.beta.ln();
    let (e8, e16) = (r8.entropy.counting, r16.entropy.counting);
    let pass = ok_frac >= 0.95 && prefix && logs && admissible && e8 >= 0.85 * lb && e16 > e8;
    (
        outcome(
            pass,
            format!(
                "K={:.3}, 4K ok {:.0}%, prefix={prefix}, log bounds={logs}, admissible={admissible}, \
                 entropy J=8 {e8:.4} (≥ {:.4}), J=16 {e16:.4}",
                r8.k,
                100.0 * ok_frac,
                0.85 * lb
            ),
        ),
        r8.k,
    )
}

fn negative_control(k: f64) -> Outcome {
    let p = ConstructParams::default();
    let h = hom(SALEM4);
    let mut bs = beta_system(SALEM4);
    let chain = build_chain(&mut bs, p.depth).unwrap();
    let perron = perron(&chain, DEFAULT_TOL).unwrap();
    let mut failed = 0;
    for i in 0..p.samples as u64 {
        let v = shift(&sample_path_stream(&chain, &perron, p.past + p.length, p.seed, i), p.past as i64);
        let (ok, _) = verify_dbound(&h, &v, 4.0 * k, 1000, 0, 999).unwrap();
        failed += usize::from(!ok);
    }
    let frac = failed as f64 / p.samples as f64;
    outcome(frac >= 0.8, format!("{:.0}% of unmodified samples exceed 4K={:.3}", 100.0 * frac, 4.0 * k))
}

fn main() -> ExitCode {
    let f = poly(SALEM4);
    assert!(classify(&f, &find_roots(&f, 60).unwrap()).unwrap().salem);
    let mut all = true;
    let mut report = |id: usize, name: &str, budget: Duration, run: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = run();
        let elapsed = t.elapsed();
        let pass = o.pass && elapsed <= budget;
        all &= pass;
        println!(
            "criterion {id:>2} {:<4} {name}: {} [{:.2}s / {}s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    };
    let s = Duration::from_secs;
    report(1, "homoclinic identities", s(1), &mut homoclinic_identities);
    report(2, "coding round trip", s(5), &mut xi_round_trip);
    report(3, "cocycle equation", s(2), &mut cocycle_equation);
    report(4, "greedy expansions", s(5), &mut greedy_consistency);
    report(5, "Hofbauer chain", s(30), &mut hofbauer_exactness);
    report(6, "maximal-entropy sampling", s(30), &mut golden_sampling);
    report(7, "rigidity of admissible sequences", s(120), &mut rigidity_brute_force);
    report(8, "torus encoding", s(10), &mut torus_encoding);
    report(9, "unbounded ceilings", s(1), &mut unbounded_ceiling);
    let mut k = 0.0;
    report(10, "d-bounded construction", s(300), &mut || {
        let (o, kk) = construction();
        k = kk;
        o
    });
    report(11, "negative control", s(120), &mut || negative_control(k));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
