//! One function per subcommand. Each resolves its parameters, calls into
//! `salem-core` and shapes the result; no numerics happen here.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context};
use salem_core::algebra::{classify, find_roots, reducibility_warnings, IntPolynomial, ReducibilityWarning, RootData, TorusPoint};
use salem_core::betashift::{beta_expand, eta_eval, is_admissible_mut, sofic_probe, BetaSystem};
use salem_core::coding::{
    cocycle_d, encode_torus, homoclinic, pseudocover_residual, weak_dbound_diagnostic, xi_bar_star, Homoclinic,
};
use salem_core::hofbauer::{
    build_chain, build_truncated, entropy, lambda_scan, perron, sample_path, sample_path_stream, HofbauerChain,
    Perron, DEFAULT_TOL,
};
use salem_core::salem::{calibrate_k, construct, entropy_estimate, minimality_l, ConstructParams, EmpiricalMeasure};
use salem_core::seqspace::{central_sup_norm, shift, Window, DEFAULT_HORIZON};
use salem_core::Error;
use serde_json::{json, Value};

use crate::format::{central_json, digits_json, parse_poly, parse_window, poly_json, roots_json, window_json, Table};
use crate::{At, Cli, Command, Failure, Output};

type Params = BTreeMap<&'static str, Value>;

fn done(result: Value) -> Output {
    Output { result, table: None, code: 0 }
}

struct Ctx<'a> {
    cli: &'a Cli,
    params: Params,
}

impl Ctx<'_> {
    fn set(&mut self, key: &'static str, v: impl Into<Value>) {
        self.params.insert(key, v.into());
    }

    fn poly(&mut self) -> Result<IntPolynomial, Failure> {
        let text = self.cli.poly.as_deref().ok_or_else(|| anyhow!("--poly is required"))?;
        let f = parse_poly(text)?;
        self.set("poly", json!(f.coeffs()));
        Ok(f)
    }

    fn roots(&mut self, f: &IntPolynomial) -> Result<RootData, Failure> {
        find_roots(f, self.cli.precision).at("roots")
    }

    fn homoclinic(&mut self) -> Result<Homoclinic, Failure> {
        let f = self.poly()?;
        let r = self.roots(&f)?;
        homoclinic(&f, &r).at("homoclinic")
    }

    /// From `--beta` when given, else from the dominant root of `--poly`.
    fn beta_system(&mut self) -> Result<BetaSystem, Failure> {
        match self.cli.beta {
            Some(b) => {
                self.set("beta", b);
                BetaSystem::from_beta(b).at("betashift")
            }
            None => {
                let f = self.poly()?;
                let r = self.roots(&f)?;
                BetaSystem::from_poly(&f, &r).at("betashift")
            }
        }
    }

    fn opt(&mut self, key: &'static str, v: Option<usize>, default: usize) -> usize {
        let x = v.unwrap_or(default);
        self.set(key, x);
        x
    }

    fn window(&mut self, input: &str, lo: i64) -> Result<Window<i64>, Failure> {
        let w = parse_window(input, lo)?;
        self.set("input", window_json(&w));
        Ok(w)
    }
}

pub fn dispatch(cli: &Cli) -> Result<(Params, Output), Failure> {
    let mut cx = Ctx { cli, params: Params::new() };
    let out = match &cli.command {
        Command::Classify => cmd_classify(&mut cx)?,
        Command::Roots => cmd_roots(&mut cx)?,
        Command::Homoclinic { lo, hi } => cmd_homoclinic(&mut cx, *lo, *hi)?,
        Command::Xi { input, lo } => cmd_xi(&mut cx, input, *lo)?,
        Command::Cocycle { n, input, lo } => cmd_cocycle(&mut cx, *n, input, *lo)?,
        Command::Encode { point, lo, hi } => cmd_encode(&mut cx, point, *lo, *hi)?,
        Command::Pseudocover { point, lo, hi } => cmd_pseudocover(&mut cx, point, *lo, *hi)?,
        Command::Expand { x } => cmd_expand(&mut cx, *x)?,
        Command::Estar => cmd_estar(&mut cx)?,
        Command::Admissible { input, lo, one_sided } => cmd_admissible(&mut cx, input, *lo, *one_sided)?,
        Command::Eta { input, lo } => cmd_eta(&mut cx, input, *lo)?,
        Command::Probe => cmd_probe(&mut cx)?,
        Command::Chain { truncated } => cmd_chain(&mut cx, *truncated)?,
        Command::Sample => cmd_sample(&mut cx)?,
        Command::Entropy => cmd_entropy(&mut cx)?,
        Command::Minimality => cmd_minimality(&mut cx)?,
        Command::Construct => cmd_construct(&mut cx)?,
        Command::Dbound => cmd_dbound(&mut cx)?,
    };
    Ok((cx.params, out))
}

fn warning_json(w: &ReducibilityWarning) -> Value {
    match w {
        ReducibilityWarning::RationalRoot { p, q } => json!({ "rational_root": [p, q] }),
        ReducibilityWarning::CyclotomicFactor(n) => json!({ "cyclotomic_factor": n }),
    }
}

fn cmd_classify(cx: &mut Ctx) -> Result<Output, Failure> {
    let f = cx.poly()?;
    let r = cx.roots(&f)?;
    let warnings: Vec<Value> = reducibility_warnings(&f).iter().map(warning_json).collect();
    let mut result = json!({ "poly": poly_json(&f), "degree": f.degree(), "warnings": warnings });
    let code = match classify(&f, &r) {
        Ok(c) => {
            result["class"] = json!({
                "hyperbolic": c.hyperbolic,
                "cyclotomic": c.cyclotomic,
                "pisot": c.pisot,
                "salem": c.salem,
                "reciprocal": c.reciprocal,
            });
            result["beta"] = json!(r.dominant_real().map(|x| x.value.re));
            0
        }
        Err(Error::Inconclusive) => {
            result["inconclusive"] = json!(Error::Inconclusive.to_string());
            2
        }
        Err(e) => return Err(Failure::Module { stage: "classify", error: e }),
    };
    Ok(Output { result, table: None, code })
}

fn cmd_roots(cx: &mut Ctx) -> Result<Output, Failure> {
    let f = cx.poly()?;
    let r = cx.roots(&f)?;
    let mut t = Table::new(vec!["re", "im", "cls", "b_re", "b_im"]);
    for x in &r.roots {
        t.push(vec![
            x.value.re.to_string(),
            x.value.im.to_string(),
            x.cls.as_str().into(),
            x.b.re.to_string(),
            x.b.im.to_string(),
        ]);
    }
    let result = json!({ "poly": poly_json(&f), "digits": r.digits, "roots": roots_json(&r) });
    Ok(Output { result, table: Some(t), code: 0 })
}

fn cmd_homoclinic(cx: &mut Ctx, lo: i64, hi: i64) -> Result<Output, Failure> {
    cx.set("lo", lo);
    cx.set("hi", hi);
    let h = cx.homoclinic()?;
    let plus = Window::from_fn(lo, hi, |n| h.wdelta_plus(n));
    let minus = Window::from_fn(lo, hi, |n| h.wdelta_minus(n));
    let zero = Window::from_fn(lo, hi, |n| h.wdelta0().eval_complex(n).re);
    let mut t = Table::new(vec!["n", "w_plus", "w_minus", "w_zero"]);
    for n in lo..=hi {
        t.push(vec![n.to_string(), plus.get(n).to_string(), minus.get(n).to_string(), zero.get(n).to_string()]);
    }
    let result = json!({
        "w_plus": window_json(&plus),
        "w_minus": window_json(&minus),
        "w_zero": window_json(&zero),
        "central": central_json(h.wdelta0()),
        "hyperbolic": h.is_hyperbolic(),
        "inner_radius": h.inner_radius(),
        "outer_radius": h.outer_radius(),
        "decay_constant": h.decay_constant(),
    });
    Ok(Output { result, table: Some(t), code: 0 })
}

fn value_table(w: &Window<f64>) -> Table {
    let mut t = Table::new(vec!["n", "value"]);
    for (i, x) in w.values().iter().enumerate() {
        t.push(vec![(w.lo() + i as i64).to_string(), x.to_string()]);
    }
    t
}

fn cmd_xi(cx: &mut Ctx, input: &str, lo: i64) -> Result<Output, Failure> {
    let h = cx.homoclinic()?;
    let v = cx.window(input, lo)?;
    let xi = xi_bar_star(&h, &v);
    let result = json!({ "xi": window_json(&xi.w), "tail_bound": xi.tail_bound });
    Ok(Output { result, table: Some(value_table(&xi.w)), code: 0 })
}

fn cmd_cocycle(cx: &mut Ctx, n: i64, input: &str, lo: i64) -> Result<Output, Failure> {
    cx.set("n", n);
    let h = cx.homoclinic()?;
    let v = cx.window(input, lo)?;
    let d = cocycle_d(&h, n, &v).at("cocycle")?;
    let sup = central_sup_norm(&d, DEFAULT_HORIZON);
    Ok(done(json!({ "d": central_json(&d), "sup_lower": sup.lower, "sup_upper": sup.upper })))
}

fn parse_point(text: &str) -> anyhow::Result<TorusPoint> {
    let coords = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad coordinate {s:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if coords.iter().any(|x| !(0.0..1.0).contains(x)) {
        bail!("torus coordinates must lie in [0, 1)");
    }
    Ok(TorusPoint::from_f64(&coords))
}

fn point_param(cx: &mut Ctx, point: &str) -> Result<TorusPoint, Failure> {
    let x = parse_point(point)?;
    cx.set("point", json!(x.to_f64()));
    Ok(x)
}

fn cmd_encode(cx: &mut Ctx, point: &str, lo: i64, hi: i64) -> Result<Output, Failure> {
    cx.set("lo", lo);
    cx.set("hi", hi);
    let f = cx.poly()?;
    let x = point_param(cx, point)?;
    let v = encode_torus(&f, &x, lo, hi).at("encode")?;
    let mut t = Table::new(vec!["n", "v"]);
    for n in lo..=hi {
        t.push(vec![n.to_string(), v.get(n).to_string()]);
    }
    Ok(Output { result: json!({ "v": window_json(&v) }), table: Some(t), code: 0 })
}

fn cmd_pseudocover(cx: &mut Ctx, point: &str, lo: i64, hi: i64) -> Result<Output, Failure> {
    cx.set("lo", lo);
    cx.set("hi", hi);
    let h = cx.homoclinic()?;
    let x = point_param(cx, point)?;
    let residual = pseudocover_residual(&h, &x, lo, hi).at("pseudocover")?;
    Ok(done(json!({ "residual": residual })))
}

fn cmd_expand(cx: &mut Ctx, x: f64) -> Result<Output, Failure> {
    if !(0.0..1.0).contains(&x) {
        return Err(anyhow!("x must lie in [0, 1)").into());
    }
    cx.set("x", x);
    let bs = cx.beta_system()?;
    let n = cx.opt("length", cx.cli.length, 32);
    let d = beta_expand(&bs, x, n);
    let (value, tail) = eta_eval(&bs, &Window::bounded(1, d.clone()));
    Ok(done(json!({ "beta": bs.beta(), "digits": digits_json(&d), "value": value, "tail_bound": tail })))
}

fn period_json(p: Option<(usize, usize)>) -> Value {
    match p {
        Some((pre, q)) => json!({ "preperiod": pre, "period": q }),
        None => json!("unknown"),
    }
}

fn cmd_estar(cx: &mut Ctx) -> Result<Output, Failure> {
    let mut bs = cx.beta_system()?;
    let n = cx.opt("length", cx.cli.length, 64);
    let d = bs.estar_prefix(n);
    Ok(done(json!({
        "beta": bs.beta(),
        "estar": digits_json(&d),
        "period": period_json(bs.period_info()),
        "exact": bs.is_exact(),
    })))
}

fn cmd_admissible(cx: &mut Ctx, input: &str, lo: i64, one_sided: bool) -> Result<Output, Failure> {
    cx.set("one_sided", one_sided);
    let mut bs = cx.beta_system()?;
    let v = cx.window(input, lo)?;
    let ok = is_admissible_mut(&mut bs, &v, !one_sided).at("admissible")?;
    Ok(done(json!({ "beta": bs.beta(), "admissible": ok })))
}

fn cmd_eta(cx: &mut Ctx, input: &str, lo: i64) -> Result<Output, Failure> {
    let bs = cx.beta_system()?;
    let v = cx.window(input, lo)?;
    let (value, tail) = eta_eval(&bs, &v);
    Ok(done(json!({ "beta": bs.beta(), "value": value, "tail_bound": tail })))
}

fn cmd_probe(cx: &mut Ctx) -> Result<Output, Failure> {
    let mut bs = cx.beta_system()?;
    let n_max = cx.opt("length", cx.cli.length, 10_000);
    let depth = cx.opt("depth", cx.cli.depth, 60);
    let period = sofic_probe(&mut bs, n_max);
    let depths: Vec<usize> = (1..=depth / 5).map(|i| 5 * i).collect();
    let scan = lambda_scan(&mut bs, &depths, DEFAULT_TOL).at("hofbauer")?;
    let mut t = Table::new(vec!["depth", "lambda"]);
    for (d, l) in &scan {
        t.push(vec![d.to_string(), l.to_string()]);
    }
    let result = json!({
        "beta": bs.beta(),
        "period": period_json(period),
        "lambda_scan": scan.iter().map(|(d, l)| json!({ "depth": d, "lambda": l })).collect::<Vec<_>>(),
    });
    Ok(Output { result, table: Some(t), code: 0 })
}

fn chain_and_perron(cx: &mut Ctx, bs: &mut BetaSystem, default_depth: usize) -> Result<(HofbauerChain, Perron), Failure> {
    let depth = cx.opt("depth", cx.cli.depth, default_depth);
    let chain = build_chain(bs, depth).at("hofbauer")?;
    let p = perron(&chain, DEFAULT_TOL).at("hofbauer")?;
    Ok((chain, p))
}

fn cmd_chain(cx: &mut Ctx, truncated: bool) -> Result<Output, Failure> {
    cx.set("truncated", truncated);
    let mut bs = cx.beta_system()?;
    let depth = cx.opt("depth", cx.cli.depth, 50);
    let chain = if truncated { build_truncated(&mut bs, depth) } else { build_chain(&mut bs, depth) }.at("hofbauer")?;
    let p = perron(&chain, DEFAULT_TOL).at("hofbauer")?;
    let mut t = Table::new(vec!["state", "label", "digit", "x", "y"]);
    let states: Vec<Value> = (0..chain.len())
        .map(|s| {
            let digit = chain.states()[s].digit;
            t.push(vec![s.to_string(), chain.label(s), digit.to_string(), p.x[s].to_string(), p.y[s].to_string()]);
            json!({ "label": chain.label(s), "digit": digit })
        })
        .collect();
    let edges: Vec<[usize; 2]> = chain.edges().map(|(a, b)| [a, b]).collect();
    let result = json!({
        "beta": bs.beta(),
        "exact": chain.is_exact(),
        "states": states,
        "edges": edges,
        "lambda": p.lambda,
        "entropy": entropy(&p),
        "x": p.x,
        "y": p.y,
    });
    Ok(Output { result, table: Some(t), code: 0 })
}

fn cmd_sample(cx: &mut Ctx) -> Result<Output, Failure> {
    let mut bs = cx.beta_system()?;
    let (chain, p) = chain_and_perron(cx, &mut bs, 200)?;
    let n = cx.opt("length", cx.cli.length, 1000);
    let w = sample_path(&chain, &p, n, cx.cli.seed);
    Ok(done(json!({ "beta": bs.beta(), "lo": w.lo(), "digits": digits_json(w.values()) })))
}

fn parry_samples(cx: &mut Ctx, bs: &mut BetaSystem, n: usize, len: usize, past: usize) -> Result<Vec<Window<i64>>, Failure> {
    let (chain, p) = chain_and_perron(cx, bs, 200)?;
    let seed = cx.cli.seed;
    Ok((0..n as u64).map(|i| shift(&sample_path_stream(&chain, &p, past + len, seed, i), past as i64)).collect())
}

fn cmd_entropy(cx: &mut Ctx) -> Result<Output, Failure> {
    let mut bs = cx.beta_system()?;
    let n = cx.opt("samples", cx.cli.samples, 10);
    let len = cx.opt("length", cx.cli.length, 10_000);
    let block = cx.opt("block", cx.cli.block, 12);
    let samples = parry_samples(cx, &mut bs, n, len, 0)?;
    let mu = EmpiricalMeasure::new(&mut bs, samples).at("entropy")?;
    let e = entropy_estimate(&mu, block);
    Ok(done(json!({
        "beta": bs.beta(),
        "log_beta": bs.beta().ln(),
        "counting": e.counting,
        "shannon": e.shannon,
        "distinct": e.distinct,
    })))
}

fn cmd_minimality(cx: &mut Ctx) -> Result<Output, Failure> {
    let f = cx.poly()?;
    let r = cx.roots(&f)?;
    let trials = cx.opt("samples", cx.cli.samples, 1000);
    let m = minimality_l(&r, trials, cx.cli.seed).at("minimality")?;
    Ok(done(json!({ "L": m.l, "trials": m.trials })))
}

fn l_param(cx: &mut Ctx) -> Result<Option<usize>, Failure> {
    let text = cx.cli.l.clone().unwrap_or_else(|| "auto".into());
    cx.set("L", text.clone());
    if text == "auto" {
        return Ok(None);
    }
    text.parse().map(Some).map_err(|_| anyhow!("--L must be an integer or \"auto\", got {text:?}").into())
}

fn cmd_construct(cx: &mut Ctx) -> Result<Output, Failure> {
    let f = cx.poly()?;
    let d = ConstructParams::default();
    let p = ConstructParams {
        k: cx.cli.k,
        j: cx.opt("J", cx.cli.j, d.j),
        l: l_param(cx)?,
        stages: cx.cli.stages,
        samples: cx.opt("samples", cx.cli.samples, d.samples),
        length: cx.opt("length", cx.cli.length, d.length),
        block: cx.opt("block", cx.cli.block, d.block),
        depth: cx.opt("depth", cx.cli.depth, d.depth),
        seed: cx.cli.seed,
        ..d
    };
    cx.set("K", p.k.map_or(json!("calibrated"), |k| json!(k)));
    cx.set("stages", p.stages.map_or(json!("fit"), |s| json!(s)));
    cx.set("past", p.past);
    cx.set("l_cap", p.l_cap);
    cx.set("calibration_samples", p.calibration_samples);
    cx.set("quantile", p.quantile);
    cx.set("minimality_trials", p.minimality_trials);
    let r = construct(&f, &p)?;
    let bound = 4.0 * r.k;
    let mut t = Table::new(vec![
        "sample", "worst", "bound", "ok", "L", "inserted", "bad_stages", "processed", "prefix_preserved", "admissible",
    ]);
    let rows: Vec<Value> = r
        .samples
        .iter()
        .map(|s| {
            let bad = s.log.good.iter().filter(|g| !**g).count();
            t.push(vec![
                s.index.to_string(),
                s.worst.to_string(),
                bound.to_string(),
                s.ok.to_string(),
                s.log.l.to_string(),
                s.log.inserted().to_string(),
                bad.to_string(),
                s.log.processed.to_string(),
                s.prefix_preserved.to_string(),
                s.admissible.to_string(),
            ]);
            json!({
                "sample": s.index,
                "worst": s.worst,
                "ok": s.ok,
                "L": s.log.l,
                "inserted": s.log.inserted(),
                "l_list": s.log.l_list,
                "j_list": s.log.j_list,
                "bad_stages": bad,
                "processed": s.log.processed,
                "log_bounds_hold": s.log.bounds_hold(),
                "prefix_preserved": s.prefix_preserved,
                "admissible": s.admissible,
            })
        })
        .collect();
    let ok = r.samples.iter().filter(|s| s.ok).count() as f64 / r.samples.len().max(1) as f64;
    let worst = r.samples.iter().map(|s| s.worst).fold(0.0, f64::max);
    let result = json!({
        "beta": r.beta,
        "log_beta": r.beta.ln(),
        "K": r.k,
        "bound": bound,
        "L_start": r.l_start,
        "stages": r.stages,
        "worst": worst,
        "ok_fraction": ok,
        "entropy_counting": r.entropy.counting,
        "entropy_shannon": r.entropy.shannon,
        "distinct_blocks": r.entropy.distinct,
        "samples": rows,
    });
    Ok(Output { result, table: Some(t), code: 0 })
}

fn cmd_dbound(cx: &mut Ctx) -> Result<Output, Failure> {
    let h = cx.homoclinic()?;
    let mut bs = {
        let f = cx.poly()?;
        let r = cx.roots(&f)?;
        BetaSystem::from_poly(&f, &r).at("betashift")?
    };
    let n = cx.opt("samples", cx.cli.samples, 100);
    let len = cx.opt("length", cx.cli.length, 2000);
    let k_max = (len / 2) as i64;
    let samples = parry_samples(cx, &mut bs, n, len, len / 2)?;
    let k = match cx.cli.k {
        Some(k) => k,
        None => {
            let j = cx.opt("J", cx.cli.j, 8);
            calibrate_k(&h, &samples, j, 0.9).at("calibrate")?
        }
    };
    cx.set("K", k);
    let rows = weak_dbound_diagnostic(&h, &samples, &[k], k_max).at("dbound")?;
    let mut t = Table::new(vec!["K", "k", "fraction"]);
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            t.push(vec![r.bound.to_string(), r.k.to_string(), r.fraction.to_string()]);
            json!({ "K": r.bound, "k": r.k, "fraction": r.fraction })
        })
        .collect();
    let min = rows.iter().map(|r| r.fraction).fold(1.0, f64::min);
    Ok(Output { result: json!({ "K": k, "min_fraction": min, "rows": json_rows }), table: Some(t), code: 0 })
}
