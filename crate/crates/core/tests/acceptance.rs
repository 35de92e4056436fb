//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach stdout; exits nonzero on any FAIL.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use sflab::experiments::{
    count_sunflowers, expected_xr, good_event_check, sample_hnpw, threshold_experiment, trajectory_comparison,
    GoodEventThresholds, ThresholdConfig, WILSON_Z,
};
use sflab::hypergraph::ExplicitHypergraph;
use sflab::instances::{
    blowup, blowup_vertex, h_free_hypergraph, random_uniform, schur_hypergraph, schur_vertex,
    sumfree_run, sumfree_run_capped, Pattern,
};
use sflab::process::{fate_map, i_max};
use sflab::rng::{main_rng, trial_seed};
use sflab::sunflower::{
    count_d, creates_sunflower, sunflower_hypergraph, SFParams, SunflowerCaps, WSet, WSetFamily,
};
use sflab::trajectories::{build_table, find_constants};
use sflab::{run, Params, ProcessState, RunOptions, StepCap, Tracking};

use common::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1
fn d_formula_exact() -> Check {
    let mut cases = 0;
    for r in [3usize, 4] {
        for n in 2u32..=8 {
            for w in 1..=3u32.min(n - 1) {
                let p = SFParams::new(n as u64, w as u64, r).unwrap();
                let lib = count_d(&p).exact_u128().ok_or("no exact D")?;
                let brute = d_brute(n, w as usize, r) as u128;
                ensure(lib == brute, || format!("(n,w,r)=({n},{w},{r}): formula {lib}, brute {brute}"))?;
                cases += 1;
            }
        }
    }
    let spot = count_d(&SFParams::new(6, 2, 3).unwrap()).exact_u128();
    ensure(spot == Some(15), || format!("(6,2,3) gave {spot:?}"))?;
    Ok(format!("{cases} parameter sets agree; D(6,2,3) = 15"))
}

// 2
fn sunflower_hypergraph_counts() -> Check {
    let p = SFParams::new(6, 2, 3).unwrap();
    let h = sunflower_hypergraph(&p, SunflowerCaps::default()).map_err(|e| e.to_string())?;
    ensure(h.n_vertices() == 15, || format!("{} vertices", h.n_vertices()))?;
    ensure(h.n_edges() == 75, || format!("{} edges", h.n_edges()))?;
    for v in 0..15u32 {
        let d = degree_naive(&h, &[v], 3);
        ensure(d == 15, || format!("vertex {v} has degree {d}"))?;
    }
    // the edges are exactly the 3-sunflowers among the 2-sets
    let as_sets = |e: &[u32]| -> BTreeSet<Vec<u32>> {
        e.iter().map(|&v| WSet::unrank(6, 2, v as u64).elements().to_vec()).collect()
    };
    let lib: BTreeSet<BTreeSet<Vec<u32>>> = h.edges().iter().map(|e| as_sets(e.members())).collect();
    let pairs = subsets(6, 2);
    let brute: BTreeSet<BTreeSet<Vec<u32>>> = choose(&pairs, 3)
        .into_iter()
        .filter(|t| is_sunflower(&[&t[0], &t[1], &t[2]]))
        .map(|t| t.into_iter().collect())
        .collect();
    ensure(lib == brute, || "edge set differs from the enumerated sunflowers".into())?;
    Ok("15 vertices, 75 edges, 15-regular; edges match enumeration".into())
}

fn sum_free_oracle(set: &[u64], n: u64) -> bool {
    let m = 2 * n;
    let s: HashSet<u64> = set.iter().copied().collect();
    set.iter().all(|&x| set.iter().all(|&y| !s.contains(&((x + y) % m))))
}

// 3
fn sum_free_size_bound() -> Check {
    let mut detail = Vec::new();
    for n in [1_000u64, 10_000] {
        let bound = (n as f64 * (n as f64).ln()).sqrt() / 6.0;
        let mut smallest = usize::MAX;
        for seed in 0..20 {
            let run = sumfree_run(n, seed).map_err(|e| e.to_string())?;
            ensure(sum_free_oracle(&run.elements, n), || format!("n={n} seed={seed}: not sum-free"))?;
            ensure(run.size() as f64 >= bound, || {
                format!("n={n} seed={seed}: |S| = {} < {bound:.2}", run.size())
            })?;
            smallest = smallest.min(run.size());
        }
        detail.push(format!("n={n}: min |S| = {smallest} >= {bound:.1}"));
    }
    Ok(detail.join("; "))
}

// 4
fn blowup_coupling() -> Check {
    let mut runs = 0;
    for base_seed in 0..20u64 {
        let base = random_uniform(50, 100, 3, 1000 + base_seed).map_err(|e| e.to_string())?;
        let h = blowup(&base, 2).map_err(|e| e.to_string())?;
        for seed in 0..100 {
            let log = run(&h, &RunOptions::new(seed));
            let fates = fate_map(&log);
            for v in 0..50u32 {
                let a = fates[blowup_vertex(v, 0, 2) as usize];
                let b = fates[blowup_vertex(v, 1, 2) as usize];
                ensure(a.same_kind(&b), || format!("base {base_seed} seed {seed} vertex {v}: {a:?} vs {b:?}"))?;
            }
            runs += 1;
        }
    }
    Ok(format!("copies share their fate in {runs}/{runs} runs"))
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    let scale = a.abs().max(b.abs());
    scale == 0.0 || (a - b).abs() <= rel * scale
}

// 5
fn trajectory_identities() -> Check {
    let mut worst: f64 = 0.0;
    for r in [3usize, 4, 5] {
        let (n, d) = (1e4, 3e4);
        let p = Params::new(r, n, d, 1e-4).unwrap().with_zeta(0.5);
        let table = build_table(&p, 1000, 1e-12).map_err(|e| e.to_string())?;
        let t = table.column("t").unwrap();
        ensure(t.len() == 1000, || format!("grid has {} points", t.len()))?;
        let rm1 = (r - 1) as f64;
        for ell in 2..=r {
            let plus = (ell < r).then(|| table.column(&format!("s_plus_{ell}")).unwrap());
            let minus = table.column(&format!("s_minus_{ell}")).unwrap();
            for (j, &tj) in t.iter().enumerate() {
                let q = (-tj.powf(rm1)).exp();
                if let Some(plus) = &plus {
                    let s = binom(r - 1, ell - 1)
                        * d.powf((ell - 1) as f64 / rm1)
                        * tj.powi((r - ell) as i32)
                        * q.powi(ell as i32 - 1);
                    let diff = plus[j] - minus[j];
                    worst = worst.max((diff - s).abs() / s.abs().max(diff.abs()).max(f64::MIN_POSITIVE));
                    ensure(close(diff, s, 1e-6), || format!("r={r} ell={ell} t={tj}: {diff} vs {s}"))?;
                } else {
                    let closed = -d * (-rm1 * tj.powf(rm1)).exp_m1();
                    ensure(close(minus[j], closed, 1e-6), || {
                        format!("r={r} t={tj}: s_r^- {} vs {closed}", minus[j])
                    })?;
                }
            }
        }
    }
    Ok(format!("worst relative error {worst:.2e} over 1000 points, r = 3, 4, 5"))
}

/// `f / e^{αt+βt^{r−1}}` and `f′ / e^{αt+βt^{r−1}}` for `f = (1+t^m) q^k e^{αt+βt^{r−1}}`,
/// the derivative from a central difference of `ln f`.
fn f_oracle(t: f64, m: i32, k: f64, r: usize, alpha: f64, beta: f64) -> (f64, f64) {
    let rm1 = (r - 1) as f64;
    let ln_f = |x: f64| (1.0 + x.powi(m)).ln() - k * x.powf(rm1) + alpha * x + beta * x.powf(rm1);
    let h = 1e-5;
    let dlog = (ln_f(t + h) - ln_f(t - h)) / (2.0 * h);
    let reduced = (1.0 + t.powi(m)) * (-k * t.powi(r as i32 - 1)).exp();
    (reduced, reduced * dlog)
}

fn worst_oracle_margin(r: usize, alpha: f64, beta: f64, horizon: f64, points: usize) -> f64 {
    let mut worst = f64::INFINITY;
    let mut note = |lhs: f64, rhs: f64| {
        let m = (lhs - rhs) / lhs.abs().max(rhs.abs());
        worst = worst.min(m);
    };
    let rs = r as f64;
    for j in 0..points {
        let t = horizon * j as f64 / (points - 1) as f64;
        let q = (-t.powi(r as i32 - 1)).exp();
        let fv = f_oracle(t, 2, 2.0, r, alpha, beta);
        let fl: Vec<(f64, f64)> = (0..=r)
            .map(|l| if l < 2 { (0.0, 0.0) } else { f_oracle(t, (r - l + 2) as i32, l as f64, r, alpha, beta) })
            .collect();
        note(fv.1, 3.0 * fl[2].0);
        for ell in 2..=r {
            let l = ell as f64;
            let d = fl[ell].1;
            if ell < r {
                note(d, 5.0 * l / q * fl[ell + 1].0);
                note(d, 2.0 * l * binom(r - 1, ell) * t.powi((r - ell - 1) as i32) * q.powi(ell as i32 - 2) * fv.0);
            }
            let c = binom(r - 1, ell - 1);
            note(d, 7.0 * (l - 1.0) * c * t.powi((r - ell) as i32) * q.powi(ell as i32 - 2) * fl[2].0);
            note(d, 6.0 * (l - 1.0) * (rs - 1.0) * t.powi(r as i32 - 2) * fl[ell].0);
            note(
                d,
                3.0 * (l - 1.0) * (rs - 1.0) * c * t.powi((2 * r - ell - 2) as i32) * q.powi(ell as i32 - 2) * fv.0,
            );
        }
    }
    worst
}

// 6
fn constants_certificate() -> Check {
    let mut detail = Vec::new();
    for r in [3usize, 4, 5] {
        let cert = find_constants(r).map_err(|e| e.to_string())?;
        ensure(cert.holds(), || format!("r={r}: certificate does not hold"))?;
        ensure(cert.margins.len() == 6 && cert.refined_margins.len() == 6, || "six items expected".into())?;
        ensure(cert.worst_margin() >= 1e-3, || format!("r={r}: margin {}", cert.worst_margin()))?;
        let h = cert.config.horizon;
        let coarse = worst_oracle_margin(r, cert.alpha, cert.beta, h, 10_000);
        let fine = worst_oracle_margin(r, cert.alpha, cert.beta, h, 20_000);
        ensure(coarse >= 1e-3 && fine >= 1e-3, || {
            format!("r={r}: independent re-check margins {coarse:.3e} / {fine:.3e}")
        })?;
        ensure((coarse - fine).abs() < 1e-3, || format!("r={r}: grid doubling moved the margin {coarse} -> {fine}"))?;
        detail.push(format!("r={r}: α={:.3} β={:.3} margin {:.3}", cert.alpha, cert.beta, coarse.min(fine)));
    }
    Ok(detail.join("; "))
}

fn has_sunflower_brute(fam: &WSetFamily, r: usize) -> bool {
    let sets: Vec<Vec<u32>> = fam.sets().iter().map(|s| s.elements().to_vec()).collect();
    x_r_brute(&sets, r) > 0
}

// 7
fn threshold_transition() -> Check {
    let cfg = ThresholdConfig {
        n: 30,
        w: 3,
        r: 3,
        multipliers: vec![0.1, 10.0],
        trials: 500,
        seed_base: 20_240,
    };
    let table = threshold_experiment(&cfg).map_err(|e| e.to_string())?;
    let (lo, hi) = (&table.rows[0], &table.rows[1]);
    for row in [lo, hi] {
        let brute = (0..cfg.trials)
            .filter(|&k| {
                let fam = sample_hnpw(30, 3, row.p, trial_seed(cfg.seed_base, k)).unwrap();
                has_sunflower_brute(&fam, 3)
            })
            .count() as u64;
        ensure(brute == row.successes, || format!("c={}: {} vs brute {brute}", row.c, row.successes))?;
        let (a, b) = wilson(row.successes, row.trials, 1.959964);
        ensure((a.max(0.0) - row.ci_lo).abs() < 1e-12 && (b.min(1.0) - row.ci_hi).abs() < 1e-12, || {
            format!("c={}: CI mismatch", row.c)
        })?;
    }
    ensure(WILSON_Z == 1.959964, || "z".into())?;
    ensure(lo.p_hat <= 0.2 && lo.ci_hi < 0.95, || format!("c=0.1: p̂={} CI=[{}, {}]", lo.p_hat, lo.ci_lo, lo.ci_hi))?;
    ensure(hi.p_hat >= 0.95 && hi.ci_lo > 0.2, || format!("c=10: p̂={} CI=[{}, {}]", hi.p_hat, hi.ci_lo, hi.ci_hi))?;
    Ok(format!(
        "c=0.1: p̂={} CI [{:.4}, {:.4}]; c=10: p̂={} CI [{:.4}, {:.4}]",
        lo.p_hat, lo.ci_lo, lo.ci_hi, hi.p_hat, hi.ci_lo, hi.ci_hi
    ))
}

// 8
fn moment_formula() -> Check {
    let p = 0.3;
    let samples = 2000u64;
    let mut xs = Vec::with_capacity(samples as usize);
    for seed in 0..samples {
        let fam = sample_hnpw(6, 2, p, 7_000 + seed).map_err(|e| e.to_string())?;
        let sets: Vec<Vec<u32>> = fam.sets().iter().map(|s| s.elements().to_vec()).collect();
        let x = x_r_brute(&sets, 3);
        let lib = count_sunflowers(&fam, 3).map_err(|e| e.to_string())?;
        ensure(lib == x, || format!("seed {seed}: count {lib} vs brute {x}"))?;
        xs.push(x as f64);
    }
    let mean = xs.iter().sum::<f64>() / samples as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    let se = (var / samples as f64).sqrt();
    let expected = 15.0 * 15.0 * p.powi(3) / 3.0;
    let lib = expected_xr(&SFParams::new(6, 2, 3).unwrap(), p);
    ensure((lib - expected).abs() < 1e-12, || format!("expected_xr {lib} vs {expected}"))?;
    ensure((mean - expected).abs() <= 3.0 * se, || format!("mean {mean} vs {expected} (σ = {se})"))?;
    Ok(format!("mean {mean:.4} vs NDp³/3 = {expected:.4}, |z| = {:.2}", (mean - expected).abs() / se))
}

fn incremental_vs_scratch(h: &ExplicitHypergraph, d: f64, phi: f64, seed: u64) -> Result<usize, String> {
    let plain = run(h, &RunOptions::new(seed));
    let every = (plain.n_steps() / 10).max(1);
    let bad = h.bad_pair_map(d, phi);
    let mut opts = RunOptions::new(seed);
    opts.snapshot_every = Some(every);
    opts.tracking = Tracking::All;
    opts.bad_pairs = Some(bad.clone());
    let log = run(h, &opts);
    ensure(log.chosen() == plain.chosen(), || "tracking changed the run".into())?;
    let chosen_seq = log.chosen();
    let r = h.r_bound();
    for snap in &log.snapshots {
        let chosen: HashSet<u32> = chosen_seq[..snap.step].iter().copied().collect();
        let res = residual(h, &chosen);
        let open: Vec<u32> = (0..h.n_vertices() as u32)
            .filter(|v| !chosen.contains(v) && !res.closed.contains(v))
            .collect();
        ensure(snap.open == open.len(), || format!("step {}: open {} vs {}", snap.step, snap.open, open.len()))?;
        let marked: HashSet<u32> = open
            .iter()
            .copied()
            .filter(|&u| bad.partners(u).iter().any(|x| chosen.contains(x)))
            .collect();
        ensure(snap.marked == marked.len(), || format!("step {}: marked count", snap.step))?;
        let tracked: Vec<u32> = snap.vertices.iter().map(|s| s.v).collect();
        ensure(tracked == open, || format!("step {}: tracked open vertices differ", snap.step))?;
        for st in &snap.vertices {
            let (d0, d1, d2) = vertex_counts(&res.live, st.v, r, &marked, &bad);
            ensure(st.live == d0 && st.d_prime == d1 && st.d_dprime == d2, || {
                format!("step {} vertex {}: {:?}/{:?}/{:?} vs {d0:?}/{d1:?}/{d2:?}", snap.step, st.v, st.live, st.d_prime, st.d_dprime)
            })?;
            ensure(st.marked == marked.contains(&st.v), || format!("vertex {} mark", st.v))?;
            ensure(st.bookkeeping_holds(), || format!("step {} vertex {}: d(0) + d⁺ − d⁻ ≠ d", snap.step, st.v))?;
        }
    }
    Ok(log.snapshots.len())
}

// 9
fn oracle_equivalence() -> Check {
    let mut rng = rng(99);
    // creates_sunflower
    let mut hits = 0;
    for case in 0..1000 {
        let n = rng.random_range(5..=9u32);
        let w = rng.random_range(1..=3u32.min(n - 2));
        let r = rng.random_range(3..=4usize);
        let all = subsets(n, w as usize);
        let k = rng.random_range(0..=all.len().min(12));
        let mut idx: Vec<usize> = rand::seq::index::sample(&mut rng, all.len(), (k + 1).min(all.len())).into_vec();
        let cand = all[idx.pop().unwrap()].clone();
        let members: Vec<Vec<u32>> = idx.iter().map(|&i| all[i].clone()).collect();
        let mut fam = WSetFamily::new(n, w);
        for m in &members {
            fam.push(WSet::new(n, m.iter().copied()).unwrap());
        }
        let lib = creates_sunflower(&fam, &WSet::new(n, cand.iter().copied()).unwrap(), r);
        let brute = creates_sunflower_brute(&members, &cand, r);
        ensure(lib == brute, || format!("case {case}: {lib} vs {brute} for {members:?} + {cand:?}, r={r}"))?;
        hits += lib as usize;
    }
    // degree and codegree operations
    let mut ops = 0u64;
    for _ in 0..100 {
        let n = rng.random_range(6..=10u32);
        let r = rng.random_range(3..=4usize);
        let m = rng.random_range(n as usize..=4 * n as usize);
        let h = random_hypergraph(&mut rng, n, m, r);
        for a_size in 1..r {
            for a in subsets(n, a_size) {
                for b in a_size + 1..=r {
                    ensure(h.degree_up(&a, b) == degree_naive(&h, &a, b), || format!("degree {a:?}↑{b}"))?;
                    ops += 1;
                }
            }
        }
        for ell in 1..r {
            for b in ell + 1..=r {
                ensure(h.max_set_degree(ell, b) == max_set_degree_naive(&h, ell, b), || format!("Δ_{ell}({b})"))?;
            }
        }
        let table = h.codegree_table();
        for v in 0..n {
            for v2 in 0..n {
                if v == v2 {
                    continue;
                }
                let c = codegree_naive(&h, v, v2);
                ensure(h.codegree_rm1(v, v2).unwrap() == c, || format!("codegree({v},{v2})"))?;
                let key = (v.min(v2), v.max(v2));
                ensure(table.get(&key).copied().unwrap_or(0) == c, || format!("codegree table ({v},{v2})"))?;
                let a = rng.random_range(2..=r);
                let a2 = rng.random_range(2..=r);
                let k = rng.random_range(0..a.min(a2));
                ensure(h.codegree_pairs(v, v2, a, a2, k).unwrap() == codegree_pairs_naive(&h, v, v2, a, a2, k), || {
                    format!("c_{{{a},{a2}→{k}}}({v},{v2})")
                })?;
                ops += 3;
            }
        }
        let (d, phi) = (3.0, 0.5);
        let bad = h.bad_pair_map(d, phi);
        for v in 0..n {
            let want: Vec<u32> = (0..n)
                .filter(|&u| u != v && codegree_naive(&h, v, u) as f64 >= phi * d)
                .collect();
            ensure(bad.partners(v) == want.as_slice(), || format!("B({v})"))?;
        }
    }
    // incremental statistics
    let mut checkpoints = 0;
    for seed in 0..3 {
        let n = 200u64;
        let h = schur_hypergraph(n).map_err(|e| e.to_string())?;
        checkpoints += incremental_vs_scratch(&h, 3.0 * n as f64, (n as f64).powf(-1.0 / 3.0), seed)?;
    }
    for seed in 0..3 {
        let h = random_hypergraph(&mut rng, 40, 150, 4);
        checkpoints += incremental_vs_scratch(&h, 4.0, 0.5, seed)?;
    }
    Ok(format!(
        "creates_sunflower 1000/1000 ({hits} positive); {ops} degree/codegree queries; {checkpoints} checkpoints"
    ))
}

fn random_instance(rng: &mut impl Rng) -> (String, ExplicitHypergraph) {
    match rng.random_range(0..4) {
        0 => {
            let n = rng.random_range(4..=14u32);
            let r = rng.random_range(3..=4usize);
            let m = rng.random_range(n as usize..=4 * n as usize);
            (format!("random({n},{m},{r})"), random_hypergraph(rng, n, m, r))
        }
        1 => {
            let n = rng.random_range(2..=14u64);
            (format!("schur({n})"), schur_hypergraph(n).unwrap())
        }
        2 => {
            let n = rng.random_range(3..=6u32);
            (format!("triangle-free({n})"), h_free_hypergraph(n, &Pattern::triangle()).unwrap())
        }
        _ => {
            let n = rng.random_range(4..=7u64);
            let w = rng.random_range(1..=2u64);
            let p = SFParams::new(n, w, 3).unwrap();
            (format!("sunflower({n},{w},3)"), sunflower_hypergraph(&p, SunflowerCaps::default()).unwrap())
        }
    }
}

// 10
fn engine_semantics() -> Check {
    let mut rng = rng(2024);
    let cases = 1000;
    for case in 0..cases {
        let (name, h) = random_instance(&mut rng);
        let seed: u64 = rng.random();
        let fail = |what: String| format!("case {case} {name} seed {seed}: {what}");
        let log = run(&h, &RunOptions::new(seed));
        check_final_run(&h, &log).map_err(fail)?;
        ensure(run(&h, &RunOptions::new(seed)).steps == log.steps, || fail("replay differs".into()))?;

        // step by step: antichain, and agreement with the from-scratch residual
        let mut state = ProcessState::init(&h, None);
        let mut rng_main = main_rng(seed);
        let mut chosen = HashSet::new();
        while let Some(out) = state.step(&mut rng_main) {
            chosen.insert(out.chosen);
            let mut live: Vec<Vec<u32>> = state.live_edges().map(|e| e.to_vec()).collect();
            live.sort();
            ensure(is_antichain(&live), || fail(format!("step {}: not an antichain", state.step_index())))?;
            ensure(live.iter().flatten().all(|&v| state.is_open(v)), || fail("live edge on a closed vertex".into()))?;
            let res = residual(&h, &chosen);
            let mut want = res.live.clone();
            want.sort();
            ensure(live == want, || fail(format!("step {}: live edges differ from recomputation", state.step_index())))?;
        }
        ensure(state.chosen() == log.chosen().as_slice(), || fail("stepping differs from run".into()))?;

        // forced replay of the logged choices
        let mut replay = ProcessState::init(&h, None);
        for st in &log.steps {
            let out = replay.choose(st.chosen);
            ensure(out.closed == st.closed, || fail(format!("replay step {} closed set differs", st.step)))?;
        }
    }
    Ok(format!("{cases} randomized (instance, seed) cases"))
}

/// Frozen from the n = 50 brute-force oracle (non-self-inverse elements).
const SCHUR_C0: u64 = 14;

// 11
fn schur_regularity() -> Check {
    let dev = |n: u64, deg: &[u64]| -> u64 {
        (1..2 * n).filter(|&a| a != n).map(|a| deg[a as usize].abs_diff(3 * n)).max().unwrap()
    };
    let c0 = dev(50, &schur_degrees_brute(50));
    ensure(c0 == SCHUR_C0, || format!("n=50 oracle gives c0 = {c0}, frozen value {SCHUR_C0}"))?;
    let n = 500u64;
    let h = schur_hypergraph(n).map_err(|e| e.to_string())?;
    let brute = schur_degrees_brute(n);
    let mut lib = vec![0u64; 2 * n as usize];
    for a in 1..2 * n {
        lib[a as usize] = h.degree_up(&[schur_vertex(a)], 3) as u64;
        ensure(lib[a as usize] == brute[a as usize], || format!("n=500 element {a}: {} vs {}", lib[a as usize], brute[a as usize]))?;
    }
    let worst = dev(n, &lib);
    ensure(worst <= SCHUR_C0, || format!("max |d − 3n| = {worst} > c0 = {SCHUR_C0}"))?;
    let self_inverse = lib[n as usize];
    ensure(self_inverse == 2 * n - 4, || format!("self-inverse degree {self_inverse}"))?;
    for n in [100u64, 500] {
        let h = schur_hypergraph(n).map_err(|e| e.to_string())?;
        let bad = h.bad_pair_map(3.0 * n as f64, (n as f64).powf(-1.0 / 3.0));
        for a in 1..2 * n {
            let partners = bad.partners(schur_vertex(a));
            if a == n {
                ensure(partners.is_empty(), || format!("n={n}: B(n) = {partners:?}"))?;
            } else {
                let want = [schur_vertex(2 * n - a)];
                ensure(partners == want, || format!("n={n}: B({a}) = {partners:?}"))?;
            }
        }
    }
    Ok(format!(
        "c0 = {SCHUR_C0} (n=50); n=500 max |d − 3n| = {worst} off the self-inverse element (degree 2n − 4); B(v) = {{−v}} at n = 100, 500"
    ))
}

// 12
fn good_event_diagnostics() -> Check {
    // Z_V(0) on an explicit run
    let n = 200u64;
    let (big_n, d, phi) = ((2 * n - 1) as f64, 3.0 * n as f64, (n as f64).powf(-1.0 / 3.0));
    let h = schur_hypergraph(n).map_err(|e| e.to_string())?;
    let mut opts = RunOptions::new(5);
    opts.cap = StepCap::IMax { d, phi, zeta: 0.3 };
    opts.snapshot_every = Some(2);
    opts.tracking = Tracking::All;
    opts.bad_pairs = Some(h.bad_pair_map(d, phi));
    let log = run(&h, &opts);
    let cert = find_constants(3).map_err(|e| e.to_string())?;
    let params = Params::new(3, big_n, d, phi).unwrap().with_zeta(0.3).with_constants(cert.alpha, cert.beta);
    let report = good_event_check(&log, &params, &GoodEventThresholds::new(3, d, phi)).map_err(|e| e.to_string())?;
    let z0 = report.checkpoints[0].z_v;
    let want = -big_n * phi.powf(0.1);
    ensure(report.checkpoints[0].step == 0 && z0 == want, || format!("Z_V(0) = {z0}, expected {want}"))?;

    // open-vertex residuals along Schur runs at n = 10⁴
    let n = 10_000u64;
    let (big_n, d, phi) = ((2 * n - 1) as f64, 3.0 * n as f64, (n as f64).powf(-1.0 / 3.0));
    let imax = (0.3 * big_n * d.powf(-0.5) * (1.0 / phi).ln().sqrt()).floor() as usize;
    let params = Params::new(3, big_n, d, phi).unwrap().with_zeta(0.3);
    let mut maxima = Vec::new();
    for seed in 0..20 {
        let run = sumfree_run_capped(n, seed, StepCap::IMax { d, phi, zeta: 0.3 }).map_err(|e| e.to_string())?;
        let opens = run.log.open_sizes();
        ensure(opens.len() == imax + 1, || format!("seed {seed}: {} steps, i_max = {imax}", opens.len() - 1))?;
        let worst = opens
            .iter()
            .enumerate()
            .map(|(i, &open)| {
                let t = d.sqrt() * i as f64 / big_n;
                ((open as f64 - big_n * (-t * t).exp()) / big_n).abs()
            })
            .fold(0.0, f64::max);
        let lib = trajectory_comparison(&run.log, &params).map_err(|e| e.to_string())?;
        ensure((lib.max_abs_resid_v - worst).abs() < 1e-12, || format!("seed {seed}: residual {} vs {worst}", lib.max_abs_resid_v))?;
        ensure(lib.i_max == imax && i_max(big_n, d, phi, 0.3, 3) as usize == imax, || "i_max".into())?;
        maxima.push(worst);
    }
    let mean = maxima.iter().sum::<f64>() / maxima.len() as f64;
    ensure(mean <= 0.05, || format!("mean max residual {mean}"))?;
    Ok(format!("Z_V(0) = −Nφ^δ = {want:.6}; mean over 20 seeds of max |(|V(i)| − Nq)/N| = {mean:.5} (i_max = {imax})"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("D formula vs brute force", d_formula_exact),
        ("sunflower hypergraph (6,2,3) counts", sunflower_hypergraph_counts),
        ("sum-free size bound", sum_free_size_bound),
        ("blowup fate coupling", blowup_coupling),
        ("trajectory identities", trajectory_identities),
        ("trajectory constants certificate", constants_certificate),
        ("sunflower threshold transition", threshold_transition),
        ("moment formula E[X_r]", moment_formula),
        ("oracle equivalence", oracle_equivalence),
        ("engine semantics", engine_semantics),
        ("Schur regularity and bad pairs", schur_regularity),
        ("good-event diagnostics", good_event_diagnostics),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

