use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use sflab::experiments::{
    good_event_check, threshold_experiment, trajectory_comparison, GoodEventThresholds, ThresholdConfig,
};
use sflab::hypergraph::verify_theorem_conditions;
use sflab::instances::{is_sum_free, sumfree_run_capped};
use sflab::process::i_max;
use sflab::sunflower::{
    count_d, count_n, d_terms_exact, dominant_kernel_size, is_maximal, kappa, phi_sf, sunflower_free_process,
    theorem_lower_bound, verify_family, LogScaleNumber, SFParams, WSetFamily,
};
use sflab::trajectories::{build_table, find_constants, variation_margins};
use sflab::{run as run_engine, ExplicitHypergraph, Params, RunLog, RunOptions, StepCap, Tracking};

use crate::config::{Manifest, RunConfig};
use crate::instance::{self, scale_from_label, Instance};

pub type CmdResult<T> = Result<T, Box<dyn std::error::Error>>;

pub enum Status {
    Ok,
    Violation,
}

/// Files written by one command; `finish` adds `manifest.json`.
struct Outputs<'a> {
    cfg: &'a RunConfig,
    dir: PathBuf,
    files: Vec<String>,
}

impl<'a> Outputs<'a> {
    fn new(cfg: &'a RunConfig) -> CmdResult<Self> {
        let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("sflab-out"));
        Ok(Outputs {
            cfg,
            dir,
            files: Vec::new(),
        })
    }

    fn create(&mut self, name: &str) -> CmdResult<BufWriter<File>> {
        if self.files.is_empty() {
            std::fs::create_dir_all(&self.dir)?;
        }
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    fn json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> CmdResult<()> {
        let mut f = self.create(name)?;
        serde_json::to_writer_pretty(&mut f, value)?;
        writeln!(f)?;
        f.flush()?;
        Ok(())
    }

    fn finish(self) -> CmdResult<()> {
        let manifest = Manifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.cfg.clone(),
            outputs: self.files,
        };
        std::fs::create_dir_all(&self.dir)?;
        let mut f = BufWriter::new(File::create(self.dir.join("manifest.json"))?);
        serde_json::to_writer_pretty(&mut f, &manifest)?;
        writeln!(f)?;
        f.flush()?;
        eprintln!("wrote {}", self.dir.display());
        Ok(())
    }
}

#[derive(serde::Serialize)]
struct Summary {
    instance: String,
    seed: u64,
    size: usize,
    steps: usize,
    termination: String,
}

fn step_cap(cfg: &RunConfig) -> StepCap {
    cfg.cap_steps.map_or(StepCap::Exhaust, StepCap::Steps)
}

fn engine_run(inst: &Instance, cfg: &RunConfig, cap: StepCap, snapshot_every: Option<usize>) -> RunLog {
    let mut opts = RunOptions::new(cfg.seed);
    opts.instance = inst.label.clone();
    opts.cap = cap;
    opts.snapshot_every = snapshot_every;
    if snapshot_every.is_some() {
        let n = inst.h.n_vertices();
        opts.tracking = cfg.track.map_or(Tracking::default_for(n), Tracking::Sample);
        opts.bad_pairs = Some(inst.h.bad_pair_map(inst.d, inst.phi));
    }
    run_engine(&inst.h, &opts)
}

fn termination_name(log: &RunLog) -> String {
    serde_json::to_value(log.termination)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn run(cfg: &RunConfig) -> CmdResult<Status> {
    let mut out = Outputs::new(cfg)?;
    let summary = match cfg.instance.as_str() {
        "schur" if cfg.snapshot_every.is_none() => {
            let res = sumfree_run_capped(cfg.n, cfg.seed, step_cap(cfg))?;
            let mut f = out.create("set.txt")?;
            writeln!(f, "{}", cfg.n)?;
            for a in &res.elements {
                writeln!(f, "{a}")?;
            }
            f.flush()?;
            let mut f = out.create("runlog.jsonl")?;
            res.log.write_jsonl(&mut f)?;
            f.flush()?;
            Summary {
                instance: res.log.header.instance.clone(),
                seed: cfg.seed,
                size: res.size(),
                steps: res.log.n_steps(),
                termination: termination_name(&res.log),
            }
        }
        "sunflower" => {
            let p = SFParams::new(cfg.n, cfg.w, cfg.r)?;
            let (family, scan) = sunflower_free_process(&p, cfg.seed, cfg.cap_scan)?;
            let mut f = out.create("family.txt")?;
            family.write_text(p.r, &mut f)?;
            f.flush()?;
            out.json("scan.json", &scan)?;
            Summary {
                instance: instance::sunflower_label(&p),
                seed: cfg.seed,
                size: family.len(),
                steps: scan.scanned as usize,
                termination: "exhausted".into(),
            }
        }
        _ => {
            let inst = instance::build(cfg)?;
            let log = engine_run(&inst, cfg, step_cap(cfg), cfg.snapshot_every);
            let mut f = out.create("runlog.jsonl")?;
            log.write_jsonl(&mut f)?;
            f.flush()?;
            let mut chosen = log.chosen();
            chosen.sort_unstable();
            let mut f = out.create("independent_set.txt")?;
            for v in &chosen {
                writeln!(f, "{v}")?;
            }
            f.flush()?;
            let mut f = out.create("time.csv")?;
            log.write_time_csv(inst.d, &mut f)?;
            f.flush()?;
            Summary {
                instance: inst.label,
                seed: cfg.seed,
                size: chosen.len(),
                steps: log.n_steps(),
                termination: termination_name(&log),
            }
        }
    };
    out.json("summary.json", &summary)?;
    out.finish()?;
    println!(
        "instance={} seed={} size={} steps={} termination={}",
        summary.instance, summary.seed, summary.size, summary.steps, summary.termination
    );
    Ok(Status::Ok)
}

fn exact_text(x: &LogScaleNumber) -> String {
    x.exact().map_or(String::new(), |v| v.to_string())
}

pub fn formulas(cfg: &RunConfig) -> CmdResult<Status> {
    let p = SFParams::new(cfg.n, cfg.w, cfg.r)?;
    let n_count = count_n(p.n, p.w);
    let d_count = count_d(&p);
    let phi = cfg.phi.unwrap_or_else(|| phi_sf(p.n, p.w));
    let lambda = 1.0 / (100.0 * p.r as f64);
    let zeta = cfg.zeta.unwrap_or(lambda);
    let imax = i_max(n_count.to_f64(), d_count.to_f64(), phi, zeta, p.r);
    let bound = theorem_lower_bound(&p);
    let s_star = dominant_kernel_size(&p);

    let mut rows: Vec<(String, String, String, &str)> = vec![
        ("N".into(), n_count.to_f64().to_string(), exact_text(&n_count), "C(n; w)"),
        (
            "D".into(),
            d_count.to_f64().to_string(),
            exact_text(&d_count),
            "sum over kernel sizes s < w of the r-sunflowers through a fixed w-set with kernel size s",
        ),
        ("phi".into(), phi.to_string(), String::new(), "exp(-w^2/(10n))"),
        ("kappa".into(), kappa(&p).to_string(), String::new(), "(w^2/(nD))^(1/(r-1))"),
        ("zeta".into(), zeta.to_string(), String::new(), "trajectory horizon constant"),
        (
            "i_max".into(),
            imax.to_string(),
            String::new(),
            "floor(zeta N D^(-1/(r-1)) log^(1/(r-1))(1/phi))",
        ),
        (
            "final_size_bound".into(),
            bound.value().to_string(),
            String::new(),
            "N (log(1/phi)/D)^(1/(r-1))",
        ),
        (
            "final_size_bound_alt".into(),
            bound.ln_alternative.exp().to_string(),
            String::new(),
            "10^(-1/(r-1)) (w^2/n)^(1/(r-1)) N D^(-1/(r-1))",
        ),
        (
            "dominant_kernel_size".into(),
            s_star.map_or(String::new(), |s| s.to_string()),
            s_star.map_or(String::new(), |s| s.to_string()),
            "argmax_s D_s",
        ),
    ];
    if d_count.exact().is_some() {
        for (s, term) in d_terms_exact(&p).into_iter().enumerate() {
            rows.push((
                format!("D_{s}"),
                term.to_string(),
                term.to_string(),
                "r-sunflowers through a fixed w-set with kernel size s",
            ));
        }
    }

    let mut text = String::from("quantity,value,exact,formula\n");
    for (name, value, exact, formula) in &rows {
        text.push_str(&format!("{name},{value},{exact},{formula}\n"));
    }
    match &cfg.out {
        Some(_) => {
            let mut out = Outputs::new(cfg)?;
            let mut f = out.create("formulas.csv")?;
            f.write_all(text.as_bytes())?;
            f.flush()?;
            out.finish()?;
        }
        None => print!("{text}"),
    }
    Ok(Status::Ok)
}

pub fn threshold(cfg: &RunConfig) -> CmdResult<Status> {
    let tcfg = ThresholdConfig {
        n: cfg.n,
        w: cfg.w,
        r: cfg.r,
        multipliers: cfg.multipliers.clone(),
        trials: cfg.trials,
        seed_base: cfg.seed,
    };
    let table = threshold_experiment(&tcfg)?;
    let mut out = Outputs::new(cfg)?;
    let mut f = out.create("threshold.csv")?;
    table.write_csv(&mut f)?;
    f.flush()?;
    out.finish()?;
    for row in &table.rows {
        println!(
            "c={} p={} p_hat={} ci=[{:.4}, {:.4}] E[X_r]={}",
            row.c, row.p, row.p_hat, row.ci_lo, row.ci_hi, row.expected_xr
        );
    }
    if !table.is_monotone_within_ci() {
        eprintln!("warning: p_hat is not monotone within its confidence intervals");
    }
    Ok(Status::Ok)
}

fn constants(cfg: &RunConfig, r: usize) -> CmdResult<(f64, f64, Option<sflab::trajectories::Certificate>)> {
    match (cfg.alpha, cfg.beta) {
        (Some(a), Some(b)) => Ok((a, b, None)),
        (None, None) => {
            let cert = find_constants(r)?;
            Ok((cert.alpha, cert.beta, Some(cert)))
        }
        _ => Err("pass both --alpha and --beta, or neither".into()),
    }
}

pub fn goodevent(cfg: &RunConfig) -> CmdResult<Status> {
    let zeta = cfg.zeta.unwrap_or(0.3);
    let mut out = Outputs::new(cfg)?;
    let (log, d, phi) = match &cfg.input {
        Some(path) if cfg.instance != "file" && cfg.instance != "blowup" => {
            let log = RunLog::read_jsonl(BufReader::new(File::open(path)?))?;
            let (d, phi) = scale_from_label(&log.header.instance, cfg)?;
            (log, d, phi)
        }
        _ => {
            let inst = instance::build(cfg)?;
            let cap = StepCap::IMax {
                d: inst.d,
                phi: inst.phi,
                zeta,
            };
            let steps = cap.resolve(inst.h.n_vertices(), inst.h.r_bound()).unwrap_or(0);
            let every = cfg.snapshot_every.unwrap_or((steps / 20).max(1));
            let log = engine_run(&inst, cfg, cap, Some(every));
            let mut f = out.create("runlog.jsonl")?;
            log.write_jsonl(&mut f)?;
            f.flush()?;
            (log, inst.d, inst.phi)
        }
    };
    let r = log.header.r;
    let (alpha, beta, _) = constants(cfg, r)?;
    let params = Params::new(r, log.header.n_vertices as f64, d, phi)?
        .with_zeta(zeta)
        .with_constants(alpha, beta);
    let report = good_event_check(&log, &params, &GoodEventThresholds::new(r, d, phi))?;
    let cmp = trajectory_comparison(&log, &params)?;
    let mut f = out.create("goodevent.txt")?;
    report.write_text(&mut f)?;
    f.flush()?;
    let mut f = out.create("deviation.csv")?;
    cmp.write_csv(&mut f)?;
    f.flush()?;
    out.finish()?;
    println!(
        "i_max={} tau={} first_violation={} max_abs_resid_v={} fraction_z_v_negative={}",
        report.i_max,
        report.tau,
        report.first_violation.map_or("none".into(), |s| s.to_string()),
        cmp.max_abs_resid_v,
        report.fraction_z_v_negative
    );
    Ok(Status::Ok)
}

/// `(N, D, φ)` for the trajectory scale: closed forms for schur and
/// sunflower, otherwise read off the built instance.
fn trajectory_scale(cfg: &RunConfig) -> CmdResult<(f64, f64, f64)> {
    let (n, d, phi) = match cfg.instance.as_str() {
        "schur" => {
            let n = cfg.n as f64;
            (2.0 * n - 1.0, 3.0 * n, n.powf(-1.0 / 3.0))
        }
        "sunflower" => {
            let p = SFParams::new(cfg.n, cfg.w, cfg.r)?;
            (count_n(p.n, p.w).to_f64(), count_d(&p).to_f64(), phi_sf(p.n, p.w))
        }
        _ => {
            let inst = instance::build(cfg)?;
            (inst.h.n_vertices() as f64, inst.d, inst.phi)
        }
    };
    Ok((n, cfg.d.unwrap_or(d), cfg.phi.unwrap_or(phi)))
}

pub fn trajectories(cfg: &RunConfig) -> CmdResult<Status> {
    let r = cfg.r;
    let (n, d, phi) = trajectory_scale(cfg)?;
    let (alpha, beta, cert) = constants(cfg, r)?;
    let mut out = Outputs::new(cfg)?;
    let zeta = match &cert {
        Some(c) => {
            out.json("certificate.json", c)?;
            cfg.zeta.unwrap_or(c.zeta)
        }
        None => {
            let margins = variation_margins(r, alpha, beta, 1.0, 10_000)?;
            out.json("margins.json", &margins)?;
            cfg.zeta.unwrap_or(1.0 / (100.0 * r as f64))
        }
    };
    let params = Params::new(r, n, d, phi)?.with_zeta(zeta).with_constants(alpha, beta);
    let table = build_table(&params, cfg.grid, cfg.tol)?;
    let mut f = out.create("trajectories.csv")?;
    table.write_csv(&mut f)?;
    f.flush()?;
    out.finish()?;
    println!("r={r} alpha={alpha} beta={beta} zeta={zeta} t_max={}", params.t_max());
    if let Some(c) = &cert {
        println!("certificate holds={} worst_margin={}", c.holds(), c.worst_margin());
    }
    Ok(Status::Ok)
}

fn read_set(path: &PathBuf) -> CmdResult<(u64, Vec<u64>)> {
    let mut nums = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        for tok in line?.split_whitespace() {
            nums.push(tok.parse::<u64>()?);
        }
    }
    let (&n, set) = nums.split_first().ok_or("empty set file")?;
    Ok((n, set.to_vec()))
}

pub fn verify(cfg: &RunConfig) -> CmdResult<Status> {
    let path = cfg.input.as_ref().ok_or("verify needs --input")?;
    // a set file starts with the single number n, a family file with `n w r`
    let header_fields = BufReader::new(File::open(path)?)
        .lines()
        .map_while(|l| l.ok())
        .find(|l| !l.trim().is_empty())
        .map_or(0, |l| l.split_whitespace().count());
    let (free, maximal) = if header_fields == 1 {
        let (n, mut set) = read_set(path)?;
        set.sort_unstable();
        let free = is_sum_free(&set, n);
        let maximal = free
            && (1..2 * n).filter(|a| set.binary_search(a).is_err()).all(|a| {
                let mut bigger = set.clone();
                bigger.push(a);
                !is_sum_free(&bigger, n)
            });
        println!("sum_free={free} maximal={maximal} size={}", set.len());
        (free, maximal)
    } else {
        let (family, r): (WSetFamily, usize) = WSetFamily::read_text(BufReader::new(File::open(path)?))?;
        let check = verify_family(&family, r);
        let maximal = check.sunflower_free && is_maximal(&family, r);
        println!(
            "sunflower_free={} maximal={maximal} size={} first_violation={}",
            check.sunflower_free,
            family.len(),
            check.first_violation.map_or("none".into(), |i| i.to_string())
        );
        (check.sunflower_free, maximal)
    };
    Ok(if free && maximal { Status::Ok } else { Status::Violation })
}

pub fn conditions(cfg: &RunConfig) -> CmdResult<Status> {
    let inst = instance::build(cfg)?;
    let h: &ExplicitHypergraph = &inst.h;
    let report = verify_theorem_conditions(h, h.r_bound(), inst.d, inst.phi);
    let mut out = Outputs::new(cfg)?;
    out.json("conditions.json", &report)?;
    out.finish()?;
    println!("instance={} N={} D={} phi={}", inst.label, h.n_vertices(), inst.d, inst.phi);
    for c in &report.checks {
        println!("condition {}: pass={} slack={} ({})", c.index, c.pass, c.slack, c.witness);
    }
    Ok(Status::Ok)
}
