//! `sflab`: command-line front end.
//!
//! Settings resolve in three layers: built-in defaults, then `--config FILE`
//! (flat TOML, or a `manifest.json` from an earlier run), then flags. Every
//! command that writes files also writes `manifest.json` with the resolved
//! configuration into its output directory; `--config <dir>/manifest.json`
//! reproduces the same files.
//!
//! Exit status: 0 on success, 1 when `verify` finds a violation, 2 on error.

mod commands;
mod config;
mod instance;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "sflab", version, about = "Random greedy independent sets, sunflower-free families and their trajectories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy, Debug)]
enum Cmd {
    /// Run the process on an instance and write its log.
    Run,
    /// Print N, D, φ, κ, i_max, the final-size bound and the dominant kernel size.
    Formulas,
    /// Estimate P(H_{n,p,w} has an r-sunflower) across p = c (ND)^{-1/r}.
    Threshold,
    /// Check the good-event conditions along a run (recorded with --input, or fresh).
    Goodevent,
    /// Find trajectory constants and tabulate q, s_ℓ, s_ℓ^±, f on [0, t_max].
    Trajectories,
    /// Re-check a family file (sunflower-free, maximal) or a sum-free set file; the kind is read from the header.
    Verify,
    /// Report the five degree/codegree hypotheses on an instance.
    Conditions,
}

impl Cmd {
    fn name(self) -> &'static str {
        match self {
            Cmd::Run => "run",
            Cmd::Formulas => "formulas",
            Cmd::Threshold => "threshold",
            Cmd::Goodevent => "goodevent",
            Cmd::Trajectories => "trajectories",
            Cmd::Verify => "verify",
            Cmd::Conditions => "conditions",
        }
    }
}

/// Flags override the config file. Defaults are listed in brackets.
#[derive(Args, Debug, Default)]
pub struct Flags {
    /// Config file: flat TOML, or a manifest.json from an earlier run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// schur | sunflower | blowup | hfree:<triangle|k3|c4|c5|path3> | file [schur]
    #[arg(long, global = true)]
    pub instance: Option<String>,
    /// Ground-set size: Z_{2n} for schur, [n] for sunflower, K_n for hfree [100]
    #[arg(long, global = true)]
    pub n: Option<u64>,
    /// Set size w for sunflower instances [2]
    #[arg(long, global = true)]
    pub w: Option<u64>,
    /// Uniformity r (sunflower size; base uniformity for blowup) [3]
    #[arg(long, global = true)]
    pub r: Option<usize>,
    /// Blowup factor [2]
    #[arg(long, global = true)]
    pub b: Option<u32>,
    /// Vertices of a random blowup base [50]
    #[arg(long, global = true)]
    pub base_vertices: Option<u32>,
    /// Edges of a random blowup base [100]
    #[arg(long, global = true)]
    pub base_edges: Option<usize>,
    /// Base seed; trial k uses seed + k [1]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Trials per threshold point [100]
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Threshold multipliers c, comma separated [0.1,0.3,1,3,10]
    #[arg(long, global = true, value_delimiter = ',')]
    pub multipliers: Vec<f64>,
    /// Degree D [instance value: 3n for schur, the exact count for sunflower, max degree otherwise]
    #[arg(long, global = true)]
    pub d: Option<f64>,
    /// φ [n^{-1/3} for schur, exp(-w²/10n) for sunflower, N^{-1/3} otherwise]
    #[arg(long, global = true)]
    pub phi: Option<f64>,
    /// ζ [0.3 for goodevent, the certificate's ζ for trajectories, λ=1/(100r) for formulas]
    #[arg(long, global = true)]
    pub zeta: Option<f64>,
    /// Trajectory constant α [found by search]
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Trajectory constant β [found by search]
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Trajectory table grid points [1000]
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Quadrature tolerance [1e-10]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Input file: edge list, run log, family or set file
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output directory [sflab-out; formulas prints to stdout]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Stop after this many steps [run to exhaustion]
    #[arg(long, global = true)]
    pub cap_steps: Option<usize>,
    /// Largest explicit sunflower hypergraph, in vertices [5000]
    #[arg(long, global = true)]
    pub cap_vertices: Option<u64>,
    /// Largest explicit sunflower hypergraph, in edges [10000000]
    #[arg(long, global = true)]
    pub cap_edges: Option<u64>,
    /// Largest permutation scan C(n,w) [10000000]
    #[arg(long, global = true)]
    pub cap_scan: Option<u64>,
    /// Record statistics every k steps [off for run; i_max/20 for goodevent]
    #[arg(long, global = true)]
    pub snapshot_every: Option<usize>,
    /// Number of tracked vertices [all if N <= 5000, else 512]
    #[arg(long, global = true)]
    pub track: Option<usize>,
    /// Worker threads [all cores]
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.flags.config {
        Some(path) => match config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => config::RunConfig::default(),
    };
    cfg.apply(&cli.flags);
    cfg.command = cli.cmd.name().to_string();
    if let Some(k) = cfg.parallel {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let started = std::time::Instant::now();
    let result = match cli.cmd {
        Cmd::Run => commands::run(&cfg),
        Cmd::Formulas => commands::formulas(&cfg),
        Cmd::Threshold => commands::threshold(&cfg),
        Cmd::Goodevent => commands::goodevent(&cfg),
        Cmd::Trajectories => commands::trajectories(&cfg),
        Cmd::Verify => commands::verify(&cfg),
        Cmd::Conditions => commands::conditions(&cfg),
    };
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
    match result {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
