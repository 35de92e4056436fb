//! Resolved run configuration: defaults, then a config file, then flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::Flags;

/// Every knob a subcommand reads. Unset optional fields are derived from the
/// instance (see `--help` for the rules).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub instance: String,
    pub n: u64,
    pub w: u64,
    pub r: usize,
    pub b: u32,
    pub base_vertices: u32,
    pub base_edges: usize,
    pub seed: u64,
    pub trials: u64,
    pub multipliers: Vec<f64>,
    pub d: Option<f64>,
    pub phi: Option<f64>,
    pub zeta: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub grid: usize,
    pub tol: f64,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub cap_steps: Option<usize>,
    pub cap_vertices: u64,
    pub cap_edges: u64,
    pub cap_scan: u64,
    pub snapshot_every: Option<usize>,
    pub track: Option<usize>,
    pub parallel: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: String::new(),
            instance: "schur".into(),
            n: 100,
            w: 2,
            r: 3,
            b: 2,
            base_vertices: 50,
            base_edges: 100,
            seed: 1,
            trials: 100,
            multipliers: vec![0.1, 0.3, 1.0, 3.0, 10.0],
            d: None,
            phi: None,
            zeta: None,
            alpha: None,
            beta: None,
            grid: 1000,
            tol: 1e-10,
            input: None,
            out: None,
            cap_steps: None,
            cap_vertices: 5000,
            cap_edges: 10_000_000,
            cap_scan: sflab::sunflower::DEFAULT_SCAN_CAP,
            snapshot_every: None,
            track: None,
            parallel: None,
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config: RunConfig,
    pub outputs: Vec<String>,
}

/// A `.json` file is read as a manifest written by an earlier run; anything
/// else as a flat TOML table of [`RunConfig`] fields.
pub fn load(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        let m: Manifest = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(m.config)
    } else {
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

impl RunConfig {
    pub fn apply(&mut self, f: &Flags) {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &f.$field {
                    self.$field = v.clone();
                }
            )*};
        }
        macro_rules! set_opt {
            ($($field:ident),*) => {$(
                if f.$field.is_some() {
                    self.$field = f.$field.clone();
                }
            )*};
        }
        set!(instance, n, w, r, b, base_vertices, base_edges, seed, trials, grid, tol);
        set!(cap_vertices, cap_edges, cap_scan);
        set_opt!(d, phi, zeta, alpha, beta, input, out, cap_steps, snapshot_every, track, parallel);
        if !f.multipliers.is_empty() {
            self.multipliers = f.multipliers.clone();
        }
    }
}
