//! Building the hypergraph named by `--instance`, with its default `D` and `φ`.

use std::fs::File;
use std::io::BufReader;

use sflab::hypergraph::read_edge_list;
use sflab::instances::{blowup, h_free_hypergraph, random_uniform, schur_hypergraph, Pattern};
use sflab::sunflower::{count_d, phi_sf, sunflower_hypergraph, SFParams, SunflowerCaps};
use sflab::ExplicitHypergraph;

use crate::commands::CmdResult;
use crate::config::RunConfig;

pub struct Instance {
    pub label: String,
    pub h: ExplicitHypergraph,
    pub d: f64,
    pub phi: f64,
}

fn max_degree(h: &ExplicitHypergraph) -> f64 {
    let r = h.r_bound();
    (0..h.n_vertices() as u32).map(|v| h.degree_up(&[v], r)).max().unwrap_or(0) as f64
}

pub fn build(cfg: &RunConfig) -> CmdResult<Instance> {
    let (label, h, d, phi) = match cfg.instance.as_str() {
        "schur" => {
            let h = schur_hypergraph(cfg.n)?;
            (format!("schur:{}", cfg.n), h, 3.0 * cfg.n as f64, (cfg.n as f64).powf(-1.0 / 3.0))
        }
        "sunflower" => {
            let p = SFParams::new(cfg.n, cfg.w, cfg.r)?;
            let caps = SunflowerCaps {
                max_vertices: cfg.cap_vertices,
                max_edges: cfg.cap_edges,
            };
            let h = sunflower_hypergraph(&p, caps)?;
            (sunflower_label(&p), h, count_d(&p).to_f64(), phi_sf(cfg.n, cfg.w))
        }
        "blowup" => {
            let (base, base_label) = match &cfg.input {
                Some(path) => (read_edge_list(BufReader::new(File::open(path)?))?, path.display().to_string()),
                None => (
                    random_uniform(cfg.base_vertices, cfg.base_edges, cfg.r, cfg.seed)?,
                    format!("random:{}:{}:{}:{}", cfg.base_vertices, cfg.base_edges, cfg.r, cfg.seed),
                ),
            };
            let d = (cfg.b as f64).powi(base.r_bound() as i32 - 1) * max_degree(&base);
            let h = blowup(&base, cfg.b)?;
            let phi = (h.n_vertices() as f64).powf(-1.0 / 3.0);
            (format!("blowup:{}:{base_label}", cfg.b), h, d, phi)
        }
        "file" => {
            let path = cfg.input.as_ref().ok_or("instance `file` needs --input")?;
            let h = read_edge_list(BufReader::new(File::open(path)?))?;
            let d = max_degree(&h);
            let phi = (h.n_vertices() as f64).powf(-1.0 / 3.0);
            (format!("file:{}", path.display()), h, d, phi)
        }
        other => {
            let Some(name) = other.strip_prefix("hfree:") else {
                return Err(format!("unknown instance `{other}`").into());
            };
            let h = h_free_hypergraph(cfg.n as u32, &Pattern::by_name(name)?)?;
            let d = max_degree(&h);
            let phi = (h.n_vertices() as f64).powf(-1.0 / 3.0);
            (format!("hfree:{name}:{}", cfg.n), h, d, phi)
        }
    };
    Ok(Instance {
        label,
        h,
        d: cfg.d.unwrap_or(d),
        phi: cfg.phi.unwrap_or(phi),
    })
}

pub fn sunflower_label(p: &SFParams) -> String {
    format!("sunflower:{}:{}:{}", p.n, p.w, p.r)
}

/// `(D, φ)` for a recorded run, from flags or the instance label in its header.
pub fn scale_from_label(label: &str, cfg: &RunConfig) -> CmdResult<(f64, f64)> {
    let parts: Vec<&str> = label.split(':').collect();
    let parsed = match parts.as_slice() {
        ["schur", n] => {
            let n: f64 = n.parse()?;
            Some((3.0 * n, n.powf(-1.0 / 3.0)))
        }
        ["sunflower", n, w, r] => {
            let p = SFParams::new(n.parse()?, w.parse()?, r.parse()?)?;
            Some((count_d(&p).to_f64(), phi_sf(p.n, p.w)))
        }
        _ => None,
    };
    match (cfg.d, cfg.phi, parsed) {
        (Some(d), Some(phi), _) => Ok((d, phi)),
        (d, phi, Some((d0, phi0))) => Ok((d.unwrap_or(d0), phi.unwrap_or(phi0))),
        _ => Err(format!("cannot infer D and phi for instance `{label}`; pass --d and --phi").into()),
    }
}
