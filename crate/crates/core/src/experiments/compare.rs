//! Normalised deviations of a run from its deterministic trajectories.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::process::{i_max, RunLog};
use crate::trajectories::{q_of, s_ell_pm, Sign, TrajectoryParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub i: usize,
    pub t: f64,
    /// `(|V(i)| − Nq) / N`.
    pub resid_v: f64,
    /// Mean over unmarked tracked vertices of `(d_ℓ^+ − s_ℓ^+) / D^{(ℓ−1)/(r−1)}`,
    /// for `ℓ = 2..r`; present only at snapshot steps.
    pub resid_plus: Option<Vec<f64>>,
    /// Same for `d_ℓ^−`, `ℓ = 2..=r`.
    pub resid_minus: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryComparison {
    pub r: usize,
    pub i_max: usize,
    pub rows: Vec<DeviationRow>,
    /// `max_i |(|V(i)| − Nq)/N|` over the rows.
    pub max_abs_resid_v: f64,
}

impl TrajectoryComparison {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header = vec!["i".to_string(), "t".to_string(), "resid_V".to_string()];
        header.extend((2..self.r).map(|l| format!("resid_plus_{l}")));
        header.extend((2..=self.r).map(|l| format!("resid_minus_{l}")));
        writeln!(out, "{}", header.join(","))?;
        for row in &self.rows {
            let mut cells = vec![row.i.to_string(), row.t.to_string(), row.resid_v.to_string()];
            let fill = |v: &Option<Vec<f64>>, n: usize, cells: &mut Vec<String>| match v {
                Some(v) => cells.extend(v.iter().map(|x| x.to_string())),
                None => cells.extend(std::iter::repeat_n(String::new(), n)),
            };
            fill(&row.resid_plus, self.r - 2, &mut cells);
            fill(&row.resid_minus, self.r - 1, &mut cells);
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// One row per step `0..=min(i_max, last step)`, with degree residuals at
/// snapshot steps.
pub fn trajectory_comparison(log: &RunLog, params: &TrajectoryParams<f64>) -> Result<TrajectoryComparison> {
    let r = params.r;
    let imax = i_max(params.n, params.d, params.phi, params.zeta, r) as usize;
    let opens = std::iter::once((0, log.header.n_vertices)).chain(log.steps.iter().map(|s| (s.step, s.open)));
    let mut rows = Vec::new();
    let mut snaps = log.snapshots.iter().peekable();
    let mut max_abs: f64 = 0.0;
    for (i, open) in opens.take_while(|&(i, _)| i <= imax) {
        let t = params.t_of_i(i);
        let resid_v = (open as f64 - params.n * q_of(t, r)) / params.n;
        max_abs = max_abs.max(resid_v.abs());
        while snaps.peek().is_some_and(|s| s.step < i) {
            snaps.next();
        }
        let (mut resid_plus, mut resid_minus) = (None, None);
        if let Some(s) = snaps.peek().filter(|s| s.step == i) {
            let unmarked: Vec<_> = s.vertices.iter().filter(|v| !v.marked).collect();
            if !unmarked.is_empty() {
                let m = unmarked.len() as f64;
                let mut plus = Vec::new();
                let mut minus = Vec::new();
                for ell in 2..=r {
                    let scale = params.degree_scale(ell);
                    let k = ell - 2;
                    if ell < r {
                        let sp = s_ell_pm(t, ell, Sign::Plus, params, 1e-10)?;
                        plus.push(unmarked.iter().map(|v| v.plus[k] as f64 - sp).sum::<f64>() / m / scale);
                    }
                    let sm = s_ell_pm(t, ell, Sign::Minus, params, 1e-10)?;
                    minus.push(unmarked.iter().map(|v| v.minus[k] as f64 - sm).sum::<f64>() / m / scale);
                }
                resid_plus = Some(plus);
                resid_minus = Some(minus);
            }
        }
        rows.push(DeviationRow {
            i,
            t,
            resid_v,
            resid_plus,
            resid_minus,
        });
    }
    Ok(TrajectoryComparison {
        r,
        i_max: imax,
        rows,
        max_abs_resid_v: max_abs,
    })
}
