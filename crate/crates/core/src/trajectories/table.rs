//! Tabulated trajectories with CSV export.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{f_func, q_of, s_ell, s_ell_pm_unit, FKind, Sign, TrajectoryParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTable<S> {
    pub params: TrajectoryParams<S>,
    pub tol: S,
    pub names: Vec<String>,
    /// One row per grid point, in `names` order; column 0 is `t`.
    pub rows: Vec<Vec<S>>,
}

#[derive(Serialize, Deserialize)]
struct Meta<S> {
    params: TrajectoryParams<S>,
    tol: S,
}

fn column_names(r: usize) -> Vec<String> {
    let mut names = vec!["t".to_string(), "q".to_string()];
    names.extend((2..=r).map(|l| format!("s_{l}")));
    names.extend((2..r).map(|l| format!("s_plus_{l}")));
    names.extend((2..=r).map(|l| format!("s_minus_{l}")));
    names.push("f_V".to_string());
    names.extend((2..=r).map(|l| format!("f_{l}")));
    names
}

/// Evaluates every column on a uniform grid of `grid_size` points over
/// `[0, t_max]`. The `s_ℓ^±` integrals are computed per grid interval in
/// parallel and then accumulated in order.
pub fn build_table<S: Scalar>(
    params: &TrajectoryParams<S>,
    grid_size: usize,
    tol: S,
) -> Result<TrajectoryTable<S>> {
    if grid_size < 2 {
        return Err(Error::invalid("grid needs at least 2 points"));
    }
    let r = params.r;
    let t_max = params.t_max();
    let steps = S::from_usize_lossy(grid_size - 1);
    let ts: Vec<S> = (0..grid_size)
        .map(|j| t_max * S::from_usize_lossy(j) / steps)
        .collect();
    let pm: Vec<(usize, Sign)> = (2..r)
        .map(|l| (l, Sign::Plus))
        .chain((2..=r).map(|l| (l, Sign::Minus)))
        .collect();

    let pieces: Vec<Vec<S>> = (1..grid_size)
        .into_par_iter()
        .map(|j| {
            pm.iter()
                .map(|&(l, s)| s_ell_pm_unit(ts[j - 1], ts[j], l, s, params, tol))
                .collect::<Result<Vec<S>>>()
        })
        .collect::<Result<_>>()?;

    let mut acc = vec![S::zero(); pm.len()];
    let mut rows = Vec::with_capacity(grid_size);
    for (j, &t) in ts.iter().enumerate() {
        if j > 0 {
            for (a, p) in acc.iter_mut().zip(&pieces[j - 1]) {
                *a = *a + *p;
            }
        }
        let mut row = vec![t, q_of(t, r)];
        for l in 2..=r {
            row.push(s_ell(t, l, params)?);
        }
        for (k, &(l, _)) in pm.iter().enumerate() {
            row.push(params.degree_scale(l) * acc[k]);
        }
        row.push(f_func(t, FKind::V, params)?);
        for l in 2..=r {
            row.push(f_func(t, FKind::Ell(l), params)?);
        }
        rows.push(row);
    }
    Ok(TrajectoryTable {
        params: *params,
        tol,
        names: column_names(r),
        rows,
    })
}

impl<S: Scalar + Serialize + for<'de> Deserialize<'de>> TrajectoryTable<S> {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<S>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Linear interpolation of a column at `t`, clamped to the grid.
    pub fn interpolate(&self, name: &str, t: S) -> Option<S> {
        let k = self.column_index(name)?;
        let pos = self.rows.partition_point(|row| row[0] <= t);
        if pos == 0 {
            return Some(self.rows[0][k]);
        }
        if pos == self.rows.len() {
            return Some(self.rows[pos - 1][k]);
        }
        let (a, b) = (&self.rows[pos - 1], &self.rows[pos]);
        let w = (t - a[0]) / (b[0] - a[0]);
        Some(a[k] + w * (b[k] - a[k]))
    }

    /// A `#`-prefixed JSON metadata line, a header row, then data rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let meta = Meta {
            params: self.params,
            tol: self.tol,
        };
        writeln!(w, "# {}", serde_json::to_string(&meta)?)?;
        writeln!(w, "{}", self.names.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let parse_err = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (i, first) = lines.next().ok_or_else(|| parse_err(0, "empty table"))?;
        let first = first?;
        let json = first
            .strip_prefix("# ")
            .ok_or_else(|| parse_err(i, "missing metadata line"))?;
        let meta: Meta<S> = serde_json::from_str(json)?;
        let (i, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let names: Vec<String> = header?.split(',').map(str::to_string).collect();
        if names != column_names(meta.params.r) {
            return Err(parse_err(i, "header does not match r"));
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|c| c.parse::<S>().map_err(|_| parse_err(i, "bad number")))
                .collect::<Result<Vec<S>>>()?;
            if row.len() != names.len() {
                return Err(parse_err(i, "wrong number of cells"));
            }
            rows.push(row);
        }
        Ok(TrajectoryTable {
            params: meta.params,
            tol: meta.tol,
            names,
            rows,
        })
    }
}
