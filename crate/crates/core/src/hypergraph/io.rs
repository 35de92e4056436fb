//! Text edge-list format: a header line `N r`, then one edge per line as
//! space-separated increasing vertex ids.

use std::io::{BufRead, Write};

use super::{ExplicitHypergraph, HEdge};
use crate::error::{Error, Result};

pub fn write_edge_list<W: Write>(h: &ExplicitHypergraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", h.n_vertices(), h.r_bound())?;
    let mut line = String::new();
    for e in h.edges() {
        line.clear();
        for (i, v) in e.members().iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&v.to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<ExplicitHypergraph> {
    let mut lines = input.lines().enumerate();
    let (n, r) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::Parse {
                line: 0,
                msg: "missing header".into(),
            });
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })
        };
        if parts.len() != 2 {
            return Err(Error::Parse {
                line: i + 1,
                msg: "header must be `N r`".into(),
            });
        }
        break (parse(parts[0])?, parse(parts[1])?);
    };
    let mut edges = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let ids = line
            .split_whitespace()
            .map(|s| {
                s.parse::<u32>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(HEdge::new(ids)?);
    }
    ExplicitHypergraph::build(n, edges, r)
}
