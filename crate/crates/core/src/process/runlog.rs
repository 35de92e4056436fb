//! Run records: line-delimited JSON logs, fate reconstruction and the
//! `(i, t_i, |V(i)|)` CSV export.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::VertexId;

/// What happened to a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fate", rename_all = "snake_case")]
pub enum Fate {
    Open,
    Chosen { step: usize },
    Closed { step: usize },
}

impl Fate {
    pub fn is_chosen(&self) -> bool {
        matches!(self, Fate::Chosen { .. })
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Fate::Closed { .. })
    }

    /// Same kind of fate, ignoring the step.
    pub fn same_kind(&self, other: &Fate) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub seed: u64,
    pub instance: String,
    pub n_vertices: usize,
    pub r: usize,
}

/// One step of the process; steps are numbered from 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub chosen: VertexId,
    /// `|V(step)|` after the step.
    pub open: usize,
    pub closed: Vec<VertexId>,
}

/// Tracked statistics of one open vertex, indexed by `ℓ - 2` for `ℓ = 2..=r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexStats {
    pub v: VertexId,
    pub marked: bool,
    pub initial: Vec<u32>,
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
    /// Recount from the live edge set.
    pub live: Vec<u32>,
    pub d_prime: Vec<u32>,
    pub d_dprime: Vec<u32>,
}

impl VertexStats {
    /// `d_ℓ(v,0) + d_ℓ^+(v,i) − d_ℓ^−(v,i)` for `ℓ = idx + 2`.
    pub fn bookkept(&self, idx: usize) -> i64 {
        self.initial[idx] as i64 + self.plus[idx] as i64 - self.minus[idx] as i64
    }

    pub fn bookkeeping_holds(&self) -> bool {
        (0..self.live.len()).all(|i| self.bookkept(i) == self.live[i] as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetDegreeMax {
    pub a: usize,
    pub b: usize,
    pub max: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodegreeMax {
    pub a: usize,
    pub a2: usize,
    pub k: usize,
    pub max: u32,
}

/// Whole-hypergraph maxima needed by the crude-bound conditions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub set_degree_max: Vec<SetDegreeMax>,
    /// Maxima over non-bad pairs `(v, v')` with `v` in the codegree sample.
    pub codegree_max: Vec<CodegreeMax>,
    pub codegree_sample: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatSnapshot {
    pub step: usize,
    pub open: usize,
    pub marked: usize,
    pub vertices: Vec<VertexStats>,
    pub diagnostics: Option<Diagnostics>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Exhausted,
    StepCap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub header: RunHeader,
    pub steps: Vec<StepRecord>,
    pub snapshots: Vec<StatSnapshot>,
    pub termination: Termination,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum LogRecord {
    Header(RunHeader),
    Step(StepRecord),
    Snapshot(StatSnapshot),
    End { steps: usize, reason: Termination },
}

impl RunLog {
    pub fn chosen(&self) -> Vec<VertexId> {
        self.steps.iter().map(|s| s.chosen).collect()
    }

    /// `|V(i)|` for `i = 0..=steps`.
    pub fn open_sizes(&self) -> Vec<usize> {
        std::iter::once(self.header.n_vertices)
            .chain(self.steps.iter().map(|s| s.open))
            .collect()
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        let mut put = |rec: &LogRecord| -> Result<()> {
            serde_json::to_writer(&mut out, rec)?;
            out.write_all(b"\n")?;
            Ok(())
        };
        put(&LogRecord::Header(self.header.clone()))?;
        // snapshots interleave at their step
        let mut snaps = self.snapshots.iter().peekable();
        while let Some(s) = snaps.next_if(|s| s.step == 0) {
            put(&LogRecord::Snapshot(s.clone()))?;
        }
        for st in &self.steps {
            put(&LogRecord::Step(st.clone()))?;
            while let Some(s) = snaps.next_if(|s| s.step == st.step) {
                put(&LogRecord::Snapshot(s.clone()))?;
            }
        }
        for s in snaps {
            put(&LogRecord::Snapshot(s.clone()))?;
        }
        put(&LogRecord::End {
            steps: self.steps.len(),
            reason: self.termination,
        })
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self> {
        let mut header = None;
        let mut steps = Vec::new();
        let mut snapshots = Vec::new();
        let mut termination = None;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: LogRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            match rec {
                LogRecord::Header(h) => header = Some(h),
                LogRecord::Step(s) => steps.push(s),
                LogRecord::Snapshot(s) => snapshots.push(s),
                LogRecord::End { reason, .. } => termination = Some(reason),
            }
        }
        let header = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header record".into(),
        })?;
        Ok(RunLog {
            header,
            steps,
            snapshots,
            termination: termination.ok_or(Error::Parse {
                line: 0,
                msg: "missing end record".into(),
            })?,
        })
    }

    /// `(i, t_i, |V(i)|)` rows with `t_i = D^{1/(r−1)} i / N`.
    pub fn write_time_csv<W: Write>(&self, d: f64, mut out: W) -> Result<()> {
        let n = self.header.n_vertices as f64;
        let scale = d.powf(1.0 / (self.header.r as f64 - 1.0)) / n;
        writeln!(out, "i,t,open")?;
        for (i, open) in self.open_sizes().into_iter().enumerate() {
            writeln!(out, "{i},{},{open}", scale * i as f64)?;
        }
        Ok(())
    }
}

/// Fate of every vertex in the run.
pub fn fate_map(log: &RunLog) -> Vec<Fate> {
    let mut fates = vec![Fate::Open; log.header.n_vertices];
    for st in &log.steps {
        fates[st.chosen as usize] = Fate::Chosen { step: st.step };
        for &u in &st.closed {
            fates[u as usize] = Fate::Closed { step: st.step };
        }
    }
    fates
}
