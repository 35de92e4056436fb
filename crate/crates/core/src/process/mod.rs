//! The random greedy independent-set process on an r-bounded hypergraph.
//!
//! A step chooses a uniform open vertex `v` and then, in this order:
//! 1. removes every live edge through `v`; edges of size two close their
//!    other endpoint, larger ones are re-inserted without `v`;
//! 2. restores the antichain: a shrunk edge that contains (or equals) another
//!    live edge is dropped, otherwise every live edge containing it is dropped;
//! 3. closes the collected endpoints and drops all their live edges;
//! 4. marks every open `w` with `v ∈ B(w)`.
//!
//! For tracked vertices, every edge of size `ℓ` that appears counts toward
//! `d_ℓ^+` and every edge of size `ℓ` that disappears (by shrinking,
//! containment or closure) counts toward `d_ℓ^−`.

mod open_set;
mod runlog;
mod stats;

use rand::Rng as _;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::combin::for_each_subset;
use crate::hypergraph::{is_subset, BadPairs, ExplicitHypergraph, VertexId};
use crate::rng::{self, Rng};

pub use open_set::OpenSet;
pub use runlog::{
    fate_map, CodegreeMax, Diagnostics, Fate, RunHeader, RunLog, SetDegreeMax, StatSnapshot,
    StepRecord, Termination, VertexStats,
};
use stats::Tracker;

type EdgeVec = SmallVec<[VertexId; 4]>;

#[derive(Clone, Debug)]
struct LiveEdges {
    verts: Vec<EdgeVec>,
    alive: Vec<bool>,
    incidence: Vec<Vec<u32>>,
    live_deg: Vec<u32>,
    n_live: usize,
    /// Vertex set → id of a live edge with that set.
    index: FxHashMap<EdgeVec, u32>,
    /// Sorted vertex pair → ids of every edge (live or dead) containing it.
    pairs: FxHashMap<(VertexId, VertexId), Vec<u32>>,
}

impl LiveEdges {
    fn from_hypergraph(h: &ExplicitHypergraph) -> Self {
        let mut le = LiveEdges {
            verts: Vec::with_capacity(h.n_edges()),
            alive: Vec::with_capacity(h.n_edges()),
            incidence: vec![Vec::new(); h.n_vertices()],
            live_deg: vec![0; h.n_vertices()],
            n_live: 0,
            index: FxHashMap::default(),
            pairs: FxHashMap::default(),
        };
        for e in h.edges() {
            le.insert(EdgeVec::from_slice(e.members()));
        }
        le
    }

    fn insert(&mut self, members: EdgeVec) -> u32 {
        let id = self.verts.len() as u32;
        for &v in &members {
            self.incidence[v as usize].push(id);
            self.live_deg[v as usize] += 1;
        }
        self.index.entry(members.clone()).or_insert(id);
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                self.pairs.entry((a, b)).or_default().push(id);
            }
        }
        self.verts.push(members);
        self.alive.push(true);
        self.n_live += 1;
        id
    }

    fn kill(&mut self, id: u32) {
        let i = id as usize;
        debug_assert!(self.alive[i]);
        self.alive[i] = false;
        self.n_live -= 1;
        for &v in &self.verts[i] {
            self.live_deg[v as usize] -= 1;
        }
        if self.index.get(&self.verts[i]) == Some(&id) {
            self.index.remove(&self.verts[i]);
        }
    }

    /// Whether some other live edge is a subset of `s` (edges have at least two vertices).
    fn has_live_subset(&self, s: &[VertexId], except: u32) -> bool {
        let mut dominated = false;
        for k in 2..=s.len() {
            for_each_subset(s, k, |sub| {
                if !dominated {
                    dominated = self.index.get(sub).is_some_and(|&f| f != except);
                }
            });
            if dominated {
                return true;
            }
        }
        false
    }

    /// Live edge ids through `v`; compacts the incidence list as a side effect.
    fn live_incident(&mut self, v: VertexId) -> Vec<u32> {
        let alive = &self.alive;
        let list = &mut self.incidence[v as usize];
        list.retain(|&id| alive[id as usize]);
        list.clone()
    }

    fn live_ids_through(&self, v: VertexId) -> impl Iterator<Item = u32> + '_ {
        self.incidence[v as usize]
            .iter()
            .copied()
            .filter(|&id| self.alive[id as usize])
    }
}

/// Outcome of a single step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub chosen: VertexId,
    pub closed: Vec<VertexId>,
}

/// Which vertices get their degree statistics tracked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tracking {
    None,
    All,
    /// A fixed random sample drawn from the auxiliary stream.
    Sample(usize),
    Explicit(Vec<VertexId>),
}

impl Tracking {
    /// All vertices when `N ≤ 5000`, otherwise a sample of 512.
    pub fn default_for(n_vertices: usize) -> Self {
        if n_vertices <= 5000 {
            Tracking::All
        } else {
            Tracking::Sample(512)
        }
    }
}

/// Working state of the process: `ℋ(i)`, `V(i)`, `I(i)`, `M(i)`.
#[derive(Clone, Debug)]
pub struct ProcessState {
    r: usize,
    edges: LiveEdges,
    fates: Vec<Fate>,
    open: OpenSet,
    chosen: Vec<VertexId>,
    marked: Vec<bool>,
    n_marked: usize,
    bad: Option<BadPairs>,
    step: usize,
    tracker: Option<Tracker>,
}

impl ProcessState {
    pub fn init(h: &ExplicitHypergraph, bad_pairs: Option<BadPairs>) -> Self {
        let n = h.n_vertices();
        ProcessState {
            r: h.r_bound(),
            edges: LiveEdges::from_hypergraph(h),
            fates: vec![Fate::Open; n],
            open: OpenSet::full(n),
            chosen: Vec::new(),
            marked: vec![false; n],
            n_marked: 0,
            bad: bad_pairs,
            step: 0,
            tracker: None,
        }
    }

    /// Starts tracking `d_ℓ^±` for `vertices`; call before the first step.
    pub fn track(&mut self, vertices: Vec<VertexId>) {
        let mut tracker = Tracker::new(self.fates.len(), self.r, vertices);
        for &v in tracker.tracked().to_vec().iter() {
            let counts = self.live_counts(v);
            tracker.set_initial(v, &counts);
        }
        self.tracker = Some(tracker);
    }

    pub fn n_vertices(&self) -> usize {
        self.fates.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn open_set(&self) -> &OpenSet {
        &self.open
    }

    pub fn n_open(&self) -> usize {
        self.open.len()
    }

    pub fn chosen(&self) -> &[VertexId] {
        &self.chosen
    }

    pub fn fates(&self) -> &[Fate] {
        &self.fates
    }

    pub fn is_open(&self, v: VertexId) -> bool {
        self.open.contains(v)
    }

    pub fn is_marked(&self, v: VertexId) -> bool {
        self.marked[v as usize]
    }

    pub fn n_marked(&self) -> usize {
        self.n_marked
    }

    pub fn bad_pairs(&self) -> Option<&BadPairs> {
        self.bad.as_ref()
    }

    pub fn n_live_edges(&self) -> usize {
        self.edges.n_live
    }

    /// Live edges, each sorted.
    pub fn live_edges(&self) -> impl Iterator<Item = &[VertexId]> + '_ {
        self.edges
            .verts
            .iter()
            .zip(&self.edges.alive)
            .filter_map(|(e, &a)| a.then_some(e.as_slice()))
    }

    /// Live edges through `v`.
    pub fn live_edges_through(&self, v: VertexId) -> impl Iterator<Item = &[VertexId]> + '_ {
        self.edges
            .live_ids_through(v)
            .map(|id| self.edges.verts[id as usize].as_slice())
    }

    /// `d_ℓ(v, i)` for `ℓ = 2..=r`, recounted from the live edges.
    pub fn live_counts(&self, v: VertexId) -> Vec<u32> {
        let mut counts = vec![0u32; self.r - 1];
        for e in self.live_edges_through(v) {
            counts[e.len() - 2] += 1;
        }
        counts
    }

    /// One uniformly random step; `None` once no vertex is open.
    pub fn step(&mut self, rng: &mut Rng) -> Option<StepOutcome> {
        if self.open.is_empty() {
            return None;
        }
        let k = rng.random_range(0..self.open.len());
        let v = self.open.select(k);
        Some(self.choose(v))
    }

    /// Adds the open vertex `v` to the independent set and applies the updates.
    pub fn choose(&mut self, v: VertexId) -> StepOutcome {
        assert!(self.open.contains(v), "vertex {v} is not open");
        self.step += 1;
        let step = self.step;
        self.open.remove(v);
        self.fates[v as usize] = Fate::Chosen { step };
        self.chosen.push(v);
        self.unmark(v);

        // shrink
        let mut to_close: Vec<VertexId> = Vec::new();
        let mut shrunk: Vec<EdgeVec> = Vec::new();
        for id in self.edges.live_incident(v) {
            self.remove_edge(id);
            let e = &self.edges.verts[id as usize];
            if e.len() == 2 {
                let u = if e[0] == v { e[1] } else { e[0] };
                to_close.push(u);
            } else {
                shrunk.push(e.iter().copied().filter(|&x| x != v).collect());
            }
        }
        let new_ids: Vec<u32> = shrunk
            .into_iter()
            .map(|s| {
                let id = self.edges.insert(s);
                if let Some(t) = self.tracker.as_mut() {
                    t.created(&self.edges.verts[id as usize], &self.open);
                }
                id
            })
            .collect();

        // antichain restoration
        for &x in &new_ids {
            if !self.edges.alive[x as usize] {
                continue;
            }
            let s = self.edges.verts[x as usize].clone();
            if self.edges.has_live_subset(&s, x) {
                self.remove_edge(x);
                continue;
            }
            // every superset contains the pair s[0], s[1]
            let supersets: Vec<u32> = self
                .edges
                .pairs
                .get(&(s[0], s[1]))
                .into_iter()
                .flatten()
                .copied()
                .filter(|&f| {
                    let fe = &self.edges.verts[f as usize];
                    f != x && self.edges.alive[f as usize] && fe.len() > s.len() && is_subset(&s, fe)
                })
                .collect();
            for f in supersets {
                self.remove_edge(f);
            }
        }

        // closure
        let mut closed = Vec::new();
        for u in to_close {
            if !self.open.contains(u) {
                continue;
            }
            self.open.remove(u);
            self.fates[u as usize] = Fate::Closed { step };
            self.unmark(u);
            closed.push(u);
            for id in self.edges.live_incident(u) {
                self.remove_edge(id);
            }
        }

        // marking
        if let Some(bad) = &self.bad {
            for &w in bad.partners(v) {
                if self.open.contains(w) && !self.marked[w as usize] {
                    self.marked[w as usize] = true;
                    self.n_marked += 1;
                }
            }
        }

        closed.sort_unstable();
        StepOutcome { chosen: v, closed }
    }

    fn remove_edge(&mut self, id: u32) {
        self.edges.kill(id);
        if let Some(t) = self.tracker.as_mut() {
            t.removed(&self.edges.verts[id as usize], &self.open);
        }
    }

    fn unmark(&mut self, v: VertexId) {
        if self.marked[v as usize] {
            self.marked[v as usize] = false;
            self.n_marked -= 1;
        }
    }

    /// Snapshot of the tracked statistics (tracked vertices that are still open).
    pub fn snapshot(&self, diagnostics: Option<usize>) -> StatSnapshot {
        let vertices = match &self.tracker {
            Some(t) => t
                .tracked()
                .iter()
                .filter(|&&v| self.open.contains(v))
                .map(|&v| self.vertex_stats(v, t))
                .collect(),
            None => Vec::new(),
        };
        StatSnapshot {
            step: self.step,
            open: self.open.len(),
            marked: self.n_marked,
            vertices,
            diagnostics: diagnostics.map(|k| stats::diagnostics(self, k)),
        }
    }

    fn vertex_stats(&self, v: VertexId, t: &Tracker) -> VertexStats {
        let levels = self.r - 1;
        let mut live = vec![0u32; levels];
        let mut d_prime = vec![0u32; levels];
        let mut d_dprime = vec![0u32; levels];
        for e in self.live_edges_through(v) {
            let idx = e.len() - 2;
            live[idx] += 1;
            if e.iter().any(|&u| u != v && self.marked[u as usize]) {
                d_prime[idx] += 1;
            }
            if let Some(bad) = &self.bad {
                let has_bad_pair = e.iter().enumerate().any(|(i, &u)| {
                    u != v && e[i + 1..].iter().any(|&w| w != v && bad.is_bad(u, w))
                });
                if has_bad_pair {
                    d_dprime[idx] += 1;
                }
            }
        }
        let (initial, plus, minus) = t.counts(v);
        VertexStats {
            v,
            marked: self.marked[v as usize],
            initial: initial.to_vec(),
            plus: plus.to_vec(),
            minus: minus.to_vec(),
            live,
            d_prime,
            d_dprime,
        }
    }
}

/// Step budget for [`run`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepCap {
    /// Run until no vertex is open.
    Exhaust,
    Steps(usize),
    /// `i_max = ζ N D^{−1/(r−1)} log^{1/(r−1)}(1/φ)`, rounded down.
    IMax { d: f64, phi: f64, zeta: f64 },
}

impl StepCap {
    pub fn resolve(&self, n_vertices: usize, r: usize) -> Option<usize> {
        match *self {
            StepCap::Exhaust => None,
            StepCap::Steps(s) => Some(s),
            StepCap::IMax { d, phi, zeta } => Some(i_max(n_vertices as f64, d, phi, zeta, r) as usize),
        }
    }
}

/// `ζ N D^{−1/(r−1)} log^{1/(r−1)}(1/φ)`.
pub fn i_max(n: f64, d: f64, phi: f64, zeta: f64, r: usize) -> f64 {
    let e = 1.0 / (r as f64 - 1.0);
    (zeta * n * d.powf(-e) * (1.0 / phi).ln().powf(e)).floor()
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub instance: String,
    pub cap: StepCap,
    /// Snapshot every this many steps (plus step 0 and the last step).
    pub snapshot_every: Option<usize>,
    pub tracking: Tracking,
    pub bad_pairs: Option<BadPairs>,
    /// Codegree sample size for whole-hypergraph diagnostics, if wanted.
    pub diagnostics: Option<usize>,
}

impl RunOptions {
    pub fn new(seed: u64) -> Self {
        RunOptions {
            seed,
            instance: String::new(),
            cap: StepCap::Exhaust,
            snapshot_every: None,
            tracking: Tracking::None,
            bad_pairs: None,
            diagnostics: None,
        }
    }
}

/// Runs the process from `ℋ(0) = h` and records it.
pub fn run(h: &ExplicitHypergraph, opts: &RunOptions) -> RunLog {
    let n = h.n_vertices();
    let mut state = ProcessState::init(h, opts.bad_pairs.clone());
    let tracked: Vec<VertexId> = match &opts.tracking {
        Tracking::None => Vec::new(),
        Tracking::All => (0..n as VertexId).collect(),
        Tracking::Sample(k) => {
            let mut aux = rng::stream_rng(opts.seed, rng::AUX_STREAM);
            let mut s: Vec<VertexId> =
                rand::seq::index::sample(&mut aux, n, (*k).min(n)).into_iter().map(|i| i as VertexId).collect();
            s.sort_unstable();
            s
        }
        Tracking::Explicit(v) => v.clone(),
    };
    if !matches!(opts.tracking, Tracking::None) {
        state.track(tracked);
    }
    let cap = opts.cap.resolve(n, h.r_bound());
    let mut rng = rng::main_rng(opts.seed);
    let mut steps = Vec::new();
    let mut snapshots = Vec::new();
    if opts.snapshot_every.is_some() {
        snapshots.push(state.snapshot(opts.diagnostics));
    }
    let termination = loop {
        if cap.is_some_and(|c| state.step_index() >= c) {
            break Termination::StepCap;
        }
        let Some(out) = state.step(&mut rng) else {
            break Termination::Exhausted;
        };
        steps.push(StepRecord {
            step: state.step_index(),
            chosen: out.chosen,
            open: state.n_open(),
            closed: out.closed,
        });
        if let Some(every) = opts.snapshot_every {
            if every > 0 && state.step_index().is_multiple_of(every) {
                snapshots.push(state.snapshot(opts.diagnostics));
            }
        }
    };
    if opts.snapshot_every.is_some() && snapshots.last().map(|s| s.step) != Some(state.step_index()) {
        snapshots.push(state.snapshot(opts.diagnostics));
    }
    RunLog {
        header: RunHeader {
            seed: opts.seed,
            instance: opts.instance.clone(),
            n_vertices: n,
            r: h.r_bound(),
        },
        steps,
        snapshots,
        termination,
    }
}
