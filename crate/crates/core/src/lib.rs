//! Random greedy independent-set process on r-bounded hypergraphs, the
//! sunflower-free process, and the counting and trajectory machinery around them.

pub mod combin;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod instances;
pub mod process;
pub mod rng;
pub mod scalar;
pub mod sunflower;
pub mod trajectories;

pub use error::{Error, Result};
pub use hypergraph::{BadPairs, ExplicitHypergraph, HEdge, VertexId};
pub use process::{run, ProcessState, RunLog, RunOptions, StepCap, Tracking};
pub use scalar::Scalar;
pub use trajectories::{TrajectoryParams, TrajectoryTable};

/// Default precision for the continuous-time machinery.
pub type Real = f64;
pub type Params = TrajectoryParams<f64>;
pub type Params32 = TrajectoryParams<f32>;
pub type Table = TrajectoryTable<f64>;
pub type Table32 = TrajectoryTable<f32>;
