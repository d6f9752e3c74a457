//! Exact statevector simulation and benchmarking of adaptive and
//! warm-started QAOA variants for MaxCut on small graphs.
//!
//! The crate covers the full pipeline at desk scale (up to ~14 qubits):
//!
//! - [`graph`]: weighted graph instances, random regular generation, and an
//!   exhaustive MaxCut oracle for ground truth.
//! - [`pauli`]: dense statevector kernels applying `exp(-i gamma C)` and
//!   `exp(-i beta A)` exactly for every operator in the mixer pool.
//! - [`warmstart`]: the rank-3 low-rank relaxation of MaxCut, its mapping to
//!   a Bloch-sphere product state, the mixer adjusted to that state, and
//!   hyperplane rounding as a classical baseline.
//! - [`ansatz`]: gradient-based mixer selection, layer-by-layer ansatz
//!   growth, and full runs of the six benchmark algorithms.
//! - [`optimizer`]: deterministic Nelder-Mead simplex minimization.
//! - [`experiments`]: error metrics, parameter-landscape scans, closed-form
//!   first-layer references, and the batch driver behind the CLI.

pub mod ansatz;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod optimizer;
pub mod pauli;
pub mod util;
pub mod warmstart;

pub use ansatz::{
    build_pool, cnot_counts, evaluate_ansatz, mixer_gradient, run_algorithm, select_mixer,
    AnsatzLayer, LayerRecord, RunConfig, RunRecord, Variant,
};
pub use error::{Error, Result};
pub use experiments::{
    energy_error, energy_reduction, first_layer_reference, landscape_scan, run_batch,
    threshold_fraction, ExperimentSpec, GraphFamily, GridSpec, LandscapeGrid,
};
pub use graph::{brute_force_maxcut, random_regular, total_weight, CutResult, Graph};
pub use optimizer::{minimize, MinimizeResult, SimplexConfig};
pub use pauli::{CostDiagonal, MixerOp, PauliTerm, StateVector};
pub use warmstart::{
    adjusted_mixer, best_warm_state, bloch_to_state, hyperplane_round, rotate_to_pole,
    solve_bm_rank3, BlochAngles, RelaxedSolution, SgdConfig,
};
