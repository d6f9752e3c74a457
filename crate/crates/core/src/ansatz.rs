//! Adaptive ansatz construction and end-to-end execution of the six
//! benchmark algorithms: the mixer operator pool, commutator-based operator
//! selection, layer-by-layer growth with joint re-optimization of all
//! parameters, and CNOT accounting.
//!
//! Each layer applies `exp(-i gamma C)` followed by `exp(-i beta A)`. New
//! layers start from `(gamma, beta) = (gamma0, 0)`, which leaves the energy
//! unchanged, so recorded energies are non-increasing in the layer count.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{brute_force_maxcut, Graph};
use crate::optimizer::{minimize, SimplexConfig};
use crate::pauli::{CostDiagonal, MixerOp, PauliTerm, StateVector};
use crate::warmstart::{adjusted_mixer, best_warm_state, solve_bm_rank3, SgdConfig};

/// The six benchmarked algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Qaoa,
    QaoaWarm,
    QaoaWarmAm,
    Adapt,
    AdaptWarm,
    AdaptWarmAm,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Qaoa,
        Variant::QaoaWarm,
        Variant::QaoaWarmAm,
        Variant::Adapt,
        Variant::AdaptWarm,
        Variant::AdaptWarmAm,
    ];

    /// Selects mixers from the pool instead of using a fixed one.
    pub fn is_adaptive(&self) -> bool {
        matches!(self, Variant::Adapt | Variant::AdaptWarm | Variant::AdaptWarmAm)
    }

    /// Starts from the classically relaxed product state.
    pub fn is_warm(&self) -> bool {
        !matches!(self, Variant::Qaoa | Variant::Adapt)
    }

    /// Uses the mixer adjusted to the warm start (fixed for the QAOA form,
    /// appended to the pool for the adaptive form).
    pub fn uses_adjusted_mixer(&self) -> bool {
        matches!(self, Variant::QaoaWarmAm | Variant::AdaptWarmAm)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Qaoa => "qaoa",
            Variant::QaoaWarm => "qaoa-warm",
            Variant::QaoaWarmAm => "qaoa-warm-am",
            Variant::Adapt => "adapt",
            Variant::AdaptWarm => "adapt-warm",
            Variant::AdaptWarmAm => "adapt-warm-am",
        };
        f.write_str(s)
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qaoa" => Ok(Variant::Qaoa),
            "qaoa-warm" => Ok(Variant::QaoaWarm),
            "qaoa-warm-am" => Ok(Variant::QaoaWarmAm),
            "adapt" => Ok(Variant::Adapt),
            "adapt-warm" => Ok(Variant::AdaptWarm),
            "adapt-warm-am" => Ok(Variant::AdaptWarmAm),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm '{other}' (expected one of qaoa, qaoa-warm, \
                 qaoa-warm-am, adapt, adapt-warm, adapt-warm-am)"
            ))),
        }
    }
}

/// One cost/mixer block of the ansatz with its current parameters.
#[derive(Debug, Clone)]
pub struct AnsatzLayer {
    pub mixer: MixerOp,
    pub gamma: f64,
    pub beta: f64,
}

/// Builds the mixer operator pool for `n` qubits:
/// the global `sum X_i`, all single-qubit `X_i`, `Y_i`, the asymmetric pairs
/// `X_j Y_k`, `X_j Z_k`, `Y_j Z_k` over ordered `(j, k)`, `j != k`, and the
/// symmetric pairs `X_j X_k`, `Y_j Y_k`, `Z_j Z_k` over `j < k`. An adjusted
/// mixer, when given, is appended last.
pub fn build_pool(n: usize, adjusted: Option<&MixerOp>) -> Vec<MixerOp> {
    assert!(n >= 2, "pool needs at least two qubits");
    let mut pool = Vec::with_capacity(2 + 2 * n + 3 * n * (n - 1) + 3 * n * (n - 1) / 2);
    pool.push(MixerOp::standard(n));
    for j in 0..n {
        pool.push(MixerOp::single(PauliTerm::x(j)));
        pool.push(MixerOp::single(PauliTerm::y(j)));
    }
    type Letter = fn(usize) -> PauliTerm;
    let asymmetric: [(Letter, Letter); 3] = [
        (PauliTerm::x, PauliTerm::y),
        (PauliTerm::x, PauliTerm::z),
        (PauliTerm::y, PauliTerm::z),
    ];
    for (first, second) in asymmetric {
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    pool.push(MixerOp::single(PauliTerm::pair(first(j), second(k))));
                }
            }
        }
    }
    let symmetric: [Letter; 3] = [PauliTerm::x, PauliTerm::y, PauliTerm::z];
    for letter in symmetric {
        for j in 0..n {
            for k in (j + 1)..n {
                pool.push(MixerOp::single(PauliTerm::pair(letter(j), letter(k))));
            }
        }
    }
    if let Some(am) = adjusted {
        pool.push(am.clone());
    }
    pool
}

/// Energy gradient of a candidate mixer at the new layer's initialization:
/// with `phi = exp(-i gamma0 C)|state>`, returns `-2 Im <phi| C A |phi>`,
/// i.e. `<phi| i [C, A] |phi>`.
///
/// Diagonal candidates commute with the cost operator and return exactly 0.
pub fn mixer_gradient(
    state: &StateVector,
    diag: &CostDiagonal,
    candidate: &MixerOp,
    gamma0: f64,
) -> Result<f64> {
    if candidate.terms.iter().all(|(_, t)| t.x_mask == 0) {
        return Ok(0.0);
    }
    let mut phi = state.clone();
    phi.apply_cost_phase(gamma0, diag)?;
    gradient_at_phase(&phi, diag, candidate)
}

/// Gradient with the phased state `phi = exp(-i gamma0 C)|state>` already
/// applied; `phi` is shared across all pool candidates during selection.
fn gradient_at_phase(phi: &StateVector, diag: &CostDiagonal, candidate: &MixerOp) -> Result<f64> {
    if candidate.terms.iter().all(|(_, t)| t.x_mask == 0) {
        return Ok(0.0);
    }
    let applied = phi.apply_op(candidate)?;
    let z: num_complex::Complex64 = phi
        .amplitudes()
        .iter()
        .zip(applied.iter().zip(diag.values()))
        .map(|(a, (v, &c))| a.conj() * (c * v))
        .sum();
    Ok(-2.0 * z.im)
}

/// Returns the pool index with the largest gradient magnitude and that
/// gradient; ties break toward the lowest index.
pub fn select_mixer(
    state: &StateVector,
    diag: &CostDiagonal,
    pool: &[MixerOp],
    gamma0: f64,
) -> Result<(usize, f64)> {
    if pool.is_empty() {
        return Err(Error::InvalidParameter("empty mixer pool".into()));
    }
    let mut phi = state.clone();
    phi.apply_cost_phase(gamma0, diag)?;
    let mut best_idx = 0;
    let mut best_grad = gradient_at_phase(&phi, diag, &pool[0])?;
    for (idx, candidate) in pool.iter().enumerate().skip(1) {
        let grad = gradient_at_phase(&phi, diag, candidate)?;
        if grad.abs() > best_grad.abs() {
            best_idx = idx;
            best_grad = grad;
        }
    }
    Ok((best_idx, best_grad))
}

/// Applies the layered ansatz to `init` with the given flat parameter vector
/// `[gamma_1, beta_1, gamma_2, beta_2, ...]` (cost phase first, mixer second
/// within each layer).
pub fn evaluate_ansatz(
    init: &StateVector,
    layers: &[AnsatzLayer],
    params: &[f64],
    diag: &CostDiagonal,
) -> Result<StateVector> {
    if params.len() != 2 * layers.len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} parameters for {} layers, got {}",
            2 * layers.len(),
            layers.len(),
            params.len()
        )));
    }
    let mut state = init.clone();
    for (layer, pair) in layers.iter().zip(params.chunks_exact(2)) {
        state.apply_cost_phase(pair[0], diag)?;
        state.apply_mixer_exp(pair[1], &layer.mixer)?;
    }
    Ok(state)
}

/// Settings for one algorithm run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Ansatz depth to grow to.
    pub max_layers: usize,
    /// Initialization angle for each new cost parameter and the gradient
    /// evaluation point.
    pub gamma0: f64,
    /// Energy-error threshold recorded for resource metrics.
    pub threshold: f64,
    /// Seed for every random choice in the run (warm-start restarts).
    pub seed: u64,
    pub simplex: SimplexConfig,
    pub sgd: SgdConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_layers: 15,
            gamma0: 0.01,
            threshold: 0.01,
            seed: 0,
            simplex: SimplexConfig::default(),
            sgd: SgdConfig::default(),
        }
    }
}

/// Reference-state (`p = 0`) entry of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitialRecord {
    pub energy: f64,
    pub energy_error: f64,
    pub ground_overlap: f64,
}

/// Warm-start provenance stored alongside warm runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WarmStartMeta {
    /// Vertex rotated to the north pole in the winning candidate.
    pub pivot: usize,
    /// Relaxed objective of the Burer-Monteiro solution.
    pub objective: f64,
    /// False when gradient descent hit its iteration cap in every restart.
    pub converged: bool,
    /// Whether the largest-amplitude basis state of the warm start is an
    /// exact optimal cut.
    pub dominant_basis_is_optimal: bool,
}

/// Per-layer trace entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerRecord {
    /// 1-based layer index.
    pub layer: usize,
    /// Mixer label: `"sumX"`, `"adjusted"`, or a Pauli string like `"Y2Z5"`.
    pub mixer: String,
    /// All cost angles after this layer's joint optimization.
    pub gammas: Vec<f64>,
    /// All mixer angles after this layer's joint optimization.
    pub betas: Vec<f64>,
    /// Recorded energy: the better of the optimizer output and the layer's
    /// initialization energy.
    pub energy: f64,
    /// `(energy - C_min) / |C_min|`.
    pub energy_error: f64,
    /// Cumulative CNOT upper bound through this layer.
    pub cnots: u64,
    /// Overlap with the exact optimal-cut subspace after this layer.
    pub ground_overlap: f64,
    /// True when the simplex met its f-tolerance within budget.
    pub converged: bool,
    /// True when the optimizer failed outright and the layer kept its
    /// initialization.
    pub flagged: bool,
}

/// Complete trace of one algorithm run on one graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Variant,
    pub graph_hash: String,
    pub seed: u64,
    pub gamma0: f64,
    pub threshold: f64,
    /// Exact ground energy `-max cut`.
    pub c_min: f64,
    pub total_weight: f64,
    pub initial: InitialRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warm_start: Option<WarmStartMeta>,
    pub layers: Vec<LayerRecord>,
}

impl RunRecord {
    /// Energy after the final layer (the `p = 0` energy when no layers ran).
    pub fn final_energy(&self) -> f64 {
        self.layers.last().map_or(self.initial.energy, |l| l.energy)
    }

    /// Smallest energy error over `p = 0` and the first `max_layers` layers.
    pub fn min_energy_error(&self, max_layers: usize) -> f64 {
        self.layers
            .iter()
            .take(max_layers)
            .map(|l| l.energy_error)
            .fold(self.initial.energy_error, f64::min)
    }

    /// Cumulative CNOTs at the first layer whose error is at or below the
    /// threshold; `None` when the run never reaches it.
    pub fn cnots_to_error(&self, threshold: f64) -> Option<u64> {
        if self.initial.energy_error <= threshold {
            return Some(0);
        }
        self.layers
            .iter()
            .find(|l| l.energy_error <= threshold)
            .map(|l| l.cnots)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }
}

/// Runs one algorithm end to end and returns its full trace.
///
/// All variants share the incremental protocol: one new layer per step,
/// initialized at `(gamma0, 0)`, with every parameter re-optimized jointly by
/// Nelder-Mead. Adaptive variants pick each layer's mixer by largest gradient
/// magnitude from the pool; QAOA variants keep a fixed mixer. Warm variants
/// start from the relaxed product state instead of the uniform state.
pub fn run_algorithm(tag: Variant, g: &Graph, cfg: &RunConfig) -> Result<RunRecord> {
    if g.edges.is_empty() {
        return Err(Error::InvalidParameter("graph has no edges".into()));
    }
    let diag = CostDiagonal::from_graph(g);
    let cut = brute_force_maxcut(g);
    let c_min = -cut.value;

    let (init, warm_meta, adjusted) = if tag.is_warm() {
        let solution = solve_bm_rank3(g, &cfg.sgd, cfg.seed);
        let (state, angles, pivot) = best_warm_state(g, &solution);
        let dominant = state
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
            .map(|(b, _)| b as u64)
            .unwrap();
        let meta = WarmStartMeta {
            pivot,
            objective: solution.objective,
            converged: solution.converged,
            dominant_basis_is_optimal: cut.optimal_assignments.contains(&dominant),
        };
        let am = tag.uses_adjusted_mixer().then(|| adjusted_mixer(&angles));
        (state, Some(meta), am)
    } else {
        (StateVector::uniform(g.n), None, None)
    };

    let pool = tag.is_adaptive().then(|| build_pool(g.n, adjusted.as_ref()));
    let fixed_mixer = match (tag.is_adaptive(), &adjusted) {
        (true, _) => None,
        (false, Some(am)) => Some(am.clone()),
        (false, None) => Some(MixerOp::standard(g.n)),
    };

    let e0 = init.expectation_cost(&diag)?;
    let initial = InitialRecord {
        energy: e0,
        energy_error: recorded_error(e0, c_min)?,
        ground_overlap: init.ground_overlap(&cut),
    };

    let mut record = RunRecord {
        algorithm: tag,
        graph_hash: g.digest(),
        seed: cfg.seed,
        gamma0: cfg.gamma0,
        threshold: cfg.threshold,
        c_min,
        total_weight: g.total_weight(),
        initial,
        warm_start: warm_meta,
        layers: Vec::with_capacity(cfg.max_layers),
    };

    let cost_cnots = 2 * g.edge_count() as u64;
    let mut layers: Vec<AnsatzLayer> = Vec::with_capacity(cfg.max_layers);
    let mut params: Vec<f64> = Vec::with_capacity(2 * cfg.max_layers);
    let mut current = init.clone();
    let mut prev_energy = e0;
    let mut cnots = 0u64;

    for layer_idx in 1..=cfg.max_layers {
        let mixer = match &pool {
            Some(pool) => {
                let (idx, _grad) = select_mixer(&current, &diag, pool, cfg.gamma0)?;
                pool[idx].clone()
            }
            None => fixed_mixer.clone().expect("fixed mixer set for qaoa variants"),
        };
        layers.push(AnsatzLayer { mixer, gamma: cfg.gamma0, beta: 0.0 });
        params.push(cfg.gamma0);
        params.push(0.0);

        let outcome = {
            let objective = |p: &[f64]| {
                evaluate_ansatz(&init, &layers, p, &diag)
                    .and_then(|s| s.expectation_cost(&diag))
                    .unwrap_or(f64::NAN)
            };
            minimize(objective, &params, &cfg.simplex)
        };
        let (flagged, converged) = match outcome {
            Ok(result) => {
                params = result.x;
                (false, result.converged)
            }
            Err(Error::NonFiniteObjective { .. }) => (true, false),
            Err(other) => return Err(other),
        };

        // Keep the better of the optimizer output and the layer's
        // initialization, which enforces exact monotonicity in p.
        current = evaluate_ansatz(&init, &layers, &params, &diag)?;
        let optimized = current.expectation_cost(&diag)?;
        let energy = optimized.min(prev_energy);

        for (layer, pair) in layers.iter_mut().zip(params.chunks_exact(2)) {
            layer.gamma = pair[0];
            layer.beta = pair[1];
        }
        cnots += cost_cnots + if layers[layer_idx - 1].mixer.is_entangling() { 2 } else { 0 };

        record.layers.push(LayerRecord {
            layer: layer_idx,
            mixer: layers[layer_idx - 1].mixer.label.clone(),
            gammas: params.iter().step_by(2).copied().collect(),
            betas: params.iter().skip(1).step_by(2).copied().collect(),
            energy,
            energy_error: recorded_error(energy, c_min)?,
            cnots,
            ground_overlap: current.ground_overlap(&cut),
            converged,
            flagged,
        });
        prev_energy = energy;
    }

    Ok(record)
}

/// Recorded errors are floored at zero: a fully converged state can land a
/// few ulps below the exact ground energy through amplitude rounding.
fn recorded_error(energy: f64, c_min: f64) -> Result<f64> {
    let raw = crate::experiments::energy_error(energy, c_min)?;
    debug_assert!(raw > -1e-9, "energy {energy} far below ground {c_min}");
    Ok(raw.max(0.0))
}

/// True when a recorded mixer label names a multi-qubit Pauli string.
pub fn label_is_entangling(label: &str) -> bool {
    if label == "sumX" || label == "adjusted" {
        return false;
    }
    label.chars().filter(|c| c.is_ascii_alphabetic()).count() >= 2
}

/// Recomputes the cumulative CNOT upper bound of a run from its recorded
/// mixer sequence: `2 * n_e` per cost unitary plus 2 per entangling mixer.
pub fn cnot_counts(record: &RunRecord, g: &Graph) -> Vec<u64> {
    let cost = 2 * g.edge_count() as u64;
    let mut total = 0;
    record
        .layers
        .iter()
        .map(|l| {
            total += cost + if label_is_entangling(&l.mixer) { 2 } else { 0 };
            total
        })
        .collect()
}
