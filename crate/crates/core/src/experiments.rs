//! Batch experiment drivers: normalized error metrics, parameter-landscape
//! scans, closed-form first-layer references, and the orchestration that
//! turns a declarative experiment spec into per-instance record files and
//! summary CSV tables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::ansatz::{
    build_pool, run_algorithm, select_mixer, RunConfig, RunRecord, Variant,
};
use crate::error::{Error, Result};
use crate::graph::{brute_force_maxcut, random_regular, Graph};
use crate::pauli::{CostDiagonal, MixerOp, StateVector};
use crate::util::mix_seed;
use crate::warmstart::{adjusted_mixer, best_warm_state, solve_bm_rank3, SgdConfig};

/// Energy error normalized to the exact ground energy:
/// `(energy - c_min) / |c_min|`. Rejects `c_min >= 0` (an empty or
/// zero-weight instance has no meaningful normalization).
pub fn energy_error(energy: f64, c_min: f64) -> Result<f64> {
    if c_min >= 0.0 {
        return Err(Error::DegenerateGroundEnergy(c_min));
    }
    Ok((energy - c_min) / c_min.abs())
}

/// Fraction of the initial-to-ground energy gap closed over a run:
/// `1 - (E_final - C_min) / (E_0 - C_min)`.
///
/// Returns `(value, degenerate)`; a warm start that already sits at the
/// ground energy makes the gap vanish and yields 1 with the flag set.
pub fn energy_reduction(record: &RunRecord) -> (f64, bool) {
    let gap0 = record.initial.energy - record.c_min;
    if gap0.abs() < 1e-12 {
        return (1.0, true);
    }
    let gap = record.final_energy() - record.c_min;
    (1.0 - gap / gap0, false)
}

/// Fraction of records whose best energy error within the first `max_layers`
/// layers is at or below `threshold`.
pub fn threshold_fraction(records: &[RunRecord], threshold: f64, max_layers: usize) -> f64 {
    assert!(!records.is_empty(), "threshold_fraction needs at least one record");
    let reached = records
        .iter()
        .filter(|r| r.min_energy_error(max_layers) <= threshold)
        .count();
    reached as f64 / records.len() as f64
}

/// Rectangular `(gamma, beta)` scan region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_steps: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            gamma_min: -2.0,
            gamma_max: 2.0,
            gamma_steps: 81,
            beta_min: -2.0,
            beta_max: 2.0,
            beta_steps: 81,
        }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Parses `"gmin,gmax,gsteps,bmin,bmax,bsteps"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::InvalidParameter(format!(
                "grid spec '{s}' must have 6 comma-separated fields"
            )));
        }
        let parse_f = |p: &str| -> Result<f64> {
            p.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad grid number '{p}'")))
        };
        let parse_u = |p: &str| -> Result<usize> {
            p.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad grid step count '{p}'")))
        };
        let spec = Self {
            gamma_min: parse_f(parts[0])?,
            gamma_max: parse_f(parts[1])?,
            gamma_steps: parse_u(parts[2])?,
            beta_min: parse_f(parts[3])?,
            beta_max: parse_f(parts[4])?,
            beta_steps: parse_u(parts[5])?,
        };
        if spec.gamma_steps == 0 || spec.beta_steps == 0 {
            return Err(Error::InvalidParameter("grid needs at least one step".into()));
        }
        Ok(spec)
    }
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Energy-error values of the first layer over a parameter grid.
///
/// Grid cells use the convention of the landscape plots: the constant term of
/// the cost is dropped before normalizing, so a state with no cut bias (the
/// uniform state, or any `beta = 0` column of a uniform start) sits at error
/// exactly 1 and the ground state at 0.
#[derive(Debug, Clone)]
pub struct LandscapeGrid {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Row-major `[gamma index][beta index]`.
    pub errors: Vec<Vec<f64>>,
    /// Label of the mixer the variant picked for the scanned layer.
    pub mixer: String,
}

impl LandscapeGrid {
    pub fn min(&self) -> f64 {
        self.errors
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.errors
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        let count = (self.gammas.len() * self.betas.len()) as f64;
        self.errors.iter().flatten().sum::<f64>() / count
    }

    /// Long-format CSV: `gamma,beta,energy_error`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma,beta,energy_error\n");
        for (gi, gamma) in self.gammas.iter().enumerate() {
            for (bi, beta) in self.betas.iter().enumerate() {
                writeln!(out, "{gamma},{beta},{}", self.errors[gi][bi]).unwrap();
            }
        }
        out
    }
}

/// Scans the first-layer `(gamma, beta)` landscape of a variant.
///
/// The layer's mixer is chosen exactly as the variant would choose it at
/// `p = 1` (adaptive selection at `gamma0` from the variant's initial state,
/// or the variant's fixed mixer), then the energy error is evaluated at every
/// grid point.
pub fn landscape_scan(
    g: &Graph,
    variant: Variant,
    spec: &GridSpec,
    gamma0: f64,
    seed: u64,
) -> Result<LandscapeGrid> {
    if g.edges.is_empty() {
        return Err(Error::InvalidParameter("graph has no edges".into()));
    }
    let diag = CostDiagonal::from_graph(g);
    let cut = brute_force_maxcut(g);
    let c_min = -cut.value;
    // Normalizer with the constant -W/2 dropped; strictly positive for any
    // graph with at least one edge.
    let denom = cut.value - g.total_weight() / 2.0;
    if denom <= 0.0 {
        return Err(Error::DegenerateGroundEnergy(c_min));
    }

    let (init, adjusted) = if variant.is_warm() {
        let solution = solve_bm_rank3(g, &SgdConfig::default(), seed);
        let (state, angles, _) = best_warm_state(g, &solution);
        let am = variant.uses_adjusted_mixer().then(|| adjusted_mixer(&angles));
        (state, am)
    } else {
        (StateVector::uniform(g.n), None)
    };

    let mixer = if variant.is_adaptive() {
        let pool = build_pool(g.n, adjusted.as_ref());
        let (idx, _) = select_mixer(&init, &diag, &pool, gamma0)?;
        pool[idx].clone()
    } else if let Some(am) = adjusted {
        am
    } else {
        MixerOp::standard(g.n)
    };

    let gammas = linspace(spec.gamma_min, spec.gamma_max, spec.gamma_steps);
    let betas = linspace(spec.beta_min, spec.beta_max, spec.beta_steps);
    let mut errors = Vec::with_capacity(gammas.len());
    for &gamma in &gammas {
        let mut phased = init.clone();
        phased.apply_cost_phase(gamma, &diag)?;
        let mut row = Vec::with_capacity(betas.len());
        for &beta in &betas {
            let mut state = phased.clone();
            state.apply_mixer_exp(beta, &mixer)?;
            let energy = state.expectation_cost(&diag)?;
            row.push((energy - c_min) / denom);
        }
        errors.push(row);
    }
    Ok(LandscapeGrid { gammas, betas, errors, mixer: mixer.label })
}

/// Closed-form first-layer reference values for unweighted regular graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstLayerReference {
    /// Best cut the adaptive first layer can reach: `(n D + 2) / 4`.
    pub adapt_cut: f64,
    /// Approximation ratio of that cut for 3-regular graphs:
    /// `(3n + 2) / (6n)`; present only when `D = 3`.
    pub adapt_ratio_3reg: Option<f64>,
    /// Standard QAOA first-layer cut on the ring: `3n / 4`; `D = 2` only.
    pub ring_qaoa_cut: Option<f64>,
    /// Adaptive first-layer cut on the ring: `(n + 1) / 2`; `D = 2` only.
    pub ring_adapt_cut: Option<f64>,
}

pub fn first_layer_reference(n: usize, degree: usize) -> Result<FirstLayerReference> {
    if !(n * degree).is_multiple_of(2) || degree == 0 || degree >= n {
        return Err(Error::InvalidParameter(format!(
            "no {degree}-regular graph on {n} vertices"
        )));
    }
    let nf = n as f64;
    Ok(FirstLayerReference {
        adapt_cut: (nf * degree as f64 + 2.0) / 4.0,
        adapt_ratio_3reg: (degree == 3).then(|| (3.0 * nf + 2.0) / (6.0 * nf)),
        ring_qaoa_cut: (degree == 2).then(|| 3.0 * nf / 4.0),
        ring_adapt_cut: (degree == 2).then(|| (nf + 1.0) / 2.0),
    })
}

/// One family of random regular instances in a batch.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GraphFamily {
    pub n: usize,
    pub degree: usize,
    pub weighted: bool,
    pub instances: usize,
}

impl GraphFamily {
    pub fn label(&self) -> String {
        format!(
            "n{}_d{}_{}",
            self.n,
            self.degree,
            if self.weighted { "w" } else { "u" }
        )
    }
}

fn default_max_layers() -> usize {
    15
}

fn default_threshold() -> f64 {
    0.01
}

fn default_gamma0() -> f64 {
    0.01
}

/// Declarative description of a batch experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub variants: Vec<Variant>,
    pub families: Vec<GraphFamily>,
    #[serde(default = "default_max_layers")]
    pub max_layers: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_gamma0")]
    pub gamma0: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(json)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() || self.families.is_empty() {
            return Err(Error::InvalidParameter(
                "spec needs at least one variant and one family".into(),
            ));
        }
        for f in &self.families {
            if f.n > 14 {
                return Err(Error::InvalidParameter(format!(
                    "family {} exceeds the simulator budget (n <= 14)",
                    f.label()
                )));
            }
            if f.instances == 0 {
                return Err(Error::InvalidParameter("family with zero instances".into()));
            }
            if (f.n * f.degree) % 2 != 0 || f.degree >= f.n {
                return Err(Error::InvalidParameter(format!(
                    "family {} is not realizable as a regular graph",
                    f.label()
                )));
            }
        }
        Ok(())
    }
}

/// One completed run inside a batch.
#[derive(Debug, Clone)]
pub struct BatchRecord {
    pub family: GraphFamily,
    pub family_label: String,
    pub instance: usize,
    pub variant: Variant,
    pub record: RunRecord,
}

/// All results of a batch plus any per-instance failures (the batch keeps
/// going when a single run fails).
#[derive(Debug)]
pub struct BatchOutput {
    pub records: Vec<BatchRecord>,
    pub failures: Vec<String>,
}

/// Runs every (family, instance, variant) job of the spec, persists graphs
/// and per-run records under `out_dir`, and writes the summary CSV tables.
///
/// Instances run concurrently; all randomness derives from the spec seed, so
/// identical specs produce byte-identical outputs.
pub fn run_batch(spec: &ExperimentSpec, out_dir: impl AsRef<Path>) -> Result<BatchOutput> {
    spec.validate()?;
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir.join("graphs"))?;
    std::fs::create_dir_all(out_dir.join("summary"))?;

    // Deterministic job list: one job per (family, instance).
    let jobs: Vec<(usize, usize)> = spec
        .families
        .iter()
        .enumerate()
        .flat_map(|(fi, f)| (0..f.instances).map(move |i| (fi, i)))
        .collect();

    type JobResult = (Graph, Vec<(Variant, std::result::Result<RunRecord, String>)>);
    let outcomes: Vec<Result<JobResult>> = jobs
        .par_iter()
        .map(|&(fi, instance)| {
            let family = spec.families[fi];
            let graph_seed = mix_seed(spec.seed, &[1, fi as u64, instance as u64]);
            let g = random_regular(family.n, family.degree, family.weighted, graph_seed)?;
            let run_seed = mix_seed(spec.seed, &[2, fi as u64, instance as u64]);
            let cfg = RunConfig {
                max_layers: spec.max_layers,
                gamma0: spec.gamma0,
                threshold: spec.threshold,
                seed: run_seed,
                ..RunConfig::default()
            };
            let runs = spec
                .variants
                .iter()
                .map(|&variant| {
                    (variant, run_algorithm(variant, &g, &cfg).map_err(|e| e.to_string()))
                })
                .collect();
            Ok((g, runs))
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (&(fi, instance), outcome) in jobs.iter().zip(outcomes) {
        let family = spec.families[fi];
        let label = family.label();
        let (graph, runs) = outcome?;
        graph.save(out_dir.join("graphs").join(format!("{label}_{instance:03}.json")))?;
        for (variant, run) in runs {
            match run {
                Ok(record) => {
                    let dir = out_dir.join("records").join(&label).join(variant.to_string());
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join(format!("{instance:03}.json")), record.to_json())?;
                    records.push(BatchRecord {
                        family,
                        family_label: label.clone(),
                        instance,
                        variant,
                        record,
                    });
                }
                Err(message) => {
                    failures.push(format!("{label} instance {instance} {variant}: {message}"));
                }
            }
        }
    }

    let summary = out_dir.join("summary");
    std::fs::write(
        summary.join("mean_energy_error.csv"),
        summary_mean_energy_error(&records, spec.max_layers),
    )?;
    std::fs::write(
        summary.join("threshold_fraction.csv"),
        summary_threshold_fraction(&records, spec.threshold, spec.max_layers),
    )?;
    std::fs::write(summary.join("energy_reduction.csv"), summary_energy_reduction(&records))?;
    std::fs::write(
        summary.join("cnots_to_threshold.csv"),
        summary_cnots_to_threshold(&records, spec.threshold),
    )?;
    std::fs::write(
        summary.join("overlap_reduction.csv"),
        summary_overlap_reduction(&records),
    )?;
    std::fs::write(summary.join("first_layer.csv"), summary_first_layer(&records))?;
    std::fs::write(summary.join("warm_quality.csv"), summary_warm_quality(&records))?;
    if !failures.is_empty() {
        std::fs::write(summary.join("failures.txt"), failures.join("\n"))?;
    }

    Ok(BatchOutput { records, failures })
}

fn grouped(
    records: &[BatchRecord],
) -> BTreeMap<(String, String), Vec<&BatchRecord>> {
    let mut map: BTreeMap<(String, String), Vec<&BatchRecord>> = BTreeMap::new();
    for r in records {
        map.entry((r.family_label.clone(), r.variant.to_string()))
            .or_default()
            .push(r);
    }
    map
}

/// `family,variant,layer,mean_energy_error` with layer 0 = reference state.
pub fn summary_mean_energy_error(records: &[BatchRecord], max_layers: usize) -> String {
    let mut out = String::from("family,variant,layer,mean_energy_error\n");
    for ((family, variant), group) in grouped(records) {
        for layer in 0..=max_layers {
            let mut sum = 0.0;
            let mut count = 0usize;
            for r in &group {
                let err = if layer == 0 {
                    Some(r.record.initial.energy_error)
                } else {
                    r.record.layers.get(layer - 1).map(|l| l.energy_error)
                };
                if let Some(err) = err {
                    sum += err;
                    count += 1;
                }
            }
            if count > 0 {
                writeln!(out, "{family},{variant},{layer},{}", sum / count as f64).unwrap();
            }
        }
    }
    out
}

/// `family,variant,fraction`: share of instances reaching the threshold.
pub fn summary_threshold_fraction(
    records: &[BatchRecord],
    threshold: f64,
    max_layers: usize,
) -> String {
    let mut out = String::from("family,variant,fraction\n");
    for ((family, variant), group) in grouped(records) {
        let runs: Vec<RunRecord> = group.iter().map(|r| r.record.clone()).collect();
        let fraction = threshold_fraction(&runs, threshold, max_layers);
        writeln!(out, "{family},{variant},{fraction}").unwrap();
    }
    out
}

/// `family,variant,mean_reduction,degenerate_count`.
pub fn summary_energy_reduction(records: &[BatchRecord]) -> String {
    let mut out = String::from("family,variant,mean_reduction,degenerate_count\n");
    for ((family, variant), group) in grouped(records) {
        let mut sum = 0.0;
        let mut degenerate = 0usize;
        for r in &group {
            let (value, flag) = energy_reduction(&r.record);
            sum += value;
            degenerate += flag as usize;
        }
        writeln!(
            out,
            "{family},{variant},{},{degenerate}",
            sum / group.len() as f64
        )
        .unwrap();
    }
    out
}

/// `family,variant,mean_cnots,reached_count,instance_count`.
///
/// The mean averages only the instances that reach the threshold; the counts
/// expose how selective that average is.
pub fn summary_cnots_to_threshold(records: &[BatchRecord], threshold: f64) -> String {
    let mut out = String::from("family,variant,mean_cnots,reached_count,instance_count\n");
    for ((family, variant), group) in grouped(records) {
        let reached: Vec<u64> = group
            .iter()
            .filter_map(|r| r.record.cnots_to_error(threshold))
            .collect();
        let mean = if reached.is_empty() {
            f64::NAN
        } else {
            reached.iter().sum::<u64>() as f64 / reached.len() as f64
        };
        writeln!(
            out,
            "{family},{variant},{mean},{},{}",
            reached.len(),
            group.len()
        )
        .unwrap();
    }
    out
}

/// `family,variant,instance,initial_overlap,energy_reduction`: scatter data
/// relating warm-start quality to how much of the gap the run closed.
pub fn summary_overlap_reduction(records: &[BatchRecord]) -> String {
    let mut out = String::from("family,variant,instance,initial_overlap,energy_reduction\n");
    for ((family, variant), group) in grouped(records) {
        for r in &group {
            let (reduction, _) = energy_reduction(&r.record);
            writeln!(
                out,
                "{family},{variant},{},{},{reduction}",
                r.instance, r.record.initial.ground_overlap
            )
            .unwrap();
        }
    }
    out
}

fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// `family,variant,min_cut,median_cut,max_cut,median_true_maxcut`: spread of
/// the first-layer cut values across instances.
pub fn summary_first_layer(records: &[BatchRecord]) -> String {
    let mut out = String::from("family,variant,min_cut,median_cut,max_cut,median_true_maxcut\n");
    for ((family, variant), group) in grouped(records) {
        let mut cuts: Vec<f64> = group
            .iter()
            .filter_map(|r| r.record.layers.first().map(|l| -l.energy))
            .collect();
        if cuts.is_empty() {
            continue;
        }
        let min = cuts.iter().copied().fold(f64::INFINITY, f64::min);
        let max = cuts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let med = median(&mut cuts);
        let mut true_cuts: Vec<f64> = group.iter().map(|r| -r.record.c_min).collect();
        let true_med = median(&mut true_cuts);
        writeln!(out, "{family},{variant},{min},{med},{max},{true_med}").unwrap();
    }
    out
}

/// `family,variant,below_uniform_fraction,dominant_ground_fraction`: quality
/// of the warm reference state (warm variants only).
pub fn summary_warm_quality(records: &[BatchRecord]) -> String {
    let mut out = String::from("family,variant,below_uniform_fraction,dominant_ground_fraction\n");
    for ((family, variant), group) in grouped(records) {
        let warm: Vec<&&BatchRecord> =
            group.iter().filter(|r| r.record.warm_start.is_some()).collect();
        if warm.is_empty() {
            continue;
        }
        let below = warm
            .iter()
            .filter(|r| r.record.initial.energy < -r.record.total_weight / 2.0)
            .count() as f64
            / warm.len() as f64;
        let dominant = warm
            .iter()
            .filter(|r| {
                r.record
                    .warm_start
                    .as_ref()
                    .is_some_and(|w| w.dominant_basis_is_optimal)
            })
            .count() as f64
            / warm.len() as f64;
        writeln!(out, "{family},{variant},{below},{dominant}").unwrap();
    }
    out
}
