//! Command-line driver for the MaxCut QAOA benchmarks: instance generation,
//! single algorithm runs, batch experiments, first-layer parameter-landscape
//! scans, and closed-form first-layer references.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::str::FromStr;

use qaoa_core::{
    first_layer_reference, landscape_scan, random_regular, run_algorithm, run_batch,
    ExperimentSpec, Graph, GridSpec, RunConfig, Variant,
};

#[derive(Parser)]
#[command(
    name = "qaoa",
    version,
    about = "Simulate adaptive and warm-started QAOA variants on MaxCut instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::from_str(s).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    GridSpec::from_str(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random regular graph instance as JSON.
    GenGraph {
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Degree of every vertex (n * degree must be even).
        #[arg(long)]
        degree: usize,
        /// Draw edge weights uniformly from (0, 1) instead of weight 1.
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path for the graph JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one algorithm on a graph and write the full per-layer record.
    Run {
        /// Path to a graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// One of: qaoa, qaoa-warm, qaoa-warm-am, adapt, adapt-warm,
        /// adapt-warm-am.
        #[arg(long, value_parser = parse_variant)]
        algorithm: Variant,
        #[arg(long, default_value_t = 15)]
        max_layers: usize,
        /// Initialization angle for new cost parameters and the gradient
        /// evaluation point.
        #[arg(long, default_value_t = 0.01)]
        gamma0: f64,
        /// Energy-error threshold recorded for resource metrics.
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path for the record JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a whole experiment spec and write records plus summary CSVs.
    Batch {
        /// Path to an experiment spec JSON file.
        #[arg(long)]
        spec: PathBuf,
        /// Directory for graphs, records, and summary tables.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Scan the first-layer (gamma, beta) energy-error landscape.
    Landscape {
        /// Path to a graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_variant)]
        algorithm: Variant,
        /// Grid as "gmin,gmax,gsteps,bmin,bmax,bsteps"; defaults to an
        /// 81x81 grid over [-2, 2] x [-2, 2].
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long, default_value_t = 0.01)]
        gamma0: f64,
        /// Seed for the warm-start construction of warm variants.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path for the landscape CSV (gamma,beta,energy_error).
        #[arg(long)]
        out: PathBuf,
    },
    /// Print closed-form first-layer references, optionally with empirical
    /// first-layer cuts over random instances.
    FirstLayer {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        /// Also run adapt and adapt-warm at p = 1 on this many unweighted
        /// instances and report min/median/max cuts.
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenGraph { n, degree, weighted, seed, out } => {
            let g = random_regular(n, degree, weighted, seed)?;
            g.save(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "wrote {}: n={} degree={} edges={} total weight={:.6} ({})",
                out.display(),
                g.n,
                degree,
                g.edge_count(),
                g.total_weight(),
                if weighted { "weighted" } else { "unweighted" },
            );
        }
        Command::Run { graph, algorithm, max_layers, gamma0, threshold, seed, out } => {
            let g = Graph::load(&graph)
                .with_context(|| format!("reading {}", graph.display()))?;
            let cfg = RunConfig { max_layers, gamma0, threshold, seed, ..RunConfig::default() };
            let record = run_algorithm(algorithm, &g, &cfg)?;
            std::fs::write(&out, record.to_json())
                .with_context(|| format!("writing {}", out.display()))?;

            println!(
                "{algorithm} on {} (n={}, {} edges, C_min={}):",
                graph.display(),
                g.n,
                g.edge_count(),
                record.c_min
            );
            println!(
                "  p= 0                energy {:+.6}  error {:.3e}  overlap {:.4}",
                record.initial.energy, record.initial.energy_error, record.initial.ground_overlap
            );
            for layer in &record.layers {
                println!(
                    "  p={:2} {:<14} energy {:+.6}  error {:.3e}  overlap {:.4}  cnots {}",
                    layer.layer, layer.mixer, layer.energy, layer.energy_error,
                    layer.ground_overlap, layer.cnots
                );
            }
            match record.cnots_to_error(threshold) {
                Some(c) => println!("reached error {threshold} with {c} CNOTs"),
                None => println!("did not reach error {threshold} within {max_layers} layers"),
            }
            println!("record written to {}", out.display());
        }
        Command::Batch { spec, out_dir } => {
            let json = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let spec = ExperimentSpec::from_json(&json)?;
            let output = run_batch(&spec, &out_dir)?;
            println!(
                "batch complete: {} runs over {} families x {} variants",
                output.records.len(),
                spec.families.len(),
                spec.variants.len()
            );
            if !output.failures.is_empty() {
                println!("{} runs failed (see summary/failures.txt)", output.failures.len());
            }
            println!("records and summary tables under {}", out_dir.display());
        }
        Command::Landscape { graph, algorithm, grid, gamma0, seed, out } => {
            let g = Graph::load(&graph)
                .with_context(|| format!("reading {}", graph.display()))?;
            let spec = grid.unwrap_or_default();
            let scan = landscape_scan(&g, algorithm, &spec, gamma0, seed)?;
            std::fs::write(&out, scan.to_csv())
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "{algorithm} first-layer landscape on {} ({} x {} grid, mixer {}):",
                graph.display(),
                spec.gamma_steps,
                spec.beta_steps,
                scan.mixer
            );
            println!(
                "  energy error min {:.6}  max {:.6}  mean {:.6}",
                scan.min(),
                scan.max(),
                scan.mean()
            );
            println!("grid written to {}", out.display());
        }
        Command::FirstLayer { n, degree, instances, seed } => {
            let reference = first_layer_reference(n, degree)?;
            println!("first-layer references for unweighted {degree}-regular graphs on {n} vertices:");
            println!("  adaptive p=1 cut          (nD+2)/4   = {}", reference.adapt_cut);
            if let Some(ratio) = reference.adapt_ratio_3reg {
                println!("  adaptive p=1 ratio        (3n+2)/(6n) = {ratio:.6} (best cut 3n/2 = {})", 1.5 * n as f64);
            }
            if let Some(cut) = reference.ring_adapt_cut {
                println!("  ring adaptive p=1 cut     (n+1)/2    = {cut}");
            }
            if let Some(cut) = reference.ring_qaoa_cut {
                println!("  ring standard p=1 cut     3n/4       = {cut}");
            }
            if let Some(count) = instances {
                let mut adapt_cuts = Vec::with_capacity(count);
                let mut warm_cuts = Vec::with_capacity(count);
                for i in 0..count {
                    let instance_seed = qaoa_core::util::mix_seed(seed, &[i as u64]);
                    let g = random_regular(n, degree, false, instance_seed)?;
                    let cfg =
                        RunConfig { max_layers: 1, seed: instance_seed, ..RunConfig::default() };
                    adapt_cuts.push(-run_algorithm(Variant::Adapt, &g, &cfg)?.layers[0].energy);
                    warm_cuts.push(-run_algorithm(Variant::AdaptWarm, &g, &cfg)?.layers[0].energy);
                }
                print_stats("adapt", &mut adapt_cuts);
                print_stats("adapt-warm", &mut warm_cuts);
            }
        }
    }
    Ok(())
}

fn print_stats(label: &str, cuts: &mut [f64]) {
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if cuts.len() % 2 == 1 {
        cuts[cuts.len() / 2]
    } else {
        0.5 * (cuts[cuts.len() / 2 - 1] + cuts[cuts.len() / 2])
    };
    println!(
        "  empirical {label:<11} p=1 cuts over {} instances: min {:.6}  median {median:.6}  max {:.6}",
        cuts.len(),
        cuts.first().unwrap(),
        cuts.last().unwrap()
    );
}
