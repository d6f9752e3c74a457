//! Classical warm start: rank-3 Burer-Monteiro relaxation of MaxCut solved by
//! projected gradient descent on the product of 2-spheres, rotation of the
//! solution so a chosen vertex sits at the north pole, the Bloch-sphere
//! product-state mapping, the adjusted single-qubit mixer whose ground state
//! is that product state, and randomized hyperplane rounding as a purely
//! classical baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::graph::Graph;
use crate::pauli::{MixerOp, PauliTerm, StateVector};

/// Settings for the projected gradient descent on the relaxed objective.
///
/// The descent is full-gradient with tangent-plane projection and
/// renormalization after every step, restarted from several random
/// initializations.
#[derive(Debug, Clone)]
pub struct SgdConfig {
    /// Step size along the projected gradient.
    pub step: f64,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Termination threshold on the largest per-vertex projected gradient norm.
    pub tolerance: f64,
    /// Number of random restarts; the best objective wins.
    pub restarts: usize,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self { step: 0.1, max_iters: 10_000, tolerance: 1e-6, restarts: 5 }
    }
}

/// Rank-3 relaxation output: one unit vector per vertex and the relaxed
/// objective `F~ = sum_{<jk>} w_jk v_j . v_k` evaluated on those vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelaxedSolution {
    /// Unit vectors in R^3, one per vertex.
    pub vectors: Vec<[f64; 3]>,
    /// Relaxed objective value on `vectors`.
    pub objective: f64,
    /// False when every restart hit the iteration cap short of tolerance.
    #[serde(skip, default = "default_converged")]
    pub converged: bool,
}

fn default_converged() -> bool {
    true
}

impl RelaxedSolution {
    /// Recomputes the objective from the stored vectors.
    pub fn evaluate_objective(&self, g: &Graph) -> f64 {
        objective(g, &self.vectors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("solution serializes")
    }

    pub fn from_json(json: &str) -> crate::error::Result<Self> {
        Ok(serde_json::from_str(json)?)
    }
}

/// Per-vertex Bloch angles of a product state: polar `theta` in [0, pi]
/// measured from +z, azimuth `phi` in [0, 2 pi) from +x toward +y.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlochAngles {
    pub angles: Vec<(f64, f64)>,
}

fn objective(g: &Graph, vectors: &[[f64; 3]]) -> f64 {
    g.edges
        .iter()
        .map(|&(j, k, w)| w * dot(&vectors[j], &vectors[k]))
        .sum()
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: &mut [f64; 3]) {
    let norm = dot(v, v).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

fn random_unit_vector(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let mut v = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if dot(&v, &v) > 1e-12 {
            normalize(&mut v);
            return v;
        }
    }
}

/// Minimizes `F~` over unit vectors by projected gradient descent with random
/// restarts, keeping the best snapshot visited.
///
/// Non-convergence (iteration cap reached in every restart) is flagged on the
/// returned solution rather than treated as an error: the relaxation is
/// non-convex and a local minimum is still a usable warm start.
pub fn solve_bm_rank3(g: &Graph, cfg: &SgdConfig, seed: u64) -> RelaxedSolution {
    let adjacency = g.adjacency();
    let mut best: Option<RelaxedSolution> = None;

    for restart in 0..cfg.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::util::mix_seed(seed, &[restart as u64]));
        let mut vectors: Vec<[f64; 3]> = (0..g.n).map(|_| random_unit_vector(&mut rng)).collect();

        // Best snapshot across the descent; guards the output against any
        // overshooting step.
        let mut snapshot = vectors.clone();
        let mut snapshot_obj = objective(g, &vectors);
        let mut converged = false;

        for _ in 0..cfg.max_iters {
            let mut max_grad = 0.0f64;
            let mut projected: Vec<[f64; 3]> = Vec::with_capacity(g.n);
            for (j, v) in vectors.iter().enumerate() {
                let mut grad = [0.0; 3];
                for &(k, w) in &adjacency[j] {
                    grad[0] += w * vectors[k][0];
                    grad[1] += w * vectors[k][1];
                    grad[2] += w * vectors[k][2];
                }
                let radial = dot(&grad, v);
                let proj = [
                    grad[0] - radial * v[0],
                    grad[1] - radial * v[1],
                    grad[2] - radial * v[2],
                ];
                max_grad = max_grad.max(dot(&proj, &proj).sqrt());
                projected.push(proj);
            }
            if max_grad < cfg.tolerance {
                converged = true;
                break;
            }
            for (v, p) in vectors.iter_mut().zip(&projected) {
                v[0] -= cfg.step * p[0];
                v[1] -= cfg.step * p[1];
                v[2] -= cfg.step * p[2];
                normalize(v);
            }
            let obj = objective(g, &vectors);
            if obj < snapshot_obj {
                snapshot_obj = obj;
                snapshot.clone_from(&vectors);
            }
        }

        let candidate = RelaxedSolution {
            objective: snapshot_obj,
            vectors: snapshot,
            converged,
        };
        match &best {
            Some(b) if b.objective <= candidate.objective => {}
            _ => best = Some(candidate),
        }
    }
    best.expect("at least one restart")
}

/// Rotates every vector by the single SO(3) rotation that carries the pivot
/// vector to the north pole. All pairwise dot products, and therefore the
/// objective, are unchanged.
pub fn rotate_to_pole(solution: &RelaxedSolution, pivot: usize) -> RelaxedSolution {
    let v = solution.vectors[pivot];
    let rotation = rotation_to_z(&v);
    let mut vectors: Vec<[f64; 3]> = solution
        .vectors
        .iter()
        .map(|u| {
            let mut r = [
                dot(&rotation[0], u),
                dot(&rotation[1], u),
                dot(&rotation[2], u),
            ];
            normalize(&mut r);
            r
        })
        .collect();
    // Pin the pivot exactly; rounding noise below 1e-15 otherwise leaks into
    // the azimuth convention.
    vectors[pivot] = [0.0, 0.0, 1.0];
    RelaxedSolution {
        vectors,
        objective: solution.objective,
        converged: solution.converged,
    }
}

/// Row-major rotation matrix taking `v` (unit) to +z with minimal angle;
/// a half-turn about x when `v` points at the south pole.
fn rotation_to_z(v: &[f64; 3]) -> [[f64; 3]; 3] {
    let cos_angle = v[2].clamp(-1.0, 1.0);
    if cos_angle > 1.0 - 1e-14 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    if cos_angle < -1.0 + 1e-14 {
        return [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    }
    // Axis = v x z, normalized.
    let mut axis = [v[1], -v[0], 0.0];
    normalize(&mut axis);
    let angle = cos_angle.acos();
    rodrigues(&axis, angle)
}

fn rodrigues(axis: &[f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    let (x, y, z) = (axis[0], axis[1], axis[2]);
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

/// Maps each unit vector to a qubit on the Bloch sphere and forms the product
/// state `prod_j [cos(theta_j/2)|0> + e^{i phi_j} sin(theta_j/2)|1>]`.
///
/// The azimuth is set to 0 whenever `sin(theta)` vanishes to machine level,
/// where it is undefined.
pub fn bloch_to_state(solution: &RelaxedSolution) -> (StateVector, BlochAngles) {
    let n = solution.vectors.len();
    let mut angles = Vec::with_capacity(n);
    for v in &solution.vectors {
        let theta = v[2].clamp(-1.0, 1.0).acos();
        let phi = if theta.sin().abs() < 1e-12 {
            0.0
        } else {
            let raw = v[1].atan2(v[0]);
            if raw < 0.0 {
                raw + 2.0 * std::f64::consts::PI
            } else {
                raw
            }
        };
        angles.push((theta, phi));
    }

    // Build the product state one qubit at a time; qubit j lives at bit j.
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for &(theta, phi) in &angles {
        let a0 = Complex64::new((theta / 2.0).cos(), 0.0);
        let a1 = Complex64::from_polar((theta / 2.0).sin(), phi);
        let mut next = vec![Complex64::new(0.0, 0.0); amps.len() * 2];
        for (b, &amp) in amps.iter().enumerate() {
            next[b] = amp * a0;
            next[b + amps.len()] = amp * a1;
        }
        amps = next;
    }
    let state = StateVector::from_amplitudes(amps).expect("power-of-two length");
    (state, BlochAngles { angles })
}

/// Tries every vertex as the pole pivot and returns the lowest-energy product
/// state, its angles, and the chosen pivot (lowest index on ties).
pub fn best_warm_state(g: &Graph, solution: &RelaxedSolution) -> (StateVector, BlochAngles, usize) {
    let diag = crate::pauli::CostDiagonal::from_graph(g);
    let mut best: Option<(f64, StateVector, BlochAngles, usize)> = None;
    for pivot in 0..g.n {
        let rotated = rotate_to_pole(solution, pivot);
        let (state, angles) = bloch_to_state(&rotated);
        let energy = state.expectation_cost(&diag).expect("matching dimensions");
        if best.as_ref().is_none_or(|(e, ..)| energy < *e) {
            best = Some((energy, state, angles, pivot));
        }
    }
    let (_, state, angles, pivot) = best.expect("graph has at least one vertex");
    (state, angles, pivot)
}

/// The mixer `-sum_j (sin t_j cos p_j X_j + sin t_j sin p_j Y_j + cos t_j Z_j)`
/// whose unique ground state (eigenvalue `-n`) is the product state with the
/// given Bloch angles.
pub fn adjusted_mixer(angles: &BlochAngles) -> MixerOp {
    let mut terms = Vec::new();
    for (j, &(theta, phi)) in angles.angles.iter().enumerate() {
        let coeffs = [
            (-theta.sin() * phi.cos(), PauliTerm::x(j)),
            (-theta.sin() * phi.sin(), PauliTerm::y(j)),
            (-theta.cos(), PauliTerm::z(j)),
        ];
        for (c, t) in coeffs {
            if c.abs() > 1e-15 {
                terms.push((c, t));
            }
        }
    }
    MixerOp::from_terms(terms, "adjusted")
}

/// Best cut found by rounding the relaxed vectors with random hyperplanes
/// through the origin.
#[derive(Debug, Clone, Copy)]
pub struct RoundedCut {
    pub value: f64,
    pub assignment: u64,
}

pub fn hyperplane_round(
    g: &Graph,
    solution: &RelaxedSolution,
    trials: usize,
    seed: u64,
) -> RoundedCut {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = RoundedCut { value: f64::NEG_INFINITY, assignment: 0 };
    for _ in 0..trials.max(1) {
        let normal = random_unit_vector(&mut rng);
        let mut assignment = 0u64;
        for (j, v) in solution.vectors.iter().enumerate() {
            if dot(v, &normal) < 0.0 {
                assignment |= 1 << j;
            }
        }
        let value = g.cut_value(assignment);
        if value > best.value {
            best = RoundedCut { value, assignment };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::pauli::CostDiagonal;

    fn single_edge() -> Graph {
        Graph::new(2, [(0, 1, 1.0)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    fn four_cycle() -> Graph {
        Graph::ring(4).unwrap()
    }

    /// Independent oracle for the triangle relaxation: exhaustive scan over
    /// planar configurations (the optimum of a triangle is planar by
    /// symmetry), one vector pinned at angle 0.
    fn triangle_planar_minimum() -> f64 {
        let mut best = f64::INFINITY;
        let steps = 720;
        for a in 0..steps {
            for b in 0..steps {
                let ta = 2.0 * std::f64::consts::PI * a as f64 / steps as f64;
                let tb = 2.0 * std::f64::consts::PI * b as f64 / steps as f64;
                let obj = ta.cos() + tb.cos() + (ta - tb).cos();
                best = best.min(obj);
            }
        }
        best
    }

    #[test]
    fn single_edge_relaxation_is_antipodal() {
        let g = single_edge();
        let sol = solve_bm_rank3(&g, &SgdConfig::default(), 1);
        assert_abs_diff_eq!(sol.objective, -1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(dot(&sol.vectors[0], &sol.vectors[1]), -1.0, epsilon = 1e-6);
        assert!(sol.converged);
    }

    #[test]
    fn triangle_relaxation_reaches_planar_optimum() {
        // Grid-search oracle first: the planar optimum is -1.5 at 120 degree
        // separations.
        let oracle = triangle_planar_minimum();
        assert_abs_diff_eq!(oracle, -1.5, epsilon = 1e-4);

        let g = triangle();
        let sol = solve_bm_rank3(&g, &SgdConfig::default(), 2);
        assert_abs_diff_eq!(sol.objective, -1.5, epsilon = 1e-6);
        for j in 0..3 {
            for k in (j + 1)..3 {
                assert_abs_diff_eq!(dot(&sol.vectors[j], &sol.vectors[k]), -0.5, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn bipartite_cycle_saturates_weight_bound() {
        let g = four_cycle();
        let sol = solve_bm_rank3(&g, &SgdConfig::default(), 3);
        assert_abs_diff_eq!(sol.objective, -4.0, epsilon = 1e-6);
    }

    #[test]
    fn vectors_stay_unit_norm() {
        for seed in 0..10 {
            let g = crate::graph::random_regular(8, 5, true, seed).unwrap();
            let sol = solve_bm_rank3(&g, &SgdConfig::default(), seed);
            for v in &sol.vectors {
                assert_abs_diff_eq!(dot(v, v).sqrt(), 1.0, epsilon = 1e-8);
            }
            assert_abs_diff_eq!(sol.objective, sol.evaluate_objective(&g), epsilon = 1e-8);
        }
    }

    #[test]
    fn descent_is_monotone_at_small_step() {
        // A single descent pass with a conservative step never increases the
        // objective.
        for seed in 0..10 {
            let g = crate::graph::random_regular(6, 3, true, seed).unwrap();
            let adjacency = g.adjacency();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut vectors: Vec<[f64; 3]> =
                (0..g.n).map(|_| random_unit_vector(&mut rng)).collect();
            let mut prev = objective(&g, &vectors);
            for _ in 0..300 {
                for j in 0..g.n {
                    let mut grad = [0.0; 3];
                    for &(k, w) in &adjacency[j] {
                        for d in 0..3 {
                            grad[d] += w * vectors[k][d];
                        }
                    }
                    let radial = dot(&grad, &vectors[j]);
                    for d in 0..3 {
                        vectors[j][d] -= 0.02 * (grad[d] - radial * vectors[j][d]);
                    }
                    let mut v = vectors[j];
                    normalize(&mut v);
                    vectors[j] = v;
                }
                let now = objective(&g, &vectors);
                assert!(now <= prev + 1e-12, "seed {seed}: {now} > {prev}");
                prev = now;
            }
        }
    }

    #[test]
    fn rotation_preserves_objective_and_pins_pivot() {
        for seed in 0..10 {
            let g = crate::graph::random_regular(8, 3, true, seed).unwrap();
            let sol = solve_bm_rank3(&g, &SgdConfig::default(), seed);
            for pivot in 0..g.n {
                let rotated = rotate_to_pole(&sol, pivot);
                assert_abs_diff_eq!(rotated.vectors[pivot][2], 1.0, epsilon = 1e-10);
                assert_abs_diff_eq!(
                    rotated.evaluate_objective(&g),
                    sol.evaluate_objective(&g),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn rotation_handles_poles() {
        let sol = RelaxedSolution {
            vectors: vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]],
            objective: -1.0,
            converged: true,
        };
        let r0 = rotate_to_pole(&sol, 0);
        assert_eq!(r0.vectors[0], [0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(r0.vectors[1][2], -1.0, epsilon = 1e-12);
        let r1 = rotate_to_pole(&sol, 1);
        assert_eq!(r1.vectors[1], [0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(r1.vectors[0][2], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn bloch_mapping_of_poles_and_equator() {
        let sol = RelaxedSolution {
            vectors: vec![[0.0, 0.0, 1.0]],
            objective: 0.0,
            converged: true,
        };
        let (state, angles) = bloch_to_state(&sol);
        assert_abs_diff_eq!(state.amplitudes()[0].re, 1.0, epsilon = 1e-12);
        assert_eq!(angles.angles[0].1, 0.0);

        let south = RelaxedSolution {
            vectors: vec![[0.0, 0.0, -1.0]],
            objective: 0.0,
            converged: true,
        };
        let (state, angles) = bloch_to_state(&south);
        assert_abs_diff_eq!(state.amplitudes()[1].re, 1.0, epsilon = 1e-12);
        assert_eq!(angles.angles[0].1, 0.0, "azimuth pinned to 0 at the pole");

        let equator = RelaxedSolution {
            vectors: vec![[1.0, 0.0, 0.0]],
            objective: 0.0,
            converged: true,
        };
        let (state, _) = bloch_to_state(&equator);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(state.amplitudes()[0].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(state.amplitudes()[1].re, r, epsilon = 1e-12);
    }

    #[test]
    fn warm_state_of_single_edge_is_optimal_basis_state() {
        let g = single_edge();
        let sol = solve_bm_rank3(&g, &SgdConfig::default(), 4);
        let (state, _, _) = best_warm_state(&g, &sol);
        let diag = CostDiagonal::from_graph(&g);
        assert_abs_diff_eq!(state.expectation_cost(&diag).unwrap(), -1.0, epsilon = 1e-9);
    }

    #[test]
    fn warm_state_of_bipartite_cycle_hits_max_cut() {
        let g = four_cycle();
        let sol = solve_bm_rank3(&g, &SgdConfig::default(), 5);
        let (state, _, _) = best_warm_state(&g, &sol);
        let diag = CostDiagonal::from_graph(&g);
        assert_abs_diff_eq!(state.expectation_cost(&diag).unwrap(), -4.0, epsilon = 1e-8);
    }

    #[test]
    fn warm_state_beats_uniform_on_weighted_instances() {
        let mut wins = 0;
        for seed in 0..10 {
            let g = crate::graph::random_regular(6, 3, true, seed).unwrap();
            let sol = solve_bm_rank3(&g, &SgdConfig::default(), seed);
            let (state, _, _) = best_warm_state(&g, &sol);
            let diag = CostDiagonal::from_graph(&g);
            if state.expectation_cost(&diag).unwrap() < -g.total_weight() / 2.0 {
                wins += 1;
            }
        }
        assert!(wins >= 9, "warm start beat the uniform state only {wins}/10 times");
    }

    #[test]
    fn adjusted_mixer_recovers_axis_aligned_forms() {
        let north = BlochAngles { angles: vec![(0.0, 0.0); 3] };
        let m = adjusted_mixer(&north);
        assert_eq!(m.terms.len(), 3);
        for (c, t) in &m.terms {
            assert_abs_diff_eq!(*c, -1.0, epsilon = 1e-15);
            assert_eq!(t.x_mask, 0);
        }
        let ground = StateVector::basis(3, 0);
        assert_abs_diff_eq!(ground.expectation_op(&m).unwrap(), -3.0, epsilon = 1e-12);

        let plus_x = BlochAngles {
            angles: vec![(std::f64::consts::FRAC_PI_2, 0.0); 2],
        };
        let m = adjusted_mixer(&plus_x);
        assert_eq!(m.terms.len(), 2);
        for (c, t) in &m.terms {
            assert_abs_diff_eq!(*c, -1.0, epsilon = 1e-12);
            assert_eq!(t.z_mask, 0);
        }
        let plus = StateVector::uniform(2);
        assert_abs_diff_eq!(plus.expectation_op(&m).unwrap(), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn warm_state_is_adjusted_mixer_ground_state() {
        for seed in 0..10 {
            let g = crate::graph::random_regular(6, 3, true, seed).unwrap();
            let sol = solve_bm_rank3(&g, &SgdConfig::default(), seed);
            let (state, angles, _) = best_warm_state(&g, &sol);
            let m = adjusted_mixer(&angles);
            assert_abs_diff_eq!(state.expectation_op(&m).unwrap(), -(g.n as f64), epsilon = 1e-8);
        }
    }

    #[test]
    fn hyperplane_rounding_examples() {
        let g = single_edge();
        let sol = RelaxedSolution {
            vectors: vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]],
            objective: -1.0,
            converged: true,
        };
        let cut = hyperplane_round(&g, &sol, 20, 7);
        assert_eq!(cut.value, 1.0);

        let ring = four_cycle();
        let sol = RelaxedSolution {
            vectors: vec![
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
            objective: -4.0,
            converged: true,
        };
        let cut = hyperplane_round(&ring, &sol, 20, 8);
        assert_eq!(cut.value, 4.0);
    }

    #[test]
    fn hyperplane_rounding_of_triangle_cuts_two() {
        // The 120-degree planar solution: any hyperplane splits the three
        // coplanar vectors 1|2, cutting 2 of the 3 edges.
        let g = triangle();
        let sol = solve_bm_rank3(&g, &SgdConfig::default(), 11);
        let cut = hyperplane_round(&g, &sol, 100, 12);
        assert_abs_diff_eq!(cut.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn solution_json_round_trip() {
        let g = triangle();
        let sol = solve_bm_rank3(&g, &SgdConfig::default(), 13);
        let parsed = RelaxedSolution::from_json(&sol.to_json()).unwrap();
        assert_eq!(parsed.vectors, sol.vectors);
        assert_eq!(parsed.objective, sol.objective);
    }
}
