//! Weighted undirected graphs, random regular instance generation, and the
//! exact MaxCut oracle used as ground truth by every benchmark.
//!
//! Assignments are packed into `u64` bitstrings: bit `j` is the side of
//! vertex `j`. The cut value of an assignment is
//! `F = 1/2 * sum_{<jk>} w_jk * (1 - x_j x_k)` with `x_j = +1` for bit 0 and
//! `-1` for bit 1, i.e. the total weight of edges crossing the partition.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

/// Weighted undirected graph over vertices `0..n`.
///
/// Edges are stored as `(j, k, w)` with `j < k`, sorted by `(j, k)`, with no
/// duplicates or self-loops, and strictly positive finite weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    /// Vertex count.
    pub n: usize,
    /// Sorted edge list `(j, k, w)` with `j < k`.
    pub edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Builds a graph, normalizing edge endpoint order and sorting the list.
    ///
    /// Rejects self-loops, duplicate edges, out-of-range endpoints, and
    /// non-finite or non-positive weights (a zero weight is a missing edge).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (j, k, w) in edges {
            if j == k {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {j}")));
            }
            let (j, k) = if j < k { (j, k) } else { (k, j) };
            if k >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({j},{k}) out of range for n={n}"
                )));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidGraph(format!("edge ({j},{k}) has weight {w}")));
            }
            normalized.push((j, k, w));
        }
        normalized.sort_by_key(|a| (a.0, a.1));
        if normalized.windows(2).any(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1)) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        Ok(Self { n, edges: normalized })
    }

    /// The unweighted cycle `0-1-...-(n-1)-0`.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("ring needs n >= 3, got {n}")));
        }
        Self::new(n, (0..n).map(|j| (j, (j + 1) % n, 1.0)))
    }

    /// The unweighted complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(
            n,
            (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k, 1.0))),
        )
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }

    /// Degree of each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(j, k, _) in &self.edges {
            deg[j] += 1;
            deg[k] += 1;
        }
        deg
    }

    /// Weighted adjacency list: `adj[j]` holds `(k, w)` for every neighbor.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(j, k, w) in &self.edges {
            adj[j].push((k, w));
            adj[k].push((j, w));
        }
        adj
    }

    /// Cut value of a packed assignment: total weight of edges whose
    /// endpoints fall on opposite sides.
    pub fn cut_value(&self, assignment: u64) -> f64 {
        let mut cut = 0.0;
        for &(j, k, w) in &self.edges {
            if (assignment >> j) & 1 != (assignment >> k) & 1 {
                cut += w;
            }
        }
        cut
    }

    /// Stable hex digest of the canonical JSON encoding, for record files.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("graph serializes");
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Serializes to the on-disk JSON format `{"n": .., "edges": [[j,k,w],..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    /// Parses and validates the on-disk JSON format.
    ///
    /// Stricter than [`Graph::new`]: the edge list must already satisfy
    /// `j < k` and be sorted, as the format requires.
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: Graph = serde_json::from_str(json)?;
        for &(j, k, _) in &raw.edges {
            if j >= k {
                return Err(Error::InvalidGraph(format!(
                    "edge ({j},{k}) not in j < k form"
                )));
            }
        }
        if raw.edges.windows(2).any(|p| (p[0].0, p[0].1) >= (p[1].0, p[1].1)) {
            return Err(Error::InvalidGraph("edge list not sorted by (j,k)".into()));
        }
        // Re-run the full structural checks.
        Graph::new(raw.n, raw.edges)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let json = std::fs::read_to_string(path)?;
        Self::from_json(&json)
    }
}

/// Exact MaxCut solution: the optimal value and every optimal assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    /// Maximum cut value.
    pub value: f64,
    /// All assignments attaining `value`, sorted, closed under global flip.
    pub optimal_assignments: Vec<u64>,
}

/// Samples a uniformly random `degree`-regular graph on `n` vertices via the
/// pairing (configuration) model, rejecting pairings with self-loops or
/// multi-edges.
///
/// Dense degrees (`degree > (n-1)/2`) are sampled as the complement of an
/// `(n-1-degree)`-regular graph: complementation is a bijection between the
/// two families, so uniformity is preserved, while rejection sampling the
/// dense side directly is hopeless (for 7-regular graphs on 10 vertices the
/// acceptance rate is below 1e-9).
///
/// Weighted instances draw each edge weight i.i.d. uniform from (0, 1);
/// unweighted instances use weight 1. Identical arguments produce identical
/// graphs.
pub fn random_regular(n: usize, degree: usize, weighted: bool, seed: u64) -> Result<Graph> {
    if degree >= n {
        return Err(Error::InvalidParameter(format!(
            "degree {degree} must be smaller than n = {n}"
        )));
    }
    if !(n * degree).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "n * degree = {} is odd; no regular graph exists",
            n * degree
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complement_degree = n - 1 - degree;
    let use_complement = complement_degree < degree;
    let target = if use_complement { complement_degree } else { degree };
    // n(n-1) is even and n*degree is even, so n*target is even too.
    let sampled = sample_simple_pairing(n, target, &mut rng)?;
    let mut pairs: Vec<(usize, usize)> = if use_complement {
        (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .filter(|p| !sampled.contains(p))
            .collect()
    } else {
        sampled.into_iter().collect()
    };
    pairs.sort_unstable();
    // Weights are drawn in sorted-edge order so the result is a pure
    // function of the seed.
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(j, k)| {
            let w = if weighted { sample_open_unit(&mut rng) } else { 1.0 };
            (j, k, w)
        })
        .collect();
    Graph::new(n, edges)
}

/// Draws pairings of `n * degree` vertex stubs until one is a simple graph.
fn sample_simple_pairing(
    n: usize,
    degree: usize,
    rng: &mut impl rand::Rng,
) -> Result<HashSet<(usize, usize)>> {
    if degree == 0 {
        return Ok(HashSet::new());
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    const MAX_ATTEMPTS: usize = 10_000_000;
    for _ in 0..MAX_ATTEMPTS {
        stubs.shuffle(rng);
        let mut seen = HashSet::with_capacity(stubs.len() / 2);
        let mut ok = true;
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(seen);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no simple {degree}-regular pairing found for n = {n} after {MAX_ATTEMPTS} attempts"
    )))
}

/// Uniform draw from the open interval (0, 1).
fn sample_open_unit(rng: &mut impl rand::Rng) -> f64 {
    loop {
        let w: f64 = rng.gen();
        if w > 0.0 {
            return w;
        }
    }
}

/// Exhaustive MaxCut oracle.
///
/// Enumerates assignments with bit 0 fixed to 0 and mirrors each maximizer
/// through the global flip, which is an exact symmetry of the cut value.
/// Feasible up to roughly 24 vertices.
pub fn brute_force_maxcut(g: &Graph) -> CutResult {
    assert!(g.n >= 1 && g.n <= 24, "brute force limited to 1..=24 vertices");
    let mask = (1u64 << g.n) - 1;
    let mut best = f64::NEG_INFINITY;
    let mut maximizers: Vec<u64> = Vec::new();
    let half = 1u64 << (g.n - 1) as u32;
    for low in 0..half {
        let b = low << 1; // bit 0 fixed to 0
        let value = g.cut_value(b);
        if value > best {
            best = value;
            maximizers.clear();
            maximizers.push(b);
        } else if value == best {
            maximizers.push(b);
        }
    }
    let mut all: Vec<u64> = maximizers
        .iter()
        .flat_map(|&b| [b, b ^ mask])
        .collect();
    all.sort_unstable();
    all.dedup();
    CutResult { value: best, optimal_assignments: all }
}

/// Sum of all edge weights.
pub fn total_weight(g: &Graph) -> f64 {
    g.total_weight()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent exhaustive scan over all 2^n assignments, written before
    /// the mirrored enumeration above and kept separate from it.
    fn maxcut_full_scan(g: &Graph) -> (f64, Vec<u64>) {
        let mut best = f64::NEG_INFINITY;
        let mut winners = Vec::new();
        for b in 0..(1u64 << g.n) {
            let mut cut = 0.0;
            for &(j, k, w) in &g.edges {
                let xj = if (b >> j) & 1 == 0 { 1.0 } else { -1.0 };
                let xk = if (b >> k) & 1 == 0 { 1.0 } else { -1.0 };
                cut += 0.5 * w * (1.0 - xj * xk);
            }
            if cut > best {
                best = cut;
                winners.clear();
                winners.push(b);
            } else if cut == best {
                winners.push(b);
            }
        }
        (best, winners)
    }

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_odd_stub_count() {
        assert!(matches!(
            random_regular(5, 3, false, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn rejects_degree_at_least_n() {
        assert!(matches!(
            random_regular(4, 4, false, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn regular_on_four_vertices_is_k4() {
        let g = random_regular(4, 3, false, 7).unwrap();
        assert_eq!(g, Graph::complete(4).unwrap());
        assert!(g.edges.iter().all(|&(_, _, w)| w == 1.0));
    }

    #[test]
    fn six_vertex_cubic_has_nine_edges() {
        let g = random_regular(6, 3, false, 11).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert!(g.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn generation_is_regular_and_deterministic_over_seeds() {
        for seed in 0..100 {
            let g = random_regular(8, 3, true, seed).unwrap();
            assert!(g.degrees().iter().all(|&d| d == 3), "seed {seed}");
            assert!(g.edges.iter().all(|&(_, _, w)| w > 0.0 && w < 1.0));
            let again = random_regular(8, 3, true, seed).unwrap();
            assert_eq!(g, again);
            assert_eq!(g.to_json(), again.to_json());
        }
    }

    #[test]
    fn dense_degrees_are_feasible() {
        // The densest family used by the benchmarks; rejection sampling must
        // terminate in reasonable time.
        let g = random_regular(10, 7, true, 3).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 7));
        assert_eq!(g.edge_count(), 35);
    }

    #[test]
    fn triangle_maxcut() {
        let cut = brute_force_maxcut(&triangle());
        assert_eq!(cut.value, 2.0);
        let mut expected = vec![0b001, 0b010, 0b100, 0b110, 0b101, 0b011];
        expected.sort_unstable();
        assert_eq!(cut.optimal_assignments, expected);
    }

    #[test]
    fn single_edge_maxcut() {
        let g = Graph::new(2, [(0, 1, 0.7)]).unwrap();
        let cut = brute_force_maxcut(&g);
        assert_eq!(cut.value, 0.7);
        assert_eq!(cut.optimal_assignments, vec![0b01, 0b10]);
        assert_eq!(g.total_weight(), 0.7);
    }

    #[test]
    fn oracle_matches_independent_scan() {
        let g = random_regular(8, 5, true, 42).unwrap();
        let (value, winners) = maxcut_full_scan(&g);
        let cut = brute_force_maxcut(&g);
        assert_eq!(cut.value, value);
        let mut winners = winners;
        winners.sort_unstable();
        assert_eq!(cut.optimal_assignments, winners);
    }

    #[test]
    fn oracle_closed_under_global_flip() {
        for seed in 0..20 {
            let g = random_regular(6, 3, true, seed).unwrap();
            let cut = brute_force_maxcut(&g);
            let mask = (1u64 << g.n) - 1;
            for &b in &cut.optimal_assignments {
                assert!(cut.optimal_assignments.contains(&(b ^ mask)));
                assert_eq!(g.cut_value(b), cut.value);
            }
        }
    }

    #[test]
    fn total_weight_examples() {
        assert_eq!(triangle().total_weight(), 3.0);
        let g = random_regular(6, 3, false, 5).unwrap();
        assert_eq!(g.total_weight(), 9.0);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let g = random_regular(6, 3, true, 9).unwrap();
        let parsed = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, parsed);

        assert!(Graph::from_json(r#"{"n":2,"edges":[[1,0,1.0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":2,"edges":[[0,0,1.0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":2,"edges":[[0,1,0.0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":2,"edges":[[0,3,1.0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":3,"edges":[[1,2,1.0],[0,1,1.0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":3,"edges":[[0,1,1.0],[0,1,0.5]]}"#).is_err());
    }

    #[test]
    fn ring_and_complete_shapes() {
        let r = Graph::ring(6).unwrap();
        assert_eq!(r.edge_count(), 6);
        assert!(r.degrees().iter().all(|&d| d == 2));
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(k4.edge_count(), 6);
    }
}
