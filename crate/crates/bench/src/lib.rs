//! Shared fixtures for the criterion benches.

use qaoa_core::{random_regular, CostDiagonal, Graph};

/// A reproducible weighted instance plus its cost diagonal.
pub fn fixture(n: usize, degree: usize) -> (Graph, CostDiagonal) {
    let g = random_regular(n, degree, true, 7).expect("valid fixture parameters");
    let diag = CostDiagonal::from_graph(&g);
    (g, diag)
}
