//! Small dense complex linear algebra for oracle comparisons (dimension at
//! most 16, so clarity beats speed throughout).

use num_complex::Complex64 as Cx;
use qaoa_core::{Graph, MixerOp, PauliTerm};

/// Row-major square complex matrix.
#[derive(Clone)]
pub struct Mat {
    pub dim: usize,
    pub a: Vec<Cx>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, a: vec![Cx::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.a[i * dim + i] = Cx::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Cx {
        self.a[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Cx) {
        self.a[r * self.dim + c] = v;
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let v = self.get(r, k);
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out.a[r * d + c] += v * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Cx]) -> Vec<Cx> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn dagger(&self) -> Mat {
        let mut out = Mat::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Cx) -> Mat {
        Mat { dim: self.dim, a: self.a.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.dim, other.dim);
        Mat {
            dim: self.dim,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self.get(r, c).norm()).sum())
            .fold(0.0f64, f64::max)
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    sum += self.get(r, c).norm_sqr();
                }
            }
        }
        sum.sqrt()
    }
}

const PAULI_I: [[Cx; 2]; 2] = [
    [Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)],
    [Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)],
];
const PAULI_X: [[Cx; 2]; 2] = [
    [Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)],
    [Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)],
];
const PAULI_Y: [[Cx; 2]; 2] = [
    [Cx::new(0.0, 0.0), Cx::new(0.0, -1.0)],
    [Cx::new(0.0, 1.0), Cx::new(0.0, 0.0)],
];
const PAULI_Z: [[Cx; 2]; 2] = [
    [Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)],
    [Cx::new(0.0, 0.0), Cx::new(-1.0, 0.0)],
];

/// Full 2^n x 2^n matrix of a Pauli string, assembled entry-by-entry from the
/// per-qubit 2x2 blocks (qubit j lives at bit j of the basis index).
pub fn pauli_matrix(n: usize, term: &PauliTerm) -> Mat {
    let dim = 1usize << n;
    let mut out = Mat::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut v = Cx::new(1.0, 0.0);
            for j in 0..n {
                let local = match ((term.x_mask >> j) & 1, (term.z_mask >> j) & 1) {
                    (0, 0) => PAULI_I,
                    (1, 0) => PAULI_X,
                    (1, 1) => PAULI_Y,
                    (0, 1) => PAULI_Z,
                    _ => unreachable!(),
                };
                v *= local[(r >> j) & 1][(c >> j) & 1];
                if v.norm_sqr() == 0.0 {
                    break;
                }
            }
            if v.norm_sqr() != 0.0 {
                out.set(r, c, v);
            }
        }
    }
    out
}

/// Dense Hermitian matrix of a weighted Pauli sum.
pub fn mixer_matrix(n: usize, op: &MixerOp) -> Mat {
    let mut out = Mat::zeros(1 << n);
    for &(coeff, term) in &op.terms {
        out = out.add(&pauli_matrix(n, &term).scale(Cx::new(coeff, 0.0)));
    }
    out
}

/// Dense cost matrix built from a direct objective scan, independent of the
/// simulator's diagonal construction.
pub fn cost_matrix(g: &Graph) -> Mat {
    let dim = 1usize << g.n;
    let mut out = Mat::zeros(dim);
    for b in 0..dim {
        let mut f = 0.0;
        for &(j, k, w) in &g.edges {
            let xj = if (b >> j) & 1 == 0 { 1.0 } else { -1.0 };
            let xk = if (b >> k) & 1 == 0 { 1.0 } else { -1.0 };
            f += 0.5 * w * (1.0 - xj * xk);
        }
        out.set(b, b, Cx::new(-f, 0.0));
    }
    out
}

/// Matrix exponential by scaling-and-squaring over a truncated Taylor series.
pub fn expm(a: &Mat) -> Mat {
    let norm = a.one_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(Cx::new(1.0 / 2f64.powi(squarings as i32), 0.0));
    let mut result = Mat::identity(a.dim);
    let mut term = Mat::identity(a.dim);
    for k in 1..=30 {
        term = term.matmul(&scaled).scale(Cx::new(1.0 / k as f64, 0.0));
        result = result.add(&term);
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues ascending with matching eigenvector
/// columns, and asserts the residual `A V = V diag(w)` to validate itself.
pub fn hermitian_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let d = a.dim;
    let scale = a.one_norm().max(1.0);
    let mut work = a.clone();
    let mut vectors = Mat::identity(d);

    for _sweep in 0..200 {
        if work.off_diagonal_norm() < 1e-13 * scale {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let beta = work.get(p, q);
                if beta.norm() < 1e-300 {
                    continue;
                }
                let alpha = work.get(p, p).re;
                let delta = work.get(q, q).re;
                let phase = beta / beta.norm();
                let tau = (alpha - delta) / (2.0 * beta.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary acting on the (p, q) plane.
                let mut u = Mat::identity(d);
                u.set(p, p, Cx::new(c, 0.0));
                u.set(p, q, -phase * s);
                u.set(q, p, phase.conj() * s);
                u.set(q, q, Cx::new(c, 0.0));
                work = u.dagger().matmul(&work).matmul(&u);
                vectors = vectors.matmul(&u);
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let eigenvalues: Vec<f64> = (0..d).map(|i| work.get(i, i).re).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());
    let sorted_values: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let mut sorted_vectors = Mat::zeros(d);
    for (col, &i) in order.iter().enumerate() {
        for r in 0..d {
            sorted_vectors.set(r, col, vectors.get(r, i));
        }
    }

    // Residual self-check: the oracle refuses to return a bad decomposition.
    for (col, &value) in sorted_values.iter().enumerate() {
        let v: Vec<Cx> = (0..d).map(|r| sorted_vectors.get(r, col)).collect();
        let av = a.matvec(&v);
        for r in 0..d {
            let residual = (av[r] - v[r] * value).norm();
            assert!(
                residual < 1e-9 * scale,
                "jacobi residual {residual} at column {col}"
            );
        }
    }
    (sorted_values, sorted_vectors)
}

/// |<a|b>| for raw amplitude slices.
pub fn overlap(a: &[Cx], b: &[Cx]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Cx>()
        .norm()
}

/// Maximum entrywise deviation between a simulator state and a dense vector.
pub fn max_deviation(a: &[Cx], b: &[Cx]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max)
}
