//! Dense statevector simulation: the cost-Hamiltonian diagonal and exact
//! application of the ansatz unitaries `exp(-i gamma C)` and
//! `exp(-i beta A)` for every operator the mixer pool can produce.
//!
//! Basis index `b` encodes the computational state with qubit `j` stored at
//! bit `j`. The Pauli-Y convention is `Y|0> = i|1>`, `Y|1> = -i|0>`.
//!
//! No Trotterization is used anywhere: single Pauli strings exponentiate via
//! `exp(-i t P) = cos(t) I - i sin(t) P`, and sums of single-qubit terms
//! factor into exact per-qubit rotations.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{CutResult, Graph};

const NORM_TOLERANCE: f64 = 1e-10;

/// Dense complex amplitude vector over `2^n` basis states.
#[derive(Debug, Clone)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The uniform superposition `|+>^(x n)`; every amplitude is `2^(-n/2)`.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        let dim = 1usize << n;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self { n, amps: vec![a; dim] }
    }

    /// The computational basis state `|b>`.
    pub fn basis(n: usize, b: u64) -> Self {
        assert!(n >= 1 && (b >> n) == 0, "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[b as usize] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    /// Builds a state from raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude vector length {dim} is not a power of two >= 2"
            )));
        }
        Ok(Self { n: dim.trailing_zeros() as usize, amps })
    }

    /// A Haar-ish random normalized state (Gaussian components, normalized).
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        use rand_distr::StandardNormal;
        let dim = 1usize << n;
        let mut amps = Vec::with_capacity(dim);
        for _ in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            amps.push(Complex64::new(re, im));
        }
        let mut s = Self { n, amps };
        s.renormalize();
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn renormalize(&mut self) {
        let norm = self.norm();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        for a in &mut self.amps {
            *a /= norm;
        }
    }

    /// `|<other|self>|`.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| b.conj() * a)
            .sum::<Complex64>()
            .norm()
    }

    /// Multiplies each amplitude by `exp(-i gamma * C_b)` where `C_b` is the
    /// cost diagonal entry of the basis state. Norm-preserving.
    pub fn apply_cost_phase(&mut self, gamma: f64, diag: &CostDiagonal) -> Result<()> {
        if diag.n != self.n {
            return Err(Error::DimensionMismatch { state: self.n, operand: diag.n });
        }
        for (a, &c) in self.amps.iter_mut().zip(&diag.values) {
            let (s, co) = (gamma * c).sin_cos();
            *a *= Complex64::new(co, -s);
        }
        Ok(())
    }

    /// Applies the exact unitary `exp(-i beta A)` for a mixer operator `A`.
    ///
    /// Supported structures (which cover the entire pool): a single Pauli
    /// string, any sum of single-qubit terms (the standard and adjusted
    /// mixers), and sums of mutually commuting strings.
    pub fn apply_mixer_exp(&mut self, beta: f64, mixer: &MixerOp) -> Result<()> {
        for (_, t) in &mixer.terms {
            if t.num_qubits_required() > self.n {
                return Err(Error::DimensionMismatch {
                    state: self.n,
                    operand: t.num_qubits_required(),
                });
            }
        }
        if mixer.terms.is_empty() {
            return Ok(());
        }
        if mixer.terms.len() == 1 {
            let (coeff, term) = &mixer.terms[0];
            self.apply_pauli_exp(beta * coeff, term);
            return Ok(());
        }
        if mixer.terms.iter().all(|(_, t)| t.weight() == 1) {
            // Exact per-qubit factorization of a sum of single-qubit terms.
            let mut axes = vec![[0.0f64; 3]; self.n];
            for &(c, t) in &mixer.terms {
                let qubit = (t.x_mask | t.z_mask).trailing_zeros() as usize;
                match (t.x_mask != 0, t.z_mask != 0) {
                    (true, false) => axes[qubit][0] += c,
                    (true, true) => axes[qubit][1] += c,
                    (false, true) => axes[qubit][2] += c,
                    (false, false) => unreachable!("identity term has weight 0"),
                }
            }
            for (qubit, axis) in axes.iter().enumerate() {
                let r = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
                if r == 0.0 {
                    continue;
                }
                let (s, c) = (beta * r).sin_cos();
                let (ax, ay, az) = (axis[0] / r, axis[1] / r, axis[2] / r);
                let u = [
                    [
                        Complex64::new(c, -s * az),
                        Complex64::new(-s * ay, -s * ax),
                    ],
                    [
                        Complex64::new(s * ay, -s * ax),
                        Complex64::new(c, s * az),
                    ],
                ];
                self.apply_single_qubit(qubit, &u);
            }
            return Ok(());
        }
        let commuting = mixer
            .terms
            .iter()
            .enumerate()
            .all(|(i, (_, a))| mixer.terms[i + 1..].iter().all(|(_, b)| a.commutes_with(b)));
        if commuting {
            for &(coeff, term) in &mixer.terms {
                self.apply_pauli_exp(beta * coeff, &term);
            }
            return Ok(());
        }
        Err(Error::UnsupportedMixer(format!(
            "non-commuting multi-qubit sum '{}' has no exact factorization",
            mixer.label
        )))
    }

    /// `exp(-i theta P)` for a single Pauli string, via index pairing.
    fn apply_pauli_exp(&mut self, theta: f64, term: &PauliTerm) {
        let (sin, cos) = theta.sin_cos();
        let x = term.x_mask as usize;
        let z = term.z_mask;
        if x == 0 {
            // Diagonal string: pure phases.
            for (b, a) in self.amps.iter_mut().enumerate() {
                let sign = parity_sign(b as u64 & z);
                *a *= Complex64::new(cos, -sin * sign);
            }
            return;
        }
        let iy = i_power(((term.x_mask & term.z_mask).count_ones() % 4) as u8);
        let high = 1usize << (63 - (x as u64).leading_zeros());
        let minus_i_sin = Complex64::new(0.0, -sin);
        for b in 0..self.amps.len() {
            if b & high != 0 {
                continue;
            }
            let b2 = b ^ x;
            let p1 = iy * parity_sign(b as u64 & z);
            let p2 = iy * parity_sign(b2 as u64 & z);
            let (a1, a2) = (self.amps[b], self.amps[b2]);
            self.amps[b] = cos * a1 + minus_i_sin * p2 * a2;
            self.amps[b2] = cos * a2 + minus_i_sin * p1 * a1;
        }
    }

    fn apply_single_qubit(&mut self, qubit: usize, u: &[[Complex64; 2]; 2]) {
        let bit = 1usize << qubit;
        for b in 0..self.amps.len() {
            if b & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[b], self.amps[b | bit]);
            self.amps[b] = u[0][0] * a0 + u[0][1] * a1;
            self.amps[b | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
    }

    /// Applies a Hermitian operator (not a unitary): `A|self>`, unnormalized.
    pub fn apply_op(&self, mixer: &MixerOp) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for &(coeff, term) in &mixer.terms {
            if term.num_qubits_required() > self.n {
                return Err(Error::DimensionMismatch {
                    state: self.n,
                    operand: term.num_qubits_required(),
                });
            }
            let x = term.x_mask as usize;
            let z = term.z_mask;
            let iy = i_power(((term.x_mask & term.z_mask).count_ones() % 4) as u8);
            for (b, &a) in self.amps.iter().enumerate() {
                let p = iy * parity_sign(b as u64 & z);
                out[b ^ x] += coeff * p * a;
            }
        }
        Ok(out)
    }

    /// `<self| A |self>` for a Hermitian mixer operator; real by construction.
    pub fn expectation_op(&self, mixer: &MixerOp) -> Result<f64> {
        let applied = self.apply_op(mixer)?;
        Ok(self
            .amps
            .iter()
            .zip(&applied)
            .map(|(a, v)| (a.conj() * v).re)
            .sum())
    }

    /// `<self| C |self>`: the energy of the state under the cost diagonal.
    pub fn expectation_cost(&self, diag: &CostDiagonal) -> Result<f64> {
        if diag.n != self.n {
            return Err(Error::DimensionMismatch { state: self.n, operand: diag.n });
        }
        Ok(self
            .amps
            .iter()
            .zip(&diag.values)
            .map(|(a, &c)| c * a.norm_sqr())
            .sum())
    }

    /// Norm of the projection onto the (degenerate) optimal-cut subspace:
    /// `sqrt(sum over optimal assignments of |amplitude|^2)`.
    pub fn ground_overlap(&self, cut: &CutResult) -> f64 {
        cut.optimal_assignments
            .iter()
            .map(|&b| self.amps[b as usize].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Asserts the norm invariant; used by debug checks and tests.
    pub fn norm_error(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_error() < NORM_TOLERANCE
    }
}

fn parity_sign(masked: u64) -> f64 {
    if masked.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn i_power(k: u8) -> Complex64 {
    match k {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Diagonal of the MaxCut cost Hamiltonian
/// `C = -1/2 sum_{<jk>} w_jk (I - Z_j Z_k)`, constant term included:
/// `values[b] = -(cut value of assignment b)`.
#[derive(Debug, Clone)]
pub struct CostDiagonal {
    n: usize,
    values: Vec<f64>,
}

impl CostDiagonal {
    pub fn from_graph(g: &Graph) -> Self {
        let dim = 1usize << g.n;
        let values = (0..dim).map(|b| -g.cut_value(b as u64)).collect();
        Self { n: g.n, values }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Exact ground energy `C_min = -max cut`.
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// A Hermitian Pauli string encoded as X/Z bit masks; qubit `j` carries X if
/// only bit `j` of `x_mask` is set, Z if only `z_mask`, Y if both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    pub x_mask: u64,
    pub z_mask: u64,
}

impl PauliTerm {
    pub fn x(j: usize) -> Self {
        Self { x_mask: 1 << j, z_mask: 0 }
    }

    pub fn y(j: usize) -> Self {
        Self { x_mask: 1 << j, z_mask: 1 << j }
    }

    pub fn z(j: usize) -> Self {
        Self { x_mask: 0, z_mask: 1 << j }
    }

    /// Product of two single-qubit letters on distinct qubits.
    pub fn pair(a: PauliTerm, b: PauliTerm) -> Self {
        debug_assert_eq!((a.x_mask | a.z_mask) & (b.x_mask | b.z_mask), 0, "overlapping sites");
        Self { x_mask: a.x_mask | b.x_mask, z_mask: a.z_mask | b.z_mask }
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    fn num_qubits_required(&self) -> usize {
        let mask = self.x_mask | self.z_mask;
        if mask == 0 {
            0
        } else {
            64 - mask.leading_zeros() as usize
        }
    }

    /// Pauli strings commute iff the symplectic product is even.
    pub fn commutes_with(&self, other: &PauliTerm) -> bool {
        let anti = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        anti.is_multiple_of(2)
    }

    /// Human-readable label like `"Y2Z5"`, sites in ascending qubit order.
    pub fn label(&self) -> String {
        let mut out = String::new();
        let mask = self.x_mask | self.z_mask;
        for j in 0..64 {
            if mask & (1 << j) == 0 {
                continue;
            }
            let letter = match ((self.x_mask >> j) & 1, (self.z_mask >> j) & 1) {
                (1, 0) => 'X',
                (1, 1) => 'Y',
                (0, 1) => 'Z',
                _ => unreachable!(),
            };
            out.push(letter);
            out.push_str(&j.to_string());
        }
        out
    }
}

/// A Hermitian operator given as a real-weighted sum of Pauli strings, used
/// both as a mixer generator and as a gradient candidate.
#[derive(Debug, Clone)]
pub struct MixerOp {
    /// `(coefficient, string)` pairs; coefficients are real so the sum is
    /// Hermitian.
    pub terms: Vec<(f64, PauliTerm)>,
    /// Display name used in run records (`"sumX"`, `"adjusted"`, `"Y2Z5"`, ...).
    pub label: String,
}

impl MixerOp {
    /// A single Pauli string with coefficient 1.
    pub fn single(term: PauliTerm) -> Self {
        Self { label: term.label(), terms: vec![(1.0, term)] }
    }

    /// The standard transverse-field mixer `M = sum_i X_i`.
    pub fn standard(n: usize) -> Self {
        Self {
            terms: (0..n).map(|j| (1.0, PauliTerm::x(j))).collect(),
            label: "sumX".into(),
        }
    }

    pub fn from_terms(terms: Vec<(f64, PauliTerm)>, label: impl Into<String>) -> Self {
        Self { terms, label: label.into() }
    }

    /// True when the generator contains a multi-qubit string (costs CNOTs).
    pub fn is_entangling(&self) -> bool {
        self.terms.iter().any(|(_, t)| t.weight() >= 2)
    }
}
