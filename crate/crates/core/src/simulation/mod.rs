//! Exact dense simulation.
//!
//! Basis states are indexed with qubit 0 (the leftmost Pauli symbol) as the
//! most significant bit. Circuits act on `width + 1` qubits with the ancilla
//! last, so a full-register index is `2·data_index + ancilla_bit`.

mod metrics;
mod noise;

pub use metrics::{
    diamond_distance_unitary, hellinger_distance, hellinger_infidelity, unitary_eigenphases,
    Distribution, InfidelityConvention,
};
pub use noise::{
    evolve_density, ideal_distribution, noisy_distribution, DensityMatrix, InitialState,
    NoiseModel, MAX_DENSITY_WIDTH,
};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::{trotterize, Axis, Circuit, Gate};
use crate::error::{HsimError, Result};
use crate::hamiltonian::Hamiltonian;
use crate::ordering::Ordering;
use crate::pauli::{Pauli, PauliString};

/// Largest data width for unitary simulation.
pub const MAX_UNITARY_WIDTH: usize = 12;

/// Leakage into the ancilla-|1⟩ subspace tolerated by [`circuit_unitary`].
pub const DISENTANGLE_TOLERANCE: f64 = 1e-9;

const UNITARITY_TOLERANCE: f64 = 1e-8;

pub(crate) type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense unitary on `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(DMatrix<Complex64>);

impl UnitaryMatrix {
    /// Wraps `m` after checking `m†m = I` to 1e-8.
    pub fn new(m: DMatrix<Complex64>) -> Result<UnitaryMatrix> {
        if !m.is_square() || !m.nrows().is_power_of_two() {
            return Err(HsimError::input(format!(
                "{}x{} is not a qubit operator",
                m.nrows(),
                m.ncols()
            )));
        }
        let dev = unitarity_deviation(&m);
        if dev > UNITARITY_TOLERANCE {
            return Err(HsimError::input(format!(
                "matrix is not unitary (deviation {dev:.3e})"
            )));
        }
        Ok(UnitaryMatrix(m))
    }

    pub fn identity(dim: usize) -> UnitaryMatrix {
        UnitaryMatrix(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }
}

/// Max-abs entry of `m†m - I`.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let p = m.adjoint() * m;
    let mut worst: f64 = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let expect = if i == j { ONE } else { ZERO };
            worst = worst.max((p[(i, j)] - expect).norm());
        }
    }
    worst
}

/// Spectral norm of `a - b`.
pub fn operator_norm_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let d = a - b;
    let gram = d.adjoint() * &d;
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues
        .iter()
        .fold(0.0f64, |m, &v| m.max(v))
        .max(0.0)
        .sqrt()
}

fn pauli_2x2(p: Pauli) -> DMatrix<Complex64> {
    let i = Complex64::i();
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

/// Dense matrix of a Pauli string, qubit 0 as the most significant factor.
pub fn pauli_matrix(s: &PauliString) -> DMatrix<Complex64> {
    s.iter().fold(DMatrix::identity(1, 1), |acc, p| {
        acc.kronecker(&pauli_2x2(p))
    })
}

pub fn hamiltonian_matrix(h: &Hamiltonian) -> DMatrix<Complex64> {
    let dim = 1usize << h.width();
    let mut m = DMatrix::zeros(dim, dim);
    for t in h.terms() {
        m += pauli_matrix(&t.string) * Complex64::new(t.coefficient, 0.0);
    }
    m
}

fn check_width(width: usize) -> Result<()> {
    if width > MAX_UNITARY_WIDTH {
        return Err(HsimError::Capability(format!(
            "dense unitary simulation supports at most {MAX_UNITARY_WIDTH} data qubits, got {width}"
        )));
    }
    Ok(())
}

/// `exp(-iHt)` through the Hermitian eigendecomposition of `H`.
pub fn exact_evolution(h: &Hamiltonian, t: f64) -> Result<UnitaryMatrix> {
    check_width(h.width())?;
    let eig = SymmetricEigen::new(hamiltonian_matrix(h));
    let v = &eig.eigenvectors;
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t));
    let u = v * DMatrix::from_diagonal(&phases) * v.adjoint();
    Ok(UnitaryMatrix(u))
}

pub(crate) fn gate_matrix(g: &Gate) -> Option<(usize, Mat2)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match *g {
        Gate::BasisIn {
            qubit,
            axis: Axis::X,
        }
        | Gate::BasisOut {
            qubit,
            axis: Axis::X,
        } => Some((qubit, [[r(s), r(s)], [r(s), r(-s)]])),
        // H·S†
        Gate::BasisIn {
            qubit,
            axis: Axis::Y,
        } => Some((qubit, [[r(s), im(-s)], [r(s), im(s)]])),
        // S·H
        Gate::BasisOut {
            qubit,
            axis: Axis::Y,
        } => Some((qubit, [[r(s), r(s)], [im(s), im(-s)]])),
        Gate::RotZ { qubit, angle } => Some((
            qubit,
            [
                [Complex64::from_polar(1.0, -angle / 2.0), ZERO],
                [ZERO, Complex64::from_polar(1.0, angle / 2.0)],
            ],
        )),
        Gate::Cnot { .. } => None,
    }
}

/// Applies a one-qubit matrix to qubit `q` of an `n`-qubit register.
pub(crate) fn apply_1q(state: &mut [Complex64], n: usize, q: usize, m: &Mat2) {
    let stride = 1usize << (n - 1 - q);
    for base in 0..state.len() {
        if base & stride != 0 {
            continue;
        }
        let (a, b) = (state[base], state[base | stride]);
        state[base] = m[0][0] * a + m[0][1] * b;
        state[base | stride] = m[1][0] * a + m[1][1] * b;
    }
}

pub(crate) fn apply_cnot(state: &mut [Complex64], n: usize, control: usize, target: usize) {
    let cbit = 1usize << (n - 1 - control);
    let tbit = 1usize << (n - 1 - target);
    for i in 0..state.len() {
        if i & cbit != 0 && i & tbit == 0 {
            state.swap(i, i | tbit);
        }
    }
}

/// Runs the circuit on a full-register state vector (data qubits + ancilla).
pub fn run_statevector(c: &Circuit, state: &mut [Complex64]) {
    let n = c.width + 1;
    debug_assert_eq!(state.len(), 1 << n);
    for g in &c.gates {
        match g {
            Gate::Cnot { control, target } => apply_cnot(state, n, *control, *target),
            other => {
                let (q, m) = gate_matrix(other).expect("single-qubit gate");
                apply_1q(state, n, q, &m);
            }
        }
    }
}

/// Unitary of the whole register, ancilla included.
pub fn full_circuit_unitary(c: &Circuit) -> Result<DMatrix<Complex64>> {
    check_width(c.width)?;
    let dim = 1usize << (c.width + 1);
    let mut u = DMatrix::zeros(dim, dim);
    let mut state = vec![ZERO; dim];
    for col in 0..dim {
        state.iter_mut().for_each(|a| *a = ZERO);
        state[col] = ONE;
        run_statevector(c, &mut state);
        u.column_mut(col).copy_from_slice(&state);
    }
    Ok(u)
}

/// Effective unitary on the data qubits with the ancilla prepared and
/// post-selected in |0⟩. Fails if the ancilla does not return to |0⟩.
pub fn circuit_unitary(c: &Circuit) -> Result<UnitaryMatrix> {
    check_width(c.width)?;
    let ddim = 1usize << c.width;
    let mut u = DMatrix::zeros(ddim, ddim);
    let mut state = vec![ZERO; 2 * ddim];
    for col in 0..ddim {
        state.iter_mut().for_each(|a| *a = ZERO);
        state[2 * col] = ONE;
        run_statevector(c, &mut state);
        let leak: f64 = (0..ddim)
            .map(|j| state[2 * j + 1].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if leak > DISENTANGLE_TOLERANCE {
            return Err(HsimError::Internal(format!(
                "ancilla left entangled (leakage {leak:.3e} on input column {col})"
            )));
        }
        for j in 0..ddim {
            u[(j, col)] = state[2 * j];
        }
    }
    UnitaryMatrix::new(u).map_err(|e| HsimError::Internal(e.to_string()))
}

/// `exp(-iθP) = cos θ·I - i sin θ·P`.
pub fn pauli_exponential(s: &PauliString, theta: f64) -> DMatrix<Complex64> {
    let dim = 1usize << s.width();
    DMatrix::identity(dim, dim) * Complex64::new(theta.cos(), 0.0)
        - pauli_matrix(s) * Complex64::new(0.0, theta.sin())
}

/// Product of per-term exponentials `exp(-i c P dt)`, the first term of the
/// ordering applied first.
pub fn ordered_term_product(h: &Hamiltonian, order: &Ordering, dt: f64) -> Result<UnitaryMatrix> {
    check_width(h.width())?;
    let dim = 1usize << h.width();
    let mut u = DMatrix::identity(dim, dim);
    for &i in &order.permutation {
        let t = &h.terms()[i];
        u = pauli_exponential(&t.string, t.coefficient * dt) * u;
    }
    UnitaryMatrix::new(u)
}

/// Diamond distance between the compiled Trotter circuit and `exp(-iHt)`.
pub fn trotter_error(h: &Hamiltonian, order: &Ordering, t: f64, r: usize) -> Result<f64> {
    let exact = exact_evolution(h, t)?;
    trotter_error_against(h, order, t, r, &exact)
}

/// As [`trotter_error`], reusing a precomputed `exp(-iHt)`.
pub fn trotter_error_against(
    h: &Hamiltonian,
    order: &Ordering,
    t: f64,
    r: usize,
    exact: &UnitaryMatrix,
) -> Result<f64> {
    let circuit = trotterize(h, order, t, r)?;
    diamond_distance_unitary(&circuit_unitary(&circuit)?, exact)
}
