//! Density-matrix evolution with depolarizing noise on CNOTs.
//!
//! The density matrix of an `n`-qubit register is stored row-major as a
//! vector of `4^n` amplitudes, i.e. as a `2n`-qubit "state" whose first `n`
//! qubits index rows and last `n` index columns. A gate `U` on qubit `q` is
//! applied as `U` on row qubit `q` and `conj(U)` on column qubit `q`.

use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{apply_1q, apply_cnot, gate_matrix, run_statevector, Distribution, Mat2};
use crate::circuit::{Circuit, Gate};
use crate::error::{HsimError, Result};

/// Largest data width for density-matrix simulation.
pub const MAX_DENSITY_WIDTH: usize = 6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// With probability `p`, the control/target pair is replaced by `I/4`.
    #[default]
    PairReplacement,
    /// Control and target are each independently replaced by `I/2` with
    /// probability `p`.
    IndependentQubits,
}

/// Data-qubit initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `(|0…01…1⟩ + |1…10…0⟩)/√2`, the first `⌊n/2⌋` qubits flipped
    /// against the rest. On four qubits, `(|0011⟩ + |1100⟩)/√2`.
    GhzLike,
    /// A computational basis state.
    Basis(usize),
}

impl InitialState {
    pub fn amplitudes(&self, width: usize) -> Result<Vec<Complex64>> {
        let dim = 1usize << width;
        let mut v = vec![ZERO; dim];
        match *self {
            InitialState::GhzLike => {
                let low = (1usize << (width - width / 2)) - 1;
                let high = (dim - 1) ^ low;
                let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                if low == high {
                    return Err(HsimError::input("ghz-like state needs at least one qubit"));
                }
                v[low] = a;
                v[high] = a;
            }
            InitialState::Basis(k) => {
                if k >= dim {
                    return Err(HsimError::input(format!(
                        "basis state {k} out of range for width {width}"
                    )));
                }
                v[k] = Complex64::new(1.0, 0.0);
            }
        }
        Ok(v)
    }
}

impl FromStr for InitialState {
    type Err = HsimError;

    /// `ghz-like`, `zero`, or `basis:<index>`.
    fn from_str(s: &str) -> Result<InitialState> {
        match s {
            "ghz-like" => Ok(InitialState::GhzLike),
            "zero" => Ok(InitialState::Basis(0)),
            _ => s
                .strip_prefix("basis:")
                .and_then(|k| k.parse().ok())
                .map(InitialState::Basis)
                .ok_or_else(|| HsimError::input(format!("unknown initial state {s:?}"))),
        }
    }
}

/// Density matrix over the full register (data qubits plus ancilla).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &[Complex64]) -> DensityMatrix {
        let dim = state.len();
        assert!(dim.is_power_of_two());
        let n = dim.trailing_zeros() as usize;
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = state[r] * state[c].conj();
            }
        }
        DensityMatrix { n, data }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim(), self.dim(), &self.data)
    }

    /// Max-abs entry of `ρ − ρ†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_matrix();
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        nalgebra::SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }

    fn apply_gate(&mut self, g: &Gate) {
        let n2 = 2 * self.n;
        match *g {
            Gate::Cnot { control, target } => {
                apply_cnot(&mut self.data, n2, control, target);
                apply_cnot(&mut self.data, n2, self.n + control, self.n + target);
            }
            ref other => {
                let (q, m) = gate_matrix(other).expect("single-qubit gate");
                let conj: Mat2 = [
                    [m[0][0].conj(), m[0][1].conj()],
                    [m[1][0].conj(), m[1][1].conj()],
                ];
                apply_1q(&mut self.data, n2, q, &m);
                apply_1q(&mut self.data, n2, self.n + q, &conj);
            }
        }
    }

    /// `ρ ↦ (1−p)ρ + p·Tr_Q(ρ) ⊗ I/2^|Q|` for the qubit set `qubits`.
    pub fn depolarize(&mut self, qubits: &[usize], p: f64) {
        if p == 0.0 {
            return;
        }
        let d = self.dim();
        let mask: usize = qubits.iter().map(|&q| 1usize << (self.n - 1 - q)).sum();
        let assignments: Vec<usize> = (0..d).filter(|&a| a & !mask == 0).collect();
        let weight = 1.0 / assignments.len() as f64;
        let old = self.data.clone();
        for r in 0..d {
            for c in 0..d {
                let mixed = if r & mask == c & mask {
                    let (rb, cb) = (r & !mask, c & !mask);
                    assignments
                        .iter()
                        .map(|&a| old[(rb | a) * d + (cb | a)])
                        .sum::<Complex64>()
                        * weight
                } else {
                    ZERO
                };
                self.data[r * d + c] = old[r * d + c] * (1.0 - p) + mixed * p;
            }
        }
    }
}

fn check_noise_inputs(c: &Circuit, init: &[Complex64], p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(HsimError::input(format!(
            "error rate must lie in [0, 1], got {p}"
        )));
    }
    if c.width > MAX_DENSITY_WIDTH {
        return Err(HsimError::Capability(format!(
            "density-matrix simulation supports at most {MAX_DENSITY_WIDTH} data qubits, got {}",
            c.width
        )));
    }
    if init.len() != 1 << c.width {
        return Err(HsimError::input(format!(
            "initial state has {} amplitudes, expected {}",
            init.len(),
            1usize << c.width
        )));
    }
    let norm: f64 = init.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(HsimError::input(format!("initial state has norm² {norm}")));
    }
    Ok(())
}

fn with_ancilla(init: &[Complex64]) -> Vec<Complex64> {
    let mut full = vec![ZERO; 2 * init.len()];
    for (j, a) in init.iter().enumerate() {
        full[2 * j] = *a;
    }
    full
}

/// Evolves `|init⟩⟨init| ⊗ |0⟩⟨0|` through the circuit, applying noise after
/// every CNOT. `observe` sees the state after each gate (and its noise).
pub fn evolve_density(
    c: &Circuit,
    init: &[Complex64],
    p: f64,
    model: NoiseModel,
    mut observe: impl FnMut(usize, &DensityMatrix),
) -> Result<DensityMatrix> {
    check_noise_inputs(c, init, p)?;
    let mut rho = DensityMatrix::from_pure(&with_ancilla(init));
    for (k, g) in c.gates.iter().enumerate() {
        rho.apply_gate(g);
        if let Gate::Cnot { control, target } = *g {
            match model {
                NoiseModel::PairReplacement => rho.depolarize(&[control, target], p),
                NoiseModel::IndependentQubits => {
                    rho.depolarize(&[control], p);
                    rho.depolarize(&[target], p);
                }
            }
        }
        observe(k, &rho);
    }
    Ok(rho)
}

fn data_marginal(diag: impl Fn(usize) -> f64, data_dim: usize) -> Result<Distribution> {
    let probs = (0..data_dim)
        .map(|j| (diag(2 * j) + diag(2 * j + 1)).max(0.0))
        .collect();
    Distribution::new(probs)
}

/// Computational-basis distribution of the data qubits after a noisy run,
/// ancilla traced out.
pub fn noisy_distribution(
    c: &Circuit,
    init: &[Complex64],
    p: f64,
    model: NoiseModel,
) -> Result<Distribution> {
    let rho = evolve_density(c, init, p, model, |_, _| {})?;
    data_marginal(|i| rho.get(i, i).re, init.len())
}

/// Noiseless distribution of the data qubits via state-vector simulation.
pub fn ideal_distribution(c: &Circuit, init: &[Complex64]) -> Result<Distribution> {
    check_noise_inputs(c, init, 0.0)?;
    let mut state = with_ancilla(init);
    run_statevector(c, &mut state);
    data_marginal(|i| state[i].norm_sqr(), init.len())
}
