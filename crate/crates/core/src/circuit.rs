//! First-order Trotter circuits built with the ancilla-parity construction.
//!
//! Each term `c·P` becomes a block: basis changes on the non-identity qubits
//! (X and Y mapped to Z), a CNOT from every non-identity qubit onto the
//! ancilla in ascending qubit order, `Rz(2·c·dt)` on the ancilla, the CNOTs
//! again in descending order, and the inverse basis changes. The ancilla is
//! qubit index `width`.
//!
//! Cancellation applies two rules at each interface between consecutive
//! blocks: for every qubit carrying the same non-identity Pauli on both
//! sides, the two CNOTs and the two basis changes on it are removed.
//! Rotations are never merged.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{HsimError, Result};
use crate::hamiltonian::Hamiltonian;
use crate::ordering::Ordering;
use crate::pauli::{Pauli, PauliString};

/// Axis rotated onto Z by a basis change. Z itself needs none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn of(p: Pauli) -> Option<Axis> {
        match p {
            Pauli::X => Some(Axis::X),
            Pauli::Y => Some(Axis::Y),
            _ => None,
        }
    }
}

/// Circuit gates.
///
/// `BasisIn(X)` is the Hadamard. `BasisIn(Y)` is `H·S†` (apply `S†`, then
/// `H`), which maps Y to Z under conjugation. `BasisOut` is the inverse of
/// the matching `BasisIn`. `RotZ(θ)` is `diag(e^{-iθ/2}, e^{iθ/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Gate {
    BasisIn { qubit: usize, axis: Axis },
    BasisOut { qubit: usize, axis: Axis },
    Cnot { control: usize, target: usize },
    RotZ { qubit: usize, angle: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    pub width: usize,
    pub gates: Vec<Gate>,
    pub trotter_steps: usize,
    pub time: f64,
}

impl Circuit {
    pub fn empty(width: usize) -> Circuit {
        Circuit {
            width,
            gates: Vec::new(),
            trotter_steps: 1,
            time: 0.0,
        }
    }

    pub fn ancilla(&self) -> usize {
        self.width
    }

    pub fn cnot_count(&self) -> usize {
        cnot_count(self)
    }

    /// Plain-text gate list, one gate per line.
    pub fn to_text(&self) -> String {
        let q = |i: usize| {
            if i == self.width {
                "anc".to_string()
            } else {
                format!("q{i}")
            }
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# width {} ancilla anc trotter_steps {} time {}",
            self.width, self.trotter_steps, self.time
        );
        for g in &self.gates {
            let _ = match *g {
                Gate::BasisIn {
                    qubit,
                    axis: Axis::X,
                }
                | Gate::BasisOut {
                    qubit,
                    axis: Axis::X,
                } => {
                    writeln!(out, "h {}", q(qubit))
                }
                Gate::BasisIn {
                    qubit,
                    axis: Axis::Y,
                } => writeln!(out, "basis-y-in {}", q(qubit)),
                Gate::BasisOut {
                    qubit,
                    axis: Axis::Y,
                } => writeln!(out, "basis-y-out {}", q(qubit)),
                Gate::Cnot { control, target } => writeln!(out, "cx {} {}", q(control), q(target)),
                Gate::RotZ { qubit, angle } => writeln!(out, "rz {angle} {}", q(qubit)),
            };
        }
        out
    }
}

pub fn cnot_count(c: &Circuit) -> usize {
    c.gates
        .iter()
        .filter(|g| matches!(g, Gate::Cnot { .. }))
        .count()
}

/// One term subcircuit: `exp(-i·(angle/2)·P)`.
#[derive(Debug, Clone, PartialEq)]
struct Block {
    string: PauliString,
    angle: f64,
}

fn emit(width: usize, blocks: &[Block], cancel: bool, out: &mut Vec<Gate>) {
    let anc = width;
    let shared = |a: &Block, b: &Block, q: usize| {
        let p = a.string.get(q);
        p != Pauli::I && p == b.string.get(q)
    };
    for (k, b) in blocks.iter().enumerate() {
        let support = b.string.support();
        let keep_in: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&q| !(cancel && k > 0 && shared(&blocks[k - 1], b, q)))
            .collect();
        let keep_out: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&q| !(cancel && k + 1 < blocks.len() && shared(b, &blocks[k + 1], q)))
            .collect();
        for &q in &keep_in {
            if let Some(axis) = Axis::of(b.string.get(q)) {
                out.push(Gate::BasisIn { qubit: q, axis });
            }
        }
        out.extend(keep_in.iter().map(|&q| Gate::Cnot {
            control: q,
            target: anc,
        }));
        out.push(Gate::RotZ {
            qubit: anc,
            angle: b.angle,
        });
        out.extend(keep_out.iter().rev().map(|&q| Gate::Cnot {
            control: q,
            target: anc,
        }));
        for &q in &keep_out {
            if let Some(axis) = Axis::of(b.string.get(q)) {
                out.push(Gate::BasisOut { qubit: q, axis });
            }
        }
    }
}

fn blocks_for(h: &Hamiltonian, order: &Ordering, dt: f64) -> Result<Vec<Block>> {
    crate::tsp::check_permutation(&order.permutation, h.len())?;
    Ok(order
        .permutation
        .iter()
        .map(|&i| {
            let t = &h.terms()[i];
            Block {
                string: t.string.clone(),
                angle: 2.0 * t.coefficient * dt,
            }
        })
        .collect())
}

/// One uncancelled Trotter step of length `dt`.
pub fn synthesize_step(h: &Hamiltonian, order: &Ordering, dt: f64) -> Result<Circuit> {
    if !dt.is_finite() {
        return Err(HsimError::input(format!(
            "time step must be finite, got {dt}"
        )));
    }
    let blocks = blocks_for(h, order, dt)?;
    let mut gates = Vec::new();
    emit(h.width(), &blocks, false, &mut gates);
    Ok(Circuit {
        width: h.width(),
        gates,
        trotter_steps: 1,
        time: dt,
    })
}

/// Recovers the term blocks of a circuit in synthesized normal form.
fn parse_blocks(c: &Circuit) -> Result<Vec<Block>> {
    let bad = |at: usize, why: &str| {
        HsimError::input(format!(
            "gate {at}: circuit not in synthesized form ({why})"
        ))
    };
    let anc = c.width;
    let gates = &c.gates;
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < gates.len() {
        let start = i;
        let mut string = PauliString::identity(c.width)?;
        let mut axes = vec![None; c.width];
        while let Some(Gate::BasisIn { qubit, axis }) = gates.get(i) {
            if *qubit >= c.width {
                return Err(bad(i, "basis change on the ancilla"));
            }
            axes[*qubit] = Some(*axis);
            i += 1;
        }
        while let Some(Gate::Cnot { control, target }) = gates.get(i) {
            if *target != anc || *control >= c.width {
                return Err(bad(i, "CNOT must run from a data qubit to the ancilla"));
            }
            let p = match axes[*control] {
                Some(Axis::X) => Pauli::X,
                Some(Axis::Y) => Pauli::Y,
                None => Pauli::Z,
            };
            string.set(*control, p);
            i += 1;
        }
        let angle = match gates.get(i) {
            Some(Gate::RotZ { qubit, angle }) if *qubit == anc => *angle,
            _ => return Err(bad(i, "expected a rotation on the ancilla")),
        };
        let block = Block { string, angle };
        let mut expected = Vec::new();
        emit(c.width, std::slice::from_ref(&block), false, &mut expected);
        let end = start + expected.len();
        if end > gates.len() || gates[start..end] != expected[..] {
            return Err(bad(start, "term block does not match its regenerated form"));
        }
        blocks.push(block);
        i = end;
    }
    Ok(blocks)
}

/// Applies the interface cancellation rules to a synthesized circuit.
/// Every term block must be intact; a circuit that was already cancelled
/// is rejected.
pub fn cancel_gates(c: &Circuit) -> Result<Circuit> {
    let blocks = parse_blocks(c)?;
    let mut gates = Vec::new();
    emit(c.width, &blocks, true, &mut gates);
    Ok(Circuit {
        width: c.width,
        gates,
        trotter_steps: c.trotter_steps,
        time: c.time,
    })
}

/// `r` repetitions of the step with `dt = t/r`, cancelled at every
/// interface including the ones between steps.
pub fn trotterize(h: &Hamiltonian, order: &Ordering, t: f64, r: usize) -> Result<Circuit> {
    if r == 0 {
        return Err(HsimError::input("Trotter number must be at least 1"));
    }
    if !t.is_finite() {
        return Err(HsimError::input(format!(
            "evolution time must be finite, got {t}"
        )));
    }
    let step = blocks_for(h, order, t / r as f64)?;
    let blocks: Vec<Block> = step.iter().cycle().take(step.len() * r).cloned().collect();
    let mut gates = Vec::new();
    emit(h.width(), &blocks, true, &mut gates);
    Ok(Circuit {
        width: h.width(),
        gates,
        trotter_steps: r,
        time: t,
    })
}
