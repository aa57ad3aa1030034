use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::UnitaryMatrix;
use crate::error::{HsimError, Result};

/// Eigenphases of a unitary, in `(-π, π]`.
///
/// The eigenvalues of `(W + W†)/2` are `cos φ`, which fixes every phase up
/// to sign. Rotating `W` by `e^{iα}` so that none of those candidates lands
/// near `-1` makes the Cayley transform `i(I − W')(I + W')⁻¹` well defined;
/// it is Hermitian with eigenvalues `tan(θ/2)`.
pub fn unitary_eigenphases(w: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let n = w.nrows();
    let real_part = (w + w.adjoint()) * Complex64::new(0.5, 0.0);
    let cosines = SymmetricEigen::new(real_part).eigenvalues;
    let mut candidates: Vec<f64> = cosines
        .iter()
        .flat_map(|c| {
            let a = c.clamp(-1.0, 1.0).acos();
            [a, -a]
        })
        .collect();
    let mid = widest_gap(&mut candidates).1;
    let alpha = PI - mid;

    let rotated = w * Complex64::from_polar(1.0, alpha);
    let id = DMatrix::<Complex64>::identity(n, n);
    let inv = (&id + &rotated)
        .try_inverse()
        .ok_or_else(|| HsimError::Internal("Cayley transform is singular".into()))?;
    let cayley = (&id - &rotated) * inv * Complex64::i();
    let herm = (&cayley + cayley.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .map(|t| wrap(2.0 * t.atan() - alpha))
        .collect())
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

/// Widest gap between consecutive angles on the circle and its midpoint.
fn widest_gap(phases: &mut [f64]) -> (f64, f64) {
    phases.sort_by(f64::total_cmp);
    let last = phases[phases.len() - 1];
    let mut best = (
        phases[0] + 2.0 * PI - last,
        last + (phases[0] + 2.0 * PI - last) / 2.0,
    );
    for w in phases.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], (w[0] + w[1]) / 2.0);
        }
    }
    best
}

/// Diamond distance between the channels `ρ ↦ uρu†` and `ρ ↦ vρv†`.
///
/// The eigenvalues of `u†v` lie on the unit circle. With `d` the distance
/// from the origin to their convex hull, the distance is `2·sqrt(1 - d²)`.
/// If the eigenphases fit in an arc of length `a < π`, the closest hull
/// point is the midpoint of the chord spanning the arc, so `d = cos(a/2)`
/// and the distance is `2·sin(a/2)`; otherwise the hull contains the origin
/// and the distance is 2.
pub fn diamond_distance_unitary(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(HsimError::input(format!(
            "dimension mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    let mut phases = unitary_eigenphases(&(u.matrix().adjoint() * v.matrix()))?;
    let arc = (2.0 * PI - widest_gap(&mut phases).0).max(0.0);
    if arc >= PI {
        return Ok(2.0);
    }
    Ok(2.0 * (arc / 2.0).sin())
}

/// Probability vector over computational-basis outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Checks entries are non-negative and sum to 1 within 1e-10.
    pub fn new(probs: Vec<f64>) -> Result<Distribution> {
        if probs.is_empty() {
            return Err(HsimError::input("empty distribution"));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(HsimError::input(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(HsimError::input(format!("probabilities sum to {total}")));
        }
        Ok(Distribution(probs))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `(1/√2)·‖√p − √q‖₂`.
pub fn hellinger_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(HsimError::input(format!(
            "support size mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let sq: f64 =
        p.0.iter()
            .zip(&q.0)
            .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
            .sum();
    Ok((sq / 2.0).sqrt().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfidelityConvention {
    /// `1 − (1 − H²)²`: one minus the squared Bhattacharyya fidelity.
    #[default]
    SquaredFidelity,
    /// `1 − H`.
    Literal,
}

pub fn hellinger_infidelity(
    p: &Distribution,
    q: &Distribution,
    convention: InfidelityConvention,
) -> Result<f64> {
    let h = hellinger_distance(p, q)?;
    Ok(match convention {
        InfidelityConvention::SquaredFidelity => 1.0 - (1.0 - h * h).powi(2),
        InfidelityConvention::Literal => 1.0 - h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rz(theta: f64) -> UnitaryMatrix {
        UnitaryMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::from_polar(1.0, -theta / 2.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, theta / 2.0),
            ],
        ))
        .unwrap()
    }

    #[test]
    fn diamond_closed_form_values() {
        let id = UnitaryMatrix::identity(2);
        assert!(diamond_distance_unitary(&id, &id).unwrap().abs() < 1e-15);
        for theta in [0.1, PI / 8.0, PI / 4.0, PI / 2.0, 3.0, PI] {
            let d = diamond_distance_unitary(&id, &rz(theta)).unwrap();
            assert!(
                (d - 2.0 * (theta / 2.0).sin()).abs() < 1e-12,
                "theta {theta}: {d}"
            );
        }
        let x = UnitaryMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        ))
        .unwrap();
        assert!((diamond_distance_unitary(&id, &x).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn diamond_ignores_global_phase() {
        let a = rz(0.4);
        let b = UnitaryMatrix::new(rz(1.1).matrix() * Complex64::from_polar(1.0, 0.77)).unwrap();
        let base = diamond_distance_unitary(&a, &rz(1.1)).unwrap();
        assert!((diamond_distance_unitary(&a, &b).unwrap() - base).abs() < 1e-12);
        assert!(diamond_distance_unitary(&a, &UnitaryMatrix::identity(4)).is_err());
    }

    #[test]
    fn eigenphases_of_diagonal_unitaries() {
        let phases = [0.3, -2.9, PI, 1.0, 1.0, -0.2];
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&p| Complex64::from_polar(1.0, p)),
        ));
        let mut got = unitary_eigenphases(&d).unwrap();
        got.sort_by(f64::total_cmp);
        let mut want = phases.to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g - w).abs() < 1e-12
                    || (g.abs() - PI).abs() < 1e-12 && (w.abs() - PI).abs() < 1e-12,
                "{g} vs {w}"
            );
        }
        let id = DMatrix::<Complex64>::identity(16, 16);
        assert!(unitary_eigenphases(&id)
            .unwrap()
            .iter()
            .all(|p| p.abs() < 1e-14));
    }

    #[test]
    fn hellinger_values() {
        let p = Distribution::new(vec![1.0, 0.0]).unwrap();
        let q = Distribution::new(vec![0.5, 0.5]).unwrap();
        let d = hellinger_distance(&p, &q).unwrap();
        assert!((d - (1.0 - 1.0 / 2f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!((d - 0.5412).abs() < 1e-4);
        assert_eq!(hellinger_distance(&p, &p).unwrap(), 0.0);
        let r = Distribution::new(vec![0.0, 1.0]).unwrap();
        assert!((hellinger_distance(&p, &r).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            hellinger_infidelity(&p, &p, InfidelityConvention::default()).unwrap(),
            0.0
        );
        assert!(
            (hellinger_infidelity(&p, &r, InfidelityConvention::default()).unwrap() - 1.0).abs()
                < 1e-15
        );
        assert_eq!(
            hellinger_infidelity(&p, &p, InfidelityConvention::Literal).unwrap(),
            1.0
        );
        let three = Distribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(hellinger_distance(&p, &three).is_err());
    }

    #[test]
    fn infidelity_at_half_distance() {
        // Two distributions with H = 0.5 exactly: fidelity sqrt-overlap 0.75.
        let a: f64 = 0.75;
        let p = Distribution::new(vec![1.0, 0.0]).unwrap();
        let q = Distribution::new(vec![a * a, 1.0 - a * a]).unwrap();
        let h = hellinger_distance(&p, &q).unwrap();
        assert!((h - 0.5).abs() < 1e-12);
        let inf = hellinger_infidelity(&p, &q, InfidelityConvention::SquaredFidelity).unwrap();
        assert!((inf - 0.4375).abs() < 1e-12);
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![]).is_err());
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
    }
}
