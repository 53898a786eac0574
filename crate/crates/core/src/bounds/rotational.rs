//! Witnesses for eigenstates (or eigenspaces) of `J^2` and `J_z`.
//!
//! The witness is `S_Jz + S_J2 + 1` with `S_Jz = -(J_z - j_z)^2 / 4`. For
//! `j = N` the `J^2` penalty is linear, `eps (J^2 - N(N+2))`, because every
//! other `J^2` eigenvalue lies below `N(N+2)`; for `j < N` it is quadratic,
//! `-eps (J^2 - j(j+2))^2`. The default `eps` is the smallest value that
//! pushes every non-target joint eigenvalue of the penalty to `-1` or below.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::collective::{allowed_j, collective_ops, collective_sums, j_sq_eigenvalue};
use super::{BoundReport, Witness};
use crate::dense::{DenseOperator, DensityMatrix};
use crate::error::{Error, Result};
use crate::space::HilbertSpace;

pub fn check_quantum_numbers(n_qubits: usize, j: i64, jz: i64) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidQuantumNumbers("need at least one qubit".into()));
    }
    if !allowed_j(n_qubits).contains(&j) {
        return Err(Error::InvalidQuantumNumbers(format!(
            "j = {j} is not one of N, N-2, ... for N = {n_qubits}"
        )));
    }
    if jz.abs() > j || (j - jz) % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "j_z = {jz} is not one of -j, -j+2, ..., j for j = {j}"
        )));
    }
    Ok(())
}

/// Projector onto the joint `(J^2, J_z) = (j(j+2), j_z)` eigenspace, built as
/// the normalized product of `(J_z - j'_z)` and `(J^2 - j'(j'+2))` factors.
pub fn rot_projector(n_qubits: usize, j: i64, jz: i64) -> Result<DenseOperator> {
    check_quantum_numbers(n_qubits, j, jz)?;
    let ops = collective_ops(n_qubits);
    let d = 1usize << n_qubits;
    let id: DMatrix<Complex64> = DMatrix::identity(d, d);
    let mut p = id.clone();
    let mut kappa = 1.0;
    for other in (-j..=j).step_by(2).filter(|&v| v != jz) {
        p = p * (ops.jz.matrix() - &id * Complex64::new(other as f64, 0.0));
        kappa *= (jz - other) as f64;
    }
    let target = j_sq_eigenvalue(j);
    for other in allowed_j(n_qubits).into_iter().filter(|&v| v != j) {
        let e = j_sq_eigenvalue(other);
        p = p * (ops.jsq.matrix() - &id * Complex64::new(e, 0.0));
        kappa *= target - e;
    }
    let p = p.map(|z| z / kappa);
    let p = (&p + p.adjoint()).map(|z| z * 0.5);
    DenseOperator::new(HilbertSpace::qubits(n_qubits), p)
}

/// Smallest `J^2` penalty prefactor satisfying the spectrum condition.
pub fn default_j_sq_prefactor(n_qubits: usize, j: i64) -> f64 {
    let n = n_qubits as i64;
    let target = j_sq_eigenvalue(j);
    let gaps: Vec<f64> = allowed_j(n_qubits)
        .into_iter()
        .filter(|&v| v != j)
        .map(|v| (j_sq_eigenvalue(v) - target).abs())
        .collect();
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    if !min_gap.is_finite() {
        // Single multiplet (N = 1): the J^2 penalty vanishes identically.
        return 1.0 / (4.0 * n.max(1) as f64);
    }
    if j == n {
        1.0 / min_gap
    } else {
        1.0 / (min_gap * min_gap)
    }
}

/// Witness with an explicit `J^2` prefactor. Not validated.
pub fn rot_witness_with_prefactor(n_qubits: usize, j: i64, jz: i64, eps: f64) -> Result<Witness> {
    check_quantum_numbers(n_qubits, j, jz)?;
    let sums = collective_sums(n_qubits);
    let s_jz = sums.jz.plus_scalar(-(jz as f64)).squared().scaled(-0.25);
    let shifted = sums.jsq.plus_scalar(-j_sq_eigenvalue(j));
    let s_jsq = if j == n_qubits as i64 {
        shifted.scaled(eps)
    } else {
        shifted.squared().scaled(-eps)
    };
    Witness::from_sum(&s_jz.plus(&s_jsq).plus_scalar(1.0))
}

/// The validated rotational witness with default penalty prefactors.
pub fn rot_bound_operator(n_qubits: usize, j: i64, jz: i64) -> Result<Witness> {
    let eps = default_j_sq_prefactor(n_qubits, j);
    let w = rot_witness_with_prefactor(n_qubits, j, jz, eps)?;
    w.validated(&rot_projector(n_qubits, j, jz)?)
}

pub fn rot_lower_bound(rho_l: &DensityMatrix, n_qubits: usize, j: i64, jz: i64) -> Result<BoundReport> {
    rot_bound_operator(n_qubits, j, jz)?.evaluate(rho_l)
}
