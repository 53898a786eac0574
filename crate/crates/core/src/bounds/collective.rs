//! Collective Pauli operators `J_g = sum_j sigma_g^j` and `J^2`.

use crate::dense::DenseOperator;
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::space::HilbertSpace;

/// Pauli expansions of `J_x`, `J_y`, `J_z` and `J^2`.
#[derive(Clone, Debug)]
pub struct CollectiveSums {
    pub n_qubits: usize,
    pub jx: PauliSum,
    pub jy: PauliSum,
    pub jz: PauliSum,
    pub jsq: PauliSum,
}

pub fn collective_sums(n_qubits: usize) -> CollectiveSums {
    let axis = |p: Pauli| {
        let mut s = PauliSum::zero(n_qubits);
        for q in 0..n_qubits {
            s.add_term(&PauliString::single(n_qubits, q, p), 1.0);
        }
        s
    };
    let jx = axis(Pauli::X);
    let jy = axis(Pauli::Y);
    let jz = axis(Pauli::Z);
    let jsq = jx.squared().plus(&jy.squared()).plus(&jz.squared());
    CollectiveSums {
        n_qubits,
        jx,
        jy,
        jz,
        jsq,
    }
}

/// Dense collective operators on `q1 .. qN`.
#[derive(Clone, Debug)]
pub struct CollectiveOperators {
    pub n_qubits: usize,
    pub jx: DenseOperator,
    pub jy: DenseOperator,
    pub jz: DenseOperator,
    pub jsq: DenseOperator,
}

pub fn collective_ops(n_qubits: usize) -> CollectiveOperators {
    let sums = collective_sums(n_qubits);
    let space = HilbertSpace::qubits(n_qubits);
    let dense = |s: &PauliSum| DenseOperator::new(space.clone(), s.to_matrix()).expect("qubit space");
    CollectiveOperators {
        n_qubits,
        jx: dense(&sums.jx),
        jy: dense(&sums.jy),
        jz: dense(&sums.jz),
        jsq: dense(&sums.jsq),
    }
}

/// Allowed total quantum numbers `N, N-2, ..., (0 or 1)`.
pub fn allowed_j(n_qubits: usize) -> Vec<i64> {
    let n = n_qubits as i64;
    (0..=n).rev().filter(|j| (n - j) % 2 == 0).collect()
}

/// `J^2` eigenvalue in the Pauli convention.
pub fn j_sq_eigenvalue(j: i64) -> f64 {
    (j * (j + 2)) as f64
}
