//! Pauli-basis expansion of qubit density matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dense::{DensityMatrix, DenseOperator};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, Sign};
use crate::space::HilbertSpace;

/// Real coefficients `c_s = 2^{-N} Tr(rho s)` over all `4^N` strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliCoefficients {
    n_qubits: usize,
    table: BTreeMap<Vec<Pauli>, f64>,
}

impl PauliCoefficients {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, factors: &[Pauli]) -> f64 {
        self.table.get(factors).copied().unwrap_or(0.0)
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.get(p.factors()) * p.sign().value()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Pauli], f64)> {
        self.table.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// `sum_s c_s s` as a dense operator on `q1 .. qN`.
    pub fn reconstruct(&self) -> DenseOperator {
        let d = 1usize << self.n_qubits;
        let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for (k, &c) in &self.table {
            if c == 0.0 {
                continue;
            }
            let act = PauliString::new(k.clone(), Sign::Plus).action();
            for b in 0..d {
                let (b2, amp) = act(b);
                m[(b2, b)] += amp * c;
            }
        }
        DenseOperator::new(HilbertSpace::qubits(self.n_qubits), m).expect("dimension matches")
    }
}

fn all_strings(n: usize) -> impl Iterator<Item = Vec<Pauli>> {
    (0..4usize.pow(n as u32)).map(move |mut code| {
        let mut f = vec![Pauli::I; n];
        for slot in f.iter_mut().rev() {
            *slot = Pauli::ALL[code % 4];
            code /= 4;
        }
        f
    })
}

/// Expands a qubit density matrix on the Pauli basis.
pub fn decompose_density(rho: &DensityMatrix) -> Result<PauliCoefficients> {
    let n = rho.space().qubit_count()?;
    let norm = 1.0 / (1usize << n) as f64;
    let mut table = BTreeMap::new();
    for f in all_strings(n) {
        let p = PauliString::new(f.clone(), Sign::Plus);
        let tr = p.trace_with(rho.matrix());
        if tr.im.abs() > 1e-10 {
            return Err(Error::NotHermitian(tr.im.abs()));
        }
        table.insert(f, norm * tr.re);
    }
    Ok(PauliCoefficients { n_qubits: n, table })
}

/// Squared fidelity from Pauli coefficients: `2^N sum_s c^l_s c^psi_s`.
///
/// The `2^N` factor comes from `Tr(s s') = 2^N delta_{s s'}`.
pub fn fidelity_sq_from_coeffs(c_l: &PauliCoefficients, c_psi: &PauliCoefficients) -> Result<f64> {
    if c_l.n_qubits != c_psi.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: c_l.n_qubits,
            got: c_psi.n_qubits,
        });
    }
    let dot: f64 = c_l.iter().map(|(k, v)| v * c_psi.get(k)).sum();
    Ok((1usize << c_l.n_qubits) as f64 * dot)
}
