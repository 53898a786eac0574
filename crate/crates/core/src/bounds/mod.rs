//! Fidelity witnesses: Hermitian Pauli expansions `W` with `W <= Pi` for a
//! target projector `Pi` and `W = 1` on its range.

pub mod collective;
pub mod rotational;
pub mod stabilizer;

use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{PauliString, PauliSum};
use crate::space::HilbertSpace;

/// Eigenvalue tolerance for spectrum validation.
pub const SPECTRUM_TOL: f64 = 1e-9;
/// An eigenvector is assigned to the target (complement) when its weight on
/// the target projector is within this distance of 1 (0).
const WEIGHT_TOL: f64 = 1e-6;

/// Outcome of diagonalizing `W - 1` against a target projector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub passed: bool,
    pub target_rank: usize,
    /// Largest `|lambda|` of `W - 1` on the target subspace.
    pub target_deviation: f64,
    /// Largest eigenvalue of `W - 1` on the complement; must be `<= -1`.
    pub worst_eigenvalue: f64,
    pub reason: Option<String>,
}

impl SpectrumReport {
    pub(crate) fn into_result(self) -> Result<SpectrumReport> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::WitnessValidation {
                worst: self.worst_eigenvalue,
                reason: self.reason.unwrap_or_default(),
            })
        }
    }
}

/// Checks that `witness - 1` vanishes on the range of `target` and is at most
/// `-1` on its orthogonal complement.
pub fn validate_penalty_spectrum(
    witness: &DenseOperator,
    target: &DenseOperator,
) -> Result<SpectrumReport> {
    if witness.space() != target.space() {
        return Err(Error::SpaceMismatch);
    }
    witness.ensure_hermitian()?;
    target.ensure_hermitian()?;
    let d = witness.dim();
    let shifted = witness.matrix() - nalgebra::DMatrix::identity(d, d);
    let (vals, vecs) = linalg::eigh(&shifted);
    let p = target.matrix();
    let rank = target.matrix().trace().re.round() as usize;

    let mut n_target = 0;
    let mut target_dev = 0.0f64;
    let mut worst = f64::NEG_INFINITY;
    let mut reason = None;
    for (j, &val) in vals.iter().enumerate() {
        let v = vecs.column(j);
        let weight = (v.adjoint() * p * v)[(0, 0)].re;
        if weight > 1.0 - WEIGHT_TOL {
            n_target += 1;
            target_dev = target_dev.max(val.abs());
        } else if weight < WEIGHT_TOL {
            worst = worst.max(val);
        } else {
            worst = worst.max(val);
            reason.get_or_insert_with(|| {
                format!("eigenvector with eigenvalue {val:.6} has weight {weight:.6} on the target")
            });
        }
    }
    if n_target != rank && reason.is_none() {
        reason = Some(format!("{n_target} eigenvectors lie in a target of rank {rank}"));
    }
    if target_dev > SPECTRUM_TOL && reason.is_none() {
        reason = Some(format!("target eigenvalue deviates from 0 by {target_dev:e}"));
    }
    if worst > -1.0 + SPECTRUM_TOL && reason.is_none() {
        reason = Some(format!("complement eigenvalue {worst:.9} exceeds -1"));
    }
    Ok(SpectrumReport {
        passed: reason.is_none(),
        target_rank: rank,
        target_deviation: target_dev,
        worst_eigenvalue: worst,
        reason,
    })
}

/// A Hermitian Pauli expansion `a_0 + sum_m a_m Sigma^m` used as a lower bound
/// on a squared fidelity.
#[derive(Clone, Debug)]
pub struct Witness {
    n_qubits: usize,
    offset: f64,
    terms: Vec<(PauliString, f64)>,
    validity: Option<SpectrumReport>,
}

impl Witness {
    pub fn from_sum(sum: &PauliSum) -> Result<Self> {
        Ok(Self {
            n_qubits: sum.n_qubits(),
            offset: sum.offset(),
            terms: sum.hermitian_terms()?,
            validity: None,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The identity coefficient `a_0`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Non-identity terms `(Sigma^m, a_m)`; zero coefficients are retained
    /// when the corresponding observable is part of the construction.
    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn validity(&self) -> Option<&SpectrumReport> {
        self.validity.as_ref()
    }

    pub fn to_sum(&self) -> PauliSum {
        let mut s = PauliSum::scalar(self.n_qubits, self.offset);
        for (p, a) in &self.terms {
            s.add_term(p, *a);
        }
        s
    }

    pub fn to_dense(&self) -> DenseOperator {
        DenseOperator::new(HilbertSpace::qubits(self.n_qubits), self.to_sum().to_matrix())
            .expect("qubit dimensions match")
    }

    /// Validates against `target` and records the report; fails when the
    /// spectrum condition does not hold.
    pub fn validated(mut self, target: &DenseOperator) -> Result<Self> {
        let report = validate_penalty_spectrum(&self.to_dense(), target)?.into_result()?;
        self.validity = Some(report);
        Ok(self)
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<BoundReport> {
        if rho.space().qubit_count()? != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: rho.space().factors().len(),
            });
        }
        let witness_terms: Vec<WitnessTerm> = self
            .terms
            .iter()
            .map(|(p, a)| WitnessTerm {
                pauli: p.clone(),
                coefficient: *a,
                expectation: p.trace_with(rho.matrix()).re,
            })
            .collect();
        let bound_value = self.offset
            + witness_terms
                .iter()
                .map(|t| t.coefficient * t.expectation)
                .sum::<f64>();
        Ok(BoundReport {
            bound_value,
            offset: self.offset,
            witness_terms,
            validity: self.validity.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub pauli: PauliString,
    pub coefficient: f64,
    pub expectation: f64,
}

/// A witness evaluated on a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_value: f64,
    pub offset: f64,
    pub witness_terms: Vec<WitnessTerm>,
    pub validity: Option<SpectrumReport>,
}

impl BoundReport {
    /// `a_0 + sum_m a_m <Sigma^m>` from the stored terms.
    pub fn recompute(&self) -> f64 {
        self.offset
            + self
                .witness_terms
                .iter()
                .map(|t| t.coefficient * t.expectation)
                .sum::<f64>()
    }
}

/// Number of Pauli expectations a witness needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// Unique non-identity strings.
    pub distinct_strings: usize,
    /// As above, with two-site strings counted once per ordered pair of sites.
    pub ordered_pair_count: usize,
}

pub fn pauli_term_census(terms: &[(PauliString, f64)]) -> Census {
    let mut seen: Vec<&[crate::pauli::Pauli]> = terms
        .iter()
        .filter(|(p, _)| !p.is_identity())
        .map(|(p, _)| p.factors())
        .collect();
    seen.sort();
    seen.dedup();
    let ordered = seen
        .iter()
        .map(|f| {
            let w = f.iter().filter(|&&p| p != crate::pauli::Pauli::I).count();
            if w == 2 {
                2
            } else {
                1
            }
        })
        .sum();
    Census {
        distinct_strings: seen.len(),
        ordered_pair_count: ordered,
    }
}
