use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One labeled tensor factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// An ordered tensor product of labeled factors. The first factor is the
/// slowest-varying index of the composite basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    factors: Vec<Factor>,
}

impl HilbertSpace {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(label, dim)| Factor {
                label: label.into(),
                dim,
            })
            .collect();
        if factors.is_empty() {
            return Err(Error::InvalidSpec("a Hilbert space needs at least one factor".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(Error::InvalidSpec(format!("factor `{}` has dimension 0", f.label)));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(Error::DuplicateLabel(f.label.clone()));
            }
        }
        Ok(Self { factors })
    }

    /// `n` qubits labeled `q1 .. qn`.
    pub fn qubits(n: usize) -> Self {
        assert!(n >= 1);
        Self::new((1..=n).map(|j| (format!("q{j}"), 2))).expect("qubit labels are unique")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Number of qubits when every factor is two-dimensional.
    pub fn qubit_count(&self) -> Result<usize> {
        match self.factors.iter().find(|f| f.dim != 2) {
            Some(f) => Err(Error::NonQubitFactor {
                label: f.label.clone(),
                dim: f.dim,
            }),
            None => Ok(self.factors.len()),
        }
    }

    pub fn tensor(&self, other: &HilbertSpace) -> Result<HilbertSpace> {
        let all = self
            .factors
            .iter()
            .chain(&other.factors)
            .map(|f| (f.label.clone(), f.dim));
        HilbertSpace::new(all)
    }

    /// The subspace made of the kept factors, in their original order.
    pub fn restrict(&self, keep: &[usize]) -> HilbertSpace {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        HilbertSpace {
            factors: keep.iter().map(|&i| self.factors[i].clone()).collect(),
        }
    }
}
