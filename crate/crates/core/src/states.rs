//! Named pure target states.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::collective::{collective_ops, j_sq_eigenvalue};
use crate::bounds::stabilizer::{stab_density, StabilizerGenerators};
use crate::dense::DensityMatrix;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, Sign};
use crate::space::HilbertSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellVariant {
    /// `(|00> + |11>)/sqrt 2`
    Plus,
    /// `(|00> - |11>)/sqrt 2`
    Minus,
    /// `(|01> + |10>)/sqrt 2`
    PsiPlus,
    /// `(|01> - |10>)/sqrt 2`
    PsiMinus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    Ghz,
    W,
    Bell { variant: BellVariant },
    Dicke { j_z: i64 },
    /// Computational basis state; `'0'` is the `Z = +1` eigenstate of that qubit.
    Basis { bits: String },
    Stabilizer { generators: StabilizerGenerators },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetStateSpec {
    #[serde(flatten)]
    pub kind: TargetKind,
    pub n_qubits: usize,
}

impl TargetStateSpec {
    pub fn new(kind: TargetKind, n_qubits: usize) -> Result<Self> {
        let spec = Self { kind, n_qubits };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if n == 0 {
            return bad("n_qubits must be positive".into());
        }
        match &self.kind {
            TargetKind::Ghz | TargetKind::W if n < 2 => bad("GHZ and W states need at least two qubits".into()),
            TargetKind::Bell { .. } if n != 2 => bad(format!("Bell states live on two qubits, not {n}")),
            TargetKind::Dicke { j_z } if j_z.abs() > n as i64 || (n as i64 - j_z) % 2 != 0 => {
                bad(format!("j_z = {j_z} is not one of -N, -N+2, ..., N for N = {n}"))
            }
            TargetKind::Basis { bits } if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') => {
                bad(format!("`{bits}` is not a bitstring of length {n}"))
            }
            TargetKind::Stabilizer { generators } if generators.n_qubits() != n => bad(format!(
                "generators act on {} qubits, spec declares {n}",
                generators.n_qubits()
            )),
            _ => Ok(()),
        }
    }

    /// Canonical stabilizer generators when the target is a stabilizer state.
    pub fn stabilizer_generators(&self) -> Option<StabilizerGenerators> {
        let n = self.n_qubits;
        let z_string = |bits: &[bool]| -> StabilizerGenerators {
            let gens = bits
                .iter()
                .enumerate()
                .map(|(q, &one)| {
                    let s = PauliString::single(n, q, Pauli::Z);
                    if one {
                        s.negated()
                    } else {
                        s
                    }
                })
                .collect();
            StabilizerGenerators::new(gens).expect("single-site Z generators are independent")
        };
        match &self.kind {
            TargetKind::Ghz => StabilizerGenerators::ghz(n).ok(),
            TargetKind::Bell { variant } => {
                let (sx, sz) = match variant {
                    BellVariant::Plus => (Sign::Plus, Sign::Plus),
                    BellVariant::Minus => (Sign::Minus, Sign::Plus),
                    BellVariant::PsiPlus => (Sign::Plus, Sign::Minus),
                    BellVariant::PsiMinus => (Sign::Minus, Sign::Minus),
                };
                let xx = PauliString::new(vec![Pauli::X; 2], sx);
                let zz = PauliString::new(vec![Pauli::Z; 2], sz);
                StabilizerGenerators::new(vec![xx, zz]).ok()
            }
            TargetKind::Basis { bits } => {
                Some(z_string(&bits.chars().map(|c| c == '1').collect::<Vec<_>>()))
            }
            TargetKind::Dicke { j_z } if j_z.unsigned_abs() as usize == n => Some(z_string(&vec![*j_z < 0; n])),
            TargetKind::Stabilizer { generators } => Some(generators.clone()),
            _ => None,
        }
    }

    /// `(j, j_z)` when the target is a joint `J^2`, `J_z` eigenstate.
    pub fn rotational_numbers(&self) -> Option<(i64, i64)> {
        let n = self.n_qubits as i64;
        match &self.kind {
            TargetKind::W => Some((n, n - 2)),
            TargetKind::Dicke { j_z } => Some((n, *j_z)),
            TargetKind::Bell { variant: BellVariant::PsiPlus } => Some((2, 0)),
            TargetKind::Bell { variant: BellVariant::PsiMinus } => Some((0, 0)),
            TargetKind::Basis { bits } if bits.chars().all(|c| c == '0') => Some((n, n)),
            TargetKind::Basis { bits } if bits.chars().all(|c| c == '1') => Some((n, -n)),
            _ => None,
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Normalized amplitude vector of the target.
pub fn build_vector(spec: &TargetStateSpec) -> Result<DVector<Complex64>> {
    spec.validate()?;
    let n = spec.n_qubits;
    let d = 1usize << n;
    let mut v = DVector::from_element(d, real(0.0));
    let s = 0.5f64.sqrt();
    match &spec.kind {
        TargetKind::Ghz => {
            v[0] = real(s);
            v[d - 1] = real(s);
        }
        TargetKind::W => return dicke_vector(n, 1),
        TargetKind::Dicke { j_z } => return dicke_vector(n, ((n as i64 - j_z) / 2) as usize),
        TargetKind::Bell { variant } => {
            let (a, b, sign) = match variant {
                BellVariant::Plus => (0, 3, 1.0),
                BellVariant::Minus => (0, 3, -1.0),
                BellVariant::PsiPlus => (1, 2, 1.0),
                BellVariant::PsiMinus => (1, 2, -1.0),
            };
            v[a] = real(s);
            v[b] = real(sign * s);
        }
        TargetKind::Basis { bits } => {
            let idx = usize::from_str_radix(bits, 2).expect("validated bitstring");
            v[idx] = real(1.0);
        }
        TargetKind::Stabilizer { generators } => return stabilizer_vector(generators),
    }
    Ok(v)
}

fn dicke_vector(n: usize, excitations: usize) -> Result<DVector<Complex64>> {
    let d = 1usize << n;
    let count = (0..d).filter(|b| b.count_ones() as usize == excitations).count();
    let amp = 1.0 / (count as f64).sqrt();
    Ok(DVector::from_fn(d, |b, _| {
        if b.count_ones() as usize == excitations {
            real(amp)
        } else {
            real(0.0)
        }
    }))
}

fn stabilizer_vector(gens: &StabilizerGenerators) -> Result<DVector<Complex64>> {
    let proj = stab_density(gens)?;
    let rank = proj.trace();
    if (rank - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidSpec(format!("stabilized space has dimension {rank}")));
    }
    let mut v = proj.principal_vector();
    // Fix the global phase: largest-magnitude amplitude (first on ties) real positive.
    let mut pivot = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[pivot].norm() + 1e-12 {
            pivot = i;
        }
    }
    let phase = v[pivot].conj() / v[pivot].norm();
    v *= phase;
    Ok(v)
}

pub fn build_state(spec: &TargetStateSpec) -> Result<DensityMatrix> {
    let v = build_vector(spec)?;
    DensityMatrix::pure(HilbertSpace::qubits(spec.n_qubits), &v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumNumberReport {
    /// `||(J^2 - j(j+2)) psi||`
    pub j_sq_residual: f64,
    /// `||(J_z - j_z) psi||`
    pub j_z_residual: f64,
}

impl QuantumNumberReport {
    pub fn matches(&self, tol: f64) -> bool {
        self.j_sq_residual < tol && self.j_z_residual < tol
    }
}

/// Residuals of the eigenvalue equations for the principal vector of `state`.
pub fn verify_quantum_numbers(state: &DensityMatrix, j: i64, j_z: i64) -> Result<QuantumNumberReport> {
    let n = state.space().qubit_count()?;
    let ops = collective_ops(n);
    let psi = state.principal_vector();
    let jsq = ops.jsq.matrix() * &psi - &psi * real(j_sq_eigenvalue(j));
    let jz = ops.jz.matrix() * &psi - &psi * real(j_z as f64);
    Ok(QuantumNumberReport {
        j_sq_residual: jsq.norm(),
        j_z_residual: jz.norm(),
    })
}
