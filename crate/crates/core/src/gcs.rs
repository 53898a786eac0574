//! Witnesses for generalized coherent states: highest-weight states of a
//! Pauli Lie algebra evolved by a Hamiltonian inside that algebra.
//!
//! The Cartan operators are carried through time in the adjoint
//! representation, so the witness at any `t` needs only the `M` coefficients
//! of each rotated Cartan element.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, Witness};
use crate::dense::{DenseOperator, DensityMatrix, Propagator};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{Pauli, PauliString, PauliSum, Sign};
use crate::space::HilbertSpace;

/// Residual above which a dense commutator is not reproduced by the basis.
pub const CLOSURE_TOL: f64 = 1e-9;

/// An ordered set of Pauli strings closed under commutation, with a
/// distinguished commuting (Cartan) subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieBasis {
    n_qubits: usize,
    elements: Vec<PauliString>,
    cartan: Vec<usize>,
}

impl LieBasis {
    pub fn new(elements: Vec<PauliString>, cartan: Vec<usize>) -> Result<Self> {
        let n = elements
            .first()
            .map(|e| e.n_qubits())
            .ok_or_else(|| Error::InvalidFrame("empty basis".into()))?;
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if e.n_qubits() != n {
                return Err(Error::InvalidFrame(format!("{e} does not act on {n} qubits")));
            }
            if e.is_identity() {
                return Err(Error::InvalidFrame("the identity is not a basis element".into()));
            }
            if index.insert(e.factors().to_vec(), i).is_some() {
                return Err(Error::InvalidFrame(format!("{e} appears twice")));
            }
        }
        if cartan.is_empty() {
            return Err(Error::InvalidFrame("empty Cartan subset".into()));
        }
        for (a, &i) in cartan.iter().enumerate() {
            if i >= elements.len() || cartan[..a].contains(&i) {
                return Err(Error::InvalidFrame(format!("bad Cartan index {i}")));
            }
            for &j in &cartan[..a] {
                if !elements[i].commutes_with(&elements[j]) {
                    return Err(Error::InvalidFrame(format!(
                        "Cartan elements {} and {} do not commute",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        // Symbolic closure: anticommuting strings multiply to another basis string.
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i + 1..] {
                if !a.commutes_with(b) {
                    let (_, p) = a.mul(b);
                    if !index.contains_key(p.factors()) {
                        return Err(Error::ClosureViolation {
                            left: a.to_string(),
                            right: b.to_string(),
                            residual: 2.0,
                        });
                    }
                }
            }
        }
        Ok(Self {
            n_qubits: n,
            elements,
            cartan,
        })
    }

    /// `{Z1, Z2, X1X2, X1Y2, Y1X2, Y1Y2}` with Cartan `{Z1, Z2}`.
    pub fn so4() -> Self {
        Self::ising_chain(2).expect("two-site chain")
    }

    /// The quadratic Jordan-Wigner family on an open chain: every `Z_j`, and
    /// `a_j Z_{j+1} .. Z_{k-1} b_k` for `j < k`, `a, b` in `{X, Y}`. Cartan is
    /// the set of `Z_j`; dimension `N(2N - 1)`.
    pub fn ising_chain(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidFrame("an Ising chain needs at least two sites".into()));
        }
        let mut elements: Vec<PauliString> = (0..n).map(|j| PauliString::single(n, j, Pauli::Z)).collect();
        for j in 0..n {
            for k in j + 1..n {
                for (a, b) in [(Pauli::X, Pauli::X), (Pauli::X, Pauli::Y), (Pauli::Y, Pauli::X), (Pauli::Y, Pauli::Y)] {
                    let mut f = vec![Pauli::I; n];
                    f[j] = a;
                    for slot in &mut f[j + 1..k] {
                        *slot = Pauli::Z;
                    }
                    f[k] = b;
                    elements.push(PauliString::new(f, Sign::Plus));
                }
            }
        }
        Self::new(elements, (0..n).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn index_of(&self, p: &PauliString) -> Option<usize> {
        self.elements.iter().position(|e| e.factors() == p.factors())
    }

    /// `sum_j c_j Q_j` as a Pauli expansion.
    pub fn combination(&self, coeffs: &[f64]) -> Result<PauliSum> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        let mut s = PauliSum::zero(self.n_qubits);
        for (q, &c) in self.elements.iter().zip(coeffs) {
            s.add_term(q, c);
        }
        Ok(s)
    }

    pub fn dense_combination(&self, coeffs: &[f64]) -> Result<DenseOperator> {
        DenseOperator::new(HilbertSpace::qubits(self.n_qubits), self.combination(coeffs)?.to_matrix())
    }

    /// The nearest-neighbour Ising Hamiltonian
    /// `sum_j (gx X_j X_{j+1} + gy Y_j Y_{j+1}) + b sum_j Z_j` as coefficients
    /// on this basis, which must contain those strings.
    pub fn ising_coefficients(&self, gx: f64, gy: f64, b: f64) -> Result<Vec<f64>> {
        let n = self.n_qubits;
        let mut c = vec![0.0; self.len()];
        let mut set = |p: PauliString, v: f64| -> Result<()> {
            let i = self
                .index_of(&p)
                .ok_or_else(|| Error::InvalidFrame(format!("{p} is not in the basis")))?;
            c[i] += v * p.sign().value() * self.elements[i].sign().value();
            Ok(())
        };
        for j in 0..n {
            set(PauliString::single(n, j, Pauli::Z), b)?;
        }
        for j in 0..n - 1 {
            set(PauliString::from_sparse(n, &[(j, Pauli::X), (j + 1, Pauli::X)]), gx)?;
            set(PauliString::from_sparse(n, &[(j, Pauli::Y), (j + 1, Pauli::Y)]), gy)?;
        }
        Ok(c)
    }
}

/// `[Q_i, Q_j] = i sum_k f_ijk Q_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    m: usize,
    f: Vec<f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f[(i * self.m + j) * self.m + k]
    }

    /// Largest `|f_ijk + f_jik|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.m {
            for j in 0..self.m {
                for k in 0..self.m {
                    worst = worst.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest component of `[[Q_a,Q_b],Q_c] + [[Q_b,Q_c],Q_a] + [[Q_c,Q_a],Q_b]`
    /// expressed through the structure constants.
    pub fn jacobi_residual(&self, a: usize, b: usize, c: usize) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..self.m {
            let mut s = 0.0;
            for k in 0..self.m {
                s += self.get(a, b, k) * self.get(k, c, m)
                    + self.get(b, c, k) * self.get(k, a, m)
                    + self.get(c, a, k) * self.get(k, b, m);
            }
            worst = worst.max(s.abs());
        }
        worst
    }
}

/// Structure constants from dense commutators, `f_ijk = Tr(-i [Q_i, Q_j] Q_k) / 2^N`.
pub fn structure_constants(basis: &LieBasis) -> Result<StructureConstants> {
    let m = basis.len();
    let d = 1usize << basis.n_qubits;
    let mats: Vec<DMatrix<Complex64>> = basis.elements.iter().map(|q| q.to_matrix()).collect();
    let mut f = vec![0.0; m * m * m];
    let minus_i = Complex64::new(0.0, -1.0);
    for i in 0..m {
        for j in i + 1..m {
            let comm = linalg::commutator(&mats[i], &mats[j]);
            if linalg::max_abs(&comm) == 0.0 {
                continue;
            }
            let mut rebuilt = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
            for k in 0..m {
                let tr = basis.elements[k].trace_with(&comm) * minus_i / d as f64;
                if tr.norm() > 1e-12 {
                    f[(i * m + j) * m + k] = tr.re;
                    f[(j * m + i) * m + k] = -tr.re;
                    rebuilt += &mats[k] * Complex64::new(0.0, tr.re);
                }
            }
            let residual = linalg::max_abs(&(comm - rebuilt));
            if residual > CLOSURE_TOL {
                return Err(Error::ClosureViolation {
                    left: basis.elements[i].to_string(),
                    right: basis.elements[j].to_string(),
                    residual,
                });
            }
        }
    }
    Ok(StructureConstants { m, f })
}

/// Selects the penalty shape of the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyForm {
    /// `1 - eps (sum v - sum h_k(t))`; needs `M` expectations.
    Linear,
    /// `1 - eps (sum h_k(t) - sum v)^2`; needs `O(M^2)` expectations.
    Quadratic,
}

/// Joint Cartan eigenvalues of every eigenstate at `t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    /// `weights[i][k]` is the eigenvalue of Cartan element `k` on state `i`.
    pub weights: Vec<Vec<i64>>,
    pub hw_index: usize,
}

impl WeightTable {
    pub fn highest(&self) -> &[i64] {
        &self.weights[self.hw_index]
    }

    pub fn sums(&self) -> Vec<i64> {
        self.weights.iter().map(|w| w.iter().sum()).collect()
    }

    /// Smallest `sum v - sum u^i` over `i != hw`.
    pub fn min_sum_gap(&self) -> i64 {
        let sums = self.sums();
        let top = sums[self.hw_index];
        sums.iter()
            .enumerate()
            .filter(|&(i, _)| i != self.hw_index)
            .map(|(_, s)| top - s)
            .min()
            .unwrap_or(0)
    }
}

/// A basis, a generating Hamiltonian in the algebra and the derived weight
/// data and propagators.
#[derive(Clone, Debug)]
pub struct CartanFrame {
    basis: LieBasis,
    h_coeffs: Vec<f64>,
    structure: StructureConstants,
    weights: WeightTable,
    hw_vector: DVector<Complex64>,
    adjoint: Propagator,
    hilbert: Propagator,
}

impl CartanFrame {
    pub fn new(basis: LieBasis, h_coeffs: Vec<f64>) -> Result<Self> {
        if h_coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: h_coeffs.len(),
            });
        }
        let structure = structure_constants(&basis)?;
        let (weights, hw_vector) = diagonalize_cartan(&basis)?;

        // d lambda / dt = A lambda with A_mk = sum_j c_j f_jkm; exp(A t) = exp(-i K t), K = iA.
        let m = basis.len();
        let mut k_mat = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
        for row in 0..m {
            for col in 0..m {
                let a: f64 = (0..m).map(|j| h_coeffs[j] * structure.get(j, col, row)).sum();
                k_mat[(row, col)] = Complex64::new(0.0, a);
            }
        }
        let adj_space = HilbertSpace::new([("adjoint", m)])?;
        let adjoint = Propagator::new(&DenseOperator::new(adj_space, k_mat)?)?;
        let hilbert = Propagator::new(&basis.dense_combination(&h_coeffs)?)?;
        Ok(Self {
            basis,
            h_coeffs,
            structure,
            weights,
            hw_vector,
            adjoint,
            hilbert,
        })
    }

    pub fn basis(&self) -> &LieBasis {
        &self.basis
    }

    pub fn h_coeffs(&self) -> &[f64] {
        &self.h_coeffs
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn n_qubits(&self) -> usize {
        self.basis.n_qubits
    }

    pub fn hamiltonian(&self) -> Result<DenseOperator> {
        self.basis.dense_combination(&self.h_coeffs)
    }

    /// `|hw(t)> = exp(-i H t) |hw>` by dense propagation.
    pub fn hw_state(&self, t: f64) -> DensityMatrix {
        let v = self.hilbert.apply(&self.hw_vector, t);
        DensityMatrix::pure(HilbertSpace::qubits(self.n_qubits()), &v).expect("unit vector")
    }
}

fn diagonalize_cartan(basis: &LieBasis) -> Result<(WeightTable, DVector<Complex64>)> {
    // A generic combination separates joint eigenspaces with distinct weights.
    let n = basis.n_qubits;
    let d = 1usize << n;
    let mats: Vec<DMatrix<Complex64>> = basis.cartan.iter().map(|&i| basis.elements[i].to_matrix()).collect();
    let mut generic = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (k, m) in mats.iter().enumerate() {
        let r = 1.0 + (k as f64 + 1.0) * std::f64::consts::SQRT_2 / 7.0 + (k * k) as f64 * 0.0173;
        generic += m * Complex64::new(r, 0.0);
    }
    let (_, vecs) = linalg::eigh(&generic);
    let mut weights = Vec::with_capacity(d);
    for col in vecs.column_iter() {
        let mut w = Vec::with_capacity(mats.len());
        for m in &mats {
            let u = (col.adjoint() * m * col)[(0, 0)].re;
            let r = u.round();
            if (u - r).abs() > 1e-8 {
                return Err(Error::InvalidFrame(format!("Cartan eigenvalue {u} is not an integer")));
            }
            w.push(r as i64);
        }
        weights.push(w);
    }
    let sums: Vec<i64> = weights.iter().map(|w| w.iter().sum()).collect();
    let top = *sums.iter().max().expect("nonempty");
    let winners: Vec<usize> = (0..d).filter(|&i| sums[i] == top).collect();
    if winners.len() != 1 {
        return Err(Error::InvalidFrame(format!(
            "highest weight sum {top} is attained by {} states",
            winners.len()
        )));
    }
    let hw_index = winners[0];
    let mut hw = vecs.column(hw_index).into_owned();
    let pivot = hw.iter().enumerate().fold(0, |best, (i, z)| {
        if z.norm() > hw[best].norm() + 1e-12 {
            i
        } else {
            best
        }
    });
    let phase = hw[pivot].conj() / hw[pivot].norm();
    hw *= phase;
    Ok((WeightTable { weights, hw_index }, hw))
}

pub fn weight_spectrum(frame: &CartanFrame) -> &WeightTable {
    &frame.weights
}

/// Coefficients of `h_k(t) = exp(-iHt) h_k exp(iHt)` on the basis, where `k`
/// indexes the Cartan subset.
pub fn rotated_cartan_coeffs(frame: &CartanFrame, k: usize, t: f64) -> Result<DVector<f64>> {
    let idx = *frame
        .basis
        .cartan
        .get(k)
        .ok_or_else(|| Error::InvalidFrame(format!("no Cartan element {k}")))?;
    let m = frame.basis.len();
    let mut e = DVector::from_element(m, Complex64::new(0.0, 0.0));
    e[idx] = Complex64::new(1.0, 0.0);
    Ok(frame.adjoint.apply(&e, t).map(|z| z.re))
}

/// `sum_k h_k(t)` on the basis.
pub fn rotated_cartan_sum(frame: &CartanFrame, t: f64) -> Result<DVector<f64>> {
    let mut acc = DVector::zeros(frame.basis.len());
    for k in 0..frame.basis.cartan.len() {
        acc += rotated_cartan_coeffs(frame, k, t)?;
    }
    Ok(acc)
}

/// Smallest penalty prefactor for which every non-highest weight state has
/// witness eigenvalue at most 0.
pub fn epsilon_select(frame: &CartanFrame, form: PenaltyForm) -> Result<f64> {
    let gap = frame.weights.min_sum_gap();
    if gap <= 0 {
        return Err(Error::LinearFormInvalid);
    }
    let g = gap as f64;
    Ok(match form {
        PenaltyForm::Linear => 1.0 / g,
        PenaltyForm::Quadratic => 1.0 / (g * g),
    })
}

fn unvalidated_witness(frame: &CartanFrame, t: f64, form: PenaltyForm, eps: f64) -> Result<Witness> {
    let mu = rotated_cartan_sum(frame, t)?;
    let vsum: i64 = frame.weights.highest().iter().sum();
    let h_sum = frame.basis.combination(mu.as_slice())?;
    let sum = match form {
        PenaltyForm::Linear => h_sum.scaled(eps).plus_scalar(1.0 - eps * vsum as f64),
        PenaltyForm::Quadratic => h_sum.plus_scalar(-(vsum as f64)).squared().scaled(-eps).plus_scalar(1.0),
    };
    Witness::from_sum(&sum)
}

/// The witness at time `t`, validated against the dense `|hw(t)><hw(t)|`.
pub fn gcs_bound_operator(frame: &CartanFrame, t: f64, form: PenaltyForm) -> Result<Witness> {
    let eps = epsilon_select(frame, form)?;
    let w = unvalidated_witness(frame, t, form, eps)?;
    w.validated(frame.hw_state(t).operator())
}

/// `prod_k prod_{u != v_k} (h_k(t) - u) / (v_k - u)` over the distinct
/// eigenvalues `u` of each Cartan element.
pub fn gcs_projector(frame: &CartanFrame, t: f64) -> Result<DensityMatrix> {
    let table = &frame.weights;
    let mut seen = BTreeMap::new();
    for (i, w) in table.weights.iter().enumerate() {
        if let Some(j) = seen.insert(w.clone(), i) {
            return Err(Error::DegenerateWeights(format!("states {j} and {i} share weight {w:?}")));
        }
    }
    let n = frame.n_qubits();
    let d = 1usize << n;
    let id: DMatrix<Complex64> = DMatrix::identity(d, d);
    let mut p = id.clone();
    for k in 0..frame.basis.cartan.len() {
        let lam = rotated_cartan_coeffs(frame, k, t)?;
        let hk = frame.basis.combination(lam.as_slice())?.to_matrix();
        let vk = table.highest()[k];
        let mut spectrum: Vec<i64> = table.weights.iter().map(|w| w[k]).collect();
        spectrum.sort_unstable();
        spectrum.dedup();
        for u in spectrum.into_iter().filter(|&u| u != vk) {
            let factor = (&hk - &id * Complex64::new(u as f64, 0.0)) / Complex64::new((vk - u) as f64, 0.0);
            p *= factor;
        }
    }
    let p = (&p + p.adjoint()).map(|z| z * 0.5);
    DensityMatrix::new(DenseOperator::new(HilbertSpace::qubits(n), p)?)
}

pub fn gcs_lower_bound(rho_l: &DensityMatrix, frame: &CartanFrame, t: f64, form: PenaltyForm) -> Result<BoundReport> {
    gcs_bound_operator(frame, t, form)?.evaluate(rho_l)
}

/// `lambda(t)` rows for one Cartan element over a time grid.
pub fn lambda_trajectory(frame: &CartanFrame, k: usize, times: &[f64]) -> Result<Vec<DVector<f64>>> {
    times.iter().map(|&t| rotated_cartan_coeffs(frame, k, t)).collect()
}
