//! Dense operators and density matrices on labeled tensor-product spaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, EigenBlock};
use crate::pauli::PauliString;
use crate::space::HilbertSpace;

/// Hermiticity tolerance for observables and states.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A square complex matrix acting on a labeled Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    space: HilbertSpace,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(space: HilbertSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            matrix: DMatrix::from_element(d, d, ZERO),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            matrix: DMatrix::identity(d, d),
        }
    }

    /// `local` acting on factor `label`, identity on every other factor.
    pub fn local(space: &HilbertSpace, label: &str, local: &DMatrix<Complex64>) -> Result<Self> {
        let pos = space.position(label)?;
        let mut m = DMatrix::from_element(1, 1, ONE);
        for (i, f) in space.factors().iter().enumerate() {
            let piece = if i == pos {
                if local.nrows() != f.dim || local.ncols() != f.dim {
                    return Err(Error::DimensionMismatch {
                        expected: f.dim,
                        got: local.nrows(),
                    });
                }
                local.clone()
            } else {
                DMatrix::identity(f.dim, f.dim)
            };
            m = m.kronecker(&piece);
        }
        Ok(Self {
            space: space.clone(),
            matrix: m,
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        linalg::hermiticity_residual(&self.matrix)
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let r = self.hermiticity_residual();
        if r > HERMITIAN_TOL {
            Err(Error::NotHermitian(r))
        } else {
            Ok(())
        }
    }

    fn same_space(&self, other: &DenseOperator) -> Result<()> {
        if self.space != other.space {
            Err(Error::SpaceMismatch)
        } else {
            Ok(())
        }
    }

    pub fn plus(&self, other: &DenseOperator) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.map(|z| z * c),
        }
    }

    pub fn compose(&self, other: &DenseOperator) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn tensor(&self, other: &DenseOperator) -> Result<Self> {
        Ok(Self {
            space: self.space.tensor(&other.space)?,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Eigenvalues in ascending order (assumes Hermitian input).
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }
}

/// Dense matrix of a Pauli string on `q1 .. qN`.
pub fn pauli_matrix(p: &PauliString) -> DenseOperator {
    DenseOperator {
        space: HilbertSpace::qubits(p.n_qubits()),
        matrix: p.to_matrix(),
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(DenseOperator);

impl DensityMatrix {
    pub fn new(op: DenseOperator) -> Result<Self> {
        let herm = op.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = op.matrix.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let min = op.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self(op))
    }

    /// Wraps a matrix produced by a trace- and positivity-preserving map.
    /// Only Hermitian symmetrization is applied.
    pub(crate) fn from_trusted(space: HilbertSpace, m: DMatrix<Complex64>) -> Self {
        let sym = (&m + m.adjoint()).map(|z| z * 0.5);
        Self(DenseOperator { space, matrix: sym })
    }

    /// `|psi><psi|` after normalizing `psi`.
    pub fn pure(space: HilbertSpace, psi: &DVector<Complex64>) -> Result<Self> {
        if psi.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                got: psi.len(),
            });
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self::from_trusted(space, &v * v.adjoint()))
    }

    /// Computational basis state on qubits, e.g. `basis_state(3, 0b100)`.
    pub fn basis_state(space: HilbertSpace, index: usize) -> Result<Self> {
        let d = space.total_dim();
        if index >= d {
            return Err(Error::InvalidSpec(format!("basis index {index} out of range {d}")));
        }
        let mut m = DMatrix::from_element(d, d, ZERO);
        m[(index, index)] = ONE;
        Ok(Self(DenseOperator { space, matrix: m }))
    }

    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        let m = DMatrix::identity(d, d).map(|z: Complex64| z / d as f64);
        Self(DenseOperator { space, matrix: m })
    }

    /// Convex combination; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidDensity("empty mixture".into()))?;
        let space = first.1.space().clone();
        let mut m = DMatrix::from_element(space.total_dim(), space.total_dim(), ZERO);
        let mut total = 0.0;
        for &(w, rho) in parts {
            if rho.space() != &space {
                return Err(Error::SpaceMismatch);
            }
            if w < 0.0 {
                return Err(Error::InvalidDensity(format!("negative weight {w}")));
            }
            total += w;
            m += rho.matrix().map(|z| z * w);
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("weights sum to {total}")));
        }
        Ok(Self::from_trusted(space, m))
    }

    /// `(1 - p) rho + p I / d`.
    pub fn depolarized(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidSpec(format!("depolarizing probability {p} outside [0, 1]")));
        }
        let mixed = Self::maximally_mixed(self.space().clone());
        Self::mixture(&[(1.0 - p, self), (p, &mixed)])
    }

    pub fn operator(&self) -> &DenseOperator {
        &self.0
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.0.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0.matrix
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> f64 {
        self.0.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        trace_product(self.matrix(), self.matrix()).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }

    /// Dominant eigenvector; the state itself when pure.
    pub fn principal_vector(&self) -> DVector<Complex64> {
        let (_, vecs) = linalg::eigh(self.matrix());
        vecs.column(vecs.ncols() - 1).into_owned()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Ok(Self(self.0.tensor(&other.0)?))
    }
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Squared fidelity `Tr(rho_l rho_psi)`.
pub fn fidelity_sq(rho_l: &DensityMatrix, rho_psi: &DensityMatrix) -> Result<f64> {
    if rho_l.space() != rho_psi.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(trace_product(rho_l.matrix(), rho_psi.matrix()).re)
}

/// `Tr(rho obs)` for a Hermitian observable.
pub fn expectation(rho: &DensityMatrix, obs: &DenseOperator) -> Result<f64> {
    if rho.space() != obs.space() {
        return Err(Error::SpaceMismatch);
    }
    obs.ensure_hermitian()?;
    let v = trace_product(rho.matrix(), obs.matrix());
    debug_assert!(v.im.abs() < 1e-8 * v.norm().max(1.0));
    Ok(v.re)
}

struct TraceLayout {
    kept: HilbertSpace,
    /// `map[k * d_traced + t]` is the composite index of `(kept k, traced t)`.
    map: Vec<usize>,
    d_kept: usize,
    d_traced: usize,
}

fn trace_layout(space: &HilbertSpace, keep: &[&str]) -> Result<TraceLayout> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut keep_pos = keep
        .iter()
        .map(|l| space.position(l))
        .collect::<Result<Vec<_>>>()?;
    keep_pos.sort_unstable();
    keep_pos.dedup();
    let dims: Vec<usize> = space.factors().iter().map(|f| f.dim).collect();
    let n = dims.len();
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let traced_pos: Vec<usize> = (0..n).filter(|i| !keep_pos.contains(i)).collect();
    let d_kept: usize = keep_pos.iter().map(|&i| dims[i]).product();
    let d_traced: usize = traced_pos.iter().map(|&i| dims[i]).product();
    let offsets = |positions: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &p in positions.iter().rev() {
            off += (idx % dims[p]) * strides[p];
            idx /= dims[p];
        }
        off
    };
    let mut map = Vec::with_capacity(d_kept * d_traced);
    for k in 0..d_kept {
        let ok = offsets(&keep_pos, k);
        for t in 0..d_traced {
            map.push(ok + offsets(&traced_pos, t));
        }
    }
    Ok(TraceLayout {
        kept: space.restrict(&keep_pos),
        map,
        d_kept,
        d_traced,
    })
}

/// Reduced state on the factors named in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    let layout = trace_layout(rho.space(), keep)?;
    let m = rho.matrix();
    let (dk, dt) = (layout.d_kept, layout.d_traced);
    let reduced = DMatrix::from_fn(dk, dk, |a, b| {
        (0..dt)
            .map(|t| m[(layout.map[a * dt + t], layout.map[b * dt + t])])
            .sum()
    });
    Ok(DensityMatrix::from_trusted(layout.kept, reduced))
}

/// `Tr_traced |psi><psi|` for an unnormalized vector; the result carries
/// weight `|psi|^2`.
pub fn partial_trace_vector(
    space: &HilbertSpace,
    psi: &DVector<Complex64>,
    keep: &[&str],
) -> Result<DenseOperator> {
    if psi.len() != space.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.total_dim(),
            got: psi.len(),
        });
    }
    let layout = trace_layout(space, keep)?;
    let (dk, dt) = (layout.d_kept, layout.d_traced);
    let reduced = DMatrix::from_fn(dk, dk, |a, b| {
        (0..dt)
            .map(|t| psi[layout.map[a * dt + t]] * psi[layout.map[b * dt + t]].conj())
            .sum()
    });
    DenseOperator::new(layout.kept, reduced)
}

/// Time evolution `exp(-i H t)` from one Hermitian eigendecomposition.
#[derive(Clone, Debug)]
pub struct Propagator {
    space: HilbertSpace,
    blocks: Vec<EigenBlock>,
}

impl Propagator {
    pub fn new(h: &DenseOperator) -> Result<Self> {
        h.ensure_hermitian()?;
        Ok(Self {
            space: h.space().clone(),
            blocks: linalg::eigh_blocks(h.matrix()),
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Number of invariant blocks found in `H`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let d = self.dim();
        // Exact at t = 0 rather than V V^dagger with rounding.
        if t == 0.0 {
            return DMatrix::identity(d, d);
        }
        let mut u = DMatrix::from_element(d, d, ZERO);
        for b in &self.blocks {
            let phases = b.values.map(|e| Complex64::from_polar(1.0, -e * t));
            let mut scaled = b.vectors.clone();
            for (j, mut col) in scaled.column_iter_mut().enumerate() {
                col *= phases[j];
            }
            let local = scaled * b.vectors.adjoint();
            for (r, &gr) in b.indices.iter().enumerate() {
                for (c, &gc) in b.indices.iter().enumerate() {
                    u[(gr, gc)] = local[(r, c)];
                }
            }
        }
        u
    }

    /// `exp(-i H t) psi`.
    pub fn apply(&self, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        if t == 0.0 {
            return psi.clone();
        }
        let mut out = DVector::from_element(psi.len(), ZERO);
        for b in &self.blocks {
            let local = DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&i| psi[i]));
            let mut coeffs = b.vectors.adjoint() * local;
            for (j, c) in coeffs.iter_mut().enumerate() {
                *c *= Complex64::from_polar(1.0, -b.values[j] * t);
            }
            let back = &b.vectors * coeffs;
            for (local_i, &gi) in b.indices.iter().enumerate() {
                out[gi] = back[local_i];
            }
        }
        out
    }

    /// `U rho U^dagger` with `U = exp(-i H t)`.
    pub fn evolve(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        if rho.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let u = self.unitary(t);
        let m = &u * rho.matrix() * u.adjoint();
        Ok(DensityMatrix::from_trusted(self.space.clone(), m))
    }
}

/// `exp(-i H t) rho exp(i H t)`.
pub fn evolve(state: &DensityMatrix, h: &DenseOperator, t: f64) -> Result<DensityMatrix> {
    Propagator::new(h)?.evolve(state, t)
}

/// Boltzmann constant over reduced Planck constant, in rad/s per kelvin.
pub const KB_OVER_HBAR: f64 = 1.380649e-23 / 1.054_571_817e-34;

/// Temperature of a thermal state, either absolute or through the mean
/// occupation of a reference mode of angular frequency `mode_frequency`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Temperature {
    Kelvin(f64),
    MeanOccupation { n_bar: f64, mode_frequency: f64 },
}

impl Temperature {
    pub const ZERO: Temperature = Temperature::Kelvin(0.0);

    /// `k_B T / hbar` in rad/s.
    pub fn thermal_energy(&self) -> Result<f64> {
        match *self {
            Temperature::Kelvin(t) if t < 0.0 || t.is_nan() => Err(Error::NegativeTemperature(t)),
            Temperature::Kelvin(t) => Ok(t * KB_OVER_HBAR),
            Temperature::MeanOccupation { n_bar, .. } if n_bar < 0.0 || n_bar.is_nan() => {
                Err(Error::NegativeTemperature(n_bar))
            }
            Temperature::MeanOccupation { n_bar, .. } if n_bar == 0.0 => Ok(0.0),
            Temperature::MeanOccupation {
                n_bar,
                mode_frequency,
            } => Ok(mode_frequency / (1.0 + 1.0 / n_bar).ln()),
        }
    }
}

/// `exp(-H / kT) / Z`; the ground-state projector (uniform over a degenerate
/// ground space) at zero temperature.
pub fn thermal_state(h: &DenseOperator, temperature: Temperature) -> Result<DensityMatrix> {
    h.ensure_hermitian()?;
    let kt = temperature.thermal_energy()?;
    let (vals, vecs) = linalg::eigh(h.matrix());
    let e0 = vals[0];
    let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let weights: Vec<f64> = vals
        .iter()
        .map(|&e| {
            let gap = e - e0;
            if kt == 0.0 {
                if gap <= 1e-12 * scale {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-gap / kt).exp()
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let d = h.dim();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for (j, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = vecs.column(j);
        m += (v * v.adjoint()).map(|x| x * (w / z));
    }
    Ok(DensityMatrix::from_trusted(h.space().clone(), m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bell_singlet() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        let psi = DVector::from_vec(vec![c(0.0), c(s), c(-s), c(0.0)]);
        DensityMatrix::pure(HilbertSpace::qubits(2), &psi).unwrap()
    }

    #[test]
    fn pauli_matrix_examples() {
        let x = pauli_matrix(&"X".parse().unwrap());
        assert_eq!(x.matrix(), &DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
        let ii = pauli_matrix(&"II".parse().unwrap());
        assert_eq!(ii.matrix(), &DMatrix::identity(4, 4));
        let zz = pauli_matrix(&"ZZ".parse().unwrap());
        let diag: Vec<f64> = (0..4).map(|i| zz.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn density_validation() {
        let space = HilbertSpace::qubits(1);
        let bad_trace = DenseOperator::identity(space.clone());
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::InvalidDensity(_))));
        let neg = DenseOperator::new(
            space.clone(),
            DMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]),
        )
        .unwrap();
        assert!(DensityMatrix::new(neg).is_err());
        let ok = DenseOperator::identity(space).scaled(0.5);
        assert!(DensityMatrix::new(ok).is_ok());
    }

    #[test]
    fn fidelity_examples() {
        let bell = bell_singlet();
        assert!((fidelity_sq(&bell, &bell).unwrap() - 1.0).abs() < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(HilbertSpace::qubits(2));
        assert!((fidelity_sq(&mixed, &bell).unwrap() - 0.25).abs() < 1e-14);
        // |00> against the psi-plus Bell state gives 0; against phi-plus gives 1/2.
        let s = 0.5f64.sqrt();
        let phi = DensityMatrix::pure(
            HilbertSpace::qubits(2),
            &DVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]),
        )
        .unwrap();
        let zero = DensityMatrix::basis_state(HilbertSpace::qubits(2), 0).unwrap();
        assert!((fidelity_sq(&zero, &phi).unwrap() - 0.5).abs() < 1e-14);
        let other = DensityMatrix::maximally_mixed(HilbertSpace::qubits(1));
        assert_eq!(fidelity_sq(&other, &bell), Err(Error::SpaceMismatch));
    }

    #[test]
    fn expectation_examples() {
        let zero = DensityMatrix::basis_state(HilbertSpace::qubits(1), 0).unwrap();
        let z = pauli_matrix(&"Z".parse().unwrap());
        assert!((expectation(&zero, &z).unwrap() - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(HilbertSpace::qubits(1));
        let x = pauli_matrix(&"X".parse().unwrap());
        assert!(expectation(&mixed, &x).unwrap().abs() < 1e-15);
        let mzz = pauli_matrix(&"-ZZ".parse::<PauliString>().unwrap());
        assert!((expectation(&bell_singlet(), &mzz).unwrap() - 1.0).abs() < 1e-14);
        let non_herm = DenseOperator::new(
            HilbertSpace::qubits(1),
            DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]),
        )
        .unwrap();
        assert!(matches!(expectation(&mixed, &non_herm), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn partial_trace_examples() {
        let bell = bell_singlet();
        for keep in ["q1", "q2"] {
            let r = partial_trace(&bell, &[keep]).unwrap();
            let half = DensityMatrix::maximally_mixed(HilbertSpace::new([(keep, 2)]).unwrap());
            assert!(linalg::max_abs(&(r.matrix() - half.matrix())) < 1e-15);
        }
        let a = DensityMatrix::basis_state(HilbertSpace::new([("a", 3)]).unwrap(), 2).unwrap();
        let b = DensityMatrix::maximally_mixed(HilbertSpace::new([("b", 2)]).unwrap());
        let ab = a.tensor(&b).unwrap();
        let ra = partial_trace(&ab, &["a"]).unwrap();
        assert_eq!(ra.matrix(), a.matrix());
        let rb = partial_trace(&ab, &["b"]).unwrap();
        assert!(linalg::max_abs(&(rb.matrix() - b.matrix())) < 1e-15);
        assert_eq!(partial_trace(&ab, &[]), Err(Error::EmptyKeep));
        assert_eq!(partial_trace(&ab, &["c"]), Err(Error::UnknownLabel("c".into())));
    }

    #[test]
    fn partial_trace_vector_matches_density_route() {
        let space = HilbertSpace::new([("a", 2), ("b", 3), ("c", 2)]).unwrap();
        let psi = DVector::from_fn(12, |i, _| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos()));
        let rho = DensityMatrix::pure(space.clone(), &psi).unwrap();
        let via_rho = partial_trace(&rho, &["c", "a"]).unwrap();
        let via_vec = partial_trace_vector(&space, &psi.unscale(psi.norm()), &["a", "c"]).unwrap();
        assert!(linalg::max_abs(&(via_rho.matrix() - via_vec.matrix())) < 1e-14);
    }

    #[test]
    fn evolve_examples() {
        let space = HilbertSpace::qubits(2);
        let zero = DensityMatrix::basis_state(space.clone(), 0).unwrap();
        let h = pauli_matrix(&"ZI".parse().unwrap())
            .plus(&pauli_matrix(&"IZ".parse().unwrap()))
            .unwrap()
            .scaled(1.3);
        let same = evolve(&zero, &h, 0.0).unwrap();
        assert!(linalg::max_abs(&(same.matrix() - zero.matrix())) < 1e-15);
        let later = evolve(&zero, &h, 2.7).unwrap();
        assert!(linalg::max_abs(&(later.matrix() - zero.matrix())) < 1e-13);
        let not_h = DenseOperator::new(space, DMatrix::from_fn(4, 4, |r, c| Complex64::new(r as f64, c as f64))).unwrap();
        assert!(matches!(evolve(&zero, &not_h, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn thermal_state_examples() {
        let n = 30;
        let space = HilbertSpace::new([("m", n)]).unwrap();
        let omega = 2.0;
        let h = DenseOperator::new(
            space.clone(),
            DMatrix::from_fn(n, n, |r, c2| if r == c2 { c(omega * r as f64) } else { c(0.0) }),
        )
        .unwrap();
        let ground = thermal_state(&h, Temperature::ZERO).unwrap();
        assert!((ground.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        let hot = thermal_state(&h, Temperature::Kelvin(f64::INFINITY)).unwrap();
        assert!((hot.matrix()[(5, 5)].re - 1.0 / n as f64).abs() < 1e-14);
        // Mean occupation against the geometric-series value 1/(e^{w/kT}-1).
        let n_bar = 0.4;
        let t = Temperature::MeanOccupation { n_bar, mode_frequency: omega };
        let rho = thermal_state(&h, t).unwrap();
        let mean: f64 = (0..n).map(|k| k as f64 * rho.matrix()[(k, k)].re).sum();
        assert!((mean - n_bar).abs() < 1e-9);
        assert_eq!(
            thermal_state(&h, Temperature::Kelvin(-1.0)),
            Err(Error::NegativeTemperature(-1.0))
        );
    }

    #[test]
    fn degenerate_ground_is_uniform() {
        let h = pauli_matrix(&"ZZ".parse().unwrap());
        let rho = thermal_state(&h, Temperature::ZERO).unwrap();
        // ZZ has ground space {01, 10}.
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!((rho.matrix()[(2, 2)].re - 0.5).abs() < 1e-14);
    }
}
