//! Hermitian eigendecomposition with block detection.
//!
//! The nonzero pattern of the input is split into connected components and
//! each component is diagonalized separately; components with an exactly real
//! submatrix go through the real symmetric solver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Eigen-decomposition restricted to one invariant block of basis indices.
#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub indices: Vec<usize>,
    pub values: DVector<f64>,
    /// Columns are eigenvectors in the block's local coordinates.
    pub vectors: DMatrix<Complex64>,
}

/// Max absolute deviation of `m` from its conjugate transpose.
pub fn hermiticity_residual(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

fn components(m: &DMatrix<Complex64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in 0..n {
        for r in 0..c {
            if m[(r, c)] != Complex64::new(0.0, 0.0) || m[(c, r)] != Complex64::new(0.0, 0.0) {
                let a = find(&mut parent, r);
                let b = find(&mut parent, c);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

fn eigh_dense(m: DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    if m.iter().all(|z| z.im == 0.0) {
        let real = DMatrix::from_fn(n, n, |r, c| 0.5 * (m[(r, c)].re + m[(c, r)].re));
        let eig = SymmetricEigen::new(real);
        let vecs = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        (eig.eigenvalues, vecs)
    } else {
        let herm = DMatrix::from_fn(n, n, |r, c| 0.5 * (m[(r, c)] + m[(c, r)].conj()));
        let eig = SymmetricEigen::new(herm);
        (eig.eigenvalues, eig.eigenvectors)
    }
}

/// Diagonalizes a Hermitian matrix block by block.
pub fn eigh_blocks(m: &DMatrix<Complex64>) -> Vec<EigenBlock> {
    components(m)
        .into_iter()
        .map(|indices| {
            let k = indices.len();
            let sub = DMatrix::from_fn(k, k, |r, c| m[(indices[r], indices[c])]);
            let (values, vectors) = eigh_dense(sub);
            EigenBlock {
                indices,
                values,
                vectors,
            }
        })
        .collect()
}

/// Full eigendecomposition with eigenvalues in ascending order.
pub fn eigh(m: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let blocks = eigh_blocks(m);
    let mut cols: Vec<(f64, DVector<Complex64>)> = Vec::with_capacity(n);
    for b in &blocks {
        for (j, &val) in b.values.iter().enumerate() {
            let mut v = DVector::from_element(n, Complex64::new(0.0, 0.0));
            for (local, &global) in b.indices.iter().enumerate() {
                v[global] = b.vectors[(local, j)];
            }
            cols.push((val, v));
        }
    }
    cols.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values = DVector::from_iterator(n, cols.iter().map(|c| c.0));
    let mut vectors = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, (_, v)) in cols.iter().enumerate() {
        vectors.set_column(j, v);
    }
    (values, vectors)
}

pub fn eigvalsh(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut vals: Vec<f64> = eigh_blocks(m)
        .into_iter()
        .flat_map(|b| b.values.iter().copied().collect::<Vec<_>>())
        .collect();
    vals.sort_by(f64::total_cmp);
    vals
}

pub fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
