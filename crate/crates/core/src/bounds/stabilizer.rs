//! Stabilizer-state witnesses `S = (sum_i g_i - (L - 2)) / 2`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BoundReport, Witness};
use crate::dense::{DenseOperator, DensityMatrix};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, Sign};
use crate::space::HilbertSpace;

/// Ordered, signed, pairwise commuting and independent generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PauliString>", into = "Vec<PauliString>")]
pub struct StabilizerGenerators {
    generators: Vec<PauliString>,
}

impl StabilizerGenerators {
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidGenerators("no generators given".into()))?;
        let n = first.n_qubits();
        if generators.iter().any(|g| g.n_qubits() != n) {
            return Err(Error::InvalidGenerators("generators act on different qubit counts".into()));
        }
        if generators.len() > n {
            return Err(Error::InvalidGenerators(format!(
                "{} generators on {n} qubits cannot be independent",
                generators.len()
            )));
        }
        for (a, g) in generators.iter().enumerate() {
            if g.is_identity() {
                return Err(Error::InvalidGenerators(format!("generator {g} is proportional to the identity")));
            }
            for h in &generators[a + 1..] {
                if !g.commutes_with(h) {
                    return Err(Error::InvalidGenerators(format!("{g} and {h} anticommute")));
                }
            }
        }
        // Every nonempty subset product must differ from +-identity.
        let l = generators.len();
        for mask in 1u64..(1u64 << l) {
            let mut acc = PauliString::identity(n);
            let mut phase = 0u8;
            for (i, g) in generators.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let (k, p) = acc.mul(g);
                    phase = (phase + k) % 4;
                    acc = p;
                }
            }
            if acc.is_identity() {
                let what = if phase == 0 { "dependent" } else { "contain -1 in the group" };
                return Err(Error::InvalidGenerators(format!("generators are {what} (subset mask {mask:#b})")));
            }
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn n_qubits(&self) -> usize {
        self.generators[0].n_qubits()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `X...X` and `Z_j Z_{j+1}` for the GHZ state on `n >= 2` qubits.
    pub fn ghz(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGenerators("GHZ needs at least two qubits".into()));
        }
        let mut gens = vec![PauliString::new(vec![Pauli::X; n], Sign::Plus)];
        for j in 0..n - 1 {
            gens.push(PauliString::from_sparse(n, &[(j, Pauli::Z), (j + 1, Pauli::Z)]));
        }
        Self::new(gens)
    }
}

impl TryFrom<Vec<PauliString>> for StabilizerGenerators {
    type Error = Error;

    fn try_from(v: Vec<PauliString>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StabilizerGenerators> for Vec<PauliString> {
    fn from(g: StabilizerGenerators) -> Self {
        g.generators
    }
}

/// Comma-separated signed strings, e.g. `+XXX,+ZZI,+IZZ`.
impl FromStr for StabilizerGenerators {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let gens = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<PauliString>>>()?;
        Self::new(gens)
    }
}

impl fmt::Display for StabilizerGenerators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Projector onto the stabilized space, `prod_i (1 + g_i) / 2`.
pub fn stab_projector(gens: &StabilizerGenerators) -> DenseOperator {
    let n = gens.n_qubits();
    let d = 1usize << n;
    let id: DMatrix<Complex64> = DMatrix::identity(d, d);
    let mut p = id.clone();
    for g in gens.generators() {
        p = p * (g.to_matrix() + &id).map(|z| z * 0.5);
    }
    let p = (&p + p.adjoint()).map(|z| z * 0.5);
    DenseOperator::new(HilbertSpace::qubits(n), p).expect("qubit dimensions match")
}

/// The stabilizer state itself; requires `L = N`.
pub fn stab_density(gens: &StabilizerGenerators) -> Result<DensityMatrix> {
    if gens.len() != gens.n_qubits() {
        return Err(Error::InvalidGenerators(format!(
            "{} generators on {} qubits stabilize a {}-dimensional space",
            gens.len(),
            gens.n_qubits(),
            1usize << (gens.n_qubits() - gens.len())
        )));
    }
    DensityMatrix::new(stab_projector(gens))
}

/// Validated witness; the target is the stabilized space (rank `2^{N-L}`).
pub fn stab_bound_operator(gens: &StabilizerGenerators) -> Result<Witness> {
    let n = gens.n_qubits();
    let l = gens.len() as f64;
    let mut s = PauliSum::scalar(n, -0.5 * (l - 2.0));
    for g in gens.generators() {
        s.add_term(g, 0.5);
    }
    Witness::from_sum(&s)?.validated(&stab_projector(gens))
}

pub fn stab_lower_bound(rho_l: &DensityMatrix, gens: &StabilizerGenerators) -> Result<BoundReport> {
    stab_bound_operator(gens)?.evaluate(rho_l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{pauli_term_census, validate_penalty_spectrum};
    use crate::dense::fidelity_sq;
    use crate::linalg::{eigh, max_abs};
    use nalgebra::DVector;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn ghz(n: usize) -> DensityMatrix {
        let s = 0.5f64.sqrt();
        let d = 1usize << n;
        let mut v = DVector::from_element(d, c(0.0));
        v[0] = c(s);
        v[d - 1] = c(s);
        DensityMatrix::pure(HilbertSpace::qubits(n), &v).unwrap()
    }

    #[test]
    fn validation_rejects_bad_sets() {
        assert!("+XX,+ZI".parse::<StabilizerGenerators>().is_err());
        assert!("+ZZ,+ZZ".parse::<StabilizerGenerators>().is_err());
        assert!("+ZZI,+IZZ,+ZIZ".parse::<StabilizerGenerators>().is_err());
        assert!("+II".parse::<StabilizerGenerators>().is_err());
        assert!("+Z,+X".parse::<StabilizerGenerators>().is_err());
        assert!("+ZI,-ZI".parse::<StabilizerGenerators>().is_err());
        assert!("".parse::<StabilizerGenerators>().is_err());
    }

    #[test]
    fn bell_psi_minus() {
        let g: StabilizerGenerators = "-ZZ,-XX".parse().unwrap();
        let rho = stab_density(&g).unwrap();
        let s = 0.5f64.sqrt();
        let psi = DensityMatrix::pure(
            HilbertSpace::qubits(2),
            &DVector::from_vec(vec![c(0.0), c(s), c(-s), c(0.0)]),
        )
        .unwrap();
        assert!(max_abs(&(rho.matrix() - psi.matrix())) < 1e-12);
        let w = stab_bound_operator(&g).unwrap();
        assert_eq!(w.offset(), 0.0);
        let names: Vec<String> = w.terms().iter().map(|(p, a)| format!("{p}:{a}")).collect();
        assert_eq!(names, vec!["+XX:-0.5", "+ZZ:-0.5"]);
    }

    #[test]
    fn ghz3_and_single_qubit() {
        let g: StabilizerGenerators = "+XXX,+ZZI,+IZZ".parse().unwrap();
        assert_eq!(g, StabilizerGenerators::ghz(3).unwrap());
        let rho = stab_density(&g).unwrap();
        assert!(max_abs(&(rho.matrix() - ghz(3).matrix())) < 1e-12);
        let m = rho.matrix();
        assert!(max_abs(&(m * m - m)) < 1e-10);

        let z: StabilizerGenerators = "+Z".parse().unwrap();
        let rho = stab_density(&z).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(rho.matrix()[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn density_matches_common_eigenvector() {
        // Diagonalize a generic positive combination of the generators; the unique
        // top eigenvector (eigenvalue L) is the simultaneous +1 eigenvector.
        let g: StabilizerGenerators = "+XZI,+ZXZ,+IZX".parse().unwrap();
        let mut h = DMatrix::from_element(8, 8, c(0.0));
        for (k, gen) in g.generators().iter().enumerate() {
            h += gen.to_matrix() * c(1.0 + 0.1 * k as f64);
        }
        let (vals, vecs) = eigh(&h);
        assert!((vals[7] - 3.3).abs() < 1e-10);
        let v = vecs.column(7).into_owned();
        let oracle = &v * v.adjoint();
        assert!(max_abs(&(stab_density(&g).unwrap().matrix() - oracle)) < 1e-10);
    }

    #[test]
    fn degenerate_space_has_no_density() {
        let g: StabilizerGenerators = "+ZZI".parse().unwrap();
        assert!(stab_density(&g).is_err());
        // The witness is still valid against the rank-4 stabilized space.
        let w = stab_bound_operator(&g).unwrap();
        assert_eq!(w.validity().unwrap().target_rank, 4);
    }

    #[test]
    fn depolarized_ghz() {
        let g = StabilizerGenerators::ghz(3).unwrap();
        let rho = ghz(3).depolarized(0.2).unwrap();
        let r = stab_lower_bound(&rho, &g).unwrap();
        assert!((r.bound_value - 0.7).abs() < 1e-12);
        let f2 = fidelity_sq(&rho, &stab_density(&g).unwrap()).unwrap();
        assert!((f2 - 0.825).abs() < 1e-12);
        assert!(r.bound_value <= f2);
    }

    #[test]
    fn mixed_and_target_values() {
        for n in 2..=4 {
            let g = StabilizerGenerators::ghz(n).unwrap();
            let mixed = DensityMatrix::maximally_mixed(HilbertSpace::qubits(n));
            let r = stab_lower_bound(&mixed, &g).unwrap();
            assert!((r.bound_value + (n as f64 - 2.0) / 2.0).abs() < 1e-12);
            let r = stab_lower_bound(&ghz(n), &g).unwrap();
            assert!((r.bound_value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_witness_passes_validation_and_census() {
        let g = StabilizerGenerators::ghz(3).unwrap();
        let w = stab_bound_operator(&g).unwrap();
        let rep = validate_penalty_spectrum(&w.to_dense(), &stab_projector(&g)).unwrap();
        assert!(rep.passed);
        assert_eq!(pauli_term_census(w.terms()).distinct_strings, 3);
    }

    #[test]
    fn display_round_trip() {
        let g = StabilizerGenerators::ghz(3).unwrap();
        let text = g.to_string();
        assert_eq!(text, "+XXX,+ZZI,+IZZ");
        assert_eq!(text.parse::<StabilizerGenerators>().unwrap(), g);
    }
}
