#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use symfid::dense::DensityMatrix;
use symfid::pauli::{Pauli, PauliString, Sign};
use symfid::space::HilbertSpace;

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `G G^dagger / Tr` for a Gaussian `d x rank` matrix `G`.
pub fn random_density<R: Rng>(rng: &mut R, n_qubits: usize, rank: usize) -> DensityMatrix {
    let d = 1usize << n_qubits;
    let g = gaussian_matrix(rng, d, rank.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m.map(|z| z / tr);
    let m = (&m + m.adjoint()).map(|z| z * 0.5);
    DensityMatrix::new(symfid::dense::DenseOperator::new(HilbertSpace::qubits(n_qubits), m).unwrap()).unwrap()
}

pub fn random_pure<R: Rng>(rng: &mut R, n_qubits: usize) -> DensityMatrix {
    let d = 1usize << n_qubits;
    let v: DVector<Complex64> = gaussian_matrix(rng, d, 1).column(0).into_owned();
    DensityMatrix::pure(HilbertSpace::qubits(n_qubits), &v).unwrap()
}

/// Random states of varied rank, a third of them mixed with `target` so that
/// high-fidelity states are well represented.
pub fn random_state_near<R: Rng>(rng: &mut R, target: &DensityMatrix, n_qubits: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=(1usize << n_qubits));
    let noise = random_density(rng, n_qubits, rank);
    match rng.random_range(0..3) {
        0 => noise,
        _ => {
            let p: f64 = rng.random::<f64>().powi(2);
            DensityMatrix::mixture(&[(1.0 - p, target), (p, &noise)]).unwrap()
        }
    }
}

pub fn random_pauli<R: Rng>(rng: &mut R, n_qubits: usize) -> PauliString {
    loop {
        let f: Vec<Pauli> = (0..n_qubits).map(|_| Pauli::ALL[rng.random_range(0..4)]).collect();
        let sign = if rng.random::<bool>() { Sign::Plus } else { Sign::Minus };
        let p = PauliString::new(f, sign);
        if !p.is_identity() {
            return p;
        }
    }
}

use symfid::bounds::rotational::{rot_bound_operator, rot_projector};
use symfid::bounds::stabilizer::{stab_bound_operator, stab_projector, StabilizerGenerators};
use symfid::bounds::Witness;
use symfid::dense::DenseOperator;
use symfid::gcs::{gcs_bound_operator, CartanFrame, LieBasis, PenaltyForm};

/// A validated witness with its target projector.
pub struct Target {
    pub name: String,
    pub family: &'static str,
    pub n_qubits: usize,
    pub witness: Witness,
    pub projector: DenseOperator,
}

impl Target {
    /// The normalized projector, a valid state attaining the bound.
    pub fn target_state(&self) -> DensityMatrix {
        let rank = self.projector.matrix().trace().re;
        DensityMatrix::new(self.projector.scaled(1.0 / rank)).unwrap()
    }

    pub fn overlap(&self, rho: &DensityMatrix) -> f64 {
        symfid::dense::trace_product(rho.matrix(), self.projector.matrix()).re
    }
}

fn rot(n: usize, j: i64, jz: i64, family: &'static str) -> Target {
    Target {
        name: format!("rotational N={n} j={j} jz={jz}"),
        family,
        n_qubits: n,
        witness: rot_bound_operator(n, j, jz).unwrap(),
        projector: rot_projector(n, j, jz).unwrap(),
    }
}

fn stab(gens: &str) -> Target {
    let g: StabilizerGenerators = gens.parse().unwrap();
    Target {
        name: format!("stabilizer {g}"),
        family: "stabilizer",
        n_qubits: g.n_qubits(),
        witness: stab_bound_operator(&g).unwrap(),
        projector: stab_projector(&g),
    }
}

fn gcs(basis: LieBasis, coeffs: Vec<f64>, t: f64, form: PenaltyForm) -> Target {
    let n = basis.n_qubits();
    let m = basis.len();
    let frame = CartanFrame::new(basis, coeffs).unwrap();
    Target {
        name: format!("gcs {form:?} N={n} M={m} t={t}"),
        family: match form {
            PenaltyForm::Linear => "gcs linear",
            PenaltyForm::Quadratic => "gcs quadratic",
        },
        n_qubits: n,
        witness: gcs_bound_operator(&frame, t, form).unwrap(),
        projector: frame.hw_state(t).operator().clone(),
    }
}

/// Every witness family on up to five qubits.
pub fn soundness_targets() -> Vec<Target> {
    let mut out = Vec::new();
    for (n, jz) in [(2, 0), (3, 1), (4, 2), (4, 0), (5, 3), (5, -1)] {
        out.push(rot(n, n as i64, jz, "rotational j=N"));
    }
    for (n, j, jz) in [(3, 1, 1), (3, 1, -1), (4, 2, 0), (4, 0, 0), (5, 3, 1), (5, 1, 1)] {
        out.push(rot(n, j, jz, "rotational j<N"));
    }
    for g in [
        "+XX,+ZZ",
        "-ZZ,-XX",
        "+XXX,+ZZI,+IZZ",
        "+XXXX,+ZZII,+IZZI,+IIZZ",
        "+XZII,+ZXZI,+IZXZ,+IIZX",
        "+XXXXX,+ZZIII,+IZZII,+IIZZI,+IIIZZ",
        "+ZZI,+IZZ",
    ] {
        out.push(stab(g));
    }
    for form in [PenaltyForm::Linear, PenaltyForm::Quadratic] {
        out.push(gcs(LieBasis::so4(), vec![0.6, 0.6, -0.9, 0.0, 0.0, 0.0], 0.37, form));
        for (n, t) in [(3usize, 1.3), (4, 0.8)] {
            let b = LieBasis::ising_chain(n).unwrap();
            let c = b.ising_coefficients(0.9, -0.3, 0.5).unwrap();
            out.push(gcs(b, c, t, form));
        }
    }
    let b5 = LieBasis::ising_chain(5).unwrap();
    let c5 = b5.ising_coefficients(0.7, 0.2, -0.4).unwrap();
    out.push(gcs(b5, c5, 0.55, PenaltyForm::Linear));
    out
}
