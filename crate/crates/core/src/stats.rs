//! Projection-noise simulation for Pauli expectations and the shot-limited
//! lower bound `a_0 + sum_m a_m mean_m - R / sqrt X`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::bounds::Witness;
use crate::dense::DensityMatrix;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Outcome counts of `shots` projective measurements of one Pauli string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub pauli: PauliString,
    pub shots: u64,
    pub x_plus: u64,
    pub x_minus: u64,
    /// `(x_plus - x_minus) / shots`
    pub estimate: f64,
    /// Conservative deviation `1 / sqrt(shots)`.
    pub delta_bound: f64,
    /// Plug-in standard error `2 sqrt(p+ p- / shots)` from the observed frequencies.
    pub plugin_std: f64,
}

impl ShotEstimate {
    fn from_counts(pauli: PauliString, shots: u64, x_plus: u64) -> Self {
        let x = shots as f64;
        let p_plus = x_plus as f64 / x;
        Self {
            pauli,
            shots,
            x_plus,
            x_minus: shots - x_plus,
            estimate: (2.0 * x_plus as f64 - x) / x,
            delta_bound: 1.0 / x.sqrt(),
            plugin_std: 2.0 * (p_plus * (1.0 - p_plus) / x).sqrt(),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one term, independent of where the term sits in a list.
pub fn term_seed(master: u64, pauli: &PauliString) -> u64 {
    // FNV-1a over the signed string form.
    let h = pauli
        .to_string()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3));
    splitmix64(master ^ splitmix64(h))
}

/// Draws `x_plus ~ Binomial(shots, (1 + <p>) / 2)` with a ChaCha8 stream seeded by `seed`.
pub fn sample_expectation(rho: &DensityMatrix, p: &PauliString, shots: u64, seed: u64) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::Sampling("need at least one shot".into()));
    }
    let n = rho.space().qubit_count()?;
    if n != p.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.n_qubits(),
        });
    }
    let mean = p.trace_with(rho.matrix()).re;
    if mean.abs() > 1.0 + 1e-9 {
        return Err(Error::Sampling(format!("<{p}> = {mean} lies outside [-1, 1]")));
    }
    let p_plus = (0.5 * (1.0 + mean)).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Binomial::new(shots, p_plus).map_err(|e| Error::Sampling(e.to_string()))?;
    Ok(ShotEstimate::from_counts(p.clone(), shots, dist.sample(&mut rng)))
}

/// The terms of a witness with a shot allocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessBudget {
    pub a0: f64,
    pub terms: Vec<(PauliString, f64)>,
    pub shots_per_term: u64,
}

impl WitnessBudget {
    pub fn from_witness(w: &Witness, shots_per_term: u64) -> Self {
        Self {
            a0: w.offset(),
            terms: w.terms().to_vec(),
            shots_per_term,
        }
    }

    /// Number of measured expectations.
    pub fn r(&self) -> usize {
        self.terms.len()
    }
}

/// Samples every term of `budget` on `rho`, each with its own derived seed.
pub fn sample_witness(rho: &DensityMatrix, budget: &WitnessBudget, seed: u64) -> Result<Vec<ShotEstimate>> {
    budget
        .terms
        .iter()
        .map(|(p, _)| sample_expectation(rho, p, budget.shots_per_term, term_seed(seed, p)))
        .collect()
}

fn check_alignment(budget: &WitnessBudget, estimates: &[ShotEstimate]) -> Result<u64> {
    if estimates.len() != budget.terms.len() {
        return Err(Error::Sampling(format!(
            "{} estimates for {} witness terms",
            estimates.len(),
            budget.terms.len()
        )));
    }
    let shots = estimates.first().map_or(budget.shots_per_term, |e| e.shots);
    for ((p, _), e) in budget.terms.iter().zip(estimates) {
        if p.factors() != e.pauli.factors() || p.sign() != e.pauli.sign() {
            return Err(Error::Sampling(format!("estimate for {} does not match term {p}", e.pauli)));
        }
        if e.shots != shots {
            return Err(Error::Sampling("all terms must use the same number of shots".into()));
        }
    }
    Ok(shots)
}

/// `a_0 + sum_m a_m mean_m` without the shot penalty.
pub fn point_estimate(budget: &WitnessBudget, estimates: &[ShotEstimate]) -> Result<f64> {
    check_alignment(budget, estimates)?;
    Ok(budget.a0
        + budget
            .terms
            .iter()
            .zip(estimates)
            .map(|((_, a), e)| a * e.estimate)
            .sum::<f64>())
}

/// `a_0 + sum_m a_m mean_m - R / sqrt X`.
///
/// The penalty assumes `|a_m| <= 1`, which holds for the stabilizer and
/// coherent-state witnesses.
pub fn confident_lower_bound(budget: &WitnessBudget, estimates: &[ShotEstimate]) -> Result<f64> {
    let shots = check_alignment(budget, estimates)?;
    if budget.terms.iter().any(|(_, a)| a.abs() > 1.0) {
        log::warn!("witness has coefficients above 1 in magnitude; R / sqrt(X) underestimates the error");
    }
    Ok(point_estimate(budget, estimates)? - budget.r() as f64 / (shots as f64).sqrt())
}

/// Smallest `X` with `R / sqrt X <= target_error`.
pub fn budget_plan(r: usize, target_error: f64) -> Result<u64> {
    if !(target_error > 0.0) || !target_error.is_finite() {
        return Err(Error::Sampling(format!("target error must be positive, got {target_error}")));
    }
    if r == 0 {
        return Ok(1);
    }
    let r = r as f64;
    let fits = |x: u64| r / (x as f64).sqrt() <= target_error * (1.0 + 1e-12);
    let mut x = ((r / target_error).powi(2).ceil() as u64).max(1);
    while x > 1 && fits(x - 1) {
        x -= 1;
    }
    while !fits(x) {
        x += 1;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::stabilizer::{stab_bound_operator, StabilizerGenerators};
    use crate::space::HilbertSpace;

    #[test]
    fn eigenstate_gives_exact_estimate() {
        let rho = DensityMatrix::basis_state(HilbertSpace::qubits(2), 0).unwrap();
        for shots in [1, 7, 10_000] {
            let e = sample_expectation(&rho, &"ZZ".parse().unwrap(), shots, 3).unwrap();
            assert_eq!(e.estimate, 1.0);
            assert_eq!(e.x_minus, 0);
        }
        let e = sample_expectation(&rho, &"-ZI".parse().unwrap(), 50, 3).unwrap();
        assert_eq!(e.estimate, -1.0);
    }

    #[test]
    fn delta_and_plans() {
        let rho = DensityMatrix::maximally_mixed(HilbertSpace::qubits(1));
        let e = sample_expectation(&rho, &"X".parse().unwrap(), 10_000, 1).unwrap();
        assert_eq!(e.delta_bound, 0.01);
        assert_eq!(e.x_plus + e.x_minus, 10_000);
        for n in 1..=10u64 {
            assert_eq!(budget_plan(n as usize, 0.01).unwrap(), 10_000 * n * n);
        }
        assert_eq!(budget_plan(1, 1.0).unwrap(), 1);
        assert_eq!(budget_plan(6, 0.01).unwrap(), 360_000);
        assert!(budget_plan(3, 0.0).is_err());
    }

    #[test]
    fn seeds_are_deterministic_and_order_free() {
        let rho = DensityMatrix::maximally_mixed(HilbertSpace::qubits(3));
        let g = StabilizerGenerators::ghz(3).unwrap();
        let budget = WitnessBudget::from_witness(&stab_bound_operator(&g).unwrap(), 1000);
        let a = sample_witness(&rho, &budget, 42).unwrap();
        assert_eq!(a, sample_witness(&rho, &budget, 42).unwrap());
        let mut reversed = budget.clone();
        reversed.terms.reverse();
        let mut b = sample_witness(&rho, &reversed, 42).unwrap();
        b.reverse();
        assert_eq!(a, b);
        assert_ne!(a, sample_witness(&rho, &budget, 43).unwrap());
    }

    #[test]
    fn ideal_ghz_confident_bound() {
        for n in 2..=4usize {
            let g = StabilizerGenerators::ghz(n).unwrap();
            let w = stab_bound_operator(&g).unwrap();
            let shots = budget_plan(n, 0.01).unwrap();
            let budget = WitnessBudget::from_witness(&w, shots);
            let ghz = crate::bounds::stabilizer::stab_density(&g).unwrap();
            let est = sample_witness(&ghz, &budget, 9).unwrap();
            let b = confident_lower_bound(&budget, &est).unwrap();
            assert!((b - 0.99).abs() < 1e-12, "{b}");
        }
    }

    #[test]
    fn misaligned_estimates_are_rejected() {
        let rho = DensityMatrix::maximally_mixed(HilbertSpace::qubits(3));
        let g = StabilizerGenerators::ghz(3).unwrap();
        let budget = WitnessBudget::from_witness(&stab_bound_operator(&g).unwrap(), 100);
        let mut est = sample_witness(&rho, &budget, 1).unwrap();
        est.pop();
        assert!(confident_lower_bound(&budget, &est).is_err());
        let mut est = sample_witness(&rho, &budget, 1).unwrap();
        est[0].shots = 99;
        assert!(confident_lower_bound(&budget, &est).is_err());
        est.swap(0, 1);
        assert!(point_estimate(&budget, &est).is_err());
    }
}
