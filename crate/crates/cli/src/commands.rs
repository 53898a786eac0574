use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use symfid::bounds::rotational::{rot_bound_operator, rot_projector};
use symfid::bounds::stabilizer::{stab_bound_operator, stab_projector, StabilizerGenerators};
use symfid::bounds::{pauli_term_census, Census, Witness};
use symfid::dense::{trace_product, DenseOperator, DensityMatrix};
use symfid::export::{figure1_csv, lambda_csv, shot_csv, witness_terms_csv};
use symfid::gcs::{gcs_bound_operator, CartanFrame, LieBasis};
use symfid::iontrap::{effective_coupling, fitted_coupling, lambda_trace, simulate};
use symfid::space::HilbertSpace;
use symfid::states::{build_state, TargetKind, TargetStateSpec};
use symfid::stats::{confident_lower_bound, point_estimate, sample_witness, WitnessBudget};

use crate::config::{config_error, BasisChoice, ExperimentConfig, Family, Noise, StateSource, WitnessConfig};
use crate::output::{json_string, Artifacts};

const TWO_PI: f64 = std::f64::consts::TAU;

/// A built witness and the projector onto the states it certifies.
pub struct ResolvedWitness {
    pub family: Family,
    pub n_qubits: usize,
    pub witness: Witness,
    pub projector: DenseOperator,
}

impl ResolvedWitness {
    fn target_rank(&self) -> f64 {
        self.projector.matrix().trace().re
    }
}

fn spec(kind: &TargetKind, n: usize) -> anyhow::Result<TargetStateSpec> {
    Ok(TargetStateSpec::new(kind.clone(), n)?)
}

fn infer_qubits(cfg: &WitnessConfig) -> Option<usize> {
    if let Some(n) = cfg.n_qubits {
        return Some(n);
    }
    if let Some(g) = &cfg.generators {
        return Some(g.n_qubits());
    }
    match &cfg.state {
        StateSource::Named(TargetKind::Basis { bits }) => Some(bits.len()),
        StateSource::Named(TargetKind::Stabilizer { generators }) => Some(generators.n_qubits()),
        StateSource::Named(TargetKind::Bell { .. }) => Some(2),
        _ => None,
    }
}

fn gcs_frame(cfg: &WitnessConfig) -> anyhow::Result<CartanFrame> {
    let basis = match cfg.basis {
        BasisChoice::So4 => LieBasis::so4(),
        BasisChoice::Ising(n) => LieBasis::ising_chain(n)?,
    };
    if let Some(n) = cfg.n_qubits {
        if n != basis.n_qubits() {
            return Err(config_error(format!(
                "--n {n} conflicts with basis {} on {} qubits",
                cfg.basis,
                basis.n_qubits()
            )));
        }
    }
    let [gx, gy, b] = cfg.couplings;
    let coeffs = basis.ising_coefficients(gx, gy, b)?;
    Ok(CartanFrame::new(basis, coeffs)?)
}

pub fn resolve_witness(cfg: &WitnessConfig) -> anyhow::Result<ResolvedWitness> {
    let family = cfg
        .family
        .ok_or_else(|| config_error("no witness family; pass rotational, stabilizer or gcs"))?;
    match family {
        Family::Gcs => {
            let frame = gcs_frame(cfg)?;
            Ok(ResolvedWitness {
                family,
                n_qubits: frame.n_qubits(),
                witness: gcs_bound_operator(&frame, cfg.t, cfg.form)?,
                projector: frame.hw_state(cfg.t).operator().clone(),
            })
        }
        Family::Stabilizer => {
            let gens: StabilizerGenerators = match (&cfg.generators, &cfg.state) {
                (Some(g), _) => g.clone(),
                (None, StateSource::Named(kind)) => {
                    let n = infer_qubits(cfg).ok_or_else(|| config_error("state needs --n"))?;
                    spec(kind, n)?
                        .stabilizer_generators()
                        .ok_or_else(|| config_error(format!("{} is not a stabilizer state; pass --generators", cfg.state)))?
                }
                (None, StateSource::Target) => return Err(config_error("stabilizer witness needs --generators or --state")),
            };
            if let Some(n) = cfg.n_qubits {
                if n != gens.n_qubits() {
                    return Err(config_error(format!("--n {n} conflicts with generators on {} qubits", gens.n_qubits())));
                }
            }
            Ok(ResolvedWitness {
                family,
                n_qubits: gens.n_qubits(),
                witness: stab_bound_operator(&gens)?,
                projector: stab_projector(&gens),
            })
        }
        Family::Rotational => {
            let n = infer_qubits(cfg).ok_or_else(|| config_error("rotational witness needs --n"))?;
            let from_state = match &cfg.state {
                StateSource::Named(kind) => spec(kind, n)?.rotational_numbers(),
                StateSource::Target => None,
            };
            let (j, jz) = match (cfg.j, cfg.jz, from_state) {
                (Some(j), Some(jz), _) => (j, jz),
                (j, jz, Some((sj, sjz))) => (j.unwrap_or(sj), jz.unwrap_or(sjz)),
                _ => return Err(config_error("rotational witness needs --j and --jz")),
            };
            Ok(ResolvedWitness {
                family,
                n_qubits: n,
                witness: rot_bound_operator(n, j, jz)?,
                projector: rot_projector(n, j, jz)?,
            })
        }
    }
}

/// Dense state file: `{"re": [[..]], "im": [[..]]}` with `im` optional.
#[derive(Deserialize)]
struct RhoFile {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

fn load_rho(path: &Path) -> anyhow::Result<DensityMatrix> {
    let text =
        std::fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    let f: RhoFile =
        serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    let d = f.re.len();
    if d == 0 || !d.is_power_of_two() || f.re.iter().any(|r| r.len() != d) {
        return Err(config_error(format!("{}: need a square 2^N x 2^N matrix", path.display())));
    }
    let im = f.im.unwrap_or_else(|| vec![vec![0.0; d]; d]);
    if im.len() != d || im.iter().any(|r| r.len() != d) {
        return Err(config_error(format!("{}: `im` does not match the shape of `re`", path.display())));
    }
    let m = DMatrix::from_fn(d, d, |r, c| Complex64::new(f.re[r][c], im[r][c]));
    let space = HilbertSpace::qubits(d.trailing_zeros() as usize);
    Ok(DensityMatrix::new(DenseOperator::new(space, m)?)?)
}

pub fn resolve_state(cfg: &WitnessConfig, w: &ResolvedWitness) -> anyhow::Result<DensityMatrix> {
    let rho = match (&cfg.rho_file, &cfg.state) {
        (Some(path), _) => load_rho(path)?,
        (None, StateSource::Target) => DensityMatrix::new(w.projector.scaled(1.0 / w.target_rank()))?,
        (None, StateSource::Named(kind)) => build_state(&spec(kind, w.n_qubits)?)?,
    };
    if rho.dim() != 1 << w.n_qubits {
        return Err(config_error(format!(
            "state has dimension {}, witness acts on {} qubits",
            rho.dim(),
            w.n_qubits
        )));
    }
    Ok(match cfg.noise {
        Some(Noise::Depolarize(p)) => rho.depolarized(p)?,
        None => rho,
    })
}

#[derive(Serialize)]
struct BoundSummary<'a> {
    family: Family,
    n_qubits: usize,
    bound_value: f64,
    /// `Tr(rho P)` for the target projector `P`; the bound never exceeds it.
    target_overlap: f64,
    /// Present when the target is a single pure state.
    fidelity_sq: Option<f64>,
    offset: f64,
    terms: usize,
    census: Census,
    worst_eigenvalue: Option<f64>,
    seed: u64,
    config: &'a ExperimentConfig,
}

pub fn bound(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<()> {
    let w = resolve_witness(&cfg.witness)?;
    let rho = resolve_state(&cfg.witness, &w)?;
    let report = w.witness.evaluate(&rho)?;
    let overlap = trace_product(rho.matrix(), w.projector.matrix()).re;
    let pure_target = (w.target_rank() - 1.0).abs() < 1e-9;
    let summary = BoundSummary {
        family: w.family,
        n_qubits: w.n_qubits,
        bound_value: report.bound_value,
        target_overlap: overlap,
        fidelity_sq: pure_target.then_some(overlap),
        offset: w.witness.offset(),
        terms: w.witness.terms().len(),
        census: pauli_term_census(w.witness.terms()),
        worst_eigenvalue: w.witness.validity().map(|v| v.worst_eigenvalue),
        seed: cfg.seed,
        config: cfg,
    };
    let mut files = Artifacts::default();
    files.add("bound.json", json_string(&summary)?);
    files.add("witness_terms.csv", witness_terms_csv(w.witness.offset(), w.witness.terms())?);
    files.commit(out)?;
    let f2 = summary.fidelity_sq.map_or(String::new(), |f| format!(" fidelity_sq {}", symfid::export::fmt12(f)));
    println!("bound {}{f2}", symfid::export::fmt12(report.bound_value));
    Ok(())
}

pub fn census(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<()> {
    let w = resolve_witness(&cfg.witness)?;
    let c = pauli_term_census(w.witness.terms());
    let terms: Vec<String> = w.witness.terms().iter().map(|(p, _)| p.to_string()).collect();
    let summary = json!({
        "family": w.family,
        "n_qubits": w.n_qubits,
        "distinct_strings": c.distinct_strings,
        "ordered_pair_count": c.ordered_pair_count,
        "terms": terms,
        "seed": cfg.seed,
        "config": cfg,
    });
    let mut files = Artifacts::default();
    files.add("census.json", json_string(&summary)?);
    files.commit(out)?;
    println!("distinct_strings {} ordered_pair_count {}", c.distinct_strings, c.ordered_pair_count);
    Ok(())
}

pub fn sample(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<()> {
    let shots = cfg.sampling.shots;
    if shots == 0 {
        return Err(config_error("shots must be positive"));
    }
    let w = resolve_witness(&cfg.witness)?;
    let rho = resolve_state(&cfg.witness, &w)?;
    let budget = WitnessBudget::from_witness(&w.witness, shots);
    let estimates = sample_witness(&rho, &budget, cfg.seed)?;
    let confident = confident_lower_bound(&budget, &estimates)?;
    let summary = json!({
        "family": w.family,
        "n_qubits": w.n_qubits,
        "terms": budget.r(),
        "shots_per_term": shots,
        "point_estimate": point_estimate(&budget, &estimates)?,
        "penalty": budget.r() as f64 / (shots as f64).sqrt(),
        "confident_lower_bound": confident,
        "exact_bound": w.witness.evaluate(&rho)?.bound_value,
        "seed": cfg.seed,
        "config": cfg,
    });
    let mut files = Artifacts::default();
    files.add("shots.csv", shot_csv(&budget, &estimates)?);
    files.add("sample.json", json_string(&summary)?);
    files.commit(out)?;
    println!("confident_lower_bound {}", symfid::export::fmt12(confident));
    Ok(())
}

pub fn iontrap(cfg: &ExperimentConfig, out: &Path) -> anyhow::Result<()> {
    let trap = &cfg.trap;
    let traj = simulate(trap)?;
    let lambdas = lambda_trace(trap)?;
    let n = traj.len() as f64;
    let f_min = traj.iter().map(|s| s.fidelity_sq).fold(f64::INFINITY, f64::min);
    let f_mean = traj.iter().map(|s| s.fidelity_sq).sum::<f64>() / n;
    let gap_min = traj
        .iter()
        .map(|s| s.fidelity_sq - s.lower_bound)
        .fold(f64::INFINITY, f64::min);
    let fitted = match fitted_coupling(&traj, TWO_PI * trap.b_hz) {
        Ok((j, _)) => Some(j / TWO_PI),
        Err(e) => {
            log::warn!("no coupling fit: {e}");
            None
        }
    };
    let summary = json!({
        "samples": traj.len(),
        "fidelity_sq_min": f_min,
        "fidelity_sq_mean": f_mean,
        "fidelity_minus_bound_min": gap_min,
        "effective_coupling_hz": effective_coupling(trap)? / TWO_PI,
        "fitted_coupling_hz": fitted,
        "seed": cfg.seed,
        "config": cfg,
    });
    let mut files = Artifacts::default();
    files.add("figure1.csv", figure1_csv(&traj)?);
    files.add("figure2.csv", lambda_csv(&lambdas)?);
    files.add("iontrap.json", json_string(&summary)?);
    files.commit(out)?;
    println!(
        "fidelity_sq min {} mean {}",
        symfid::export::fmt12(f_min),
        symfid::export::fmt12(f_mean)
    );
    Ok(())
}
