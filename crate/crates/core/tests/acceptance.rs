//! Acceptance checks, one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{random_density, random_pauli, random_state_near, soundness_targets};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symfid::bounds::pauli_term_census;
use symfid::bounds::rotational::rot_bound_operator;
use symfid::bounds::stabilizer::{stab_bound_operator, stab_density, StabilizerGenerators};
use symfid::dense::{evolve, fidelity_sq, Propagator};
use symfid::gcs::{
    epsilon_select, gcs_bound_operator, gcs_projector, rotated_cartan_coeffs, rotated_cartan_sum, CartanFrame,
    LieBasis, PenaltyForm,
};
use symfid::iontrap::{effective_coupling, fitted_coupling, lambda_trace, simulate, TrapConfig, TRUNCATION_TOL};
use symfid::linalg::max_abs;
use symfid::stats::{budget_plan, sample_expectation};

const TWO_PI: f64 = std::f64::consts::TAU;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let targets = soundness_targets();
    let (mut worst, mut worst_tight) = (f64::NEG_INFINITY, 0.0f64);
    for target in &targets {
        let psi = target.target_state();
        for _ in 0..500 {
            let rho = random_state_near(&mut rng, &psi, target.n_qubits);
            worst = worst.max(target.witness.evaluate(&rho).map_err(|e| e.to_string())?.bound_value - target.overlap(&rho));
        }
        let tight = target.witness.evaluate(&psi).map_err(|e| e.to_string())?.bound_value;
        worst_tight = worst_tight.max((tight - 1.0).abs());
    }
    check(
        worst <= 1e-9 && worst_tight <= 1e-10,
        format!(
            "{} targets x 500 states, max(bound - F^2) = {worst:.3e}, max |bound(target) - 1| = {worst_tight:.3e}",
            targets.len()
        ),
    )
}

fn stabilizer_closed_forms() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=6usize {
        let g = StabilizerGenerators::ghz(n).map_err(|e| e.to_string())?;
        let w = stab_bound_operator(&g).map_err(|e| e.to_string())?;
        let ghz = stab_density(&g).map_err(|e| e.to_string())?;
        for k in 0..=5 {
            let p = 0.1 * k as f64;
            let rho = ghz.depolarized(p).map_err(|e| e.to_string())?;
            let bound = w.evaluate(&rho).map_err(|e| e.to_string())?.bound_value;
            let f2 = fidelity_sq(&rho, &ghz).map_err(|e| e.to_string())?;
            worst = worst
                .max((bound - (1.0 - p * n as f64 / 2.0)).abs())
                .max((f2 - ((1.0 - p) + p / (1u64 << n) as f64)).abs());
        }
    }
    check(worst <= 1e-10, format!("N = 2..6, p = 0..0.5, max deviation {worst:.3e}"))
}

fn census() -> Outcome {
    let mut counts = Vec::new();
    let mut ok = true;
    for n in 2..=8usize {
        let w = rot_bound_operator(n, n as i64, n as i64 - 2).map_err(|e| e.to_string())?;
        let c = pauli_term_census(w.terms()).ordered_pair_count;
        ok &= c == 3 * n * n - 2 * n;
        counts.push(c.to_string());
    }
    let bell = rot_bound_operator(2, 2, 0).map_err(|e| e.to_string())?;
    let mut names: Vec<String> = bell.terms().iter().map(|(p, _)| p.unsigned().to_string()).collect();
    names.sort();
    ok &= names == ["+IZ", "+XX", "+YY", "+ZI", "+ZZ"];
    check(ok, format!("ordered counts N=2..8: [{}], Bell terms {}", counts.join(", "), names.join(" ")))
}

fn so4_frame(j: f64, b: f64) -> CartanFrame {
    CartanFrame::new(LieBasis::so4(), vec![b, b, j, 0.0, 0.0, 0.0]).unwrap()
}

fn gcs_oracle() -> Outcome {
    let chain = LieBasis::ising_chain(3).map_err(|e| e.to_string())?;
    let chain_coeffs = chain.ising_coefficients(0.7, 0.2, 0.45).map_err(|e| e.to_string())?;
    let frames = [so4_frame(0.8, 0.35), CartanFrame::new(chain, chain_coeffs).map_err(|e| e.to_string())?];
    let (mut worst_flow, mut worst_proj) = (0.0f64, 0.0f64);
    for frame in &frames {
        let h = frame.hamiltonian().map_err(|e| e.to_string())?;
        let prop = Propagator::new(&h).map_err(|e| e.to_string())?;
        let d = (1usize << frame.n_qubits()) as f64;
        let hw0 = frame.hw_state(0.0);
        for step in 0..100 {
            let t = 0.137 * step as f64;
            let u = prop.unitary(t);
            for k in 0..frame.basis().cartan().len() {
                let q = frame.basis().elements()[frame.basis().cartan()[k]].to_matrix();
                let rotated = &u * q * u.adjoint();
                let lam = rotated_cartan_coeffs(frame, k, t).map_err(|e| e.to_string())?;
                for (m, e) in frame.basis().elements().iter().enumerate() {
                    worst_flow = worst_flow.max((e.trace_with(&rotated).re / d - lam[m]).abs());
                }
            }
            if step % 10 == 0 {
                let p = gcs_projector(frame, t).map_err(|e| e.to_string())?;
                let oracle = evolve(&hw0, &h, t).map_err(|e| e.to_string())?;
                worst_proj = worst_proj.max(max_abs(&(p.matrix() - oracle.matrix())));
            }
        }
    }
    check(
        worst_flow <= 1e-9 && worst_proj <= 1e-8,
        format!("so4 and ising_chain(3): coefficient error {worst_flow:.3e}, projector error {worst_proj:.3e}"),
    )
}

fn two_ion_epsilon() -> Outcome {
    let cfg = TrapConfig::default();
    let frame = symfid::iontrap::ideal_frame(&cfg).map_err(|e| e.to_string())?;
    let eps = epsilon_select(&frame, PenaltyForm::Linear).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut offset = 0.0f64;
    for t in cfg.times().map_err(|e| e.to_string())?.into_iter().step_by(20) {
        let w = gcs_bound_operator(&frame, t, PenaltyForm::Linear).map_err(|e| e.to_string())?;
        let mu = rotated_cartan_sum(&frame, t).map_err(|e| e.to_string())?;
        offset = offset.max(w.offset().abs());
        let mut seen = vec![0.0; mu.len()];
        for (p, a) in w.terms() {
            let idx = frame.basis().index_of(p).ok_or(format!("term {p} outside so4"))?;
            seen[idx] += a;
        }
        for (m, s) in seen.iter().enumerate() {
            worst = worst.max((s - 0.5 * mu[m]).abs());
        }
    }
    check(
        eps == 0.5 && worst <= 1e-12 && offset <= 1e-12,
        format!("epsilon = {eps}, max |a_m - mu_m/2| = {worst:.3e}, offset {offset:.3e}"),
    )
}

fn trap_run() -> Result<(TrapConfig, Vec<symfid::iontrap::Trajectory>), String> {
    let cfg = TrapConfig::default();
    let traj = simulate(&cfg).map_err(|e| e.to_string())?;
    Ok((cfg, traj))
}

fn trap_simulation(run: &Result<(TrapConfig, Vec<symfid::iontrap::Trajectory>), String>) -> Outcome {
    let (_, traj) = run.as_ref().map_err(|e| e.clone())?;
    let f0 = traj[0].fidelity_sq;
    let f_min = traj.iter().map(|s| s.fidelity_sq).fold(f64::INFINITY, f64::min);
    let excess = traj.iter().map(|s| s.lower_bound - s.fidelity_sq).fold(f64::NEG_INFINITY, f64::max);
    check(
        f0 == 1.0 && f_min >= 0.8 && excess <= 1e-9,
        format!(
            "{} samples, F^2(0) = {f0:?}, min F^2 = {f_min:.6}, max(bound - F^2) = {excess:.3e}, \
             converged to {TRUNCATION_TOL:e} at n_max + 4",
            traj.len()
        ),
    )
}

fn effective_coupling_check(run: &Result<(TrapConfig, Vec<symfid::iontrap::Trajectory>), String>) -> Outcome {
    let (cfg, traj) = run.as_ref().map_err(|e| e.clone())?;
    let j_eff = effective_coupling(cfg).map_err(|e| e.to_string())?;
    let target = TWO_PI * 540.0;
    let (j_fit, fit) = fitted_coupling(traj, TWO_PI * cfg.b_hz).map_err(|e| e.to_string())?;
    let rel_eff = (j_eff.abs() - target).abs() / target;
    let rel_fit = (j_fit.abs() - j_eff.abs()).abs() / j_eff.abs();
    check(
        rel_eff <= 0.05 && rel_fit <= 0.10,
        format!(
            "J_eff = {:.1} Hz ({:.2}% from 540), fitted J = {:.1} Hz ({:.2}% from J_eff, rms {:.2e})",
            j_eff / TWO_PI,
            100.0 * rel_eff,
            j_fit / TWO_PI,
            100.0 * rel_fit,
            fit.rms_residual
        ),
    )
}

fn statistics() -> Outcome {
    let rho = symfid::dense::DensityMatrix::maximally_mixed(symfid::space::HilbertSpace::qubits(1));
    let delta = sample_expectation(&rho, &"X".parse().unwrap(), 10_000, 1).map_err(|e| e.to_string())?.delta_bound;
    let plans_ok = (1..=10u64).all(|n| budget_plan(n as usize, 0.01).ok() == Some(10_000 * n * n));
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    let mut hits = 0;
    for trial in 0..1000u64 {
        let n = rng.random_range(1..=3);
        let rank = rng.random_range(1..=(1usize << n));
        let rho = random_density(&mut rng, n, rank);
        let p = random_pauli(&mut rng, n);
        let exact = p.trace_with(rho.matrix()).re;
        let e = sample_expectation(&rho, &p, 400, trial).map_err(|e| e.to_string())?;
        if (e.estimate - exact).abs() <= e.delta_bound {
            hits += 1;
        }
    }
    check(
        delta == 0.01 && plans_ok && hits >= 680,
        format!("delta(10^4) = {delta}, budget_plan(N, 0.01) = 10^4 N^2 for N=1..10: {plans_ok}, coverage at X=400: {hits}/1000"),
    )
}

fn figure2_analog() -> Outcome {
    let cfg = TrapConfig::default();
    let rows = lambda_trace(&cfg).map_err(|e| e.to_string())?;
    let start = &rows[0].1;
    let start_ok = start.len() == 6 && start.iter().enumerate().all(|(m, &x)| x == if m == 0 { 1.0 } else { 0.0 });
    let norm_err = rows
        .iter()
        .map(|(_, l)| (l.iter().map(|x| x * x).sum::<f64>() - 1.0).abs())
        .fold(0.0f64, f64::max);
    let frame = symfid::iontrap::ideal_frame(&cfg).map_err(|e| e.to_string())?;
    let basis = frame.basis();
    let swapped: Vec<usize> = basis
        .elements()
        .iter()
        .map(|e| basis.index_of(&e.permuted(&[1, 0])).ok_or("so4 not closed under swap".to_string()))
        .collect::<Result<_, _>>()?;
    let mut perm_err = 0.0f64;
    for (t, l1) in &rows {
        let l2 = rotated_cartan_coeffs(&frame, 1, *t).map_err(|e| e.to_string())?;
        for m in 0..6 {
            perm_err = perm_err.max((l1[m] - l2[swapped[m]]).abs());
        }
    }
    check(
        start_ok && norm_err <= 1e-9 && perm_err <= 1e-9,
        format!(
            "lambda(0) = {start:?}, max |sum lambda^2 - 1| = {norm_err:.3e}, swap mismatch {perm_err:.3e}"
        ),
    )
}

fn main() -> ExitCode {
    let trap = std::cell::OnceCell::new();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("soundness", Box::new(soundness)),
        ("stabilizer closed forms", Box::new(stabilizer_closed_forms)),
        ("census", Box::new(census)),
        ("gcs oracle equivalence", Box::new(gcs_oracle)),
        ("two-ion epsilon", Box::new(two_ion_epsilon)),
        ("trap simulation", Box::new(|| trap_simulation(trap.get_or_init(trap_run)))),
        ("effective coupling", Box::new(|| effective_coupling_check(trap.get_or_init(trap_run)))),
        ("statistics", Box::new(statistics)),
        ("lambda trajectory", Box::new(figure2_analog)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {} {name}: {detail} ({:.2} s)", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
