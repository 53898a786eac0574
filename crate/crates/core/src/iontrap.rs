//! Two trapped ions driven by a spin-dependent force on both axial modes.
//!
//! `H = w_cm a+a + w_br b+b
//!    - [eta_cm w_cm (a + a+) + eta_br w_br (b + b+)] X1
//!    - [eta_cm w_cm (a + a+) - eta_br w_br (b + b+)] X2
//!    + B (Z1 + Z2)`
//!
//! Eliminating the phonons leaves an Ising coupling `J X1 X2` between the
//! spins; the simulation compares the exact reduced spin dynamics against
//! the ideal model `J X1 X2 + B (Z1 + Z2)` and the coherent-state witness.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{
    expectation, fidelity_sq, partial_trace_vector, pauli_matrix, thermal_state, DenseOperator, DensityMatrix,
    Propagator, Temperature,
};
use crate::error::{Error, Result};
use crate::gcs::{gcs_lower_bound, lambda_trajectory, CartanFrame, LieBasis, PenaltyForm};
use crate::space::HilbertSpace;

/// Reduced Planck constant in J s.
pub const HBAR: f64 = 1.054_571_817e-34;
const TWO_PI: f64 = std::f64::consts::TAU;
/// Couplings at or above this value put the Lamb-Dicke assumption in doubt.
pub const ETA_WARN: f64 = 0.3;

/// Trap parameters as written in a config file. Frequencies are cyclic (Hz)
/// and converted to rad/s on use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrapConfig {
    pub omega_cm_hz: f64,
    /// Defaults to `sqrt(3) omega_cm_hz`.
    pub omega_br_hz: Option<f64>,
    pub eta_cm: Option<f64>,
    /// Defaults to `eta_cm (omega_cm / omega_br)^{3/2}`, the scaling of the
    /// force-derived coupling.
    pub eta_br: Option<f64>,
    /// Laser force in newtons; used with `mass_kg` when `eta_cm` is absent.
    pub force_n: Option<f64>,
    pub mass_kg: Option<f64>,
    pub b_hz: f64,
    /// Coupling of the ideal comparison model.
    pub j_hz: f64,
    pub temperature_k: Option<f64>,
    /// Mean occupation of the center-of-mass mode; alternative to `temperature_k`.
    pub n_bar: Option<f64>,
    pub n_max: usize,
    /// Explicit sample times in seconds. Overrides `t_max_s` and `t_points`.
    pub t_grid_s: Option<Vec<f64>>,
    /// Defaults to `1 / |j_hz|`.
    pub t_max_s: Option<f64>,
    pub t_points: usize,
    /// Rerun at `n_max + 4` and fail when the fidelity moves by more than `1e-6`.
    pub check_convergence: bool,
}

impl Default for TrapConfig {
    fn default() -> Self {
        Self {
            omega_cm_hz: 100e3,
            omega_br_hz: None,
            eta_cm: Some(0.063),
            eta_br: None,
            force_n: None,
            mass_kg: None,
            b_hz: 560.0,
            j_hz: -540.0,
            temperature_k: None,
            n_bar: None,
            n_max: 12,
            t_grid_s: None,
            t_max_s: None,
            t_points: 200,
            check_convergence: true,
        }
    }
}

/// Resolved parameters in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapParams {
    pub omega_cm: f64,
    pub omega_br: f64,
    pub eta_cm: f64,
    pub eta_br: f64,
    pub b: f64,
    pub j: f64,
}

/// `eta = F / (sqrt 2 hbar w) sqrt(hbar / (2 m w))` for angular `w`.
pub fn eta_from_force(force_n: f64, mass_kg: f64, omega: f64) -> f64 {
    force_n / (2f64.sqrt() * HBAR * omega) * (HBAR / (2.0 * mass_kg * omega)).sqrt()
}

impl TrapConfig {
    pub fn params(&self) -> Result<TrapParams> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.omega_cm_hz > 0.0) {
            return bad(format!("omega_cm_hz must be positive, got {}", self.omega_cm_hz));
        }
        let omega_cm = TWO_PI * self.omega_cm_hz;
        let omega_br = TWO_PI * self.omega_br_hz.unwrap_or(3f64.sqrt() * self.omega_cm_hz);
        if !(omega_br > 0.0) {
            return bad("omega_br_hz must be positive".into());
        }
        let from_force = match (self.force_n, self.mass_kg) {
            (Some(f), Some(m)) if m > 0.0 => Some((f, m)),
            (Some(_), Some(m)) => return bad(format!("mass_kg must be positive, got {m}")),
            (Some(_), None) | (None, Some(_)) => return bad("force_n and mass_kg must be given together".into()),
            (None, None) => None,
        };
        let eta_cm = match (self.eta_cm, from_force) {
            (Some(e), _) => e,
            (None, Some((f, m))) => eta_from_force(f, m, omega_cm),
            (None, None) => return bad("give eta_cm, or force_n with mass_kg".into()),
        };
        let eta_br = match (self.eta_br, self.eta_cm, from_force) {
            (Some(e), _, _) => e,
            (None, None, Some((f, m))) => eta_from_force(f, m, omega_br),
            _ => eta_cm * (omega_cm / omega_br).powf(1.5),
        };
        for (name, e) in [("eta_cm", eta_cm), ("eta_br", eta_br)] {
            if !e.is_finite() || e < 0.0 {
                return bad(format!("{name} must be finite and nonnegative, got {e}"));
            }
            if e >= ETA_WARN {
                log::warn!("{name} = {e} is not small; the Lamb-Dicke picture may not apply");
            }
        }
        if self.n_max < 2 {
            return bad(format!("n_max must be at least 2, got {}", self.n_max));
        }
        if self.temperature_k.is_some() && self.n_bar.is_some() {
            return bad("give temperature_k or n_bar, not both".into());
        }
        Ok(TrapParams {
            omega_cm,
            omega_br,
            eta_cm,
            eta_br,
            b: TWO_PI * self.b_hz,
            j: TWO_PI * self.j_hz,
        })
    }

    pub fn temperature(&self) -> Temperature {
        match (self.temperature_k, self.n_bar) {
            (Some(t), _) => Temperature::Kelvin(t),
            (None, Some(n_bar)) => Temperature::MeanOccupation {
                n_bar,
                mode_frequency: TWO_PI * self.omega_cm_hz,
            },
            (None, None) => Temperature::ZERO,
        }
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        if let Some(grid) = &self.t_grid_s {
            if grid.is_empty() || grid.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidConfig("t_grid_s must be a nonempty list of finite times".into()));
            }
            return Ok(grid.clone());
        }
        let t_max = match self.t_max_s {
            Some(t) => t,
            None if self.j_hz != 0.0 => 1.0 / self.j_hz.abs(),
            None => return Err(Error::InvalidConfig("j_hz = 0 needs an explicit t_max_s or t_grid_s".into())),
        };
        if !(t_max > 0.0) || self.t_points < 2 {
            return Err(Error::InvalidConfig("need t_max_s > 0 and t_points >= 2".into()));
        }
        let n = self.t_points;
        Ok((0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect())
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sigma_x() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

fn sigma_z() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

fn number(levels: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(levels, levels, |r, s| if r == s { c(r as f64) } else { c(0.0) })
}

/// `a + a+` on `levels` Fock states.
fn position(levels: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(levels, levels, |r, s| {
        if r + 1 == s || s + 1 == r {
            c((r.max(s) as f64).sqrt())
        } else {
            c(0.0)
        }
    })
}

/// Factors `q1, q2, cm, br` with `n_max + 1` Fock levels per mode.
pub fn trap_space(n_max: usize) -> HilbertSpace {
    HilbertSpace::new([("q1", 2), ("q2", 2), ("cm", n_max + 1), ("br", n_max + 1)]).expect("fixed labels")
}

fn kron4(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, c: &DMatrix<Complex64>, d: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b).kronecker(c).kronecker(d)
}

fn build_hamiltonian(p: &TrapParams, n_max: usize) -> DenseOperator {
    let l = n_max + 1;
    let (i2, il) = (DMatrix::identity(2, 2), DMatrix::identity(l, l));
    let (sx, sz, n, x) = (sigma_x(), sigma_z(), number(l), position(l));
    let g_cm = c(p.eta_cm * p.omega_cm);
    let g_br = c(p.eta_br * p.omega_br);
    let h = kron4(&i2, &i2, &n, &il) * c(p.omega_cm)
        + kron4(&i2, &i2, &il, &n) * c(p.omega_br)
        - kron4(&sx, &i2, &x, &il) * g_cm
        - kron4(&sx, &i2, &il, &x) * g_br
        - kron4(&i2, &sx, &x, &il) * g_cm
        + kron4(&i2, &sx, &il, &x) * g_br
        + (kron4(&sz, &i2, &il, &il) + kron4(&i2, &sz, &il, &il)) * c(p.b);
    DenseOperator::new(trap_space(n_max), h).expect("dimensions match")
}

pub fn build_trap_hamiltonian(cfg: &TrapConfig) -> Result<DenseOperator> {
    Ok(build_hamiltonian(&cfg.params()?, cfg.n_max))
}

fn phonon_hamiltonian(p: &TrapParams, n_max: usize) -> DenseOperator {
    let l = n_max + 1;
    let il = DMatrix::identity(l, l);
    let h = number(l).kronecker(&il) * c(p.omega_cm) + il.kronecker(&number(l)) * c(p.omega_br);
    let space = HilbertSpace::new([("cm", l), ("br", l)]).expect("fixed labels");
    DenseOperator::new(space, h).expect("dimensions match")
}

/// `J X1 X2 + B (Z1 + Z2)` with the configured ideal coupling.
pub fn ideal_ising_hamiltonian(cfg: &TrapConfig) -> DenseOperator {
    let (j, b) = (TWO_PI * cfg.j_hz, TWO_PI * cfg.b_hz);
    so4_basis_hamiltonian(j, b)
}

fn so4_coeffs(j: f64, b: f64) -> Vec<f64> {
    vec![b, b, j, 0.0, 0.0, 0.0]
}

fn so4_basis_hamiltonian(j: f64, b: f64) -> DenseOperator {
    LieBasis::so4()
        .dense_combination(&so4_coeffs(j, b))
        .expect("six coefficients")
}

/// The coherent-state frame of the ideal model.
pub fn ideal_frame(cfg: &TrapConfig) -> Result<CartanFrame> {
    CartanFrame::new(LieBasis::so4(), so4_coeffs(TWO_PI * cfg.j_hz, TWO_PI * cfg.b_hz))
}

/// Signed Ising coupling left after eliminating both modes to second order:
/// `-2 (eta_cm^2 w_cm - eta_br^2 w_br)`.
pub fn effective_coupling(cfg: &TrapConfig) -> Result<f64> {
    let p = cfg.params()?;
    Ok(-2.0 * (p.eta_cm.powi(2) * p.omega_cm - p.eta_br.powi(2) * p.omega_br))
}

/// One sample of the simulated run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: f64,
    #[serde(skip)]
    pub rho_ion: Option<DensityMatrix>,
    pub fidelity_sq: f64,
    pub lower_bound: f64,
    /// `sz1_ideal`, `sz1_trap`, `sx1sx2_ideal`, `sx1sx2_trap`.
    pub observables: BTreeMap<String, f64>,
}

struct Ensemble {
    space: HilbertSpace,
    propagator: Propagator,
    members: Vec<(f64, DVector<Complex64>)>,
}

fn prepare(p: &TrapParams, n_max: usize, temperature: Temperature) -> Result<Ensemble> {
    let h = build_hamiltonian(p, n_max);
    let propagator = Propagator::new(&h)?;
    // H_phonon is diagonal in the Fock basis, so its thermal state is too.
    let rho_ph = thermal_state(&phonon_hamiltonian(p, n_max), temperature)?;
    let members = (0..rho_ph.dim())
        .filter_map(|k| {
            let w = rho_ph.matrix()[(k, k)].re;
            (w > 1e-15).then(|| {
                // Spins in |0 0>, the slowest index, so phonon state k sits at k.
                let mut v = DVector::from_element(h.dim(), c(0.0));
                v[k] = c(1.0);
                (w, v)
            })
        })
        .collect();
    Ok(Ensemble {
        space: h.space().clone(),
        propagator,
        members,
    })
}

fn reduced_state(ens: &Ensemble, t: f64) -> Result<DensityMatrix> {
    let mut acc = DMatrix::from_element(4, 4, c(0.0));
    for (w, v) in &ens.members {
        let psi = ens.propagator.apply(v, t);
        acc += partial_trace_vector(&ens.space, &psi, &["q1", "q2"])?.matrix() * c(*w);
    }
    DensityMatrix::new(DenseOperator::new(HilbertSpace::qubits(2), acc)?)
}

fn run(cfg: &TrapConfig, n_max: usize, times: &[f64], keep_states: bool) -> Result<Vec<Trajectory>> {
    let p = cfg.params()?;
    let ens = prepare(&p, n_max, cfg.temperature())?;
    let frame = ideal_frame(cfg)?;
    let z1 = pauli_matrix(&"ZI".parse().expect("literal"));
    let xx = pauli_matrix(&"XX".parse().expect("literal"));
    times
        .par_iter()
        .map(|&t| {
            let rho = reduced_state(&ens, t)?;
            let ideal = frame.hw_state(t);
            let fidelity_sq = fidelity_sq(&rho, &ideal)?;
            let lower_bound = gcs_lower_bound(&rho, &frame, t, PenaltyForm::Linear)?.bound_value;
            let observables = BTreeMap::from([
                ("sz1_ideal".to_string(), expectation(&ideal, &z1)?),
                ("sz1_trap".to_string(), expectation(&rho, &z1)?),
                ("sx1sx2_ideal".to_string(), expectation(&ideal, &xx)?),
                ("sx1sx2_trap".to_string(), expectation(&rho, &xx)?),
            ]);
            Ok(Trajectory {
                t,
                rho_ion: keep_states.then_some(rho),
                fidelity_sq,
                lower_bound,
                observables,
            })
        })
        .collect()
}

/// Convergence threshold on the fidelity between `n_max` and `n_max + 4`.
pub const TRUNCATION_TOL: f64 = 1e-6;

/// Evolves `|0 0> (x) rho_thermal` under the trap Hamiltonian and compares the
/// reduced spin state with the ideal model at every grid time.
pub fn simulate(cfg: &TrapConfig) -> Result<Vec<Trajectory>> {
    let times = cfg.times()?;
    let traj = run(cfg, cfg.n_max, &times, true)?;
    if cfg.check_convergence {
        let finer = run(cfg, cfg.n_max + 4, &times, false)?;
        for (a, b) in traj.iter().zip(&finer) {
            let delta = (a.fidelity_sq - b.fidelity_sq).abs();
            if delta > TRUNCATION_TOL {
                return Err(Error::TruncationNotConverged {
                    n_max: cfg.n_max,
                    t: a.t,
                    delta,
                });
            }
        }
    }
    Ok(traj)
}

/// Least-squares fit of `A (1 - cos w t)` to an oscillation starting at zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationFit {
    pub omega: f64,
    pub amplitude: f64,
    pub rms_residual: f64,
}

fn best_amplitude(ts: &[f64], ys: &[f64], omega: f64) -> (f64, f64) {
    let (mut gy, mut gg, mut yy) = (0.0, 0.0, 0.0);
    for (&t, &y) in ts.iter().zip(ys) {
        let g = 1.0 - (omega * t).cos();
        gy += g * y;
        gg += g * g;
        yy += y * y;
    }
    if gg == 0.0 {
        return (0.0, yy);
    }
    (gy / gg, yy - gy * gy / gg)
}

/// Scans `w` up to the grid's Nyquist frequency, then refines by golden-section search.
pub fn fit_oscillation(ts: &[f64], ys: &[f64]) -> Result<OscillationFit> {
    if ts.len() != ys.len() || ts.len() < 8 {
        return Err(Error::InvalidConfig("need at least 8 matching samples to fit".into()));
    }
    let span = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ts.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(span > 0.0) {
        return Err(Error::InvalidConfig("samples span no time".into()));
    }
    let w_lo = 0.25 * TWO_PI / span;
    let w_hi = std::f64::consts::PI * (ts.len() - 1) as f64 / span;
    let steps = 20 * ts.len();
    let cost = |w: f64| best_amplitude(ts, ys, w).1;
    let dw = (w_hi - w_lo) / steps as f64;
    let best = (0..=steps)
        .map(|i| w_lo + dw * i as f64)
        .min_by(|&a, &b| cost(a).total_cmp(&cost(b)))
        .expect("nonempty scan");
    let (mut a, mut b) = ((best - dw).max(w_lo), (best + dw).min(w_hi));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if cost(x1) < cost(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let omega = 0.5 * (a + b);
    let (amplitude, res) = best_amplitude(ts, ys, omega);
    Ok(OscillationFit {
        omega,
        amplitude,
        rms_residual: (res.max(0.0) / ts.len() as f64).sqrt(),
    })
}

/// Ising coupling implied by the simulated `<X1 X2>` oscillation.
///
/// From `|0 0>` the ideal model gives `<X1 X2> = (2BJ / W^2)(1 - cos 2Wt)`
/// with `W = sqrt(J^2 + 4B^2)`, so the fitted frequency fixes `|J|` and the
/// amplitude sign fixes the sign of `J`.
pub fn fitted_coupling(traj: &[Trajectory], b: f64) -> Result<(f64, OscillationFit)> {
    let ts: Vec<f64> = traj.iter().map(|s| s.t).collect();
    let ys: Vec<f64> = traj.iter().map(|s| s.observables["sx1sx2_trap"]).collect();
    let fit = fit_oscillation(&ts, &ys)?;
    let half = 0.5 * fit.omega;
    let j_sq = half * half - 4.0 * b * b;
    if j_sq < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "fitted frequency {} rad/s is below 4|B|; no real coupling matches",
            fit.omega
        )));
    }
    Ok((j_sq.sqrt() * (fit.amplitude * b).signum(), fit))
}

/// Coefficients of the rotated `Z1` on the so(4) basis over the config's grid.
pub fn lambda_trace(cfg: &TrapConfig) -> Result<Vec<(f64, Vec<f64>)>> {
    let times = cfg.times()?;
    let frame = ideal_frame(cfg)?;
    let rows = lambda_trajectory(&frame, 0, &times)?;
    Ok(times.into_iter().zip(rows.into_iter().map(|r| r.iter().copied().collect())).collect())
}
