//! `symfid`: fidelity lower bounds, trap simulations and shot-noise studies
//! from the command line.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symfid::bounds::stabilizer::StabilizerGenerators;
use symfid::gcs::PenaltyForm;

use config::{BasisChoice, ConfigError, ExperimentConfig, Family, Noise, StateSource};

#[derive(Parser)]
#[command(name = "symfid", version, about = "Symmetry-based fidelity lower bounds")]
struct Cli {
    /// Output directory (default: current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML experiment config; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a witness on a state and write bound.json and witness_terms.csv.
    Bound(WitnessArgs),
    /// Simulate the two-ion trap and write figure1.csv, figure2.csv and iontrap.json.
    Iontrap(TrapArgs),
    /// Sample every witness term with shot noise and write shots.csv and sample.json.
    Sample {
        #[command(flatten)]
        witness: WitnessArgs,
        /// Shots per term.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Count the Pauli expectations a witness needs and write census.json.
    Census(WitnessArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Linear,
    Quadratic,
}

#[derive(Args)]
struct WitnessArgs {
    family: Option<Family>,
    /// target, ghz, w, bell:<variant>, dicke:<jz>, basis:<bits> or stabilizer:<g1,g2,..>.
    #[arg(long)]
    state: Option<StateSource>,
    /// JSON density matrix `{"re": [[..]], "im": [[..]]}`, used instead of --state.
    #[arg(long)]
    rho: Option<PathBuf>,
    /// depolarize:<p>
    #[arg(long)]
    noise: Option<Noise>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    j: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    jz: Option<i64>,
    /// Signed Pauli strings, e.g. "+XX,+ZZ".
    #[arg(long, allow_hyphen_values = true)]
    generators: Option<StabilizerGenerators>,
    /// so4 or ising:<N>.
    #[arg(long)]
    basis: Option<BasisChoice>,
    /// gx,gy,b of the chain Hamiltonian.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    couplings: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long)]
    form: Option<FormArg>,
}

#[derive(Args)]
struct TrapArgs {
    /// Lamb-Dicke parameter of both modes' drive; 0 decouples the spins.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    b_hz: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    j_hz: Option<f64>,
    #[arg(long)]
    n_bar: Option<f64>,
    #[arg(long)]
    t_points: Option<usize>,
    #[arg(long)]
    no_convergence_check: bool,
}

fn set<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

impl WitnessArgs {
    fn apply(self, cfg: &mut config::WitnessConfig) {
        set(&mut cfg.family, self.family);
        set(&mut cfg.rho_file, self.rho);
        set(&mut cfg.noise, self.noise);
        set(&mut cfg.n_qubits, self.n);
        set(&mut cfg.j, self.j);
        set(&mut cfg.jz, self.jz);
        set(&mut cfg.generators, self.generators);
        if let Some(s) = self.state {
            cfg.state = s;
            cfg.rho_file = None;
        }
        if let Some(b) = self.basis {
            cfg.basis = b;
        }
        if let Some(c) = self.couplings {
            cfg.couplings = [c[0], c[1], c[2]];
        }
        if let Some(t) = self.t {
            cfg.t = t;
        }
        if let Some(f) = self.form {
            cfg.form = match f {
                FormArg::Linear => PenaltyForm::Linear,
                FormArg::Quadratic => PenaltyForm::Quadratic,
            };
        }
    }
}

impl TrapArgs {
    fn apply(self, cfg: &mut symfid::iontrap::TrapConfig) {
        if let Some(eta) = self.eta {
            cfg.eta_cm = Some(eta);
            cfg.eta_br = Some(eta);
        }
        if let Some(n) = self.n_max {
            cfg.n_max = n;
        }
        if let Some(b) = self.b_hz {
            cfg.b_hz = b;
        }
        if let Some(j) = self.j_hz {
            cfg.j_hz = j;
        }
        if self.n_bar.is_some() {
            cfg.n_bar = self.n_bar;
            cfg.temperature_k = None;
        }
        if let Some(p) = self.t_points {
            cfg.t_points = p;
        }
        if self.no_convergence_check {
            cfg.check_convergence = false;
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match cli.command {
        Command::Bound(w) => {
            w.apply(&mut cfg.witness);
            commands::bound(&cfg, &out)
        }
        Command::Census(w) => {
            w.apply(&mut cfg.witness);
            commands::census(&cfg, &out)
        }
        Command::Sample { witness, shots } => {
            witness.apply(&mut cfg.witness);
            if let Some(x) = shots {
                cfg.sampling.shots = x;
            }
            commands::sample(&cfg, &out)
        }
        Command::Iontrap(t) => {
            t.apply(&mut cfg.trap);
            commands::iontrap(&cfg, &out)
        }
    }
}

/// 2: bad config, 3: witness validation, 4: Fock truncation, 1: anything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    use symfid::Error as E;
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(E::WitnessValidation { .. } | E::LinearFormInvalid) => 3,
        Some(E::TruncationNotConverged { .. }) => 4,
        Some(E::Export(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let validation = symfid::Error::WitnessValidation {
            worst: -0.5,
            reason: "complement eigenvalue above -1".into(),
        };
        assert_eq!(exit_code(&validation.into()), 3);
        assert_eq!(exit_code(&symfid::Error::LinearFormInvalid.into()), 3);
        let trunc = symfid::Error::TruncationNotConverged {
            n_max: 2,
            t: 1e-4,
            delta: 1e-3,
        };
        assert_eq!(exit_code(&trunc.into()), 4);
        assert_eq!(exit_code(&config::config_error("bad flag")), 2);
        assert_eq!(exit_code(&symfid::Error::InvalidSpec("n".into()).into()), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("disk full")), 1);
    }
}
