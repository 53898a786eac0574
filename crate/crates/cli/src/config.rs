//! Experiment configs: one TOML file per run, overridden by flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use symfid::bounds::stabilizer::StabilizerGenerators;
use symfid::gcs::PenaltyForm;
use symfid::iontrap::TrapConfig;
use symfid::states::{BellVariant, TargetKind};

/// A malformed config or flag. Maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Rotational,
    Stabilizer,
    Gcs,
}

/// Where the measured state comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSource {
    /// The witness's own target, normalized.
    Target,
    Named(TargetKind),
}

impl FromStr for StateSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let need = |what: &str| arg.ok_or_else(|| format!("state `{head}` needs `{head}:<{what}>`"));
        let kind = match head {
            "target" => return Ok(StateSource::Target),
            "ghz" => TargetKind::Ghz,
            "w" => TargetKind::W,
            "bell" => TargetKind::Bell {
                variant: match need("variant")? {
                    "plus" | "phi_plus" => BellVariant::Plus,
                    "minus" | "phi_minus" => BellVariant::Minus,
                    "psi_plus" => BellVariant::PsiPlus,
                    "psi_minus" => BellVariant::PsiMinus,
                    v => return Err(format!("unknown Bell variant `{v}`")),
                },
            },
            "dicke" => TargetKind::Dicke {
                j_z: need("j_z")?.parse().map_err(|e| format!("bad j_z: {e}"))?,
            },
            "basis" => TargetKind::Basis {
                bits: need("bits")?.to_string(),
            },
            "stabilizer" => TargetKind::Stabilizer {
                generators: need("generators")?.parse().map_err(|e: symfid::Error| e.to_string())?,
            },
            other => return Err(format!("unknown state `{other}`")),
        };
        if arg.is_some() && matches!(kind, TargetKind::Ghz | TargetKind::W) {
            return Err(format!("state `{head}` takes no argument"));
        }
        Ok(StateSource::Named(kind))
    }
}

impl fmt::Display for StateSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSource::Target => f.write_str("target"),
            StateSource::Named(kind) => match kind {
                TargetKind::Ghz => f.write_str("ghz"),
                TargetKind::W => f.write_str("w"),
                TargetKind::Bell { variant } => {
                    let v = match variant {
                        BellVariant::Plus => "plus",
                        BellVariant::Minus => "minus",
                        BellVariant::PsiPlus => "psi_plus",
                        BellVariant::PsiMinus => "psi_minus",
                    };
                    write!(f, "bell:{v}")
                }
                TargetKind::Dicke { j_z } => write!(f, "dicke:{j_z}"),
                TargetKind::Basis { bits } => write!(f, "basis:{bits}"),
                TargetKind::Stabilizer { generators } => write!(f, "stabilizer:{generators}"),
            },
        }
    }
}

impl Serialize for StateSource {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StateSource {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `depolarize:p`, mixing in `p I / 2^N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Noise {
    Depolarize(f64),
}

impl FromStr for Noise {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            Some(("depolarize", p)) => {
                let p: f64 = p.trim().parse().map_err(|e| format!("bad depolarizing probability: {e}"))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(format!("depolarizing probability {p} outside [0, 1]"));
                }
                Ok(Noise::Depolarize(p))
            }
            _ => Err(format!("unknown noise channel `{s}`; expected depolarize:<p>")),
        }
    }
}

impl fmt::Display for Noise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Noise::Depolarize(p) => write!(f, "depolarize:{p}"),
        }
    }
}

impl Serialize for Noise {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Noise {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `so4` or `ising:N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChoice {
    So4,
    Ising(usize),
}

impl FromStr for BasisChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "so4" => Ok(BasisChoice::So4),
            Some(("ising", n)) => Ok(BasisChoice::Ising(
                n.trim().parse().map_err(|e| format!("bad chain length: {e}"))?,
            )),
            _ => Err(format!("unknown basis `{s}`; expected so4 or ising:<N>")),
        }
    }
}

impl fmt::Display for BasisChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisChoice::So4 => f.write_str("so4"),
            BasisChoice::Ising(n) => write!(f, "ising:{n}"),
        }
    }
}

impl Serialize for BasisChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BasisChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Witness family, its parameters and the state it is evaluated on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessConfig {
    pub family: Option<Family>,
    pub state: StateSource,
    /// Dense density matrix file, used instead of `state`.
    pub rho_file: Option<PathBuf>,
    pub noise: Option<Noise>,
    pub n_qubits: Option<usize>,
    pub j: Option<i64>,
    pub jz: Option<i64>,
    pub generators: Option<StabilizerGenerators>,
    pub basis: BasisChoice,
    /// `gx, gy, b` of `sum (gx XX + gy YY) + b sum Z`.
    pub couplings: [f64; 3],
    pub t: f64,
    pub form: PenaltyForm,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            family: None,
            state: StateSource::Target,
            rho_file: None,
            noise: None,
            n_qubits: None,
            j: None,
            jz: None,
            generators: None,
            basis: BasisChoice::So4,
            couplings: [1.0, 0.0, 0.5],
            t: 0.0,
            form: PenaltyForm::Linear,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    /// Shots per witness term.
    pub shots: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { shots: 10_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub witness: WitnessConfig,
    pub sampling: SamplingConfig,
    pub trap: TrapConfig,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
