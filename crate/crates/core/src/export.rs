//! CSV tables with fixed column order and 12 significant digits.

use crate::error::{Error, Result};
use crate::iontrap::Trajectory;
use crate::pauli::PauliString;
use crate::stats::{ShotEstimate, WitnessBudget};

/// Shortest decimal form of `x` rounded to 12 significant digits.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    let a = rounded.abs();
    if a == 0.0 {
        "0".into()
    } else if !(1e-4..1e15).contains(&a) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Export(e.to_string()))?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Export(format!("row has {} fields, header {}", row.len(), header.len())));
        }
        w.write_record(&row).map_err(|e| Error::Export(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Export(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Export(e.to_string()))
}

pub const FIGURE1_HEADER: [&str; 5] = ["t_s", "fidelity_sq", "lower_bound", "sz1_ideal", "sz1_trap"];

pub fn figure1_csv(traj: &[Trajectory]) -> Result<String> {
    csv_string(
        &FIGURE1_HEADER,
        traj.iter().map(|s| {
            vec![
                fmt12(s.t),
                fmt12(s.fidelity_sq),
                fmt12(s.lower_bound),
                fmt12(s.observables["sz1_ideal"]),
                fmt12(s.observables["sz1_trap"]),
            ]
        }),
    )
}

/// `t_s, lambda_1 .. lambda_M`.
pub fn lambda_csv(rows: &[(f64, Vec<f64>)]) -> Result<String> {
    let m = rows.first().map_or(0, |r| r.1.len());
    let names: Vec<String> = std::iter::once("t_s".to_string())
        .chain((1..=m).map(|j| format!("lambda_{j}")))
        .collect();
    let header: Vec<&str> = names.iter().map(String::as_str).collect();
    csv_string(
        &header,
        rows.iter()
            .map(|(t, l)| std::iter::once(fmt12(*t)).chain(l.iter().map(|x| fmt12(*x))).collect()),
    )
}

pub const SHOT_HEADER: [&str; 6] = ["term", "coefficient", "shots", "x_plus", "estimate", "delta"];

pub fn shot_csv(budget: &WitnessBudget, estimates: &[ShotEstimate]) -> Result<String> {
    if budget.terms.len() != estimates.len() {
        return Err(Error::Export("estimates do not match the witness terms".into()));
    }
    csv_string(
        &SHOT_HEADER,
        budget.terms.iter().zip(estimates).map(|((p, a), e)| {
            vec![
                p.to_string(),
                fmt12(*a),
                e.shots.to_string(),
                e.x_plus.to_string(),
                fmt12(e.estimate),
                fmt12(e.delta_bound),
            ]
        }),
    )
}

/// `term, coefficient`, with the identity offset as the first row.
pub fn witness_terms_csv(offset: f64, terms: &[(PauliString, f64)]) -> Result<String> {
    let n = terms.first().map_or(1, |(p, _)| p.n_qubits());
    let first = vec![PauliString::identity(n).to_string(), fmt12(offset)];
    csv_string(
        &["term", "coefficient"],
        std::iter::once(first).chain(terms.iter().map(|(p, a)| vec![p.to_string(), fmt12(*a)])),
    )
}
