//! Signed Pauli strings and real-linear combinations of them.
//!
//! Qubit 1 is the leftmost tensor factor and the most significant bit of a
//! computational-basis index; `|0>` is the `+1` eigenstate of `Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = C_ZERO;
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    /// Product `self * other = i^k * result`, returned as `(k, result)`.
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_symbol(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Overall sign of a Hermitian Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Powers of `i` as a complex number.
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A signed tensor product of single-qubit Pauli factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    factors: Vec<Pauli>,
    sign: Sign,
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>, sign: Sign) -> Self {
        assert!(!factors.is_empty(), "a Pauli string needs at least one qubit");
        Self { factors, sign }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(vec![Pauli::I; n_qubits], Sign::Plus)
    }

    /// `p` acting on `qubit` (zero-based), identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Self {
        Self::from_sparse(n_qubits, &[(qubit, p)])
    }

    /// Builds a string from `(qubit, factor)` pairs; unnamed qubits get `I`.
    pub fn from_sparse(n_qubits: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut factors = vec![Pauli::I; n_qubits];
        for &(q, p) in ops {
            factors[q] = p;
        }
        Self::new(factors, Sign::Plus)
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn negated(mut self) -> Self {
        self.sign = self.sign.flipped();
        self
    }

    /// The same factors with a `+` sign.
    pub fn unsigned(&self) -> Self {
        Self::new(self.factors.clone(), Sign::Plus)
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|&p| p == Pauli::I)
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.n_qubits(), other.n_qubits());
        let anti = self
            .factors
            .iter()
            .zip(&other.factors)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Symbolic product `self * other = i^k * P` with `P` carrying a `+` sign.
    pub fn mul(&self, other: &PauliString) -> (u8, PauliString) {
        assert_eq!(self.n_qubits(), other.n_qubits());
        let mut k = 0u8;
        if self.sign == Sign::Minus {
            k += 2;
        }
        if other.sign == Sign::Minus {
            k += 2;
        }
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(&a, &b)| {
                let (kk, p) = a.mul(b);
                k += kk;
                p
            })
            .collect();
        (k % 4, PauliString::new(factors, Sign::Plus))
    }

    /// Relabels qubits: factor on qubit `q` moves to `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> PauliString {
        assert_eq!(perm.len(), self.n_qubits());
        let mut factors = vec![Pauli::I; self.n_qubits()];
        for (q, &p) in self.factors.iter().enumerate() {
            factors[perm[q]] = p;
        }
        PauliString::new(factors, self.sign)
    }

    fn masks(&self) -> (usize, usize, u8) {
        let n = self.n_qubits();
        let mut x = 0usize;
        let mut z = 0usize;
        let mut ys = 0u8;
        for (q, &p) in self.factors.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => x |= bit,
                Pauli::Z => z |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                    ys += 1;
                }
            }
        }
        (x, z, ys)
    }

    /// Action on the computational basis: `P|b> = amp * |b'>`.
    pub fn action(&self) -> impl Fn(usize) -> (usize, Complex64) {
        let (x, z, ys) = self.masks();
        let base = i_pow(ys) * self.sign.value();
        move |b| {
            let amp = if (b & z).count_ones() % 2 == 0 { base } else { -base };
            (b ^ x, amp)
        }
    }

    /// Dense `2^N x 2^N` matrix.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n_qubits();
        let act = self.action();
        let mut m = DMatrix::from_element(d, d, C_ZERO);
        for b in 0..d {
            let (b2, amp) = act(b);
            m[(b2, b)] = amp;
        }
        m
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let act = self.action();
        let mut out = DVector::from_element(v.len(), C_ZERO);
        for b in 0..v.len() {
            let (b2, amp) = act(b);
            out[b2] += amp * v[b];
        }
        out
    }

    /// `Tr(rho P)` without forming `P`.
    pub fn trace_with(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        let act = self.action();
        let mut acc = C_ZERO;
        for a in 0..rho.nrows() {
            let (b, amp) = act(a);
            acc += rho[(a, b)] * amp;
        }
        acc
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{s}")?;
        for p in &self.factors {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts `"+XXX"`, `"-ZZ"` or unsigned `"XIZ"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = match s.chars().next() {
            Some('+') => (Sign::Plus, &s[1..]),
            Some('-') => (Sign::Minus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let factors = body
            .chars()
            .map(Pauli::from_symbol)
            .collect::<Option<Vec<_>>>()
            .filter(|f| !f.is_empty())
            .ok_or_else(|| Error::ParsePauli(s.to_string()))?;
        Ok(PauliString::new(factors, sign))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A complex-linear combination of Pauli strings, keyed by factor sequence.
///
/// Terms whose coefficient is zero are kept when they enter through addition
/// or scaling, so the support of an expansion reflects which observables it
/// is built from. Multiplication drops only keys whose contributions all
/// came from anticommuting pairs and cancelled.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<Vec<Pauli>, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n_qubits: usize, c: f64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(&PauliString::identity(n_qubits), c);
        s
    }

    pub fn from_string(p: &PauliString) -> Self {
        let mut s = Self::zero(p.n_qubits());
        s.add_term(p, 1.0);
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn add_term(&mut self, p: &PauliString, coeff: f64) {
        self.add_complex(p.factors().to_vec(), Complex64::new(coeff * p.sign().value(), 0.0));
    }

    fn add_complex(&mut self, key: Vec<Pauli>, c: Complex64) {
        assert_eq!(key.len(), self.n_qubits);
        *self.terms.entry(key).or_insert(C_ZERO) += c;
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn plus(&self, other: &PauliSum) -> Self {
        assert_eq!(self.n_qubits, other.n_qubits);
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_complex(k.clone(), v);
        }
        out
    }

    pub fn plus_scalar(&self, c: f64) -> Self {
        self.plus(&Self::scalar(self.n_qubits, c))
    }

    pub fn times(&self, other: &PauliSum) -> Self {
        assert_eq!(self.n_qubits, other.n_qubits);
        let mut acc: BTreeMap<Vec<Pauli>, (Complex64, bool)> = BTreeMap::new();
        for (ka, &va) in &self.terms {
            let pa = PauliString::new(ka.clone(), Sign::Plus);
            for (kb, &vb) in &other.terms {
                let pb = PauliString::new(kb.clone(), Sign::Plus);
                let (k, p) = pa.mul(&pb);
                let entry = acc.entry(p.factors).or_insert((C_ZERO, false));
                entry.0 += i_pow(k) * va * vb;
                entry.1 |= k % 2 == 0;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, (c, structural))| *structural || *c != C_ZERO)
            .map(|(k, (c, _))| (k, c))
            .collect();
        Self {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    pub fn squared(&self) -> Self {
        self.times(self)
    }

    /// Coefficient of the all-identity string.
    pub fn offset(&self) -> f64 {
        self.terms
            .get(&vec![Pauli::I; self.n_qubits])
            .map_or(0.0, |c| c.re)
    }

    /// Coefficient of `p` (sign folded in), zero when absent.
    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms
            .get(p.factors())
            .map_or(C_ZERO, |&c| c * p.sign().value())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms
            .iter()
            .map(|(k, &c)| (PauliString::new(k.clone(), Sign::Plus), c))
    }

    /// Real coefficients of the non-identity terms, or an error when the sum
    /// is not Hermitian.
    pub fn hermitian_terms(&self) -> Result<Vec<(PauliString, f64)>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (p, c) in self.iter() {
            if c.im.abs() > 1e-12 * c.norm().max(1.0) {
                return Err(Error::NotHermitian(c.im.abs()));
            }
            if !p.is_identity() {
                out.push((p, c.re));
            }
        }
        Ok(out)
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n_qubits;
        let mut m = DMatrix::from_element(d, d, C_ZERO);
        for (p, c) in self.iter() {
            let act = p.action();
            for b in 0..d {
                let (b2, amp) = act(b);
                m[(b2, b)] += c * amp;
            }
        }
        m
    }

    /// `Tr(rho S)`.
    pub fn trace_with(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        self.iter().map(|(p, c)| c * p.trace_with(rho)).sum()
    }
}
