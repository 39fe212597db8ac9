//! Exact intersection arithmetic on the span of `H, L_1, ..., L_n`.
//!
//! Classes store doubled coefficients so that the half class `𝓛` with
//! `Λ = 2𝓛` is exact. All pairings are computed in integers and returned as
//! rationals (at worst quarter-integers for two half classes with odd
//! doubled coefficients; half-integers or integers in every case the filters
//! use).
//!
//! The Gram matrix is the naive one: `H² = 4`, `H·L_i = 1`, `L_i² = -2` and
//! `L_i·L_j` read off the arrangement. It may be degenerate; no rank or
//! signature statement is made about it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{decode_graph6, encode_graph6, Arrangement, ArrangementError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("classes live over different arrangements")]
    AmbientMismatch,
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("line index {0} out of range")]
    NoSuchLine(usize),
    #[error("code length {0} exceeds 64")]
    CodeTooLong(usize),
    #[error("generator {index} has bits beyond the code length")]
    WordOutOfRange { index: usize },
    #[error("generator {index} is dependent on the previous ones over GF(2)")]
    DependentGenerators { index: usize },
    #[error("dimension {0} exceeds the brute-force limit of {MAX_CODE_DIMENSION}")]
    DimensionTooLarge(usize),
    #[error("generator line {line}: {msg}")]
    BadGeneratorLine { line: usize, msg: String },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// Pairing matrix on the basis `H, L_1, ..., L_n` (index 0 is `H`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramData {
    arrangement: Arrangement,
    matrix: Vec<Vec<i64>>,
}

impl GramData {
    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Basis size, `n + 1`.
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }
}

pub fn gram(a: &Arrangement) -> GramData {
    let n = a.n();
    let mut m = vec![vec![0i64; n + 1]; n + 1];
    m[0][0] = 4;
    for i in 0..n {
        m[0][i + 1] = 1;
        m[i + 1][0] = 1;
        m[i + 1][i + 1] = -2;
        for j in 0..n {
            if a.meets(i, j) {
                m[i + 1][j + 1] = 1;
            }
        }
    }
    GramData { arrangement: a.clone(), matrix: m }
}

/// A class `a_H·H + Σ c_i·L_i`, stored as `(2a_H; 2c_1, ..., 2c_n)`.
#[derive(Clone)]
pub struct DivisorClass {
    doubled: Vec<i64>,
    ambient: Arc<GramData>,
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DivisorClass").field("doubled", &self.doubled).finish()
    }
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.doubled == other.doubled && same_ambient(&self.ambient, &other.ambient)
    }
}

fn same_ambient(a: &Arc<GramData>, b: &Arc<GramData>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Shared ambient for building classes over one arrangement.
pub fn ambient(a: &Arrangement) -> Arc<GramData> {
    Arc::new(gram(a))
}

impl DivisorClass {
    pub fn from_doubled(ambient: Arc<GramData>, doubled: Vec<i64>) -> Result<Self, LatticeError> {
        if doubled.len() != ambient.rank() {
            return Err(LatticeError::LengthMismatch { expected: ambient.rank(), got: doubled.len() });
        }
        Ok(DivisorClass { doubled, ambient })
    }

    /// From integer coefficients `(a_H; c_1, ..., c_n)`.
    pub fn from_integer(ambient: Arc<GramData>, coeffs: &[i64]) -> Result<Self, LatticeError> {
        Self::from_doubled(ambient, coeffs.iter().map(|c| 2 * c).collect())
    }

    pub fn zero(ambient: Arc<GramData>) -> Self {
        let r = ambient.rank();
        DivisorClass { doubled: vec![0; r], ambient }
    }

    pub fn hyperplane(ambient: Arc<GramData>) -> Self {
        let mut c = Self::zero(ambient);
        c.doubled[0] = 2;
        c
    }

    pub fn line(ambient: Arc<GramData>, i: usize) -> Result<Self, LatticeError> {
        if i + 1 >= ambient.rank() {
            return Err(LatticeError::NoSuchLine(i));
        }
        let mut c = Self::zero(ambient);
        c.doubled[i + 1] = 2;
        Ok(c)
    }

    /// `Λ = Σ L_i`.
    pub fn total(ambient: Arc<GramData>) -> Self {
        let mut c = Self::zero(ambient);
        c.doubled[1..].iter_mut().for_each(|x| *x = 2);
        c
    }

    /// `𝓛` with `2𝓛 = Λ`; formal, whatever the parity of `n`.
    pub fn half(ambient: Arc<GramData>) -> Self {
        let mut c = Self::zero(ambient);
        c.doubled[1..].iter_mut().for_each(|x| *x = 1);
        c
    }

    pub fn doubled_coeffs(&self) -> &[i64] {
        &self.doubled
    }

    pub fn ambient(&self) -> &Arc<GramData> {
        &self.ambient
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.doubled.iter().all(|c| c % 2 == 0)
    }

    pub fn pair(&self, other: &DivisorClass) -> Result<Rational64, LatticeError> {
        if !same_ambient(&self.ambient, &other.ambient) {
            return Err(LatticeError::AmbientMismatch);
        }
        Ok(self.pair_unchecked(other))
    }

    fn pair_unchecked(&self, other: &DivisorClass) -> Rational64 {
        let g = &self.ambient.matrix;
        let mut acc = 0i64;
        for (i, &x) in self.doubled.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let row = &g[i];
            let s: i64 = other.doubled.iter().zip(row).map(|(y, gij)| y * gij).sum();
            acc += x * s;
        }
        Rational64::new(acc, 4)
    }

    pub fn square(&self) -> Rational64 {
        self.pair_unchecked(self)
    }

    /// `C·H`.
    pub fn degree(&self) -> Rational64 {
        self.pair_unchecked(&Self::hyperplane(self.ambient.clone()))
    }

    /// `C·L_i`.
    pub fn pair_line(&self, i: usize) -> Rational64 {
        let g = &self.ambient.matrix[i + 1];
        let s: i64 = self.doubled.iter().zip(g).map(|(x, gij)| x * gij).sum();
        Rational64::new(s, 2)
    }

    /// Coefficient of `L_i` (not doubled).
    pub fn line_coeff(&self, i: usize) -> Rational64 {
        Rational64::new(self.doubled[i + 1], 2)
    }

    pub fn hyperplane_coeff(&self) -> Rational64 {
        Rational64::new(self.doubled[0], 2)
    }

    fn zip_with(&self, other: &DivisorClass, f: impl Fn(i64, i64) -> i64) -> DivisorClass {
        assert!(same_ambient(&self.ambient, &other.ambient), "ambient mismatch");
        DivisorClass {
            doubled: self.doubled.iter().zip(&other.doubled).map(|(&a, &b)| f(a, b)).collect(),
            ambient: self.ambient.clone(),
        }
    }

    /// JSON form: doubled coefficients plus the ambient as graph6.
    pub fn to_json(&self) -> DivisorClassJson {
        DivisorClassJson {
            doubled_coeffs: self.doubled.clone(),
            ambient: encode_graph6(&self.ambient.arrangement),
        }
    }

    pub fn from_json(json: &DivisorClassJson) -> Result<Self, LatticeError> {
        let a = decode_graph6(&json.ambient)?;
        Self::from_doubled(ambient(&a), json.doubled_coeffs.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClassJson {
    pub doubled_coeffs: Vec<i64>,
    pub ambient: String,
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { doubled: self.doubled.iter().map(|x| -x).collect(), ambient: self.ambient.clone() }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass { doubled: rhs.doubled.iter().map(|x| self * x).collect(), ambient: rhs.ambient.clone() }
    }
}

/// `𝓛` for an arrangement.
pub fn half_class(a: &Arrangement) -> DivisorClass {
    DivisorClass::half(ambient(a))
}

/// Riemann–Roch on a K3 surface: `χ(C) = 2 + C²/2`.
pub fn chi(c: &DivisorClass) -> Rational64 {
    Rational64::from_integer(2) + c.square() / 2
}

/// `χ(𝒪(m) ⊗ 𝒪(-Λ)) = 2 + 2m² + k - (m+1)n`.
pub fn chi_twist(m: i64, a: &Arrangement) -> i64 {
    let n = a.n() as i64;
    let k = a.edge_count() as i64;
    chi_twist_numbers(m, n, k)
}

pub fn chi_twist_numbers(m: i64, n: i64, k: i64) -> i64 {
    2 + 2 * m * m + k - (m + 1) * n
}

/// Largest supported code dimension for the brute-force traversal.
pub const MAX_CODE_DIMENSION: usize = 20;

/// A binary linear code given by independent generator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenSetCode {
    length: usize,
    generators: Vec<u64>,
}

impl EvenSetCode {
    pub fn new(length: usize, generators: Vec<u64>) -> Result<Self, LatticeError> {
        if length > 64 {
            return Err(LatticeError::CodeTooLong(length));
        }
        let limit = if length == 64 { u64::MAX } else { (1u64 << length) - 1 };
        // Reduced echelon basis keyed by pivot bit, to detect dependence.
        let mut basis: Vec<u64> = Vec::new();
        for (index, &g) in generators.iter().enumerate() {
            if g & !limit != 0 {
                return Err(LatticeError::WordOutOfRange { index });
            }
            let mut w = g;
            for &b in &basis {
                let pivot = 63 - b.leading_zeros();
                if w >> pivot & 1 == 1 {
                    w ^= b;
                }
            }
            if w == 0 {
                return Err(LatticeError::DependentGenerators { index });
            }
            basis.push(w);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(EvenSetCode { length, generators })
    }

    /// Parse one generator per non-empty line, written as a string of `0`/`1`
    /// of the code length (whitespace between digits ignored; `#` starts a
    /// comment). Bit `i` of a word is the `i`-th character.
    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        let mut length = None;
        let mut gens = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let digits: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            if digits.is_empty() {
                continue;
            }
            let mut w = 0u64;
            for (i, ch) in digits.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' if i < 64 => w |= 1 << i,
                    '1' => return Err(LatticeError::CodeTooLong(digits.len())),
                    other => {
                        return Err(LatticeError::BadGeneratorLine {
                            line: lineno + 1,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            match length {
                None => length = Some(digits.len()),
                Some(l) if l != digits.len() => {
                    return Err(LatticeError::BadGeneratorLine {
                        line: lineno + 1,
                        msg: format!("length {} differs from {l}", digits.len()),
                    })
                }
                _ => {}
            }
            gens.push(w);
        }
        Self::new(length.unwrap_or(0), gens)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }
}

/// Codeword count by Hamming weight, by visiting all `2^d` codewords in
/// Gray-code order.
pub fn weight_distribution(code: &EvenSetCode) -> Result<BTreeMap<u32, u64>, LatticeError> {
    let d = code.dimension();
    if d > MAX_CODE_DIMENSION {
        return Err(LatticeError::DimensionTooLarge(d));
    }
    let mut dist = BTreeMap::new();
    let mut word = 0u64;
    *dist.entry(0).or_insert(0) += 1;
    for i in 1u64..(1u64 << d) {
        word ^= code.generators[i.trailing_zeros() as usize];
        *dist.entry(word.count_ones()).or_insert(0) += 1;
    }
    Ok(dist)
}
