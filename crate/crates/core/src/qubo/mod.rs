//! Upper-triangular QUBO instances.
//!
//! An instance of size `n` stores weights `Q[i][j]` for `i <= j` and an
//! additive constant. The energy of a binary vector `x` is
//! `sum_{i <= j} Q[i][j] * x[i] * x[j] + offset`.

mod assignment;
mod oracle;
mod text;

use std::fmt;

use thiserror::Error;

pub use assignment::PartialAssignment;
pub use oracle::{brute_force_min, BRUTE_FORCE_LIMIT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuboError {
    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("entry ({row}, {col}) lies below the diagonal; only upper-triangular weights are accepted")]
    NotUpperTriangular { row: usize, col: usize },
    #[error("non-finite value {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },
    #[error("non-finite offset {0}")]
    NonFiniteOffset(f64),
    #[error("index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("variable {0} is fixed to both 0 and 1")]
    OverlappingAssignment(usize),
    #[error("bit value {value} at position {position} is not 0 or 1")]
    InvalidBit { position: usize, value: u8 },
    #[error("brute force refused: {n} variables exceeds the limit of {limit}")]
    BruteForceLimit { n: usize, limit: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Fixed-length binary vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector(vec![0; len])
    }

    /// Builds a vector from raw values, rejecting anything other than 0 or 1.
    pub fn new(bits: Vec<u8>) -> Result<Self, QuboError> {
        if let Some(position) = bits.iter().position(|&b| b > 1) {
            return Err(QuboError::InvalidBit {
                position,
                value: bits[position],
            });
        }
        Ok(BitVector(bits))
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitVector(bits.into_iter().map(u8::from).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.0[index] == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.0[index] = u8::from(value);
    }

    pub fn flip(&mut self, index: usize) {
        self.0[index] ^= 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Indices of the set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter_map(|(i, &b)| (b == 1).then_some(i))
    }

    /// Packs the bits into bytes (bit `i` goes to byte `i / 8`, position
    /// `i % 8`, least significant first) and renders them as lowercase hex.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.0.len().div_ceil(8) * 2);
        for chunk in self.0.chunks(8) {
            let byte = chunk.iter().enumerate().fold(0u8, |acc, (pos, &b)| acc | (b << pos));
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Inverse of [`BitVector::to_hex`]; `len` trims the padding bits of the
    /// last byte.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self, QuboError> {
        let parse_err = |message: String| QuboError::Parse { line: 1, message };
        if hex.len() != len.div_ceil(8) * 2 {
            return Err(parse_err(format!(
                "expected {} hex digits for {len} bits, got {}",
                len.div_ceil(8) * 2,
                hex.len()
            )));
        }
        let mut bits = Vec::with_capacity(len);
        for pair in hex.as_bytes().chunks(2) {
            let s = std::str::from_utf8(pair).map_err(|e| parse_err(e.to_string()))?;
            let byte = u8::from_str_radix(s, 16).map_err(|e| parse_err(e.to_string()))?;
            for pos in 0..8 {
                if bits.len() < len {
                    bits.push((byte >> pos) & 1);
                }
            }
        }
        Ok(BitVector(bits))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// QUBO instance with dense row-major upper-triangular storage.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboInstance {
    n: usize,
    weights: Vec<f64>,
    offset: f64,
}

impl QuboInstance {
    /// All-zero instance of size `n`.
    pub fn zeros(n: usize) -> Self {
        QuboInstance {
            n,
            weights: vec![0.0; n * n],
            offset: 0.0,
        }
    }

    /// Builds an instance from a dense `n × n` row-major matrix. Nonzero
    /// entries below the diagonal are rejected.
    pub fn from_dense(n: usize, weights: Vec<f64>, offset: f64) -> Result<Self, QuboError> {
        if weights.len() != n * n {
            return Err(QuboError::Dimension {
                expected: n * n,
                actual: weights.len(),
            });
        }
        if !offset.is_finite() {
            return Err(QuboError::NonFiniteOffset(offset));
        }
        for row in 0..n {
            for col in 0..n {
                let value = weights[row * n + col];
                if !value.is_finite() {
                    return Err(QuboError::NonFinite { row, col, value });
                }
                if row > col && value != 0.0 {
                    return Err(QuboError::NotUpperTriangular { row, col });
                }
            }
        }
        Ok(QuboInstance { n, weights, offset })
    }

    /// Builds an instance from `(i, j, w)` triples with `i <= j`. Repeated
    /// coordinates accumulate.
    pub fn from_entries<I>(n: usize, entries: I, offset: f64) -> Result<Self, QuboError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut q = QuboInstance::zeros(n);
        q.set_offset(offset)?;
        for (i, j, w) in entries {
            q.add_weight(i, j, w)?;
        }
        Ok(q)
    }

    /// Dense matrix folded to upper-triangular form: `Q[i][j] + Q[j][i]` for
    /// `i < j`, diagonal unchanged. Energies are preserved.
    pub fn from_square_symmetrizing(n: usize, square: &[f64], offset: f64) -> Result<Self, QuboError> {
        if square.len() != n * n {
            return Err(QuboError::Dimension {
                expected: n * n,
                actual: square.len(),
            });
        }
        let mut q = QuboInstance::zeros(n);
        q.set_offset(offset)?;
        for i in 0..n {
            for j in 0..n {
                let w = square[i * n + j];
                if w != 0.0 {
                    q.add_weight(i.min(j), i.max(j), w)?;
                }
            }
        }
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) -> Result<(), QuboError> {
        if !offset.is_finite() {
            return Err(QuboError::NonFiniteOffset(offset));
        }
        self.offset = offset;
        Ok(())
    }

    /// Stored weight at `(i, j)`; zero below the diagonal.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Coupling between two distinct variables regardless of argument order.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.weights[i.min(j) * self.n + i.max(j)]
    }

    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) -> Result<(), QuboError> {
        self.check_entry(i, j, w)?;
        self.weights[i * self.n + j] = w;
        Ok(())
    }

    pub fn add_weight(&mut self, i: usize, j: usize, w: f64) -> Result<(), QuboError> {
        self.check_entry(i, j, w)?;
        let slot = &mut self.weights[i * self.n + j];
        let sum = *slot + w;
        if !sum.is_finite() {
            return Err(QuboError::NonFinite {
                row: i,
                col: j,
                value: sum,
            });
        }
        *slot = sum;
        Ok(())
    }

    fn check_entry(&self, i: usize, j: usize, w: f64) -> Result<(), QuboError> {
        for index in [i, j] {
            if index >= self.n {
                return Err(QuboError::IndexOutOfRange { index, n: self.n });
            }
        }
        if i > j {
            return Err(QuboError::NotUpperTriangular { row: i, col: j });
        }
        if !w.is_finite() {
            return Err(QuboError::NonFinite {
                row: i,
                col: j,
                value: w,
            });
        }
        Ok(())
    }

    /// Nonzero stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i..self.n).filter_map(move |j| {
                let w = self.weights[i * self.n + j];
                (w != 0.0).then_some((i, j, w))
            })
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries().count()
    }

    /// `x^T Q x + offset`.
    pub fn energy(&self, x: &BitVector) -> Result<f64, QuboError> {
        if x.len() != self.n {
            return Err(QuboError::Dimension {
                expected: self.n,
                actual: x.len(),
            });
        }
        let ones: Vec<usize> = x.ones().collect();
        let mut total = 0.0;
        for (a, &i) in ones.iter().enumerate() {
            let row = &self.weights[i * self.n..(i + 1) * self.n];
            for &j in &ones[a..] {
                total += row[j];
            }
        }
        Ok(total + self.offset)
    }

    /// Energy change from flipping bit `i` of `x`.
    pub fn flip_delta(&self, x: &BitVector, i: usize) -> f64 {
        let mut field = self.weight(i, i);
        for j in x.ones() {
            if j != i {
                field += self.coupling(i, j);
            }
        }
        if x.get(i) {
            -field
        } else {
            field
        }
    }

    /// Dense symmetric matrix `0.5 (Q + Q^T)`, row-major. Used for display
    /// only; it carries the same energies as `Q`.
    pub fn symmetrized(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for (i, j, w) in self.entries() {
            if i == j {
                out[i * n + i] = w;
            } else {
                out[i * n + j] = 0.5 * w;
                out[j * n + i] = 0.5 * w;
            }
        }
        out
    }
}
