//! Dense linear algebra over GF(2).
//!
//! Vectors and matrix rows are bit-packed into `u64` words, so row addition is
//! a word-wise XOR. Container indices (`BitVec::get`, `BitMat::get`) are
//! 0-based like any Rust collection; the 1-based lattice and qubit labels live
//! in the layers above.

use std::fmt;
use std::ops::{BitAnd, BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; words_for(len)], len }
    }

    /// Vector with ones at the given (0-based) positions.
    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b & 1 == 1).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Mod-2 inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    /// Positions of the set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * WORD + bit)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Concatenation `self ⊕ other` (direct sum, not XOR).
    pub fn concat(&self, other: &BitVec) -> BitVec {
        self.iter().chain(other.iter()).collect()
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in iter {
            if len % WORD == 0 {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1u64 << (len % WORD);
            }
            len += 1;
        }
        Self { words, len }
    }
}

impl BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitAnd for &BitVec {
    type Output = BitVec;

    fn bitand(self, rhs: &BitVec) -> BitVec {
        assert_eq!(self.len, rhs.len, "and of vectors with different lengths");
        BitVec { words: self.words.iter().zip(&rhs.words).map(|(a, b)| a & b).collect(), len: self.len }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect()
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMat {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let rows = (0..rows).map(|r| (0..cols).map(|c| f(r, c)).collect()).collect();
        Self { rows, cols }
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Shape(format!("row {bad} has length {} but row 0 has length {cols}", rows[bad].len())));
        }
        Ok(Self { rows, cols })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(n_rows: usize, cols: &[BitVec]) -> Result<Self> {
        if let Some(bad) = cols.iter().position(|c| c.len() != n_rows) {
            return Err(Error::Shape(format!(
                "column {bad} has length {} but {n_rows} rows were requested",
                cols[bad].len()
            )));
        }
        Ok(Self::from_fn(n_rows, cols.len(), |r, c| cols[c].get(r)))
    }

    /// Convenience constructor from a nested `0`/`1` literal.
    pub fn from_bits<const C: usize>(rows: &[[u8; C]]) -> Self {
        Self { rows: rows.iter().map(|r| BitVec::from_bits(r)).collect(), cols: C }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows() == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn col(&self, c: usize) -> BitVec {
        self.rows.iter().map(|r| r.get(c)).collect()
    }

    pub fn transpose(&self) -> BitMat {
        BitMat::from_fn(self.cols, self.n_rows(), |r, c| self.get(c, r))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BitVec::count_ones).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.cols).all(|r| (r + 1..self.cols).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Product over GF(2). Row `i` of the result is the XOR of the rows of
    /// `other` selected by row `i` of `self`.
    pub fn matmul(&self, other: &BitMat) -> Result<BitMat> {
        if self.cols != other.n_rows() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows(),
                self.cols,
                other.n_rows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.iter_ones() {
                    acc ^= &other.rows[k];
                }
                acc
            })
            .collect();
        Ok(BitMat { rows, cols: other.cols })
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.n_rows(),
                self.cols,
                v.len()
            )));
        }
        Ok(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row.get(c) {
                    *row ^= &pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss-Jordan inverse.
    pub fn invert(&self) -> Result<BitMat> {
        if !self.is_square() {
            return Err(Error::Shape(format!("cannot invert a non-square {}x{} matrix", self.n_rows(), self.cols)));
        }
        let n = self.cols;
        let mut left = self.rows.clone();
        let mut right = BitMat::identity(n).rows;
        for c in 0..n {
            let p = (c..n).find(|&r| left[r].get(c)).ok_or(Error::NotInvertible)?;
            left.swap(c, p);
            right.swap(c, p);
            let (pl, pr) = (left[c].clone(), right[c].clone());
            for r in 0..n {
                if r != c && left[r].get(c) {
                    left[r] ^= &pl;
                    right[r] ^= &pr;
                }
            }
        }
        Ok(BitMat { rows: right, cols: n })
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &BitMat) -> BitMat {
        let (r1, c1) = (self.n_rows(), self.cols);
        BitMat::from_fn(r1 + other.n_rows(), c1 + other.cols, |r, c| match (r < r1, c < c1) {
            (true, true) => self.get(r, c),
            (false, false) => other.get(r - r1, c - c1),
            _ => false,
        })
    }

    /// Rows of `0`/`1` characters, one line per row.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n_rows() * (self.cols + 1));
        for row in &self.rows {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<BitMat> {
        let rows =
            text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::parse).collect::<Result<Vec<BitVec>>>()?;
        BitMat::from_rows(rows)
    }
}

impl fmt::Debug for BitMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMat {}x{}", self.n_rows(), self.cols)?;
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..cols).map(|c| (0..inner).map(|k| row[k] & b[k][c]).fold(0, |x, y| x ^ y)).collect())
            .collect()
    }

    // Rank via exhaustive span enumeration: log2 of the number of distinct
    // combinations of rows.
    fn brute_rank(rows: &[Vec<u8>]) -> usize {
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut acc = vec![0u8; rows.first().map_or(0, Vec::len)];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    fn to_mat(rows: &[Vec<u8>], cols: usize) -> BitMat {
        BitMat::from_fn(rows.len(), cols, |r, c| rows[r][c] == 1)
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
        prop::collection::vec(prop::collection::vec(0u8..2, cols), rows)
    }

    #[test]
    fn matmul_small_example() {
        let a = BitMat::from_bits(&[[1, 1], [0, 1]]);
        let b = BitMat::from_bits(&[[1, 0], [1, 1]]);
        assert_eq!(a.matmul(&b).unwrap(), BitMat::from_bits(&[[0, 1], [1, 1]]));
    }

    #[test]
    fn identity_is_neutral() {
        let m = BitMat::from_bits(&[[1, 0, 1], [0, 1, 1], [1, 1, 0]]);
        assert_eq!(BitMat::identity(3).matmul(&m).unwrap(), m);
        assert_eq!(m.matmul(&BitMat::identity(3)).unwrap(), m);
    }

    #[test]
    fn matmul_shape_error() {
        let a = BitMat::zeros(2, 3);
        assert!(matches!(a.matmul(&BitMat::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMat::identity(4).rank(), 4);
        assert_eq!(BitMat::zeros(3, 5).rank(), 0);
        assert_eq!(BitMat::from_bits(&[[1, 1], [1, 1]]).rank(), 1);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(BitMat::identity(5).invert().unwrap(), BitMat::identity(5));
        assert_eq!(BitMat::from_bits(&[[1, 1], [1, 1]]).invert(), Err(Error::NotInvertible));
        assert!(matches!(BitMat::zeros(2, 3).invert(), Err(Error::Shape(_))));
        let m = BitMat::from_bits(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]]);
        let inv = m.invert().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), BitMat::identity(3));
        assert_eq!(inv.matmul(&m).unwrap(), BitMat::identity(3));
    }

    #[test]
    fn text_round_trip() {
        let m = BitMat::from_bits(&[[1, 0, 1], [0, 0, 1]]);
        assert_eq!(m.to_text(), "101\n001\n");
        assert_eq!(BitMat::parse_text(&m.to_text()).unwrap(), m);
        assert!(BitMat::parse_text("10\n2").is_err());
        assert!(BitMat::parse_text("10\n1").is_err());
    }

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.flip(129);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.count_ones(), 3);
        let w = v.clone();
        v ^= &w;
        assert!(v.is_zero());
        let a: BitVec = "1101".parse().unwrap();
        let b: BitVec = "1011".parse().unwrap();
        assert!(!a.dot(&b));
        assert_eq!((&a ^ &b).to_string(), "0110");
        assert_eq!(a.concat(&b).to_string(), "11011011");
    }

    proptest! {
        #[test]
        fn packed_matmul_matches_naive(a in arb_matrix(5, 70), b in arb_matrix(70, 3)) {
            let got = to_mat(&a, 70).matmul(&to_mat(&b, 3)).unwrap();
            prop_assert_eq!(got, to_mat(&naive_mul(&a, &b), 3));
        }

        #[test]
        fn rank_matches_span_enumeration(a in arb_matrix(6, 7)) {
            prop_assert_eq!(to_mat(&a, 7).rank(), brute_rank(&a));
        }

        #[test]
        fn rank_of_product_is_bounded(a in arb_matrix(6, 5), b in arb_matrix(5, 7)) {
            let (a, b) = (to_mat(&a, 5), to_mat(&b, 7));
            let ab = a.matmul(&b).unwrap();
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
            prop_assert!(ab.rank() <= 5);
        }

        #[test]
        fn matmul_is_associative(a in arb_matrix(4, 5), b in arb_matrix(5, 6), c in arb_matrix(6, 3)) {
            let (a, b, c) = (to_mat(&a, 5), to_mat(&b, 6), to_mat(&c, 3));
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn invert_agrees_with_rank(a in arb_matrix(6, 6)) {
            let m = to_mat(&a, 6);
            match m.invert() {
                Ok(inv) => {
                    prop_assert_eq!(m.rank(), 6);
                    prop_assert_eq!(m.matmul(&inv).unwrap(), BitMat::identity(6));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::NotInvertible);
                    prop_assert!(m.rank() < 6);
                }
            }
        }
    }
}
