//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words and matrices are stored row-major,
//! one packed row per matrix row, so elimination is word-wide XOR. Every
//! subspace handed out by this module is kept in reduced row-echelon form,
//! which makes subspace equality a structural comparison.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("entry {value} at position {index} is not 0 or 1")]
    InvalidEntry { index: usize, value: u8 },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("inner subspace is not contained in the outer subspace")]
    ContainmentViolation,
}

/// A vector over GF(2) of fixed logical length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector with ones exactly at `indices` (repeated indices cancel).
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.toggle(i);
        }
        v
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self, Gf2Error> {
        let mut v = Self::zeros(bits.len());
        for (index, &value) in bits.iter().enumerate() {
            match value {
                0 => {}
                1 => v.set(index, true),
                _ => return Err(Gf2Error::InvalidEntry { index, value }),
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(k * WORD + bit)
            })
        })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Copies `self` into a zero vector of length `len`, starting at `offset`.
    pub fn embed(&self, len: usize, offset: usize) -> BitVec {
        assert!(offset + self.len <= len);
        BitVec::from_indices(len, self.ones().map(|i| i + offset))
    }

    /// The coordinates `range` of `self`, as a new vector.
    pub fn slice(&self, range: std::ops::Range<usize>) -> BitVec {
        assert!(range.end <= self.len);
        let start = range.start;
        BitVec::from_indices(
            range.len(),
            self.ones().filter(|i| range.contains(i)).map(|i| i - start),
        )
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVec({s})")
    }
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Row-major entries, each 0 or 1.
    pub fn from_dense(rows: usize, cols: usize, entries: &[u8]) -> Result<Self, Gf2Error> {
        if entries.len() != rows * cols {
            return Err(Gf2Error::ShapeMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let mut m = Self::zeros(rows, cols);
        for (index, &value) in entries.iter().enumerate() {
            match value {
                0 => {}
                1 => m.set(index / cols, index % cols, true),
                _ => return Err(Gf2Error::InvalidEntry { index, value }),
            }
        }
        Ok(m)
    }

    pub fn from_row_vectors(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r].toggle(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        let mut out = BitVec::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        out
    }

    /// The block of rows `rows` and columns `cols`.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let data = self.data[rows]
            .iter()
            .map(|row| row.slice(cols.clone()))
            .collect();
        Self::from_row_vectors(cols.len(), data)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        echelonize(&mut rows, self.cols, false)
    }

    /// Null space `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Gf2Subspace {
        let mut rows = self.data.clone();
        let rank = echelonize(&mut rows, self.cols, true);
        rows.truncate(rank);
        let pivots: Vec<usize> = rows.iter().map(|r| r.first_one().unwrap()).collect();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::unit(self.cols, free);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        Gf2Subspace::span(self.cols, basis)
    }

    /// Column space, as a subspace of GF(2)^rows.
    pub fn image_basis(&self) -> Gf2Subspace {
        Gf2Subspace::span(self.rows, self.transpose().data)
    }

    /// Image of a subspace of the domain.
    pub fn image_of(&self, subspace: &Gf2Subspace) -> Gf2Subspace {
        assert_eq!(subspace.ambient_dim(), self.cols);
        Gf2Subspace::span(
            self.rows,
            subspace.basis().iter().map(|v| self.mul_vec(v)).collect(),
        )
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            let s: String = (0..self.cols)
                .map(|c| if row.get(c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Gaussian elimination in place. Leaves the first `rank` rows in echelon
/// form sorted by pivot (fully reduced when `reduce` is set) and returns the rank.
fn echelonize(rows: &mut [BitVec], cols: usize, reduce: bool) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot = rows[rank].clone();
        let start = if reduce { 0 } else { rank + 1 };
        for r in start..rows.len() {
            if r != rank && rows[r].get(c) {
                rows[r].xor_assign(&pivot);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A linear subspace of GF(2)^n held by its reduced row-echelon basis.
///
/// Pivots are the lowest set bit of each basis vector; basis vectors are
/// sorted by pivot and every pivot column is zero outside its own row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
}

impl Gf2Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| BitVec::unit(ambient, i)).collect(),
        }
    }

    pub fn span(ambient: usize, mut vectors: Vec<BitVec>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient));
        let rank = echelonize(&mut vectors, ambient, true);
        vectors.truncate(rank);
        Self {
            ambient,
            basis: vectors,
        }
    }

    /// Span of the standard basis vectors with indices in `range`.
    pub fn coordinate(ambient: usize, range: std::ops::Range<usize>) -> Self {
        Self {
            ambient,
            basis: range.map(|i| BitVec::unit(ambient, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|v| v.first_one().unwrap()).collect()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for b in &self.basis {
            if out.get(b.first_one().unwrap()) {
                out.xor_assign(b);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        v.len() == self.ambient && self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Gf2Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Gf2Subspace) -> Result<Gf2Subspace, Gf2Error> {
        self.check_ambient(other)?;
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Gf2Subspace::span(self.ambient, vectors))
    }

    /// Intersection by the Zassenhaus construction.
    pub fn intersection(&self, other: &Gf2Subspace) -> Result<Gf2Subspace, Gf2Error> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let mut rows: Vec<BitVec> = self
            .basis
            .iter()
            .map(|u| {
                let mut w = u.embed(2 * n, 0);
                for i in u.ones() {
                    w.set(n + i, true);
                }
                w
            })
            .chain(other.basis.iter().map(|v| v.embed(2 * n, 0)))
            .collect();
        let rank = echelonize(&mut rows, 2 * n, true);
        let vectors = rows[..rank]
            .iter()
            .filter(|r| r.first_one().unwrap() >= n)
            .map(|r| r.slice(n..2 * n))
            .collect();
        Ok(Gf2Subspace::span(n, vectors))
    }

    fn check_ambient(&self, other: &Gf2Subspace) -> Result<(), Gf2Error> {
        if self.ambient != other.ambient {
            return Err(Gf2Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf2Subspace")
            .field("ambient", &self.ambient)
            .field("basis", &self.basis)
            .finish()
    }
}

pub fn rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Gf2Matrix) -> Gf2Subspace {
    m.kernel_basis()
}

pub fn image_basis(m: &Gf2Matrix) -> Gf2Subspace {
    m.image_basis()
}

/// `dim(outer) - dim(inner)`, after checking `inner ⊆ outer`.
pub fn quotient_dim(outer: &Gf2Subspace, inner: &Gf2Subspace) -> Result<usize, Gf2Error> {
    outer.check_ambient(inner)?;
    if !inner.is_subspace_of(outer) {
        return Err(Gf2Error::ContainmentViolation);
    }
    Ok(outer.dim() - inner.dim())
}
