//! Dense GF(2) matrices packed into 64-bit words, and symplectic
//! Gram–Schmidt over Pauli words.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::{words_for, PauliWord};

/// A `rows × cols` matrix over GF(2), row-major, one `u64` lane per 64 columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`BitMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from boolean rows of equal length.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    /// Parses rows written as `"0110"` strings.
    pub fn from_strs(rows: &[&str]) -> Self {
        let bits: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().map(|c| c == '1').collect())
            .collect();
        Self::from_rows(&bits)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let w = &mut self.data[r * self.stride + c / 64];
        let b = 1u64 << (c % 64);
        if v {
            *w |= b;
        } else {
            *w &= !b;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.data[dst * self.stride..(dst + 1) * self.stride].fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row_words(k);
                    let dst = &mut out.data[r * out.stride..(r + 1) * out.stride];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form. Pivots are taken in the leftmost available
    /// column from the lowest-index candidate row.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Inverse of a square matrix by Gauss–Jordan elimination on `[M | I]`.
    pub fn invert(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BitMatrix::zeros(0, 0));
        }
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, true);
        }
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = BitMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c));
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Free-function form of [`BitMatrix::rref`].
pub fn gf2_rref(m: &BitMatrix) -> Rref {
    m.rref()
}

/// Free-function form of [`BitMatrix::invert`].
pub fn gf2_invert(m: &BitMatrix) -> Result<BitMatrix> {
    m.invert()
}

/// Stacks Pauli words as rows laid out by [`PauliWord::to_bits`].
pub fn words_to_matrix(words: &[PauliWord]) -> BitMatrix {
    let n = words.first().map_or(0, |w| w.num_qubits());
    let mut m = BitMatrix::zeros(words.len(), 2 * n);
    for (r, w) in words.iter().enumerate() {
        for q in 0..n {
            m.set(r, q, w.x_bit(q));
            m.set(r, n + q, w.z_bit(q));
        }
    }
    m
}

/// GF(2) rank of a set of Pauli words.
pub fn words_rank(words: &[PauliWord]) -> usize {
    if words.is_empty() {
        return 0;
    }
    words_to_matrix(words).rank()
}

/// Output of [`symplectic_gram_schmidt`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub isotropic: Vec<PauliWord>,
    pub pairs: Vec<(PauliWord, PauliWord)>,
}

/// Splits independent generators into anticommuting pairs and an isotropic
/// remainder with the same span.
///
/// Pairs are formed greedily: the first generator that anticommutes with
/// some later one is paired with the first such partner, and both are then
/// cleared from every remaining generator.
pub fn symplectic_gram_schmidt(gens: &[PauliWord]) -> Result<SymplecticBasis> {
    if let Some(first) = gens.first() {
        let n = first.num_qubits();
        if let Some(bad) = gens.iter().find(|g| g.num_qubits() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.num_qubits(),
            });
        }
        if words_rank(gens) != gens.len() {
            return Err(Error::Dependent);
        }
    }
    let mut rest: Vec<PauliWord> = gens.to_vec();
    let mut pairs = Vec::new();
    loop {
        let found = (0..rest.len()).find_map(|i| {
            (i + 1..rest.len())
                .find(|&j| rest[i].symplectic_product(&rest[j]))
                .map(|j| (i, j))
        });
        let Some((i, j)) = found else { break };
        let b = rest.remove(j);
        let a = rest.remove(i);
        for c in rest.iter_mut() {
            let with_b = c.symplectic_product(&b);
            let with_a = c.symplectic_product(&a);
            if with_b {
                c.xor_assign(&a);
            }
            if with_a {
                c.xor_assign(&b);
            }
        }
        pairs.push((a, b));
    }
    Ok(SymplecticBasis {
        isotropic: rest,
        pairs,
    })
}

/// Expresses Pauli words as GF(2) combinations of a fixed independent basis.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    n: usize,
    basis_len: usize,
    // Echelon rows: (packed word bits, combination mask over the basis, pivot bit).
    rows: Vec<(Vec<u64>, Vec<u64>, usize)>,
}

fn pack_word(w: &PauliWord) -> Vec<u64> {
    w.x_words().iter().chain(w.z_words()).copied().collect()
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

#[inline]
fn test_bit(v: &[u64], b: usize) -> bool {
    (v[b / 64] >> (b % 64)) & 1 == 1
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

impl SpanSolver {
    /// Builds a solver; fails with [`Error::Dependent`] if the basis is not independent.
    pub fn new(n: usize, basis: &[PauliWord]) -> Result<Self> {
        let mut s = SpanSolver {
            n,
            basis_len: basis.len(),
            rows: Vec::with_capacity(basis.len()),
        };
        let cw = words_for(basis.len().max(1));
        for (i, b) in basis.iter().enumerate() {
            if b.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: b.num_qubits(),
                });
            }
            let mut mask = vec![0u64; cw];
            mask[i / 64] |= 1 << (i % 64);
            let (v, mask) = s.reduce(pack_word(b), mask);
            let Some(p) = leading_bit(&v) else {
                return Err(Error::Dependent);
            };
            // Keep rows fully reduced so reduction order does not matter.
            for row in s.rows.iter_mut() {
                if test_bit(&row.0, p) {
                    xor_into(&mut row.0, &v);
                    xor_into(&mut row.1, &mask);
                }
            }
            s.rows.push((v, mask, p));
        }
        Ok(s)
    }

    fn reduce(&self, mut v: Vec<u64>, mut mask: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        for (rv, rm, p) in &self.rows {
            if test_bit(&v, *p) {
                xor_into(&mut v, rv);
                xor_into(&mut mask, rm);
            }
        }
        (v, mask)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn basis_len(&self) -> usize {
        self.basis_len
    }

    /// Indices of basis elements whose product has the word `w`, or `None`
    /// if `w` lies outside the span.
    pub fn decompose(&self, w: &PauliWord) -> Option<Vec<usize>> {
        let cw = words_for(self.basis_len.max(1));
        let (v, mask) = self.reduce(pack_word(w), vec![0; cw]);
        if v.iter().any(|&x| x != 0) {
            return None;
        }
        Some((0..self.basis_len).filter(|&i| test_bit(&mask, i)).collect())
    }

    pub fn contains(&self, w: &PauliWord) -> bool {
        let cw = words_for(self.basis_len.max(1));
        self.reduce(pack_word(w), vec![0; cw]).0.iter().all(|&x| x == 0)
    }
}

/// Indices of a maximal independent subset, chosen greedily in order.
pub fn independent_subset(words: &[PauliWord]) -> Vec<usize> {
    let mut rows: Vec<(Vec<u64>, usize)> = Vec::new();
    let mut picked = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let mut v = pack_word(w);
        for (r, p) in &rows {
            if test_bit(&v, *p) {
                xor_into(&mut v, r);
            }
        }
        if let Some(p) = leading_bit(&v) {
            for (r, _) in rows.iter_mut() {
                if test_bit(r, p) {
                    xor_into(r, &v);
                }
            }
            rows.push((v, p));
            picked.push(i);
        }
    }
    picked
}

/// Solves for a word `r` with `symplectic_product(r, constraints[i].0) == constraints[i].1`
/// for every `i`. The constraint words must be independent.
pub fn solve_symplectic(n: usize, constraints: &[(PauliWord, bool)]) -> Result<PauliWord> {
    // sp(r, c) = r_z·c_x ⊕ r_x·c_z, so each constraint is a linear row in (r_x, r_z).
    let m = constraints.len();
    let mut a = BitMatrix::zeros(m, 2 * n + 1);
    for (i, (c, rhs)) in constraints.iter().enumerate() {
        for q in 0..n {
            a.set(i, q, c.z_bit(q));
            a.set(i, n + q, c.x_bit(q));
        }
        a.set(i, 2 * n, *rhs);
    }
    let red = a.rref();
    if red.pivots.iter().any(|&p| p == 2 * n) {
        return Err(Error::Dependent);
    }
    let mut x = vec![false; n];
    let mut z = vec![false; n];
    for (r, &p) in red.pivots.iter().enumerate() {
        if red.matrix.get(r, 2 * n) {
            if p < n {
                x[p] = true;
            } else {
                z[p - n] = true;
            }
        }
    }
    Ok(PauliWord::from_bits(&z, &x))
}
