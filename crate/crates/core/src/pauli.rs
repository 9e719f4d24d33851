//! Pauli operators in binary symplectic form.
//!
//! A word stores one Z bit and one X bit per qubit. Per qubit the pair
//! `(z, x)` encodes `00 = I`, `01 = X`, `10 = Z`, `11 = Y`. A signed Pauli
//! multiplies the Hermitian word by `i^phase`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    /// Returns `(z, x)` bits.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (false, true),
            Letter::Z => (true, false),
            Letter::Y => (true, true),
        }
    }

    pub fn from_bits(z: bool, x: bool) -> Letter {
        match (z, x) {
            (false, false) => Letter::I,
            (false, true) => Letter::X,
            (true, false) => Letter::Z,
            (true, true) => Letter::Y,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Unsigned n-qubit Pauli word `σ_{z:x}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliWord {
    n: usize,
    z: Vec<u64>,
    x: Vec<u64>,
}

impl PauliWord {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliWord {
            n,
            z: vec![0; w],
            x: vec![0; w],
        }
    }

    /// A single-qubit letter on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set(q, letter);
        p
    }

    /// Builds a word from per-qubit letters.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p
    }

    /// Builds a word from explicit bit slices of length `n`.
    pub fn from_bits(z: &[bool], x: &[bool]) -> Self {
        assert_eq!(z.len(), x.len(), "z and x must have equal length");
        let mut p = Self::identity(z.len());
        for q in 0..z.len() {
            p.set_bits(q, z[q], x[q]);
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn get(&self, q: usize) -> Letter {
        Letter::from_bits(self.z_bit(q), self.x_bit(q))
    }

    #[inline]
    pub fn set_bits(&mut self, q: usize, z: bool, x: bool) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / 64, 1u64 << (q % 64));
        if z {
            self.z[w] |= b;
        } else {
            self.z[w] &= !b;
        }
        if x {
            self.x[w] |= b;
        } else {
            self.x[w] &= !b;
        }
    }

    pub fn set(&mut self, q: usize, letter: Letter) {
        let (z, x) = letter.bits();
        self.set_bits(q, z, x);
    }

    pub fn is_identity(&self) -> bool {
        self.z.iter().chain(&self.x).all(|&w| w == 0)
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> u32 {
        self.z
            .iter()
            .zip(&self.x)
            .map(|(z, x)| (z | x).count_ones())
            .sum()
    }

    /// Number of `Y` positions.
    pub fn y_count(&self) -> u32 {
        popcount_and(&self.z, &self.x)
    }

    /// In-place XOR of words (the product up to phase).
    pub fn xor_assign(&mut self, other: &PauliWord) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &PauliWord) -> PauliWord {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    /// Symplectic product: `false` if the words commute, `true` otherwise.
    ///
    /// # Panics
    /// Panics if the qubit counts differ; see [`try_symplectic_product`].
    pub fn symplectic_product(&self, other: &PauliWord) -> bool {
        assert_eq!(self.n, other.n, "dimension mismatch");
        (popcount_and(&self.z, &other.x) + popcount_and(&self.x, &other.z)) & 1 == 1
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        !self.symplectic_product(other)
    }

    /// Bits laid out as `[x_0..x_{n-1}, z_0..z_{n-1}]`.
    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.n)
            .map(|q| self.x_bit(q))
            .chain((0..self.n).map(|q| self.z_bit(q)))
            .collect()
    }

    /// Inverse of [`PauliWord::to_bits`].
    pub fn from_xz_bits(bits: &[bool]) -> Self {
        assert!(bits.len() % 2 == 0, "bit vector length must be even");
        let n = bits.len() / 2;
        Self::from_bits(&bits[n..], &bits[..n])
    }

    /// Letters as text without sign.
    pub fn to_text(&self) -> String {
        (0..self.n).map(|q| self.get(q).as_char()).collect()
    }
}

impl fmt::Debug for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let p: SignedPauli = s.parse()?;
        if p.phase() != 0 {
            return Err(Error::ParsePauli(format!("unexpected sign in word {s:?}")));
        }
        Ok(p.word)
    }
}

/// Symplectic product with a dimension check.
pub fn try_symplectic_product(a: &PauliWord, b: &PauliWord) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    Ok(a.symplectic_product(b))
}

/// A Pauli operator `i^phase · σ_{z:x}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPauli {
    pub word: PauliWord,
    phase: u8,
}

impl SignedPauli {
    pub fn new(word: PauliWord, phase: u8) -> Self {
        SignedPauli {
            word,
            phase: phase & 3,
        }
    }

    /// `+word` or `-word`.
    pub fn with_sign(word: PauliWord, negative: bool) -> Self {
        Self::new(word, if negative { 2 } else { 0 })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(PauliWord::identity(n), 0)
    }

    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        Self::new(PauliWord::single(n, q, letter), 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.word.n
    }

    /// Power of `i`, in `0..4`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// True for phase 2. Only meaningful for Hermitian operators.
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    pub fn neg(&self) -> SignedPauli {
        Self::new(self.word.clone(), self.phase + 2)
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    /// Phase-exact product `self · other`.
    ///
    /// # Panics
    /// Panics if the qubit counts differ; see [`try_multiply`].
    pub fn mul(&self, other: &SignedPauli) -> SignedPauli {
        let mut r = self.clone();
        r.mul_assign(other);
        r
    }

    /// `self ← self · other`.
    pub fn mul_assign(&mut self, other: &SignedPauli) {
        assert_eq!(self.word.n, other.word.n, "dimension mismatch");
        // σ_{zx} = i^{zx} X^x Z^z, and Z^a X^b = (-1)^{ab} X^b Z^a.
        let a = &self.word;
        let b = &other.word;
        let mut acc = popcount_and(&a.z, &a.x) + popcount_and(&b.z, &b.x)
            + 2 * popcount_and(&a.z, &b.x);
        self.word.xor_assign(&other.word);
        acc += 3 * self.word.y_count();
        self.phase = ((self.phase as u32 + other.phase as u32 + acc) & 3) as u8;
    }

    /// True iff the complex conjugate equals the negation, i.e. an odd
    /// number of `Y` factors.
    pub fn conjugate_negates(&self) -> bool {
        debug_assert!(self.is_hermitian());
        self.word.y_count() & 1 == 1
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> SignedPauli {
        let p = (4 - self.phase) & 3;
        Self::new(self.word.clone(), p + 2 * (self.word.y_count() & 1) as u8)
    }

    pub fn commutes_with(&self, other: &SignedPauli) -> bool {
        self.word.commutes_with(&other.word)
    }
}

/// Phase-exact product with a dimension check.
pub fn try_multiply(a: &SignedPauli, b: &SignedPauli) -> Result<SignedPauli> {
    if a.word.n != b.word.n {
        return Err(Error::DimensionMismatch {
            expected: a.word.n,
            got: b.word.n,
        });
    }
    Ok(a.mul(b))
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.word)
    }
}

impl fmt::Debug for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SignedPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (phase, body) = if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else {
            (0, t)
        };
        if body.is_empty() {
            return Err(Error::ParsePauli(format!("no letters in {s:?}")));
        }
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(Error::ParsePauli(format!("bad letter {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignedPauli::new(PauliWord::from_letters(&letters), phase))
    }
}

/// Parses signed Pauli text such as `-XX` or `+iZY`.
pub fn parse_pauli(text: &str) -> Result<SignedPauli> {
    text.parse()
}

/// Renders a signed Pauli with an explicit sign prefix.
pub fn format_pauli(p: &SignedPauli) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{all_paulis, matmul, max_diff, pauli_matrix};
    use proptest::prelude::*;

    fn p(s: &str) -> SignedPauli {
        s.parse().unwrap()
    }

    #[test]
    fn symplectic_examples() {
        assert!(p("X").word.symplectic_product(&p("Z").word));
        assert!(!p("XYZ").word.symplectic_product(&p("III").word));
        assert!(!p("ZX").word.symplectic_product(&p("XZ").word));
        assert!(try_symplectic_product(&p("X").word, &p("XX").word).is_err());
    }

    #[test]
    fn multiply_examples() {
        let xz = p("X").mul(&p("Z"));
        assert_eq!(xz.phase(), 3);
        assert_eq!(format_pauli(&xz), "-iY");
        assert_eq!(p("ZZ").mul(&p("ZZ")), p("II"));
        assert_eq!(p("XX").mul(&p("ZZ")), p("-YY"));
        assert!(try_multiply(&p("X"), &p("XX")).is_err());
    }

    #[test]
    fn multiply_matches_dense_exhaustively() {
        for n in 1..=2 {
            let all = all_paulis(n);
            for a in &all {
                for b in &all {
                    for ph in 0..4 {
                        let a = SignedPauli::new(a.word.clone(), ph);
                        let prod = a.mul(b);
                        let dense = matmul(&pauli_matrix(&a), &pauli_matrix(b));
                        assert!(max_diff(&dense, &pauli_matrix(&prod)) < 1e-12, "{a} * {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn multiply_matches_dense_three_qubits() {
        let all = all_paulis(3);
        for a in all.iter().step_by(3) {
            for b in &all {
                let prod = a.mul(b);
                let dense = matmul(&pauli_matrix(a), &pauli_matrix(b));
                assert!(max_diff(&dense, &pauli_matrix(&prod)) < 1e-12);
                let comm = max_diff(&dense, &matmul(&pauli_matrix(b), &pauli_matrix(a))) < 1e-12;
                assert_eq!(comm, a.commutes_with(b));
            }
        }
    }

    #[test]
    fn conjugation_rule() {
        assert!(p("YZ").conjugate_negates());
        assert!(!p("XX").conjugate_negates());
        assert!(!p("YY").conjugate_negates());
        for q in all_paulis(2) {
            let m = pauli_matrix(&q);
            let conj: Vec<Vec<_>> = m.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect();
            let neg = max_diff(&conj, &pauli_matrix(&q.neg())) < 1e-12;
            assert_eq!(neg, q.conjugate_negates(), "{q}");
            assert!(max_diff(&conj, &pauli_matrix(&q.conjugate())) < 1e-12);
        }
    }

    #[test]
    fn parse_examples() {
        let m = p("-XX");
        assert!(m.is_negative());
        assert!(!m.word.z_bit(0) && !m.word.z_bit(1));
        assert!(m.word.x_bit(0) && m.word.x_bit(1));
        assert!(p("II").word.is_identity());
        assert!(parse_pauli("XQ").is_err());
        assert!(parse_pauli("-").is_err());
        assert_eq!(p("+iZY").phase(), 1);
    }

    #[test]
    fn wide_words() {
        let n = 130;
        let mut a = SignedPauli::identity(n);
        a.word.set(0, Letter::X);
        a.word.set(129, Letter::Y);
        let mut b = SignedPauli::identity(n);
        b.word.set(129, Letter::Z);
        assert!(!a.commutes_with(&b));
        let prod = a.mul(&b);
        assert_eq!(prod.word.get(129), Letter::X);
        assert_eq!(prod.phase(), 1);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = SignedPauli> {
        (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(|(ls, ph)| {
            let letters: Vec<Letter> = ls
                .iter()
                .map(|&l| [Letter::I, Letter::X, Letter::Y, Letter::Z][l as usize])
                .collect();
            SignedPauli::new(PauliWord::from_letters(&letters), ph)
        })
    }

    proptest! {
        #[test]
        fn associative(a in arb_pauli(70), b in arb_pauli(70), c in arb_pauli(70)) {
            prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        }

        #[test]
        fn symplectic_symmetric(a in arb_pauli(9), b in arb_pauli(9)) {
            prop_assert_eq!(a.word.symplectic_product(&b.word), b.word.symplectic_product(&a.word));
        }

        #[test]
        fn text_roundtrip(a in arb_pauli(11)) {
            prop_assert_eq!(parse_pauli(&format_pauli(&a)).unwrap(), a);
        }
    }
}
