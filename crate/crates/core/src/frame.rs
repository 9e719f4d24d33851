//! Stabilizer states as Pauli frames: `n` independent commuting signed
//! generators, without destabilizers.

use std::fmt;

use rand::Rng;

use crate::bitmatrix::{words_rank, BitMatrix, SpanSolver};
use crate::circuit::{conjugate_pauli, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliWord, SignedPauli};

/// Generators `g_1..g_n` of the stabilizer group of an `n`-qubit state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    n: usize,
    rows: Vec<SignedPauli>,
}

impl PauliFrame {
    /// Validates and wraps a generator list.
    pub fn new(rows: Vec<SignedPauli>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.num_qubits(),
                });
            }
            if !r.is_hermitian() {
                return Err(Error::InvalidFrame(format!("non-Hermitian row {r}")));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !rows[i].commutes_with(&rows[j]) {
                    return Err(Error::InvalidFrame(format!(
                        "rows {} and {} anticommute",
                        rows[i], rows[j]
                    )));
                }
            }
        }
        let words: Vec<PauliWord> = rows.iter().map(|r| r.word.clone()).collect();
        if words_rank(&words) != n {
            return Err(Error::InvalidFrame("rows are dependent".into()));
        }
        Ok(PauliFrame { n, rows })
    }

    /// Parses one signed Pauli per entry.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<SignedPauli>>>()?;
        Self::new(rows)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[SignedPauli] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SignedPauli> {
        self.rows
    }

    /// Frame of `|v⟩`: row `i` is `(−1)^{v_i} Z_i`.
    pub fn basis_state(v: &[bool]) -> Self {
        let n = v.len();
        let rows = (0..n)
            .map(|i| SignedPauli::with_sign(PauliWord::single(n, i, Letter::Z), v[i]))
            .collect();
        PauliFrame { n, rows }
    }

    /// Conjugates every row by a Clifford gate.
    pub fn apply_gate(&mut self, g: Gate) -> Result<()> {
        if !g.is_clifford() {
            return Err(Error::InvalidCircuit("T is not a Clifford gate".into()));
        }
        if g.qubits().iter().any(|&q| q >= self.n) {
            return Err(Error::InvalidCircuit(format!("{g:?} out of range")));
        }
        for r in &mut self.rows {
            conjugate_pauli(r, g);
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: c.n,
            });
        }
        for &g in &c.gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Frame of `C|v⟩`.
    pub fn of_circuit(c: &Circuit, v: &[bool]) -> Result<Self> {
        let mut f = Self::basis_state(v);
        f.apply_circuit(c)?;
        Ok(f)
    }

    fn solver(&self) -> SpanSolver {
        let words: Vec<PauliWord> = self.rows.iter().map(|r| r.word.clone()).collect();
        SpanSolver::new(self.n, &words).expect("frame rows are independent")
    }

    /// Signed product of the listed rows.
    pub fn product(&self, idx: &[usize]) -> SignedPauli {
        let mut acc = SignedPauli::identity(self.n);
        for &i in idx {
            acc.mul_assign(&self.rows[i]);
        }
        acc
    }

    /// `+1` if `p` is in the group, `−1` if `−p` is, `0` otherwise.
    pub fn group_expectation(&self, p: &SignedPauli) -> i8 {
        debug_assert!(p.is_hermitian());
        if self.rows.iter().any(|r| !r.commutes_with(p)) {
            return 0;
        }
        let idx = self
            .solver()
            .decompose(&p.word)
            .expect("a word commuting with a maximal group lies in it");
        let prod = self.product(&idx);
        if prod.phase() == p.phase() {
            1
        } else {
            -1
        }
    }

    /// Measures a Hermitian Pauli. Deterministic outcomes consume no
    /// randomness; random outcomes consume one `bool` draw.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &SignedPauli, rng: &mut R) -> i8 {
        debug_assert!(p.is_hermitian());
        let anti: Vec<usize> = (0..self.n)
            .filter(|&i| !self.rows[i].commutes_with(p))
            .collect();
        let Some((&first, rest)) = anti.split_first() else {
            return self.group_expectation(p);
        };
        let pivot = self.rows[first].clone();
        for &j in rest {
            self.rows[j].mul_assign(&pivot);
        }
        let minus: bool = rng.gen();
        self.rows[first] = if minus { p.neg() } else { p.clone() };
        if minus {
            -1
        } else {
            1
        }
    }

    /// GF(2) rank of the X block.
    pub fn x_rank(&self) -> usize {
        let rows: Vec<Vec<bool>> = self
            .rows
            .iter()
            .map(|r| (0..self.n).map(|q| r.word.x_bit(q)).collect())
            .collect();
        if rows.is_empty() {
            return 0;
        }
        BitMatrix::from_rows(&rows).rank()
    }

    /// Unique generator set per stabilizer group: reduced echelon form over
    /// the `[X | Z]` columns with signs carried through the row products.
    pub fn canonical_form(&self) -> PauliFrame {
        let n = self.n;
        let mut rows = self.rows.clone();
        let bit = |p: &SignedPauli, c: usize| {
            if c < n {
                p.word.x_bit(c)
            } else {
                p.word.z_bit(c - n)
            }
        };
        let mut r = 0;
        for c in 0..2 * n {
            if r == n {
                break;
            }
            let Some(piv) = (r..n).find(|&i| bit(&rows[i], c)) else {
                continue;
            };
            rows.swap(r, piv);
            let pr = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && bit(row, c) {
                    row.mul_assign(&pr);
                }
            }
            r += 1;
        }
        PauliFrame { n, rows }
    }

    /// True iff both frames describe the same stabilizer group.
    pub fn same_state(&self, other: &PauliFrame) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// `(sign | W | V)` rows, with `W` the Z bits and `V` the X bits.
    pub fn matrix_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let w: String = (0..self.n)
                .map(|q| if r.word.z_bit(q) { '1' } else { '0' })
                .collect();
            let v: String = (0..self.n)
                .map(|q| if r.word.x_bit(q) { '1' } else { '0' })
                .collect();
            let sign = if r.is_negative() { '-' } else { '+' };
            s.push_str(&format!("{sign} {w}|{v}\n"));
        }
        s
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "PauliFrame[{}]", rows.join(", "))
    }
}

/// Free-function form of [`PauliFrame::basis_state`].
pub fn frame_of_basis_state(v: &[bool]) -> PauliFrame {
    PauliFrame::basis_state(v)
}
