//! Exact statevector reference simulator for small `n`.
//!
//! Amplitude index bit `i` holds qubit `i` (little-endian).

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::frame::PauliFrame;
use crate::pauli::{PauliWord, SignedPauli};

/// Largest qubit count accepted for statevectors.
pub const MAX_STATE_QUBITS: usize = 14;
/// Largest qubit count accepted for `4^n` Bell tables.
pub const MAX_BELL_QUBITS: usize = 7;
/// Largest qubit count accepted for full unitaries and density matrices.
pub const MAX_MATRIX_QUBITS: usize = 6;

/// Largest qubit count accepted for checks over all `2^n` basis inputs.
pub const MAX_VERIFY_QUBITS: usize = 10;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

fn guard(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::TooLarge { n, max })
    } else {
        Ok(())
    }
}

/// `i^p` for `p` in `0..4`.
pub fn i_pow(p: u8) -> Complex64 {
    match p & 3 {
        0 => C1,
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|v⟩` for a bit string `v`.
    pub fn basis(v: &[bool]) -> Result<Self> {
        let n = v.len();
        guard(n, MAX_STATE_QUBITS)?;
        let mut amps = vec![C0; 1 << n];
        amps[bits_to_index(v)] = C1;
        Ok(StateVector { n, amps })
    }

    /// Wraps amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two(),
                got: len,
            });
        }
        let n = len.trailing_zeros() as usize;
        guard(n, MAX_STATE_QUBITS)?;
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let s = self.norm();
        for a in &mut self.amps {
            *a /= s;
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn phase_on_one(&mut self, q: usize, ph: Complex64) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= ph;
            }
        }
    }

    pub fn apply_gate(&mut self, g: Gate) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::new(0.0, 1.0);
        match g {
            Gate::H(q) => self.apply_1q(
                q,
                [
                    [C1 * h, C1 * h],
                    [C1 * h, -C1 * h],
                ],
            ),
            Gate::S(q) => self.phase_on_one(q, i),
            Gate::Sdg(q) => self.phase_on_one(q, -i),
            Gate::T(q) => self.phase_on_one(q, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
            Gate::Z(q) => self.phase_on_one(q, -C1),
            Gate::X(q) => self.apply_1q(q, [[C0, C1], [C1, C0]]),
            Gate::Y(q) => self.apply_1q(q, [[C0, -i], [i, C0]]),
            Gate::CX(c, t) => {
                let (cb, tb) = (1usize << c, 1usize << t);
                for k in 0..self.amps.len() {
                    if k & cb != 0 && k & tb == 0 {
                        self.amps.swap(k, k | tb);
                    }
                }
            }
            Gate::CZ(a, b) => {
                let m = (1usize << a) | (1usize << b);
                for (k, amp) in self.amps.iter_mut().enumerate() {
                    if k & m == m {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (ab, bb) = (1usize << a, 1usize << b);
                for k in 0..self.amps.len() {
                    if k & ab != 0 && k & bb == 0 {
                        self.amps.swap(k, (k & !ab) | bb);
                    }
                }
            }
        }
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: c.n,
            });
        }
        for &g in &c.gates {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// `p|self⟩`, including the phase of `p`.
    pub fn apply_pauli(&self, p: &SignedPauli) -> StateVector {
        let (zm, xm) = word_masks(&p.word);
        let base = i_pow(p.phase() + (p.word.y_count() % 4) as u8);
        let mut out = vec![C0; self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            let sign = if (b & zm).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
            out[b ^ xm] += a * base * sign;
        }
        StateVector {
            n: self.n,
            amps: out,
        }
    }
}

fn bits_to_index(v: &[bool]) -> usize {
    v.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| 1usize << i)
        .sum()
}

/// Basis index bits to a bit vector of length `n`.
pub fn index_to_bits(i: usize, n: usize) -> Vec<bool> {
    (0..n).map(|q| (i >> q) & 1 == 1).collect()
}

fn word_masks(w: &PauliWord) -> (usize, usize) {
    let (mut zm, mut xm) = (0usize, 0usize);
    for q in 0..w.num_qubits() {
        if w.z_bit(q) {
            zm |= 1 << q;
        }
        if w.x_bit(q) {
            xm |= 1 << q;
        }
    }
    (zm, xm)
}

/// Runs a circuit on `|input⟩`.
pub fn run_circuit(c: &Circuit, input: &[bool]) -> Result<StateVector> {
    if input.len() != c.n {
        return Err(Error::DimensionMismatch {
            expected: c.n,
            got: input.len(),
        });
    }
    let mut s = StateVector::basis(input)?;
    s.apply_circuit(c)?;
    Ok(s)
}

/// Entrywise complex conjugate.
pub fn conjugate_state(s: &StateVector) -> StateVector {
    StateVector {
        n: s.n,
        amps: s.amps.iter().map(|a| a.conj()).collect(),
    }
}

/// `⟨s|p|s⟩` for Hermitian `p`.
pub fn pauli_expectation(s: &StateVector, p: &SignedPauli) -> f64 {
    let v = s.inner(&s.apply_pauli(p));
    debug_assert!(v.im.abs() < 1e-9, "non-real expectation {v}");
    v.re
}

/// Word with index `r`: bits `0..n` are X bits, bits `n..2n` are Z bits.
pub fn word_from_index(r: usize, n: usize) -> PauliWord {
    let x: Vec<bool> = (0..n).map(|q| (r >> q) & 1 == 1).collect();
    let z: Vec<bool> = (0..n).map(|q| (r >> (n + q)) & 1 == 1).collect();
    PauliWord::from_bits(&z, &x)
}

/// Inverse of [`word_from_index`].
pub fn index_of_word(w: &PauliWord) -> usize {
    let n = w.num_qubits();
    let (zm, xm) = word_masks(w);
    xm | (zm << n)
}

/// Exact Bell-measurement distribution on `|a⟩⊗|b⟩`, indexed as in
/// [`word_from_index`]: `Pr(r) = |Σ_i a_i (σ_r b)_i|² / 2ⁿ`.
pub fn bell_distribution(a: &StateVector, b: &StateVector) -> Result<Vec<f64>> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    let n = a.n;
    guard(n, MAX_BELL_QUBITS)?;
    let dim = 1usize << n;
    let scale = 1.0 / dim as f64;
    let mut out = vec![0.0; dim * dim];
    for xm in 0..dim {
        for zm in 0..dim {
            let mut acc = C0;
            for i in 0..dim {
                // (σ b)_i picks b_{i⊕x} with the Z sign of that source index.
                let src = i ^ xm;
                let sign = if (src & zm).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
                acc += a.amps[i] * b.amps[src] * sign;
            }
            out[xm | (zm << n)] = acc.norm_sqr() * scale;
        }
    }
    Ok(out)
}

/// True iff `|⟨a|b⟩| ≥ 1 − tol`.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> bool {
    a.n == b.n && a.inner(b).norm() >= 1.0 - tol
}

/// Fidelity `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm_sqr()
}

/// `|⟨b_v|a_v⟩|²` for every basis input `v`, indexed as in [`index_to_bits`].
pub fn basis_fidelities(a: &Circuit, b: &Circuit) -> Result<Vec<f64>> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    guard(a.n, MAX_VERIFY_QUBITS)?;
    (0..1usize << a.n)
        .map(|v| {
            let v = index_to_bits(v, a.n);
            Ok(fidelity(&run_circuit(a, &v)?, &run_circuit(b, &v)?))
        })
        .collect()
}

/// True iff one phase `θ` gives `a|v⟩ = e^{iθ} b|v⟩` within `tol` for every
/// basis input `v`.
pub fn common_basis_phase(a: &Circuit, b: &Circuit, tol: f64) -> Result<bool> {
    guard(a.n, MAX_VERIFY_QUBITS)?;
    let mut phase: Option<Complex64> = None;
    for v in 0..1usize << a.n {
        let v = index_to_bits(v, a.n);
        let ov = run_circuit(b, &v)?.inner(&run_circuit(a, &v)?);
        if (ov.norm() - 1.0).abs() > tol {
            return Ok(false);
        }
        let ov = ov / ov.norm();
        match phase {
            None => phase = Some(ov),
            Some(p) if (ov - p).norm() > tol => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// The state stabilized by a frame, with an arbitrary global phase.
pub fn frame_state(f: &PauliFrame) -> Result<StateVector> {
    let n = f.num_qubits();
    guard(n, MAX_STATE_QUBITS)?;
    for start in 0..1usize << n {
        let mut s = StateVector::basis(&index_to_bits(start, n))?;
        for g in f.rows() {
            let gs = s.apply_pauli(g);
            for (a, b) in s.amps.iter_mut().zip(&gs.amps) {
                *a = (*a + b) * 0.5;
            }
        }
        if s.norm() > 1e-6 {
            s.normalize();
            return Ok(s);
        }
    }
    Err(Error::InvalidFrame("no stabilized state".into()))
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![C0; dim * dim],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    /// `|s⟩⟨s|`.
    pub fn projector(s: &StateVector) -> Result<Self> {
        guard(s.n, MAX_MATRIX_QUBITS)?;
        let d = s.amps.len();
        let mut m = Matrix::zeros(d);
        for r in 0..d {
            for c in 0..d {
                m.data[r * d + c] = s.amps[r] * s.amps[c].conj();
            }
        }
        Ok(m)
    }

    /// `self += w · other`.
    pub fn add_scaled(&mut self, w: f64, other: &Matrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * w;
        }
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Full unitary of a circuit, assembled column by column from basis inputs.
pub fn reconstruct_unitary(c: &Circuit) -> Result<Matrix> {
    guard(c.n, 3)?;
    let d = 1usize << c.n;
    let mut m = Matrix::zeros(d);
    for col in 0..d {
        let s = run_circuit(c, &index_to_bits(col, c.n))?;
        for row in 0..d {
            m.data[row * d + col] = s.amps[row];
        }
    }
    Ok(m)
}

/// `min_θ max |A − e^{iθ} B|`, with `θ` chosen as the phase of `tr(B†A)`.
pub fn unitary_phase_distance(a: &Matrix, b: &Matrix) -> f64 {
    let tr: Complex64 = a.data.iter().zip(&b.data).map(|(x, y)| y.conj() * x).sum();
    let ph = if tr.norm() > 0.0 { tr / tr.norm() } else { C1 };
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y * ph).norm())
        .fold(0.0, f64::max)
}

/// True iff `A = e^{iθ} B` entrywise within `tol` for some `θ`.
pub fn compare_unitaries_up_to_phase(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.dim == b.dim && unitary_phase_distance(a, b) <= tol
}
