//! Expanded stabilizer frames for T-depth-one output states: isotropic
//! generators plus primary symplectic pairs, and the matching stabilizer
//! pseudomixture over `3^k̂` components.

use std::f64::consts::{FRAC_PI_8, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::bitmatrix::{solve_symplectic, words_rank, SpanSolver};
use crate::circuit::{conjugate_pauli, Circuit, Gate, TDepth1};
use crate::dense::{frame_state, StateVector, MAX_STATE_QUBITS};
use crate::error::{Error, Result};
use crate::frame::PauliFrame;
use crate::pauli::{Letter, PauliWord, SignedPauli};

/// Largest `k̂` accepted by [`ExpandedFrame::component_states`].
pub const MAX_COMPONENT_PAIRS: usize = 12;

/// Largest Bell support enumerated by [`ExpandedFrame::bell_support`].
pub const MAX_BELL_SUPPORT: usize = 1 << 22;

/// Weights of `TρT† = α₁ρ + α₂ZρZ + α₃SρS†`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PseudomixtureWeights;

impl PseudomixtureWeights {
    pub const ALPHA: [f64; 3] = [0.5, (1.0 - SQRT_2) / 2.0, SQRT_2 / 2.0];

    /// `β_j = ∏ α_{j_i}` for labels `j_i ∈ {1, 2, 3}`.
    pub fn beta(j: &[u8]) -> f64 {
        j.iter().map(|&l| Self::ALPHA[l as usize - 1]).product()
    }
}

/// Isotropic generators `g_1..g_{n−k̂}` and primary pairs `(g_i, h_i)`.
///
/// The state is `2^{−n} ∏(1 + g) ∏(1 + (g_i + h_i)/√2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExpandedFrame {
    n: usize,
    isotropic: Vec<SignedPauli>,
    pairs: Vec<(SignedPauli, SignedPauli)>,
}

fn times_minus_i(p: &SignedPauli) -> SignedPauli {
    let mut q = p.clone();
    q.set_phase((p.phase() + 3) % 4);
    q
}

impl ExpandedFrame {
    /// Validates the commutation contract and word independence.
    pub fn new(
        n: usize,
        isotropic: Vec<SignedPauli>,
        pairs: Vec<(SignedPauli, SignedPauli)>,
    ) -> Result<Self> {
        if isotropic.len() + pairs.len() != n {
            return Err(Error::InvalidFrame(format!(
                "{} isotropic and {} pairs on {n} qubits",
                isotropic.len(),
                pairs.len()
            )));
        }
        let e = ExpandedFrame {
            n,
            isotropic,
            pairs,
        };
        let elems = e.elements();
        for p in &elems {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.num_qubits(),
                });
            }
            if !p.is_hermitian() {
                return Err(Error::InvalidFrame(format!("non-Hermitian element {p}")));
            }
        }
        let niso = e.isotropic.len();
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                let partners = i >= niso && (i - niso) / 2 == (j - niso) / 2;
                if elems[i].commutes_with(elems[j]) == partners {
                    return Err(Error::InvalidFrame(format!(
                        "wrong commutation between {} and {}",
                        elems[i], elems[j]
                    )));
                }
            }
        }
        let words: Vec<PauliWord> = elems.iter().map(|p| p.word.clone()).collect();
        if words_rank(&words) != words.len() {
            return Err(Error::InvalidFrame("elements are dependent".into()));
        }
        Ok(e)
    }

    /// A plain stabilizer frame with `k̂ = 0`.
    pub fn from_frame(f: &PauliFrame) -> Self {
        ExpandedFrame {
            n: f.num_qubits(),
            isotropic: f.rows().to_vec(),
            pairs: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn k_hat(&self) -> usize {
        self.pairs.len()
    }

    pub fn isotropic(&self) -> &[SignedPauli] {
        &self.isotropic
    }

    pub fn pairs(&self) -> &[(SignedPauli, SignedPauli)] {
        &self.pairs
    }

    /// Isotropic elements, then `g_1, h_1, g_2, h_2, …`.
    pub fn elements(&self) -> Vec<&SignedPauli> {
        let mut v: Vec<&SignedPauli> = self.isotropic.iter().collect();
        for (g, h) in &self.pairs {
            v.push(g);
            v.push(h);
        }
        v
    }

    fn solver(&self) -> SpanSolver {
        let words: Vec<PauliWord> = self.elements().iter().map(|p| p.word.clone()).collect();
        SpanSolver::new(self.n, &words).expect("elements are independent")
    }

    /// The stabilizer frame when `k̂ = 0`.
    pub fn as_stabilizer_frame(&self) -> Option<PauliFrame> {
        if self.pairs.is_empty() {
            PauliFrame::new(self.isotropic.clone()).ok()
        } else {
            None
        }
    }

    /// Conjugates every element by a Clifford gate.
    pub fn apply_gate(&mut self, g: Gate) -> Result<()> {
        if !g.is_clifford() {
            return Err(Error::InvalidCircuit(
                "use apply_t for T gates on an expanded frame".into(),
            ));
        }
        if g.qubits().iter().any(|&q| q >= self.n) {
            return Err(Error::InvalidCircuit(format!("{g:?} out of range")));
        }
        for p in &mut self.isotropic {
            conjugate_pauli(p, g);
        }
        for (a, b) in &mut self.pairs {
            conjugate_pauli(a, g);
            conjugate_pauli(b, g);
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
            match g {
                Gate::T(q) => self.apply_t(q)?,
                _ => self.apply_gate(g)?,
            }
        }
        Ok(())
    }

    /// Applies `T` on qubit `q`, i.e. the rotation `exp(−iπ/8 Z_q)` up to phase.
    pub fn apply_t(&mut self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::InvalidCircuit(format!("T({q}) out of range")));
        }
        let axis = SignedPauli::single(self.n, q, Letter::Z);
        let anti: Vec<usize> = (0..self.isotropic.len())
            .filter(|&i| !self.isotropic[i].commutes_with(&axis))
            .collect();
        if let Some((&first, rest)) = anti.split_first() {
            let g = self.isotropic[first].clone();
            for &j in rest {
                self.isotropic[j].mul_assign(&g);
            }
            for (a, b) in &mut self.pairs {
                if !a.commutes_with(&axis) {
                    a.mul_assign(&g);
                }
                if !b.commutes_with(&axis) {
                    b.mul_assign(&g);
                }
            }
            self.isotropic.remove(first);
            let h = times_minus_i(&axis.mul(&g));
            self.pairs.push((g, h));
            return Ok(());
        }

        let niso = self.isotropic.len();
        let idx = self
            .solver()
            .decompose(&axis.word)
            .expect("the commutant of the isotropic group is the full span");
        let mut used = vec![[false; 2]; self.pairs.len()];
        let mut iso_part = SignedPauli::identity(self.n);
        for &i in &idx {
            if i < niso {
                iso_part.mul_assign(&self.isotropic[i]);
            } else {
                used[(i - niso) / 2][(i - niso) % 2] = true;
            }
        }
        let full: Vec<usize> = (0..used.len())
            .filter(|&i| used[i] == [true, true])
            .collect();
        let partial = used.iter().any(|u| u[0] != u[1]);
        if partial || full.len() > 1 {
            return Err(Error::NotRepresentable(format!(
                "T({q}) couples several primary pairs"
            )));
        }
        let Some(&i) = full.first() else {
            // The axis is a signed stabilizer, so T only adds a phase.
            return Ok(());
        };
        let (g, h) = self.pairs.remove(i);
        let pair_axis = times_minus_i(&g.mul(&h));
        let same = pair_axis.mul(&iso_part).phase() == axis.phase();
        self.isotropic.push(if same { h } else { g });
        Ok(())
    }

    /// Exact `3^k̂` stabilizer pseudomixture `Σ β_j |φ_j⟩⟨φ_j|`.
    pub fn component_states(&self) -> Result<Vec<(f64, PauliFrame)>> {
        let k = self.pairs.len();
        if k > MAX_COMPONENT_PAIRS {
            return Err(Error::TooLarge {
                n: k,
                max: MAX_COMPONENT_PAIRS,
            });
        }
        let total = 3usize.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for mut j in 0..total {
            let mut rows = self.isotropic.clone();
            let mut beta = 1.0;
            for (g, h) in &self.pairs {
                let label = j % 3;
                j /= 3;
                beta *= PseudomixtureWeights::ALPHA[label];
                rows.push(match label {
                    0 => g.clone(),
                    1 => g.neg(),
                    _ => h.clone(),
                });
            }
            out.push((beta, PauliFrame::new(rows)?));
        }
        Ok(out)
    }

    /// `Tr(ρ p)` from the closed form: `±2^{−m/2}` when `p` is a signed
    /// isotropic word times `m` primaries from distinct pairs, else 0.
    pub fn pseudo_expectation(&self, p: &SignedPauli) -> f64 {
        debug_assert!(p.is_hermitian());
        let Some(idx) = self.solver().decompose(&p.word) else {
            return 0.0;
        };
        let niso = self.isotropic.len();
        let mut used = vec![false; self.pairs.len()];
        let mut prod = SignedPauli::identity(self.n);
        let mut m = 0;
        for &i in &idx {
            if i < niso {
                prod.mul_assign(&self.isotropic[i]);
                continue;
            }
            let pair = (i - niso) / 2;
            if used[pair] {
                return 0.0;
            }
            used[pair] = true;
            m += 1;
            let (g, h) = &self.pairs[pair];
            prod.mul_assign(if (i - niso) % 2 == 0 { g } else { h });
        }
        let mag = 0.5f64.powf(m as f64 / 2.0);
        if prod.phase() == p.phase() {
            mag
        } else {
            -mag
        }
    }

    /// A word `r₀` with `|ψ*⟩ ∝ σ_{r₀}|ψ⟩`, so Bell outcomes on `ψ⊗ψ` are
    /// those on `ψ*⊗ψ` shifted by `r₀`. Unique up to isotropic words.
    pub fn bell_shift(&self) -> PauliWord {
        let cons: Vec<(PauliWord, bool)> = self
            .elements()
            .iter()
            .map(|p| (p.word.clone(), p.conjugate_negates()))
            .collect();
        solve_symplectic(self.n, &cons).expect("elements are independent")
    }

    /// Nonzero entries of the Bell distribution on `ψ*⊗ψ`, which is
    /// `⟨σ_r⟩²/2^n`.
    pub fn bell_support(&self) -> Result<Vec<(PauliWord, f64)>> {
        let niso = self.isotropic.len();
        let k = self.pairs.len();
        let size = 3f64.powi(k as i32) * 2f64.powi(niso as i32);
        if size > MAX_BELL_SUPPORT as f64 {
            return Err(Error::TooLarge {
                n: size as usize,
                max: MAX_BELL_SUPPORT,
            });
        }
        let base = 0.5f64.powi(self.n as i32);
        let mut out = Vec::with_capacity(size as usize);
        for s in 0..1usize << niso {
            let mut w = PauliWord::identity(self.n);
            for (i, g) in self.isotropic.iter().enumerate() {
                if s >> i & 1 == 1 {
                    w.xor_assign(&g.word);
                }
            }
            for mut j in 0..3usize.pow(k as u32) {
                let mut u = w.clone();
                let mut p = base;
                for (g, h) in &self.pairs {
                    let label = j % 3;
                    j /= 3;
                    if label == 0 {
                        continue;
                    }
                    u.xor_assign(if label == 1 { &g.word } else { &h.word });
                    p *= 0.5;
                }
                out.push((u, p));
            }
        }
        Ok(out)
    }

    /// Nonzero entries of the Bell distribution on `ψ⊗ψ`.
    pub fn bell_support_shifted(&self) -> Result<Vec<(PauliWord, f64)>> {
        let r0 = self.bell_shift();
        Ok(self
            .bell_support()?
            .into_iter()
            .map(|(w, p)| (w.xor(&r0), p))
            .collect())
    }

    /// Draws one Bell outcome on `ψ*⊗ψ`.
    pub fn sample_bell<R: Rng + ?Sized>(&self, rng: &mut R) -> PauliWord {
        let mut w = PauliWord::identity(self.n);
        for g in &self.isotropic {
            if rng.gen::<bool>() {
                w.xor_assign(&g.word);
            }
        }
        for (g, h) in &self.pairs {
            match rng.gen_range(0..4u8) {
                0 => w.xor_assign(&g.word),
                1 => w.xor_assign(&h.word),
                _ => {}
            }
        }
        w
    }

    /// Dense amplitudes: the rotations `exp(−iπ/8 a_i)` with `a_i = −i g_i h_i`
    /// applied to the stabilizer state of the isotropic set and every `g_i`.
    pub fn state_vector(&self) -> Result<StateVector> {
        if self.n > MAX_STATE_QUBITS {
            return Err(Error::TooLarge {
                n: self.n,
                max: MAX_STATE_QUBITS,
            });
        }
        let mut rows = self.isotropic.clone();
        rows.extend(self.pairs.iter().map(|(g, _)| g.clone()));
        let mut psi = frame_state(&PauliFrame::new(rows)?)?;
        let (c, s) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
        for (g, h) in &self.pairs {
            let axis = times_minus_i(&g.mul(h));
            let rotated = psi.apply_pauli(&axis);
            let amps = psi
                .amplitudes()
                .iter()
                .zip(rotated.amplitudes())
                .map(|(a, b)| a * c - Complex64::new(0.0, s) * b)
                .collect();
            psi = StateVector::from_amplitudes(amps)?;
        }
        Ok(psi)
    }

    /// Text dump: isotropic lines, pair lines, then `k̂`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, g) in self.isotropic.iter().enumerate() {
            s.push_str(&format!("ISO {}: {g}\n", i + 1));
        }
        for (i, (g, h)) in self.pairs.iter().enumerate() {
            s.push_str(&format!("PAIR {}: g={g}, h={h}\n", i + 1));
        }
        s.push_str(&format!("KHAT {}\n", self.pairs.len()));
        s
    }
}

impl From<PauliFrame> for ExpandedFrame {
    fn from(f: PauliFrame) -> Self {
        ExpandedFrame::from_frame(&f)
    }
}

impl fmt::Display for ExpandedFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl fmt::Debug for ExpandedFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpandedFrame {{\n{}}}", self.dump())
    }
}

/// One postselected T gadget on qubit `q`.
pub fn expand_t_gate(f: impl Into<ExpandedFrame>, q: usize) -> Result<ExpandedFrame> {
    let mut e = f.into();
    e.apply_t(q)?;
    Ok(e)
}

/// Expanded frame of `C₂ T^v C₁ |input⟩`.
pub fn build_tdepth1(
    c1: &Circuit,
    v: &[bool],
    c2: &Circuit,
    input: &[bool],
) -> Result<ExpandedFrame> {
    if !c1.is_clifford() || !c2.is_clifford() {
        return Err(Error::InvalidCircuit("C1 and C2 must be Clifford".into()));
    }
    if v.len() != c1.n || c2.n != c1.n {
        return Err(Error::DimensionMismatch {
            expected: c1.n,
            got: if v.len() != c1.n { v.len() } else { c2.n },
        });
    }
    let mut e = ExpandedFrame::from_frame(&PauliFrame::of_circuit(c1, input)?);
    for (q, &t) in v.iter().enumerate() {
        if t {
            e.apply_t(q)?;
        }
    }
    e.apply_circuit(c2)?;
    Ok(e)
}

/// How the T axes of a T-depth-one circuit sit relative to the stabilizer
/// group of `C₁|v⟩`. The same for every basis input `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisStructure {
    /// Axes outside the group are independent modulo the group.
    Independent,
    /// Some product of axes lies in the group; output states keep the
    /// isotropic-plus-pairs form.
    Merged,
    /// Output states are not of the isotropic-plus-pairs form.
    Unrepresentable,
}

impl TDepth1 {
    /// Expanded frame of this circuit applied to `|input⟩`.
    pub fn expanded_frame(&self, input: &[bool]) -> Result<ExpandedFrame> {
        build_tdepth1(&self.c1, &self.v, &self.c2, input)
    }

    pub fn axis_structure(&self) -> Result<AxisStructure> {
        let n = self.n();
        let zero = vec![false; n];
        match self.expanded_frame(&zero) {
            Ok(_) => {}
            Err(Error::NotRepresentable(_)) => return Ok(AxisStructure::Unrepresentable),
            Err(e) => return Err(e),
        }
        let stab: Vec<PauliWord> = PauliFrame::of_circuit(&self.c1, &zero)?
            .rows()
            .iter()
            .map(|p| p.word.clone())
            .collect();
        let span = SpanSolver::new(n, &stab)?;
        let mut all = stab;
        all.extend(
            (0..n)
                .filter(|&q| self.v[q])
                .map(|q| PauliWord::single(n, q, Letter::Z))
                .filter(|w| !span.contains(w)),
        );
        Ok(if words_rank(&all) == all.len() {
            AxisStructure::Independent
        } else {
            AxisStructure::Merged
        })
    }
}
