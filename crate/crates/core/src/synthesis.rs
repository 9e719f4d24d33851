//! Clifford tableaus: extraction from circuits, symplectic completion and
//! synthesis back into gates.

use std::fmt;

use crate::bitmatrix::{solve_symplectic, words_rank, BitMatrix};
use crate::circuit::{conjugate_pauli, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliWord, SignedPauli};

/// Images `C X_i C†` and `C Z_i C†` of a Clifford `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    pub x_images: Vec<SignedPauli>,
    pub z_images: Vec<SignedPauli>,
}

/// All `X_i` images and the first `t` `Z_j` images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTableau {
    pub n: usize,
    pub x_images: Vec<SignedPauli>,
    pub z_images: Vec<SignedPauli>,
}

fn check_relations(n: usize, xs: &[SignedPauli], zs: &[SignedPauli]) -> Result<()> {
    for p in xs.iter().chain(zs) {
        if p.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.num_qubits(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::InvalidTableau(format!("non-Hermitian image {p}")));
        }
    }
    let bad = |a: &SignedPauli, b: &SignedPauli| {
        Error::InvalidTableau(format!("wrong commutation between {a} and {b}"))
    };
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if !xs[i].commutes_with(&xs[j]) {
                return Err(bad(&xs[i], &xs[j]));
            }
        }
        for (j, z) in zs.iter().enumerate() {
            if xs[i].commutes_with(z) == (i == j) {
                return Err(bad(&xs[i], z));
            }
        }
    }
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            if !zs[i].commutes_with(&zs[j]) {
                return Err(bad(&zs[i], &zs[j]));
            }
        }
    }
    Ok(())
}

impl Tableau {
    /// Validates the full set of canonical commutation relations.
    pub fn new(x_images: Vec<SignedPauli>, z_images: Vec<SignedPauli>) -> Result<Self> {
        let n = x_images.len();
        if z_images.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: z_images.len(),
            });
        }
        check_relations(n, &x_images, &z_images)?;
        Ok(Tableau { x_images, z_images })
    }

    pub fn identity(n: usize) -> Self {
        Tableau {
            x_images: (0..n).map(|i| SignedPauli::single(n, i, Letter::X)).collect(),
            z_images: (0..n).map(|i| SignedPauli::single(n, i, Letter::Z)).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x_images.len()
    }

    /// Image of an arbitrary signed Pauli under the tableau's Clifford.
    pub fn apply(&self, p: &SignedPauli) -> SignedPauli {
        let n = self.num_qubits();
        // σ_{zx} = i^{z·x} X^x Z^z, so rebuild from single-qubit images in that order.
        let mut out = SignedPauli::identity(n);
        for q in 0..n {
            if p.word.x_bit(q) {
                out.mul_assign(&self.x_images[q]);
            }
        }
        for q in 0..n {
            if p.word.z_bit(q) {
                out.mul_assign(&self.z_images[q]);
            }
        }
        let zx = (0..n)
            .filter(|&q| p.word.x_bit(q) && p.word.z_bit(q))
            .count() as u8;
        out.set_phase((out.phase() + p.phase() + zx) % 4);
        out
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, z)) in self.x_images.iter().zip(&self.z_images).enumerate() {
            writeln!(f, "X{i} -> {x}  Z{i} -> {z}")?;
        }
        Ok(())
    }
}

impl PartialTableau {
    pub fn new(n: usize, x_images: Vec<SignedPauli>, z_images: Vec<SignedPauli>) -> Result<Self> {
        if x_images.len() != n || z_images.len() > n {
            return Err(Error::InvalidTableau(format!(
                "{} X images and {} Z images on {n} qubits",
                x_images.len(),
                z_images.len()
            )));
        }
        check_relations(n, &x_images, &z_images)?;
        Ok(PartialTableau {
            n,
            x_images,
            z_images,
        })
    }
}

/// Fills the missing `Z_j` images with partners that anticommute only with
/// `x_j`; the given rows are kept as they are.
pub fn complete_tableau(p: &PartialTableau) -> Result<Tableau> {
    let n = p.n;
    check_relations(n, &p.x_images, &p.z_images)?;
    let words: Vec<PauliWord> = p
        .x_images
        .iter()
        .chain(&p.z_images)
        .map(|q| q.word.clone())
        .collect();
    if words_rank(&words) != words.len() {
        return Err(Error::InvalidTableau("images are dependent".into()));
    }
    let mut zs = p.z_images.clone();
    for j in zs.len()..n {
        let mut cons: Vec<(PauliWord, bool)> = p
            .x_images
            .iter()
            .enumerate()
            .map(|(i, x)| (x.word.clone(), i == j))
            .collect();
        cons.extend(zs.iter().map(|z| (z.word.clone(), false)));
        let w = solve_symplectic(n, &cons)?;
        zs.push(SignedPauli::new(w, 0));
    }
    Tableau::new(p.x_images.clone(), zs)
}

/// Conjugation images of a Clifford circuit.
pub fn tableau_of(c: &Circuit) -> Result<Tableau> {
    if !c.is_clifford() {
        return Err(Error::InvalidCircuit("tableau of a non-Clifford circuit".into()));
    }
    let n = c.n;
    let image = |l: Letter, i: usize| {
        let mut p = SignedPauli::single(n, i, l);
        c.conjugate(&mut p);
        p
    };
    Ok(Tableau {
        x_images: (0..n).map(|i| image(Letter::X, i)).collect(),
        z_images: (0..n).map(|i| image(Letter::Z, i)).collect(),
    })
}

struct Reducer {
    rows: Vec<SignedPauli>,
    gates: Vec<Gate>,
}

impl Reducer {
    fn apply(&mut self, g: Gate) {
        for r in &mut self.rows {
            conjugate_pauli(r, g);
        }
        self.gates.push(g);
    }
}

/// Gaussian elimination to a signed identity, then a Pauli layer for signs.
/// Uses only `H`, `S`, `Sdg`, `X`, `Z` and `CX`; at most `8n²` gates.
pub fn synthesize(t: &Tableau) -> Result<Circuit> {
    let n = t.num_qubits();
    check_relations(n, &t.x_images, &t.z_images)?;
    let mut red = Reducer {
        rows: t.x_images.iter().chain(&t.z_images).cloned().collect(),
        gates: Vec::new(),
    };
    for i in 0..n {
        // Turn the X image into X_i.
        for j in i..n {
            let p = &red.rows[i].word;
            match (p.z_bit(j), p.x_bit(j)) {
                (true, true) => red.apply(Gate::S(j)),
                (true, false) => red.apply(Gate::H(j)),
                _ => {}
            }
        }
        if !red.rows[i].word.x_bit(i) {
            let j = (i + 1..n)
                .find(|&j| red.rows[i].word.x_bit(j))
                .ok_or_else(|| Error::InvalidTableau("X image has no support".into()))?;
            red.apply(Gate::CX(j, i));
        }
        for j in i + 1..n {
            if red.rows[i].word.x_bit(j) {
                red.apply(Gate::CX(i, j));
            }
        }
        // Turn the Z image into Z_i while keeping X_i.
        if red.rows[n + i].word.x_bit(i) {
            red.apply(Gate::H(i));
            red.apply(Gate::S(i));
            red.apply(Gate::H(i));
        }
        for j in i + 1..n {
            let p = &red.rows[n + i].word;
            let (z, x) = (p.z_bit(j), p.x_bit(j));
            if !z && !x {
                continue;
            }
            if z && x {
                red.apply(Gate::S(j));
            }
            if x {
                red.apply(Gate::H(j));
            }
            red.apply(Gate::CX(j, i));
        }
    }
    let mut gates = Vec::new();
    for i in 0..n {
        if red.rows[i].is_negative() {
            gates.push(Gate::Z(i));
        }
        if red.rows[n + i].is_negative() {
            gates.push(Gate::X(i));
        }
    }
    gates.extend(
        red.gates
            .iter()
            .rev()
            .map(|g| g.inverse().expect("Clifford gates invert")),
    );
    Circuit::from_gates(n, gates)
}

/// `C ∘ T^{last k wires} ∘ S^s ∘ H^{⊗n}` as one gate list.
pub fn assemble_tdepth1(c: &Circuit, s: &[u8], k: usize) -> Result<Circuit> {
    let n = c.n;
    if s.len() != n || k > n {
        return Err(Error::InvalidCircuit(format!(
            "phase vector of length {} with k = {k} on {n} qubits",
            s.len()
        )));
    }
    if s.iter().any(|&x| x > 3) || s[..n - k].iter().any(|&x| x != 0) {
        return Err(Error::InvalidCircuit("malformed phase vector".into()));
    }
    if !c.is_clifford() {
        return Err(Error::InvalidCircuit("C must be Clifford".into()));
    }
    let mut gates: Vec<Gate> = (0..n).map(Gate::H).collect();
    for (q, &e) in s.iter().enumerate() {
        match e {
            1 => gates.push(Gate::S(q)),
            2 => gates.push(Gate::Z(q)),
            3 => gates.push(Gate::Sdg(q)),
            _ => {}
        }
    }
    gates.extend((n - k..n).map(Gate::T));
    gates.extend(c.gates.iter().copied());
    Circuit::from_gates(n, gates)
}

/// A CX network mapping `|v⟩` to `|Fv⟩` for an invertible `F`.
pub fn linear_reversible(f: &BitMatrix) -> Result<Circuit> {
    let n = f.rows();
    if f.cols() != n {
        return Err(Error::Singular);
    }
    let mut m = f.clone();
    let mut ops = Vec::new();
    for c in 0..n {
        if !m.get(c, c) {
            let r = (c + 1..n).find(|&r| m.get(r, c)).ok_or(Error::Singular)?;
            m.xor_row(c, r);
            ops.push(Gate::CX(r, c));
        }
        for r in 0..n {
            if r != c && m.get(r, c) {
                m.xor_row(r, c);
                ops.push(Gate::CX(c, r));
            }
        }
    }
    ops.reverse();
    Circuit::from_gates(n, ops)
}
