//! Gate lists, Clifford conjugation of Pauli operators, and the circuit
//! JSON format.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::SignedPauli;

/// Elementary gates. Two-qubit gates list the control first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
    T(usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "Sdg",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::CX(..) => "CX",
            Gate::CZ(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::T(_) => "T",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
                vec![q]
            }
            Gate::T(q) => vec![q],
            Gate::CX(a, b) | Gate::CZ(a, b) | Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T(_))
    }

    /// True for gates diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            Gate::S(_) | Gate::Sdg(_) | Gate::Z(_) | Gate::CZ(..) | Gate::T(_)
        )
    }

    /// Inverse gate; `None` for `T`, whose inverse is outside the gate set.
    pub fn inverse(&self) -> Option<Gate> {
        match *self {
            Gate::S(q) => Some(Gate::Sdg(q)),
            Gate::Sdg(q) => Some(Gate::S(q)),
            Gate::T(_) => None,
            g => Some(g),
        }
    }

    pub fn from_parts(name: &str, q: &[usize]) -> Result<Gate> {
        let one = |f: fn(usize) -> Gate| -> Result<Gate> {
            match q {
                [a] => Ok(f(*a)),
                _ => Err(Error::InvalidCircuit(format!("{name} takes one qubit"))),
            }
        };
        let two = |f: fn(usize, usize) -> Gate| -> Result<Gate> {
            match q {
                [a, b] if a != b => Ok(f(*a, *b)),
                _ => Err(Error::InvalidCircuit(format!(
                    "{name} takes two distinct qubits"
                ))),
            }
        };
        match name {
            "H" => one(Gate::H),
            "S" => one(Gate::S),
            "Sdg" => one(Gate::Sdg),
            "X" => one(Gate::X),
            "Y" => one(Gate::Y),
            "Z" => one(Gate::Z),
            "T" => one(Gate::T),
            "CX" => two(Gate::CX),
            "CZ" => two(Gate::CZ),
            "SWAP" => two(Gate::Swap),
            _ => Err(Error::InvalidCircuit(format!("unknown gate {name:?}"))),
        }
    }
}

/// Replaces `p` with `g p g†`, tracking the phase exactly.
///
/// # Panics
/// Panics on `T`, which does not map Paulis to Paulis.
pub fn conjugate_pauli(p: &mut SignedPauli, g: Gate) {
    let mut flip = false;
    let w = &mut p.word;
    match g {
        Gate::H(q) => {
            let (z, x) = (w.z_bit(q), w.x_bit(q));
            flip = z && x;
            w.set_bits(q, x, z);
        }
        Gate::S(q) => {
            let (z, x) = (w.z_bit(q), w.x_bit(q));
            flip = z && x;
            w.set_bits(q, z ^ x, x);
        }
        Gate::Sdg(q) => {
            let (z, x) = (w.z_bit(q), w.x_bit(q));
            flip = x && !z;
            w.set_bits(q, z ^ x, x);
        }
        Gate::X(q) => flip = w.z_bit(q),
        Gate::Y(q) => flip = w.z_bit(q) ^ w.x_bit(q),
        Gate::Z(q) => flip = w.x_bit(q),
        Gate::CX(c, t) => {
            let (zc, xc, zt, xt) = (w.z_bit(c), w.x_bit(c), w.z_bit(t), w.x_bit(t));
            flip = xc && zt && !(xt ^ zc);
            w.set_bits(c, zc ^ zt, xc);
            w.set_bits(t, zt, xt ^ xc);
        }
        Gate::CZ(a, b) => {
            let (za, xa, zb, xb) = (w.z_bit(a), w.x_bit(a), w.z_bit(b), w.x_bit(b));
            flip = xa && xb && (za ^ zb);
            w.set_bits(a, za ^ xb, xa);
            w.set_bits(b, zb ^ xa, xb);
        }
        Gate::Swap(a, b) => {
            let (za, xa, zb, xb) = (w.z_bit(a), w.x_bit(a), w.z_bit(b), w.x_bit(b));
            w.set_bits(a, zb, xb);
            w.set_bits(b, za, xa);
        }
        Gate::T(_) => panic!("T does not normalize the Pauli group"),
    }
    if flip {
        p.negate();
    }
}

/// An ordered gate list on `n` qubits, applied first to last.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    g: String,
    q: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    gates: Vec<GateJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    c1: Option<Vec<GateJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    c2: Option<Vec<GateJson>>,
}

fn gates_to_json(gates: &[Gate]) -> Vec<GateJson> {
    gates
        .iter()
        .map(|g| GateJson {
            g: g.name().to_string(),
            q: g.qubits(),
        })
        .collect()
}

fn gates_from_json(n: usize, gs: &[GateJson]) -> Result<Vec<Gate>> {
    gs.iter()
        .map(|g| {
            let gate = Gate::from_parts(&g.g, &g.q)?;
            if let Some(&bad) = gate.qubits().iter().find(|&&q| q >= n) {
                return Err(Error::InvalidCircuit(format!(
                    "qubit {bad} out of range for {n} qubits"
                )));
            }
            Ok(gate)
        })
        .collect()
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Circuit { n, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.gates.extend_from_slice(&other.gates);
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            let qs = g.qubits();
            if let Some(&bad) = qs.iter().find(|&&q| q >= self.n) {
                return Err(Error::InvalidCircuit(format!(
                    "qubit {bad} out of range for {} qubits",
                    self.n
                )));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::InvalidCircuit(format!(
                    "{} on repeated qubit {}",
                    g.name(),
                    qs[0]
                )));
            }
        }
        Ok(())
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_clifford()).count()
    }

    /// Inverse circuit of a Clifford circuit.
    pub fn inverse(&self) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                g.inverse()
                    .ok_or_else(|| Error::InvalidCircuit("T has no inverse in the gate set".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit { n: self.n, gates })
    }

    /// Conjugates `p` by the whole circuit: `p ← U p U†`.
    pub fn conjugate(&self, p: &mut SignedPauli) {
        for &g in &self.gates {
            conjugate_pauli(p, g);
        }
    }

    /// Splits the circuit as `C₂ · T^v · C₁` by moving every `T` back to the
    /// position of the first one. Returns `None` if that is impossible or a
    /// qubit carries two `T` gates.
    pub fn split_tdepth1(&self) -> Option<TDepth1> {
        let Some(first) = self.gates.iter().position(|g| !g.is_clifford()) else {
            return Some(TDepth1 {
                c1: self.clone(),
                v: vec![false; self.n],
                c2: Circuit::new(self.n),
            });
        };
        let mut v = vec![false; self.n];
        let mut c2 = Vec::new();
        for g in &self.gates[first..] {
            match *g {
                Gate::T(q) => {
                    if v[q] {
                        return None;
                    }
                    let blocked = c2
                        .iter()
                        .any(|h: &Gate| !h.is_diagonal() && h.qubits().contains(&q));
                    if blocked {
                        return None;
                    }
                    v[q] = true;
                }
                h => c2.push(h),
            }
        }
        Some(TDepth1 {
            c1: Circuit {
                n: self.n,
                gates: self.gates[..first].to_vec(),
            },
            v,
            c2: Circuit {
                n: self.n,
                gates: c2,
            },
        })
    }

    pub fn is_tdepth1(&self) -> bool {
        self.split_tdepth1().is_some()
    }

    pub fn to_json(&self) -> String {
        let j = CircuitJson {
            n: self.n,
            gates: gates_to_json(&self.gates),
            c1: None,
            v: None,
            c2: None,
        };
        serde_json::to_string_pretty(&j).expect("circuit serializes")
    }

    /// Parses circuit JSON. When `c1`, `v` and `c2` are present they take
    /// precedence over `gates`.
    pub fn from_json(text: &str) -> Result<Circuit> {
        if let Some(t) = TDepth1::from_json_opt(text)? {
            return Ok(t.to_circuit());
        }
        let j: CircuitJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidCircuit(e.to_string()))?;
        Circuit::from_gates(j.n, gates_from_json(j.n, &j.gates)?)
    }
}

/// A T-depth-one circuit `C₂ · T^v · C₁` with Clifford `C₁`, `C₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDepth1 {
    pub c1: Circuit,
    pub v: Vec<bool>,
    pub c2: Circuit,
}

impl TDepth1 {
    pub fn new(c1: Circuit, v: Vec<bool>, c2: Circuit) -> Result<Self> {
        if c1.n != v.len() || c2.n != v.len() {
            return Err(Error::InvalidCircuit("part sizes disagree".into()));
        }
        if !c1.is_clifford() || !c2.is_clifford() {
            return Err(Error::InvalidCircuit("C1 and C2 must be Clifford".into()));
        }
        c1.validate()?;
        c2.validate()?;
        Ok(TDepth1 { c1, v, c2 })
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn k(&self) -> usize {
        self.v.iter().filter(|&&b| b).count()
    }

    pub fn to_circuit(&self) -> Circuit {
        let mut c = self.c1.clone();
        for (q, &b) in self.v.iter().enumerate() {
            if b {
                c.push(Gate::T(q));
            }
        }
        c.extend(&self.c2);
        c
    }

    pub fn v_string(&self) -> String {
        self.v.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn to_json(&self) -> String {
        let j = CircuitJson {
            n: self.n(),
            gates: gates_to_json(&self.to_circuit().gates),
            c1: Some(gates_to_json(&self.c1.gates)),
            v: Some(self.v_string()),
            c2: Some(gates_to_json(&self.c2.gates)),
        };
        serde_json::to_string_pretty(&j).expect("circuit serializes")
    }

    fn from_json_opt(text: &str) -> Result<Option<TDepth1>> {
        let j: CircuitJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidCircuit(e.to_string()))?;
        match (&j.c1, &j.v, &j.c2) {
            (Some(c1), Some(v), Some(c2)) => {
                if v.len() != j.n || !v.chars().all(|c| c == '0' || c == '1') {
                    return Err(Error::InvalidCircuit(format!("bad T mask {v:?}")));
                }
                let v = v.chars().map(|c| c == '1').collect();
                let c1 = Circuit::from_gates(j.n, gates_from_json(j.n, c1)?)?;
                let c2 = Circuit::from_gates(j.n, gates_from_json(j.n, c2)?)?;
                TDepth1::new(c1, v, c2).map(Some)
            }
            (None, None, None) => Ok(None),
            _ => Err(Error::InvalidCircuit(
                "c1, v and c2 must appear together".into(),
            )),
        }
    }

    /// Parses T-depth-one JSON; a plain circuit is accepted if it splits.
    pub fn from_json(text: &str) -> Result<TDepth1> {
        if let Some(t) = Self::from_json_opt(text)? {
            return Ok(t);
        }
        Circuit::from_json(text)?
            .split_tdepth1()
            .ok_or_else(|| Error::InvalidCircuit("circuit is not T-depth one".into()))
    }
}

/// A uniformly random word of `len` gates from {H, S, Sdg, X, Y, Z, CX, CZ, SWAP}.
pub fn random_clifford_word<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n);
    let kinds = if n >= 2 { 9 } else { 6 };
    for _ in 0..len {
        let a = rng.gen_range(0..n);
        let g = match rng.gen_range(0..kinds) {
            0 => Gate::H(a),
            1 => Gate::S(a),
            2 => Gate::Sdg(a),
            3 => Gate::X(a),
            4 => Gate::Y(a),
            5 => Gate::Z(a),
            k => {
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                match k {
                    6 => Gate::CX(a, b),
                    7 => Gate::CZ(a, b),
                    _ => Gate::Swap(a, b),
                }
            }
        };
        c.push(g);
    }
    c
}

/// Random Clifford circuit of `20·n²` gates.
pub fn random_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Circuit {
    random_clifford_word(n, 20 * n * n, rng)
}

/// Random T-depth-one circuit with `k` T gates on distinct random qubits.
pub fn random_tdepth1<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<TDepth1> {
    if k > n {
        return Err(Error::InvalidCircuit(format!("k = {k} exceeds n = {n}")));
    }
    let c1 = random_clifford(n, rng);
    let mut qubits: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        qubits.swap(i, j);
    }
    let mut v = vec![false; n];
    for &q in &qubits[..k] {
        v[q] = true;
    }
    let c2 = random_clifford(n, rng);
    TDepth1::new(c1, v, c2)
}
