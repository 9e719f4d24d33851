//! Query access to a hidden target unitary: prepare output states on basis
//! inputs, then Bell-measure pairs of copies or Pauli-measure single copies.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::circuit::{Circuit, Gate, TDepth1};
use crate::dense::{
    bell_distribution, pauli_expectation, run_circuit, word_from_index, StateVector,
    MAX_BELL_QUBITS, MAX_STATE_QUBITS,
};
use crate::error::{Error, Result};
use crate::expanded::ExpandedFrame;
use crate::frame::PauliFrame;
use crate::pauli::{PauliWord, SignedPauli};

/// The hidden unitary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSpec {
    Clifford(Circuit),
    TDepth1(TDepth1),
    /// Any circuit; T gates are tracked one at a time.
    General(Circuit),
}

impl TargetSpec {
    pub fn clifford(c: Circuit) -> Result<Self> {
        if !c.is_clifford() {
            return Err(Error::InvalidCircuit("Clifford target contains T".into()));
        }
        Ok(TargetSpec::Clifford(c))
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            TargetSpec::Clifford(c) | TargetSpec::General(c) => c.n,
            TargetSpec::TDepth1(t) => t.n(),
        }
    }

    /// The full gate list.
    pub fn circuit(&self) -> Circuit {
        match self {
            TargetSpec::Clifford(c) | TargetSpec::General(c) => c.clone(),
            TargetSpec::TDepth1(t) => t.to_circuit(),
        }
    }
}

/// How prepared copies are simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Closed-form sampling from (expanded) stabilizer frames.
    Frame,
    /// Statevector simulation, limited to small `n`.
    Dense,
}

/// Basis in which the input bit string is encoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InputBasis {
    /// `|v⟩`.
    Computational,
    /// `H^{⊗n}|v⟩`.
    Hadamard,
}

/// Number of prepared copies, i.e. queries to the target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryLedger {
    copies: u64,
}

impl QueryLedger {
    pub fn copies_prepared(&self) -> u64 {
        self.copies
    }
}

/// One prepared copy of `U|input⟩`; consumed by a measurement.
#[derive(Debug)]
pub struct StateCopy {
    session: u64,
    key: (Vec<bool>, InputBasis),
}

enum Prepared {
    Frame { e: ExpandedFrame, shift: PauliWord },
    Dense { psi: StateVector, bell_cdf: Option<Vec<f64>> },
}

static NEXT_SESSION: AtomicU64 = AtomicU64::new(0);

/// A target together with its query ledger.
pub struct Oracle {
    target: TargetSpec,
    backend: Backend,
    ledger: QueryLedger,
    budget: Option<u64>,
    session: u64,
    cache: HashMap<(Vec<bool>, InputBasis), Prepared>,
}

impl Oracle {
    pub fn new(target: TargetSpec, backend: Backend) -> Result<Self> {
        if let TargetSpec::Clifford(c) = &target {
            if !c.is_clifford() {
                return Err(Error::InvalidCircuit("Clifford target contains T".into()));
            }
        }
        let mut o = Oracle {
            target,
            backend: Backend::Frame,
            ledger: QueryLedger::default(),
            budget: None,
            session: NEXT_SESSION.fetch_add(1, Ordering::Relaxed),
            cache: HashMap::new(),
        };
        o.set_backend(backend)?;
        Ok(o)
    }

    pub fn set_backend(&mut self, backend: Backend) -> Result<()> {
        let n = self.num_qubits();
        if backend == Backend::Dense && n > MAX_BELL_QUBITS {
            return Err(Error::TooLarge {
                n,
                max: MAX_BELL_QUBITS,
            });
        }
        self.backend = backend;
        self.cache.clear();
        Ok(())
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Caps the number of copies; further preparations fail.
    pub fn set_budget(&mut self, limit: Option<u64>) {
        self.budget = limit;
    }

    pub fn num_qubits(&self) -> usize {
        self.target.num_qubits()
    }

    pub fn ledger(&self) -> QueryLedger {
        self.ledger
    }

    pub fn queries(&self) -> u64 {
        self.ledger.copies
    }

    fn charge(&mut self, copies: u64) -> Result<()> {
        let used = self.ledger.copies + copies;
        if let Some(limit) = self.budget {
            if used > limit {
                return Err(Error::BudgetExceeded { used, limit });
            }
        }
        self.ledger.copies = used;
        Ok(())
    }

    fn check_input(&self, input: &[bool]) -> Result<()> {
        if input.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                got: input.len(),
            });
        }
        Ok(())
    }

    pub fn prepare(&mut self, input: &[bool]) -> Result<StateCopy> {
        self.prepare_in(input, InputBasis::Computational)
    }

    /// Prepares one copy of `U|v⟩` or `U H^{⊗n}|v⟩`.
    pub fn prepare_in(&mut self, input: &[bool], basis: InputBasis) -> Result<StateCopy> {
        self.check_input(input)?;
        self.charge(1)?;
        Ok(StateCopy {
            session: self.session,
            key: (input.to_vec(), basis),
        })
    }

    fn prefixed(&self, basis: InputBasis) -> (Circuit, Option<TDepth1>) {
        let n = self.num_qubits();
        let mut pre = Circuit::new(n);
        if basis == InputBasis::Hadamard {
            for q in 0..n {
                pre.push(Gate::H(q));
            }
        }
        match &self.target {
            TargetSpec::Clifford(c) | TargetSpec::General(c) => {
                pre.extend(c);
                (pre, None)
            }
            TargetSpec::TDepth1(t) => {
                pre.extend(&t.c1);
                let t2 = TDepth1 {
                    c1: pre.clone(),
                    v: t.v.clone(),
                    c2: t.c2.clone(),
                };
                (t2.to_circuit(), Some(t2))
            }
        }
    }

    fn prepared(&mut self, key: &(Vec<bool>, InputBasis)) -> Result<&Prepared> {
        if !self.cache.contains_key(key) {
            let (input, basis) = key;
            let (full, td) = self.prefixed(*basis);
            let frame = match (self.backend, td) {
                (Backend::Dense, _) => None,
                (Backend::Frame, None) if full.is_clifford() => {
                    Some(ExpandedFrame::from_frame(&PauliFrame::of_circuit(&full, input)?))
                }
                (Backend::Frame, None) => {
                    let mut e = ExpandedFrame::from_frame(&PauliFrame::basis_state(input));
                    match e.apply_circuit(&full) {
                        Ok(()) => Some(e),
                        Err(Error::NotRepresentable(_)) => None,
                        Err(err) => return Err(err),
                    }
                }
                (Backend::Frame, Some(t)) => match t.expanded_frame(input) {
                    Ok(e) => Some(e),
                    Err(Error::NotRepresentable(_)) => None,
                    Err(e) => return Err(e),
                },
            };
            let prep = match frame {
                Some(e) => {
                    let shift = e.bell_shift();
                    Prepared::Frame { e, shift }
                }
                None => {
                    let n = self.num_qubits();
                    if n > MAX_STATE_QUBITS {
                        return Err(Error::TooLarge {
                            n,
                            max: MAX_STATE_QUBITS,
                        });
                    }
                    Prepared::Dense {
                        psi: run_circuit(&full, input)?,
                        bell_cdf: None,
                    }
                }
            };
            self.cache.insert(key.clone(), prep);
        }
        Ok(&self.cache[key])
    }

    fn dense_cdf(&mut self, key: &(Vec<bool>, InputBasis)) -> Result<&[f64]> {
        self.prepared(key)?;
        let Some(Prepared::Dense { psi, bell_cdf }) = self.cache.get_mut(key) else {
            unreachable!("dense entry");
        };
        if bell_cdf.is_none() {
            let mut acc = 0.0;
            let cdf = bell_distribution(psi, psi)?
                .into_iter()
                .map(|p| {
                    acc += p;
                    acc
                })
                .collect();
            *bell_cdf = Some(cdf);
        }
        Ok(bell_cdf.as_deref().expect("filled above"))
    }

    fn own(&self, a: &StateCopy) -> Result<()> {
        if a.session != self.session {
            return Err(Error::Oracle("copy prepared by another oracle".into()));
        }
        Ok(())
    }

    fn sample_bell_key<R: Rng + ?Sized>(
        &mut self,
        key: &(Vec<bool>, InputBasis),
        rng: &mut R,
    ) -> Result<PauliWord> {
        let n = self.num_qubits();
        if let Prepared::Frame { e, shift } = self.prepared(key)? {
            return Ok(e.sample_bell(rng).xor(shift));
        }
        let cdf = self.dense_cdf(key)?;
        let u: f64 = rng.gen::<f64>() * cdf[cdf.len() - 1];
        let r = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        Ok(word_from_index(r, n))
    }

    /// Joint Bell measurement on two copies of the same state `ψ⊗ψ`.
    pub fn bell_measure<R: Rng + ?Sized>(
        &mut self,
        a: StateCopy,
        b: StateCopy,
        rng: &mut R,
    ) -> Result<PauliWord> {
        self.own(&a)?;
        self.own(&b)?;
        if a.key != b.key {
            return Err(Error::Oracle("Bell measurement on different inputs".into()));
        }
        self.sample_bell_key(&a.key, rng)
    }

    /// Prepares `2·count` copies and Bell-measures them in pairs.
    pub fn bell_samples<R: Rng + ?Sized>(
        &mut self,
        input: &[bool],
        basis: InputBasis,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<PauliWord>> {
        self.check_input(input)?;
        self.charge(2 * count as u64)?;
        let key = (input.to_vec(), basis);
        (0..count).map(|_| self.sample_bell_key(&key, rng)).collect()
    }

    fn expectation(&mut self, key: &(Vec<bool>, InputBasis), p: &SignedPauli) -> Result<f64> {
        if !p.is_hermitian() || p.num_qubits() != self.num_qubits() {
            return Err(Error::Oracle(format!("cannot measure {p}")));
        }
        Ok(match self.prepared(key)? {
            Prepared::Frame { e, .. } => e.pseudo_expectation(p),
            Prepared::Dense { psi, .. } => pauli_expectation(psi, p),
        })
    }

    /// Measures a Hermitian Pauli on one copy; returns `±1`.
    pub fn pauli_measure<R: Rng + ?Sized>(
        &mut self,
        a: StateCopy,
        p: &SignedPauli,
        rng: &mut R,
    ) -> Result<i8> {
        self.own(&a)?;
        let e = self.expectation(&a.key, p)?;
        Ok(if rng.gen::<f64>() < (1.0 + e) / 2.0 {
            1
        } else {
            -1
        })
    }

    /// Prepares `shots` copies, measures `p` on each and returns the number
    /// of `+1` outcomes.
    pub fn pauli_shots<R: Rng + ?Sized>(
        &mut self,
        input: &[bool],
        basis: InputBasis,
        p: &SignedPauli,
        shots: u64,
        rng: &mut R,
    ) -> Result<u64> {
        self.check_input(input)?;
        self.charge(shots)?;
        let e = self.expectation(&(input.to_vec(), basis), p)?;
        let plus = ((1.0 + e) / 2.0).clamp(0.0, 1.0);
        let dist = Binomial::new(shots, plus).map_err(|e| Error::Oracle(e.to_string()))?;
        Ok(dist.sample(rng))
    }

    /// Exact Bell distribution on `ψ⊗ψ` indexed by `x | z << n`, for testing
    /// and verification. Does not touch the ledger.
    pub fn exact_bell_distribution(&mut self, input: &[bool], basis: InputBasis) -> Result<Vec<f64>> {
        self.check_input(input)?;
        let n = self.num_qubits();
        if n > MAX_BELL_QUBITS {
            return Err(Error::TooLarge {
                n,
                max: MAX_BELL_QUBITS,
            });
        }
        let key = (input.to_vec(), basis);
        Ok(match self.prepared(&key)? {
            Prepared::Frame { e, shift } => {
                let mut table = vec![0.0; 1 << (2 * n)];
                for (w, p) in e.bell_support()? {
                    table[crate::dense::index_of_word(&w.xor(shift))] += p;
                }
                table
            }
            Prepared::Dense { psi, .. } => bell_distribution(psi, psi)?,
        })
    }

    /// Exact probability of `+1` when measuring `p`. Does not touch the ledger.
    pub fn exact_plus_probability(
        &mut self,
        input: &[bool],
        basis: InputBasis,
        p: &SignedPauli,
    ) -> Result<f64> {
        self.check_input(input)?;
        Ok((1.0 + self.expectation(&(input.to_vec(), basis), p)?) / 2.0)
    }

    /// True if the frame backend fell back to dense simulation for this input.
    pub fn uses_dense_fallback(&mut self, input: &[bool], basis: InputBasis) -> Result<bool> {
        self.check_input(input)?;
        let backend = self.backend;
        Ok(backend == Backend::Frame
            && matches!(
                self.prepared(&(input.to_vec(), basis))?,
                Prepared::Dense { .. }
            ))
    }
}
