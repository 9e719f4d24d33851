//! Learning a hidden Clifford unitary from Bell samples, sign-fixing Pauli
//! measurements and basis-input probes.

use rand::Rng;

use crate::bitmatrix::{independent_subset, BitMatrix};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::oracle::{InputBasis, Oracle};
use crate::pauli::{PauliWord, SignedPauli};
use crate::synthesis::{synthesize, Tableau};

/// Knobs for [`learn_clifford_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliffordConfig {
    /// Extra attempts of a pass whose Bell samples are rank deficient.
    pub max_retries: usize,
    /// Measurements per sign bit; the majority decides.
    pub sign_shots: u64,
}

impl Default for CliffordConfig {
    fn default() -> Self {
        CliffordConfig {
            max_retries: 3,
            sign_shots: 1,
        }
    }
}

/// Result of a Clifford learning run.
#[derive(Clone, Debug)]
pub struct CliffordRun {
    pub circuit: Circuit,
    pub tableau: Tableau,
    /// Copies used by the Z-basis and X-basis passes.
    pub pass_queries: [u64; 2],
    pub retries: usize,
    /// Copies spent on discarded rank-deficient attempts, included in
    /// `pass_queries`.
    pub retry_queries: u64,
}

/// Query count of one successful run without retries: `2n² + 10n + 4`.
pub fn clifford_query_budget(n: usize) -> u64 {
    let n = n as u64;
    2 * n * n + 10 * n + 4
}

fn measure_sign<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    input: &[bool],
    basis: InputBasis,
    p: &SignedPauli,
    shots: u64,
    rng: &mut R,
) -> Result<bool> {
    let plus = oracle.pauli_shots(input, basis, p, shots, rng)?;
    Ok(2 * plus < shots)
}

/// Stabilizer generators of `U|input⟩` (or `U H^{⊗n}|input⟩`) from `2n+1`
/// Bell measurements and one sign measurement per generator.
pub fn learn_stabilizer_group<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    input: &[bool],
    basis: InputBasis,
    sign_shots: u64,
    rng: &mut R,
) -> Result<Vec<SignedPauli>> {
    let n = oracle.num_qubits();
    let samples = oracle.bell_samples(input, basis, 2 * n + 1, rng)?;
    let words: Vec<PauliWord> = samples[1..].iter().map(|r| r.xor(&samples[0])).collect();
    let picked = independent_subset(&words);
    if picked.len() < n {
        return Err(Error::RankDeficient {
            rank: picked.len(),
            needed: n,
        });
    }
    let mut gens = Vec::with_capacity(n);
    for &i in &picked {
        let mut g = SignedPauli::new(words[i].clone(), 0);
        if measure_sign(oracle, input, basis, &g, sign_shots, rng)? {
            g.negate();
        }
        gens.push(g);
    }
    Ok(gens)
}

/// `B[i][j] = 1` iff generator `i` of the all-zero input flips sign on `e_j`.
pub fn probe_signs<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    gens: &[SignedPauli],
    basis: InputBasis,
    sign_shots: u64,
    rng: &mut R,
) -> Result<BitMatrix> {
    let n = oracle.num_qubits();
    let mut b = BitMatrix::zeros(gens.len(), n);
    for j in 0..n {
        let mut e = vec![false; n];
        e[j] = true;
        for (i, g) in gens.iter().enumerate() {
            b.set(i, j, measure_sign(oracle, &e, basis, g, sign_shots, rng)?);
        }
    }
    Ok(b)
}

/// Images `∏_i g_i^{d_{j,i}}` with `d = B^{−1}`.
pub fn solve_images(gens: &[SignedPauli], b: &BitMatrix) -> Result<Vec<SignedPauli>> {
    let d = b.invert()?;
    let n = gens.len();
    Ok((0..n)
        .map(|j| {
            let mut acc = SignedPauli::identity(gens[0].num_qubits());
            for (i, g) in gens.iter().enumerate() {
                if d.get(j, i) {
                    acc.mul_assign(g);
                }
            }
            acc
        })
        .collect())
}

fn pass<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    basis: InputBasis,
    cfg: &CliffordConfig,
    retries: &mut usize,
    retry_queries: &mut u64,
    rng: &mut R,
) -> Result<Vec<SignedPauli>> {
    let n = oracle.num_qubits();
    let zero = vec![false; n];
    let gens = loop {
        let before = oracle.queries();
        match learn_stabilizer_group(oracle, &zero, basis, cfg.sign_shots, rng) {
            Ok(g) => break g,
            Err(Error::RankDeficient { .. }) if *retries < cfg.max_retries => {
                *retries += 1;
                *retry_queries += oracle.queries() - before;
            }
            Err(e) => return Err(e),
        }
    };
    let b = probe_signs(oracle, &gens, basis, cfg.sign_shots, rng)?;
    solve_images(&gens, &b).map_err(|_| {
        Error::InconsistentTarget("probe matrix is singular".into())
    })
}

/// Learns the target's tableau and a circuit realizing it.
pub fn learn_clifford_with<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    cfg: &CliffordConfig,
    rng: &mut R,
) -> Result<CliffordRun> {
    let start = oracle.queries();
    let mut retries = 0;
    let mut retry_queries = 0;
    let z_images = pass(oracle, InputBasis::Computational, cfg, &mut retries, &mut retry_queries, rng)?;
    let mid = oracle.queries();
    let x_images = pass(oracle, InputBasis::Hadamard, cfg, &mut retries, &mut retry_queries, rng)?;
    let end = oracle.queries();
    let tableau = Tableau::new(x_images, z_images)
        .map_err(|e| Error::InconsistentTarget(e.to_string()))?;
    let circuit = synthesize(&tableau)?;
    Ok(CliffordRun {
        circuit,
        tableau,
        pass_queries: [mid - start, end - mid],
        retries,
        retry_queries,
    })
}

/// Learns a circuit for the hidden Clifford with default settings.
pub fn learn_clifford<R: Rng + ?Sized>(oracle: &mut Oracle, rng: &mut R) -> Result<Circuit> {
    Ok(learn_clifford_with(oracle, &CliffordConfig::default(), rng)?.circuit)
}
