//! Learning a hidden T-depth-one circuit on computational-basis inputs from
//! Bell samples and Pauli statistics of its output states.

use rand::Rng;

use crate::bitmatrix::{independent_subset, symplectic_gram_schmidt, BitMatrix, SpanSolver, SymplecticBasis};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::oracle::{InputBasis, Oracle};
use crate::pauli::{PauliWord, SignedPauli};
use crate::synthesis::{
    assemble_tdepth1, complete_tableau, linear_reversible, synthesize, PartialTableau, Tableau,
};

/// Smallest gap between the `Pr(+1)` values the classifier separates.
pub const DELTA: f64 = (std::f64::consts::SQRT_2 - 1.0) / 4.0;

/// `Pr(+1)` of a signed primary stabilizer.
pub const PRIMARY_PLUS: f64 = (2.0 + std::f64::consts::SQRT_2) / 4.0;

/// What a measured `Pr(+1)` says about an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorLabel {
    NonMember,
    IsotropicPlus,
    IsotropicMinus,
    PrimaryPlus,
    PrimaryMinus,
    /// Product of `m` primaries from distinct pairs.
    ProductM(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorClassification {
    pub label: OperatorLabel,
    pub empirical_mean: f64,
    pub shots: u64,
    /// Set when the mean matched no expected value.
    pub ambiguous: bool,
}

/// Labels an empirical `Pr(+1)`.
pub fn classify_mean(r: f64, shots: u64) -> OperatorClassification {
    let half = DELTA / 2.0;
    let (label, ambiguous) = if (r - PRIMARY_PLUS).abs() < half {
        (OperatorLabel::PrimaryPlus, false)
    } else if (r - (1.0 - PRIMARY_PLUS)).abs() < half {
        (OperatorLabel::PrimaryMinus, false)
    } else if r >= 1.0 - half {
        (OperatorLabel::IsotropicPlus, false)
    } else if r <= half {
        (OperatorLabel::IsotropicMinus, false)
    } else if (r - 0.5).abs() < half {
        (OperatorLabel::NonMember, false)
    } else if 2.0 * r - 1.0 > 0.0 {
        let m = (-2.0 * (2.0 * r - 1.0).log2()).round().max(0.0) as u32;
        (OperatorLabel::ProductM(m), false)
    } else {
        (OperatorLabel::NonMember, true)
    };
    OperatorClassification {
        label,
        empirical_mean: r,
        shots,
        ambiguous,
    }
}

/// Measures `p` on `shots` fresh copies of `U|input⟩` and labels the mean.
pub fn classify_operator<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    input: &[bool],
    p: &SignedPauli,
    shots: u64,
    rng: &mut R,
) -> Result<OperatorClassification> {
    let plus = oracle.pauli_shots(input, InputBasis::Computational, p, shots, rng)?;
    Ok(classify_mean(plus as f64 / shots.max(1) as f64, shots))
}

/// `count` Bell outcomes on `ψ⊗ψ`; returns the last `count − 1` XORed with
/// the first.
pub fn harvest_bell<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    input: &[bool],
    count: usize,
    rng: &mut R,
) -> Result<Vec<PauliWord>> {
    let samples = oracle.bell_samples(input, InputBasis::Computational, count, rng)?;
    Ok(samples.iter().skip(1).map(|r| r.xor(&samples[0])).collect())
}

/// Splits harvested words into `n − k` isotropic candidates and `k`
/// candidate pairs, where `n + k` is the rank of the words.
pub fn split_generators(words: &[PauliWord], n: usize) -> Result<SymplecticBasis> {
    let picked: Vec<PauliWord> = independent_subset(words)
        .into_iter()
        .map(|i| words[i].clone())
        .collect();
    if picked.len() < n {
        return Err(Error::RankDeficient {
            rank: picked.len(),
            needed: n,
        });
    }
    let k = picked.len() - n;
    let split = symplectic_gram_schmidt(&picked)?;
    if split.pairs.len() != k {
        return Err(Error::RankDeficient {
            rank: picked.len(),
            needed: n + split.pairs.len(),
        });
    }
    Ok(split)
}

/// Outcome of [`find_primaries`].
#[derive(Clone, Debug)]
pub struct PrimarySearch {
    /// Signed primaries `(g, h)` with `Pr(+1) = (2+√2)/4` each.
    pub pairs: Vec<(SignedPauli, SignedPauli)>,
    /// Number of operators measured.
    pub classified: usize,
    /// True if products outside the `3^k` set were needed.
    pub used_fallback: bool,
}

struct Search<'a> {
    iso: &'a [SignedPauli],
    found: Vec<(SignedPauli, Option<SignedPauli>)>,
    span: SpanSolver,
}

impl Search<'_> {
    fn found_count(&self) -> usize {
        self.found
            .iter()
            .map(|(_, h)| 1 + h.is_some() as usize)
            .sum()
    }

    fn rebuild(&mut self) -> Result<()> {
        let n = self.span.num_qubits();
        let mut basis: Vec<PauliWord> = self.iso.iter().map(|p| p.word.clone()).collect();
        for (g, h) in &self.found {
            basis.push(g.word.clone());
            if let Some(h) = h {
                basis.push(h.word.clone());
            }
        }
        self.span = SpanSolver::new(n, &basis)
            .map_err(|_| Error::SearchFailed("primaries are dependent".into()))?;
        Ok(())
    }

    /// Slot a candidate would fill: `Some(None)` for a new pair,
    /// `Some(Some(i))` for the partner of pair `i`, `None` if implausible.
    fn slot(&self, w: &PauliWord) -> Option<Option<usize>> {
        if w.is_identity() || self.span.contains(w) {
            return None;
        }
        let hits: Vec<usize> = self
            .found
            .iter()
            .enumerate()
            .filter(|(_, (g, h))| {
                g.word.symplectic_product(w) || h.as_ref().is_some_and(|h| h.word.symplectic_product(w))
            })
            .map(|(i, _)| i)
            .collect();
        match hits.as_slice() {
            [] => Some(None),
            [i] if self.found[*i].1.is_none() => Some(Some(*i)),
            _ => None,
        }
    }
}

/// Searches products of candidate-pair elements for `2k` primary
/// stabilizers, first over `{I, a, b}` per pair and then over products
/// involving `ab`.
pub fn find_primaries<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    input: &[bool],
    iso: &[SignedPauli],
    pairs: &[(PauliWord, PauliWord)],
    shots: u64,
    rng: &mut R,
) -> Result<PrimarySearch> {
    let n = oracle.num_qubits();
    let k = pairs.len();
    let iso_words: Vec<PauliWord> = iso.iter().map(|p| p.word.clone()).collect();
    let mut search = Search {
        iso,
        found: Vec::new(),
        span: SpanSolver::new(n, &iso_words)?,
    };
    let mut classified = 0;
    let mut used_fallback = false;
    if k == 0 {
        return Ok(PrimarySearch {
            pairs: Vec::new(),
            classified,
            used_fallback,
        });
    }
    for radix in [3u32, 4] {
        let total = (radix as u64).pow(k as u32);
        for code in 1..total {
            let mut digits = Vec::with_capacity(k);
            let mut c = code;
            for _ in 0..k {
                digits.push((c % radix as u64) as u8);
                c /= radix as u64;
            }
            if radix == 4 && !digits.contains(&3) {
                continue;
            }
            let mut word = PauliWord::identity(n);
            for (d, (a, b)) in digits.iter().zip(pairs) {
                if d & 1 == 1 {
                    word.xor_assign(a);
                }
                if d & 2 == 2 {
                    word.xor_assign(b);
                }
            }
            let Some(slot) = search.slot(&word) else {
                continue;
            };
            used_fallback |= radix == 4;
            let p = SignedPauli::new(word, 0);
            classified += 1;
            let label = classify_operator(oracle, input, &p, shots, rng)?.label;
            let p = match label {
                OperatorLabel::PrimaryPlus => p,
                OperatorLabel::PrimaryMinus => p.neg(),
                _ => continue,
            };
            match slot {
                None => search.found.push((p, None)),
                Some(i) => search.found[i].1 = Some(p),
            }
            search.rebuild()?;
            if search.found_count() == 2 * k {
                let pairs = search
                    .found
                    .into_iter()
                    .map(|(g, h)| (g, h.expect("all partners found")))
                    .collect();
                return Ok(PrimarySearch {
                    pairs,
                    classified,
                    used_fallback,
                });
            }
        }
    }
    Err(Error::SearchFailed(format!(
        "found {} of {} primaries",
        search.found_count(),
        2 * k
    )))
}

/// Knobs for [`learn_tdepth1_with`]; `None` selects the defaults `3200n`
/// and `16n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TDepth1Config {
    pub classify_shots: Option<u64>,
    pub probe_shots: Option<u64>,
    /// Extra harvests after an isotropic candidate gives mixed outcomes.
    pub max_retries: usize,
}

impl Default for TDepth1Config {
    fn default() -> Self {
        TDepth1Config {
            classify_shots: None,
            probe_shots: None,
            max_retries: 3,
        }
    }
}

impl TDepth1Config {
    fn shots(&self, n: usize) -> (u64, u64) {
        let n = n as u64;
        (
            self.classify_shots.unwrap_or(3200 * n),
            self.probe_shots.unwrap_or(16 * n),
        )
    }
}

/// Result of a T-depth-one learning run.
#[derive(Clone, Debug)]
pub struct TDepth1Run {
    pub circuit: Circuit,
    /// Number of primary pairs found.
    pub k_hat: usize,
    /// The Clifford `C` of the hypothesis.
    pub clifford: Circuit,
    pub s: Vec<u8>,
    /// Sign-flip pattern `F`: rows are wires, columns are input bits.
    pub pattern: BitMatrix,
    pub classified: usize,
    pub used_fallback: bool,
    pub retries: usize,
    /// Copies spent on discarded harvests, included in `phase_queries[0]`.
    pub retry_queries: u64,
    /// Copies used by harvesting and isotropic signs, by the primary search,
    /// and by the input probes.
    pub phase_queries: [u64; 3],
    pub queries: u64,
}

/// Worst-case copies used by one attempt of [`learn_tdepth1`] for `k̂ = k`
/// with default shots:
/// `2(8n+1) + 16n(n−k) + 3200n(4^k−1) + n(n−k) + 2nk·16n`.
pub fn tdepth1_query_budget(n: usize, k: usize) -> u64 {
    let (n, k) = (n as u64, k as u64);
    2 * (8 * n + 1)
        + 16 * n * (n - k)
        + 3200 * n * (4u64.pow(k as u32) - 1)
        + n * (n - k)
        + 2 * n * k * 16 * n
}

fn majority_flip<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    input: &[bool],
    p: &SignedPauli,
    shots: u64,
    rng: &mut R,
) -> Result<bool> {
    let plus = oracle.pauli_shots(input, InputBasis::Computational, p, shots, rng)?;
    Ok(2 * plus < shots)
}

/// Signs of the isotropic candidates, or `None` if one of them gives mixed
/// outcomes and so is not isotropic.
fn isotropic_signs<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    input: &[bool],
    words: &[PauliWord],
    shots: u64,
    rng: &mut R,
) -> Result<Option<Vec<SignedPauli>>> {
    let mut iso = Vec::with_capacity(words.len());
    for w in words {
        let p = SignedPauli::new(w.clone(), 0);
        match oracle.pauli_shots(input, InputBasis::Computational, &p, shots, rng)? {
            0 => iso.push(p.neg()),
            plus if plus == shots => iso.push(p),
            _ => return Ok(None),
        }
    }
    Ok(Some(iso))
}

fn bits_word(bits: &[bool]) -> PauliWord {
    PauliWord::from_bits(&vec![false; bits.len()], bits)
}

/// Learns a T-depth-one hypothesis agreeing with the target on every
/// computational-basis input.
pub fn learn_tdepth1_with<R: Rng + ?Sized>(
    oracle: &mut Oracle,
    cfg: &TDepth1Config,
    rng: &mut R,
) -> Result<TDepth1Run> {
    let n = oracle.num_qubits();
    let start = oracle.queries();
    let (classify_shots, probe_shots) = cfg.shots(n);
    let zero = vec![false; n];

    let mut retries = 0;
    let mut retry_queries = 0;
    let (split, iso) = loop {
        let before = oracle.queries();
        let words = harvest_bell(oracle, &zero, 8 * n + 1, rng)?;
        let attempt = split_generators(&words, n).and_then(|split| {
            match isotropic_signs(oracle, &zero, &split.isotropic, probe_shots, rng)? {
                Some(iso) => Ok((split, iso)),
                None => Err(Error::RankDeficient {
                    rank: n + split.pairs.len(),
                    needed: n + split.pairs.len() + 1,
                }),
            }
        });
        match attempt {
            Ok(found) => break found,
            Err(Error::RankDeficient { .. }) if retries < cfg.max_retries => {
                retries += 1;
                retry_queries += oracle.queries() - before;
            }
            Err(e) => return Err(e),
        }
    };
    let k = split.pairs.len();
    let after_harvest = oracle.queries();
    let search = find_primaries(oracle, &zero, &iso, &split.pairs, classify_shots, rng)?;
    let mut pairs = search.pairs;
    let after_search = oracle.queries();

    let mut pattern = BitMatrix::zeros(n, n);
    let mut h_flips = vec![vec![false; n]; k];
    for j in 0..n {
        let mut e = zero.clone();
        e[j] = true;
        for (i, p) in iso.iter().enumerate() {
            pattern.set(i, j, majority_flip(oracle, &e, p, 1, rng)?);
        }
        for (i, (g, h)) in pairs.iter().enumerate() {
            pattern.set(n - k + i, j, majority_flip(oracle, &e, g, probe_shots, rng)?);
            h_flips[i][j] = majority_flip(oracle, &e, h, probe_shots, rng)?;
        }
    }
    let iso_rows: Vec<PauliWord> = (0..n - k).map(|i| bits_word(&pattern.row(i))).collect();
    let rows = SpanSolver::new(n, &iso_rows)
        .map_err(|_| Error::InconsistentTarget("isotropic flip patterns are dependent".into()))?;
    for (i, (_, h)) in pairs.iter_mut().enumerate() {
        let d: Vec<bool> = (0..n)
            .map(|j| pattern.get(n - k + i, j) ^ h_flips[i][j])
            .collect();
        let idx = rows.decompose(&bits_word(&d)).ok_or_else(|| {
            Error::InconsistentTarget("partner flips differ outside the isotropic span".into())
        })?;
        for t in idx {
            h.mul_assign(&iso[t]);
        }
    }

    let pair_z: Vec<SignedPauli> = pairs
        .iter()
        .map(|(g, h)| SignedPauli::new(g.mul(h).word, 0))
        .collect();
    let x_perm: Vec<SignedPauli> = pairs
        .iter()
        .map(|(g, _)| g.clone())
        .chain(iso.iter().cloned())
        .collect();
    let permuted = complete_tableau(&PartialTableau::new(n, x_perm, pair_z)?)
        .map_err(|e| Error::InconsistentTarget(e.to_string()))?;
    let unpermute = |v: &[SignedPauli]| -> Vec<SignedPauli> {
        v[k..].iter().chain(&v[..k]).cloned().collect()
    };
    let tableau = Tableau::new(
        unpermute(&permuted.x_images),
        unpermute(&permuted.z_images),
    )?;
    let clifford = synthesize(&tableau)?;
    let mut s = vec![0u8; n];
    for (i, (g, h)) in pairs.iter().enumerate() {
        s[n - k + i] = if g.mul(h).phase() == 1 { 0 } else { 3 };
    }
    let input_layer = linear_reversible(&pattern)
        .map_err(|_| Error::InconsistentTarget("flip pattern is singular".into()))?;
    let mut circuit = input_layer;
    circuit.extend(&assemble_tdepth1(&clifford, &s, k)?);
    Ok(TDepth1Run {
        circuit,
        k_hat: k,
        clifford,
        s,
        pattern,
        classified: search.classified,
        used_fallback: search.used_fallback,
        retries,
        retry_queries,
        phase_queries: [
            after_harvest - start,
            after_search - after_harvest,
            oracle.queries() - after_search,
        ],
        queries: oracle.queries() - start,
    })
}

/// Learns a T-depth-one hypothesis with default settings.
pub fn learn_tdepth1<R: Rng + ?Sized>(oracle: &mut Oracle, rng: &mut R) -> Result<Circuit> {
    Ok(learn_tdepth1_with(oracle, &TDepth1Config::default(), rng)?.circuit)
}
