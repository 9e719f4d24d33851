//! The `gen-target`, `learn`, `verify` and `dist` subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stablearn::circuit::{random_clifford, random_tdepth1};
use stablearn::dense::{
    basis_fidelities, bell_distribution, common_basis_phase, compare_unitaries_up_to_phase,
    conjugate_state, pauli_expectation, reconstruct_unitary, run_circuit, unitary_phase_distance,
    word_from_index, MAX_BELL_QUBITS, MAX_VERIFY_QUBITS,
};
use stablearn::{
    CliffordConfig, Error, ExpandedFrame, PauliFrame, SignedPauli, TDepth1Config,
};

use crate::args::{DistArgs, DistWhat, GenTargetArgs, Kind, LearnArgs, VerifyArgs, VerifyMode};
use crate::learn::{learn_target, LearnSettings, Target};
use crate::CliError;

/// Largest qubit count for `verify --mode unitary`.
pub const MAX_UNITARY_VERIFY_QUBITS: usize = 3;

/// Entries below this are left out of distribution dumps.
const DUMP_FLOOR: f64 = 1e-14;

/// Largest deviation accepted by `dist --check-dense`.
pub const DENSE_CHECK_TOL: f64 = 1e-10;

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn text(bytes: &[u8]) -> Result<&str, CliError> {
    std::str::from_utf8(bytes).map_err(|e| CliError::Usage(format!("not UTF-8: {e}")))
}

pub fn gen_target(a: &GenTargetArgs) -> Result<(), CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    if a.k > a.n {
        return Err(CliError::Usage(format!("k = {} exceeds n = {}", a.k, a.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let json = match a.kind {
        Kind::Clifford => {
            if a.k != 0 {
                return Err(CliError::Usage("a Clifford target has k = 0".into()));
            }
            random_clifford(a.n, &mut rng).to_json()
        }
        Kind::Tdepth1 => random_tdepth1(a.n, a.k, &mut rng)
            .map_err(|e| CliError::Usage(e.to_string()))?
            .to_json(),
    };
    write_or_print(a.out.as_deref(), &json)
}

pub fn learn(a: &LearnArgs) -> Result<(), CliError> {
    let bytes = read(&a.target)?;
    let target = Target::parse(text(&bytes)?)?;
    let settings = LearnSettings {
        algo: a.algo,
        backend: a.backend.into(),
        seed: a.seed,
        tol: a.tol,
        clifford: CliffordConfig::default(),
        tdepth1: TDepth1Config::default(),
        timing: true,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (hyp, report) = learn_target(&target, &bytes, &settings, &mut rng)?;
    report.validate().map_err(CliError::Failure)?;
    if let Some(h) = &hyp {
        write_or_print(a.out.as_deref(), &h.to_json())?;
    }
    match &a.report {
        Some(p) => write_or_print(Some(p), &report.to_json())?,
        None => eprintln!("{}", report.to_json()),
    }
    if report.success {
        Ok(())
    } else {
        Err(CliError::Failure(
            report.error.unwrap_or_else(|| "learning failed".into()),
        ))
    }
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let target = Target::parse(text(&read(&a.target)?)?)?.circuit();
    let hyp = Target::parse(text(&read(&a.hypothesis)?)?)?.circuit();
    if target.n != hyp.n {
        return Err(CliError::Usage(format!(
            "target has {} qubits, hypothesis has {}",
            target.n, hyp.n
        )));
    }
    let n = target.n;
    let (pass, line) = match a.mode {
        VerifyMode::Basis => {
            if n > MAX_VERIFY_QUBITS {
                return Err(CliError::Usage(format!(
                    "basis mode needs n <= {MAX_VERIFY_QUBITS}"
                )));
            }
            let fids = basis_fidelities(&target, &hyp).map_err(usage)?;
            let min = fids.iter().copied().fold(1.0, f64::min);
            let common = common_basis_phase(&target, &hyp, a.tol).map_err(usage)?;
            let bad: Vec<usize> = (0..fids.len()).filter(|&v| fids[v] < 1.0 - a.tol).collect();
            (
                bad.is_empty(),
                serde_json::json!({
                    "mode": "basis",
                    "n": n,
                    "pass": bad.is_empty(),
                    "min_fidelity": min,
                    "failing_inputs": bad,
                    "common_phase": common,
                }),
            )
        }
        VerifyMode::Unitary => {
            if n > MAX_UNITARY_VERIFY_QUBITS {
                return Err(CliError::Usage(format!(
                    "unitary mode needs n <= {MAX_UNITARY_VERIFY_QUBITS}"
                )));
            }
            let u = reconstruct_unitary(&target).map_err(usage)?;
            let w = reconstruct_unitary(&hyp).map_err(usage)?;
            let pass = compare_unitaries_up_to_phase(&u, &w, a.tol);
            (
                pass,
                serde_json::json!({
                    "mode": "unitary",
                    "n": n,
                    "pass": pass,
                    "phase_distance": unitary_phase_distance(&u, &w),
                }),
            )
        }
    };
    println!("{line}");
    if pass {
        Ok(())
    } else {
        Err(CliError::Failure("hypothesis differs from target".into()))
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_input(s: Option<&str>, n: usize) -> Result<Vec<bool>, CliError> {
    let Some(s) = s else {
        return Ok(vec![false; n]);
    };
    if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(CliError::Usage(format!("input must be {n} bits of 0/1")));
    }
    Ok(s.chars().map(|c| c == '1').collect())
}

/// Expanded frame of the target on `input`, or `None` when the state is
/// outside the frame form.
fn frame_of(target: &Target, input: &[bool]) -> Result<Option<ExpandedFrame>, CliError> {
    let built = match target {
        Target::TDepth1(t) => t.expanded_frame(input),
        other => {
            let mut e = ExpandedFrame::from_frame(&PauliFrame::basis_state(input));
            e.apply_circuit(&other.circuit()).map(|_| e)
        }
    };
    match built {
        Ok(e) => Ok(Some(e)),
        Err(Error::NotRepresentable(_)) => Ok(None),
        Err(e) => Err(usage(e)),
    }
}

/// Exact table for `what`, keyed by Pauli text. The frame backend is used
/// when the state has frame form, dense simulation otherwise.
pub fn distribution(
    target: &Target,
    what: DistWhat,
    op: Option<&SignedPauli>,
    input: &[bool],
) -> Result<BTreeMap<String, f64>, CliError> {
    let n = target.n();
    let frame = frame_of(target, input)?;
    let mut table = BTreeMap::new();
    match (what, &frame) {
        (DistWhat::Pauli, _) => {
            let p = op.ok_or_else(|| CliError::Usage("--what pauli needs --op".into()))?;
            let e = match &frame {
                Some(f) => f.pseudo_expectation(p),
                None => {
                    let psi = run_circuit(&target.circuit(), input).map_err(usage)?;
                    pauli_expectation(&psi, p)
                }
            };
            table.insert(p.to_string(), (1.0 + e) / 2.0);
            return Ok(table);
        }
        (_, Some(f)) => {
            let support = if what == DistWhat::BellConj {
                f.bell_support()
            } else {
                f.bell_support_shifted()
            }
            .map_err(usage)?;
            for (w, p) in support {
                *table.entry(w.to_string()).or_insert(0.0) += p;
            }
        }
        (_, None) => {
            for (r, p) in dense_bell(target, what, input)?.into_iter().enumerate() {
                if p > DUMP_FLOOR {
                    table.insert(word_from_index(r, n).to_string(), p);
                }
            }
        }
    }
    Ok(table)
}

fn dense_bell(target: &Target, what: DistWhat, input: &[bool]) -> Result<Vec<f64>, CliError> {
    let n = target.n();
    if n > MAX_BELL_QUBITS {
        return Err(CliError::Usage(format!(
            "dense Bell tables need n <= {MAX_BELL_QUBITS}"
        )));
    }
    let psi = run_circuit(&target.circuit(), input).map_err(usage)?;
    let first = if what == DistWhat::BellConj {
        conjugate_state(&psi)
    } else {
        psi.clone()
    };
    bell_distribution(&first, &psi).map_err(usage)
}

/// Largest absolute difference between `table` and the dense reference.
pub fn dense_deviation(
    target: &Target,
    what: DistWhat,
    op: Option<&SignedPauli>,
    input: &[bool],
    table: &BTreeMap<String, f64>,
) -> Result<f64, CliError> {
    let n = target.n();
    if what == DistWhat::Pauli {
        let p = op.ok_or_else(|| CliError::Usage("--what pauli needs --op".into()))?;
        let psi = run_circuit(&target.circuit(), input).map_err(usage)?;
        let dense = (1.0 + pauli_expectation(&psi, p)) / 2.0;
        return Ok((dense - table[&p.to_string()]).abs());
    }
    let dense = dense_bell(target, what, input)?;
    Ok(dense
        .iter()
        .enumerate()
        .map(|(r, &p)| {
            let key = word_from_index(r, n).to_string();
            (p - table.get(&key).copied().unwrap_or(0.0)).abs()
        })
        .fold(0.0, f64::max))
}

pub fn dist(a: &DistArgs) -> Result<(), CliError> {
    let target = Target::parse(text(&read(&a.target)?)?)?;
    let n = target.n();
    let input = parse_input(a.input.as_deref(), n)?;
    let op: Option<SignedPauli> = match &a.op {
        Some(s) => {
            let p: SignedPauli = s.parse().map_err(usage)?;
            if p.num_qubits() != n {
                return Err(CliError::Usage(format!("--op must have {n} letters")));
            }
            if p.phase() % 2 == 1 {
                return Err(CliError::Usage("--op must be Hermitian".into()));
            }
            Some(p)
        }
        None => None,
    };
    if a.what != DistWhat::Pauli && n > MAX_BELL_QUBITS {
        return Err(CliError::Usage(format!(
            "exact Bell tables need n <= {MAX_BELL_QUBITS}"
        )));
    }
    let table = distribution(&target, a.what, op.as_ref(), &input)?;
    let mut out = String::from("pauli_word_text,probability\n");
    for (w, p) in &table {
        out.push_str(&format!("{w},{p}\n"));
    }
    print!("{out}");
    if a.check_dense {
        let dev = dense_deviation(&target, a.what, op.as_ref(), &input, &table)?;
        eprintln!("max_abs_deviation={dev:e}");
        if dev > DENSE_CHECK_TOL {
            return Err(CliError::Failure(format!(
                "frame and dense tables differ by {dev:e}"
            )));
        }
    }
    Ok(())
}
