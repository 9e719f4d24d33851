//! Loading targets and running one learner with verification.

use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use stablearn::dense::{basis_fidelities, common_basis_phase, MAX_VERIFY_QUBITS};
use stablearn::tdepth1_learner::tdepth1_query_budget;
use stablearn::clifford_learner::clifford_query_budget;
use stablearn::{
    learn_clifford_with, learn_tdepth1_with, AxisStructure, Backend, Circuit, CliffordConfig,
    Oracle, TDepth1, TDepth1Config, TargetSpec,
};

use crate::args::Kind;
use crate::report::{digest, ExperimentReport, PhaseCount, RNG_NAME};
use crate::CliError;

/// A parsed target circuit.
#[derive(Clone, Debug)]
pub enum Target {
    Clifford(Circuit),
    TDepth1(TDepth1),
    /// Contains T gates but is not T-depth one.
    Other(Circuit),
}

impl Target {
    pub fn parse(text: &str) -> Result<Target, CliError> {
        let c = Circuit::from_json(text).map_err(|e| CliError::Usage(format!("target: {e}")))?;
        Ok(Target::classify(c))
    }

    pub fn classify(c: Circuit) -> Target {
        if c.is_clifford() {
            return Target::Clifford(c);
        }
        match c.split_tdepth1() {
            Some(t) => Target::TDepth1(t),
            None => Target::Other(c),
        }
    }

    pub fn circuit(&self) -> Circuit {
        match self {
            Target::Clifford(c) | Target::Other(c) => c.clone(),
            Target::TDepth1(t) => t.to_circuit(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Target::Clifford(c) | Target::Other(c) => c.n,
            Target::TDepth1(t) => t.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Target::Clifford(_) => 0,
            Target::Other(c) => c.t_count(),
            Target::TDepth1(t) => t.k(),
        }
    }

    fn spec_for(&self, algo: Kind) -> Result<TargetSpec, CliError> {
        match (algo, self) {
            (Kind::Clifford, Target::Clifford(c)) => Ok(TargetSpec::Clifford(c.clone())),
            (Kind::Tdepth1, Target::Clifford(c)) => Ok(TargetSpec::TDepth1(
                TDepth1::new(c.clone(), vec![false; c.n], Circuit::new(c.n))
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            )),
            (Kind::Tdepth1, Target::TDepth1(t)) => Ok(TargetSpec::TDepth1(t.clone())),
            (Kind::Clifford, _) => Err(CliError::Usage(
                "algo clifford needs a Clifford target".into(),
            )),
            (Kind::Tdepth1, Target::Other(_)) => Err(CliError::Usage(
                "algo tdepth1 needs a Clifford or T-depth-one target".into(),
            )),
        }
    }
}

pub fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Clifford => "clifford",
        Kind::Tdepth1 => "tdepth1",
    }
}

pub fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Frame => "frame",
        Backend::Dense => "dense",
    }
}

pub fn structure_name(s: AxisStructure) -> &'static str {
    match s {
        AxisStructure::Independent => "independent",
        AxisStructure::Merged => "merged",
        AxisStructure::Unrepresentable => "unrepresentable",
    }
}

/// Settings shared by `learn` and `bench`.
#[derive(Clone, Copy, Debug)]
pub struct LearnSettings {
    pub algo: Kind,
    pub backend: Backend,
    pub seed: u64,
    pub tol: f64,
    pub clifford: CliffordConfig,
    pub tdepth1: TDepth1Config,
    pub timing: bool,
}

/// Runs the learner on `target` with `rng` and verifies the hypothesis on
/// every basis input. Usage problems are errors; learner failures are
/// reported with `success = false`.
pub fn learn_target(
    target: &Target,
    target_bytes: &[u8],
    s: &LearnSettings,
    rng: &mut ChaCha8Rng,
) -> Result<(Option<Circuit>, ExperimentReport), CliError> {
    let spec = target.spec_for(s.algo)?;
    let n = target.n();
    let k = target.k();
    let mut oracle = Oracle::new(spec, s.backend).map_err(|e| CliError::Usage(e.to_string()))?;
    let axis = match target {
        Target::TDepth1(t) if s.algo == Kind::Tdepth1 => t
            .axis_structure()
            .ok()
            .map(|a| structure_name(a).to_string()),
        _ => None,
    };
    let start = Instant::now();
    let (learned, phases, budget, retries, retry_queries, k_hat) = match s.algo {
        Kind::Clifford => {
            let budget = clifford_query_budget(n);
            match learn_clifford_with(&mut oracle, &s.clifford, rng) {
                Ok(run) => (
                    Ok(run.circuit),
                    vec![("z_pass", run.pass_queries[0]), ("x_pass", run.pass_queries[1])],
                    budget,
                    run.retries,
                    run.retry_queries,
                    None,
                ),
                Err(e) => (Err(e), vec![("failed", oracle.queries())], budget, 0, 0, None),
            }
        }
        Kind::Tdepth1 => {
            let budget = tdepth1_query_budget(n, k);
            match learn_tdepth1_with(&mut oracle, &s.tdepth1, rng) {
                Ok(run) => (
                    Ok(run.circuit),
                    vec![
                        ("harvest", run.phase_queries[0]),
                        ("search", run.phase_queries[1]),
                        ("probe", run.phase_queries[2]),
                    ],
                    budget,
                    run.retries,
                    run.retry_queries,
                    Some(run.k_hat),
                ),
                Err(e) => (Err(e), vec![("failed", oracle.queries())], budget, 0, 0, None),
            }
        }
    };
    let wall = start.elapsed().as_secs_f64();
    let phase_queries: Vec<PhaseCount> = phases
        .into_iter()
        .map(|(p, q)| PhaseCount {
            phase: p.to_string(),
            queries: q,
        })
        .collect();
    let total_queries = phase_queries.iter().map(|p| p.queries).sum();
    let mut report = ExperimentReport {
        algo: kind_name(s.algo).into(),
        target_digest: digest(target_bytes),
        n,
        k,
        k_hat,
        seed: s.seed,
        rng: RNG_NAME.into(),
        backend: backend_name(s.backend).into(),
        phase_queries,
        total_queries,
        query_budget: budget,
        retries,
        retry_queries,
        success: false,
        error: None,
        tolerance: s.tol,
        fidelities: Vec::new(),
        common_phase: None,
        axis_structure: axis,
        wall_time_s: s.timing.then_some(wall),
    };
    let hyp = match learned {
        Ok(h) => h,
        Err(e) => {
            report.error = Some(e.to_string());
            report.retry_queries = report.total_queries;
            return Ok((None, report));
        }
    };
    if n > MAX_VERIFY_QUBITS {
        report.error = Some(format!(
            "verification needs n <= {MAX_VERIFY_QUBITS}, got {n}"
        ));
        return Ok((Some(hyp), report));
    }
    let truth = target.circuit();
    let fids = basis_fidelities(&truth, &hyp).map_err(|e| CliError::Failure(e.to_string()))?;
    report.success = fids.iter().all(|&f| f >= 1.0 - s.tol);
    report.common_phase =
        Some(common_basis_phase(&truth, &hyp, s.tol).map_err(|e| CliError::Failure(e.to_string()))?);
    if !report.success {
        report.error = Some("hypothesis disagrees with the target on some basis input".into());
    }
    report.fidelities = fids;
    Ok((Some(hyp), report))
}
