//! JSON experiment reports.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Name of the generator recorded in every report.
pub const RNG_NAME: &str = "ChaCha8";

/// Copies consumed by one named phase of a learner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCount {
    pub phase: String,
    pub queries: u64,
}

/// Outcome of one learning run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentReport {
    pub algo: String,
    /// SHA-256 of the target JSON bytes, hex encoded.
    pub target_digest: String,
    pub n: usize,
    /// Number of T gates in the target.
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_hat: Option<usize>,
    pub seed: u64,
    pub rng: String,
    pub backend: String,
    pub phase_queries: Vec<PhaseCount>,
    pub total_queries: u64,
    /// Copies planned for one attempt without retries.
    pub query_budget: u64,
    pub retries: usize,
    /// Copies spent on discarded attempts, included in `total_queries`;
    /// all copies when the learner failed.
    pub retry_queries: u64,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub tolerance: f64,
    /// `|⟨Û v|U v⟩|²` for each basis input `v`, indexed with bit `i` as qubit `i`.
    pub fidelities: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub common_phase: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis_structure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl ExperimentReport {
    /// Checks the internal consistency rules of a report.
    pub fn validate(&self) -> Result<(), String> {
        if self.algo != "clifford" && self.algo != "tdepth1" {
            return Err(format!("unknown algo {:?}", self.algo));
        }
        if self.target_digest.len() != 64
            || !self.target_digest.bytes().all(|b| b.is_ascii_hexdigit())
        {
            return Err("target_digest is not a SHA-256 hex string".into());
        }
        if self.k > self.n {
            return Err(format!("k = {} exceeds n = {}", self.k, self.n));
        }
        if self.rng != RNG_NAME {
            return Err(format!("unknown rng {:?}", self.rng));
        }
        if self.backend != "frame" && self.backend != "dense" {
            return Err(format!("unknown backend {:?}", self.backend));
        }
        let sum: u64 = self.phase_queries.iter().map(|p| p.queries).sum();
        if sum != self.total_queries {
            return Err(format!(
                "phase queries sum to {sum}, total is {}",
                self.total_queries
            ));
        }
        if self.retry_queries > self.total_queries {
            return Err("retry copies exceed the total".into());
        }
        if !(self.tolerance >= 0.0 && self.tolerance < 1.0) {
            return Err(format!("tolerance {} out of range", self.tolerance));
        }
        if !self.fidelities.is_empty() && self.fidelities.len() != 1 << self.n {
            return Err(format!(
                "{} fidelities for {} qubits",
                self.fidelities.len(),
                self.n
            ));
        }
        let all_pass = !self.fidelities.is_empty()
            && self.fidelities.iter().all(|&f| f >= 1.0 - self.tolerance);
        if self.success != all_pass {
            return Err("success flag disagrees with fidelities".into());
        }
        if self.success && self.error.is_some() {
            return Err("successful report carries an error".into());
        }
        Ok(())
    }

    /// Copies charged against `query_budget`.
    pub fn net_queries(&self) -> u64 {
        self.total_queries - self.retry_queries
    }

    pub fn min_fidelity(&self) -> Option<f64> {
        self.fidelities.iter().copied().reduce(f64::min)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let r: ExperimentReport = serde_json::from_str(text).map_err(|e| e.to_string())?;
        r.validate()?;
        Ok(r)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        ExperimentReport {
            algo: "clifford".into(),
            target_digest: digest(b"{}"),
            n: 1,
            k: 0,
            k_hat: None,
            seed: 3,
            rng: RNG_NAME.into(),
            backend: "frame".into(),
            phase_queries: vec![
                PhaseCount {
                    phase: "z".into(),
                    queries: 8,
                },
                PhaseCount {
                    phase: "x".into(),
                    queries: 8,
                },
            ],
            total_queries: 16,
            query_budget: 16,
            retries: 0,
            retry_queries: 0,
            success: true,
            error: None,
            tolerance: 1e-9,
            fidelities: vec![1.0, 1.0],
            common_phase: Some(true),
            axis_structure: None,
            wall_time_s: None,
        }
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            digest(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn validation_rules() {
        let r = sample();
        assert_eq!(r.validate(), Ok(()));
        assert_eq!(ExperimentReport::from_json(&r.to_json()), Ok(r.clone()));
        let mut bad = r.clone();
        bad.total_queries = 15;
        assert!(bad.validate().is_err());
        let mut bad = r.clone();
        bad.fidelities[1] = 0.5;
        assert!(bad.validate().is_err());
        bad.success = false;
        assert_eq!(bad.validate(), Ok(()));
        let mut bad = r.clone();
        bad.fidelities.pop();
        assert!(bad.validate().is_err());
        let mut bad = r;
        bad.k = 2;
        assert!(bad.validate().is_err());
    }
}
