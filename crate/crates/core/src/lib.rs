//! Learning Clifford and T-depth-one quantum circuits from simulated
//! Bell sampling and Pauli measurements.

pub mod bitmatrix;
pub mod circuit;
pub mod clifford_learner;
pub mod dense;
pub mod error;
pub mod expanded;
pub mod frame;
pub mod oracle;
pub mod pauli;
pub mod synthesis;
pub mod tdepth1_learner;
#[cfg(test)]
pub(crate) mod testutil;

pub use bitmatrix::{BitMatrix, SpanSolver};
pub use circuit::{Circuit, Gate, TDepth1};
pub use dense::StateVector;
pub use error::{Error, Result};
pub use clifford_learner::{learn_clifford, learn_clifford_with, CliffordConfig, CliffordRun};
pub use expanded::{
    build_tdepth1, expand_t_gate, AxisStructure, ExpandedFrame, PseudomixtureWeights,
};
pub use frame::PauliFrame;
pub use oracle::{Backend, InputBasis, Oracle, QueryLedger, StateCopy, TargetSpec};
pub use pauli::{Letter, PauliWord, SignedPauli};
pub use synthesis::{
    assemble_tdepth1, complete_tableau, linear_reversible, synthesize, tableau_of,
    PartialTableau, Tableau,
};
pub use tdepth1_learner::{
    learn_tdepth1, learn_tdepth1_with, OperatorClassification, OperatorLabel, TDepth1Config,
    TDepth1Run,
};
