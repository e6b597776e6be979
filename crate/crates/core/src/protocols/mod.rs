//! End-to-end checks: teleportation and entanglement swapping verified by
//! rewriting and by tensors, and Bayesian inversion as a transpose.

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::rewrite::{check_equal_by_rewriting, RewriteError, RewriteTrace, Ruleset, Verdict};
use crate::tensor::{equal_tensors, interpret, CompareMode, Model, Semiring, TensorError, DEFAULT_TOL};

mod bayes;
mod quantum;

pub use bayes::{bayes_invert, bayes_rule, Channel, Inversion, Prior, SUPPORT_TOL};
pub use quantum::{
    swapping_control, swapping_demo, swapping_diagram, swapping_misrouted, teleportation_demo, teleportation_diagram,
};

/// Rewrite budget for the demos.
pub const DEMO_STEPS: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("`{0}` is not a unitary of the model")]
    NotUnitary(String),
    #[error("invalid channel: {0}")]
    Channel(String),
    #[error("invalid prior: {0}")]
    Prior(String),
    #[error("diagrammatic and direct inversion differ by {0:.3e}")]
    Disagreement(f64),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorVerdict {
    pub mode: CompareMode,
    pub tolerance: f64,
    pub equal: bool,
    /// `λ` with protocol ≈ λ · target.
    pub scalar: Option<Value>,
    pub deviation: f64,
}

/// Outcome of a protocol check. Both verdicts must pass.
#[derive(Clone, Debug)]
pub struct ProtocolReport {
    pub protocol: String,
    pub trace: RewriteTrace,
    pub rewrite_verdict: Verdict,
    pub tensor_verdict: TensorVerdict,
}

impl ProtocolReport {
    pub fn rewrite_passed(&self) -> bool {
        self.rewrite_verdict != Verdict::Unknown
    }

    pub fn passed(&self) -> bool {
        self.rewrite_passed() && self.tensor_verdict.equal
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "protocol": self.protocol,
            "passed": self.passed(),
            "rewrite_verdict": self.rewrite_verdict,
            "rewrite_steps": self.trace.steps.len(),
            "tensor_verdict": self.tensor_verdict,
            "trace": self.trace.to_json(),
        })
    }

    pub fn to_text(&self) -> String {
        let t = &self.tensor_verdict;
        let scalar = t
            .scalar
            .as_ref()
            .map_or("none".to_string(), |s| s.to_string());
        format!(
            "protocol: {}\nrewrite verdict: {} ({} steps)\ntensor verdict: {} ({:?}, tol {:e}, scalar {}, deviation {:.3e})\nresult: {}\n",
            self.protocol,
            self.rewrite_verdict,
            self.trace.steps.len(),
            if t.equal { "equal" } else { "not equal" },
            t.mode,
            t.tolerance,
            scalar,
            t.deviation,
            if self.passed() { "PASS" } else { "FAIL" },
        )
    }
}

/// Check `d` against `target` by rewriting and, independently, by tensors
/// up to scalar.
pub fn verify<S: Semiring>(
    name: &str,
    d: &Diagram,
    target: &Diagram,
    m: &Model<S>,
) -> Result<ProtocolReport, ProtocolError> {
    let rules = Ruleset::builtin(m.signature())?;
    let check = check_equal_by_rewriting(d, target, &rules, DEMO_STEPS)?;
    let a = interpret(d, m)?;
    let b = interpret(target, m)?;
    let cmp = equal_tensors(&a, &b, CompareMode::UpToScalar, DEFAULT_TOL)?;
    Ok(ProtocolReport {
        protocol: name.to_string(),
        trace: check.left,
        rewrite_verdict: check.verdict,
        tensor_verdict: TensorVerdict {
            mode: CompareMode::UpToScalar,
            tolerance: DEFAULT_TOL,
            equal: cmp.equal,
            scalar: cmp.scalar.map(Semiring::to_json),
            deviation: cmp.deviation,
        },
    })
}
