//! Concrete semantics: diagrams evaluated as tensor networks.
//!
//! A [`Model`] fixes a dimension per wire type, a tensor per generator and a
//! basis per spider colour. [`interpret`] contracts the network a diagram
//! describes. Cups are the unnormalised `Σᵢ |ii⟩`.

mod contract;
mod harness;
mod model;
mod semiring;
mod value;

pub use contract::{contraction_plan, interpret, interpret_with_plan, ContractionPlan};
pub use harness::{soundness_harness, HarnessFailure, HarnessReport};
pub use model::{AnyModel, Model};
pub use semiring::Semiring;
pub use value::{equal_tensors, CompareMode, Comparison, TensorValue};

/// Default comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("the model has no {0}")]
    Missing(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("invalid contraction plan: {0}")]
    Plan(String),
}
