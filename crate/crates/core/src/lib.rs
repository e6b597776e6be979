//! String diagrams for dagger compact categories with spiders.
//!
//! * [`diagram`] builds typed open graphs and decides equality up to
//!   deformation.
//! * [`rewrite`] matches and applies rules, producing replayable traces.
//! * [`tensor`] evaluates diagrams in concrete models over a semiring.
//! * [`pregroup`] and [`distsem`] compute sentence meaning from word meaning.
//! * [`protocols`] verifies teleportation, entanglement swapping and
//!   Bayesian inversion end to end.
//! * [`dsl`] reads diagrams written as text.
//! * [`shipped`] bundles example models, rules and a lexicon.

pub mod diagram;
pub mod distsem;
pub mod dsl;
pub mod pregroup;
pub mod protocols;
pub mod rewrite;
pub mod shipped;
pub mod tensor;

pub use diagram::{Color, Diagram, DiagramError, GeneratorDecl, Signature, WireType};
