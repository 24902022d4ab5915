//! Ordered chaining for order clauses over dense total orders with
//! endpoints.

mod order;
mod rules;
mod saturate;
mod trace;
mod unify;

pub use order::{lpo_greater, ReductionOrder};
pub use rules::{chaining, irreflexivity_resolution, is_tautology, is_theory_tautology, subsumes, Inference};
pub use saturate::{saturate, SaturationLimits, SaturationResult, SaturationStats};
pub use trace::{parse_trace, parse_traces, replay, ProofStep, ProofTrace, ReplayError, Rule};
pub use unify::{mgu, Substitution};
