//! Explicit-state guarded-command transition systems: state layout, rules,
//! scalarset symmetry, breadth-first reachability and counterexamples.

mod explore;
mod model;
mod state;
mod symmetry;
mod trace;

pub use explore::{
    explore, explore_full, Exploration, ExploreOptions, Parent, Verdict, DEFAULT_MAX_STATES,
};
pub use model::{
    check_invariants, Assign, Domain, EngineError, Guard, Invariant, Model, ModelBuilder, Pred,
    Rule, RuleKind, Scalarset, ValueFn, VarDecl,
};
pub use state::{Layout, ModelState, Value, VarId, View};
pub use symmetry::{canonicalize, Symmetry};
pub use trace::{reconstruct_trace, replay, Trace, TraceStep};
