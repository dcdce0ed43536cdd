//! Bounded symbolic message algebra and attacker deduction, crisp and
//! graded.

mod closure;
mod expr;
mod graded;
mod term;

pub use closure::{crisp_closure, crisp_closure_in, derivable, KnowledgeSet, Universe, DEFAULT_DEPTH};
pub use expr::{normalize, Expr};
pub use graded::{
    alpha_project, graded_closure, graded_closure_in, graded_degree, graded_degree_expr,
    KnowledgeMap,
};
pub use term::Term;
