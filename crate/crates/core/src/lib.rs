pub mod engine;
pub mod fuzzy;
pub mod protocols;
pub mod reduct;
pub mod report;
pub mod terms;
