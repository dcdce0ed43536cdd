//! Bundled protocol models.

mod config;
pub mod knowledge;
pub mod leak;
mod message;
mod network;
pub mod nsl;
pub mod registry;
pub mod symmetric;

use thiserror::Error;

use crate::engine::EngineError;
use crate::fuzzy::FuzzyError;
use crate::reduct::ReductError;

pub use config::ProtocolConfig;
pub use leak::LeakModel;
pub use message::MessageRecord;
pub use network::Network;
pub use nsl::{build_nsl, build_nsl_fullctx, NslProperty};
pub use registry::{build_model, default_leak, model_names};
pub use symmetric::{build_nssk, build_symmetric_family, SymmetricFamily};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown model `{0}` (known: {known})", known = model_names().join(", "))]
    UnknownModel(String),
    #[error("unknown protocol family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Reduct(#[from] ReductError),
}
