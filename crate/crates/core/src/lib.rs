//! Thermodynamic-formalism toolkit for affine iterated function systems.

pub mod analysis;
pub mod error;
pub mod linalg;
pub mod potentials;
pub mod structure;
pub mod symbolic;
pub mod tuple;
pub mod word;

/// Library version reported by front ends.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use linalg::{LogSv, Matrix, Vector};
pub use potentials::{
    dualize, eval_potential, svf, svf_via_exterior, DualityTransformResult, PotentialSpec,
};
pub use tuple::{word_product_logsv, MatrixTuple};
pub use word::Word;
