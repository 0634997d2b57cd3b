//! Nonbinary graph-state quantum codes.
//!
//! Graph states over `Z_p` for arbitrary `p`, coding-clique search over the
//! induced super graph, stabilizer/nonadditive classification, analytic code
//! families, composite-dimension (CRT) constructions, and a numeric
//! Knill-Laflamme oracle that checks codes without the covering machinery.

pub mod code;
pub mod composite;
pub mod error;
pub mod families;
pub mod format;
pub mod graph_state;
pub mod limits;
pub mod oracle;
pub mod pauli;
pub mod search;
pub mod zp;

pub use code::{Classification, GraphCode, SingletonStatus};
pub use error::{Error, Result};
pub use graph_state::DenseState;
pub use limits::Limits;
pub use oracle::{KlEngine, KlMode, KlReport};
pub use pauli::PauliOp;
pub use search::{CliqueCheck, SearchMode, SuperGraph, Violation};
pub use zp::{Modulus, WeightedGraph, ZpModuleBasis, ZpVec};
