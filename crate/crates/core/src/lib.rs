//! Exact computations in the modular graphical category.

pub mod embedding;
pub mod audit;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod factor;
pub mod graph;
pub mod iso;
pub mod label;
pub mod map;
pub mod presheaf;
pub mod substitution;
pub mod text;
pub mod variants;

pub use embedding::{EmbClass, Embedding};
pub use error::{Error, Result};
pub use graph::{ArcId, Graph, GraphBuilder, Mode, VertexId};
pub use iso::GraphIso;
pub use label::Label;
pub use exec::Execution;
pub use map::{enumerate_maps, GraphicalMap};
