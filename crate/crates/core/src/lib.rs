pub mod corpus;
pub mod embedder;
pub mod error;
pub mod fixed;
pub mod kernels;
pub mod ops;
pub mod pipeline;
pub mod plain;
pub mod ring;
pub mod runtime;
pub mod sectable;
pub mod sharing;
pub mod toy;

pub use error::{Error, Result};
