pub mod bootstrap;
pub mod cli;
pub mod corpus;
pub mod dawg;
pub mod entity;
pub mod error;
pub mod eval;
pub mod output;
pub mod pattern;
pub mod pipeline;
pub mod quote;
pub mod synth;

pub use error::{Error, Result};
