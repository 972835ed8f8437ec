pub mod error;
pub mod operators;
pub mod seqspace;
pub mod walk_oracle;
pub mod classify;
pub mod inverse_kernel;
pub mod spectral;
pub mod dynamics;
pub mod cli;
