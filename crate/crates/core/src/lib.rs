//! Verification library for Mahler measures, modular L-values and the
//! hypergeometric and binomial-sum identities that connect them.

pub mod cli;
pub mod compute;
pub mod config;
pub mod error;
pub mod finite_field;
pub mod mahler;
pub mod modular;
pub mod precision;
pub mod quadrature;
pub mod registry;
pub mod special;
pub mod wz;

pub use error::{Error, Result};
