//! Distinguishability of quantum states: Helstrom and Chernoff error
//! exponents, local measurement exponents, induced metrics and priors.

pub mod error;
pub mod matcore;
pub mod states;
pub mod optimize;
pub mod chernoff;
pub mod localdisc;
pub mod multicopy;
pub mod geometry;
pub mod gaussian;

pub use error::{Error, Result};
