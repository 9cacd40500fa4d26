//! LimTDD-based quantum state preparation.
//!
//! Pipeline: state vector → canonical diagram ([`limtdd`]) → reduction circuit
//! ([`synth`]) → inverted preparation circuit ([`circuit`]), checked against
//! the dense simulator ([`sim`]).

pub mod bench;
pub mod circuit;
pub mod error;
pub mod lim;
pub mod limtdd;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
pub use lim::{Lim, PauliFactor};
pub use num_complex::Complex64;
