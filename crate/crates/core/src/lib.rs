//! Exact arithmetic and certificates for the slope stability of syzygy
//! bundles `V_d = ker(H^0(O(d)) ⊗ O -> O(d))` on projective space in positive
//! characteristic.

pub mod arith;
pub mod bundle;
pub mod cli;
pub mod criteria;
mod error;
pub mod lattice;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rat;
