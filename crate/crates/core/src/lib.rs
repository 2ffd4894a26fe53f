//! Routing and semi-linear coding capacity regions of acyclic capacitated
//! networks, computed exactly over the rationals or approximately with
//! multiplicative-weights packing.

pub mod corpus;
pub mod error;
pub mod exec;
pub mod gf;
pub mod lincode;
pub mod lp;
pub mod network;
pub mod packing;
pub mod plot;
pub mod polytope;
pub mod rational;
pub mod reconstruct;
pub mod routing;
pub mod semilinear;
pub mod steiner;

pub use error::{Error, Result};
pub use exec::Exec;
pub use network::Network;
pub use rational::Rational;
