//! Deterministic backbone construction for SINR wireless networks.
//!
//! Stations know their own label, the labels of their neighbours, `n`, the
//! label-space bound `N` and the maximum degree `Δ`, but never their
//! coordinates. The crate provides the ground-truth physical layer
//! ([`sinr`]), pre-shared selection families ([`family`]), the synchronous
//! round engine with the node protocols ([`protocol`]), ground-truth
//! verification ([`verifier`]) and run orchestration ([`pipeline`]).

pub mod error;
pub mod family;
pub mod label;
pub mod pipeline;
pub mod protocol;
pub mod sinr;
pub mod verifier;

pub use error::{Error, Result};
pub use label::Label;
