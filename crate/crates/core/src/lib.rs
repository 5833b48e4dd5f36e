//! Representation theory of the walled Brauer algebra and the mixed Schur
//! transform, with SDP symmetry reduction and port-based teleportation.

pub mod bratteli;
pub mod combinat;
pub mod diagram;
pub mod error;
pub mod exact;
pub mod irreps;
pub mod pbt;
pub mod scalar;
pub mod schur;
pub mod sdp;

pub use error::{Error, Result};
