//! Dual-backend simulator: every circuit runs as unitary evolution of
//! ψ ∈ ℂᴺ and as symplectic evolution of (q; p) ∈ ℝ²ᴺ, with additional
//! gates (squeeze, shear) that exist only on the symplectic side.

pub mod circuit;
pub mod duality;
pub mod dynamics;
pub mod error;
pub mod expm;
pub mod gates;
pub mod io;
pub mod matrix;
pub mod random;

pub use error::{Error, Result};
