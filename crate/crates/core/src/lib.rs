//! Suzuki groups Sz(q), the Suzuki–Tits ovoid in PG(3,q), and the two
//! families of 2-designs obtained as block orbits of Sz(q) on the ovoid.
//!
//! Everything is built from explicit 4×4 matrices over GF(q) and checked
//! by brute force: orbit sizes, stabilizers, pair counts and collinearity.

pub mod action;
pub mod cli;
pub mod designs;
pub mod error;
pub mod export;
pub mod gf2m;
pub mod pg3;
pub mod suzuki;

pub use error::{Error, Result};
