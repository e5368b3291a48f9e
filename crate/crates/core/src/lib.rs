//! Character-variety computations for the four-holed sphere with three
//! cusps and one cone point (or generalized boundary).
//!
//! The crate is organised by topic:
//!
//! * [`mobius`]: 2×2 matrices acting on the boundary and the upper half-plane.
//! * [`charvar`]: the `(a, b, c)` coordinates, the level function `κ`,
//!   inequalities and the hyperbolization certificate.
//! * [`mcg`]: the involution group, reduction to the fundamental domain and
//!   maps induced by automorphisms of the free group.
//! * [`growth`]: the orbit tree of simple-loop values and Fibonacci growth.
//! * [`volume`]: Weil–Petersson density, Fenchel–Nielsen coordinates and
//!   volumes.
//!
//! Parallel work goes through [`par`]; building without the default
//! `parallel` feature gives a purely sequential library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charvar;
pub mod error;
pub mod growth;
pub mod mcg;
pub mod mobius;
pub mod par;
pub mod quadrature;
pub mod sample;
pub mod tolerance;
pub mod verify;
pub mod volume;

pub use error::{Error, Result};
pub use par::Execution;
pub use tolerance::Tolerances;
