//! Finite-dimensional toolkit for operator-valued information channels,
//! no-signalling correlations and values of non-local games, including
//! games over shift spaces whose rule looks at a finite window of
//! coordinates (games with memory).
//!
//! The modules build on each other bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigensolver, square roots.
//! * [`channels`]: POVMs, PVMs, channels and unital completely positive maps.
//! * [`dilation`]: Naimark dilations, simultaneous and joint commuting
//!   dilations, products of measures and channels.
//! * [`correlations`]: correlation tables and the local, quantum spatial,
//!   quantum commuting and no-signalling classes.
//! * [`optimize`]: simplex LP solver and the see-saw ascent.
//! * [`games`]: finite and cylinder games, values, products, iterates,
//!   memory games and value sequences.
//! * [`cli`]: the command-line front end used by the `nlgames` binary.

pub mod channels;
pub mod cli;
pub mod correlations;
pub mod dilation;
pub mod error;
pub mod games;
pub mod linalg;
pub mod optimize;
pub mod text;

pub use error::{Error, Result};
