//! Time-optimal population transfer for a two-level quantum system with drift.
//!
//! The Schrödinger equation with Hamiltonian `[[-E, Ω], [Ω, E]]` and a real
//! control bounded by `|Ω| ≤ M` projects onto the Bloch sphere as the
//! single-input affine system `ẏ = F(y) + u·G(y)`, `|u| ≤ 1`. This crate
//! synthesizes the minimum-time controls steering the north pole (level one)
//! to the south pole (level two), checks them against exact dynamics and a
//! brute-force search, and compares transfer times with the resonant
//! rotating-wave model.
//!
//! Modules:
//!
//! - [`bloch`]: exact constant-control flows on the sphere and on spinors.
//! - [`synthesis`]: closed-form candidate enumeration and optimum selection.
//! - [`oracle`]: independent searches over bang-bang and bang-singular-bang
//!   families.
//! - [`comparison`]: physical-time conversion and rotating-wave benchmarks.
//! - [`cli`]: the orchestration behind the `qtopt` binary.
//!
//! Time is measured on the normalized clock (rotation rate `k = 2√(M²+E²)`
//! scaled to one) unless a name carries a `_phys` suffix.
//!
//! ```
//! use qtopt::{bloch::SystemParams, synthesis::synthesize};
//!
//! let params = SystemParams::new(1.0, 2.0).unwrap();
//! let result = synthesize(&params, 1e-8).unwrap();
//! let best = &result.optima[0];
//! assert!((best.candidate.total_time - 2.0 * std::f64::consts::PI).abs() < 1e-10);
//! assert_eq!(best.switchings, 1);
//! ```

pub mod bloch;
pub mod cli;
pub mod comparison;
mod error;
pub mod numeric;
pub mod oracle;
pub mod synthesis;

pub use error::{Error, Result};
