//! Closed-form level sets ("orbits") and critical points of the potential felt
//! by a free particle near two fixed particles interacting through the
//! Van der Waals-type pair law `B(d) = 1/d^4 - 2/d^2`.
//!
//! The level-set condition `B2(x, y) = G` reduces, after the substitution
//! `u = y^2` and clearing of denominators, to a polynomial in `u` of degree at
//! most four, which is solved exactly by radicals (Cardano / Ferrari). Every
//! algebraic result can be cross-checked against the independent numerical
//! routines in [`oracle`].
//!
//! Modules:
//! - [`roots`]: quadratic/cubic/quartic solvers by radicals, power-composed
//!   polynomials, tolerance-based real-root extraction.
//! - [`potential`]: the pair law, the two-center potential, its gradient and
//!   second derivatives, and the global minimum.
//! - [`levelset`]: the u-polynomial, orbit tracing and topology
//!   classification.
//! - [`critical`]: closed-form critical points and their classification.
//! - [`oracle`]: bracketed bisection, finite differences and grid-refinement
//!   minimization used as ground truth in tests and in the `verify` command.
//! - [`export`]: deterministic SVG / CSV / JSON / OBJ writers.
//!
//! At unit separation the global minimum sits at the equilateral-triangle
//! point, and its level set is a single point:
//!
//! ```
//! use vdw_orbits::levelset::{self, Topology};
//! use vdw_orbits::potential::SystemConfig;
//!
//! let cfg = SystemConfig::new(1.0)?;
//! let orbit = levelset::trace_orbit(&cfg, -3.0, 2.0, 801)?;
//! assert_eq!(orbit.topology, Topology::Point);
//! let p = orbit.branches[0].points[0];
//! assert!((p.y - 3.0f64.sqrt() / 2.0).abs() < 1e-6);
//! # Ok::<(), vdw_orbits::Error>(())
//! ```

pub mod critical;
pub mod error;
pub mod export;
pub mod levelset;
pub mod oracle;
pub mod potential;
pub mod roots;

pub use error::{Error, Result};
