//! Exact computations around the total power operation on class functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`] works with finite subgroups of `(Q_p/Z_p)^n` stored as integer lattices.
//! * [`isogeny`] holds integer matrices acting on those subgroups and power sections.
//! * [`groups`] provides permutation groups, wreath products and commuting tuples.
//! * [`classify`] maps conjugacy classes in `G ≀ Σ_m` to sums of subgroup data and back.
//! * [`classfn`] evaluates class functions, transfers, twists and the power operation.
//! * [`oracle`] re-derives the same answers by brute force and reports agreement.

pub mod classfn;
pub mod classify;
pub mod error;
pub mod groups;
pub mod isogeny;
pub mod lattice;
pub mod oracle;
pub mod padic;

pub use error::{Error, Result};
