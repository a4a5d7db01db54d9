//! Certified solver for the exponential Diophantine equation
//! `F(n) - F(m) = 2^a` in nonnegative integers with m < n.
//!
//! The library mechanically establishes that the equation has exactly sixteen
//! solutions by combining:
//!
//! - exact integer search below a cutoff ([`search`]),
//! - explicit lower bounds for linear forms in logarithms, turned into a
//!   certified absolute bound on n ([`heights`], [`matveev`]),
//! - a certified continued-fraction expansion of log 2 / log alpha
//!   ([`contfrac`]),
//! - one-dimensional lattice reduction of the huge bound down to the search
//!   range ([`reduction`]),
//! - exact residual case analysis for the shifts the reduction cannot touch
//!   ([`cases`], [`sequences`]),
//!
//! orchestrated by [`pipeline`], which emits a machine-checkable JSON proof
//! certificate. All analytic steps run in midpoint-radius enclosure
//! arithmetic over exact rationals ([`rigor`]); nothing is trusted to
//! hardware floating point.
//!
//! Runnable walkthroughs of each capability live in `examples/`; the thin
//! `fibpow2` binary exposes the same entry points as subcommands.

pub mod cases;
pub mod contfrac;
pub mod heights;
pub mod matveev;
pub mod pipeline;
pub mod quadratic;
pub mod reduction;
pub mod rigor;
pub mod search;
pub mod sequences;

pub use rigor::{RigorousReal, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};
pub use search::SolutionTriple;
