//! Certified evaluation of entire functions attached to integer linear
//! recurrences, their behaviour under a multiplicative monomial
//! transformation, decidable hypothesis checks on recurrences and
//! transformation matrices, and an LLL-based integer-relation probe.
//!
//! Number backends: exact big rationals, complex balls (dyadic midpoint
//! plus upward-rounded error radius), finite-precision p-adics, and
//! truncated bivariate jets over either numeric backend.

pub mod scalars;
pub mod poly;
pub mod recurrence;
pub mod transform;
pub mod functions;
pub mod identities;
pub mod probe;
pub mod report;

pub use scalars::{Place, Rat};
