//! Slow, direct reference computations for checking `euclid-core`.
//!
//! Nothing here depends on the core crate. Primality is trial division,
//! units come from scanning the Pell equation, and class numbers come from
//! prime ideals and relations rather than from quadratic forms or analytic
//! formulas.

pub mod arith;
pub mod lattice;
pub mod numfield;
pub mod pell;
