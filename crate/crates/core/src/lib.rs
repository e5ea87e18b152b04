//! Computational checks for the existence of Euclidean ideal classes in
//! real quadratic, cubic and biquadratic fields.
//!
//! Abelian fields are modelled as groups of Dirichlet characters inside one
//! ambient cyclotomic field `Q(zeta_f)`. On top of that sit the residue
//! scans that locate Artin symbols with the required splitting behaviour,
//! a Heath-Brown style prime counter, unit primitivity statistics and a
//! certifier that ties the pieces together.

pub mod certify;
pub mod charfield;
pub mod error;
pub mod kuroda;
pub mod ntheory;
pub mod primroot;
pub mod quadfield;
pub mod residues;
pub mod sieve;

pub use error::{Error, Result};
