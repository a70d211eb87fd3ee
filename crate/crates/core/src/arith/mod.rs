//! Exact integer, modular and polynomial arithmetic.

pub mod fp_poly;
pub mod integer;
pub mod irreducible;
pub mod poly;

pub use fp_poly::{factor_mod_p, FpPoly};
pub use integer::{factor_integer, is_prime, kronecker_symbol};
pub use poly::Poly;
