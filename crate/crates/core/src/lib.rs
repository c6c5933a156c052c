//! Homological invariants of modules over quotients of polynomial rings:
//! Gröbner bases, free resolutions, Ext and Tor, Bass and Betti numbers at
//! primes, and the behaviour of these invariants along the family `M/I^nM`.

pub mod asympt;
pub mod coeff;
pub mod error;
pub mod groebner;
pub mod homalg;
pub mod localinv;
pub mod matrix;
pub mod modpres;
pub mod monomial;
pub mod poly;
pub mod ring;

pub use coeff::{Coeff, Field};
pub use error::{Error, Result};
pub use groebner::{FreeVector, GroebnerBasis, Ideal};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use ring::Ring;
