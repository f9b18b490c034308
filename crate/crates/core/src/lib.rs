//! Gröbner-basis ideal operations over the rationals and prime fields, with
//! modular algorithms for ideal quotients, saturations and double ideal
//! quotients, prime-divisor tests and an intermediate primary decomposition.

pub mod deadline;
pub mod decomp;
pub mod diq;
pub mod error;
pub mod families;
pub mod field;
pub mod groebner;
pub mod idealops;
pub mod modular;
pub mod par;
pub mod polycore;

pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use polycore::{Monomial, MonomialOrder, Poly, Ring, RingRef};
