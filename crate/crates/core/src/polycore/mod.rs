//! Sparse multivariate polynomials, monomial orders and coefficient maps.

mod convert;
mod monomial;
mod order;
mod poly;
mod ring;

pub use convert::{coeff_norm, is_weak_permissible, reduce_all, reduce_mod_p, ring_mod_p};
pub use monomial::Monomial;
pub use order::{BlockKind, MonomialOrder, OrderBlock};
pub use poly::{Degree, Poly, Term};
pub use ring::{same_ring, Ring, RingRef};
