//! Coefficient maps between the rationals and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::poly::Poly;
use super::ring::RingRef;
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};

/// True when `p` divides no coefficient denominator of `polys`.
pub fn is_weak_permissible(polys: &[Poly<Rationals>], p: u64) -> bool {
    let pb = BigInt::from(p);
    polys
        .iter()
        .all(|f| f.terms().iter().all(|(_, c)| !c.denom().is_multiple_of(&pb)))
}

/// The image of `f` in `ring_p`, the same variables and order over F_p.
pub fn reduce_mod_p(f: &Poly<Rationals>, ring_p: &RingRef<PrimeField>) -> Result<Poly<PrimeField>> {
    let fp = *ring_p.field();
    f.map_coeffs(ring_p, |c| fp.from_rational(c))
        .ok_or(Error::NotWeakPermissible { p: fp.modulus() })
}

pub fn reduce_all(fs: &[Poly<Rationals>], ring_p: &RingRef<PrimeField>) -> Result<Vec<Poly<PrimeField>>> {
    fs.iter().map(|f| reduce_mod_p(f, ring_p)).collect()
}

/// The ring `ring` over F_p.
pub fn ring_mod_p(ring: &RingRef<Rationals>, p: u64) -> RingRef<PrimeField> {
    ring.with_field(PrimeField::new(p))
}

/// `max(a^2 + b^2)` over all coefficients `a/b` of `g`; 0 when there are none.
pub fn coeff_norm(g: &[Poly<Rationals>]) -> BigInt {
    let mut best = BigInt::zero();
    for f in g {
        for (_, c) in f.terms() {
            let v = c.numer() * c.numer() + c.denom() * c.denom();
            if v > best {
                best = v;
            }
        }
    }
    best
}
