//! Buchberger's algorithm, normal forms, ideals with cached bases,
//! elimination, dimension and maximal independent sets.

mod buchberger;
mod dimension;
mod ideal;
mod reduce;

pub(crate) use buchberger::interreduce as interreduce_basis;
pub use buchberger::{
    buchberger, is_reduced_gb, s_polynomial, self_check_counts, set_self_check, verify_reduced_gb,
};
pub use dimension::{dimension_and_mis, is_independent, lt_dimension_and_mis};
pub use ideal::{eliminate, Ideal};
pub use reduce::{normal_form, top_reduce};

use crate::error::Result;
use crate::field::Field;
use crate::polycore::{Monomial, MonomialOrder, Poly, RingRef};

/// A Gröbner basis under the order of its ring.
///
/// When `reduced` holds the elements are monic, tail-reduced and sorted by
/// leading monomial, largest first; such a basis is unique for its ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    ring: RingRef<F>,
    polys: Vec<Poly<F>>,
    reduced: bool,
}

impl<F: Field> GroebnerBasis<F> {
    pub(crate) fn from_reduced_unchecked(ring: &RingRef<F>, polys: Vec<Poly<F>>) -> Self {
        GroebnerBasis {
            ring: ring.clone(),
            polys,
            reduced: true,
        }
    }

    /// Accepts `polys` if they form a reduced Gröbner basis under the order
    /// of `ring`; the polynomials are sorted into canonical position.
    pub fn certify(ring: &RingRef<F>, polys: Vec<Poly<F>>) -> Result<Option<Self>> {
        let mut polys: Vec<Poly<F>> = polys.into_iter().map(|p| p.reorder(ring)).collect();
        if !is_reduced_gb(&polys, ring)? {
            return Ok(None);
        }
        let ord = ring.order();
        polys.sort_by(|a, b| ord.cmp(b.lm().unwrap(), a.lm().unwrap()));
        Ok(Some(Self::from_reduced_unchecked(ring, polys)))
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        self.ring.order()
    }

    pub fn polys(&self) -> &[Poly<F>] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<Poly<F>> {
        self.polys
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True for the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p.is_constant() && !p.is_zero())
    }

    /// Leading monomials in basis order.
    pub fn signature(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm().unwrap().clone()).collect()
    }

    pub fn normal_form(&self, f: &Poly<F>) -> Result<Poly<F>> {
        normal_form(&f.reorder(&self.ring), &self.polys)
    }

    pub fn contains(&self, f: &Poly<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}
