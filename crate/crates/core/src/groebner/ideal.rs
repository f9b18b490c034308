use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::{buchberger, GroebnerBasis};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::polycore::{same_ring, MonomialOrder, Poly, RingRef};

/// A polynomial ideal given by generators, with reduced Gröbner bases cached
/// per monomial order. The cache allows concurrent reads and exclusive inserts.
pub struct Ideal<F: Field> {
    ring: RingRef<F>,
    gens: Vec<Poly<F>>,
    cache: RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis<F>>>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter().map(|g| g.to_string())).finish()
    }
}

impl<F: Field> Ideal<F> {
    /// Ideal generated by `gens`, moved into the order of `ring`. Zero
    /// generators are dropped.
    pub fn new(ring: &RingRef<F>, gens: Vec<Poly<F>>) -> Result<Self> {
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            if g.ring().vars() != ring.vars() || g.field() != ring.field() {
                return Err(Error::RingMismatch);
            }
            if !g.is_zero() {
                out.push(g.reorder(ring));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: out,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn zero(ring: &RingRef<F>) -> Self {
        Ideal::new(ring, Vec::new()).unwrap()
    }

    pub fn unit(ring: &RingRef<F>) -> Self {
        Ideal::from_gb(GroebnerBasis::from_reduced_unchecked(ring, vec![Poly::one(ring)]))
    }

    /// Ideal generated by a reduced basis, which seeds the cache.
    pub fn from_gb(gb: GroebnerBasis<F>) -> Self {
        let ring = gb.ring().clone();
        let gens = gb.polys().to_vec();
        let mut cache = HashMap::new();
        cache.insert(ring.order().clone(), Arc::new(gb));
        Ideal {
            ring,
            gens,
            cache: RwLock::new(cache),
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    /// Reduced Gröbner basis under the ring's order.
    pub fn gb(&self) -> Result<Arc<GroebnerBasis<F>>> {
        self.gb_in(self.ring.order())
    }

    /// Reduced Gröbner basis under `order`, living in the ring with that order.
    pub fn gb_in(&self, order: &MonomialOrder) -> Result<Arc<GroebnerBasis<F>>> {
        if let Some(gb) = self.cache.read().unwrap().get(order) {
            return Ok(gb.clone());
        }
        let ring = if order == self.ring.order() {
            self.ring.clone()
        } else {
            self.ring.with_order(order.clone())?
        };
        let gb = Arc::new(buchberger(&self.gens, &ring)?);
        self.cache
            .write()
            .unwrap()
            .entry(order.clone())
            .or_insert_with(|| gb.clone());
        Ok(gb)
    }

    /// The cached reduced basis under the ring's order, if already known.
    pub fn cached_gb(&self) -> Option<Arc<GroebnerBasis<F>>> {
        self.cache.read().unwrap().get(self.ring.order()).cloned()
    }

    /// Seeds the cache with a basis known to be the reduced basis of this ideal.
    pub(crate) fn seed(&self, gb: GroebnerBasis<F>) {
        self.cache
            .write()
            .unwrap()
            .insert(gb.order().clone(), Arc::new(gb));
    }

    /// The same ideal with generators in another ring over the same variables.
    pub fn in_ring(&self, ring: &RingRef<F>) -> Result<Self> {
        if same_ring(ring, &self.ring) {
            return Ok(self.clone());
        }
        let out = Ideal::new(ring, self.gens.clone())?;
        for gb in self.cache.read().unwrap().values() {
            out.cache
                .write()
                .unwrap()
                .insert(gb.order().clone(), gb.clone());
        }
        Ok(out)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring.vars() == other.ring.vars() && self.ring.field() == other.ring.field() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn is_unit(&self) -> Result<bool> {
        if self.gens.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        Ok(self.gb()?.is_unit())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains_poly(&self, f: &Poly<F>) -> Result<bool> {
        self.gb()?.contains(f)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check_ring(other)?;
        let gb = self.gb()?;
        for g in &other.gens {
            if !gb.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of ideals via reduced bases.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_ring(other)?;
        let a = self.gb()?;
        let b = other.in_ring(&self.ring)?.gb()?;
        Ok(a.polys() == b.polys())
    }

    /// `self + other`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| g.reorder(&self.ring)));
        Ideal::new(&self.ring, gens)
    }
}

/// Generators of `I ∩ K[X \ drop]`, computed under a block order whose first
/// block is `drop`. The result is a reduced basis for the ring's order.
pub fn eliminate<F: Field>(ideal: &Ideal<F>, drop: &[usize]) -> Result<Ideal<F>> {
    let ring = ideal.ring();
    if drop.iter().any(|&v| v >= ring.nvars()) {
        return Err(Error::InvalidArgument("elimination variable out of range".into()));
    }
    let elim = ring.order().elimination(drop, ring.nvars());
    let gb = ideal.gb_in(&elim)?;
    let dmask = drop.iter().fold(0u64, |m, &v| m | 1 << v);
    let mut kept: Vec<Poly<F>> = gb
        .polys()
        .iter()
        .filter(|p| p.support_mask() & dmask == 0)
        .map(|p| p.reorder(ring))
        .collect();
    let ord = ring.order();
    kept.sort_by(|a, b| ord.cmp(b.lm().unwrap(), a.lm().unwrap()));
    Ok(Ideal::from_gb(GroebnerBasis::from_reduced_unchecked(ring, kept)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::groebner::is_reduced_gb;
    use crate::polycore::Ring;

    fn ring(vars: &[&str]) -> RingRef<Rationals> {
        Ring::new(
            Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::Grevlex,
        )
        .unwrap()
    }

    #[test]
    fn elimination_examples() {
        let r = ring(&["t", "x", "y"]);
        let (t, x, y) = (Poly::var(&r, 0), Poly::var(&r, 1), Poly::var(&r, 2));
        let one = Poly::one(&r);
        let i = Ideal::new(&r, vec![&(&t * &x) - &one, &t * &y]).unwrap();
        let e = eliminate(&i, &[0]).unwrap();
        assert_eq!(e.gens(), std::slice::from_ref(&y));
        // y = -y(tx - 1) + x(ty)
        let witness = &(&y.neg() * &(&(&t * &x) - &one)) + &(&x * &(&t * &y));
        assert_eq!(witness, y);
        assert!(is_reduced_gb(e.gens(), &r).unwrap());

        let e2 = eliminate(&Ideal::new(&r, vec![x.clone()]).unwrap(), &[2]).unwrap();
        assert_eq!(e2.gens(), std::slice::from_ref(&x));
        let e3 = eliminate(&Ideal::unit(&r), &[0, 1]).unwrap();
        assert!(e3.is_unit().unwrap());
    }

    #[test]
    fn cache_and_containment() {
        let r = ring(&["x", "y"]);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let i = Ideal::new(&r, vec![x.clone()]).unwrap();
        let j = Ideal::new(&r, vec![&x * &x]).unwrap();
        assert!(i.contains(&j).unwrap());
        assert!(!j.contains(&i).unwrap());
        let lex = i.gb_in(&MonomialOrder::Lex).unwrap();
        assert!(Arc::ptr_eq(&lex, &i.gb_in(&MonomialOrder::Lex).unwrap()));
        let k = Ideal::new(&r, vec![&x + &y, &x - &y]).unwrap();
        let l = Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap();
        assert!(k.equals(&l).unwrap());
    }
}
