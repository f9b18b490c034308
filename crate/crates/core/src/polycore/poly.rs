use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::Monomial;
use super::ring::{same_ring, RingRef};
use crate::error::{Error, Result};
use crate::field::Field;

/// Total degree with a distinguished value for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

/// A sparse distributed polynomial.
///
/// Terms are sorted strictly descending under the ring's order and carry no
/// zero coefficients; the zero polynomial has no terms.
#[derive(Clone, Debug)]
pub struct Poly<F: Field> {
    ring: RingRef<F>,
    terms: Vec<(Monomial, F::Elem)>,
}

pub type Term<F> = (Monomial, <F as Field>::Elem);

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_ring(&self.ring, &other.ring)
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> Poly<F> {
    pub fn zero(ring: &RingRef<F>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &RingRef<F>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &RingRef<F>, c: F::Elem) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn var(ring: &RingRef<F>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index), ring.field().one())
    }

    pub fn monomial(ring: &RingRef<F>, m: Monomial, c: F::Elem) -> Self {
        debug_assert_eq!(m.arity(), ring.nvars());
        let terms = if ring.field().is_zero(&c) {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from terms in any order, combining duplicates and
    /// dropping zeros.
    pub fn from_terms(ring: &RingRef<F>, mut terms: Vec<Term<F>>) -> Result<Self> {
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.arity() != ring.nvars()) {
            return Err(Error::ArityMismatch {
                left: m.arity(),
                right: ring.nvars(),
            });
        }
        let ord = ring.order();
        let field = ring.field();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Ok(Poly {
            ring: ring.clone(),
            terms: out,
        })
    }

    /// Caller guarantees the term invariants.
    pub(crate) fn from_sorted(ring: &RingRef<F>, terms: Vec<Term<F>>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !ring.field().is_zero(c)));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    #[inline]
    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    #[inline]
    pub fn field(&self) -> &F {
        self.ring.field()
    }

    #[inline]
    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    /// Removes and returns the leading term.
    pub(crate) fn pop_lead(&mut self) -> Option<Term<F>> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    pub fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.field().is_one(&self.terms[0].1)
    }

    #[inline]
    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    #[inline]
    pub fn lc(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Largest exponent of variable `v`; 0 for the zero polynomial.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exps()[v]).max().unwrap_or(0)
    }

    /// Bitmask of variables occurring in the polynomial.
    pub fn support_mask(&self) -> u64 {
        self.terms
            .iter()
            .fold(0u64, |acc, (m, _)| m.support().fold(acc, |a, i| a | 1 << i))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.merge(other, |c| c.clone()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let f = self.field().clone();
        Ok(self.merge(other, move |c| f.neg(c)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Self::zero(&self.ring);
        for (m, c) in &small.terms {
            let part = big.try_mul_term(m, c)?;
            acc = acc.merge(&part, |c| c.clone());
        }
        Ok(acc)
    }

    /// `self + t(other)` term-wise merge, `t` applied to coefficients of `other`.
    fn merge(&self, other: &Self, t: impl Fn(&F::Elem) -> F::Elem) -> Self {
        let ord = self.ring.order();
        let field = self.field();
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match ord.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), t(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(&a[i].1, &t(&b[j].1));
                    if !field.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), t(c))));
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    /// `self - c * m * g`, the elementary reduction step.
    pub fn sub_mul_term(self, c: &F::Elem, m: &Monomial, g: &Self) -> Self {
        let ring = self.ring;
        let ord = ring.order();
        let field = ring.field();
        let mut out = Vec::with_capacity(self.terms.len() + g.len());
        let mut a = self.terms.into_iter().peekable();
        for (gm, gc) in &g.terms {
            let pm = gm.mul(m);
            while let Some(t) = a.next_if(|t| ord.cmp(&t.0, &pm) == Ordering::Greater) {
                out.push(t);
            }
            match a.next_if(|t| t.0 == pm) {
                Some((_, ac)) => {
                    let v = field.sub_mul(&ac, c, gc);
                    if !field.is_zero(&v) {
                        out.push((pm, v));
                    }
                }
                None => out.push((pm, field.neg(&field.mul(c, gc)))),
            }
        }
        out.extend(a);
        Poly { ring, terms: out }
    }

    pub fn neg(&self) -> Self {
        let f = self.field();
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field();
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn try_mul_term(&self, m: &Monomial, c: &F::Elem) -> Result<Self> {
        let f = self.field();
        if f.is_zero(c) {
            return Ok(Self::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.len());
        for (tm, tc) in &self.terms {
            terms.push((tm.try_mul(m)?, f.mul(tc, c)));
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Product with a term; panics on exponent overflow.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        self.try_mul_term(m, c).expect("exponent overflow")
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(lc) if self.field().is_one(lc) => self.clone(),
            Some(lc) => self.scale(&self.field().inv(lc)),
        }
    }

    /// Exact division by a monomial times a constant; `None` unless every term
    /// is divisible.
    pub fn div_term(&self, m: &Monomial, c: &F::Elem) -> Option<Self> {
        let f = self.field();
        let ci = f.inv(c);
        let mut terms = Vec::with_capacity(self.len());
        for (tm, tc) in &self.terms {
            terms.push((m.quotient_of(tm)?, f.mul(tc, &ci)));
        }
        Some(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Exact division `self / g`; `None` when `g` does not divide `self`.
    pub fn exact_div(&self, g: &Self) -> Option<Self> {
        let (gm, gc) = (g.lm()?.clone(), g.lc()?.clone());
        let f = self.field();
        let ginv = f.inv(&gc);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = gm.quotient_of(&m)?;
            let qc = f.mul(&c, &ginv);
            rem = rem.sub_mul_term(&qc, &q, g);
            quot.push((q, qc));
        }
        Some(Poly::from_sorted(&self.ring, quot))
    }

    /// The same polynomial in a ring with identical variables but another order.
    pub fn reorder(&self, ring: &RingRef<F>) -> Self {
        debug_assert_eq!(ring.vars(), self.ring.vars());
        let mut terms = self.terms.clone();
        let ord = ring.order();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Moves the polynomial into `ring`, variable `i` of the target taking the
    /// exponent of variable `map[i]` of the source (`None` means absent).
    pub fn remap(&self, ring: &RingRef<F>, map: &[Option<usize>]) -> Self {
        debug_assert_eq!(map.len(), ring.nvars());
        let terms = self.terms.iter().map(|(m, c)| (m.remap(map), c.clone())).collect();
        Poly::from_terms(ring, terms).expect("arity matches by construction")
    }

    /// Coefficient-wise image in another field over the same variables.
    /// Returns `None` if `f` fails on some coefficient.
    pub fn map_coeffs<G: Field>(
        &self,
        ring: &RingRef<G>,
        f: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Option<Poly<G>> {
        let g = ring.field();
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let v = f(c)?;
            if !g.is_zero(&v) {
                terms.push((m.clone(), v));
            }
        }
        Some(Poly::from_terms(ring, terms).expect("same arity"))
    }

    /// Substitutes `value` for variable `v`.
    pub fn substitute(&self, v: usize, value: &Self) -> Result<Self> {
        self.check_ring(value)?;
        let maxd = self.degree_in(v) as usize;
        let mut powers = Vec::with_capacity(maxd + 1);
        powers.push(Self::one(&self.ring));
        for k in 1..=maxd {
            let next = powers[k - 1].checked_mul(value)?;
            powers.push(next);
        }
        let mut acc = Self::zero(&self.ring);
        let mut rest = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exps()[v] as usize;
            let mut exps = m.exps().to_vec();
            exps[v] = 0;
            let stripped = Monomial::new(&exps)?;
            if e == 0 {
                rest.push((stripped, c.clone()));
            } else {
                acc = acc.checked_add(&powers[e].try_mul_term(&stripped, c)?)?;
            }
        }
        acc.checked_add(&Poly::from_terms(&self.ring, rest)?)
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        let ord = self.ring.order();
        self.terms
            .binary_search_by(|(tm, _)| ord.cmp(m, tm))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field().zero())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = self.field().display_parts(c);
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if mag != "1" || m.is_one() {
                write!(f, "{mag}")?;
                first = false;
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", vars[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Self) -> Poly<F> {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Self) -> Poly<F> {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Self) -> Poly<F> {
        self.checked_mul(rhs).expect("ring mismatch or exponent overflow")
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::polycore::order::MonomialOrder;
    use crate::polycore::ring::Ring;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn qring(vars: &[&str]) -> RingRef<Rationals> {
        Ring::new(
            Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::Grevlex,
        )
        .unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn basic_identities() {
        let r = qring(&["x"]);
        let x = Poly::var(&r, 0);
        let one = Poly::one(&r);
        let a = &x + &one;
        let b = &x - &one;
        assert!((&a + &a.neg()).is_zero());
        assert_eq!((&a * &b).to_string(), "x^2 - 1");
        let x2p1 = &(&x * &x) + &one;
        assert_eq!((&x2p1 * &a).to_string(), "x^3 + x^2 + x + 1");
        assert_eq!(Poly::zero(&r).degree(), Degree::NegInfinity);
        assert_eq!(x2p1.degree(), Degree::Finite(2));
    }

    #[test]
    fn display_rational_coefficients() {
        let r = qring(&["x", "y"]);
        let f = Poly::from_terms(
            &r,
            vec![
                (Monomial::new(&[2, 1]).unwrap(), q(1)),
                (Monomial::new(&[1, 0]).unwrap(), BigRational::new(3.into(), 2.into())),
                (Monomial::one(2), q(-1)),
            ],
        )
        .unwrap();
        assert_eq!(f.to_string(), "x^2*y + 3/2*x - 1");
    }

    #[test]
    fn exact_division_and_substitution() {
        let r = qring(&["x", "y"]);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let f = &(&x + &y) * &(&x - &y);
        assert_eq!(f.exact_div(&(&x + &y)), Some(&x - &y));
        assert_eq!(f.exact_div(&(&x + &Poly::one(&r))), None);
        let g = f.substitute(1, &x).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn ring_mismatch_is_error() {
        let a = Poly::var(&qring(&["x"]), 0);
        let b = Poly::var(&qring(&["y"]), 0);
        assert_eq!(a.checked_add(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn prime_field_polys() {
        let r = Ring::new(PrimeField::new(5), vec!["x".into()], MonomialOrder::Lex).unwrap();
        let x = Poly::var(&r, 0);
        let two = Poly::constant(&r, 2);
        let three = Poly::constant(&r, 3);
        let prod = &(&x + &two) * &(&x + &three);
        assert_eq!(prod.to_string(), "x^2 + 1");
    }

    fn arb_poly(r: RingRef<Rationals>) -> impl Strategy<Value = Poly<Rationals>> {
        prop::collection::vec((prop::collection::vec(0u32..3, 2), -5i64..=5, 1i64..=3), 0..5)
            .prop_map(move |ts| {
                let terms = ts
                    .into_iter()
                    .map(|(e, a, b)| (Monomial::new(&e).unwrap(), BigRational::new(a.into(), b.into())))
                    .collect();
                Poly::from_terms(&r, terms).unwrap()
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(
            (a, b, c) in {
                let r = qring(&["x", "y"]);
                (arb_poly(r.clone()), arb_poly(r.clone()), arb_poly(r))
            }
        ) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }
    }
}
