use crate::deadline;
use crate::error::Result;
use crate::field::Field;
use crate::polycore::{Monomial, Poly};

/// Steps between deadline checks inside a single reduction.
const CHECK_EVERY: usize = 512;

fn mask_of(m: &Monomial) -> u64 {
    m.support().fold(0u64, |a, i| a | 1 << (i & 63))
}

/// Divisor lookup over a fixed list of reducers, first match in list order.
pub(crate) struct Divisors<'a, F: Field> {
    polys: Vec<&'a Poly<F>>,
    masks: Vec<u64>,
}

impl<'a, F: Field> Divisors<'a, F> {
    pub(crate) fn new(polys: impl IntoIterator<Item = &'a Poly<F>>) -> Self {
        let polys: Vec<&Poly<F>> = polys.into_iter().filter(|g| !g.is_zero()).collect();
        let masks = polys.iter().map(|g| mask_of(g.lm().unwrap())).collect();
        Divisors { polys, masks }
    }

    #[inline]
    pub(crate) fn find(&self, m: &Monomial) -> Option<(&'a Poly<F>, Monomial)> {
        let mm = mask_of(m);
        for (g, gm) in self.polys.iter().zip(&self.masks) {
            if gm & !mm != 0 {
                continue;
            }
            if let Some(q) = g.lm().unwrap().quotient_of(m) {
                return Some((g, q));
            }
        }
        None
    }
}

/// Fully reduces `f` by `basis`: the result differs from `f` by an element of
/// the ideal and has no term divisible by a leading monomial of `basis`.
/// Reducers are tried in list order. Honours the installed deadline.
pub fn normal_form<F: Field>(f: &Poly<F>, basis: &[Poly<F>]) -> Result<Poly<F>> {
    reduce_with(f, &Divisors::new(basis), false)
}

/// Like [`normal_form`] but stops at the first irreducible leading term.
pub fn top_reduce<F: Field>(f: &Poly<F>, basis: &[Poly<F>]) -> Result<Poly<F>> {
    reduce_with(f, &Divisors::new(basis), true)
}

pub(crate) fn reduce_with<F: Field>(f: &Poly<F>, div: &Divisors<'_, F>, top_only: bool) -> Result<Poly<F>> {
    let field = f.field().clone();
    let mut p = f.clone();
    let mut done: Vec<(Monomial, F::Elem)> = Vec::new();
    let mut steps = 0usize;
    while let Some((m, c)) = p.terms().first() {
        steps += 1;
        if steps.is_multiple_of(CHECK_EVERY) {
            deadline::check()?;
        }
        match div.find(m) {
            Some((g, q)) => {
                let lc = g.lc().unwrap();
                let coef = if field.is_one(lc) { c.clone() } else { field.div(c, lc) };
                p = p.sub_mul_term(&coef, &q, g);
            }
            None if top_only => break,
            None => done.extend(p.pop_lead()),
        }
    }
    if done.is_empty() {
        return Ok(p);
    }
    done.extend(p.into_terms());
    Ok(Poly::from_sorted(f.ring(), done))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::polycore::{MonomialOrder, Ring, RingRef};

    fn ring(order: MonomialOrder) -> RingRef<Rationals> {
        Ring::new(Rationals, vec!["x".into(), "y".into()], order).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(MonomialOrder::Lex);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let one = Poly::one(&r);
        assert!(normal_form(&(&x * &x), std::slice::from_ref(&x)).unwrap().is_zero());
        let g = &(&x * &x) - &y;
        let f = &(&x * &x) + &y;
        assert_eq!(normal_form(&f, &[g]).unwrap().to_string(), "2*y");
        // xy -> -y -> 1
        let nf = normal_form(&(&x * &y), &[&x + &one, &y + &one]).unwrap();
        assert_eq!(nf, one);
    }

    #[test]
    fn first_divisor_wins() {
        let r = ring(MonomialOrder::Grevlex);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let one = Poly::one(&r);
        let f = &x * &y;
        let a = normal_form(&f, &[&x - &one, &y + &one]).unwrap();
        let b = normal_form(&f, &[&y + &one, &x - &one]).unwrap();
        assert_eq!(a.to_string(), "-1");
        assert_eq!(b.to_string(), "-1");
        assert_eq!(top_reduce(&(&f + &y), &[&x - &one]).unwrap().to_string(), "2*y");
    }
}
