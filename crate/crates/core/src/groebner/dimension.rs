use super::Ideal;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::polycore::Monomial;

/// Largest arity for which independent sets are enumerated.
pub const MAX_MIS_VARS: usize = 16;

fn independent(lms: &[Monomial], mask: u64) -> bool {
    !lms.iter().any(|m| m.supported_in(mask))
}

fn indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Dimension and all independent sets of maximum size for the monomial ideal
/// generated by `lms` in `nvars` variables. Sets are index lists in
/// increasing order, listed lexicographically.
pub fn lt_dimension_and_mis(lms: &[Monomial], nvars: usize) -> Result<(usize, Vec<Vec<usize>>)> {
    if nvars > MAX_MIS_VARS {
        return Err(Error::TooManyVariables(nvars));
    }
    if lms.iter().any(|m| m.is_one()) {
        return Err(Error::UnitIdeal);
    }
    let mut best = 0usize;
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for mask in 0u64..(1u64 << nvars) {
        let size = mask.count_ones() as usize;
        if size < best || !independent(lms, mask) {
            continue;
        }
        if size > best {
            best = size;
            sets.clear();
        }
        sets.push(indices(mask));
    }
    sets.sort();
    Ok((best, sets))
}

/// Krull dimension of `I` and its independent sets of maximum size, read off
/// the leading monomials of the reduced basis under the ring's order.
pub fn dimension_and_mis<F: Field>(ideal: &Ideal<F>) -> Result<(usize, Vec<Vec<usize>>)> {
    let n = ideal.ring().nvars();
    if n > MAX_MIS_VARS {
        return Err(Error::TooManyVariables(n));
    }
    let gb = ideal.gb()?;
    lt_dimension_and_mis(&gb.signature(), n)
}

/// True when no leading monomial of the basis lies in `K[U]`.
pub fn is_independent<F: Field>(ideal: &Ideal<F>, u: &[usize]) -> Result<bool> {
    let gb = ideal.gb()?;
    let mask = u.iter().fold(0u64, |m, &v| m | 1 << v);
    Ok(independent(&gb.signature(), mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::polycore::{MonomialOrder, Poly, Ring, RingRef};

    fn ring(order: MonomialOrder) -> RingRef<Rationals> {
        Ring::new(Rationals, vec!["x".into(), "y".into()], order).unwrap()
    }

    #[test]
    fn examples() {
        let r = ring(MonomialOrder::Grevlex);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let i = Ideal::new(&r, vec![&x * &y]).unwrap();
        assert_eq!(dimension_and_mis(&i).unwrap(), (1, vec![vec![0], vec![1]]));
        let i = Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap();
        assert_eq!(dimension_and_mis(&i).unwrap(), (0, vec![vec![]]));
        let i = Ideal::new(&r, vec![&(&x * &x) - &y]).unwrap();
        assert_eq!(dimension_and_mis(&i).unwrap(), (1, vec![vec![1]]));
        assert_eq!(dimension_and_mis(&Ideal::unit(&r)), Err(Error::UnitIdeal));
        assert_eq!(dimension_and_mis(&Ideal::zero(&r)).unwrap(), (2, vec![vec![0, 1]]));
    }

    #[test]
    fn brute_force_agrees() {
        // x^2*y, x*y^3 in 3 variables: every subset checked by hand-rolled search
        let lms = [Monomial::new(&[2, 1, 0]).unwrap(), Monomial::new(&[1, 3, 0]).unwrap()];
        let (d, sets) = lt_dimension_and_mis(&lms, 3).unwrap();
        assert_eq!(d, 2);
        assert_eq!(sets, vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn dimension_agrees_across_orders() {
        let rl = ring(MonomialOrder::Lex);
        let (x, y) = (Poly::var(&rl, 0), Poly::var(&rl, 1));
        let i = Ideal::new(&rl, vec![&(&x * &x) - &y]).unwrap();
        let rg = ring(MonomialOrder::Grevlex);
        let (dl, mis_l) = dimension_and_mis(&i).unwrap();
        let (dg, _) = dimension_and_mis(&i.in_ring(&rg).unwrap()).unwrap();
        assert_eq!(dl, dg);
        // under lex x > y the leading term is x^2 as well
        assert_eq!(mis_l, vec![vec![1]]);
        assert_eq!(lt_dimension_and_mis(&[], 17), Err(Error::TooManyVariables(17)));
    }
}
