//! Dense univariate polynomials over F_p and their factorization:
//! squarefree decomposition, distinct-degree and equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{inv_mod, Field, PrimeField};
use crate::polycore::{Monomial, Poly, RingRef};

/// Coefficients, lowest degree first, with no trailing zeros. The zero
/// polynomial is empty.
pub(crate) type Dense = Vec<u64>;

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn trim(mut a: Dense) -> Dense {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Dense {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(out)
}

fn monic(a: &[u64], p: u64) -> Dense {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p).expect("nonzero residue");
            a.iter().map(|&c| mulm(c, inv, p)).collect()
        }
    }
}

/// Quotient and remainder; `b` must be nonzero.
fn divrem(a: &[u64], b: &[u64], p: u64) -> (Dense, Dense) {
    let db = deg(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p).expect("nonzero residue");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulm(r[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulm(c, y, p)) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Dense {
    divrem(a, b, p).1
}

fn div_exact(a: &[u64], b: &[u64], p: u64) -> Dense {
    let (q, r) = divrem(a, b, p);
    debug_assert!(r.is_empty());
    q
}

/// Monic gcd; `gcd(0, 0) = 0`.
fn gcd(a: &[u64], b: &[u64], p: u64) -> Dense {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

fn derivative(a: &[u64], p: u64) -> Dense {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulm(c, i as u64 % p, p))
        .collect();
    trim(out)
}

fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Dense {
    let mut acc: Dense = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    rem(&acc, m, p)
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime
/// squarefree factors with their multiplicities.
fn squarefree(f: &[u64], p: u64) -> Vec<(Dense, u32)> {
    let mut out = Vec::new();
    if deg(f).unwrap_or(0) == 0 {
        return out;
    }
    let mut g = gcd(f, &derivative(f, p), p);
    let mut w = div_exact(f, &g, p);
    let mut i = 1u32;
    while deg(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &g, p);
        let z = div_exact(&w, &y, p);
        if deg(&z).unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        g = div_exact(&g, &y, p);
        w = y;
    }
    if deg(&g).unwrap_or(0) > 0 {
        // g is a polynomial in x^p; its p-th root has the same coefficients
        let root: Dense = g.iter().step_by(p as usize).copied().collect();
        for (h, e) in squarefree(&root, p) {
            out.push((h, e * p as u32));
        }
    }
    out
}

/// Splits a monic squarefree `f` into products of irreducibles of equal
/// degree: `(product, degree)`.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(Dense, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x: Dense = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1;
    while deg(&f).unwrap_or(0) >= 2 * d {
        h = powmod(&h, p, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if deg(&g).unwrap_or(0) > 0 {
            f = div_exact(&f, &g, p);
            h = rem(&h, &f, p);
            out.push((g, d));
        }
        d += 1;
    }
    if deg(&f).unwrap_or(0) > 0 {
        let n = deg(&f).unwrap();
        out.push((f, n));
    }
    out
}

/// `a^((p^d - 1)/2) mod f` for odd `p`, or the trace `Σ a^(2^i)`, `i < d`,
/// for `p = 2`.
fn splitter(a: &[u64], d: usize, f: &[u64], p: u64) -> Dense {
    if p == 2 {
        let mut t = rem(a, f, p);
        let mut acc = t.clone();
        for _ in 1..d {
            t = rem(&mul(&t, &t, p), f, p);
            acc = sub(&acc, &t, p);
        }
        return acc;
    }
    // (p^d - 1)/2 = (1 + p + … + p^(d-1)) · (p - 1)/2
    let mut t = rem(a, f, p);
    let mut acc = t.clone();
    for _ in 1..d {
        t = powmod(&t, p, f, p);
        acc = rem(&mul(&acc, &t, p), f, p);
    }
    let b = powmod(&acc, (p - 1) / 2, f, p);
    sub(&b, &[1], p)
}

/// Irreducible factors of a monic squarefree `f` whose factors all have degree `d`.
fn equal_degree(f: Dense, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Dense> {
    let n = deg(&f).unwrap_or(0);
    if n <= d {
        return vec![f];
    }
    loop {
        let a: Dense = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g = gcd(&splitter(&a, d, &f, p), &f, p);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = div_exact(&f, &g, p);
            let mut out = equal_degree(g, d, p, rng);
            out.extend(equal_degree(h, d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by degree and then
/// coefficients. Constants give an empty list.
pub(crate) fn factor_dense(f: &[u64], p: u64) -> Vec<(Dense, u32)> {
    let f = monic(&trim(f.to_vec()), p);
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ f.len() as u64);
    let mut out = Vec::new();
    for (s, e) in squarefree(&f, p) {
        for (g, d) in distinct_degree(&s, p) {
            for h in equal_degree(g, d, p, &mut rng) {
                out.push((h, e));
            }
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
    out
}

/// The only variable of `f`, or `None` for constants. Errors when `f`
/// involves several variables.
fn sole_variable<F: Field>(f: &Poly<F>) -> Result<Option<usize>> {
    let mask = f.support_mask();
    match mask.count_ones() {
        0 => Ok(None),
        1 => Ok(Some(mask.trailing_zeros() as usize)),
        _ => Err(Error::InvalidArgument(format!("{f} is not univariate"))),
    }
}

pub(crate) fn to_dense(f: &Poly<PrimeField>, v: usize) -> Dense {
    let n = f.degree_in(v) as usize;
    let mut out = vec![0u64; n + 1];
    for (m, c) in f.terms() {
        out[m.exps()[v] as usize] = *c;
    }
    trim(out)
}

pub(crate) fn from_dense(a: &[u64], ring: &RingRef<PrimeField>, v: usize) -> Poly<PrimeField> {
    let n = ring.nvars();
    let terms = a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let mut e = vec![0u32; n];
            e[v] = i as u32;
            (Monomial::new(&e).expect("small exponent"), c)
        })
        .collect();
    Poly::from_terms(ring, terms).expect("arity matches")
}

/// Complete factorization of a univariate polynomial over F_p into monic
/// irreducibles with multiplicities; the product of the factors is `f`
/// made monic. Fails on zero or on polynomials in several variables.
pub fn factor_univariate_fp(f: &Poly<PrimeField>) -> Result<Vec<(Poly<PrimeField>, u32)>> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let Some(v) = sole_variable(f)? else {
        return Ok(Vec::new());
    };
    let p = f.field().modulus();
    Ok(factor_dense(&to_dense(f, v), p)
        .into_iter()
        .map(|(g, e)| (from_dense(&g, f.ring(), v), e))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{MonomialOrder, Ring};
    use proptest::prelude::*;

    fn ring(p: u64) -> RingRef<PrimeField> {
        Ring::new(PrimeField::new(p), vec!["x".into()], MonomialOrder::Grevlex).unwrap()
    }

    fn strs(fs: &[(Poly<PrimeField>, u32)]) -> Vec<(String, u32)> {
        fs.iter().map(|(g, e)| (g.to_string(), *e)).collect()
    }

    #[test]
    fn small_examples() {
        let r5 = ring(5);
        let f = from_dense(&[1, 0, 1], &r5, 0);
        assert_eq!(strs(&factor_univariate_fp(&f).unwrap()), [("x + 2".into(), 1), ("x + 3".into(), 1)]);
        let r3 = ring(3);
        let f = from_dense(&[1, 0, 1], &r3, 0);
        assert_eq!(strs(&factor_univariate_fp(&f).unwrap()), [("x^2 + 1".into(), 1)]);
        for p in [2, 3, 7, 101] {
            let r = ring(p);
            let f = from_dense(&[0, 0, 1], &r, 0);
            assert_eq!(strs(&factor_univariate_fp(&f).unwrap()), [("x".into(), 2)]);
        }
        assert!(factor_univariate_fp(&Poly::constant(&r5, 3)).unwrap().is_empty());
        assert!(factor_univariate_fp(&Poly::zero(&r5)).is_err());
    }

    #[test]
    fn pth_powers_and_characteristic_two() {
        // x^3 + 1 = (x + 1)^3 over F_3
        let r3 = ring(3);
        let f = from_dense(&[1, 0, 0, 1], &r3, 0);
        assert_eq!(strs(&factor_univariate_fp(&f).unwrap()), [("x + 1".into(), 3)]);
        // x^4 + x = x (x + 1) (x^2 + x + 1) over F_2
        let r2 = ring(2);
        let f = from_dense(&[0, 1, 0, 0, 1], &r2, 0);
        let fs = factor_univariate_fp(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[2].0.to_string(), "x^2 + x + 1");
    }

    fn expand(fs: &[(Dense, u32)], p: u64) -> Dense {
        let mut acc: Dense = vec![1];
        for (g, e) in fs {
            for _ in 0..*e {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    fn is_irreducible(g: &[u64], p: u64) -> bool {
        let d = deg(g).unwrap();
        // no factor of degree ≤ d/2: gcd(x^(p^k) - x, g) = 1 for k ≤ d/2
        let x: Dense = vec![0, 1];
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = powmod(&h, p, g, p);
            if deg(&gcd(&sub(&h, &x, p), g, p)).unwrap_or(0) > 0 {
                return false;
            }
        }
        true
    }

    proptest! {
        #[test]
        fn factors_multiply_back_and_are_irreducible(
            coeffs in proptest::collection::vec(0u64..1000, 1..12),
            pi in 0usize..5,
        ) {
            let p = [2u64, 3, 5, 13, 1_000_003][pi];
            let f = trim(coeffs.iter().map(|c| c % p).collect());
            prop_assume!(deg(&f).unwrap_or(0) > 0);
            let fs = factor_dense(&f, p);
            prop_assert_eq!(expand(&fs, p), monic(&f, p));
            for (g, _) in &fs {
                prop_assert!(is_irreducible(g, p));
            }
        }
    }
}
