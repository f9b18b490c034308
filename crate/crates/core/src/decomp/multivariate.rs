//! Multivariate factorization over F_p by Kronecker substitution: map
//! `x_j ↦ z^(B_0 ⋯ B_(j-1))` with each `B_i` above the partial degree in
//! `x_i`, factor the image, and recombine subsets of univariate factors
//! whose preimage divides.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::univariate::{factor_dense, mul, Dense};
use crate::deadline;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::polycore::{Monomial, Poly};

/// Most univariate factors accepted for subset recombination.
pub const MAX_RECOMBINATION_FACTORS: usize = 18;
/// Largest degree of the Kronecker image.
pub const MAX_IMAGE_DEGREE: u64 = 1 << 16;

struct Kronecker {
    vars: Vec<usize>,
    /// Radix per entry of `vars`.
    bases: Vec<u64>,
    nvars: usize,
}

impl Kronecker {
    fn encode(&self, m: &Monomial) -> u64 {
        self.vars
            .iter()
            .zip(&self.bases)
            .rev()
            .fold(0, |acc, (&v, &b)| acc * b + m.exps()[v] as u64)
    }

    fn decode(&self, mut k: u64) -> Monomial {
        let mut e = vec![0u32; self.nvars];
        for (&v, &b) in self.vars.iter().zip(&self.bases) {
            e[v] = (k % b) as u32;
            k /= b;
        }
        Monomial::new(&e).expect("small exponent")
    }

    fn image(&self, f: &Poly<PrimeField>) -> Dense {
        let top = f.terms().iter().map(|(m, _)| self.encode(m)).max().unwrap_or(0);
        let mut out = vec![0u64; top as usize + 1];
        for (m, c) in f.terms() {
            out[self.encode(m) as usize] = *c;
        }
        out
    }

    fn preimage(&self, a: &[u64], like: &Poly<PrimeField>) -> Poly<PrimeField> {
        let terms = a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (self.decode(k as u64), c))
            .collect();
        Poly::from_terms(like.ring(), terms).expect("arity matches")
    }
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_subset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Shift attempts when the Kronecker image has too many factors.
const SHIFT_TRIES: u64 = 6;

/// `f(x + c)` for the variable/offset pairs in `shift`.
fn shifted(f: &Poly<PrimeField>, shift: &[(usize, u64)], sign: bool) -> Result<Poly<PrimeField>> {
    let p = f.field().modulus();
    let ring = f.ring();
    let mut out = f.clone();
    for &(v, c) in shift {
        let c = if sign { c } else { (p - c) % p };
        let value = &Poly::var(ring, v) + &Poly::constant(ring, c);
        out = out.substitute(v, &value)?;
    }
    Ok(out)
}

/// Monic irreducible factors of `f` over F_p with multiplicities, sorted by
/// their printed form. Constants give an empty list. Fails with
/// `Unsupported` when the image is too large or has too many factors.
pub fn factor_fp(f: &Poly<PrimeField>) -> Result<Vec<(Poly<PrimeField>, u32)>> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let ring = f.ring();
    let n = ring.nvars();
    // monomial content first: it would only add z-factors to the image
    let mut content = vec![u32::MAX; n];
    for (m, _) in f.terms() {
        for (c, &e) in content.iter_mut().zip(m.exps()) {
            *c = (*c).min(e);
        }
    }
    let mut found: Vec<Poly<PrimeField>> = Vec::new();
    for (v, &e) in content.iter().enumerate() {
        for _ in 0..e {
            found.push(Poly::var(ring, v));
        }
    }
    let cm = Monomial::new(&content)?;
    let rest = f.exact_div(&Poly::from_terms(ring, vec![(cm, 1)])?).expect("monomial content divides");

    let mask = rest.support_mask();
    let vars: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
    if !vars.is_empty() {
        let bases: Vec<u64> = vars.iter().map(|&v| rest.degree_in(v) as u64 + 1).collect();
        let top = bases.iter().try_fold(1u64, |acc, &b| acc.checked_mul(b));
        if top.is_none_or(|t| t > MAX_IMAGE_DEGREE) {
            return Err(Error::Unsupported(format!("Kronecker image of {f} is too large")));
        }
        let seed = top.unwrap() ^ f.field().modulus();
        let kr = Kronecker { vars, bases, nvars: n };
        let p = f.field().modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fewest = usize::MAX;
        let mut done = false;
        for attempt in 0..SHIFT_TRIES {
            deadline::check()?;
            let shift: Vec<(usize, u64)> = if attempt == 0 {
                Vec::new()
            } else {
                kr.vars.iter().map(|&v| (v, rng.gen_range(0..p))).collect()
            };
            let g = shifted(&rest, &shift, true)?;
            let items = image_factors(&kr, &g, p);
            fewest = fewest.min(items.len());
            if items.len() > MAX_RECOMBINATION_FACTORS {
                continue;
            }
            for h in recombine(&kr, &g, items, p)? {
                found.push(shifted(&h, &shift, false)?.monic());
            }
            done = true;
            break;
        }
        if !done {
            return Err(Error::Unsupported(format!(
                "{fewest} modular factors exceed the recombination limit"
            )));
        }
    }

    let mut out: Vec<(Poly<PrimeField>, u32)> = Vec::new();
    for g in found {
        match out.iter_mut().find(|(h, _)| *h == g) {
            Some((_, e)) => *e += 1,
            None => out.push((g, 1)),
        }
    }
    out.sort_by_key(|(g, _)| g.to_string());
    Ok(out)
}

/// Irreducible factors of the image, repeated by multiplicity.
fn image_factors(kr: &Kronecker, f: &Poly<PrimeField>, p: u64) -> Vec<Dense> {
    let mut items = Vec::new();
    for (g, e) in factor_dense(&kr.image(f), p) {
        for _ in 0..e {
            items.push(g.clone());
        }
    }
    items
}

/// Factors of `f` from subsets of image factors whose preimage divides,
/// smallest subsets first so every factor found is irreducible.
fn recombine(kr: &Kronecker, f: &Poly<PrimeField>, mut items: Vec<Dense>, p: u64) -> Result<Vec<Poly<PrimeField>>> {
    let mut found = Vec::new();
    let mut rest = f.monic();
    let mut size = 1;
    while !rest.is_constant() {
        // a larger subset's complement would already have divided
        if 2 * size > items.len() {
            found.push(rest.monic());
            break;
        }
        let mut idx: Vec<usize> = (0..size).collect();
        let mut hit = None;
        loop {
            deadline::check()?;
            let prod = idx.iter().fold(vec![1u64], |acc, &i| mul(&acc, &items[i], p));
            let cand = kr.preimage(&prod, f).monic();
            if !cand.is_constant() {
                if let Some(q) = rest.exact_div(&cand) {
                    hit = Some((cand, q));
                    break;
                }
            }
            if !next_subset(&mut idx, items.len()) {
                break;
            }
        }
        match hit {
            Some((cand, q)) => {
                for &i in idx.iter().rev() {
                    items.remove(i);
                }
                found.push(cand);
                rest = q;
            }
            None => size += 1,
        }
    }
    Ok(found)
}
