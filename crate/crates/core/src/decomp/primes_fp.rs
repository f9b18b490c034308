use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::multivariate::factor_fp;
use crate::deadline;
use crate::diq::is_prime_divisor_direct;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{dimension_and_mis, Ideal};
use crate::idealops::{hull_unmixed, intersect_all, mis_block_order, saturate, u_leading_coefficients};
use crate::polycore::{BlockKind, MonomialOrder, Poly, RingRef};

type Fp = PrimeField;

/// Recursion depth for the search of embedded primes.
pub const DEPTH_CAP: u32 = 8;
/// Linear forms tried before a zero-dimensional ideal is given up on.
const SEPARATING_TRIES: usize = 12;

/// Associated primes of an ideal over F_p.
#[derive(Debug, Clone)]
pub struct FpAssResult {
    /// Distinct primes, sorted by independent set and then basis.
    pub primes: Vec<Ideal<Fp>>,
    /// For each prime, its lexicographically smallest maximal independent set.
    pub mis: Vec<Vec<usize>>,
    /// False when the embedded-prime search hit [`DEPTH_CAP`].
    pub complete: bool,
}

fn mask(u: &[usize]) -> u64 {
    u.iter().fold(0, |m, &v| m | 1 << v)
}

/// Ring with one extra variable `t` (index `n`) and the order
/// `X∖U > t > U`, blockwise grevlex.
fn t_ring(ring: &RingRef<Fp>, u: &[usize]) -> Result<RingRef<Fp>> {
    let n = ring.nvars();
    let rest: Vec<usize> = (0..n).filter(|v| !u.contains(v)).collect();
    let order = MonomialOrder::blocks(&[(&rest, BlockKind::Grevlex), (&[n], BlockKind::Grevlex), (u, BlockKind::Grevlex)]);
    ring.extend(&["t"], order)
}

/// Variable map from `n` variables into the ring with `t` appended.
fn up_map(n: usize) -> Vec<Option<usize>> {
    (0..n).map(Some).chain([None]).collect()
}

/// Variable map back from the ring with `t`; `t` must not occur.
fn down_map(n: usize) -> Vec<Option<usize>> {
    (0..n).map(Some).collect()
}

/// Minimal polynomial of `target` over `K(U)` modulo `i`, as an element of
/// `K[U][t]` in the ring of [`t_ring`]. `i` must be zero-dimensional over `K(U)`.
fn minimal_polynomial(i: &Ideal<Fp>, target: &Poly<Fp>, u: &[usize]) -> Result<(RingRef<Fp>, Poly<Fp>)> {
    let ring = i.ring();
    let n = ring.nvars();
    let ext = t_ring(ring, u)?;
    let up = up_map(n);
    let mut gens: Vec<Poly<Fp>> = i.gb()?.polys().iter().map(|g| g.remap(&ext, &up)).collect();
    gens.push(&Poly::var(&ext, n) - &target.remap(&ext, &up));
    let gb = Ideal::new(&ext, gens)?.gb()?;
    let allowed = mask(u) | 1 << n;
    let best = gb
        .polys()
        .iter()
        .filter(|g| g.support_mask() & !allowed == 0 && g.degree_in(n) > 0)
        .min_by_key(|g| g.degree_in(n))
        .cloned()
        .ok_or_else(|| Error::InvalidMis(ring.var_names(u)))?;
    Ok((ext, best))
}

/// Irreducible factors of `m ∈ K[U][t]` of positive degree in `t`.
fn t_factors(m: &Poly<Fp>, t: usize) -> Result<Vec<Poly<Fp>>> {
    Ok(factor_fp(m)?
        .into_iter()
        .map(|(g, _)| g)
        .filter(|g| g.degree_in(t) > 0)
        .collect())
}

/// `g(target)` back in the ring of `target`.
fn eval_at(g: &Poly<Fp>, ext: &RingRef<Fp>, target: &Poly<Fp>) -> Result<Poly<Fp>> {
    let ring = target.ring();
    let n = ring.nvars();
    let value = target.remap(ext, &up_map(n));
    let sub = g.substitute(n, &value)?;
    Ok(sub.remap(ring, &down_map(n)))
}

/// `K(U)`-dimension of `K(U)[X∖U] / i`.
fn quotient_dimension(i: &Ideal<Fp>, u: &[usize]) -> Result<usize> {
    let ring = i.ring();
    let n = ring.nvars();
    let gb = i.gb_in(&mis_block_order(n, u))?;
    let rest: Vec<usize> = (0..n).filter(|v| !u.contains(v)).collect();
    let keep = mask(&rest);
    let lms: Vec<_> = gb.polys().iter().map(|g| g.lm().unwrap().project(keep)).collect();
    let mut bounds = Vec::with_capacity(rest.len());
    for &v in &rest {
        let b = lms
            .iter()
            .filter(|m| m.support().all(|w| w == v))
            .map(|m| m.exps()[v])
            .min()
            .ok_or_else(|| Error::InvalidMis(ring.var_names(u)))?;
        bounds.push(b);
    }
    // count exponent vectors below the bounds that no leading monomial divides
    let mut count = 0usize;
    let mut e = vec![0u32; n];
    loop {
        deadline::check()?;
        if !lms.iter().any(|m| m.exps().iter().zip(&e).all(|(a, b)| a <= b)) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == rest.len() {
                return Ok(count);
            }
            let v = rest[k];
            e[v] += 1;
            if e[v] < bounds[k] {
                break;
            }
            e[v] = 0;
            k += 1;
        }
    }
}

fn add_poly(i: &Ideal<Fp>, g: Poly<Fp>) -> Result<Ideal<Fp>> {
    let mut gens = i.gb()?.polys().to_vec();
    gens.push(g);
    Ideal::new(i.ring(), gens)
}

/// Primes of `i` that meet `K[U]` only in zero. `i` must be saturated with
/// respect to `K[U] ∖ 0` and zero-dimensional over `K(U)`.
fn primes_over(i: &Ideal<Fp>, u: &[usize]) -> Result<Vec<Ideal<Fp>>> {
    if i.is_unit()? {
        return Ok(Vec::new());
    }
    let ring = i.ring();
    let n = ring.nvars();
    let rest: Vec<usize> = (0..n).filter(|v| !u.contains(v)).collect();

    // split along eliminants with several irreducible factors
    let mut radical_gens = i.gb()?.polys().to_vec();
    for &v in &rest {
        deadline::check()?;
        let x = Poly::var(ring, v);
        let (ext, m) = minimal_polynomial(i, &x, u)?;
        let fs = t_factors(&m, n)?;
        if fs.len() > 1 {
            let mut out = Vec::new();
            for g in fs {
                let child = hull_unmixed(&add_poly(i, eval_at(&g, &ext, &x)?)?, u)?;
                out.extend(primes_over(&child, u)?);
            }
            return Ok(out);
        }
        let g = &fs[0];
        if g.degree_in(n) as u64 >= ring.field().modulus() {
            return Err(Error::Unsupported("eliminant degree reaches the characteristic".into()));
        }
        radical_gens.push(eval_at(g, &ext, &x)?);
    }

    // every eliminant is a power of one separable irreducible: this is the radical
    let j = hull_unmixed(&Ideal::new(ring, radical_gens)?, u)?;
    let dim = quotient_dimension(&j, u)?;
    if dim == 1 {
        return Ok(vec![j]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ring.field().modulus() ^ n as u64);
    let p = ring.field().modulus();
    for attempt in 0..SEPARATING_TRIES {
        deadline::check()?;
        let form = if attempt == 0 {
            Poly::var(ring, rest[rest.len() - 1])
        } else {
            rest.iter().fold(Poly::zero(ring), |acc, &v| {
                let c = rng.gen_range(1..p);
                &acc + &Poly::var(ring, v).scale(&c)
            })
        };
        let (ext, m) = minimal_polynomial(&j, &form, u)?;
        if m.degree_in(n) as usize != dim {
            continue;
        }
        let fs = t_factors(&m, n)?;
        if fs.len() == 1 {
            return Ok(vec![j]);
        }
        let mut out = Vec::new();
        for g in fs {
            out.push(hull_unmixed(&add_poly(&j, eval_at(&g, &ext, &form)?)?, u)?);
        }
        return Ok(out);
    }
    Err(Error::Unsupported("no separating linear form found".into()))
}

/// Candidate primes: those of `(I : h^∞)` for the product `h` of the
/// `K[U]`-leading coefficients, then recursively those of `I + ⟨h^s⟩`.
/// Returns whether the recursion finished.
fn candidates(i: &Ideal<Fp>, depth: u32, out: &mut Vec<Ideal<Fp>>) -> Result<bool> {
    if i.is_unit()? {
        return Ok(true);
    }
    if depth >= DEPTH_CAP {
        return Ok(false);
    }
    let ring = i.ring();
    let n = ring.nvars();
    let (_, sets) = dimension_and_mis(i)?;
    let u = sets.into_iter().next().unwrap_or_default();
    let gb = i.gb_in(&mis_block_order(n, &u))?;
    let lcs = u_leading_coefficients(gb.polys(), mask(&u), ring);
    let h = lcs.iter().try_fold(Poly::one(ring), |acc, c| acc.checked_mul(c))?;
    let (sat, s) = if h.is_constant() {
        (i.clone(), 0)
    } else {
        saturate(i, &Ideal::new(ring, vec![h.clone()])?)?
    };
    out.extend(primes_over(&sat, &u)?);
    if s == 0 {
        return Ok(true);
    }
    candidates(&add_poly(i, h.pow(s)?)?, depth + 1, out)
}

fn smallest_mis(p: &Ideal<Fp>) -> Result<Vec<usize>> {
    Ok(dimension_and_mis(p)?.1.into_iter().next().unwrap_or_default())
}

/// Associated primes of a proper ideal over F_p, embedded ones included.
///
/// Candidates come from splitting along factors of eliminants over `K(U)`
/// for a maximal independent set `U`, and from recursing on the part of
/// the ideal where the `K[U]`-leading coefficients vanish. Each candidate
/// is kept only if `P ⊇ (I : (I : P))`.
///
/// Assumes `p` exceeds the degrees of the eliminants met on the way (no
/// inseparable extensions); otherwise fails with `Unsupported`.
pub fn associated_primes_fp(i: &Ideal<Fp>) -> Result<FpAssResult> {
    if i.is_unit()? {
        return Err(Error::UnitIdeal);
    }
    let mut cands = Vec::new();
    let complete = candidates(i, 0, &mut cands)?;
    let mut keyed: Vec<(Vec<usize>, Vec<String>, Ideal<Fp>)> = Vec::new();
    for c in cands {
        let c = Ideal::from_gb((*c.gb()?).clone());
        if keyed.iter().any(|(_, _, k)| k.gb().ok() == c.gb().ok()) {
            continue;
        }
        if !is_prime_divisor_direct(i, &c)? {
            continue;
        }
        let strs = c.gens().iter().map(|g| g.to_string()).collect();
        keyed.push((smallest_mis(&c)?, strs, c));
    }
    keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(FpAssResult {
        mis: keyed.iter().map(|k| k.0.clone()).collect(),
        primes: keyed.into_iter().map(|k| k.2).collect(),
        complete,
    })
}

/// Primes of `res` not containing another of its primes.
pub fn minimal_primes(res: &FpAssResult) -> Result<Vec<Ideal<Fp>>> {
    let mut out = Vec::new();
    for (k, p) in res.primes.iter().enumerate() {
        let mut minimal = true;
        for (l, q) in res.primes.iter().enumerate() {
            if k != l && p.contains(q)? {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// `√I` over F_p as the intersection of the minimal primes. Fails with
/// `RadicalUnavailable` when the prime search was cut short.
pub fn radical_fp(i: &Ideal<Fp>) -> Result<Ideal<Fp>> {
    let res = associated_primes_fp(i)?;
    if !res.complete {
        return Err(Error::RadicalUnavailable("associated primes incomplete".into()));
    }
    intersect_all(i.ring(), &minimal_primes(&res)?)
}

/// Primes grouped by their chosen maximal independent set; every prime
/// lands in exactly one group.
pub fn group_by_mis(res: &FpAssResult) -> BTreeMap<Vec<usize>, Vec<Ideal<Fp>>> {
    let mut out: BTreeMap<Vec<usize>, Vec<Ideal<Fp>>> = BTreeMap::new();
    for (p, u) in res.primes.iter().zip(&res.mis) {
        out.entry(u.clone()).or_default().push(p.clone());
    }
    out
}
