use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use super::reduce::{reduce_with, Divisors};
use super::GroebnerBasis;
use crate::deadline;
use crate::error::Result;
use crate::field::Field;
use crate::polycore::{Monomial, MonomialOrder, Poly, RingRef};

static SELF_CHECK: AtomicBool = AtomicBool::new(false);
static CHECKED: AtomicU64 = AtomicU64::new(0);
static FAILED: AtomicU64 = AtomicU64::new(0);

/// When on, every basis returned by [`buchberger`] is re-verified with
/// [`verify_reduced_gb`] and the outcome counted.
pub fn set_self_check(on: bool) {
    SELF_CHECK.store(on, AtomicOrdering::SeqCst);
}

/// `(verified, failed)` counts since the process started.
pub fn self_check_counts() -> (u64, u64) {
    (CHECKED.load(AtomicOrdering::SeqCst), FAILED.load(AtomicOrdering::SeqCst))
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn pair_key(ord: &MonomialOrder, a: &Pair, b: &Pair) -> Ordering {
    a.lcm
        .degree()
        .cmp(&b.lcm.degree())
        .then_with(|| ord.cmp(&a.lcm, &b.lcm))
        .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
}

struct State<F: Field> {
    ring: RingRef<F>,
    polys: Vec<Poly<F>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<F: Field> State<F> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].lm().expect("stored polynomials are nonzero")
    }

    fn reduce(&self, f: &Poly<F>) -> Result<Poly<F>> {
        let div = Divisors::new(
            self.polys
                .iter()
                .zip(&self.active)
                .filter(|(_, a)| **a)
                .map(|(p, _)| p),
        );
        reduce_with(f, &div, false)
    }

    /// Gebauer-Möller update for a new element `h` (nonzero, monic, with a
    /// leading monomial not divisible by any active one).
    fn insert(&mut self, h: Poly<F>) {
        let hi = self.polys.len();
        self.polys.push(h);
        self.active.push(false);
        let lh = self.lm(hi).clone();

        let mut c: Vec<(usize, Monomial)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, lh.lcm(self.lm(g))))
            .collect();
        let mut d: Vec<(usize, Monomial)> = Vec::new();
        while !c.is_empty() {
            let (g1, l1) = c.remove(0);
            let coprime = lh.is_coprime(self.lm(g1));
            if coprime
                || (!c.iter().any(|(_, l2)| l2.divides(&l1)) && !d.iter().any(|(_, l2)| l2.divides(&l1)))
            {
                d.push((g1, l1));
            }
        }
        let e: Vec<(usize, Monomial)> = d
            .into_iter()
            .filter(|(g, _)| !lh.is_coprime(self.lm(*g)))
            .collect();

        let polys = &self.polys;
        let lmof = |i: usize| polys[i].lm().unwrap();
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm) && lmof(p.i).lcm(&lh) != p.lcm && lmof(p.j).lcm(&lh) != p.lcm)
        });
        self.pairs.extend(e.into_iter().map(|(g, lcm)| Pair { i: g, j: hi, lcm }));

        for g in 0..hi {
            if self.active[g] && lh.divides(lmof(g)) {
                self.active[g] = false;
            }
        }
        self.active[hi] = true;
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let ord = self.ring.order();
        let best = (0..self.pairs.len()).min_by(|&a, &b| pair_key(ord, &self.pairs[a], &self.pairs[b]))?;
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> Poly<F> {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let one = self.ring.field().one();
        let qf = f.lm().unwrap().quotient_of(&p.lcm).unwrap();
        let qg = g.lm().unwrap().quotient_of(&p.lcm).unwrap();
        f.mul_term(&qf, &one).sub_mul_term(&one, &qg, g)
    }
}

/// S-polynomial of two nonzero polynomials, leading terms cancelled.
pub fn s_polynomial<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    let field = f.field();
    let (fm, gm) = (f.lm().unwrap(), g.lm().unwrap());
    let l = fm.lcm(gm);
    let a = f.mul_term(&fm.quotient_of(&l).unwrap(), &field.inv(f.lc().unwrap()));
    a.sub_mul_term(&field.inv(g.lc().unwrap()), &gm.quotient_of(&l).unwrap(), g)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, under the order of
/// `ring`. Inputs may live in a ring with the same variables and another order.
///
/// Pairs are processed smallest lcm first (degree, then order, then indices)
/// with the Gebauer-Möller criteria; the output is sorted by leading monomial,
/// largest first.
pub fn buchberger<F: Field>(gens: &[Poly<F>], ring: &RingRef<F>) -> Result<GroebnerBasis<F>> {
    let mut st = State {
        ring: ring.clone(),
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let unit = || GroebnerBasis::from_reduced_unchecked(ring, vec![Poly::one(ring)]);
    for g in gens {
        deadline::check()?;
        let g = st.reduce(&g.reorder(ring))?;
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return Ok(unit());
        }
        st.insert(g.monic());
    }
    while let Some(pair) = st.next_pair() {
        deadline::check()?;
        let h = st.reduce(&st.spoly(&pair))?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit());
        }
        st.insert(h.monic());
    }

    let mut basis: Vec<Poly<F>> = st
        .polys
        .into_iter()
        .zip(st.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    let ord = ring.order();
    basis.sort_by(|a, b| ord.cmp(b.lm().unwrap(), a.lm().unwrap()));
    let out = interreduce(basis)?;
    let gb = GroebnerBasis::from_reduced_unchecked(ring, out);
    if SELF_CHECK.load(AtomicOrdering::Relaxed) {
        let ok = verify_reduced_gb(gb.polys(), ring)?;
        CHECKED.fetch_add(1, AtomicOrdering::SeqCst);
        if !ok {
            FAILED.fetch_add(1, AtomicOrdering::SeqCst);
        }
    }
    Ok(gb)
}

/// Tail-reduces a minimal basis (distinct, mutually non-dividing leading
/// monomials, monic).
pub(crate) fn interreduce<F: Field>(mut basis: Vec<Poly<F>>) -> Result<Vec<Poly<F>>> {
    for k in 0..basis.len() {
        let div = Divisors::new(basis.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p));
        let r = reduce_with(&basis[k], &div, false)?;
        basis[k] = r;
    }
    Ok(basis)
}

/// Monic, and no term of any element divisible by another element's
/// leading monomial.
fn structurally_reduced<F: Field>(g: &[Poly<F>], ring: &RingRef<F>) -> bool {
    let field = ring.field();
    if g.iter().any(|p| !p.lc().is_some_and(|c| field.is_one(c))) {
        return false;
    }
    for (i, p) in g.iter().enumerate() {
        for (j, q) in g.iter().enumerate() {
            let lq = q.lm().unwrap();
            if i != j && p.terms().iter().any(|(m, _)| lq.divides(m)) {
                return false;
            }
        }
    }
    true
}

/// Structural reducedness plus the S-polynomial criterion: true iff `g` is the
/// reduced Gröbner basis of the ideal it generates under the order of `ring`.
/// Every pair with non-coprime leading monomials is checked.
pub fn is_reduced_gb<F: Field>(g: &[Poly<F>], ring: &RingRef<F>) -> Result<bool> {
    let g: Vec<Poly<F>> = g.iter().map(|p| p.reorder(ring)).collect();
    if !structurally_reduced(&g, ring) {
        return Ok(false);
    }
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            deadline::check()?;
            if g[i].lm().unwrap().is_coprime(g[j].lm().unwrap()) {
                continue;
            }
            let s = s_polynomial(&g[i], &g[j]);
            if !super::normal_form(&s, &g)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Same answer as [`is_reduced_gb`], but only the pairs kept by the
/// Gebauer-Möller criteria are checked, each by top reduction.
pub fn verify_reduced_gb<F: Field>(g: &[Poly<F>], ring: &RingRef<F>) -> Result<bool> {
    let g: Vec<Poly<F>> = g.iter().map(|p| p.reorder(ring)).collect();
    if !structurally_reduced(&g, ring) {
        return Ok(false);
    }
    let mut st = State {
        ring: ring.clone(),
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for p in g {
        st.insert(p);
    }
    let div = Divisors::new(&st.polys);
    for pair in &st.pairs {
        deadline::check()?;
        if !reduce_with(&st.spoly(pair), &div, true)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
