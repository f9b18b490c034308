//! Fixture and stress ideals: the three-variable stress family, cyclic(n),
//! a prime divisor of cyclic(6), the mixed-dimension worked example and
//! seeded random ideals.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::Result;
use crate::field::Rationals;
use crate::groebner::Ideal;
use crate::idealops::intersect;
use crate::polycore::{Monomial, MonomialOrder, Poly, Ring, RingRef};

/// `Q[names]` with the given order.
pub fn ring_q(names: &[&str], order: MonomialOrder) -> RingRef<Rationals> {
    Ring::new(Rationals, names.iter().map(|s| s.to_string()).collect(), order).expect("valid ring")
}

/// Polynomial from integer-coefficient terms `(c, exponents)`.
pub fn poly_i(ring: &RingRef<Rationals>, terms: &[(i64, &[u32])]) -> Poly<Rationals> {
    Poly::from_terms(
        ring,
        terms
            .iter()
            .map(|(c, e)| (Monomial::new(e).expect("small exponents"), BigRational::from_integer(BigInt::from(*c))))
            .collect(),
    )
    .expect("arity matches")
}

/// Ideal from integer-coefficient generators.
pub fn ideal_i(ring: &RingRef<Rationals>, gens: &[&[(i64, &[u32])]]) -> Ideal<Rationals> {
    Ideal::new(ring, gens.iter().map(|g| poly_i(ring, g)).collect()).expect("same ring")
}

/// `Q[x,y,z]`, grevlex.
pub fn xyz() -> RingRef<Rationals> {
    ring_q(&["x", "y", "z"], MonomialOrder::Grevlex)
}

pub fn stress_i1(r: &RingRef<Rationals>) -> Ideal<Rationals> {
    ideal_i(
        r,
        &[
            &[(8, &[2, 2, 0]), (5, &[1, 3, 0]), (3, &[3, 0, 1]), (1, &[2, 1, 1])],
            &[(1, &[5, 0, 0]), (2, &[0, 3, 2]), (13, &[0, 2, 3]), (5, &[0, 1, 4])],
            &[(8, &[3, 0, 0]), (12, &[0, 3, 0]), (1, &[1, 0, 2]), (3, &[0, 0, 0])],
            &[(7, &[2, 4, 0]), (18, &[1, 3, 2]), (1, &[0, 3, 3])],
        ],
    )
}

/// The printed `y4` term of the third generator is read as `y^4`.
pub fn stress_i2(r: &RingRef<Rationals>) -> Ideal<Rationals> {
    ideal_i(
        r,
        &[
            &[
                (2, &[1, 4, 2]),
                (1, &[3, 2, 1]),
                (-1, &[2, 3, 1]),
                (2, &[1, 1, 2]),
                (7, &[0, 3, 0]),
                (7, &[0, 0, 0]),
            ],
            &[
                (2, &[2, 4, 1]),
                (1, &[2, 1, 2]),
                (-1, &[1, 2, 2]),
                (2, &[2, 1, 1]),
                (-12, &[1, 0, 0]),
                (12, &[0, 1, 0]),
            ],
            &[
                (2, &[0, 5, 1]),
                (1, &[2, 2, 1]),
                (-1, &[1, 3, 1]),
                (-1, &[1, 3, 0]),
                (1, &[0, 4, 0]),
                (2, &[0, 2, 1]),
            ],
            &[
                (3, &[1, 4, 3]),
                (1, &[2, 2, 1]),
                (-1, &[1, 3, 1]),
                (4, &[0, 3, 2]),
                (3, &[1, 1, 3]),
                (4, &[0, 0, 2]),
                (-1, &[1, 0, 0]),
                (1, &[0, 1, 0]),
            ],
        ],
    )
}

pub fn stress_i3(r: &RingRef<Rationals>) -> Ideal<Rationals> {
    ideal_i(
        r,
        &[
            &[(5, &[3, 2, 1]), (3, &[2, 3, 1]), (7, &[1, 2, 2])],
            &[(3, &[1, 2, 2]), (1, &[5, 0, 0]), (11, &[0, 2, 2])],
            &[(4, &[1, 1, 1]), (7, &[3, 0, 0]), (12, &[0, 3, 0]), (1, &[0, 0, 0])],
            &[(3, &[3, 0, 0]), (-4, &[0, 3, 0]), (1, &[0, 1, 2])],
        ],
    )
}

/// `⟨x^k, x*y⟩` in `Q[x,y,z]`.
pub fn xk_xy(r: &RingRef<Rationals>, k: u32) -> Ideal<Rationals> {
    ideal_i(r, &[&[(1, &[k, 0, 0])], &[(1, &[1, 1, 0])]])
}

/// `⟨x, y⟩` in `Q[x,y,z]`.
pub fn xy_ideal(r: &RingRef<Rationals>) -> Ideal<Rationals> {
    ideal_i(r, &[&[(1, &[1, 0, 0])], &[(1, &[0, 1, 0])]])
}

/// Variables `x1..xn`.
pub fn ring_n(n: usize, order: MonomialOrder) -> RingRef<Rationals> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    ring_q(&refs, order)
}

/// cyclic(n): the elementary cyclic sums of degree 1..n-1 and `x1*...*xn - 1`.
pub fn cyclic(r: &RingRef<Rationals>) -> Ideal<Rationals> {
    let n = r.nvars();
    let mut gens = Vec::with_capacity(n);
    for k in 1..n {
        let mut terms = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0u32; n];
            for j in 0..k {
                e[(i + j) % n] += 1;
            }
            terms.push((Monomial::new(&e).unwrap(), BigRational::from_integer(1.into())));
        }
        gens.push(Poly::from_terms(r, terms).unwrap());
    }
    let all = Monomial::new(&vec![1u32; n]).unwrap();
    let last = Poly::from_terms(
        r,
        vec![
            (all, BigRational::from_integer(1.into())),
            (Monomial::one(n), BigRational::from_integer((-1).into())),
        ],
    )
    .unwrap();
    gens.push(last);
    Ideal::new(r, gens).unwrap()
}

/// A prime divisor of cyclic(6) in `Q[x1..x6]`.
pub fn cyclic6_p1(r: &RingRef<Rationals>) -> Ideal<Rationals> {
    assert_eq!(r.nvars(), 6);
    let e = |v: &[(usize, u32)]| {
        let mut x = [0u32; 6];
        for &(i, k) in v {
            x[i - 1] = k;
        }
        x
    };
    let m = |v: &[(usize, u32)]| e(v);
    let g1 = [
        (-15, m(&[(5, 1)])),
        (16, m(&[(6, 3)])),
        (-60, m(&[(6, 2)])),
        (225, m(&[(6, 1)])),
        (-4, m(&[])),
    ];
    let g2 = [
        (2, m(&[(5, 2)])),
        (-7, m(&[(5, 1)])),
        (2, m(&[(6, 2)])),
        (-7, m(&[(6, 1)])),
        (28, m(&[])),
    ];
    let g3 = [(4, m(&[(5, 1), (6, 1)])), (-1, m(&[(5, 1)])), (-1, m(&[(6, 1)])), (4, m(&[]))];
    let mut gens: Vec<Vec<(i64, [u32; 6])>> = vec![g1.to_vec(), g2.to_vec(), g3.to_vec()];
    for i in 1..=4 {
        gens.push(vec![(4, m(&[(i, 1)])), (1, m(&[(5, 1)])), (1, m(&[(6, 1)]))]);
    }
    let polys = gens
        .iter()
        .map(|g| {
            let ts: Vec<(i64, &[u32])> = g.iter().map(|(c, x)| (*c, &x[..])).collect();
            poly_i(r, &ts)
        })
        .collect();
    Ideal::new(r, polys).unwrap()
}

/// `Q[x,y]`, grevlex.
pub fn xy_ring() -> RingRef<Rationals> {
    ring_q(&["x", "y"], MonomialOrder::Grevlex)
}

/// The mixed-dimension example `I = (x) ∩ (x^3, y) ∩ (x + 1)` and
/// `J = (x, y) ∩ (x + 1)` in `Q[x,y]`, built with [`intersect`].
pub fn worked_example(r: &RingRef<Rationals>) -> Result<(Ideal<Rationals>, Ideal<Rationals>)> {
    let x = ideal_i(r, &[&[(1, &[1, 0])]]);
    let x3y = ideal_i(r, &[&[(1, &[3, 0])], &[(1, &[0, 1])]]);
    let xp1 = ideal_i(r, &[&[(1, &[1, 0]), (1, &[0, 0])]]);
    let xy = ideal_i(r, &[&[(1, &[1, 0])], &[(1, &[0, 1])]]);
    let i = intersect(&intersect(&x, &x3y)?, &xp1)?;
    let j = intersect(&xy, &xp1)?;
    Ok((i, j))
}

/// Shape of seeded random ideals.
#[derive(Debug, Clone, Copy)]
pub struct RandomShape {
    pub max_gens: usize,
    pub max_terms: usize,
    pub max_degree: u32,
    pub max_coef: i64,
    /// Probability that a coefficient gets a denominator above 1.
    pub fraction_rate: f64,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            max_gens: 4,
            max_terms: 3,
            max_degree: 3,
            max_coef: 9,
            fraction_rate: 0.1,
        }
    }
}

pub fn random_poly<R: Rng>(rng: &mut R, ring: &RingRef<Rationals>, shape: &RandomShape) -> Poly<Rationals> {
    let n = ring.nvars();
    loop {
        let nterms = rng.gen_range(1..=shape.max_terms);
        let mut terms = Vec::with_capacity(nterms);
        for _ in 0..nterms {
            let deg = rng.gen_range(0..=shape.max_degree);
            let mut e = vec![0u32; n];
            for _ in 0..deg {
                e[rng.gen_range(0..n)] += 1;
            }
            let mut a = rng.gen_range(1..=shape.max_coef);
            if rng.gen_bool(0.5) {
                a = -a;
            }
            let b = if rng.gen_bool(shape.fraction_rate) {
                rng.gen_range(2..=shape.max_coef.max(2))
            } else {
                1
            };
            terms.push((Monomial::new(&e).unwrap(), BigRational::new(a.into(), b.into())));
        }
        let p = Poly::from_terms(ring, terms).unwrap();
        if !p.is_constant() {
            return p;
        }
    }
}

/// A random proper-looking ideal: between 1 and `max_gens` random generators.
pub fn random_ideal<R: Rng>(rng: &mut R, ring: &RingRef<Rationals>, shape: &RandomShape) -> Ideal<Rationals> {
    let k = rng.gen_range(1..=shape.max_gens);
    let gens = (0..k).map(|_| random_poly(rng, ring, shape)).collect();
    Ideal::new(ring, gens).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyclic3_generators() {
        let r = ring_n(3, MonomialOrder::Grevlex);
        let c = cyclic(&r);
        let s: Vec<String> = c.gens().iter().map(|g| g.to_string()).collect();
        assert_eq!(s, ["x1 + x2 + x3", "x1*x2 + x1*x3 + x2*x3", "x1*x2*x3 - 1"]);
    }

    #[test]
    fn stress_generators_print() {
        let r = xyz();
        assert_eq!(stress_i3(&r).gens()[3].to_string(), "3*x^3 - 4*y^3 + y*z^2");
        assert_eq!(stress_i1(&r).gens()[2].to_string(), "8*x^3 + 12*y^3 + x*z^2 + 3");
        assert_eq!(stress_i2(&r).gens().len(), 4);
        let p = cyclic6_p1(&ring_n(6, MonomialOrder::Grevlex));
        assert_eq!(p.gens()[2].to_string(), "4*x5*x6 - x5 - x6 + 4");
    }

    #[test]
    fn seeded_random_is_deterministic() {
        let r = xyz();
        let a = random_ideal(&mut ChaCha8Rng::seed_from_u64(7), &r, &RandomShape::default());
        let b = random_ideal(&mut ChaCha8Rng::seed_from_u64(7), &r, &RandomShape::default());
        assert_eq!(a.gens(), b.gens());
    }
}
