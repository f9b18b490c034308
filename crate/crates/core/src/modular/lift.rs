use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{inv_mod, PrimeField, Rationals};
use crate::polycore::{is_weak_permissible, reduce_all, ring_mod_p, Monomial, Poly, RingRef};

/// Progress of a lifted basis; only moves forward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiftStatus {
    Unreconstructed,
    Reconstructed,
    PTestPassed,
    Certified,
}

/// Coefficient-wise CRT image of a family of modular bases sharing one
/// leading-monomial signature, plus its rational reconstruction once found.
#[derive(Debug, Clone)]
pub struct LiftCandidate {
    ring: RingRef<Rationals>,
    modulus: BigInt,
    primes: Vec<u64>,
    residues: Vec<Vec<(Monomial, BigInt)>>,
    rational: Option<Vec<Poly<Rationals>>>,
    status: LiftStatus,
}

impl LiftCandidate {
    /// The empty lift (modulus 1) for bases in `ring`.
    pub fn new(ring: &RingRef<Rationals>) -> Self {
        LiftCandidate {
            ring: ring.clone(),
            modulus: BigInt::one(),
            primes: Vec::new(),
            residues: Vec::new(),
            rational: None,
            status: LiftStatus::Unreconstructed,
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Per element, `(monomial, residue in [0, modulus))`, largest monomial first.
    pub fn residues(&self) -> &[Vec<(Monomial, BigInt)>] {
        &self.residues
    }

    pub fn rational(&self) -> Option<&[Poly<Rationals>]> {
        self.rational.as_deref()
    }

    pub fn status(&self) -> LiftStatus {
        self.status
    }

    /// Combines one more modular basis. Monomials missing on either side
    /// count as residue 0. Resets any earlier reconstruction.
    pub fn absorb(&mut self, p: u64, basis: &[Poly<PrimeField>]) -> Result<()> {
        if self.primes.contains(&p) {
            return Err(Error::modular("crt", format!("prime {p} absorbed twice")));
        }
        if self.primes.is_empty() {
            self.residues = basis
                .iter()
                .map(|f| f.terms().iter().map(|(m, c)| (m.clone(), BigInt::from(*c))).collect())
                .collect();
        } else {
            let same_signature = self.residues.len() == basis.len()
                && self
                    .residues
                    .iter()
                    .zip(basis)
                    .all(|(r, f)| Some(&r[0].0) == f.lm());
            if !same_signature {
                return Err(Error::modular("crt", "leading-monomial signature mismatch"));
            }
            let m_mod_p = (&self.modulus % p).to_u64().expect("residue fits");
            let m_inv = inv_mod(m_mod_p, p).expect("distinct primes are coprime");
            let ord = self.ring.order().clone();
            for (old, f) in self.residues.iter_mut().zip(basis) {
                *old = merge_crt(std::mem::take(old), f.terms(), &self.modulus, p, m_inv, |a, b| ord.cmp(a, b));
            }
        }
        self.modulus *= p;
        self.primes.push(p);
        self.rational = None;
        self.status = LiftStatus::Unreconstructed;
        Ok(())
    }

    /// Attempts rational reconstruction of every coefficient. On success the
    /// status becomes `Reconstructed`.
    pub fn reconstruct(&mut self) -> bool {
        if self.rational.is_some() {
            return true;
        }
        let mut polys = Vec::with_capacity(self.residues.len());
        for elem in &self.residues {
            let mut terms = Vec::with_capacity(elem.len());
            for (m, r) in elem {
                if r.is_zero() {
                    continue;
                }
                match rational_reconstruct(r, &self.modulus) {
                    Some(q) => terms.push((m.clone(), q)),
                    None => return false,
                }
            }
            match Poly::from_terms(&self.ring, terms) {
                Ok(f) => polys.push(f),
                Err(_) => return false,
            }
        }
        self.rational = Some(polys);
        self.status = LiftStatus::Reconstructed;
        true
    }

    pub(crate) fn advance(&mut self, to: LiftStatus) {
        debug_assert!(to == LiftStatus::Certified || to == LiftStatus::PTestPassed);
        assert!(
            to as u8 == self.status as u8 + 1,
            "lift status must advance one step at a time"
        );
        self.status = to;
    }
}

fn crt_combine(r: &BigInt, m: &BigInt, a: u64, p: u64, m_inv: u64) -> BigInt {
    let r_mod = (r % p).to_u64().expect("residue fits");
    let diff = (a + p - r_mod) % p;
    let k = ((diff as u128 * m_inv as u128) % p as u128) as u64;
    r + m * k
}

fn merge_crt(
    old: Vec<(Monomial, BigInt)>,
    new: &[(Monomial, u64)],
    m: &BigInt,
    p: u64,
    m_inv: u64,
    cmp: impl Fn(&Monomial, &Monomial) -> Ordering,
) -> Vec<(Monomial, BigInt)> {
    let zero = BigInt::zero();
    let mut out = Vec::with_capacity(old.len().max(new.len()));
    let mut a = old.into_iter().peekable();
    let mut b = new.iter().peekable();
    loop {
        let step = match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some((ma, _)), Some((mb, _))) => cmp(ma, mb),
        };
        match step {
            Ordering::Greater => {
                let (ma, r) = a.next().unwrap();
                out.push((ma, crt_combine(&r, m, 0, p, m_inv)));
            }
            Ordering::Less => {
                let (mb, c) = b.next().unwrap();
                out.push((mb.clone(), crt_combine(&zero, m, *c, p, m_inv)));
            }
            Ordering::Equal => {
                let (ma, r) = a.next().unwrap();
                let (_, c) = b.next().unwrap();
                out.push((ma, crt_combine(&r, m, *c, p, m_inv)));
            }
        }
    }
    out
}

/// Coefficient-wise CRT of modular bases with a common signature.
pub fn crt_lift(ring: &RingRef<Rationals>, records: &[(u64, &[Poly<PrimeField>])]) -> Result<LiftCandidate> {
    let mut cand = LiftCandidate::new(ring);
    for (p, basis) in records {
        cand.absorb(*p, basis)?;
    }
    Ok(cand)
}

/// The fraction `a/b` with `|a|, |b| ≤ √(m/2)`, `b > 0`, `gcd(a, b) = 1`,
/// `gcd(b, m) = 1` and `a ≡ b·c (mod m)`, if one exists.
pub fn rational_reconstruct(c: &BigInt, m: &BigInt) -> Option<BigRational> {
    if *m < BigInt::from(2) {
        return None;
    }
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), c.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() || !t1.gcd(m).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Whether the image of `rational` mod `p` is exactly `expected`; `None`
/// when `p` divides a denominator.
pub fn image_matches(rational: &[Poly<Rationals>], p: u64, expected: &[Poly<PrimeField>]) -> Option<bool> {
    if !is_weak_permissible(rational, p) {
        return None;
    }
    let Some(first) = rational.first() else {
        return Some(expected.is_empty());
    };
    let ring_p = ring_mod_p(first.ring(), p);
    let image = reduce_all(rational, &ring_p).ok()?;
    Some(image.len() == expected.len() && image.iter().zip(expected).all(|(a, b)| a.terms() == b.terms()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::polycore::{MonomialOrder, Ring};
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn reconstruction_examples() {
        let m97 = BigInt::from(97);
        assert_eq!(rational_reconstruct(&33.into(), &m97), Some(q(2, 3)));
        assert_eq!(rational_reconstruct(&48.into(), &m97), Some(q(-1, 2)));
        for m in [2i64, 7, 97, 1_000_003] {
            assert_eq!(rational_reconstruct(&1.into(), &m.into()), Some(q(1, 1)));
        }
        assert_eq!(rational_reconstruct(&0.into(), &m97), Some(q(0, 1)));
        assert_eq!(rational_reconstruct(&5.into(), &1.into()), None);
    }

    #[test]
    fn crt_examples() {
        let r = Ring::new(Rationals, vec!["x".into()], MonomialOrder::Lex).unwrap();
        let at = |p: u64, c: u64| {
            let rp = ring_mod_p(&r, p);
            let x = Poly::var(&rp, 0);
            &x + &Poly::constant(&rp, c)
        };
        // 2/3 is 33 mod 97 and 64 mod 101
        let f97 = PrimeField::new(97);
        let f101 = PrimeField::new(101);
        assert_eq!(f97.from_rational(&q(2, 3)), Some(33));
        assert_eq!(f101.from_rational(&q(2, 3)), Some(68));
        let a = at(97, 33);
        let b = at(101, 68);
        let mut cand = crt_lift(&r, &[(97, std::slice::from_ref(&a)), (101, std::slice::from_ref(&b))]).unwrap();
        assert_eq!(cand.modulus(), &BigInt::from(9797));
        let c = &cand.residues()[0][1].1;
        assert_eq!(c % 97u32, BigInt::from(33));
        assert_eq!(c % 101u32, BigInt::from(68));
        assert!(cand.reconstruct());
        assert_eq!(cand.rational().unwrap()[0].to_string(), "x + 2/3");
        assert_eq!(cand.status(), LiftStatus::Reconstructed);

        // 1 mod 3 and 2 mod 5 give 7 mod 15
        let one = crt_lift(&r, &[(3, std::slice::from_ref(&at(3, 1))), (5, std::slice::from_ref(&at(5, 2)))]).unwrap();
        assert_eq!(one.residues()[0][1].1, BigInt::from(7));
        let single = crt_lift(&r, &[(7, std::slice::from_ref(&at(7, 4)))]).unwrap();
        assert_eq!(single.residues()[0][1].1, BigInt::from(4));
    }

    #[test]
    fn missing_monomials_are_zero_and_signatures_must_match() {
        let r = Ring::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::Grevlex).unwrap();
        let (r5, r7) = (ring_mod_p(&r, 5), ring_mod_p(&r, 7));
        let f5 = Poly::var(&r5, 0);
        let f7 = &Poly::var(&r7, 0) + &Poly::constant(&r7, 3);
        let cand = crt_lift(&r, &[(5, std::slice::from_ref(&f5)), (7, std::slice::from_ref(&f7))]).unwrap();
        assert_eq!(cand.residues()[0][1].1, BigInt::from(10));
        let g7 = Poly::var(&r7, 1);
        assert!(crt_lift(&r, &[(5, std::slice::from_ref(&f5)), (7, std::slice::from_ref(&g7))]).is_err());
    }

    #[test]
    fn image_comparison() {
        let r = Ring::new(Rationals, vec!["x".into()], MonomialOrder::Lex).unwrap();
        let f = &Poly::var(&r, 0) + &Poly::constant(&r, q(1, 3));
        let r7 = ring_mod_p(&r, 7);
        let good = &Poly::var(&r7, 0) + &Poly::constant(&r7, 5);
        let bad = &Poly::var(&r7, 0) + &Poly::constant(&r7, 6);
        assert_eq!(image_matches(std::slice::from_ref(&f), 7, &[good]), Some(true));
        assert_eq!(image_matches(std::slice::from_ref(&f), 7, &[bad]), Some(false));
        assert_eq!(image_matches(std::slice::from_ref(&f), 3, &[]), None);
    }

    proptest! {
        #[test]
        fn reconstruction_inverts_reduction(a in -1_000_000i64..=1_000_000, b in 1i64..=1_000_000) {
            let target = q(a, b);
            let need = BigInt::from(2) * (BigInt::from(a) * a + BigInt::from(b) * b);
            let mut m = BigInt::one();
            let mut p = 1_000_003u64;
            while m <= need {
                if crate::field::is_prime_u64(p) {
                    m *= p;
                }
                p += 2;
            }
            let c = (BigInt::from(a) * BigInt::from(b).modinv(&m).unwrap()).mod_floor(&m);
            prop_assert_eq!(rational_reconstruct(&c, &m), Some(target));
        }
    }
}
