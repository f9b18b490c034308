use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ModularRunConfig;
use crate::error::{Error, Result};
use crate::field::{is_prime_u64, Field, PrimeField, Rationals};
use crate::groebner::{is_reduced_gb, GroebnerBasis};
use crate::polycore::{is_weak_permissible, reduce_all, ring_mod_p, Poly};

/// Draws without replacement before giving up.
const MAX_DRAWS: usize = 4096;

/// How good a prime is for a given rational input, from worst to best.
/// Each level implies the ones below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeClass {
    /// Some denominator is divisible by `p`.
    Bad,
    WeakPermissible,
    /// Weakly permissible and no leading coefficient of a basis vanishes.
    Permissible,
    /// Permissible and the image of the reduced basis is again a reduced basis.
    EffectivelyLucky,
}

impl PrimeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PrimeClass::Bad => "bad",
            PrimeClass::WeakPermissible => "weak_permissible",
            PrimeClass::Permissible => "permissible",
            PrimeClass::EffectivelyLucky => "effectively_lucky",
        }
    }
}

/// A prime, its classification and, once computed, its modular result.
#[derive(Debug, Clone)]
pub struct PrimeRecord {
    pub p: u64,
    pub class: PrimeClass,
    pub result: Option<GroebnerBasis<PrimeField>>,
}

/// Deterministic stream of distinct primes: either a fixed list or random
/// primes of a given bit size drawn from a seeded ChaCha generator.
#[derive(Debug, Clone)]
pub struct PrimeSource {
    rng: ChaCha8Rng,
    bits: u32,
    min: u64,
    explicit: Option<Vec<u64>>,
    next_explicit: usize,
    used: BTreeSet<u64>,
}

impl PrimeSource {
    pub fn new(cfg: &ModularRunConfig) -> Result<Self> {
        if !(3..=32).contains(&cfg.prime_bits) {
            return Err(Error::InvalidArgument(format!(
                "prime size must be between 3 and 32 bits, got {}",
                cfg.prime_bits
            )));
        }
        if let Some(ps) = &cfg.explicit_primes {
            if let Some(bad) = ps.iter().find(|&&p| p >= 1 << 32 || !is_prime_u64(p)) {
                return Err(Error::InvalidArgument(format!("{bad} is not a prime below 2^32")));
            }
        }
        Ok(PrimeSource {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            bits: cfg.prime_bits,
            min: cfg.min_prime,
            explicit: cfg.explicit_primes.clone(),
            next_explicit: 0,
            used: BTreeSet::new(),
        })
    }

    /// The next unused prime accepted by `accept`.
    pub fn next_where(&mut self, mut accept: impl FnMut(u64) -> bool) -> Result<u64> {
        for _ in 0..MAX_DRAWS {
            let p = match &self.explicit {
                Some(ps) => {
                    let Some(&p) = ps.get(self.next_explicit) else {
                        break;
                    };
                    self.next_explicit += 1;
                    p
                }
                None => match self.draw() {
                    Some(p) => p,
                    None => continue,
                },
            };
            if p < self.min || !self.used.insert(p) {
                continue;
            }
            if accept(p) {
                return Ok(p);
            }
        }
        Err(Error::PrimeExhaustion(format!(
            "no further usable prime ({} used)",
            self.used.len()
        )))
    }

    /// A random prime in `[2^(bits-1), 2^bits)`, or `None` if the draw
    /// overshoots the range.
    fn draw(&mut self) -> Option<u64> {
        let lo = 1u64 << (self.bits - 1);
        let hi = 1u64 << self.bits;
        let mut n = self.rng.gen_range(lo..hi) | 1;
        while n < hi {
            if is_prime_u64(n) {
                return Some(n);
            }
            n += 2;
        }
        None
    }

    pub fn used(&self) -> usize {
        self.used.len()
    }
}

/// `count` fresh primes, weakly permissible for every set in `inputs` and
/// permissible for every set in `bases`.
pub fn choose_primes(
    source: &mut PrimeSource,
    count: usize,
    inputs: &[&[Poly<Rationals>]],
    bases: &[&[Poly<Rationals>]],
) -> Result<Vec<PrimeRecord>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = source.next_where(|p| {
            inputs.iter().chain(bases).all(|s| is_weak_permissible(s, p))
                && bases.iter().all(|s| leading_coefficients_survive(s, p))
        })?;
        out.push(PrimeRecord {
            p,
            class: if bases.is_empty() {
                PrimeClass::WeakPermissible
            } else {
                PrimeClass::Permissible
            },
            result: None,
        });
    }
    Ok(out)
}

fn leading_coefficients_survive(basis: &[Poly<Rationals>], p: u64) -> bool {
    let fp = PrimeField::new(p);
    basis
        .iter()
        .all(|f| f.lc().is_some_and(|c| fp.from_rational(c).is_some_and(|v| v != 0)))
}

/// Classifies `p` against the reduced basis `f` over the rationals. For an
/// effectively lucky prime the record carries the image basis.
pub fn classify_prime(p: u64, f: &GroebnerBasis<Rationals>) -> Result<PrimeRecord> {
    let polys = f.polys();
    let mut rec = PrimeRecord {
        p,
        class: PrimeClass::Bad,
        result: None,
    };
    if !is_weak_permissible(polys, p) {
        return Ok(rec);
    }
    rec.class = PrimeClass::WeakPermissible;
    if !leading_coefficients_survive(polys, p) {
        return Ok(rec);
    }
    rec.class = PrimeClass::Permissible;
    let ring_p = ring_mod_p(f.ring(), p);
    let image = reduce_all(polys, &ring_p)?;
    if is_reduced_gb(&image, &ring_p)? {
        rec.class = PrimeClass::EffectivelyLucky;
        rec.result = Some(GroebnerBasis::from_reduced_unchecked(&ring_p, image));
    }
    Ok(rec)
}
