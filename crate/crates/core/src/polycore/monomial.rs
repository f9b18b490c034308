use smallvec::SmallVec;

use crate::error::{Error, Result};

type Exps = SmallVec<[u32; 8]>;

/// An exponent vector, one entry per ring variable, with its total degree
/// cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Exps,
    degree: u32,
}

impl Monomial {
    /// The monomial 1 in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn new(exps: &[u32]) -> Result<Self> {
        let mut degree: u32 = 0;
        for &e in exps {
            degree = degree.checked_add(e).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial {
            exps: SmallVec::from_slice(exps),
            degree,
        })
    }

    /// The variable `x_index` in `nvars` variables.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        check_arity(self, other)?;
        let mut exps = Exps::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b).ok_or(Error::ExponentOverflow)?);
        }
        let degree = self
            .degree
            .checked_add(other.degree)
            .ok_or(Error::ExponentOverflow)?;
        Ok(Monomial { exps, degree })
    }

    /// Product; panics on exponent overflow.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.try_mul(other).expect("exponent overflow in monomial product")
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: Exps = other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect();
        Some(Monomial {
            exps,
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn try_pow(&self, k: u32) -> Result<Monomial> {
        let mut exps = Exps::with_capacity(self.exps.len());
        for &e in &self.exps {
            exps.push(e.checked_mul(k).ok_or(Error::ExponentOverflow)?);
        }
        let degree = self.degree.checked_mul(k).ok_or(Error::ExponentOverflow)?;
        Ok(Monomial { exps, degree })
    }

    /// Indices of variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    /// True when every variable with positive exponent is in `vars` (a bitmask).
    pub fn supported_in(&self, mask: u64) -> bool {
        self.support().all(|i| mask >> i & 1 == 1)
    }

    /// Exponent vector re-indexed: entry `i` of the result is `self[map[i]]`,
    /// with `None` meaning a fresh zero.
    pub fn remap(&self, map: &[Option<usize>]) -> Monomial {
        let exps: Exps = map.iter().map(|m| m.map_or(0, |j| self.exps[j])).collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    /// The monomial restricted to the variables in `mask`, other entries zeroed.
    pub fn project(&self, mask: u64) -> Monomial {
        let exps: Exps = self
            .exps
            .iter()
            .enumerate()
            .map(|(i, e)| if mask >> i & 1 == 1 { *e } else { 0 })
            .collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }
}

pub(crate) fn check_arity(a: &Monomial, b: &Monomial) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            left: a.arity(),
            right: b.arity(),
        });
    }
    Ok(())
}
