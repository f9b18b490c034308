use std::cmp::Ordering;
use std::time::Instant;

use super::lift::{image_matches, LiftCandidate, LiftStatus};
use super::primes::{choose_primes, PrimeClass, PrimeRecord, PrimeSource};
use super::runlog::{signature_hash, RunRecord};
use super::{ModularRunConfig, VerifyLevel};
use crate::deadline;
use crate::error::{Error, Result};
use crate::field::{PrimeField, Rationals};
use crate::groebner::GroebnerBasis;
use crate::par;
use crate::polycore::{is_weak_permissible, Monomial, Poly, RingRef};

/// Fresh primes tried per ptest before the round is abandoned.
const PTEST_TRIES: usize = 4;

/// What one prime contributed.
pub(crate) struct PrimeOutcome<X> {
    pub class: PrimeClass,
    /// `None` when the prime is unusable for this task.
    pub result: Option<(GroebnerBasis<PrimeField>, X)>,
}

/// One modular operation: the per-prime computation and the final test.
pub(crate) trait ModularTask: Sync {
    type Extra: Clone + Ord + Send;

    fn stage(&self) -> &str;
    /// Ring of the lifted result.
    fn ring(&self) -> &RingRef<Rationals>;
    /// Sets every prime must be weakly permissible for.
    fn inputs(&self) -> Vec<&[Poly<Rationals>]>;
    fn compute(&self, p: u64) -> Result<PrimeOutcome<Self::Extra>>;
    /// Operation-specific part of the final test. `extra` is the majority
    /// value among the primes that produced the candidate.
    fn final_test(&self, cand: &[Poly<Rationals>], extra: &Self::Extra) -> Result<bool>;
    /// Stop after a round in which no prime produced a result. For tasks
    /// where an empty round is itself the answer.
    fn abandon_when_empty(&self) -> bool {
        false
    }
}

/// Result of a modular run.
#[derive(Debug, Clone)]
pub struct ModularOutcome<X> {
    pub basis: GroebnerBasis<Rationals>,
    pub extra: X,
    pub status: LiftStatus,
    /// Every prime tried, in the order drawn.
    pub primes_used: Vec<u64>,
    pub rounds: u32,
}

impl<X> ModularOutcome<X> {
    pub fn certified(&self) -> bool {
        self.status == LiftStatus::Certified
    }
}

fn cmp_signature(a: &[Monomial], b: &[Monomial]) -> Ordering {
    a.iter()
        .map(|m| m.exps())
        .cmp(b.iter().map(|m| m.exps()))
}

/// Indices of the largest group of equal signatures; ties go to the
/// lexicographically smallest signature. Input order is kept.
pub(crate) fn majority(sigs: &[Vec<Monomial>]) -> Vec<usize> {
    let mut best: Option<(usize, &Vec<Monomial>)> = None;
    for s in sigs {
        let n = sigs.iter().filter(|t| *t == s).count();
        let better = match best {
            None => true,
            Some((bn, bs)) => n > bn || (n == bn && cmp_signature(s, bs) == Ordering::Less),
        };
        if better {
            best = Some((n, s));
        }
    }
    match best {
        None => Vec::new(),
        Some((_, s)) => (0..sigs.len()).filter(|&i| sigs[i] == *s).collect(),
    }
}

/// Keeps the records whose result signature is in the majority. Records
/// without a result are dropped.
pub fn delete_unlucky(records: Vec<PrimeRecord>) -> Vec<PrimeRecord> {
    let with: Vec<PrimeRecord> = records.into_iter().filter(|r| r.result.is_some()).collect();
    let sigs: Vec<Vec<Monomial>> = with.iter().map(|r| r.result.as_ref().unwrap().signature()).collect();
    let keep = majority(&sigs);
    with.into_iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, r)| r)
        .collect()
}

fn vote<X: Clone + Ord>(xs: &[&X]) -> X {
    let mut best: Option<(usize, &X)> = None;
    for x in xs {
        let n = xs.iter().filter(|y| ***y == **x).count();
        if best.is_none_or(|(bn, bx)| n > bn || (n == bn && *x < bx)) {
            best = Some((n, x));
        }
    }
    best.expect("nonempty vote").1.clone()
}

fn log<X>(cfg: &ModularRunConfig, stage: &str, p: u64, out: &PrimeOutcome<X>, micros: u64) {
    if let Some(l) = &cfg.log {
        l.push(RunRecord {
            class: out.class.as_str().to_string(),
            micros,
            prime: p,
            sig: out
                .result
                .as_ref()
                .map(|(g, _)| signature_hash(&g.signature()))
                .unwrap_or_default(),
            stage: stage.to_string(),
        });
    }
}

fn timed<T: ModularTask>(task: &T, p: u64) -> (u64, Result<PrimeOutcome<T::Extra>>, u64) {
    let t0 = Instant::now();
    let out = task.compute(p);
    (p, out, t0.elapsed().as_micros() as u64)
}

/// Runs the prime loop: compute per prime, vote, lift, reconstruct, ptest
/// against a fresh prime, then the final test. Usable results accumulate
/// across rounds; each round adds as many primes as were used so far.
pub(crate) fn run<T: ModularTask>(task: &T, cfg: &ModularRunConfig) -> Result<ModularOutcome<T::Extra>> {
    if cfg.initial_primes == 0 {
        return Err(Error::InvalidArgument("at least one prime is required".into()));
    }
    let stage = task.stage().to_string();
    let mut src = PrimeSource::new(cfg)?;
    let inputs = task.inputs();
    let mut results: Vec<(u64, GroebnerBasis<PrimeField>, T::Extra)> = Vec::new();
    let mut used: Vec<u64> = Vec::new();
    let mut batch = cfg.initial_primes;
    for round in 1..=cfg.max_rounds {
        deadline::check()?;
        let primes: Vec<u64> = choose_primes(&mut src, batch, &inputs, &[])?.into_iter().map(|r| r.p).collect();
        for (p, out, micros) in par::map(cfg.exec, primes, |p| timed(task, p)) {
            let out = out?;
            log(cfg, &stage, p, &out, micros);
            used.push(p);
            if let Some((gb, x)) = out.result {
                results.push((p, gb, x));
            }
        }
        batch = used.len();
        if results.is_empty() {
            if task.abandon_when_empty() {
                return Err(Error::modular(&stage, "no prime produced a result"));
            }
            continue;
        }
        let sigs: Vec<Vec<Monomial>> = results.iter().map(|(_, g, _)| g.signature()).collect();
        let group = majority(&sigs);
        let mut cand = LiftCandidate::new(task.ring());
        for &i in &group {
            cand.absorb(results[i].0, results[i].1.polys())?;
        }
        if !cand.reconstruct() {
            continue;
        }
        let rational = cand.rational().expect("reconstructed").to_vec();

        let mut verdict = None;
        for _ in 0..PTEST_TRIES {
            let p = src.next_where(|p| inputs.iter().all(|s| is_weak_permissible(s, p)) && is_weak_permissible(&rational, p))?;
            let (p, out, micros) = timed(task, p);
            let out = out?;
            log(cfg, &format!("{stage}.ptest"), p, &out, micros);
            used.push(p);
            if let Some((gb, x)) = out.result {
                let ok = image_matches(&rational, p, gb.polys()) == Some(true);
                results.push((p, gb, x));
                verdict = Some(ok);
                break;
            }
        }
        if verdict != Some(true) {
            continue;
        }
        cand.advance(LiftStatus::PTestPassed);

        let extras: Vec<&T::Extra> = group.iter().map(|&i| &results[i].2).collect();
        let extra = vote(&extras);
        let basis = GroebnerBasis::from_reduced_unchecked(task.ring(), rational);
        if cfg.verify == VerifyLevel::PTestOnly {
            return Ok(ModularOutcome {
                basis,
                extra,
                status: cand.status(),
                primes_used: used,
                rounds: round,
            });
        }
        if task.final_test(basis.polys(), &extra)? {
            cand.advance(LiftStatus::Certified);
            return Ok(ModularOutcome {
                basis,
                extra,
                status: cand.status(),
                primes_used: used,
                rounds: round,
            });
        }
    }
    Err(Error::modular(
        &stage,
        format!("no certified lift after {} rounds and {} primes", cfg.max_rounds, used.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(ms: &[&[u32]]) -> Vec<Monomial> {
        ms.iter().map(|e| Monomial::new(e).unwrap()).collect()
    }

    #[test]
    fn majority_examples() {
        let a = sig(&[&[1, 0]]);
        let b = sig(&[&[0, 1]]);
        assert_eq!(majority(&[a.clone(), a.clone(), b.clone(), a.clone()]), [0, 1, 3]);
        assert_eq!(majority(&[a.clone(), a.clone()]), [0, 1]);
        // tie: [0,1] < [1,0], so b wins
        assert_eq!(majority(&[a.clone(), a.clone(), b.clone(), b.clone()]), [2, 3]);
        assert!(majority(&[]).is_empty());
    }

    #[test]
    fn vote_prefers_count_then_smallest() {
        assert_eq!(vote(&[&3, &2, &3]), 3);
        assert_eq!(vote(&[&3, &2]), 2);
    }
}
