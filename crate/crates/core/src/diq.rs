//! Double ideal quotients `(I : (I : J))` and the criteria built on them.
//!
//! Direct operations work over any field. For a prime `P` the test
//! `P ⊇ (I : (I : P))` decides whether `P` is an associated prime of `I`;
//! for a radical `J` the same containment decides `Ass(J) ⊆ Ass(I)`. The
//! saturated variants give primary-component checks and isolated
//! components. Over the rationals the modular tests decide association one
//! way each and report `Inconclusive` otherwise.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;

use crate::deadline;
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::groebner::{dimension_and_mis, GroebnerBasis, Ideal};
use crate::idealops::{hull_unmixed, ideal_power, intersect, quotient, radical_membership, saturate};
use crate::modular::{
    choose_primes, classify_prime, mod_quotient_staged, products_in, run, signature_hash, LiftStatus,
    ModularOutcome, ModularRunConfig, ModularTask, PrimeClass, PrimeOutcome, PrimeSource, RunRecord,
};
use crate::par;
use crate::polycore::{coeff_norm, Poly, RingRef};

/// Largest power tried by [`component_from_power`].
pub const POWER_CAP: u32 = 64;

/// Which quotients of `(I : (I : J))` are replaced by saturations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiqVariant {
    /// `(I : (I : J))`
    Plain,
    /// `(I : (I : J^∞))`
    InnerSaturated,
    /// `(I : (I : J)^∞)`
    OuterSaturated,
    /// `(I : (I : J^∞)^∞)`
    BothSaturated,
}

/// `(I : (I : J))`.
pub fn diq<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    quotient(i, &quotient(i, j)?)
}

pub fn diq_sat_variants<F: Field>(i: &Ideal<F>, j: &Ideal<F>, variant: DiqVariant) -> Result<Ideal<F>> {
    use DiqVariant::*;
    let inner = match variant {
        Plain | OuterSaturated => quotient(i, j)?,
        InnerSaturated | BothSaturated => saturate(i, j)?.0,
    };
    match variant {
        Plain | InnerSaturated => quotient(i, &inner),
        OuterSaturated | BothSaturated => Ok(saturate(i, &inner)?.0),
    }
}

/// `(I : (I : J))` over the rationals from the reduced basis `f` of `I` and
/// generators `g` of `J`, as two certified modular quotients. The second
/// stage only uses primes that are effectively lucky for the first result,
/// so each of its modular quotients is the image of the rational one.
pub fn mod_diq(
    f: &GroebnerBasis<Rationals>,
    g: &[Poly<Rationals>],
    cfg: &ModularRunConfig,
) -> Result<ModularOutcome<()>> {
    let h = mod_quotient_staged("diq.stage1", f, g, None, cfg)?;
    let k = mod_quotient_staged("diq.stage2", f, h.basis.polys(), Some(&h.basis), cfg)?;
    let mut primes_used = h.primes_used;
    primes_used.extend(k.primes_used);
    Ok(ModularOutcome {
        basis: k.basis,
        extra: (),
        status: h.status.min(k.status),
        primes_used,
        rounds: h.rounds + k.rounds,
    })
}

/// `P ⊇ (I : (I : P))`, i.e. `P ∈ Ass(I)`. `P` must be prime; this is not checked.
pub fn is_prime_divisor_direct<F: Field>(i: &Ideal<F>, p: &Ideal<F>) -> Result<bool> {
    p.contains(&diq(i, p)?)
}

/// `J ⊇ (I : (I : J))`, i.e. `Ass(J) ⊆ Ass(I)`. `J` must be proper and
/// radical; radicality is the caller's responsibility.
pub fn ass_subset_check<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<bool> {
    if j.is_unit()? {
        return Err(Error::InvalidArgument("J must be a proper ideal".into()));
    }
    j.contains(&diq(i, j)?)
}

fn same_radical<F: Field>(j: &Ideal<F>, l: &Ideal<F>) -> Result<bool> {
    for g in j.gens() {
        if !radical_membership(g, l)? {
            return Ok(false);
        }
    }
    for g in l.gens() {
        if !radical_membership(g, j)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `L` is an intersection of primary components, one for each
/// prime of `J`, in some primary decomposition of `I`. `J` must be an
/// unmixed intersection of associated primes of `I`.
///
/// Tests `(I : (I : Z)^∞) = Z` for `Z = (I : J^∞) ∩ L`. Fails with
/// `HypothesisViolated` unless `√L = J` and `L ⊉ (I : J^∞)`.
pub fn is_primary_component<F: Field>(i: &Ideal<F>, j: &Ideal<F>, l: &Ideal<F>) -> Result<bool> {
    if !same_radical(j, l)? {
        return Err(Error::HypothesisViolated("the radical of L differs from J".into()));
    }
    let (s, _) = saturate(i, j)?;
    if l.contains(&s)? {
        return Err(Error::HypothesisViolated("L contains (I : J^∞)".into()));
    }
    let z = intersect(&s, l)?;
    let (lhs, _) = saturate(i, &quotient(i, &z)?)?;
    lhs.equals(&z)
}

/// `false` where the criterion's hypotheses fail, otherwise its answer.
fn component_check<F: Field>(i: &Ideal<F>, j: &Ideal<F>, l: &Ideal<F>) -> Result<bool> {
    match is_primary_component(i, j, l) {
        Err(Error::HypothesisViolated(_)) => Ok(false),
        r => r,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Isolated,
    HullPower,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Isolated => "isolated",
            ComponentKind::HullPower => "hull_power",
        }
    }
}

/// A primary component (or intersection of components sharing one
/// independent set) of an ideal.
#[derive(Debug, Clone)]
pub struct ComponentResult<F: Field> {
    pub component: Ideal<F>,
    pub kind: ComponentKind,
    pub exponent_used: Option<u32>,
    /// Set only when [`is_primary_component`] accepted the component.
    pub certified: bool,
}

fn smallest_mis<F: Field>(j: &Ideal<F>) -> Result<Vec<usize>> {
    let (_, sets) = dimension_and_mis(j)?;
    Ok(sets.into_iter().next().unwrap_or_default())
}

/// The intersection of the isolated primary components of `I` for the
/// primes of `J`, which must be isolated associated primes of `I` sharing
/// an independent set. Uses the smallest independent set of `J`.
pub fn isolated_component<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<ComponentResult<F>> {
    isolated_component_in(i, j, &smallest_mis(j)?)
}

/// [`isolated_component`] with the independent set `u` given.
pub fn isolated_component_in<F: Field>(i: &Ideal<F>, j: &Ideal<F>, u: &[usize]) -> Result<ComponentResult<F>> {
    let k = diq_sat_variants(i, j, DiqVariant::BothSaturated)?;
    let q = hull_unmixed(&k, u)?;
    let certified = component_check(i, j, &q)?;
    Ok(ComponentResult {
        component: q,
        kind: ComponentKind::Isolated,
        exponent_used: None,
        certified,
    })
}

/// `I = (I : J^∞) ∩ L`.
fn covers<F: Field>(i: &Ideal<F>, j: &Ideal<F>, l: &Ideal<F>) -> Result<bool> {
    let (s, _) = saturate(i, j)?;
    intersect(&s, l)?.equals(i)
}

/// Components of `I` for the primes of `J` as `hull(I + J^m)` over the
/// smallest independent set of `J`, for `m = 1, 2, 4, …` up to
/// [`POWER_CAP`]. With `certify` the first `m` accepted by
/// [`is_primary_component`] wins; otherwise the first `m` with
/// `I = (I : J^∞) ∩ L`, and the result is not marked certified.
pub fn component_from_power<F: Field>(i: &Ideal<F>, j: &Ideal<F>, certify: bool) -> Result<ComponentResult<F>> {
    component_from_power_in(i, j, &smallest_mis(j)?, certify)
}

/// [`component_from_power`] with the independent set `u` given.
pub fn component_from_power_in<F: Field>(
    i: &Ideal<F>,
    j: &Ideal<F>,
    u: &[usize],
    certify: bool,
) -> Result<ComponentResult<F>> {
    let mut m = 1;
    while m <= POWER_CAP {
        deadline::check()?;
        let l = hull_unmixed(&i.sum(&ideal_power(j, m)?)?, u)?;
        let ok = if certify {
            component_check(i, j, &l)?
        } else {
            covers(i, j, &l)?
        };
        if ok {
            return Ok(ComponentResult {
                component: l,
                kind: ComponentKind::HullPower,
                exponent_used: Some(m),
                certified: certify,
            });
        }
        m *= 2;
    }
    Err(Error::HypothesisViolated(format!(
        "no power of J up to {POWER_CAP} yields a component"
    )))
}

/// Outcome of a one-sided association test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Associated,
    NotAssociated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Associated => "associated",
            Verdict::NotAssociated => "not_associated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Witness {
    /// Certified basis of an ideal inside `(I : (I : P))` but not inside `P`.
    Basis(GroebnerBasis<Rationals>),
    /// Primes at which `(I_p : (I_p : P_p)) = P_p`.
    Primes(Vec<u64>),
}

#[derive(Debug, Clone)]
pub struct DivisorVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Short machine-readable code.
    pub reason: String,
    /// Every prime tried, including those of the auxiliary quotient.
    pub primes_used: Vec<u64>,
}

impl DivisorVerdict {
    fn inconclusive(reason: &str, primes_used: Vec<u64>) -> Self {
        DivisorVerdict {
            verdict: Verdict::Inconclusive,
            witness: None,
            reason: reason.to_string(),
            primes_used,
        }
    }
}

/// `(I_p : (I_p : P_p))` at one prime, compared with `P_p`.
enum Local {
    Unusable(PrimeClass),
    Usable {
        diq: GroebnerBasis<PrimeField>,
        agrees: bool,
    },
}

fn local_diq(p: u64, f: &GroebnerBasis<Rationals>, g: &GroebnerBasis<Rationals>) -> Result<Local> {
    let rf = classify_prime(p, f)?;
    let Some(fp) = rf.result else {
        return Ok(Local::Unusable(rf.class));
    };
    let rg = classify_prime(p, g)?;
    let Some(gp) = rg.result else {
        return Ok(Local::Unusable(rg.class));
    };
    let k = diq(&Ideal::from_gb(fp), &Ideal::from_gb(gp.clone()))?;
    let diq = (*k.gb()?).clone();
    let agrees = diq.polys() == gp.polys();
    Ok(Local::Usable { diq, agrees })
}

fn check_pair(f: &GroebnerBasis<Rationals>, g: &GroebnerBasis<Rationals>) -> Result<()> {
    if **f.ring() != **g.ring() {
        return Err(Error::RingMismatch);
    }
    if g.is_empty() || g.is_unit() {
        return Err(Error::InvalidArgument("P must be a proper nonzero ideal".into()));
    }
    Ok(())
}

fn lucky_for(p: u64, h: &GroebnerBasis<Rationals>) -> Result<bool> {
    Ok(classify_prime(p, h)?.class == PrimeClass::EffectivelyLucky)
}

/// Modular test that `P` (reduced basis `g`, assumed prime) is an associated
/// prime of `I` (reduced basis `f`), without lifting.
///
/// Primes are drawn in rounds. A prime agrees when `(I_p : (I_p : P_p)) = P_p`.
/// Once the agreeing primes multiply past `2·‖G‖` and one of them is
/// effectively lucky for a certified basis of `(I : P)`, the verdict is
/// `Associated`. More disagreeing than agreeing primes, or running out of
/// rounds, gives `Inconclusive`.
pub fn associated_test_modular(
    f: &GroebnerBasis<Rationals>,
    g: &GroebnerBasis<Rationals>,
    cfg: &ModularRunConfig,
) -> Result<DivisorVerdict> {
    check_pair(f, g)?;
    let h = mod_quotient_staged("asstest.quotient", f, g.polys(), None, cfg)?;
    let mut used = h.primes_used.clone();
    if !h.certified() {
        return Ok(DivisorVerdict::inconclusive("quotient_uncertified", used));
    }
    let bound = BigInt::from(2) * coeff_norm(g.polys());
    let mut src = PrimeSource::new(cfg)?;
    let mut agree: Vec<u64> = Vec::new();
    let mut disagree = 0usize;
    let mut tried = 0usize;
    let mut batch = cfg.initial_primes.max(1);
    for _ in 0..cfg.max_rounds {
        deadline::check()?;
        let primes: Vec<u64> = choose_primes(&mut src, batch, &[f.polys(), g.polys()], &[])?
            .into_iter()
            .map(|r| r.p)
            .collect();
        let outs = par::map(cfg.exec, primes, |p| {
            let t0 = Instant::now();
            (p, local_diq(p, f, g), t0.elapsed().as_micros() as u64)
        });
        for (p, out, micros) in outs {
            let out = out?;
            log_local(cfg, "asstest", p, &out, micros);
            used.push(p);
            tried += 1;
            match out {
                Local::Usable { agrees: true, .. } => agree.push(p),
                Local::Usable { agrees: false, .. } => disagree += 1,
                Local::Unusable(_) => {}
            }
        }
        batch = tried;
        if disagree > agree.len() {
            return Ok(DivisorVerdict::inconclusive("primes_disagree", used));
        }
        let product: BigInt = agree.iter().map(|&p| BigInt::from(p)).product();
        if product > bound {
            for &p in &agree {
                if lucky_for(p, &h.basis)? {
                    return Ok(DivisorVerdict {
                        verdict: Verdict::Associated,
                        witness: Some(Witness::Primes(agree)),
                        reason: "diq_equals_p".into(),
                        primes_used: used,
                    });
                }
            }
        }
    }
    Ok(DivisorVerdict::inconclusive("budget_exhausted", used))
}

fn log_local(cfg: &ModularRunConfig, stage: &str, p: u64, out: &Local, micros: u64) {
    if let Some(l) = &cfg.log {
        let (class, sig) = match out {
            Local::Unusable(c) => (*c, String::new()),
            Local::Usable { diq, .. } => (PrimeClass::EffectivelyLucky, signature_hash(&diq.signature())),
        };
        l.push(RunRecord {
            class: class.as_str().to_string(),
            micros,
            prime: p,
            sig,
            stage: stage.to_string(),
        });
    }
}

struct NonAssociatedTask<'a> {
    f: &'a GroebnerBasis<Rationals>,
    g: &'a GroebnerBasis<Rationals>,
    /// Certified basis of `(I : P)`.
    h: &'a GroebnerBasis<Rationals>,
    agreed: AtomicUsize,
    differed: AtomicUsize,
    tried: Mutex<Vec<u64>>,
}

impl ModularTask for NonAssociatedTask<'_> {
    type Extra = ();

    fn stage(&self) -> &str {
        "nonasstest"
    }

    fn ring(&self) -> &RingRef<Rationals> {
        self.f.ring()
    }

    fn inputs(&self) -> Vec<&[Poly<Rationals>]> {
        vec![self.f.polys(), self.g.polys()]
    }

    fn compute(&self, p: u64) -> Result<PrimeOutcome<()>> {
        self.tried.lock().unwrap().push(p);
        Ok(match local_diq(p, self.f, self.g)? {
            Local::Unusable(class) => PrimeOutcome { class, result: None },
            Local::Usable { agrees: true, .. } => {
                self.agreed.fetch_add(1, Ordering::Relaxed);
                PrimeOutcome {
                    class: PrimeClass::EffectivelyLucky,
                    result: None,
                }
            }
            Local::Usable { diq, .. } => {
                self.differed.fetch_add(1, Ordering::Relaxed);
                PrimeOutcome {
                    class: PrimeClass::EffectivelyLucky,
                    result: Some((diq, ())),
                }
            }
        })
    }

    /// `K·H ⊆ I` puts `K` inside `(I : (I : P))`; an element of `K` outside
    /// `P` then shows `(I : (I : P)) ⊄ P`.
    fn final_test(&self, cand: &[Poly<Rationals>], _: &()) -> Result<bool> {
        if !products_in(self.f, cand, self.h.polys())? {
            return Ok(false);
        }
        for k in cand {
            if !self.g.contains(k)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn abandon_when_empty(&self) -> bool {
        true
    }
}

/// Modular test that `P` (reduced basis `g`, assumed prime) is not an
/// associated prime of `I` (reduced basis `f`).
///
/// Primes where `(I_p : (I_p : P_p)) = P_p` are discarded; the rest are
/// lifted to `K` and `K` is certified to lie in `(I : (I : P))` but not in
/// `P`. When every usable prime agrees with `P` the verdict is
/// `Inconclusive` with reason `all_primes_agree`.
pub fn non_associated_test(
    f: &GroebnerBasis<Rationals>,
    g: &GroebnerBasis<Rationals>,
    cfg: &ModularRunConfig,
) -> Result<DivisorVerdict> {
    check_pair(f, g)?;
    let h = mod_quotient_staged("nonasstest.quotient", f, g.polys(), None, cfg)?;
    let mut used = h.primes_used.clone();
    if !h.certified() {
        return Ok(DivisorVerdict::inconclusive("quotient_uncertified", used));
    }
    let task = NonAssociatedTask {
        f,
        g,
        h: &h.basis,
        agreed: AtomicUsize::new(0),
        differed: AtomicUsize::new(0),
        tried: Mutex::new(Vec::new()),
    };
    match run(&task, cfg) {
        Ok(out) => {
            used.extend(&out.primes_used);
            if out.status == LiftStatus::Certified {
                Ok(DivisorVerdict {
                    verdict: Verdict::NotAssociated,
                    witness: Some(Witness::Basis(out.basis)),
                    reason: "lifted_diq_escapes_p".into(),
                    primes_used: used,
                })
            } else {
                Ok(DivisorVerdict::inconclusive("uncertified", used))
            }
        }
        Err(Error::ModularFailure { .. }) => {
            let mut tried = task.tried.into_inner().unwrap();
            tried.sort_unstable();
            used.extend(tried);
            let reason = if task.differed.load(Ordering::Relaxed) == 0 && task.agreed.load(Ordering::Relaxed) > 0 {
                "all_primes_agree"
            } else {
                "budget_exhausted"
            };
            Ok(DivisorVerdict::inconclusive(reason, used))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ideal_i, worked_example, xy_ring};
    use crate::idealops::intersect_all;
    use crate::modular::rational_basis;

    fn strs<F: Field>(i: &Ideal<F>) -> Vec<String> {
        i.gb().unwrap().polys().iter().map(|p| p.to_string()).collect()
    }

    fn cfg(seed: u64) -> ModularRunConfig {
        ModularRunConfig {
            seed,
            ..ModularRunConfig::default()
        }
    }

    #[test]
    fn worked_example_quotients() {
        let r = xy_ring();
        let (i, j) = worked_example(&r).unwrap();
        assert!(diq(&i, &j).unwrap().equals(&j).unwrap());
        let x2y = ideal_i(&r, &[&[(1, &[2, 0])], &[(1, &[0, 1])]]);
        let xp1 = ideal_i(&r, &[&[(1, &[1, 0]), (1, &[0, 0])]]);
        let expected = intersect(&x2y, &xp1).unwrap();
        let inner = diq_sat_variants(&i, &j, DiqVariant::InnerSaturated).unwrap();
        assert!(inner.equals(&expected).unwrap());
        assert!(diq(&i, &Ideal::unit(&r)).unwrap().is_unit().unwrap());

        let f = rational_basis(&i, &cfg(1)).unwrap();
        let out = mod_diq(&f, j.gens(), &cfg(1)).unwrap();
        assert!(out.certified());
        assert_eq!(&out.basis, &*j.gb().unwrap());
        let out = mod_diq(&f, &[Poly::one(&r)], &cfg(1)).unwrap();
        assert!(out.basis.is_unit());
    }

    #[test]
    fn prime_divisors_of_the_worked_example() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let ass = [
            ideal_i(&r, &[&[(1, &[1, 0])]]),
            ideal_i(&r, &[&[(1, &[1, 0])], &[(1, &[0, 1])]]),
            ideal_i(&r, &[&[(1, &[1, 0]), (1, &[0, 0])]]),
        ];
        for p in &ass {
            assert!(is_prime_divisor_direct(&i, p).unwrap(), "{p:?}");
        }
        let y = ideal_i(&r, &[&[(1, &[0, 1])]]);
        assert!(!is_prime_divisor_direct(&i, &y).unwrap());
        assert!(!ass_subset_check(&i, &y).unwrap());
        let j = intersect_all(&r, &ass[1..]).unwrap();
        assert!(ass_subset_check(&i, &j).unwrap());
        let rad = intersect(&ass[0], &ass[2]).unwrap();
        assert!(ass_subset_check(&i, &rad).unwrap());
    }

    #[test]
    fn primary_component_criterion() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let m = ideal_i(&r, &[&[(1, &[1, 0])], &[(1, &[0, 1])]]);
        let x3y = ideal_i(&r, &[&[(1, &[3, 0])], &[(1, &[0, 1])]]);
        // (x) ∩ (x^3, xy, y^k) = (x^3, xy) for every k, so each is a component
        let x3xyy99 = ideal_i(&r, &[&[(1, &[3, 0])], &[(1, &[1, 1])], &[(1, &[0, 99])]]);
        // x^4 + x^3 ∈ I lies outside (x^99, y) ∩ (x) ∩ (x + 1)
        let x99y = ideal_i(&r, &[&[(1, &[99, 0])], &[(1, &[0, 1])]]);
        let x2y = ideal_i(&r, &[&[(1, &[2, 0])], &[(1, &[0, 1])]]);
        assert!(is_primary_component(&i, &m, &x3y).unwrap());
        assert!(is_primary_component(&i, &m, &x3xyy99).unwrap());
        assert!(!is_primary_component(&i, &m, &x99y).unwrap());
        assert!(!is_primary_component(&i, &m, &x2y).unwrap());
        assert!(matches!(
            is_primary_component(&i, &m, &m),
            Err(Error::HypothesisViolated(_))
        ));
        let y = ideal_i(&r, &[&[(1, &[0, 1])]]);
        assert!(matches!(
            is_primary_component(&i, &m, &y),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn isolated_components() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let x = ideal_i(&r, &[&[(1, &[1, 0])]]);
        let c = isolated_component(&i, &x).unwrap();
        assert_eq!(strs(&c.component), ["x"]);
        assert!(c.certified);
        assert_eq!(c.kind, ComponentKind::Isolated);

        let xx1 = ideal_i(&r, &[&[(1, &[2, 0]), (1, &[1, 0])]]);
        let c = isolated_component(&i, &xx1).unwrap();
        assert_eq!(strs(&c.component), ["x^2 + x"]);
        assert!(c.certified);

        let q = ideal_i(&r, &[&[(1, &[2, 0])], &[(1, &[0, 1])]]);
        let c = isolated_component(&q, &ideal_i(&r, &[&[(1, &[1, 0])], &[(1, &[0, 1])]])).unwrap();
        assert!(c.component.equals(&q).unwrap());
    }

    #[test]
    fn components_from_powers() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let m = ideal_i(&r, &[&[(1, &[1, 0])], &[(1, &[0, 1])]]);
        let c = component_from_power(&i, &m, true).unwrap();
        assert!(c.certified);
        assert!(c.exponent_used.unwrap() >= 3);
        assert!(is_primary_component(&i, &m, &c.component).unwrap());
        let (s, _) = saturate(&i, &m).unwrap();
        assert!(intersect(&s, &c.component).unwrap().equals(&i).unwrap());
        let unchecked = component_from_power(&i, &m, false).unwrap();
        assert!(!unchecked.certified);

        let c = component_from_power(&m, &m, true).unwrap();
        assert_eq!(c.exponent_used, Some(1));
        assert!(c.component.equals(&m).unwrap());

        let x2 = ideal_i(&r, &[&[(1, &[2, 0])]]);
        let x = ideal_i(&r, &[&[(1, &[1, 0])]]);
        let c = component_from_power(&x2, &x, true).unwrap();
        assert_eq!(c.exponent_used, Some(2));
        assert_eq!(strs(&c.component), ["x^2"]);
    }

    #[test]
    fn modular_association_tests() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let f = rational_basis(&i, &cfg(3)).unwrap();
        let basis = |p: &Ideal<Rationals>| (*p.gb().unwrap()).clone();
        let xp1 = basis(&ideal_i(&r, &[&[(1, &[1, 0]), (1, &[0, 0])]]));
        let x = basis(&ideal_i(&r, &[&[(1, &[1, 0])]]));
        let y = basis(&ideal_i(&r, &[&[(1, &[0, 1])]]));

        let v = associated_test_modular(&f, &xp1, &cfg(3)).unwrap();
        assert_eq!(v.verdict, Verdict::Associated, "{}", v.reason);
        let v = associated_test_modular(&f, &x, &cfg(3)).unwrap();
        assert_eq!(v.verdict, Verdict::Associated, "{}", v.reason);
        let v = associated_test_modular(&f, &y, &cfg(3)).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);

        let v = non_associated_test(&f, &y, &cfg(3)).unwrap();
        assert_eq!(v.verdict, Verdict::NotAssociated, "{}", v.reason);
        let Some(Witness::Basis(k)) = &v.witness else { panic!("expected a basis") };
        assert!(k.polys().iter().any(|p| !y.contains(p).unwrap()));
        let v = non_associated_test(&f, &xp1, &cfg(3)).unwrap();
        assert_eq!(v.verdict, Verdict::Inconclusive);
        assert_eq!(v.reason, "all_primes_agree");
    }

    #[test]
    fn random_shifted_lines_are_not_associated() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let f = rational_basis(&i, &cfg(4)).unwrap();
        for k in [2i64, -3, 5, 7] {
            let p = ideal_i(&r, &[&[(1, &[1, 0]), (-k, &[0, 0])]]);
            let g = (*p.gb().unwrap()).clone();
            let v = non_associated_test(&f, &g, &cfg(k as u64)).unwrap();
            assert_eq!(v.verdict, Verdict::NotAssociated, "k = {k}");
            assert!(!is_prime_divisor_direct(&i, &p).unwrap());
        }
    }
}
