use super::engine::{run, ModularOutcome, ModularTask, PrimeOutcome};
use super::primes::{classify_prime, PrimeClass};
use super::{ModularRunConfig, VerifyLevel};
use crate::deadline;
use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::groebner::{buchberger, normal_form, verify_reduced_gb, GroebnerBasis, Ideal};
use crate::idealops::{power_bracket, quotient, saturate};
use crate::polycore::{reduce_all, ring_mod_p, Monomial, Poly, RingRef};

/// Largest `k` in the escalation `m·k` of the bracket-power final test.
const BRACKET_CAP: u32 = 16;
/// Largest saturation exponent certified over the rationals.
const EXPONENT_CAP: u32 = 64;

fn trivial<X>(basis: GroebnerBasis<Rationals>, extra: X) -> ModularOutcome<X> {
    ModularOutcome {
        basis,
        extra,
        status: super::LiftStatus::Certified,
        primes_used: Vec::new(),
        rounds: 0,
    }
}

fn unit_basis(ring: &RingRef<Rationals>) -> GroebnerBasis<Rationals> {
    GroebnerBasis::from_reduced_unchecked(ring, vec![Poly::one(ring)])
}

/// `x^a ↦ x^a·h^(d - |a|)` with `d` the total degree of `f`.
fn homogenize(f: &Poly<Rationals>, ring_h: &RingRef<Rationals>) -> Poly<Rationals> {
    let d = f.terms().iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e.push(d - m.degree());
            (Monomial::new(&e).expect("degree already fits"), c.clone())
        })
        .collect();
    Poly::from_terms(ring_h, terms).expect("arity matches")
}

fn dehomogenize(f: &Poly<Rationals>, ring: &RingRef<Rationals>) -> Poly<Rationals> {
    let n = ring.nvars();
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| (Monomial::new(&m.exps()[..n]).expect("fits"), c.clone()))
        .collect();
    Poly::from_terms(ring, terms).expect("arity matches")
}

/// Minimal, monic, tail-reduced basis from any Gröbner basis.
fn reduce_basis(ring: &RingRef<Rationals>, gb: Vec<Poly<Rationals>>) -> Result<Vec<Poly<Rationals>>> {
    let ord = ring.order();
    let mut gb: Vec<Poly<Rationals>> = gb.into_iter().filter(|f| !f.is_zero()).map(|f| f.monic()).collect();
    gb.sort_by(|a, b| ord.cmp(a.lm().unwrap(), b.lm().unwrap()));
    let mut minimal: Vec<Poly<Rationals>> = Vec::new();
    for f in gb {
        if !minimal.iter().any(|g| g.lm().unwrap().divides(f.lm().unwrap())) {
            minimal.push(f);
        }
    }
    minimal.reverse();
    crate::groebner::interreduce_basis(minimal)
}

struct GroebnerTask {
    ring: RingRef<Rationals>,
    hom: Vec<Poly<Rationals>>,
}

impl ModularTask for GroebnerTask {
    type Extra = ();

    fn stage(&self) -> &str {
        "groebner"
    }

    fn ring(&self) -> &RingRef<Rationals> {
        &self.ring
    }

    fn inputs(&self) -> Vec<&[Poly<Rationals>]> {
        vec![&self.hom]
    }

    fn compute(&self, p: u64) -> Result<PrimeOutcome<()>> {
        let ring_p = ring_mod_p(&self.ring, p);
        let gb = buchberger(&reduce_all(&self.hom, &ring_p)?, &ring_p)?;
        Ok(PrimeOutcome {
            class: PrimeClass::WeakPermissible,
            result: Some((gb, ())),
        })
    }

    /// The candidate is a Gröbner basis containing the inputs whose leading
    /// monomials match a modular basis of the same homogeneous ideal. The
    /// Hilbert function mod p never exceeds the rational one, so the two
    /// ideals agree in every degree.
    fn final_test(&self, cand: &[Poly<Rationals>], _: &()) -> Result<bool> {
        for f in &self.hom {
            if !normal_form(f, cand)?.is_zero() {
                return Ok(false);
            }
        }
        verify_reduced_gb(cand, &self.ring)
    }
}

/// Reduced Gröbner basis over the rationals of the ideal generated by
/// `gens`, lifted from modular bases of the homogenized generators.
pub fn mod_groebner(
    gens: &[Poly<Rationals>],
    ring: &RingRef<Rationals>,
    cfg: &ModularRunConfig,
) -> Result<ModularOutcome<()>> {
    let gens: Vec<Poly<Rationals>> = gens.iter().filter(|f| !f.is_zero()).map(|f| f.reorder(ring)).collect();
    if gens.is_empty() {
        return Ok(trivial(GroebnerBasis::from_reduced_unchecked(ring, Vec::new()), ()));
    }
    if gens.iter().any(|f| f.is_constant()) {
        return Ok(trivial(unit_basis(ring), ()));
    }
    let n = ring.nvars();
    let ring_h = ring.extend(&["h"], ring.order().extended(n, &[n]))?;
    let task = GroebnerTask {
        hom: gens.iter().map(|f| homogenize(f, &ring_h)).collect(),
        ring: ring_h,
    };
    let out = run(&task, cfg)?;
    let dehom: Vec<Poly<Rationals>> = out.basis.polys().iter().map(|f| dehomogenize(f, ring)).collect();
    let polys = reduce_basis(ring, dehom)?;
    Ok(ModularOutcome {
        basis: GroebnerBasis::from_reduced_unchecked(ring, polys),
        extra: (),
        status: out.status,
        primes_used: out.primes_used,
        rounds: out.rounds,
    })
}

/// `h·g ∈ I` for every pair.
pub(crate) fn products_in(f: &GroebnerBasis<Rationals>, hs: &[Poly<Rationals>], gs: &[Poly<Rationals>]) -> Result<bool> {
    for h in hs {
        for g in gs {
            deadline::check()?;
            if !f.contains(&h.checked_mul(g)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

enum Colon {
    Quotient,
    Saturation,
}

struct ColonTask<'a> {
    stage: &'a str,
    kind: Colon,
    f: &'a GroebnerBasis<Rationals>,
    g: &'a [Poly<Rationals>],
    /// Primes must also be effectively lucky for this basis.
    also: Option<&'a GroebnerBasis<Rationals>>,
}

impl ModularTask for ColonTask<'_> {
    type Extra = u32;

    fn stage(&self) -> &str {
        self.stage
    }

    fn ring(&self) -> &RingRef<Rationals> {
        self.f.ring()
    }

    fn inputs(&self) -> Vec<&[Poly<Rationals>]> {
        let mut v = vec![self.f.polys(), self.g];
        if let Some(h) = self.also {
            v.push(h.polys());
        }
        v
    }

    fn compute(&self, p: u64) -> Result<PrimeOutcome<u32>> {
        let rec = classify_prime(p, self.f)?;
        let Some(fp) = rec.result else {
            return Ok(PrimeOutcome {
                class: rec.class,
                result: None,
            });
        };
        if let Some(h) = self.also {
            let rh = classify_prime(p, h)?;
            if rh.class != PrimeClass::EffectivelyLucky {
                return Ok(PrimeOutcome {
                    class: PrimeClass::Permissible,
                    result: None,
                });
            }
        }
        let ring_p = fp.ring().clone();
        let ip = Ideal::from_gb(fp);
        let jp = Ideal::new(&ring_p, reduce_all(self.g, &ring_p)?)?;
        let (out, m) = match self.kind {
            Colon::Quotient => (quotient(&ip, &jp)?, 0),
            Colon::Saturation => saturate(&ip, &jp)?,
        };
        let gb = (*out.gb()?).clone();
        Ok(PrimeOutcome {
            class: PrimeClass::EffectivelyLucky,
            result: Some((gb, m)),
        })
    }

    fn final_test(&self, cand: &[Poly<Rationals>], m: &u32) -> Result<bool> {
        match self.kind {
            Colon::Quotient => products_in(self.f, cand, self.g),
            Colon::Saturation => {
                let mut k = 1;
                while k <= BRACKET_CAP {
                    let bracket = power_bracket(self.g, (*m).max(1) * k)?;
                    if products_in(self.f, cand, &bracket)? {
                        return Ok(true);
                    }
                    k *= 2;
                }
                Ok(false)
            }
        }
    }
}

fn nonzero(g: &[Poly<Rationals>], ring: &RingRef<Rationals>) -> Vec<Poly<Rationals>> {
    g.iter().filter(|f| !f.is_zero()).map(|f| f.reorder(ring)).collect()
}

fn colon(
    stage: &str,
    kind: Colon,
    f: &GroebnerBasis<Rationals>,
    g: &[Poly<Rationals>],
    also: Option<&GroebnerBasis<Rationals>>,
    cfg: &ModularRunConfig,
) -> Result<ModularOutcome<u32>> {
    let ring = f.ring();
    let g = nonzero(g, ring);
    if g.is_empty() {
        return Ok(trivial(unit_basis(ring), 0));
    }
    if f.is_unit() || g.iter().any(|p| p.is_constant()) {
        return Ok(trivial(f.clone(), 0));
    }
    let task = ColonTask {
        stage,
        kind,
        f,
        g: &g,
        also,
    };
    run(&task, cfg)
}

/// `(I : J)` for `I` given by its reduced basis `f` over the rationals and
/// `J` by generators.
pub fn mod_quotient(
    f: &GroebnerBasis<Rationals>,
    g: &[Poly<Rationals>],
    cfg: &ModularRunConfig,
) -> Result<ModularOutcome<()>> {
    let out = colon("quotient", Colon::Quotient, f, g, None, cfg)?;
    Ok(drop_extra(out))
}

pub(crate) fn mod_quotient_staged(
    stage: &str,
    f: &GroebnerBasis<Rationals>,
    g: &[Poly<Rationals>],
    also: Option<&GroebnerBasis<Rationals>>,
    cfg: &ModularRunConfig,
) -> Result<ModularOutcome<()>> {
    Ok(drop_extra(colon(stage, Colon::Quotient, f, g, also, cfg)?))
}

fn drop_extra<X>(o: ModularOutcome<X>) -> ModularOutcome<()> {
    ModularOutcome {
        basis: o.basis,
        extra: (),
        status: o.status,
        primes_used: o.primes_used,
        rounds: o.rounds,
    }
}

/// `(I : J^∞)` and its stabilization index. For certified runs the index is
/// the least `m` with `H·J^m ⊆ I`, checked over the rationals.
pub fn mod_saturate(
    f: &GroebnerBasis<Rationals>,
    g: &[Poly<Rationals>],
    cfg: &ModularRunConfig,
) -> Result<ModularOutcome<u32>> {
    let ring = f.ring();
    let gz = nonzero(g, ring);
    if gz.is_empty() {
        // (I : 0^∞) = ⟨1⟩, reached after one step unless I is already ⟨1⟩
        let m = u32::from(!f.is_unit());
        return Ok(trivial(unit_basis(ring), m));
    }
    let mut out = colon("saturate", Colon::Saturation, f, &gz, None, cfg)?;
    if out.certified() && out.rounds > 0 {
        out.extra = exact_exponent(f, out.basis.polys(), &gz, out.extra)?;
    }
    Ok(out)
}

/// Least `m` with `H·J^m ⊆ I`, searched from `guess`.
fn exact_exponent(
    f: &GroebnerBasis<Rationals>,
    h: &[Poly<Rationals>],
    g: &[Poly<Rationals>],
    guess: u32,
) -> Result<u32> {
    let ring = f.ring();
    let holds = |m: u32| -> Result<bool> {
        let mut power = vec![Poly::one(ring)];
        for _ in 0..m {
            let mut next: Vec<Poly<Rationals>> = Vec::new();
            for a in &power {
                for b in g {
                    let c = a.checked_mul(b)?;
                    if !next.contains(&c) {
                        next.push(c);
                    }
                }
            }
            power = next;
        }
        products_in(f, h, &power)
    };
    let mut m = guess;
    if holds(m)? {
        while m > 0 && holds(m - 1)? {
            m -= 1;
        }
        Ok(m)
    } else {
        while !holds(m)? {
            m += 1;
            if m > EXPONENT_CAP {
                return Err(Error::modular("saturate", "stabilization index above cap"));
            }
        }
        Ok(m)
    }
}

/// Reduced basis over the rationals for a modular run: the cached basis when
/// present, otherwise [`mod_groebner`]. Fails unless certified at `Full`.
pub fn rational_basis(ideal: &Ideal<Rationals>, cfg: &ModularRunConfig) -> Result<GroebnerBasis<Rationals>> {
    if let Some(gb) = ideal.cached_gb() {
        return Ok((*gb).clone());
    }
    let out = mod_groebner(ideal.gens(), ideal.ring(), cfg)?;
    if !out.certified() && cfg.verify == VerifyLevel::Full {
        return Err(Error::modular("groebner", "basis not certified"));
    }
    if out.certified() {
        ideal.seed(out.basis.clone());
    }
    Ok(out.basis)
}
