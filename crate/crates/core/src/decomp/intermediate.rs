use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde_json::{json, Value};

use super::primes_fp::{associated_primes_fp, group_by_mis};
use crate::deadline;
use crate::diq::{ass_subset_check, component_from_power_in, isolated_component_in, ComponentResult};
use crate::error::{Error, Result};
use crate::field::{PrimeField, Rationals};
use crate::groebner::{dimension_and_mis, verify_reduced_gb, GroebnerBasis, Ideal};
use crate::idealops::intersect_all;
use crate::modular::{
    choose_primes, classify_prime, run, signature_hash, stable_hash, ModularRunConfig, ModularTask, PrimeClass,
    PrimeOutcome, PrimeSource, RunRecord,
};
use crate::par;
use crate::polycore::{Poly, RingRef};

type Q = Rationals;
type Fp = PrimeField;

/// Per-U radical intersections `H_p(U)` for one prime, with group sizes.
#[derive(Debug)]
struct PrimeDecomposition {
    groups: BTreeMap<Vec<usize>, (GroebnerBasis<Fp>, usize)>,
}

impl PrimeDecomposition {
    fn keys(&self) -> Vec<Vec<usize>> {
        self.groups.keys().cloned().collect()
    }
}

/// Decompositions by prime; `None` marks a prime unusable for decomposition.
type Cache = Mutex<BTreeMap<u64, (PrimeClass, Option<Arc<PrimeDecomposition>>)>>;

fn decompose_mod(f: &GroebnerBasis<Q>, p: u64) -> Result<(PrimeClass, Option<Arc<PrimeDecomposition>>)> {
    let rec = classify_prime(p, f)?;
    let Some(fp) = rec.result else {
        return Ok((rec.class, None));
    };
    let ring = fp.ring().clone();
    let ip = Ideal::from_gb(fp);
    let res = match associated_primes_fp(&ip) {
        Ok(r) if r.complete => r,
        Ok(_) | Err(Error::Unsupported(_)) => return Ok((PrimeClass::Permissible, None)),
        Err(e) => return Err(e),
    };
    let mut groups = BTreeMap::new();
    for (u, ps) in group_by_mis(&res) {
        let h = intersect_all(&ring, &ps)?;
        groups.insert(u, ((*h.gb()?).clone(), ps.len()));
    }
    Ok((rec.class, Some(Arc::new(PrimeDecomposition { groups }))))
}

fn cached(cache: &Cache, f: &GroebnerBasis<Q>, p: u64) -> Result<(PrimeClass, Option<Arc<PrimeDecomposition>>)> {
    if let Some(hit) = cache.lock().unwrap().get(&p) {
        return Ok(hit.clone());
    }
    let out = decompose_mod(f, p)?;
    cache.lock().unwrap().insert(p, out.clone());
    Ok(out)
}

/// Lifts `H_p(U)` for one `U`. Primes whose set of groups differs from
/// the agreed one are unusable.
struct GroupTask<'a> {
    f: &'a GroebnerBasis<Q>,
    ideal: &'a Ideal<Q>,
    u: &'a [usize],
    keys: &'a [Vec<usize>],
    cache: &'a Cache,
}

impl ModularTask for GroupTask<'_> {
    /// Number of primes in the group.
    type Extra = usize;

    fn stage(&self) -> &str {
        "idecomp"
    }

    fn ring(&self) -> &RingRef<Q> {
        self.f.ring()
    }

    fn inputs(&self) -> Vec<&[Poly<Q>]> {
        vec![self.f.polys()]
    }

    fn compute(&self, p: u64) -> Result<PrimeOutcome<usize>> {
        let (class, dec) = cached(self.cache, self.f, p)?;
        let result = dec
            .filter(|d| d.keys() == self.keys)
            .and_then(|d| d.groups.get(self.u).map(|(h, k)| (h.clone(), *k)));
        Ok(PrimeOutcome { class, result })
    }

    fn final_test(&self, cand: &[Poly<Q>], _: &usize) -> Result<bool> {
        if !verify_reduced_gb(cand, self.f.ring())? {
            return Ok(false);
        }
        let h = GroebnerBasis::from_reduced_unchecked(self.f.ring(), cand.to_vec());
        if h.is_unit() {
            return Ok(false);
        }
        // I ⊆ J: every prime of the group contains I
        for g in self.f.polys() {
            if !h.contains(g)? {
                return Ok(false);
            }
        }
        ass_subset_check(self.ideal, &Ideal::from_gb(h))
    }
}

/// The lifted radical of one independent-set group and what was certified.
#[derive(Debug, Clone)]
pub struct GroupLift {
    /// Reduced basis of the lift of `H_p(U)`.
    pub basis: GroebnerBasis<Q>,
    /// Primes drawn for this group, in order.
    pub modular_primes: Vec<u64>,
    /// The lift contains `I` and reduces to the radical intersection
    /// computed mod p.
    pub radical: bool,
    /// `Ass(J) ⊆ Ass(I)` for the lift `J`.
    pub ass_subset: bool,
    /// The group held one prime mod p, so the certified lift is an
    /// associated prime of `I`.
    pub single_prime: bool,
}

/// Lifts the group of `u` to the rationals through the modular engine.
/// `keys` is the set of groups every usable prime must reproduce.
fn lift_group(
    f: &GroebnerBasis<Q>,
    ideal: &Ideal<Q>,
    u: &[usize],
    keys: &[Vec<usize>],
    cache: &Cache,
    cfg: &ModularRunConfig,
) -> Result<GroupLift> {
    let task = GroupTask {
        f,
        ideal,
        u,
        keys,
        cache,
    };
    let out = run(&task, cfg)?;
    let certified = out.certified();
    Ok(GroupLift {
        basis: out.basis,
        modular_primes: out.primes_used,
        radical: certified,
        ass_subset: certified,
        single_prime: certified && out.extra == 1,
    })
}

/// Lifts the radical intersection of the associated primes of `I` mod p
/// that share the independent set `u`. Groups are discovered afresh.
pub fn lift_radical_group(f: &GroebnerBasis<Q>, u: &[usize], cfg: &ModularRunConfig) -> Result<GroupLift> {
    let cfg = with_min_prime(f, cfg);
    let cache = Cache::default();
    let (keys, _) = discover_groups(f, &cache, &cfg)?;
    if !keys.iter().any(|k| k == u) {
        return Err(Error::InvalidArgument(format!(
            "no associated prime has {:?} as its independent set",
            f.ring().var_names(u)
        )));
    }
    lift_group(f, &Ideal::from_gb(f.clone()), u, &keys, &cache, &cfg)
}

/// One entry of an intermediate decomposition.
#[derive(Debug, Clone)]
pub struct GroupResult {
    pub lift: GroupLift,
    /// `None` when no component could be formed; see the diagnostics.
    pub component: Option<ComponentResult<Q>>,
}

/// `I = ⋂_U J_U` with one `J_U` per independent set of the associated primes.
#[derive(Debug, Clone)]
pub struct IntermediateDecomposition {
    pub components: BTreeMap<Vec<usize>, GroupResult>,
    /// The intersection of the components was checked to equal `I`.
    pub certified_cover: bool,
    /// Every prime drawn, over all stages, without repeats.
    pub primes_used: Vec<u64>,
    /// Why a group or the cover failed, in order of occurrence.
    pub diagnostics: Vec<String>,
    pub input_hash: String,
    ring: RingRef<Q>,
}

impl IntermediateDecomposition {
    /// JSON report with sorted keys.
    pub fn report(&self) -> Value {
        let groups: Vec<Value> = self
            .components
            .iter()
            .map(|(u, g)| {
                json!({
                    "U": self.ring.var_names(u),
                    "modular_primes": g.lift.modular_primes,
                    "lifted_basis": g.lift.basis.polys().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "component": g.component.as_ref().map(|c| {
                        c.component.gens().iter().map(|p| p.to_string()).collect::<Vec<_>>()
                    }),
                    "certification": {
                        "radical": g.lift.radical,
                        "ass_subset": g.lift.ass_subset,
                        "primary": g.component.as_ref().is_some_and(|c| c.certified),
                    },
                })
            })
            .collect();
        json!({
            "input_hash": self.input_hash,
            "primes_used": self.primes_used,
            "groups": groups,
            "cover_verified": self.certified_cover,
        })
    }
}

/// Primes below twice the largest input degree are skipped, which keeps
/// the eliminants met mod p separable on small inputs.
fn with_min_prime(f: &GroebnerBasis<Q>, cfg: &ModularRunConfig) -> ModularRunConfig {
    let maxdeg = f
        .polys()
        .iter()
        .flat_map(|g| g.terms().iter().map(|(m, _)| m.degree() as u64))
        .max()
        .unwrap_or(0);
    let mut out = cfg.clone();
    out.min_prime = out.min_prime.max(2 * maxdeg + 1);
    out
}

/// The set of groups shared by most usable primes, with the primes drawn.
/// Ties go to the smallest set.
fn discover_groups(f: &GroebnerBasis<Q>, cache: &Cache, cfg: &ModularRunConfig) -> Result<(Vec<Vec<usize>>, Vec<u64>)> {
    let mut src = PrimeSource::new(cfg)?;
    let inputs = [f.polys()];
    let mut used = Vec::new();
    let mut votes: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut batch = cfg.initial_primes.max(1);
    for _ in 0..cfg.max_rounds {
        deadline::check()?;
        let primes: Vec<u64> = choose_primes(&mut src, batch, &inputs, &[])?.into_iter().map(|r| r.p).collect();
        let outs = par::map(cfg.exec, primes, |p| {
            let t0 = Instant::now();
            (p, cached(cache, f, p), t0.elapsed().as_micros() as u64)
        });
        for (p, out, micros) in outs {
            let (class, dec) = out?;
            if let Some(l) = &cfg.log {
                l.push(RunRecord {
                    class: class.as_str().to_string(),
                    micros,
                    prime: p,
                    sig: dec
                        .as_ref()
                        .map(|d| {
                            let lms: Vec<_> = d.groups.values().flat_map(|(h, _)| h.signature()).collect();
                            signature_hash(&lms)
                        })
                        .unwrap_or_default(),
                    stage: "idecomp.groups".to_string(),
                });
            }
            used.push(p);
            if let Some(d) = dec {
                votes.push(d.keys());
            }
        }
        if !votes.is_empty() {
            let best = votes
                .iter()
                .max_by(|a, b| {
                    let na = votes.iter().filter(|v| v == a).count();
                    let nb = votes.iter().filter(|v| v == b).count();
                    na.cmp(&nb).then_with(|| b.cmp(a))
                })
                .unwrap()
                .clone();
            return Ok((best, used));
        }
        batch = used.len();
    }
    Err(Error::modular(
        "idecomp",
        format!("no prime among {} gave a complete decomposition", used.len()),
    ))
}

fn merge(into: &mut Vec<u64>, ps: &[u64]) {
    for &p in ps {
        if !into.contains(&p) {
            into.push(p);
        }
    }
}

/// `true` for failures that leave a partial result rather than abort.
fn recoverable(e: &Error) -> bool {
    !matches!(e, Error::Timeout)
}

/// Intermediate primary decomposition of `I`, given by its reduced basis
/// `f` over the rationals.
///
/// Associated primes are computed mod p and grouped by independent set;
/// each group's radical intersection is lifted and certified, then turned
/// into a component: the isolated component when the set has size
/// `dim I`, otherwise `hull(I + J^m)` for a certified `m`. The cover is
/// checked in both directions.
///
/// Failures other than a timeout leave a partial result with
/// `certified_cover` false and a diagnostic.
pub fn intermediate_decomposition(f: &GroebnerBasis<Q>, cfg: &ModularRunConfig) -> Result<IntermediateDecomposition> {
    if f.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let ring = f.ring().clone();
    let ideal = Ideal::from_gb(f.clone());
    let input_hash = stable_hash(
        f.polys()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
            .into_bytes(),
    );
    let mut out = IntermediateDecomposition {
        components: BTreeMap::new(),
        certified_cover: false,
        primes_used: Vec::new(),
        diagnostics: Vec::new(),
        input_hash,
        ring: ring.clone(),
    };
    let cfg = with_min_prime(f, cfg);
    let cache = Cache::default();
    let keys = match discover_groups(f, &cache, &cfg) {
        Ok((keys, used)) => {
            merge(&mut out.primes_used, &used);
            keys
        }
        Err(e) if recoverable(&e) => {
            out.diagnostics.push(format!("groups: {e}"));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let (dim, _) = dimension_and_mis(&ideal)?;

    let mut complete = true;
    for u in &keys {
        let names = ring.var_names(u).join(",");
        let lift = match lift_group(f, &ideal, u, &keys, &cache, &cfg) {
            Ok(l) => l,
            Err(e) if recoverable(&e) => {
                out.diagnostics.push(format!("U={{{names}}}: {e}"));
                complete = false;
                continue;
            }
            Err(e) => return Err(e),
        };
        merge(&mut out.primes_used, &lift.modular_primes);
        let j = Ideal::from_gb(lift.basis.clone());
        let comp = if !(lift.radical && lift.ass_subset) {
            Err(Error::modular("idecomp", "group lift not certified"))
        } else if u.len() == dim {
            isolated_component_in(&ideal, &j, u)
        } else {
            component_from_power_in(&ideal, &j, u, true)
        };
        // Components are kept as their reduced bases.
        let comp = comp.and_then(|mut c| {
            c.component = Ideal::from_gb((*c.component.gb()?).clone());
            Ok(c)
        });
        let component = match comp {
            Ok(c) => Some(c),
            Err(e) if recoverable(&e) => {
                out.diagnostics.push(format!("U={{{names}}}: {e}"));
                complete = false;
                None
            }
            Err(e) => return Err(e),
        };
        out.components.insert(u.clone(), GroupResult { lift, component });
    }

    if complete {
        let comps: Vec<Ideal<Q>> = out
            .components
            .values()
            .filter_map(|g| g.component.as_ref().map(|c| c.component.clone()))
            .collect();
        out.certified_cover = intersect_all(&ring, &comps)?.equals(&ideal)?;
        if !out.certified_cover {
            out.diagnostics.push("the components do not intersect to I".into());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ideal_i, worked_example, xy_ring};
    use crate::polycore::MonomialOrder;

    fn cfg(seed: u64) -> ModularRunConfig {
        ModularRunConfig {
            seed,
            ..ModularRunConfig::default()
        }
    }

    fn strs(g: &[Poly<Q>]) -> Vec<String> {
        g.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn worked_example_decomposes() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let f = (*i.gb().unwrap()).clone();
        let d = intermediate_decomposition(&f, &cfg(1)).unwrap();
        assert!(d.certified_cover, "{:?}", d.diagnostics);
        assert_eq!(d.components.keys().cloned().collect::<Vec<_>>(), vec![vec![], vec![1]]);

        let line = &d.components[&vec![1]];
        assert_eq!(strs(line.lift.basis.polys()), ["x^2 + x"]);
        assert!(line.lift.radical && line.lift.ass_subset && !line.lift.single_prime);
        let c = line.component.as_ref().unwrap();
        assert!(c.certified);
        assert_eq!(strs(c.component.gb().unwrap().polys()), ["x^2 + x"]);

        let point = &d.components[&vec![]];
        assert_eq!(strs(point.lift.basis.polys()), ["x", "y"]);
        assert!(point.lift.single_prime);
        let c = point.component.as_ref().unwrap();
        assert!(c.certified);
        assert!(c.exponent_used.unwrap() >= 3);

        let rep = d.report();
        assert_eq!(rep["cover_verified"], true);
        assert_eq!(rep["groups"].as_array().unwrap().len(), 2);
        let again = intermediate_decomposition(&f, &cfg(1)).unwrap();
        assert_eq!(again.report(), rep);
    }

    #[test]
    fn split_modulo_some_primes_lifts_to_the_rational_radical() {
        let r = crate::families::ring_q(&["x"], MonomialOrder::Grevlex);
        // (x^2 + 1)(x + 1): three linear factors mod 13, 17, 29, two mod 19, 23, 31
        let i = ideal_i(&r, &[&[(1, &[3]), (1, &[2]), (1, &[1]), (1, &[0])]]);
        let f = (*i.gb().unwrap()).clone();
        for primes in [vec![13, 19, 17, 23, 29, 31, 37, 41, 43, 47], vec![13, 17, 29, 37, 41, 53, 61, 73, 89, 97]] {
            let c = ModularRunConfig {
                explicit_primes: Some(primes),
                ..cfg(0)
            };
            let d = intermediate_decomposition(&f, &c).unwrap();
            assert!(d.certified_cover, "{:?}", d.diagnostics);
            assert_eq!(d.components.len(), 1);
            let g = &d.components[&vec![]];
            assert_eq!(strs(g.lift.basis.polys()), ["x^3 + x^2 + x + 1"]);
            assert!(g.lift.radical && g.lift.ass_subset && !g.lift.single_prime);
            assert!(g.component.as_ref().unwrap().component.equals(&i).unwrap());
        }
    }

    #[test]
    fn primary_and_principal_inputs_are_single_components() {
        let r = xy_ring();
        // (x^2, y) is primary to (x, y)
        let i = ideal_i(&r, &[&[(1, &[2, 0])], &[(1, &[0, 1])]]);
        let f = (*i.gb().unwrap()).clone();
        let d = intermediate_decomposition(&f, &cfg(3)).unwrap();
        assert!(d.certified_cover);
        assert_eq!(d.components.len(), 1);
        assert!(d.components[&vec![]].component.as_ref().unwrap().component.equals(&i).unwrap());

        let rx = crate::families::ring_q(&["x"], MonomialOrder::Grevlex);
        let i = ideal_i(&rx, &[&[(1, &[2]), (1, &[1])]]);
        let f = (*i.gb().unwrap()).clone();
        let d = intermediate_decomposition(&f, &cfg(4)).unwrap();
        assert!(d.certified_cover);
        assert_eq!(d.components.len(), 1);
        assert!(d.components[&vec![]].component.as_ref().unwrap().component.equals(&i).unwrap());
    }

    #[test]
    fn group_lift_on_its_own() {
        let r = xy_ring();
        let (i, _) = worked_example(&r).unwrap();
        let f = (*i.gb().unwrap()).clone();
        let g = lift_radical_group(&f, &[1], &cfg(2)).unwrap();
        assert_eq!(strs(g.basis.polys()), ["x^2 + x"]);
        assert!(matches!(lift_radical_group(&f, &[0], &cfg(2)), Err(Error::InvalidArgument(_))));
    }
}
