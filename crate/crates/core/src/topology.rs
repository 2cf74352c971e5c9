//! Grothendieck topology machinery over a finite ambient category: sieve
//! enumeration, axiom verification with witnesses, the canonical topology as
//! the universal colim sieves, presheaves, and the sheaf-condition equalizer.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fincat::{CartesianIndices, FinCategory, MorId, ObjId, DEFAULT_COLIMIT_GUARD};
use crate::finset::{FinSetObject, SetFunction};
use crate::sieves::{
    is_colim_sieve, is_universal_colim_sieve, maximal_sieve, pullback_sieve, ExplicitSieve,
};

/// Default guard on the number of arrows into one object during sieve
/// enumeration (the closed subsets are searched over this set).
pub const DEFAULT_SIEVE_ENUM_GUARD: usize = 16;

/// An assignment of a set of sieves to every object; the verifier decides
/// whether it is a topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyAssignment {
    covers: BTreeMap<ObjId, Vec<ExplicitSieve>>,
}

impl TopologyAssignment {
    pub fn new(cat: &FinCategory, covers: BTreeMap<ObjId, Vec<ExplicitSieve>>) -> Result<Self> {
        for (x, sieves) in &covers {
            if !cat.has_object(x) {
                return Err(Error::UnknownObject { object: x.clone() });
            }
            for s in sieves {
                if s.apex() != x {
                    return Err(Error::ApexMismatch { expected: x.clone(), found: s.apex().clone() });
                }
            }
        }
        let mut full = covers;
        for x in cat.objects() {
            full.entry(x.clone()).or_default();
        }
        for sieves in full.values_mut() {
            sieves.sort();
            sieves.dedup();
        }
        Ok(TopologyAssignment { covers: full })
    }

    pub fn covers(&self, x: &str) -> &[ExplicitSieve] {
        self.covers.get(x).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn contains(&self, sieve: &ExplicitSieve) -> bool {
        self.covers(sieve.apex()).contains(sieve)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ObjId, &Vec<ExplicitSieve>)> {
        self.covers.iter()
    }
}

/// All sieves on `x`: the precomposition-closed subsets of the arrows into
/// `x`, in canonical order.
pub fn enumerate_sieves(cat: &FinCategory, x: &str, guard: usize) -> Result<Vec<ExplicitSieve>> {
    let arrows = cat.arrows_into(x)?;
    if arrows.len() > guard {
        return Err(Error::AmbientTooLarge { needed: 1usize << arrows.len().min(63), bound: 1 << guard });
    }
    // precompute one-step precompositions per member
    let mut closures: BTreeMap<&MorId, BTreeSet<MorId>> = BTreeMap::new();
    for f in &arrows {
        let mut down = BTreeSet::new();
        for g in cat.arrows() {
            if g.dst == *cat.src(f)? {
                down.insert(cat.compose(f, &g.id)?);
            }
        }
        closures.insert(f, down);
    }
    let mut out = Vec::new();
    for mask in CartesianIndices::new(vec![2; arrows.len()]) {
        let members: BTreeSet<MorId> = arrows
            .iter()
            .enumerate()
            .filter(|(i, _)| mask[*i] == 1)
            .map(|(_, f)| f.clone())
            .collect();
        let closed = members.iter().all(|f| closures[f].iter().all(|g| members.contains(g)));
        if closed {
            out.push(ExplicitSieve::new(cat, x, members)?);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomOutcome {
    Pass,
    Fail { witness: String },
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomOutcome::Pass)
    }
}

#[derive(Debug, Clone)]
pub struct TopologyReport {
    pub maximality: AxiomOutcome,
    pub stability: AxiomOutcome,
    pub transitivity: AxiomOutcome,
}

impl TopologyReport {
    pub fn all_pass(&self) -> bool {
        self.maximality.passed() && self.stability.passed() && self.transitivity.passed()
    }
}

/// Verifies the three topology axioms exhaustively; transitivity quantifies
/// over every sieve of every object via [`enumerate_sieves`].
pub fn verify_topology_axioms(
    cat: &FinCategory,
    assignment: &TopologyAssignment,
    guard: usize,
) -> Result<TopologyReport> {
    let mut maximality = AxiomOutcome::Pass;
    for x in cat.objects() {
        let max = maximal_sieve(cat, x)?;
        if !assignment.contains(&max) {
            maximality = AxiomOutcome::Fail { witness: format!("maximal sieve on {x} missing") };
            break;
        }
    }

    let mut stability = AxiomOutcome::Pass;
    'stab: for (x, sieves) in assignment.iter() {
        for s in sieves {
            for f in cat.arrows_into(x)? {
                let pulled = pullback_sieve(cat, s, &f)?;
                if !assignment.contains(&pulled) {
                    stability = AxiomOutcome::Fail {
                        witness: format!("pullback of a cover of {x} along {f} is not a cover"),
                    };
                    break 'stab;
                }
            }
        }
    }

    let mut transitivity = AxiomOutcome::Pass;
    'trans: for (x, sieves) in assignment.iter() {
        let all_sieves = enumerate_sieves(cat, x, guard)?;
        for s in sieves {
            for r in &all_sieves {
                let mut locally_covering = true;
                for f in s.morphisms() {
                    let pulled = pullback_sieve(cat, r, f)?;
                    if !assignment.contains(&pulled) {
                        locally_covering = false;
                        break;
                    }
                }
                if locally_covering && !assignment.contains(r) {
                    transitivity = AxiomOutcome::Fail {
                        witness: format!(
                            "sieve with {} arrows on {x} is locally covering but not a cover",
                            r.morphisms().len()
                        ),
                    };
                    break 'trans;
                }
            }
        }
    }

    Ok(TopologyReport { maximality, stability, transitivity })
}

/// The canonical topology: J(X) = all universal colim sieves on X, decided
/// exactly in the finite ambient.
pub fn canonical_topology(
    cat: &FinCategory,
    enum_guard: usize,
    colim_guard: usize,
) -> Result<TopologyAssignment> {
    let mut covers = BTreeMap::new();
    for x in cat.objects() {
        let mut list = Vec::new();
        for s in enumerate_sieves(cat, x, enum_guard)? {
            if is_universal_colim_sieve(cat, &s, colim_guard)?.is_universal_colim_sieve {
                list.push(s);
            }
        }
        covers.insert(x.clone(), list);
    }
    TopologyAssignment::new(cat, covers)
}

/// A presheaf of finite sets on a finite category: contravariant, checked
/// exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    values: BTreeMap<ObjId, FinSetObject>,
    /// For m: A -> B this is F(m): F(B) -> F(A).
    maps: BTreeMap<MorId, SetFunction>,
}

impl Presheaf {
    pub fn new(
        cat: &FinCategory,
        values: BTreeMap<ObjId, FinSetObject>,
        maps: BTreeMap<MorId, SetFunction>,
    ) -> Result<Self> {
        for x in cat.objects() {
            if !values.contains_key(x) {
                return Err(Error::NotAFunctor { law: "object totality".into(), at: x.clone() });
            }
        }
        for a in cat.arrows() {
            let m = maps
                .get(&a.id)
                .ok_or_else(|| Error::NotAFunctor { law: "morphism totality".into(), at: a.id.clone() })?;
            if m.domain() != &values[&a.dst] || m.codomain() != &values[&a.src] {
                return Err(Error::NotAFunctor { law: "endpoints".into(), at: a.id.clone() });
            }
        }
        for x in cat.objects() {
            if maps[cat.identity(x)?] != SetFunction::identity(&values[x]) {
                return Err(Error::NotAFunctor { law: "identities".into(), at: x.clone() });
            }
        }
        for g in cat.arrows() {
            for f in cat.arrows() {
                if f.dst != g.src {
                    continue;
                }
                let gf = cat.compose(&g.id, &f.id)?;
                // contravariance: F(g . f) = F(f) . F(g)
                if maps[&gf] != maps[&f.id].compose(&maps[&g.id])? {
                    return Err(Error::NotAFunctor {
                        law: "contravariant composition".into(),
                        at: format!("({}, {})", g.id, f.id),
                    });
                }
            }
        }
        Ok(Presheaf { values, maps })
    }

    pub fn value(&self, x: &str) -> Result<&FinSetObject> {
        self.values
            .get(x)
            .ok_or_else(|| Error::UnknownObject { object: x.to_string() })
    }

    pub fn map(&self, m: &str) -> Result<&SetFunction> {
        self.maps
            .get(m)
            .ok_or_else(|| Error::UnknownMorphism { morphism: m.to_string() })
    }
}

/// The representable presheaf rM = Hom(-, M).
pub fn representable_presheaf(cat: &FinCategory, m: &str) -> Result<Presheaf> {
    if !cat.has_object(m) {
        return Err(Error::UnknownObject { object: m.to_string() });
    }
    let mut values = BTreeMap::new();
    for x in cat.objects() {
        values.insert(x.clone(), FinSetObject::new(cat.hom_set(x, m)?)?);
    }
    let mut maps = BTreeMap::new();
    for a in cat.arrows() {
        let mapping = cat
            .hom_set(&a.dst, m)?
            .into_iter()
            .map(|h| Ok((h.clone(), cat.compose(&h, &a.id)?)))
            .collect::<Result<_>>()?;
        maps.insert(a.id.clone(), SetFunction::new(values[&a.dst].clone(), values[&a.src].clone(), mapping)?);
    }
    Presheaf::new(cat, values, maps)
}

fn family_label(family: &BTreeMap<MorId, String>) -> String {
    let body: Vec<String> = family.iter().map(|(f, x)| format!("{f}={x}")).collect();
    format!("{{{}}}", body.join(";"))
}

/// The sheaf-condition equalizer for a presheaf at a sieve: compatible
/// families (x_f) with x_{f.g} = F(g)(x_f), together with the comparison map
/// from F(apex).
pub fn sheaf_equalizer(
    cat: &FinCategory,
    presheaf: &Presheaf,
    sieve: &ExplicitSieve,
) -> Result<(FinSetObject, SetFunction)> {
    let members: Vec<&MorId> = sieve.morphisms().iter().collect();
    let choices: Vec<Vec<String>> = members
        .iter()
        .map(|f| Ok(presheaf.value(cat.src(f)?)?.elements().to_vec()))
        .collect::<Result<_>>()?;
    let mut families = Vec::new();
    'pick: for pick in CartesianIndices::new(choices.iter().map(|c| c.len()).collect()) {
        let family: BTreeMap<MorId, String> = members
            .iter()
            .enumerate()
            .map(|(i, f)| ((*f).clone(), choices[i][pick[i]].clone()))
            .collect();
        // compatibility: for f in S and g into dom f, x_{f.g} = F(g)(x_f)
        for f in &members {
            for g in cat.arrows() {
                if g.dst != *cat.src(f)? {
                    continue;
                }
                let fg = cat.compose(f, &g.id)?;
                let transported = presheaf.map(&g.id)?.apply(&family[*f])?;
                if family[&fg] != transported {
                    continue 'pick;
                }
            }
        }
        families.push(family_label(&family));
    }
    let equalizer = FinSetObject::new(families)?;

    let apex_values = presheaf.value(sieve.apex())?;
    let mut mapping = BTreeMap::new();
    for t in apex_values.elements() {
        let family: BTreeMap<MorId, String> = members
            .iter()
            .map(|f| Ok(((*f).clone(), presheaf.map(f)?.apply(t)?.to_string())))
            .collect::<Result<_>>()?;
        mapping.insert(t.clone(), family_label(&family));
    }
    let comparison = SetFunction::new(apex_values.clone(), equalizer.clone(), mapping)?;
    Ok((equalizer, comparison))
}

#[derive(Debug, Clone)]
pub struct SheafDecision {
    pub is_sheaf: bool,
    /// (apex, sieve) at which the comparison map fails, if any.
    pub witness: Option<(ObjId, ExplicitSieve)>,
}

/// Sheaf condition: the comparison map is bijective for every cover of every
/// object.
pub fn is_sheaf(
    cat: &FinCategory,
    presheaf: &Presheaf,
    assignment: &TopologyAssignment,
) -> Result<SheafDecision> {
    for (x, sieves) in assignment.iter() {
        for s in sieves {
            let (_, comparison) = sheaf_equalizer(cat, presheaf, s)?;
            if !comparison.is_bijective() {
                return Ok(SheafDecision { is_sheaf: false, witness: Some((x.clone(), s.clone())) });
            }
        }
    }
    Ok(SheafDecision { is_sheaf: true, witness: None })
}

#[derive(Debug, Clone)]
pub struct RepresentableColimDecision {
    pub is_colim_sieve: bool,
    /// Object M whose representable distinguishes the sieve from its apex.
    pub witness: Option<ObjId>,
}

/// The Yoneda route: S is a colim sieve iff for every M the comparison
/// C(X, M) -> lim_{S} Hom(-, M) is bijective. Must agree with the direct
/// decision.
pub fn colim_sieve_via_representables(
    cat: &FinCategory,
    sieve: &ExplicitSieve,
) -> Result<RepresentableColimDecision> {
    for m in cat.objects() {
        let r = representable_presheaf(cat, m)?;
        let (_, comparison) = sheaf_equalizer(cat, &r, sieve)?;
        if !comparison.is_bijective() {
            return Ok(RepresentableColimDecision { is_colim_sieve: false, witness: Some(m.clone()) });
        }
    }
    debug_assert!(
        is_colim_sieve(cat, sieve, DEFAULT_COLIMIT_GUARD)?.is_colim_sieve,
        "representable route must agree with the direct decision"
    );
    Ok(RepresentableColimDecision { is_colim_sieve: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sieves::generate_sieve;

    #[test]
    fn sieve_counts_on_small_categories() {
        let star = catalog::terminal_category();
        assert_eq!(enumerate_sieves(&star, "*", 16).unwrap().len(), 2);

        let arrow = catalog::walking_arrow();
        assert_eq!(enumerate_sieves(&arrow, "1", 16).unwrap().len(), 3);
        assert_eq!(enumerate_sieves(&arrow, "0", 16).unwrap().len(), 2);

        // commutative square apex: arrows into t are idt, a<t, b<t, p<t;
        // closed subsets: {}, {p<t}, {a<t,p<t}, {b<t,p<t}, {a<t,b<t,p<t}, all
        let square = catalog::commutative_square();
        assert_eq!(enumerate_sieves(&square, "t", 16).unwrap().len(), 6);
    }

    #[test]
    fn guard_trips_on_large_arrow_counts() {
        let c = catalog::finset_ambient_category(2);
        // arrows into "2": 1 + 2 + 4 = 7 (and from 0: 1) = 8; guard of 2 trips
        assert!(matches!(
            enumerate_sieves(&c, "2", 2),
            Err(Error::AmbientTooLarge { .. })
        ));
    }

    #[test]
    fn maximal_only_assignment_passes_axioms() {
        for (_, cat) in catalog::test_categories() {
            let covers = cat
                .objects()
                .iter()
                .map(|x| Ok((x.clone(), vec![maximal_sieve(&cat, x)?])))
                .collect::<Result<_>>()
                .unwrap();
            let j = TopologyAssignment::new(&cat, covers).unwrap();
            let report = verify_topology_axioms(&cat, &j, 16).unwrap();
            assert!(report.all_pass(), "{report:?}");
        }
    }

    #[test]
    fn canonical_topology_passes_axioms_everywhere() {
        for (name, cat) in catalog::test_categories() {
            let j = canonical_topology(&cat, 16, DEFAULT_COLIMIT_GUARD).unwrap();
            let report = verify_topology_axioms(&cat, &j, 16).unwrap();
            assert!(report.all_pass(), "{name}: {report:?}");
        }
    }

    #[test]
    fn canonical_topology_on_coequalizer_category_has_a_nontrivial_cover() {
        let cat = catalog::coequalizer_category();
        let j = canonical_topology(&cat, 16, DEFAULT_COLIMIT_GUARD).unwrap();
        let q_sieve = generate_sieve(&cat, "c", &["q".into()]).unwrap();
        assert!(j.contains(&q_sieve));
        assert!(!q_sieve.is_maximal(&cat).unwrap());
    }

    #[test]
    fn doctored_assignment_fails_stability_with_witness() {
        // covers on t include the sieve generated by a<t, but J(a) lacks the
        // pullback (the maximal sieve on a)
        let cat = catalog::commutative_square();
        let s = generate_sieve(&cat, "t", &["a<t".into()]).unwrap();
        let mut covers: BTreeMap<ObjId, Vec<ExplicitSieve>> = BTreeMap::new();
        for x in cat.objects() {
            covers.insert(x.clone(), vec![maximal_sieve(&cat, x).unwrap()]);
        }
        covers.get_mut("t").unwrap().push(s);
        // remove maximal sieve on a so stability must fail
        covers.insert("a".into(), vec![]);
        let j = TopologyAssignment::new(&cat, covers).unwrap();
        let report = verify_topology_axioms(&cat, &j, 16).unwrap();
        assert!(!report.maximality.passed() || !report.stability.passed());
    }

    #[test]
    fn representables_are_functorial() {
        let cat = catalog::coequalizer_category();
        for m in cat.objects() {
            representable_presheaf(&cat, m).unwrap();
        }
        let arrow = catalog::walking_arrow();
        let r0 = representable_presheaf(&arrow, "0").unwrap();
        assert!(r0.value("1").unwrap().is_empty());
        let r1 = representable_presheaf(&arrow, "1").unwrap();
        assert_eq!(r1.value("0").unwrap().len(), 1);
    }

    #[test]
    fn sheaf_equalizer_corner_cases() {
        let cat = catalog::walking_arrow();
        let r1 = representable_presheaf(&cat, "1").unwrap();
        // empty sieve: equalizer is a singleton (the empty family)
        let empty = ExplicitSieve::new(&cat, "1", BTreeSet::new()).unwrap();
        let (eq, _) = sheaf_equalizer(&cat, &r1, &empty).unwrap();
        assert_eq!(eq.len(), 1);
        // maximal sieve: comparison bijective for representables
        let max = maximal_sieve(&cat, "1").unwrap();
        let (_, cmp) = sheaf_equalizer(&cat, &r1, &max).unwrap();
        assert!(cmp.is_bijective());
    }

    #[test]
    fn representables_are_sheaves_for_the_canonical_topology() {
        for (name, cat) in catalog::test_categories() {
            let j = canonical_topology(&cat, 16, DEFAULT_COLIMIT_GUARD).unwrap();
            for m in cat.objects() {
                let r = representable_presheaf(&cat, m).unwrap();
                let d = is_sheaf(&cat, &r, &j).unwrap();
                assert!(d.is_sheaf, "{name}: representable at {m}: {:?}", d.witness);
            }
        }
    }

    fn constant_presheaf(cat: &FinCategory, labels: &[&str]) -> Presheaf {
        let v = FinSetObject::from_labels(labels);
        let values: BTreeMap<ObjId, FinSetObject> =
            cat.objects().iter().map(|x| (x.clone(), v.clone())).collect();
        let maps: BTreeMap<MorId, SetFunction> = cat
            .arrows()
            .iter()
            .map(|a| (a.id.clone(), SetFunction::identity(&v)))
            .collect();
        Presheaf::new(cat, values, maps).unwrap()
    }

    #[test]
    fn constant_presheaf_fails_at_the_empty_cover() {
        // The canonical topology on the walking arrow covers the initial
        // object by the empty sieve; a two-element constant presheaf cannot
        // satisfy the sheaf condition there (two sections, one empty family).
        let cat = catalog::walking_arrow();
        let j = canonical_topology(&cat, 16, DEFAULT_COLIMIT_GUARD).unwrap();
        let empty = ExplicitSieve::new(&cat, "0", BTreeSet::new()).unwrap();
        assert!(j.contains(&empty), "empty sieve on the initial object is a cover");
        let constant = constant_presheaf(&cat, &["u", "v"]);
        let d = is_sheaf(&cat, &constant, &j).unwrap();
        assert!(!d.is_sheaf);
        assert_eq!(d.witness.unwrap().0, "0");
    }

    #[test]
    fn non_colim_sieve_is_distinguished_by_a_representable() {
        let cat = catalog::coequalizer_category();
        let s = generate_sieve(&cat, "c", &["h".into()]).unwrap();
        let d = colim_sieve_via_representables(&cat, &s).unwrap();
        assert!(!d.is_colim_sieve);
        assert!(d.witness.is_some());
    }

    #[test]
    fn representable_route_agrees_with_direct_decision() {
        for (name, cat) in catalog::test_categories() {
            for x in cat.objects() {
                for s in enumerate_sieves(&cat, x, 16).unwrap() {
                    let direct = is_colim_sieve(&cat, &s, DEFAULT_COLIMIT_GUARD)
                        .unwrap()
                        .is_colim_sieve;
                    let yoneda = colim_sieve_via_representables(&cat, &s).unwrap().is_colim_sieve;
                    assert_eq!(direct, yoneda, "{name}: sieve on {x}");
                }
            }
        }
    }
}
