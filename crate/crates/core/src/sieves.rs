//! Sieves in both ambient worlds and the colim / universal colim sieve
//! decision procedures.
//!
//! An [`ExplicitSieve`] lives in a finite category and stores its full
//! precomposition closure; decisions there are exact. A [`GeneratedSieve`]
//! lives in finite sets and is presented by generators; its computational
//! contract is the generator form of sieve pullback and the coequalizer
//! formula for the colimit of the sieve diagram. The two representations are
//! never converted implicitly.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fincat::{
    colim_by_universal_property, enumerate_cocones, factorization_count, slice_on_members,
    Cocone, ColimitOutcome, FinCategory, FinFunctor, MorId, ObjId, RawCategory,
};
use crate::finset::{
    all_functions, coequalizer, colim_finite_diagram, coproduct, is_universal_effective_epi,
    pullback, FinSetDiagram, FinSetObject, SetFunction,
};

/// A sieve on an object of a finite category: a set of arrows into the apex,
/// closed under precomposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExplicitSieve {
    apex: ObjId,
    morphisms: BTreeSet<MorId>,
}

impl ExplicitSieve {
    /// Validates closure; the member set is taken as given.
    pub fn new(cat: &FinCategory, apex: &str, morphisms: BTreeSet<MorId>) -> Result<Self> {
        if !cat.has_object(apex) {
            return Err(Error::UnknownObject { object: apex.to_string() });
        }
        for f in &morphisms {
            if cat.dst(f)? != apex {
                return Err(Error::ApexMismatch {
                    expected: apex.to_string(),
                    found: cat.dst(f)?.clone(),
                });
            }
            for g in cat.arrows() {
                if g.dst == *cat.src(f)? {
                    let fg = cat.compose(f, &g.id)?;
                    if !morphisms.contains(&fg) {
                        return Err(Error::Malformed {
                            reason: format!("not closed: {f} . {} = {fg} missing", g.id),
                        });
                    }
                }
            }
        }
        Ok(ExplicitSieve { apex: apex.to_string(), morphisms })
    }

    pub fn apex(&self) -> &ObjId {
        &self.apex
    }

    pub fn morphisms(&self) -> &BTreeSet<MorId> {
        &self.morphisms
    }

    pub fn contains(&self, f: &str) -> bool {
        self.morphisms.contains(f)
    }

    pub fn is_maximal(&self, cat: &FinCategory) -> Result<bool> {
        Ok(self.morphisms.len() == cat.arrows_into(&self.apex)?.len())
    }

    /// The sieve as a full subcategory of the overcategory, with its
    /// forgetful functor U to the ambient.
    pub fn as_category(&self, cat: &FinCategory) -> Result<(FinCategory, FinFunctor)> {
        slice_on_members(cat, &self.apex, &self.morphisms)
    }
}

/// Precomposition closure of a seed set of arrows into `apex`.
pub fn generate_sieve(cat: &FinCategory, apex: &str, seeds: &[MorId]) -> Result<ExplicitSieve> {
    if !cat.has_object(apex) {
        return Err(Error::UnknownObject { object: apex.to_string() });
    }
    let mut members: BTreeSet<MorId> = BTreeSet::new();
    let mut frontier: Vec<MorId> = Vec::new();
    for s in seeds {
        let arrow = cat.arrow(s)?;
        if arrow.dst != apex {
            return Err(Error::ApexMismatch { expected: apex.to_string(), found: arrow.dst.clone() });
        }
        if members.insert(s.clone()) {
            frontier.push(s.clone());
        }
    }
    while let Some(f) = frontier.pop() {
        for g in cat.arrows() {
            if g.dst == *cat.src(&f)? {
                let fg = cat.compose(&f, &g.id)?;
                if members.insert(fg.clone()) {
                    frontier.push(fg);
                }
            }
        }
    }
    ExplicitSieve::new(cat, apex, members)
}

/// The maximal sieve on `apex`: every arrow in.
pub fn maximal_sieve(cat: &FinCategory, apex: &str) -> Result<ExplicitSieve> {
    ExplicitSieve::new(cat, apex, cat.arrows_into(apex)?.into_iter().collect())
}

/// f*S = { g | codomain g = source f, f . g in S }.
pub fn pullback_sieve(cat: &FinCategory, sieve: &ExplicitSieve, f: &str) -> Result<ExplicitSieve> {
    let arrow = cat.arrow(f)?;
    if arrow.dst != *sieve.apex() {
        return Err(Error::ApexMismatch {
            expected: sieve.apex().clone(),
            found: arrow.dst.clone(),
        });
    }
    let y = arrow.src.clone();
    let mut members = BTreeSet::new();
    for g in cat.arrows_into(&y)? {
        if sieve.contains(&cat.compose(f, &g)?) {
            members.insert(g);
        }
    }
    ExplicitSieve::new(cat, &y, members)
}

/// Evidence accompanying a colim-sieve decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColimWitness {
    /// The canonical cocone is universal.
    UniversalCocone(Cocone),
    /// A cocone that does not factor uniquely through the canonical one
    /// (factor count attached), or the colimit object when the canonical map
    /// to the apex fails to be an isomorphism.
    FailingCocone { cocone: Cocone, factorizations: usize },
    NoColimit,
    /// Generated form: the coequalizer of the kernel diagram, compared to the
    /// apex along the canonical map.
    Coequalizer { colim: FinSetObject, missed: Vec<String>, collapsed: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimDecision {
    pub is_colim_sieve: bool,
    pub witness: ColimWitness,
}

/// Decides whether an explicit sieve is a colim sieve: the colimit of the
/// forgetful diagram must exist and map isomorphically onto the apex.
pub fn is_colim_sieve(
    cat: &FinCategory,
    sieve: &ExplicitSieve,
    guard: usize,
) -> Result<ColimDecision> {
    let (_, u) = sieve.as_category(cat)?;
    let canonical = Cocone {
        nadir: sieve.apex().clone(),
        legs: sieve.morphisms().iter().map(|f| (f.clone(), f.clone())).collect(),
    };
    canonical.check(&u)?;
    match colim_by_universal_property(&u, guard)? {
        ColimitOutcome::NoColimit => Ok(ColimDecision {
            is_colim_sieve: false,
            witness: ColimWitness::NoColimit,
        }),
        ColimitOutcome::Colimit { .. } => {
            // the canonical cocone is universal iff every cocone factors
            // through it exactly once
            for other in enumerate_cocones(&u, guard)? {
                let n = factorization_count(&u, &canonical, &other)?;
                if n != 1 {
                    return Ok(ColimDecision {
                        is_colim_sieve: false,
                        witness: ColimWitness::FailingCocone { cocone: other, factorizations: n },
                    });
                }
            }
            Ok(ColimDecision {
                is_colim_sieve: true,
                witness: ColimWitness::UniversalCocone(canonical),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalColimDecision {
    pub is_universal_colim_sieve: bool,
    /// The arrow whose pullback fails, with the inner decision.
    pub witness: Option<(MorId, ColimDecision)>,
}

/// Exact decision in a finite ambient: every pullback along an arrow into the
/// apex must be a colim sieve (the identity pullback covers the sieve itself).
pub fn is_universal_colim_sieve(
    cat: &FinCategory,
    sieve: &ExplicitSieve,
    guard: usize,
) -> Result<UniversalColimDecision> {
    for alpha in cat.arrows_into(sieve.apex())? {
        let pulled = pullback_sieve(cat, sieve, &alpha)?;
        let decision = is_colim_sieve(cat, &pulled, guard)?;
        if !decision.is_colim_sieve {
            return Ok(UniversalColimDecision {
                is_universal_colim_sieve: false,
                witness: Some((alpha, decision)),
            });
        }
    }
    Ok(UniversalColimDecision { is_universal_colim_sieve: true, witness: None })
}

/// A sieve on a finite set presented by generators; closure is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSieve {
    apex: FinSetObject,
    generators: Vec<SetFunction>,
}

impl GeneratedSieve {
    pub fn new(apex: FinSetObject, generators: Vec<SetFunction>) -> Result<Self> {
        for g in &generators {
            if g.codomain() != &apex {
                return Err(Error::ApexMismatch {
                    expected: format!("{:?}", apex.elements()),
                    found: format!("{:?}", g.codomain().elements()),
                });
            }
        }
        Ok(GeneratedSieve { apex, generators })
    }

    pub fn apex(&self) -> &FinSetObject {
        &self.apex
    }

    pub fn generators(&self) -> &[SetFunction] {
        &self.generators
    }
}

/// Generator form of sieve pullback: f*<g_a> = <pi2 : A_a x_X Y -> Y>.
pub fn pullback_generated_sieve(sieve: &GeneratedSieve, f: &SetFunction) -> Result<GeneratedSieve> {
    if f.codomain() != sieve.apex() {
        return Err(Error::ApexMismatch {
            expected: format!("{:?}", sieve.apex().elements()),
            found: format!("{:?}", f.codomain().elements()),
        });
    }
    let generators = sieve
        .generators()
        .iter()
        .map(|g| pullback(g, f).map(|(_, _, pi2)| pi2))
        .collect::<Result<Vec<_>>>()?;
    GeneratedSieve::new(f.domain().clone(), generators)
}

/// The kernel coequalizer presentation of the colimit of a generated sieve:
/// Coeq( sum_(i,j) A_i x_X A_j => sum_k A_k ) together with the canonical map
/// to the apex.
pub fn coequalizer_formula(sieve: &GeneratedSieve) -> Result<(FinSetObject, SetFunction)> {
    let doms: Vec<FinSetObject> =
        sieve.generators().iter().map(|g| g.domain().clone()).collect();
    let (bottom, bottom_incs) = coproduct(&doms);

    let mut top_parts = Vec::new();
    let mut projections: Vec<(usize, SetFunction, usize, SetFunction)> = Vec::new();
    for (i, gi) in sieve.generators().iter().enumerate() {
        for (j, gj) in sieve.generators().iter().enumerate() {
            let (p, pi1, pi2) = pullback(gi, gj)?;
            top_parts.push(p);
            projections.push((i, pi1, j, pi2));
        }
    }
    let (top, top_incs) = coproduct(&top_parts);

    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for (k, (i, pi1, j, pi2)) in projections.iter().enumerate() {
        for x in pi1.domain().elements() {
            let tag = top_incs[k].apply(x)?.to_string();
            left.insert(tag.clone(), bottom_incs[*i].apply(pi1.apply(x)?)?.to_string());
            right.insert(tag, bottom_incs[*j].apply(pi2.apply(x)?)?.to_string());
        }
    }
    let lf = SetFunction::new(top.clone(), bottom.clone(), left)?;
    let rf = SetFunction::new(top, bottom.clone(), right)?;
    let (colim, quot) = coequalizer(&lf, &rf)?;

    // canonical map to the apex: a class of i:a goes to g_i(a)
    let mut mapping = BTreeMap::new();
    for (i, g) in sieve.generators().iter().enumerate() {
        for a in g.domain().elements() {
            let class = quot.apply(bottom_incs[i].apply(a)?)?.to_string();
            mapping.entry(class).or_insert_with(|| g.apply(a).unwrap().to_string());
        }
    }
    let canonical = SetFunction::new(quot.codomain().clone(), sieve.apex().clone(), mapping)?;
    Ok((colim, canonical))
}

/// The shape of the kernel diagram of a generated sieve (objects a and (a,b)
/// with projections) and the diagram itself; its colimit must agree with the
/// coequalizer formula.
pub fn kernel_diagram(sieve: &GeneratedSieve) -> Result<FinSetDiagram> {
    let n = sieve.generators().len();
    let mut raw = RawCategory::default();
    let mut objects: BTreeMap<ObjId, FinSetObject> = BTreeMap::new();
    let mut morphisms: BTreeMap<MorId, SetFunction> = BTreeMap::new();
    for i in 0..n {
        let o = format!("g{i}");
        raw.objects.push(o.clone());
        let id = format!("id_{o}");
        raw.arrows.push(crate::fincat::Arrow::new(&id, &o, &o));
        raw.identities.insert(o.clone(), id.clone());
        raw.compose.insert((id.clone(), id.clone()), id.clone());
        objects.insert(o, sieve.generators()[i].domain().clone());
        morphisms
            .insert(format!("id_g{i}"), SetFunction::identity(sieve.generators()[i].domain()));
    }
    for i in 0..n {
        for j in 0..n {
            let o = format!("p{i},{j}");
            let (p, pi1, pi2) = pullback(&sieve.generators()[i], &sieve.generators()[j])?;
            raw.objects.push(o.clone());
            let id = format!("id_{o}");
            raw.arrows.push(crate::fincat::Arrow::new(&id, &o, &o));
            raw.identities.insert(o.clone(), id.clone());
            raw.compose.insert((id.clone(), id.clone()), id.clone());
            let l = format!("l{i},{j}");
            let r = format!("r{i},{j}");
            raw.arrows.push(crate::fincat::Arrow::new(&l, &o, &format!("g{i}")));
            raw.arrows.push(crate::fincat::Arrow::new(&r, &o, &format!("g{j}")));
            for m in [&l, &r] {
                raw.compose.insert((format!("id_g{}", if m == &l { i } else { j }), m.clone()), m.clone());
                raw.compose.insert((m.clone(), id.clone()), m.clone());
            }
            morphisms.insert(id, SetFunction::identity(&p));
            objects.insert(o, p);
            morphisms.insert(l, pi1);
            morphisms.insert(r, pi2);
        }
    }
    FinSetDiagram::new(crate::fincat::FinCategory::validate(raw)?, objects, morphisms)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedColimDecision {
    pub is_colim_sieve: bool,
    pub witness: ColimWitness,
}

/// Decides the colim-sieve property of a generated sieve via the coequalizer
/// formula: the canonical map Coeq -> X must be a bijection.
pub fn is_colim_sieve_generated(sieve: &GeneratedSieve) -> Result<GeneratedColimDecision> {
    let (colim, canonical) = coequalizer_formula(sieve)?;
    let image = canonical.image();
    let missed: Vec<String> = sieve
        .apex()
        .elements()
        .iter()
        .filter(|x| !image.contains(x.as_str()))
        .cloned()
        .collect();
    let collapsed = !canonical.is_injective();
    Ok(GeneratedColimDecision {
        is_colim_sieve: canonical.is_bijective(),
        witness: ColimWitness::Coequalizer { colim, missed, collapsed },
    })
}

/// Which path decided a universality question for a generated sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionPath {
    /// The exact criterion: joint surjectivity of the generators, via the
    /// monogenic reduction and universal effective epimorphism check.
    CoproductCriterion,
    /// Bounded probing of the definition only.
    BoundedProbe,
}

#[derive(Debug, Clone)]
pub struct GeneratedUniversalDecision {
    pub is_universal_colim_sieve: bool,
    pub decided_by: DecisionPath,
    pub probe_bound: usize,
    /// An apex element no generator hits, when the answer is negative.
    pub uncovered: Option<String>,
    /// Probe maps along which the pulled-back sieve was checked.
    pub probes_checked: usize,
}

/// Decides universality of a generated sieve. The exact coproduct criterion
/// is authoritative; the definition is additionally probed along all maps
/// from canonical sets of size <= `probe` and any disagreement is an error in
/// the implementation, not in the input.
pub fn is_universal_colim_sieve_generated(
    sieve: &GeneratedSieve,
    probe: usize,
) -> Result<GeneratedUniversalDecision> {
    let mono = reduce_to_monogenic(sieve)?;
    let f = &mono.generators()[0];
    let exact = is_universal_effective_epi(f, probe)?.holds;

    let mut probes_checked = 0;
    let mut probe_verdict = true;
    'outer: for k in 0..=probe {
        let z = crate::catalog::canonical_set(k);
        for g in all_functions(&z, sieve.apex()) {
            probes_checked += 1;
            let pulled = pullback_generated_sieve(sieve, &g)?;
            if !is_colim_sieve_generated(&pulled)?.is_colim_sieve {
                probe_verdict = false;
                break 'outer;
            }
        }
    }
    debug_assert_eq!(exact, probe_verdict, "probe path disagrees with the exact criterion");

    let uncovered = if exact {
        None
    } else {
        let hit: BTreeSet<String> = sieve
            .generators()
            .iter()
            .flat_map(|g| g.image().into_iter())
            .collect();
        sieve.apex().elements().iter().find(|x| !hit.contains(*x)).cloned()
    };

    Ok(GeneratedUniversalDecision {
        is_universal_colim_sieve: exact,
        decided_by: DecisionPath::CoproductCriterion,
        probe_bound: probe,
        uncovered,
        probes_checked,
    })
}

/// Replaces a generator family by the single coproduct map; both colim-sieve
/// decisions are preserved.
pub fn reduce_to_monogenic(sieve: &GeneratedSieve) -> Result<GeneratedSieve> {
    let doms: Vec<FinSetObject> =
        sieve.generators().iter().map(|g| g.domain().clone()).collect();
    let (total, _) = coproduct(&doms);
    let mut mapping = BTreeMap::new();
    for (i, g) in sieve.generators().iter().enumerate() {
        for x in g.domain().elements() {
            mapping.insert(format!("{i}:{x}"), g.apply(x)?.to_string());
        }
    }
    let folded = SetFunction::new(total, sieve.apex().clone(), mapping)?;
    GeneratedSieve::new(sieve.apex().clone(), vec![folded])
}

#[derive(Debug, Clone)]
pub struct BasisCheck {
    /// The authoritative answer: the coproduct of the family is a universal
    /// effective epimorphism.
    pub is_cover: bool,
    pub probe_bound: usize,
}

/// The basis criterion: a family covers iff the coproduct map is a universal
/// effective epimorphism.
pub fn basis_cover_check(
    apex: &FinSetObject,
    family: &[SetFunction],
    probe: usize,
) -> Result<BasisCheck> {
    let sieve = GeneratedSieve::new(apex.clone(), family.to_vec())?;
    let mono = reduce_to_monogenic(&sieve)?;
    let report = is_universal_effective_epi(&mono.generators()[0], probe)?;
    Ok(BasisCheck { is_cover: report.holds, probe_bound: probe })
}

/// Basis axiom 1: a single isomorphism is a cover.
pub fn basis_axiom_isomorphism(f: &SetFunction, probe: usize) -> Result<bool> {
    if !f.is_bijective() {
        return Ok(true); // axiom only constrains isomorphisms
    }
    Ok(basis_cover_check(f.codomain(), &[f.clone()], probe)?.is_cover)
}

/// Basis axiom 2: the base change of a cover along any map is a cover.
pub fn basis_axiom_base_change(
    apex: &FinSetObject,
    family: &[SetFunction],
    g: &SetFunction,
    probe: usize,
) -> Result<bool> {
    if !basis_cover_check(apex, family, probe)?.is_cover {
        return Ok(true);
    }
    let pulled = pullback_generated_sieve(&GeneratedSieve::new(apex.clone(), family.to_vec())?, g)?;
    basis_cover_check(g.domain(), pulled.generators(), probe).map(|c| c.is_cover)
}

/// Basis axiom 3: covers composed with families of covers are covers.
pub fn basis_axiom_composition(
    apex: &FinSetObject,
    family: &[SetFunction],
    refinements: &[Vec<SetFunction>],
    probe: usize,
) -> Result<bool> {
    if family.len() != refinements.len() {
        return Err(Error::Malformed { reason: "one refinement family per cover map".into() });
    }
    if !basis_cover_check(apex, family, probe)?.is_cover {
        return Ok(true);
    }
    let mut composite = Vec::new();
    for (f, refs) in family.iter().zip(refinements) {
        if !basis_cover_check(f.domain(), refs, probe)?.is_cover {
            return Ok(true);
        }
        for r in refs {
            composite.push(f.compose(r)?);
        }
    }
    basis_cover_check(apex, &composite, probe).map(|c| c.is_cover)
}

/// Prop 2.5's comma category (f down L) for a generated sieve, where L sends
/// a to g_a and (a,b) to the pullback composite, and f is a probe member of
/// the sieve. Built directly in the finite-set world.
pub fn kernel_shape_comma_is_connected(
    sieve: &GeneratedSieve,
    f: &SetFunction,
) -> Result<bool> {
    if f.codomain() != sieve.apex() {
        return Err(Error::ApexMismatch {
            expected: format!("{:?}", sieve.apex().elements()),
            found: format!("{:?}", f.codomain().elements()),
        });
    }
    // objects of (f down L): pairs (node of the kernel shape, map h over X)
    // nodes: g_i with value A_i and map g_i; p_{i,j} with value A_i x_X A_j
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
    enum Node {
        Gen(usize),
        Pair(usize, usize),
    }
    let n = sieve.generators().len();
    let mut values: BTreeMap<Node, (FinSetObject, SetFunction)> = BTreeMap::new();
    let mut pair_projs: BTreeMap<(usize, usize), (SetFunction, SetFunction)> = BTreeMap::new();
    for (i, g) in sieve.generators().iter().enumerate() {
        values.insert(Node::Gen(i), (g.domain().clone(), g.clone()));
    }
    for i in 0..n {
        for j in 0..n {
            let (p, pi1, pi2) = pullback(&sieve.generators()[i], &sieve.generators()[j])?;
            let over = sieve.generators()[i].compose(&pi1)?;
            values.insert(Node::Pair(i, j), (p, over));
            pair_projs.insert((i, j), (pi1, pi2));
        }
    }
    let mut objects: Vec<(Node, SetFunction)> = Vec::new();
    for (node, (dom, over)) in &values {
        for h in all_functions(f.domain(), dom) {
            if over.compose(&h)? == *f {
                objects.push((node.clone(), h));
            }
        }
    }
    if objects.is_empty() {
        return Ok(false);
    }
    // connect along the shape's arrows: (Pair(i,j), h) -> (Gen(i), pi1 . h)
    // and -> (Gen(j), pi2 . h)
    let index: BTreeMap<&(Node, SetFunction), usize> =
        objects.iter().enumerate().map(|(k, o)| (o, k)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    for (k, (node, h)) in objects.iter().enumerate() {
        if let Node::Pair(i, j) = node {
            let (pi1, pi2) = &pair_projs[&(*i, *j)];
            for (tgt_node, proj) in [(Node::Gen(*i), pi1), (Node::Gen(*j), pi2)] {
                let tgt = (tgt_node, proj.compose(h)?);
                if let Some(&t) = index.get(&tgt) {
                    adj[k].push(t);
                    adj[t].push(k);
                }
            }
        }
    }
    let mut seen = vec![false; objects.len()];
    let mut stack = vec![0usize];
    while let Some(k) = stack.pop() {
        if seen[k] {
            continue;
        }
        seen[k] = true;
        stack.extend(adj[k].iter().copied().filter(|&t| !seen[t]));
    }
    Ok(seen.iter().all(|&b| b))
}

/// Direct-diagram route to the same colimit the coequalizer formula computes:
/// the kernel diagram's colimit compared against the apex.
pub fn kernel_diagram_colim(sieve: &GeneratedSieve) -> Result<(FinSetObject, SetFunction)> {
    let d = kernel_diagram(sieve)?;
    let (colim, cocone) = colim_finite_diagram(&d)?;
    let mut mapping = BTreeMap::new();
    for (i, g) in sieve.generators().iter().enumerate() {
        let leg = &cocone.legs[&format!("g{i}")];
        for a in g.domain().elements() {
            mapping
                .entry(leg.apply(a)?.to_string())
                .or_insert_with(|| g.apply(a).unwrap().to_string());
        }
    }
    let canonical = SetFunction::new(colim.clone(), sieve.apex().clone(), mapping)?;
    Ok((colim, canonical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, canonical_set};
    use crate::fincat::DEFAULT_COLIMIT_GUARD;
    use crate::finset::is_effective_epi;

    #[test]
    fn seeds_generate_expected_sieves() {
        let c = catalog::walking_arrow();
        // id seed gives the maximal sieve
        let s = generate_sieve(&c, "1", &["id1".into()]).unwrap();
        assert!(s.is_maximal(&c).unwrap());
        assert_eq!(s.morphisms().len(), 2);
        // empty seed set gives the empty sieve
        let e = generate_sieve(&c, "1", &[]).unwrap();
        assert!(e.morphisms().is_empty());
        // f generates just itself: nothing precomposes
        let f = generate_sieve(&c, "1", &["f".into()]).unwrap();
        assert_eq!(f.morphisms().iter().collect::<Vec<_>>(), ["f"]);
    }

    #[test]
    fn pullback_of_maximal_is_maximal() {
        let c = catalog::commutative_square();
        let max = maximal_sieve(&c, "t").unwrap();
        for alpha in c.arrows_into("t").unwrap() {
            let pulled = pullback_sieve(&c, &max, &alpha).unwrap();
            assert!(pulled.is_maximal(&c).unwrap());
        }
    }

    #[test]
    fn identity_pullback_is_identity() {
        let c = catalog::coequalizer_category();
        let s = generate_sieve(&c, "c", &["q".into()]).unwrap();
        let pulled = pullback_sieve(&c, &s, c.identity("c").unwrap()).unwrap();
        assert_eq!(s, pulled);
    }

    #[test]
    fn maximal_sieves_are_colim_sieves() {
        for (_, c) in catalog::test_categories() {
            for x in c.objects() {
                let s = maximal_sieve(&c, x).unwrap();
                let d = is_colim_sieve(&c, &s, DEFAULT_COLIMIT_GUARD).unwrap();
                assert!(d.is_colim_sieve, "maximal sieve on {x}");
            }
        }
    }

    #[test]
    fn coequalizer_cover_is_a_colim_sieve() {
        let c = catalog::coequalizer_category();
        let s = generate_sieve(&c, "c", &["q".into()]).unwrap();
        assert_eq!(s.morphisms().len(), 2); // q and h = q.f
        let d = is_colim_sieve(&c, &s, DEFAULT_COLIMIT_GUARD).unwrap();
        assert!(d.is_colim_sieve);
        let u = is_universal_colim_sieve(&c, &s, DEFAULT_COLIMIT_GUARD).unwrap();
        assert!(u.is_universal_colim_sieve);
    }

    #[test]
    fn singleton_non_iso_is_not_a_colim_sieve() {
        let c = catalog::walking_arrow();
        let s = generate_sieve(&c, "1", &["f".into()]).unwrap();
        let d = is_colim_sieve(&c, &s, DEFAULT_COLIMIT_GUARD).unwrap();
        assert!(!d.is_colim_sieve);
    }

    #[test]
    fn empty_sieve_is_colim_only_over_initial_apex() {
        let c = catalog::walking_arrow();
        // on 0 (initial): yes, the empty diagram's colimit is the initial object
        let s0 = ExplicitSieve::new(&c, "0", BTreeSet::new()).unwrap();
        assert!(is_colim_sieve(&c, &s0, DEFAULT_COLIMIT_GUARD).unwrap().is_colim_sieve);
        // on 1: no
        let s1 = ExplicitSieve::new(&c, "1", BTreeSet::new()).unwrap();
        assert!(!is_colim_sieve(&c, &s1, DEFAULT_COLIMIT_GUARD).unwrap().is_colim_sieve);
    }

    fn gen_sieve(apex: &FinSetObject, gens: &[SetFunction]) -> GeneratedSieve {
        GeneratedSieve::new(apex.clone(), gens.to_vec()).unwrap()
    }

    #[test]
    fn generated_pullback_matches_lemma_formula() {
        let x = canonical_set(3);
        let a = canonical_set(2);
        let g = SetFunction::new(
            a.clone(),
            x.clone(),
            [("0", "0"), ("1", "1")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let y = canonical_set(2);
        let f = SetFunction::new(
            y.clone(),
            x.clone(),
            [("0", "1"), ("1", "2")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let pulled = pullback_generated_sieve(&gen_sieve(&x, &[g.clone()]), &f).unwrap();
        let (_, _, pi2) = pullback(&g, &f).unwrap();
        assert_eq!(pulled.generators()[0], pi2);
    }

    #[test]
    fn surjective_generator_is_colim_sieve() {
        let x = canonical_set(2);
        let y = canonical_set(3);
        let f = SetFunction::new(
            y,
            x.clone(),
            [("0", "0"), ("1", "0"), ("2", "1")]
                .iter()
                .map(|(p, q)| (p.to_string(), q.to_string()))
                .collect(),
        )
        .unwrap();
        let s = gen_sieve(&x, &[f.clone()]);
        assert!(is_colim_sieve_generated(&s).unwrap().is_colim_sieve);
        assert_eq!(
            is_colim_sieve_generated(&s).unwrap().is_colim_sieve,
            is_effective_epi(&f).unwrap()
        );
    }

    #[test]
    fn empty_family_on_nonempty_apex_fails() {
        let x = canonical_set(1);
        let s = gen_sieve(&x, &[]);
        assert!(!is_colim_sieve_generated(&s).unwrap().is_colim_sieve);
        let mono = reduce_to_monogenic(&s).unwrap();
        assert!(!is_colim_sieve_generated(&mono).unwrap().is_colim_sieve);
    }

    #[test]
    fn jointly_surjective_family_is_universal() {
        let x = canonical_set(3);
        let f = SetFunction::new(
            canonical_set(2),
            x.clone(),
            [("0", "0"), ("1", "1")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let g = SetFunction::new(
            canonical_set(1),
            x.clone(),
            [("0", "2")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let s = gen_sieve(&x, &[f, g]);
        let d = is_universal_colim_sieve_generated(&s, 3).unwrap();
        assert!(d.is_universal_colim_sieve);
        assert!(d.uncovered.is_none());

        // dropping the second generator misses element 2
        let s2 = gen_sieve(&x, &[s.generators()[0].clone()]);
        let d2 = is_universal_colim_sieve_generated(&s2, 3).unwrap();
        assert!(!d2.is_universal_colim_sieve);
        assert_eq!(d2.uncovered.as_deref(), Some("2"));
    }

    #[test]
    fn monogenic_reduction_preserves_decisions() {
        let x = canonical_set(2);
        let f = SetFunction::new(
            canonical_set(1),
            x.clone(),
            [("0", "0")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let g = SetFunction::new(
            canonical_set(1),
            x.clone(),
            [("0", "1")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        for family in [vec![f.clone()], vec![f.clone(), g.clone()]] {
            let s = gen_sieve(&x, &family);
            let mono = reduce_to_monogenic(&s).unwrap();
            assert_eq!(mono.generators().len(), 1);
            assert_eq!(
                is_colim_sieve_generated(&s).unwrap().is_colim_sieve,
                is_colim_sieve_generated(&mono).unwrap().is_colim_sieve
            );
            assert_eq!(
                is_universal_colim_sieve_generated(&s, 2).unwrap().is_universal_colim_sieve,
                is_universal_colim_sieve_generated(&mono, 2).unwrap().is_universal_colim_sieve
            );
        }
    }

    #[test]
    fn basis_axioms_on_worked_instances() {
        let x = canonical_set(3);
        let iso = SetFunction::identity(&x);
        assert!(basis_axiom_isomorphism(&iso, 2).unwrap());
        assert!(basis_cover_check(&x, &[iso.clone()], 2).unwrap().is_cover);

        let f = SetFunction::new(
            canonical_set(2),
            x.clone(),
            [("0", "0"), ("1", "1")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let g = SetFunction::new(
            canonical_set(2),
            x.clone(),
            [("0", "1"), ("1", "2")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let family = vec![f.clone(), g.clone()];
        assert!(basis_cover_check(&x, &family, 2).unwrap().is_cover);

        let base = SetFunction::new(
            canonical_set(2),
            x.clone(),
            [("0", "0"), ("1", "2")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        assert!(basis_axiom_base_change(&x, &family, &base, 2).unwrap());

        // refine each cover map by an identity: composition stays a cover
        let refinements =
            vec![vec![SetFunction::identity(f.domain())], vec![SetFunction::identity(g.domain())]];
        assert!(basis_axiom_composition(&x, &family, &refinements, 2).unwrap());
    }

    #[test]
    fn kernel_comma_categories_are_connected_for_members() {
        let x = canonical_set(2);
        let f = SetFunction::new(
            canonical_set(2),
            x.clone(),
            [("0", "0"), ("1", "1")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let g = SetFunction::new(
            canonical_set(1),
            x.clone(),
            [("0", "1")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let s = gen_sieve(&x, &[f.clone(), g]);
        // members of the sieve: anything factoring through a generator
        let member = f.compose(&SetFunction::identity(f.domain())).unwrap();
        assert!(kernel_shape_comma_is_connected(&s, &member).unwrap());
    }

    #[test]
    fn coequalizer_formula_agrees_with_kernel_diagram_colim() {
        let x = canonical_set(3);
        let f = SetFunction::new(
            canonical_set(2),
            x.clone(),
            [("0", "0"), ("1", "1")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let g = SetFunction::new(
            canonical_set(2),
            x.clone(),
            [("0", "1"), ("1", "2")].iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(),
        )
        .unwrap();
        let s = gen_sieve(&x, &[f, g]);
        let (c1, m1) = coequalizer_formula(&s).unwrap();
        let (c2, m2) = kernel_diagram_colim(&s).unwrap();
        assert_eq!(c1.len(), c2.len());
        assert_eq!(m1.is_bijective(), m2.is_bijective());
    }
}
