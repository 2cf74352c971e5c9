//! The category of finite sets: the cocomplete, pullback-having ambient world
//! where coequalizers, coproducts and general finite colimits are computed
//! element by element, and where the epimorphism taxonomy (plain, effective,
//! strict, universal) is decided literally from the definitions.
//!
//! Quotients are computed by union-find over the generated relation; the
//! representative of a class is its least label, so quotient sets are
//! canonical and all operations deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fincat::{CartesianIndices, FinCategory, MorId, ObjId};

/// Default bound on probe-object sizes for strictness/universality checks.
/// The definitions quantify over all objects; finite sets of size <= 4 already
/// exhibit every relevant behaviour at desk scale, and every report records
/// the bound it used.
pub const DEFAULT_PROBE_BOUND: usize = 4;

/// A finite set with distinct string labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinSetObject {
    elements: Vec<String>,
}

impl FinSetObject {
    pub fn new(mut elements: Vec<String>) -> Result<Self> {
        elements.sort();
        let before = elements.len();
        elements.dedup();
        if elements.len() != before {
            return Err(Error::Malformed { reason: "duplicate element label".into() });
        }
        Ok(FinSetObject { elements })
    }

    pub fn from_labels(labels: &[&str]) -> Self {
        FinSetObject::new(labels.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    pub fn empty() -> Self {
        FinSetObject { elements: Vec::new() }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.elements.binary_search_by(|e| e.as_str().cmp(label)).is_ok()
    }
}

/// A total function between finite sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SetFunction {
    domain: FinSetObject,
    codomain: FinSetObject,
    mapping: BTreeMap<String, String>,
}

impl SetFunction {
    pub fn new(
        domain: FinSetObject,
        codomain: FinSetObject,
        mapping: BTreeMap<String, String>,
    ) -> Result<Self> {
        for x in domain.elements() {
            let y = mapping
                .get(x)
                .ok_or_else(|| Error::Malformed { reason: format!("{x} unmapped") })?;
            if !codomain.contains(y) {
                return Err(Error::Malformed { reason: format!("image {y} outside codomain") });
            }
        }
        if mapping.len() != domain.len() {
            return Err(Error::Malformed { reason: "mapping keys differ from domain".into() });
        }
        Ok(SetFunction { domain, codomain, mapping })
    }

    pub fn identity(set: &FinSetObject) -> Self {
        let mapping = set.elements().iter().map(|x| (x.clone(), x.clone())).collect();
        SetFunction { domain: set.clone(), codomain: set.clone(), mapping }
    }

    pub fn constant(domain: &FinSetObject, codomain: &FinSetObject, value: &str) -> Result<Self> {
        if !codomain.contains(value) {
            return Err(Error::Malformed { reason: format!("{value} outside codomain") });
        }
        let mapping = domain.elements().iter().map(|x| (x.clone(), value.to_string())).collect();
        Ok(SetFunction { domain: domain.clone(), codomain: codomain.clone(), mapping })
    }

    pub fn domain(&self) -> &FinSetObject {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSetObject {
        &self.codomain
    }

    pub fn apply(&self, x: &str) -> Result<&str> {
        self.mapping
            .get(x)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::Malformed { reason: format!("{x} outside domain") })
    }

    pub fn mapping(&self) -> &BTreeMap<String, String> {
        &self.mapping
    }

    /// self after earlier.
    pub fn compose(&self, earlier: &SetFunction) -> Result<SetFunction> {
        if earlier.codomain != self.domain {
            return Err(Error::Mismatch);
        }
        let mapping = earlier
            .domain
            .elements()
            .iter()
            .map(|x| Ok((x.clone(), self.apply(earlier.apply(x)?)?.to_string())))
            .collect::<Result<_>>()?;
        Ok(SetFunction {
            domain: earlier.domain.clone(),
            codomain: self.codomain.clone(),
            mapping,
        })
    }

    pub fn image(&self) -> BTreeSet<String> {
        self.mapping.values().cloned().collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.codomain.len()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.domain.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }
}

/// Enumerates every function from `dom` to `cod` in canonical order.
pub fn all_functions(dom: &FinSetObject, cod: &FinSetObject) -> Vec<SetFunction> {
    if dom.is_empty() {
        return vec![SetFunction {
            domain: dom.clone(),
            codomain: cod.clone(),
            mapping: BTreeMap::new(),
        }];
    }
    if cod.is_empty() {
        return Vec::new();
    }
    let n = dom.len();
    CartesianIndices::new(vec![cod.len(); n])
        .map(|pick| {
            let mapping = dom
                .elements()
                .iter()
                .enumerate()
                .map(|(i, x)| (x.clone(), cod.elements()[pick[i]].clone()))
                .collect();
            SetFunction { domain: dom.clone(), codomain: cod.clone(), mapping }
        })
        .collect()
}

fn part_label(index: usize, label: &str) -> String {
    format!("{index}:{label}")
}

/// Tagged disjoint union with its inclusion maps; disjoint and stable by
/// construction. Tags are "i:label".
pub fn coproduct(parts: &[FinSetObject]) -> (FinSetObject, Vec<SetFunction>) {
    let mut elements = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        for x in p.elements() {
            elements.push(part_label(i, x));
        }
    }
    let total = FinSetObject::new(elements).expect("tags are distinct");
    let inclusions = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mapping = p.elements().iter().map(|x| (x.clone(), part_label(i, x))).collect();
            SetFunction { domain: p.clone(), codomain: total.clone(), mapping }
        })
        .collect();
    (total, inclusions)
}

fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Pullback {(a, b) | f(a) = g(b)} with its projections.
pub fn pullback(f: &SetFunction, g: &SetFunction) -> Result<(FinSetObject, SetFunction, SetFunction)> {
    if f.codomain() != g.codomain() {
        return Err(Error::CodomainMismatch {
            left: format!("{:?}", f.codomain().elements()),
            right: format!("{:?}", g.codomain().elements()),
        });
    }
    let mut elements = Vec::new();
    let mut p1 = BTreeMap::new();
    let mut p2 = BTreeMap::new();
    for a in f.domain().elements() {
        for b in g.domain().elements() {
            if f.apply(a)? == g.apply(b)? {
                let e = pair_label(a, b);
                p1.insert(e.clone(), a.clone());
                p2.insert(e.clone(), b.clone());
                elements.push(e);
            }
        }
    }
    let obj = FinSetObject::new(elements)?;
    let pi1 = SetFunction { domain: obj.clone(), codomain: f.domain().clone(), mapping: p1 };
    let pi2 = SetFunction { domain: obj.clone(), codomain: g.domain().clone(), mapping: p2 };
    Ok((obj, pi1, pi2))
}

/// Union-find with least-label representatives.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            // keep the smaller index as representative so classes are canonical
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
        }
    }
}

/// Quotient of `codomain of the pair` by the equivalence generated by
/// f(a) ~ g(a); returns the quotient set and the surjective quotient map.
/// Class labels are the least member label.
pub fn coequalizer(f: &SetFunction, g: &SetFunction) -> Result<(FinSetObject, SetFunction)> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(Error::NotParallel);
    }
    quotient_by_pairs(
        f.codomain(),
        f.domain()
            .elements()
            .iter()
            .map(|a| Ok((f.apply(a)?.to_string(), g.apply(a)?.to_string())))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn quotient_by_pairs(
    set: &FinSetObject,
    pairs: Vec<(String, String)>,
) -> Result<(FinSetObject, SetFunction)> {
    let index: BTreeMap<&String, usize> =
        set.elements().iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut uf = UnionFind::new(set.len());
    for (a, b) in &pairs {
        uf.union(index[a], index[b]);
    }
    let mut mapping = BTreeMap::new();
    let mut classes = BTreeSet::new();
    for (i, e) in set.elements().iter().enumerate() {
        let rep = set.elements()[uf.find(i)].clone();
        classes.insert(rep.clone());
        mapping.insert(e.clone(), rep);
    }
    let quotient = FinSetObject::new(classes.into_iter().collect())?;
    let map = SetFunction { domain: set.clone(), codomain: quotient.clone(), mapping };
    Ok((quotient, map))
}

/// A functor from a finite shape into finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetDiagram {
    shape: FinCategory,
    objects: BTreeMap<ObjId, FinSetObject>,
    morphisms: BTreeMap<MorId, SetFunction>,
}

impl FinSetDiagram {
    pub fn new(
        shape: FinCategory,
        objects: BTreeMap<ObjId, FinSetObject>,
        morphisms: BTreeMap<MorId, SetFunction>,
    ) -> Result<Self> {
        for x in shape.objects() {
            if !objects.contains_key(x) {
                return Err(Error::NotAFunctor { law: "object totality".into(), at: x.clone() });
            }
        }
        for a in shape.arrows() {
            let f = morphisms
                .get(&a.id)
                .ok_or_else(|| Error::NotAFunctor { law: "morphism totality".into(), at: a.id.clone() })?;
            if f.domain() != &objects[&a.src] || f.codomain() != &objects[&a.dst] {
                return Err(Error::NotAFunctor { law: "endpoints".into(), at: a.id.clone() });
            }
        }
        for x in shape.objects() {
            let id = shape.identity(x)?;
            if morphisms[id] != SetFunction::identity(&objects[x]) {
                return Err(Error::NotAFunctor { law: "identities".into(), at: x.clone() });
            }
        }
        for g in shape.arrows() {
            for f in shape.arrows() {
                if f.dst != g.src {
                    continue;
                }
                let gf = shape.compose(&g.id, &f.id)?;
                if morphisms[&gf] != morphisms[&g.id].compose(&morphisms[&f.id])? {
                    return Err(Error::NotAFunctor {
                        law: "composition".into(),
                        at: format!("({}, {})", g.id, f.id),
                    });
                }
            }
        }
        Ok(FinSetDiagram { shape, objects, morphisms })
    }

    pub fn shape(&self) -> &FinCategory {
        &self.shape
    }

    pub fn value(&self, x: &str) -> Result<&FinSetObject> {
        self.objects
            .get(x)
            .ok_or_else(|| Error::UnknownObject { object: x.to_string() })
    }

    pub fn map(&self, f: &str) -> Result<&SetFunction> {
        self.morphisms
            .get(f)
            .ok_or_else(|| Error::UnknownMorphism { morphism: f.to_string() })
    }
}

/// A cocone under a finite-set diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCocone {
    pub nadir: FinSetObject,
    pub legs: BTreeMap<ObjId, SetFunction>,
}

impl SetCocone {
    pub fn check(&self, diagram: &FinSetDiagram) -> Result<()> {
        for x in diagram.shape().objects() {
            let leg = self
                .legs
                .get(x)
                .ok_or_else(|| Error::Malformed { reason: format!("missing leg at {x}") })?;
            if leg.domain() != diagram.value(x)? || leg.codomain() != &self.nadir {
                return Err(Error::Malformed { reason: format!("bad leg at {x}") });
            }
        }
        for a in diagram.shape().arrows() {
            if self.legs[&a.dst].compose(diagram.map(&a.id)?)? != self.legs[&a.src] {
                return Err(Error::Malformed { reason: format!("leg square fails at {}", a.id) });
            }
        }
        Ok(())
    }
}

/// Colimit of a finite diagram of finite sets: coproduct of the values modulo
/// x ~ D(sigma)(x), with the canonical cocone.
pub fn colim_finite_diagram(diagram: &FinSetDiagram) -> Result<(FinSetObject, SetCocone)> {
    let shape = diagram.shape();
    let parts: Vec<&ObjId> = shape.objects().iter().collect();
    let values: Vec<FinSetObject> =
        parts.iter().map(|x| diagram.value(x).map(Clone::clone)).collect::<Result<_>>()?;
    let (total, inclusions) = coproduct(&values);
    let pos: BTreeMap<&ObjId, usize> = parts.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut pairs = Vec::new();
    for a in shape.arrows() {
        let f = diagram.map(&a.id)?;
        for x in f.domain().elements() {
            let src_tag = inclusions[pos[&a.src]].apply(x)?.to_string();
            let dst_tag = inclusions[pos[&a.dst]].apply(f.apply(x)?)?.to_string();
            pairs.push((src_tag, dst_tag));
        }
    }
    let (colim, quot) = quotient_by_pairs(&total, pairs)?;
    let legs = parts
        .iter()
        .enumerate()
        .map(|(i, x)| Ok(((*x).clone(), quot.compose(&inclusions[i])?)))
        .collect::<Result<_>>()?;
    let cocone = SetCocone { nadir: colim.clone(), legs };
    cocone.check(diagram)?;
    Ok((colim, cocone))
}

/// Verifies universality of a cocone against every cocone valued in canonical
/// probe sets of size <= `probe`. A correctness self-check, not a certificate
/// beyond that bound.
pub fn is_universal_cocone(
    diagram: &FinSetDiagram,
    cocone: &SetCocone,
    probe: usize,
) -> Result<bool> {
    cocone.check(diagram)?;
    let objs: Vec<&ObjId> = diagram.shape().objects().iter().collect();
    for q in 0..=probe {
        let nadir = crate::catalog::canonical_set(q);
        let choices: Vec<Vec<SetFunction>> =
            objs.iter().map(|x| all_functions(diagram.value(x).unwrap(), &nadir)).collect();
        for pick in CartesianIndices::new(choices.iter().map(|c| c.len()).collect()) {
            let legs: BTreeMap<ObjId, SetFunction> = objs
                .iter()
                .enumerate()
                .map(|(i, x)| ((*x).clone(), choices[i][pick[i]].clone()))
                .collect();
            let other = SetCocone { nadir: nadir.clone(), legs };
            if other.check(diagram).is_err() {
                continue;
            }
            let mediators = all_functions(&cocone.nadir, &nadir)
                .into_iter()
                .filter(|u| {
                    objs.iter().all(|x| {
                        u.compose(&cocone.legs[*x]).map(|c| c == other.legs[*x]).unwrap_or(false)
                    })
                })
                .count();
            if mediators != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_epi(f: &SetFunction) -> bool {
    f.is_surjective()
}

pub fn is_mono(f: &SetFunction) -> bool {
    f.is_injective()
}

/// Canonical comparison Coeq(Y x_X Y => Y) -> X for f: Y -> X, computed
/// literally via pullback + coequalizer. Effective epi iff it is a bijection.
pub fn effective_epi_comparison(f: &SetFunction) -> Result<(SetFunction, SetFunction)> {
    let (_, pi1, pi2) = pullback(f, f)?;
    let (_, quot) = coequalizer(&pi1, &pi2)?;
    // the induced map from the coequalizer to X sends a class to the f-image
    // of any member
    let mut mapping = BTreeMap::new();
    for y in f.domain().elements() {
        let class = quot.apply(y)?.to_string();
        mapping.entry(class).or_insert_with(|| f.apply(y).unwrap().to_string());
    }
    let induced = SetFunction::new(quot.codomain().clone(), f.codomain().clone(), mapping)?;
    Ok((quot, induced))
}

pub fn is_effective_epi(f: &SetFunction) -> Result<bool> {
    let (_, induced) = effective_epi_comparison(f)?;
    Ok(induced.is_bijective())
}

/// Strict epimorphism, probed literally: every g into a codomain of size <= k
/// that is constant on f's kernel pairs factors uniquely through f.
///
/// Kernel-pair constancy is collected from singleton probes; probes of larger
/// size impose exactly the same pointwise constraints (see the unit test that
/// compares against the full quantification).
pub fn is_strict_epi(f: &SetFunction, probe: usize) -> Result<bool> {
    let a = f.domain();
    let kernel_pairs: Vec<(&String, &String)> = a
        .elements()
        .iter()
        .flat_map(|p| a.elements().iter().map(move |q| (p, q)))
        .filter(|(p, q)| f.apply(p).unwrap() == f.apply(q).unwrap())
        .collect();
    for k in 0..=probe {
        let c = crate::catalog::canonical_set(k);
        for g in all_functions(a, &c) {
            let constant = kernel_pairs
                .iter()
                .all(|(p, q)| g.apply(p).unwrap() == g.apply(q).unwrap());
            if !constant {
                continue;
            }
            if count_factorizations(&g, f)? != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of h with g = h . f.
fn count_factorizations(g: &SetFunction, f: &SetFunction) -> Result<usize> {
    let mut n = 0;
    for h in all_functions(f.codomain(), g.codomain()) {
        if h.compose(f)? == *g {
            n += 1;
        }
    }
    Ok(n)
}

#[derive(Debug, Clone)]
pub struct UniversalEpiReport {
    pub holds: bool,
    pub probe_bound: usize,
    /// Pulling-back map along which effectivity failed, if any.
    pub witness: Option<SetFunction>,
}

/// Universal effective epimorphism, probed literally: every pullback of f
/// along a map from a canonical set of size <= k is an effective epimorphism.
/// Agreement with plain surjectivity is asserted as a self-check.
pub fn is_universal_effective_epi(f: &SetFunction, probe: usize) -> Result<UniversalEpiReport> {
    let mut holds = true;
    let mut witness = None;
    'outer: for k in 0..=probe {
        let z = crate::catalog::canonical_set(k);
        for g in all_functions(&z, f.codomain()) {
            let (_, _, pi_g) = pullback(f, &g)?;
            if !is_effective_epi(&pi_g)? {
                holds = false;
                witness = Some(g);
                break 'outer;
            }
        }
    }
    debug_assert_eq!(holds, is_epi(f), "universal effectivity must match surjectivity here");
    Ok(UniversalEpiReport { holds, probe_bound: probe, witness })
}

/// Coproduct of a family of functions; if every input is an effective epi the
/// output is asserted to be one too, and likewise for the universal property.
pub fn coproduct_of_effective_epis(fs: &[SetFunction]) -> Result<SetFunction> {
    let doms: Vec<FinSetObject> = fs.iter().map(|f| f.domain().clone()).collect();
    let cods: Vec<FinSetObject> = fs.iter().map(|f| f.codomain().clone()).collect();
    let (dom, _) = coproduct(&doms);
    let (cod, cod_incs) = coproduct(&cods);
    let mut mapping = BTreeMap::new();
    for (i, f) in fs.iter().enumerate() {
        for x in f.domain().elements() {
            mapping.insert(part_label(i, x), cod_incs[i].apply(f.apply(x)?)?.to_string());
        }
    }
    let total = SetFunction::new(dom, cod, mapping)?;
    if fs.iter().map(is_effective_epi).collect::<Result<Vec<_>>>()?.iter().all(|&b| b) {
        debug_assert!(is_effective_epi(&total)?);
    }
    Ok(total)
}
