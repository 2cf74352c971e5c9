//! The Index-Functor 2-category of diagrams in an ambient world: objects are
//! (index category, diagram) pairs, morphisms re-index along a functor and
//! compare values along a natural transformation, and 2-morphisms fill the
//! triangle between two such comparisons.
//!
//! Two ambient worlds are supported: a finite category (hom-sets read off the
//! tables) and finite sets (hom-sets enumerated as all functions). Hom-sets
//! into constant diagrams are the only hom-enumeration offered; they are all
//! the colimit-detection lemmas need.

use std::collections::BTreeMap;

use crate::catalog::canonical_set;
use crate::error::{Error, Result};
use crate::fincat::{Arrow, CartesianIndices, FinCategory, FinFunctor, MorId, ObjId, RawCategory};
use crate::finset::{all_functions, FinSetDiagram, FinSetObject, SetFunction};

/// Default probe bound for quantification over finite-set ambient objects.
pub const DEFAULT_SET_PROBE: usize = 3;

/// Default guard on hom-set enumeration products.
pub const DEFAULT_HOM_GUARD: usize = 200_000;

/// The ambient world a diagram takes values in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum World {
    Cat(FinCategory),
    Set,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AmbObject {
    Cat(ObjId),
    Set(FinSetObject),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AmbMorphism {
    Cat(MorId),
    Set(SetFunction),
}

impl World {
    pub fn compose(&self, g: &AmbMorphism, f: &AmbMorphism) -> Result<AmbMorphism> {
        match (self, g, f) {
            (World::Cat(c), AmbMorphism::Cat(g), AmbMorphism::Cat(f)) => {
                Ok(AmbMorphism::Cat(c.compose(g, f)?))
            }
            (World::Set, AmbMorphism::Set(g), AmbMorphism::Set(f)) => {
                Ok(AmbMorphism::Set(g.compose(f)?))
            }
            _ => Err(Error::Mismatch),
        }
    }

    pub fn identity(&self, a: &AmbObject) -> Result<AmbMorphism> {
        match (self, a) {
            (World::Cat(c), AmbObject::Cat(x)) => Ok(AmbMorphism::Cat(c.identity(x)?.clone())),
            (World::Set, AmbObject::Set(s)) => Ok(AmbMorphism::Set(SetFunction::identity(s))),
            _ => Err(Error::Mismatch),
        }
    }

    pub fn src(&self, f: &AmbMorphism) -> Result<AmbObject> {
        match (self, f) {
            (World::Cat(c), AmbMorphism::Cat(m)) => Ok(AmbObject::Cat(c.src(m)?.clone())),
            (World::Set, AmbMorphism::Set(m)) => Ok(AmbObject::Set(m.domain().clone())),
            _ => Err(Error::Mismatch),
        }
    }

    pub fn dst(&self, f: &AmbMorphism) -> Result<AmbObject> {
        match (self, f) {
            (World::Cat(c), AmbMorphism::Cat(m)) => Ok(AmbObject::Cat(c.dst(m)?.clone())),
            (World::Set, AmbMorphism::Set(m)) => Ok(AmbObject::Set(m.codomain().clone())),
            _ => Err(Error::Mismatch),
        }
    }

    /// Hom-set between ambient objects, in canonical order.
    pub fn hom(&self, a: &AmbObject, b: &AmbObject) -> Result<Vec<AmbMorphism>> {
        match (self, a, b) {
            (World::Cat(c), AmbObject::Cat(x), AmbObject::Cat(y)) => {
                Ok(c.hom_set(x, y)?.into_iter().map(AmbMorphism::Cat).collect())
            }
            (World::Set, AmbObject::Set(x), AmbObject::Set(y)) => {
                Ok(all_functions(x, y).into_iter().map(AmbMorphism::Set).collect())
            }
            _ => Err(Error::Mismatch),
        }
    }

    /// The objects a "for all Y" quantification ranges over: every object of
    /// a finite ambient, canonical sets of size <= probe for finite sets.
    pub fn quantifier_objects(&self, probe: usize) -> Vec<AmbObject> {
        match self {
            World::Cat(c) => c.objects().iter().cloned().map(AmbObject::Cat).collect(),
            World::Set => (0..=probe).map(|n| AmbObject::Set(canonical_set(n))).collect(),
        }
    }
}

/// An object of the Index-Functor category: a diagram in one of the two
/// ambient worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IFObject {
    Cat(FinFunctor),
    Set(FinSetDiagram),
}

impl IFObject {
    pub fn index(&self) -> &FinCategory {
        match self {
            IFObject::Cat(f) => f.source(),
            IFObject::Set(d) => d.shape(),
        }
    }

    pub fn world(&self) -> World {
        match self {
            IFObject::Cat(f) => World::Cat(f.target().clone()),
            IFObject::Set(_) => World::Set,
        }
    }

    pub fn value(&self, i: &str) -> Result<AmbObject> {
        match self {
            IFObject::Cat(f) => Ok(AmbObject::Cat(f.on_object(i)?.clone())),
            IFObject::Set(d) => Ok(AmbObject::Set(d.value(i)?.clone())),
        }
    }

    pub fn map(&self, m: &str) -> Result<AmbMorphism> {
        match self {
            IFObject::Cat(f) => Ok(AmbMorphism::Cat(f.on_morphism(m)?.clone())),
            IFObject::Set(d) => Ok(AmbMorphism::Set(d.map(m)?.clone())),
        }
    }

    /// The constant diagram cZ on the one-object index.
    pub fn constant(world: &World, z: &AmbObject) -> Result<IFObject> {
        let star = crate::catalog::terminal_category();
        match (world, z) {
            (World::Cat(c), AmbObject::Cat(x)) => {
                Ok(IFObject::Cat(FinFunctor::constant(&star, c, x)?))
            }
            (World::Set, AmbObject::Set(s)) => {
                let objects = [("*".to_string(), s.clone())].into_iter().collect();
                let maps = [("id*".to_string(), SetFunction::identity(s))].into_iter().collect();
                Ok(IFObject::Set(FinSetDiagram::new(star, objects, maps)?))
            }
            _ => Err(Error::Mismatch),
        }
    }

    pub fn is_constant_shape(&self) -> bool {
        self.index().objects().len() == 1 && self.index().arrows().len() == 1
    }
}

/// A morphism (g, eta): (I, F) -> (I', F'): a functor g on indices and a
/// natural transformation eta: F -> F' g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IFMorphism {
    source: IFObject,
    target: IFObject,
    functor: FinFunctor,
    eta: BTreeMap<ObjId, AmbMorphism>,
}

impl IFMorphism {
    pub fn new(
        source: IFObject,
        target: IFObject,
        functor: FinFunctor,
        eta: BTreeMap<ObjId, AmbMorphism>,
    ) -> Result<Self> {
        let world = source.world();
        if world != target.world() {
            return Err(Error::Mismatch);
        }
        if functor.source() != source.index() || functor.target() != target.index() {
            return Err(Error::Mismatch);
        }
        for i in source.index().objects() {
            let c = eta.get(i).ok_or_else(|| Error::NotNatural { at: i.clone() })?;
            if world.src(c)? != source.value(i)?
                || world.dst(c)? != target.value(functor.on_object(i)?)?
            {
                return Err(Error::NotNatural { at: i.clone() });
            }
        }
        for m in source.index().arrows() {
            let lhs = world.compose(&eta[&m.dst], &source.map(&m.id)?)?;
            let rhs = world.compose(&target.map(functor.on_morphism(&m.id)?)?, &eta[&m.src])?;
            if lhs != rhs {
                return Err(Error::NotNatural { at: m.id.clone() });
            }
        }
        Ok(IFMorphism { source, target, functor, eta })
    }

    pub fn identity(object: &IFObject) -> Result<Self> {
        let world = object.world();
        let eta = object
            .index()
            .objects()
            .iter()
            .map(|i| Ok((i.clone(), world.identity(&object.value(i)?)?)))
            .collect::<Result<_>>()?;
        IFMorphism::new(
            object.clone(),
            object.clone(),
            FinFunctor::identity(object.index()),
            eta,
        )
    }

    pub fn source(&self) -> &IFObject {
        &self.source
    }

    pub fn target(&self) -> &IFObject {
        &self.target
    }

    pub fn functor(&self) -> &FinFunctor {
        &self.functor
    }

    pub fn eta(&self) -> &BTreeMap<ObjId, AmbMorphism> {
        &self.eta
    }
}

/// (g2, eta2) . (g1, eta1) = (g2 g1, g1*(eta2) . eta1).
pub fn compose_if(later: &IFMorphism, earlier: &IFMorphism) -> Result<IFMorphism> {
    if earlier.target != later.source {
        return Err(Error::Mismatch);
    }
    let world = earlier.source.world();
    let functor = later.functor.compose(&earlier.functor)?;
    let eta = earlier
        .source
        .index()
        .objects()
        .iter()
        .map(|i| {
            let mid = earlier.functor.on_object(i)?;
            let c = world.compose(&later.eta[mid], &earlier.eta[i])?;
            Ok((i.clone(), c))
        })
        .collect::<Result<_>>()?;
    IFMorphism::new(earlier.source.clone(), later.target.clone(), functor, eta)
}

/// The canonical map phi_T: (T, U) -> cX whose components are the sieve
/// members themselves.
pub fn canonical_cocone_map(
    cat: &FinCategory,
    sieve: &crate::sieves::ExplicitSieve,
) -> Result<IFMorphism> {
    let (scat, u) = sieve.as_category(cat)?;
    let source = IFObject::Cat(u);
    let world = World::Cat(cat.clone());
    let target = IFObject::constant(&world, &AmbObject::Cat(sieve.apex().clone()))?;
    let functor = FinFunctor::constant(&scat, target.index(), "*")?;
    let eta = sieve
        .morphisms()
        .iter()
        .map(|f| (f.clone(), AmbMorphism::Cat(f.clone())))
        .collect();
    IFMorphism::new(source, target, functor, eta)
}

/// All morphisms (t, eta): A -> cY with t the terminal functor, i.e. the
/// cocones on the diagram with nadir Y, in canonical order.
pub fn hom_into_constant(
    object: &IFObject,
    y: &AmbObject,
    guard: usize,
) -> Result<Vec<IFMorphism>> {
    let world = object.world();
    let target = IFObject::constant(&world, y)?;
    let index = object.index();
    let objs: Vec<&ObjId> = index.objects().iter().collect();
    let choices: Vec<Vec<AmbMorphism>> = objs
        .iter()
        .map(|i| world.hom(&object.value(i)?, y))
        .collect::<Result<_>>()?;
    let mut needed: usize = 1;
    for c in &choices {
        needed = needed.saturating_mul(c.len().max(1));
    }
    if needed > guard {
        return Err(Error::AmbientTooLarge { needed, bound: guard });
    }
    if choices.iter().any(|c| c.is_empty()) && !objs.is_empty() {
        return Ok(Vec::new());
    }
    let functor = FinFunctor::constant(index, target.index(), "*")?;
    let mut out = Vec::new();
    'pick: for pick in CartesianIndices::new(choices.iter().map(|c| c.len()).collect()) {
        let eta: BTreeMap<ObjId, AmbMorphism> = objs
            .iter()
            .enumerate()
            .map(|(k, i)| ((*i).clone(), choices[k][pick[k]].clone()))
            .collect();
        // cocone condition
        for m in index.arrows() {
            let lhs = world.compose(&eta[&m.dst], &object.map(&m.id)?)?;
            if lhs != eta[&m.src] {
                continue 'pick;
            }
        }
        out.push(IFMorphism {
            source: object.clone(),
            target: target.clone(),
            functor: functor.clone(),
            eta,
        });
    }
    Ok(out)
}

/// Precomposition hom(B, cY) -> hom(A, cY) along F: A -> B, as an index
/// mapping into the enumerated hom lists.
#[derive(Debug, Clone)]
pub struct InducedHomMap {
    pub hom_target: Vec<IFMorphism>,
    pub hom_source: Vec<IFMorphism>,
    /// positions into hom_source, one per element of hom_target
    pub mapping: Vec<usize>,
}

impl InducedHomMap {
    pub fn is_bijective(&self) -> bool {
        if self.hom_target.len() != self.hom_source.len() {
            return false;
        }
        let mut seen = vec![false; self.hom_source.len()];
        for &i in &self.mapping {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }
}

pub fn induced_map_on_homs(
    f: &IFMorphism,
    y: &AmbObject,
    guard: usize,
) -> Result<InducedHomMap> {
    let hom_target = hom_into_constant(f.target(), y, guard)?;
    let hom_source = hom_into_constant(f.source(), y, guard)?;
    let mut mapping = Vec::with_capacity(hom_target.len());
    for k in &hom_target {
        let pulled = compose_if(k, f)?;
        let pos = hom_source
            .iter()
            .position(|m| m.eta == pulled.eta)
            .ok_or_else(|| Error::Malformed { reason: "precomposition left the hom-set".into() })?;
        mapping.push(pos);
    }
    Ok(InducedHomMap { hom_target, hom_source, mapping })
}

/// Lemma-style colimit detection: the candidate cocone phi: A -> cX exhibits
/// X as the colimit iff precomposition with phi is a bijection
/// hom(cX, cY) -> hom(A, cY) for every ambient Y (probed for finite sets).
pub fn colimit_via_homsets(phi: &IFMorphism, probe: usize, guard: usize) -> Result<bool> {
    if !phi.target().is_constant_shape() {
        return Err(Error::Malformed { reason: "candidate cocone must land in a constant".into() });
    }
    let world = phi.source().world();
    for y in world.quantifier_objects(probe) {
        if !induced_map_on_homs(phi, &y, guard)?.is_bijective() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A 2-morphism theta between parallel (f, eta_f), (g, eta_g): a natural
/// transformation f => g whose whiskering triangle commutes at every index
/// object.
#[derive(Debug, Clone)]
pub struct IFTwoMorphism {
    pub from: IFMorphism,
    pub to: IFMorphism,
    /// components in the target index category
    pub theta: BTreeMap<ObjId, MorId>,
}

/// Checks the 2-morphism conditions; errors carry the offending object.
pub fn is_two_morphism(candidate: &IFTwoMorphism) -> Result<bool> {
    let f = &candidate.from;
    let g = &candidate.to;
    if f.source != g.source || f.target != g.target {
        return Err(Error::Mismatch);
    }
    let index_target = f.target.index();
    let world = f.source.world();
    // theta is a natural transformation between the index functors
    for i in f.source.index().objects() {
        let Some(c) = candidate.theta.get(i) else { return Ok(false) };
        let arrow = index_target.arrow(c)?;
        if arrow.src != *f.functor.on_object(i)? || arrow.dst != *g.functor.on_object(i)? {
            return Ok(false);
        }
    }
    for m in f.source.index().arrows() {
        let lhs = index_target.compose(&candidate.theta[&m.dst], f.functor.on_morphism(&m.id)?)?;
        let rhs = index_target.compose(g.functor.on_morphism(&m.id)?, &candidate.theta[&m.src])?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    // triangle: E(theta_i) . (eta_f)_i = (eta_g)_i
    for i in f.source.index().objects() {
        let e_theta = f.target.map(&candidate.theta[i])?;
        let lhs = world.compose(&e_theta, &f.eta[i])?;
        if lhs != g.eta[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A functor from a finite base into finite categories.
#[derive(Debug, Clone)]
pub struct GrothendieckFunctor {
    base: FinCategory,
    fibers: BTreeMap<ObjId, FinCategory>,
    transitions: BTreeMap<MorId, FinFunctor>,
}

impl GrothendieckFunctor {
    pub fn new(
        base: FinCategory,
        fibers: BTreeMap<ObjId, FinCategory>,
        transitions: BTreeMap<MorId, FinFunctor>,
    ) -> Result<Self> {
        for a in base.objects() {
            if !fibers.contains_key(a) {
                return Err(Error::NotAFunctor { law: "fiber totality".into(), at: a.clone() });
            }
        }
        for m in base.arrows() {
            let t = transitions
                .get(&m.id)
                .ok_or_else(|| Error::NotAFunctor { law: "transition totality".into(), at: m.id.clone() })?;
            if t.source() != &fibers[&m.src] || t.target() != &fibers[&m.dst] {
                return Err(Error::NotAFunctor { law: "transition endpoints".into(), at: m.id.clone() });
            }
        }
        for a in base.objects() {
            if transitions[base.identity(a)?] != FinFunctor::identity(&fibers[a]) {
                return Err(Error::NotAFunctor { law: "identities".into(), at: a.clone() });
            }
        }
        for g in base.arrows() {
            for f in base.arrows() {
                if f.dst != g.src {
                    continue;
                }
                let gf = base.compose(&g.id, &f.id)?;
                if transitions[&gf] != transitions[&g.id].compose(&transitions[&f.id])? {
                    return Err(Error::NotAFunctor {
                        law: "composition".into(),
                        at: format!("({}, {})", g.id, f.id),
                    });
                }
            }
        }
        Ok(GrothendieckFunctor { base, fibers, transitions })
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn fiber(&self, a: &str) -> Result<&FinCategory> {
        self.fibers
            .get(a)
            .ok_or_else(|| Error::UnknownObject { object: a.to_string() })
    }

    pub fn transition(&self, f: &str) -> Result<&FinFunctor> {
        self.transitions
            .get(f)
            .ok_or_else(|| Error::UnknownMorphism { morphism: f.to_string() })
    }
}

pub fn groth_object_id(a: &str, tau: &str) -> String {
    format!("({a}|{tau})")
}

pub fn groth_morphism_id(f: &str, g: &str, src: &str, dst: &str) -> String {
    format!("({f}|{g}):{src}=>{dst}")
}

/// The Grothendieck construction: objects (a, tau), morphisms (f, g) with
/// g: Gf(tau) -> tau', and the projection functor to the base.
pub fn groth_construction(g: &GrothendieckFunctor) -> Result<(FinCategory, FinFunctor)> {
    let base = g.base();
    let mut raw = RawCategory::default();
    let mut proj_obj = BTreeMap::new();
    let mut proj_mor = BTreeMap::new();

    for a in base.objects() {
        for tau in g.fiber(a)?.objects() {
            let o = groth_object_id(a, tau);
            raw.objects.push(o.clone());
            proj_obj.insert(o, a.clone());
        }
    }

    struct GrothArrow {
        id: MorId,
        base_part: MorId,
        fiber_part: MorId,
        src: ObjId,
        dst: ObjId,
    }
    let mut arrows: Vec<GrothArrow> = Vec::new();
    for f in base.arrows() {
        let trans = g.transition(&f.id)?;
        for tau in g.fiber(&f.src)?.objects() {
            let pushed = trans.on_object(tau)?;
            for tau2 in g.fiber(&f.dst)?.objects() {
                for vert in g.fiber(&f.dst)?.hom_set(pushed, tau2)? {
                    let src = groth_object_id(&f.src, tau);
                    let dst = groth_object_id(&f.dst, tau2);
                    let id = groth_morphism_id(&f.id, &vert, &src, &dst);
                    raw.arrows.push(Arrow::new(&id, &src, &dst));
                    proj_mor.insert(id.clone(), f.id.clone());
                    arrows.push(GrothArrow {
                        id,
                        base_part: f.id.clone(),
                        fiber_part: vert,
                        src,
                        dst,
                    });
                }
            }
        }
    }

    for a in base.objects() {
        for tau in g.fiber(a)?.objects() {
            let o = groth_object_id(a, tau);
            raw.identities.insert(
                o.clone(),
                groth_morphism_id(base.identity(a)?, g.fiber(a)?.identity(tau)?, &o, &o),
            );
        }
    }

    // composition: (f2, g2) . (f1, g1) = (f2 f1, g2 . Gf2(g1))
    for a2 in &arrows {
        for a1 in &arrows {
            if a1.dst != a2.src {
                continue;
            }
            let f21 = base.compose(&a2.base_part, &a1.base_part)?;
            let pushed_g1 = g.transition(&a2.base_part)?.on_morphism(&a1.fiber_part)?;
            let g21 = g
                .fiber(base.dst(&a2.base_part)?)?
                .compose(&a2.fiber_part, pushed_g1)?;
            raw.compose.insert(
                (a2.id.clone(), a1.id.clone()),
                groth_morphism_id(&f21, &g21, &a1.src, &a2.dst),
            );
        }
    }

    let total = FinCategory::validate(raw)?;
    let projection = FinFunctor::new(total.clone(), base.clone(), proj_obj, proj_mor)?;
    Ok((total, projection))
}
