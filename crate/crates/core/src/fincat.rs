//! Finite categories presented by explicit tables, together with the
//! constructions every other module leans on: functors, natural
//! transformations, over/undercategories, finality, and brute-force colimits
//! decided directly from the universal property.
//!
//! Identifiers are opaque strings and every enumeration runs in lexicographic
//! order, so all outputs are deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub type ObjId = String;
pub type MorId = String;

/// Default guard on cocone-assignment enumeration in colimit searches.
pub const DEFAULT_COLIMIT_GUARD: usize = 1_000_000;

/// One row of a category's morphism table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arrow {
    pub id: MorId,
    pub src: ObjId,
    pub dst: ObjId,
}

impl Arrow {
    pub fn new(id: &str, src: &str, dst: &str) -> Self {
        Arrow { id: id.to_string(), src: src.to_string(), dst: dst.to_string() }
    }
}

/// Unvalidated category tables, as read from a document or built in code.
#[derive(Debug, Clone, Default)]
pub struct RawCategory {
    pub objects: Vec<ObjId>,
    pub arrows: Vec<Arrow>,
    pub identities: BTreeMap<ObjId, MorId>,
    /// Keyed by (g, f) with target(f) = source(g); value is g after f.
    pub compose: BTreeMap<(MorId, MorId), MorId>,
}

/// A finite category: all invariants checked at construction, immutable after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<ObjId>,
    arrows: Vec<Arrow>,
    arrow_index: BTreeMap<MorId, usize>,
    identities: BTreeMap<ObjId, MorId>,
    /// compose[g][f] = g after f; nested so lookups borrow
    compose: BTreeMap<MorId, BTreeMap<MorId, MorId>>,
}

/// Checks the raw tables and returns the validated category.
pub fn validate_category(raw: RawCategory) -> Result<FinCategory> {
    FinCategory::validate(raw)
}

impl FinCategory {
    pub fn validate(raw: RawCategory) -> Result<FinCategory> {
        let mut objects = raw.objects.clone();
        objects.sort();
        let before = objects.len();
        objects.dedup();
        if objects.len() != before {
            return Err(Error::Malformed { reason: "duplicate object id".into() });
        }
        let objset: BTreeSet<&ObjId> = objects.iter().collect();

        let mut arrows = raw.arrows.clone();
        arrows.sort_by(|a, b| a.id.cmp(&b.id));
        let mut arrow_index = BTreeMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(Error::Malformed { reason: format!("duplicate morphism id {}", a.id) });
            }
            if !objset.contains(&a.src) {
                return Err(Error::UnknownObject { object: a.src.clone() });
            }
            if !objset.contains(&a.dst) {
                return Err(Error::UnknownObject { object: a.dst.clone() });
            }
        }

        for (x, m) in &raw.identities {
            if !objset.contains(x) {
                return Err(Error::UnknownObject { object: x.clone() });
            }
            let i = *arrow_index
                .get(m)
                .ok_or_else(|| Error::UnknownMorphism { morphism: m.clone() })?;
            if arrows[i].src != *x || arrows[i].dst != *x {
                return Err(Error::IdentityLawViolation { morphism: m.clone() });
            }
        }
        for x in &objects {
            if !raw.identities.contains_key(x) {
                return Err(Error::Malformed { reason: format!("object {x} has no identity") });
            }
        }

        // The composition table must be total on composable pairs and empty
        // elsewhere, with endpoints source(f) -> target(g).
        let n = arrows.len();
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for ((g, f), h) in &raw.compose {
            let gi = *arrow_index
                .get(g)
                .ok_or_else(|| Error::UnknownMorphism { morphism: g.clone() })?;
            let fi = *arrow_index
                .get(f)
                .ok_or_else(|| Error::UnknownMorphism { morphism: f.clone() })?;
            let hi = *arrow_index
                .get(h)
                .ok_or_else(|| Error::UnknownMorphism { morphism: h.clone() })?;
            if arrows[fi].dst != arrows[gi].src {
                return Err(Error::Malformed {
                    reason: format!("compose entry ({g}, {f}) is not composable"),
                });
            }
            if arrows[hi].src != arrows[fi].src || arrows[hi].dst != arrows[gi].dst {
                return Err(Error::Malformed {
                    reason: format!("composite {h} of ({g}, {f}) has wrong endpoints"),
                });
            }
            table[gi][fi] = Some(hi);
        }
        for (gi, g) in arrows.iter().enumerate() {
            for (fi, f) in arrows.iter().enumerate() {
                if f.dst == g.src && table[gi][fi].is_none() {
                    return Err(Error::MissingComposite { g: g.id.clone(), f: f.id.clone() });
                }
            }
        }

        for (fi, f) in arrows.iter().enumerate() {
            let left_id = arrow_index[&raw.identities[&f.dst]];
            let right_id = arrow_index[&raw.identities[&f.src]];
            if table[left_id][fi] != Some(fi) || table[fi][right_id] != Some(fi) {
                return Err(Error::IdentityLawViolation { morphism: f.id.clone() });
            }
        }

        for (hi, h) in arrows.iter().enumerate() {
            for (gi, g) in arrows.iter().enumerate() {
                if g.dst != h.src {
                    continue;
                }
                let hg = table[hi][gi].expect("totality checked");
                for (fi, f) in arrows.iter().enumerate() {
                    if f.dst != g.src {
                        continue;
                    }
                    let gf = table[gi][fi].expect("totality checked");
                    if table[hi][gf] != table[hg][fi] {
                        return Err(Error::NonAssociative {
                            h: h.id.clone(),
                            g: g.id.clone(),
                            f: f.id.clone(),
                        });
                    }
                }
            }
        }

        let mut compose: BTreeMap<MorId, BTreeMap<MorId, MorId>> = BTreeMap::new();
        for ((g, f), h) in raw.compose {
            compose.entry(g).or_default().insert(f, h);
        }
        Ok(FinCategory { objects, arrows, arrow_index, identities: raw.identities, compose })
    }

    pub fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn has_object(&self, x: &str) -> bool {
        self.objects.binary_search_by(|o| o.as_str().cmp(x)).is_ok()
    }

    pub fn arrow(&self, id: &str) -> Result<&Arrow> {
        self.arrow_index
            .get(id)
            .map(|&i| &self.arrows[i])
            .ok_or_else(|| Error::UnknownMorphism { morphism: id.to_string() })
    }

    pub fn src(&self, id: &str) -> Result<&ObjId> {
        Ok(&self.arrow(id)?.src)
    }

    pub fn dst(&self, id: &str) -> Result<&ObjId> {
        Ok(&self.arrow(id)?.dst)
    }

    pub fn identity(&self, x: &str) -> Result<&MorId> {
        self.identities
            .get(x)
            .ok_or_else(|| Error::UnknownObject { object: x.to_string() })
    }

    pub fn is_identity(&self, id: &str) -> bool {
        match self.arrow(id) {
            Ok(a) => self.identities.get(&a.src) == Some(&a.id),
            Err(_) => false,
        }
    }

    /// g after f.
    pub fn compose(&self, g: &str, f: &str) -> Result<MorId> {
        self.compose
            .get(g)
            .and_then(|row| row.get(f))
            .cloned()
            .ok_or_else(|| Error::MissingComposite { g: g.to_string(), f: f.to_string() })
    }

    /// Composes a chain last-to-first: `compose_chain([f1, f2, f3])` is f1.f2.f3.
    pub fn compose_chain(&self, ids: &[MorId]) -> Result<MorId> {
        let mut it = ids.iter();
        let mut acc = match it.next() {
            Some(f) => f.clone(),
            None => return Err(Error::Malformed { reason: "empty chain".into() }),
        };
        for f in it {
            acc = self.compose(&acc, f)?;
        }
        Ok(acc)
    }

    /// All morphisms A -> B in id order.
    pub fn hom_set(&self, a: &str, b: &str) -> Result<Vec<MorId>> {
        if !self.has_object(a) {
            return Err(Error::UnknownObject { object: a.to_string() });
        }
        if !self.has_object(b) {
            return Err(Error::UnknownObject { object: b.to_string() });
        }
        Ok(self
            .arrows
            .iter()
            .filter(|m| m.src == a && m.dst == b)
            .map(|m| m.id.clone())
            .collect())
    }

    pub fn arrows_into(&self, x: &str) -> Result<Vec<MorId>> {
        if !self.has_object(x) {
            return Err(Error::UnknownObject { object: x.to_string() });
        }
        Ok(self
            .arrows
            .iter()
            .filter(|m| m.dst == x)
            .map(|m| m.id.clone())
            .collect())
    }

    pub fn is_iso(&self, f: &str) -> Result<bool> {
        let a = self.arrow(f)?;
        for g in self.hom_set(&a.dst, &a.src)? {
            if self.compose(&g, f)? == *self.identity(&a.src)?
                && self.compose(f, &g)? == *self.identity(&a.dst)?
            {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn is_mono(&self, f: &str) -> Result<bool> {
        let a = self.arrow(f)?;
        for w in &self.objects {
            let probes = self.hom_set(w, &a.src)?;
            for u in &probes {
                for v in &probes {
                    if u < v && self.compose(f, u)? == self.compose(f, v)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Objects with exactly one arrow to every object.
    pub fn initial_objects(&self) -> Vec<ObjId> {
        self.objects
            .iter()
            .filter(|i| self.objects.iter().all(|y| self.hom_set(i, y).unwrap().len() == 1))
            .cloned()
            .collect()
    }

    pub fn terminal_objects(&self) -> Vec<ObjId> {
        self.objects
            .iter()
            .filter(|t| self.objects.iter().all(|y| self.hom_set(y, t).unwrap().len() == 1))
            .cloned()
            .collect()
    }

    /// Connectivity of the underlying undirected graph; the empty category is
    /// not connected.
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.objects.first() else { return false };
        let mut seen: BTreeSet<&ObjId> = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            for a in &self.arrows {
                if a.src == *x && !seen.contains(&a.dst) {
                    stack.push(&a.dst);
                }
                if a.dst == *x && !seen.contains(&a.src) {
                    stack.push(&a.src);
                }
            }
        }
        seen.len() == self.objects.len()
    }

    /// True when the digraph of non-identity arrows is acyclic, so composable
    /// identity-free chains have bounded length.
    pub fn is_chain_bounded(&self) -> bool {
        self.find_chain_cycle().is_none()
    }

    pub fn find_chain_cycle(&self) -> Option<ObjId> {
        // DFS three-color cycle detection over non-identity arrows.
        let mut state: BTreeMap<&ObjId, u8> = BTreeMap::new();
        for start in &self.objects {
            if state.get(start).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack = vec![(start, false)];
            while let Some((x, done)) = stack.pop() {
                if done {
                    state.insert(x, 2);
                    continue;
                }
                match state.get(x).copied().unwrap_or(0) {
                    1 => continue,
                    2 => continue,
                    _ => {}
                }
                state.insert(x, 1);
                stack.push((x, true));
                for a in &self.arrows {
                    if self.is_identity(&a.id) || a.src != *x {
                        continue;
                    }
                    match state.get(&a.dst).copied().unwrap_or(0) {
                        0 => stack.push((&a.dst, false)),
                        1 => return Some(a.dst.clone()),
                        _ => {}
                    }
                }
            }
        }
        None
    }
}

/// A functor between finite categories, preservation checked exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    source: FinCategory,
    target: FinCategory,
    object_map: BTreeMap<ObjId, ObjId>,
    morphism_map: BTreeMap<MorId, MorId>,
}

impl FinFunctor {
    pub fn new(
        source: FinCategory,
        target: FinCategory,
        object_map: BTreeMap<ObjId, ObjId>,
        morphism_map: BTreeMap<MorId, MorId>,
    ) -> Result<Self> {
        for x in source.objects() {
            let y = object_map
                .get(x)
                .ok_or_else(|| Error::NotAFunctor { law: "object totality".into(), at: x.clone() })?;
            if !target.has_object(y) {
                return Err(Error::UnknownObject { object: y.clone() });
            }
        }
        for a in source.arrows() {
            let m = morphism_map.get(&a.id).ok_or_else(|| Error::NotAFunctor {
                law: "morphism totality".into(),
                at: a.id.clone(),
            })?;
            let ma = target.arrow(m)?;
            if ma.src != object_map[&a.src] || ma.dst != object_map[&a.dst] {
                return Err(Error::NotAFunctor { law: "endpoints".into(), at: a.id.clone() });
            }
        }
        for x in source.objects() {
            if morphism_map[source.identity(x)?] != *target.identity(&object_map[x])? {
                return Err(Error::NotAFunctor { law: "identities".into(), at: x.clone() });
            }
        }
        for g in source.arrows() {
            for f in source.arrows() {
                if f.dst != g.src {
                    continue;
                }
                let gf = source.compose(&g.id, &f.id)?;
                let lhs = &morphism_map[&gf];
                let rhs = target.compose(&morphism_map[&g.id], &morphism_map[&f.id])?;
                if *lhs != rhs {
                    return Err(Error::NotAFunctor {
                        law: "composition".into(),
                        at: format!("({}, {})", g.id, f.id),
                    });
                }
            }
        }
        Ok(FinFunctor { source, target, object_map, morphism_map })
    }

    pub fn identity(cat: &FinCategory) -> Self {
        let object_map = cat.objects().iter().map(|x| (x.clone(), x.clone())).collect();
        let morphism_map = cat.arrows().iter().map(|a| (a.id.clone(), a.id.clone())).collect();
        FinFunctor { source: cat.clone(), target: cat.clone(), object_map, morphism_map }
    }

    /// The constant functor from `shape` at object `x` of `target`.
    pub fn constant(shape: &FinCategory, target: &FinCategory, x: &str) -> Result<Self> {
        if !target.has_object(x) {
            return Err(Error::UnknownObject { object: x.to_string() });
        }
        let id_x = target.identity(x)?.clone();
        let object_map = shape.objects().iter().map(|o| (o.clone(), x.to_string())).collect();
        let morphism_map = shape.arrows().iter().map(|a| (a.id.clone(), id_x.clone())).collect();
        Ok(FinFunctor {
            source: shape.clone(),
            target: target.clone(),
            object_map,
            morphism_map,
        })
    }

    pub fn source(&self) -> &FinCategory {
        &self.source
    }

    pub fn target(&self) -> &FinCategory {
        &self.target
    }

    pub fn on_object(&self, x: &str) -> Result<&ObjId> {
        self.object_map
            .get(x)
            .ok_or_else(|| Error::UnknownObject { object: x.to_string() })
    }

    pub fn on_morphism(&self, f: &str) -> Result<&MorId> {
        self.morphism_map
            .get(f)
            .ok_or_else(|| Error::UnknownMorphism { morphism: f.to_string() })
    }

    pub fn object_map(&self) -> &BTreeMap<ObjId, ObjId> {
        &self.object_map
    }

    pub fn morphism_map(&self) -> &BTreeMap<MorId, MorId> {
        &self.morphism_map
    }

    /// self after earlier.
    pub fn compose(&self, earlier: &FinFunctor) -> Result<FinFunctor> {
        if earlier.target != self.source {
            return Err(Error::Mismatch);
        }
        let object_map = earlier
            .object_map
            .iter()
            .map(|(x, y)| (x.clone(), self.object_map[y].clone()))
            .collect();
        let morphism_map = earlier
            .morphism_map
            .iter()
            .map(|(f, g)| (f.clone(), self.morphism_map[g].clone()))
            .collect();
        FinFunctor::new(earlier.source.clone(), self.target.clone(), object_map, morphism_map)
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub source: FinFunctor,
    pub target: FinFunctor,
    pub components: BTreeMap<ObjId, MorId>,
}

impl NatTrans {
    pub fn new(
        source: FinFunctor,
        target: FinFunctor,
        components: BTreeMap<ObjId, MorId>,
    ) -> Result<Self> {
        if source.source() != target.source() || source.target() != target.target() {
            return Err(Error::Mismatch);
        }
        let amb = source.target();
        for x in source.source().objects() {
            let c = components
                .get(x)
                .ok_or_else(|| Error::NotNatural { at: x.clone() })?;
            let a = amb.arrow(c)?;
            if a.src != *source.on_object(x)? || a.dst != *target.on_object(x)? {
                return Err(Error::NotNatural { at: x.clone() });
            }
        }
        for m in source.source().arrows() {
            let lhs = amb.compose(&components[&m.dst], source.on_morphism(&m.id)?)?;
            let rhs = amb.compose(target.on_morphism(&m.id)?, &components[&m.src])?;
            if lhs != rhs {
                return Err(Error::NotNatural { at: m.id.clone() });
            }
        }
        Ok(NatTrans { source, target, components })
    }
}

/// A cocone under a diagram: legs out of every diagram object, compatible
/// with every diagram arrow.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cocone {
    pub nadir: ObjId,
    pub legs: BTreeMap<ObjId, MorId>,
}

impl Cocone {
    pub fn check(&self, diagram: &FinFunctor) -> Result<()> {
        let amb = diagram.target();
        for x in diagram.source().objects() {
            let leg = self
                .legs
                .get(x)
                .ok_or_else(|| Error::Malformed { reason: format!("missing leg at {x}") })?;
            let a = amb.arrow(leg)?;
            if a.src != *diagram.on_object(x)? || a.dst != self.nadir {
                return Err(Error::Malformed { reason: format!("bad leg at {x}") });
            }
        }
        for m in diagram.source().arrows() {
            let thru = amb.compose(&self.legs[&m.dst], diagram.on_morphism(&m.id)?)?;
            if thru != self.legs[&m.src] {
                return Err(Error::Malformed { reason: format!("leg square fails at {}", m.id) });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColimitOutcome {
    Colimit { object: ObjId, cocone: Cocone },
    NoColimit,
}

/// Iterator over multi-indices below the given bounds, last index fastest.
/// Yields exactly one (empty) index when `bounds` is empty.
pub(crate) struct CartesianIndices {
    bounds: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl CartesianIndices {
    pub(crate) fn new(bounds: Vec<usize>) -> Self {
        let next = if bounds.iter().any(|&b| b == 0) { None } else { Some(vec![0; bounds.len()]) };
        CartesianIndices { bounds, next }
    }
}

impl Iterator for CartesianIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        let mut bump = current.clone();
        let mut k = bump.len();
        loop {
            if k == 0 {
                self.next = None;
                break;
            }
            k -= 1;
            bump[k] += 1;
            if bump[k] < self.bounds[k] {
                self.next = Some(bump);
                break;
            }
            bump[k] = 0;
        }
        Some(current)
    }
}

/// All cocones under the diagram, in canonical (nadir, legs) order.
pub fn enumerate_cocones(diagram: &FinFunctor, guard: usize) -> Result<Vec<Cocone>> {
    let shape = diagram.source();
    let amb = diagram.target();
    let mut total: usize = 0;
    for nadir in amb.objects() {
        let mut per: usize = 1;
        for x in shape.objects() {
            per = per.saturating_mul(amb.hom_set(diagram.on_object(x)?, nadir)?.len());
        }
        total = total.saturating_add(per);
    }
    if total > guard {
        return Err(Error::AmbientTooLarge { needed: total, bound: guard });
    }

    let mut out = Vec::new();
    let objs: Vec<&ObjId> = shape.objects().iter().collect();
    for nadir in amb.objects() {
        let choices: Vec<Vec<MorId>> = objs
            .iter()
            .map(|x| amb.hom_set(diagram.on_object(x).unwrap(), nadir).unwrap())
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        for pick in CartesianIndices::new(choices.iter().map(|c| c.len()).collect()) {
            let legs: BTreeMap<ObjId, MorId> = objs
                .iter()
                .enumerate()
                .map(|(k, x)| ((*x).clone(), choices[k][pick[k]].clone()))
                .collect();
            let cocone = Cocone { nadir: nadir.clone(), legs };
            if cocone.check(diagram).is_ok() {
                out.push(cocone);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// How many mediators carry `candidate` to `other`.
pub fn factorization_count(
    diagram: &FinFunctor,
    candidate: &Cocone,
    other: &Cocone,
) -> Result<usize> {
    let amb = diagram.target();
    let mut n = 0;
    for u in amb.hom_set(&candidate.nadir, &other.nadir)? {
        let mut ok = true;
        for x in diagram.source().objects() {
            if amb.compose(&u, &candidate.legs[x])? != other.legs[x] {
                ok = false;
                break;
            }
        }
        if ok {
            n += 1;
        }
    }
    Ok(n)
}

/// Decides the colimit by enumerating every cocone and returning the one that
/// every cocone factors through uniquely.
pub fn colim_by_universal_property(diagram: &FinFunctor, guard: usize) -> Result<ColimitOutcome> {
    let cocones = enumerate_cocones(diagram, guard)?;
    for c in &cocones {
        let mut universal = true;
        for other in &cocones {
            if factorization_count(diagram, c, other)? != 1 {
                universal = false;
                break;
            }
        }
        if universal {
            return Ok(ColimitOutcome::Colimit { object: c.nadir.clone(), cocone: c.clone() });
        }
    }
    Ok(ColimitOutcome::NoColimit)
}

/// Full subcategory of the overcategory on the given arrows into `x`,
/// with its forgetful functor to the ambient.
///
/// Object ids are the member arrow ids; morphism ids are "h:f=>g".
pub fn slice_on_members(
    cat: &FinCategory,
    x: &str,
    members: &BTreeSet<MorId>,
) -> Result<(FinCategory, FinFunctor)> {
    for f in members {
        if cat.dst(f)? != x {
            return Err(Error::ApexMismatch { expected: x.to_string(), found: cat.dst(f)?.clone() });
        }
    }
    let mut raw = RawCategory::default();
    let mut proj_obj = BTreeMap::new();
    let mut proj_mor = BTreeMap::new();
    for f in members {
        raw.objects.push(f.clone());
        proj_obj.insert(f.clone(), cat.src(f)?.clone());
    }
    let mor_id = |h: &str, f: &str, g: &str| format!("{h}:{f}=>{g}");
    for f in members {
        for g in members {
            for h in cat.hom_set(cat.src(f)?, cat.src(g)?)? {
                if cat.compose(g, &h)? == *f {
                    let id = mor_id(&h, f, g);
                    raw.arrows.push(Arrow::new(&id, f, g));
                    proj_mor.insert(id, h.clone());
                }
            }
        }
    }
    for f in members {
        raw.identities.insert(f.clone(), mor_id(cat.identity(cat.src(f)?)?, f, f));
    }
    for a in &raw.arrows {
        for b in &raw.arrows {
            if b.dst != a.src {
                continue;
            }
            let h = cat.compose(&proj_mor[&a.id], &proj_mor[&b.id])?;
            raw.compose
                .insert((a.id.clone(), b.id.clone()), mor_id(&h, &b.src, &a.dst));
        }
    }
    let slice = FinCategory::validate(raw)?;
    let functor = FinFunctor::new(slice.clone(), cat.clone(), proj_obj, proj_mor)?;
    Ok((slice, functor))
}

/// The overcategory (C down X) with its forgetful projection to C.
pub fn overcategory(cat: &FinCategory, x: &str) -> Result<(FinCategory, FinFunctor)> {
    let members: BTreeSet<MorId> = cat.arrows_into(x)?.into_iter().collect();
    slice_on_members(cat, x, &members)
}

/// The comma category (f down F) with its projection to the source of F.
///
/// Object ids are "m@i" for m: f -> F(i); morphism ids are "s:m@i=>m'@i'".
pub fn undercategory(
    functor: &FinFunctor,
    f: &str,
) -> Result<(FinCategory, FinFunctor)> {
    let amb = functor.target();
    if !amb.has_object(f) {
        return Err(Error::UnknownObject { object: f.to_string() });
    }
    let shape = functor.source();
    let obj_id = |m: &str, i: &str| format!("{m}@{i}");
    let mut raw = RawCategory::default();
    let mut proj_obj = BTreeMap::new();
    let mut proj_mor = BTreeMap::new();
    let mut objects: Vec<(ObjId, MorId)> = Vec::new();
    for i in shape.objects() {
        for m in amb.hom_set(f, functor.on_object(i)?)? {
            let id = obj_id(&m, i);
            raw.objects.push(id.clone());
            proj_obj.insert(id.clone(), i.clone());
            objects.push((i.clone(), m));
        }
    }
    for (i, m) in &objects {
        for (j, m2) in &objects {
            for s in shape.hom_set(i, j)? {
                if amb.compose(functor.on_morphism(&s)?, m)? == *m2 {
                    let id = format!("{s}:{}=>{}", obj_id(m, i), obj_id(m2, j));
                    raw.arrows.push(Arrow::new(&id, &obj_id(m, i), &obj_id(m2, j)));
                    proj_mor.insert(id, s.clone());
                }
            }
        }
    }
    for (i, m) in &objects {
        let id_i = shape.identity(i)?;
        let o = obj_id(m, i);
        raw.identities.insert(o.clone(), format!("{id_i}:{o}=>{o}"));
    }
    for a in &raw.arrows {
        for b in &raw.arrows {
            if b.dst != a.src {
                continue;
            }
            let s = shape.compose(&proj_mor[&a.id], &proj_mor[&b.id])?;
            raw.compose
                .insert((a.id.clone(), b.id.clone()), format!("{s}:{}=>{}", b.src, a.dst));
        }
    }
    let comma = FinCategory::validate(raw)?;
    let functor = FinFunctor::new(comma.clone(), shape.clone(), proj_obj, proj_mor)?;
    Ok((comma, functor))
}

/// Mac Lane finality: (f down L) nonempty and connected for every object f of
/// the target.
pub fn is_final_functor(functor: &FinFunctor) -> Result<bool> {
    for f in functor.target().objects() {
        let (comma, _) = undercategory(functor, f)?;
        if comma.objects().is_empty() || !comma.is_connected() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pullback of f, g (shared codomain) decided by the universal property;
/// `None` when no pullback exists.
pub fn pullback_by_universal_property(
    cat: &FinCategory,
    f: &str,
    g: &str,
) -> Result<Option<(ObjId, MorId, MorId)>> {
    let fa = cat.arrow(f)?.clone();
    let ga = cat.arrow(g)?.clone();
    if fa.dst != ga.dst {
        return Err(Error::CodomainMismatch { left: fa.dst, right: ga.dst });
    }
    // cones: (w, p: w -> src f, q: w -> src g) with f p = g q
    let mut cones = Vec::new();
    for w in cat.objects() {
        for p in cat.hom_set(w, &fa.src)? {
            for q in cat.hom_set(w, &ga.src)? {
                if cat.compose(f, &p)? == cat.compose(g, &q)? {
                    cones.push((w.clone(), p.clone(), q));
                }
            }
        }
    }
    'outer: for (w, p, q) in &cones {
        for (w2, p2, q2) in &cones {
            let mut mediators = 0;
            for u in cat.hom_set(w2, w)? {
                if cat.compose(p, &u)? == *p2 && cat.compose(q, &u)? == *q2 {
                    mediators += 1;
                }
            }
            if mediators != 1 {
                continue 'outer;
            }
        }
        return Ok(Some((w.clone(), p.clone(), q.clone())));
    }
    Ok(None)
}

/// Coproduct of `parts` decided by the universal property (colimit over a
/// discrete shape); `None` when absent.
pub fn coproduct_by_universal_property(
    cat: &FinCategory,
    parts: &[ObjId],
) -> Result<Option<(ObjId, Vec<MorId>)>> {
    let mut raw = RawCategory::default();
    let mut object_map = BTreeMap::new();
    let mut morphism_map = BTreeMap::new();
    for (k, p) in parts.iter().enumerate() {
        let o = format!("p{k}");
        raw.objects.push(o.clone());
        let i = format!("id_p{k}");
        raw.arrows.push(Arrow::new(&i, &o, &o));
        raw.identities.insert(o.clone(), i.clone());
        raw.compose.insert((i.clone(), i.clone()), i.clone());
        object_map.insert(o, p.clone());
        morphism_map.insert(i, cat.identity(p)?.clone());
    }
    let shape = FinCategory::validate(raw)?;
    let diagram = FinFunctor::new(shape, cat.clone(), object_map, morphism_map)?;
    match colim_by_universal_property(&diagram, DEFAULT_COLIMIT_GUARD)? {
        ColimitOutcome::NoColimit => Ok(None),
        ColimitOutcome::Colimit { object, cocone } => {
            let incs = (0..parts.len())
                .map(|k| cocone.legs[&format!("p{k}")].clone())
                .collect();
            Ok(Some((object, incs)))
        }
    }
}

/// A coproduct the caller asserts to exist in the category; the checker
/// verifies what it can about it.
#[derive(Debug, Clone)]
pub struct CoproductInstance {
    pub parts: Vec<ObjId>,
    pub total: ObjId,
    pub inclusions: Vec<MorId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyOutcome {
    Holds,
    Fails { witness: String },
    MissingData { detail: String },
}

impl PropertyOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, PropertyOutcome::Holds)
    }
}

#[derive(Debug, Clone)]
pub struct CoproductReport {
    pub disjoint: PropertyOutcome,
    pub stable: PropertyOutcome,
    /// An arrow X -> initial forces X iso initial (granted stable coproducts).
    pub empty_arrow_collapse: PropertyOutcome,
}

/// Checks disjointness and stability, plus the arrow-into-initial collapse,
/// over the supplied coproduct instances. Missing pullbacks or coproducts are
/// reported, never thrown.
pub fn check_coproduct_properties(
    cat: &FinCategory,
    instances: &[CoproductInstance],
) -> Result<CoproductReport> {
    let initial = cat.initial_objects().into_iter().next();

    let mut disjoint = PropertyOutcome::Holds;
    'dis: for inst in instances {
        for inc in &inst.inclusions {
            if !cat.is_mono(inc)? {
                disjoint = PropertyOutcome::Fails { witness: format!("inclusion {inc} is not monic") };
                break 'dis;
            }
        }
        for (a, ia) in inst.inclusions.iter().enumerate() {
            for (b, ib) in inst.inclusions.iter().enumerate() {
                if a >= b {
                    continue;
                }
                match pullback_by_universal_property(cat, ia, ib)? {
                    None => {
                        disjoint = PropertyOutcome::MissingData {
                            detail: format!("no pullback of {ia} and {ib}"),
                        };
                        break 'dis;
                    }
                    Some((w, _, _)) => {
                        let is_initial = initial.as_deref() == Some(w.as_str())
                            || cat.initial_objects().contains(&w);
                        if !is_initial {
                            disjoint = PropertyOutcome::Fails {
                                witness: format!("{ia} x {ib} = {w} is not initial"),
                            };
                            break 'dis;
                        }
                    }
                }
            }
        }
    }

    let mut stable = PropertyOutcome::Holds;
    'sta: for inst in instances {
        for d_arrow in cat.arrows() {
            if d_arrow.dst != inst.total {
                continue;
            }
            let mut pieces = Vec::new();
            let mut piece_maps = Vec::new();
            for inc in &inst.inclusions {
                match pullback_by_universal_property(cat, &d_arrow.id, inc)? {
                    None => {
                        stable = PropertyOutcome::MissingData {
                            detail: format!("no pullback of {} and {inc}", d_arrow.id),
                        };
                        break 'sta;
                    }
                    Some((w, p, _)) => {
                        pieces.push(w);
                        piece_maps.push(p);
                    }
                }
            }
            match coproduct_by_universal_property(cat, &pieces)? {
                None => {
                    stable = PropertyOutcome::MissingData {
                        detail: format!("no coproduct of pullback pieces over {}", d_arrow.id),
                    };
                    break 'sta;
                }
                Some((s, incs)) => {
                    // induced map s -> D from the piece projections
                    let mut induced = None;
                    for u in cat.hom_set(&s, &d_arrow.src)? {
                        if incs
                            .iter()
                            .zip(&piece_maps)
                            .all(|(i, p)| cat.compose(&u, i).map(|c| c == *p).unwrap_or(false))
                        {
                            induced = Some(u);
                            break;
                        }
                    }
                    match induced {
                        Some(u) if cat.is_iso(&u)? => {}
                        _ => {
                            stable = PropertyOutcome::Fails {
                                witness: format!(
                                    "pulled-back pieces of {} do not recompose to an isomorphism",
                                    d_arrow.id
                                ),
                            };
                            break 'sta;
                        }
                    }
                }
            }
        }
    }

    let empty_arrow_collapse = match &initial {
        None => PropertyOutcome::MissingData { detail: "no initial object".into() },
        Some(empty) => {
            let mut out = PropertyOutcome::Holds;
            for a in cat.arrows() {
                if a.dst == *empty && a.src != *empty {
                    let mut iso = false;
                    for f in cat.hom_set(&a.src, empty)? {
                        if cat.is_iso(&f)? {
                            iso = true;
                        }
                    }
                    if !iso {
                        out = PropertyOutcome::Fails {
                            witness: format!("{} maps into the initial object without collapsing", a.src),
                        };
                        break;
                    }
                }
            }
            out
        }
    };

    Ok(CoproductReport { disjoint, stable, empty_arrow_collapse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn walking_arrow_validates_with_three_morphisms() {
        let c = catalog::walking_arrow();
        assert_eq!(c.objects().len(), 2);
        assert_eq!(c.arrows().len(), 3);
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut raw = catalog::walking_arrow_raw();
        raw.compose.remove(&("f".to_string(), "id0".to_string()));
        match FinCategory::validate(raw) {
            Err(Error::MissingComposite { g, f }) => {
                assert_eq!((g.as_str(), f.as_str()), ("f", "id0"));
            }
            other => panic!("expected MissingComposite, got {other:?}"),
        }
    }

    #[test]
    fn broken_triple_is_nonassociative() {
        // chain x -f-> y -g-> z -h-> w with deliberately wrong h.(g.f)
        let mut raw = RawCategory::default();
        for o in ["w", "x", "y", "z"] {
            raw.objects.push(o.into());
            raw.arrows.push(Arrow::new(&format!("id_{o}"), o, o));
            raw.identities.insert(o.into(), format!("id_{o}"));
        }
        raw.arrows.push(Arrow::new("f", "x", "y"));
        raw.arrows.push(Arrow::new("g", "y", "z"));
        raw.arrows.push(Arrow::new("h", "z", "w"));
        raw.arrows.push(Arrow::new("gf", "x", "z"));
        raw.arrows.push(Arrow::new("hg", "y", "w"));
        raw.arrows.push(Arrow::new("hgf", "x", "w"));
        raw.arrows.push(Arrow::new("bad", "x", "w"));
        let pairs: &[(&str, &str, &str)] = &[
            ("g", "f", "gf"),
            ("h", "g", "hg"),
            ("h", "gf", "bad"), // should be hgf
            ("hg", "f", "hgf"),
        ];
        for (g, f, h) in pairs {
            raw.compose.insert(((*g).into(), (*f).into()), (*h).into());
        }
        for a in raw.arrows.clone() {
            raw.compose
                .entry((format!("id_{}", a.dst), a.id.clone()))
                .or_insert(a.id.clone());
            raw.compose
                .entry((a.id.clone(), format!("id_{}", a.src)))
                .or_insert(a.id.clone());
        }
        match FinCategory::validate(raw) {
            Err(Error::NonAssociative { .. }) => {}
            other => panic!("expected NonAssociative, got {other:?}"),
        }
    }

    #[test]
    fn hom_sets_on_walking_arrow() {
        let c = catalog::walking_arrow();
        assert_eq!(c.hom_set("0", "1").unwrap(), vec!["f".to_string()]);
        assert!(c.hom_set("1", "0").unwrap().is_empty());
        assert!(matches!(
            c.hom_set("2", "0"),
            Err(Error::UnknownObject { .. })
        ));
    }

    #[test]
    fn square_poset_has_unique_diagonal_hom() {
        let c = catalog::commutative_square();
        assert_eq!(c.hom_set("p", "t").unwrap().len(), 1);
    }

    #[test]
    fn overcategory_of_walking_arrow_at_one() {
        let c = catalog::walking_arrow();
        let (over, u) = overcategory(&c, "1").unwrap();
        assert_eq!(over.objects().len(), 2);
        let non_id: Vec<_> = over.arrows().iter().filter(|a| !over.is_identity(&a.id)).collect();
        assert_eq!(non_id.len(), 1);
        // U(f) = domain f
        assert_eq!(u.on_object("f").unwrap(), "0");
        assert_eq!(u.on_object("id1").unwrap(), "1");
    }

    #[test]
    fn overcategory_terminal_object_is_identity() {
        for c in [catalog::walking_arrow(), catalog::commutative_square(), catalog::coequalizer_category()] {
            for x in c.objects() {
                let (over, _) = overcategory(&c, x).unwrap();
                let terminals = over.terminal_objects();
                assert_eq!(terminals, vec![c.identity(x).unwrap().clone()]);
            }
        }
    }

    #[test]
    fn undercategory_of_identity_functor_at_initial_is_whole_category() {
        let c = catalog::walking_arrow();
        let (comma, _) = undercategory(&FinFunctor::identity(&c), "0").unwrap();
        assert_eq!(comma.objects().len(), 2);
        assert!(comma.is_connected());
    }

    #[test]
    fn undercategory_of_constant_functor_with_no_arrows_is_empty() {
        let c = catalog::discrete(&["a", "b"]);
        let star = catalog::terminal_category();
        let f = FinFunctor::constant(&star, &c, "a").unwrap();
        let (comma, _) = undercategory(&f, "b").unwrap();
        assert!(comma.objects().is_empty());
    }

    #[test]
    fn final_functor_examples() {
        let c = catalog::walking_arrow();
        let (over, _) = overcategory(&c, "1").unwrap();
        let star = catalog::terminal_category();
        // picking the terminal object id_1 is final
        let pick = FinFunctor::constant(&star, &over, "id1").unwrap();
        assert!(is_final_functor(&pick).unwrap());
        // a one-object inclusion into a discrete pair is not
        let d = catalog::discrete(&["a", "b"]);
        let incl = FinFunctor::constant(&star, &d, "a").unwrap();
        assert!(!is_final_functor(&incl).unwrap());
    }

    #[test]
    fn colimit_of_singleton_diagram_is_the_value() {
        let c = catalog::walking_arrow();
        let star = catalog::terminal_category();
        let d = FinFunctor::constant(&star, &c, "0").unwrap();
        match colim_by_universal_property(&d, DEFAULT_COLIMIT_GUARD).unwrap() {
            ColimitOutcome::Colimit { object, .. } => assert_eq!(object, "0"),
            other => panic!("expected colimit, got {other:?}"),
        }
    }

    #[test]
    fn colimit_over_maximal_sieve_is_the_apex() {
        for c in [catalog::walking_arrow(), catalog::commutative_square(), catalog::coequalizer_category()] {
            for x in c.objects() {
                let (_, u) = overcategory(&c, x).unwrap();
                match colim_by_universal_property(&u, DEFAULT_COLIMIT_GUARD).unwrap() {
                    ColimitOutcome::Colimit { object, .. } => assert_eq!(object, *x),
                    other => panic!("expected colimit at {x}, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn span_without_upper_bound_has_no_colimit() {
        // shape: a <- c -> b mapped into the discrete pair via collapse of c
        let span = catalog::span_poset();
        let d2 = catalog::discrete(&["a", "b"]);
        // no functor span -> discrete hits both a and b, so use a poset with
        // two incomparable maxima instead
        let amb = catalog::poset_category(&["a", "b", "c"], &[("c", "a"), ("c", "b")]);
        let obj: BTreeMap<_, _> = [("l", "a"), ("m", "c"), ("r", "b")]
            .into_iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        let mut mor = BTreeMap::new();
        mor.insert("m<l".to_string(), amb.hom_set("c", "a").unwrap()[0].clone());
        mor.insert("m<r".to_string(), amb.hom_set("c", "b").unwrap()[0].clone());
        for o in ["l", "m", "r"] {
            mor.insert(
                span.identity(o).unwrap().clone(),
                amb.identity(&obj[o]).unwrap().clone(),
            );
        }
        let d = FinFunctor::new(span.clone(), amb, obj, mor).unwrap();
        assert_eq!(
            colim_by_universal_property(&d, DEFAULT_COLIMIT_GUARD).unwrap(),
            ColimitOutcome::NoColimit
        );
        let _ = d2;
    }

    #[test]
    fn finality_transports_colimits() {
        // L: * -> (C down X) at id_X is final; colim over the sieve equals
        // colim of the restriction.
        let c = catalog::commutative_square();
        let (over, u) = overcategory(&c, "t").unwrap();
        let star = catalog::terminal_category();
        let pick = FinFunctor::constant(&star, &over, "idt").unwrap();
        assert!(is_final_functor(&pick).unwrap());
        let restricted = u.compose(&pick).unwrap();
        let a = colim_by_universal_property(&u, DEFAULT_COLIMIT_GUARD).unwrap();
        let b = colim_by_universal_property(&restricted, DEFAULT_COLIMIT_GUARD).unwrap();
        match (a, b) {
            (
                ColimitOutcome::Colimit { object: x, .. },
                ColimitOutcome::Colimit { object: y, .. },
            ) => assert_eq!(x, y),
            other => panic!("expected two colimits, got {other:?}"),
        }
    }

    #[test]
    fn composition_table_is_closed() {
        for c in [
            catalog::walking_arrow(),
            catalog::commutative_square(),
            catalog::parallel_pair(),
            catalog::coequalizer_category(),
        ] {
            for g in c.arrows() {
                for f in c.arrows() {
                    if f.dst == g.src {
                        let h = c.compose(&g.id, &f.id).unwrap();
                        assert!(c.arrow(&h).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn coproduct_properties_on_subset_poset() {
        // poset of subsets of {1,2}: joins of disjoint parts behave as unions
        let c = catalog::poset_category(
            &["0", "1", "2", "12"],
            &[("0", "1"), ("0", "2"), ("1", "12"), ("2", "12")],
        );
        let inst = CoproductInstance {
            parts: vec!["1".into(), "2".into()],
            total: "12".into(),
            inclusions: vec![
                c.hom_set("1", "12").unwrap()[0].clone(),
                c.hom_set("2", "12").unwrap()[0].clone(),
            ],
        };
        let report = check_coproduct_properties(&c, &[inst]).unwrap();
        assert!(report.disjoint.holds(), "{:?}", report.disjoint);
        assert!(report.stable.holds(), "{:?}", report.stable);
        assert!(report.empty_arrow_collapse.holds());
    }

    #[test]
    fn non_monic_inclusion_fails_disjointness() {
        // w ==> e -> t with the two parallel arrows equalized by the inclusion
        let mut raw = RawCategory::default();
        for o in ["e", "t", "w"] {
            raw.objects.push(o.into());
            raw.arrows.push(Arrow::new(&format!("id_{o}"), o, o));
            raw.identities.insert(o.into(), format!("id_{o}"));
        }
        raw.arrows.push(Arrow::new("u", "w", "e"));
        raw.arrows.push(Arrow::new("v", "w", "e"));
        raw.arrows.push(Arrow::new("i", "e", "t"));
        raw.arrows.push(Arrow::new("k", "w", "t"));
        raw.compose.insert(("i".into(), "u".into()), "k".into());
        raw.compose.insert(("i".into(), "v".into()), "k".into());
        for a in raw.arrows.clone() {
            raw.compose
                .entry((format!("id_{}", a.dst), a.id.clone()))
                .or_insert(a.id.clone());
            raw.compose
                .entry((a.id.clone(), format!("id_{}", a.src)))
                .or_insert(a.id.clone());
        }
        let c = FinCategory::validate(raw).unwrap();
        let inst = CoproductInstance {
            parts: vec!["e".into()],
            total: "t".into(),
            inclusions: vec!["i".into()],
        };
        let report = check_coproduct_properties(&c, &[inst]).unwrap();
        assert!(matches!(report.disjoint, PropertyOutcome::Fails { .. }));
    }

    #[test]
    fn finset_mirror_category_has_disjoint_stable_coproducts() {
        let c = catalog::finset_ambient_category(2);
        // designated coproduct: 1 + 1 = 2 with the two point inclusions
        let incs: Vec<MorId> = c
            .hom_set("1", "2")
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(incs.len(), 2);
        let inst = CoproductInstance {
            parts: vec!["1".into(), "1".into()],
            total: "2".into(),
            inclusions: incs,
        };
        let report = check_coproduct_properties(&c, &[inst]).unwrap();
        assert!(report.disjoint.holds(), "{:?}", report.disjoint);
        assert!(report.stable.holds(), "{:?}", report.stable);
    }

    #[test]
    fn chain_boundedness_detects_cycles() {
        assert!(catalog::walking_arrow().is_chain_bounded());
        assert!(catalog::commutative_square().is_chain_bounded());
        assert!(!catalog::walking_iso().is_chain_bounded());
    }
}
