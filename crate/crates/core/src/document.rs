//! JSON document schemas for every value the command line reads or writes,
//! with conversions to and from the validated in-memory types.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Arrow, FinCategory, FinFunctor, NatTrans, RawCategory};
use crate::finset::{FinSetObject, SetFunction};
use crate::homology::HomologyGroups;
use crate::sieves::{ExplicitSieve, GeneratedSieve};
use crate::simplicial::{RawSSet, SSet, SSetDiagram, SimplicialMap};
use crate::topology::Presheaf;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// {"objects": [...], "morphisms": [{"id","src","dst"}...],
///  "identities": {obj: mor}, "compose": {"g,f": "h"}}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: BTreeMap<String, String>,
    pub compose: BTreeMap<String, String>,
}

impl CategoryDoc {
    pub fn to_category(&self) -> Result<FinCategory> {
        let mut raw = RawCategory {
            objects: self.objects.clone(),
            identities: self.identities.clone(),
            ..Default::default()
        };
        for m in &self.morphisms {
            raw.arrows.push(Arrow::new(&m.id, &m.src, &m.dst));
        }
        for (key, h) in &self.compose {
            let (g, f) = key
                .split_once(',')
                .ok_or_else(|| Error::Malformed { reason: format!("compose key {key}") })?;
            raw.compose.insert((g.to_string(), f.to_string()), h.clone());
        }
        FinCategory::validate(raw)
    }

    pub fn from_category(cat: &FinCategory) -> Self {
        CategoryDoc {
            objects: cat.objects().to_vec(),
            morphisms: cat
                .arrows()
                .iter()
                .map(|a| MorphismDoc { id: a.id.clone(), src: a.src.clone(), dst: a.dst.clone() })
                .collect(),
            identities: cat
                .objects()
                .iter()
                .map(|o| (o.clone(), cat.identity(o).unwrap().clone()))
                .collect(),
            compose: cat
                .arrows()
                .iter()
                .flat_map(|g| {
                    cat.arrows().iter().filter_map(|f| {
                        if f.dst == g.src {
                            Some((
                                format!("{},{}", g.id, f.id),
                                cat.compose(&g.id, &f.id).unwrap(),
                            ))
                        } else {
                            None
                        }
                    })
                })
                .collect(),
        }
    }
}

/// {"elements": [...]}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetDoc {
    pub elements: Vec<String>,
}

impl SetDoc {
    pub fn to_set(&self) -> Result<FinSetObject> {
        FinSetObject::new(self.elements.clone())
    }

    pub fn from_set(s: &FinSetObject) -> Self {
        SetDoc { elements: s.elements().to_vec() }
    }
}

/// {"dom": {...}, "cod": {...}, "map": {a: b}}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub dom: SetDoc,
    pub cod: SetDoc,
    pub map: BTreeMap<String, String>,
}

impl FunctionDoc {
    pub fn to_function(&self) -> Result<SetFunction> {
        SetFunction::new(self.dom.to_set()?, self.cod.to_set()?, self.map.clone())
    }

    pub fn from_function(f: &SetFunction) -> Self {
        FunctionDoc {
            dom: SetDoc::from_set(f.domain()),
            cod: SetDoc::from_set(f.codomain()),
            map: f.mapping().clone(),
        }
    }
}

/// Explicit form: {"apex": "X", "morphisms": [ids]} against a category file.
/// Generated form: {"apex": {...}, "generators": [function docs]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SieveDoc {
    Explicit { apex: String, morphisms: Vec<String> },
    Generated { apex: SetDoc, generators: Vec<FunctionDoc> },
}

impl SieveDoc {
    pub fn to_explicit(&self, cat: &FinCategory) -> Result<ExplicitSieve> {
        match self {
            SieveDoc::Explicit { apex, morphisms } => {
                ExplicitSieve::new(cat, apex, morphisms.iter().cloned().collect())
            }
            SieveDoc::Generated { .. } => {
                Err(Error::Malformed { reason: "expected an explicit sieve document".into() })
            }
        }
    }

    pub fn to_generated(&self) -> Result<GeneratedSieve> {
        match self {
            SieveDoc::Generated { apex, generators } => GeneratedSieve::new(
                apex.to_set()?,
                generators.iter().map(|g| g.to_function()).collect::<Result<_>>()?,
            ),
            SieveDoc::Explicit { .. } => {
                Err(Error::Malformed { reason: "expected a generated sieve document".into() })
            }
        }
    }
}

/// {"covers": {obj: [sieve docs]}}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub covers: BTreeMap<String, Vec<SieveDoc>>,
}

/// {"values": {obj: set doc}, "maps": {mor: {elem: elem}}}; maps are stored
/// contravariantly: the entry for m: A -> B maps F(B) to F(A).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresheafDoc {
    pub values: BTreeMap<String, SetDoc>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl PresheafDoc {
    pub fn to_presheaf(&self, cat: &FinCategory) -> Result<Presheaf> {
        let values: BTreeMap<String, FinSetObject> = self
            .values
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.to_set()?)))
            .collect::<Result<_>>()?;
        let mut maps = BTreeMap::new();
        for a in cat.arrows() {
            let table = self
                .maps
                .get(&a.id)
                .ok_or_else(|| Error::Malformed { reason: format!("missing map for {}", a.id) })?;
            let dom = values
                .get(&a.dst)
                .ok_or_else(|| Error::UnknownObject { object: a.dst.clone() })?;
            let cod = values
                .get(&a.src)
                .ok_or_else(|| Error::UnknownObject { object: a.src.clone() })?;
            maps.insert(a.id.clone(), SetFunction::new(dom.clone(), cod.clone(), table.clone())?);
        }
        Presheaf::new(cat, values, maps)
    }
}

/// {"dim": N, "simplices": {"n": [ids]}, "faces": {"n": {id: [faces]}},
///  "degeneracies": {"n": {id: [degeneracies]}}}. When the degeneracy table
/// is absent the document is treated as semisimplicial data and completed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SSetDoc {
    pub dim: usize,
    pub simplices: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub faces: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    pub degeneracies: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

impl SSetDoc {
    fn level_tables<T: Clone>(table: &BTreeMap<String, T>) -> Result<BTreeMap<usize, T>> {
        table
            .iter()
            .map(|(k, v)| {
                let n: usize = k
                    .parse()
                    .map_err(|_| Error::Malformed { reason: format!("level key {k}") })?;
                Ok((n, v.clone()))
            })
            .collect()
    }

    pub fn to_sset(&self) -> Result<SSet> {
        let levels = Self::level_tables(&self.simplices)?;
        if self.degeneracies.is_empty() {
            // semisimplicial completion
            let mut semi = crate::simplicial::Semisimplicial::default();
            let depth = levels.keys().max().map(|&n| n + 1).unwrap_or(0);
            for n in 0..depth {
                semi.simplices.push(levels.get(&n).cloned().unwrap_or_default());
            }
            for (n, table) in Self::level_tables(&self.faces)? {
                semi.faces.insert(n, table);
            }
            return crate::simplicial::from_semisimplicial(&semi, self.dim);
        }
        let mut raw = RawSSet { trunc: self.dim, ..Default::default() };
        for n in 0..=self.dim {
            raw.simplices.push(levels.get(&n).cloned().unwrap_or_default());
        }
        raw.faces = Self::level_tables(&self.faces)?;
        raw.degeneracies = Self::level_tables(&self.degeneracies)?;
        SSet::new(raw)
    }

    pub fn from_sset(x: &SSet) -> Self {
        let mut simplices = BTreeMap::new();
        let mut faces = BTreeMap::new();
        let mut degeneracies = BTreeMap::new();
        for n in 0..=x.trunc() {
            simplices.insert(n.to_string(), x.simplices(n).to_vec());
            if n > 0 {
                let table: BTreeMap<String, Vec<String>> = x
                    .simplices(n)
                    .iter()
                    .enumerate()
                    .map(|(k, id)| {
                        let row = (0..=n)
                            .map(|i| x.simplices(n - 1)[x.face(n, i, k)].clone())
                            .collect();
                        (id.clone(), row)
                    })
                    .collect();
                faces.insert(n.to_string(), table);
            }
            if n < x.trunc() {
                let table: BTreeMap<String, Vec<String>> = x
                    .simplices(n)
                    .iter()
                    .enumerate()
                    .map(|(k, id)| {
                        let row = (0..=n)
                            .map(|i| x.simplices(n + 1)[x.degeneracy(n, i, k)].clone())
                            .collect();
                        (id.clone(), row)
                    })
                    .collect();
                degeneracies.insert(n.to_string(), table);
            }
        }
        SSetDoc { dim: x.trunc(), simplices, faces, degeneracies }
    }
}

/// {"space": sset doc, "parts": [[["n", "id"], ...], ...]}: each part lists
/// generating simplices as (level, id) pairs; closure is computed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverDoc {
    pub space: SSetDoc,
    pub parts: Vec<Vec<(usize, String)>>,
}

/// A reference to a category: inline document or a file path.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryRef {
    Path(String),
    Inline(CategoryDoc),
}

impl CategoryRef {
    pub fn load(&self) -> Result<FinCategory> {
        match self {
            CategoryRef::Inline(doc) => doc.to_category(),
            CategoryRef::Path(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Malformed { reason: format!("{path}: {e}") })?;
                let doc: CategoryDoc = serde_json::from_str(&text)
                    .map_err(|e| Error::Malformed { reason: format!("{path}: {e}") })?;
                doc.to_category()
            }
        }
    }
}

/// {"source": cat ref, "target": cat ref, "objects": {...}, "morphisms": {...}}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub source: CategoryRef,
    pub target: CategoryRef,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

impl FunctorDoc {
    pub fn to_functor(&self) -> Result<FinFunctor> {
        FinFunctor::new(
            self.source.load()?,
            self.target.load()?,
            self.objects.clone(),
            self.morphisms.clone(),
        )
    }
}

/// {"components": {obj: mor}} between two functor documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NatTransDoc {
    pub components: BTreeMap<String, String>,
}

impl NatTransDoc {
    pub fn to_nat_trans(&self, source: FinFunctor, target: FinFunctor) -> Result<NatTrans> {
        NatTrans::new(source, target, self.components.clone())
    }
}

/// {"shape": category doc, "objects": {obj: sset doc},
///  "maps": {mor: {"n": {id: id}}}}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SSetDiagramDoc {
    pub shape: CategoryDoc,
    pub objects: BTreeMap<String, SSetDoc>,
    pub maps: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

impl SSetDiagramDoc {
    pub fn to_diagram(&self) -> Result<SSetDiagram> {
        let shape = self.shape.to_category()?;
        let objects: BTreeMap<String, SSet> = self
            .objects
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.to_sset()?)))
            .collect::<Result<_>>()?;
        let mut maps = BTreeMap::new();
        for a in shape.arrows() {
            let src = objects
                .get(&a.src)
                .ok_or_else(|| Error::UnknownObject { object: a.src.clone() })?;
            let dst = objects
                .get(&a.dst)
                .ok_or_else(|| Error::UnknownObject { object: a.dst.clone() })?;
            if shape.is_identity(&a.id) && !self.maps.contains_key(&a.id) {
                maps.insert(a.id.clone(), SimplicialMap::identity(src));
                continue;
            }
            let table = self
                .maps
                .get(&a.id)
                .ok_or_else(|| Error::Malformed { reason: format!("missing map for {}", a.id) })?;
            let mut assignment = BTreeMap::new();
            for (level_key, rows) in table {
                let n: usize = level_key
                    .parse()
                    .map_err(|_| Error::Malformed { reason: format!("level key {level_key}") })?;
                for (from, to) in rows {
                    assignment.insert((n, from.clone()), to.clone());
                }
            }
            maps.insert(a.id.clone(), SimplicialMap::from_ids(src, dst, &assignment)?);
        }
        SSetDiagram::new(shape, objects, maps)
    }
}

/// One row of a homology report:
/// {"degree": n, "betti": b, "torsion": [...], "valid_range": [0, k]}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomologyRow {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<String>,
    pub valid_range: (usize, usize),
}

pub fn homology_rows(h: &HomologyGroups) -> Vec<HomologyRow> {
    h.groups
        .iter()
        .map(|g| HomologyRow {
            degree: g.degree,
            betti: g.betti,
            torsion: g.torsion.iter().map(|t| t.to_string()).collect(),
            valid_range: (0, h.valid_through),
        })
        .collect()
}
