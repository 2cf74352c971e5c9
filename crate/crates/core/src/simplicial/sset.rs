//! Truncated simplicial sets with explicit face/degeneracy tables, the
//! standard constructors (simplices, boundaries, nerves, products, discrete
//! sets, simplicial subsets), and simplicial maps.
//!
//! Every constructor checks the simplicial identities exhaustively up to the
//! truncation level, so anything that typechecks as an `SSet` is one.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId};

/// Default truncation dimension.
pub const DEFAULT_TRUNCATION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Level {
    pub ids: Vec<String>,
    pub index: BTreeMap<String, usize>,
    /// faces[i][k] = d_i of simplex k; present for levels >= 1, i in 0..=n
    pub faces: Vec<Vec<usize>>,
    /// degeneracies[i][k] = s_i of simplex k; present when n < trunc, i in 0..=n
    pub degeneracies: Vec<Vec<usize>>,
}

impl Level {
    pub(crate) fn new(mut ids: Vec<String>) -> Result<Self> {
        ids.sort();
        let before = ids.len();
        ids.dedup();
        if ids.len() != before {
            return Err(Error::Malformed { reason: "duplicate simplex id".into() });
        }
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Level { ids, index, faces: Vec::new(), degeneracies: Vec::new() })
    }
}

/// A simplicial set truncated at dimension `trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SSet {
    trunc: usize,
    levels: Vec<Level>,
}

/// Raw tables for building an SSet: per level the simplex ids, then
/// `faces[n]` maps each id of level n to its n+1 faces and
/// `degeneracies[n]` maps each id of level n to its n+1 degeneracies.
#[derive(Debug, Clone, Default)]
pub struct RawSSet {
    pub trunc: usize,
    pub simplices: Vec<Vec<String>>,
    pub faces: BTreeMap<usize, BTreeMap<String, Vec<String>>>,
    pub degeneracies: BTreeMap<usize, BTreeMap<String, Vec<String>>>,
}

impl SSet {
    pub fn new(raw: RawSSet) -> Result<SSet> {
        if raw.simplices.len() != raw.trunc + 1 {
            return Err(Error::Malformed { reason: "need one simplex list per level".into() });
        }
        let mut levels: Vec<Level> =
            raw.simplices.into_iter().map(Level::new).collect::<Result<_>>()?;
        for n in 1..=raw.trunc {
            let empty = BTreeMap::new();
            let table = raw.faces.get(&n).unwrap_or(&empty);
            let mut faces = vec![vec![0usize; levels[n].ids.len()]; n + 1];
            for (k, id) in levels[n].ids.iter().enumerate() {
                let row = table
                    .get(id)
                    .ok_or_else(|| Error::Malformed { reason: format!("missing faces of {id}") })?;
                if row.len() != n + 1 {
                    return Err(Error::Malformed { reason: format!("need {} faces of {id}", n + 1) });
                }
                for (i, target) in row.iter().enumerate() {
                    let t = levels[n - 1].index.get(target).copied().ok_or_else(|| {
                        Error::Malformed { reason: format!("face {target} of {id} unknown") }
                    })?;
                    faces[i][k] = t;
                }
            }
            levels[n].faces = faces;
        }
        for n in 0..raw.trunc {
            let empty = BTreeMap::new();
            let table = raw.degeneracies.get(&n).unwrap_or(&empty);
            let mut degeneracies = vec![vec![0usize; levels[n].ids.len()]; n + 1];
            for (k, id) in levels[n].ids.iter().enumerate() {
                let row = table.get(id).ok_or_else(|| Error::Malformed {
                    reason: format!("missing degeneracies of {id}"),
                })?;
                if row.len() != n + 1 {
                    return Err(Error::Malformed {
                        reason: format!("need {} degeneracies of {id}", n + 1),
                    });
                }
                for (i, target) in row.iter().enumerate() {
                    let t = levels[n + 1].index.get(target).copied().ok_or_else(|| {
                        Error::Malformed { reason: format!("degeneracy {target} of {id} unknown") }
                    })?;
                    degeneracies[i][k] = t;
                }
            }
            levels[n].degeneracies = degeneracies;
        }
        let sset = SSet { trunc: raw.trunc, levels };
        sset.check_identities()?;
        Ok(sset)
    }

    pub(crate) fn from_levels(trunc: usize, levels: Vec<Level>) -> Result<SSet> {
        let sset = SSet { trunc, levels };
        sset.check_identities()?;
        Ok(sset)
    }

    fn check_identities(&self) -> Result<()> {
        let fail = |what: &str| Error::Malformed { reason: format!("simplicial identity {what}") };
        for n in 2..=self.trunc {
            let l = &self.levels[n];
            let below = &self.levels[n - 1];
            for k in 0..l.ids.len() {
                for j in 1..=n {
                    for i in 0..j {
                        // d_i d_j = d_{j-1} d_i
                        if below.faces[i][l.faces[j][k]] != below.faces[j - 1][l.faces[i][k]] {
                            return Err(fail(&format!("d{i} d{j} at level {n}")));
                        }
                    }
                }
            }
        }
        for n in 0..self.trunc.saturating_sub(1) {
            let l = &self.levels[n];
            let above = &self.levels[n + 1];
            for k in 0..l.ids.len() {
                for j in 0..=n {
                    for i in 0..=j {
                        // s_i s_j = s_{j+1} s_i
                        if above.degeneracies[i][l.degeneracies[j][k]]
                            != above.degeneracies[j + 1][l.degeneracies[i][k]]
                        {
                            return Err(fail(&format!("s{i} s{j} at level {n}")));
                        }
                    }
                }
            }
        }
        for n in 0..self.trunc {
            let l = &self.levels[n];
            let above = &self.levels[n + 1];
            for k in 0..l.ids.len() {
                for j in 0..=n {
                    let sj = l.degeneracies[j][k];
                    for i in 0..=n + 1 {
                        let got = above.faces[i][sj];
                        if i == j || i == j + 1 {
                            if got != k {
                                return Err(fail(&format!("d{i} s{j} = id at level {n}")));
                            }
                        } else if i < j {
                            // d_i s_j = s_{j-1} d_i; both steps land a level down
                            let below = &self.levels[n - 1];
                            let expect = below.degeneracies[j - 1][l.faces[i][k]];
                            if got != expect {
                                return Err(fail(&format!("d{i} s{j} at level {n}")));
                            }
                        } else {
                            // i > j + 1: d_i s_j = s_j d_{i-1}
                            let below = &self.levels[n - 1];
                            let expect = below.degeneracies[j][l.faces[i - 1][k]];
                            if got != expect {
                                return Err(fail(&format!("d{i} s{j} at level {n}")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn simplices(&self, n: usize) -> &[String] {
        &self.levels[n].ids
    }

    pub fn size(&self, n: usize) -> usize {
        self.levels[n].ids.len()
    }

    pub fn index_of(&self, n: usize, id: &str) -> Result<usize> {
        self.levels[n]
            .index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Malformed { reason: format!("unknown {n}-simplex {id}") })
    }

    pub fn face(&self, n: usize, i: usize, k: usize) -> usize {
        self.levels[n].faces[i][k]
    }

    pub fn degeneracy(&self, n: usize, i: usize, k: usize) -> usize {
        self.levels[n].degeneracies[i][k]
    }

    /// Indices of the nondegenerate simplices at level n.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        if n == 0 {
            return (0..self.size(0)).collect();
        }
        let mut degenerate = vec![false; self.size(n)];
        for i in 0..n {
            for k in 0..self.size(n - 1) {
                degenerate[self.levels[n - 1].degeneracies[i][k]] = true;
            }
        }
        (0..self.size(n)).filter(|&k| !degenerate[k]).collect()
    }

    /// Applies the injective monotone operator that misses exactly the given
    /// indices (descending application).
    pub fn apply_missing(&self, n: usize, k: usize, missing_desc: &[usize]) -> (usize, usize) {
        let mut level = n;
        let mut cur = k;
        for &i in missing_desc {
            cur = self.levels[level].faces[i][cur];
            level -= 1;
        }
        (level, cur)
    }
}

/// A level-wise map of simplicial sets commuting with faces and degeneracies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SSet,
    target: SSet,
    /// levels[n][k] = index of the image of simplex k
    levels: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(source: SSet, target: SSet, levels: Vec<Vec<usize>>) -> Result<Self> {
        if source.trunc() != target.trunc() || levels.len() != source.trunc() + 1 {
            return Err(Error::Mismatch);
        }
        for n in 0..=source.trunc() {
            if levels[n].len() != source.size(n) {
                return Err(Error::Mismatch);
            }
            for &img in &levels[n] {
                if img >= target.size(n) {
                    return Err(Error::Malformed { reason: format!("image out of range at level {n}") });
                }
            }
        }
        for n in 1..=source.trunc() {
            for k in 0..source.size(n) {
                for i in 0..=n {
                    if target.face(n, i, levels[n][k]) != levels[n - 1][source.face(n, i, k)] {
                        return Err(Error::Malformed {
                            reason: format!("map does not commute with d{i} at level {n}"),
                        });
                    }
                }
            }
        }
        for n in 0..source.trunc() {
            for k in 0..source.size(n) {
                for i in 0..=n {
                    if target.degeneracy(n, i, levels[n][k]) != levels[n + 1][source.degeneracy(n, i, k)]
                    {
                        return Err(Error::Malformed {
                            reason: format!("map does not commute with s{i} at level {n}"),
                        });
                    }
                }
            }
        }
        Ok(SimplicialMap { source, target, levels })
    }

    pub fn from_ids(source: &SSet, target: &SSet, assignment: &BTreeMap<(usize, String), String>) -> Result<Self> {
        let mut levels = Vec::new();
        for n in 0..=source.trunc() {
            let mut row = Vec::with_capacity(source.size(n));
            for id in source.simplices(n) {
                let img = assignment
                    .get(&(n, id.clone()))
                    .ok_or_else(|| Error::Malformed { reason: format!("no image for {id}") })?;
                row.push(target.index_of(n, img)?);
            }
            levels.push(row);
        }
        SimplicialMap::new(source.clone(), target.clone(), levels)
    }

    pub fn identity(sset: &SSet) -> Self {
        let levels = (0..=sset.trunc()).map(|n| (0..sset.size(n)).collect()).collect();
        SimplicialMap { source: sset.clone(), target: sset.clone(), levels }
    }

    pub fn source(&self) -> &SSet {
        &self.source
    }

    pub fn target(&self) -> &SSet {
        &self.target
    }

    pub fn apply(&self, n: usize, k: usize) -> usize {
        self.levels[n][k]
    }

    /// self after earlier.
    pub fn compose(&self, earlier: &SimplicialMap) -> Result<SimplicialMap> {
        if earlier.target != self.source {
            return Err(Error::Mismatch);
        }
        let levels = (0..=self.source.trunc())
            .map(|n| earlier.levels[n].iter().map(|&k| self.levels[n][k]).collect())
            .collect();
        SimplicialMap::new(earlier.source.clone(), self.target.clone(), levels)
    }
}

fn monotone_id(values: &[usize]) -> String {
    let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    body.join(",")
}

/// All monotone maps [n] -> [k] as value vectors, in lexicographic order.
pub fn monotone_maps(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n + 1];
    loop {
        if cur.windows(2).all(|w| w[0] <= w[1]) && cur.iter().all(|&v| v <= k) {
            out.push(cur.clone());
        }
        let mut i = n + 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] <= k {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// The standard k-simplex truncated at `trunc`: level n is the monotone maps
/// [n] -> [k], written as comma-separated value strings.
pub fn standard_simplex(k: usize, trunc: usize) -> SSet {
    let mut levels = Vec::new();
    for n in 0..=trunc {
        levels.push(Level::new(monotone_maps(n, k).iter().map(|v| monotone_id(v)).collect()).unwrap());
    }
    for n in 1..=trunc {
        let mut faces = vec![vec![0usize; levels[n].ids.len()]; n + 1];
        for (idx, id) in levels[n].ids.iter().enumerate() {
            let values: Vec<usize> = id.split(',').map(|t| t.parse().unwrap()).collect();
            for i in 0..=n {
                let mut v = values.clone();
                v.remove(i);
                faces[i][idx] = levels[n - 1].index[&monotone_id(&v)];
            }
        }
        levels[n].faces = faces;
    }
    for n in 0..trunc {
        let mut degeneracies = vec![vec![0usize; levels[n].ids.len()]; n + 1];
        for (idx, id) in levels[n].ids.iter().enumerate() {
            let values: Vec<usize> = id.split(',').map(|t| t.parse().unwrap()).collect();
            for i in 0..=n {
                let mut v = values.clone();
                v.insert(i, values[i]);
                degeneracies[i][idx] = levels[n + 1].index[&monotone_id(&v)];
            }
        }
        levels[n].degeneracies = degeneracies;
    }
    SSet::from_levels(trunc, levels).expect("standard simplex satisfies the identities")
}

/// Semisimplicial input: nondegenerate simplices with faces only; the
/// constructor adjoins all formal degeneracies up to the truncation.
#[derive(Debug, Clone, Default)]
pub struct Semisimplicial {
    /// names per level; highest level may be below the truncation
    pub simplices: Vec<Vec<String>>,
    /// faces[n]["id"] = the n+1 face names at level n-1
    pub faces: BTreeMap<usize, BTreeMap<String, Vec<String>>>,
}

fn epi_id(base: &str, values: &[usize]) -> String {
    let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{base}^{}", body.join(","))
}

/// Surjective monotone maps [n] ->> [k] as value vectors.
fn epi_maps(n: usize, k: usize) -> Vec<Vec<usize>> {
    monotone_maps(n, k)
        .into_iter()
        .filter(|v| {
            let hit: BTreeSet<usize> = v.iter().copied().collect();
            hit.len() == k + 1
        })
        .collect()
}

fn epi_mono_factor(values: &[usize]) -> (Vec<usize>, Vec<usize>) {
    // monotone values = mono part (the sorted distinct values) after the epi
    // part (values renumbered onto 0..d)
    let mut distinct: Vec<usize> = values.to_vec();
    distinct.dedup();
    let renumber: BTreeMap<usize, usize> =
        distinct.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let epi: Vec<usize> = values.iter().map(|v| renumber[v]).collect();
    (epi, distinct)
}

/// Builds the simplicial set generated by semisimplicial data: every simplex
/// at level n is a pair (nondegenerate base y at level k, epi [n] ->> [k]),
/// and the structure maps act by Eilenberg-Zilber normalization.
pub fn from_semisimplicial(semi: &Semisimplicial, trunc: usize) -> Result<SSet> {
    let depth = semi.simplices.len();
    for n in 1..depth {
        for id in &semi.simplices[n] {
            let row = semi
                .faces
                .get(&n)
                .and_then(|t| t.get(id))
                .ok_or_else(|| Error::Malformed { reason: format!("missing faces of {id}") })?;
            if row.len() != n + 1 {
                return Err(Error::Malformed { reason: format!("need {} faces of {id}", n + 1) });
            }
            for f in row {
                if !semi.simplices[n - 1].contains(f) {
                    return Err(Error::Malformed { reason: format!("face {f} of {id} unknown") });
                }
            }
        }
    }

    // simplex at level n: (base level k, base name, epi values [n]->[k])
    type Key = (usize, String, Vec<usize>);
    let mut level_keys: Vec<Vec<Key>> = Vec::new();
    for n in 0..=trunc {
        let mut keys = Vec::new();
        for k in 0..depth.min(n + 1) {
            for base in &semi.simplices[k] {
                for epi in epi_maps(n, k) {
                    keys.push((k, base.clone(), epi));
                }
            }
        }
        keys.sort();
        level_keys.push(keys);
    }

    let name_of = |key: &Key| -> String {
        let (k, base, epi) = key;
        let identity: Vec<usize> = (0..=*k).collect();
        if *epi == identity {
            base.clone()
        } else {
            epi_id(base, epi)
        }
    };

    // face of a base simplex along an injective monotone map (missing values)
    let base_face = |mut level: usize, name: &str, missing_desc: &[usize]| -> String {
        let mut cur = name.to_string();
        for &i in missing_desc {
            cur = semi.faces[&level][&cur][i].clone();
            level -= 1;
        }
        cur
    };

    let mut levels: Vec<Level> = level_keys
        .iter()
        .map(|keys| Level::new(keys.iter().map(name_of).collect()))
        .collect::<Result<_>>()?;

    // operator action: compose the epi with delta_i / sigma_i and renormalize
    let act = |key: &Key, new_values: Vec<usize>| -> Key {
        let (k, base, _) = key;
        let (epi, mono) = epi_mono_factor(&new_values);
        if mono.len() == k + 1 {
            (*k, base.clone(), epi)
        } else {
            let missing: Vec<usize> =
                (0..=*k).rev().filter(|i| !mono.contains(i)).collect();
            let new_level = mono.len() - 1;
            let face = base_face(*k, base, &missing);
            (new_level, face, epi)
        }
    };

    for n in 1..=trunc {
        let mut faces = vec![vec![0usize; level_keys[n].len()]; n + 1];
        for (idx, key) in level_keys[n].iter().enumerate() {
            for i in 0..=n {
                let mut v = key.2.clone();
                v.remove(i);
                let target = act(key, v);
                faces[i][idx] = levels[n - 1].index[&name_of(&target)];
            }
        }
        levels[n].faces = faces;
    }
    for n in 0..trunc {
        let mut degeneracies = vec![vec![0usize; level_keys[n].len()]; n + 1];
        for (idx, key) in level_keys[n].iter().enumerate() {
            for i in 0..=n {
                let mut v = key.2.clone();
                v.insert(i, key.2[i]);
                // still an epi; no renormalization needed
                degeneracies[i][idx] = levels[n + 1].index[&name_of(&(key.0, key.1.clone(), v))];
            }
        }
        levels[n].degeneracies = degeneracies;
    }
    SSet::from_levels(trunc, levels)
}

/// Boundary of the standard k-simplex: the subcomplex of non-surjective
/// monotone maps.
pub fn boundary_simplex(k: usize, trunc: usize) -> SSet {
    let full = standard_simplex(k, trunc);
    let generators: Vec<(usize, String)> = (0..=trunc)
        .flat_map(|n| {
            full.simplices(n)
                .iter()
                .filter(|id| {
                    let hit: BTreeSet<&str> = id.split(',').collect();
                    hit.len() < k + 1
                })
                .map(move |id| (n, id.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    sub_sset(&full, &generators).expect("boundary is a simplicial subset").0
}

/// The circle with two vertices and two nondegenerate edges.
pub fn circle(trunc: usize) -> SSet {
    let mut semi = Semisimplicial::default();
    semi.simplices = vec![vec!["a".into(), "b".into()], vec!["e0".into(), "e1".into()]];
    let mut f1 = BTreeMap::new();
    f1.insert("e0".to_string(), vec!["b".to_string(), "a".to_string()]);
    f1.insert("e1".to_string(), vec!["a".to_string(), "b".to_string()]);
    semi.faces.insert(1, f1);
    from_semisimplicial(&semi, trunc).expect("circle data is semisimplicial")
}

/// The discrete simplicial set on a label set: only degenerate simplices
/// above level zero.
pub fn discrete_sset(labels: &[&str], trunc: usize) -> SSet {
    let mut semi = Semisimplicial::default();
    semi.simplices = vec![labels.iter().map(|s| s.to_string()).collect()];
    from_semisimplicial(&semi, trunc).expect("discrete data is semisimplicial")
}

/// Levelwise product, ids "(x|y)".
pub fn product(x: &SSet, y: &SSet) -> Result<(SSet, SimplicialMap, SimplicialMap)> {
    if x.trunc() != y.trunc() {
        return Err(Error::Mismatch);
    }
    let trunc = x.trunc();
    let mut levels = Vec::new();
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut lookup: Vec<BTreeMap<(usize, usize), usize>> = Vec::new();
    for n in 0..=trunc {
        let mut ids = Vec::new();
        let mut level_pairs = Vec::new();
        for (i, a) in x.simplices(n).iter().enumerate() {
            for (j, b) in y.simplices(n).iter().enumerate() {
                ids.push(format!("({a}|{b})"));
                level_pairs.push((i, j));
            }
        }
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&p, &q| ids[p].cmp(&ids[q]));
        let ids_sorted: Vec<String> = order.iter().map(|&p| ids[p].clone()).collect();
        let pairs_sorted: Vec<(usize, usize)> = order.iter().map(|&p| level_pairs[p]).collect();
        lookup.push(pairs_sorted.iter().enumerate().map(|(k, &pq)| (pq, k)).collect());
        levels.push(Level::new(ids_sorted)?);
        pairs.push(pairs_sorted);
    }
    for n in 1..=trunc {
        let mut faces = vec![vec![0usize; pairs[n].len()]; n + 1];
        for (k, &(i, j)) in pairs[n].iter().enumerate() {
            for d in 0..=n {
                faces[d][k] = lookup[n - 1][&(x.face(n, d, i), y.face(n, d, j))];
            }
        }
        levels[n].faces = faces;
    }
    for n in 0..trunc {
        let mut degeneracies = vec![vec![0usize; pairs[n].len()]; n + 1];
        for (k, &(i, j)) in pairs[n].iter().enumerate() {
            for d in 0..=n {
                degeneracies[d][k] =
                    lookup[n + 1][&(x.degeneracy(n, d, i), y.degeneracy(n, d, j))];
            }
        }
        levels[n].degeneracies = degeneracies;
    }
    let product_levels: Vec<Vec<(usize, usize)>> = pairs.clone();
    let sset = SSet::from_levels(trunc, levels)?;
    let proj1 = SimplicialMap::new(
        sset.clone(),
        x.clone(),
        product_levels.iter().map(|lp| lp.iter().map(|&(i, _)| i).collect()).collect(),
    )?;
    let proj2 = SimplicialMap::new(
        sset.clone(),
        y.clone(),
        product_levels.iter().map(|lp| lp.iter().map(|&(_, j)| j).collect()).collect(),
    )?;
    Ok((sset, proj1, proj2))
}

/// The simplicial subset generated by the given simplices: closed downward
/// under faces and upward under degeneracies, with its inclusion map.
pub fn sub_sset(parent: &SSet, generators: &[(usize, String)]) -> Result<(SSet, SimplicialMap)> {
    let mut chosen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); parent.trunc() + 1];
    for (n, id) in generators {
        if *n > parent.trunc() {
            return Err(Error::Malformed { reason: format!("level {n} beyond truncation") });
        }
        chosen[*n].insert(parent.index_of(*n, id)?);
    }
    // closure
    loop {
        let mut changed = false;
        for n in 1..=parent.trunc() {
            let current: Vec<usize> = chosen[n].iter().copied().collect();
            for k in current {
                for i in 0..=n {
                    if chosen[n - 1].insert(parent.face(n, i, k)) {
                        changed = true;
                    }
                }
            }
        }
        for n in 0..parent.trunc() {
            let current: Vec<usize> = chosen[n].iter().copied().collect();
            for k in current {
                for i in 0..=n {
                    if chosen[n + 1].insert(parent.degeneracy(n, i, k)) {
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    materialize_subset(parent, &chosen)
}

pub(crate) fn materialize_subset(
    parent: &SSet,
    chosen: &[BTreeSet<usize>],
) -> Result<(SSet, SimplicialMap)> {
    let mut levels = Vec::new();
    let mut reindex: Vec<BTreeMap<usize, usize>> = Vec::new();
    for n in 0..=parent.trunc() {
        let ids: Vec<String> =
            chosen[n].iter().map(|&k| parent.simplices(n)[k].clone()).collect();
        let level = Level::new(ids)?;
        // parent index -> new index (ids sorted, chosen is sorted, and parent
        // ids at chosen indices are sorted already since parent ids are)
        let map: BTreeMap<usize, usize> =
            chosen[n].iter().enumerate().map(|(new, &old)| (old, new)).collect();
        reindex.push(map);
        levels.push(level);
    }
    for n in 1..=parent.trunc() {
        let keys: Vec<usize> = chosen[n].iter().copied().collect();
        let mut faces = vec![vec![0usize; keys.len()]; n + 1];
        for (new_k, &old_k) in keys.iter().enumerate() {
            for i in 0..=n {
                let old_face = parent.face(n, i, old_k);
                let new_face = reindex[n - 1].get(&old_face).copied().ok_or_else(|| {
                    Error::NotSubobject {
                        part: 0,
                        simplex: parent.simplices(n)[old_k].clone(),
                    }
                })?;
                faces[i][new_k] = new_face;
            }
        }
        levels[n].faces = faces;
    }
    for n in 0..parent.trunc() {
        let keys: Vec<usize> = chosen[n].iter().copied().collect();
        let mut degeneracies = vec![vec![0usize; keys.len()]; n + 1];
        for (new_k, &old_k) in keys.iter().enumerate() {
            for i in 0..=n {
                let old_deg = parent.degeneracy(n, i, old_k);
                let new_deg = reindex[n + 1].get(&old_deg).copied().ok_or_else(|| {
                    Error::NotSubobject {
                        part: 0,
                        simplex: parent.simplices(n)[old_k].clone(),
                    }
                })?;
                degeneracies[i][new_k] = new_deg;
            }
        }
        levels[n].degeneracies = degeneracies;
    }
    let sub = SSet::from_levels(parent.trunc(), levels)?;
    let inclusion_levels: Vec<Vec<usize>> =
        chosen.iter().map(|set| set.iter().copied().collect()).collect();
    let inclusion = SimplicialMap::new(sub.clone(), parent.clone(), inclusion_levels)?;
    Ok((sub, inclusion))
}

/// Intersection of two simplicial subsets of the same parent, as id sets.
pub fn intersect_subsets(
    parent: &SSet,
    a: &SimplicialMap,
    b: &SimplicialMap,
) -> Result<(SSet, SimplicialMap)> {
    let mut chosen: Vec<BTreeSet<usize>> = Vec::new();
    for n in 0..=parent.trunc() {
        let ia: BTreeSet<usize> = (0..a.source().size(n)).map(|k| a.apply(n, k)).collect();
        let ib: BTreeSet<usize> = (0..b.source().size(n)).map(|k| b.apply(n, k)).collect();
        chosen.push(ia.intersection(&ib).copied().collect());
    }
    materialize_subset(parent, &chosen)
}

/// The nerve of a finite category, truncated: level n is the set of length-n
/// composable strings (identities allowed).
pub fn nerve(cat: &FinCategory, trunc: usize) -> Result<SSet> {
    // strings g1, ..., gn with g_i: a_{i-1} -> a_i; level 0 = objects
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct ChainRep {
        start: ObjId,
        arrows: Vec<MorId>,
    }
    let chain_id = |c: &ChainRep| -> String {
        if c.arrows.is_empty() {
            c.start.clone()
        } else {
            c.arrows.join(",")
        }
    };
    let mut per_level: Vec<Vec<ChainRep>> = Vec::new();
    per_level.push(
        cat.objects()
            .iter()
            .map(|o| ChainRep { start: o.clone(), arrows: Vec::new() })
            .collect(),
    );
    for n in 1..=trunc {
        let mut next = Vec::new();
        for c in &per_level[n - 1] {
            let tail = if c.arrows.is_empty() {
                c.start.clone()
            } else {
                cat.dst(c.arrows.last().unwrap())?.clone()
            };
            for g in cat.arrows() {
                if g.src == tail {
                    let mut arrows = c.arrows.clone();
                    arrows.push(g.id.clone());
                    next.push(ChainRep { start: c.start.clone(), arrows });
                }
            }
        }
        next.sort();
        per_level.push(next);
    }

    let mut levels: Vec<Level> = per_level
        .iter()
        .map(|chains| Level::new(chains.iter().map(&chain_id).collect()))
        .collect::<Result<_>>()?;

    for n in 1..=trunc {
        let mut faces = vec![vec![0usize; per_level[n].len()]; n + 1];
        for (k, c) in per_level[n].iter().enumerate() {
            for i in 0..=n {
                let target = if i == 0 {
                    ChainRep {
                        start: cat.dst(&c.arrows[0])?.clone(),
                        arrows: c.arrows[1..].to_vec(),
                    }
                } else if i == n {
                    ChainRep { start: c.start.clone(), arrows: c.arrows[..n - 1].to_vec() }
                } else {
                    let mut arrows = c.arrows.clone();
                    let composite = cat.compose(&arrows[i], &arrows[i - 1])?;
                    arrows[i - 1] = composite;
                    arrows.remove(i);
                    ChainRep { start: c.start.clone(), arrows }
                };
                faces[i][k] = levels[n - 1].index[&chain_id(&target)];
            }
        }
        levels[n].faces = faces;
    }
    for n in 0..trunc {
        let mut degeneracies = vec![vec![0usize; per_level[n].len()]; n + 1];
        for (k, c) in per_level[n].iter().enumerate() {
            for i in 0..=n {
                let at = if i == 0 {
                    c.start.clone()
                } else {
                    cat.dst(&c.arrows[i - 1])?.clone()
                };
                let mut arrows = c.arrows.clone();
                arrows.insert(i, cat.identity(&at)?.clone());
                let target = ChainRep { start: c.start.clone(), arrows };
                degeneracies[i][k] = levels[n + 1].index[&chain_id(&target)];
            }
        }
        levels[n].degeneracies = degeneracies;
    }
    SSet::from_levels(trunc, levels)
}
