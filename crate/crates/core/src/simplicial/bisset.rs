//! Bisimplicial sets: doubly indexed levels with commuting horizontal and
//! vertical simplicial structure, maps between them, and the diagonal.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::sset::{Level as SLevel, SSet, SimplicialMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BiLevel {
    pub ids: Vec<String>,
    pub index: BTreeMap<String, usize>,
    /// h_faces[i][k]: (n, m) -> (n-1, m), i in 0..=n
    pub h_faces: Vec<Vec<usize>>,
    /// v_faces[i][k]: (n, m) -> (n, m-1), i in 0..=m
    pub v_faces: Vec<Vec<usize>>,
    /// h_degeneracies[i][k]: (n, m) -> (n+1, m)
    pub h_degeneracies: Vec<Vec<usize>>,
    /// v_degeneracies[i][k]: (n, m) -> (n, m+1)
    pub v_degeneracies: Vec<Vec<usize>>,
}

impl BiLevel {
    pub(crate) fn new(mut ids: Vec<String>) -> Result<Self> {
        ids.sort();
        let before = ids.len();
        ids.dedup();
        if ids.len() != before {
            return Err(Error::Malformed { reason: "duplicate bisimplex id".into() });
        }
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(BiLevel {
            ids,
            index,
            h_faces: Vec::new(),
            v_faces: Vec::new(),
            h_degeneracies: Vec::new(),
            v_degeneracies: Vec::new(),
        })
    }
}

/// A bisimplicial set truncated at `trunc` in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSSet {
    trunc: usize,
    pub(crate) levels: BTreeMap<(usize, usize), BiLevel>,
}

impl BiSSet {
    pub(crate) fn assemble(trunc: usize, levels: BTreeMap<(usize, usize), BiLevel>) -> Result<Self> {
        let b = BiSSet { trunc, levels };
        b.check()?;
        Ok(b)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn size(&self, n: usize, m: usize) -> usize {
        self.levels[&(n, m)].ids.len()
    }

    pub fn ids(&self, n: usize, m: usize) -> &[String] {
        &self.levels[&(n, m)].ids
    }

    pub fn h_face(&self, n: usize, m: usize, i: usize, k: usize) -> usize {
        self.levels[&(n, m)].h_faces[i][k]
    }

    pub fn v_face(&self, n: usize, m: usize, i: usize, k: usize) -> usize {
        self.levels[&(n, m)].v_faces[i][k]
    }

    pub fn h_degeneracy(&self, n: usize, m: usize, i: usize, k: usize) -> usize {
        self.levels[&(n, m)].h_degeneracies[i][k]
    }

    pub fn v_degeneracy(&self, n: usize, m: usize, i: usize, k: usize) -> usize {
        self.levels[&(n, m)].v_degeneracies[i][k]
    }

    fn check(&self) -> Result<()> {
        let fail = |what: String| Error::Malformed { reason: format!("bisimplicial identity {what}") };
        for n in 0..=self.trunc {
            for m in 0..=self.trunc {
                let l = &self.levels[&(n, m)];
                if l.h_faces.len() != if n > 0 { n + 1 } else { 0 }
                    || l.v_faces.len() != if m > 0 { m + 1 } else { 0 }
                    || l.h_degeneracies.len() != if n < self.trunc { n + 1 } else { 0 }
                    || l.v_degeneracies.len() != if m < self.trunc { m + 1 } else { 0 }
                {
                    return Err(fail(format!("table shapes at ({n},{m})")));
                }
            }
        }
        // horizontal simplicial identities at fixed m, vertical at fixed n
        for m in 0..=self.trunc {
            self.check_one_direction(|n, i, k| self.h_face(n, m, i, k), |n, i, k| self.h_degeneracy(n, m, i, k), |n| self.size(n, m))
                .map_err(|e| match e {
                    Error::Malformed { reason } => fail(format!("horizontal at m={m}: {reason}")),
                    other => other,
                })?;
        }
        for n in 0..=self.trunc {
            self.check_one_direction(|m, i, k| self.v_face(n, m, i, k), |m, i, k| self.v_degeneracy(n, m, i, k), |m| self.size(n, m))
                .map_err(|e| match e {
                    Error::Malformed { reason } => fail(format!("vertical at n={n}: {reason}")),
                    other => other,
                })?;
        }
        // the two directions commute
        for n in 1..=self.trunc {
            for m in 1..=self.trunc {
                for k in 0..self.size(n, m) {
                    for i in 0..=n {
                        for j in 0..=m {
                            let hv = self.v_face(n - 1, m, j, self.h_face(n, m, i, k));
                            let vh = self.h_face(n, m - 1, i, self.v_face(n, m, j, k));
                            if hv != vh {
                                return Err(fail(format!("dh{i} dv{j} at ({n},{m})")));
                            }
                        }
                    }
                }
            }
        }
        for n in 0..self.trunc {
            for m in 0..self.trunc {
                for k in 0..self.size(n, m) {
                    for i in 0..=n {
                        for j in 0..=m {
                            let hv = self.v_degeneracy(n + 1, m, j, self.h_degeneracy(n, m, i, k));
                            let vh = self.h_degeneracy(n, m + 1, i, self.v_degeneracy(n, m, j, k));
                            if hv != vh {
                                return Err(fail(format!("sh{i} sv{j} at ({n},{m})")));
                            }
                        }
                    }
                }
            }
        }
        // mixed face/degeneracy commutation
        for n in 1..=self.trunc {
            for m in 0..self.trunc {
                for k in 0..self.size(n, m) {
                    for i in 0..=n {
                        for j in 0..=m {
                            let a = self.v_degeneracy(n - 1, m, j, self.h_face(n, m, i, k));
                            let b = self.h_face(n, m + 1, i, self.v_degeneracy(n, m, j, k));
                            if a != b {
                                return Err(fail(format!("dh{i} sv{j} at ({n},{m})")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_one_direction(
        &self,
        face: impl Fn(usize, usize, usize) -> usize,
        degeneracy: impl Fn(usize, usize, usize) -> usize,
        size: impl Fn(usize) -> usize,
    ) -> Result<()> {
        let fail = |what: String| Error::Malformed { reason: what };
        for n in 2..=self.trunc {
            for k in 0..size(n) {
                for j in 1..=n {
                    for i in 0..j {
                        if face(n - 1, i, face(n, j, k)) != face(n - 1, j - 1, face(n, i, k)) {
                            return Err(fail(format!("d{i} d{j} at {n}")));
                        }
                    }
                }
            }
        }
        for n in 0..self.trunc {
            for k in 0..size(n) {
                for j in 0..=n {
                    let sj = degeneracy(n, j, k);
                    for i in 0..=n + 1 {
                        let got = face(n + 1, i, sj);
                        let expect = if i == j || i == j + 1 {
                            k
                        } else if i < j {
                            degeneracy(n - 1, j - 1, face(n, i, k))
                        } else {
                            degeneracy(n - 1, j, face(n, i - 1, k))
                        };
                        if got != expect {
                            return Err(fail(format!("d{i} s{j} at {n}")));
                        }
                    }
                }
            }
        }
        for n in 0..self.trunc.saturating_sub(1) {
            for k in 0..size(n) {
                for j in 0..=n {
                    for i in 0..=j {
                        if degeneracy(n + 1, i, degeneracy(n, j, k))
                            != degeneracy(n + 1, j + 1, degeneracy(n, i, k))
                        {
                            return Err(fail(format!("s{i} s{j} at {n}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The diagonal simplicial set: level n is the (n, n) level, faces and
    /// degeneracies applied in both directions.
    pub fn diag(&self) -> Result<SSet> {
        let mut levels = Vec::new();
        for n in 0..=self.trunc {
            levels.push(SLevel::new(self.levels[&(n, n)].ids.clone())?);
        }
        for n in 1..=self.trunc {
            let mut faces = vec![vec![0usize; self.size(n, n)]; n + 1];
            for k in 0..self.size(n, n) {
                for i in 0..=n {
                    faces[i][k] = self.v_face(n - 1, n, i, self.h_face(n, n, i, k));
                }
            }
            levels[n].faces = faces;
        }
        for n in 0..self.trunc {
            let mut degeneracies = vec![vec![0usize; self.size(n, n)]; n + 1];
            for k in 0..self.size(n, n) {
                for i in 0..=n {
                    degeneracies[i][k] = self.v_degeneracy(n + 1, n, i, self.h_degeneracy(n, n, i, k));
                }
            }
            levels[n].degeneracies = degeneracies;
        }
        SSet::from_levels(self.trunc, levels)
    }
}

/// A levelwise map of bisimplicial sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSSetMap {
    source: BiSSet,
    target: BiSSet,
    levels: BTreeMap<(usize, usize), Vec<usize>>,
}

impl BiSSetMap {
    pub fn new(
        source: BiSSet,
        target: BiSSet,
        levels: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        if source.trunc() != target.trunc() {
            return Err(Error::Mismatch);
        }
        let t = source.trunc();
        for n in 0..=t {
            for m in 0..=t {
                let row = levels
                    .get(&(n, m))
                    .ok_or_else(|| Error::Malformed { reason: format!("missing level ({n},{m})") })?;
                if row.len() != source.size(n, m) {
                    return Err(Error::Mismatch);
                }
                for &img in row {
                    if img >= target.size(n, m) {
                        return Err(Error::Malformed { reason: format!("image range at ({n},{m})") });
                    }
                }
            }
        }
        for n in 0..=t {
            for m in 0..=t {
                let row = &levels[&(n, m)];
                for k in 0..source.size(n, m) {
                    if n > 0 {
                        for i in 0..=n {
                            if target.h_face(n, m, i, row[k])
                                != levels[&(n - 1, m)][source.h_face(n, m, i, k)]
                            {
                                return Err(Error::Malformed {
                                    reason: format!("dh{i} fails at ({n},{m})"),
                                });
                            }
                        }
                    }
                    if m > 0 {
                        for i in 0..=m {
                            if target.v_face(n, m, i, row[k])
                                != levels[&(n, m - 1)][source.v_face(n, m, i, k)]
                            {
                                return Err(Error::Malformed {
                                    reason: format!("dv{i} fails at ({n},{m})"),
                                });
                            }
                        }
                    }
                    if n < t {
                        for i in 0..=n {
                            if target.h_degeneracy(n, m, i, row[k])
                                != levels[&(n + 1, m)][source.h_degeneracy(n, m, i, k)]
                            {
                                return Err(Error::Malformed {
                                    reason: format!("sh{i} fails at ({n},{m})"),
                                });
                            }
                        }
                    }
                    if m < t {
                        for i in 0..=m {
                            if target.v_degeneracy(n, m, i, row[k])
                                != levels[&(n, m + 1)][source.v_degeneracy(n, m, i, k)]
                            {
                                return Err(Error::Malformed {
                                    reason: format!("sv{i} fails at ({n},{m})"),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(BiSSetMap { source, target, levels })
    }

    pub fn source(&self) -> &BiSSet {
        &self.source
    }

    pub fn target(&self) -> &BiSSet {
        &self.target
    }

    pub fn apply(&self, n: usize, m: usize, k: usize) -> usize {
        self.levels[&(n, m)][k]
    }

    /// self after earlier.
    pub fn compose(&self, earlier: &BiSSetMap) -> Result<BiSSetMap> {
        if earlier.target != self.source {
            return Err(Error::Mismatch);
        }
        let levels = earlier
            .levels
            .iter()
            .map(|(&lvl, row)| (lvl, row.iter().map(|&k| self.levels[&lvl][k]).collect()))
            .collect();
        BiSSetMap::new(earlier.source.clone(), self.target.clone(), levels)
    }

    /// The induced map on diagonals.
    pub fn diag(&self) -> Result<SimplicialMap> {
        let src = self.source.diag()?;
        let tgt = self.target.diag()?;
        let levels = (0..=self.source.trunc())
            .map(|n| self.levels[&(n, n)].clone())
            .collect();
        SimplicialMap::new(src, tgt, levels)
    }
}

/// A simplicial set viewed as a bisimplicial set constant in the horizontal
/// direction.
pub fn constant_horizontal(x: &SSet) -> Result<BiSSet> {
    let t = x.trunc();
    let mut levels = BTreeMap::new();
    for n in 0..=t {
        for m in 0..=t {
            let ids = x.simplices(m).to_vec();
            let mut l = BiLevel::new(ids)?;
            if n > 0 {
                l.h_faces = vec![(0..x.size(m)).collect(); n + 1];
            }
            if n < t {
                l.h_degeneracies = vec![(0..x.size(m)).collect(); n + 1];
            }
            if m > 0 {
                l.v_faces = (0..=m).map(|i| (0..x.size(m)).map(|k| x.face(m, i, k)).collect()).collect();
            }
            if m < t {
                l.v_degeneracies =
                    (0..=m).map(|i| (0..x.size(m)).map(|k| x.degeneracy(m, i, k)).collect()).collect();
            }
            levels.insert((n, m), l);
        }
    }
    BiSSet::assemble(t, levels)
}
