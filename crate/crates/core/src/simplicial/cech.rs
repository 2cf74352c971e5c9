//! Cech machinery on truncated simplicial sets: cover diagrams over the
//! nonempty-subset poset, the Cech complex of a set and of a map, the
//! category of simplices, and the homotopy-finality proxy decided through
//! nerve homology.

use std::collections::{BTreeMap, BTreeSet};

use crate::catalog::poset_category;
use crate::error::{Error, Result};
use crate::fincat::{undercategory, Arrow, FinCategory, FinFunctor, RawCategory};
use crate::finset::SetFunction;
use crate::homology::{homology_of, HomologyGroups};

use super::bisset::{BiLevel, BiSSet};
use super::diagram::{hocolim, DiagramMorphism, SSetDiagram};
use super::sset::{
    intersect_subsets, monotone_maps, nerve, standard_simplex, sub_sset, Level, SSet,
    SimplicialMap,
};

fn subset_name(prefix: &str, subset: &[usize]) -> String {
    let body: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    format!("{prefix}{}", body.join(","))
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1usize..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        out.push(subset);
    }
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// The diagram of a cover by simplicial subsets: one object per nonempty
/// subset of parts, valued at the intersection, with inclusion maps toward
/// smaller subsets.
pub fn cover_diagram(
    x: &SSet,
    parts: &[Vec<(usize, String)>],
) -> Result<SSetDiagram> {
    if parts.is_empty() {
        return Err(Error::Malformed { reason: "empty cover".into() });
    }
    let closed: Vec<(SSet, SimplicialMap)> = parts
        .iter()
        .enumerate()
        .map(|(i, gens)| {
            sub_sset(x, gens).map_err(|_| Error::NotSubobject {
                part: i,
                simplex: gens.first().map(|(_, s)| s.clone()).unwrap_or_default(),
            })
        })
        .collect::<Result<_>>()?;

    let subsets = nonempty_subsets(parts.len());
    let names: Vec<String> = subsets.iter().map(|s| subset_name("P", s)).collect();
    let mut covers = Vec::new();
    for (i, s) in subsets.iter().enumerate() {
        for (j, t) in subsets.iter().enumerate() {
            if t.len() + 1 == s.len() && t.iter().all(|e| s.contains(e)) {
                covers.push((names[i].as_str(), names[j].as_str()));
            }
        }
    }
    let names_ref: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let covers_owned: Vec<(String, String)> =
        covers.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let covers_ref: Vec<(&str, &str)> =
        covers_owned.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let shape = poset_category(&names_ref, &covers_ref);

    // intersections
    let mut values: BTreeMap<String, (SSet, SimplicialMap)> = BTreeMap::new();
    for (i, s) in subsets.iter().enumerate() {
        let mut acc = closed[s[0]].clone();
        for &p in &s[1..] {
            acc = intersect_subsets(x, &acc.1, &closed[p].1)?;
        }
        values.insert(names[i].clone(), acc);
    }

    let mut objects = BTreeMap::new();
    for name in &names {
        objects.insert(name.clone(), values[name].0.clone());
    }
    let mut maps = BTreeMap::new();
    for a in shape.arrows() {
        let (src_set, src_inc) = &values[&a.src];
        let (dst_set, dst_inc) = &values[&a.dst];
        // inclusion: reindex src's parent indices into dst
        let mut levels = Vec::new();
        for n in 0..=x.trunc() {
            let dst_index: BTreeMap<usize, usize> =
                (0..dst_set.size(n)).map(|k| (dst_inc.apply(n, k), k)).collect();
            let row = (0..src_set.size(n))
                .map(|k| dst_index[&src_inc.apply(n, k)])
                .collect();
            levels.push(row);
        }
        maps.insert(a.id.clone(), SimplicialMap::new(src_set.clone(), dst_set.clone(), levels)?);
    }
    SSetDiagram::new(shape, objects, maps)
}

/// Cover diagram plus its homotopy colimit.
pub fn cech_cover(
    x: &SSet,
    parts: &[Vec<(usize, String)>],
) -> Result<(SSetDiagram, SSet)> {
    let diagram = cover_diagram(x, parts)?;
    let h = hocolim(&diagram)?;
    Ok((diagram, h))
}

fn tuple_name(parts: &[&str]) -> String {
    parts.join(",")
}

/// The Cech complex of a finite label set: level n is B^(n+1), faces drop a
/// coordinate, degeneracies repeat one.
pub fn cech_set(labels: &[&str], trunc: usize) -> Result<SSet> {
    let mut levels = Vec::new();
    let mut tuples_per_level: Vec<Vec<Vec<&str>>> = Vec::new();
    for n in 0..=trunc {
        let mut tuples: Vec<Vec<&str>> = vec![Vec::new()];
        for _ in 0..=n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    labels.iter().map(move |l| {
                        let mut t2 = t.clone();
                        t2.push(*l);
                        t2
                    })
                })
                .collect();
        }
        tuples.sort();
        levels.push(Level::new(tuples.iter().map(|t| tuple_name(t)).collect())?);
        tuples_per_level.push(tuples);
    }
    for n in 1..=trunc {
        let mut faces = vec![vec![0usize; tuples_per_level[n].len()]; n + 1];
        for (k, t) in tuples_per_level[n].iter().enumerate() {
            for i in 0..=n {
                let mut shorter = t.clone();
                shorter.remove(i);
                faces[i][k] = levels[n - 1].index[&tuple_name(&shorter)];
            }
        }
        levels[n].faces = faces;
    }
    for n in 0..trunc {
        let mut degeneracies = vec![vec![0usize; tuples_per_level[n].len()]; n + 1];
        for (k, t) in tuples_per_level[n].iter().enumerate() {
            for i in 0..=n {
                let mut longer = t.clone();
                longer.insert(i, t[i]);
                degeneracies[i][k] = levels[n + 1].index[&tuple_name(&longer)];
            }
        }
        levels[n].degeneracies = degeneracies;
    }
    SSet::from_levels(trunc, levels)
}

/// The Cech complex of a function of finite sets: level n holds the
/// (n+1)-tuples lying in one fiber.
pub fn cech_map_sets(f: &SetFunction, trunc: usize) -> Result<SSet> {
    let mut levels = Vec::new();
    let mut tuples_per_level: Vec<Vec<Vec<String>>> = Vec::new();
    for n in 0..=trunc {
        let mut tuples: Vec<Vec<String>> = vec![Vec::new()];
        for _ in 0..=n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    f.domain().elements().iter().filter_map(move |y| {
                        if let Some(first) = t.first() {
                            if f.apply(first).ok()? != f.apply(y).ok()? {
                                return None;
                            }
                        }
                        let mut t2 = t.clone();
                        t2.push(y.clone());
                        Some(t2)
                    })
                })
                .collect();
        }
        tuples.sort();
        let names: Vec<String> =
            tuples.iter().map(|t| tuple_name(&t.iter().map(|s| s.as_str()).collect::<Vec<_>>())).collect();
        levels.push(Level::new(names)?);
        tuples_per_level.push(tuples);
    }
    for n in 1..=trunc {
        let mut faces = vec![vec![0usize; tuples_per_level[n].len()]; n + 1];
        for (k, t) in tuples_per_level[n].iter().enumerate() {
            for i in 0..=n {
                let mut shorter = t.clone();
                shorter.remove(i);
                let name =
                    tuple_name(&shorter.iter().map(|s| s.as_str()).collect::<Vec<_>>());
                faces[i][k] = levels[n - 1].index[&name];
            }
        }
        levels[n].faces = faces;
    }
    for n in 0..trunc {
        let mut degeneracies = vec![vec![0usize; tuples_per_level[n].len()]; n + 1];
        for (k, t) in tuples_per_level[n].iter().enumerate() {
            for i in 0..=n {
                let mut longer = t.clone();
                longer.insert(i, t[i].clone());
                let name = tuple_name(&longer.iter().map(|s| s.as_str()).collect::<Vec<_>>());
                degeneracies[i][k] = levels[n + 1].index[&name];
            }
        }
        levels[n].degeneracies = degeneracies;
    }
    SSet::from_levels(trunc, levels)
}

/// The Cech complex of a simplicial map: a bisimplicial set whose horizontal
/// level n at vertical level m is the set of (n+1)-tuples of m-simplices of
/// the source with a common image.
pub fn cech_map_ssets(f: &SimplicialMap) -> Result<BiSSet> {
    let y = f.source();
    let t = y.trunc();
    let mut levels = BTreeMap::new();
    let mut tuples: BTreeMap<(usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
    let mut lookup: BTreeMap<(usize, usize), BTreeMap<Vec<usize>, usize>> = BTreeMap::new();
    for n in 0..=t {
        for m in 0..=t {
            let mut cells: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..=n {
                cells = cells
                    .into_iter()
                    .flat_map(|c| {
                        (0..y.size(m)).filter_map(move |k| {
                            if let Some(&first) = c.first() {
                                if f.apply(m, first) != f.apply(m, k) {
                                    return None;
                                }
                            }
                            let mut c2 = c.clone();
                            c2.push(k);
                            Some(c2)
                        })
                    })
                    .collect();
            }
            let mut ids: Vec<(String, Vec<usize>)> = cells
                .into_iter()
                .map(|c| {
                    let name = tuple_name(
                        &c.iter().map(|&k| y.simplices(m)[k].as_str()).collect::<Vec<_>>(),
                    );
                    (name, c)
                })
                .collect();
            ids.sort();
            lookup.insert(
                (n, m),
                ids.iter().enumerate().map(|(i, (_, c))| (c.clone(), i)).collect(),
            );
            levels.insert((n, m), BiLevel::new(ids.iter().map(|(s, _)| s.clone()).collect())?);
            tuples.insert((n, m), ids.into_iter().map(|(_, c)| c).collect());
        }
    }
    for n in 0..=t {
        for m in 0..=t {
            let cells = tuples[&(n, m)].clone();
            let level = levels.get_mut(&(n, m)).unwrap();
            if n > 0 {
                level.h_faces = (0..=n)
                    .map(|i| {
                        cells
                            .iter()
                            .map(|c| {
                                let mut shorter = c.clone();
                                shorter.remove(i);
                                lookup[&(n - 1, m)][&shorter]
                            })
                            .collect()
                    })
                    .collect();
            }
            if n < t {
                level.h_degeneracies = (0..=n)
                    .map(|i| {
                        cells
                            .iter()
                            .map(|c| {
                                let mut longer = c.clone();
                                longer.insert(i, c[i]);
                                lookup[&(n + 1, m)][&longer]
                            })
                            .collect()
                    })
                    .collect();
            }
            if m > 0 {
                level.v_faces = (0..=m)
                    .map(|i| {
                        cells
                            .iter()
                            .map(|c| {
                                let moved: Vec<usize> =
                                    c.iter().map(|&k| y.face(m, i, k)).collect();
                                lookup[&(n, m - 1)][&moved]
                            })
                            .collect()
                    })
                    .collect();
            }
            if m < t {
                level.v_degeneracies = (0..=m)
                    .map(|i| {
                        cells
                            .iter()
                            .map(|c| {
                                let moved: Vec<usize> =
                                    c.iter().map(|&k| y.degeneracy(m, i, k)).collect();
                                lookup[&(n, m + 1)][&moved]
                            })
                            .collect()
                    })
                    .collect();
            }
        }
    }
    BiSSet::assemble(t, levels)
}

fn injection_name(values: &[usize]) -> String {
    let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    body.join(",")
}

/// The category of nondegenerate simplices of X with injective operators,
/// carrying the diagram that sends an n-simplex to the standard n-simplex.
pub fn simplex_category(x: &SSet) -> Result<SSetDiagram> {
    let t = x.trunc();
    let mut raw = RawCategory::default();
    // objects "n:id"
    let mut object_dims: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for n in 0..=t {
        for &k in &x.nondegenerate(n) {
            let name = format!("{n}:{}", x.simplices(n)[k]);
            raw.objects.push(name.clone());
            object_dims.insert(name, (n, k));
        }
    }
    // morphisms: injective monotone theta with theta^*(target) = source
    struct Op {
        id: String,
        values: Vec<usize>,
        src: String,
        dst: String,
    }
    let mut ops: Vec<Op> = Vec::new();
    for (dst, &(n, kn)) in &object_dims {
        for (src, &(m, _km)) in &object_dims {
            if m > n {
                continue;
            }
            for theta in monotone_maps(m, n) {
                let distinct: BTreeSet<usize> = theta.iter().copied().collect();
                if distinct.len() != m + 1 {
                    continue;
                }
                let missing: Vec<usize> =
                    (0..=n).rev().filter(|i| !distinct.contains(i)).collect();
                let (level, idx) = x.apply_missing(n, kn, &missing);
                debug_assert_eq!(level, m);
                if format!("{m}:{}", x.simplices(m)[idx]) == *src {
                    let id = format!("{}:{src}=>{dst}", injection_name(&theta));
                    raw.arrows.push(Arrow::new(&id, src, dst));
                    ops.push(Op { id, values: theta, src: src.clone(), dst: dst.clone() });
                }
            }
        }
    }
    for (name, &(n, _)) in &object_dims {
        let full: Vec<usize> = (0..=n).collect();
        raw.identities
            .insert(name.clone(), format!("{}:{name}=>{name}", injection_name(&full)));
    }
    for o2 in &ops {
        for o1 in &ops {
            if o1.dst != o2.src {
                continue;
            }
            let composite: Vec<usize> = o1.values.iter().map(|&i| o2.values[i]).collect();
            raw.compose.insert(
                (o2.id.clone(), o1.id.clone()),
                format!("{}:{}=>{}", injection_name(&composite), o1.src, o2.dst),
            );
        }
    }
    let shape = FinCategory::validate(raw)?;

    // diagram values: standard simplices; maps: postcompose with theta
    let mut objects = BTreeMap::new();
    for (name, &(n, _)) in &object_dims {
        objects.insert(name.clone(), standard_simplex(n, t));
    }
    let mut maps = BTreeMap::new();
    for op in &ops {
        let (m, _) = object_dims[&op.src];
        let (n, _) = object_dims[&op.dst];
        let src_sset = standard_simplex(m, t);
        let dst_sset = standard_simplex(n, t);
        let mut levels_map = Vec::new();
        for j in 0..=t {
            let mut row = Vec::with_capacity(src_sset.size(j));
            for id in src_sset.simplices(j) {
                let phi: Vec<usize> = id.split(',').map(|v| v.parse().unwrap()).collect();
                let image: Vec<usize> = phi.iter().map(|&i| op.values[i]).collect();
                row.push(dst_sset.index_of(j, &injection_name(&image))?);
            }
            levels_map.push(row);
        }
        maps.insert(op.id.clone(), SimplicialMap::new(src_sset, dst_sset, levels_map)?);
    }
    SSetDiagram::new(shape, objects, maps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinalityVerdict {
    /// every comma category is nonempty, connected and acyclic through the
    /// inspected range
    Yes { through: usize },
    /// a comma category is empty, disconnected, or has homology in range
    No { at: String },
    /// the truncation leaves no degrees to inspect
    Inconclusive,
}

/// Proxy for homotopy finality: nerve homology of every comma category
/// (f down L). Acyclicity in range is necessary, not sufficient, for
/// contractibility; the verdict says how far it looked.
pub fn is_homotopy_final_proxy(l: &FinFunctor, trunc: usize) -> Result<FinalityVerdict> {
    if trunc == 0 {
        return Ok(FinalityVerdict::Inconclusive);
    }
    let mut through = usize::MAX;
    for f in l.target().objects() {
        let (comma, _) = undercategory(l, f)?;
        if comma.objects().is_empty() {
            return Ok(FinalityVerdict::No { at: format!("({f} down L) is empty") });
        }
        let n = nerve(&comma, trunc)?;
        let h: HomologyGroups = homology_of(&n)?;
        if h.groups[0].betti != 1 {
            return Ok(FinalityVerdict::No { at: format!("({f} down L) is disconnected") });
        }
        for g in &h.groups[1..] {
            if g.betti != 0 || !g.torsion.is_empty() {
                return Ok(FinalityVerdict::No {
                    at: format!("({f} down L) has homology in degree {}", g.degree),
                });
            }
        }
        through = through.min(h.valid_through);
    }
    Ok(FinalityVerdict::Yes { through })
}

/// Two covers at once: the diagram over pairs of nonempty subsets valued at
/// the double intersections, with the morphism forgetting the second cover.
pub fn double_cover_diagram(
    x: &SSet,
    parts_u: &[Vec<(usize, String)>],
    parts_v: &[Vec<(usize, String)>],
) -> Result<(SSetDiagram, SSetDiagram, DiagramMorphism)> {
    let closed_u: Vec<(SSet, SimplicialMap)> =
        parts_u.iter().map(|g| sub_sset(x, g)).collect::<Result<_>>()?;
    let closed_v: Vec<(SSet, SimplicialMap)> =
        parts_v.iter().map(|g| sub_sset(x, g)).collect::<Result<_>>()?;

    let subsets_u = nonempty_subsets(parts_u.len());
    let subsets_v = nonempty_subsets(parts_v.len());

    let intersection_of = |sigma: &[usize], tau: &[usize]| -> Result<(SSet, SimplicialMap)> {
        let mut acc = closed_u[sigma[0]].clone();
        for &p in &sigma[1..] {
            acc = intersect_subsets(x, &acc.1, &closed_u[p].1)?;
        }
        for &p in tau {
            acc = intersect_subsets(x, &acc.1, &closed_v[p].1)?;
        }
        Ok(acc)
    };

    // pair shape
    let mut names = Vec::new();
    let mut pair_list = Vec::new();
    for s in &subsets_u {
        for t in &subsets_v {
            names.push(format!("{}x{}", subset_name("U", s), subset_name("V", t)));
            pair_list.push((s.clone(), t.clone()));
        }
    }
    let mut covers: Vec<(String, String)> = Vec::new();
    for (i, (s1, t1)) in pair_list.iter().enumerate() {
        for (j, (s2, t2)) in pair_list.iter().enumerate() {
            let drop_u = t1 == t2
                && s2.len() + 1 == s1.len()
                && s2.iter().all(|e| s1.contains(e));
            let drop_v = s1 == s2
                && t2.len() + 1 == t1.len()
                && t2.iter().all(|e| t1.contains(e));
            if drop_u || drop_v {
                covers.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let names_ref: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let covers_ref: Vec<(&str, &str)> =
        covers.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let pair_shape = poset_category(&names_ref, &covers_ref);

    let mut pair_values: BTreeMap<String, (SSet, SimplicialMap)> = BTreeMap::new();
    for (i, (s, t)) in pair_list.iter().enumerate() {
        pair_values.insert(names[i].clone(), intersection_of(s, t)?);
    }
    let inclusion_map = |src: &(SSet, SimplicialMap), dst: &(SSet, SimplicialMap)| -> Result<SimplicialMap> {
        let mut levels = Vec::new();
        for n in 0..=x.trunc() {
            let dst_index: BTreeMap<usize, usize> =
                (0..dst.0.size(n)).map(|k| (dst.1.apply(n, k), k)).collect();
            levels.push((0..src.0.size(n)).map(|k| dst_index[&src.1.apply(n, k)]).collect());
        }
        SimplicialMap::new(src.0.clone(), dst.0.clone(), levels)
    };
    let mut pair_objects = BTreeMap::new();
    for name in &names {
        pair_objects.insert(name.clone(), pair_values[name].0.clone());
    }
    let mut pair_maps = BTreeMap::new();
    for a in pair_shape.arrows() {
        pair_maps.insert(a.id.clone(), inclusion_map(&pair_values[&a.src], &pair_values[&a.dst])?);
    }
    let pair_diagram = SSetDiagram::new(pair_shape.clone(), pair_objects, pair_maps)?;

    let u_diagram = cover_diagram(x, parts_u)?;

    // forget the second cover: (sigma, tau) -> sigma
    let mut object_map = BTreeMap::new();
    let mut morphism_map = BTreeMap::new();
    for (i, (s, _)) in pair_list.iter().enumerate() {
        object_map.insert(names[i].clone(), subset_name("P", s));
    }
    for a in pair_shape.arrows() {
        let src_target = object_map[&a.src].clone();
        let dst_target = object_map[&a.dst].clone();
        let image = if src_target == dst_target {
            u_diagram.shape().identity(&src_target)?.clone()
        } else {
            u_diagram.shape().hom_set(&src_target, &dst_target)?[0].clone()
        };
        morphism_map.insert(a.id.clone(), image);
    }
    let forget = FinFunctor::new(
        pair_shape.clone(),
        u_diagram.shape().clone(),
        object_map.clone(),
        morphism_map,
    )?;

    // components: V_sigma cap W_tau -> V_sigma
    let u_values: BTreeMap<String, (SSet, SimplicialMap)> = {
        let mut m = BTreeMap::new();
        for s in &subsets_u {
            let mut acc = closed_u[s[0]].clone();
            for &p in &s[1..] {
                acc = intersect_subsets(x, &acc.1, &closed_u[p].1)?;
            }
            m.insert(subset_name("P", s), acc);
        }
        m
    };
    let mut components = BTreeMap::new();
    for (i, _) in pair_list.iter().enumerate() {
        let src = &pair_values[&names[i]];
        let dst = &u_values[&object_map[&names[i]]];
        components.insert(names[i].clone(), inclusion_map(src, dst)?);
    }
    let forget_morphism =
        DiagramMorphism::new(pair_diagram.clone(), u_diagram.clone(), forget, components)?;
    Ok((pair_diagram, u_diagram, forget_morphism))
}
