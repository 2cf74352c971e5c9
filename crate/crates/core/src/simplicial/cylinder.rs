//! The cylinder homotopy between the two re-indexing maps induced by a
//! natural transformation: an explicit simplicial map
//! srep(F alpha) x Delta^1 -> srep(F) whose endpoints are alpha_# and
//! beta_# . F theta, together with its factorization through the chain
//! category of the mapping cylinder and the pushout square presenting it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fincat::{Arrow, FinCategory, FinFunctor, NatTrans, RawCategory};

use super::bisset::{BiLevel, BiSSet, BiSSetMap};
use super::diagram::{alpha_sharp, chains, eta_hat, srep, Chain, DiagramMorphism, SSetDiagram};
use super::sset::{product, standard_simplex, SSet, SimplicialMap};

/// Levelwise product with the interval: |(X x Delta^1)_n| = |X_n| * (n + 2).
pub fn product_with_interval(x: &SSet) -> Result<SSet> {
    Ok(product(x, &standard_simplex(1, x.trunc()))?.0)
}

/// The bisimplicial object (Y (.) K) with level (n, m) = K_n copies of Y_m:
/// horizontal structure from K, vertical structure from Y.
pub fn odot(y: &SSet, k: &SSet) -> Result<BiSSet> {
    if y.trunc() != k.trunc() {
        return Err(Error::Mismatch);
    }
    let t = y.trunc();
    let mut levels = BTreeMap::new();
    let mut cells: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut lookup: BTreeMap<(usize, usize), BTreeMap<(usize, usize), usize>> = BTreeMap::new();
    for n in 0..=t {
        for m in 0..=t {
            let mut ids = Vec::new();
            let mut pairs = Vec::new();
            for (ki, kid) in k.simplices(n).iter().enumerate() {
                for (yi, yid) in y.simplices(m).iter().enumerate() {
                    ids.push(format!("({kid}|{yid})"));
                    pairs.push((ki, yi));
                }
            }
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
            let ids_sorted: Vec<String> = order.iter().map(|&i| ids[i].clone()).collect();
            let pairs_sorted: Vec<(usize, usize)> = order.iter().map(|&i| pairs[i]).collect();
            lookup.insert(
                (n, m),
                pairs_sorted.iter().enumerate().map(|(i, &p)| (p, i)).collect(),
            );
            cells.insert((n, m), pairs_sorted);
            levels.insert((n, m), BiLevel::new(ids_sorted)?);
        }
    }
    for n in 0..=t {
        for m in 0..=t {
            let pairs = cells[&(n, m)].clone();
            let level = levels.get_mut(&(n, m)).unwrap();
            if n > 0 {
                level.h_faces = (0..=n)
                    .map(|i| pairs.iter().map(|&(ki, yi)| lookup[&(n - 1, m)][&(k.face(n, i, ki), yi)]).collect())
                    .collect();
            }
            if n < t {
                level.h_degeneracies = (0..=n)
                    .map(|i| {
                        pairs
                            .iter()
                            .map(|&(ki, yi)| lookup[&(n + 1, m)][&(k.degeneracy(n, i, ki), yi)])
                            .collect()
                    })
                    .collect();
            }
            if m > 0 {
                level.v_faces = (0..=m)
                    .map(|i| pairs.iter().map(|&(ki, yi)| lookup[&(n, m - 1)][&(ki, y.face(m, i, yi))]).collect())
                    .collect();
            }
            if m < t {
                level.v_degeneracies = (0..=m)
                    .map(|i| {
                        pairs
                            .iter()
                            .map(|&(ki, yi)| lookup[&(n, m + 1)][&(ki, y.degeneracy(m, i, yi))])
                            .collect()
                    })
                    .collect();
            }
        }
    }
    BiSSet::assemble(t, levels)
}

fn cyl_id(base: &str, t: usize) -> String {
    format!("{base}@{t}")
}

/// The horizontal product K x Delta^1 of a bisimplicial set with the
/// interval: a horizontal p-cell acquires a marker t in 0..=p+1 counting how
/// many leading chain positions sit at the far end of the interval.
fn horizontal_interval_product(k: &BiSSet) -> Result<(BiSSet, BiSSetMap, BiSSetMap)> {
    let tr = k.trunc();
    let mut levels = BTreeMap::new();
    let mut cells: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    let mut lookup: BTreeMap<(usize, usize), BTreeMap<(usize, usize), usize>> = BTreeMap::new();
    for p in 0..=tr {
        for m in 0..=tr {
            let mut ids = Vec::new();
            let mut pairs = Vec::new();
            for (ci, cid) in k.ids(p, m).iter().enumerate() {
                for t in 0..=p + 1 {
                    ids.push(cyl_id(cid, t));
                    pairs.push((ci, t));
                }
            }
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
            let ids_sorted: Vec<String> = order.iter().map(|&i| ids[i].clone()).collect();
            let pairs_sorted: Vec<(usize, usize)> = order.iter().map(|&i| pairs[i]).collect();
            lookup.insert(
                (p, m),
                pairs_sorted.iter().enumerate().map(|(i, &c)| (c, i)).collect(),
            );
            cells.insert((p, m), pairs_sorted);
            levels.insert((p, m), BiLevel::new(ids_sorted)?);
        }
    }
    for p in 0..=tr {
        for m in 0..=tr {
            let pairs = cells[&(p, m)].clone();
            let level = levels.get_mut(&(p, m)).unwrap();
            if p > 0 {
                level.h_faces = (0..=p)
                    .map(|i| {
                        pairs
                            .iter()
                            .map(|&(ci, t)| {
                                let new_t = if i < t { t - 1 } else { t };
                                lookup[&(p - 1, m)][&(k.h_face(p, m, i, ci), new_t)]
                            })
                            .collect()
                    })
                    .collect();
            }
            if p < tr {
                level.h_degeneracies = (0..=p)
                    .map(|i| {
                        pairs
                            .iter()
                            .map(|&(ci, t)| {
                                let new_t = if i < t { t + 1 } else { t };
                                lookup[&(p + 1, m)][&(k.h_degeneracy(p, m, i, ci), new_t)]
                            })
                            .collect()
                    })
                    .collect();
            }
            if m > 0 {
                level.v_faces = (0..=m)
                    .map(|i| {
                        pairs
                            .iter()
                            .map(|&(ci, t)| lookup[&(p, m - 1)][&(k.v_face(p, m, i, ci), t)])
                            .collect()
                    })
                    .collect();
            }
            if m < tr {
                level.v_degeneracies = (0..=m)
                    .map(|i| {
                        pairs
                            .iter()
                            .map(|&(ci, t)| lookup[&(p, m + 1)][&(k.v_degeneracy(p, m, i, ci), t)])
                            .collect()
                    })
                    .collect();
            }
        }
    }
    let cylinder = BiSSet::assemble(tr, levels)?;
    let mut i0_levels = BTreeMap::new();
    let mut i1_levels = BTreeMap::new();
    for p in 0..=tr {
        for m in 0..=tr {
            let lk = &lookup[&(p, m)];
            i0_levels.insert((p, m), (0..k.size(p, m)).map(|ci| lk[&(ci, 0)]).collect());
            i1_levels.insert((p, m), (0..k.size(p, m)).map(|ci| lk[&(ci, p + 1)]).collect());
        }
    }
    let i0 = BiSSetMap::new(k.clone(), cylinder.clone(), i0_levels)?;
    let i1 = BiSSetMap::new(k.clone(), cylinder.clone(), i1_levels)?;
    Ok((cylinder, i0, i1))
}

/// The product category C x [0 -> 1]; objects "(c|e)", morphisms "(f|ee')".
pub fn product_with_arrow_category(c: &FinCategory) -> Result<FinCategory> {
    let mut raw = RawCategory::default();
    for o in c.objects() {
        for e in 0..2 {
            raw.objects.push(format!("({o}|{e})"));
        }
    }
    let mor_id = |f: &str, e0: usize, e1: usize| format!("({f}|{e0}{e1})");
    for f in c.arrows() {
        for (e0, e1) in [(0, 0), (0, 1), (1, 1)] {
            raw.arrows.push(Arrow::new(
                &mor_id(&f.id, e0, e1),
                &format!("({}|{e0})", f.src),
                &format!("({}|{e1})", f.dst),
            ));
        }
    }
    for o in c.objects() {
        for e in 0..2 {
            raw.identities
                .insert(format!("({o}|{e})"), mor_id(c.identity(o)?, e, e));
        }
    }
    for g in c.arrows() {
        for f in c.arrows() {
            if f.dst != g.src {
                continue;
            }
            let gf = c.compose(&g.id, &f.id)?;
            for (e0, e1) in [(0, 0), (0, 1), (1, 1)] {
                for (d0, d1) in [(0, 0), (0, 1), (1, 1)] {
                    if d1 != e0 {
                        continue;
                    }
                    raw.compose.insert(
                        (mor_id(&g.id, e0, e1), mor_id(&f.id, d0, d1)),
                        mor_id(&gf, d0, e1),
                    );
                }
            }
        }
    }
    FinCategory::validate(raw)
}

/// The functor C x [0 -> 1] -> D collapsing the cylinder onto alpha at end 0
/// and beta at end 1, crossing along theta.
pub fn bar_theta_functor(theta: &NatTrans) -> Result<(FinCategory, FinFunctor)> {
    let alpha = &theta.source;
    let beta = &theta.target;
    let c = alpha.source();
    let d = alpha.target();
    let ci = product_with_arrow_category(c)?;
    let mut object_map = BTreeMap::new();
    let mut morphism_map = BTreeMap::new();
    for o in c.objects() {
        object_map.insert(format!("({o}|0)"), alpha.on_object(o)?.clone());
        object_map.insert(format!("({o}|1)"), beta.on_object(o)?.clone());
    }
    for f in c.arrows() {
        morphism_map.insert(format!("({}|00)", f.id), alpha.on_morphism(&f.id)?.clone());
        morphism_map.insert(format!("({}|11)", f.id), beta.on_morphism(&f.id)?.clone());
        let crossing = d.compose(&theta.components[&f.dst], alpha.on_morphism(&f.id)?)?;
        morphism_map.insert(format!("({}|01)", f.id), crossing);
    }
    let functor = FinFunctor::new(ci.clone(), d.clone(), object_map, morphism_map)?;
    Ok((ci, functor))
}

/// The assembled cylinder homotopy with every structural check recorded.
#[derive(Debug, Clone)]
pub struct CylinderHomotopy {
    /// srep(F alpha) x Delta^1
    pub cylinder: BiSSet,
    /// H: cylinder -> srep(F)
    pub h: BiSSetMap,
    pub i0: BiSSetMap,
    pub i1: BiSSetMap,
    pub endpoint_zero_is_alpha_sharp: bool,
    pub endpoint_one_is_beta_sharp_after_theta: bool,
    /// H factors as theta_bar_# . phi
    pub factorization_holds: bool,
    /// the square i1 / F theta / phi / j is a pushout, levelwise
    pub pushout_holds: bool,
}

impl CylinderHomotopy {
    pub fn all_checks(&self) -> bool {
        self.endpoint_zero_is_alpha_sharp
            && self.endpoint_one_is_beta_sharp_after_theta
            && self.factorization_holds
            && self.pushout_holds
    }

    /// The homotopy on diagonals.
    pub fn diag(&self) -> Result<SimplicialMap> {
        self.h.diag()
    }
}

fn chain_table(cat: &FinCategory, trunc: usize) -> Result<Vec<BTreeMap<String, Chain>>> {
    let mut out = Vec::new();
    for p in 0..=trunc {
        out.push(chains(cat, p)?.into_iter().map(|c| (c.id(), c)).collect());
    }
    Ok(out)
}

/// Builds the cylinder homotopy for F: D -> sSet along theta: alpha -> beta
/// (functors C -> D), checking the endpoint identities, the factorization
/// through the crossing category, and the presenting pushout square.
pub fn cylinder_homotopy(
    diagram: &SSetDiagram,
    theta: &NatTrans,
) -> Result<CylinderHomotopy> {
    let alpha = &theta.source;
    let beta = &theta.target;
    if alpha.target() != diagram.shape() {
        return Err(Error::Mismatch);
    }
    let c = alpha.source();
    let d = diagram.shape();
    let tr = diagram.trunc();

    let (restricted_alpha, sharp_alpha) = alpha_sharp(alpha, diagram)?;
    let (_, sharp_beta) = alpha_sharp(beta, diagram)?;
    let k_alpha = srep(&restricted_alpha)?;
    let (cylinder, i0, i1) = horizontal_interval_product(&k_alpha)?;

    // F theta as a morphism of diagrams over the identity of C
    let restricted_beta = diagram.restrict(beta)?;
    let mut theta_components = BTreeMap::new();
    for i in c.objects() {
        let f = diagram.map(&theta.components[i])?;
        theta_components.insert(i.clone(), f.clone());
    }
    let f_theta = DiagramMorphism::new(
        restricted_alpha.clone(),
        restricted_beta.clone(),
        FinFunctor::identity(c),
        theta_components,
    )?;
    let f_theta_hat = eta_hat(&f_theta)?;

    // the crossing category and its relabeling map
    let (_, bar_theta) = bar_theta_functor(theta)?;
    let (restricted_bar, sharp_bar) = alpha_sharp(&bar_theta, diagram)?;
    let k_bar = srep(&restricted_bar)?;

    let target = srep(diagram)?;
    let c_chains = chain_table(c, tr)?;

    // H and phi cellwise
    let mut h_levels = BTreeMap::new();
    let mut phi_levels = BTreeMap::new();
    for p in 0..=tr {
        for m in 0..=tr {
            let mut h_row = Vec::with_capacity(cylinder.size(p, m));
            let mut phi_row = Vec::with_capacity(cylinder.size(p, m));
            for id in cylinder.ids(p, m) {
                let (base, t_str) = id
                    .rsplit_once('@')
                    .ok_or_else(|| Error::Malformed { reason: "cylinder id".into() })?;
                let t: usize = t_str
                    .parse()
                    .map_err(|_| Error::Malformed { reason: "cylinder marker".into() })?;
                let (chain_part, simplex_part) = base
                    .split_once('#')
                    .ok_or_else(|| Error::Malformed { reason: "cell id".into() })?;
                let chain = c_chains[p]
                    .get(chain_part)
                    .ok_or_else(|| Error::Malformed { reason: "unknown chain".into() })?;

                // value: x at the alpha end, F(theta)(x) once the tail has
                // crossed to beta
                let tail = chain.tail();
                let (value_id_h, tail_obj_h) = if t == p + 1 {
                    let comp = diagram.map(&theta.components[tail])?;
                    let si = restricted_alpha.value(tail)?.index_of(m, simplex_part)?;
                    (
                        comp.target().simplices(m)[comp.apply(m, si)].clone(),
                        beta.on_object(tail)?.clone(),
                    )
                } else {
                    (simplex_part.to_string(), alpha.on_object(tail)?.clone())
                };
                let _ = tail_obj_h;

                // target chain in D: beta on the first t positions, alpha on
                // the rest, theta crossing at the junction
                let mut objects = Vec::with_capacity(p + 1);
                for (j, a) in chain.objects.iter().enumerate() {
                    objects.push(if j < t {
                        beta.on_object(a)?.clone()
                    } else {
                        alpha.on_object(a)?.clone()
                    });
                }
                let mut arrows = Vec::with_capacity(p);
                for j in 1..=p {
                    let sigma = &chain.arrows[j - 1];
                    let arrow = if j <= t.saturating_sub(1) {
                        beta.on_morphism(sigma)?.clone()
                    } else if j == t {
                        d.compose(&theta.components[&chain.objects[j - 1]], alpha.on_morphism(sigma)?)?
                    } else {
                        alpha.on_morphism(sigma)?.clone()
                    };
                    arrows.push(arrow);
                }
                let target_chain = Chain { objects, arrows };
                let target_id = format!("{}#{}", target_chain.id(), value_id_h);
                let pos = target
                    .ids(p, m)
                    .binary_search_by(|probe| probe.as_str().cmp(target_id.as_str()))
                    .map_err(|_| Error::Malformed { reason: format!("missing H target {target_id}") })?;
                h_row.push(pos);

                // phi: the same cell into srep(F bar_theta): the chain in
                // C x I with interval coordinate 1 before the junction
                let mut ci_objects = Vec::with_capacity(p + 1);
                for (j, a) in chain.objects.iter().enumerate() {
                    let e = usize::from(j < t);
                    ci_objects.push(format!("({a}|{e})"));
                }
                let mut ci_arrows = Vec::with_capacity(p);
                for j in 1..=p {
                    let sigma = &chain.arrows[j - 1];
                    let e_dst = usize::from(j - 1 < t);
                    let e_src = usize::from(j < t);
                    ci_arrows.push(format!("({sigma}|{e_src}{e_dst})"));
                }
                let ci_chain = Chain { objects: ci_objects, arrows: ci_arrows };
                let phi_target = format!("{}#{}", ci_chain.id(), value_id_h);
                let pos = k_bar
                    .ids(p, m)
                    .binary_search_by(|probe| probe.as_str().cmp(phi_target.as_str()))
                    .map_err(|_| Error::Malformed { reason: format!("missing phi target {phi_target}") })?;
                phi_row.push(pos);
            }
            h_levels.insert((p, m), h_row);
            phi_levels.insert((p, m), phi_row);
        }
    }
    let h = BiSSetMap::new(cylinder.clone(), target.clone(), h_levels)?;
    let phi = BiSSetMap::new(cylinder.clone(), k_bar.clone(), phi_levels)?;

    // endpoint identities
    let h0 = h.compose(&i0)?;
    let h1 = h.compose(&i1)?;
    let beta_after_theta = sharp_beta.compose(&f_theta_hat)?;
    let endpoint_zero = h0 == sharp_alpha;
    let endpoint_one = h1 == beta_after_theta;

    // factorization H = theta_bar_# . phi
    let factorization = sharp_bar.compose(&phi)? == h;

    // pushout square: j embeds srep(F beta) as the all-1 chains
    let k_beta = srep(&restricted_beta)?;
    let mut j_levels = BTreeMap::new();
    for p in 0..=tr {
        for m in 0..=tr {
            let mut row = Vec::with_capacity(k_beta.size(p, m));
            for id in k_beta.ids(p, m) {
                let (chain_part, simplex_part) = id.split_once('#').unwrap();
                let chain = &c_chains[p][chain_part];
                let ci_objects = chain.objects.iter().map(|a| format!("({a}|1)")).collect();
                let ci_arrows = chain.arrows.iter().map(|f| format!("({f}|11)")).collect();
                let ci_chain = Chain { objects: ci_objects, arrows: ci_arrows };
                let target_id = format!("{}#{simplex_part}", ci_chain.id());
                let pos = k_bar
                    .ids(p, m)
                    .binary_search_by(|probe| probe.as_str().cmp(target_id.as_str()))
                    .map_err(|_| Error::Malformed { reason: format!("missing j target {target_id}") })?;
                row.push(pos);
            }
            j_levels.insert((p, m), row);
        }
    }
    let j = BiSSetMap::new(k_beta.clone(), k_bar.clone(), j_levels)?;

    let square_commutes = phi.compose(&i1)? == j.compose(&f_theta_hat)?;
    let mut pushout = square_commutes;
    if pushout {
        'levels: for p in 0..=tr {
            for m in 0..=tr {
                // j injective; phi injective off the i1 image; joint image is
                // everything; overlap is exactly phi(i1(...))
                let mut j_image = vec![false; k_bar.size(p, m)];
                for kk in 0..k_beta.size(p, m) {
                    let img = j.apply(p, m, kk);
                    if j_image[img] {
                        pushout = false;
                        break 'levels;
                    }
                    j_image[img] = true;
                }
                let i1_image: std::collections::BTreeSet<usize> =
                    (0..k_alpha.size(p, m)).map(|kk| i1.apply(p, m, kk)).collect();
                let mut phi_image = vec![false; k_bar.size(p, m)];
                let mut phi_off_seen = vec![false; k_bar.size(p, m)];
                for cell in 0..cylinder.size(p, m) {
                    let img = phi.apply(p, m, cell);
                    phi_image[img] = true;
                    if !i1_image.contains(&cell) {
                        if phi_off_seen[img] {
                            pushout = false;
                            break 'levels;
                        }
                        phi_off_seen[img] = true;
                        if j_image[img] {
                            // overlap must come from the i1 edge only
                            pushout = false;
                            break 'levels;
                        }
                    }
                }
                for idx in 0..k_bar.size(p, m) {
                    if !phi_image[idx] && !j_image[idx] {
                        pushout = false;
                        break 'levels;
                    }
                }
            }
        }
    }

    Ok(CylinderHomotopy {
        cylinder,
        h,
        i0,
        i1,
        endpoint_zero_is_alpha_sharp: endpoint_zero,
        endpoint_one_is_beta_sharp_after_theta: endpoint_one,
        factorization_holds: factorization,
        pushout_holds: pushout,
    })
}
