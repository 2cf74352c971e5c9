//! A small gallery of finite categories used by tests, benchmarks and the
//! documentation. Everything returned here is already validated.

use std::collections::BTreeMap;

use crate::fincat::{Arrow, FinCategory, RawCategory};
use crate::finset::{FinSetObject, SetFunction};

fn with_identities(mut raw: RawCategory) -> RawCategory {
    for o in raw.objects.clone() {
        let id = format!("id{o}");
        raw.arrows.push(Arrow::new(&id, &o, &o));
        raw.identities.insert(o.clone(), id);
    }
    for a in raw.arrows.clone() {
        raw.compose
            .entry((format!("id{}", a.dst), a.id.clone()))
            .or_insert(a.id.clone());
        raw.compose
            .entry((a.id.clone(), format!("id{}", a.src)))
            .or_insert(a.id.clone());
    }
    raw
}

/// The category with one object and only its identity.
pub fn terminal_category() -> FinCategory {
    let raw = with_identities(RawCategory {
        objects: vec!["*".into()],
        ..Default::default()
    });
    FinCategory::validate(raw).unwrap()
}

pub fn walking_arrow_raw() -> RawCategory {
    let mut raw = RawCategory {
        objects: vec!["0".into(), "1".into()],
        ..Default::default()
    };
    raw.arrows.push(Arrow::new("f", "0", "1"));
    with_identities(raw)
}

/// The walking arrow 0 -> 1.
pub fn walking_arrow() -> FinCategory {
    FinCategory::validate(walking_arrow_raw()).unwrap()
}

/// A discrete category on the given objects.
pub fn discrete(objects: &[&str]) -> FinCategory {
    let raw = with_identities(RawCategory {
        objects: objects.iter().map(|o| o.to_string()).collect(),
        ..Default::default()
    });
    FinCategory::validate(raw).unwrap()
}

/// Two parallel arrows a ==> b.
pub fn parallel_pair() -> FinCategory {
    let mut raw = RawCategory {
        objects: vec!["a".into(), "b".into()],
        ..Default::default()
    };
    raw.arrows.push(Arrow::new("f", "a", "b"));
    raw.arrows.push(Arrow::new("g", "a", "b"));
    FinCategory::validate(with_identities(raw)).unwrap()
}

/// a ==> b -> c with the parallel pair genuinely coequalized by q: b -> c.
pub fn coequalizer_category() -> FinCategory {
    let mut raw = RawCategory {
        objects: vec!["a".into(), "b".into(), "c".into()],
        ..Default::default()
    };
    raw.arrows.push(Arrow::new("f", "a", "b"));
    raw.arrows.push(Arrow::new("g", "a", "b"));
    raw.arrows.push(Arrow::new("q", "b", "c"));
    raw.arrows.push(Arrow::new("h", "a", "c"));
    raw.compose.insert(("q".into(), "f".into()), "h".into());
    raw.compose.insert(("q".into(), "g".into()), "h".into());
    FinCategory::validate(with_identities(raw)).unwrap()
}

/// The walking isomorphism: two objects, mutually inverse arrows.
pub fn walking_iso() -> FinCategory {
    let mut raw = RawCategory {
        objects: vec!["a".into(), "b".into()],
        ..Default::default()
    };
    raw.arrows.push(Arrow::new("u", "a", "b"));
    raw.arrows.push(Arrow::new("v", "b", "a"));
    raw.compose.insert(("v".into(), "u".into()), "ida".into());
    raw.compose.insert(("u".into(), "v".into()), "idb".into());
    FinCategory::validate(with_identities(raw)).unwrap()
}

/// Builds the poset category generated by the given covering relations;
/// between comparable objects there is exactly one arrow, named "src<dst".
pub fn poset_category(objects: &[&str], covers: &[(&str, &str)]) -> FinCategory {
    let n = objects.len();
    let idx: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in covers {
        leq[idx[a]][idx[b]] = true;
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let mut raw = RawCategory {
        objects: objects.iter().map(|o| o.to_string()).collect(),
        ..Default::default()
    };
    let name = |i: usize, j: usize| {
        if i == j {
            format!("id{}", objects[i])
        } else {
            format!("{}<{}", objects[i], objects[j])
        }
    };
    for i in 0..n {
        for j in 0..n {
            if leq[i][j] {
                raw.arrows.push(Arrow::new(&name(i, j), objects[i], objects[j]));
            }
        }
        raw.identities.insert(objects[i].to_string(), name(i, i));
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if leq[i][j] && leq[j][k] {
                    raw.compose.insert((name(j, k), name(i, j)), name(i, k));
                }
            }
        }
    }
    FinCategory::validate(raw).unwrap()
}

/// The commutative square poset p -> a -> t, p -> b -> t.
pub fn commutative_square() -> FinCategory {
    poset_category(&["p", "a", "b", "t"], &[("p", "a"), ("p", "b"), ("a", "t"), ("b", "t")])
}

/// The span shape l <- m -> r.
pub fn span_poset() -> FinCategory {
    poset_category(&["l", "m", "r"], &[("m", "l"), ("m", "r")])
}

/// Canonical finite set of the given size, elements "0".."n-1".
pub fn canonical_set(n: usize) -> FinSetObject {
    FinSetObject::new((0..n).map(|i| i.to_string()).collect()).unwrap()
}

/// Morphism id used by [`finset_ambient_category`]: the graph of the map.
pub fn finset_arrow_id(dom: usize, cod: usize, images: &[usize]) -> String {
    let body: Vec<String> = images.iter().map(|i| i.to_string()).collect();
    format!("{dom}>{cod}[{}]", body.join(","))
}

/// A finite category equivalent to the full subcategory of finite sets on the
/// canonical sets of size 0..=max. Objects are "0", "1", ...; morphisms are
/// all functions, identified by their graphs.
pub fn finset_ambient_category(max: usize) -> FinCategory {
    let mut raw = RawCategory::default();
    let sizes: Vec<usize> = (0..=max).collect();
    for &n in &sizes {
        raw.objects.push(n.to_string());
    }
    // all functions n -> m as image vectors
    let mut maps: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for &n in &sizes {
        for &m in &sizes {
            if n > 0 && m == 0 {
                continue;
            }
            let mut img = vec![0usize; n];
            loop {
                maps.push((n, m, img.clone()));
                let mut k = n;
                loop {
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                    k -= 1;
                    img[k] += 1;
                    if img[k] < m {
                        break;
                    }
                    img[k] = 0;
                }
                if k == usize::MAX {
                    break;
                }
            }
        }
    }
    for (n, m, img) in &maps {
        raw.arrows
            .push(Arrow::new(&finset_arrow_id(*n, *m, img), &n.to_string(), &m.to_string()));
    }
    for &n in &sizes {
        let ident: Vec<usize> = (0..n).collect();
        raw.identities.insert(n.to_string(), finset_arrow_id(n, n, &ident));
    }
    for (n2, m2, g) in &maps {
        for (n1, m1, f) in &maps {
            if m1 != n2 {
                continue;
            }
            let composite: Vec<usize> = f.iter().map(|&i| g[i]).collect();
            raw.compose.insert(
                (finset_arrow_id(*n2, *m2, g), finset_arrow_id(*n1, *m1, f)),
                finset_arrow_id(*n1, *m2, &composite),
            );
        }
    }
    FinCategory::validate(raw).unwrap()
}

/// Interprets a morphism of [`finset_ambient_category`] as an actual function
/// between canonical sets.
pub fn finset_arrow_as_function(id: &str) -> Option<SetFunction> {
    let (dom_s, rest) = id.split_once('>')?;
    let (cod_s, img_s) = rest.split_once('[')?;
    let img_s = img_s.strip_suffix(']')?;
    let dom: usize = dom_s.parse().ok()?;
    let cod: usize = cod_s.parse().ok()?;
    let images: Vec<usize> = if img_s.is_empty() {
        Vec::new()
    } else {
        img_s.split(',').map(|t| t.parse().unwrap()).collect()
    };
    let mapping: BTreeMap<String, String> = images
        .iter()
        .enumerate()
        .map(|(i, &j)| (i.to_string(), j.to_string()))
        .collect();
    SetFunction::new(canonical_set(dom), canonical_set(cod), mapping).ok()
}

/// The categories every topology-level acceptance check runs over.
pub fn test_categories() -> Vec<(&'static str, FinCategory)> {
    vec![
        ("terminal", terminal_category()),
        ("walking_arrow", walking_arrow()),
        ("parallel_pair", parallel_pair()),
        ("commutative_square", commutative_square()),
        ("coequalizer", coequalizer_category()),
        ("span", span_poset()),
    ]
}
