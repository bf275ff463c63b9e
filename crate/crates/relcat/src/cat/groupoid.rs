//! Groupoid utilities: connected components, inverse detection, and the
//! skeletal reduction used by the homology verdict machinery and the
//! homotopy-pullback oracle.

use std::collections::HashMap;

use super::core::{CatBuilder, FinCat, FinFunctor};
use crate::error::{Error, Result};

/// Union-find partition of the objects into connected components
/// (connectivity via morphisms in either direction). Component ids are
/// 0-based in order of their lexicographically smallest object id.
#[derive(Debug, Clone)]
pub struct Components {
    /// component index per object
    pub of_object: Vec<usize>,
    /// representative (lex-min) object per component
    pub representative: Vec<u32>,
}

pub fn components(c: &FinCat) -> Components {
    let n = c.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in 0..c.morphism_count() as u32 {
        let a = find(&mut parent, c.src(m) as usize);
        let b = find(&mut parent, c.tgt(m) as usize);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    // objects are sorted by id, so the root with the smallest index is the
    // lex-min object of its component
    let mut roots: Vec<usize> = Vec::new();
    let mut root_to_comp: HashMap<usize, usize> = HashMap::new();
    let mut of_object = vec![0usize; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        let comp = *root_to_comp.entry(r).or_insert_with(|| {
            roots.push(r);
            roots.len() - 1
        });
        of_object[x] = comp;
    }
    Components {
        of_object,
        representative: roots.iter().map(|&r| r as u32).collect(),
    }
}

/// Two-sided inverse of every morphism, or an error naming a witness.
pub fn inverses(c: &FinCat) -> Result<Vec<u32>> {
    let mut inv = vec![u32::MAX; c.morphism_count()];
    for m in 0..c.morphism_count() as u32 {
        let id_src = c.identity_of(c.src(m));
        let id_tgt = c.identity_of(c.tgt(m));
        let found = c
            .hom(c.tgt(m), c.src(m))
            .iter()
            .copied()
            .find(|&w| c.compose(w, m) == Some(id_src) && c.compose(m, w) == Some(id_tgt));
        match found {
            Some(w) => inv[m as usize] = w,
            None => {
                return Err(Error::NotGroupoid(format!(
                    "morphism `{}` has no two-sided inverse",
                    c.morphism_id(m)
                )))
            }
        }
    }
    Ok(inv)
}

pub fn is_groupoid(c: &FinCat) -> bool {
    inverses(c).is_ok()
}

/// Skeleton of one connected groupoid component: the vertex group at the
/// component's lex-min object, together with the retraction onto it.
///
/// The retraction `r(m) = tau_tgt^-1 . m . tau_src` (with `tau_x` the chosen
/// connector from the basepoint to `x`) is an equivalence of categories, so
/// nerve homology is preserved; this is what lets verdicts on large groupoid
/// components be computed at group scale.
#[derive(Debug, Clone)]
pub struct SkeletalComponent {
    /// the one-object groupoid on the vertex group
    pub group_cat: FinCat,
    /// basepoint object in the ambient category
    pub basepoint: u32,
    /// ambient morphism indices realizing the vertex group elements,
    /// parallel to `group_cat`'s morphism order
    pub realization: Vec<u32>,
    /// the retraction functor `component -> group_cat` as maps over the
    /// FULL ambient category (objects outside the component map to u32::MAX)
    pub retract_obj: Vec<u32>,
    pub retract_mor: Vec<u32>,
}

/// Skeletalize the component of `comp_index` in a groupoid `c`.
pub fn skeletal_component(
    c: &FinCat,
    comps: &Components,
    inv: &[u32],
    comp_index: usize,
) -> Result<SkeletalComponent> {
    let base = comps.representative[comp_index];

    // connectors tau_x: base -> x, lex-min morphism id among hom(base, x)
    let mut tau = vec![u32::MAX; c.object_count()];
    tau[base as usize] = c.identity_of(base);
    for o in 0..c.object_count() as u32 {
        if comps.of_object[o as usize] != comp_index || o == base {
            continue;
        }
        let m = c
            .hom(base, o)
            .iter()
            .copied()
            .min_by(|&a, &b| c.morphism_id(a).cmp(c.morphism_id(b)))
            .ok_or_else(|| {
                Error::NotGroupoid(format!(
                    "no morphism from basepoint to `{}` in its component",
                    c.object_id(o)
                ))
            })?;
        tau[o as usize] = m;
    }

    // vertex group = hom(base, base) with composition from the table
    let elements: Vec<u32> = c.hom(base, base).to_vec();
    

    let mut b = CatBuilder::new();
    let obj = c.object_id(base).to_string();
    b.object(obj.clone());
    for &m in &elements {
        b.morphism(c.morphism_id(m).to_string(), obj.clone(), obj.clone());
    }
    b.identity(obj.clone(), c.morphism_id(c.identity_of(base)).to_string());
    for &g in &elements {
        for &f in &elements {
            let gf = c.compose(g, f).ok_or_else(|| {
                Error::invalid("incomplete composition table on vertex group")
            })?;
            b.compose(
                c.morphism_id(g).to_string(),
                c.morphism_id(f).to_string(),
                c.morphism_id(gf).to_string(),
            );
        }
    }
    let group_cat = b.build()?;

    // realization parallel to group_cat's sorted morphism order
    let mut realization = vec![u32::MAX; elements.len()];
    for &m in &elements {
        let gi = group_cat.morphism_index(c.morphism_id(m)).unwrap();
        realization[gi as usize] = m;
    }

    // retraction r(m) = tau_tgt^-1 . m . tau_src
    let mut retract_obj = vec![u32::MAX; c.object_count()];
    let mut retract_mor = vec![u32::MAX; c.morphism_count()];
    for o in 0..c.object_count() {
        if comps.of_object[o] == comp_index {
            retract_obj[o] = 0;
        }
    }
    for m in 0..c.morphism_count() as u32 {
        let s = c.src(m) as usize;
        let t = c.tgt(m) as usize;
        if comps.of_object[s] != comp_index {
            continue;
        }
        let m_tau = c
            .compose(m, tau[s])
            .ok_or_else(|| Error::invalid("incomplete table under skeletal retraction"))?;
        let r = c
            .compose(inv[tau[t] as usize], m_tau)
            .ok_or_else(|| Error::invalid("incomplete table under skeletal retraction"))?;
        retract_mor[m as usize] = group_cat
            .morphism_index(c.morphism_id(r))
            .ok_or_else(|| Error::invalid("retraction left the vertex group"))?;
    }

    Ok(SkeletalComponent {
        group_cat,
        basepoint: base,
        realization,
        retract_obj,
        retract_mor,
    })
}

/// Exhaustive enumeration of all functors `a -> b`. Exponential; intended
/// for the universal-property tests on categories of a handful of objects.
pub fn all_functors(a: &FinCat, b: &FinCat) -> Vec<FinFunctor> {
    let mut found = Vec::new();
    let n_obj = a.object_count();
    let mut object_map = vec![0u32; n_obj];
    enumerate_objects(a, b, 0, &mut object_map, &mut found);
    found
}

fn enumerate_objects(
    a: &FinCat,
    b: &FinCat,
    at: usize,
    object_map: &mut Vec<u32>,
    found: &mut Vec<FinFunctor>,
) {
    if at == a.object_count() {
        let mut morphism_map = vec![u32::MAX; a.morphism_count()];
        enumerate_morphisms(a, b, 0, object_map, &mut morphism_map, found);
        return;
    }
    for o in 0..b.object_count() as u32 {
        object_map[at] = o;
        enumerate_objects(a, b, at + 1, object_map, found);
    }
}

fn enumerate_morphisms(
    a: &FinCat,
    b: &FinCat,
    at: usize,
    object_map: &[u32],
    morphism_map: &mut Vec<u32>,
    found: &mut Vec<FinFunctor>,
) {
    if at == a.morphism_count() {
        if let Ok(f) = FinFunctor::from_index_maps(
            a.clone(),
            b.clone(),
            object_map.to_vec(),
            morphism_map.clone(),
        ) {
            found.push(f);
        }
        return;
    }
    let m = a.morphism(at as u32);
    let s = object_map[m.src as usize];
    let t = object_map[m.tgt as usize];
    for &cand in b.hom(s, t) {
        morphism_map[at] = cand;
        enumerate_morphisms(a, b, at + 1, object_map, morphism_map, found);
    }
    morphism_map[at] = u32::MAX;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn bc2_is_a_groupoid_delta1_is_not() {
        assert!(is_groupoid(&corpus::cyclic(2)));
        assert!(!is_groupoid(&corpus::delta(1)));
    }

    #[test]
    fn discrete_components_counted() {
        let d = corpus::discrete(&["a", "b", "c"]);
        let comps = components(&d);
        assert_eq!(comps.representative.len(), 3);
    }

    #[test]
    fn skeleton_of_group_is_itself() {
        let g = corpus::cyclic(3);
        let comps = components(&g);
        let inv = inverses(&g).unwrap();
        let sk = skeletal_component(&g, &comps, &inv, 0).unwrap();
        assert_eq!(sk.group_cat, g);
    }

    #[test]
    fn functor_enumeration_counts_monotone_maps() {
        // functors [1] -> [1] are exactly the monotone maps: 3 of them
        let d = corpus::delta(1);
        assert_eq!(all_functors(&d, &d).len(), 3);
        // functors [1] -> BC2: a morphism of BC2 per arrow: 2
        assert_eq!(all_functors(&d, &corpus::cyclic(2)).len(), 2);
    }
}
