//! The higher equivalence functor `w_*`: at each multidimension
//! `p_* = (p_k, ..., p_1)` the category of grid diagrams
//! `p_k^{v_k} x ... x p_1^{v_1} -> C` with natural weak equivalences as maps.

use std::collections::HashMap;

use super::grid::{enumerate_grid_diagrams, grid_points, GridDiagram};
use super::structure::{KRelStructure, MaskSet};
use crate::caps::Caps;
use crate::cat::{CatBuilder, FinCat, FinFunctor};
use crate::error::{Error, Result};
use crate::ids;

/// A multidimension `(p_k, ..., p_1)` in display order, optionally extended
/// by a nerve degree `q` in the final (w) direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiDim {
    pub p_star: Vec<usize>,
    pub q: Option<usize>,
}

impl MultiDim {
    pub fn new(p_star: Vec<usize>) -> MultiDim {
        MultiDim { p_star, q: None }
    }

    pub fn with_q(p_star: Vec<usize>, q: usize) -> MultiDim {
        MultiDim {
            p_star,
            q: Some(q),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut d = self.p_star.clone();
        if let Some(q) = self.q {
            d.push(q);
        }
        d
    }

    pub fn within(&self, bound: usize) -> bool {
        self.dims().iter().all(|&d| d <= bound)
    }
}

/// Step masks in display order for the pure v-shape product
/// `p_k^{v_k} x ... x p_1^{v_1}`: direction 0 carries `v_k`, the last
/// carries `v_1`.
fn v_shape_masks<'a>(c: &'a KRelStructure) -> Vec<Option<&'a MaskSet>> {
    let k = c.k();
    (0..k).map(|d| Some(c.v_mask(k - 1 - d))).collect()
}

/// The grid objects of `w_{p_*} C`.
pub fn w_star_objects(c: &KRelStructure, p_star: &[usize]) -> Result<Vec<GridDiagram>> {
    if p_star.len() != c.k() {
        return Err(Error::invalid(format!(
            "multidimension arity {} does not match k = {}",
            p_star.len(),
            c.k()
        )));
    }
    Ok(enumerate_grid_diagrams(
        c.ambient(),
        p_star,
        &v_shape_masks(c),
    ))
}

/// `w_{p_*} C` as a finite category: objects are the grid diagrams, maps
/// are the natural transformations with every component a weak equivalence.
pub fn w_star_at(c: &KRelStructure, p_star: &[usize], caps: &Caps) -> Result<FinCat> {
    let ambient = c.ambient();
    let diagrams = w_star_objects(c, p_star)?;
    caps.check_objects("w_star level", diagrams.len())?;

    let obj_ids: Vec<String> = diagrams.iter().map(|g| g.canonical_id(ambient)).collect();
    let points = grid_points(p_star);

    let mut builder = CatBuilder::new();
    for id in &obj_ids {
        builder.object(id.clone());
    }

    // natural weak equivalences F -> G: one w-component per grid point,
    // commuting with every unit step of the diagrams
    let mut transfs: Vec<(usize, usize, Vec<u32>)> = Vec::new();
    for (fi, f) in diagrams.iter().enumerate() {
        for (gi, g) in diagrams.iter().enumerate() {
            enumerate_transformations(ambient, c.w_mask(), f, g, &points, &mut |comps| {
                transfs.push((fi, gi, comps.to_vec()));
            });
        }
    }
    caps.check_morphisms("w_star level", transfs.len())?;

    let nt_id = |fi: usize, gi: usize, comps: &[u32]| -> String {
        let comp_ids: Vec<&str> = comps.iter().map(|&m| ambient.morphism_id(m)).collect();
        format!(
            "nt[{}|{}|{}]",
            ids::esc(&obj_ids[fi]),
            ids::esc(&obj_ids[gi]),
            comp_ids
                .iter()
                .map(|s| ids::esc(s))
                .collect::<Vec<_>>()
                .join(",")
        )
    };

    let mut index: HashMap<(usize, usize, Vec<u32>), String> = HashMap::new();
    for (fi, gi, comps) in &transfs {
        let id = nt_id(*fi, *gi, comps);
        builder.morphism(id.clone(), obj_ids[*fi].clone(), obj_ids[*gi].clone());
        index.insert((*fi, *gi, comps.clone()), id);
    }
    for (fi, id) in obj_ids.iter().enumerate() {
        let comps: Vec<u32> = diagrams[fi]
            .objects
            .iter()
            .map(|&o| ambient.identity_of(o))
            .collect();
        builder.identity(id.clone(), index[&(fi, fi, comps)].clone());
    }
    for (fi, gi, f_comps) in &transfs {
        for (gi2, hi, g_comps) in &transfs {
            if gi2 != gi {
                continue;
            }
            let comps: Vec<u32> = f_comps
                .iter()
                .zip(g_comps)
                .map(|(&a, &b)| ambient.compose(b, a).expect("total table"))
                .collect();
            builder.compose(
                index[&(*gi2, *hi, g_comps.clone())].clone(),
                index[&(*fi, *gi, f_comps.clone())].clone(),
                index[&(*fi, *hi, comps)].clone(),
            );
        }
    }
    builder.build()
}

fn enumerate_transformations(
    c: &FinCat,
    w: &MaskSet,
    f: &GridDiagram,
    g: &GridDiagram,
    points: &[Vec<usize>],
    emit: &mut dyn FnMut(&[u32]),
) {
    let n = points.len();
    let mut comps: Vec<u32> = Vec::with_capacity(n);
    fn rec(
        c: &FinCat,
        w: &MaskSet,
        f: &GridDiagram,
        g: &GridDiagram,
        points: &[Vec<usize>],
        comps: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32]),
    ) {
        let at = comps.len();
        if at == points.len() {
            emit(comps);
            return;
        }
        'cand: for &m in c.hom(f.objects[at], g.objects[at]) {
            if !w.contains(m) {
                continue;
            }
            // naturality against every assigned predecessor step
            for d in 0..f.dims.len() {
                if points[at][d] == 0 {
                    continue;
                }
                let mut q = points[at].clone();
                q[d] -= 1;
                let prev = super::grid::point_rank(&f.dims, &q);
                let f_step = f.steps[d][prev].expect("step");
                let g_step = g.steps[d][prev].expect("step");
                let left = c.compose(m, f_step);
                let right = c.compose(g_step, comps[prev]);
                if left.is_none() || left != right {
                    continue 'cand;
                }
            }
            comps.push(m);
            rec(c, w, f, g, points, comps, emit);
            comps.pop();
        }
    }
    rec(c, w, f, g, points, &mut comps, emit);
}

/// The functor `w_{p_*} h` induced by a relative functor `h: C -> D`.
pub fn w_star_map(
    c: &KRelStructure,
    d: &KRelStructure,
    h: &FinFunctor,
    p_star: &[usize],
    caps: &Caps,
) -> Result<FinFunctor> {
    if !c.is_relative_functor(h, d) {
        return Err(Error::invalid("w_star_map needs a relative functor"));
    }
    let wc = w_star_at(c, p_star, caps)?;
    let wd = w_star_at(d, p_star, caps)?;
    w_star_map_into(c, d, h, p_star, &wc, &wd)
}

/// Same as [`w_star_map`] but against prebuilt levels.
pub fn w_star_map_into(
    c: &KRelStructure,
    d: &KRelStructure,
    h: &FinFunctor,
    p_star: &[usize],
    wc: &FinCat,
    wd: &FinCat,
) -> Result<FinFunctor> {
    let cd = c.ambient();
    let dd = d.ambient();
    let c_diagrams = w_star_objects(c, p_star)?;

    let mut object_map = vec![u32::MAX; wc.object_count()];
    let mut morphism_map = vec![u32::MAX; wc.morphism_count()];

    // map each diagram through h
    let mut image_of: HashMap<String, String> = HashMap::new();
    for g in &c_diagrams {
        let img = GridDiagram {
            dims: g.dims.clone(),
            objects: g.objects.iter().map(|&o| h.on_object(o)).collect(),
            steps: g
                .steps
                .iter()
                .map(|per| per.iter().map(|s| s.map(|m| h.on_morphism(m))).collect())
                .collect(),
        };
        image_of.insert(g.canonical_id(cd), img.canonical_id(dd));
    }
    for (oi, oid) in wc.objects().iter().enumerate() {
        let img = &image_of[oid];
        object_map[oi] = wd
            .object_index(img)
            .ok_or_else(|| Error::invalid(format!("image diagram `{img}` missing")))?;
    }
    // morphism ids are nt[src|tgt|components]; rebuild the image id from data
    for mi in 0..wc.morphism_count() as u32 {
        let m = wc.morphism(mi);
        let src_img = &image_of[wc.object_id(m.src)];
        let tgt_img = &image_of[wc.object_id(m.tgt)];
        let comps = parse_nt_components(&m.id)
            .ok_or_else(|| Error::invalid(format!("unparseable nt id `{}`", m.id)))?;
        let mapped: Vec<String> = comps
            .iter()
            .map(|cid| {
                let idx = cd
                    .morphism_index(cid)
                    .ok_or_else(|| Error::invalid(format!("unknown component `{cid}`")))?;
                Ok(dd.morphism_id(h.on_morphism(idx)).to_string())
            })
            .collect::<Result<_>>()?;
        let img_id = format!(
            "nt[{}|{}|{}]",
            ids::esc(src_img),
            ids::esc(tgt_img),
            mapped.iter().map(|s| ids::esc(s)).collect::<Vec<_>>().join(",")
        );
        morphism_map[mi as usize] = wd
            .morphism_index(&img_id)
            .ok_or_else(|| Error::invalid(format!("image transformation `{img_id}` missing")))?;
    }
    FinFunctor::from_index_maps(wc.clone(), wd.clone(), object_map, morphism_map)
}

/// Components of an `nt[src|tgt|c1,c2,...]` id, unescaped.
pub fn parse_nt_components(id: &str) -> Option<Vec<String>> {
    let inner = id.strip_prefix("nt[")?.strip_suffix(']')?;
    let fields = split_top(inner, '|');
    if fields.len() != 3 {
        return None;
    }
    Some(split_top(&fields[2], ','))
}

fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut escaped = false;
    for ch in s.chars() {
        if escaped {
            cur.push(ch);
            escaped = false;
        } else if ch == '\\' {
            escaped = true;
        } else if ch == sep {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_cat;
    use crate::corpus;

    #[test]
    fn empty_multidimension_recovers_objects_and_w() {
        // p_* = (0): objects of C, morphisms exactly the w mask
        let c = corpus::maximal(&corpus::delta(1));
        let w0 = w_star_at(&c, &[0], &Caps::default()).unwrap();
        assert_eq!(w0.object_count(), 2);
        assert_eq!(w0.morphism_count(), 3);

        let cmin = corpus::minimal(&corpus::delta(1));
        let w0 = w_star_at(&cmin, &[0], &Caps::default()).unwrap();
        assert_eq!(w0.object_count(), 2);
        assert_eq!(w0.morphism_count(), cmin.w_mask().count());
    }

    #[test]
    fn delta1_maximal_level_one() {
        // objects: the 3 morphisms of delta1 (functors [1] -> [1]);
        // maps: pointwise-<= pairs of monotone maps, 6 in total by
        // exhaustive enumeration (3 identities + 3 others)
        let c = corpus::maximal(&corpus::delta(1));
        let w1 = w_star_at(&c, &[1], &Caps::default()).unwrap();
        assert_eq!(w1.object_count(), 3);

        let mut oracle = 0;
        let monotone: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 1)];
        for f in &monotone {
            for g in &monotone {
                if f.0 <= g.0 && f.1 <= g.1 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(oracle, 6);
        assert_eq!(w1.morphism_count(), oracle);
        assert!(validate_cat(&w1).is_valid());
    }

    #[test]
    fn minimal_structure_gives_discrete_levels() {
        let c = corpus::minimal(&corpus::delta(1));
        let w1 = w_star_at(&c, &[1], &Caps::default()).unwrap();
        assert_eq!(w1.object_count(), 3);
        assert_eq!(w1.morphism_count(), 3); // identities only
    }

    #[test]
    fn w_star_is_functorial_on_relative_functors() {
        let d1 = corpus::maximal(&corpus::delta(1));
        let d2 = corpus::maximal(&corpus::delta(2));
        // inclusion delta1 -> delta2 via 0,1
        let f = FinFunctor::new(
            d1.ambient().clone(),
            d2.ambient().clone(),
            &[("0".into(), "0".into()), ("1".into(), "1".into())],
            &[
                ("0->0".into(), "0->0".into()),
                ("0->1".into(), "0->1".into()),
                ("1->1".into(), "1->1".into()),
            ],
        )
        .unwrap();
        let caps = Caps::default();
        let wf = w_star_map(&d1, &d2, &f, &[1], &caps).unwrap();
        // composition with the identity is preserved
        let id1 = FinFunctor::identity(wf.source());
        assert_eq!(wf.compose_with(&id1).unwrap(), wf);
    }
}
