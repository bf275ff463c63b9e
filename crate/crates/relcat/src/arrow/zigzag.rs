//! n-arrow path objects: the k-relative category of n-arrow zigzags of
//! weak equivalences with its two end projections and the identity-zigzag
//! section.

use std::collections::HashMap;

use crate::caps::Caps;
use crate::cat::{FinCat, FinFunctor};
use crate::error::{Error, Result};
use crate::ids;
use crate::rel::{KRelStructure, MaskSet};

/// An n-arrow zigzag in the weak equivalences of an ambient category.
///
/// Legs are stored in order `m_1, ..., m_n`; leg `j` connects nodes
/// `Z_j` and `Z_{j-1}`, pointing `Z_j -> Z_{j-1}` for odd `j` and
/// `Z_{j-1} -> Z_j` for even `j` (odd nodes are the sources, matching the
/// displayed shape `Z_2 <- Z_1 -> Z_0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NArrowZigzag {
    pub legs: Vec<u32>,
}

impl NArrowZigzag {
    pub fn n(&self) -> usize {
        self.legs.len()
    }

    /// Nodes `Z_0, ..., Z_n`.
    pub fn nodes(&self, c: &FinCat) -> Vec<u32> {
        let mut nodes = Vec::with_capacity(self.legs.len() + 1);
        nodes.push(self.node_end(c, 0));
        for (j0, &leg) in self.legs.iter().enumerate() {
            let j = j0 + 1;
            nodes.push(if j % 2 == 1 { c.src(leg) } else { c.tgt(leg) });
        }
        nodes
    }

    fn node_end(&self, c: &FinCat, _which: u8) -> u32 {
        // Z_0 is the target of leg 1
        c.tgt(self.legs[0])
    }

    /// The constant zigzag of identity legs at an object.
    pub fn identity_at(c: &FinCat, obj: u32, n: usize) -> NArrowZigzag {
        NArrowZigzag {
            legs: vec![c.identity_of(obj); n],
        }
    }

    pub fn canonical_id(&self, c: &FinCat) -> String {
        let legs: Vec<String> = self
            .legs
            .iter()
            .map(|&m| c.morphism_id(m).to_string())
            .collect();
        ids::zigzag(&legs)
    }

    /// Check legs are composable in the zigzag pattern and lie in the mask.
    pub fn validate(&self, c: &FinCat, w: &MaskSet) -> Result<()> {
        if self.legs.is_empty() {
            return Err(Error::invalid("a zigzag needs n >= 1"));
        }
        for (j0, &leg) in self.legs.iter().enumerate() {
            if !w.contains(leg) {
                return Err(Error::invalid(format!(
                    "leg `{}` is not a weak equivalence",
                    c.morphism_id(leg)
                )));
            }
            if j0 == 0 {
                continue;
            }
            let j = j0 + 1;
            // shared node Z_{j-1} with the previous leg
            let prev = self.legs[j0 - 1];
            let prev_node = if (j - 1) % 2 == 1 { c.src(prev) } else { c.tgt(prev) };
            let this_node = if j % 2 == 1 { c.tgt(leg) } else { c.src(leg) };
            if prev_node != this_node {
                return Err(Error::invalid(format!(
                    "legs {} and {} do not share node Z_{}",
                    j - 1,
                    j,
                    j - 1
                )));
            }
        }
        Ok(())
    }
}

/// A ladder: a map of zigzags, one vertical per node, all squares
/// commuting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ladder {
    /// verticals `w_0, ..., w_n`
    pub verticals: Vec<u32>,
}

impl Ladder {
    pub fn canonical_id(&self, c: &FinCat) -> String {
        let vs: Vec<String> = self
            .verticals
            .iter()
            .map(|&m| c.morphism_id(m).to_string())
            .collect();
        ids::ladder(&vs)
    }
}

/// The n-arrow path object of a k-relative category, with its projections
/// and the identity-zigzag section.
#[derive(Debug, Clone)]
pub struct PathObject {
    pub krel: KRelStructure,
    pub pi_n: FinFunctor,
    pub pi_0: FinFunctor,
    pub j: FinFunctor,
    pub n: usize,
    /// zigzags parallel to the object order of `krel.ambient()`
    pub zigzags: Vec<NArrowZigzag>,
    /// ladders parallel to the morphism order
    pub ladders: Vec<Ladder>,
}

/// Enumerate all n-arrow zigzags in the w-mask.
pub fn enumerate_zigzags(c: &FinCat, w: &MaskSet, n: usize) -> Vec<NArrowZigzag> {
    let mut partial: Vec<Vec<u32>> = w.iter().map(|m| vec![m]).collect();
    for j in 2..=n {
        let mut next = Vec::new();
        for legs in &partial {
            let prev = *legs.last().unwrap();
            let prev_node = if (j - 1) % 2 == 1 { c.src(prev) } else { c.tgt(prev) };
            for m in w.iter() {
                let this_node = if j % 2 == 1 { c.tgt(m) } else { c.src(m) };
                if this_node == prev_node {
                    let mut ext = legs.clone();
                    ext.push(m);
                    next.push(ext);
                }
            }
        }
        partial = next;
    }
    partial.into_iter().map(|legs| NArrowZigzag { legs }).collect()
}

/// All ladders from `a` to `b` with verticals in `mask`.
fn enumerate_ladders(
    c: &FinCat,
    a: &NArrowZigzag,
    b: &NArrowZigzag,
    a_nodes: &[u32],
    b_nodes: &[u32],
    mask: &MaskSet,
    out: &mut Vec<Ladder>,
) {
    let n = a.n();
    let mut verticals: Vec<u32> = Vec::with_capacity(n + 1);
    fn rec(
        c: &FinCat,
        a: &NArrowZigzag,
        b: &NArrowZigzag,
        a_nodes: &[u32],
        b_nodes: &[u32],
        mask: &MaskSet,
        verticals: &mut Vec<u32>,
        out: &mut Vec<Ladder>,
    ) {
        let at = verticals.len();
        if at == a_nodes.len() {
            out.push(Ladder {
                verticals: verticals.clone(),
            });
            return;
        }
        'cand: for &w in c.hom(a_nodes[at], b_nodes[at]) {
            if !mask.contains(w) {
                continue;
            }
            // square with the leg between nodes at-1 and at
            if at >= 1 {
                let j = at; // leg index
                let a_leg = a.legs[j - 1];
                let b_leg = b.legs[j - 1];
                let (lhs, rhs) = if j % 2 == 1 {
                    // leg: Z_j -> Z_{j-1}; square: w_{j-1} . a_leg = b_leg . w_j
                    (c.compose(verticals[j - 1], a_leg), c.compose(b_leg, w))
                } else {
                    // leg: Z_{j-1} -> Z_j; square: w_j . a_leg = b_leg . w_{j-1}
                    (c.compose(w, a_leg), c.compose(b_leg, verticals[j - 1]))
                };
                if lhs.is_none() || lhs != rhs {
                    continue 'cand;
                }
            }
            verticals.push(w);
            rec(c, a, b, a_nodes, b_nodes, mask, verticals, out);
            verticals.pop();
        }
    }
    rec(c, a, b, a_nodes, b_nodes, mask, &mut verticals, out);
}

/// Build the n-arrow path object `Z^n^Z`.
///
/// Maps in the `w` and `v_i` wide subcategories are the ladders with
/// verticals in the corresponding mask of `Z`; the ambient maps are the
/// finite composites of `v_i`-ladders (for k <= 1 this is every commuting
/// ladder of ambient verticals).
pub fn n_arrow_path(z: &KRelStructure, n: usize, caps: &Caps) -> Result<PathObject> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let c = z.ambient();
    let zigzags = enumerate_zigzags(c, z.w_mask(), n);
    caps.check_objects("n-arrow path object", zigzags.len())?;
    let nodes: Vec<Vec<u32>> = zigzags.iter().map(|zz| zz.nodes(c)).collect();

    // ambient ladders
    let k = z.k();
    let mut ladders: Vec<(u32, u32, Ladder)> = Vec::new();
    let mut ladder_pos: HashMap<(u32, u32, Vec<u32>), u32> = HashMap::new();
    if k <= 1 {
        // every commuting ladder with ambient verticals
        let full = MaskSet::full(c);
        let mut scratch = Vec::new();
        for (ai, a) in zigzags.iter().enumerate() {
            for (bi, b) in zigzags.iter().enumerate() {
                scratch.clear();
                enumerate_ladders(c, a, b, &nodes[ai], &nodes[bi], &full, &mut scratch);
                for ladder in scratch.drain(..) {
                    caps.check_morphisms("n-arrow path object", ladders.len() + 1)?;
                    ladder_pos.insert(
                        (ai as u32, bi as u32, ladder.verticals.clone()),
                        ladders.len() as u32,
                    );
                    ladders.push((ai as u32, bi as u32, ladder));
                }
            }
        }
    } else {
        // start from the v_i ladders and close under composition
        let mut frontier: Vec<u32> = Vec::new();
        for i in 0..k {
            let mut scratch = Vec::new();
            for (ai, a) in zigzags.iter().enumerate() {
                for (bi, b) in zigzags.iter().enumerate() {
                    scratch.clear();
                    enumerate_ladders(c, a, b, &nodes[ai], &nodes[bi], z.v_mask(i), &mut scratch);
                    for ladder in scratch.drain(..) {
                        let key = (ai as u32, bi as u32, ladder.verticals.clone());
                        if !ladder_pos.contains_key(&key) {
                            caps.check_morphisms("n-arrow path object", ladders.len() + 1)?;
                            ladder_pos.insert(key, ladders.len() as u32);
                            frontier.push(ladders.len() as u32);
                            ladders.push((ai as u32, bi as u32, ladder));
                        }
                    }
                }
            }
        }
        // closure under composition
        while let Some(fi) = frontier.pop() {
            let (fa, fb, f_lad) = ladders[fi as usize].clone();
            let candidates: Vec<u32> = (0..ladders.len() as u32).collect();
            for gi in candidates {
                for (first, second) in [(fi, gi), (gi, fi)] {
                    let (sa, sb, s_lad) = ladders[first as usize].clone();
                    let (ta, tb, t_lad) = ladders[second as usize].clone();
                    if sb != ta {
                        continue;
                    }
                    let composed: Option<Vec<u32>> = s_lad
                        .verticals
                        .iter()
                        .zip(&t_lad.verticals)
                        .map(|(&x, &y)| c.compose(y, x))
                        .collect();
                    if let Some(vs) = composed {
                        let key = (sa, tb, vs.clone());
                        if !ladder_pos.contains_key(&key) {
                            caps.check_morphisms("n-arrow path object", ladders.len() + 1)?;
                            ladder_pos.insert(key, ladders.len() as u32);
                            frontier.push(ladders.len() as u32);
                            ladders.push((sa, tb, Ladder { verticals: vs }));
                        }
                    }
                }
            }
            let _ = (fa, fb, f_lad);
        }
    }

    // assemble the category
    let obj_ids: Vec<String> = zigzags.iter().map(|zz| zz.canonical_id(c)).collect();
    let mor_entries: Vec<(String, u32, u32)> = ladders
        .iter()
        .map(|(a, b, lad)| {
            (
                format!(
                    "{}@{}>{}",
                    lad.canonical_id(c),
                    ids::esc(&obj_ids[*a as usize]),
                    ids::esc(&obj_ids[*b as usize])
                ),
                *a,
                *b,
            )
        })
        .collect();
    let identity: Vec<u32> = (0..zigzags.len())
        .map(|oi| {
            let verticals: Vec<u32> = nodes[oi].iter().map(|&o| c.identity_of(o)).collect();
            ladder_pos[&(oi as u32, oi as u32, verticals)]
        })
        .collect();

    // composition: group by source zigzag of the second factor
    let mut by_src: HashMap<u32, Vec<u32>> = HashMap::new();
    for (i, (a, _, _)) in ladders.iter().enumerate() {
        by_src.entry(*a).or_default().push(i as u32);
    }
    let mut compose_entries: Vec<(u32, u32, u32)> = Vec::new();
    for (fi, (fa, fb, f_lad)) in ladders.iter().enumerate() {
        if let Some(outs) = by_src.get(fb) {
            for &gi in outs {
                let (_, gb, g_lad) = &ladders[gi as usize];
                let composed: Option<Vec<u32>> = f_lad
                    .verticals
                    .iter()
                    .zip(&g_lad.verticals)
                    .map(|(&x, &y)| c.compose(y, x))
                    .collect();
                match composed.and_then(|vs| ladder_pos.get(&(*fa, *gb, vs)).copied()) {
                    Some(ci) => compose_entries.push((gi, fi as u32, ci)),
                    None => {
                        return Err(Error::invalid(
                            "path object not closed under composition",
                        ))
                    }
                }
            }
        }
    }

    let ambient = FinCat::from_index_parts(obj_ids.clone(), mor_entries, identity, compose_entries)?;

    // masks over the sorted morphism order
    let sorted_pos = |old: u32| -> u32 {
        let (a, b, lad) = &ladders[old as usize];
        let id = format!(
            "{}@{}>{}",
            lad.canonical_id(c),
            ids::esc(&obj_ids[*a as usize]),
            ids::esc(&obj_ids[*b as usize])
        );
        ambient.morphism_index(&id).unwrap()
    };
    let mut w_mask = MaskSet::empty(ambient.morphism_count());
    let mut v_masks = vec![MaskSet::empty(ambient.morphism_count()); k];
    for (old, (_, _, lad)) in ladders.iter().enumerate() {
        let new = sorted_pos(old as u32);
        if lad.verticals.iter().all(|&v| z.w_mask().contains(v)) {
            w_mask.set(new);
        }
        for i in 0..k {
            if lad.verticals.iter().all(|&v| z.v_mask(i).contains(v)) {
                v_masks[i].set(new);
            }
        }
    }
    let krel = KRelStructure::new(ambient.clone(), v_masks, w_mask)?;

    // projections and the identity-zigzag section
    let zz_index: HashMap<String, usize> = obj_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i))
        .collect();
    let mut pi_n_obj = vec![0u32; ambient.object_count()];
    let mut pi_0_obj = vec![0u32; ambient.object_count()];
    for (oi, oid) in ambient.objects().iter().enumerate() {
        let zi = zz_index[oid];
        pi_n_obj[oi] = nodes[zi][n];
        pi_0_obj[oi] = nodes[zi][0];
    }
    let mut pi_n_mor = vec![0u32; ambient.morphism_count()];
    let mut pi_0_mor = vec![0u32; ambient.morphism_count()];
    for (old, (_, _, lad)) in ladders.iter().enumerate() {
        let new = sorted_pos(old as u32);
        pi_n_mor[new as usize] = lad.verticals[n];
        pi_0_mor[new as usize] = lad.verticals[0];
    }
    let pi_n = FinFunctor::from_index_maps(ambient.clone(), c.clone(), pi_n_obj, pi_n_mor)?;
    let pi_0 = FinFunctor::from_index_maps(ambient.clone(), c.clone(), pi_0_obj, pi_0_mor)?;

    let mut j_obj = vec![0u32; c.object_count()];
    for o in 0..c.object_count() as u32 {
        let zz = NArrowZigzag::identity_at(c, o, n);
        let id = zz.canonical_id(c);
        j_obj[o as usize] = ambient
            .object_index(&id)
            .ok_or_else(|| Error::invalid("identity zigzag missing"))?;
    }
    let mut j_mor = vec![0u32; c.morphism_count()];
    for m in 0..c.morphism_count() as u32 {
        let src_zz = NArrowZigzag::identity_at(c, c.src(m), n);
        let tgt_zz = NArrowZigzag::identity_at(c, c.tgt(m), n);
        let lad = Ladder {
            verticals: vec![m; n + 1],
        };
        let id = format!(
            "{}@{}>{}",
            lad.canonical_id(c),
            ids::esc(&src_zz.canonical_id(c)),
            ids::esc(&tgt_zz.canonical_id(c))
        );
        j_mor[m as usize] = ambient.morphism_index(&id).ok_or_else(|| {
            Error::invalid(format!(
                "constant ladder on `{}` is not an ambient map of the path object",
                c.morphism_id(m)
            ))
        })?;
    }
    let j = FinFunctor::from_index_maps(c.clone(), ambient.clone(), j_obj, j_mor)?;

    // store zigzags and ladders in the sorted order
    let mut zig_sorted = vec![NArrowZigzag { legs: vec![] }; zigzags.len()];
    for (zi, zz) in zigzags.iter().enumerate() {
        let new = ambient.object_index(&obj_ids[zi]).unwrap();
        zig_sorted[new as usize] = zz.clone();
    }
    let mut lad_sorted = vec![
        Ladder {
            verticals: vec![]
        };
        ladders.len()
    ];
    for (old, (_, _, lad)) in ladders.iter().enumerate() {
        lad_sorted[sorted_pos(old as u32) as usize] = lad.clone();
    }

    Ok(PathObject {
        krel,
        pi_n,
        pi_0,
        j,
        n,
        zigzags: zig_sorted,
        ladders: lad_sorted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_cat;
    use crate::corpus;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn delta1_maximal_one_arrow_path_has_three_objects() {
        let z = corpus::maximal(&corpus::delta(1));
        let p = n_arrow_path(&z, 1, &caps()).unwrap();
        assert_eq!(p.krel.ambient().object_count(), 3);
        assert!(validate_cat(p.krel.ambient()).is_valid());
    }

    #[test]
    fn bc2_two_arrow_path_has_four_objects() {
        // pairs of legs out of Z_1: 2 x 2
        let z = corpus::maximal(&corpus::cyclic(2));
        let p = n_arrow_path(&z, 2, &caps()).unwrap();
        assert_eq!(p.krel.ambient().object_count(), 4);
        assert!(validate_cat(p.krel.ambient()).is_valid());
    }

    #[test]
    fn section_retracts_to_identity_bit_exact() {
        for (_, z) in [
            ("delta1", corpus::maximal(&corpus::delta(1))),
            ("bc2", corpus::maximal(&corpus::cyclic(2))),
            ("delta1_min", corpus::minimal(&corpus::delta(1))),
        ] {
            for n in 1..=3usize {
                let p = n_arrow_path(&z, n, &caps()).unwrap();
                let id = FinFunctor::identity(z.ambient());
                assert_eq!(p.pi_n.compose_with(&p.j).unwrap(), id);
                assert_eq!(p.pi_0.compose_with(&p.j).unwrap(), id);
            }
        }
    }

    #[test]
    fn minimal_structure_paths_are_identity_zigzags() {
        // w = identities: the only zigzags are the identity ones
        let z = corpus::minimal(&corpus::delta(1));
        let p = n_arrow_path(&z, 2, &caps()).unwrap();
        assert_eq!(p.krel.ambient().object_count(), 2);
    }

    #[test]
    fn path_object_of_square_k2_keeps_mask_containment() {
        let z = corpus::square_k2();
        let p = n_arrow_path(&z, 1, &caps()).unwrap();
        // constructor validates closure and containment; spot-check w
        assert!(p.krel.w_mask().count() >= p.krel.ambient().object_count());
        assert!(validate_cat(p.krel.ambient()).is_valid());
    }

    #[test]
    fn bc4_three_arrow_path_sizes() {
        // zigzags: |G|^3 objects; each hom-set has |G| ladders
        let z = corpus::maximal(&corpus::cyclic(4));
        let p = n_arrow_path(&z, 3, &caps()).unwrap();
        assert_eq!(p.krel.ambient().object_count(), 64);
        assert_eq!(p.krel.ambient().morphism_count(), 64 * 64 * 4);
    }
}
