//! The nerve functors: classical nerve of a category, the simplicial nerve
//! of a relative category, and the k-simplicial nerve of a k-relative
//! category, together with induced simplicial maps.

use std::collections::HashMap;

use super::sset::{all_degrees, degree_rank, MultiSSetBuilder, TruncMultiSSet};
use crate::caps::Caps;
use crate::cat::{count_chains, FinCat, FinFunctor};
use crate::error::{Error, Result};
use crate::ids;
use crate::rel::grid::{
    degeneracy_map, enumerate_grid_diagrams, face_map, reindex, GridDiagram,
};
use crate::rel::{KRelStructure, MaskSet};

/// A chain `x_0 -> x_1 -> ... -> x_d` as (start object, morphisms).
pub type Chain = (u32, Vec<u32>);

pub fn chain_id(c: &FinCat, chain: &Chain) -> String {
    if chain.1.is_empty() {
        ids::chain0(c.object_id(chain.0))
    } else {
        let refs: Vec<&str> = chain.1.iter().map(|&m| c.morphism_id(m)).collect();
        ids::chain(&refs)
    }
}

pub fn chain_face(c: &FinCat, chain: &Chain, i: usize) -> Chain {
    let (start, mors) = chain;
    let d = mors.len();
    debug_assert!(d >= 1 && i <= d);
    if i == 0 {
        (c.tgt(mors[0]), mors[1..].to_vec())
    } else if i == d {
        (*start, mors[..d - 1].to_vec())
    } else {
        let mut out = Vec::with_capacity(d - 1);
        out.extend_from_slice(&mors[..i - 1]);
        out.push(c.compose(mors[i], mors[i - 1]).expect("total table"));
        out.extend_from_slice(&mors[i + 1..]);
        (*start, out)
    }
}

pub fn chain_degen(c: &FinCat, chain: &Chain, i: usize) -> Chain {
    let (start, mors) = chain;
    let obj = if i == 0 { *start } else { c.tgt(mors[i - 1]) };
    let mut out = Vec::with_capacity(mors.len() + 1);
    out.extend_from_slice(&mors[..i]);
    out.push(c.identity_of(obj));
    out.extend_from_slice(&mors[i..]);
    (*start, out)
}

/// Classical nerve, returning the chain data per level alongside the set.
pub fn nerve_with_chains(
    c: &FinCat,
    bound: usize,
    caps: &Caps,
) -> Result<(TruncMultiSSet, Vec<Vec<Chain>>)> {
    let objects: Vec<u32> = (0..c.object_count() as u32).collect();
    nerve_restricted(c, &objects, bound, caps)
}

/// Classical nerve of the full subcategory on the given objects.
pub fn nerve_restricted(
    c: &FinCat,
    objects: &[u32],
    bound: usize,
    caps: &Caps,
) -> Result<(TruncMultiSSet, Vec<Vec<Chain>>)> {
    let estimate = count_chains(c, objects, bound);
    if estimate > caps.max_cells as u128 {
        return Err(Error::Quota {
            what: "nerve cells",
            attempted: usize::MAX,
            cap: caps.max_cells,
        });
    }
    let keep: std::collections::HashSet<u32> = objects.iter().copied().collect();

    let mut per_degree: Vec<Vec<Chain>> = Vec::with_capacity(bound + 1);
    let mut sorted_objects = objects.to_vec();
    sorted_objects.sort();
    per_degree.push(sorted_objects.iter().map(|&o| (o, Vec::new())).collect());
    for d in 1..=bound {
        let mut next: Vec<Chain> = Vec::new();
        for (start, mors) in &per_degree[d - 1] {
            let end = if mors.is_empty() {
                *start
            } else {
                c.tgt(*mors.last().unwrap())
            };
            for &m in c.out_of(end) {
                if keep.contains(&c.tgt(m)) {
                    let mut ext = mors.clone();
                    ext.push(m);
                    next.push((*start, ext));
                }
            }
        }
        per_degree.push(next);
    }

    let mut b = MultiSSetBuilder::new(1, bound);
    for (d, chains) in per_degree.iter().enumerate() {
        for chain in chains {
            let id = chain_id(c, chain);
            let faces = if d == 0 {
                vec![vec![]]
            } else {
                vec![(0..=d).map(|i| chain_id(c, &chain_face(c, chain, i))).collect()]
            };
            let degens = if d == bound {
                vec![vec![]]
            } else {
                vec![(0..=d).map(|i| chain_id(c, &chain_degen(c, chain, i))).collect()]
            };
            b.add_cell(&[d], id, faces, degens);
        }
    }
    Ok((b.build()?, per_degree))
}

pub fn nerve(c: &FinCat, bound: usize, caps: &Caps) -> Result<TruncMultiSSet> {
    Ok(nerve_with_chains(c, bound, caps)?.0)
}

/// A level-indexed simplicial map between two multisimplicial sets of the
/// same shape: per level rank, the image cell index of every source cell.
#[derive(Debug, Clone)]
pub struct SSetMap {
    pub maps: Vec<Vec<u32>>,
}

/// The simplicial map `N(f)` between two prebuilt nerves (possibly
/// restricted to components), given the chain data of the source.
pub fn nerve_map(
    f: &FinFunctor,
    src: &TruncMultiSSet,
    src_chains: &[Vec<Chain>],
    tgt: &TruncMultiSSet,
) -> Result<SSetMap> {
    let tc = f.target();
    let mut maps = vec![Vec::new(); src.levels.len()];
    for (d, chains) in src_chains.iter().enumerate() {
        let rank = degree_rank(src.bound, &[d]);
        let mut level_map = Vec::with_capacity(chains.len());
        for chain in chains {
            let image: Chain = (
                f.on_object(chain.0),
                chain.1.iter().map(|&m| f.on_morphism(m)).collect(),
            );
            let id = chain_id(tc, &image);
            let idx = tgt.levels[rank]
                .index
                .get(&id)
                .ok_or_else(|| Error::invalid(format!("nerve map misses cell `{id}`")))?;
            level_map.push(*idx);
        }
        maps[rank] = level_map;
    }
    Ok(SSetMap { maps })
}

fn shape_masks<'a>(c: &'a KRelStructure) -> Vec<Option<&'a MaskSet>> {
    let k = c.k();
    let mut masks: Vec<Option<&MaskSet>> = (0..k).map(|d| Some(c.v_mask(k - 1 - d))).collect();
    masks.push(Some(c.w_mask()));
    masks
}

/// The k-simplicial nerve: in multidimension `(p_k, ..., p_1, q)` the grid
/// diagrams with direction-`v_i` steps in `v_i C` and q-steps in `w C`.
/// Returns the grid data per level alongside the set.
pub fn k_simplicial_nerve_with_grids(
    c: &KRelStructure,
    bound: usize,
    caps: &Caps,
) -> Result<(TruncMultiSSet, HashMap<Vec<usize>, Vec<GridDiagram>>)> {
    let arity = c.k() + 1;
    let masks = shape_masks(c);
    build_grid_sset(c.ambient(), arity, bound, caps, &masks)
}

pub fn k_simplicial_nerve(
    c: &KRelStructure,
    bound: usize,
    caps: &Caps,
) -> Result<TruncMultiSSet> {
    Ok(k_simplicial_nerve_with_grids(c, bound, caps)?.0)
}

/// The simplicial nerve of a relative category (k = 1): in bidimension
/// `(p, q)` the maps `p^v x q^w -> C`, i.e. grids with unconstrained
/// p-steps and weak-equivalence q-steps.
pub fn simplicial_nerve(c: &KRelStructure, bound: usize, caps: &Caps) -> Result<TruncMultiSSet> {
    if c.k() != 1 {
        return Err(Error::invalid("simplicial_nerve expects k = 1"));
    }
    let masks: Vec<Option<&MaskSet>> = vec![None, Some(c.w_mask())];
    Ok(build_grid_sset(c.ambient(), 2, bound, caps, &masks)?.0)
}

fn build_grid_sset(
    ambient: &FinCat,
    arity: usize,
    bound: usize,
    caps: &Caps,
    masks: &[Option<&MaskSet>],
) -> Result<(TruncMultiSSet, HashMap<Vec<usize>, Vec<GridDiagram>>)> {
    let degrees = all_degrees(arity, bound);
    let mut grids: HashMap<Vec<usize>, Vec<GridDiagram>> = HashMap::new();
    let mut total = 0usize;
    for degree in &degrees {
        let found = enumerate_grid_diagrams(ambient, degree, masks);
        total += found.len();
        caps.check_cells("k-simplicial nerve", total)?;
        grids.insert(degree.clone(), found);
    }
    let mut b = MultiSSetBuilder::new(arity, bound);
    for degree in &degrees {
        for g in &grids[degree] {
            let id = g.canonical_id(ambient);
            let mut faces: Vec<Vec<String>> = Vec::with_capacity(arity);
            let mut degens: Vec<Vec<String>> = Vec::with_capacity(arity);
            for dir in 0..arity {
                let p = degree[dir];
                if p > 0 {
                    faces.push(
                        (0..=p)
                            .map(|i| {
                                reindex(ambient, g, dir, &face_map(p, i)).canonical_id(ambient)
                            })
                            .collect(),
                    );
                } else {
                    faces.push(vec![]);
                }
                if p < bound {
                    degens.push(
                        (0..=p)
                            .map(|i| {
                                reindex(ambient, g, dir, &degeneracy_map(p, i))
                                    .canonical_id(ambient)
                            })
                            .collect(),
                    );
                } else {
                    degens.push(vec![]);
                }
            }
            b.add_cell(degree, id, faces, degens);
        }
    }
    Ok((b.build()?, grids))
}

/// The simplicial map induced on k-simplicial nerves by a relative functor.
pub fn k_nerve_map(
    h: &FinFunctor,
    src_rel: &KRelStructure,
    src: &TruncMultiSSet,
    src_grids: &HashMap<Vec<usize>, Vec<GridDiagram>>,
    tgt: &TruncMultiSSet,
) -> Result<SSetMap> {
    let _ = src_rel;
    let td = h.target();
    let mut maps = vec![Vec::new(); src.levels.len()];
    for (degree, grids) in src_grids {
        let rank = degree_rank(src.bound, degree);
        let mut level_map = vec![0u32; grids.len()];
        for g in grids {
            let img = GridDiagram {
                dims: g.dims.clone(),
                objects: g.objects.iter().map(|&o| h.on_object(o)).collect(),
                steps: g
                    .steps
                    .iter()
                    .map(|per| per.iter().map(|s| s.map(|m| h.on_morphism(m))).collect())
                    .collect(),
            };
            let src_id = g.canonical_id(h.source());
            let src_idx = src.levels[rank].index[&src_id];
            let img_id = img.canonical_id(td);
            let idx = tgt.levels[rank]
                .index
                .get(&img_id)
                .ok_or_else(|| Error::invalid(format!("k-nerve map misses `{img_id}`")))?;
            level_map[src_idx as usize] = *idx;
        }
        maps[rank] = level_map;
    }
    Ok(SSetMap { maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn terminal_nerve_has_one_cell_per_degree() {
        let n = nerve(&corpus::terminal(), 3, &caps()).unwrap();
        for d in 0..=3usize {
            assert_eq!(n.level(&[d]).cells.len(), 1);
        }
        assert_eq!(n.nondegenerate_count(), 1);
        n.validate().unwrap();
    }

    #[test]
    fn bc2_nerve_counts() {
        // oracle: chains over the 2-element table; the only nondegenerate
        // d-chain is the all-g one
        let n = nerve(&corpus::cyclic(2), 4, &caps()).unwrap();
        for d in 0..=4usize {
            assert_eq!(n.level(&[d]).cells.len(), 1 << d);
            let nondeg = n.level(&[d])
                .degenerate
                .iter()
                .filter(|&&x| !x)
                .count();
            assert_eq!(nondeg, 1, "degree {d}");
        }
        n.validate().unwrap();
    }

    #[test]
    fn delta1_nerve_nondegenerate_counts() {
        let n = nerve(&corpus::delta(1), 2, &caps()).unwrap();
        let counts: Vec<usize> = (0..=2usize)
            .map(|d| {
                n.level(&[d])
                    .degenerate
                    .iter()
                    .filter(|&&x| !x)
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![2, 1, 0]);
        n.validate().unwrap();
    }

    #[test]
    fn nerve_functoriality_is_bit_exact() {
        // N(g . f) = N(g) . N(f) as simplex maps
        let bc2 = corpus::cyclic(2);
        let t = corpus::terminal();
        let f = corpus::object_inclusion(&bc2, bc2.object_id(0)).unwrap();
        let g = FinFunctor::identity(&bc2);
        let gf = g.compose_with(&f).unwrap();

        let (nt, tc) = nerve_with_chains(&t, 3, &caps()).unwrap();
        let (nb, _) = nerve_with_chains(&bc2, 3, &caps()).unwrap();
        let nf = nerve_map(&f, &nt, &tc, &nb).unwrap();
        let ng = nerve_map(&g, &nb, &nerve_with_chains(&bc2, 3, &caps()).unwrap().1, &nb).unwrap();
        let ngf = nerve_map(&gf, &nt, &tc, &nb).unwrap();
        for rank in 0..nt.levels.len() {
            for (cell, &img) in nf.maps[rank].iter().enumerate() {
                assert_eq!(ng.maps[rank][img as usize], ngf.maps[rank][cell]);
            }
        }
    }

    #[test]
    fn simplicial_nerve_of_point_is_all_ones() {
        let z = corpus::maximal(&corpus::terminal());
        let n = simplicial_nerve(&z, 2, &caps()).unwrap();
        for degree in all_degrees(2, 2) {
            assert_eq!(n.level(&degree).cells.len(), 1, "{degree:?}");
        }
        n.validate().unwrap();
    }

    #[test]
    fn simplicial_nerve_of_minimal_delta1() {
        // w-direction collapses: (p, q)-cells are the monotone maps
        // [p] -> [1], i.e. p + 2, independent of q
        let z = corpus::minimal(&corpus::delta(1));
        let n = simplicial_nerve(&z, 2, &caps()).unwrap();
        for p in 0..=2usize {
            for q in 0..=2usize {
                assert_eq!(n.level(&[p, q]).cells.len(), p + 2, "({p},{q})");
            }
        }
        n.validate().unwrap();
    }

    #[test]
    fn simplicial_nerve_of_1w_bidegree_1_1() {
        // (1,1)-cells of 1^w: commuting 2x2 grids in delta1; exhaustive
        // enumeration gives the 6 monotone boolean functions
        let z = corpus::maximal(&corpus::delta(1));
        let n = simplicial_nerve(&z, 1, &caps()).unwrap();
        assert_eq!(n.level(&[1, 1]).cells.len(), 6);
    }

    #[test]
    fn k1_nerve_agrees_with_simplicial_nerve_bit_exact() {
        for (name, z) in [
            ("delta1_max", corpus::maximal(&corpus::delta(1))),
            ("delta1_min", corpus::minimal(&corpus::delta(1))),
            ("BC2_max", corpus::maximal(&corpus::cyclic(2))),
        ] {
            let a = simplicial_nerve(&z, 2, &caps()).unwrap();
            let b = k_simplicial_nerve(&z, 2, &caps()).unwrap();
            for degree in all_degrees(2, 2) {
                let la = a.level(&degree);
                let lb = b.level(&degree);
                assert_eq!(la.cells, lb.cells, "{name} at {degree:?}");
                assert_eq!(la.faces, lb.faces, "{name} at {degree:?}");
                assert_eq!(la.degens, lb.degens, "{name} at {degree:?}");
            }
        }
    }

    #[test]
    fn k2_square_nerve_cell_counts() {
        // (1,1,0): grids over [1]x[1] with v1-horizontal and v2-vertical
        // steps in the k=2 square structure; the only nondegenerate one is
        // the full square
        let z = corpus::square_k2();
        let (n, grids) = k_simplicial_nerve_with_grids(&z, 1, &caps()).unwrap();
        n.validate().unwrap();
        // brute-force oracle: commuting squares with horizontal steps in v1
        // and vertical steps in v2: four constant grids, two row grids, two
        // column grids, and the full square
        let count = grids[&vec![1usize, 1, 0]].len();
        assert_eq!(n.level(&[1, 1, 0]).cells.len(), count);
        assert_eq!(count, 4 + 2 + 2 + 1);
        let nondeg = n
            .level(&[1, 1, 0])
            .degenerate
            .iter()
            .filter(|&&x| !x)
            .count();
        assert_eq!(nondeg, 1);
    }

    #[test]
    fn diagonal_of_bisimplicial_nerve() {
        use super::super::sset::diagonal;
        let z = corpus::maximal(&corpus::cyclic(2));
        let n = simplicial_nerve(&z, 3, &caps()).unwrap();
        let d = diagonal(&n).unwrap();
        d.validate().unwrap();
        // oracle: (d,d)-cells are 2x... grids counted by exhaustive
        // enumeration in the bisimplicial nerve itself
        for deg in 0..=3usize {
            assert_eq!(
                d.level(&[deg]).cells.len(),
                n.level(&[deg, deg]).cells.len()
            );
        }
    }
}
