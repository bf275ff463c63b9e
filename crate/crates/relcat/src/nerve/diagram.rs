//! Multisimplicial diagrams of categories, the levelwise nerve functor, and
//! the `w_*` grid of a k-relative category with its executable coherence
//! law (levelwise nerve of the `w_*` grid = k-simplicial nerve,
//! cell for cell under canonical ids).

use std::collections::BTreeMap;
use std::collections::HashMap;

use super::nerves::{chain_degen, chain_face, chain_id, Chain};
use super::sset::{all_degrees, degree_rank, MultiSSetBuilder, TruncMultiSSet};
use crate::caps::Caps;
use crate::cat::{FinCat, FinFunctor};
use crate::error::{Error, Result};
use crate::ids;
use crate::rel::grid::{degeneracy_map, face_map, grid_points, point_rank, reindex, GridDiagram};
use crate::rel::{parse_nt_components, w_star_at, w_star_objects, KRelStructure};

/// A k-fold simplicial diagram of finite categories within a window: one
/// category per multidegree, with face/degeneracy action functors.
#[derive(Debug, Clone)]
pub struct SCatDiagram {
    pub k: usize,
    /// max degree per direction
    pub window: usize,
    pub levels: BTreeMap<Vec<usize>, FinCat>,
    /// `(level, dir, i) -> functor level -> level - e_dir`
    pub faces: BTreeMap<(Vec<usize>, usize, usize), FinFunctor>,
    /// `(level, dir, i) -> functor level -> level + e_dir`
    pub degens: BTreeMap<(Vec<usize>, usize, usize), FinFunctor>,
}

impl SCatDiagram {
    /// Check shapes and the simplicial functor identities over the window.
    pub fn validate(&self) -> Result<()> {
        for (level, cat) in &self.levels {
            if level.len() != self.k || level.iter().any(|&d| d > self.window) {
                return Err(Error::invalid(format!("level {level:?} outside window")));
            }
            for dir in 0..self.k {
                if level[dir] > 0 {
                    let mut lower = level.clone();
                    lower[dir] -= 1;
                    for i in 0..=level[dir] {
                        let f = self
                            .faces
                            .get(&(level.clone(), dir, i))
                            .ok_or_else(|| Error::invalid(format!("missing face {level:?}/{dir}/{i}")))?;
                        if f.source() != cat || Some(f.target()) != self.levels.get(&lower).map(|c| c) {
                            return Err(Error::invalid(format!(
                                "face {level:?}/{dir}/{i} has wrong shape"
                            )));
                        }
                    }
                }
                if level[dir] < self.window {
                    let mut upper = level.clone();
                    upper[dir] += 1;
                    for i in 0..=level[dir] {
                        let s = self
                            .degens
                            .get(&(level.clone(), dir, i))
                            .ok_or_else(|| Error::invalid(format!("missing degeneracy {level:?}/{dir}/{i}")))?;
                        if s.source() != cat || Some(s.target()) != self.levels.get(&upper).map(|c| c) {
                            return Err(Error::invalid(format!(
                                "degeneracy {level:?}/{dir}/{i} has wrong shape"
                            )));
                        }
                    }
                }
            }
        }
        // functorial simplicial identities: check d_i d_j = d_{j-1} d_i and
        // the mixed-direction commutation on functors
        for (level, _) in &self.levels {
            for dir in 0..self.k {
                if level[dir] < 2 {
                    continue;
                }
                let mut lower = level.clone();
                lower[dir] -= 1;
                for j in 0..=level[dir] {
                    for i in 0..j {
                        let a = self.faces[&(lower.clone(), dir, j - 1)]
                            .compose_with(&self.faces[&(level.clone(), dir, i)])?;
                        let b = self.faces[&(lower.clone(), dir, i)]
                            .compose_with(&self.faces[&(level.clone(), dir, j)])?;
                        if a != b {
                            return Err(Error::invalid(format!(
                                "diagram face identity fails at {level:?} dir {dir} ({i},{j})"
                            )));
                        }
                    }
                }
            }
            for dir in 0..self.k {
                for dir2 in dir + 1..self.k {
                    if level[dir] < 1 || level[dir2] < 1 {
                        continue;
                    }
                    let mut lo1 = level.clone();
                    lo1[dir] -= 1;
                    let mut lo2 = level.clone();
                    lo2[dir2] -= 1;
                    for i in 0..=level[dir] {
                        for j in 0..=level[dir2] {
                            let a = self.faces[&(lo2.clone(), dir, i)]
                                .compose_with(&self.faces[&(level.clone(), dir2, j)])?;
                            let b = self.faces[&(lo1.clone(), dir2, j)]
                                .compose_with(&self.faces[&(level.clone(), dir, i)])?;
                            if a != b {
                                return Err(Error::invalid(format!(
                                    "mixed faces fail at {level:?} dirs ({dir},{dir2})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Constant diagram at one category.
    pub fn constant(k: usize, window: usize, cat: &FinCat) -> SCatDiagram {
        let id = FinFunctor::identity(cat);
        let mut levels = BTreeMap::new();
        let mut faces = BTreeMap::new();
        let mut degens = BTreeMap::new();
        for level in all_degrees(k, window) {
            levels.insert(level.clone(), cat.clone());
            for dir in 0..k {
                if level[dir] > 0 {
                    for i in 0..=level[dir] {
                        faces.insert((level.clone(), dir, i), id.clone());
                    }
                }
                if level[dir] < window {
                    for i in 0..=level[dir] {
                        degens.insert((level.clone(), dir, i), id.clone());
                    }
                }
            }
        }
        SCatDiagram {
            k,
            window,
            levels,
            faces,
            degens,
        }
    }
}

/// Dimensionwise application of the classical nerve: cells in multidegree
/// `(p_k, ..., p_1, q)` are the q-chains of the category at level `p_*`.
pub fn levelwise_nerve(d: &SCatDiagram, bound: usize, caps: &Caps) -> Result<TruncMultiSSet> {
    d.validate()?;
    if d.window < bound {
        return Err(Error::invalid("diagram window smaller than the bound"));
    }
    let arity = d.k + 1;
    let mut b = MultiSSetBuilder::new(arity, bound);
    let mut total = 0usize;
    for degree in all_degrees(arity, bound) {
        let p_star: Vec<usize> = degree[..d.k].to_vec();
        let q = degree[d.k];
        let cat = d
            .levels
            .get(&p_star)
            .ok_or_else(|| Error::invalid(format!("missing level {p_star:?}")))?;
        let chains = enumerate_chains(cat, q);
        total += chains.len();
        caps.check_cells("levelwise nerve", total)?;
        for chain in &chains {
            let id = level_cell_id(&p_star, cat, chain);
            let mut faces: Vec<Vec<String>> = Vec::with_capacity(arity);
            let mut degens: Vec<Vec<String>> = Vec::with_capacity(arity);
            for dir in 0..arity {
                if dir < d.k {
                    // v-direction: apply the diagram's action functors
                    if degree[dir] > 0 {
                        let mut lower_p = p_star.clone();
                        lower_p[dir] -= 1;
                        faces.push(
                            (0..=degree[dir])
                                .map(|i| {
                                    let f = &d.faces[&(p_star.clone(), dir, i)];
                                    let img = map_chain(f, chain);
                                    level_cell_id(&lower_p, f.target(), &img)
                                })
                                .collect(),
                        );
                    } else {
                        faces.push(vec![]);
                    }
                    if degree[dir] < bound {
                        let mut upper_p = p_star.clone();
                        upper_p[dir] += 1;
                        degens.push(
                            (0..=degree[dir])
                                .map(|i| {
                                    let s = &d.degens[&(p_star.clone(), dir, i)];
                                    let img = map_chain(s, chain);
                                    level_cell_id(&upper_p, s.target(), &img)
                                })
                                .collect(),
                        );
                    } else {
                        degens.push(vec![]);
                    }
                } else {
                    // q-direction: chain face/degeneracy in the level
                    if q > 0 {
                        faces.push(
                            (0..=q)
                                .map(|i| level_cell_id(&p_star, cat, &chain_face(cat, chain, i)))
                                .collect(),
                        );
                    } else {
                        faces.push(vec![]);
                    }
                    if q < bound {
                        degens.push(
                            (0..=q)
                                .map(|i| level_cell_id(&p_star, cat, &chain_degen(cat, chain, i)))
                                .collect(),
                        );
                    } else {
                        degens.push(vec![]);
                    }
                }
            }
            b.add_cell(&degree, id, faces, degens);
        }
    }
    b.build()
}

fn enumerate_chains(c: &FinCat, q: usize) -> Vec<Chain> {
    let mut chains: Vec<Chain> = (0..c.object_count() as u32).map(|o| (o, Vec::new())).collect();
    for _ in 0..q {
        let mut next = Vec::new();
        for (start, mors) in &chains {
            let end = if mors.is_empty() {
                *start
            } else {
                c.tgt(*mors.last().unwrap())
            };
            for &m in c.out_of(end) {
                let mut ext = mors.clone();
                ext.push(m);
                next.push((*start, ext));
            }
        }
        chains = next;
    }
    chains
}

fn level_cell_id(p_star: &[usize], cat: &FinCat, chain: &Chain) -> String {
    let p: Vec<String> = p_star.iter().map(|d| d.to_string()).collect();
    format!("lv[{}|{}]", p.join(","), ids::esc(&chain_id(cat, chain)))
}

fn map_chain(f: &FinFunctor, chain: &Chain) -> Chain {
    (
        f.on_object(chain.0),
        chain.1.iter().map(|&m| f.on_morphism(m)).collect(),
    )
}

/// The `w_*` grid of a k-relative category over a window: levels are
/// `w_{p_*} C`, actions are precomposition with the chain reindexings.
pub fn w_star_grid(c: &KRelStructure, window: usize, caps: &Caps) -> Result<SCatDiagram> {
    let k = c.k();
    let mut levels = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let mut degens = BTreeMap::new();
    for p_star in all_degrees(k, window) {
        levels.insert(p_star.clone(), w_star_at(c, &p_star, caps)?);
    }
    for p_star in all_degrees(k, window) {
        for dir in 0..k {
            if p_star[dir] > 0 {
                let mut lower = p_star.clone();
                lower[dir] -= 1;
                for i in 0..=p_star[dir] {
                    let phi = face_map(p_star[dir], i);
                    let f = reindex_functor(c, &p_star, &lower, dir, &phi, &levels)?;
                    faces.insert((p_star.clone(), dir, i), f);
                }
            }
            if p_star[dir] < window {
                let mut upper = p_star.clone();
                upper[dir] += 1;
                for i in 0..=p_star[dir] {
                    let phi = degeneracy_map(p_star[dir], i);
                    let f = reindex_functor(c, &p_star, &upper, dir, &phi, &levels)?;
                    degens.insert((p_star.clone(), dir, i), f);
                }
            }
        }
    }
    Ok(SCatDiagram {
        k,
        window,
        levels,
        faces,
        degens,
    })
}

fn reindex_functor(
    c: &KRelStructure,
    from_p: &[usize],
    to_p: &[usize],
    dir: usize,
    phi: &[usize],
    levels: &BTreeMap<Vec<usize>, FinCat>,
) -> Result<FinFunctor> {
    let ambient = c.ambient();
    let src_cat = &levels[from_p];
    let tgt_cat = &levels[to_p];
    let diagrams = w_star_objects(c, from_p)?;
    let mut object_map = vec![u32::MAX; src_cat.object_count()];
    let mut image_grid: HashMap<String, GridDiagram> = HashMap::new();
    for g in &diagrams {
        let img = reindex(ambient, g, dir, phi);
        let src_idx = src_cat.object_index(&g.canonical_id(ambient)).unwrap();
        let img_id = img.canonical_id(ambient);
        object_map[src_idx as usize] = tgt_cat
            .object_index(&img_id)
            .ok_or_else(|| Error::invalid(format!("reindexed diagram `{img_id}` missing")))?;
        image_grid.insert(g.canonical_id(ambient), img);
    }
    // natural transformations reindex by restricting components to the
    // reindexed grid points
    let to_points = grid_points(to_p);
    let mut morphism_map = vec![u32::MAX; src_cat.morphism_count()];
    for mi in 0..src_cat.morphism_count() as u32 {
        let m = src_cat.morphism(mi);
        let comps = parse_nt_components(&m.id)
            .ok_or_else(|| Error::invalid(format!("bad nt id `{}`", m.id)))?;
        let src_id = src_cat.object_id(m.src);
        let tgt_id = src_cat.object_id(m.tgt);
        let mapped: Vec<String> = to_points
            .iter()
            .map(|pt| {
                let mut old_pt = pt.clone();
                old_pt[dir] = phi[pt[dir]];
                let old_rank = point_rank(from_p, &old_pt);
                comps[old_rank].clone()
            })
            .collect();
        let img_id = format!(
            "nt[{}|{}|{}]",
            ids::esc(&image_grid[src_id].canonical_id(ambient)),
            ids::esc(&image_grid[tgt_id].canonical_id(ambient)),
            mapped.iter().map(|s| ids::esc(s)).collect::<Vec<_>>().join(",")
        );
        morphism_map[mi as usize] = tgt_cat
            .morphism_index(&img_id)
            .ok_or_else(|| Error::invalid(format!("reindexed transformation `{img_id}` missing")))?;
    }
    FinFunctor::from_index_maps(src_cat.clone(), tgt_cat.clone(), object_map, morphism_map)
}

/// Executable coherence of the nerve functors: the levelwise nerve of the
/// `w_*` grid agrees with the k-simplicial nerve cell for cell. Verifies
/// the sets of cells in every multidegree through the bound, and that the
/// canonical bijection commutes with every face and degeneracy.
pub fn check_levelwise_coherence(c: &KRelStructure, bound: usize, caps: &Caps) -> Result<()> {
    let k = c.k();
    let grid = w_star_grid(c, bound, caps)?;
    let lw = levelwise_nerve(&grid, bound, caps)?;
    let (kn, _) = super::nerves::k_simplicial_nerve_with_grids(c, bound, caps)?;
    let ambient = c.ambient();

    // pairing per multidegree: levelwise cell id -> stacked grid id
    let mut pairing: HashMap<(usize, u32), u32> = HashMap::new();
    for degree in all_degrees(k + 1, bound) {
        let rank = degree_rank(bound, &degree);
        let p_star: Vec<usize> = degree[..k].to_vec();
        let q = degree[k];
        let level_cat = &grid.levels[&p_star];
        let diagrams = w_star_objects(c, &p_star)?;
        let by_id: HashMap<String, &GridDiagram> = diagrams
            .iter()
            .map(|g| (g.canonical_id(ambient), g))
            .collect();
        let chains = enumerate_chains(level_cat, q);
        if chains.len() != lw.levels[rank].cells.len() || chains.len() != kn.levels[rank].cells.len()
        {
            return Err(Error::invalid(format!(
                "cell counts differ at {degree:?}: levelwise {}, k-nerve {}",
                lw.levels[rank].cells.len(),
                kn.levels[rank].cells.len()
            )));
        }
        for chain in &chains {
            let lw_id = level_cell_id(&p_star, level_cat, chain);
            let stacked = stack_chain(c, &p_star, q, level_cat, chain, &by_id)?;
            let kn_id = stacked.canonical_id(ambient);
            let li = *lw.levels[rank]
                .index
                .get(&lw_id)
                .ok_or_else(|| Error::invalid(format!("levelwise missing `{lw_id}`")))?;
            let ki = *kn.levels[rank]
                .index
                .get(&kn_id)
                .ok_or_else(|| Error::invalid(format!("k-nerve missing `{kn_id}`")))?;
            if pairing.insert((rank, li), ki).is_some() {
                return Err(Error::invalid("pairing not injective"));
            }
        }
    }
    // operators commute with the pairing
    for degree in all_degrees(k + 1, bound) {
        let rank = degree_rank(bound, &degree);
        for dir in 0..=k {
            if degree[dir] > 0 {
                let mut lower = degree.clone();
                lower[dir] -= 1;
                let lower_rank = degree_rank(bound, &lower);
                for i in 0..=degree[dir] {
                    for cell in 0..lw.levels[rank].cells.len() as u32 {
                        let a = pairing[&(lower_rank, lw.levels[rank].faces[dir][i][cell as usize])];
                        let b = kn.levels[rank].faces[dir][i][pairing[&(rank, cell)] as usize];
                        if a != b {
                            return Err(Error::invalid(format!(
                                "face {dir}/{i} does not commute at {degree:?}"
                            )));
                        }
                    }
                }
            }
            if degree[dir] < bound {
                let mut upper = degree.clone();
                upper[dir] += 1;
                let upper_rank = degree_rank(bound, &upper);
                for i in 0..=degree[dir] {
                    for cell in 0..lw.levels[rank].cells.len() as u32 {
                        let a = pairing[&(upper_rank, lw.levels[rank].degens[dir][i][cell as usize])];
                        let b = kn.levels[rank].degens[dir][i][pairing[&(rank, cell)] as usize];
                        if a != b {
                            return Err(Error::invalid(format!(
                                "degeneracy {dir}/{i} does not commute at {degree:?}"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Stack a q-chain of natural transformations over `p_*`-grids into one
/// `(p_*, q)`-grid.
fn stack_chain(
    c: &KRelStructure,
    p_star: &[usize],
    q: usize,
    level_cat: &FinCat,
    chain: &Chain,
    diagrams_by_id: &HashMap<String, &GridDiagram>,
) -> Result<GridDiagram> {
    let ambient = c.ambient();
    // objects along the chain
    let mut layer_ids: Vec<String> = vec![level_cat.object_id(chain.0).to_string()];
    let mut comps_per_step: Vec<Vec<String>> = Vec::new();
    for &m in &chain.1 {
        let md = level_cat.morphism(m);
        layer_ids.push(level_cat.object_id(md.tgt).to_string());
        comps_per_step.push(
            parse_nt_components(&md.id)
                .ok_or_else(|| Error::invalid(format!("bad nt id `{}`", md.id)))?,
        );
    }
    let mut dims = p_star.to_vec();
    dims.push(q);
    let points = grid_points(&dims);
    let p_points = grid_points(p_star);
    let mut objects = Vec::with_capacity(points.len());
    let mut steps: Vec<Vec<Option<u32>>> = vec![vec![None; points.len()]; dims.len()];
    for (rank, pt) in points.iter().enumerate() {
        let s = pt[p_star.len()];
        let p_pt: Vec<usize> = pt[..p_star.len()].to_vec();
        let p_rank = point_rank(p_star, &p_pt);
        let layer = diagrams_by_id[&layer_ids[s]];
        objects.push(layer.objects[p_rank]);
        for dir in 0..p_star.len() {
            if pt[dir] < dims[dir] {
                steps[dir][rank] = layer.steps[dir][p_rank];
            }
        }
        if s < q {
            let comp_id = &comps_per_step[s][p_rank];
            let comp = ambient
                .morphism_index(comp_id)
                .ok_or_else(|| Error::invalid(format!("unknown component `{comp_id}`")))?;
            steps[p_star.len()][rank] = Some(comp);
        }
    }
    let _ = p_points;
    Ok(GridDiagram {
        dims,
        objects,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn constant_diagram_levelwise_nerve_is_all_ones() {
        let d = SCatDiagram::constant(1, 2, &corpus::terminal());
        let n = levelwise_nerve(&d, 2, &caps()).unwrap();
        for degree in all_degrees(2, 2) {
            assert_eq!(n.level(&degree).cells.len(), 1, "{degree:?}");
        }
        n.validate().unwrap();
    }

    #[test]
    fn constant_diagram_at_bc2_has_nerve_counts_per_level() {
        let d = SCatDiagram::constant(1, 2, &corpus::cyclic(2));
        let n = levelwise_nerve(&d, 2, &caps()).unwrap();
        for degree in all_degrees(2, 2) {
            // q-chains of BC2: 2^q
            assert_eq!(n.level(&degree).cells.len(), 1 << degree[1], "{degree:?}");
        }
        n.validate().unwrap();
    }

    #[test]
    fn w_star_grid_validates() {
        let c = corpus::maximal(&corpus::delta(1));
        let g = w_star_grid(&c, 2, &caps()).unwrap();
        g.validate().unwrap();
    }

    #[test]
    fn coherence_for_delta1_maximal() {
        let c = corpus::maximal(&corpus::delta(1));
        check_levelwise_coherence(&c, 2, &caps()).unwrap();
    }

    #[test]
    fn coherence_for_square_k2() {
        let c = corpus::square_k2();
        check_levelwise_coherence(&c, 1, &caps()).unwrap();
    }
}
