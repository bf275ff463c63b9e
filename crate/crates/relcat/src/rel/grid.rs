//! Grid diagrams: functors from products of chains into a finite category,
//! with a per-direction mask constraint on unit steps. These realize both
//! the objects of the higher equivalence functor `w_*` and the cells of the
//! (k-)simplicial nerves.
//!
//! Direction order follows the displayed multidimension `(p_k, ..., p_1, q)`:
//! index 0 is the outermost direction.

use crate::cat::FinCat;
use crate::ids;
use crate::rel::structure::MaskSet;

/// Grid points in lexicographic (odometer, last index fastest) order.
pub fn grid_points(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut points = vec![Vec::new()];
    for &d in dims {
        let mut next = Vec::with_capacity(points.len() * (d + 1));
        for p in &points {
            for t in 0..=d {
                let mut q = p.clone();
                q.push(t);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

pub fn point_rank(dims: &[usize], point: &[usize]) -> usize {
    let mut rank = 0;
    for (i, &t) in point.iter().enumerate() {
        rank = rank * (dims[i] + 1) + t;
    }
    rank
}

/// A functor from the product of chains `[dims[0]] x ... x [dims[r-1]]`:
/// an object per grid point and a morphism per unit step, all squares
/// commuting. Step `steps[d][rank]` sits at the point of `rank` going one
/// unit in direction `d` (present when the point has room).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDiagram {
    pub dims: Vec<usize>,
    pub objects: Vec<u32>,
    pub steps: Vec<Vec<Option<u32>>>,
}

impl GridDiagram {
    pub fn canonical_id(&self, c: &FinCat) -> String {
        let objs: Vec<&str> = self.objects.iter().map(|&o| c.object_id(o)).collect();
        let steps: Vec<Vec<&str>> = self
            .steps
            .iter()
            .map(|per_dir| {
                per_dir
                    .iter()
                    .filter_map(|s| s.map(|m| c.morphism_id(m)))
                    .collect()
            })
            .collect();
        ids::grid(&self.dims, &objs, &steps)
    }

    /// The composite morphism along direction `d` from `from` to the point
    /// `steps_ahead` units further (uses the composition table).
    pub fn composite_along(
        &self,
        c: &FinCat,
        d: usize,
        from: &[usize],
        steps_ahead: usize,
    ) -> Option<u32> {
        let mut here = from.to_vec();
        let mut acc = c.identity_of(self.objects[point_rank(&self.dims, &here)]);
        for _ in 0..steps_ahead {
            let rank = point_rank(&self.dims, &here);
            let step = self.steps[d][rank]?;
            acc = c.compose(step, acc)?;
            here[d] += 1;
        }
        Some(acc)
    }
}

/// Enumerate every grid diagram over `c` whose unit steps in direction `d`
/// lie in `step_masks[d]` (`None` = unconstrained). Deterministic order;
/// results sorted by canonical id.
pub fn enumerate_grid_diagrams(
    c: &FinCat,
    dims: &[usize],
    step_masks: &[Option<&MaskSet>],
) -> Vec<GridDiagram> {
    let points = grid_points(dims);
    let n = points.len();
    let r = dims.len();
    let mut found = Vec::new();
    let mut objects: Vec<u32> = vec![u32::MAX; n];
    let mut steps: Vec<Vec<Option<u32>>> = vec![vec![None; n]; r];

    // predecessors of each point per direction, by rank
    let pred: Vec<Vec<Option<usize>>> = (0..r)
        .map(|d| {
            points
                .iter()
                .map(|p| {
                    if p[d] == 0 {
                        None
                    } else {
                        let mut q = p.clone();
                        q[d] -= 1;
                        Some(point_rank(dims, &q))
                    }
                })
                .collect()
        })
        .collect();

    fn assign(
        c: &FinCat,
        points: &[Vec<usize>],
        pred: &[Vec<Option<usize>>],
        dims: &[usize],
        step_masks: &[Option<&MaskSet>],
        at: usize,
        objects: &mut Vec<u32>,
        steps: &mut Vec<Vec<Option<u32>>>,
        found: &mut Vec<GridDiagram>,
    ) {
        if at == points.len() {
            found.push(GridDiagram {
                dims: dims.to_vec(),
                objects: objects.clone(),
                steps: steps.clone(),
            });
            return;
        }
        let r = dims.len();
        let incoming: Vec<usize> = (0..r).filter(|&d| pred[d][at].is_some()).collect();
        if incoming.is_empty() {
            for o in 0..c.object_count() as u32 {
                objects[at] = o;
                assign(c, points, pred, dims, step_masks, at + 1, objects, steps, found);
            }
            objects[at] = u32::MAX;
            return;
        }

        // choose steps into this point, one per incoming direction, with a
        // shared target object and commuting squares against earlier data
        fn choose_steps(
            c: &FinCat,
            pred: &[Vec<Option<usize>>],
            dims: &[usize],
            step_masks: &[Option<&MaskSet>],
            points: &[Vec<usize>],
            at: usize,
            incoming: &[usize],
            pick: usize,
            target: Option<u32>,
            objects: &mut Vec<u32>,
            steps: &mut Vec<Vec<Option<u32>>>,
            cont: &mut dyn FnMut(&mut Vec<u32>, &mut Vec<Vec<Option<u32>>>),
        ) {
            if pick == incoming.len() {
                objects[at] = target.expect("at least one incoming direction");
                cont(objects, steps);
                objects[at] = u32::MAX;
                return;
            }
            let d = incoming[pick];
            let from_rank = pred[d][at].unwrap();
            let from_obj = objects[from_rank];
            let candidates: Vec<u32> = match target {
                Some(t) => c
                    .hom(from_obj, t)
                    .iter()
                    .copied()
                    .filter(|&m| step_masks[d].map_or(true, |mask| mask.contains(m)))
                    .collect(),
                None => c
                    .out_of(from_obj)
                    .iter()
                    .copied()
                    .filter(|&m| step_masks[d].map_or(true, |mask| mask.contains(m)))
                    .collect(),
            };
            'cand: for m in candidates {
                // square checks: for every other incoming direction d2 already
                // assigned at the predecessor-in-d, the square
                //   step_d(at) . step_d2(pred_d(at) - e_d2 .. ) commutes
                // compare step_d(at) . step_d2-at-pred_d2(at)'s companion:
                // square between d and each earlier-known direction pair at `at`
                for &d2 in incoming {
                    if d2 == d {
                        continue;
                    }
                    // the square with corners (at - e_d - e_d2, at - e_d2, at - e_d, at)
                    let p_d = pred[d][at].unwrap();
                    let p_d2_of_pd = pred[d2][p_d];
                    let step_d2_at_pd = match p_d2_of_pd {
                        Some(rank) => steps[d2][rank],
                        None => continue,
                    };
                    let s2 = match step_d2_at_pd {
                        Some(s) => s,
                        None => continue, // d2 step not chosen yet in this DFS
                    };
                    // other side: step_d at (at - e_d - e_d2), then step_d2 into at
                    let p_d2 = match pred[d2][at] {
                        Some(rank) => rank,
                        None => continue,
                    };
                    let corner = match pred[d][p_d2] {
                        Some(rank) => rank,
                        None => continue,
                    };
                    let step_d_at_corner = match steps[d][corner] {
                        Some(s) => s,
                        None => continue,
                    };
                    let s_d2_into_at = match steps[d2][p_d2] {
                        Some(s) => s,
                        None => continue, // will be checked when it is chosen
                    };
                    let left = c.compose(m, s2);
                    let right = c.compose(s_d2_into_at, step_d_at_corner);
                    if left.is_none() || left != right {
                        continue 'cand;
                    }
                }
                steps[d][pred[d][at].unwrap()] = Some(m);
                choose_steps(
                    c, pred, dims, step_masks, points, at, incoming, pick + 1,
                    Some(c.tgt(m)), objects, steps, cont,
                );
                steps[d][pred[d][at].unwrap()] = None;
            }
        }

        let mut cont = |objects: &mut Vec<u32>, steps: &mut Vec<Vec<Option<u32>>>| {
            assign(c, points, pred, dims, step_masks, at + 1, objects, steps, found);
        };
        choose_steps(
            c, pred, dims, step_masks, points, at, &incoming, 0, None, objects, steps, &mut cont,
        );
    }

    assign(
        c, &points, &pred, dims, step_masks, 0, &mut objects, &mut steps, &mut found,
    );
    found.sort_by(|a, b| a.canonical_id(c).cmp(&b.canonical_id(c)));
    found
}

/// Reindex a grid diagram along a monotone map `phi: [q] -> [dims[d]]` in
/// direction `d` (precomposition): the new unit step from `t` to `t+1` is
/// the composite of the old steps from `phi(t)` to `phi(t+1)`.
pub fn reindex(c: &FinCat, g: &GridDiagram, d: usize, phi: &[usize]) -> GridDiagram {
    let mut new_dims = g.dims.clone();
    new_dims[d] = phi.len() - 1;
    let new_points = grid_points(&new_dims);
    let mut objects = Vec::with_capacity(new_points.len());
    let mut steps: Vec<Vec<Option<u32>>> = vec![vec![None; new_points.len()]; g.dims.len()];
    for (rank, p) in new_points.iter().enumerate() {
        let mut old = p.clone();
        old[d] = phi[p[d]];
        let old_rank = point_rank(&g.dims, &old);
        objects.push(g.objects[old_rank]);
        for dir in 0..g.dims.len() {
            if p[dir] >= new_dims[dir] {
                continue;
            }
            let step = if dir == d {
                let here = old.clone();
                g.composite_along(c, d, &here, phi[p[d] + 1] - phi[p[d]])
                    .expect("total table on grid")
            } else {
                g.steps[dir][old_rank].expect("step present")
            };
            steps[dir][rank] = Some(step);
        }
    }
    GridDiagram {
        dims: new_dims,
        objects,
        steps,
    }
}

/// The face map `delta^i: [p-1] -> [p]` (skips `i`).
pub fn face_map(p: usize, i: usize) -> Vec<usize> {
    (0..p).map(|t| if t < i { t } else { t + 1 }).collect()
}

/// The degeneracy map `sigma^i: [p+1] -> [p]` (repeats `i`).
pub fn degeneracy_map(p: usize, i: usize) -> Vec<usize> {
    (0..=p + 1).map(|t| if t <= i { t } else { t - 1 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rel::structure::MaskSet;

    #[test]
    fn grid_points_odometer_order() {
        let pts = grid_points(&[1, 1]);
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(point_rank(&[1, 1], p), i);
        }
    }

    #[test]
    fn chain_diagrams_in_delta1_are_monotone_maps() {
        // functors [p] -> [1] correspond to monotone maps: p + 2 of them
        let d = corpus::delta(1);
        for p in 0..4usize {
            let found = enumerate_grid_diagrams(&d, &[p], &[None]);
            assert_eq!(found.len(), p + 2, "p = {p}");
        }
    }

    #[test]
    fn square_diagrams_in_delta1_are_monotone_boolean_functions() {
        // oracle: exhaustive 2x2 monotone grids in [1]; these are the
        // monotone boolean functions on two variables, 6 in total
        let d = corpus::delta(1);
        let found = enumerate_grid_diagrams(&d, &[1, 1], &[None, None]);
        let mut count = 0;
        for x00 in 0..=1u8 {
            for x01 in 0..=1u8 {
                for x10 in 0..=1u8 {
                    for x11 in 0..=1u8 {
                        if x00 <= x01 && x00 <= x10 && x01 <= x11 && x10 <= x11 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, 6);
        assert_eq!(found.len(), count);
    }

    #[test]
    fn masked_direction_collapses() {
        // steps in a direction restricted to identities: the grid is
        // constant along it
        let d = corpus::delta(1);
        let ids_mask = MaskSet::identities(&d);
        let found = enumerate_grid_diagrams(&d, &[1], &[Some(&ids_mask)]);
        assert_eq!(found.len(), 2);
    }

    #[test]
    fn reindex_by_face_and_degeneracy() {
        let d = corpus::delta(2);
        let diagrams = enumerate_grid_diagrams(&d, &[2], &[None]);
        for g in &diagrams {
            // degeneracy then the two adjacent faces recover the original
            let up = reindex(&d, g, 0, &degeneracy_map(2, 0));
            assert_eq!(up.dims[0], 3);
            let down = reindex(&d, &up, 0, &face_map(3, 0));
            assert_eq!(&down, g);
            let down1 = reindex(&d, &up, 0, &face_map(3, 1));
            assert_eq!(&down1, g);
        }
    }

    #[test]
    fn grid_enumeration_respects_commutativity() {
        // in the square poset every cospan commutes, so (1,1)-grids are
        // monotone double labelings; brute-force count agrees
        let sq = corpus::square_poset();
        let found = enumerate_grid_diagrams(&sq, &[1, 1], &[None, None]);
        // oracle: choose a monotone map [1]x[1] -> square poset pointwise
        let le = |a: usize, b: usize| -> bool {
            let (a0, a1) = (a / 2, a % 2);
            let (b0, b1) = (b / 2, b % 2);
            a0 <= b0 && a1 <= b1
        };
        let mut count = 0;
        for x00 in 0..4 {
            for x01 in 0..4 {
                for x10 in 0..4 {
                    for x11 in 0..4 {
                        if le(x00, x01) && le(x00, x10) && le(x01, x11) && le(x10, x11) {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(found.len(), count);
    }
}
