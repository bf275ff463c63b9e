//! Constructors: products, pullbacks, opposites, free categories on acyclic
//! graphs, and the reindexing helpers the rest of the crate builds on.

use std::collections::HashMap;

use super::core::{CatBuilder, FinCat, FinFunctor};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ids;

/// Binary product with its two projection functors. Objects and morphisms
/// are pairs `(a,b)`; composition is componentwise.
pub fn product(a: &FinCat, b: &FinCat, caps: &Caps) -> Result<(FinCat, FinFunctor, FinFunctor)> {
    caps.check_objects("product", a.object_count().saturating_mul(b.object_count()))?;
    caps.check_morphisms(
        "product",
        a.morphism_count().saturating_mul(b.morphism_count()),
    )?;

    let mut builder = CatBuilder::new();
    let mut obj_ids = Vec::with_capacity(a.object_count() * b.object_count());
    for ai in 0..a.object_count() as u32 {
        for bi in 0..b.object_count() as u32 {
            let id = ids::pair(a.object_id(ai), b.object_id(bi));
            obj_ids.push(((ai, bi), id.clone()));
            builder.object(id);
        }
    }
    let mut mor_ids = HashMap::with_capacity(a.morphism_count() * b.morphism_count());
    for am in 0..a.morphism_count() as u32 {
        for bm in 0..b.morphism_count() as u32 {
            let id = ids::pair(a.morphism_id(am), b.morphism_id(bm));
            let src = ids::pair(a.object_id(a.src(am)), b.object_id(b.src(bm)));
            let tgt = ids::pair(a.object_id(a.tgt(am)), b.object_id(b.tgt(bm)));
            builder.morphism(id.clone(), src, tgt);
            mor_ids.insert((am, bm), id);
        }
    }
    for ((ai, bi), oid) in &obj_ids {
        builder.identity(oid.clone(), mor_ids[&(a.identity_of(*ai), b.identity_of(*bi))].clone());
    }
    // componentwise composition over composable pairs of pairs
    for (&(ga, gb), gid) in &mor_ids {
        for (&(fa, fb), fid) in &mor_ids {
            if a.tgt(fa) != a.src(ga) || b.tgt(fb) != b.src(gb) {
                continue;
            }
            let ca = a.compose(ga, fa);
            let cb = b.compose(gb, fb);
            if let (Some(ca), Some(cb)) = (ca, cb) {
                builder.compose(gid.clone(), fid.clone(), mor_ids[&(ca, cb)].clone());
            }
        }
    }
    let prod = builder.build()?;

    let proj_a = project(&prod, a, |pid| ids::split_pair(pid).map(|(x, _)| x))?;
    let proj_b = project(&prod, b, |pid| ids::split_pair(pid).map(|(_, y)| y))?;
    Ok((prod, proj_a, proj_b))
}

fn project(
    prod: &FinCat,
    factor: &FinCat,
    pick: impl Fn(&str) -> Option<String>,
) -> Result<FinFunctor> {
    let mut object_map = Vec::with_capacity(prod.object_count());
    for o in prod.objects() {
        let part = pick(o).ok_or_else(|| Error::invalid(format!("non-pair id `{o}`")))?;
        object_map.push(
            factor
                .object_index(&part)
                .ok_or_else(|| Error::invalid(format!("projection misses object `{part}`")))?,
        );
    }
    let mut morphism_map = Vec::with_capacity(prod.morphism_count());
    for m in prod.morphism_ids() {
        let part = pick(m).ok_or_else(|| Error::invalid(format!("non-pair id `{m}`")))?;
        morphism_map.push(
            factor
                .morphism_index(&part)
                .ok_or_else(|| Error::invalid(format!("projection misses morphism `{part}`")))?,
        );
    }
    FinFunctor::from_index_maps(prod.clone(), factor.clone(), object_map, morphism_map)
}

/// Strict pullback of `f: A -> Z <- B :g`, with its two projections.
/// Objects are pairs `(a,b)` with `f(a) = g(b)`; morphisms likewise.
/// The empty category is a legal result.
pub fn pullback_cat(
    f: &FinFunctor,
    g: &FinFunctor,
    caps: &Caps,
) -> Result<(FinCat, FinFunctor, FinFunctor)> {
    if f.target() != g.target() {
        return Err(Error::invalid("pullback requires a shared target"));
    }
    let a = f.source();
    let b = g.source();

    let mut objs: Vec<(u32, u32)> = Vec::new();
    let mut obj_pos: HashMap<(u32, u32), u32> = HashMap::new();
    let mut obj_ids: Vec<String> = Vec::new();
    for ai in 0..a.object_count() as u32 {
        for bi in 0..b.object_count() as u32 {
            if f.on_object(ai) == g.on_object(bi) {
                obj_pos.insert((ai, bi), objs.len() as u32);
                objs.push((ai, bi));
                obj_ids.push(ids::pair(a.object_id(ai), b.object_id(bi)));
            }
        }
    }
    caps.check_objects("pullback", objs.len())?;

    let mut mors: Vec<(u32, u32)> = Vec::new();
    let mut mor_pos: HashMap<(u32, u32), u32> = HashMap::new();
    let mut mor_entries: Vec<(String, u32, u32)> = Vec::new();
    for am in 0..a.morphism_count() as u32 {
        for bm in 0..b.morphism_count() as u32 {
            if f.on_morphism(am) == g.on_morphism(bm) {
                let src = obj_pos[&(a.src(am), b.src(bm))];
                let tgt = obj_pos[&(a.tgt(am), b.tgt(bm))];
                mor_pos.insert((am, bm), mors.len() as u32);
                mor_entries.push((
                    ids::pair(a.morphism_id(am), b.morphism_id(bm)),
                    src,
                    tgt,
                ));
                mors.push((am, bm));
            }
        }
    }
    caps.check_morphisms("pullback", mors.len())?;

    let identity: Vec<u32> = objs
        .iter()
        .map(|&(ai, bi)| mor_pos[&(a.identity_of(ai), b.identity_of(bi))])
        .collect();

    // group by middle object to avoid the all-pairs scan
    let mut by_src: HashMap<u32, Vec<u32>> = HashMap::new();
    for (i, &(am, bm)) in mors.iter().enumerate() {
        by_src
            .entry(obj_pos[&(a.src(am), b.src(bm))])
            .or_default()
            .push(i as u32);
    }
    let mut compose: Vec<(u32, u32, u32)> = Vec::new();
    for (fi, &(fa, fb)) in mors.iter().enumerate() {
        let mid = obj_pos[&(a.tgt(fa), b.tgt(fb))];
        if let Some(outs) = by_src.get(&mid) {
            for &gi in outs {
                let (ga, gb) = mors[gi as usize];
                if let (Some(ca), Some(cb)) = (a.compose(ga, fa), b.compose(gb, fb)) {
                    if let Some(&ci) = mor_pos.get(&(ca, cb)) {
                        compose.push((gi, fi as u32, ci));
                    }
                }
            }
        }
    }

    let pb = FinCat::from_index_parts(obj_ids, mor_entries, identity, compose)?;
    let proj_a = project(&pb, a, |pid| ids::split_pair(pid).map(|(x, _)| x))?;
    let proj_b = project(&pb, b, |pid| ids::split_pair(pid).map(|(_, y)| y))?;
    Ok((pb, proj_a, proj_b))
}

/// Opposite category: ids preserved, src/tgt swapped, composition reversed.
/// An involution: `opposite(opposite(c)) == c` bit-exact.
pub fn opposite(c: &FinCat) -> FinCat {
    let mut builder = CatBuilder::new();
    for o in c.objects() {
        builder.object(o.clone());
    }
    for mi in 0..c.morphism_count() as u32 {
        let m = c.morphism(mi);
        builder.morphism(
            m.id.clone(),
            c.object_id(m.tgt).to_string(),
            c.object_id(m.src).to_string(),
        );
    }
    for oi in 0..c.object_count() as u32 {
        builder.identity(
            c.object_id(oi).to_string(),
            c.morphism_id(c.identity_of(oi)).to_string(),
        );
    }
    c.for_each_composable(|g, f| {
        if let Some(gf) = c.compose(g, f) {
            // in the opposite, f . g = (g . f)^op
            builder.compose(
                c.morphism_id(f).to_string(),
                c.morphism_id(g).to_string(),
                c.morphism_id(gf).to_string(),
            );
        }
    });
    builder.build().expect("opposite of a valid category")
}

/// Free category on a finite directed acyclic graph: morphisms are all
/// directed paths (empty paths are the identities), composition is
/// concatenation. A directed cycle is rejected with a witness.
pub fn free_category_on_acyclic_graph(
    vertices: &[String],
    edges: &[(String, String, String)], // (edge id, src, tgt)
    caps: &Caps,
) -> Result<FinCat> {
    let vidx: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    if vidx.len() != vertices.len() {
        return Err(Error::invalid("duplicate vertex"));
    }
    let mut adj: Vec<Vec<(usize, &str)>> = vec![Vec::new(); vertices.len()];
    for (id, s, t) in edges {
        let si = *vidx
            .get(s.as_str())
            .ok_or_else(|| Error::invalid(format!("edge `{id}` has unknown src `{s}`")))?;
        let ti = *vidx
            .get(t.as_str())
            .ok_or_else(|| Error::invalid(format!("edge `{id}` has unknown tgt `{t}`")))?;
        adj[si].push((ti, id));
    }

    if let Some(cycle) = find_cycle(&adj) {
        let names: Vec<&str> = cycle.iter().map(|&v| vertices[v].as_str()).collect();
        return Err(Error::invalid(format!(
            "graph has a directed cycle through [{}]",
            names.join(" -> ")
        )));
    }

    caps.check_objects("free category", vertices.len())?;
    let mut builder = CatBuilder::new();
    for v in vertices {
        builder.object(v.clone());
    }

    // enumerate all paths by DFS from every vertex
    let mut paths: Vec<(usize, usize, Vec<&str>)> = Vec::new();
    for start in 0..vertices.len() {
        let mut stack: Vec<(usize, Vec<&str>)> = vec![(start, Vec::new())];
        while let Some((v, path)) = stack.pop() {
            paths.push((start, v, path.clone()));
            for &(w, eid) in &adj[v] {
                let mut next = path.clone();
                next.push(eid);
                stack.push((w, next));
            }
        }
    }
    caps.check_morphisms("free category", paths.len())?;

    let path_id = |start: usize, path: &[&str]| -> String {
        if path.is_empty() {
            format!("p[]@{}", ids::esc(&vertices[start]))
        } else {
            format!("p[{}]", path.iter().map(|e| ids::esc(e)).collect::<Vec<_>>().join("."))
        }
    };

    let mut by_key: HashMap<(usize, Vec<&str>), (usize, String)> = HashMap::new();
    for (s, t, p) in &paths {
        let id = path_id(*s, p);
        builder.morphism(id.clone(), vertices[*s].clone(), vertices[*t].clone());
        by_key.insert((*s, p.clone()), (*t, id));
    }
    for v in 0..vertices.len() {
        builder.identity(vertices[v].clone(), path_id(v, &[]));
    }
    for (s1, t1, p1) in &paths {
        for (s2, _t2, p2) in &paths {
            if *s2 != *t1 {
                continue;
            }
            let mut cat = p1.clone();
            cat.extend(p2.iter().copied());
            let gid = by_key[&(*s2, p2.clone())].1.clone();
            let fid = by_key[&(*s1, p1.clone())].1.clone();
            let cid = by_key[&(*s1, cat)].1.clone();
            builder.compose(gid, fid, cid);
        }
    }
    builder.build()
}

fn find_cycle(adj: &[Vec<(usize, &str)>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut mark = vec![Mark::White; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    for root in 0..adj.len() {
        if mark[root] != Mark::White {
            continue;
        }
        // iterative DFS with explicit finish events
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Grey;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let (w, _) = adj[v][*next];
                *next += 1;
                match mark[w] {
                    Mark::White => {
                        mark[w] = Mark::Grey;
                        parent[w] = v;
                        stack.push((w, 0));
                    }
                    Mark::Grey => {
                        // reconstruct the cycle w -> ... -> v -> w
                        let mut cycle = vec![w];
                        let mut cur = v;
                        while cur != w {
                            cycle.push(cur);
                            cur = parent[cur];
                        }
                        cycle.push(w);
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Mark::Black => {}
                }
            } else {
                mark[v] = Mark::Black;
                stack.pop();
            }
        }
    }
    None
}

/// Full subcategory on a set of object indices, with the composition table
/// restricted accordingly.
pub fn full_subcategory(c: &FinCat, objects: &[u32]) -> Result<FinCat> {
    let keep_obj: std::collections::HashSet<u32> = objects.iter().copied().collect();
    let mut obj_ids = Vec::with_capacity(objects.len());
    let mut obj_new = vec![u32::MAX; c.object_count()];
    let mut sorted = objects.to_vec();
    sorted.sort();
    for (i, &o) in sorted.iter().enumerate() {
        obj_ids.push(c.object_id(o).to_string());
        obj_new[o as usize] = i as u32;
    }
    let mut mors = Vec::new();
    let mut mor_new = vec![u32::MAX; c.morphism_count()];
    for m in 0..c.morphism_count() as u32 {
        let md = c.morphism(m);
        if keep_obj.contains(&md.src) && keep_obj.contains(&md.tgt) {
            mor_new[m as usize] = mors.len() as u32;
            mors.push((md.id.clone(), obj_new[md.src as usize], obj_new[md.tgt as usize]));
        }
    }
    let identity: Vec<u32> = sorted
        .iter()
        .map(|&o| mor_new[c.identity_of(o) as usize])
        .collect();
    let mut compose = Vec::new();
    for &mid in &sorted {
        for &f in c.into_obj(mid) {
            if mor_new[f as usize] == u32::MAX {
                continue;
            }
            for &g in c.out_of(mid) {
                if mor_new[g as usize] == u32::MAX {
                    continue;
                }
                if let Some(gf) = c.compose(g, f) {
                    if mor_new[gf as usize] != u32::MAX {
                        compose.push((mor_new[g as usize], mor_new[f as usize], mor_new[gf as usize]));
                    }
                }
            }
        }
    }
    FinCat::from_index_parts(obj_ids, mors, identity, compose)
}

/// Total number of composable chains of length `0..=bound` (identities
/// included), saturating. The cheap feasibility probe for nerve sizes.
pub fn count_chains(c: &FinCat, objects: &[u32], bound: usize) -> u128 {
    let keep: std::collections::HashSet<u32> = objects.iter().copied().collect();
    // counts[o] = number of chains of the current length ending at o
    let mut counts: HashMap<u32, u128> = objects.iter().map(|&o| (o, 1u128)).collect();
    let mut total: u128 = objects.len() as u128;
    for _ in 0..bound {
        let mut next: HashMap<u32, u128> = HashMap::new();
        for (&o, &n) in &counts {
            for &m in c.out_of(o) {
                if keep.contains(&c.tgt(m)) {
                    let e = next.entry(c.tgt(m)).or_insert(0);
                    *e = e.saturating_add(n);
                }
            }
        }
        let step: u128 = next.values().fold(0u128, |a, &b| a.saturating_add(b));
        total = total.saturating_add(step);
        counts = next;
        if counts.is_empty() {
            break;
        }
    }
    total
}

/// Relabel every object and morphism id through `f`, keeping the structure.
/// Used by the canonical-encoding tests (pair flattening).
pub fn relabel(c: &FinCat, f: impl Fn(&str) -> String) -> Result<FinCat> {
    let mut builder = CatBuilder::new();
    for o in c.objects() {
        builder.object(f(o));
    }
    for mi in 0..c.morphism_count() as u32 {
        let m = c.morphism(mi);
        builder.morphism(f(&m.id), f(c.object_id(m.src)), f(c.object_id(m.tgt)));
    }
    for oi in 0..c.object_count() as u32 {
        builder.identity(f(c.object_id(oi)), f(c.morphism_id(c.identity_of(oi))));
    }
    c.for_each_composable(|g, h| {
        if let Some(gh) = c.compose(g, h) {
            builder.compose(f(c.morphism_id(g)), f(c.morphism_id(h)), f(c.morphism_id(gh)));
        }
    });
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_cat;
    use crate::corpus;
    use crate::ids::flatten_pairs;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn product_with_terminal_is_isomorphic_after_relabel() {
        let c = corpus::delta(2);
        let t = corpus::terminal();
        let (p, _, _) = product(&c, &t, &caps()).unwrap();
        // strip the terminal coordinate: "(x,*)" -> "x"
        let stripped = relabel(&p, |id| ids::split_pair(id).unwrap().0).unwrap();
        assert_eq!(stripped, c);
    }

    #[test]
    fn product_chain2_chain1_counts() {
        // oracle: |Mor([p])| = #(i<=j pairs) = (p+1)(p+2)/2; product is 6*3
        let mor2 = 3 * 4 / 2;
        let mor1 = 2 * 3 / 2;
        let (p, pa, pb) = product(&corpus::delta(2), &corpus::delta(1), &caps()).unwrap();
        assert_eq!(p.object_count(), 6);
        assert_eq!(p.morphism_count(), mor2 * mor1);
        assert_eq!(p.morphism_count(), 18);
        assert!(validate_cat(&p).is_valid());
        assert_eq!(pa.target(), &corpus::delta(2));
        assert_eq!(pb.target(), &corpus::delta(1));
    }

    #[test]
    fn product_bc2_bc2_is_klein_four() {
        let (p, _, _) = product(&corpus::cyclic(2), &corpus::cyclic(2), &caps()).unwrap();
        assert_eq!(p.object_count(), 1);
        assert_eq!(p.morphism_count(), 4);
        assert!(validate_cat(&p).is_valid());
        // every non-identity element squares to the identity
        let e = p.identity_of(0);
        for m in 0..4u32 {
            assert_eq!(p.compose(m, m), Some(e));
        }
    }

    #[test]
    fn product_associative_up_to_flattening() {
        let a = corpus::delta(1);
        let b = corpus::cyclic(2);
        let c = corpus::delta(0);
        let (ab, _, _) = product(&a, &b, &caps()).unwrap();
        let (ab_c, _, _) = product(&ab, &c, &caps()).unwrap();
        let (bc, _, _) = product(&b, &c, &caps()).unwrap();
        let (a_bc, _, _) = product(&a, &bc, &caps()).unwrap();
        let left = relabel(&ab_c, |id| flatten_pairs(id)).unwrap();
        let right = relabel(&a_bc, |id| flatten_pairs(id)).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn pullback_along_identities_is_diagonal() {
        let c = corpus::cyclic(2);
        let id = FinFunctor::identity(&c);
        let (pb, _, _) = pullback_cat(&id, &id, &caps()).unwrap();
        assert_eq!(pb.object_count(), 1);
        assert_eq!(pb.morphism_count(), 2);
        assert!(validate_cat(&pb).is_valid());
    }

    #[test]
    fn pullback_of_disjoint_inclusions_is_empty() {
        let d = corpus::delta(1);
        let f = corpus::object_inclusion(&d, "0").unwrap();
        let g = corpus::object_inclusion(&d, "1").unwrap();
        let (pb, _, _) = pullback_cat(&f, &g, &caps()).unwrap();
        assert_eq!(pb.object_count(), 0);
        assert_eq!(pb.morphism_count(), 0);
    }

    #[test]
    fn opposite_reverses_arrows_and_is_involutive() {
        let d = corpus::delta(1);
        let op = opposite(&d);
        let m = op.morphism_index("0->1").unwrap();
        assert_eq!(op.object_id(op.src(m)), "1");
        assert_eq!(op.object_id(op.tgt(m)), "0");
        assert_eq!(opposite(&op), d);
        assert_eq!(opposite(&opposite(&corpus::cyclic(2))), corpus::cyclic(2));
        assert!(validate_cat(&op).is_valid());
    }

    #[test]
    fn free_category_on_single_edge_is_delta1() {
        let c = free_category_on_acyclic_graph(
            &["a".into(), "b".into()],
            &[("e".into(), "a".into(), "b".into())],
            &caps(),
        )
        .unwrap();
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.morphism_count(), 3);
        assert!(validate_cat(&c).is_valid());
    }

    #[test]
    fn free_category_on_parallel_edges() {
        // oracle: path enumeration = 2 identities + 2 edges
        let c = free_category_on_acyclic_graph(
            &["a".into(), "b".into()],
            &[
                ("e1".into(), "a".into(), "b".into()),
                ("e2".into(), "a".into(), "b".into()),
            ],
            &caps(),
        )
        .unwrap();
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.morphism_count(), 4);
        assert!(validate_cat(&c).is_valid());
    }

    #[test]
    fn free_category_rejects_cycles_with_witness() {
        let err = free_category_on_acyclic_graph(
            &["a".into(), "b".into(), "c".into()],
            &[
                ("e1".into(), "a".into(), "b".into()),
                ("e2".into(), "b".into(), "c".into()),
                ("e3".into(), "c".into(), "a".into()),
            ],
            &caps(),
        )
        .unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("cycle"), "{msg}");
        assert!(msg.contains("a"), "{msg}");
    }
}
