//! The standard example set: small categories, relative structures, functor
//! zigzags, Grothendieck inputs, and declared calculi used throughout the
//! tests, the acceptance suite, and the CLI corpus generator.
//!
//! Everything here is deterministic; ids follow the canonical grammars.

use std::collections::HashMap;

use crate::caps::Caps;
use crate::cat::{CatBuilder, FinCat, FinFunctor};
use crate::error::Result;
use crate::rel::{shape_chain, KRelStructure, MaskSet, ShapeFlavor};

/// The chain poset `0 -> 1 -> ... -> p`. Morphism ids are `i->j` for
/// `i <= j`; `i->i` is the identity.
pub fn delta(p: usize) -> FinCat {
    let mut b = CatBuilder::new();
    for i in 0..=p {
        b.object(i.to_string());
    }
    for i in 0..=p {
        for j in i..=p {
            b.morphism(format!("{i}->{j}"), i.to_string(), j.to_string());
        }
    }
    for i in 0..=p {
        b.identity(i.to_string(), format!("{i}->{i}"));
    }
    for i in 0..=p {
        for j in i..=p {
            for k in j..=p {
                b.compose(
                    format!("{j}->{k}"),
                    format!("{i}->{j}"),
                    format!("{i}->{k}"),
                );
            }
        }
    }
    b.build().expect("chain")
}

/// The terminal category (one object `*`, its identity only).
pub fn terminal() -> FinCat {
    discrete(&["*"])
}

/// Discrete category on the given object ids.
pub fn discrete(objects: &[&str]) -> FinCat {
    let mut b = CatBuilder::new();
    for o in objects {
        b.object(*o);
        b.morphism(format!("1_{o}"), *o, *o);
        b.identity(*o, format!("1_{o}"));
        b.compose(format!("1_{o}"), format!("1_{o}"), format!("1_{o}"));
    }
    b.build().expect("discrete")
}

/// One-object groupoid from a group multiplication table.
/// `elements[0]` must be the unit; `table[i][j]` is the index of e_i * e_j.
pub fn one_object_groupoid(name: &str, elements: &[&str], table: &[Vec<usize>]) -> FinCat {
    let obj = format!("*{name}");
    let mut b = CatBuilder::new();
    b.object(obj.clone());
    for e in elements {
        b.morphism((*e).to_string(), obj.clone(), obj.clone());
    }
    b.identity(obj, elements[0].to_string());
    for (i, row) in table.iter().enumerate() {
        for (j, &k) in row.iter().enumerate() {
            // row acts on the left: elements[i] . elements[j]
            b.compose(elements[i], elements[j], elements[k]);
        }
    }
    b.build().expect("group table")
}

/// Cyclic group C_n as a one-object groupoid `BC_n`.
pub fn cyclic(n: usize) -> FinCat {
    let elements: Vec<String> = (0..n).map(|i| if i == 0 { format!("e{n}") } else { format!("g{n}^{i}") }).collect();
    let refs: Vec<&str> = elements.iter().map(|s| s.as_str()).collect();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    one_object_groupoid(&format!("C{n}"), &refs, &table)
}

/// Klein four-group as a one-object groupoid.
pub fn klein_four() -> FinCat {
    let elements = ["eV", "vA", "vB", "vC"];
    // xor table on {0,1,2,3} with 0 the unit
    let table: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    one_object_groupoid("V4", &elements, &table)
}

/// Symmetric group S3 as a one-object groupoid, from its full table.
pub fn symmetric_3() -> FinCat {
    // elements: e, r, r2 (3-cycles), s, sr, sr2 (transpositions)
    // composition by permutation action on {0,1,2}
    let perms: Vec<(&str, [usize; 3])> = vec![
        ("s3e", [0, 1, 2]),
        ("s3r", [1, 2, 0]),
        ("s3rr", [2, 0, 1]),
        ("s3s", [1, 0, 2]),
        ("s3sr", [0, 2, 1]),
        ("s3srr", [2, 1, 0]),
    ];
    let compose = |a: &[usize; 3], b: &[usize; 3]| -> [usize; 3] {
        // (a . b)(x) = a(b(x))
        [a[b[0]], a[b[1]], a[b[2]]]
    };
    let names: Vec<&str> = perms.iter().map(|(n, _)| *n).collect();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|(_, pa)| {
            perms
                .iter()
                .map(|(_, pb)| {
                    let c = compose(pa, pb);
                    perms.iter().position(|(_, p)| *p == c).unwrap()
                })
                .collect()
        })
        .collect();
    one_object_groupoid("S3", &names, &table)
}

/// The pseudo-circle poset: two minimal points `a`, `b` under two maximal
/// points `c`, `d`, full incidence. Its nerve is a circle.
pub fn pseudo_circle() -> FinCat {
    let mut b = CatBuilder::new();
    for o in ["a", "b", "c", "d"] {
        b.object(o);
        b.morphism(format!("1_{o}"), o, o);
        b.identity(o, format!("1_{o}"));
        b.compose(format!("1_{o}"), format!("1_{o}"), format!("1_{o}"));
    }
    for (s, t) in [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")] {
        let id = format!("{s}<{t}");
        b.morphism(id.clone(), s, t);
        b.compose(format!("1_{t}"), id.clone(), id.clone());
        b.compose(id.clone(), format!("1_{s}"), id);
    }
    b.build().expect("pseudo-circle")
}

/// The commuting 2x2 square poset: objects `00, 01, 10, 11`, one diagonal.
pub fn square_poset() -> FinCat {
    let mut b = CatBuilder::new();
    let le = |x: &str, y: &str| -> bool {
        let (x0, x1) = (x.as_bytes()[0], x.as_bytes()[1]);
        let (y0, y1) = (y.as_bytes()[0], y.as_bytes()[1]);
        x0 <= y0 && x1 <= y1
    };
    let objs = ["00", "01", "10", "11"];
    for o in objs {
        b.object(o);
    }
    for s in objs {
        for t in objs {
            if le(s, t) {
                b.morphism(format!("{s}<{t}"), s, t);
            }
        }
    }
    for o in objs {
        b.identity(o, format!("{o}<{o}"));
    }
    for s in objs {
        for m in objs {
            for t in objs {
                if le(s, m) && le(m, t) {
                    b.compose(format!("{m}<{t}"), format!("{s}<{m}"), format!("{s}<{t}"));
                }
            }
        }
    }
    b.build().expect("square poset")
}

/// All named corpus categories (for blanket validation and nerve laws).
pub fn all_categories() -> Vec<(&'static str, FinCat)> {
    vec![
        ("terminal", terminal()),
        ("delta1", delta(1)),
        ("delta2", delta(2)),
        ("delta3", delta(3)),
        ("BC2", cyclic(2)),
        ("BC3", cyclic(3)),
        ("BC4", cyclic(4)),
        ("BV4", klein_four()),
        ("BS3", symmetric_3()),
        ("pseudo_circle", pseudo_circle()),
        ("square", square_poset()),
        ("discrete2", discrete(&["x", "y"])),
    ]
}

/// Maximal relative structure (k = 1, everything a weak equivalence).
pub fn maximal(c: &FinCat) -> KRelStructure {
    KRelStructure::maximal_k(c, 1).expect("maximal")
}

/// Minimal relative structure (k = 1, only identities weak equivalences).
pub fn minimal(c: &FinCat) -> KRelStructure {
    KRelStructure::minimal_k1(c).expect("minimal")
}

/// Cat-hat object: k = 0, i.e. a maximal 0-relative structure.
pub fn cat_hat(c: &FinCat) -> KRelStructure {
    KRelStructure::maximal_k(c, 0).expect("cat-hat")
}

/// The k = 2 structure on the square poset: v1 = horizontal arrows,
/// v2 = vertical arrows, w = identities.
pub fn square_k2() -> KRelStructure {
    let c = square_poset();
    let mut v1 = MaskSet::identities(&c);
    let mut v2 = MaskSet::identities(&c);
    // horizontal: second coordinate moves; vertical: first coordinate moves
    v1.insert(&c, "00<01");
    v1.insert(&c, "10<11");
    v2.insert(&c, "00<10");
    v2.insert(&c, "01<11");
    let w = MaskSet::identities(&c);
    KRelStructure::new(c, vec![v1, v2], w).expect("square k2")
}

/// Like [`square_k2`] but on a square with its commutativity broken: the two
/// length-2 paths around the square compose to different diagonals.
pub fn broken_square_k2() -> KRelStructure {
    let mut b = CatBuilder::new();
    let objs = ["00", "01", "10", "11"];
    for o in objs {
        b.object(o);
        b.morphism(format!("1_{o}"), o, o);
        b.identity(o, format!("1_{o}"));
    }
    for (id, s, t) in [
        ("h0", "00", "01"),
        ("h1", "10", "11"),
        ("v0", "00", "10"),
        ("v1", "01", "11"),
        ("dA", "00", "11"),
        ("dB", "00", "11"),
    ] {
        b.morphism(id, s, t);
    }
    for o in objs {
        b.compose(format!("1_{o}"), format!("1_{o}"), format!("1_{o}"));
    }
    let arrows = [
        ("h0", "00", "01"),
        ("h1", "10", "11"),
        ("v0", "00", "10"),
        ("v1", "01", "11"),
        ("dA", "00", "11"),
        ("dB", "00", "11"),
    ];
    for (m, s, t) in arrows {
        b.compose(format!("1_{t}"), m, m);
        b.compose(m, format!("1_{s}"), m);
    }
    b.compose("v1", "h0", "dA");
    b.compose("h1", "v0", "dB");
    let c = b.build().expect("broken square");
    let mut v1 = MaskSet::identities(&c);
    let mut v2 = MaskSet::identities(&c);
    v1.insert(&c, "h0");
    v1.insert(&c, "h1");
    v2.insert(&c, "v0");
    v2.insert(&c, "v1");
    let w = MaskSet::identities(&c);
    KRelStructure::new(c, vec![v1, v2], w).expect("broken square k2")
}

/// Functor picking out one object (the inclusion `0^w -> c` at `obj`).
pub fn object_inclusion(c: &FinCat, obj: &str) -> Result<FinFunctor> {
    let t = terminal();
    FinFunctor::new(
        t.clone(),
        c.clone(),
        &[("*".into(), obj.into())],
        &[("1_*".into(), {
            let oi = c
                .object_index(obj)
                .ok_or_else(|| crate::error::Error::invalid(format!("no object `{obj}`")))?;
            c.morphism_id(c.identity_of(oi)).into()
        })],
    )
}

/// A group homomorphism as a functor between one-object groupoids, given by
/// the image of each morphism id.
pub fn group_functor(src: &FinCat, tgt: &FinCat, images: &HashMap<String, String>) -> Result<FinFunctor> {
    let obj_map = vec![(src.object_id(0).to_string(), tgt.object_id(0).to_string())];
    let mor_map: Vec<(String, String)> = src
        .morphism_ids()
        .map(|m| (m.to_string(), images[m].clone()))
        .collect();
    FinFunctor::new(src.clone(), tgt.clone(), &obj_map, &mor_map)
}

/// Relative-level zigzag `f: X -> Z <- Y :g` between k-relative structures.
#[derive(Debug, Clone)]
pub struct RelZigzag {
    pub name: String,
    pub x: KRelStructure,
    pub z: KRelStructure,
    pub y: KRelStructure,
    pub f: FinFunctor,
    pub g: FinFunctor,
}

/// `{*} -> BG <- {*}` with both feet at the unique object (Cat-hat level).
pub fn point_zigzag(name: &str, bg: &FinCat) -> RelZigzag {
    let t = terminal();
    let f = object_inclusion(bg, bg.object_id(0)).unwrap();
    RelZigzag {
        name: name.to_string(),
        x: cat_hat(&t),
        z: cat_hat(bg),
        y: cat_hat(&t),
        f: f.clone(),
        g: f,
    }
}

/// `{0} -> Delta^1 <- {1}` (maximal), the negative control.
pub fn endpoint_zigzag() -> RelZigzag {
    let d = delta(1);
    RelZigzag {
        name: "endpoints_into_delta1".to_string(),
        x: cat_hat(&terminal()),
        z: cat_hat(&d),
        y: cat_hat(&terminal()),
        f: object_inclusion(&d, "0").unwrap(),
        g: object_inclusion(&d, "1").unwrap(),
    }
}

/// `id: BG -> BG <- BG :id`.
pub fn identity_zigzag(name: &str, bg: &FinCat) -> RelZigzag {
    let id = FinFunctor::identity(bg);
    RelZigzag {
        name: name.to_string(),
        x: cat_hat(bg),
        z: cat_hat(bg),
        y: cat_hat(bg),
        f: id.clone(),
        g: id,
    }
}

/// The Cat-hat zigzag corpus: every zigzag the embedding / path-object laws
/// are expected to hold on. Sizes stay inside the default caps for n <= 3.
pub fn zigzag_corpus() -> Vec<RelZigzag> {
    vec![
        point_zigzag("point_into_BC2", &cyclic(2)),
        point_zigzag("point_into_BC3", &cyclic(3)),
        point_zigzag("point_into_BC4", &cyclic(4)),
        endpoint_zigzag(),
        identity_zigzag("identity_BC3", &cyclic(3)),
        identity_zigzag("terminal_identity", &terminal()),
    ]
}

/// k-relative objects whose path objects the suite exercises (A4-style),
/// all within the default caps for n <= 3.
pub fn path_object_corpus() -> Vec<(String, KRelStructure)> {
    let mut out: Vec<(String, KRelStructure)> = vec![
        ("terminal_max".into(), maximal(&terminal())),
        ("delta1_max".into(), maximal(&delta(1))),
        ("delta1_min".into(), minimal(&delta(1))),
        ("BC2_max".into(), maximal(&cyclic(2))),
        ("BC3_max".into(), maximal(&cyclic(3))),
        ("BC4_max".into(), maximal(&cyclic(4))),
        ("pseudo_circle_max".into(), maximal(&pseudo_circle())),
        ("square_k2".into(), square_k2()),
    ];
    for p in 1..=3usize {
        out.push((
            format!("chain{p}_w"),
            shape_chain(p, ShapeFlavor::W, 1, &Caps::default()).unwrap(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::validate_cat;

    #[test]
    fn groups_have_valid_tables() {
        for c in [cyclic(2), cyclic(3), cyclic(4), klein_four(), symmetric_3()] {
            assert!(validate_cat(&c).is_valid());
            assert_eq!(c.object_count(), 1);
        }
        assert_eq!(symmetric_3().morphism_count(), 6);
    }

    #[test]
    fn bc2_has_one_object_two_morphisms() {
        let c = cyclic(2);
        assert_eq!(c.object_count(), 1);
        assert_eq!(c.morphism_count(), 2);
    }

    #[test]
    fn pseudo_circle_shape() {
        let c = pseudo_circle();
        assert_eq!(c.object_count(), 4);
        assert_eq!(c.morphism_count(), 8);
        assert!(validate_cat(&c).is_valid());
    }
}
