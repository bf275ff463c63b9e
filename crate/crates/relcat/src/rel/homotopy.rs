//! Strict homotopies: natural weak equivalences `h: C x 1^w -> D` between
//! relative functors.

use crate::caps::Caps;
use crate::cat::{FinCat, FinFunctor};
use crate::error::{Error, Result};
use crate::rel::structure::{KRelStructure, ShapeFlavor};
use crate::rel::shape_chain;

/// How to decide that a homotopy component is a weak equivalence.
pub enum WeOracle<'a> {
    /// membership in the w-mask of the target structure
    Mask(&'a KRelStructure),
    /// external judgement per component morphism id
    External(&'a dyn Fn(&str) -> bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomotopyVerdict {
    Valid,
    /// endpoint equation failed, with a witness object or morphism id
    EndpointMismatch { end: u8, witness: String },
    /// some component is not a weak equivalence
    ComponentNotWe { object: String },
}

/// The cylinder `C x 1^w` together with its two end embeddings.
pub struct Cylinder {
    pub krel: KRelStructure,
    pub end0: FinFunctor,
    pub end1: FinFunctor,
}

pub fn cylinder(c: &KRelStructure, caps: &Caps) -> Result<Cylinder> {
    let interval = shape_chain(1, ShapeFlavor::W, c.k().max(1), caps)?;
    // a 0-relative structure has no v masks; its cylinder interval is the
    // maximal structure on the chain with k = 0
    let interval = if c.k() == 0 {
        KRelStructure::maximal_k(interval.ambient(), 0)?
    } else {
        interval
    };
    let (krel, _, _) = c.product(&interval, caps)?;
    let end0 = end_embedding(c.ambient(), krel.ambient(), "0")?;
    let end1 = end_embedding(c.ambient(), krel.ambient(), "1")?;
    Ok(Cylinder { krel, end0, end1 })
}

fn end_embedding(c: &FinCat, cyl: &FinCat, end: &str) -> Result<FinFunctor> {
    let obj_map: Vec<(String, String)> = c
        .objects()
        .iter()
        .map(|o| (o.clone(), crate::ids::pair(o, end)))
        .collect();
    let mor_map: Vec<(String, String)> = c
        .morphism_ids()
        .map(|m| (m.to_string(), crate::ids::pair(m, &format!("{end}->{end}"))))
        .collect();
    FinFunctor::new(c.clone(), cyl.clone(), &obj_map, &mor_map)
}

/// Check that `h: C x 1^w -> D` is a strict homotopy from `f` to `g`:
/// `h(c, 0) = f(c)` and `h(c, 1) = g(c)` exactly, and every component
/// `h(c, 0->1)` is a weak equivalence per the oracle.
pub fn check_strict_homotopy(
    h: &FinFunctor,
    cyl: &Cylinder,
    f: &FinFunctor,
    g: &FinFunctor,
    oracle: &WeOracle<'_>,
) -> Result<HomotopyVerdict> {
    if h.source() != cyl.krel.ambient() {
        return Err(Error::invalid("homotopy must start at the cylinder"));
    }
    if f.source() != cyl.end0.source() || g.source() != f.source() {
        return Err(Error::invalid("endpoint functors have the wrong source"));
    }
    if f.target() != h.target() || g.target() != h.target() {
        return Err(Error::invalid("endpoint functors have the wrong target"));
    }

    let h0 = h.compose_with(&cyl.end0)?;
    if &h0 != f {
        let witness = first_difference(&h0, f);
        return Ok(HomotopyVerdict::EndpointMismatch { end: 0, witness });
    }
    let h1 = h.compose_with(&cyl.end1)?;
    if &h1 != g {
        let witness = first_difference(&h1, g);
        return Ok(HomotopyVerdict::EndpointMismatch { end: 1, witness });
    }

    // components: image of (1_c, 0->1)
    let c_cat = f.source();
    let cyl_cat = cyl.krel.ambient();
    let d = h.target();
    for o in 0..c_cat.object_count() as u32 {
        let id_c = c_cat.morphism_id(c_cat.identity_of(o));
        let seg = crate::ids::pair(id_c, "0->1");
        let seg_idx = cyl_cat
            .morphism_index(&seg)
            .ok_or_else(|| Error::invalid(format!("cylinder misses `{seg}`")))?;
        let comp = h.on_morphism(seg_idx);
        let ok = match oracle {
            WeOracle::Mask(target) => target.is_weak_equivalence(comp),
            WeOracle::External(f) => f(d.morphism_id(comp)),
        };
        if !ok {
            return Ok(HomotopyVerdict::ComponentNotWe {
                object: c_cat.object_id(o).to_string(),
            });
        }
    }
    Ok(HomotopyVerdict::Valid)
}

fn first_difference(a: &FinFunctor, b: &FinFunctor) -> String {
    let src = a.source();
    for o in 0..src.object_count() as u32 {
        if a.on_object(o) != b.on_object(o) {
            return format!("object `{}`", src.object_id(o));
        }
    }
    for m in 0..src.morphism_count() as u32 {
        if a.on_morphism(m) != b.on_morphism(m) {
            return format!("morphism `{}`", src.morphism_id(m));
        }
    }
    "targets differ".to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn identity_homotopy_is_valid() {
        // h = f . projection with f = g: components are identities
        let caps = Caps::default();
        let c = corpus::maximal(&corpus::delta(1));
        let cyl = cylinder(&c, &caps).unwrap();
        let f = FinFunctor::identity(c.ambient());
        // h: cylinder -> C, (c, t) -> c
        let cyl_cat = cyl.krel.ambient();
        let obj_map: Vec<(String, String)> = cyl_cat
            .objects()
            .iter()
            .map(|o| (o.clone(), crate::ids::split_pair(o).unwrap().0))
            .collect();
        let mor_map: Vec<(String, String)> = cyl_cat
            .morphism_ids()
            .map(|m| (m.to_string(), crate::ids::split_pair(m).unwrap().0))
            .collect();
        let h = FinFunctor::new(cyl_cat.clone(), c.ambient().clone(), &obj_map, &mor_map).unwrap();
        let verdict = check_strict_homotopy(&h, &cyl, &f, &f, &WeOracle::Mask(&c)).unwrap();
        assert_eq!(verdict, HomotopyVerdict::Valid);
    }

    #[test]
    fn endpoint_mismatch_is_witnessed() {
        let caps = Caps::default();
        let d1 = corpus::delta(1);
        let c = corpus::maximal(&d1);
        let cyl = cylinder(&c, &caps).unwrap();
        // h projects to C, but claim g sends everything to object 1
        let cyl_cat = cyl.krel.ambient();
        let obj_map: Vec<(String, String)> = cyl_cat
            .objects()
            .iter()
            .map(|o| (o.clone(), crate::ids::split_pair(o).unwrap().0))
            .collect();
        let mor_map: Vec<(String, String)> = cyl_cat
            .morphism_ids()
            .map(|m| (m.to_string(), crate::ids::split_pair(m).unwrap().0))
            .collect();
        let h = FinFunctor::new(cyl_cat.clone(), d1.clone(), &obj_map, &mor_map).unwrap();
        let f = FinFunctor::identity(&d1);
        let g_const = FinFunctor::new(
            d1.clone(),
            d1.clone(),
            &[("0".into(), "1".into()), ("1".into(), "1".into())],
            &[
                ("0->0".into(), "1->1".into()),
                ("0->1".into(), "1->1".into()),
                ("1->1".into(), "1->1".into()),
            ],
        )
        .unwrap();
        let verdict = check_strict_homotopy(&h, &cyl, &f, &g_const, &WeOracle::Mask(&c)).unwrap();
        assert!(matches!(
            verdict,
            HomotopyVerdict::EndpointMismatch { end: 1, .. }
        ));
    }

    #[test]
    fn component_outside_w_is_rejected() {
        // target minimal: the interval component 0->1 maps to a
        // non-identity, which is not a weak equivalence there
        let caps = Caps::default();
        let d1 = corpus::delta(1);
        let c_min = corpus::minimal(&d1);
        let cyl = cylinder(&c_min, &caps).unwrap();
        let cyl_cat = cyl.krel.ambient();
        // h: (t-coordinate drives the target): (c, t) -> t
        let obj_map: Vec<(String, String)> = cyl_cat
            .objects()
            .iter()
            .map(|o| (o.clone(), crate::ids::split_pair(o).unwrap().1))
            .collect();
        let mor_map: Vec<(String, String)> = cyl_cat
            .morphism_ids()
            .map(|m| (m.to_string(), crate::ids::split_pair(m).unwrap().1))
            .collect();
        let h = FinFunctor::new(cyl_cat.clone(), d1.clone(), &obj_map, &mor_map).unwrap();
        let f_const0 = FinFunctor::new(
            d1.clone(),
            d1.clone(),
            &[("0".into(), "0".into()), ("1".into(), "0".into())],
            &[
                ("0->0".into(), "0->0".into()),
                ("0->1".into(), "0->0".into()),
                ("1->1".into(), "0->0".into()),
            ],
        )
        .unwrap();
        let g_const1 = FinFunctor::new(
            d1.clone(),
            d1.clone(),
            &[("0".into(), "1".into()), ("1".into(), "1".into())],
            &[
                ("0->0".into(), "1->1".into()),
                ("0->1".into(), "1->1".into()),
                ("1->1".into(), "1->1".into()),
            ],
        )
        .unwrap();
        let verdict =
            check_strict_homotopy(&h, &cyl, &f_const0, &g_const1, &WeOracle::Mask(&c_min)).unwrap();
        assert!(matches!(verdict, HomotopyVerdict::ComponentNotWe { .. }));
    }
}
