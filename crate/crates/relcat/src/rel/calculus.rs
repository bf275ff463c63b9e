//! 3-arrow calculi, plain and strict, checked by exhaustive span/cospan
//! search over the finite ambient category.

use std::collections::HashMap;

use super::structure::{KRelStructure, MaskSet};
use crate::cat::{CatBuilder, FinCat};
use crate::error::{Error, Result};

/// A declared 3-arrow calculus: subcategories `U`, `V` of the weak
/// equivalences together with a functorial factorization `w = v . u` whose
/// functoriality witnesses are supplied as data, not synthesized.
#[derive(Debug, Clone)]
pub struct ThreeArrowCalculus {
    pub u_mask: MaskSet,
    pub v_mask: MaskSet,
    /// w morphism -> (u part, v part) with `w = v . u`
    pub factorization: HashMap<u32, (u32, u32)>,
    /// (w, w', a, b) -> connecting morphism of the factored middle objects,
    /// for every square `b . w = w' . a`
    pub witnesses: HashMap<(u32, u32, u32, u32), u32>,
}

#[derive(Debug, Clone)]
pub struct CalculusReport {
    pub strict: bool,
    pub failures: Vec<String>,
}

impl CalculusReport {
    pub fn is_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All universal cocones of the span `b <-u- a -f-> c`: triples
/// (p, i_b: b->p, i_c: c->p) with `i_b . u = i_c . f`, universal among all
/// cocones. Universal representatives are unique up to unique isomorphism
/// but a strict mask may contain one representative's leg and not
/// another's, so the callers quantify existentially over them.
fn pushouts(c: &FinCat, u: u32, f: u32) -> Vec<(u32, u32, u32)> {
    debug_assert_eq!(c.src(u), c.src(f));
    let mut cocones: Vec<(u32, u32, u32)> = Vec::new();
    for apex in 0..c.object_count() as u32 {
        for &ib in c.hom(c.tgt(u), apex) {
            for &ic in c.hom(c.tgt(f), apex) {
                if c.compose(ib, u) == c.compose(ic, f) && c.compose(ib, u).is_some() {
                    cocones.push((apex, ib, ic));
                }
            }
        }
    }
    let mut universal = Vec::new();
    'outer: for &(apex, ib, ic) in &cocones {
        for &(apex2, jb, jc) in &cocones {
            let mut mediators = 0;
            for &m in c.hom(apex, apex2) {
                if c.compose(m, ib) == Some(jb) && c.compose(m, ic) == Some(jc) {
                    mediators += 1;
                }
            }
            if mediators != 1 {
                continue 'outer;
            }
        }
        universal.push((apex, ib, ic));
    }
    universal
}

/// All universal cones of the cospan `b -v-> a <-g- c` (shared target):
/// triples (p, p_b: p->b, p_c: p->c) with `v . p_b = g . p_c`.
fn pullbacks(c: &FinCat, v: u32, g: u32) -> Vec<(u32, u32, u32)> {
    debug_assert_eq!(c.tgt(v), c.tgt(g));
    let mut cones: Vec<(u32, u32, u32)> = Vec::new();
    for apex in 0..c.object_count() as u32 {
        for &pb in c.hom(apex, c.src(v)) {
            for &pc in c.hom(apex, c.src(g)) {
                if c.compose(v, pb) == c.compose(g, pc) && c.compose(v, pb).is_some() {
                    cones.push((apex, pb, pc));
                }
            }
        }
    }
    let mut universal = Vec::new();
    'outer: for &(apex, pb, pc) in &cones {
        for &(apex2, qb, qc) in &cones {
            let mut mediators = 0;
            for &m in c.hom(apex2, apex) {
                if c.compose(pb, m) == Some(qb) && c.compose(pc, m) == Some(qc) {
                    mediators += 1;
                }
            }
            if mediators != 1 {
                continue 'outer;
            }
        }
        universal.push((apex, pb, pc));
    }
    universal
}

/// Full subcategory on a mask (same objects, masked morphisms).
fn mask_subcategory(c: &FinCat, mask: &MaskSet) -> Result<FinCat> {
    let mut b = CatBuilder::new();
    for o in c.objects() {
        b.object(o.clone());
    }
    for m in mask.iter() {
        let md = c.morphism(m);
        b.morphism(
            md.id.clone(),
            c.object_id(md.src).to_string(),
            c.object_id(md.tgt).to_string(),
        );
    }
    for o in 0..c.object_count() as u32 {
        b.identity(
            c.object_id(o).to_string(),
            c.morphism_id(c.identity_of(o)).to_string(),
        );
    }
    for g in mask.iter() {
        for f in mask.iter() {
            if c.src(g) == c.tgt(f) {
                if let Some(gf) = c.compose(g, f) {
                    // mask closure guarantees gf is in the mask
                    b.compose(
                        c.morphism_id(g).to_string(),
                        c.morphism_id(f).to_string(),
                        c.morphism_id(gf).to_string(),
                    );
                }
            }
        }
    }
    b.build()
}

/// Translate a calculus to a mask subcategory (morphism ids are shared).
fn restrict_calculus(
    parent: &FinCat,
    sub: &FinCat,
    cal: &ThreeArrowCalculus,
) -> Result<ThreeArrowCalculus> {
    let tr = |m: u32| -> Result<u32> {
        sub.morphism_index(parent.morphism_id(m))
            .ok_or_else(|| Error::invalid("calculus morphism escapes the subcategory"))
    };
    let mut u_mask = MaskSet::identities(sub);
    for m in cal.u_mask.iter() {
        u_mask.set(tr(m)?);
    }
    let mut v_mask = MaskSet::identities(sub);
    for m in cal.v_mask.iter() {
        v_mask.set(tr(m)?);
    }
    let mut factorization = HashMap::new();
    for (&w, &(u, v)) in &cal.factorization {
        factorization.insert(tr(w)?, (tr(u)?, tr(v)?));
    }
    let mut witnesses = HashMap::new();
    for (&(w, w2, a, b), &c) in &cal.witnesses {
        // keep only squares whose frame survives in the subcategory
        let (tw, tw2) = (tr(w), tr(w2));
        let (ta, tb, tc) = (
            sub.morphism_index(parent.morphism_id(a)),
            sub.morphism_index(parent.morphism_id(b)),
            sub.morphism_index(parent.morphism_id(c)),
        );
        if let (Ok(tw), Ok(tw2), Some(ta), Some(tb), Some(tc)) = (tw, tw2, ta, tb, tc) {
            witnesses.insert((tw, tw2, ta, tb), tc);
        }
    }
    Ok(ThreeArrowCalculus {
        u_mask,
        v_mask,
        factorization,
        witnesses,
    })
}

/// Check a (strict) 3-arrow calculus on `z`:
///
/// * (i) pushouts of `U`-maps along arbitrary maps exist and the pushed map
///   stays in `U`;
/// * (ii) pullbacks of `V`-maps along arbitrary maps exist and the pulled
///   map stays in `V`;
/// * (iii) the factorization is total, correct, and functorial against the
///   supplied witnesses;
/// * when `strict`, additionally (i)' pushouts of `w`-maps along `U`-maps
///   stay in `w`, (ii)' pullbacks of `w`-maps along `V`-maps stay in `w`,
///   and the whole calculus restricts to a calculus on `(wC, wC)` and on
///   every `(v_iC, wC)`.
pub fn check_three_arrow_calculus(
    z: &KRelStructure,
    cal: &ThreeArrowCalculus,
    strict: bool,
) -> Result<CalculusReport> {
    let mut failures = Vec::new();
    let c = z.ambient();

    cal.u_mask
        .validate_subcategory(c)
        .map_err(|e| Error::invalid(format!("U: {e}")))?;
    cal.v_mask
        .validate_subcategory(c)
        .map_err(|e| Error::invalid(format!("V: {e}")))?;
    if !cal.u_mask.is_subset_of(z.w_mask()) || !cal.v_mask.is_subset_of(z.w_mask()) {
        return Err(Error::invalid("U and V must sit inside the weak equivalences"));
    }

    check_core(c, z.w_mask(), cal, &mut failures, "ambient");

    if strict {
        // (i)': pushouts of w along U stay in w
        for u in cal.u_mask.iter() {
            for w in z.w_mask().iter() {
                if c.src(w) != c.src(u) {
                    continue;
                }
                // legs convention: (from tgt(u), from tgt(w)); the pushout
                // of w along u is the leg from tgt(u)
                let found = pushouts(c, u, w);
                if found.is_empty() {
                    failures.push(format!(
                        "(i)' pushout of w-map `{}` along U-map `{}` does not exist",
                        c.morphism_id(w),
                        c.morphism_id(u)
                    ));
                } else if !found.iter().any(|&(_, leg, _)| z.w_mask().contains(leg)) {
                    failures.push(format!(
                        "(i)' pushout of w-map `{}` along U-map `{}` leaves w",
                        c.morphism_id(w),
                        c.morphism_id(u)
                    ));
                }
            }
        }
        // (ii)': pullbacks of w along V stay in w
        for v in cal.v_mask.iter() {
            for w in z.w_mask().iter() {
                if c.tgt(w) != c.tgt(v) {
                    continue;
                }
                let found = pullbacks(c, v, w);
                if found.is_empty() {
                    failures.push(format!(
                        "(ii)' pullback of w-map `{}` along V-map `{}` does not exist",
                        c.morphism_id(w),
                        c.morphism_id(v)
                    ));
                } else if !found.iter().any(|&(_, leg, _)| z.w_mask().contains(leg)) {
                    failures.push(format!(
                        "(ii)' pullback of w-map `{}` along V-map `{}` leaves w",
                        c.morphism_id(w),
                        c.morphism_id(v)
                    ));
                }
            }
        }
        // restriction to (wC, wC) and every (v_iC, wC)
        let wsub = mask_subcategory(c, z.w_mask())?;
        let wcal = restrict_calculus(c, &wsub, cal)?;
        let mut wmask = MaskSet::identities(&wsub);
        for m in z.w_mask().iter() {
            if let Some(i) = wsub.morphism_index(c.morphism_id(m)) {
                wmask.set(i);
            }
        }
        check_core(&wsub, &wmask, &wcal, &mut failures, "(wC,wC)");
        for i in 0..z.k() {
            let visub = mask_subcategory(c, z.v_mask(i))?;
            let vical = restrict_calculus(c, &visub, cal)?;
            let mut wmask_i = MaskSet::identities(&visub);
            for m in z.w_mask().iter() {
                if let Some(ix) = visub.morphism_index(c.morphism_id(m)) {
                    wmask_i.set(ix);
                }
            }
            check_core(
                &visub,
                &wmask_i,
                &vical,
                &mut failures,
                &format!("(v_{}C,wC)", i + 1),
            );
        }
    }

    Ok(CalculusReport { strict, failures })
}

fn check_core(
    c: &FinCat,
    w_mask: &MaskSet,
    cal: &ThreeArrowCalculus,
    failures: &mut Vec<String>,
    scope: &str,
) {
    // (i) pushouts of U along anything exist and land in U
    for u in cal.u_mask.iter() {
        for f in 0..c.morphism_count() as u32 {
            if c.src(f) != c.src(u) {
                continue;
            }
            // ic: tgt(f) -> apex is the pushout of u along f
            let found = pushouts(c, u, f);
            if found.is_empty() {
                failures.push(format!(
                    "{scope} (i): pushout of U-map `{}` along `{}` does not exist",
                    c.morphism_id(u),
                    c.morphism_id(f)
                ));
            } else if !found.iter().any(|&(_, _, ic)| cal.u_mask.contains(ic)) {
                failures.push(format!(
                    "{scope} (i): pushout of U-map `{}` along `{}` leaves U",
                    c.morphism_id(u),
                    c.morphism_id(f)
                ));
            }
        }
    }
    // (ii) pullbacks of V along anything exist and land in V
    for v in cal.v_mask.iter() {
        for g in 0..c.morphism_count() as u32 {
            if c.tgt(g) != c.tgt(v) {
                continue;
            }
            // pc: apex -> src(g) is the pullback of v along g
            let found = pullbacks(c, v, g);
            if found.is_empty() {
                failures.push(format!(
                    "{scope} (ii): pullback of V-map `{}` along `{}` does not exist",
                    c.morphism_id(v),
                    c.morphism_id(g)
                ));
            } else if !found.iter().any(|&(_, _, pc)| cal.v_mask.contains(pc)) {
                failures.push(format!(
                    "{scope} (ii): pullback of V-map `{}` along `{}` leaves V",
                    c.morphism_id(v),
                    c.morphism_id(g)
                ));
            }
        }
    }
    // (iii) factorization totality, typing, and functoriality
    for w in w_mask.iter() {
        match cal.factorization.get(&w) {
            None => failures.push(format!(
                "{scope} (iii): no factorization for w-map `{}`",
                c.morphism_id(w)
            )),
            Some(&(u, v)) => {
                if !cal.u_mask.contains(u) || !cal.v_mask.contains(v) {
                    failures.push(format!(
                        "{scope} (iii): factors of `{}` are not in (U, V)",
                        c.morphism_id(w)
                    ));
                } else if c.compose(v, u) != Some(w) {
                    failures.push(format!(
                        "{scope} (iii): v.u != w for `{}`",
                        c.morphism_id(w)
                    ));
                }
            }
        }
    }
    // functoriality over every square b.w = w'.a between w-maps
    for w in w_mask.iter() {
        for w2 in w_mask.iter() {
            let (fu, fv) = match (cal.factorization.get(&w), cal.factorization.get(&w2)) {
                (Some(&x), Some(&y)) => (x, y),
                _ => continue,
            };
            for &a in c.hom(c.src(w), c.src(w2)) {
                for &b in c.hom(c.tgt(w), c.tgt(w2)) {
                    if c.compose(b, w) != c.compose(w2, a) || c.compose(b, w).is_none() {
                        continue;
                    }
                    match cal.witnesses.get(&(w, w2, a, b)) {
                        None => failures.push(format!(
                            "{scope} (iii): missing connecting witness for square `{}` -> `{}` via (`{}`,`{}`)",
                            c.morphism_id(w),
                            c.morphism_id(w2),
                            c.morphism_id(a),
                            c.morphism_id(b)
                        )),
                        Some(&conn) => {
                            let (u1, v1) = fu;
                            let (u2, v2) = fv;
                            let lhs = c.compose(conn, u1);
                            let rhs = c.compose(u2, a);
                            let lhs2 = c.compose(v2, conn);
                            let rhs2 = c.compose(b, v1);
                            if lhs != rhs || lhs.is_none() || lhs2 != rhs2 || lhs2.is_none() {
                                failures.push(format!(
                                    "{scope} (iii): witness equations fail on square `{}` -> `{}`",
                                    c.morphism_id(w),
                                    c.morphism_id(w2)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    // witnesses must respect identities and composition of squares
    for w in w_mask.iter() {
        let a = c.identity_of(c.src(w));
        let b = c.identity_of(c.tgt(w));
        if let Some(&conn) = cal.witnesses.get(&(w, w, a, b)) {
            if !c.is_identity(conn) {
                failures.push(format!(
                    "{scope} (iii): identity square of `{}` has non-identity witness",
                    c.morphism_id(w)
                ));
            }
        }
    }
    let square_keys: Vec<(u32, u32, u32, u32)> = cal.witnesses.keys().copied().collect();
    for &(w1, w2, a1, b1) in &square_keys {
        for &(w2b, w3, a2, b2) in &square_keys {
            if w2b != w2 {
                continue;
            }
            let (a, b) = match (c.compose(a2, a1), c.compose(b2, b1)) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            if let Some(&big) = cal.witnesses.get(&(w1, w3, a, b)) {
                let step = c.compose(cal.witnesses[&(w2, w3, a2, b2)], cal.witnesses[&(w1, w2, a1, b1)]);
                if step != Some(big) {
                    failures.push(format!(
                        "{scope} (iii): witnesses do not compose over `{}` -> `{}` -> `{}`",
                        c.morphism_id(w1),
                        c.morphism_id(w2),
                        c.morphism_id(w3)
                    ));
                }
            }
        }
    }
}

/// The identity-factorization calculus on a chain `p^w`: `U` just the
/// identities, `V` everything, `w = w . id`.
pub fn chain_calculus(z: &KRelStructure) -> ThreeArrowCalculus {
    let c = z.ambient();
    let u_mask = MaskSet::identities(c);
    let mut v_mask = MaskSet::identities(c);
    for m in z.w_mask().iter() {
        v_mask.set(m);
    }
    let mut factorization = HashMap::new();
    for w in z.w_mask().iter() {
        factorization.insert(w, (c.identity_of(c.src(w)), w));
    }
    // connecting morphism of a square (a, b) from w to w' is a itself
    let mut witnesses = HashMap::new();
    for w in z.w_mask().iter() {
        for w2 in z.w_mask().iter() {
            for &a in c.hom(c.src(w), c.src(w2)) {
                for &b in c.hom(c.tgt(w), c.tgt(w2)) {
                    if c.compose(b, w) == c.compose(w2, a) && c.compose(b, w).is_some() {
                        witnesses.insert((w, w2, a, b), a);
                    }
                }
            }
        }
    }
    ThreeArrowCalculus {
        u_mask,
        v_mask,
        factorization,
        witnesses,
    }
}

/// The isomorphism calculus on a minimal relative category: `U = V = w`
/// (identities), trivial factorization.
pub fn iso_calculus(z: &KRelStructure) -> ThreeArrowCalculus {
    chain_calculus(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::corpus;
    use crate::rel::{shape_chain, ShapeFlavor};

    #[test]
    fn chain_pw_has_a_strict_calculus() {
        for p in 1..=3usize {
            let z = shape_chain(p, ShapeFlavor::W, 1, &Caps::default()).unwrap();
            let cal = chain_calculus(&z);
            let report = check_three_arrow_calculus(&z, &cal, true).unwrap();
            assert!(report.is_pass(), "p = {p}: {:?}", report.failures);
        }
    }

    #[test]
    fn minimal_iso_calculus_passes() {
        for c in [corpus::delta(1), corpus::cyclic(2), corpus::square_poset()] {
            let z = corpus::minimal(&c);
            let cal = iso_calculus(&z);
            let report = check_three_arrow_calculus(&z, &cal, true).unwrap();
            assert!(report.is_pass(), "{:?}", report.failures);
        }
    }

    #[test]
    fn cospan_poset_pullback_nonexistence() {
        // Z = a -> c <- b with w = {a->c} plus identities, V = w, U = ids:
        // the pullback of a->c along b->c does not exist in the poset
        use crate::cat::CatBuilder;
        use crate::rel::{KRelStructure, MaskSet};
        let mut b = CatBuilder::new();
        for o in ["a", "b", "c"] {
            b.object(o);
            b.morphism(format!("1_{o}"), o, o);
            b.identity(o, format!("1_{o}"));
            b.compose(format!("1_{o}"), format!("1_{o}"), format!("1_{o}"));
        }
        for (id, s, t) in [("a<c", "a", "c"), ("b<c", "b", "c")] {
            b.morphism(id, s, t);
            b.compose(format!("1_{t}"), id, id);
            b.compose(id, format!("1_{s}"), id);
        }
        let cat = b.build().unwrap();
        let full = MaskSet::full(&cat);
        let mut w = MaskSet::identities(&cat);
        w.insert(&cat, "a<c");
        let z = KRelStructure::new(cat.clone(), vec![full], w.clone()).unwrap();

        let u_mask = MaskSet::identities(&cat);
        let mut v_mask = MaskSet::identities(&cat);
        v_mask.insert(&cat, "a<c");
        let mut factorization = HashMap::new();
        for wm in w.iter() {
            factorization.insert(wm, (cat.identity_of(cat.src(wm)), wm));
        }
        let cal = ThreeArrowCalculus {
            u_mask,
            v_mask,
            factorization,
            witnesses: HashMap::new(),
        };
        let report = check_three_arrow_calculus(&z, &cal, false).unwrap();
        assert!(!report.is_pass());
        assert!(
            report
                .failures
                .iter()
                .any(|f| f.contains("(ii)") && f.contains("does not exist")),
            "{:?}",
            report.failures
        );
    }
}
