use std::collections::BTreeSet;

use crate::caps::Caps;
use crate::cat::{product, FinCat, FinFunctor};
use crate::error::{Error, Result};

/// A wide subcategory mask: a per-morphism selection that contains all
/// identities and is closed under composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskSet {
    bits: Vec<u64>,
    len: usize,
}

impl MaskSet {
    pub fn empty(n: usize) -> MaskSet {
        MaskSet {
            bits: vec![0; n.div_ceil(64)],
            len: n,
        }
    }

    /// Identities only.
    pub fn identities(c: &FinCat) -> MaskSet {
        let mut m = MaskSet::empty(c.morphism_count());
        for o in 0..c.object_count() as u32 {
            m.set(c.identity_of(o));
        }
        m
    }

    /// Every morphism.
    pub fn full(c: &FinCat) -> MaskSet {
        let mut m = MaskSet::empty(c.morphism_count());
        for i in 0..c.morphism_count() as u32 {
            m.set(i);
        }
        m
    }

    pub fn from_ids<'a>(c: &FinCat, ids: impl IntoIterator<Item = &'a str>) -> Result<MaskSet> {
        let mut m = MaskSet::identities(c);
        for id in ids {
            m.insert(c, id)
                .then_some(())
                .ok_or_else(|| Error::invalid(format!("mask references unknown morphism `{id}`")))?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, c: &FinCat, id: &str) -> bool {
        match c.morphism_index(id) {
            Some(i) => {
                self.set(i);
                true
            }
            None => false,
        }
    }

    pub fn set(&mut self, i: u32) {
        self.bits[i as usize / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: u32) -> bool {
        self.bits[i as usize / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &MaskSet) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len as u32).filter(move |&i| self.contains(i))
    }

    pub fn ids<'c>(&self, c: &'c FinCat) -> Vec<&'c str> {
        self.iter().map(|i| c.morphism_id(i)).collect()
    }

    /// Contains all identities and is closed under composition; on failure
    /// returns a witness description.
    pub fn validate_subcategory(&self, c: &FinCat) -> std::result::Result<(), String> {
        for o in 0..c.object_count() as u32 {
            if !self.contains(c.identity_of(o)) {
                return Err(format!(
                    "mask misses the identity of object `{}`",
                    c.object_id(o)
                ));
            }
        }
        let mut bad = None;
        c.for_each_composable(|g, f| {
            if bad.is_some() {
                return;
            }
            if self.contains(g) && self.contains(f) {
                if let Some(gf) = c.compose(g, f) {
                    if !self.contains(gf) {
                        bad = Some((g, f, gf));
                    }
                }
            }
        });
        if let Some((g, f, gf)) = bad {
            return Err(format!(
                "mask is not closed: `{}` . `{}` = `{}` escapes",
                c.morphism_id(g),
                c.morphism_id(f),
                c.morphism_id(gf)
            ));
        }
        Ok(())
    }
}

/// A k-relative category: an ambient finite category with k wide
/// subcategory masks `v_1 ... v_k` and a weak-equivalence mask `w`, with
/// `w` contained in every `v_i`.
///
/// Degenerate arities: for `k = 0` the tuple is just `(ambient, w)` with
/// `w` the whole ambient (a maximal relative category, i.e. a Cat-hat
/// object); for `k = 1` the single `v_1` equals the ambient, so 1-relative
/// categories are ordinary relative categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRelStructure {
    ambient: FinCat,
    v_masks: Vec<MaskSet>,
    w_mask: MaskSet,
    /// declared saturation flag; only the maximal/minimal sufficient
    /// conditions are auto-verified (see [`KRelStructure::declare_saturated`])
    saturated: bool,
}

impl KRelStructure {
    pub fn new(ambient: FinCat, v_masks: Vec<MaskSet>, w_mask: MaskSet) -> Result<KRelStructure> {
        let k = v_masks.len();
        for (i, v) in v_masks.iter().enumerate() {
            v.validate_subcategory(&ambient)
                .map_err(|e| Error::invalid(format!("v_{}: {e}", i + 1)))?;
        }
        w_mask
            .validate_subcategory(&ambient)
            .map_err(|e| Error::invalid(format!("w: {e}")))?;
        for (i, v) in v_masks.iter().enumerate() {
            if !w_mask.is_subset_of(v) {
                return Err(Error::invalid(format!(
                    "containment violated: w is not a subset of v_{}",
                    i + 1
                )));
            }
        }
        if k == 0 && w_mask != MaskSet::full(&ambient) {
            return Err(Error::invalid(
                "a 0-relative category must have w = ambient (maximal)",
            ));
        }
        if k == 1 && v_masks[0] != MaskSet::full(&ambient) {
            return Err(Error::invalid(
                "a 1-relative category must have v_1 = ambient",
            ));
        }
        Ok(KRelStructure {
            ambient,
            v_masks,
            w_mask,
            saturated: false,
        })
    }

    /// Maximal structure at arity `k`: every mask is everything.
    pub fn maximal_k(c: &FinCat, k: usize) -> Result<KRelStructure> {
        let full = MaskSet::full(c);
        let mut s = KRelStructure::new(c.clone(), vec![full.clone(); k], full)?;
        s.saturated = true;
        Ok(s)
    }

    /// Minimal relative category (k = 1): only identities are weak
    /// equivalences.
    pub fn minimal_k1(c: &FinCat) -> Result<KRelStructure> {
        let mut s = KRelStructure::new(
            c.clone(),
            vec![MaskSet::full(c)],
            MaskSet::identities(c),
        )?;
        s.saturated = true;
        Ok(s)
    }

    /// Declare the structure saturated. Verified automatically only in the
    /// maximal and minimal cases; otherwise the flag is taken on trust.
    pub fn declare_saturated(&mut self) {
        self.saturated = true;
    }

    pub fn is_saturated_declared(&self) -> bool {
        self.saturated
    }

    pub fn ambient(&self) -> &FinCat {
        &self.ambient
    }

    pub fn k(&self) -> usize {
        self.v_masks.len()
    }

    pub fn v_mask(&self, i: usize) -> &MaskSet {
        &self.v_masks[i]
    }

    pub fn v_masks(&self) -> &[MaskSet] {
        &self.v_masks
    }

    pub fn w_mask(&self) -> &MaskSet {
        &self.w_mask
    }

    pub fn is_weak_equivalence(&self, m: u32) -> bool {
        self.w_mask.contains(m)
    }

    /// Is every morphism a weak equivalence?
    pub fn is_maximal(&self) -> bool {
        self.w_mask.count() == self.ambient.morphism_count()
    }

    /// Is the ambient a groupoid with every morphism weak?
    pub fn is_maximal_groupoid(&self) -> bool {
        self.is_maximal() && crate::cat::is_groupoid(&self.ambient)
    }

    /// A functor of the underlying categories is a relative functor when it
    /// maps each mask into the corresponding mask of the target.
    pub fn is_relative_functor(&self, f: &FinFunctor, target: &KRelStructure) -> bool {
        if f.source() != &self.ambient || f.target() != &target.ambient || self.k() != target.k() {
            return false;
        }
        for m in 0..self.ambient.morphism_count() as u32 {
            let fm = f.on_morphism(m);
            if self.w_mask.contains(m) && !target.w_mask.contains(fm) {
                return false;
            }
            for i in 0..self.k() {
                if self.v_masks[i].contains(m) && !target.v_masks[i].contains(fm) {
                    return false;
                }
            }
        }
        true
    }

    /// Product of two k-relative structures of the same arity: ambient
    /// product, masks componentwise.
    pub fn product(&self, other: &KRelStructure, caps: &Caps) -> Result<(KRelStructure, FinFunctor, FinFunctor)> {
        if self.k() != other.k() {
            return Err(Error::invalid("product needs equal arity"));
        }
        let (p, pa, pb) = product(&self.ambient, &other.ambient, caps)?;
        let mask_of = |ma: &MaskSet, mb: &MaskSet| -> MaskSet {
            let mut m = MaskSet::empty(p.morphism_count());
            for i in 0..p.morphism_count() as u32 {
                if ma.contains(pa.on_morphism(i)) && mb.contains(pb.on_morphism(i)) {
                    m.set(i);
                }
            }
            m
        };
        let v_masks = (0..self.k())
            .map(|i| mask_of(&self.v_masks[i], &other.v_masks[i]))
            .collect();
        let w = mask_of(&self.w_mask, &other.w_mask);
        Ok((KRelStructure::new(p, v_masks, w)?, pa, pb))
    }
}

/// Which relative structure to put on a chain `[p]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeFlavor {
    /// `p^w`: every mask is the whole chain.
    W,
    /// `p^{v_i}` (1-based `i`): `v_i` is the whole chain, all other masks
    /// are identities only.
    V(usize),
    /// `p^v`: the minimal structure (all `v_j` full for k = 1 ... actually
    /// ambient full, `w` identities); only meaningful at k = 1.
    Minimal,
}

/// The chain shapes `p^w`, `p^{v_i}`, `p^v` at arity `k`.
pub fn shape_chain(p: usize, flavor: ShapeFlavor, k: usize, _caps: &Caps) -> Result<KRelStructure> {
    let c = crate::corpus::delta(p);
    match flavor {
        ShapeFlavor::W => {
            let full = MaskSet::full(&c);
            KRelStructure::new(c.clone(), vec![full.clone(); k], full)
        }
        ShapeFlavor::V(i) => {
            if i == 0 || i > k {
                return Err(Error::invalid(format!("v_{i} out of range for k = {k}")));
            }
            let mut v_masks = vec![MaskSet::identities(&c); k];
            v_masks[i - 1] = MaskSet::full(&c);
            let w = MaskSet::identities(&c);
            KRelStructure::new(c, v_masks, w)
        }
        ShapeFlavor::Minimal => {
            if k != 1 {
                return Err(Error::invalid("minimal chain shape is a k = 1 notion"));
            }
            KRelStructure::minimal_k1(&c)
        }
    }
}

/// Objects of the ambient category reachable as composites of `union(v_i)`;
/// used by the k-relative axiom (i) check.
pub fn generated_subcategory(c: &FinCat, generators: &[&MaskSet]) -> MaskSet {
    let mut reach = MaskSet::identities(c);
    for g in generators {
        for m in g.iter() {
            reach.set(m);
        }
    }
    // close under composition
    let mut frontier: BTreeSet<u32> = reach.iter().collect();
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        let current: Vec<u32> = reach.iter().collect();
        for &f in &frontier {
            for &g in &current {
                if c.src(g) == c.tgt(f) {
                    if let Some(gf) = c.compose(g, f) {
                        if !reach.contains(gf) {
                            reach.set(gf);
                            next.insert(gf);
                        }
                    }
                }
                if c.src(f) == c.tgt(g) {
                    if let Some(fg) = c.compose(f, g) {
                        if !reach.contains(fg) {
                            reach.set(fg);
                            next.insert(fg);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn mask_closure_detects_escape() {
        let d = corpus::delta(2);
        let mut m = MaskSet::identities(&d);
        m.insert(&d, "0->1");
        m.insert(&d, "1->2");
        // 0->2 missing: not closed
        assert!(m.validate_subcategory(&d).is_err());
        m.insert(&d, "0->2");
        assert!(m.validate_subcategory(&d).is_ok());
    }

    #[test]
    fn containment_is_enforced() {
        let d = corpus::delta(1);
        let w = MaskSet::full(&d);
        let v = MaskSet::identities(&d);
        assert!(KRelStructure::new(d, vec![v], w).is_err());
    }

    #[test]
    fn degenerate_arities() {
        let d = corpus::delta(1);
        let max0 = KRelStructure::maximal_k(&d, 0).unwrap();
        assert_eq!(max0.k(), 0);
        assert!(max0.is_maximal());
        let min1 = KRelStructure::minimal_k1(&d).unwrap();
        assert_eq!(min1.w_mask().count(), 2);
    }

    #[test]
    fn shapes_match_their_definitions() {
        let caps = Caps::default();
        // 0^w: one object, identity only, all masks full
        let s = shape_chain(0, ShapeFlavor::W, 2, &caps).unwrap();
        assert_eq!(s.ambient().object_count(), 1);
        assert_eq!(s.w_mask().count(), 1);
        assert_eq!(s.v_mask(0).count(), 1);

        // 1^w at k = 1: both masks contain the unique arrow
        let s = shape_chain(1, ShapeFlavor::W, 1, &caps).unwrap();
        let arrow = s.ambient().morphism_index("0->1").unwrap();
        assert!(s.w_mask().contains(arrow));
        assert!(s.v_mask(0).contains(arrow));

        // 2^{v_1} at k = 2: v_1 full, v_2 and w identities only
        let s = shape_chain(2, ShapeFlavor::V(1), 2, &caps).unwrap();
        assert_eq!(s.v_mask(0).count(), s.ambient().morphism_count());
        assert_eq!(s.v_mask(1).count(), 3);
        assert_eq!(s.w_mask().count(), 3);
        assert!(shape_chain(2, ShapeFlavor::V(3), 2, &caps).is_err());
    }

    #[test]
    fn product_masks_are_componentwise() {
        let caps = Caps::default();
        let a = corpus::maximal(&corpus::delta(1));
        let b = corpus::minimal(&corpus::delta(1));
        let (p, pa, pb) = a.product(&b, &caps).unwrap();
        for m in 0..p.ambient().morphism_count() as u32 {
            let expected = a.w_mask().contains(pa.on_morphism(m))
                && b.w_mask().contains(pb.on_morphism(m));
            assert_eq!(p.w_mask().contains(m), expected);
        }
    }
}
