use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Packed key for the composition table: `(g, f) -> g . f`.
#[inline]
fn key(g: u32, f: u32) -> u64 {
    ((g as u64) << 32) | f as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorData {
    pub id: String,
    pub src: u32,
    pub tgt: u32,
}

#[derive(Debug)]
struct CatData {
    objects: Vec<String>,
    morphisms: Vec<MorData>,
    /// identity morphism index per object index
    identity: Vec<u32>,
    /// total composition table over morphism indices
    compose: HashMap<u64, u32>,
    obj_index: HashMap<String, u32>,
    mor_index: HashMap<String, u32>,
    /// morphism indices grouped by (src, tgt), each group sorted
    hom: HashMap<(u32, u32), Vec<u32>>,
    /// outgoing morphisms per object (sorted)
    out_of: Vec<Vec<u32>>,
    /// incoming morphisms per object (sorted)
    into: Vec<Vec<u32>>,
}

/// A finite category: objects, morphisms with source/target, identities, and
/// a total composition table defined exactly on composable pairs.
///
/// Values are immutable after construction and cheap to clone (shared data).
/// Object and morphism ids are opaque strings; all constructors in this crate
/// emit deterministic canonical ids (see [`crate::ids`]). Objects and
/// morphisms are kept sorted by id so equal categories have equal encodings.
#[derive(Clone)]
pub struct FinCat(Arc<CatData>);

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({} objects, {} morphisms)",
            self.object_count(),
            self.morphism_count()
        )
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.objects == other.0.objects
            && self.0.morphisms == other.0.morphisms
            && self.0.identity == other.0.identity
            && self.0.compose == other.0.compose
    }
}

impl Eq for FinCat {}

/// Raw, unvalidated category data used to build a [`FinCat`].
#[derive(Debug, Clone, Default)]
pub struct CatBuilder {
    pub objects: Vec<String>,
    /// (morphism id, src object id, tgt object id)
    pub morphisms: Vec<(String, String, String)>,
    /// object id -> identity morphism id
    pub identities: Vec<(String, String)>,
    /// (g, f, g.f) by morphism id
    pub compositions: Vec<(String, String, String)>,
}

impl CatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, id: impl Into<String>) -> &mut Self {
        self.objects.push(id.into());
        self
    }

    pub fn morphism(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> &mut Self {
        self.morphisms.push((id.into(), src.into(), tgt.into()));
        self
    }

    pub fn identity(&mut self, obj: impl Into<String>, mor: impl Into<String>) -> &mut Self {
        self.identities.push((obj.into(), mor.into()));
        self
    }

    pub fn compose(
        &mut self,
        g: impl Into<String>,
        f: impl Into<String>,
        gf: impl Into<String>,
    ) -> &mut Self {
        self.compositions.push((g.into(), f.into(), gf.into()));
        self
    }

    /// Build, checking referential integrity but not the category axioms
    /// (see [`crate::cat::validate_cat`] for those).
    pub fn build(self) -> Result<FinCat> {
        FinCat::from_builder(self)
    }
}

impl FinCat {
    fn from_builder(b: CatBuilder) -> Result<FinCat> {
        let mut objects = b.objects;
        objects.sort();
        objects.dedup();
        let mut obj_index = HashMap::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i as u32).is_some() {
                return Err(Error::invalid(format!("duplicate object id `{o}`")));
            }
        }

        let mut raw = b.morphisms;
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut morphisms = Vec::with_capacity(raw.len());
        let mut mor_index = HashMap::with_capacity(raw.len());
        for (id, src, tgt) in raw {
            let s = *obj_index
                .get(&src)
                .ok_or_else(|| Error::invalid(format!("morphism `{id}` has unknown src `{src}`")))?;
            let t = *obj_index
                .get(&tgt)
                .ok_or_else(|| Error::invalid(format!("morphism `{id}` has unknown tgt `{tgt}`")))?;
            let idx = morphisms.len() as u32;
            if mor_index.insert(id.clone(), idx).is_some() {
                return Err(Error::invalid(format!("duplicate morphism id `{id}`")));
            }
            morphisms.push(MorData { id, src: s, tgt: t });
        }

        let mut identity = vec![u32::MAX; objects.len()];
        for (obj, mor) in &b.identities {
            let oi = *obj_index
                .get(obj)
                .ok_or_else(|| Error::invalid(format!("identity for unknown object `{obj}`")))?;
            let mi = *mor_index
                .get(mor)
                .ok_or_else(|| Error::invalid(format!("unknown identity morphism `{mor}`")))?;
            identity[oi as usize] = mi;
        }
        for (oi, &mi) in identity.iter().enumerate() {
            if mi == u32::MAX {
                return Err(Error::invalid(format!(
                    "object `{}` has no identity morphism",
                    objects[oi]
                )));
            }
        }

        let mut compose = HashMap::with_capacity(b.compositions.len());
        for (g, f, gf) in &b.compositions {
            let gi = *mor_index
                .get(g)
                .ok_or_else(|| Error::invalid(format!("composition references unknown `{g}`")))?;
            let fi = *mor_index
                .get(f)
                .ok_or_else(|| Error::invalid(format!("composition references unknown `{f}`")))?;
            let gfi = *mor_index
                .get(gf)
                .ok_or_else(|| Error::invalid(format!("composition references unknown `{gf}`")))?;
            if compose.insert(key(gi, fi), gfi).is_some() {
                return Err(Error::invalid(format!(
                    "composition (`{g}`,`{f}`) defined twice"
                )));
            }
        }

        let mut hom: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        let mut out_of = vec![Vec::new(); objects.len()];
        let mut into = vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            hom.entry((m.src, m.tgt)).or_default().push(i as u32);
            out_of[m.src as usize].push(i as u32);
            into[m.tgt as usize].push(i as u32);
        }

        Ok(FinCat(Arc::new(CatData {
            objects,
            morphisms,
            identity,
            compose,
            obj_index,
            mor_index,
            hom,
            out_of,
            into,
        })))
    }

    /// Index-level constructor for the combinatorial builders (path
    /// objects, pullbacks), avoiding id-keyed composition tables. Morphism
    /// entries are `(id, src object index, tgt object index)` referring to
    /// the given (unsorted) orders; everything is re-sorted by id and the
    /// index references remapped. Referential integrity is assumed, not
    /// checked; duplicate ids are rejected.
    pub fn from_index_parts(
        mut objects: Vec<String>,
        morphisms: Vec<(String, u32, u32)>,
        identity_by_object: Vec<u32>,
        compose_pairs: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Result<FinCat> {
        let mut obj_perm: Vec<u32> = (0..objects.len() as u32).collect();
        obj_perm.sort_by(|&a, &b| objects[a as usize].cmp(&objects[b as usize]));
        let mut obj_new = vec![0u32; objects.len()];
        for (new_i, &old_i) in obj_perm.iter().enumerate() {
            obj_new[old_i as usize] = new_i as u32;
        }
        let mut sorted_objects: Vec<String> = Vec::with_capacity(objects.len());
        for &old_i in &obj_perm {
            sorted_objects.push(std::mem::take(&mut objects[old_i as usize]));
        }
        let mut obj_index = HashMap::with_capacity(sorted_objects.len());
        for (i, o) in sorted_objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i as u32).is_some() {
                return Err(Error::invalid(format!("duplicate object id `{o}`")));
            }
        }

        let mut mor_perm: Vec<u32> = (0..morphisms.len() as u32).collect();
        mor_perm.sort_by(|&a, &b| morphisms[a as usize].0.cmp(&morphisms[b as usize].0));
        let mut mor_new = vec![0u32; morphisms.len()];
        for (new_i, &old_i) in mor_perm.iter().enumerate() {
            mor_new[old_i as usize] = new_i as u32;
        }
        let mut sorted_morphisms: Vec<MorData> = Vec::with_capacity(morphisms.len());
        let mut mor_index = HashMap::with_capacity(morphisms.len());
        let mut morphisms = morphisms;
        for &old_i in &mor_perm {
            let (id, src, tgt) = {
                let m = &mut morphisms[old_i as usize];
                (std::mem::take(&mut m.0), m.1, m.2)
            };
            let idx = sorted_morphisms.len() as u32;
            if mor_index.insert(id.clone(), idx).is_some() {
                return Err(Error::invalid(format!("duplicate morphism id `{id}`")));
            }
            sorted_morphisms.push(MorData {
                id,
                src: obj_new[src as usize],
                tgt: obj_new[tgt as usize],
            });
        }

        let mut identity = vec![u32::MAX; sorted_objects.len()];
        for (old_o, &old_m) in identity_by_object.iter().enumerate() {
            identity[obj_new[old_o] as usize] = mor_new[old_m as usize];
        }
        if identity.iter().any(|&m| m == u32::MAX) {
            return Err(Error::invalid("identity table not total"));
        }

        let mut compose = HashMap::new();
        for (g, f, gf) in compose_pairs {
            compose.insert(
                key(mor_new[g as usize], mor_new[f as usize]),
                mor_new[gf as usize],
            );
        }

        let mut hom: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        let mut out_of = vec![Vec::new(); sorted_objects.len()];
        let mut into = vec![Vec::new(); sorted_objects.len()];
        for (i, m) in sorted_morphisms.iter().enumerate() {
            hom.entry((m.src, m.tgt)).or_default().push(i as u32);
            out_of[m.src as usize].push(i as u32);
            into[m.tgt as usize].push(i as u32);
        }

        Ok(FinCat(Arc::new(CatData {
            objects: sorted_objects,
            morphisms: sorted_morphisms,
            identity,
            compose,
            obj_index,
            mor_index,
            hom,
            out_of,
            into,
        })))
    }

    pub fn object_count(&self) -> usize {
        self.0.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.0.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.0.objects
    }

    pub fn object_id(&self, idx: u32) -> &str {
        &self.0.objects[idx as usize]
    }

    pub fn morphism(&self, idx: u32) -> &MorData {
        &self.0.morphisms[idx as usize]
    }

    pub fn morphism_id(&self, idx: u32) -> &str {
        &self.0.morphisms[idx as usize].id
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = &str> {
        self.0.morphisms.iter().map(|m| m.id.as_str())
    }

    pub fn object_index(&self, id: &str) -> Option<u32> {
        self.0.obj_index.get(id).copied()
    }

    pub fn morphism_index(&self, id: &str) -> Option<u32> {
        self.0.mor_index.get(id).copied()
    }

    pub fn src(&self, m: u32) -> u32 {
        self.0.morphisms[m as usize].src
    }

    pub fn tgt(&self, m: u32) -> u32 {
        self.0.morphisms[m as usize].tgt
    }

    pub fn identity_of(&self, obj: u32) -> u32 {
        self.0.identity[obj as usize]
    }

    pub fn is_identity(&self, m: u32) -> bool {
        self.identity_of(self.src(m)) == m
    }

    /// `g . f` when `tgt(f) = src(g)` and the table has an entry.
    pub fn compose(&self, g: u32, f: u32) -> Option<u32> {
        self.0.compose.get(&key(g, f)).copied()
    }

    pub fn compose_len(&self) -> usize {
        self.0.compose.len()
    }

    /// Entries of the composition table sorted by morphism id, for
    /// serialization and reports.
    pub fn compose_entries_sorted(&self) -> Vec<(u32, u32, u32)> {
        let mut entries: Vec<(u32, u32, u32)> = self
            .0
            .compose
            .iter()
            .map(|(&k, &v)| ((k >> 32) as u32, (k & 0xffff_ffff) as u32, v))
            .collect();
        entries.sort_by(|a, b| {
            (self.morphism_id(a.0), self.morphism_id(a.1))
                .cmp(&(self.morphism_id(b.0), self.morphism_id(b.1)))
        });
        entries
    }

    pub fn hom(&self, src: u32, tgt: u32) -> &[u32] {
        self.0
            .hom
            .get(&(src, tgt))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn out_of(&self, obj: u32) -> &[u32] {
        &self.0.out_of[obj as usize]
    }

    pub fn into_obj(&self, obj: u32) -> &[u32] {
        &self.0.into[obj as usize]
    }

    /// Composable pairs `(g, f)` with `tgt(f) = src(g)`, visited in index order.
    pub fn for_each_composable(&self, mut visit: impl FnMut(u32, u32)) {
        for mid in 0..self.object_count() as u32 {
            for &f in self.into_obj(mid) {
                for &g in self.out_of(mid) {
                    visit(g, f);
                }
            }
        }
    }

    pub fn composable_pair_count(&self) -> usize {
        (0..self.object_count() as u32)
            .map(|o| self.into_obj(o).len() * self.out_of(o).len())
            .sum()
    }
}

/// A functor between finite categories, stored as total object and morphism
/// maps over indices. Equality is bit-exact: same source, target, and maps.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFunctor {
    source: FinCat,
    target: FinCat,
    object_map: Vec<u32>,
    morphism_map: Vec<u32>,
}

impl fmt::Debug for FinFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinFunctor({:?} -> {:?})", self.source, self.target)
    }
}

impl FinFunctor {
    /// Build from id-level maps, checking totality and (cheaply) that the
    /// data is functorial: identities, src/tgt, and every table entry.
    pub fn new(
        source: FinCat,
        target: FinCat,
        object_map_ids: &[(String, String)],
        morphism_map_ids: &[(String, String)],
    ) -> Result<FinFunctor> {
        let mut object_map = vec![u32::MAX; source.object_count()];
        for (from, to) in object_map_ids {
            let fi = source
                .object_index(from)
                .ok_or_else(|| Error::invalid(format!("functor maps unknown object `{from}`")))?;
            let ti = target
                .object_index(to)
                .ok_or_else(|| Error::invalid(format!("functor hits unknown object `{to}`")))?;
            object_map[fi as usize] = ti;
        }
        let mut morphism_map = vec![u32::MAX; source.morphism_count()];
        for (from, to) in morphism_map_ids {
            let fi = source
                .morphism_index(from)
                .ok_or_else(|| Error::invalid(format!("functor maps unknown morphism `{from}`")))?;
            let ti = target
                .morphism_index(to)
                .ok_or_else(|| Error::invalid(format!("functor hits unknown morphism `{to}`")))?;
            morphism_map[fi as usize] = ti;
        }
        Self::from_index_maps(source, target, object_map, morphism_map)
    }

    /// Build from index-level maps; validates functoriality.
    pub fn from_index_maps(
        source: FinCat,
        target: FinCat,
        object_map: Vec<u32>,
        morphism_map: Vec<u32>,
    ) -> Result<FinFunctor> {
        let f = FinFunctor {
            source,
            target,
            object_map,
            morphism_map,
        };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        if self.object_map.len() != self.source.object_count()
            || self.object_map.iter().any(|&o| o == u32::MAX)
        {
            return Err(Error::invalid("functor object map is not total"));
        }
        if self.morphism_map.len() != self.source.morphism_count()
            || self.morphism_map.iter().any(|&m| m == u32::MAX)
        {
            return Err(Error::invalid("functor morphism map is not total"));
        }
        for (mi, &ti) in self.morphism_map.iter().enumerate() {
            let m = self.source.morphism(mi as u32);
            let t = self.target.morphism(ti);
            if t.src != self.object_map[m.src as usize] || t.tgt != self.object_map[m.tgt as usize]
            {
                return Err(Error::invalid(format!(
                    "functor breaks src/tgt at morphism `{}`",
                    m.id
                )));
            }
        }
        for (oi, &ti) in self.object_map.iter().enumerate() {
            let id_src = self.source.identity_of(oi as u32);
            if self.morphism_map[id_src as usize] != self.target.identity_of(ti) {
                return Err(Error::invalid(format!(
                    "functor breaks identity at object `{}`",
                    self.source.object_id(oi as u32)
                )));
            }
        }
        let mut bad: Option<(u32, u32)> = None;
        self.source.for_each_composable(|g, f| {
            if bad.is_some() {
                return;
            }
            let gf = match self.source.compose(g, f) {
                Some(x) => x,
                None => return, // validate_cat reports totality separately
            };
            let img = self
                .target
                .compose(self.morphism_map[g as usize], self.morphism_map[f as usize]);
            if img != Some(self.morphism_map[gf as usize]) {
                bad = Some((g, f));
            }
        });
        if let Some((g, f)) = bad {
            return Err(Error::invalid(format!(
                "functor breaks composition at (`{}`,`{}`)",
                self.source.morphism_id(g),
                self.source.morphism_id(f)
            )));
        }
        Ok(())
    }

    pub fn identity(cat: &FinCat) -> FinFunctor {
        FinFunctor {
            source: cat.clone(),
            target: cat.clone(),
            object_map: (0..cat.object_count() as u32).collect(),
            morphism_map: (0..cat.morphism_count() as u32).collect(),
        }
    }

    pub fn source(&self) -> &FinCat {
        &self.source
    }

    pub fn target(&self) -> &FinCat {
        &self.target
    }

    pub fn on_object(&self, o: u32) -> u32 {
        self.object_map[o as usize]
    }

    pub fn on_morphism(&self, m: u32) -> u32 {
        self.morphism_map[m as usize]
    }

    pub fn object_map(&self) -> &[u32] {
        &self.object_map
    }

    pub fn morphism_map(&self) -> &[u32] {
        &self.morphism_map
    }

    /// `self . inner`, defined when `inner.target == self.source`.
    pub fn compose_with(&self, inner: &FinFunctor) -> Result<FinFunctor> {
        if inner.target != self.source {
            return Err(Error::invalid("functor composition shape mismatch"));
        }
        let object_map = inner
            .object_map
            .iter()
            .map(|&o| self.object_map[o as usize])
            .collect();
        let morphism_map = inner
            .morphism_map
            .iter()
            .map(|&m| self.morphism_map[m as usize])
            .collect();
        Ok(FinFunctor {
            source: inner.source.clone(),
            target: self.target.clone(),
            object_map,
            morphism_map,
        })
    }

    pub fn is_identity_functor(&self) -> bool {
        self.source == self.target
            && self
                .object_map
                .iter()
                .enumerate()
                .all(|(i, &o)| i as u32 == o)
            && self
                .morphism_map
                .iter()
                .enumerate()
                .all(|(i, &m)| i as u32 == m)
    }
}

/// A natural transformation between two parallel functors, stored as one
/// component morphism per source object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    source_functor: FinFunctor,
    target_functor: FinFunctor,
    components: Vec<u32>,
}

impl NatTrans {
    pub fn new(
        source_functor: FinFunctor,
        target_functor: FinFunctor,
        components: Vec<u32>,
    ) -> Result<NatTrans> {
        if source_functor.source() != target_functor.source()
            || source_functor.target() != target_functor.target()
        {
            return Err(Error::invalid(
                "natural transformation needs parallel functors",
            ));
        }
        let n = NatTrans {
            source_functor,
            target_functor,
            components,
        };
        n.check()?;
        Ok(n)
    }

    fn check(&self) -> Result<()> {
        let dom = self.source_functor.source();
        let cod = self.source_functor.target();
        if self.components.len() != dom.object_count() {
            return Err(Error::invalid("one component per object required"));
        }
        for (oi, &c) in self.components.iter().enumerate() {
            let m = cod.morphism(c);
            if m.src != self.source_functor.on_object(oi as u32)
                || m.tgt != self.target_functor.on_object(oi as u32)
            {
                return Err(Error::invalid(format!(
                    "component at `{}` has wrong endpoints",
                    dom.object_id(oi as u32)
                )));
            }
        }
        for mi in 0..dom.morphism_count() as u32 {
            let m = dom.morphism(mi);
            // naturality: c_tgt . F(m) = G(m) . c_src
            let left = cod.compose(self.components[m.tgt as usize], self.source_functor.on_morphism(mi));
            let right = cod.compose(self.target_functor.on_morphism(mi), self.components[m.src as usize]);
            if left.is_none() || left != right {
                return Err(Error::invalid(format!(
                    "naturality square fails at morphism `{}`",
                    m.id
                )));
            }
        }
        Ok(())
    }

    pub fn source_functor(&self) -> &FinFunctor {
        &self.source_functor
    }

    pub fn target_functor(&self) -> &FinFunctor {
        &self.target_functor
    }

    pub fn component(&self, obj: u32) -> u32 {
        self.components[obj as usize]
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }
}
