use super::core::FinCat;

/// One violated axiom with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatViolation {
    /// `compose(g, f)` missing for a composable pair.
    MissingComposition { g: String, f: String },
    /// table entry on a non-composable pair
    IllTypedComposition { g: String, f: String },
    /// src/tgt of `compose(g,f)` disagree with `src(f)`/`tgt(g)`
    EndpointMismatch { g: String, f: String, gf: String },
    /// an identity law fails at `f`
    IdentityLaw { f: String },
    /// associativity fails on the triple `(h, g, f)`
    Associativity { h: String, g: String, f: String },
}

/// Report listing every violated [`FinCat`] axiom with witnesses.
/// Empty iff the invariants hold.
#[derive(Debug, Clone, Default)]
pub struct CatReport {
    pub violations: Vec<CatViolation>,
}

impl CatReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check identity laws, totality and typing of the composition table,
/// src/tgt coherence, and associativity over the full table.
pub fn validate_cat(c: &FinCat) -> CatReport {
    let mut report = CatReport::default();

    // every stored entry must be on a composable pair with coherent endpoints
    for (g, f, gf) in c.compose_entries_sorted() {
        if c.tgt(f) != c.src(g) {
            report.violations.push(CatViolation::IllTypedComposition {
                g: c.morphism_id(g).into(),
                f: c.morphism_id(f).into(),
            });
            continue;
        }
        if c.src(gf) != c.src(f) || c.tgt(gf) != c.tgt(g) {
            report.violations.push(CatViolation::EndpointMismatch {
                g: c.morphism_id(g).into(),
                f: c.morphism_id(f).into(),
                gf: c.morphism_id(gf).into(),
            });
        }
    }

    // totality
    c.for_each_composable(|g, f| {
        if c.compose(g, f).is_none() {
            report.violations.push(CatViolation::MissingComposition {
                g: c.morphism_id(g).into(),
                f: c.morphism_id(f).into(),
            });
        }
    });

    // identity laws
    for fm in 0..c.morphism_count() as u32 {
        let id_t = c.identity_of(c.tgt(fm));
        let id_s = c.identity_of(c.src(fm));
        let left = c.compose(id_t, fm);
        let right = c.compose(fm, id_s);
        if left != Some(fm) || right != Some(fm) {
            report.violations.push(CatViolation::IdentityLaw {
                f: c.morphism_id(fm).into(),
            });
        }
    }

    // associativity over all composable triples
    for oa in 0..c.object_count() as u32 {
        for &f in c.into_obj(oa) {
            for &g in c.out_of(oa) {
                let gf = match c.compose(g, f) {
                    Some(x) => x,
                    None => continue,
                };
                for &h in c.out_of(c.tgt(g)) {
                    let hg = match c.compose(h, g) {
                        Some(x) => x,
                        None => continue,
                    };
                    if c.compose(h, gf) != c.compose(hg, f) || c.compose(h, gf).is_none() {
                        report.violations.push(CatViolation::Associativity {
                            h: c.morphism_id(h).into(),
                            g: c.morphism_id(g).into(),
                            f: c.morphism_id(f).into(),
                        });
                    }
                }
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::core::CatBuilder;
    use crate::corpus;

    #[test]
    fn terminal_category_is_valid() {
        assert!(validate_cat(&corpus::terminal()).is_valid());
    }

    #[test]
    fn bc2_is_valid_by_exhaustive_check() {
        // oracle: brute force over the 2x2 table is what validate_cat does;
        // the group axioms of C2 guarantee emptiness
        let report = validate_cat(&corpus::cyclic(2));
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn broken_identity_law_is_witnessed() {
        // one object, morphisms {e, g}, with compose(e, g) = e: identity law
        // fails at g
        let mut b = CatBuilder::new();
        b.object("*");
        b.morphism("e", "*", "*");
        b.morphism("g", "*", "*");
        b.identity("*", "e");
        b.compose("e", "e", "e");
        b.compose("g", "g", "e");
        b.compose("e", "g", "e"); // should be g
        b.compose("g", "e", "g");
        let c = b.build().unwrap();
        let report = validate_cat(&c);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, CatViolation::IdentityLaw { f } if f == "g")));
    }

    #[test]
    fn missing_table_entry_is_reported() {
        let mut b = CatBuilder::new();
        b.object("*");
        b.morphism("e", "*", "*");
        b.morphism("g", "*", "*");
        b.identity("*", "e");
        b.compose("e", "e", "e");
        b.compose("e", "g", "g");
        b.compose("g", "e", "g");
        // (g, g) missing
        let c = b.build().unwrap();
        let report = validate_cat(&c);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, CatViolation::MissingComposition { g, f } if g == "g" && f == "g")));
    }

    #[test]
    fn all_corpus_categories_validate_clean() {
        for (name, c) in corpus::all_categories() {
            let report = validate_cat(&c);
            assert!(report.is_valid(), "{name}: {:?}", report.violations);
        }
    }
}
