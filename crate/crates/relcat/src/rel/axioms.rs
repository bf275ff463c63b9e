//! The two generation axioms of k-relative categories.
//!
//! Axiom (i), that every ambient map is a finite composition of maps in the
//! `v_i`, is decided exactly by closing the union of the `v_i` masks under
//! composition.
//!
//! Axiom (ii), that every relation of the ambient category is a consequence
//! of the relations inside the `v_i` and of mixed squares, is only
//! semi-decidable from a composition table; we run a bounded congruence
//! closure on composable words over the `v_i`, with an explicit depth and an
//! `InconclusiveAtDepth` verdict. The congruence is generated by
//!
//! * contraction of adjacent letters lying in one common `v_i`, and
//! * adjacent swaps `y.x ~ x'.y'` across every mixed square shape
//!   (`x, x'` in `v_i`, `y, y'` in `v_j`, `i != j`) with matching endpoints.
//!
//! Mixed squares are imposed on *shape*: if a square shape exists whose two
//! sides evaluate differently in the ambient category, the closure becomes
//! inconsistent and the axiom fails with that pair of words as witness.

use std::collections::HashMap;

use super::structure::{generated_subcategory, KRelStructure};
use crate::cat::FinCat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomVerdict {
    Pass,
    Fail { witness: String },
    InconclusiveAtDepth { depth: usize, reason: String },
}

#[derive(Debug, Clone)]
pub struct KrelReport {
    pub generation: AxiomVerdict,
    pub relations: AxiomVerdict,
}

impl KrelReport {
    pub fn is_pass(&self) -> bool {
        self.generation == AxiomVerdict::Pass && self.relations == AxiomVerdict::Pass
    }
}

/// Budget on the number of words the congruence closure may touch.
const WORD_BUDGET: usize = 250_000;

pub fn validate_krel(c: &KRelStructure, relation_search_depth: usize) -> KrelReport {
    if c.k() == 0 {
        // 0-relative categories carry no generation axioms
        return KrelReport {
            generation: AxiomVerdict::Pass,
            relations: AxiomVerdict::Pass,
        };
    }
    let generation = check_generation(c);
    let relations = check_relations(c, relation_search_depth);
    KrelReport {
        generation,
        relations,
    }
}

fn check_generation(c: &KRelStructure) -> AxiomVerdict {
    let masks: Vec<_> = c.v_masks().iter().collect();
    let reach = generated_subcategory(c.ambient(), &masks);
    for m in 0..c.ambient().morphism_count() as u32 {
        if !reach.contains(m) {
            return AxiomVerdict::Fail {
                witness: format!(
                    "morphism `{}` is not a composite of v_i maps",
                    c.ambient().morphism_id(m)
                ),
            };
        }
    }
    AxiomVerdict::Pass
}

/// A word is a composable sequence of non-identity letters from the v_i
/// masks, read left to right in application order (`[x, y]` means `y . x`);
/// the empty word at an object is its identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Word {
    src: u32,
    letters: Vec<u32>,
}

struct Uf {
    parent: Vec<usize>,
}

impl Uf {
    fn new() -> Uf {
        Uf { parent: Vec::new() }
    }
    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn check_relations(c: &KRelStructure, depth: usize) -> AxiomVerdict {
    let cat = c.ambient();
    let k = c.k();

    // letters: non-identity morphisms in some v_i, with their mask colors
    let mut letter_colors: HashMap<u32, Vec<usize>> = HashMap::new();
    for m in 0..cat.morphism_count() as u32 {
        if cat.is_identity(m) {
            continue;
        }
        let colors: Vec<usize> = (0..k).filter(|&i| c.v_mask(i).contains(m)).collect();
        if !colors.is_empty() {
            letter_colors.insert(m, colors);
        }
    }

    // enumerate all composable words up to the depth
    let mut words: Vec<Word> = Vec::new();
    let mut index: HashMap<Word, usize> = HashMap::new();
    let mut uf = Uf::new();
    let push = |w: Word, words: &mut Vec<Word>, index: &mut HashMap<Word, usize>, uf: &mut Uf| -> usize {
        if let Some(&i) = index.get(&w) {
            return i;
        }
        let i = uf.add();
        index.insert(w.clone(), i);
        words.push(w);
        i
    };

    for o in 0..cat.object_count() as u32 {
        push(
            Word {
                src: o,
                letters: Vec::new(),
            },
            &mut words,
            &mut index,
            &mut uf,
        );
    }
    let mut frontier: Vec<usize> = (0..words.len()).collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for &wi in &frontier {
            let w = words[wi].clone();
            let end = word_target(cat, &w);
            for (&m, _) in letter_colors.iter() {
                if cat.src(m) != end {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(m);
                let nw = Word {
                    src: w.src,
                    letters,
                };
                if index.contains_key(&nw) {
                    continue;
                }
                if words.len() >= WORD_BUDGET {
                    return AxiomVerdict::InconclusiveAtDepth {
                        depth,
                        reason: format!("word budget {WORD_BUDGET} exhausted"),
                    };
                }
                next.push(push(nw, &mut words, &mut index, &mut uf));
            }
        }
        frontier = next;
    }

    // congruence generators
    let n_words = words.len();
    for wi in 0..n_words {
        let w = words[wi].clone();
        for at in 0..w.letters.len().saturating_sub(1) {
            let x = w.letters[at];
            let y = w.letters[at + 1];
            // contraction when x and y share a color
            let shared = letter_colors[&x]
                .iter()
                .any(|i| letter_colors[&y].contains(i));
            if shared {
                if let Some(z) = cat.compose(y, x) {
                    let mut letters: Vec<u32> = w.letters[..at].to_vec();
                    if !cat.is_identity(z) {
                        letters.push(z);
                    }
                    letters.extend_from_slice(&w.letters[at + 2..]);
                    let contracted = Word {
                        src: w.src,
                        letters,
                    };
                    if let Some(&ci) = index.get(&contracted) {
                        uf.union(wi, ci);
                    }
                }
            }
            // mixed swap across square shapes: segment [x in v_i, y in v_j]
            // matches any [y' in v_j, x' in v_i] with the same endpoints
            let has_mixed = letter_colors[&x]
                .iter()
                .any(|ix| letter_colors[&y].iter().any(|jy| ix != jy));
            if !has_mixed {
                continue;
            }
            let a = cat.src(x);
            let d = cat.tgt(y);
            for (&yp, yc) in letter_colors.iter() {
                if cat.src(yp) != a {
                    continue;
                }
                for (&xp, xc) in letter_colors.iter() {
                    if cat.src(xp) != cat.tgt(yp) || cat.tgt(xp) != d {
                        continue;
                    }
                    // need colors i for {x, xp} and j for {y, yp}, i != j
                    let ok = letter_colors[&x].iter().any(|i| {
                        xc.contains(i)
                            && letter_colors[&y]
                                .iter()
                                .any(|j| i != j && yc.contains(j))
                    });
                    if !ok {
                        continue;
                    }
                    let mut letters: Vec<u32> = w.letters[..at].to_vec();
                    letters.push(yp);
                    letters.push(xp);
                    letters.extend_from_slice(&w.letters[at + 2..]);
                    let swapped = Word {
                        src: w.src,
                        letters,
                    };
                    if let Some(&si) = index.get(&swapped) {
                        uf.union(wi, si);
                    }
                }
            }
        }
    }

    // consistency: one evaluation per class
    let mut class_eval: HashMap<usize, (u32, usize)> = HashMap::new();
    for wi in 0..n_words {
        let eval = evaluate(cat, &words[wi]);
        let root = uf.find(wi);
        match class_eval.get(&root) {
            None => {
                class_eval.insert(root, (eval, wi));
            }
            Some(&(other_eval, other_wi)) if other_eval != eval => {
                return AxiomVerdict::Fail {
                    witness: format!(
                        "words {} and {} are forced equal but evaluate to `{}` vs `{}`",
                        display_word(cat, &words[wi]),
                        display_word(cat, &words[other_wi]),
                        eval_id(cat, eval),
                        eval_id(cat, other_eval),
                    ),
                };
            }
            _ => {}
        }
    }

    // completeness at this depth: equal evaluations must be congruent
    let mut by_eval: HashMap<(u32, u32), usize> = HashMap::new();
    for wi in 0..n_words {
        let w = &words[wi];
        let eval = evaluate(cat, w);
        let key = (w.src, eval);
        match by_eval.get(&key) {
            None => {
                by_eval.insert(key, wi);
            }
            Some(&other) => {
                if uf.find(wi) != uf.find(other) {
                    return AxiomVerdict::InconclusiveAtDepth {
                        depth,
                        reason: format!(
                            "{} and {} both evaluate to `{}` but are not congruent at this depth",
                            display_word(cat, &words[wi]),
                            display_word(cat, &words[other]),
                            eval_id(cat, eval),
                        ),
                    };
                }
            }
        }
    }

    AxiomVerdict::Pass
}

fn word_target(cat: &FinCat, w: &Word) -> u32 {
    match w.letters.last() {
        Some(&m) => cat.tgt(m),
        None => w.src,
    }
}

/// Evaluate a word to its composite morphism (the identity for the empty
/// word).
fn evaluate(cat: &FinCat, w: &Word) -> u32 {
    let mut acc = cat.identity_of(w.src);
    for &m in &w.letters {
        acc = cat.compose(m, acc).expect("total table");
    }
    acc
}

fn eval_id(cat: &FinCat, eval: u32) -> String {
    cat.morphism_id(eval).to_string()
}

fn display_word(cat: &FinCat, w: &Word) -> String {
    if w.letters.is_empty() {
        return format!("[] at `{}`", cat.object_id(w.src));
    }
    let names: Vec<&str> = w.letters.iter().map(|&m| cat.morphism_id(m)).collect();
    format!("[{}]", names.join(" ; "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::corpus;
    use crate::rel::{shape_chain, ShapeFlavor};

    #[test]
    fn k1_relative_categories_pass_both_axioms() {
        let r = validate_krel(&corpus::maximal(&corpus::delta(2)), 4);
        assert!(r.is_pass(), "{r:?}");
        let r = validate_krel(&corpus::minimal(&corpus::cyclic(2)), 4);
        assert!(r.is_pass(), "{r:?}");
    }

    #[test]
    fn shape_p_vi_passes() {
        let s = shape_chain(2, ShapeFlavor::V(1), 2, &Caps::default()).unwrap();
        let r = validate_krel(&s, 4);
        assert!(r.is_pass(), "{r:?}");
    }

    #[test]
    fn commuting_square_passes_broken_square_fails_with_witness() {
        let r = validate_krel(&corpus::square_k2(), 4);
        assert!(r.is_pass(), "{r:?}");

        let r = validate_krel(&corpus::broken_square_k2(), 4);
        assert_eq!(r.generation, AxiomVerdict::Pass);
        match &r.relations {
            AxiomVerdict::Fail { witness } => {
                assert!(witness.contains("dA") || witness.contains("dB"), "{witness}");
            }
            other => panic!("expected Fail, got {other:?}"),
        }
    }

    #[test]
    fn zero_relative_is_vacuous() {
        let c = corpus::cat_hat(&corpus::delta(1));
        assert!(validate_krel(&c, 2).is_pass());
    }

    #[test]
    fn generation_failure_is_witnessed() {
        // ambient delta1 with v_1 = identities only is not generated
        use crate::rel::{KRelStructure, MaskSet};
        let d = corpus::delta(1);
        // k = 2 so that v masks need not equal the ambient
        let ids = MaskSet::identities(&d);
        let s = KRelStructure::new(d, vec![ids.clone(), ids.clone()], ids).unwrap();
        let r = validate_krel(&s, 3);
        assert!(matches!(r.generation, AxiomVerdict::Fail { .. }));
    }
}
