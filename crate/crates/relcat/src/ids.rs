//! Canonical id grammars.
//!
//! Every construction in the crate emits deterministic ids built from the
//! ids of its inputs, so that structural identities can be decided by plain
//! string equality:
//!
//! * pairs (products, pullbacks, Grothendieck objects): `(a,b)`
//! * zigzag objects: `z[m_n|...|m_1]` (highest leg first)
//! * zigzag ladders (maps of path objects): `l[w_n|...|w_0]`
//! * nerve chains: `c[x]` in degree 0, `c[m_1|m_2|...]` above
//! * grid diagrams: `g[dims|objects|steps]`
//!
//! Component ids are escaped so the grammars stay injective even when they
//! nest (a zigzag of pair ids, a chain of ladder ids, ...). Ids free of the
//! separator characters `(),|;[]\` print exactly in the grammar above.

const SPECIAL: &[char] = &['\\', ',', '|', ';', '(', ')', '[', ']'];

pub fn esc(id: &str) -> String {
    if !id.contains(SPECIAL) {
        return id.to_string();
    }
    let mut out = String::with_capacity(id.len() + 4);
    for ch in id.chars() {
        if SPECIAL.contains(&ch) {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

pub fn pair(a: &str, b: &str) -> String {
    format!("({},{})", esc(a), esc(b))
}

fn join(items: &[&str], sep: char) -> String {
    let mut out = String::new();
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push(sep);
        }
        out.push_str(&esc(item));
    }
    out
}

/// Zigzag object id, legs given in order `m_1, ..., m_n`; printed `m_n` first.
pub fn zigzag(legs: &[String]) -> String {
    let rev: Vec<&str> = legs.iter().rev().map(|s| s.as_str()).collect();
    format!("z[{}]", join(&rev, '|'))
}

/// Ladder (path-object morphism) id, verticals given in order `w_0, ..., w_n`;
/// printed `w_n` first to match the zigzag convention.
pub fn ladder(verticals: &[String]) -> String {
    let rev: Vec<&str> = verticals.iter().rev().map(|s| s.as_str()).collect();
    format!("l[{}]", join(&rev, '|'))
}

/// Nerve chain id in degree 0 (a single object).
pub fn chain0(obj: &str) -> String {
    format!("c[{}]", esc(obj))
}

/// Nerve chain id in degree >= 1, morphisms in composition order.
pub fn chain(mors: &[&str]) -> String {
    format!("c[{}]", join(mors, '|'))
}

/// Grid diagram id: dimensions, then the object at every grid point in
/// lexicographic point order, then the unit steps grouped per direction.
pub fn grid(dims: &[usize], objects: &[&str], steps_per_dir: &[Vec<&str>]) -> String {
    let mut out = String::from("g[");
    for (i, d) in dims.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&d.to_string());
    }
    out.push('|');
    out.push_str(&join(objects, ','));
    out.push('|');
    for (i, dir) in steps_per_dir.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push_str(&join(dir, ','));
    }
    out.push(']');
    out
}

/// Split a pair id back into its components. Returns `None` when `id` is not
/// in the pair grammar. Used by the documented pair-flattening convention.
pub fn split_pair(id: &str) -> Option<(String, String)> {
    let inner = id.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0usize;
    let mut escaped = false;
    let chars: Vec<char> = inner.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        if escaped {
            escaped = false;
            continue;
        }
        match ch {
            '\\' => escaped = true,
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                let a = unesc_top(&chars[..i]);
                let b = unesc_top(&chars[i + 1..]);
                return Some((a, b));
            }
            _ => {}
        }
    }
    None
}

fn unesc_top(chars: &[char]) -> String {
    let mut out = String::with_capacity(chars.len());
    let mut escaped = false;
    for &ch in chars {
        if escaped {
            out.push(ch);
            escaped = false;
        } else if ch == '\\' {
            escaped = true;
        } else {
            out.push(ch);
        }
    }
    out
}

/// The documented pair-flattening convention: nested pair ids built by
/// repeated left- or right-association collapse to one flat tuple, so
/// `((a,b),c)` and `(a,(b,c))` both print as `(a,b,c)`.
pub fn flatten_pairs(id: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    collect_pair_leaves(id, &mut parts);
    if parts.len() <= 1 {
        return id.to_string();
    }
    let refs: Vec<&str> = parts.iter().map(|s| s.as_str()).collect();
    format!("({})", join(&refs, ','))
}

fn collect_pair_leaves(id: &str, out: &mut Vec<String>) {
    match split_pair(id) {
        Some((a, b)) => {
            collect_pair_leaves(&a, out);
            collect_pair_leaves(&b, out);
        }
        None => out.push(id.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_grammar_plain() {
        assert_eq!(pair("a", "b"), "(a,b)");
        assert_eq!(split_pair("(a,b)"), Some(("a".into(), "b".into())));
    }

    #[test]
    fn zigzag_grammar_order() {
        let legs = vec!["m1".to_string(), "m2".to_string(), "m3".to_string()];
        assert_eq!(zigzag(&legs), "z[m3|m2|m1]");
    }

    #[test]
    fn nested_pairs_stay_parsable() {
        let p = pair(&pair("a", "b"), "c");
        assert_eq!(split_pair(&p).unwrap().1, "c");
        assert_eq!(flatten_pairs(&p), "(a,b,c)");
        assert_eq!(flatten_pairs(&pair("a", &pair("b", "c"))), "(a,b,c)");
    }

    #[test]
    fn escaping_keeps_grammar_injective() {
        // An id that itself contains a comma must not split the pair wrongly.
        let tricky = pair("x,y", "z");
        assert_eq!(split_pair(&tricky), Some(("x,y".into(), "z".into())));
        let a = chain(&["l[w1|w0]", "l[w1'|w0']"]);
        let b = chain(&["l[w1|w0]|l[w1'", "w0']"]);
        assert_ne!(a, b);
    }
}
