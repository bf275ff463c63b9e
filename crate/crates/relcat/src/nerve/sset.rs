//! Truncated multisimplicial sets: cells per multidegree within a bound,
//! with face and degeneracy maps per direction, validated against the
//! simplicial identities (same-direction and mixed).

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Rank of a multidegree in the odometer order over `(bound+1)^arity`.
pub fn degree_rank(bound: usize, degree: &[usize]) -> usize {
    let mut rank = 0;
    for &d in degree {
        rank = rank * (bound + 1) + d;
    }
    rank
}

pub fn all_degrees(arity: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * (bound + 1));
        for d in &out {
            for t in 0..=bound {
                let mut q = d.clone();
                q.push(t);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct Level {
    pub cells: Vec<String>,
    pub index: HashMap<String, u32>,
    /// faces[dir][i][cell] -> cell index one lower in `dir`
    pub faces: Vec<Vec<Vec<u32>>>,
    /// degens[dir][i][cell] -> cell index one higher in `dir`
    pub degens: Vec<Vec<Vec<u32>>>,
    /// cell is in the image of some degeneracy
    pub degenerate: Vec<bool>,
}

/// A truncated multisimplicial set of the given arity: cells for every
/// multidegree with all coordinates `<= bound`.
#[derive(Debug, Clone)]
pub struct TruncMultiSSet {
    pub arity: usize,
    pub bound: usize,
    pub levels: Vec<Level>,
}

impl TruncMultiSSet {
    pub fn level(&self, degree: &[usize]) -> &Level {
        &self.levels[degree_rank(self.bound, degree)]
    }

    pub fn cell_count(&self) -> usize {
        self.levels.iter().map(|l| l.cells.len()).sum()
    }

    pub fn nondegenerate_count(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.degenerate.iter().filter(|&&d| !d).count())
            .sum()
    }

    /// Exhaustively check the simplicial identities within the bound.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let degrees = all_degrees(self.arity, self.bound);
        for degree in &degrees {
            let level = self.level(degree);
            for cell in 0..level.cells.len() as u32 {
                self.check_cell(degree, cell)
                    .map_err(|e| format!("at {degree:?} cell `{}`: {e}", level.cells[cell as usize]))?;
            }
        }
        Ok(())
    }

    fn face(&self, degree: &[usize], dir: usize, i: usize, cell: u32) -> u32 {
        self.level(degree).faces[dir][i][cell as usize]
    }

    fn degen(&self, degree: &[usize], dir: usize, i: usize, cell: u32) -> u32 {
        self.level(degree).degens[dir][i][cell as usize]
    }

    fn check_cell(&self, degree: &[usize], cell: u32) -> std::result::Result<(), String> {
        let arity = self.arity;
        for dir in 0..arity {
            let d = degree[dir];
            // d_i d_j = d_{j-1} d_i for i < j (same direction); needs two
            // composable faces, so degree at least 2
            if d >= 2 {
                let mut lower = degree.to_vec();
                lower[dir] -= 1;
                for j in 0..=d {
                    for i in 0..j {
                        let a = self.face(&lower, dir, j - 1, self.face(degree, dir, i, cell));
                        let b = self.face(&lower, dir, i, self.face(degree, dir, j, cell));
                        if a != b {
                            return Err(format!("d{i} d{j} != d{} d{i} in dir {dir}", j - 1));
                        }
                    }
                }
            }
            // s_i s_j = s_{j+1} s_i for i <= j
            if d + 1 <= self.bound {
                let mut upper = degree.to_vec();
                upper[dir] += 1;
                if d + 2 <= self.bound {
                    for j in 0..=d {
                        for i in 0..=j {
                            let a = self.degen(&upper, dir, j + 1, self.degen(degree, dir, i, cell));
                            let b = self.degen(&upper, dir, i, self.degen(degree, dir, j, cell));
                            if a != b {
                                return Err(format!("s{i} s{j} != s{} s{i} in dir {dir}", j + 1));
                            }
                        }
                    }
                }
                // d_i s_j rules
                for j in 0..=d {
                    for i in 0..=d + 1 {
                        let sj = self.degen(degree, dir, j, cell);
                        let got = self.face(&upper, dir, i, sj);
                        if i == j || i == j + 1 {
                            if got != cell {
                                return Err(format!("d{i} s{j} != id in dir {dir}"));
                            }
                        } else if i < j {
                            if d >= 1 {
                                let mut lower = degree.to_vec();
                                lower[dir] -= 1;
                                let want =
                                    self.degen(&lower, dir, j - 1, self.face(degree, dir, i, cell));
                                if got != want {
                                    return Err(format!("d{i} s{j} != s{} d{i} in dir {dir}", j - 1));
                                }
                            }
                        } else {
                            // i > j + 1
                            if d >= 1 {
                                let mut lower = degree.to_vec();
                                lower[dir] -= 1;
                                let want =
                                    self.degen(&lower, dir, j, self.face(degree, dir, i - 1, cell));
                                if got != want {
                                    return Err(format!("d{i} s{j} != s{j} d{} in dir {dir}", i - 1));
                                }
                            }
                        }
                    }
                }
            }
            // mixed directions commute
            for dir2 in dir + 1..arity {
                let d2 = degree[dir2];
                if d >= 1 && d2 >= 1 {
                    let mut lo1 = degree.to_vec();
                    lo1[dir] -= 1;
                    let mut lo2 = degree.to_vec();
                    lo2[dir2] -= 1;
                    for i in 0..=d {
                        for j in 0..=d2 {
                            let a = self.face(&lo2, dir, i, self.face(degree, dir2, j, cell));
                            let b = self.face(&lo1, dir2, j, self.face(degree, dir, i, cell));
                            if a != b {
                                return Err(format!(
                                    "faces in dirs {dir} and {dir2} do not commute"
                                ));
                            }
                        }
                    }
                }
                if d < self.bound && d2 >= 1 {
                    let mut lo2 = degree.to_vec();
                    lo2[dir2] -= 1;
                    let mut up1 = degree.to_vec();
                    up1[dir] += 1;
                    for i in 0..=d {
                        for j in 0..=d2 {
                            let a = self.degen(&lo2, dir, i, self.face(degree, dir2, j, cell));
                            let b = self.face(&up1, dir2, j, self.degen(degree, dir, i, cell));
                            if a != b {
                                return Err(format!(
                                    "degeneracy {dir} and face {dir2} do not commute"
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builder for [`TruncMultiSSet`]; cells are registered with their faces and
/// degeneracies by id, then resolved and checked for totality.
pub struct MultiSSetBuilder {
    arity: usize,
    bound: usize,
    cells: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<Vec<String>>>>,
    degens: Vec<Vec<Vec<Vec<String>>>>,
}

impl MultiSSetBuilder {
    pub fn new(arity: usize, bound: usize) -> MultiSSetBuilder {
        let n_levels = (bound + 1).pow(arity as u32);
        MultiSSetBuilder {
            arity,
            bound,
            cells: vec![Vec::new(); n_levels],
            faces: vec![Vec::new(); n_levels],
            degens: vec![Vec::new(); n_levels],
        }
    }

    /// Add a cell with all face images (per direction, one per index; empty
    /// when the degree in that direction is 0) and all degeneracy images
    /// (empty when at the bound).
    pub fn add_cell(
        &mut self,
        degree: &[usize],
        id: String,
        faces: Vec<Vec<String>>,
        degens: Vec<Vec<String>>,
    ) {
        let rank = degree_rank(self.bound, degree);
        self.cells[rank].push(id);
        self.faces[rank].push(faces);
        self.degens[rank].push(degens);
    }

    pub fn build(self) -> Result<TruncMultiSSet> {
        let degrees = all_degrees(self.arity, self.bound);
        let mut levels: Vec<Level> = Vec::with_capacity(self.cells.len());
        // first pass: indexes
        for rank in 0..self.cells.len() {
            let mut level = Level::default();
            for (i, id) in self.cells[rank].iter().enumerate() {
                if level.index.insert(id.clone(), i as u32).is_some() {
                    return Err(Error::invalid(format!("duplicate cell id `{id}`")));
                }
            }
            level.cells = self.cells[rank].clone();
            level.degenerate = vec![false; level.cells.len()];
            levels.push(level);
        }
        // second pass: resolve faces/degens
        for degree in &degrees {
            let rank = degree_rank(self.bound, degree);
            let n = levels[rank].cells.len();
            let mut faces: Vec<Vec<Vec<u32>>> = Vec::with_capacity(self.arity);
            let mut degens: Vec<Vec<Vec<u32>>> = Vec::with_capacity(self.arity);
            for dir in 0..self.arity {
                let n_faces = if degree[dir] > 0 { degree[dir] + 1 } else { 0 };
                let n_degens = if degree[dir] < self.bound {
                    degree[dir] + 1
                } else {
                    0
                };
                faces.push(vec![vec![0u32; n]; n_faces]);
                degens.push(vec![vec![0u32; n]; n_degens]);
            }
            for cell in 0..n {
                let cell_faces = &self.faces[rank][cell];
                let cell_degens = &self.degens[rank][cell];
                if cell_faces.len() != self.arity || cell_degens.len() != self.arity {
                    return Err(Error::invalid(format!(
                        "cell `{}` lacks per-direction maps",
                        levels[rank].cells[cell]
                    )));
                }
                for dir in 0..self.arity {
                    let expect_faces = if degree[dir] > 0 { degree[dir] + 1 } else { 0 };
                    if cell_faces[dir].len() != expect_faces {
                        return Err(Error::invalid(format!(
                            "cell `{}` has {} faces in direction {dir}, expected {expect_faces}",
                            levels[rank].cells[cell],
                            cell_faces[dir].len()
                        )));
                    }
                    if expect_faces > 0 {
                        let mut lower = degree.clone();
                        lower[dir] -= 1;
                        let lower_rank = degree_rank(self.bound, &lower);
                        for (i, target) in cell_faces[dir].iter().enumerate() {
                            let t = levels[lower_rank].index.get(target).ok_or_else(|| {
                                Error::invalid(format!(
                                    "face target `{target}` missing at {lower:?}"
                                ))
                            })?;
                            faces[dir][i][cell] = *t;
                        }
                    }
                    let expect_degens = if degree[dir] < self.bound {
                        degree[dir] + 1
                    } else {
                        0
                    };
                    if cell_degens[dir].len() != expect_degens {
                        return Err(Error::invalid(format!(
                            "cell `{}` has {} degeneracies in direction {dir}, expected {expect_degens}",
                            levels[rank].cells[cell],
                            cell_degens[dir].len()
                        )));
                    }
                    if expect_degens > 0 {
                        let mut upper = degree.clone();
                        upper[dir] += 1;
                        let upper_rank = degree_rank(self.bound, &upper);
                        for (i, target) in cell_degens[dir].iter().enumerate() {
                            let t = levels[upper_rank].index.get(target).ok_or_else(|| {
                                Error::invalid(format!(
                                    "degeneracy target `{target}` missing at {upper:?}"
                                ))
                            })?;
                            degens[dir][i][cell] = *t;
                        }
                    }
                }
            }
            levels[rank].faces = faces;
            levels[rank].degens = degens;
        }
        // mark degenerate cells
        for degree in &degrees {
            let rank = degree_rank(self.bound, degree);
            for dir in 0..self.arity {
                if degree[dir] >= self.bound {
                    continue;
                }
                let mut upper = degree.clone();
                upper[dir] += 1;
                let upper_rank = degree_rank(self.bound, &upper);
                let images: Vec<u32> = levels[rank].degens[dir]
                    .iter()
                    .flat_map(|per_i| per_i.iter().copied())
                    .collect();
                for t in images {
                    levels[upper_rank].degenerate[t as usize] = true;
                }
            }
        }
        Ok(TruncMultiSSet {
            arity: self.arity,
            bound: self.bound,
            levels,
        })
    }
}

/// Diagonal of a multisimplicial set: degree-`d` cells are the cells in
/// multidegree `(d, ..., d)`, faces and degeneracies act in all directions
/// at once.
pub fn diagonal(m: &TruncMultiSSet) -> Result<TruncMultiSSet> {
    if m.arity < 2 {
        return Err(Error::invalid("diagonal needs arity >= 2"));
    }
    let mut b = MultiSSetBuilder::new(1, m.bound);
    for d in 0..=m.bound {
        let degree = vec![d; m.arity];
        let level = m.level(&degree);
        for (ci, id) in level.cells.iter().enumerate() {
            let mut faces: Vec<String> = Vec::new();
            if d > 0 {
                for i in 0..=d {
                    // apply d_i in every direction successively
                    let mut cur = ci as u32;
                    let mut cur_degree = degree.clone();
                    for dir in 0..m.arity {
                        cur = m.level(&cur_degree).faces[dir][i][cur as usize];
                        cur_degree[dir] -= 1;
                    }
                    faces.push(m.level(&cur_degree).cells[cur as usize].clone());
                }
            }
            let mut degens: Vec<String> = Vec::new();
            if d < m.bound {
                for i in 0..=d {
                    let mut cur = ci as u32;
                    let mut cur_degree = degree.clone();
                    for dir in 0..m.arity {
                        cur = m.level(&cur_degree).degens[dir][i][cur as usize];
                        cur_degree[dir] += 1;
                    }
                    degens.push(m.level(&cur_degree).cells[cur as usize].clone());
                }
            }
            b.add_cell(&[d], id.clone(), vec![faces], vec![degens]);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// standard 1-simplex as a truncated simplicial set at bound 2
    fn delta1_sset() -> TruncMultiSSet {
        // cells: degree 0: a, b; degree 1: aa, ab, bb; degree 2: all
        // monotone words of length 3
        let mut b = MultiSSetBuilder::new(1, 2);
        let word = |w: &str| w.to_string();
        b.add_cell(&[0], word("a"), vec![vec![]], vec![vec![word("aa")]]);
        b.add_cell(&[0], word("b"), vec![vec![]], vec![vec![word("bb")]]);
        for w in ["aa", "ab", "bb"] {
            let chars: Vec<char> = w.chars().collect();
            let faces = vec![vec![chars[1].to_string(), chars[0].to_string()]];
            let degens = vec![vec![
                format!("{}{}{}", chars[0], chars[0], chars[1]),
                format!("{}{}{}", chars[0], chars[1], chars[1]),
            ]];
            b.add_cell(&[1], word(w), faces, degens);
        }
        for w in ["aaa", "aab", "abb", "bbb"] {
            let chars: Vec<char> = w.chars().collect();
            let faces = vec![vec![
                format!("{}{}", chars[1], chars[2]),
                format!("{}{}", chars[0], chars[2]),
                format!("{}{}", chars[0], chars[1]),
            ]];
            b.add_cell(&[2], word(w), faces, vec![vec![]]);
        }
        b.build().unwrap()
    }

    #[test]
    fn standard_simplex_validates() {
        let s = delta1_sset();
        s.validate().unwrap();
        assert_eq!(s.cell_count(), 9);
        // nondegenerate: a, b, ab
        assert_eq!(s.nondegenerate_count(), 3);
    }

    #[test]
    fn missing_face_target_is_rejected() {
        let mut b = MultiSSetBuilder::new(1, 1);
        b.add_cell(&[1], "e".into(), vec![vec!["x".into(), "y".into()]], vec![vec![]]);
        assert!(b.build().is_err());
    }

    #[test]
    fn degenerate_marking() {
        let s = delta1_sset();
        let l1 = s.level(&[1]);
        let aa = l1.index["aa"];
        let ab = l1.index["ab"];
        assert!(l1.degenerate[aa as usize]);
        assert!(!l1.degenerate[ab as usize]);
    }
}
