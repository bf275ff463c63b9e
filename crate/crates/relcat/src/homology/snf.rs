//! Smith normal form over the integers with unimodular transforms.
//!
//! Dense and exact (num-bigint); intended for the small core matrices left
//! after chain-complex reduction, not for raw boundary matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> IntMat {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> IntMat {
        assert_eq!(entries.len(), rows * cols);
        IntMat {
            rows,
            cols,
            data: entries.iter().map(|&e| BigInt::from(e)).collect(),
        }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !m[(i, k)].is_zero());
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            let a = m[(k, j)].clone();
                            let b = m[(i, j)].clone();
                            m[(k, j)] = b;
                            m[(i, j)] = a;
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `U * M * V = D` with `D` diagonal, `d_i | d_{i+1}`, and `U`, `V`
/// unimodular.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
    /// nonzero diagonal entries (positive, divisibility-ordered)
    pub factors: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// torsion coefficients: the diagonal entries >= 2
    pub fn torsion(&self) -> Vec<BigInt> {
        let one = BigInt::one();
        self.factors.iter().filter(|f| **f > one).cloned().collect()
    }
}

/// Compute the Smith normal form.
pub fn smith_normal_form(m: &IntMat) -> Snf {
    let rows = m.rows;
    let cols = m.cols;
    let mut d = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        // find a pivot: nonzero entry of least magnitude in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[(i, j)].is_zero()
                    && pivot.map_or(true, |(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);

        // clear row and column t; restart if a smaller remainder appears
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = floored_div(&d[(i, t)], &d[(t, t)]);
                row_axpy(&mut d, &mut u, i, t, &-q);
                if !d[(i, t)].is_zero() {
                    // remainder became the smaller pivot
                    swap_rows(&mut d, &mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = floored_div(&d[(t, j)], &d[(t, t)]);
                col_axpy(&mut d, &mut v, j, t, &-q);
                if !d[(t, j)].is_zero() {
                    swap_cols(&mut d, &mut v, t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // divisibility: d_t must divide the rest of the block
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    // fold row i into row t and redo this pivot
                    row_axpy_one(&mut d, &mut u, t, i);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, &mut u, t);
        }
        t += 1;
    }

    let mut factors = Vec::new();
    for i in 0..rows.min(cols) {
        if d[(i, i)].is_zero() {
            break;
        }
        factors.push(d[(i, i)].clone());
    }
    Snf { d, u, v, factors }
}

fn floored_div(a: &BigInt, b: &BigInt) -> BigInt {
    // round-to-nearest keeps remainders small
    let (q, r) = (a / b, a % b);
    if (&r * 2i32).abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn swap_rows(d: &mut IntMat, u: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let x = d[(a, j)].clone();
        let y = d[(b, j)].clone();
        d[(a, j)] = y;
        d[(b, j)] = x;
    }
    for j in 0..u.cols {
        let x = u[(a, j)].clone();
        let y = u[(b, j)].clone();
        u[(a, j)] = y;
        u[(b, j)] = x;
    }
}

fn swap_cols(d: &mut IntMat, v: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let x = d[(i, a)].clone();
        let y = d[(i, b)].clone();
        d[(i, a)] = y;
        d[(i, b)] = x;
    }
    for i in 0..v.rows {
        let x = v[(i, a)].clone();
        let y = v[(i, b)].clone();
        v[(i, a)] = y;
        v[(i, b)] = x;
    }
}

/// row_i += c * row_j (tracked in U)
fn row_axpy(d: &mut IntMat, u: &mut IntMat, i: usize, j: usize, c: &BigInt) {
    for col in 0..d.cols {
        let add = c * &d[(j, col)];
        d[(i, col)] += add;
    }
    for col in 0..u.cols {
        let add = c * &u[(j, col)];
        u[(i, col)] += add;
    }
}

/// row_i += row_j
fn row_axpy_one(d: &mut IntMat, u: &mut IntMat, i: usize, j: usize) {
    row_axpy(d, u, i, j, &BigInt::one());
}

/// col_j += c * col_k (tracked in V)
fn col_axpy(d: &mut IntMat, v: &mut IntMat, j: usize, k: usize, c: &BigInt) {
    for row in 0..d.rows {
        let add = c * &d[(row, k)];
        d[(row, j)] += add;
    }
    for row in 0..v.rows {
        let add = c * &v[(row, k)];
        v[(row, j)] += add;
    }
}

fn negate_row(d: &mut IntMat, u: &mut IntMat, i: usize) {
    for j in 0..d.cols {
        let x = -d[(i, j)].clone();
        d[(i, j)] = x;
    }
    for j in 0..u.cols {
        let x = -u[(i, j)].clone();
        u[(i, j)] = x;
    }
}

/// Verify `U M V = D`, diagonality, divisibility chain, and that both
/// transforms have determinant +-1.
pub fn verify_snf(m: &IntMat, snf: &Snf) -> std::result::Result<(), String> {
    let umv = snf.u.mul(m).mul(&snf.v);
    if umv != snf.d {
        return Err("U M V != D".into());
    }
    for i in 0..snf.d.rows {
        for j in 0..snf.d.cols {
            if i != j && !snf.d[(i, j)].is_zero() {
                return Err(format!("D not diagonal at ({i},{j})"));
            }
        }
    }
    for w in snf.factors.windows(2) {
        if !(&w[1] % &w[0]).is_zero() {
            return Err(format!("divisibility fails: {} does not divide {}", w[0], w[1]));
        }
    }
    let du = snf.u.determinant();
    if du.abs() != BigInt::one() {
        return Err(format!("U not unimodular: det = {du}"));
    }
    let dv = snf.v.determinant();
    if dv.abs() != BigInt::one() {
        return Err(format!("V not unimodular: det = {dv}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matrix_is_its_own_snf() {
        let m = IntMat::identity(3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, m);
        verify_snf(&m, &snf).unwrap();
    }

    #[test]
    fn divisibility_normalization() {
        // diag(2,3) normalizes to diag(1,6)
        let m = IntMat::from_i64(2, 2, &[2, 0, 0, 3]);
        let snf = smith_normal_form(&m);
        assert_eq!(
            snf.factors,
            vec![BigInt::from(1), BigInt::from(6)]
        );
        verify_snf(&m, &snf).unwrap();
    }

    #[test]
    fn zero_matrix() {
        let m = IntMat::zero(2, 3);
        let snf = smith_normal_form(&m);
        assert!(snf.factors.is_empty());
        verify_snf(&m, &snf).unwrap();
    }

    #[test]
    fn known_small_case() {
        // [[2, 4, 4], [-6, 6, 12], [10, 4, 16]] has SNF diag(2, 2, 156)
        let m = IntMat::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, 4, 16]);
        let snf = smith_normal_form(&m);
        assert_eq!(
            snf.factors,
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
        verify_snf(&m, &snf).unwrap();
    }
}
