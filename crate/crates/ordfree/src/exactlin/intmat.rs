use crate::error::Error;
use crate::Result;
use num::{BigInt, Integer, One, Signed, Zero};
use std::fmt;

/// Dense matrix over arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
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

/// Result of a column-style HNF computation: `m * u = h` where `h` has its
/// zero columns on the left and the pivoted block on the right.
pub struct HnfResult {
    /// The full transformed matrix `(0 | H)`, same shape as the input.
    pub h: IntMat,
    /// Unimodular transformation with `m * u = h`.
    pub u: IntMat,
    /// Number of pivot columns.
    pub rank: usize,
    /// `pivot_rows[k]` is the row of the pivot in column `cols - rank + k`.
    pub pivot_rows: Vec<usize>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        IntMat::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "IntMat::mul shape");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col_j -= q * col_k
    fn sub_col(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = q * &self[(i, k)];
            self[(i, j)] -= t;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Column Hermite normal form with transformation: returns `(0 | H)` and
    /// unimodular `U` with `self * U = (0 | H)`. `H` is in column echelon
    /// shape with positive pivots; within each pivot row, entries to the
    /// right of the pivot are reduced into `[0, pivot)`.
    pub fn hnf_col_transform(&self) -> HnfResult {
        let mut h = self.clone();
        let mut u = IntMat::identity(self.cols);
        let mut active_end = self.cols;
        let mut pivot_rows_rev: Vec<usize> = Vec::new();
        for row in (0..self.rows).rev() {
            // Euclidean elimination across active columns in this row.
            loop {
                let mut best: Option<usize> = None;
                for j in 0..active_end {
                    if !h[(row, j)].is_zero() {
                        best = match best {
                            None => Some(j),
                            Some(b) => {
                                if h[(row, j)].abs() < h[(row, b)].abs() {
                                    Some(j)
                                } else {
                                    Some(b)
                                }
                            }
                        };
                    }
                }
                let j0 = match best {
                    None => break,
                    Some(j0) => j0,
                };
                let mut others = false;
                for j in 0..active_end {
                    if j != j0 && !h[(row, j)].is_zero() {
                        others = true;
                        let q = rounded_div(&h[(row, j)], &h[(row, j0)]);
                        h.sub_col(j, j0, &q);
                        u.sub_col(j, j0, &q);
                    }
                }
                if !others {
                    // single nonzero entry: it is the pivot
                    if h[(row, j0)].is_negative() {
                        h.negate_col(j0);
                        u.negate_col(j0);
                    }
                    h.swap_cols(j0, active_end - 1);
                    u.swap_cols(j0, active_end - 1);
                    active_end -= 1;
                    pivot_rows_rev.push(row);
                    // Reduce this row's entries in previously placed pivot columns.
                    let p = active_end;
                    let pivot = h[(row, p)].clone();
                    for j in (p + 1)..self.cols {
                        if !h[(row, j)].is_zero() {
                            let q = h[(row, j)].div_floor(&pivot);
                            h.sub_col(j, p, &q);
                            u.sub_col(j, p, &q);
                        }
                    }
                    break;
                }
            }
        }
        let rank = self.cols - active_end;
        let pivot_rows: Vec<usize> = pivot_rows_rev.into_iter().rev().collect();
        HnfResult { h, u, rank, pivot_rows }
    }

    /// Basis of the integer kernel `{ x : self * x = 0 }`, as columns.
    pub fn kernel(&self) -> IntMat {
        let r = self.hnf_col_transform();
        let k = self.cols - r.rank;
        IntMat::from_fn(self.cols, k, |i, j| r.u[(i, j)].clone())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let mut found = None;
                for i in k + 1..n {
                    if !m[(i, k)].is_zero() {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    None => return BigInt::zero(),
                    Some(i) => {
                        for j in 0..n {
                            let a = m[(k, j)].clone();
                            let b = m[(i, j)].clone();
                            m[(k, j)] = b;
                            m[(i, j)] = a;
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = &t / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Inverse of a unimodular integer matrix (det = ±1).
    pub fn inverse_unimodular(&self) -> Result<IntMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // Solve self * X = I by HNF: stack [self; I] and column-reduce self to (0|H).
        let r = self.hnf_col_transform();
        if r.rank != n {
            return Err(Error::Singular);
        }
        // self * u = (0|H) with H = diag(+-1)-triangular; since unimodular, H must be identity.
        let mut h_ok = true;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { BigInt::one() } else { BigInt::zero() };
                if r.h[(i, j)] != expect {
                    h_ok = false;
                }
            }
        }
        if !h_ok {
            return Err(Error::Precondition("matrix is not unimodular".into()));
        }
        Ok(r.u)
    }
}

/// Division rounded to nearest (ties toward zero); keeps HNF pivots small.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) ^ (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_identity_fixed() {
        let m = IntMat::identity(2);
        let r = m.hnf_col_transform();
        assert_eq!(r.h, IntMat::identity(2));
        assert_eq!(r.u, IntMat::identity(2));
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn hnf_bezout_row() {
        let m = IntMat::from_rows(&[vec![2, 3]]);
        let r = m.hnf_col_transform();
        assert_eq!(r.rank, 1);
        assert_eq!(r.h[(0, 0)], BigInt::zero());
        assert_eq!(r.h[(0, 1)], BigInt::one());
        // second column of U recovers 3 - 2 = 1
        assert_eq!(&m[(0, 0)] * &r.u[(0, 1)] + &m[(0, 1)] * &r.u[(1, 1)], BigInt::one());
    }

    #[test]
    fn hnf_reproduct_and_unimodular() {
        // deterministic pseudo-random 4x6 matrix
        let mut seed = 88172645463325252u64;
        let mut rnd = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 19) as i64 - 9
        };
        for _ in 0..25 {
            let m = IntMat::from_fn(4, 6, |_, _| BigInt::from(rnd()));
            let r = m.hnf_col_transform();
            assert_eq!(m.mul(&r.u), r.h);
            assert_eq!(r.u.det().abs(), BigInt::one());
            // idempotence on the pivot block
            let h2 = r.h.hnf_col_transform();
            assert_eq!(h2.h, r.h);
        }
    }

    #[test]
    fn kernel_annihilates() {
        let m = IntMat::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.cols, 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn det_small() {
        let m = IntMat::from_rows(&[vec![2, 1], vec![7, 4]]);
        assert_eq!(m.det(), BigInt::one());
        let m = IntMat::from_rows(&[vec![3, 0], vec![0, 5]]);
        assert_eq!(m.det(), BigInt::from(15));
    }
}
