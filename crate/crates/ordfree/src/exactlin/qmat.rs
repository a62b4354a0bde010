use super::intmat::IntMat;
use crate::error::Error;
use crate::Result;
use num::{BigInt, BigRational, Integer, One, Zero};
use std::fmt;

/// Dense matrix over rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut m = QMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_int(m: &IntMat) -> Self {
        QMat::from_fn(m.rows, m.cols, |i, j| BigRational::from_integer(m[(i, j)].clone()))
    }

    /// Columns are the given vectors.
    pub fn from_cols(dim: usize, cols: &[Vec<BigRational>]) -> Self {
        QMat::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "QMat::mul shape");
        let mut out = QMat::zero(self.rows, other.cols);
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

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigRational::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &BigRational) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for x in &self.data {
            d = d.lcm(x.denom());
        }
        d
    }

    /// Clear denominators: returns (integer matrix, denominator) with
    /// `self = int / den`.
    pub fn clear_denominators(&self) -> (IntMat, BigInt) {
        let d = self.common_denominator();
        let m = IntMat::from_fn(self.rows, self.cols, |i, j| {
            let x = &self[(i, j)] * BigRational::from_integer(d.clone());
            assert!(x.denom().is_one());
            x.numer().clone()
        });
        (m, d)
    }

    /// Gaussian elimination returning (row echelon form, rank, pivot cols).
    fn echelon(&self) -> (QMat, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut piv = None;
            for i in r..m.rows {
                if !m[(i, c)].is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let piv = match piv {
                None => continue,
                Some(p) => p,
            };
            if piv != r {
                for j in 0..m.cols {
                    let a = m[(r, j)].clone();
                    let b = m[(piv, j)].clone();
                    m[(r, j)] = b;
                    m[(piv, j)] = a;
                }
            }
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let t = &m[(r, j)] * &inv;
                m[(r, j)] = t;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1
    }

    /// Solve `self * x = b`; returns None if inconsistent. If the system is
    /// underdetermined, returns the solution with free variables set to 0.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(self.rows, b.len());
        let mut aug = QMat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (e, _, pivots) = aug.echelon();
        // inconsistent if a pivot lands in the last column
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = e[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = BigRational::one();
        }
        let (e, rank, _) = aug.echelon();
        if rank < n {
            return Err(Error::Singular);
        }
        Ok(QMat::from_fn(n, n, |i, j| e[(i, n + j)].clone()))
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let (int, den) = self.clear_denominators();
        let d = int.det();
        let mut den_pow = BigInt::one();
        for _ in 0..self.rows {
            den_pow *= &den;
        }
        BigRational::new(d, den_pow)
    }

    /// Stack matrices vertically (all must share the column count).
    pub fn vstack(mats: &[&QMat]) -> QMat {
        assert!(!mats.is_empty());
        let cols = mats[0].cols;
        let rows: usize = mats.iter().map(|m| m.rows).sum();
        let mut out = QMat::zero(rows, cols);
        let mut off = 0;
        for m in mats {
            assert_eq!(m.cols, cols);
            for i in 0..m.rows {
                for j in 0..cols {
                    out[(off + i, j)] = m[(i, j)].clone();
                }
            }
            off += m.rows;
        }
        out
    }

    /// Basis of the rational kernel `{x : self * x = 0}` as columns.
    pub fn kernel(&self) -> QMat {
        let (e, rank, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = QMat::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = BigRational::one();
            for r in 0..rank {
                let c = pivots[r];
                out[(c, k)] = -e[(r, fc)].clone();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::qi;

    #[test]
    fn solve_and_inverse() {
        let m = QMat::from_fn(2, 2, |i, j| qi([[2, 1], [1, 1]][i][j]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
        let x = m.solve(&[qi(3), qi(2)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(1)]);
    }

    #[test]
    fn kernel_dim() {
        let m = QMat::from_fn(1, 3, |_, j| qi([1, 2, 3][j]));
        let k = m.kernel();
        assert_eq!(k.cols, 2);
        for c in 0..2 {
            let v = k.column(c);
            let r = m.mul_vec(&v);
            assert!(r[0].is_zero());
        }
    }
}
