use super::intmat::IntMat;
use super::qmat::QMat;
use crate::error::Error;
use crate::Result;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// A finitely generated subgroup of ℚ^dim ("lattice", possibly of rank less
/// than `dim`), stored as an integer basis matrix in column HNF together with
/// a single positive denominator. Two lattices are equal iff their normalized
/// `(basis, denominator)` pairs agree.
#[derive(Clone, PartialEq, Eq)]
pub struct ZLattice {
    pub dim: usize,
    /// dim × rank, columns are basis vectors (times `den`), in column HNF.
    pub basis: IntMat,
    pub den: BigInt,
}

impl std::fmt::Debug for ZLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ZLattice(dim={}, rank={}, den={}, basis={:?})", self.dim, self.rank(), self.den, self.basis)
    }
}

impl ZLattice {
    /// The standard lattice ℤ^dim.
    pub fn standard(dim: usize) -> Self {
        ZLattice { dim, basis: IntMat::identity(dim), den: BigInt::one() }
    }

    pub fn zero(dim: usize) -> Self {
        ZLattice { dim, basis: IntMat::zero(dim, 0), den: BigInt::one() }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Normalize: column HNF of the generator matrix, zero columns dropped,
    /// content of (basis, den) reduced.
    fn normalize(dim: usize, gens: IntMat, den: BigInt) -> Self {
        assert!(den.is_positive());
        let r = gens.hnf_col_transform();
        let rank = r.rank;
        let start = gens.cols - rank;
        let mut basis = IntMat::from_fn(dim, rank, |i, j| r.h[(i, start + j)].clone());
        // reduce common content with denominator
        let mut g = den.clone();
        'outer: for i in 0..dim {
            for j in 0..rank {
                g = g.gcd(&basis[(i, j)]);
                if g.is_one() {
                    break 'outer;
                }
            }
        }
        let mut den = den;
        if !g.is_one() && rank > 0 {
            for i in 0..dim {
                for j in 0..rank {
                    let t = &basis[(i, j)] / &g;
                    basis[(i, j)] = t;
                }
            }
            den = &den / &g;
        }
        ZLattice { dim, basis, den }
    }

    /// Lattice generated by the given rational vectors.
    pub fn from_generators(dim: usize, gens: &[Vec<BigRational>]) -> Self {
        if gens.is_empty() {
            return ZLattice::zero(dim);
        }
        let m = QMat::from_cols(dim, gens);
        let (int, den) = m.clear_denominators();
        ZLattice::normalize(dim, int, den)
    }

    pub fn from_qmat_cols(m: &QMat) -> Self {
        let (int, den) = m.clear_denominators();
        ZLattice::normalize(m.rows, int, den)
    }

    /// Basis vectors as rational columns.
    pub fn basis_vectors(&self) -> Vec<Vec<BigRational>> {
        (0..self.rank())
            .map(|j| {
                (0..self.dim)
                    .map(|i| BigRational::new(self.basis[(i, j)].clone(), self.den.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn basis_qmat(&self) -> QMat {
        let d = BigRational::from_integer(self.den.clone());
        QMat::from_fn(self.dim, self.rank(), |i, j| {
            BigRational::from_integer(self.basis[(i, j)].clone()) / d.clone()
        })
    }

    /// Solve for the coordinates of `v` in this lattice's basis; integral
    /// coordinates iff `v` is a member.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.dim);
        self.basis_qmat().solve(v)
    }

    pub fn contains_vec(&self, v: &[BigRational]) -> bool {
        match self.coordinates(v) {
            None => false,
            Some(c) => c.iter().all(|x| x.denom().is_one()),
        }
    }

    pub fn contains(&self, other: &ZLattice) -> bool {
        assert_eq!(self.dim, other.dim);
        other.basis_vectors().iter().all(|v| self.contains_vec(v))
    }

    pub fn scale(&self, c: &BigRational) -> ZLattice {
        assert!(!c.is_zero());
        let gens: Vec<Vec<BigRational>> =
            self.basis_vectors().into_iter().map(|v| v.into_iter().map(|x| x * c).collect()).collect();
        ZLattice::from_generators(self.dim, &gens)
    }

    pub fn sum(&self, other: &ZLattice) -> ZLattice {
        assert_eq!(self.dim, other.dim);
        let mut gens = self.basis_vectors();
        gens.extend(other.basis_vectors());
        ZLattice::from_generators(self.dim, &gens)
    }

    /// Intersection via the membership/kernel system (always applicable).
    pub fn intersect(&self, other: &ZLattice) -> ZLattice {
        assert_eq!(self.dim, other.dim);
        if self.rank() == 0 || other.rank() == 0 {
            return ZLattice::zero(self.dim);
        }
        // v = A x / dA = B y / dB  =>  dB * A x - dA * B y = 0
        let ra = self.rank();
        let rb = other.rank();
        let m = IntMat::from_fn(self.dim, ra + rb, |i, j| {
            if j < ra {
                &other.den * &self.basis[(i, j)]
            } else {
                -(&self.den * &other.basis[(i, j - ra)])
            }
        });
        let k = m.kernel();
        let gens: Vec<Vec<BigRational>> = (0..k.cols)
            .map(|c| {
                (0..self.dim)
                    .map(|i| {
                        let mut s = BigInt::zero();
                        for j in 0..ra {
                            s += &self.basis[(i, j)] * &k[(j, c)];
                        }
                        BigRational::new(s, self.den.clone())
                    })
                    .collect()
            })
            .collect();
        ZLattice::from_generators(self.dim, &gens)
    }

    /// Dual lattice with respect to a nondegenerate symmetric bilinear form:
    /// `{ v : v^T G x ∈ ℤ for all x in self }`. Requires full rank.
    pub fn dual(&self, gram: &QMat) -> Result<ZLattice> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficient("dual of non-full lattice".into()));
        }
        if gram.rank() != self.dim {
            return Err(Error::DegenerateGram);
        }
        // condition: (B/den)^T G v ∈ ℤ^dim  ⇔  v ∈ ((B^T G)/den)^{-1} ℤ^dim
        let bt = self.basis_qmat().transpose();
        let m = bt.mul(gram);
        let inv = m.inverse().map_err(|_| Error::DegenerateGram)?;
        Ok(ZLattice::from_qmat_cols(&inv))
    }

    /// `X ∩ Y = (X* + Y*)*` via trace-form duals.
    pub fn dual_and_intersect(x: &ZLattice, y: &ZLattice, gram: &QMat) -> Result<ZLattice> {
        let xd = x.dual(gram)?;
        let yd = y.dual(gram)?;
        xd.sum(&yd).dual(gram)
    }

    /// Generalized module index [L1 : L2] as a positive rational, for
    /// full-rank lattices in the same ambient space. Equals the usual index
    /// when L2 ⊆ L1.
    pub fn index(l1: &ZLattice, l2: &ZLattice) -> Result<BigRational> {
        if l1.dim != l2.dim {
            return Err(Error::Dimension("index of lattices in different spaces".into()));
        }
        if !l1.is_full_rank() || !l2.is_full_rank() {
            return Err(Error::RankDeficient("index needs full-rank lattices".into()));
        }
        let t = l1.basis_qmat().inverse()?.mul(&l2.basis_qmat());
        let d = t.det();
        if d.is_zero() {
            return Err(Error::RankDeficient("index of rank-deficient pair".into()));
        }
        Ok(if d.is_negative() { -d } else { d })
    }

    /// Image of the lattice under a rational linear map (columns of result
    /// generate the image lattice).
    pub fn image(&self, a: &QMat) -> ZLattice {
        assert_eq!(a.cols, self.dim);
        let gens: Vec<Vec<BigRational>> = self.basis_vectors().iter().map(|v| a.mul_vec(v)).collect();
        ZLattice::from_generators(a.rows, &gens)
    }

    /// Preimage lattice `{ x ∈ ℚ^n : A x ∈ self }` for an injective map `A`
    /// (dim rows × n cols). The result is a lattice when `A⁻¹(self)` is
    /// finitely generated, which holds whenever A is injective.
    pub fn preimage(&self, a: &QMat) -> Result<ZLattice> {
        assert_eq!(a.rows, self.dim);
        let n = a.cols;
        if a.rank() != n {
            return Err(Error::RankDeficient("preimage of non-injective map".into()));
        }
        // Preimage = A^{-1}(self ∩ im A). Rows of D span the annihilator of
        // im A; then {z : D B z = 0} parametrizes self ∩ im A.
        let d = a.transpose().kernel().transpose(); // (dim-n) × dim, rational
        let r = self.rank();
        let b = self.basis_qmat();
        let k = if d.rows == 0 {
            QMat::identity(r)
        } else {
            let (db, _) = d.mul(&b).clear_denominators();
            QMat::from_int(&db.kernel())
        };
        let mut gens = Vec::new();
        for c in 0..k.cols {
            let z = k.column(c);
            let target = b.mul_vec(&z);
            let x = a.solve(&target).expect("consistent by construction");
            gens.push(x);
        }
        Ok(ZLattice::from_generators(n, &gens))
    }

    /// Direct sum of lattices in the product of their ambient spaces.
    pub fn block_sum(parts: &[&ZLattice]) -> ZLattice {
        let dim: usize = parts.iter().map(|l| l.dim).sum();
        let mut gens: Vec<Vec<BigRational>> = Vec::new();
        let mut off = 0usize;
        for l in parts {
            for v in l.basis_vectors() {
                let mut g = vec![BigRational::zero(); dim];
                g[off..off + l.dim].clone_from_slice(&v);
                gens.push(g);
            }
            off += l.dim;
        }
        ZLattice::from_generators(dim, &gens)
    }

    /// Write `target = x + y` with `x ∈ l1`, `y ∈ l2`, if possible. This is
    /// the transformation-matrix HNF trick: stack the two bases, transform,
    /// and read the decomposition off the preimage of target's coordinates.
    pub fn decompose_over_sum(
        l1: &ZLattice,
        l2: &ZLattice,
        target: &[BigRational],
    ) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
        assert_eq!(l1.dim, l2.dim);
        let dim = l1.dim;
        let r1 = l1.rank();
        let r2 = l2.rank();
        // common denominator d: columns d*L1-basis, d*L2-basis are integer
        let d = l1.den.lcm(&l2.den);
        let f1 = &d / &l1.den;
        let f2 = &d / &l2.den;
        let m = IntMat::from_fn(dim, r1 + r2, |i, j| {
            if j < r1 {
                &f1 * &l1.basis[(i, j)]
            } else {
                &f2 * &l2.basis[(i, j - r1)]
            }
        });
        let res = m.hnf_col_transform();
        // target = (M/d) w  =>  M w = d*target; solve via the pivot block.
        let h = QMat::from_int(&res.h);
        let rhs: Vec<BigRational> =
            target.iter().map(|t| t * BigRational::from_integer(d.clone())).collect();
        let w = h.solve(&rhs)?;
        if w.iter().any(|x| !x.denom().is_one()) {
            return None;
        }
        // z = U w gives coefficients for the original stacked columns.
        let u = QMat::from_int(&res.u);
        let z = u.mul_vec(&w);
        let x: Vec<BigRational> = (0..dim)
            .map(|i| {
                let mut s = BigRational::zero();
                for j in 0..r1 {
                    s += &z[j] * BigRational::from_integer(l1.basis[(i, j)].clone());
                }
                s / BigRational::from_integer(l1.den.clone())
            })
            .collect();
        let y: Vec<BigRational> = (0..dim).map(|i| &target[i] - &x[i]).collect();
        debug_assert!(l1.contains_vec(&x) && l2.contains_vec(&y));
        Some((x, y))
    }

    /// For `sub ⊆ self` of equal rank: integer coordinate matrix T with
    /// sub_basis = self_basis * T (in rational arithmetic), in column HNF.
    pub fn coords_of_sublattice(&self, sub: &ZLattice) -> Result<IntMat> {
        if self.rank() != sub.rank() {
            return Err(Error::RankDeficient("coords_of_sublattice rank mismatch".into()));
        }
        let b = self.basis_qmat();
        let mut cols = Vec::new();
        for v in sub.basis_vectors() {
            let c = b.solve(&v).ok_or_else(|| Error::Precondition("not a sublattice".into()))?;
            if c.iter().any(|x| !x.denom().is_one()) {
                return Err(Error::Precondition("not a sublattice (non-integral coords)".into()));
            }
            cols.push(c.iter().map(|x| x.numer().clone()).collect::<Vec<_>>());
        }
        let m = IntMat::from_fn(self.rank(), cols.len(), |i, j| cols[j][i].clone());
        let r = m.hnf_col_transform();
        if r.rank != self.rank() {
            return Err(Error::RankDeficient("sublattice not of full rank".into()));
        }
        let start = m.cols - r.rank;
        Ok(IntMat::from_fn(self.rank(), r.rank, |i, j| r.h[(i, start + j)].clone()))
    }

    /// Number of elements of self/sub (both full rank, sub ⊆ self).
    pub fn quotient_size(&self, sub: &ZLattice) -> Result<BigInt> {
        let t = self.coords_of_sublattice(sub)?;
        let mut n = BigInt::one();
        for i in 0..t.rows {
            n *= &t[(i, i)];
        }
        Ok(n.abs())
    }

    /// Canonical residue of `v ∈ self` modulo `sub` (given by its triangular
    /// coordinate matrix from `coords_of_sublattice`), as coordinates w.r.t.
    /// self's basis lying in the box ∏ [0, T_ii).
    pub fn reduce_coords_mod(t: &IntMat, coords: &mut [BigInt]) {
        let n = t.rows;
        assert_eq!(coords.len(), n);
        for i in (0..n).rev() {
            let q = coords[i].div_floor(&t[(i, i)]);
            if q.is_zero() {
                continue;
            }
            for k in 0..=i {
                let d = &q * &t[(k, i)];
                coords[k] -= d;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{qi, qr};

    fn lat(dim: usize, gens: &[Vec<i64>]) -> ZLattice {
        let g: Vec<Vec<BigRational>> =
            gens.iter().map(|v| v.iter().map(|&x| qi(x)).collect()).collect();
        ZLattice::from_generators(dim, &g)
    }

    #[test]
    fn index_diagonal_and_identity() {
        let l1 = ZLattice::standard(2);
        let l2 = lat(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(ZLattice::index(&l1, &l2).unwrap(), qi(6));
        assert_eq!(ZLattice::index(&l1, &l1).unwrap(), qi(1));
    }

    #[test]
    fn index_change_of_basis() {
        let l1 = ZLattice::standard(2);
        let l2 = lat(2, &[vec![1, 0], vec![1, 2]]);
        assert_eq!(ZLattice::index(&l1, &l2).unwrap(), qi(2));
    }

    #[test]
    fn index_multiplicative_chain() {
        let l1 = ZLattice::standard(2);
        let l2 = lat(2, &[vec![2, 1], vec![0, 1]]);
        let l3 = lat(2, &[vec![4, 2], vec![0, 3]]);
        let i12 = ZLattice::index(&l1, &l2).unwrap();
        let i23 = ZLattice::index(&l2, &l3).unwrap();
        let i13 = ZLattice::index(&l1, &l3).unwrap();
        assert_eq!(i12 * i23, i13);
    }

    #[test]
    fn intersect_scalars() {
        let x = lat(1, &[vec![2]]);
        let y = lat(1, &[vec![3]]);
        let g = QMat::identity(1);
        let i = ZLattice::dual_and_intersect(&x, &y, &g).unwrap();
        assert_eq!(i, lat(1, &[vec![6]]));
        let idem = ZLattice::dual_and_intersect(&x, &x, &g).unwrap();
        assert_eq!(idem, x);
    }

    #[test]
    fn intersect_dual_matches_kernel_oracle() {
        // random sublattices of Z^4, both methods must agree
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut rnd = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 7) as i64 - 3
        };
        let gram = QMat::identity(4);
        for _ in 0..20 {
            let a = lat(
                4,
                &(0..4)
                    .map(|i| (0..4).map(|j| if i == j { 2 + rnd().abs() } else { rnd() }).collect())
                    .collect::<Vec<_>>(),
            );
            let b = lat(
                4,
                &(0..4)
                    .map(|i| (0..4).map(|j| if i == j { 1 + rnd().abs() } else { rnd() }).collect())
                    .collect::<Vec<_>>(),
            );
            if !a.is_full_rank() || !b.is_full_rank() {
                continue;
            }
            let via_dual = ZLattice::dual_and_intersect(&a, &b, &gram).unwrap();
            let via_kernel = a.intersect(&b);
            assert_eq!(via_dual, via_kernel);
        }
    }

    #[test]
    fn membership_and_denominator() {
        let l = ZLattice::from_generators(2, &[vec![qr(1, 2), qr(1, 2)], vec![qi(0), qi(1)]]);
        assert!(l.contains_vec(&[qr(1, 2), qr(1, 2)]));
        assert!(l.contains_vec(&[qr(1, 2), qr(3, 2)]));
        assert!(!l.contains_vec(&[qr(1, 2), qi(1)]));
    }

    #[test]
    fn preimage_roundtrip() {
        // A: Q^2 -> Q^2 doubling, preimage of Z^2 is (1/2)Z^2
        let a = QMat::from_fn(2, 2, |i, j| if i == j { qi(2) } else { qi(0) });
        let p = ZLattice::standard(2).preimage(&a).unwrap();
        assert_eq!(p, ZLattice::from_generators(2, &[vec![qr(1, 2), qi(0)], vec![qi(0), qr(1, 2)]]));
    }
}
