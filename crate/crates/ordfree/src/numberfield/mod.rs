//! Number fields of small degree: elements, fractional ideals as HNF
//! lattices, CRT elements, unit groups with totally positive subgroups, and a
//! complete-enumeration principal ideal test for degree at most two.

pub mod poly;

use crate::error::Error;
use crate::exactlin::{short_vectors, QMat, ZLattice};
use crate::Result;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Element coordinates with respect to the field's integral basis.
pub type NfElem = Vec<BigRational>;

/// A number field given by a monic irreducible integer polynomial and an
/// integral basis (columns, in power-basis coordinates, first element 1).
#[derive(Clone)]
pub struct NumberField {
    pub deg: usize,
    pub min_poly: Vec<BigInt>,
    int_basis: QMat,
    basis_from_power: QMat,
    mul_table: Vec<QMat>,
    pub disc: BigInt,
    /// Isolating intervals for the real roots of min_poly, increasing.
    pub real_places: Vec<(BigRational, BigRational)>,
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NumberField(deg={}, min_poly={:?})", self.deg, self.min_poly)
    }
}

impl NumberField {
    pub fn new(min_poly: Vec<BigInt>, int_basis: QMat, trusted_irreducible: bool) -> Result<Self> {
        let deg = min_poly.len() - 1;
        if deg == 0 || !min_poly[deg].is_one() {
            return Err(Error::Precondition("min_poly must be monic of positive degree".into()));
        }
        if deg <= 4 {
            if !poly::irreducible_deg_le4(&min_poly) {
                return Err(Error::Precondition("min_poly is reducible".into()));
            }
        } else if !trusted_irreducible {
            return Err(Error::Unsupported(
                "irreducibility checking beyond degree 4 requires trusted registry data".into(),
            ));
        }
        assert_eq!((int_basis.rows, int_basis.cols), (deg, deg));
        // first basis element must be 1
        for i in 0..deg {
            let expect = if i == 0 { BigRational::one() } else { BigRational::zero() };
            if int_basis[(i, 0)] != expect {
                return Err(Error::Precondition("integral basis must start with 1".into()));
            }
        }
        let basis_from_power = int_basis.inverse().map_err(|_| Error::Singular)?;
        let qpoly = poly::from_int(&min_poly);
        // multiplication table on the integral basis
        let mut mul_table = Vec::with_capacity(deg);
        for i in 0..deg {
            let mut cols = Vec::with_capacity(deg);
            for j in 0..deg {
                let pi = poly_of_col(&int_basis, i);
                let pj = poly_of_col(&int_basis, j);
                let (_, prod_mod) = poly::divrem(&poly::mul(&pi, &pj), &qpoly);
                let mut v = vec![BigRational::zero(); deg];
                for (k, c) in prod_mod.iter().enumerate() {
                    v[k] = c.clone();
                }
                cols.push(basis_from_power.mul_vec(&v));
            }
            mul_table.push(QMat::from_cols(deg, &cols));
        }
        // discriminant of the integral basis: det(Tr(w_i w_j))
        let mut f = NumberField {
            deg,
            min_poly,
            int_basis,
            basis_from_power,
            mul_table,
            disc: BigInt::zero(),
            real_places: Vec::new(),
        };
        let tr_mat = QMat::from_fn(deg, deg, |i, j| {
            let wi = f.basis_elem(i);
            let wj = f.basis_elem(j);
            f.trace(&f.mul(&wi, &wj))
        });
        let d = tr_mat.det();
        if !d.denom().is_one() {
            return Err(Error::Precondition("integral basis has non-integral discriminant".into()));
        }
        f.disc = d.numer().clone();
        f.real_places = poly::isolate_real_roots(&poly::from_int(&f.min_poly));
        Ok(f)
    }

    /// The rationals, as a degree-1 field.
    pub fn rationals() -> Self {
        NumberField::new(vec![BigInt::zero(), BigInt::one()], QMat::identity(1), false).unwrap()
    }

    /// Quadratic field ℚ(√m) for squarefree m ≠ 0, 1, with its maximal order
    /// as a power basis: θ = (1+√m)/2 when m ≡ 1 (mod 4), else θ = √m.
    pub fn quadratic(m: i64) -> Result<Self> {
        if m == 0 || m == 1 {
            return Err(Error::Precondition("quadratic field needs m ≠ 0, 1".into()));
        }
        let mm = BigInt::from(m);
        let poly = if m.rem_euclid(4) == 1 {
            // x^2 - x + (1-m)/4
            vec![(BigInt::one() - &mm) / BigInt::from(4), -BigInt::one(), BigInt::one()]
        } else {
            vec![-mm, BigInt::zero(), BigInt::one()]
        };
        NumberField::new(poly, QMat::identity(2), false)
    }

    /// Cyclotomic field ℚ(ζ_n) with the power integral basis.
    pub fn cyclotomic(n: u64) -> Result<Self> {
        let phi = poly::cyclotomic(n);
        let deg = phi.len() - 1;
        NumberField::new(phi, QMat::identity(deg), true)
    }

    pub fn basis_elem(&self, i: usize) -> NfElem {
        let mut v = vec![BigRational::zero(); self.deg];
        v[i] = BigRational::one();
        v
    }

    pub fn zero(&self) -> NfElem {
        vec![BigRational::zero(); self.deg]
    }

    pub fn one(&self) -> NfElem {
        self.basis_elem(0)
    }

    pub fn from_rational(&self, q: &BigRational) -> NfElem {
        let mut v = self.zero();
        v[0] = q.clone();
        v
    }

    pub fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &NfElem) -> NfElem {
        a.iter().map(|x| -x.clone()).collect()
    }

    pub fn scale(&self, a: &NfElem, c: &BigRational) -> NfElem {
        a.iter().map(|x| x * c).collect()
    }

    /// Matrix of multiplication by `a` on the integral basis.
    pub fn mult_matrix(&self, a: &NfElem) -> QMat {
        let mut m = QMat::zero(self.deg, self.deg);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.mul_table[i].scale(c));
            }
        }
        m
    }

    pub fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let mut out = vec![BigRational::zero(); self.deg];
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let col = self.mul_table[i].mul_vec(b);
            for k in 0..self.deg {
                out[k] += &col[k] * c;
            }
        }
        out
    }

    pub fn inv(&self, a: &NfElem) -> Result<NfElem> {
        let m = self.mult_matrix(a);
        m.solve(&self.one()).ok_or(Error::Singular)
    }

    pub fn is_zero_elem(&self, a: &NfElem) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    pub fn norm(&self, a: &NfElem) -> BigRational {
        self.mult_matrix(a).det()
    }

    pub fn trace(&self, a: &NfElem) -> BigRational {
        let m = self.mult_matrix(a);
        let mut t = BigRational::zero();
        for i in 0..self.deg {
            t += &m[(i, i)];
        }
        t
    }

    pub fn is_integral(&self, a: &NfElem) -> bool {
        a.iter().all(|x| x.denom().is_one())
    }

    /// The nontrivial automorphism of a quadratic field.
    pub fn quadratic_conj(&self, a: &NfElem) -> NfElem {
        assert_eq!(self.deg, 2, "quadratic_conj needs a quadratic field");
        // θ ↦ s - θ with s = -min_poly[1]
        let s = BigRational::from_integer(-self.min_poly[1].clone());
        let pow = self.int_basis.mul_vec(a); // power coords (c0, c1)
        let conj_pow = vec![&pow[0] + &pow[1] * &s, -pow[1].clone()];
        self.basis_from_power.mul_vec(&conj_pow)
    }

    /// Exact sign of the image of `a` under the k-th real embedding.
    pub fn sign_at_place(&self, a: &NfElem, k: usize) -> i32 {
        let pow = self.int_basis.mul_vec(a);
        let mut g = pow.clone();
        poly::trim(&mut g);
        poly::sign_at_root(&poly::from_int(&self.min_poly), &self.real_places[k], &g)
    }

    pub fn elem_from_power_coords(&self, pow: &[BigRational]) -> NfElem {
        self.basis_from_power.mul_vec(pow)
    }

    pub fn power_coords(&self, a: &NfElem) -> Vec<BigRational> {
        self.int_basis.mul_vec(a)
    }
}

fn poly_of_col(m: &QMat, j: usize) -> poly::QPoly {
    let mut p: poly::QPoly = (0..m.rows).map(|i| m[(i, j)].clone()).collect();
    poly::trim(&mut p);
    p
}

/// Fractional ideal of the maximal order, as a full-rank lattice in
/// integral-basis coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NfIdeal {
    pub lat: ZLattice,
}

impl NfIdeal {
    /// Build from a lattice, checking closure under multiplication by the
    /// integral basis.
    pub fn new(f: &NumberField, lat: ZLattice) -> Result<Self> {
        if !lat.is_full_rank() {
            return Err(Error::RankDeficient("ideal lattice must be full rank".into()));
        }
        let ideal = NfIdeal { lat };
        if !ideal.is_closed(f) {
            return Err(Error::Precondition("lattice is not an O_F-module".into()));
        }
        Ok(ideal)
    }

    fn is_closed(&self, f: &NumberField) -> bool {
        for b in self.lat.basis_vectors() {
            for i in 0..f.deg {
                let prod = f.mul(&b, &f.basis_elem(i));
                if !self.lat.contains_vec(&prod) {
                    return false;
                }
            }
        }
        true
    }

    /// Ideal generated by the given elements.
    pub fn from_gens(f: &NumberField, gens: &[NfElem]) -> Result<Self> {
        let mut vecs = Vec::new();
        for g in gens {
            for i in 0..f.deg {
                vecs.push(f.mul(g, &f.basis_elem(i)));
            }
        }
        let lat = ZLattice::from_generators(f.deg, &vecs);
        if !lat.is_full_rank() {
            return Err(Error::ZeroIdeal);
        }
        Ok(NfIdeal { lat })
    }

    pub fn principal(f: &NumberField, g: &NfElem) -> Result<Self> {
        NfIdeal::from_gens(f, std::slice::from_ref(g))
    }

    pub fn ring(f: &NumberField) -> Self {
        NfIdeal { lat: ZLattice::standard(f.deg) }
    }

    pub fn from_rational_int(f: &NumberField, n: i64) -> Result<Self> {
        NfIdeal::principal(f, &f.from_rational(&BigRational::from_integer(BigInt::from(n))))
    }

    pub fn sum(&self, f: &NumberField, other: &NfIdeal) -> NfIdeal {
        let _ = f;
        NfIdeal { lat: self.lat.sum(&other.lat) }
    }

    pub fn product(&self, f: &NumberField, other: &NfIdeal) -> NfIdeal {
        let mut gens = Vec::new();
        for a in self.lat.basis_vectors() {
            for b in other.lat.basis_vectors() {
                gens.push(f.mul(&a, &b));
            }
        }
        NfIdeal { lat: ZLattice::from_generators(f.deg, &gens) }
    }

    pub fn intersect(&self, f: &NumberField, other: &NfIdeal) -> NfIdeal {
        let _ = f;
        NfIdeal { lat: self.lat.intersect(&other.lat) }
    }

    /// Fractional inverse {x : x·a ⊆ O_F}.
    pub fn inverse(&self, f: &NumberField) -> Result<NfIdeal> {
        if self.lat.rank() == 0 {
            return Err(Error::ZeroIdeal);
        }
        let mats: Vec<QMat> = self.lat.basis_vectors().iter().map(|g| f.mult_matrix(g)).collect();
        let refs: Vec<&QMat> = mats.iter().collect();
        let stacked = QMat::vstack(&refs);
        let target = ZLattice::standard(f.deg * mats.len());
        let lat = target.preimage(&stacked)?;
        Ok(NfIdeal { lat })
    }

    /// Positive generalized index [O_F : a].
    pub fn norm(&self, f: &NumberField) -> BigRational {
        ZLattice::index(&ZLattice::standard(f.deg), &self.lat).expect("full-rank ideal")
    }

    pub fn contains(&self, v: &NfElem) -> bool {
        self.lat.contains_vec(v)
    }

    pub fn is_integral(&self, f: &NumberField) -> bool {
        ZLattice::standard(f.deg).contains(&self.lat)
    }

    /// Scale by a rational constant.
    pub fn scale(&self, c: &BigRational) -> NfIdeal {
        NfIdeal { lat: self.lat.scale(c) }
    }

    /// Maximality test for degree ≤ 2 (prime residue field).
    pub fn is_maximal_ideal(&self, f: &NumberField) -> bool {
        if !self.is_integral(f) || self.lat == ZLattice::standard(f.deg) {
            return false;
        }
        let n = self.norm(f);
        if !n.denom().is_one() {
            return false;
        }
        let n = n.numer().clone();
        if is_prime(&n) {
            return true;
        }
        // degree 2 inert primes: norm p^2 and the ideal is p·O_F
        if f.deg == 2 {
            let p = n.sqrt();
            if &p * &p == n && is_prime(&p) {
                let po = ZLattice::standard(2).scale(&BigRational::from_integer(p));
                return self.lat == po;
            }
        }
        false
    }
}

/// Primes of O_F above a rational prime p. Valid for degree ≤ 2 fields with
/// power integral bases (the constructors in this module), and for ℚ.
pub fn primes_above(f: &NumberField, p: u64) -> Result<Vec<NfIdeal>> {
    let pq = BigRational::from_integer(BigInt::from(p));
    match f.deg {
        1 => Ok(vec![NfIdeal::principal(f, &f.from_rational(&pq))?]),
        2 => {
            if f.int_basis != QMat::identity(2) {
                return Err(Error::Unsupported("primes_above needs a power basis".into()));
            }
            if p > 1_000_000 {
                return Err(Error::Unsupported("prime too large for root search".into()));
            }
            // roots of min_poly mod p
            let c0 = mod_u(&f.min_poly[0], p);
            let c1 = mod_u(&f.min_poly[1], p);
            let mut roots = Vec::new();
            for r in 0..p {
                let v = (r as u128 * r as u128 + c1 as u128 * r as u128 + c0 as u128) % p as u128;
                if v == 0 {
                    roots.push(r);
                }
            }
            let theta = f.basis_elem(1);
            let pe = f.from_rational(&pq);
            if roots.is_empty() {
                // inert
                Ok(vec![NfIdeal::principal(f, &pe)?])
            } else {
                let mut out = Vec::new();
                for r in &roots {
                    let shift = f.sub(&theta, &f.from_rational(&BigRational::from_integer(BigInt::from(*r))));
                    out.push(NfIdeal::from_gens(f, &[pe.clone(), shift])?);
                }
                // ramified: single double root gives a single prime
                out.dedup_by(|a, b| a == b);
                Ok(out)
            }
        }
        _ => Err(Error::Unsupported("primes_above implemented for degree ≤ 2".into())),
    }
}

fn mod_u(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    u64::try_from(&m).unwrap()
}

pub fn is_prime(n: &BigInt) -> bool {
    if n <= &BigInt::one() {
        return false;
    }
    let two = BigInt::from(2);
    if n == &two {
        return true;
    }
    if (n % &two).is_zero() {
        return false;
    }
    let mut d = BigInt::from(3);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 2;
    }
    true
}

/// Factor a positive integer by trial division (desk scale).
pub fn factor_int(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>, n: &mut BigInt| {
        let mut e = 0u32;
        while (&*n % &p).is_zero() {
            *n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(BigInt::from(2), &mut out, &mut n);
    let mut d = BigInt::from(3);
    while &d * &d <= n {
        push(d.clone(), &mut out, &mut n);
        d += 2;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// CRT elements: β_i ≡ 1 (mod 𝔭_i) and β_i ≡ 0 (mod 𝔭_j) for j ≠ i.
pub fn crt_elements(f: &NumberField, primes: &[NfIdeal]) -> Result<Vec<NfElem>> {
    for (i, p) in primes.iter().enumerate() {
        if !p.is_maximal_ideal(f) {
            return Err(Error::Precondition(format!("ideal #{i} is not maximal")));
        }
        for q in &primes[i + 1..] {
            if p == q {
                return Err(Error::Precondition("repeated prime ideals".into()));
            }
        }
    }
    let mut out = Vec::with_capacity(primes.len());
    for i in 0..primes.len() {
        let mut c = NfIdeal::ring(f);
        for (j, q) in primes.iter().enumerate() {
            if j != i {
                c = c.product(f, q);
            }
        }
        // c + 𝔭_i = O_F for distinct maximal ideals
        let s = c.sum(f, &primes[i]);
        if s.lat != ZLattice::standard(f.deg) {
            return Err(Error::Precondition("prime ideals are not comaximal".into()));
        }
        let (alpha, _beta) = ZLattice::decompose_over_sum(&c.lat, &primes[i].lat, &f.one())
            .ok_or_else(|| Error::Precondition("Bézout decomposition failed".into()))?;
        // alpha ∈ c ⊆ 𝔭_j (j≠i), alpha = 1 - beta ≡ 1 mod 𝔭_i
        out.push(alpha);
    }
    Ok(out)
}

/// Unit data for O_F: torsion, fundamental units, and generators of the
/// subgroup positive at the declared ramified real places.
#[derive(Clone, Debug)]
pub struct UnitData {
    pub torsion_generator: NfElem,
    pub torsion_order: u64,
    pub fundamental_units: Vec<NfElem>,
    pub totally_positive_generators: Vec<NfElem>,
    pub index_in_full: BigInt,
}

/// Units of O_F with the totally positive subgroup for the given ramified
/// real places. Live computation for degree ≤ 2; higher degrees must supply
/// `given_units` (registry data: fundamental units).
pub fn totally_positive_units(
    f: &NumberField,
    ramified_real: &[usize],
    given_units: Option<&[NfElem]>,
) -> Result<UnitData> {
    let (torsion, torsion_order, fundamental): (NfElem, u64, Vec<NfElem>) = match f.deg {
        1 => (f.from_rational(&-BigRational::one()), 2, vec![]),
        2 => {
            if f.disc.is_negative() {
                let (t, n) = imaginary_torsion(f)?;
                (t, n, vec![])
            } else {
                let eps = real_quadratic_fundamental_unit(f)?;
                (f.from_rational(&-BigRational::one()), 2, vec![eps])
            }
        }
        _ => match given_units {
            Some(us) => (f.from_rational(&-BigRational::one()), 2, us.to_vec()),
            None => {
                return Err(Error::Unsupported(
                    "unit group beyond degree 2 requires registry-supplied units".into(),
                ))
            }
        },
    };
    // sign map into {±1}^ramified, as F2 linear algebra on generators
    let gens: Vec<NfElem> = std::iter::once(torsion.clone()).chain(fundamental.iter().cloned()).collect();
    let sign_vec = |u: &NfElem| -> Vec<u8> {
        ramified_real.iter().map(|&k| if f.sign_at_place(u, k) < 0 { 1 } else { 0 }).collect()
    };
    let rows: Vec<Vec<u8>> = gens.iter().map(|u| sign_vec(u)).collect();
    // kernel of the F2 matrix (generators exponents e with Σ e_i rows_i = 0)
    let kernel = f2_kernel(&rows, ramified_real.len());
    let mut tp_gens: Vec<NfElem> = Vec::new();
    for ker in &kernel {
        let mut u = f.one();
        for (i, &e) in ker.iter().enumerate() {
            if e == 1 {
                u = f.mul(&u, &gens[i]);
            }
        }
        // torsion contributes ±1 only; drop exact 1
        if u != f.one() {
            tp_gens.push(u);
        }
    }
    // squares of non-kernel generators are always totally positive
    let rank = gens.len();
    let img_rank = f2_rank(&rows, ramified_real.len());
    for (i, g) in gens.iter().enumerate() {
        if rows[i].iter().any(|&b| b == 1) {
            let sq = f.mul(g, g);
            if sq != f.one() {
                tp_gens.push(sq);
            }
        }
    }
    let _ = rank;
    let mut index = BigInt::one();
    for _ in 0..img_rank {
        index *= 2;
    }
    // sanity: every reported generator is positive at every ramified place
    for g in &tp_gens {
        for &k in ramified_real {
            if f.sign_at_place(g, k) <= 0 {
                return Err(Error::Precondition("totally positive generator check failed".into()));
            }
        }
    }
    Ok(UnitData {
        torsion_generator: torsion,
        torsion_order,
        fundamental_units: fundamental,
        totally_positive_generators: tp_gens,
        index_in_full: index,
    })
}

fn f2_rank(rows: &[Vec<u8>], width: usize) -> usize {
    let mut mat: Vec<Vec<u8>> = rows.to_vec();
    let mut rank = 0;
    for c in 0..width {
        if let Some(p) = (rank..mat.len()).find(|&r| mat[r][c] == 1) {
            mat.swap(rank, p);
            for r in 0..mat.len() {
                if r != rank && mat[r][c] == 1 {
                    for k in 0..width {
                        mat[r][k] ^= mat[rank][k];
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Basis of the left kernel {e : e·rows = 0} over F2.
fn f2_kernel(rows: &[Vec<u8>], width: usize) -> Vec<Vec<u8>> {
    let n = rows.len();
    // gaussian elimination on the transpose augmented with identity
    let mut mat: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut r = rows[i].clone();
            r.resize(width, 0);
            let mut id = vec![0u8; n];
            id[i] = 1;
            r.extend(id);
            r
        })
        .collect();
    let mut rank = 0;
    for c in 0..width {
        if let Some(p) = (rank..n).find(|&r| mat[r][c] == 1) {
            mat.swap(rank, p);
            for r in 0..n {
                if r != rank && mat[r][c] == 1 {
                    let pivot_row = mat[rank].clone();
                    for k in 0..mat[r].len() {
                        mat[r][k] ^= pivot_row[k];
                    }
                }
            }
            rank += 1;
        }
    }
    mat[rank..].iter().map(|r| r[width..].to_vec()).collect()
}

fn imaginary_torsion(f: &NumberField) -> Result<(NfElem, u64)> {
    // norm-1 elements of O_F: short vectors of the T2 form with N = 1
    let gram = QMat::from_fn(2, 2, |i, j| {
        let bi = f.basis_elem(i);
        let bj = f.quadratic_conj(&f.basis_elem(j));
        f.trace(&f.mul(&bi, &bj))
    });
    let vs = short_vectors(&gram, &BigRational::from_integer(BigInt::from(2)))?;
    let mut units: Vec<NfElem> = Vec::new();
    for (v, _) in vs {
        let e: NfElem = v.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        if f.norm(&e) == BigRational::one() {
            units.push(e.clone());
            units.push(f.neg(&e));
        }
    }
    // pick a generator of the cyclic group: element of maximal multiplicative order
    let mut best = (f.from_rational(&-BigRational::one()), 2u64);
    for u in &units {
        let mut pow = u.clone();
        let mut ord = 1u64;
        while pow != f.one() {
            pow = f.mul(&pow, u);
            ord += 1;
            if ord > 16 {
                return Err(Error::Precondition("torsion order overflow".into()));
            }
        }
        if ord > best.1 {
            best = (u.clone(), ord);
        }
    }
    Ok(best)
}

/// Fundamental unit of a real quadratic maximal order: search the smallest
/// ω-coefficient carrying a unit, then take the smallest unit > 1 among the
/// candidates found there (both norms, both roots, normalized by sign and
/// inversion). All comparisons are exact via the largest real embedding.
fn real_quadratic_fundamental_unit(f: &NumberField) -> Result<NfElem> {
    assert_eq!(f.deg, 2);
    let place = f.real_places.len() - 1;
    for y in 1u64..2_000_000 {
        let yq = BigRational::from_integer(BigInt::from(y));
        let omega = f.basis_elem(1);
        // N(x + yω) is monic quadratic in x: recover its coefficients by evaluation
        let n0 = f.norm(&f.scale(&omega, &yq));
        let n1 = f.norm(&f.add(&f.from_rational(&BigRational::one()), &f.scale(&omega, &yq)));
        let nm1 = f.norm(&f.add(&f.from_rational(&-BigRational::one()), &f.scale(&omega, &yq)));
        let b = (&n1 - &nm1) / BigRational::from_integer(BigInt::from(2));
        let c = n0;
        let mut candidates: Vec<NfElem> = Vec::new();
        for target in [BigRational::one(), -BigRational::one()] {
            let disc = &b * &b - BigRational::from_integer(BigInt::from(4)) * (&c - &target);
            if disc.is_negative() || !disc.denom().is_one() {
                continue;
            }
            let s = disc.numer().sqrt();
            if &s * &s != *disc.numer() {
                continue;
            }
            for sgn in [BigInt::one(), -BigInt::one()] {
                let two_x = -b.numer() + &sgn * &s;
                if (&two_x % BigInt::from(2)).is_zero() {
                    let x = BigRational::from_integer(two_x / BigInt::from(2));
                    let u = f.add(&f.from_rational(&x), &f.scale(&omega, &yq));
                    let n = f.norm(&u);
                    if n == BigRational::one() || n == -BigRational::one() {
                        candidates.push(u);
                    }
                }
            }
        }
        if candidates.is_empty() {
            continue;
        }
        // normalize each candidate to the representative > 1 at `place`
        let mut normalized: Vec<NfElem> = Vec::new();
        for u in candidates {
            let inv = f.inv(&u)?;
            for v in [u.clone(), f.neg(&u), inv.clone(), f.neg(&inv)] {
                let vm1 = f.sub(&v, &f.one());
                if f.sign_at_place(&vm1, place) > 0 {
                    normalized.push(v);
                }
            }
        }
        normalized.sort_by(|a, b| {
            let d = f.sub(a, b);
            if f.is_zero_elem(&d) {
                std::cmp::Ordering::Equal
            } else if f.sign_at_place(&d, place) > 0 {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            }
        });
        if let Some(best) = normalized.first() {
            return Ok(best.clone());
        }
    }
    Err(Error::BudgetExhausted("fundamental unit search".into()))
}

/// Result of the principal ideal test.
#[derive(Clone, Debug)]
pub enum PipNf {
    Generator(NfElem),
    NotPrincipal(PipCertificate),
}

/// Evidence for non-principality: the complete enumeration that was checked.
#[derive(Clone, Debug)]
pub struct PipCertificate {
    pub norm_target: BigRational,
    pub enumeration_bound: BigRational,
    pub candidates_checked: usize,
}

/// Principal ideal test for degree ≤ 2 by complete short-vector enumeration.
pub fn pip_nf(f: &NumberField, a: &NfIdeal) -> Result<PipNf> {
    match f.deg {
        1 => {
            // fractional ideal of ℚ: generated by its norm (up to sign)
            let n = a.norm(f);
            Ok(PipNf::Generator(f.from_rational(&n)))
        }
        2 => {
            let n = a.norm(f);
            let basis = a.lat.basis_vectors();
            let (gram, bound) = if f.disc.is_negative() {
                let g = QMat::from_fn(2, 2, |i, j| {
                    f.trace(&f.mul(&basis[i], &f.quadratic_conj(&basis[j])))
                });
                (g, BigRational::from_integer(BigInt::from(2)) * &n)
            } else {
                let g = QMat::from_fn(2, 2, |i, j| f.trace(&f.mul(&basis[i], &basis[j])));
                let eps = real_quadratic_fundamental_unit(f)?;
                let b = embedding_abs_bound(f, &eps);
                (g, &n * (BigRational::one() + &b * &b))
            };
            let vs = short_vectors(&gram, &bound)?;
            let mut checked = 0usize;
            for (v, _) in &vs {
                checked += 1;
                let xi: NfElem = (0..2)
                    .map(|k| {
                        let mut s = BigRational::zero();
                        for (j, c) in v.iter().enumerate() {
                            s += BigRational::from_integer(c.clone()) * &basis[j][k];
                        }
                        s
                    })
                    .collect();
                let nx = f.norm(&xi).abs();
                if nx == n {
                    let gen_lat = NfIdeal::principal(f, &xi)?;
                    if gen_lat.lat == a.lat {
                        return Ok(PipNf::Generator(xi));
                    }
                }
            }
            Ok(PipNf::NotPrincipal(PipCertificate {
                norm_target: n,
                enumeration_bound: bound,
                candidates_checked: checked,
            }))
        }
        _ => Err(Error::Unsupported("pip_nf implemented for degree ≤ 2".into())),
    }
}

/// A rational upper bound for max over real embeddings of |σ(a)|.
fn embedding_abs_bound(f: &NumberField, a: &NfElem) -> BigRational {
    let pow = f.power_coords(a);
    // |σ(a)| = |Σ pow_i θ^i| ≤ Σ |pow_i| R^i with R a rational root bound
    let mut r = BigRational::one();
    for c in &f.min_poly[..f.deg] {
        let t = BigRational::from_integer(c.abs());
        if t > r {
            r = t;
        }
    }
    r += BigRational::one();
    let mut bound = BigRational::zero();
    let mut rp = BigRational::one();
    for c in &pow {
        bound += c.abs() * &rp;
        rp *= &r;
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{qi, qr};

    #[test]
    fn rationals_basic() {
        let f = NumberField::rationals();
        assert_eq!(f.deg, 1);
        assert_eq!(f.norm(&f.from_rational(&qr(3, 2))), qr(3, 2));
    }

    #[test]
    fn quadratic_arithmetic_sqrt5() {
        let f = NumberField::quadratic(5).unwrap();
        // ω = (1+√5)/2: ω^2 = ω + 1
        let w = f.basis_elem(1);
        let w2 = f.mul(&w, &w);
        assert_eq!(w2, f.add(&w, &f.one()));
        assert_eq!(f.norm(&w), qi(-1));
        assert_eq!(f.trace(&w), qi(1));
        assert_eq!(f.disc, BigInt::from(5));
        assert_eq!(f.real_places.len(), 2);
    }

    #[test]
    fn ideal_arith_identities() {
        let f = NumberField::quadratic(-5).unwrap();
        // (2, 1+√-5) with √-5 = θ
        let theta = f.basis_elem(1);
        let two = f.from_rational(&qi(2));
        let g = f.add(&f.one(), &theta);
        let p = NfIdeal::from_gens(&f, &[two.clone(), g.clone()]).unwrap();
        assert_eq!(p.norm(&f), qi(2));
        // inverse: p * p^{-1} = O_F
        let pinv = p.inverse(&f).unwrap();
        let prod = p.product(&f, &pinv);
        assert_eq!(prod.lat, ZLattice::standard(2));
        // sum with (3) is O_F
        let three = NfIdeal::from_rational_int(&f, 3).unwrap();
        assert_eq!(p.sum(&f, &three).lat, ZLattice::standard(2));
        // product with ring is identity
        assert_eq!(p.product(&f, &NfIdeal::ring(&f)), p);
        // inverse is involutive
        let back = pinv.inverse(&f).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn crt_integers() {
        let f = NumberField::rationals();
        let p2 = NfIdeal::from_rational_int(&f, 2).unwrap();
        let p3 = NfIdeal::from_rational_int(&f, 3).unwrap();
        let b = crt_elements(&f, &[p2.clone(), p3.clone()]).unwrap();
        assert_eq!(b.len(), 2);
        // β_1 ≡ 1 mod 2, ≡ 0 mod 3
        assert!(p3.contains(&b[0]));
        assert!(p2.contains(&f.sub(&b[0], &f.one())));
        assert!(p2.contains(&b[1]));
        assert!(p3.contains(&f.sub(&b[1], &f.one())));
        // single prime
        let b1 = crt_elements(&f, &[p2.clone()]).unwrap();
        assert!(p2.contains(&f.sub(&b1[0], &f.one())));
    }

    #[test]
    fn crt_quadratic() {
        let f = NumberField::quadratic(-5).unwrap();
        let theta = f.basis_elem(1);
        let two = f.from_rational(&qi(2));
        let three = f.from_rational(&qi(3));
        let p = NfIdeal::from_gens(&f, &[two, f.add(&f.one(), &theta)]).unwrap();
        let q = NfIdeal::from_gens(&f, &[three, f.add(&f.one(), &theta)]).unwrap();
        assert!(p.is_maximal_ideal(&f));
        assert!(q.is_maximal_ideal(&f));
        let b = crt_elements(&f, &[p.clone(), q.clone()]).unwrap();
        assert!(p.contains(&f.sub(&b[0], &f.one())));
        assert!(q.contains(&b[0]));
        assert!(q.contains(&f.sub(&b[1], &f.one())));
        assert!(p.contains(&b[1]));
    }

    #[test]
    fn units_rationals() {
        let f = NumberField::rationals();
        let ud = totally_positive_units(&f, &[0], None).unwrap();
        assert!(ud.totally_positive_generators.is_empty());
        assert_eq!(ud.index_in_full, BigInt::from(2));
        let ud2 = totally_positive_units(&f, &[], None).unwrap();
        assert_eq!(ud2.index_in_full, BigInt::one());
        assert!(!ud2.totally_positive_generators.is_empty() || ud2.torsion_order == 2);
    }

    #[test]
    fn units_sqrt5() {
        let f = NumberField::quadratic(5).unwrap();
        let ud = totally_positive_units(&f, &[0, 1], None).unwrap();
        // ε = (1+√5)/2 = ω has norm −1, not totally positive; index is 4
        assert_eq!(ud.fundamental_units.len(), 1);
        let eps = &ud.fundamental_units[0];
        assert_eq!(f.norm(eps).abs(), qi(1));
        assert_eq!(ud.index_in_full, BigInt::from(4));
        for g in &ud.totally_positive_generators {
            assert!(f.sign_at_place(g, 0) > 0 && f.sign_at_place(g, 1) > 0);
        }
    }

    #[test]
    fn pip_trivial_and_nonprincipal() {
        let f = NumberField::rationals();
        let six = NfIdeal::from_rational_int(&f, 6).unwrap();
        match pip_nf(&f, &six).unwrap() {
            PipNf::Generator(g) => assert_eq!(g[0].abs(), qi(6)),
            _ => panic!("6Z is principal"),
        }
        let f5 = NumberField::quadratic(-5).unwrap();
        let theta = f5.basis_elem(1);
        let p = NfIdeal::from_gens(&f5, &[f5.from_rational(&qi(2)), f5.add(&f5.one(), &theta)]).unwrap();
        match pip_nf(&f5, &p).unwrap() {
            PipNf::NotPrincipal(cert) => {
                assert_eq!(cert.norm_target, qi(2));
            }
            PipNf::Generator(_) => panic!("(2, 1+√-5) is not principal"),
        }
    }

    #[test]
    fn pip_roundtrip_sqrt5() {
        let f = NumberField::quadratic(5).unwrap();
        let xi = f.add(&f.scale(&f.basis_elem(1), &qi(3)), &f.from_rational(&qi(2)));
        let a = NfIdeal::principal(&f, &xi).unwrap();
        match pip_nf(&f, &a).unwrap() {
            PipNf::Generator(g) => {
                let b = NfIdeal::principal(&f, &g).unwrap();
                assert_eq!(b.lat, a.lat);
            }
            _ => panic!("principal by construction"),
        }
    }

    #[test]
    fn primes_above_splitting() {
        let f = NumberField::quadratic(-5).unwrap();
        // 2 ramifies: (2, θ+1)... x^2+5 mod 2 = (x+1)^2
        let p2 = primes_above(&f, 2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].norm(&f), qi(2));
        // 11 is inert in Q(√-5)? x^2 ≡ -5 mod 11: -5 ≡ 6; squares mod 11: 1,4,9,5,3: no 6 ⇒ inert
        let p11 = primes_above(&f, 11).unwrap();
        assert_eq!(p11.len(), 1);
        assert_eq!(p11[0].norm(&f), qi(121));
        // 3 splits: -5 ≡ 1 mod 3, roots ±1
        let p3 = primes_above(&f, 3).unwrap();
        assert_eq!(p3.len(), 2);
    }
}
