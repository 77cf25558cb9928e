//! Exact lattice machinery backing the exhaustive oracles: basis extraction
//! from generators, integral LLL reduction, and Fincke-Pohst enumeration of
//! every lattice vector inside a Euclidean ball.
//!
//! Reduction is only a preconditioner here. Enumeration visits *all* points
//! within the requested radius, so results are exact regardless of how well
//! the basis was reduced.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{precondition, Error, Result};
use crate::exactnum::{ext_gcd, floor_sqrt, BigInt, Rat};
use crate::linalg::IntVector;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [BigInt], q: &BigInt, x: &[BigInt]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= q * xi;
    }
}

/// Basis (as columns) of the full-rank lattice spanned by `gens`, each of length `dim`.
pub fn basis_from_generators(gens: &[IntVector], dim: usize) -> Result<Vec<IntVector>> {
    if gens.iter().any(|g| g.len() != dim) {
        return precondition("generator has the wrong dimension");
    }
    let mut cols: Vec<IntVector> = gens.to_vec();
    if cols.len() < dim {
        return precondition("fewer generators than the dimension");
    }
    for r in 0..dim {
        for k in r + 1..cols.len() {
            if cols[k][r].is_zero() {
                continue;
            }
            let (a, b) = (cols[r][r].clone(), cols[k][r].clone());
            let (g, s, t) = ext_gcd(&a, &b)?;
            let (ag, bg) = (&a / &g, &b / &g);
            let new_r: IntVector = cols[r].iter().zip(&cols[k]).map(|(x, y)| &s * x + &t * y).collect();
            let new_k: IntVector = cols[r].iter().zip(&cols[k]).map(|(x, y)| &ag * y - &bg * x).collect();
            cols[r] = new_r;
            cols[k] = new_k;
        }
        if cols[r][r].is_zero() {
            return precondition("generators do not span a full-rank lattice");
        }
        // reduce earlier columns modulo the new pivot
        for k in 0..r {
            let q = cols[k][r].div_floor(&cols[r][r]);
            if !q.is_zero() {
                let pivot = cols[r].clone();
                axpy(&mut cols[k], &q, &pivot);
            }
        }
    }
    cols.truncate(dim);
    Ok(cols)
}

/// Result of integral LLL: `basis[k] = sum_i original[i] * transform[k][i]`.
#[derive(Clone, Debug)]
pub struct LllReduced {
    pub basis: Vec<IntVector>,
    pub transform: Vec<IntVector>,
}

/// Integral LLL with `delta = 99/100` on linearly independent columns.
///
/// All-integer variant: it tracks the Gram determinants `d_i` and the scaled
/// coefficients `lambda_ij = d_j * mu_ij`, so no rational arithmetic is needed.
#[allow(clippy::needless_range_loop)]
pub fn lll(input: &[IntVector]) -> Result<LllReduced> {
    let n = input.len();
    let (da, db) = (BigInt::from(99), BigInt::from(100));
    // 1-based storage
    let mut b: Vec<IntVector> = std::iter::once(Vec::new()).chain(input.iter().cloned()).collect();
    let mut h: Vec<IntVector> = std::iter::once(Vec::new())
        .chain((0..n).map(|k| (0..n).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect()))
        .collect();
    if n <= 1 {
        if n == 1 && b[1].iter().all(Zero::is_zero) {
            return precondition("zero basis vector");
        }
        return Ok(LllReduced { basis: b.split_off(1), transform: h.split_off(1) });
    }
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[1], &b[1]);
    if d[1].is_zero() {
        return precondition("zero basis vector");
    }
    let mut k = 2usize;
    let mut kmax = 1usize;

    let redi = |k: usize,
                l: usize,
                b: &mut Vec<IntVector>,
                h: &mut Vec<IntVector>,
                lam: &mut Vec<Vec<BigInt>>,
                d: &Vec<BigInt>| {
        let two = BigInt::from(2);
        if (&lam[k][l] * &two).abs() > d[l] {
            // nearest integer to lam/d
            let q = (&lam[k][l] * &two + &d[l]).div_floor(&(&d[l] * &two));
            let (bl, hl) = (b[l].clone(), h[l].clone());
            axpy(&mut b[k], &q, &bl);
            axpy(&mut h[k], &q, &hl);
            let dl = d[l].clone();
            lam[k][l] -= &q * dl;
            for i in 1..l {
                let v = &q * &lam[l][i];
                lam[k][i] -= v;
            }
        }
    };

    loop {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return precondition("basis vectors are linearly dependent");
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            redi(k, k - 1, &mut b, &mut h, &mut lam, &d);
            let l2 = &lam[k][k - 1] * &lam[k][k - 1];
            let lhs = &db * &d[k] * &d[k - 2];
            let rhs = &da * &d[k - 1] * &d[k - 1] - &db * &l2;
            if lhs < rhs {
                // swap k and k-1
                b.swap(k, k - 1);
                h.swap(k, k - 1);
                for j in 1..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let lm = lam[k][k - 1].clone();
                let bb = (&d[k - 2] * &d[k] + &lm * &lm) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &lm * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &lm * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                k = (k - 1).max(2);
                continue;
            }
            for l in (1..k - 1).rev() {
                redi(k, l, &mut b, &mut h, &mut lam, &d);
            }
            k += 1;
            break;
        }
        if k > n {
            break;
        }
    }
    Ok(LllReduced { basis: b.split_off(1), transform: h.split_off(1) })
}

/// Rational Gram-Schmidt data: `mu[i][j]` for `j < i` and squared lengths `bstar[i]`.
#[derive(Clone, Debug)]
pub struct GramSchmidt {
    pub mu: Vec<Vec<Rat>>,
    pub bstar: Vec<Rat>,
}

pub fn gram_schmidt(basis: &[IntVector]) -> GramSchmidt {
    let n = basis.len();
    let dim = basis.first().map_or(0, |v| v.len());
    let mut star: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut bstar = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<Rat> = basis[i].iter().map(|x| Rat::from_integer(x.clone())).collect();
        for j in 0..i {
            let num: Rat = (0..dim).fold(Rat::zero(), |acc, t| acc + &star[j][t] * Rat::from_integer(basis[i][t].clone()));
            let m = num / &bstar[j];
            for t in 0..dim {
                let s = &m * &star[j][t];
                v[t] -= s;
            }
            mu[i][j] = m;
        }
        let norm = v.iter().fold(Rat::zero(), |acc, x| acc + x * x);
        bstar.push(norm);
        star.push(v);
    }
    GramSchmidt { mu, bstar }
}

/// A reduced lattice ready for enumeration.
#[derive(Clone, Debug)]
pub struct Lattice {
    basis: Vec<IntVector>,
    transform: Vec<IntVector>,
    gs: GramSchmidt,
}

impl Lattice {
    /// Lattice spanned by independent columns; coefficients reported by
    /// [`Lattice::enumerate`] refer to these columns.
    pub fn from_basis(columns: &[IntVector]) -> Result<Self> {
        let red = lll(columns)?;
        let gs = gram_schmidt(&red.basis);
        Ok(Lattice { basis: red.basis, transform: red.transform, gs })
    }

    pub fn from_generators(gens: &[IntVector], dim: usize) -> Result<Self> {
        Lattice::from_basis(&basis_from_generators(gens, dim)?)
    }

    pub fn reduced_basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Visits every lattice vector `v` with `|v|_2^2 <= radius_sq`, including
    /// zero, together with its coefficients in the original basis. Fails once
    /// more than `budget` vectors would be visited.
    pub fn enumerate(
        &self,
        radius_sq: &Rat,
        budget: u64,
        mut visit: impl FnMut(&[BigInt], &[BigInt]),
    ) -> Result<u64> {
        let n = self.dim();
        let mut y = vec![BigInt::zero(); n];
        let mut count = 0u64;
        self.descend(n, radius_sq.clone(), &mut y, &mut count, budget, &mut visit)?;
        Ok(count)
    }

    fn descend(
        &self,
        level: usize,
        remaining: Rat,
        y: &mut Vec<BigInt>,
        count: &mut u64,
        budget: u64,
        visit: &mut impl FnMut(&[BigInt], &[BigInt]),
    ) -> Result<()> {
        let n = self.dim();
        if level == 0 {
            *count += 1;
            if *count > budget {
                return Err(Error::LimitExceeded(format!("lattice enumeration visited more than {budget} vectors")));
            }
            let dim = self.basis[0].len();
            let mut v = vec![BigInt::zero(); dim];
            let mut q = vec![BigInt::zero(); n];
            for (k, yk) in y.iter().enumerate() {
                if yk.is_zero() {
                    continue;
                }
                for (vt, bt) in v.iter_mut().zip(&self.basis[k]) {
                    *vt += yk * bt;
                }
                for (qt, ht) in q.iter_mut().zip(&self.transform[k]) {
                    *qt += yk * ht;
                }
            }
            visit(&q, &v);
            return Ok(());
        }
        let k = level - 1;
        let center: Rat = (k + 1..n).fold(Rat::zero(), |acc, i| acc - &self.gs.mu[i][k] * Rat::from_integer(y[i].clone()));
        let t = &remaining / &self.gs.bstar[k];
        let s = floor_sqrt(&t);
        let lo: BigInt = center.floor().to_integer() - &s - 1;
        let hi = center.ceil().to_integer() + &s + 1;
        let mut cur = lo;
        while cur <= hi {
            let off = Rat::from_integer(cur.clone()) - &center;
            let used = &off * &off * &self.gs.bstar[k];
            if used <= remaining {
                y[k] = cur.clone();
                self.descend(level - 1, &remaining - used, y, count, budget, visit)?;
            }
            cur += 1;
        }
        y[k] = BigInt::zero();
        Ok(())
    }
}

/// `q` sign-normalized so its first nonzero coordinate is positive.
pub fn canonical_sign(q: &[BigInt]) -> IntVector {
    match q.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => q.iter().map(|x| -x).collect(),
        _ => q.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::linalg::{det, IntMatrix};
    use proptest::prelude::*;

    fn cols(v: &[&[i64]]) -> Vec<IntVector> {
        v.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect()
    }

    fn as_matrix(columns: &[IntVector]) -> IntMatrix {
        let n = columns.len();
        IntMatrix::new((0..n).map(|i| (0..n).map(|j| columns[j][i].clone()).collect()).collect()).unwrap()
    }

    #[test]
    fn hnf_of_scaled_generators() {
        // lattice generated by (1,2) and 3*Z^2 has index 3
        let gens = cols(&[&[1, 2], &[3, 0], &[0, 3]]);
        let b = basis_from_generators(&gens, 2).unwrap();
        assert_eq!(det(&as_matrix(&b)).abs(), int(3));
        assert!(basis_from_generators(&cols(&[&[1, 2], &[2, 4]]), 2).is_err());
    }

    #[test]
    fn lll_reduces_known_basis() {
        let b = cols(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let red = lll(&b).unwrap();
        assert_eq!(det(&as_matrix(&red.basis)).abs(), det(&as_matrix(&b)).abs());
        let gs = gram_schmidt(&red.basis);
        for i in 1..3 {
            let lhs = &gs.bstar[i];
            let rhs = (Rat::new(int(99), int(100)) - &gs.mu[i][i - 1] * &gs.mu[i][i - 1]) * &gs.bstar[i - 1];
            assert!(*lhs >= rhs);
        }
    }

    #[test]
    fn enumerate_counts_z2_points() {
        let lat = Lattice::from_basis(&cols(&[&[1, 0], &[0, 1]])).unwrap();
        let mut seen = 0;
        // x^2 + y^2 <= 2: 9 points
        let total = lat.enumerate(&Rat::from_integer(int(2)), 1000, |_, _| seen += 1).unwrap();
        assert_eq!((seen, total), (9, 9));
        assert!(lat.enumerate(&Rat::from_integer(int(100)), 10, |_, _| {}).is_err());
    }

    fn arb_basis(n: usize) -> impl Strategy<Value = Vec<IntVector>> {
        proptest::collection::vec(-30i64..=30, n * n)
            .prop_map(move |v| v.chunks(n).map(|c| c.iter().map(|&x| int(x)).collect()).collect())
    }

    proptest! {
        #[test]
        fn lll_is_unimodular_and_reduced(b in arb_basis(3)) {
            prop_assume!(!det(&as_matrix(&b)).is_zero());
            let red = lll(&b).unwrap();
            let u = as_matrix(&red.transform);
            prop_assert_eq!(det(&u).abs(), int(1));
            prop_assert_eq!(as_matrix(&b).mul(&u), as_matrix(&red.basis));
            let gs = gram_schmidt(&red.basis);
            for i in 0..3 {
                for j in 0..i {
                    prop_assert!(gs.mu[i][j].abs() <= Rat::new(int(1), int(2)));
                }
            }
        }

        #[test]
        fn enumeration_matches_box_scan(b in arb_basis(2), r in 1i64..400) {
            prop_assume!(!det(&as_matrix(&b)).is_zero());
            let m = as_matrix(&b);
            let lat = Lattice::from_basis(&b).unwrap();
            let mut found = Vec::new();
            lat.enumerate(&Rat::from_integer(int(r)), 1_000_000, |q, v| {
                assert_eq!(m.mul_vec(q), v.to_vec());
                found.push(q.to_vec());
            }).unwrap();
            found.sort();
            // brute force over a generous coefficient box
            let adj = crate::linalg::adjugate(&m);
            let d = det(&m).abs();
            let rr = int(r).sqrt() + 1;
            let bound: BigInt = adj.entries().map(|x| x.abs()).sum::<BigInt>() * &rr / &d + 1;
            let bi: i64 = bound.to_string().parse().unwrap();
            let mut want = Vec::new();
            for x in -bi..=bi {
                for y in -bi..=bi {
                    let q = vec![int(x), int(y)];
                    let v = m.mul_vec(&q);
                    if dot(&v, &v) <= int(r) {
                        want.push(q);
                    }
                }
            }
            want.sort();
            prop_assert_eq!(found, want);
        }
    }
}
