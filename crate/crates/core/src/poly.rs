//! Integer polynomials, their coefficient matrices, and determinants of
//! matrices whose entries are polynomials of degree at most one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{precondition, Result};
use crate::exactnum::BigInt;
use crate::linalg::{adjugate, det, IntMatrix};

/// Polynomial in `Z[x]`, constant term first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `a*x + b`.
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        IntPoly::new(vec![b, a])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Horner evaluation.
    pub fn evaluate(&self, v: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * v + c)
    }

    /// Exact quotient in `Z[x]`; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let top = self.degree().unwrap();
        if top < dd {
            return None;
        }
        let mut quot = vec![BigInt::zero(); top - dd + 1];
        for k in (0..=top - dd).rev() {
            let c = &rem[k + dd];
            if c.is_zero() {
                continue;
            }
            if !(c % lead).is_zero() {
                return None;
            }
            let q = c / lead;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

/// Fraction-free elimination over `Z[x]`; every division is exact.
pub fn det_poly(mut a: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::constant(BigInt::one());
    }
    let mut negate = false;
    let mut prev = IntPoly::constant(BigInt::one());
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return IntPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact over Z[x]");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// The `2d x 2d` matrix of shifted coefficient columns of `f1` and `f2`,
/// where `d` is the larger of the two true degrees.
pub fn coeff_matrix(f1: &IntPoly, f2: &IntPoly) -> Result<IntMatrix> {
    let d = f1.degree().unwrap_or(0).max(f2.degree().unwrap_or(0));
    if d == 0 {
        return precondition("coefficient matrix needs a non-constant polynomial");
    }
    let mut c = IntMatrix::zeros(2 * d);
    for (block, f) in [f1, f2].into_iter().enumerate() {
        for k in 0..d {
            for i in 0..=d {
                // f_i sits at row k + (d - i) of column k
                c.set(k + d - i, block * d + k, f.coeff(i));
            }
        }
    }
    Ok(c)
}

pub fn det_coeff_matrix(f1: &IntPoly, f2: &IntPoly) -> Result<BigInt> {
    Ok(det(&coeff_matrix(f1, f2)?))
}

/// `(det C, g1, g2)` with `f1*g1 + f2*g2 = det C(f1, f2)` and `deg g_i < d`.
///
/// The cofactors come from the last column of `adj C`, the integer vector
/// that `C` maps to `det C` times the last unit vector.
pub fn ideal_cofactors(f1: &IntPoly, f2: &IntPoly) -> Result<(BigInt, IntPoly, IntPoly)> {
    let c = coeff_matrix(f1, f2)?;
    let size = c.dim();
    let d = size / 2;
    let adj = adjugate(&c);
    let v = adj.column(size - 1);
    // column k of a block multiplies x^(d-1-k)
    let g = |off: usize| IntPoly::new((0..d).map(|e| v[off + d - 1 - e].clone()).collect());
    Ok((det(&c), g(0), g(d)))
}

/// Square matrix with entries `linear[i][j] * x + constant[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinPolyMatrix {
    pub constant: IntMatrix,
    pub linear: IntMatrix,
}

impl LinPolyMatrix {
    pub fn new(constant: IntMatrix, linear: IntMatrix) -> Result<Self> {
        if constant.dim() != linear.dim() {
            return precondition("constant and linear parts differ in dimension");
        }
        Ok(LinPolyMatrix { constant, linear })
    }

    pub fn dim(&self) -> usize {
        self.constant.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> IntPoly {
        IntPoly::linear(self.linear.get(i, j).clone(), self.constant.get(i, j).clone())
    }

    pub fn add_constant(&mut self, i: usize, j: usize, c: &BigInt) {
        let v = self.constant.get(i, j) + c;
        self.constant.set(i, j, v);
    }

    /// Top-left `k x k` block.
    pub fn leading(&self, k: usize) -> LinPolyMatrix {
        let take = |m: &IntMatrix| {
            IntMatrix::new((0..k).map(|i| (0..k).map(|j| m.get(i, j).clone()).collect()).collect())
                .expect("k >= 1")
        };
        LinPolyMatrix { constant: take(&self.constant), linear: take(&self.linear) }
    }

    /// Integer matrix obtained by substituting `x = v`.
    pub fn substitute(&self, v: &BigInt) -> IntMatrix {
        let n = self.dim();
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.linear.get(i, j) * v + self.constant.get(i, j));
            }
        }
        m
    }

    fn poly_rows(&self, skip_row: Option<usize>, skip_col: Option<usize>) -> Vec<Vec<IntPoly>> {
        let n = self.dim();
        (0..n)
            .filter(|&i| Some(i) != skip_row)
            .map(|i| (0..n).filter(|&j| Some(j) != skip_col).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn det(&self) -> IntPoly {
        det_poly(self.poly_rows(None, None))
    }
}

/// Determinant of the minor with `row` and `col` removed (0-based).
pub fn linpoly_minor_det(m: &LinPolyMatrix, row: usize, col: usize) -> Result<IntPoly> {
    if m.dim() < 2 {
        return precondition("minor of a 1x1 matrix is empty");
    }
    Ok(det_poly(m.poly_rows(Some(row), Some(col))))
}

/// Entry `(i, j)` (0-based) of the adjugate:
/// `(-1)^(i+j) * det(m without row j and column i)`.
pub fn adj_entry(m: &LinPolyMatrix, i: usize, j: usize) -> Result<IntPoly> {
    let minor = linpoly_minor_det(m, j, i)?;
    Ok(if (i + j).is_multiple_of(2) { minor } else { -&minor })
}

pub fn evaluate(f: &IntPoly, v: &BigInt) -> BigInt {
    f.evaluate(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, Rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn lpm(lin: &[&[i64]], cst: &[&[i64]]) -> LinPolyMatrix {
        LinPolyMatrix::new(IntMatrix::from_i64(cst).unwrap(), IntMatrix::from_i64(lin).unwrap()).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[-6, 2]).to_string(), "2x - 6");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
    }

    #[test]
    fn coeff_matrix_examples() {
        assert_eq!(coeff_matrix(&p(&[0, 1]), &p(&[1, 1])).unwrap(), IntMatrix::from_i64(&[&[1, 1], &[0, 1]]).unwrap());
        let c = coeff_matrix(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap();
        let want = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 1, 0], &[-1, 0, -1, 1], &[0, -1, 0, -1]]).unwrap();
        assert_eq!(c, want);
        let f = p(&[3, -2, 5]);
        assert_eq!(det_coeff_matrix(&f, &f).unwrap(), int(0));
        assert!(coeff_matrix(&p(&[3]), &p(&[4])).is_err());
    }

    #[test]
    fn det_coeff_matrix_examples() {
        assert_eq!(det_coeff_matrix(&p(&[0, 1]), &p(&[1, 1])).unwrap(), int(1));
        assert_eq!(det_coeff_matrix(&p(&[1, 1]), &p(&[1, 1])).unwrap(), int(0));
        assert_eq!(det_coeff_matrix(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), int(0));
        // the worked trace: C(2x - 6, x + 3) = [[2, 1], [-6, 3]]
        assert_eq!(det_coeff_matrix(&p(&[-6, 2]), &p(&[3, 1])).unwrap(), int(12));
    }

    #[test]
    fn minor_and_adj_examples() {
        let one = lpm(&[&[2, 0], &[0, 0]], &[&[5, 0], &[0, 7]]);
        assert_eq!(linpoly_minor_det(&one, 1, 1).unwrap(), p(&[5, 2]));
        let xid = lpm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(linpoly_minor_det(&xid, 0, 0).unwrap(), p(&[0, 0, 1]));

        // [[x+3, -x], [-2x+6, x+3]]
        let m = lpm(&[&[1, -1], &[-2, 1]], &[&[3, 0], &[6, 3]]);
        assert_eq!(adj_entry(&m, 1, 0).unwrap(), p(&[-6, 2]));
        assert_eq!(adj_entry(&m, 1, 1).unwrap(), p(&[3, 1]));
        assert_eq!(adj_entry(&m, 0, 1).unwrap(), p(&[0, 1]));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&p(&[3, 1]), &int(262144)), int(262147));
        assert_eq!(evaluate(&IntPoly::zero(), &int(17)), int(0));
        assert_eq!(evaluate(&p(&[-6, 2]), &int(262144)), int(524282));
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(a.exact_div(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.exact_div(&p(&[2, 1])), None);
        assert_eq!(p(&[2, 4]).exact_div(&p(&[2])), Some(p(&[1, 2])));
    }

    fn arb_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
        proptest::collection::vec(-bound..=bound, 0..=max_deg + 1).prop_map(|v| IntPoly::from_i64(&v))
    }

    fn arb_lpm(n: usize, bound: i64) -> impl Strategy<Value = LinPolyMatrix> {
        (proptest::collection::vec(-bound..=bound, n * n), proptest::collection::vec(-bound..=bound, n * n))
            .prop_map(move |(a, b)| {
                let mk = |v: &Vec<i64>| {
                    IntMatrix::new(v.chunks(n).map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
                };
                LinPolyMatrix::new(mk(&b), mk(&a)).unwrap()
            })
    }

    // Lagrange interpolation over Q through (t, det M(t)) for t = 0..=deg.
    fn interpolate(points: &[(i64, BigInt)]) -> Vec<Rat> {
        let k = points.len();
        let mut out = vec![Rat::zero(); k];
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = vec![Rat::one()];
            let mut denom = Rat::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![Rat::zero(); basis.len() + 1];
                for (e, c) in basis.iter().enumerate() {
                    next[e + 1] += c;
                    next[e] -= c * Rat::from_integer(int(*xj));
                }
                basis = next;
                denom *= Rat::from_integer(int(xi - xj));
            }
            for (e, c) in basis.iter().enumerate() {
                out[e] += c * Rat::from_integer(yi.clone()) / &denom;
            }
        }
        out
    }

    proptest! {
        #[test]
        fn minor_det_matches_interpolation(m in arb_lpm(3, 6), r in 0usize..3, c in 0usize..3) {
            let got = linpoly_minor_det(&m, r, c).unwrap();
            let pts: Vec<(i64, BigInt)> = (0..4i64)
                .map(|t| (t, det(&m.substitute(&int(t)).minor(r, c).unwrap())))
                .collect();
            let want = interpolate(&pts);
            for (e, w) in want.iter().enumerate() {
                prop_assert_eq!(Rat::from_integer(got.coeff(e)), w.clone());
            }
        }

        #[test]
        fn full_det_matches_substitution(m in arb_lpm(4, 5), t in -20i64..20) {
            prop_assert_eq!(m.det().evaluate(&int(t)), det(&m.substitute(&int(t))));
        }

        #[test]
        fn adj_entries_satisfy_adjugate_identity(m in arb_lpm(3, 5), t in -30i64..30) {
            let n = m.dim();
            let at = m.substitute(&int(t));
            let d = det(&at);
            for i in 0..n {
                for j in 0..n {
                    let s: BigInt = (0..n).map(|k| at.get(i, k) * adj_entry(&m, k, j).unwrap().evaluate(&int(t))).sum();
                    prop_assert_eq!(s, if i == j { d.clone() } else { int(0) });
                }
            }
        }

        #[test]
        fn ideal_membership(f1 in arb_poly(5, 20), f2 in arb_poly(5, 20)) {
            prop_assume!(f1.degree().unwrap_or(0).max(f2.degree().unwrap_or(0)) >= 1);
            let d = f1.degree().unwrap_or(0).max(f2.degree().unwrap_or(0));
            let (dc, g1, g2) = ideal_cofactors(&f1, &f2).unwrap();
            prop_assert_eq!(&(&f1 * &g1) + &(&f2 * &g2), IntPoly::constant(dc.clone()));
            prop_assert!(g1.degree().is_none_or(|e| e < d));
            prop_assert!(g2.degree().is_none_or(|e| e < d));
            prop_assert_eq!(dc, det_coeff_matrix(&f1, &f2).unwrap());
        }
    }
}
