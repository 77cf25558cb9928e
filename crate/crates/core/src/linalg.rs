//! Exact integer and rational linear algebra over square matrices.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{precondition, Error, Result};
use crate::exactnum::{rat_int, BigInt, Rat, Surd};

pub type IntVector = Vec<BigInt>;
pub type RatVector = Vec<Rat>;

/// Square integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return precondition("matrix dimension must be at least 1");
        }
        if rows.iter().any(|r| r.len() != n) {
            return precondition("matrix must be square");
        }
        Ok(IntMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        IntMatrix::new(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        IntMatrix { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.data.iter()
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(|v| v.bits()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s: BigInt = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> RatVector {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).fold(Rat::zero(), |acc, k| acc + rat_int(self.get(i, k)) * &v[k]))
            .collect()
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { n: self.n, data: self.data.iter().map(|v| v * k).collect() }
    }

    /// Matrix with row `r` and column `c` removed; `None` for a 1x1 matrix.
    pub fn minor(&self, r: usize, c: usize) -> Option<IntMatrix> {
        if self.n == 1 {
            return None;
        }
        let rows = (0..self.n)
            .filter(|&i| i != r)
            .map(|i| (0..self.n).filter(|&j| j != c).map(|j| self.get(i, j).clone()).collect())
            .collect();
        Some(IntMatrix::new(rows).expect("minor of a square matrix is square"))
    }

    pub fn det(&self) -> BigInt {
        det(self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let parsed: Result<Vec<Vec<BigInt>>> =
            rows.iter().map(|r| r.iter().map(crate::ser::json_int).collect()).collect();
        parsed.and_then(IntMatrix::new).map_err(serde::de::Error::custom)
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn det(m: &IntMatrix) -> BigInt {
    det_rows(m.rows())
}

pub(crate) fn det_rows(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Transposed cofactor matrix; `M * adj(M) = det(M) * Id` holds even for singular `M`.
pub fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.dim();
    if n == 1 {
        return IntMatrix::identity(1);
    }
    let mut adj = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let minor = m.minor(j, i).expect("n >= 2");
            let c = det(&minor);
            adj.set(i, j, if (i + j) % 2 == 0 { c } else { -c });
        }
    }
    adj
}

/// Solves `M y = v` exactly through the adjugate.
pub fn solve_rational(m: &IntMatrix, v: &[Rat]) -> Result<RatVector> {
    if v.len() != m.dim() {
        return precondition("right-hand side has the wrong dimension");
    }
    let d = det(m);
    if d.is_zero() {
        return precondition("matrix is singular");
    }
    let adj = adjugate(m);
    let d = rat_int(&d);
    Ok(adj.mul_rat_vec(v).into_iter().map(|y| y / &d).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::L1, NormKind::L2, NormKind::Linf];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "l1" | "L1" => Ok(NormKind::L1),
            "2" | "l2" | "L2" => Ok(NormKind::L2),
            "inf" | "linf" | "Linf" | "oo" => Ok(NormKind::Linf),
            other => Err(Error::Parse(format!("unknown norm {other:?}; expected 1, 2 or inf"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            NormKind::L1 => "1",
            NormKind::L2 => "2",
            NormKind::Linf => "inf",
        }
    }

    /// `n^(1/p)` for this norm.
    pub fn dim_root(&self, n: usize) -> Surd {
        let n = BigInt::from(n);
        match self {
            NormKind::L1 => Surd::rational(rat_int(&n)),
            NormKind::L2 => Surd::sqrt(&n),
            NormKind::Linf => Surd::integer(1),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for NormKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        NormKind::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// An exact norm. For `L2` the stored value is the squared norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormValue {
    pub kind: NormKind,
    pub value: Rat,
}

impl NormValue {
    pub fn zero(kind: NormKind) -> Self {
        NormValue { kind, value: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Square of the actual norm.
    pub fn squared(&self) -> Rat {
        match self.kind {
            NormKind::L2 => self.value.clone(),
            _ => &self.value * &self.value,
        }
    }

    /// `self <= gap * other`, decided exactly.
    pub fn within(&self, gap: &Surd, other: &NormValue) -> bool {
        assert_eq!(self.kind, other.kind, "comparing norms of different kinds");
        self.squared() <= gap.squared() * other.squared()
    }

    /// Squared radius of a Euclidean ball in dimension `dim` containing every
    /// vector whose norm is at most `gap * self`.
    pub fn l2_radius_sq(&self, gap: &Surd, dim: usize) -> Rat {
        let s = gap.squared() * self.squared();
        match self.kind {
            NormKind::Linf => s * Rat::from_integer(BigInt::from(dim)),
            _ => s,
        }
    }

    /// `self / other`; for `L2` this is the ratio of squared norms.
    pub fn ratio(&self, other: &NormValue) -> Option<Rat> {
        assert_eq!(self.kind, other.kind);
        (!other.value.is_zero()).then(|| &self.value / &other.value)
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.kind == other.kind).then(|| self.value.cmp(&other.value))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NormKind::L2 => write!(f, "sqrt({})", self.value),
            _ => write!(f, "{}", self.value),
        }
    }
}

pub fn norm(v: &[Rat], kind: NormKind) -> NormValue {
    let value = match kind {
        NormKind::L1 => v.iter().fold(Rat::zero(), |acc, x| acc + x.abs()),
        NormKind::L2 => v.iter().fold(Rat::zero(), |acc, x| acc + x * x),
        NormKind::Linf => v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero),
    };
    NormValue { kind, value }
}

pub fn norm_int(v: &[BigInt], kind: NormKind) -> NormValue {
    let value = match kind {
        NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        NormKind::L2 => v.iter().map(|x| x * x).sum(),
        NormKind::Linf => v.iter().map(|x| x.abs()).max().unwrap_or_default(),
    };
    NormValue { kind, value: Rat::from_integer(value) }
}

/// Signed row permutation `P` and column permutation `Q` with `M' = P M Q`:
/// `M'[r][c] = row_sign[r] * M[row_perm[r]][col_perm[c]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PivotTransform {
    pub row_perm: Vec<usize>,
    pub row_sign: Vec<i8>,
    pub col_perm: Vec<usize>,
}

impl PivotTransform {
    pub fn identity(n: usize) -> Self {
        PivotTransform { row_perm: (0..n).collect(), row_sign: vec![1; n], col_perm: (0..n).collect() }
    }

    pub fn is_identity(&self) -> bool {
        *self == PivotTransform::identity(self.row_perm.len())
    }

    pub fn apply(&self, m: &IntMatrix) -> IntMatrix {
        let n = m.dim();
        let mut out = IntMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let v = m.get(self.row_perm[r], self.col_perm[c]);
                out.set(r, c, if self.row_sign[r] < 0 { -v } else { v.clone() });
            }
        }
        out
    }

    /// Maps a coefficient vector for `M'` to one for `M`: `q = Q q'`.
    pub fn map_back(&self, q: &[BigInt]) -> IntVector {
        let mut out = vec![BigInt::zero(); q.len()];
        for (c, v) in q.iter().enumerate() {
            out[self.col_perm[c]] = v.clone();
        }
        out
    }

    /// `sign(P) * sign(Q)`, so that `det(M') = det_sign() * det(M)`.
    pub fn det_sign(&self) -> i32 {
        let negs = self.row_sign.iter().filter(|&&s| s < 0).count();
        let s = perm_sign(&self.row_perm) * perm_sign(&self.col_perm);
        if negs % 2 == 1 {
            -s
        } else {
            s
        }
    }
}

fn perm_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Moves a maximal-magnitude entry to position `(n, 1)` with positive sign.
///
/// If `M[n][1]` already has maximal magnitude it stays in place. Otherwise the
/// first maximal entry in row-major order is chosen; its row is swapped with
/// the last row and its column with the first. The pivot row is negated when
/// the pivot is negative.
pub fn normalize_pivot(m: &IntMatrix) -> Result<(IntMatrix, PivotTransform)> {
    if m.is_zero() {
        return precondition("cannot normalize the pivot of a zero matrix");
    }
    let n = m.dim();
    let max = m.max_abs();
    let (pr, pc) = if m.get(n - 1, 0).abs() == max {
        (n - 1, 0)
    } else {
        let idx = (0..n * n).find(|&k| m.get(k / n, k % n).abs() == max).expect("max exists");
        (idx / n, idx % n)
    };
    let mut t = PivotTransform::identity(n);
    t.row_perm.swap(pr, n - 1);
    t.col_perm.swap(pc, 0);
    if m.get(pr, pc).is_negative() {
        t.row_sign[n - 1] = -1;
    }
    Ok((t.apply(m), t))
}

/// Operator norm of `m` for `L1` (max column sum) and `Linf` (max row sum);
/// for `L2` the squared Frobenius norm, an upper bound for the squared operator norm.
pub fn op_norm_bound(m: &IntMatrix, kind: NormKind) -> Rat {
    let n = m.dim();
    let v: BigInt = match kind {
        NormKind::L1 => (0..n).map(|j| (0..n).map(|i| m.get(i, j).abs()).sum::<BigInt>()).max().unwrap(),
        NormKind::Linf => (0..n).map(|i| (0..n).map(|j| m.get(i, j).abs()).sum::<BigInt>()).max().unwrap(),
        NormKind::L2 => m.entries().map(|v| v * v).sum(),
    };
    Rat::from_integer(v)
}
