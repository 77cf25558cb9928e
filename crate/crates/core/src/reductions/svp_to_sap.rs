//! Short vectors from one simultaneous-approximation (or GDA) call.
//!
//! With `M(x) = x adj(M) + A` for a constant matrix `A`, the product
//! `M M(x) = x det(M) Id + M A`, so for a large substitution `x = c^j` the
//! multiples `q x` of the vector `M(c^j)^-1 (b1, b2, 0, ..., 0)` track the
//! lattice of `M` up to a controlled error. `A` is built so that the two
//! adjugate entries used for `b1, b2` are coprime after substitution.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invariant, precondition, Error, Result};
use crate::exactnum::{
    ceil_log, ext_gcd, frac_vec, least_prime_not_dividing, minimal_residue, rat_bits, BigInt, Rat, Surd,
};
use crate::linalg::{adjugate, normalize_pivot, op_norm_bound, solve_rational, IntMatrix, IntVector, NormKind, PivotTransform};
use crate::poly::{adj_entry, det_coeff_matrix, IntPoly, LinPolyMatrix};
use crate::problems::{GdaInstance, Oracle, ProblemKind, SapInstance, SvpInstance};
use crate::ser;

/// Which oracle answers the final call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Sap,
    Gda,
}

/// Everything computed before the oracle call, plus the answer afterwards.
#[derive(Clone, Debug, Serialize)]
pub struct SvpToSapTrace {
    pub pivot: PivotTransform,
    pub normalized: IntMatrix,
    #[serde(serialize_with = "ser::big")]
    pub p: BigInt,
    /// Exponents `j_i` for `i = 2, ..., n`.
    pub row_exponents: Vec<u32>,
    /// Constant part `A` of the polynomial matrix after the row loop.
    pub constant_part: IntMatrix,
    /// `det C` of the last row's two adjugate entries, before removing `p`.
    #[serde(serialize_with = "ser::big")]
    pub c_raw: BigInt,
    /// `c_raw` with every factor `p` removed, sign kept; `p + 1` if nothing else remains.
    #[serde(serialize_with = "ser::big")]
    pub c: BigInt,
    /// Whether `c_raw` was `+-p^k` and `c` was replaced by `p + 1`.
    pub c_replaced: bool,
    /// `c` keeps the sign of `c_raw`; the substitution is the signed `c^j`.
    pub c_sign: &'static str,
    /// The quantity `|c|^j` has to reach (`c^(2j)` for relaxed `L2`).
    #[serde(serialize_with = "ser::rat")]
    pub exponent_bound: Rat,
    /// Set when the oracle gap is relaxed below the requested one.
    #[serde(serialize_with = "ser::opt_rat")]
    pub relaxed_gap: Option<Rat>,
    pub j: u32,
    /// `c^j`.
    #[serde(serialize_with = "ser::big")]
    pub substitution: BigInt,
    pub substituted: IntMatrix,
    #[serde(serialize_with = "ser::big")]
    pub det_substituted: BigInt,
    #[serde(serialize_with = "ser::big")]
    pub b1: BigInt,
    #[serde(serialize_with = "ser::big")]
    pub b2: BigInt,
    #[serde(serialize_with = "ser::rat_vec")]
    pub x: Vec<Rat>,
    pub target: Target,
    #[serde(serialize_with = "ser::surd")]
    pub oracle_gap: Surd,
    #[serde(serialize_with = "ser::opt_surd")]
    pub oracle_bound: Option<Surd>,
    #[serde(serialize_with = "ser::opt_big")]
    pub q0: Option<BigInt>,
    /// `M'{q0 x}` before undoing the column permutation.
    #[serde(serialize_with = "ser::big_vec")]
    pub image: IntVector,
    /// Largest bit length of any integer formed.
    pub max_bits: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SvpToSapRun {
    #[serde(serialize_with = "ser::big_vec")]
    pub q: IntVector,
    pub trace: SvpToSapTrace,
}

/// The oracle-free part of the reduction and the oracle query it leads to.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub trace: SvpToSapTrace,
    pub query: Query,
}

#[derive(Clone, Debug)]
pub enum Query {
    Sap(SapInstance),
    Gda(GdaInstance),
}

#[derive(Default)]
struct Bits(u64);

impl Bits {
    fn int(&mut self, v: &BigInt) {
        self.0 = self.0.max(v.bits());
    }

    fn matrix(&mut self, m: &IntMatrix) {
        self.0 = self.0.max(m.max_bits());
    }

    fn poly(&mut self, f: &IntPoly) {
        self.0 = self.0.max(f.max_bits());
    }

    fn rat(&mut self, v: &Rat) {
        self.0 = self.0.max(rat_bits(v));
    }
}

fn rational_gap(gap: &Surd) -> Result<Rat> {
    match gap.as_rational() {
        Some(r) if *r >= Rat::one() => Ok(r.clone()),
        Some(r) => precondition(format!("gap must be at least 1, got {r}")),
        None => precondition(format!("gap must be rational, got {gap}")),
    }
}

fn relaxed_target(
    alpha: &Rat,
    alpha_prime: &Rat,
    ma: &IntMatrix,
    det_m: &BigInt,
    c: &BigInt,
    kind: NormKind,
) -> Result<(BigInt, Rat)> {
    if alpha_prime >= alpha {
        return precondition(format!("relaxed gap {alpha_prime} must be below {alpha}"));
    }
    if *alpha_prime < Rat::one() {
        return precondition(format!("relaxed gap {alpha_prime} must be at least 1"));
    }
    if det_m.is_zero() {
        return precondition("singular matrix");
    }
    let factor = (alpha + alpha_prime) / ((alpha - alpha_prime) * Rat::from_integer(det_m.abs()));
    let op = op_norm_bound(ma, kind);
    Ok(match kind {
        NormKind::L2 => (c * c, &factor * &factor * op),
        _ => (c.abs(), factor * op),
    })
}

/// Least `j >= 1` with `|c|^j >= (alpha + alpha') ||M A||_op / ((alpha - alpha') |det M|)`.
///
/// The operator norm is exact for `L1` and `Linf`; for `L2` the Frobenius
/// norm bounds it from above and the comparison is made between squares.
pub fn relaxed_substitution_exponent(
    alpha: &Rat,
    alpha_prime: &Rat,
    ma: &IntMatrix,
    det_m: &BigInt,
    c: &BigInt,
    kind: NormKind,
) -> Result<u32> {
    let (base, bound) = relaxed_target(alpha, alpha_prime, ma, det_m, c, kind)?;
    if !bound.is_positive() {
        return Ok(1);
    }
    Ok(ceil_log(&base, &bound)?.max(1))
}

/// Whether adjugate entries `(i, 1)` and `(i, 2)` of the leading `i x i`
/// block (0-based `r = i - 1`) share no root, with `det C` of the pair when
/// they are not both constant. Two constants share no root unless both vanish.
fn row_criterion(m: &LinPolyMatrix, r: usize, bits: &mut Bits) -> Result<(bool, Option<BigInt>)> {
    let lead = m.leading(r + 1);
    let f1 = adj_entry(&lead, r, 0)?;
    let f2 = adj_entry(&lead, r, 1)?;
    bits.poly(&f1);
    bits.poly(&f2);
    if f1.degree().unwrap_or(0) == 0 && f2.degree().unwrap_or(0) == 0 {
        return Ok((!(f1.is_zero() && f2.is_zero()), None));
    }
    let value = det_coeff_matrix(&f1, &f2)?;
    Ok((!value.is_zero(), Some(value)))
}

/// Runs every step up to the oracle call.
pub fn prepare(inst: &SvpInstance, target: Target, relaxed: Option<&Rat>) -> Result<Prepared> {
    let n = inst.dim();
    if n < 2 {
        return precondition("the reduction needs n >= 2");
    }
    let alpha = rational_gap(&inst.gap)?;
    let det_input = inst.matrix.det();
    if det_input.is_zero() {
        return precondition("singular matrix");
    }
    let mut bits = Bits::default();
    let (m, pivot) = normalize_pivot(&inst.matrix)?;
    let pivot_value = m.get(n - 1, 0).clone();
    let det_m = m.det();
    invariant(pivot_value.is_positive() && pivot_value == m.max_abs(), || "pivot normalization failed".into())?;

    let p = least_prime_not_dividing(&(&pivot_value * &det_m))?;
    let mut pm = LinPolyMatrix::new(IntMatrix::identity(n).scale(&p), adjugate(&m))?;
    let mut row_exponents = Vec::with_capacity(n - 1);
    let mut c_raw = None;
    for r in 1..n {
        pm.add_constant(r, 0, &p);
        let max_j = 2 * r as u32;
        let mut chosen = None;
        let mut power = p.clone();
        for j in 1..=max_j {
            let mut trial = pm.clone();
            trial.add_constant(r, r - 1, &power);
            let (coprime, value) = row_criterion(&trial, r, &mut bits)?;
            if coprime {
                chosen = Some((j, trial, value));
                break;
            }
            power *= &p;
        }
        let (j, next, value) =
            chosen.ok_or_else(|| Error::Invariant(format!("no exponent up to {max_j} works for row {}", r + 1)))?;
        row_exponents.push(j);
        pm = next;
        c_raw = value;
    }
    // the last row's (n, 1) entry has leading term M_{n,1} det(M)^(n-2) x^(n-1)
    let c_raw = c_raw.ok_or_else(|| Error::Invariant("last adjugate row is constant".into()))?;
    bits.int(&c_raw);
    bits.matrix(&pm.constant);
    bits.matrix(&pm.linear);

    let mut c = c_raw.clone();
    while (&c % &p).is_zero() {
        c /= &p;
    }
    let c_replaced = c.abs().is_one();
    if c_replaced {
        c = &p + 1u32;
    }

    let (exponent_bound, j) = match relaxed {
        None => {
            // a^2 (2 M_{n,1} n)^(3n)
            let a = alpha.numer();
            let base = &pivot_value * BigInt::from(2 * n);
            let bound = Rat::from_integer(a * a * num_traits::pow(base, 3 * n));
            let j = ceil_log(&c, &bound)?;
            (bound, j)
        }
        Some(alpha_prime) => {
            let ma = m.mul(&pm.constant);
            let j = relaxed_substitution_exponent(&alpha, alpha_prime, &ma, &det_m, &c, inst.norm)?;
            (relaxed_target(&alpha, alpha_prime, &ma, &det_m, &c, inst.norm)?.1, j)
        }
    };
    let substitution = num_traits::pow(c.clone(), j as usize);
    let mp = pm.substitute(&substitution);
    let det_mp = mp.det();
    invariant(!det_mp.is_zero(), || "substituted matrix is singular".into())?;
    let adj_mp = adjugate(&mp);
    bits.int(&substitution);
    bits.matrix(&mp);
    bits.matrix(&adj_mp);
    bits.int(&det_mp);

    let (e1, e2) = (adj_mp.get(n - 1, 0).clone(), adj_mp.get(n - 1, 1).clone());
    invariant(!(e1.is_zero() && e2.is_zero()), || "both adjugate entries vanish".into())?;
    let (g, s, _) = ext_gcd(&e1, &e2)?;
    invariant(g.is_one(), || format!("adjugate entries {e1} and {e2} share the factor {g}"))?;
    let (b1, b2) = if e2.is_zero() {
        (e1.signum(), BigInt::zero())
    } else {
        let b1 = minimal_residue(&s, &e2.abs())?;
        let rest = BigInt::one() - &b1 * &e1;
        invariant((&rest % &e2).is_zero(), || "Bezout completion is not exact".into())?;
        let b2 = rest / &e2;
        (b1, b2)
    };
    bits.int(&b1);
    bits.int(&b2);

    let mut rhs = vec![Rat::zero(); n];
    rhs[0] = Rat::from_integer(b1.clone());
    rhs[1] = Rat::from_integer(b2.clone());
    let x = solve_rational(&mp, &rhs)?;
    let expected_last = Rat::new(BigInt::one(), det_mp.clone());
    invariant(x[n - 1] == expected_last, || format!("last coordinate {} is not 1/det", x[n - 1]))?;
    x.iter().for_each(|v| bits.rat(v));

    let oracle_alpha = relaxed.cloned().unwrap_or_else(|| alpha.clone());
    let (query, oracle_gap, oracle_bound) = match target {
        Target::Sap => {
            let gap = Surd::rational(oracle_alpha);
            (Query::Sap(SapInstance::new(gap.clone(), x.clone(), inst.norm)?), gap, None)
        }
        Target::Gda => {
            let root = inst.norm.dim_root(n);
            let gap = root.recip().scale(&oracle_alpha);
            let two_alpha = &oracle_alpha * Rat::from_integer(BigInt::from(2));
            let bound = root.scale(&(Rat::from_integer(det_mp.abs()) / two_alpha));
            let query = GdaInstance::new(gap.clone(), bound.clone(), x.clone(), inst.norm)?;
            (Query::Gda(query), gap, Some(bound))
        }
    };

    let trace = SvpToSapTrace {
        pivot,
        normalized: m,
        p,
        row_exponents,
        constant_part: pm.constant.clone(),
        c_raw,
        c,
        c_replaced,
        c_sign: "kept",
        exponent_bound,
        relaxed_gap: relaxed.cloned(),
        j,
        substitution,
        substituted: mp,
        det_substituted: det_mp,
        b1,
        b2,
        x,
        target,
        oracle_gap,
        oracle_bound,
        q0: None,
        image: Vec::new(),
        max_bits: bits.0,
    };
    Ok(Prepared { trace, query })
}

impl Prepared {
    /// Maps the oracle's multiplier to a short vector: `M'{q0 x}`, with the
    /// pivot's column permutation undone.
    pub fn finish(self, q0: BigInt) -> Result<SvpToSapRun> {
        let mut trace = self.trace;
        let q = Rat::from_integer(q0.clone());
        let residual = frac_vec(&trace.x.iter().map(|v| v * &q).collect::<Vec<_>>());
        let image = trace.substituted.mul_rat_vec(&residual);
        invariant(image.iter().all(Rat::is_integer), || "M'{q0 x} is not integral".into())?;
        let image: IntVector = image.into_iter().map(|v| v.to_integer()).collect();
        invariant(image.iter().any(|v| !v.is_zero()), || format!("multiplier {q0} gives the zero vector"))?;
        image.iter().for_each(|v| trace.max_bits = trace.max_bits.max(v.bits()));
        let out = trace.pivot.map_back(&image);
        trace.q0 = Some(q0);
        trace.image = image;
        Ok(SvpToSapRun { q: out, trace })
    }

    pub fn ask(&self, oracle: &dyn Oracle) -> Result<BigInt> {
        match &self.query {
            Query::Sap(i) => oracle.sap(i),
            Query::Gda(i) => oracle.gda(i),
        }
    }

    pub fn query_kind(&self) -> ProblemKind {
        match self.query {
            Query::Sap(_) => ProblemKind::Sap,
            Query::Gda(_) => ProblemKind::Gda,
        }
    }
}

/// Answers SVP with one gap-preserving SAP call.
pub fn svp_to_sap(inst: &SvpInstance, oracle: &dyn Oracle) -> Result<SvpToSapRun> {
    svp_reduce(inst, oracle, Target::Sap, None)
}

/// Answers SVP with one GDA call at gap `alpha / n^(1/p)` and
/// `N = n^(1/p) |det M'| / (2 alpha)`.
pub fn svp_to_gda(inst: &SvpInstance, oracle: &dyn Oracle) -> Result<SvpToSapRun> {
    svp_reduce(inst, oracle, Target::Gda, None)
}

/// Shared driver; `relaxed` asks the oracle for the smaller gap `alpha'`.
pub fn svp_reduce(inst: &SvpInstance, oracle: &dyn Oracle, target: Target, relaxed: Option<&Rat>) -> Result<SvpToSapRun> {
    let prepared = prepare(inst, target, relaxed)?;
    let q0 = prepared.ask(oracle)?;
    prepared.finish(q0)
}
