use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invariant, precondition, Result};
use crate::exactnum::{ext_gcd, frac, gcd_all, lcd, BigInt, Rat};
use crate::linalg::IntMatrix;
use crate::problems::{Oracle, SapInstance, SvpInstance};
use crate::ser;

/// The shift `a` making `gcd(w_1, ..., w_{n-1}, w_n + a d) = 1`.
///
/// Returns 0 when `gcd(w)` is already 1. Otherwise starts from
/// `a = gcd(w_1, ..., w_{n-1})` and divides out `gcd(a, w_n)` until it is 1.
pub fn find_coprime_shift(w: &[BigInt], d: &BigInt) -> Result<BigInt> {
    let Some((last, head)) = w.split_last() else {
        return precondition("empty vector");
    };
    if !gcd_all(w.iter().chain([d])).is_one() {
        return precondition("gcd of the numerators and the denominator must be 1");
    }
    let g = gcd_all(head);
    if g.is_zero() {
        return precondition("the leading coordinates are all zero");
    }
    let mut a = BigInt::zero();
    if !gcd_all(w).is_one() {
        a = g.clone();
        loop {
            let h = a.gcd(last);
            if h.is_one() {
                break;
            }
            a /= h;
        }
    }
    let shifted = last + &a * d;
    invariant(g.gcd(&shifted).is_one(), || format!("shift {a} leaves a common factor"))?;
    Ok(a)
}

/// A matrix of determinant 1 whose first column is `w`.
///
/// Column `i` is `(b1 w_1 / g_{i-1}, ..., b1 w_{i-1} / g_{i-1}, b2, 0, ..., 0)`
/// where `g_i = gcd(w_1, ..., w_i)` and `b2 g_{i-1} - b1 w_i = g_i`, so the
/// leading `i x i` block has determinant `g_i`.
pub fn complete_to_unimodular(w: &[BigInt]) -> Result<IntMatrix> {
    let n = w.len();
    if n == 0 {
        return precondition("empty vector");
    }
    if !gcd_all(w).is_one() {
        return precondition("entries must have gcd 1");
    }
    if n == 1 {
        if w[0].is_one() {
            return Ok(IntMatrix::identity(1));
        }
        return precondition("a 1 x 1 unimodular matrix with determinant 1 must be [1]");
    }
    // the construction divides by w_1, so move a nonzero entry to the top
    let k = w.iter().position(|v| !v.is_zero()).expect("gcd 1 implies a nonzero entry");
    let mut v = w.to_vec();
    v.swap(0, k);
    let mut u = IntMatrix::zeros(n);
    for (r, val) in v.iter().enumerate() {
        u.set(r, 0, val.clone());
    }
    let mut g = v[0].clone();
    for i in 1..n {
        let (gi, s, t) = ext_gcd(&g, &v[i])?;
        let b1 = -t;
        for (r, vr) in v.iter().enumerate().take(i) {
            u.set(r, i, &b1 * vr / &g);
        }
        u.set(i, i, s);
        g = gi;
    }
    if k != 0 {
        let mut rows = u.rows();
        rows.swap(0, k);
        for row in rows.iter_mut() {
            row[n - 1] = -&row[n - 1];
        }
        u = IntMatrix::new(rows)?;
    }
    invariant(u.det().is_one(), || format!("completion has determinant {}", u.det()))?;
    Ok(u)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SapToSvpRun {
    #[serde(serialize_with = "ser::big")]
    pub q: BigInt,
    #[serde(serialize_with = "ser::big")]
    pub d: BigInt,
    /// Integer added to `x_1` when `x_1, ..., x_{n-1}` are all integral.
    #[serde(serialize_with = "ser::big")]
    pub first_shift: BigInt,
    /// Integer added to `x_n`.
    #[serde(serialize_with = "ser::big")]
    pub a: BigInt,
    pub unimodular: Option<IntMatrix>,
    pub matrix: Option<IntMatrix>,
    /// One-dimensional inputs are solved directly without an oracle call.
    pub direct: bool,
}

/// The SVP instance for `x`: a unimodular completion of `d x` (after the
/// integer shifts) with all but the first column scaled by `d`.
pub fn build_svp_instance(inst: &SapInstance) -> Result<(SvpInstance, SapToSvpRun)> {
    let n = inst.x.len();
    let d = lcd(&inst.x);
    if d.is_one() {
        return precondition("x is integral");
    }
    if n < 2 {
        return precondition("the construction needs n >= 2");
    }
    let dr = Rat::from_integer(d.clone());
    let mut w: Vec<BigInt> = inst.x.iter().map(|v| (v * &dr).to_integer()).collect();
    let mut first_shift = BigInt::zero();
    if w[..n - 1].iter().all(Zero::is_zero) {
        first_shift = BigInt::one();
        w[0] += &d;
    }
    let a = find_coprime_shift(&w, &d)?;
    w[n - 1] += &a * &d;
    let u = complete_to_unimodular(&w)?;
    let mut m = u.clone();
    for r in 0..n {
        for c in 1..n {
            m.set(r, c, m.get(r, c) * &d);
        }
    }
    let expected = num_traits::pow(d.clone(), n - 1);
    invariant(m.det().abs() == expected, || format!("scaled determinant {} is not d^(n-1)", m.det()))?;
    let svp = SvpInstance::new(inst.gap.clone(), m.clone(), inst.norm)?;
    let run = SapToSvpRun { q: BigInt::zero(), d, first_shift, a, unimodular: Some(u), matrix: Some(m), direct: false };
    Ok((svp, run))
}

/// Exact answer for a single coordinate `x = r/d`: the least `q` with `q r = +-1 mod d`.
fn one_dimensional(inst: &SapInstance) -> Result<SapToSvpRun> {
    let d = lcd(&inst.x);
    if d.is_one() {
        return precondition("x is integral");
    }
    let r = (&inst.x[0] * Rat::from_integer(d.clone())).to_integer();
    let (_, s, _) = ext_gcd(&r, &d)?;
    let u = s.mod_floor(&d);
    let q = u.clone().min(&d - &u);
    Ok(SapToSvpRun { q, d, first_shift: BigInt::zero(), a: BigInt::zero(), unimodular: None, matrix: None, direct: true })
}

/// Answers SAP with one SVP call; the first coordinate of the short vector's
/// coefficients is the multiplier.
pub fn sap_to_svp(inst: &SapInstance, oracle: &dyn Oracle) -> Result<SapToSvpRun> {
    if inst.x.len() == 1 {
        return one_dimensional(inst);
    }
    let (svp, mut run) = build_svp_instance(inst)?;
    let q = oracle.svp(&svp)?;
    invariant(q.len() == inst.x.len(), || "SVP answer has the wrong dimension".into())?;
    let q0 = q[0].clone();
    let qr = Rat::from_integer(q0.clone());
    // the lattice contains d Z^n; when alpha * lambda_1 >= d a valid SVP answer can lie there
    invariant(inst.x.iter().any(|v| !frac(&(v * &qr)).is_zero()), || {
        format!("SVP answer has first coordinate {q0} = 0 mod {}: the short vector lies in d Z^n", run.d)
    })?;
    run.q = q0;
    Ok(run)
}
