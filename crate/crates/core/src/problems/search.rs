//! Exhaustive search primitives shared by the exact and worst-case oracles.
//!
//! Residual norms `|{q x}|` only depend on `q mod d` with `d = lcd(x)`. Small
//! denominators are scanned directly. Large ones are handled through the
//! lattice `L = d*x*Z + d*Z^n`, whose points are exactly the integer vectors
//! congruent to `q * d * x` modulo `d`. Every residue class `q` owns the point
//! `d * {q x}`, so enumerating `L` inside a ball finds every class whose
//! residual lies in that ball.

use std::cell::OnceCell;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::exactnum::{bezout_all, lcd, minimal_residue, BigInt, Rat, Surd};
use crate::lattice::{canonical_sign, Lattice};
use crate::linalg::{norm_int, IntMatrix, IntVector, NormKind, NormValue};

/// Configurable bounds on the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest dimension accepted by the exact solvers.
    pub max_dim: usize,
    /// Largest range that is scanned one `q` at a time.
    pub max_lcd: u64,
    /// Budget of lattice points visited per enumeration.
    pub max_points: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_dim: 6, max_lcd: 1_000_000, max_points: 4_000_000 }
    }
}

impl Limits {
    pub fn check_dim(&self, n: usize) -> Result<()> {
        if n > self.max_dim {
            return Err(Error::LimitExceeded(format!("dimension {n} exceeds the limit {}", self.max_dim)));
        }
        Ok(())
    }
}

/// The closed set `{v : |v| <= gap * base}`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub gap: Surd,
    pub base: NormValue,
}

impl Ball {
    pub fn new(gap: Surd, base: NormValue) -> Self {
        Ball { gap, base }
    }

    pub fn exact(base: NormValue) -> Self {
        Ball { gap: Surd::integer(1), base }
    }

    pub fn contains(&self, v: &NormValue) -> bool {
        v.within(&self.gap, &self.base)
    }

    fn l2_radius_sq(&self, dim: usize) -> Rat {
        self.base.l2_radius_sq(&self.gap, dim)
    }
}

/// Residual norms of the multiples of a rational vector.
pub struct ResidueSystem {
    kind: NormKind,
    d: BigInt,
    w: Vec<BigInt>,
    small: Option<(i64, Vec<i64>)>,
    lattice: OnceCell<Result<(Lattice, Vec<BigInt>)>>,
}

impl ResidueSystem {
    pub fn new(x: &[Rat], kind: NormKind) -> Self {
        let d = lcd(x);
        let w: Vec<BigInt> = x.iter().map(|v| (v * Rat::from_integer(d.clone())).to_integer().mod_floor(&d)).collect();
        let small = d
            .to_i64()
            .filter(|&d| d < (1 << 31))
            .map(|di| (di, w.iter().map(|v| v.to_i64().expect("reduced below d")).collect()));
        ResidueSystem { kind, d, w, small, lattice: OnceCell::new() }
    }

    pub fn denominator(&self) -> &BigInt {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// `d * {q x}` as an integer vector.
    pub fn residue(&self, q: &BigInt) -> IntVector {
        self.w.iter().map(|wi| minimal_residue(&(q * wi), &self.d).expect("d is positive")).collect()
    }

    /// Norm of `d * {q x}`.
    pub fn scaled_norm(&self, q: &BigInt) -> NormValue {
        norm_int(&self.residue(q), self.kind)
    }

    /// Converts a norm of `d * v` to the norm of `v`.
    pub fn unscale(&self, v: &NormValue) -> NormValue {
        let d = Rat::from_integer(self.d.clone());
        let value = match v.kind {
            NormKind::L2 => &v.value / (&d * &d),
            _ => &v.value / d,
        };
        NormValue { kind: v.kind, value }
    }

    /// Largest possible norm of `d * {q x}`.
    fn cap(&self) -> NormValue {
        let n = Rat::from_integer(BigInt::from(self.dim()));
        let half = Rat::new(self.d.clone(), BigInt::from(2));
        let value = match self.kind {
            NormKind::Linf => half,
            NormKind::L1 => n * half,
            NormKind::L2 => n * &half * &half,
        };
        NormValue { kind: self.kind, value }
    }

    fn scan_len(&self, limit: &BigInt) -> BigInt {
        limit.min(&(&self.d - 1u32)).clone()
    }

    /// Calls `f(q, scaled norm)` for every `q` in `[1, min(limit, d-1)]` in
    /// increasing order, or only for those inside `ball` when one is given.
    /// A ball is required once the range is too long to scan.
    pub fn visit(
        &self,
        limit: &BigInt,
        ball: Option<&Ball>,
        limits: &Limits,
        mut f: impl FnMut(&BigInt, &NormValue),
    ) -> Result<()> {
        let top = self.scan_len(limit);
        if top < BigInt::one() {
            return Ok(());
        }
        if top <= BigInt::from(limits.max_lcd) {
            self.scan(&top, ball, &mut f);
            return Ok(());
        }
        let Some(ball) = ball else {
            return Err(Error::LimitExceeded(format!("cannot scan {top} multipliers without a norm bound")));
        };
        self.enumerate(&top, ball, limits, &mut f)
    }

    fn scan(&self, top: &BigInt, ball: Option<&Ball>, f: &mut impl FnMut(&BigInt, &NormValue)) {
        let keep = |v: &NormValue| ball.is_none_or(|b| b.contains(v));
        if let (Some((d, w)), Some(top)) = (&self.small, top.to_i64()) {
            let half = d / 2;
            for q in 1..=top {
                let mut acc: i128 = 0;
                for &wi in w {
                    let mut r = (q * wi) % d;
                    if r > half {
                        r -= d;
                    }
                    let r = r as i128;
                    acc = match self.kind {
                        NormKind::L1 => acc + r.abs(),
                        NormKind::L2 => acc + r * r,
                        NormKind::Linf => acc.max(r.abs()),
                    };
                }
                let v = NormValue { kind: self.kind, value: Rat::from_integer(BigInt::from(acc)) };
                if keep(&v) {
                    f(&BigInt::from(q), &v);
                }
            }
            return;
        }
        let mut q = BigInt::one();
        while &q <= top {
            let v = self.scaled_norm(&q);
            if keep(&v) {
                f(&q, &v);
            }
            q += 1u32;
        }
    }

    fn lattice(&self) -> Result<&(Lattice, Vec<BigInt>)> {
        self.lattice
            .get_or_init(|| {
                let n = self.dim();
                let mut gens = vec![self.w.clone()];
                for i in 0..n {
                    let mut e = vec![BigInt::zero(); n];
                    e[i] = self.d.clone();
                    gens.push(e);
                }
                let lattice = Lattice::from_generators(&gens, n)?;
                let mut values = self.w.clone();
                values.push(self.d.clone());
                let (g, mut u) = bezout_all(&values)?;
                if !g.is_one() {
                    return precondition("numerators and denominator share a factor");
                }
                u.pop();
                Ok((lattice, u))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn enumerate(
        &self,
        top: &BigInt,
        ball: &Ball,
        limits: &Limits,
        f: &mut impl FnMut(&BigInt, &NormValue),
    ) -> Result<()> {
        let (lattice, u) = self.lattice()?;
        let mut found: BTreeMap<BigInt, NormValue> = BTreeMap::new();
        lattice.enumerate(&ball.l2_radius_sq(self.dim()), limits.max_points, |_, v| {
            let q = u.iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(&self.d);
            if q.is_zero() || &q > top || found.contains_key(&q) {
                return;
            }
            let nv = self.scaled_norm(&q);
            if ball.contains(&nv) {
                found.insert(q, nv);
            }
        })?;
        for (q, v) in &found {
            f(q, v);
        }
        Ok(())
    }

    /// Smallest scaled norm over `q` in `[1, limit]` and the least `q`
    /// attaining it. A range reaching `d` yields `(d, 0)`.
    pub fn min_over(&self, limit: &BigInt, limits: &Limits) -> Result<(BigInt, NormValue)> {
        if limit < &BigInt::one() {
            return precondition("empty multiplier range");
        }
        if limit >= &self.d {
            return Ok((self.d.clone(), NormValue::zero(self.kind)));
        }
        let top = self.scan_len(limit);
        let mut best: Option<(BigInt, NormValue)> = None;
        fn keep(best: &mut Option<(BigInt, NormValue)>, q: &BigInt, v: &NormValue) {
            if best.as_ref().is_none_or(|(_, b)| v.value < b.value) {
                *best = Some((q.clone(), v.clone()));
            }
        }
        if top <= BigInt::from(limits.max_lcd) {
            self.scan(&top, None, &mut |q, v| keep(&mut best, q, v));
            return best.ok_or_else(|| Error::Invariant("scan found no multiplier".into()));
        }
        let cap = self.cap();
        let mut radius = self.initial_radius()?.unwrap_or_else(|| cap.clone());
        loop {
            self.enumerate(&top, &Ball::exact(radius.clone()), limits, &mut |q, v| keep(&mut best, q, v))?;
            if let Some(b) = best {
                return Ok(b);
            }
            if radius.value >= cap.value {
                return Err(Error::Invariant("no multiplier found below the maximal residual".into()));
            }
            let factor = if self.kind == NormKind::L2 { 4 } else { 2 };
            radius.value = (radius.value * Rat::from_integer(BigInt::from(factor))).min(cap.value.clone());
        }
    }

    /// A residual norm attained by a reduced basis vector, used to seed the
    /// enumeration radius.
    fn initial_radius(&self) -> Result<Option<NormValue>> {
        let (lattice, u) = self.lattice()?;
        let mut best: Option<NormValue> = None;
        for v in lattice.reduced_basis() {
            let q = u.iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(&self.d);
            if q.is_zero() {
                continue;
            }
            let nv = self.scaled_norm(&q);
            if best.as_ref().is_none_or(|b| nv.value < b.value) {
                best = Some(nv);
            }
        }
        Ok(best)
    }
}

/// Short vectors of the lattice spanned by the columns of a nonsingular matrix.
pub struct SvpSearch {
    kind: NormKind,
    lattice: Lattice,
}

impl SvpSearch {
    pub fn new(matrix: &IntMatrix, kind: NormKind) -> Result<Self> {
        Ok(SvpSearch { kind, lattice: Lattice::from_basis(&matrix.columns())? })
    }

    /// Calls `f(q, Mq, |Mq|)` for every nonzero lattice vector in `ball`,
    /// with `q` sign-normalized and each `+-q` pair visited once.
    pub fn visit(&self, ball: &Ball, limits: &Limits, mut f: impl FnMut(&IntVector, &IntVector, &NormValue)) -> Result<()> {
        let n = self.lattice.dim();
        let mut found: BTreeMap<IntVector, (IntVector, NormValue)> = BTreeMap::new();
        self.lattice.enumerate(&ball.l2_radius_sq(n), limits.max_points, |q, v| {
            if v.iter().all(Zero::is_zero) {
                return;
            }
            let nv = norm_int(v, self.kind);
            if !ball.contains(&nv) {
                return;
            }
            let first_negative = q.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
            if first_negative {
                return;
            }
            found.insert(q.to_vec(), (v.to_vec(), nv));
        })?;
        for (q, (v, nv)) in &found {
            f(q, v, nv);
        }
        Ok(())
    }

    /// The minimal nonzero norm and its lexicographically least minimizer.
    pub fn shortest(&self, limits: &Limits) -> Result<(IntVector, NormValue)> {
        let start = self
            .lattice
            .reduced_basis()
            .iter()
            .map(|v| norm_int(v, self.kind))
            .min_by(|a, b| a.value.cmp(&b.value))
            .ok_or_else(|| Error::Invariant("empty basis".into()))?;
        let mut best: Option<(IntVector, NormValue)> = None;
        self.visit(&Ball::exact(start), limits, |q, _, nv| {
            if best.as_ref().is_none_or(|(_, b)| nv.value < b.value) {
                best = Some((canonical_sign(q), nv.clone()));
            }
        })?;
        best.ok_or_else(|| Error::Invariant("a basis vector lies inside its own ball".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, rat};
    use crate::linalg::norm;
    use proptest::prelude::*;

    fn direct_min(x: &[Rat], kind: NormKind, limit: i64) -> (i64, NormValue) {
        let mut best: Option<(i64, NormValue)> = None;
        for q in 1..=limit {
            let r: Vec<Rat> = x.iter().map(|v| frac(&(v * Rat::from_integer(BigInt::from(q))))).collect();
            let nv = norm(&r, kind);
            if best.as_ref().is_none_or(|(_, b)| nv.value < b.value) {
                best = Some((q, nv));
            }
        }
        best.unwrap()
    }

    #[test]
    fn scan_examples() {
        let sys = ResidueSystem::new(&[rat(1, 3), rat(1, 3)], NormKind::Linf);
        let (q, v) = sys.min_over(&BigInt::from(2), &Limits::default()).unwrap();
        assert_eq!(q, BigInt::one());
        assert_eq!(sys.unscale(&v).value, rat(1, 3));
        let (q, v) = sys.min_over(&BigInt::from(3), &Limits::default()).unwrap();
        assert_eq!((q, v.is_zero()), (BigInt::from(3), true));
    }

    #[test]
    fn shortest_examples() {
        let m = IntMatrix::from_i64(&[&[1, 0], &[0, 5]]).unwrap();
        let (q, v) = SvpSearch::new(&m, NormKind::Linf).unwrap().shortest(&Limits::default()).unwrap();
        assert_eq!(q, vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(v.value, rat(1, 1));
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).unwrap();
        let (_, v) = SvpSearch::new(&m, NormKind::L2).unwrap().shortest(&Limits::default()).unwrap();
        assert_eq!(v.value, rat(4, 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn periodicity(nums in prop::collection::vec(-60i64..60, 1..4), den in 2i64..40, q in -500i64..500) {
            let x: Vec<Rat> = nums.iter().map(|&a| rat(a, den)).collect();
            let sys = ResidueSystem::new(&x, NormKind::L1);
            let d = sys.denominator().clone();
            let q = BigInt::from(q);
            prop_assert_eq!(sys.scaled_norm(&q), sys.scaled_norm(&q.mod_floor(&d)));
        }

        #[test]
        fn enumeration_agrees_with_scan(
            nums in prop::collection::vec(1i64..400, 1..4),
            den in 2i64..400,
            limit in 1i64..400,
            k in 0usize..3,
        ) {
            let kind = NormKind::ALL[k];
            let x: Vec<Rat> = nums.iter().map(|&a| rat(a, den)).collect();
            let sys = ResidueSystem::new(&x, kind);
            let d = sys.denominator().to_i64().unwrap();
            prop_assume!(d >= 2);
            let limit = limit.min(d - 1);
            let forced = Limits { max_lcd: 0, ..Limits::default() };
            let (q, v) = sys.min_over(&BigInt::from(limit), &forced).unwrap();
            let (q2, v2) = direct_min(&x, kind, limit);
            prop_assert_eq!(q, BigInt::from(q2));
            prop_assert_eq!(sys.unscale(&v), v2);
            let (q3, _) = sys.min_over(&BigInt::from(limit), &Limits::default()).unwrap();
            prop_assert_eq!(q3, BigInt::from(q2));
        }
    }
}
