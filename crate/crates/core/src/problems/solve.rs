use num_traits::{One, Signed, Zero};

use crate::error::{precondition, Error, Result};
use crate::exactnum::{floor_sqrt, BigInt, Rat};
use crate::lattice::canonical_sign;
use crate::linalg::{adjugate, norm_int, IntMatrix, IntVector, NormKind, NormValue};
use crate::problems::instance::{GdaInstance, SapInstance, SvpInstance};
use crate::problems::search::{Limits, ResidueSystem, SvpSearch};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvpSolution {
    pub q: IntVector,
    pub norm: NormValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSolution {
    pub q: BigInt,
    pub norm: NormValue,
}

/// Exact shortest nonzero vector of the lattice `M Z^n`.
///
/// Ties go to the lexicographically least `q` whose first nonzero coordinate
/// is positive.
pub fn brute_svp(inst: &SvpInstance, limits: &Limits) -> Result<SvpSolution> {
    limits.check_dim(inst.dim())?;
    let (q, norm) = SvpSearch::new(&inst.matrix, inst.norm)?.shortest(limits)?;
    Ok(SvpSolution { q, norm })
}

pub fn svp_minimum(matrix: &IntMatrix, kind: NormKind, limits: &Limits) -> Result<NormValue> {
    limits.check_dim(matrix.dim())?;
    Ok(SvpSearch::new(matrix, kind)?.shortest(limits)?.1)
}

/// Shortest vector by scanning a coefficient box, independent of the lattice
/// machinery.
///
/// With `B` the smallest column norm, `q = adj(M) v / det M` bounds `|q_i|`
/// for any `v` of norm at most `B` by `B` times the dual norm of row `i` of
/// `adj(M)`, divided by `|det M|`.
pub fn box_svp(inst: &SvpInstance, limits: &Limits) -> Result<SvpSolution> {
    let m = &inst.matrix;
    let n = m.dim();
    limits.check_dim(n)?;
    let det = m.det();
    if det.is_zero() {
        return precondition("singular matrix");
    }
    let bound = m
        .columns()
        .iter()
        .map(|c| norm_int(c, inst.norm))
        .min_by(|a, b| a.value.cmp(&b.value))
        .expect("n >= 1");
    let adj = adjugate(m);
    let det_sq = Rat::from_integer(&det * &det);
    let widths: Vec<BigInt> = (0..n)
        .map(|i| {
            let row = (0..n).map(|j| adj.get(i, j).abs());
            let dual_sq: BigInt = match inst.norm {
                NormKind::L1 => row.max().map(|v| &v * &v).expect("n >= 1"),
                NormKind::L2 => row.map(|v| &v * &v).sum(),
                NormKind::Linf => {
                    let s: BigInt = row.sum();
                    &s * &s
                }
            };
            floor_sqrt(&(bound.squared() * Rat::from_integer(dual_sq) / &det_sq))
        })
        .collect();
    let total = widths.iter().fold(BigInt::one(), |acc, w| acc * (w * 2u32 + 1u32));
    if total > BigInt::from(limits.max_points) {
        return Err(Error::LimitExceeded(format!("coefficient box holds {total} points")));
    }
    let mut q: IntVector = widths.iter().map(|w| -w).collect();
    let mut best: Option<SvpSolution> = None;
    loop {
        if q.iter().any(|c| !c.is_zero()) {
            let v = m.mul_vec(&q);
            let nv = norm_int(&v, inst.norm);
            let cq = canonical_sign(&q);
            let better = match &best {
                None => true,
                Some(b) => nv.value < b.norm.value || (nv.value == b.norm.value && cq < b.q),
            };
            if better {
                best = Some(SvpSolution { q: cq, norm: nv });
            }
        }
        // odometer step
        let mut k = 0;
        loop {
            if k == n {
                return best.ok_or_else(|| Error::Invariant("empty coefficient box".into()));
            }
            if q[k] < widths[k] {
                q[k] += 1u32;
                break;
            }
            q[k] = -widths[k].clone();
            k += 1;
        }
    }
}

fn residue_precondition(sys: &ResidueSystem) -> Result<()> {
    if sys.denominator().is_one() {
        return precondition("x is integral, so every residual vanishes");
    }
    Ok(())
}

/// Exact minimizer of `|{q x}|` over `q` not divisible by `lcd(x)`; ties go
/// to the least `q` in `[1, d-1]`.
pub fn brute_sap(inst: &SapInstance, limits: &Limits) -> Result<ScalarSolution> {
    limits.check_dim(inst.x.len())?;
    let sys = ResidueSystem::new(&inst.x, inst.norm);
    residue_precondition(&sys)?;
    let top = sys.denominator() - 1u32;
    let (q, v) = sys.min_over(&top, limits)?;
    Ok(ScalarSolution { q, norm: sys.unscale(&v) })
}

pub fn sap_minimum(x: &[Rat], kind: NormKind, limits: &Limits) -> Result<NormValue> {
    let inst = SapInstance { gap: crate::exactnum::Surd::integer(1), x: x.to_vec(), norm: kind };
    Ok(brute_sap(&inst, limits)?.norm)
}

/// The range searched by [`brute_gda`]: `floor(min(1, gap) * N)`.
///
/// For gaps of at least 1 this is `[N]`. Smaller gaps shrink it to the output
/// range `[gap * N]`, so the answer is always admissible.
pub fn gda_search_range(inst: &GdaInstance) -> BigInt {
    if inst.gap.cmp_rat(&Rat::one()).is_lt() {
        inst.output_range()
    } else {
        inst.range()
    }
}

/// Exact minimizer of `|{q x}|` over `[floor(min(1, gap) * N)]`; ties go to the least `q`.
pub fn brute_gda(inst: &GdaInstance, limits: &Limits) -> Result<ScalarSolution> {
    limits.check_dim(inst.x.len())?;
    if inst.range() < BigInt::one() {
        return precondition(format!("floor(N) must be at least 1, N = {}", inst.bound));
    }
    let top = gda_search_range(inst);
    if top < BigInt::one() {
        return precondition(format!("floor(gap * N) must be at least 1, gap = {}, N = {}", inst.gap, inst.bound));
    }
    let sys = ResidueSystem::new(&inst.x, inst.norm);
    let (q, v) = sys.min_over(&top, limits)?;
    Ok(ScalarSolution { q, norm: sys.unscale(&v) })
}

/// Minimum of `|{q x}|` over `q` in `[range]`.
pub fn gda_minimum(x: &[Rat], kind: NormKind, range: &BigInt, limits: &Limits) -> Result<NormValue> {
    limits.check_dim(x.len())?;
    if range < &BigInt::one() {
        return precondition("empty range");
    }
    let sys = ResidueSystem::new(x, kind);
    let (_, v) = sys.min_over(range, limits)?;
    Ok(sys.unscale(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Surd};
    use crate::problems::instance::gap;
    use proptest::prelude::*;

    fn svp(rows: &[&[i64]], kind: NormKind) -> SvpInstance {
        SvpInstance::new(gap(1, 1), IntMatrix::from_i64(rows).unwrap(), kind).unwrap()
    }

    fn ints(v: &[i64]) -> IntVector {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn svp_examples() {
        let lim = Limits::default();
        let s = brute_svp(&svp(&[&[1, 0], &[0, 5]], NormKind::Linf), &lim).unwrap();
        assert_eq!((s.q, s.norm.value), (ints(&[1, 0]), rat(1, 1)));
        let s = brute_svp(&svp(&[&[2, 0], &[0, 3]], NormKind::L2), &lim).unwrap();
        assert_eq!((s.q, s.norm.value), (ints(&[1, 0]), rat(4, 1)));
        let s = brute_svp(&svp(&[&[2, 1], &[0, 2]], NormKind::Linf), &lim).unwrap();
        assert_eq!(s.norm.value, rat(2, 1));
        assert_eq!(box_svp(&svp(&[&[2, 1], &[0, 2]], NormKind::Linf), &lim).unwrap(), s);
    }

    #[test]
    fn svp_tie_break_is_lexicographic() {
        // every unit vector is shortest; (0, 1) precedes (1, 0)
        let s = brute_svp(&svp(&[&[1, 0], &[0, 1]], NormKind::L1), &Limits::default()).unwrap();
        assert_eq!(s.q, ints(&[0, 1]));
    }

    #[test]
    fn svp_dimension_limit() {
        let lim = Limits { max_dim: 1, ..Limits::default() };
        assert!(matches!(brute_svp(&svp(&[&[1, 0], &[0, 1]], NormKind::L1), &lim), Err(Error::LimitExceeded(_))));
    }

    fn sap(x: &[(i64, i64)], kind: NormKind) -> SapInstance {
        SapInstance::new(gap(1, 1), x.iter().map(|&(a, b)| rat(a, b)).collect(), kind).unwrap()
    }

    #[test]
    fn sap_examples() {
        let lim = Limits::default();
        let s = brute_sap(&sap(&[(1, 3), (1, 3)], NormKind::Linf), &lim).unwrap();
        assert_eq!((s.q, s.norm.value), (BigInt::from(1), rat(1, 3)));
        for kind in NormKind::ALL {
            let s = brute_sap(&sap(&[(1, 2)], kind), &lim).unwrap();
            assert_eq!(s.q, BigInt::from(1));
        }
        let s = brute_sap(&sap(&[(1, 3), (2, 3)], NormKind::Linf), &lim).unwrap();
        assert_eq!((s.q, s.norm.value), (BigInt::from(1), rat(1, 3)));
        assert!(matches!(brute_sap(&sap(&[(2, 1)], NormKind::L1), &lim), Err(Error::Precondition(_))));
    }

    fn gda(x: &[(i64, i64)], n: i64, kind: NormKind) -> GdaInstance {
        GdaInstance::new(gap(1, 1), Surd::integer(n), x.iter().map(|&(a, b)| rat(a, b)).collect(), kind).unwrap()
    }

    #[test]
    fn gda_examples() {
        let lim = Limits::default();
        let s = brute_gda(&gda(&[(1, 4), (3, 4)], 2, NormKind::Linf), &lim).unwrap();
        assert_eq!((s.q, s.norm.value), (BigInt::from(1), rat(1, 4)));
        let s = brute_gda(&gda(&[(1, 2), (1, 2)], 1, NormKind::L2), &lim).unwrap();
        assert_eq!(s.q, BigInt::from(1));
        // every q in [4] leaves a coordinate at distance 2/5
        let s = brute_gda(&gda(&[(1, 5), (2, 5)], 4, NormKind::Linf), &lim).unwrap();
        assert_eq!(s.norm.value, rat(2, 5));
        assert_eq!(s.q, BigInt::from(1));
        // [N] reaches the denominator
        let s = brute_gda(&gda(&[(1, 3)], 5, NormKind::L1), &lim).unwrap();
        assert_eq!((s.q, s.norm.is_zero()), (BigInt::from(3), true));
    }

    #[test]
    fn gda_small_gap_stays_in_range() {
        let mut inst = gda(&[(1, 4), (1, 4)], 4, NormKind::L2);
        inst.gap = Surd::new(Rat::one(), BigInt::from(2)).recip();
        inst.bound = Surd::new(rat(4, 1), BigInt::from(2));
        // gap * N = 4 = lcd(x), so the zero residual at q = 4 is admissible
        let s = brute_gda(&inst, &Limits::default()).unwrap();
        assert_eq!(s.q, BigInt::from(4));
        inst.bound = Surd::new(rat(3, 1), BigInt::from(2));
        let s = brute_gda(&inst, &Limits::default()).unwrap();
        assert!(s.q <= BigInt::from(3));
        assert!(!s.norm.is_zero());
    }

    #[test]
    fn gda_rejects_empty_range() {
        let mut inst = gda(&[(1, 4)], 1, NormKind::L1);
        inst.bound = Surd::rational(rat(1, 2));
        assert!(matches!(brute_gda(&inst, &Limits::default()), Err(Error::Precondition(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn enumeration_matches_box(entries in prop::collection::vec(-9i64..=9, 9), k in 0usize..3) {
            let rows: Vec<&[i64]> = entries.chunks(3).collect();
            let m = IntMatrix::from_i64(&rows).unwrap();
            prop_assume!(!m.det().is_zero());
            let inst = SvpInstance::new(gap(1, 1), m, NormKind::ALL[k]).unwrap();
            let lim = Limits::default();
            // ill-conditioned matrices give boxes too large to scan
            let boxed = box_svp(&inst, &lim);
            prop_assume!(!matches!(boxed, Err(Error::LimitExceeded(_))));
            prop_assert_eq!(brute_svp(&inst, &lim).unwrap(), boxed.unwrap());
        }
    }
}
