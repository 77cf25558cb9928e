use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::Result;
use crate::exactnum::{frac, BigInt, Rat};
use crate::linalg::{norm, norm_int, NormKind, NormValue};
use crate::problems::instance::{Gap, GdaInstance, SapInstance, SvpInstance};
use crate::problems::search::Limits;
use crate::problems::solve::{gda_minimum, sap_minimum, svp_minimum};
use crate::ser::surd_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Failure {
    ZeroOutput,
    Range,
    Gap,
    Dimension,
}

impl Failure {
    pub fn as_str(&self) -> &'static str {
        match self {
            Failure::ZeroOutput => "zero output",
            Failure::Range => "range",
            Failure::Gap => "gap",
            Failure::Dimension => "dimension",
        }
    }
}

/// Outcome of checking a solution against its problem's contract.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub failure: Option<Failure>,
    pub gap: Gap,
    /// Norm of the submitted solution.
    pub achieved: Option<NormValue>,
    /// The minimum it is measured against.
    pub reference: Option<NormValue>,
}

impl Verdict {
    fn fail(failure: Failure, gap: &Gap) -> Self {
        Verdict { failure: Some(failure), gap: gap.clone(), achieved: None, reference: None }
    }

    fn compare(gap: &Gap, achieved: NormValue, reference: NormValue) -> Self {
        let ok = achieved.within(gap, &reference);
        Verdict { failure: (!ok).then_some(Failure::Gap), gap: gap.clone(), achieved: Some(achieved), reference: Some(reference) }
    }

    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    /// `achieved / reference`, squared for every norm so that it compares
    /// directly with `gap^2`. `None` when the reference is zero.
    pub fn ratio_squared(&self) -> Option<Rat> {
        let (a, r) = (self.achieved.as_ref()?, self.reference.as_ref()?);
        (!r.is_zero()).then(|| a.squared() / r.squared())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "reason": self.failure.map(|f| f.as_str()),
            "alpha": surd_json(&self.gap),
            "norm": self.achieved.as_ref().map(|v| v.kind.as_str()),
            "achieved": self.achieved.as_ref().map(|v| v.to_string()),
            "reference": self.reference.as_ref().map(|v| v.to_string()),
            "ratio_squared": self.ratio_squared().map(|r| r.to_string()),
            "alpha_squared": self.gap.squared().to_string(),
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failure {
            None => write!(f, "pass")?,
            Some(reason) => write!(f, "fail ({})", reason.as_str())?,
        }
        if let (Some(a), Some(r)) = (&self.achieved, &self.reference) {
            write!(f, ": norm {a} against minimum {r}")?;
            match self.ratio_squared() {
                Some(q) => {
                    let rel = if q <= self.gap.squared() { "<=" } else { ">" };
                    write!(f, ", ratio^2 = {q} {rel} alpha^2 = {}", self.gap.squared())?;
                }
                None => write!(f, ", minimum is zero")?,
            }
        }
        Ok(())
    }
}

pub fn verify_svp(inst: &SvpInstance, q: &[BigInt], limits: &Limits) -> Result<Verdict> {
    if q.len() != inst.dim() {
        return Ok(Verdict::fail(Failure::Dimension, &inst.gap));
    }
    let v = inst.matrix.mul_vec(q);
    if v.iter().all(Zero::is_zero) {
        return Ok(Verdict::fail(Failure::ZeroOutput, &inst.gap));
    }
    let reference = svp_minimum(&inst.matrix, inst.norm, limits)?;
    Ok(Verdict::compare(&inst.gap, norm_int(&v, inst.norm), reference))
}

fn residual_norm(x: &[Rat], q: &BigInt, kind: NormKind) -> NormValue {
    let q = Rat::from_integer(q.clone());
    let r: Vec<Rat> = x.iter().map(|v| frac(&(v * &q))).collect();
    norm(&r, kind)
}

pub fn verify_sap(inst: &SapInstance, q: &BigInt, limits: &Limits) -> Result<Verdict> {
    let achieved = residual_norm(&inst.x, q, inst.norm);
    if achieved.is_zero() {
        return Ok(Verdict::fail(Failure::ZeroOutput, &inst.gap));
    }
    let reference = sap_minimum(&inst.x, inst.norm, limits)?;
    Ok(Verdict::compare(&inst.gap, achieved, reference))
}

/// Checks `q` in `[floor(gap * N)]` and `|{q x}| <= gap * min over [floor(N)]`.
pub fn verify_gda(inst: &GdaInstance, q: &BigInt, limits: &Limits) -> Result<Verdict> {
    if q < &BigInt::one() || q > &inst.output_range() {
        return Ok(Verdict::fail(Failure::Range, &inst.gap));
    }
    let achieved = residual_norm(&inst.x, q, inst.norm);
    let reference = gda_minimum(&inst.x, inst.norm, &inst.range(), limits)?;
    Ok(Verdict::compare(&inst.gap, achieved, reference))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Surd};
    use crate::linalg::IntMatrix;
    use crate::problems::instance::gap;

    #[test]
    fn svp_verdicts() {
        let inst = SvpInstance::new(gap(1, 1), IntMatrix::from_i64(&[&[1, 0], &[0, 5]]).unwrap(), NormKind::Linf).unwrap();
        let lim = Limits::default();
        let one = BigInt::one();
        let zero = BigInt::zero();
        assert!(verify_svp(&inst, &[one.clone(), zero.clone()], &lim).unwrap().ok());
        let v = verify_svp(&inst, &[zero.clone(), zero.clone()], &lim).unwrap();
        assert_eq!(v.failure, Some(Failure::ZeroOutput));
        let v = verify_svp(&inst, &[zero, one], &lim).unwrap();
        assert_eq!(v.failure, Some(Failure::Gap));
        assert_eq!(v.ratio_squared(), Some(rat(25, 1)));
    }

    #[test]
    fn l2_gap_with_radical_compares_squares() {
        // minimum 1, the vector (1, 1) has norm sqrt 2
        let m = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        let mut inst = SvpInstance::new(Surd::sqrt(&BigInt::from(2)), m, NormKind::L2).unwrap();
        let q = [BigInt::one(), BigInt::one()];
        assert!(verify_svp(&inst, &q, &Limits::default()).unwrap().ok());
        inst.gap = Surd::rational(rat(141, 100));
        assert!(!verify_svp(&inst, &q, &Limits::default()).unwrap().ok());
    }

    #[test]
    fn gda_range_failure() {
        let inst = GdaInstance::new(gap(1, 1), Surd::integer(2), vec![rat(1, 4), rat(3, 4)], NormKind::Linf).unwrap();
        let lim = Limits::default();
        assert_eq!(verify_gda(&inst, &BigInt::from(3), &lim).unwrap().failure, Some(Failure::Range));
        assert_eq!(verify_gda(&inst, &BigInt::zero(), &lim).unwrap().failure, Some(Failure::Range));
        assert!(verify_gda(&inst, &BigInt::one(), &lim).unwrap().ok());
    }

    #[test]
    fn sap_zero_output() {
        let inst = SapInstance::new(gap(2, 1), vec![rat(1, 3), rat(2, 3)], NormKind::L1).unwrap();
        let v = verify_sap(&inst, &BigInt::from(6), &Limits::default()).unwrap();
        assert_eq!(v.failure, Some(Failure::ZeroOutput));
        assert!(verify_sap(&inst, &BigInt::from(2), &Limits::default()).unwrap().ok());
    }
}
