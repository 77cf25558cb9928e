use std::cell::{Cell, RefCell};

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{BigInt, Rat, Surd};
use crate::linalg::{IntVector, NormValue};
use crate::problems::instance::{GdaInstance, Instance, ProblemKind, SapInstance, SvpInstance};
use crate::problems::search::{Ball, Limits, ResidueSystem, SvpSearch};
use crate::problems::solve::{brute_gda, brute_sap, brute_svp};
use crate::ser::json_int;

/// A solver for the three problems.
pub trait Oracle {
    fn name(&self) -> String;
    fn svp(&self, inst: &SvpInstance) -> Result<IntVector>;
    fn sap(&self, inst: &SapInstance) -> Result<BigInt>;
    fn gda(&self, inst: &GdaInstance) -> Result<BigInt>;
}

/// Returns exact minimizers.
#[derive(Clone, Debug, Default)]
pub struct BruteOracle {
    pub limits: Limits,
}

impl BruteOracle {
    pub fn new(limits: Limits) -> Self {
        BruteOracle { limits }
    }
}

impl Oracle for BruteOracle {
    fn name(&self) -> String {
        "brute".into()
    }

    fn svp(&self, inst: &SvpInstance) -> Result<IntVector> {
        Ok(brute_svp(inst, &self.limits)?.q)
    }

    fn sap(&self, inst: &SapInstance) -> Result<BigInt> {
        Ok(brute_sap(inst, &self.limits)?.q)
    }

    fn gda(&self, inst: &GdaInstance) -> Result<BigInt> {
        Ok(brute_gda(inst, &self.limits)?.q)
    }
}

/// Returns the admissible answer of largest norm: among all outputs within
/// `max(gap, 1)` of the minimum, one of maximal norm (least `q` on ties).
///
/// For GDA the candidates range over `[floor(gap * N)]` and the minimum is
/// the one [`brute_gda`] attains.
#[derive(Clone, Debug, Default)]
pub struct WorstAdmissibleOracle {
    pub limits: Limits,
}

impl WorstAdmissibleOracle {
    pub fn new(limits: Limits) -> Self {
        WorstAdmissibleOracle { limits }
    }
}

fn widened(gap: &Surd) -> Surd {
    if gap.cmp_rat(&Rat::one()).is_lt() {
        Surd::integer(1)
    } else {
        gap.clone()
    }
}

fn worst_residue(sys: &ResidueSystem, top: &BigInt, ball: &Ball, limits: &Limits) -> Result<Option<BigInt>> {
    let mut best: Option<(BigInt, NormValue)> = None;
    sys.visit(top, Some(ball), limits, |q, v| {
        if best.as_ref().is_none_or(|(_, b)| v.value > b.value) {
            best = Some((q.clone(), v.clone()));
        }
    })?;
    Ok(best.map(|(q, _)| q))
}

impl Oracle for WorstAdmissibleOracle {
    fn name(&self) -> String {
        "worst".into()
    }

    fn svp(&self, inst: &SvpInstance) -> Result<IntVector> {
        self.limits.check_dim(inst.dim())?;
        let search = SvpSearch::new(&inst.matrix, inst.norm)?;
        let (_, min) = search.shortest(&self.limits)?;
        let mut best: Option<(IntVector, NormValue)> = None;
        search.visit(&Ball::new(widened(&inst.gap), min), &self.limits, |q, _, v| {
            if best.as_ref().is_none_or(|(_, b)| v.value > b.value) {
                best = Some((q.clone(), v.clone()));
            }
        })?;
        best.map(|(q, _)| q).ok_or_else(|| Error::Invariant("no admissible vector".into()))
    }

    fn sap(&self, inst: &SapInstance) -> Result<BigInt> {
        let exact = brute_sap(inst, &self.limits)?;
        let sys = ResidueSystem::new(&inst.x, inst.norm);
        let d = sys.denominator().clone();
        let min = sys.scaled_norm(&exact.q);
        let ball = Ball::new(widened(&inst.gap), min);
        worst_residue(&sys, &(d - 1u32), &ball, &self.limits)?
            .ok_or_else(|| Error::Invariant("no admissible multiplier".into()))
    }

    fn gda(&self, inst: &GdaInstance) -> Result<BigInt> {
        let exact = brute_gda(inst, &self.limits)?;
        let sys = ResidueSystem::new(&inst.x, inst.norm);
        let min = sys.scaled_norm(&exact.q);
        if min.is_zero() {
            return Ok(exact.q);
        }
        let top = inst.output_range();
        let ball = Ball::new(widened(&inst.gap), min);
        Ok(worst_residue(&sys, &top, &ball, &self.limits)?.unwrap_or(exact.q))
    }
}

/// An oracle answer as recorded in a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Response {
    Vector(IntVector),
    Scalar(BigInt),
}

impl Serialize for Response {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Response::Scalar(v) => s.serialize_str(&v.to_string()),
            Response::Vector(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Response {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let parsed = match &v {
            serde_json::Value::Array(items) => items.iter().map(json_int).collect::<Result<_>>().map(Response::Vector),
            other => json_int(other).map(Response::Scalar),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub call: ProblemKind,
    /// SHA-256 of the instance's JSON encoding.
    pub digest: String,
    pub response: Response,
}

/// Oracle calls in the order they were made.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OracleTrace {
    entries: Vec<TraceEntry>,
}

impl OracleTrace {
    pub fn push(&mut self, entry: TraceEntry) {
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, call: ProblemKind) -> usize {
        self.entries.iter().filter(|e| e.call == call).count()
    }
}

/// Forwards to another oracle and records every call.
pub struct Recorder<'a> {
    inner: &'a dyn Oracle,
    trace: RefCell<OracleTrace>,
}

impl<'a> Recorder<'a> {
    pub fn new(inner: &'a dyn Oracle) -> Self {
        Recorder { inner, trace: RefCell::new(OracleTrace::default()) }
    }

    pub fn trace(&self) -> OracleTrace {
        self.trace.borrow().clone()
    }

    fn record(&self, inst: Instance, response: Response) {
        let entry = TraceEntry { call: inst.kind(), digest: inst.digest(), response };
        self.trace.borrow_mut().push(entry);
    }
}

impl Oracle for Recorder<'_> {
    fn name(&self) -> String {
        self.inner.name()
    }

    fn svp(&self, inst: &SvpInstance) -> Result<IntVector> {
        let q = self.inner.svp(inst)?;
        self.record(inst.clone().into(), Response::Vector(q.clone()));
        Ok(q)
    }

    fn sap(&self, inst: &SapInstance) -> Result<BigInt> {
        let q = self.inner.sap(inst)?;
        self.record(inst.clone().into(), Response::Scalar(q.clone()));
        Ok(q)
    }

    fn gda(&self, inst: &GdaInstance) -> Result<BigInt> {
        let q = self.inner.gda(inst)?;
        self.record(inst.clone().into(), Response::Scalar(q.clone()));
        Ok(q)
    }
}

/// Answers calls from a recorded trace, checking that each call matches.
pub struct ReplayOracle {
    name: String,
    trace: OracleTrace,
    next: Cell<usize>,
}

impl ReplayOracle {
    pub fn new(name: impl Into<String>, trace: OracleTrace) -> Self {
        ReplayOracle { name: name.into(), trace, next: Cell::new(0) }
    }

    /// True once every recorded answer has been consumed.
    pub fn exhausted(&self) -> bool {
        self.next.get() == self.trace.len()
    }

    fn answer(&self, inst: Instance) -> Result<Response> {
        let k = self.next.get();
        let entry = self
            .trace
            .entries()
            .get(k)
            .ok_or_else(|| Error::Replay(format!("call {} has no recorded answer", k + 1)))?;
        if entry.call != inst.kind() {
            return Err(Error::Replay(format!(
                "call {} is {} but {} was recorded",
                k + 1,
                inst.kind().as_str(),
                entry.call.as_str()
            )));
        }
        if entry.digest != inst.digest() {
            return Err(Error::Replay(format!("call {} was made on a different instance", k + 1)));
        }
        self.next.set(k + 1);
        Ok(entry.response.clone())
    }
}

impl Oracle for ReplayOracle {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn svp(&self, inst: &SvpInstance) -> Result<IntVector> {
        match self.answer(inst.clone().into())? {
            Response::Vector(q) => Ok(q),
            Response::Scalar(_) => Err(Error::Replay("expected a vector answer".into())),
        }
    }

    fn sap(&self, inst: &SapInstance) -> Result<BigInt> {
        match self.answer(inst.clone().into())? {
            Response::Scalar(q) => Ok(q),
            Response::Vector(_) => Err(Error::Replay("expected a scalar answer".into())),
        }
    }

    fn gda(&self, inst: &GdaInstance) -> Result<BigInt> {
        match self.answer(inst.clone().into())? {
            Response::Scalar(q) => Ok(q),
            Response::Vector(_) => Err(Error::Replay("expected a scalar answer".into())),
        }
    }
}

/// Looks up an oracle by its command-line name.
pub fn oracle_by_name(name: &str, limits: Limits) -> Result<Box<dyn Oracle + Send + Sync>> {
    match name {
        "brute" => Ok(Box::new(BruteOracle::new(limits))),
        "worst" | "worst-admissible" => Ok(Box::new(WorstAdmissibleOracle::new(limits))),
        other => Err(Error::Parse(format!("unknown oracle {other:?}; expected brute or worst"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::linalg::{IntMatrix, NormKind};
    use crate::problems::instance::gap;
    use crate::problems::verify::{verify_gda, verify_sap, verify_svp};

    #[test]
    fn worst_saturates_the_gap() {
        let lim = Limits::default();
        let worst = WorstAdmissibleOracle::new(lim);
        let m = IntMatrix::from_i64(&[&[1, 0], &[0, 2]]).unwrap();
        let inst = SvpInstance::new(gap(2, 1), m, NormKind::Linf).unwrap();
        let q = worst.svp(&inst).unwrap();
        let v = verify_svp(&inst, &q, &lim).unwrap();
        assert!(v.ok());
        assert_eq!(v.ratio_squared(), Some(rat(4, 1)));

        let sap = SapInstance::new(gap(3, 1), vec![rat(1, 10), rat(3, 10)], NormKind::L1).unwrap();
        let q = worst.sap(&sap).unwrap();
        assert!(verify_sap(&sap, &q, &lim).unwrap().ok());
        assert_ne!(q, BruteOracle::new(lim).sap(&sap).unwrap());

        let gda = GdaInstance::new(gap(2, 1), Surd::integer(3), vec![rat(1, 7), rat(2, 7)], NormKind::L2).unwrap();
        let q = worst.gda(&gda).unwrap();
        assert!(verify_gda(&gda, &q, &lim).unwrap().ok());
    }

    #[test]
    fn record_then_replay() {
        let brute = BruteOracle::default();
        let rec = Recorder::new(&brute);
        let sap = SapInstance::new(gap(1, 1), vec![rat(1, 3), rat(2, 3)], NormKind::Linf).unwrap();
        let m = IntMatrix::from_i64(&[&[1, 0], &[2, 3]]).unwrap();
        let svp = SvpInstance::new(gap(1, 1), m, NormKind::Linf).unwrap();
        let a = rec.sap(&sap).unwrap();
        let b = rec.svp(&svp).unwrap();
        let trace = rec.trace();
        assert_eq!(trace.len(), 2);
        let text = serde_json::to_string(&trace).unwrap();
        let back: OracleTrace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, trace);

        let replay = ReplayOracle::new("brute", back.clone());
        assert_eq!(replay.sap(&sap).unwrap(), a);
        assert_eq!(replay.svp(&svp).unwrap(), b);
        assert!(replay.exhausted());
        assert!(matches!(replay.sap(&sap), Err(Error::Replay(_))));

        let replay = ReplayOracle::new("brute", back);
        assert!(matches!(replay.svp(&svp), Err(Error::Replay(_))));
        let other = SapInstance::new(gap(1, 1), vec![rat(1, 5)], NormKind::Linf).unwrap();
        let replay = ReplayOracle::new("brute", rec.trace());
        assert!(matches!(replay.sap(&other), Err(Error::Replay(_))));
    }
}
