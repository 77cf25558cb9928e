use std::cell::RefCell;

use serde::Serialize;

use crate::error::{precondition, Result};
use crate::exactnum::BigInt;
use crate::linalg::IntVector;
use crate::problems::{GdaInstance, Oracle, SapInstance, SvpInstance};
use crate::reductions::gda_to_sap::{gda_to_sap, GdaToSapRun};
use crate::reductions::sap_to_svp::{sap_to_svp, SapToSvpRun};
use crate::reductions::svp_to_sap::{svp_to_gda, SvpToSapRun};

/// Answers SAP queries by running the SAP to SVP reduction on `inner`.
pub struct SapViaSvp<'a> {
    inner: &'a dyn Oracle,
    runs: RefCell<Vec<SapToSvpRun>>,
}

impl<'a> SapViaSvp<'a> {
    pub fn new(inner: &'a dyn Oracle) -> Self {
        SapViaSvp { inner, runs: RefCell::new(Vec::new()) }
    }

    pub fn into_runs(self) -> Vec<SapToSvpRun> {
        self.runs.into_inner()
    }
}

impl Oracle for SapViaSvp<'_> {
    fn name(&self) -> String {
        format!("sap-via-svp({})", self.inner.name())
    }

    fn svp(&self, _: &SvpInstance) -> Result<IntVector> {
        precondition("this adapter only answers SAP")
    }

    fn sap(&self, inst: &SapInstance) -> Result<BigInt> {
        let run = sap_to_svp(inst, self.inner)?;
        let q = run.q.clone();
        self.runs.borrow_mut().push(run);
        Ok(q)
    }

    fn gda(&self, _: &GdaInstance) -> Result<BigInt> {
        precondition("this adapter only answers SAP")
    }
}

/// Answers SVP queries by running the SVP to GDA reduction on `inner`.
pub struct SvpViaGda<'a> {
    inner: &'a dyn Oracle,
    runs: RefCell<Vec<SvpToSapRun>>,
}

impl<'a> SvpViaGda<'a> {
    pub fn new(inner: &'a dyn Oracle) -> Self {
        SvpViaGda { inner, runs: RefCell::new(Vec::new()) }
    }

    pub fn into_runs(self) -> Vec<SvpToSapRun> {
        self.runs.into_inner()
    }
}

impl Oracle for SvpViaGda<'_> {
    fn name(&self) -> String {
        format!("svp-via-gda({})", self.inner.name())
    }

    fn svp(&self, inst: &SvpInstance) -> Result<IntVector> {
        let run = svp_to_gda(inst, self.inner)?;
        let q = run.q.clone();
        self.runs.borrow_mut().push(run);
        Ok(q)
    }

    fn sap(&self, _: &SapInstance) -> Result<BigInt> {
        precondition("this adapter only answers SVP")
    }

    fn gda(&self, _: &GdaInstance) -> Result<BigInt> {
        precondition("this adapter only answers SVP")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GdaToSvpRun {
    pub outer: GdaToSapRun,
    pub inner: Vec<SapToSvpRun>,
}

impl GdaToSvpRun {
    pub fn q(&self) -> &BigInt {
        &self.outer.q
    }

    pub fn svp_calls(&self) -> usize {
        self.inner.iter().filter(|r| !r.direct).count()
    }
}

/// GDA through SVP: the halving loop, with each SAP query at gap
/// `alpha / 3.06` answered through a constructed SVP instance.
pub fn gda_to_svp(inst: &GdaInstance, oracle: &dyn Oracle) -> Result<GdaToSvpRun> {
    let adapter = SapViaSvp::new(oracle);
    let outer = gda_to_sap(inst, &adapter)?;
    Ok(GdaToSvpRun { outer, inner: adapter.into_runs() })
}

#[derive(Clone, Debug, Serialize)]
pub struct SapToGdaRun {
    pub outer: SapToSvpRun,
    pub inner: SvpToSapRun,
}

impl SapToGdaRun {
    pub fn q(&self) -> &BigInt {
        &self.outer.q
    }
}

/// SAP through GDA: the constructed SVP instance goes to the GDA path of
/// the SVP reduction, so the GDA oracle sees gap `alpha / n^(1/p)`.
pub fn sap_to_gda(inst: &SapInstance, oracle: &dyn Oracle) -> Result<SapToGdaRun> {
    if inst.x.len() < 2 {
        return precondition("SAP through GDA needs n >= 2");
    }
    let adapter = SvpViaGda::new(oracle);
    let outer = sap_to_svp(inst, &adapter)?;
    let mut runs = adapter.into_runs();
    let inner = runs.pop().expect("n >= 2 makes exactly one SVP call");
    Ok(SapToGdaRun { outer, inner })
}
