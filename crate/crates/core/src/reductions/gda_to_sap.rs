use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invariant, Result};
use crate::exactnum::{frac, lcd, minimal_residue, BigInt, Rat, Surd};
use crate::problems::{GdaInstance, Oracle, SapInstance};
use crate::ser;

/// The SAP calls use the gap `alpha / (153/50)`, i.e. `alpha / 3.06`.
pub fn sap_gap_divisor() -> Rat {
    Rat::new(BigInt::from(153), BigInt::from(50))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenominatorStep {
    #[serde(serialize_with = "ser::big")]
    pub d: BigInt,
    #[serde(serialize_with = "ser::rat_vec")]
    pub x: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GdaToSapRun {
    #[serde(serialize_with = "ser::big")]
    pub q: BigInt,
    /// `(d_i, x_i)` starting from `(lcd(x), x)`.
    pub steps: Vec<DenominatorStep>,
    pub sap_calls: usize,
    /// `ceil(log2(d_0 / (alpha N)))`.
    pub call_bound: u32,
}

/// Least `k >= 0` with `d0 <= 2^k * alpha * N`.
pub fn halving_bound(d0: &BigInt, alpha_n: &Surd) -> u32 {
    let d0 = Rat::from_integer(d0.clone());
    let mut scaled = alpha_n.clone();
    let mut k = 0;
    while scaled.cmp_rat(&d0).is_lt() {
        scaled = scaled.scale(&Rat::from_integer(BigInt::from(2)));
        k += 1;
    }
    k
}

/// Answers GDA with repeated SAP calls, halving the working denominator each
/// time until it fits in `[alpha N]`.
pub fn gda_to_sap(inst: &GdaInstance, oracle: &dyn Oracle) -> Result<GdaToSapRun> {
    let alpha_n = inst.gap.mul(&inst.bound);
    let sap_gap = inst.gap.scale(&sap_gap_divisor().recip());
    let mut d = lcd(&inst.x);
    let mut x = inst.x.clone();
    let call_bound = halving_bound(&d, &alpha_n);
    let mut steps = vec![DenominatorStep { d: d.clone(), x: x.clone() }];
    let mut calls = 0;
    while alpha_n.cmp_rat(&Rat::from_integer(d.clone())).is_lt() {
        let q = oracle.sap(&SapInstance::new(sap_gap.clone(), x.clone(), inst.norm)?)?;
        calls += 1;
        let next = minimal_residue(&q, &d)?.abs();
        invariant(!next.is_zero(), || format!("SAP answer {q} is a multiple of the denominator {d}"))?;
        invariant(&next * 2u32 <= d, || format!("denominator {next} is more than half of {d}"))?;
        let dr = Rat::from_integer(next.clone());
        x = x.iter().map(|v| v - frac(&(v * &dr)) / &dr).collect();
        invariant(x.iter().all(|v| (v * &dr).is_integer()), || format!("{next} * x is not integral"))?;
        d = next;
        steps.push(DenominatorStep { d: d.clone(), x: x.clone() });
    }
    invariant(d >= BigInt::one(), || "denominator dropped below 1".into())?;
    invariant(calls <= call_bound as usize, || format!("{calls} SAP calls exceed the bound {call_bound}"))?;
    Ok(GdaToSapRun { q: d, steps, sap_calls: calls, call_bound })
}
