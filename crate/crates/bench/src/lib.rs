//! Seeded inputs shared by the benchmarks.

use simapprox::problems::{gen_instance, GenSpec};
use simapprox::{GdaInstance, Instance, NormKind, ProblemKind, Rat, SapInstance, SvpInstance};

pub fn svp(n: usize, bound: u64, norm: NormKind, seed: u64) -> SvpInstance {
    match gen_instance(&GenSpec::new(ProblemKind::Svp, n, bound, norm), seed) {
        Ok(Instance::Svp(i)) => i,
        other => panic!("expected an SVP instance, got {other:?}"),
    }
}

pub fn sap(n: usize, denom: u64, alpha: Rat, seed: u64) -> SapInstance {
    let spec = GenSpec::new(ProblemKind::Sap, n, denom, NormKind::Linf).with_alpha(alpha);
    match gen_instance(&spec, seed) {
        Ok(Instance::Sap(i)) => i,
        other => panic!("expected a SAP instance, got {other:?}"),
    }
}

/// A GDA instance with `N` at a quarter of the common denominator, so the
/// halving loop runs.
pub fn gda(n: usize, denom: u64, alpha: Rat, seed: u64) -> GdaInstance {
    let spec = GenSpec::new(ProblemKind::Gda, n, denom, NormKind::Linf).with_alpha(alpha);
    match gen_instance(&spec, seed) {
        Ok(Instance::Gda(i)) => {
            let n = simapprox::Surd::rational(Rat::new(i.lcd(), 4.into()));
            GdaInstance::new(i.gap.clone(), n, i.x.clone(), i.norm).expect("N is positive")
        }
        other => panic!("expected a GDA instance, got {other:?}"),
    }
}
