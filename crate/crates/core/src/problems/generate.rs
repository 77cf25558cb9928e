use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, Result};
use crate::exactnum::{lcd, BigInt, Rat, Surd};
use crate::linalg::{IntMatrix, NormKind};
use crate::problems::instance::{GdaInstance, Instance, ProblemKind, SapInstance, SvpInstance};

/// Parameters for [`gen_instance`].
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub kind: ProblemKind,
    pub n: usize,
    /// Largest entry magnitude (SVP) or largest denominator (SAP, GDA).
    pub bound: u64,
    pub norm: NormKind,
    pub alpha: Rat,
}

impl GenSpec {
    pub fn new(kind: ProblemKind, n: usize, bound: u64, norm: NormKind) -> Self {
        GenSpec { kind, n, bound, norm, alpha: Rat::from_integer(BigInt::from(1)) }
    }

    pub fn with_alpha(mut self, alpha: Rat) -> Self {
        self.alpha = alpha;
        self
    }
}

/// Deterministic random instance for `seed`.
///
/// SVP matrices have entries in `[-bound, bound]` and are redrawn until
/// nonsingular. SAP and GDA vectors share a denominator drawn from
/// `[2, bound]` and are redrawn while integral; GDA's `N` is drawn from
/// `[1, lcd(x)]`.
pub fn gen_instance(spec: &GenSpec, seed: u64) -> Result<Instance> {
    if spec.n == 0 {
        return precondition("dimension must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap = Surd::rational(spec.alpha.clone());
    match spec.kind {
        ProblemKind::Svp => {
            if spec.bound == 0 {
                return precondition("entry bound must be at least 1");
            }
            let m = spec.bound as i64;
            loop {
                let rows: Vec<Vec<BigInt>> =
                    (0..spec.n).map(|_| (0..spec.n).map(|_| BigInt::from(rng.gen_range(-m..=m))).collect()).collect();
                let matrix = IntMatrix::new(rows)?;
                if !matrix.det().is_zero() {
                    return Ok(Instance::Svp(SvpInstance::new(gap, matrix, spec.norm)?));
                }
            }
        }
        ProblemKind::Sap | ProblemKind::Gda => {
            if spec.bound < 2 {
                return precondition("denominator bound must be at least 2");
            }
            let x = loop {
                let d = rng.gen_range(2..=spec.bound as i64);
                let x: Vec<Rat> =
                    (0..spec.n).map(|_| Rat::new(BigInt::from(rng.gen_range(0..d)), BigInt::from(d))).collect();
                if lcd(&x) > BigInt::from(1) {
                    break x;
                }
            };
            if spec.kind == ProblemKind::Sap {
                return Ok(Instance::Sap(SapInstance::new(gap, x, spec.norm)?));
            }
            let d: u64 = lcd(&x).try_into().expect("bounded by the denominator range");
            let bound = Surd::integer(rng.gen_range(1..=d) as i64);
            Ok(Instance::Gda(GdaInstance::new(gap, bound, x, spec.norm)?))
        }
    }
}
