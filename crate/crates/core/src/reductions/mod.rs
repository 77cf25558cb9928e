//! The reductions between SVP, SAP and GDA, and replayable certificates.
//!
//! | route        | oracle calls                              |
//! |--------------|-------------------------------------------|
//! | GDA to SAP   | at most `ceil(log2(d / (alpha N)))`, gap `alpha / 3.06` |
//! | SAP to SVP   | one, same gap                             |
//! | GDA to SVP   | the two above composed                    |
//! | SVP to SAP   | one, same gap                             |
//! | SVP to GDA   | one, gap `alpha / n^(1/p)`                |
//! | SAP to GDA   | SAP to SVP, then SVP to GDA               |

pub mod certificate;
pub mod compose;
pub mod gda_to_sap;
pub mod sap_to_svp;
pub mod svp_to_sap;

pub use certificate::{reduce, replay, Certificate, ReduceOptions, Route};
pub use compose::{gda_to_svp, sap_to_gda, GdaToSvpRun, SapToGdaRun, SapViaSvp, SvpViaGda};
pub use gda_to_sap::{gda_to_sap, halving_bound, sap_gap_divisor, DenominatorStep, GdaToSapRun};
pub use sap_to_svp::{build_svp_instance, complete_to_unimodular, find_coprime_shift, sap_to_svp, SapToSvpRun};
pub use svp_to_sap::{
    prepare, relaxed_substitution_exponent, svp_reduce, svp_to_gda, svp_to_sap, Prepared, Query, SvpToSapRun,
    SvpToSapTrace, Target,
};
