//! The three problems: instances, exact solvers, verifiers, oracles and a
//! seeded generator.
//!
//! * SVP: given a nonsingular `M`, find `q != 0` with `|Mq| <= alpha * min`.
//! * SAP: given `x`, find `q` with `0 < |{qx}| <= alpha * min`.
//! * GDA: given `x` and `N`, find `q` in `[alpha N]` with
//!   `|{qx}| <= alpha * min over [N]`.

pub mod generate;
pub mod instance;
pub mod oracle;
pub mod search;
pub mod solve;
pub mod verify;

pub use generate::{gen_instance, GenSpec};
pub use instance::{gap, Gap, GdaInstance, Instance, ProblemKind, SapInstance, SvpInstance};
pub use oracle::{
    oracle_by_name, BruteOracle, Oracle, OracleTrace, Recorder, ReplayOracle, Response, TraceEntry,
    WorstAdmissibleOracle,
};
pub use search::Limits;
pub use solve::{
    box_svp, brute_gda, brute_sap, brute_svp, gda_minimum, gda_search_range, sap_minimum, svp_minimum, ScalarSolution,
    SvpSolution,
};
pub use verify::{verify_gda, verify_sap, verify_svp, Failure, Verdict};
