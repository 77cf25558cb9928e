//! Exact reductions between the short vector problem (SVP), simultaneous
//! approximation (SAP) and good Diophantine approximation (GDA).

pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod problems;
pub mod reductions;
mod ser;

pub use error::{Error, Result};
pub use exactnum::{BigInt, Rat, Surd};
pub use linalg::{IntMatrix, IntVector, NormKind, NormValue};
pub use problems::{
    GdaInstance, Instance, Limits, Oracle, OracleTrace, ProblemKind, SapInstance, SvpInstance,
};
pub use reductions::{reduce, replay, Certificate, ReduceOptions, Route};
