use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{precondition, Error, Result};
use crate::exactnum::Rat;
use crate::problems::{Instance, Oracle, OracleTrace, ProblemKind, Recorder, ReplayOracle, Response};
use crate::reductions::compose::{gda_to_svp, sap_to_gda};
use crate::reductions::gda_to_sap::gda_to_sap;
use crate::reductions::sap_to_svp::sap_to_svp;
use crate::reductions::svp_to_sap::{svp_reduce, Target};
use crate::ser::json_rat;

/// The six reductions, named `<input>-to-<oracle>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    GdaToSap,
    SapToSvp,
    GdaToSvp,
    SvpToSap,
    SvpToGda,
    SapToGda,
}

impl Route {
    pub const ALL: [Route; 6] =
        [Route::GdaToSap, Route::SapToSvp, Route::GdaToSvp, Route::SvpToSap, Route::SvpToGda, Route::SapToGda];

    pub fn as_str(&self) -> &'static str {
        match self {
            Route::GdaToSap => "gda-to-sap",
            Route::SapToSvp => "sap-to-svp",
            Route::GdaToSvp => "gda-to-svp",
            Route::SvpToSap => "svp-to-sap",
            Route::SvpToGda => "svp-to-gda",
            Route::SapToGda => "sap-to-gda",
        }
    }

    pub fn parse(s: &str) -> Result<Route> {
        Route::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown route {s:?}")))
    }

    /// The problem the route solves.
    pub fn input(&self) -> ProblemKind {
        match self {
            Route::GdaToSap | Route::GdaToSvp => ProblemKind::Gda,
            Route::SapToSvp | Route::SapToGda => ProblemKind::Sap,
            Route::SvpToSap | Route::SvpToGda => ProblemKind::Svp,
        }
    }

    /// The problem the oracle is asked.
    pub fn oracle(&self) -> ProblemKind {
        match self {
            Route::GdaToSap | Route::SvpToSap => ProblemKind::Sap,
            Route::SapToSvp | Route::GdaToSvp => ProblemKind::Svp,
            Route::SvpToGda | Route::SapToGda => ProblemKind::Gda,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Ask the oracle for this smaller gap; only the SVP routes accept it.
    pub alpha_prime: Option<Rat>,
}

/// A reduction run with everything needed to replay it.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub route: Route,
    pub oracle: String,
    pub input: Instance,
    pub options: ReduceOptions,
    pub output: Response,
    pub intermediates: Value,
    pub trace: OracleTrace,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "route": self.route,
            "oracle": self.oracle,
            "input": self.input.to_json(),
            "alpha_prime": self.options.alpha_prime.as_ref().map(|a| a.to_string()),
            "output": self.output,
            "intermediates": self.intermediates,
            "trace": self.trace,
        })
    }

    pub fn from_json(v: &Value) -> Result<Certificate> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("certificate is missing {k:?}")));
        let parse = |e: serde_json::Error| Error::Parse(e.to_string());
        let alpha_prime = match v.get("alpha_prime") {
            None | Some(Value::Null) => None,
            Some(a) => Some(json_rat(a)?),
        };
        Ok(Certificate {
            route: Route::deserialize(field("route")?).map_err(parse)?,
            oracle: String::deserialize(field("oracle")?).map_err(parse)?,
            input: Instance::from_json(field("input")?)?,
            options: ReduceOptions { alpha_prime },
            output: Response::deserialize(field("output")?).map_err(parse)?,
            intermediates: field("intermediates")?.clone(),
            trace: OracleTrace::deserialize(field("trace")?).map_err(parse)?,
        })
    }
}

impl std::str::FromStr for Certificate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Certificate> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Certificate::from_json(&v)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("intermediates serialize to JSON")
}

fn run(route: Route, input: &Instance, oracle: &dyn Oracle, options: &ReduceOptions) -> Result<(Response, Value)> {
    if input.kind() != route.input() {
        return precondition(format!("route {route} expects a {} instance, got {}", route.input().as_str(), input.kind().as_str()));
    }
    let relaxed = options.alpha_prime.as_ref();
    if relaxed.is_some() && route.input() != ProblemKind::Svp {
        return precondition(format!("route {route} has no relaxed-gap mode"));
    }
    Ok(match (route, input) {
        (Route::GdaToSap, Instance::Gda(i)) => {
            let r = gda_to_sap(i, oracle)?;
            (Response::Scalar(r.q.clone()), to_value(&r))
        }
        (Route::GdaToSvp, Instance::Gda(i)) => {
            let r = gda_to_svp(i, oracle)?;
            (Response::Scalar(r.q().clone()), to_value(&r))
        }
        (Route::SapToSvp, Instance::Sap(i)) => {
            let r = sap_to_svp(i, oracle)?;
            (Response::Scalar(r.q.clone()), to_value(&r))
        }
        (Route::SapToGda, Instance::Sap(i)) => {
            let r = sap_to_gda(i, oracle)?;
            (Response::Scalar(r.q().clone()), to_value(&r))
        }
        (Route::SvpToSap | Route::SvpToGda, Instance::Svp(i)) => {
            let target = if route == Route::SvpToSap { Target::Sap } else { Target::Gda };
            let r = svp_reduce(i, oracle, target, relaxed)?;
            (Response::Vector(r.q), to_value(&r.trace))
        }
        _ => unreachable!("kind checked above"),
    })
}

/// Runs `route` on `input`, recording every oracle call.
pub fn reduce(route: Route, input: &Instance, oracle: &dyn Oracle, options: &ReduceOptions) -> Result<Certificate> {
    let recorder = Recorder::new(oracle);
    let (output, intermediates) = run(route, input, &recorder, options)?;
    Ok(Certificate {
        route,
        oracle: oracle.name(),
        input: input.clone(),
        options: options.clone(),
        output,
        intermediates,
        trace: recorder.trace(),
    })
}

/// Re-runs the reduction against the recorded answers and checks that the
/// output and every intermediate come out identical.
pub fn replay(cert: &Certificate) -> Result<()> {
    let oracle = ReplayOracle::new(cert.oracle.clone(), cert.trace.clone());
    let (output, intermediates) = run(cert.route, &cert.input, &oracle, &cert.options)?;
    if !oracle.exhausted() {
        return Err(Error::Replay("recorded oracle answers were left unused".into()));
    }
    if output != cert.output {
        return Err(Error::Replay("output differs from the certificate".into()));
    }
    if intermediates != cert.intermediates {
        return Err(Error::Replay("intermediates differ from the certificate".into()));
    }
    Ok(())
}
