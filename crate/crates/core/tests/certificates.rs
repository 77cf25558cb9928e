use std::str::FromStr;

use serde_json::json;
use simapprox::exactnum::Surd;
use simapprox::problems::{gen_instance, BruteOracle, GenSpec, WorstAdmissibleOracle};
use simapprox::reductions::{reduce, replay, Certificate, ReduceOptions, Route};
use simapprox::{Error, Instance, NormKind, Oracle, ProblemKind, Rat, SvpInstance};

fn instance_for(route: Route, seed: u64) -> Instance {
    let n = 2 + (seed % 2) as usize;
    let spec = match route.input() {
        ProblemKind::Svp => GenSpec::new(ProblemKind::Svp, n, 7, NormKind::ALL[(seed % 3) as usize]),
        ProblemKind::Sap => GenSpec::new(ProblemKind::Sap, n, 30, NormKind::Linf),
        ProblemKind::Gda => GenSpec::new(ProblemKind::Gda, n, 500, NormKind::Linf)
            .with_alpha(Rat::new(4.into(), 1.into())),
    };
    gen_instance(&spec, seed).unwrap()
}

#[test]
fn every_route_replays_from_json() {
    let brute = BruteOracle::default();
    let worst = WorstAdmissibleOracle::default();
    let oracles: [&dyn Oracle; 2] = [&brute, &worst];
    for route in Route::ALL {
        for seed in 0..6 {
            let inst = instance_for(route, seed);
            let cert = reduce(route, &inst, oracles[seed as usize % 2], &ReduceOptions::default()).unwrap();
            assert!(cert.trace.len() <= 1 || matches!(route, Route::GdaToSap | Route::GdaToSvp));
            let text = serde_json::to_string_pretty(&cert.to_json()).unwrap();
            let back = Certificate::from_str(&text).unwrap();
            assert_eq!(back, cert, "{route} seed {seed}");
            replay(&back).unwrap();
        }
    }
}

#[test]
fn replay_detects_a_changed_input() {
    let inst = instance_for(Route::SvpToSap, 1);
    let cert = reduce(Route::SvpToSap, &inst, &BruteOracle::default(), &ReduceOptions::default()).unwrap();
    let mut v = cert.to_json();
    v["input"]["alpha"] = json!("2");
    let forged = Certificate::from_json(&v).unwrap();
    assert!(matches!(replay(&forged), Err(Error::Replay(_))));
}

#[test]
fn replay_detects_missing_answers() {
    let inst = instance_for(Route::SapToSvp, 2);
    let mut cert = reduce(Route::SapToSvp, &inst, &BruteOracle::default(), &ReduceOptions::default()).unwrap();
    let mut v = cert.to_json();
    v["trace"] = json!([]);
    cert = Certificate::from_json(&v).unwrap();
    assert!(matches!(replay(&cert), Err(Error::Replay(_))));
}

#[test]
fn relaxed_certificate_records_the_oracle_gap() {
    let m = simapprox::IntMatrix::from_i64(&[&[1, 1], &[2, 1]]).unwrap();
    let inst: Instance = SvpInstance::new(Surd::integer(2), m, NormKind::Linf).unwrap().into();
    let opts = ReduceOptions { alpha_prime: Some(Rat::from_integer(1.into())) };
    let cert = reduce(Route::SvpToSap, &inst, &BruteOracle::default(), &opts).unwrap();
    assert_eq!(cert.intermediates["j"], 3);
    assert_eq!(cert.intermediates["relaxed_gap"], "1");
    assert_eq!(cert.intermediates["oracle_gap"], "1");
    let back = Certificate::from_str(&cert.to_json().to_string()).unwrap();
    assert_eq!(back.options, opts);
    replay(&back).unwrap();
}

#[test]
fn malformed_certificates_are_parse_errors() {
    assert!(matches!(Certificate::from_str("{"), Err(Error::Parse(_))));
    assert!(matches!(Certificate::from_str("{}"), Err(Error::Parse(_))));
    let inst = instance_for(Route::GdaToSap, 0);
    let cert = reduce(Route::GdaToSap, &inst, &BruteOracle::default(), &ReduceOptions::default()).unwrap();
    let mut v = cert.to_json();
    v["route"] = json!("gda-to-cvp");
    assert!(matches!(Certificate::from_json(&v), Err(Error::Parse(_))));
}
