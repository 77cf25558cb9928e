use rayon::prelude::*;
use serde_json::{json, Value};
use simapprox::problems::{
    brute_gda, brute_sap, brute_svp, gen_instance, oracle_by_name, verify_gda, verify_sap, verify_svp, GenSpec,
    Response, Verdict,
};
use simapprox::{reduce as run_reduction, replay, Certificate, Error, Instance, Limits, ReduceOptions};

use crate::io::{write_json, Batch};
use crate::{Common, GenArgs, ReduceArgs, SolveArgs, VerifyArgs};

/// Maps `f` over the batch on `jobs` threads. Results keep input order and
/// the first failing item (by position) decides the error.
fn par_map<T: Send>(
    jobs: u64,
    items: &[Value],
    f: impl Fn(&Value) -> anyhow::Result<T> + Sync,
) -> anyhow::Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build()?;
    let results: Vec<_> = pool.install(|| items.par_iter().map(&f).collect());
    results.into_iter().enumerate().map(|(i, r)| r.map_err(|e| e.context(format!("item {i}")))).collect()
}

fn load_instance(v: &Value, common: &Common) -> simapprox::Result<Instance> {
    let inst = Instance::from_json(v)?;
    Ok(match common.norm {
        Some(k) => inst.with_norm(k),
        None => inst,
    })
}

pub fn gen(args: &GenArgs) -> anyhow::Result<bool> {
    let spec = GenSpec::new(args.problem, args.dim, args.bound, args.norm).with_alpha(args.alpha.clone());
    let out = match args.count {
        None => gen_instance(&spec, args.seed)?.to_json(),
        Some(k) => {
            let all = (0..k).map(|i| gen_instance(&spec, args.seed.wrapping_add(i)).map(|x| x.to_json()));
            Value::Array(all.collect::<simapprox::Result<_>>()?)
        }
    };
    write_json(args.output.as_ref(), &out)?;
    Ok(true)
}

fn solve_one(inst: &Instance, limits: &Limits) -> simapprox::Result<Value> {
    let (q, norm) = match inst {
        Instance::Svp(i) => {
            let s = brute_svp(i, limits)?;
            (Response::Vector(s.q), s.norm)
        }
        Instance::Sap(i) => {
            let s = brute_sap(i, limits)?;
            (Response::Scalar(s.q), s.norm)
        }
        Instance::Gda(i) => {
            let s = brute_gda(i, limits)?;
            (Response::Scalar(s.q), s.norm)
        }
    };
    Ok(json!({
        "problem": inst.kind().as_str(),
        "norm": norm.kind.as_str(),
        "q": q,
        "value": norm.to_string(),
    }))
}

pub fn solve(args: &SolveArgs) -> anyhow::Result<bool> {
    let batch = Batch::load(&args.input)?;
    let limits = args.common.limits();
    let out = par_map(args.common.jobs, &batch.items, |v| {
        let inst = load_instance(v, &args.common)?;
        Ok(solve_one(&inst, &limits)?)
    })?;
    write_json(args.common.output.as_ref(), &batch.shape(out))?;
    Ok(true)
}

fn check(inst: &Instance, answer: &Response, limits: &Limits) -> simapprox::Result<Verdict> {
    match (inst, answer) {
        (Instance::Svp(i), Response::Vector(q)) => verify_svp(i, q, limits),
        (Instance::Sap(i), Response::Scalar(q)) => verify_sap(i, q, limits),
        (Instance::Gda(i), Response::Scalar(q)) => verify_gda(i, q, limits),
        _ => Err(Error::Parse(format!("answer shape does not fit a {} instance", inst.kind().as_str()))),
    }
}

pub fn reduce(args: &ReduceArgs) -> anyhow::Result<bool> {
    let batch = Batch::load(&args.input)?;
    let limits = args.common.limits();
    let oracle = oracle_by_name(&args.oracle, limits)?;
    let options = ReduceOptions { alpha_prime: args.alpha_prime.clone() };
    let runs = par_map(args.common.jobs, &batch.items, |v| {
        let inst = load_instance(v, &args.common)?;
        inst.validate_input()?;
        let cert = run_reduction(args.route, &inst, oracle.as_ref(), &options)?;
        let verdict = match check(&inst, &cert.output, &limits) {
            Ok(v) => Some(v),
            Err(Error::LimitExceeded(_)) => None,
            Err(e) => return Err(e.into()),
        };
        Ok((cert, verdict))
    })?;
    let mut ok = true;
    for (i, (cert, verdict)) in runs.iter().enumerate() {
        let status = match verdict {
            Some(v) => {
                ok &= v.ok();
                v.to_string()
            }
            None => "output not verified: exact minimum is beyond the limits".to_string(),
        };
        let tag = if batch.is_array { format!("[{i}] ") } else { String::new() };
        eprintln!("{tag}{} ({} oracle calls): {status}", cert.route, cert.trace.len());
    }
    let out: Vec<Value> = runs.iter().map(|(c, _)| c.to_json()).collect();
    write_json(args.common.output.as_ref(), &batch.shape(out))?;
    Ok(ok)
}

/// Accepts the output of `solve`, a certificate, or a bare answer.
fn answer_of(v: &Value) -> simapprox::Result<Response> {
    let raw = v.get("q").or_else(|| v.get("output")).unwrap_or(v);
    serde_json::from_value(raw.clone()).map_err(|e| Error::Parse(format!("bad answer {raw}: {e}")))
}

fn report(verdicts: &[(Verdict, &str)], common: &Common, is_array: bool) -> anyhow::Result<bool> {
    for (i, (v, prefix)) in verdicts.iter().enumerate() {
        if is_array {
            println!("[{i}] {prefix}{v}");
        } else {
            println!("{prefix}{v}");
        }
    }
    if let Some(path) = &common.output {
        let all: Vec<Value> = verdicts.iter().map(|(v, _)| v.to_json()).collect();
        let out = if is_array { Value::Array(all) } else { all.into_iter().next().unwrap_or(Value::Null) };
        write_json(Some(path), &out)?;
    }
    Ok(verdicts.iter().all(|(v, _)| v.ok()))
}

pub fn verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let limits = args.common.limits();
    if let Some(path) = &args.certificate {
        if args.common.norm.is_some() {
            return Err(Error::Parse("--norm does not apply to certificates".into()).into());
        }
        let batch = Batch::load(path)?;
        let verdicts = par_map(args.common.jobs, &batch.items, |v| {
            let cert = Certificate::from_json(v)?;
            replay(&cert)?;
            Ok((check(&cert.input, &cert.output, &limits)?, "replay ok, "))
        })?;
        return report(&verdicts, &args.common, batch.is_array);
    }
    let (Some(input), Some(solution)) = (&args.input, &args.solution) else {
        return Err(Error::Parse("verify needs --input with --solution, or --certificate".into()).into());
    };
    let instances = Batch::load(input)?;
    let answers = Batch::load_like(solution, &instances)?;
    if instances.items.len() != answers.items.len() {
        let msg = format!("{} instances but {} solutions", instances.items.len(), answers.items.len());
        return Err(Error::Parse(msg).into());
    }
    let pairs: Vec<Value> =
        instances.items.iter().zip(&answers.items).map(|(i, a)| json!([i, a])).collect();
    let verdicts = par_map(args.common.jobs, &pairs, |pair| {
        let inst = load_instance(&pair[0], &args.common)?;
        Ok((check(&inst, &answer_of(&pair[1])?, &limits)?, ""))
    })?;
    report(&verdicts, &args.common, instances.is_array)
}
