use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use gl_decode_core::gf2::{BitVector, ToeplitzMatrix};
use gl_decode_core::inverter::{
    pairwise_independence_check, run_trial, InverterConfig, KSample, TrialTranscript,
};
use gl_decode_core::kit::{
    battery, extract_stream, extractor_distance, extractor_distance_bound, floyd_cycle,
    BatteryVerdict, Predicate, PrgState, RunsVerdict,
};
use gl_decode_core::oracle::{guesser_rate, pad, KeyedBijection, RateEstimate};
use gl_decode_core::seed::{aux_stream, stream_rng};
use gl_decode_core::walsh::{fwht, Spectrum};
use gl_decode_core::Error as CoreError;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bitio;
use crate::cli::*;
use crate::instance::{Instance, SourceDesc};
use crate::report::*;
use crate::{AssertionFailed, UsageError};

/// Largest width for which `prg` reports the orbit of its start state.
const CYCLE_REPORT_MAX_N: usize = 20;

/// Largest width for which `extract` computes the exact output distance.
const EXACT_DISTANCE_MAX_N: usize = 16;

pub fn write_output(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn usage_from(e: CoreError) -> anyhow::Error {
    match e {
        CoreError::Parameter(_)
        | CoreError::DimensionTooLarge { .. }
        | CoreError::LengthMismatch { .. }
        | CoreError::InvalidLength(_)
        | CoreError::InvalidBitChar(_)
        | CoreError::NotPowerOfTwo(_)
        | CoreError::NotBijective
        | CoreError::Distribution(_)
        | CoreError::TooFewBits { .. } => UsageError(e.to_string()).into(),
        e => e.into(),
    }
}

fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

fn draw_failure_label(d: &KSample) -> String {
    match d {
        KSample::Drawn { .. } => "none".into(),
        KSample::AllOnes { flips } => format!("all_ones({flips})"),
        KSample::Overflow { l, k } => format!("overflow(l={l},k={k})"),
    }
}

fn record(t: &TrialTranscript) -> TrialRecord {
    TrialRecord {
        trial: t.trial,
        secret: t.secret.to_string(),
        k: t.k,
        l: t.l,
        draw_failure: t.draw_failure.as_ref().map(draw_failure_label),
        queries: t.queries,
        success: t.success,
        hit_index: t.hit_index,
        verified: t.verified,
    }
}

fn write_csv(path: &Path, records: &[TrialRecord]) -> anyhow::Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record([
        "trial",
        "secret",
        "k",
        "l",
        "draw_failure",
        "queries",
        "success",
        "hit_index",
        "verified",
    ])?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.secret.clone(),
            opt(r.k.map(|v| v.to_string())),
            opt(r.l.map(|v| v.to_string())),
            opt(r.draw_failure.clone()),
            r.queries.to_string(),
            r.success.to_string(),
            opt(r.hit_index.map(|v| v.to_string())),
            opt(r.verified.map(|v| v.to_string())),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn invert(args: &InvertArgs, seed: u64, jobs: usize) -> anyhow::Result<()> {
    let start = Instant::now();
    let inst = Instance::load(&args.instance)?;
    let f = inst.function()?;
    let spec = inst.guesser()?;
    if args.trials == 0 {
        bail!(UsageError("--trials must be at least 1".into()));
    }
    let mut config = match args.k {
        Some(k) => InverterConfig::fixed(inst.n, k),
        None => InverterConfig::randomized(inst.n),
    };
    config.k_max = args.k_max;
    config.verify = args.verify;
    config.validate().map_err(usage_from)?;

    let transcripts = pool(jobs)?.install(|| {
        (0..args.trials)
            .into_par_iter()
            .map(|t| run_trial(&config, &spec, &f, seed, t))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let successes = transcripts.iter().filter(|t| t.success).count() as u64;
    let total_queries: u64 = transcripts.iter().map(|t| t.queries).sum();
    let rate = RateEstimate::from_successes(successes, args.trials);
    let guesser_rate = if args.reference_samples > 0 {
        let padded = pad(&f);
        let mut rng = stream_rng(seed, aux_stream(0));
        Some(guesser_rate(&spec, &padded, args.reference_samples, &mut rng)?.into())
    } else {
        None
    };
    let bound = args.assert_bound.map(|value| Bound {
        value,
        met: rate.estimate >= value,
    });
    let aggregates = InvertAggregates {
        trials: args.trials,
        successes,
        success_rate: rate.estimate,
        ci95: [rate.ci_low, rate.ci_high],
        mean_queries: total_queries as f64 / args.trials as f64,
        total_queries,
        draw_failures: transcripts
            .iter()
            .filter(|t| t.draw_failure.is_some())
            .count() as u64,
        reference: Reference {
            nominal_c_squared: spec.nominal_correlation().powi(2),
            guesser_rate,
        },
        bound: bound.clone(),
    };
    let records: Vec<TrialRecord> = transcripts.iter().map(record).collect();
    if let Some(path) = &args.csv {
        write_csv(path, &records)?;
    }

    let mut report = Report::new(
        "invert",
        seed,
        json!({
            "trials": args.trials,
            "k": args.k,
            "randomized_k": args.randomized_k,
            "k_max": args.k_max,
            "verify": args.verify,
            "reference_samples": args.reference_samples,
            "assert_bound": args.assert_bound,
        }),
    );
    report.instance = Some(serde_json::to_value(&inst)?);
    report.result = serde_json::to_value(&aggregates)?;
    report.trials = args.transcripts.then_some(records);
    let report = report.finish(start.elapsed());
    write_output(args.out.as_deref(), report.to_json().as_bytes())?;

    if let Some(b) = bound.filter(|b| !b.met) {
        bail!(AssertionFailed(format!(
            "success rate {} below bound {}",
            rate.estimate, b.value
        )));
    }
    Ok(())
}

pub fn rate(args: &RateArgs, seed: u64) -> anyhow::Result<()> {
    let start = Instant::now();
    let inst = Instance::load(&args.instance)?;
    let f = pad(inst.function()?);
    let spec = inst.guesser()?;
    if args.samples == 0 {
        bail!(UsageError("--samples must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, aux_stream(0));
    let est: GuesserRateSummary = guesser_rate(&spec, &f, args.samples, &mut rng)?.into();
    let mut report = Report::new("rate", seed, json!({ "samples": args.samples }));
    report.instance = Some(serde_json::to_value(&inst)?);
    report.result = json!({
        "nominal_c_squared": spec.nominal_correlation().powi(2),
        "guesser_rate": est,
    });
    let report = report.finish(start.elapsed());
    write_output(args.out.as_deref(), report.to_json().as_bytes())
}

pub fn fwht_file(args: &FwhtArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let values = bitio::parse_integers(&text)?;
    let g = Spectrum::new(values).map_err(usage_from)?;
    let h = fwht(&g).map_err(usage_from)?;
    write_output(
        args.out.as_deref(),
        bitio::format_integers(h.values()).as_bytes(),
    )
}

pub fn extract(args: &ExtractArgs, seed: u64) -> anyhow::Result<()> {
    let start = Instant::now();
    let desc = SourceDesc::load(&args.source)?;
    let source = desc.build()?;
    let n = source.n();
    if args.i == 0 || args.i > n {
        bail!(UsageError(
            "--i must be between 1 and the source width".into()
        ));
    }
    let t = match &args.toeplitz {
        Some(s) => {
            let seed_bits: BitVector = s.parse().map_err(usage_from)?;
            ToeplitzMatrix::new(n, args.i, seed_bits).map_err(usage_from)?
        }
        None => ToeplitzMatrix::random(n, args.i, &mut stream_rng(seed, aux_stream(0)))?,
    };
    let mut rng = stream_rng(seed, aux_stream(1));
    let bits = extract_stream(&source, &t, args.count, &mut rng).map_err(usage_from)?;
    write_output(args.out.as_deref(), &bitio::encode_bits(&bits, args.binary))?;

    if let Some(path) = &args.report {
        let exact = if n <= EXACT_DISTANCE_MAX_N && source.table().is_some() {
            Some(extractor_distance(&source, &t)?)
        } else {
            None
        };
        let mut report = Report::new(
            "extract",
            seed,
            json!({ "i": args.i, "count": args.count, "binary": args.binary, "toeplitz": args.toeplitz }),
        );
        report.instance = Some(serde_json::to_value(&desc)?);
        report.result = json!({
            "toeplitz_seed": t.seed().to_string(),
            "toeplitz_rank": t.rank()?,
            "max_prob": source.max_prob(),
            "bits": bits.len(),
            "ones": bits.weight(),
            "exact_distance": exact,
            "distance_bound": extractor_distance_bound(args.i),
        });
        let report = report.finish(start.elapsed());
        write_output(Some(path), report.to_json().as_bytes())?;
    }
    Ok(())
}

fn battery_json(v: &BatteryVerdict) -> Value {
    let verdict = match v.runs.verdict {
        RunsVerdict::Pass => "pass",
        RunsVerdict::Fail => "fail",
        RunsVerdict::Gated => "gated",
    };
    json!({
        "bits": v.monobit.bits,
        "monobit": {
            "sum": v.monobit.sum,
            "statistic": v.monobit.statistic,
            "pass": v.monobit.pass,
        },
        "runs": {
            "runs": v.runs.runs,
            "expected": v.runs.expected,
            "statistic": v.runs.statistic,
            "verdict": verdict,
        },
        "pass": v.pass,
    })
}

pub fn prg(args: &PrgArgs, seed: u64) -> anyhow::Result<()> {
    let start = Instant::now();
    let key = args.key.unwrap_or(seed);
    let f = KeyedBijection::new(args.n, key).map_err(usage_from)?;
    let mut rng = stream_rng(seed, aux_stream(0));
    let x0 = BitVector::random(args.n, &mut rng)?;
    let predicate = match args.i {
        Some(i) => {
            if i == 0 || i > args.n {
                bail!(UsageError("--i must be between 1 and n".into()));
            }
            Predicate::Toeplitz(ToeplitzMatrix::random(args.n, i, &mut rng)?)
        }
        None => Predicate::InnerProduct(BitVector::random(args.n, &mut rng)?),
    };
    let predicate_seed = match &predicate {
        Predicate::InnerProduct(r) => r.to_string(),
        Predicate::Toeplitz(t) => t.seed().to_string(),
    };
    let mut state = PrgState::new(f.clone(), x0.clone(), predicate).map_err(usage_from)?;
    let bits = state.generate(args.bits).map_err(usage_from)?;
    write_output(args.out.as_deref(), &bitio::encode_bits(&bits, args.binary))?;

    if let Some(path) = &args.report {
        let cycle = if args.n <= CYCLE_REPORT_MAX_N {
            floyd_cycle(&f, &x0, 1 << (args.n + 1))?
                .map(|c| json!({ "pre_period": c.pre_period, "period": c.period }))
        } else {
            None
        };
        let tests = battery(&bits).ok().map(|v| battery_json(&v));
        let mut report = Report::new(
            "prg",
            seed,
            json!({ "n": args.n, "bits": args.bits, "i": args.i, "key": key, "binary": args.binary }),
        );
        report.result = json!({
            "start": x0.to_string(),
            "predicate_seed": predicate_seed,
            "ones": bits.weight(),
            "cycle": cycle,
            "battery": tests,
        });
        let report = report.finish(start.elapsed());
        write_output(Some(path), report.to_json().as_bytes())?;
    }
    Ok(())
}

pub fn test_bits(args: &TestBitsArgs, seed: u64) -> anyhow::Result<()> {
    let start = Instant::now();
    let bits = if args.binary {
        let bytes = std::fs::read(&args.file)
            .with_context(|| format!("reading {}", args.file.display()))?;
        bitio::unpack_bits(&bytes)?
    } else {
        let text = std::fs::read_to_string(&args.file)
            .with_context(|| format!("reading {}", args.file.display()))?;
        bitio::parse_bit_text(&text)?
    };
    let verdict = battery(&bits).map_err(usage_from)?;
    let mut report = Report::new("test-bits", seed, json!({ "binary": args.binary }));
    report.result = battery_json(&verdict);
    let report = report.finish(start.elapsed());
    write_output(args.out.as_deref(), report.to_json().as_bytes())?;
    if args.assert_pass && !verdict.pass {
        bail!(AssertionFailed("bit stream failed the battery".into()));
    }
    Ok(())
}

pub fn pairwise(args: &PairwiseArgs, seed: u64) -> anyhow::Result<()> {
    let start = Instant::now();
    let r = pairwise_independence_check(args.n, args.k).map_err(usage_from)?;
    let mut report = Report::new("pairwise-check", seed, json!({ "n": args.n, "k": args.k }));
    report.result = json!({
        "matrices": r.matrices,
        "pairs": r.pairs,
        "expected_per_cell": r.expected_per_cell,
        "max_deviation": r.max_deviation,
        "marginals_uniform": r.marginals_uniform,
        "uniform": r.uniform,
    });
    let report = report.finish(start.elapsed());
    write_output(args.out.as_deref(), report.to_json().as_bytes())
}
