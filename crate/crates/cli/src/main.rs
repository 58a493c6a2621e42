//! `cusumlab` — scenario sweeps, lemma verifications, curve emission, and
//! positivity certificates, with an append-only JSONL result store.
//!
//! Exit codes: 0 when no record carries a `fail` verdict, 1 otherwise,
//! 2 for usage errors, 3 for i/o failures.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use cusumlab::aplus::{contributing_subscripts, enumerate_scenarios, rhs_constant, AplusInstance};
use cusumlab::certify::{
    certify_positivity, full_superscript_scenario, numeric_sweep, CertificateStatus, SweepVerdict,
};
use cusumlab::lemmas::{
    check_stochastic_dominance, decompositions_for_all_h, lemma41_average,
    lemma43_bounds_for_all_j, single_index_signs,
};
use cusumlab::muirhead::{Configuration, CusumSubscript, CusumTable, OddsVector, Scenario};
use cusumlab::record::{
    sort_records, to_jsonl, ScenarioMeta, Verdict, VerificationRecord, SCHEMA_VERSION,
};
use cusumlab::rng::{draw_configuration, draw_odds, SplitMix64};
use cusumlab::scalar::{format_rational, int, ExactScalar};
use cusumlab::simplex::{emit_figure1, scan_a, GridSpec};
use num_traits::Zero;

#[derive(Parser)]
#[command(name = "cusumlab", version, about = "Exact cusum-positivity verification sweeps")]
struct Cli {
    /// Append records to this JSONL store instead of printing them.
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    /// Base seed for every derived random stream.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Record real elapsed milliseconds (off by default so identical runs
    /// produce identical bytes).
    #[arg(long, global = true)]
    timings: bool,
    /// Worker threads (also settable via CUSUMLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-verify a stated result.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Engine-vs-direct-enumeration equality on every scenario.
    Oracle {
        #[arg(long = "c-max", default_value_t = 5)]
        c_max: usize,
        #[arg(long = "w-samples", default_value_t = 5)]
        w_samples: usize,
    },
    /// Emit the boundary-curve CSV for the published instance.
    Figure1 {
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Scan the weighted-average curve and report its shape.
    #[command(name = "scan-A", alias = "scan-a")]
    ScanA {
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Positivity certificate for one instance, with numeric fallback.
    Certify {
        #[arg(long)]
        c: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Cusum subscript, comma-separated (e.g. 1,3).
        #[arg(long, value_delimiter = ',')]
        h: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Full positive-cusum enumeration through the fast engine.
    Sweep {
        #[arg(long = "c-max", default_value_t = 6)]
        c_max: usize,
        #[arg(long = "w-samples", default_value_t = 5)]
        w_samples: usize,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Positive-cusum sweep at the limit configuration (the engine route).
    Lemma21 {
        #[arg(long = "c-max", default_value_t = 6)]
        c_max: usize,
        #[arg(long = "w-samples", default_value_t = 5)]
        w_samples: usize,
    },
    /// Equal-odds averages, full-box equalities, and stochastic dominance.
    Lemma41 {
        #[arg(long = "c-max", default_value_t = 6)]
        c_max: usize,
    },
    /// Single-index sign patterns over seeded draws.
    Lemma42 {
        #[arg(long = "c-max", default_value_t = 6)]
        c_max: usize,
        #[arg(long = "w-samples", default_value_t = 200)]
        w_samples: usize,
    },
    /// Average-ratio bounds and the decomposition identity.
    Lemma43 {
        #[arg(long = "c-max", default_value_t = 6)]
        c_max: usize,
        #[arg(long = "w-samples", default_value_t = 200)]
        w_samples: usize,
    },
    /// Sampled positivity at arbitrary configurations plus stage-one paths.
    Theorem31 {
        #[arg(long = "c-max", default_value_t = 5)]
        c_max: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, default_value_t = 48)]
    c: usize,
    #[arg(long, default_value_t = 25)]
    b: usize,
    #[arg(long, default_value_t = 22)]
    k: usize,
    #[arg(long, default_value_t = 47)]
    h2: usize,
    #[arg(long = "omega-max", default_value_t = 1e6)]
    omega_max: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
}

struct Emitter {
    command: String,
    timings: bool,
    started: Instant,
}

impl Emitter {
    fn new(command: &str, timings: bool) -> Self {
        Emitter { command: command.to_string(), timings, started: Instant::now() }
    }

    fn record(
        &self,
        scenario: ScenarioMeta,
        w: Option<&OddsVector<ExactScalar>>,
        quantity: &str,
        value: String,
        verdict: Verdict,
        seed: u64,
    ) -> VerificationRecord {
        VerificationRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            command: self.command.clone(),
            scenario,
            w: w.map(|w| w.entries().iter().map(format_rational).collect()),
            quantity: quantity.to_string(),
            value,
            verdict,
            seed,
            elapsed_ms: if self.timings { self.started.elapsed().as_millis() as u64 } else { 0 },
        }
    }
}

fn pass_fail(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn odds_for(scn: &Scenario, seed: u64, sample: usize) -> (u64, OddsVector<ExactScalar>) {
    let parts = [scn.c as u64, scn.b as u64, scn.k as u64, scn.p as u64, scn.q as u64, sample as u64];
    let mut rng = SplitMix64::derive(seed, &parts);
    let stream_seed = seed
        .wrapping_add(parts.iter().fold(0u64, |a, &p| a.wrapping_mul(31).wrapping_add(p)));
    (stream_seed, draw_odds(&mut rng, scn.c, sample))
}

fn positive_cusum_sweep(command: &str, c_max: usize, w_samples: usize, seed: u64, timings: bool) -> cusumlab::Result<Vec<VerificationRecord>> {
    let emitter = Emitter::new(command, timings);
    let sweeps = enumerate_scenarios(c_max)?;
    let units: Vec<(usize, usize)> = (0..sweeps.len())
        .flat_map(|s| (0..w_samples).map(move |t| (s, t)))
        .collect();
    let nested: Vec<cusumlab::Result<Vec<VerificationRecord>>> = units
        .par_iter()
        .map(|&(s, sample)| {
            let sweep = &sweeps[s];
            let scn = &sweep.scenario;
            let (stream_seed, w) = odds_for(scn, seed, sample);
            let mut engine = AplusInstance::from_scenario(scn, w.clone())?;
            let mut out = Vec::with_capacity(sweep.subscripts.len());
            for h in &sweep.subscripts {
                let value = engine.cusum_at_aplus(h)?;
                let ok = value > ExactScalar::zero();
                out.push(emitter.record(
                    ScenarioMeta::new(scn, h),
                    Some(&w),
                    "cusum_at_aplus",
                    format_rational(&value),
                    pass_fail(ok),
                    stream_seed,
                ));
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for r in nested {
        records.extend(r?);
    }
    Ok(records)
}

fn verify_lemma41(c_max: usize, seed: u64, timings: bool) -> cusumlab::Result<Vec<VerificationRecord>> {
    let emitter = Emitter::new("verify lemma41", timings);
    let mut records = Vec::new();
    for c in 3..=c_max {
        for b in 1..=c - 2 {
            for k in 1..=c - b - 1 {
                for p in 1..=c - k {
                    let q = (b + k + p).saturating_sub(c);
                    let scn = Scenario::representative(c, b, k, p, q)?;
                    let rhs = rhs_constant(c, b, k, p);
                    for h in contributing_subscripts(c - 1, p, c) {
                        let avg = lemma41_average(c, b, k, p, &h)?;
                        records.push(emitter.record(
                            ScenarioMeta::new(&scn, &h),
                            None,
                            "lemma41_average",
                            format_rational(&avg),
                            pass_fail(avg > rhs),
                            seed,
                        ));
                        if k == 1 {
                            let dom = check_stochastic_dominance(&h, b, c, p)?;
                            records.push(emitter.record(
                                ScenarioMeta::new(&scn, &h),
                                None,
                                "stochastic_dominance",
                                format!("strict={}", dom.strict_somewhere),
                                pass_fail(dom.holds && dom.strict_somewhere),
                                seed,
                            ));
                        }
                    }
                    let full = CusumSubscript::new(vec![c; p], c)?;
                    let avg = lemma41_average(c, b, k, p, &full)?;
                    records.push(emitter.record(
                        ScenarioMeta::new(&scn, &full),
                        None,
                        "lemma41_average_full_box",
                        format_rational(&avg),
                        pass_fail(avg == rhs),
                        seed,
                    ));
                }
            }
        }
    }
    Ok(records)
}

fn verify_lemma42(c_max: usize, w_samples: usize, seed: u64, timings: bool) -> cusumlab::Result<Vec<VerificationRecord>> {
    let emitter = Emitter::new("verify lemma42", timings);
    let mut combos = Vec::new();
    for c in 3..=c_max {
        for b in 1..=c - 2 {
            for k in 1..=c - b - 1 {
                for q in 0..=1usize {
                    for sample in 0..w_samples {
                        combos.push((c, b, k, q, sample));
                    }
                }
            }
        }
    }
    let nested: Vec<cusumlab::Result<VerificationRecord>> = combos
        .par_iter()
        .map(|&(c, b, k, q, sample)| {
            let scn = Scenario::representative(c, b, k, 1, q)?;
            let (stream_seed, w) = odds_for(&scn, seed, sample);
            let pattern = single_index_signs(c, b, k, q, &w)?;
            // The tightest margin on either side of b.
            let mut margin: Option<ExactScalar> = None;
            for (idx, v) in pattern.values.iter().enumerate() {
                let m = if idx < b { v.clone() } else { -v.clone() };
                margin = Some(match margin {
                    None => m,
                    Some(old) => {
                        if m < old {
                            m
                        } else {
                            old
                        }
                    }
                });
            }
            Ok(emitter.record(
                ScenarioMeta::without_subscript(&scn),
                Some(&w),
                "sign_pattern_min_margin",
                format_rational(&margin.expect("c >= 1")),
                pass_fail(pattern.holds),
                stream_seed,
            ))
        })
        .collect();
    nested.into_iter().collect()
}

fn verify_lemma43(c_max: usize, w_samples: usize, seed: u64, timings: bool) -> cusumlab::Result<Vec<VerificationRecord>> {
    let emitter = Emitter::new("verify lemma43", timings);
    let mut combos = Vec::new();
    for c in 3..=c_max {
        for b in 1..=c - 2 {
            for k in 1..=c - b - 1 {
                for sample in 0..w_samples {
                    combos.push((c, b, k, sample));
                }
            }
        }
    }
    let nested: Vec<cusumlab::Result<Vec<VerificationRecord>>> = combos
        .par_iter()
        .map(|&(c, b, k, sample)| {
            let probe = Scenario::representative(c, b, k, 1, 0)?;
            let (stream_seed, w) = odds_for(&probe, seed, sample);
            let mut out = Vec::new();
            for (idx, chk) in lemma43_bounds_for_all_j(c, b, k, &w)?.iter().enumerate() {
                let j = idx + 1;
                let q = usize::from(j > b);
                let scn = Scenario::representative(c, b, k, 1, q)?;
                let h = CusumSubscript::new(vec![j], c)?;
                out.push(emitter.record(
                    ScenarioMeta::new(&scn, &h),
                    Some(&w),
                    "avg_cross_ratio_bound",
                    format_rational(&chk.ratio),
                    pass_fail(chk.holds),
                    stream_seed,
                ));
            }
            for q in 0..=1usize {
                let scn = Scenario::representative(c, b, k, 1, q)?;
                for (idx, d) in decompositions_for_all_h(c, b, k, q, &w)?.iter().enumerate() {
                    let h = CusumSubscript::new(vec![idx + 1], c)?;
                    out.push(emitter.record(
                        ScenarioMeta::new(&scn, &h),
                        Some(&w),
                        "decomposition_identity",
                        format_rational(&d.overall),
                        pass_fail(d.identity_holds),
                        stream_seed,
                    ));
                }
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for r in nested {
        records.extend(r?);
    }
    Ok(records)
}

fn verify_theorem31(c_max: usize, samples: usize, seed: u64, timings: bool) -> cusumlab::Result<Vec<VerificationRecord>> {
    let emitter = Emitter::new("verify theorem31", timings);
    let mut units = Vec::new();
    for c in 3..=c_max.min(5) {
        for b in 1..=c - 2 {
            for k in 1..=c - b - 1 {
                for sample in 0..samples {
                    units.push((c, b, k, sample));
                }
            }
        }
    }
    let grid_r = 8usize;
    let nested: Vec<cusumlab::Result<Vec<VerificationRecord>>> = units
        .par_iter()
        .map(|&(c, b, k, sample)| {
            let scn = full_superscript_scenario(c, b, k)?;
            let parts = [c as u64, b as u64, k as u64, 31, sample as u64];
            let mut rng = SplitMix64::derive(seed, &parts);
            let stream_seed = seed
                .wrapping_add(parts.iter().fold(0u64, |a, &p| a.wrapping_mul(31).wrapping_add(p)));
            let a = draw_configuration(&mut rng, c, b, k)?;
            let w = draw_odds(&mut rng, c, sample);
            let equal_odds = w.lambda() == 0;
            let table = CusumTable::build(&scn.superscript, &a, &w)?;
            let mut path_tables = Vec::with_capacity(grid_r);
            for x in 1..=grid_r {
                let mut entries = vec![int(grid_r as i64); b];
                entries.extend(std::iter::repeat_n(int(x as i64), c - b - k));
                entries.extend(std::iter::repeat_n(int(0), k));
                let cfg = Configuration::new(entries, b, k)?;
                path_tables.push(CusumTable::build(&scn.superscript, &cfg, &w)?);
            }
            let v = w.pow_entries(grid_r as i64)?;
            let mut engine = AplusInstance::from_scenario(&scn, v)?;
            let tol_factor = cusumlab::scalar::rat(1, 1_000_000_000);

            let mut all_ok = true;
            let mut monotone_ok = true;
            let mut min_value: Option<ExactScalar> = None;
            for h in contributing_subscripts(c, c - k, c) {
                let full_box = h.entries().iter().all(|&t| t == c);
                let degenerate = full_box && equal_odds;
                let at_a = table.cusum(&h);
                if degenerate {
                    all_ok &= at_a.is_zero();
                } else {
                    all_ok &= at_a > ExactScalar::zero();
                    min_value = Some(match min_value {
                        None => at_a.clone(),
                        Some(old) => {
                            if at_a < old {
                                at_a.clone()
                            } else {
                                old
                            }
                        }
                    });
                }
                let mut seq = vec![engine.cusum_at_aplus(&h)?];
                for t in &path_tables {
                    seq.push(t.cusum(&h));
                }
                for g in &seq[1..] {
                    if degenerate {
                        all_ok &= g.is_zero();
                    } else {
                        all_ok &= *g > ExactScalar::zero();
                    }
                }
                let mut scale = ExactScalar::zero();
                for g in &seq {
                    let mag = if *g >= ExactScalar::zero() { g.clone() } else { -g.clone() };
                    if mag > scale {
                        scale = mag;
                    }
                }
                let tol = scale * tol_factor.clone();
                monotone_ok &= seq.windows(2).all(|p| p[1].clone() >= p[0].clone() - tol.clone());
            }
            let min_str = min_value.map(|m| format_rational(&m)).unwrap_or_else(|| "0".into());
            Ok(vec![
                emitter.record(
                    ScenarioMeta::without_subscript(&scn),
                    Some(&w),
                    "theorem31_positivity_min",
                    min_str,
                    pass_fail(all_ok),
                    stream_seed,
                ),
                emitter.record(
                    ScenarioMeta::without_subscript(&scn),
                    Some(&w),
                    "stage_one_path_monotone",
                    format!("grid={grid_r}"),
                    pass_fail(monotone_ok),
                    stream_seed,
                ),
            ])
        })
        .collect();
    let mut records = Vec::new();
    for r in nested {
        records.extend(r?);
    }
    Ok(records)
}

fn run_oracle(c_max: usize, w_samples: usize, seed: u64, timings: bool) -> cusumlab::Result<Vec<VerificationRecord>> {
    let emitter = Emitter::new("oracle", timings);
    if c_max > 5 {
        eprintln!("oracle enumerates permutations directly; clamping c-max to 5");
    }
    let sweeps = enumerate_scenarios(c_max.min(5))?;
    let units: Vec<(usize, usize)> = (0..sweeps.len())
        .flat_map(|s| (0..w_samples).map(move |t| (s, t)))
        .collect();
    let nested: Vec<cusumlab::Result<VerificationRecord>> = units
        .par_iter()
        .map(|&(s, sample)| {
            let sweep = &sweeps[s];
            let scn = &sweep.scenario;
            let (stream_seed, w) = odds_for(scn, seed, sample);
            let aplus = Configuration::a_plus(scn.c, scn.b, scn.k, int(1))?;
            let table = CusumTable::build(&scn.superscript, &aplus, &w)?;
            let mut engine = AplusInstance::from_scenario(scn, w.clone())?;
            let mut equal = true;
            for h in &sweep.subscripts {
                equal &= table.cusum(h) == engine.cusum_at_aplus(h)?;
            }
            Ok(emitter.record(
                ScenarioMeta::without_subscript(scn),
                Some(&w),
                "oracle_equivalence",
                format!("{}", sweep.subscripts.len()),
                pass_fail(equal),
                stream_seed,
            ))
        })
        .collect();
    nested.into_iter().collect()
}

fn curve_records(
    emitter: &Emitter,
    args: &CurveArgs,
    curve: &cusumlab::simplex::BoundaryCurve,
    seed: u64,
) -> cusumlab::Result<Vec<VerificationRecord>> {
    let scn = Scenario::representative(args.c, args.b, args.k, 2, 1)?;
    let h = CusumSubscript::new(vec![1, args.h2], args.c)?;
    let meta = || ScenarioMeta::new(&scn, &h);
    let expected_initial = lemma41_average(args.c, args.b, args.k, 2, &h)?;
    let limit = <f64 as cusumlab::Scalar>::from_rational(&curve.limit_value);
    let last = curve.omega_grid.len() - 1;
    let rel = |series: &Vec<f64>| (series[last] - limit).abs() / limit;
    let mut records = vec![
        emitter.record(
            meta(),
            None,
            "initial_value",
            format_rational(&curve.initial_value),
            pass_fail(curve.initial_value == expected_initial),
            seed,
        ),
        emitter.record(
            meta(),
            None,
            "limit_value",
            format_rational(&curve.limit_value),
            pass_fail(curve.limit_value == rhs_constant(args.c, args.b, args.k, 2)),
            seed,
        ),
        emitter.record(
            meta(),
            None,
            "above_limit_everywhere",
            format!("{}", curve.above_limit_everywhere),
            pass_fail(curve.above_limit_everywhere),
            seed,
        ),
        emitter.record(
            meta(),
            None,
            "derivative_sign_changes",
            format!("{}", curve.sign_changes),
            pass_fail(curve.sign_changes <= 2),
            seed,
        ),
        emitter.record(
            meta(),
            None,
            "quasi_unimodal",
            format!("{}", curve.quasi_unimodal),
            if curve.quasi_unimodal { Verdict::Pass } else { Verdict::Report },
            seed,
        ),
    ];
    for (name, series) in [("top", &curve.top), ("bottom", &curve.bottom), ("middle", &curve.middle)] {
        let r = rel(series);
        records.push(emitter.record(
            meta(),
            None,
            &format!("grid_end_rel_error_{name}"),
            cusumlab::scalar::format_float(r),
            pass_fail(r < 1e-3),
            seed,
        ));
    }
    if let Some(m) = curve.initial_local_min {
        records.push(emitter.record(
            meta(),
            None,
            "initial_local_min",
            cusumlab::scalar::format_float(m),
            if m > limit { Verdict::Pass } else { Verdict::Report },
            seed,
        ));
    }
    Ok(records)
}

#[allow(clippy::too_many_arguments)]
fn run_certify(
    c: usize,
    b: usize,
    k: usize,
    p: usize,
    q: usize,
    h_entries: Vec<usize>,
    samples: usize,
    seed: u64,
    timings: bool,
) -> cusumlab::Result<Vec<VerificationRecord>> {
    let emitter = Emitter::new("certify", timings);
    let scn = Scenario::representative(c, b, k, p, q)?;
    let h = CusumSubscript::new(h_entries, c)?;
    let cert = certify_positivity(&scn, &h)?;
    let mut records = Vec::new();
    let (verdict, label) = match cert.status {
        CertificateStatus::Certified => (Verdict::Pass, "certified"),
        CertificateStatus::Inconclusive if cert.identically_zero => (Verdict::IdenticallyZero, "identically-zero"),
        CertificateStatus::Inconclusive => (Verdict::Report, "inconclusive"),
        CertificateStatus::Cap => (Verdict::Cap, "cap"),
    };
    records.push(emitter.record(
        ScenarioMeta::new(&scn, &h),
        None,
        "certificate",
        format!(
            "{label}: monomials={} negative_coefficients={} constant_sign={}",
            cert.monomials, cert.negative_coefficient_count, cert.constant_term_sign
        ),
        verdict,
        seed,
    ));
    if cert.status != CertificateStatus::Certified && !cert.identically_zero {
        let outcome = &numeric_sweep(&scn, std::slice::from_ref(&h), samples, seed)?[0];
        let fallback_verdict = match outcome.verdict {
            SweepVerdict::Positive => Verdict::Pass,
            SweepVerdict::IdenticallyZero => Verdict::IdenticallyZero,
            SweepVerdict::NonPositiveFound => Verdict::Fail,
        };
        records.push(emitter.record(
            ScenarioMeta::new(&scn, &h),
            None,
            "numeric_fallback_min",
            format_rational(&outcome.min_value),
            fallback_verdict,
            seed,
        ));
    }
    Ok(records)
}

fn write_records(store: &Option<PathBuf>, mut records: Vec<VerificationRecord>) -> cusumlab::Result<bool> {
    sort_records(&mut records);
    let any_fail = records.iter().any(|r| r.verdict == Verdict::Fail);
    let text = to_jsonl(&records);
    match store {
        Some(path) => {
            let mut file = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| cusumlab::Error::Io(format!("{}: {e}", path.display())))?;
            file.write_all(text.as_bytes())
                .map_err(|e| cusumlab::Error::Io(format!("{}: {e}", path.display())))?;
        }
        None => {
            print!("{text}");
        }
    }
    let (pass, fail): (Vec<_>, Vec<_>) = records.iter().partition(|r| r.verdict != Verdict::Fail);
    eprintln!("{} records ({} ok, {} fail)", records.len(), pass.len(), fail.len());
    Ok(any_fail)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("CUSUMLAB_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let seed = cli.seed;
    let timings = cli.timings;
    let result = match &cli.command {
        Command::Verify { target } => match target {
            VerifyTarget::Lemma21 { c_max, w_samples } => {
                positive_cusum_sweep("verify lemma21", *c_max, *w_samples, seed, timings)
            }
            VerifyTarget::Lemma41 { c_max } => verify_lemma41(*c_max, seed, timings),
            VerifyTarget::Lemma42 { c_max, w_samples } => verify_lemma42(*c_max, *w_samples, seed, timings),
            VerifyTarget::Lemma43 { c_max, w_samples } => verify_lemma43(*c_max, *w_samples, seed, timings),
            VerifyTarget::Theorem31 { c_max, samples } => verify_theorem31(*c_max, *samples, seed, timings),
        },
        Command::Oracle { c_max, w_samples } => run_oracle(*c_max, *w_samples, seed, timings),
        Command::Figure1 { out, curve } => {
            let emitter = Emitter::new("figure1", timings);
            let grid = GridSpec { omega_max: curve.omega_max, points: curve.points };
            emit_figure1(out, curve.c, curve.b, curve.k, curve.h2, &grid)
                .and_then(|bc| curve_records(&emitter, curve, &bc, seed))
        }
        Command::ScanA { out, curve } => {
            let emitter = Emitter::new("scan-A", timings);
            let grid = GridSpec { omega_max: curve.omega_max, points: curve.points };
            let scanned = match out {
                Some(path) => emit_figure1(path, curve.c, curve.b, curve.k, curve.h2, &grid),
                None => scan_a(curve.c, curve.b, curve.k, curve.h2, &grid),
            };
            scanned.and_then(|bc| curve_records(&emitter, curve, &bc, seed))
        }
        Command::Certify { c, b, k, p, q, h, samples } => {
            run_certify(*c, *b, *k, *p, *q, h.clone(), *samples, seed, timings)
        }
        Command::Sweep { c_max, w_samples } => {
            positive_cusum_sweep("sweep", *c_max, *w_samples, seed, timings)
        }
    };
    match result.and_then(|records| write_records(&cli.store, records)) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(cusumlab::Error::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
