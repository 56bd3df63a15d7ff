//! The full verification suite behind `verify-all`, split into independent
//! jobs that can run on a thread pool.

use std::collections::HashSet;

use num_bigint::{BigUint, RandBigInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::Result;
use crate::groupoid::{
    sample_map, trace_line_bundle, verify_bijection, verify_partition, MapCheck, Window,
};
use crate::ktheory::{check_exactness, nu_star, Status};
use crate::line_bundles::{closed_form, hockey_stick, k0_class, RecursionExpander};
use crate::oracle::{sample_ranks, verify_oracle, Cutoffs};
use crate::proj_monoid::{boxplus, is_equivalent, is_stably_equivalent, rank, rho, ProjClass};
use crate::report::Report;

pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=9;

/// Environment variable capping the worker threads.
pub const JOBS_ENV: &str = "QPROJ_JOBS";

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub window: Window,
    pub cutoffs: Cutoffs,
    /// Random cases added to each randomized job.
    pub samples: usize,
    pub jobs: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0x5eed,
            window: Window::new(8).expect("8 is a valid window"),
            cutoffs: Cutoffs::default(),
            samples: 256,
            jobs: None,
        }
    }
}

/// Reads the thread cap from [`JOBS_ENV`], ignoring unparsable values.
pub fn jobs_from_env() -> Option<usize> {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRecord {
    pub criterion: u8,
    #[serde(flatten)]
    pub report: Report,
}

#[derive(Clone, Copy, Debug)]
enum Job {
    MonoidLaw { n: u32 },
    MonoidRandom,
    RhoInjective { n: u32 },
    CancellationWitness,
    Cancellation { n: u32 },
    Recursion { n: u32 },
    HockeyStick { l: i64 },
    NuConsistency { n: u32 },
    Exactness { n: u32 },
    Partition { n: usize, k: i64, j: usize },
    Bijection(MapCheck),
    Oracle { n: u32, j: u32, k: u64 },
    Trace { n: usize, k: i64 },
    MapSample(MapCheck),
    RankSample,
}

const MONOID_N: u32 = 5;
const MONOID_K: u64 = 20;
const INJECTIVE_K: u64 = 50;
const LINE_N: u32 = 5;
const LINE_K: i64 = 25;
const GROUPOID_N: usize = 3;
const GROUPOID_K: i64 = 4;

fn jobs(criterion: u8) -> Vec<Job> {
    let mut out = Vec::new();
    match criterion {
        1 => {
            out.extend((0..=MONOID_N).map(|n| Job::MonoidLaw { n }));
            out.push(Job::MonoidRandom);
        }
        2 => out.extend((0..=MONOID_N).map(|n| Job::RhoInjective { n })),
        3 => {
            out.push(Job::CancellationWitness);
            out.extend((0..=MONOID_N).map(|n| Job::Cancellation { n }));
        }
        4 => out.extend((1..=LINE_N).map(|n| Job::Recursion { n })),
        5 => out.extend((2..=12).map(|l| Job::HockeyStick { l })),
        6 => {
            out.extend((2..=5).map(|n| Job::NuConsistency { n }));
            out.extend((1..=6).map(|n| Job::Exactness { n }));
        }
        7 => {
            for n in 1..=GROUPOID_N {
                out.push(Job::Bijection(MapCheck::Gamma { n }));
                out.push(Job::Bijection(MapCheck::TIso { n }));
                for k in -GROUPOID_K..=0 {
                    out.push(Job::Bijection(MapCheck::ThetaNeg { n, k }));
                }
                for l in -GROUPOID_K..=GROUPOID_K {
                    out.push(Job::Bijection(MapCheck::ThetaTerminal { n, l }));
                }
                for k in 1..=GROUPOID_K {
                    for j in 0..n {
                        out.push(Job::Partition { n, k, j });
                        out.push(Job::Bijection(MapCheck::ThetaShift { n, k, j }));
                        for l in 0..k {
                            out.push(Job::Bijection(MapCheck::ThetaPeel { n, k, j, l }));
                        }
                    }
                }
                out.push(Job::MapSample(MapCheck::Gamma { n }));
                out.push(Job::MapSample(MapCheck::TIso { n }));
                out.push(Job::MapSample(MapCheck::ThetaNeg { n, k: -GROUPOID_K }));
                out.push(Job::MapSample(MapCheck::ThetaShift {
                    n,
                    k: GROUPOID_K,
                    j: n - 1,
                }));
                out.push(Job::MapSample(MapCheck::ThetaPeel {
                    n,
                    k: GROUPOID_K,
                    j: 0,
                    l: 1,
                }));
                out.push(Job::MapSample(MapCheck::ThetaTerminal { n, l: GROUPOID_K }));
            }
        }
        8 => {
            for n in 0..=3 {
                for j in 0..=n {
                    out.extend((1..=6).map(|k| Job::Oracle { n, j, k }));
                }
            }
            out.push(Job::RankSample);
        }
        9 => {
            for n in 1..=2 {
                out.extend((1..=3).map(|k| Job::Trace { n, k }));
            }
        }
        _ => {}
    }
    out
}

/// Every class over `n` with `k <= kmax`, zero class first.
fn classes(n: u32, kmax: u64) -> Vec<ProjClass> {
    let mut out = vec![ProjClass::zero(n)];
    for j in 0..=n {
        for k in 1..=kmax {
            out.push(ProjClass::validate(n as i64, j as i64, k).expect("valid range"));
        }
    }
    out
}

/// The stated rules, written out separately from the library fold.
fn expected_sum(a: &ProjClass, b: &ProjClass) -> ProjClass {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else if a.j() == b.j() {
        ProjClass::validate(a.n() as i64, a.j() as i64, a.k() + b.k()).expect("valid sum")
    } else if a.j() < b.j() {
        a.clone()
    } else {
        b.clone()
    }
}

fn class_json(p: &ProjClass) -> serde_json::Value {
    serde_json::to_value(p).expect("class serializes")
}

fn monoid_checks(report: &mut Report, a: &ProjClass, b: &ProjClass) -> Result<()> {
    let ab = boxplus(a, b)?;
    report.domain_size += 1;
    if ab != expected_sum(a, b) {
        report.fail(
            Some(json!([class_json(a), class_json(b)])),
            "sum breaks the rules",
        );
    }
    if ab != boxplus(b, a)? {
        report.fail(
            Some(json!([class_json(a), class_json(b)])),
            "not commutative",
        );
    }
    if rho(&ab) != rho(a).add(&rho(b))? {
        report.fail(
            Some(json!([class_json(a), class_json(b)])),
            "rho not additive",
        );
    }
    Ok(())
}

fn monoid_law(n: u32) -> Result<Report> {
    let mut report = Report::new("monoid_law", json!({"n": n, "k_max": MONOID_K}));
    let all = classes(n, MONOID_K);
    let zero = ProjClass::zero(n);
    for a in &all {
        if boxplus(a, &zero)? != *a || boxplus(&zero, a)? != *a {
            report.fail(Some(class_json(a)), "zero is not an identity");
        }
        for b in &all {
            monoid_checks(&mut report, a, b)?;
            let ab = boxplus(a, b)?;
            for c in &all {
                if boxplus(&ab, c)? != boxplus(a, &boxplus(b, c)?)? {
                    report.fail(
                        Some(json!([class_json(a), class_json(b), class_json(c)])),
                        "not associative",
                    );
                }
            }
        }
    }
    report.image_size = all.len() as u64;
    Ok(report)
}

fn random_class(rng: &mut ChaCha8Rng, n: u32) -> ProjClass {
    let j = rng.gen_range(0..=n);
    if j == 0 && rng.gen_bool(0.1) {
        return ProjClass::zero(n);
    }
    let k = rng.gen_biguint(96) + 1u32;
    ProjClass::validate(n as i64, j as i64, k).expect("valid random class")
}

fn monoid_random(cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::new(
        "monoid_random",
        json!({"seed": cfg.seed, "samples": cfg.samples}),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let n = rng.gen_range(0..=MONOID_N);
        let (a, b, c) = (
            random_class(&mut rng, n),
            random_class(&mut rng, n),
            random_class(&mut rng, n),
        );
        monoid_checks(&mut report, &a, &b)?;
        if boxplus(&boxplus(&a, &b)?, &c)? != boxplus(&a, &boxplus(&b, &c)?)? {
            report.fail(
                Some(json!([class_json(&a), class_json(&b), class_json(&c)])),
                "not associative",
            );
        }
    }
    Ok(report)
}

fn rho_injective(n: u32) -> Report {
    let mut report = Report::new("rho_injective", json!({"n": n, "k_max": INJECTIVE_K}));
    let all = classes(n, INJECTIVE_K);
    let mut seen = HashSet::new();
    for p in &all {
        if !seen.insert(rho(p).to_string()) {
            report.fail(Some(class_json(p)), "rho value repeats");
        }
    }
    report.domain_size = all.len() as u64;
    report.image_size = seen.len() as u64;
    report
}

fn cancellation_witness() -> Result<Report> {
    let mut report = Report::new("cancellation_witness", json!({"n": 2}));
    let p11 = ProjClass::validate(2, 1, 1)?;
    let p21 = ProjClass::validate(2, 2, 1)?;
    let p01 = ProjClass::validate(2, 0, 1)?;
    let (left, right) = (boxplus(&p11, &p01)?, boxplus(&p21, &p01)?);
    report.domain_size = 1;
    if left != p01 || right != p01 || is_equivalent(&p11, &p21)? {
        report.fail(
            Some(json!([class_json(&left), class_json(&right)])),
            "witness fails",
        );
    }
    if !is_stably_equivalent(&p11, &p21)? {
        report.fail(None, "P[1,1] and P[2,1] should be stably equivalent");
    }
    Ok(report)
}

/// Cancellation holds among classes of rank >= 1 and fails for every pair
/// of distinct rank-0 classes once `n > 0`.
fn cancellation(n: u32) -> Result<Report> {
    let mut report = Report::new("cancellation", json!({"n": n, "k_max": MONOID_K}));
    let all = classes(n, MONOID_K);
    let positive: Vec<_> = all
        .iter()
        .filter(|p| rank(p) >= BigUint::from(1u32))
        .collect();
    for a in &positive {
        for b in &positive {
            if is_stably_equivalent(a, b)? && !is_equivalent(a, b)? {
                report.fail(
                    Some(json!([class_json(a), class_json(b)])),
                    "stable but not equal",
                );
            }
            for c in &all {
                report.domain_size += 1;
                if boxplus(a, c)? == boxplus(b, c)? && a != b {
                    report.fail(
                        Some(json!([class_json(a), class_json(b), class_json(c)])),
                        "cancellation fails in positive rank",
                    );
                }
            }
        }
    }
    let trivial = ProjClass::trivial(n, 1u32);
    let zero_rank: Vec<_> = all.iter().filter(|p| p.j() >= 1).collect();
    for a in &zero_rank {
        for b in &zero_rank {
            report.image_size += 1;
            if a != b && (boxplus(a, &trivial)? != trivial || boxplus(b, &trivial)? != trivial) {
                report.fail(Some(json!([class_json(a), class_json(b)])), "not absorbed");
            }
        }
    }
    Ok(report)
}

fn recursion(n: u32) -> Result<Report> {
    let mut report = Report::new("recursion_closed_form", json!({"n": n, "k_max": LINE_K}));
    let mut ex = RecursionExpander::new(n)?;
    for k in 1..=LINE_K {
        report.domain_size += 1;
        let expanded = ex.expand_term(k as u64, 0);
        let closed = closed_form(n, k)?;
        if closed.decomposition.multiplicities() != Some(expanded.as_slice()) {
            report.fail(
                Some(json!({"n": n, "k": k})),
                "expansion differs from closed form",
            );
        }
    }
    report.image_size = ex.memo_len() as u64;
    Ok(report)
}

fn hockey(l: i64) -> Result<Report> {
    let mut report = Report::new("hockey_stick", json!({"l": l, "k_max": 40}));
    for k in 1..=40 {
        let h = hockey_stick(l, k)?;
        report.domain_size += 1 + h.shifted.len() as u64;
        if !h.equal {
            report.fail(Some(json!({"l": l, "k": k})), "sums differ");
        }
    }
    Ok(report)
}

fn nu_consistency(n: u32) -> Result<Report> {
    let mut report = Report::new("nu_consistency", json!({"n": n, "k_max": LINE_K}));
    for k in 0..=LINE_K {
        report.domain_size += 1;
        if nu_star(&k0_class(n, k)?)? != k0_class(n - 1, k)? {
            report.fail(
                Some(json!({"n": n, "k": k})),
                "restriction changes the class",
            );
        }
    }
    Ok(report)
}

fn exactness(n: u32) -> Report {
    let mut report = Report::new("exactness", json!({"n": n}));
    let e = check_exactness(n);
    report.domain_size = 1;
    if e.status != Status::Pass {
        let value = serde_json::to_value(&e).expect("report serializes");
        report.fail(Some(value), "sequence not exact");
    }
    report
}

/// Trace of `(F_n)_{k,0}` compared with the line-bundle multiplicities.
pub fn trace_report(n: usize, k: i64, window: Window) -> Result<Report> {
    let mut report = Report::new(
        "trace_line_bundle",
        json!({"n": n, "k": k, "window": window.get()}),
    );
    let t = trace_line_bundle(n, k, window)?;
    report.domain_size = t.domain_size;
    report.image_size = t.reached.iter().sum();
    if !t.pass {
        let value = t
            .counterexample
            .as_ref()
            .map(|g| serde_json::to_value(g).expect("serializes"));
        report.fail(value, t.detail.clone().unwrap_or_default());
    }
    let lb = closed_form(n as u32, k)?;
    let mult = lb.decomposition.multiplicities().unwrap_or(&[]);
    let reached: Vec<BigUint> = t.reached.iter().map(|&r| BigUint::from(r)).collect();
    if reached != mult {
        report.fail(
            None,
            format!(
                "terminal counts {:?} differ from multiplicities {}",
                t.reached, lb
            ),
        );
    }
    Ok(report)
}

fn run_job(job: Job, cfg: &SuiteConfig) -> Result<Report> {
    match job {
        Job::MonoidLaw { n } => monoid_law(n),
        Job::MonoidRandom => monoid_random(cfg),
        Job::RhoInjective { n } => Ok(rho_injective(n)),
        Job::CancellationWitness => cancellation_witness(),
        Job::Cancellation { n } => cancellation(n),
        Job::Recursion { n } => recursion(n),
        Job::HockeyStick { l } => hockey(l),
        Job::NuConsistency { n } => nu_consistency(n),
        Job::Exactness { n } => Ok(exactness(n)),
        Job::Partition { n, k, j } => verify_partition(n, k, j, cfg.window),
        Job::Bijection(map) => verify_bijection(map, cfg.window),
        Job::Oracle { n, j, k } => verify_oracle(n, j, k, cfg.cutoffs),
        Job::Trace { n, k } => trace_report(n, k, cfg.window),
        Job::MapSample(map) => sample_map(map, cfg.seed, cfg.samples),
        Job::RankSample => Ok(sample_ranks(cfg.seed, cfg.samples)),
    }
}

fn sort_key(r: &SuiteRecord) -> (u8, String, String) {
    (
        r.criterion,
        r.report.check.clone(),
        r.report.params.to_string(),
    )
}

/// Runs the given criteria; records come back in a canonical order.
pub fn run(criteria: &[u8], cfg: &SuiteConfig) -> Result<Vec<SuiteRecord>> {
    let work: Vec<(u8, Job)> = criteria
        .iter()
        .flat_map(|&c| jobs(c).into_iter().map(move |j| (c, j)))
        .collect();
    let exec = || {
        work.par_iter()
            .map(|&(criterion, job)| {
                run_job(job, cfg).map(|report| SuiteRecord { criterion, report })
            })
            .collect::<Result<Vec<_>>>()
    };
    let mut records = match cfg.jobs {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(exec)?,
        None => exec()?,
    };
    records.sort_by_cached_key(sort_key);
    Ok(records)
}

pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<SuiteRecord>> {
    let all: Vec<u8> = CRITERIA.collect();
    run(&all, cfg)
}
