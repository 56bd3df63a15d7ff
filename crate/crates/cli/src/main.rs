use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qproj_core::groupoid::{sample_map, verify_bijection, verify_partition, MapCheck, Window};
use qproj_core::ktheory::{check_exactness, Status};
use qproj_core::line_bundles::{closed_form, k0_class, recursion_expand};
use qproj_core::oracle::{sample_ranks, verify_oracle, Cutoffs};
use qproj_core::proj_monoid::{k0_sphere_class, normalize, rho, ProjClass};
use qproj_core::suite::{self, SuiteConfig, SuiteRecord, CRITERIA};
use qproj_core::{parse_sum, Error, Report, GRAMMAR};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "qproj",
    version,
    about = "Projection classes over quantum spheres and line bundles over quantum projective spaces"
)]
struct Cli {
    /// Output encoding; json prints one record per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a diagonal sum such as "P[3,1] (+) P[1,2]".
    Normalize {
        #[arg(long)]
        n: u32,
        expr: String,
    },
    /// The invariants (rho_0, ..., rho_n) of a diagonal sum.
    Rho {
        #[arg(long)]
        n: u32,
        expr: String,
    },
    /// Diagonal sum of two expressions.
    Boxplus {
        #[arg(long)]
        n: u32,
        a: String,
        b: String,
    },
    /// K0 classes: of a sum over the sphere, of a line bundle, or the exactness check.
    K0 {
        #[arg(long)]
        n: u32,
        #[arg(conflicts_with_all = ["line_bundle", "exactness"], required_unless_present_any = ["line_bundle", "exactness"])]
        expr: Option<String>,
        /// Class of L_K in K0 of the projective space.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "exactness")]
        line_bundle: Option<i64>,
        /// Check exactness of the restriction sequence at n.
        #[arg(long)]
        exactness: bool,
    },
    /// Decomposition of the line bundle L_k over CP_q^n.
    Linebundle {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Expand the splitting recursion instead of using the binomial formula.
        #[arg(long)]
        recursion: bool,
    },
    /// Exhaustive window checks of the groupoid maps and partitions.
    GroupoidVerify(GroupoidArgs),
    /// Compare truncated operator ranks with the symbolic invariants.
    OracleVerify(OracleArgs),
    /// Run the whole acceptance suite.
    VerifyAll(SuiteArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupoidCheck {
    Partition,
    ThetaNeg,
    ThetaShift,
    ThetaPeel,
    ThetaTerminal,
    Gamma,
    TIso,
    Trace,
}

#[derive(Args)]
struct SeedArgs {
    /// Seed for the randomized supplements.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random cases per supplement.
    #[arg(long, default_value_t = 256)]
    samples: usize,
}

#[derive(Args)]
struct GroupoidArgs {
    #[arg(long, value_enum)]
    check: GroupoidCheck,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    /// Stratum level; all valid levels when omitted.
    #[arg(long)]
    j: Option<usize>,
    /// Peeled amount (or terminal degree); all valid values when omitted.
    #[arg(long, allow_hyphen_values = true)]
    l: Option<i64>,
    #[arg(long, default_value_t = 8)]
    window: u32,
    #[command(flatten)]
    seed: SeedArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: u32,
    /// Level; all levels 0..=n when omitted.
    #[arg(long)]
    j: Option<u32>,
    /// Multiplicity; 1..=6 when omitted.
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, default_value_t = 8)]
    n1: u64,
    #[arg(long, default_value_t = 16)]
    n2: u64,
    #[command(flatten)]
    seed: SeedArgs,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 8)]
    window: u32,
    #[arg(long, default_value_t = 8)]
    n1: u64,
    #[arg(long, default_value_t = 16)]
    n2: u64,
    /// Comma-separated criteria to run; all when omitted.
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u8>,
    #[command(flatten)]
    seed: SeedArgs,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<bool, Failure>;

struct Printer {
    format: Format,
    out: io::StdoutLock<'static>,
}

impl Printer {
    fn emit<T: Serialize>(&mut self, value: &T, table: impl FnOnce() -> String) {
        let line = match self.format {
            Format::Json => serde_json::to_string(value).expect("output serializes"),
            Format::Table => table(),
        };
        // a closed pipe is not worth a panic
        let _ = writeln!(self.out, "{line}");
    }

    fn reports(&mut self, reports: &[Report]) -> bool {
        for r in reports {
            self.emit(r, || report_line(None, r));
        }
        self.summary(reports.iter().map(|r| r.pass))
    }

    fn summary(&mut self, passes: impl Iterator<Item = bool>) -> bool {
        let (mut total, mut failed) = (0, 0);
        for p in passes {
            total += 1;
            failed += usize::from(!p);
        }
        if self.format == Format::Table {
            let _ = writeln!(self.out, "{total} checks, {failed} failed");
        }
        failed == 0
    }
}

fn report_line(criterion: Option<u8>, r: &Report) -> String {
    let mut line = String::new();
    if let Some(c) = criterion {
        line.push_str(&format!("[{c}] "));
    }
    line.push_str(&format!(
        "{}  {}  {}  domain={} image={}",
        if r.pass { "PASS" } else { "FAIL" },
        r.check,
        r.params,
        r.domain_size,
        r.image_size
    ));
    if let Some(d) = &r.detail {
        line.push_str(&format!("  detail: {d}"));
    }
    if let Some(c) = &r.counterexample {
        line.push_str(&format!("  counterexample: {c}"));
    }
    line
}

fn sum_of(n: u32, expr: &str) -> Result<ProjClass, Error> {
    normalize(n, &parse_sum(n, expr)?)
}

fn window(w: u32) -> Result<Window, Failure> {
    Window::new(w).map_err(|e| Failure::Usage(e.to_string()))
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("this check needs --{flag}")))
}

fn groupoid_maps(a: &GroupoidArgs) -> Result<Vec<MapCheck>, Failure> {
    let n = a.n;
    let levels: Vec<usize> = match a.j {
        Some(j) => vec![j],
        None => (0..n).collect(),
    };
    let mut maps = Vec::new();
    match a.check {
        GroupoidCheck::ThetaNeg => maps.push(MapCheck::ThetaNeg {
            n,
            k: need(a.k, "k")?,
        }),
        GroupoidCheck::ThetaShift => {
            let k = need(a.k, "k")?;
            maps.extend(levels.iter().map(|&j| MapCheck::ThetaShift { n, k, j }));
        }
        GroupoidCheck::ThetaPeel => {
            let k = need(a.k, "k")?;
            let peels: Vec<i64> = match a.l {
                Some(l) => vec![l],
                None => (0..k).collect(),
            };
            for &j in &levels {
                maps.extend(peels.iter().map(|&l| MapCheck::ThetaPeel { n, k, j, l }));
            }
        }
        GroupoidCheck::ThetaTerminal => maps.push(MapCheck::ThetaTerminal {
            n,
            l: need(a.l, "l")?,
        }),
        GroupoidCheck::Gamma => maps.push(MapCheck::Gamma { n }),
        GroupoidCheck::TIso => maps.push(MapCheck::TIso { n }),
        GroupoidCheck::Partition | GroupoidCheck::Trace => {}
    }
    Ok(maps)
}

fn groupoid_verify(p: &mut Printer, a: &GroupoidArgs) -> Outcome {
    let w = window(a.window)?;
    let mut reports = Vec::new();
    match a.check {
        GroupoidCheck::Partition => {
            let k = need(a.k, "k")?;
            let levels: Vec<usize> = match a.j {
                Some(j) => vec![j],
                None => (0..a.n).collect(),
            };
            for j in levels {
                reports.push(verify_partition(a.n, k, j, w)?);
            }
        }
        GroupoidCheck::Trace => {
            let k = need(a.k, "k")?;
            reports.push(suite::trace_report(a.n, k, w)?);
        }
        _ => {
            for map in groupoid_maps(a)? {
                reports.push(verify_bijection(map, w)?);
                reports.push(sample_map(map, a.seed.seed, a.seed.samples)?);
            }
        }
    }
    Ok(p.reports(&reports))
}

fn oracle_verify(p: &mut Printer, a: &OracleArgs) -> Outcome {
    let cut = Cutoffs::new(a.n1, a.n2)?;
    let levels: Vec<u32> = a.j.map_or_else(|| (0..=a.n).collect(), |j| vec![j]);
    let ks: Vec<u64> = a.k.map_or_else(|| (1..=6).collect(), |k| vec![k]);
    let mut reports = Vec::new();
    for &j in &levels {
        for &k in &ks {
            reports.push(verify_oracle(a.n, j, k, cut)?);
        }
    }
    reports.push(sample_ranks(a.seed.seed, a.seed.samples));
    Ok(p.reports(&reports))
}

fn verify_all(p: &mut Printer, a: &SuiteArgs) -> Outcome {
    let cfg = SuiteConfig {
        seed: a.seed.seed,
        window: window(a.window)?,
        cutoffs: Cutoffs::new(a.n1, a.n2)?,
        samples: a.seed.samples,
        jobs: suite::jobs_from_env(),
    };
    if let Some(bad) = a.criteria.iter().find(|c| !CRITERIA.contains(*c)) {
        return Err(Failure::Usage(format!(
            "unknown criterion {bad}; expected {}..={}",
            CRITERIA.start(),
            CRITERIA.end()
        )));
    }
    let criteria: Vec<u8> = if a.criteria.is_empty() {
        CRITERIA.collect()
    } else {
        a.criteria.clone()
    };
    let records: Vec<SuiteRecord> = suite::run(&criteria, &cfg)?;
    for r in &records {
        p.emit(r, || report_line(Some(r.criterion), &r.report));
    }
    Ok(p.summary(records.iter().map(|r| r.report.pass)))
}

fn run(cli: Cli) -> Outcome {
    let mut p = Printer {
        format: cli.format,
        out: io::stdout().lock(),
    };
    match cli.command {
        Command::Normalize { n, expr } => {
            let s = sum_of(n, &expr)?;
            p.emit(&s, || s.to_string());
        }
        Command::Rho { n, expr } => {
            let r = rho(&sum_of(n, &expr)?);
            p.emit(&r, || r.to_string());
        }
        Command::Boxplus { n, a, b } => {
            let s = normalize(n, &[sum_of(n, &a)?, sum_of(n, &b)?])?;
            p.emit(&s, || s.to_string());
        }
        Command::K0 {
            n,
            expr,
            line_bundle,
            exactness,
        } => {
            if exactness {
                let e = check_exactness(n);
                p.emit(&e, || {
                    format!(
                        "n={} status={} kernel={:?} image={:?} nu_surjective={} iota_injective={} composite_zero={}",
                        e.n, serde_json::to_value(e.status).expect("status serializes").as_str().unwrap_or_default(), e.kernel, e.image, e.nu_surjective, e.iota_injective, e.composite_zero
                    )
                });
                return Ok(e.status != Status::Fail);
            } else if let Some(k) = line_bundle {
                let v = k0_class(n, k)?;
                p.emit(&v, || v.to_string());
            } else {
                let expr = expr.expect("clap requires an expression here");
                let c = k0_sphere_class(&sum_of(n, &expr)?);
                p.emit(
                    &serde_json::Number::from_string_unchecked(c.to_string()),
                    || c.to_string(),
                );
            }
        }
        Command::Linebundle { n, k, recursion } => {
            let lb = if recursion {
                recursion_expand(n, k)?
            } else {
                closed_form(n, k)?
            };
            p.emit(&lb, || format!("L_{} = {lb}", lb.k));
        }
        Command::GroupoidVerify(a) => return groupoid_verify(&mut p, &a),
        Command::OracleVerify(a) => return oracle_verify(&mut p, &a),
        Command::VerifyAll(a) => return verify_all(&mut p, &a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            if !usage {
                return ExitCode::SUCCESS;
            }
            eprintln!("\nexpression grammar:\n{GRAMMAR}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Parse { .. }) {
                eprintln!("\nexpression grammar:\n{GRAMMAR}");
            }
            ExitCode::from(1)
        }
    }
}
