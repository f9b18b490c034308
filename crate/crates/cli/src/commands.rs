use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use moddiq_core::decomp::intermediate_decomposition;
use moddiq_core::deadline;
use moddiq_core::diq::{associated_test_modular, diq, mod_diq, non_associated_test, Verdict, Witness};
use moddiq_core::error::Error;
use moddiq_core::field::Rationals;
use moddiq_core::groebner::{GroebnerBasis, Ideal};
use moddiq_core::idealops::{quotient, saturate};
use moddiq_core::modular::{mod_quotient, mod_saturate, rational_basis, ModularRunConfig, RunLog, VerifyLevel};
use moddiq_core::par::{self, ExecMode};
use serde_json::{json, Map, Value};

use crate::bench::{builtin_suite, parse_suite, report, run_suite, table, DEFAULT_TIMEOUT};
use crate::format::{parse_ideal_file, parse_order, ParseError};

type Q = Rationals;

pub const EXIT_OK: i32 = 0;
/// Errors other than the ones below: unit ideal, violated hypotheses, I/O.
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_TIMEOUT: i32 = 4;

/// What a command printed and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "moddiq", version, about = "Ideal quotients, saturations and double ideal quotients over Q")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Reduced Gröbner basis of --ideal.
    Gb(OpArgs),
    /// (I : J) by the direct method.
    Quotient(OpArgs),
    /// (I : J) by the modular method.
    Modquotient(OpArgs),
    /// (I : J^∞) by the direct method.
    Sat(OpArgs),
    /// (I : J^∞) by the modular method.
    Modsat(OpArgs),
    /// (I : (I : J)) by the direct method.
    Diq(OpArgs),
    /// (I : (I : J)) by the modular method.
    Moddiq(OpArgs),
    /// Modular test that the prime --by is associated to --ideal.
    Asstest(OpArgs),
    /// Modular test that the prime --by is not associated to --ideal.
    Nonasstest(OpArgs),
    /// Intermediate primary decomposition of --ideal.
    Idecomp(OpArgs),
    /// Direct vs modular timings.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyArg {
    Ptest,
    Full,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Primes in the first round.
    #[arg(long, default_value_t = 4)]
    primes: usize,
    /// Bit size of random primes (3..=32).
    #[arg(long, default_value_t = 31)]
    prime_bits: u32,
    /// Seed for prime selection.
    #[arg(long, env = "MODDIQ_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "full")]
    verify: VerifyArg,
    /// Machine-readable output with sorted keys.
    #[arg(long)]
    json: bool,
    /// Budget in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Worker threads for per-prime work; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the per-prime run log here as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OpArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    ideal: String,
    #[arg(long)]
    by: Option<String>,
    /// Overrides the file's order: lex, grevlex or block(...).
    #[arg(long)]
    order: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Suite file; the built-in stress suite when absent.
    #[arg(long)]
    suite: Option<PathBuf>,
    /// Also run cases marked slow.
    #[arg(long)]
    include_slow: bool,
    #[command(flatten)]
    run: RunArgs,
}

fn config(run: &RunArgs, log: Option<RunLog>) -> ModularRunConfig {
    ModularRunConfig {
        initial_primes: run.primes,
        prime_bits: run.prime_bits,
        seed: run.seed,
        verify: match run.verify {
            VerifyArg::Ptest => VerifyLevel::PTestOnly,
            VerifyArg::Full => VerifyLevel::Full,
        },
        exec: if run.jobs == Some(1) {
            ExecMode::Sequential
        } else {
            ExecMode::Parallel
        },
        log,
        ..ModularRunConfig::default()
    }
}

fn timeout_of(run: &RunArgs) -> Result<Option<Duration>, String> {
    match run.timeout {
        None => Ok(None),
        Some(t) => Duration::try_from_secs_f64(t)
            .map(Some)
            .map_err(|_| format!("invalid timeout {t}")),
    }
}

/// Result of an operation before formatting.
struct Report {
    basis: Vec<String>,
    certified: bool,
    primes_used: Vec<u64>,
    rounds: u32,
    /// Extra fields, merged into the JSON object.
    extra: Map<String, Value>,
    /// Exit code on success of the computation itself.
    code: i32,
}

impl Report {
    fn exact(gb: &GroebnerBasis<Q>) -> Self {
        Report {
            basis: strings(gb),
            certified: true,
            primes_used: Vec::new(),
            rounds: 0,
            extra: Map::new(),
            code: EXIT_OK,
        }
    }
}

fn strings(gb: &GroebnerBasis<Q>) -> Vec<String> {
    gb.polys().iter().map(|p| p.to_string()).collect()
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::Timeout => EXIT_TIMEOUT,
        Error::ModularFailure { .. } | Error::PrimeExhaustion(_) => EXIT_INCONCLUSIVE,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn need_by(cmd: &str, by: &Option<Ideal<Q>>) -> Result<Ideal<Q>, Outcome> {
    by.clone()
        .ok_or_else(|| Outcome::fail(EXIT_USAGE, format!("{cmd} requires --by NAME")))
}

fn execute(cmd: &str, i: &Ideal<Q>, by: &Option<Ideal<Q>>, cfg: &ModularRunConfig) -> Result<Result<Report, Error>, Outcome> {
    let with_by = |f: &dyn Fn(&Ideal<Q>) -> Result<Report, Error>| -> Result<Result<Report, Error>, Outcome> {
        let j = need_by(cmd, by)?;
        Ok(f(&j))
    };
    match cmd {
        "gb" => Ok(i.gb().map(|g| Report::exact(&g))),
        "quotient" => with_by(&|j| Ok(Report::exact(&*quotient(i, j)?.gb()?))),
        "sat" => with_by(&|j| {
            let (s, m) = saturate(i, j)?;
            let mut r = Report::exact(&*s.gb()?);
            r.extra.insert("exponent".into(), json!(m));
            Ok(r)
        }),
        "diq" => with_by(&|j| Ok(Report::exact(&*diq(i, j)?.gb()?))),
        "modquotient" | "modsat" | "moddiq" => with_by(&|j| {
            let f = rational_basis(i, cfg)?;
            let (basis, status_ok, primes, rounds, exponent) = match cmd {
                "modquotient" => {
                    let o = mod_quotient(&f, j.gens(), cfg)?;
                    (strings(&o.basis), o.certified(), o.primes_used, o.rounds, None)
                }
                "modsat" => {
                    let o = mod_saturate(&f, j.gens(), cfg)?;
                    (strings(&o.basis), o.certified(), o.primes_used, o.rounds, Some(o.extra))
                }
                _ => {
                    let o = mod_diq(&f, j.gens(), cfg)?;
                    (strings(&o.basis), o.certified(), o.primes_used, o.rounds, None)
                }
            };
            let mut extra = Map::new();
            if let Some(m) = exponent {
                extra.insert("exponent".into(), json!(m));
            }
            Ok(Report {
                basis,
                certified: status_ok,
                primes_used: primes,
                rounds,
                extra,
                code: EXIT_OK,
            })
        }),
        "asstest" | "nonasstest" => with_by(&|p| {
            let f = rational_basis(i, cfg)?;
            let g = rational_basis(p, cfg)?;
            let v = if cmd == "asstest" {
                associated_test_modular(&f, &g, cfg)?
            } else {
                non_associated_test(&f, &g, cfg)?
            };
            let (basis, witness_primes) = match &v.witness {
                Some(Witness::Basis(b)) => (strings(b), Vec::new()),
                Some(Witness::Primes(ps)) => (Vec::new(), ps.clone()),
                None => (Vec::new(), Vec::new()),
            };
            let mut extra = Map::new();
            extra.insert("verdict".into(), json!(v.verdict.as_str()));
            extra.insert("reason".into(), json!(v.reason));
            extra.insert("witness_primes".into(), json!(witness_primes));
            let decided = v.verdict != Verdict::Inconclusive;
            Ok(Report {
                basis,
                certified: decided,
                primes_used: v.primes_used,
                rounds: 0,
                extra,
                code: if decided { EXIT_OK } else { EXIT_INCONCLUSIVE },
            })
        }),
        "idecomp" => Ok((|| {
            let f = rational_basis(i, cfg)?;
            let d = intermediate_decomposition(&f, cfg)?;
            let Value::Object(extra) = d.report() else {
                unreachable!("report is an object")
            };
            let mut extra = extra;
            extra.insert("diagnostics".into(), json!(d.diagnostics));
            let basis: Vec<String> = d
                .components
                .values()
                .filter_map(|g| g.component.as_ref())
                .flat_map(|c| c.component.gens().iter().map(|p| p.to_string()).collect::<Vec<_>>())
                .collect();
            Ok(Report {
                basis,
                certified: d.certified_cover,
                primes_used: d.primes_used.clone(),
                rounds: 0,
                extra,
                code: if d.certified_cover { EXIT_OK } else { EXIT_INCONCLUSIVE },
            })
        })()),
        _ => unreachable!("dispatch covers every subcommand"),
    }
}

fn render(cmd: &str, r: &Report, json_out: bool, wall_micros: u64) -> String {
    if json_out {
        let mut obj = r.extra.clone();
        obj.insert("result_basis".into(), json!(r.basis));
        obj.insert("certified".into(), json!(r.certified));
        obj.insert("primes_used".into(), json!(r.primes_used));
        obj.insert("rounds".into(), json!(r.rounds));
        obj.insert("wall_micros".into(), json!(wall_micros));
        return format!("{}\n", Value::Object(obj));
    }
    let mut out = String::new();
    if let Some(v) = r.extra.get("verdict").and_then(Value::as_str) {
        out.push_str(&format!("verdict: {v}\n"));
        out.push_str(&format!("reason: {}\n", r.extra["reason"].as_str().unwrap_or("")));
    }
    if let Some(m) = r.extra.get("exponent") {
        out.push_str(&format!("exponent: {m}\n"));
    }
    if cmd == "idecomp" {
        if let Some(groups) = r.extra.get("groups").and_then(Value::as_array) {
            for g in groups {
                let u: Vec<&str> = g["U"].as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
                out.push_str(&format!("U = {{{}}}:\n", u.join(", ")));
                out.push_str("  radical:\n");
                for p in g["lifted_basis"].as_array().into_iter().flatten() {
                    out.push_str(&format!("    {}\n", p.as_str().unwrap_or("")));
                }
                out.push_str("  component:\n");
                for p in g["component"].as_array().into_iter().flatten() {
                    out.push_str(&format!("    {}\n", p.as_str().unwrap_or("")));
                }
            }
        }
        for d in r.extra.get("diagnostics").and_then(Value::as_array).into_iter().flatten() {
            out.push_str(&format!("diagnostic: {}\n", d.as_str().unwrap_or("")));
        }
        out.push_str(&format!("cover verified: {}\n", r.certified));
    } else {
        out.push_str(&format!("certified: {}\n", r.certified));
    }
    if !r.primes_used.is_empty() {
        out.push_str(&format!("primes used: {}\n", r.primes_used.len()));
    }
    if r.rounds > 0 {
        out.push_str(&format!("rounds: {}\n", r.rounds));
    }
    if cmd != "idecomp" && !(r.extra.contains_key("verdict") && r.basis.is_empty()) {
        out.push_str("basis:\n");
        for g in &r.basis {
            out.push_str(&format!("  {g}\n"));
        }
    }
    out
}

fn parse_error(path: &std::path::Path, e: ParseError) -> Outcome {
    Outcome::fail(EXIT_USAGE, format!("{}: {e}", path.display()))
}

fn run_op(cmd: &str, a: &OpArgs) -> Outcome {
    let text = match std::fs::read_to_string(&a.input) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(EXIT_USAGE, format!("{}: {e}", a.input.display())),
    };
    let file = match parse_ideal_file(&text) {
        Ok(f) => f,
        Err(e) => return parse_error(&a.input, e),
    };
    let ring = match &a.order {
        None => file.ring.clone(),
        Some(o) => match parse_order(o, file.ring.vars()).and_then(|ord| {
            file.ring.with_order(ord).map_err(|e| ParseError {
                line: 1,
                col: 1,
                msg: e.to_string(),
            })
        }) {
            Ok(r) => r,
            Err(e) => return Outcome::fail(EXIT_USAGE, format!("--order: {e}")),
        },
    };
    let Some(i) = file.ideal_in(&a.ideal, &ring) else {
        return Outcome::fail(EXIT_USAGE, format!("no ideal named '{}'", a.ideal));
    };
    let by = match &a.by {
        None => None,
        Some(n) => match file.ideal_in(n, &ring) {
            Some(j) => Some(j),
            None => return Outcome::fail(EXIT_USAGE, format!("no ideal named '{n}'")),
        },
    };
    let timeout = match timeout_of(&a.run) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(EXIT_USAGE, e),
    };
    let log = a.run.log.as_ref().map(|_| RunLog::new());
    let cfg = config(&a.run, log.clone());
    let t0 = Instant::now();
    let res = par::with_jobs(a.run.jobs, || deadline::with_timeout(timeout, || execute(cmd, &i, &by, &cfg)));
    let wall = t0.elapsed().as_micros() as u64;
    if let (Some(path), Some(log)) = (&a.run.log, &log) {
        if let Err(e) = std::fs::write(path, log.to_jsonl()) {
            return Outcome::fail(EXIT_FAILURE, format!("{}: {e}", path.display()));
        }
    }
    match res {
        Err(usage) => usage,
        Ok(Err(e)) => Outcome::fail(code_for(&e), e),
        Ok(Ok(r)) => Outcome {
            code: r.code,
            stdout: render(cmd, &r, a.run.json, wall),
            stderr: String::new(),
        },
    }
}

fn run_bench(a: &BenchArgs) -> Outcome {
    let timeout = match timeout_of(&a.run) {
        Ok(t) => t.unwrap_or(DEFAULT_TIMEOUT),
        Err(e) => return Outcome::fail(EXIT_USAGE, e),
    };
    let cases = match &a.suite {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return Outcome::fail(EXIT_USAGE, format!("{}: {e}", path.display())),
            };
            match parse_suite(&text, timeout) {
                Ok(c) => c,
                Err(e) => return parse_error(path, e),
            }
        }
        None => match builtin_suite(timeout) {
            Ok(c) => c,
            Err(e) => return Outcome::fail(code_for(&e), e),
        },
    };
    let cfg = config(&a.run, None);
    let rows = par::with_jobs(a.run.jobs, || run_suite(&cases, a.include_slow, &cfg));
    Outcome::ok(if a.run.json {
        format!("{}\n", report(&rows))
    } else {
        table(&rows)
    })
}

/// Runs the command line `argv` (program name first).
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let (name, a) = match &cli.cmd {
        Cmd::Bench(b) => return run_bench(b),
        Cmd::Gb(a) => ("gb", a),
        Cmd::Quotient(a) => ("quotient", a),
        Cmd::Modquotient(a) => ("modquotient", a),
        Cmd::Sat(a) => ("sat", a),
        Cmd::Modsat(a) => ("modsat", a),
        Cmd::Diq(a) => ("diq", a),
        Cmd::Moddiq(a) => ("moddiq", a),
        Cmd::Asstest(a) => ("asstest", a),
        Cmd::Nonasstest(a) => ("nonasstest", a),
        Cmd::Idecomp(a) => ("idecomp", a),
    };
    run_op(name, a)
}
