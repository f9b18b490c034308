//! Direct vs modular timings on named cases.
//!
//! A suite file is an ideal file with extra `case` lines:
//!
//! ```text
//! case NAME: OP IDEAL [BY] [timeout=SECS] [slow]
//! ```
//!
//! where `OP` is one of `gb`, `quotient`, `sat`, `diq`.

use std::time::{Duration, Instant};

use moddiq_core::deadline;
use moddiq_core::diq::{diq, mod_diq};
use moddiq_core::error::{Error, Result};
use moddiq_core::families::{cyclic, cyclic6_p1, ring_n, stress_i1, stress_i2, stress_i3, xk_xy, xy_ideal, xyz};
use moddiq_core::field::Rationals;
use moddiq_core::groebner::{GroebnerBasis, Ideal};
use moddiq_core::idealops::{product, quotient, saturate};
use moddiq_core::modular::{mod_quotient, mod_saturate, rational_basis, ModularRunConfig};
use moddiq_core::polycore::{MonomialOrder, Poly};
use serde_json::{json, Value};

use crate::format::{parse_ideal_file, ParseError};

type Q = Rationals;

/// Default per-path budget.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchOp {
    Gb,
    Quotient,
    Saturation,
    Diq,
}

impl BenchOp {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchOp::Gb => "gb",
            BenchOp::Quotient => "quotient",
            BenchOp::Saturation => "sat",
            BenchOp::Diq => "diq",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "gb" => BenchOp::Gb,
            "quotient" => BenchOp::Quotient,
            "sat" => BenchOp::Saturation,
            "diq" => BenchOp::Diq,
            _ => return None,
        })
    }
}

/// One row of a suite. `by` is required for every operation but `gb`.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub name: String,
    pub op: BenchOp,
    pub ideal: Vec<Poly<Q>>,
    pub by: Option<Vec<Poly<Q>>>,
    pub timeout: Duration,
    /// Excluded unless slow cases are requested.
    pub slow: bool,
}

/// How one path ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathStatus {
    Done { micros: u64 },
    Timeout,
    Failed(String),
}

impl PathStatus {
    fn cell(&self) -> String {
        match self {
            PathStatus::Done { micros } => format!("{:.3}s", *micros as f64 / 1e6),
            PathStatus::Timeout => "TIMEOUT".into(),
            PathStatus::Failed(_) => "ERROR".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            PathStatus::Done { micros } => json!({"status": "ok", "micros": micros}),
            PathStatus::Timeout => json!({"status": "timeout", "micros": null}),
            PathStatus::Failed(e) => json!({"status": "error", "micros": null, "error": e}),
        }
    }
}

/// Outcome of one case.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub name: String,
    pub op: BenchOp,
    pub direct: PathStatus,
    pub modular: PathStatus,
    /// `None` unless both paths finished.
    pub equal: Option<bool>,
    /// Modular result if that path finished, else the direct one.
    pub basis: Option<GroebnerBasis<Q>>,
}

impl BenchRow {
    pub fn equal_cell(&self) -> &'static str {
        match self.equal {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n-a",
        }
    }
}

/// Result basis and, for saturation, the exponent.
type PathResult = (GroebnerBasis<Q>, Option<u32>);

fn fresh(gens: &[Poly<Q>]) -> Result<Ideal<Q>> {
    let ring = gens
        .first()
        .map(|g| g.ring().clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    Ideal::new(&ring, gens.to_vec())
}

fn by_of(case: &BenchCase) -> Result<&[Poly<Q>]> {
    case.by
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("case {} needs a second ideal", case.name)))
}

fn run_direct(case: &BenchCase) -> Result<PathResult> {
    let i = fresh(&case.ideal)?;
    let out = match case.op {
        BenchOp::Gb => (i, None),
        BenchOp::Quotient => (quotient(&i, &fresh(by_of(case)?)?)?, None),
        BenchOp::Saturation => {
            let (s, m) = saturate(&i, &fresh(by_of(case)?)?)?;
            (s, Some(m))
        }
        BenchOp::Diq => (diq(&i, &fresh(by_of(case)?)?)?, None),
    };
    Ok(((*out.0.gb()?).clone(), out.1))
}

fn run_modular(case: &BenchCase, cfg: &ModularRunConfig) -> Result<PathResult> {
    let f = rational_basis(&fresh(&case.ideal)?, cfg)?;
    if case.op == BenchOp::Gb {
        return Ok((f, None));
    }
    let by = by_of(case)?;
    Ok(match case.op {
        BenchOp::Gb => unreachable!("handled above"),
        BenchOp::Quotient => (mod_quotient(&f, by, cfg)?.basis, None),
        BenchOp::Saturation => {
            let o = mod_saturate(&f, by, cfg)?;
            (o.basis, Some(o.extra))
        }
        BenchOp::Diq => (mod_diq(&f, by, cfg)?.basis, None),
    })
}

fn timed(timeout: Duration, f: impl FnOnce() -> Result<PathResult>) -> (PathStatus, Option<PathResult>) {
    let t0 = Instant::now();
    match deadline::with_timeout(Some(timeout), f) {
        Ok(r) => (
            PathStatus::Done {
                micros: t0.elapsed().as_micros() as u64,
            },
            Some(r),
        ),
        Err(Error::Timeout) => (PathStatus::Timeout, None),
        Err(e) => (PathStatus::Failed(e.to_string()), None),
    }
}

/// Runs both paths of one case, each under the case's timeout.
pub fn run_case(case: &BenchCase, cfg: &ModularRunConfig) -> BenchRow {
    let (direct, d) = timed(case.timeout, || run_direct(case));
    let (modular, m) = timed(case.timeout, || run_modular(case, cfg));
    let equal = match (&d, &m) {
        (Some(a), Some(b)) => Some(a.0.polys() == b.0.polys() && a.1 == b.1),
        _ => None,
    };
    let basis = m.or(d).map(|r| r.0);
    BenchRow {
        name: case.name.clone(),
        op: case.op,
        direct,
        modular,
        equal,
        basis,
    }
}

/// Runs the cases in order, skipping slow ones unless `include_slow`.
pub fn run_suite(cases: &[BenchCase], include_slow: bool, cfg: &ModularRunConfig) -> Vec<BenchRow> {
    cases
        .iter()
        .filter(|c| include_slow || !c.slow)
        .map(|c| run_case(c, cfg))
        .collect()
}

/// Fixed-width text table.
pub fn table(rows: &[BenchRow]) -> String {
    let mut out = format!("{:<28} {:<9} {:>12} {:>12} {:>6}\n", "case", "op", "direct", "modular", "equal");
    for r in rows {
        out.push_str(&format!(
            "{:<28} {:<9} {:>12} {:>12} {:>6}\n",
            r.name,
            r.op.as_str(),
            r.direct.cell(),
            r.modular.cell(),
            r.equal_cell()
        ));
    }
    out
}

/// JSON report, keys sorted.
pub fn report(rows: &[BenchRow]) -> Value {
    let cases: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "case": r.name,
                "op": r.op.as_str(),
                "direct": r.direct.json(),
                "modular": r.modular.json(),
                "equal_results": r.equal_cell(),
            })
        })
        .collect();
    json!({ "cases": cases })
}

/// Parses a suite file. A file without `case` lines and without ideals is
/// the empty suite.
pub fn parse_suite(text: &str, timeout: Duration) -> std::result::Result<Vec<BenchCase>, ParseError> {
    let mut rest = String::new();
    let mut case_lines = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim_start().starts_with("case ") {
            case_lines.push((k + 1, body.len() - body.trim_start().len() + 1, body.trim().to_string()));
            rest.push('\n');
        } else {
            rest.push_str(line);
            rest.push('\n');
        }
    }
    if case_lines.is_empty() && rest.lines().all(|l| l.split('#').next().unwrap_or("").trim().is_empty()) {
        return Ok(Vec::new());
    }
    let file = parse_ideal_file(&rest)?;
    let mut cases = Vec::new();
    for (line, col, text) in case_lines {
        let err = |msg: String| ParseError { line, col, msg };
        let body = &text["case ".len()..];
        let Some((name, rest)) = body.split_once(':') else {
            return Err(err("expected ':' after the case name".into()));
        };
        let name = name.trim().to_string();
        if name.is_empty() || cases.iter().any(|c: &BenchCase| c.name == name) {
            return Err(err(format!("missing or duplicate case name '{name}'")));
        }
        let mut words = rest.split_whitespace();
        let op = words.next().and_then(BenchOp::parse).ok_or_else(|| err("expected gb, quotient, sat or diq".into()))?;
        let mut refs = Vec::new();
        let mut case_timeout = timeout;
        let mut slow = false;
        for w in words {
            if let Some(t) = w.strip_prefix("timeout=") {
                let secs: f64 = t.parse().map_err(|_| err(format!("bad timeout '{t}'")))?;
                case_timeout = Duration::try_from_secs_f64(secs).map_err(|_| err(format!("bad timeout '{t}'")))?;
            } else if w == "slow" {
                slow = true;
            } else {
                let gens = file.get(w).ok_or_else(|| err(format!("unknown ideal '{w}'")))?;
                refs.push(gens.to_vec());
            }
        }
        let want = if op == BenchOp::Gb { 1 } else { 2 };
        if refs.len() != want {
            return Err(err(format!("{} takes {want} ideal(s), got {}", op.as_str(), refs.len())));
        }
        let by = refs.pop().filter(|_| want == 2);
        let ideal = refs.pop().unwrap_or_default();
        cases.push(BenchCase {
            name,
            op,
            ideal,
            by,
            timeout: case_timeout,
            slow,
        });
    }
    Ok(cases)
}

fn case(name: &str, op: BenchOp, i: Ideal<Q>, by: Option<Ideal<Q>>, timeout: Duration, slow: bool) -> BenchCase {
    BenchCase {
        name: name.into(),
        op,
        ideal: i.gens().to_vec(),
        by: by.map(|b| b.gens().to_vec()),
        timeout,
        slow,
    }
}

/// `I^m` as products of generators, without computing a basis.
fn power_gens(i: &Ideal<Q>, m: u32) -> Result<Ideal<Q>> {
    let mut acc = i.clone();
    for _ in 1..m {
        acc = product(&acc, i)?;
    }
    Ok(acc)
}

/// The stress family over `Q[x,y,z]` and cyclic(n) for n ≤ 6. Cases
/// marked slow are skipped unless requested.
pub fn builtin_suite(timeout: Duration) -> Result<Vec<BenchCase>> {
    use BenchOp::*;
    let r = xyz();
    let i1 = stress_i1(&r);
    let i2 = stress_i2(&r);
    let i3 = stress_i3(&r);
    let xy = xy_ideal(&r);
    let i3_x2xy = product(&i3, &xk_xy(&r, 2))?;
    let i3sq = power_gens(&i3, 2)?;
    let i1sq = power_gens(&i1, 2)?;
    let mut out = vec![
        case("i3*(x2,xy):(x,y)", Quotient, i3_x2xy.clone(), Some(xy.clone()), timeout, false),
        case("i1^2:i1", Quotient, i1sq.clone(), Some(i1.clone()), timeout, false),
        case("i3*(x3,xy):(x,y)^inf", Saturation, product(&i3, &xk_xy(&r, 3))?, Some(xy.clone()), timeout, false),
        case("i3*(x2,xy):(i3*(x2,xy):(x,y))", Diq, i3_x2xy, Some(xy.clone()), timeout, false),
        case("i3^2*(x2,xy):(x,y)", Quotient, product(&i3sq, &xk_xy(&r, 2))?, Some(xy.clone()), timeout, true),
        case("i1^3:i1", Quotient, power_gens(&i1, 3)?, Some(i1.clone()), timeout, true),
        case("i1*i2:i1", Quotient, product(&i1, &i2)?, Some(i1.clone()), timeout, true),
        case("i1^2*i2:i1^inf", Saturation, product(&i1sq, &i2)?, Some(i1.clone()), timeout, true),
        case("i3*(x100,xy):(x,y)^inf", Saturation, product(&i3, &xk_xy(&r, 100))?, Some(xy), timeout, true),
    ];
    for n in 3..=6 {
        let rn = ring_n(n, MonomialOrder::Grevlex);
        out.push(case(&format!("cyclic({n})"), Gb, cyclic(&rn), None, timeout, n == 6));
    }
    let r6 = ring_n(6, MonomialOrder::Grevlex);
    out.push(case("cyclic(6):p1", Quotient, cyclic(&r6), Some(cyclic6_p1(&r6)), timeout, true));
    Ok(out)
}
