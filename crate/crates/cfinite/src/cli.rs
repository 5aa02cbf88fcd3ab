//! Command-line front end.
//!
//! Polynomials are given as `--coeffs "c0,c1,..."` (ascending), as
//! `--roots "r1,r2,..."` optionally followed by `--mults "m1,m2,..."`, or as
//! `--terms FILE` holding sequence terms from which an operator is guessed.
//! Operands are taken in command-line order.
//!
//! Exit codes: 0 on a non-empty result, 1 when nothing was found (or the
//! screen says not factorable, or verification fails), 2 on bad input, 3 when
//! `--oracle` disagrees with the search.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;

use clap::{Arg, ArgAction, ArgMatches, Command};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::exactpoly::{
    format_scalar, parse_scalar, parse_scalar_list, rational_roots, DensePoly, ExactScalar,
    FactoredPoly,
};
use crate::gridsearch::{search_grids, CanonicalPair, RootList};
use crate::lincomb::{lincomb_decompose, search_grid_pairs, LinCombDecomposition};
use crate::multiplicity::{factor, TensorDecomposition};
use crate::oracle::{all_small_grids, brute_force_grid_pairs, closure_signature, MAX_GRID_CELLS};
use crate::sequences::{check_product_annihilated, guess_recurrence, CFiniteSeq};
use crate::tensor::{mul_coeff, tensor_factored, test_fact, Verdict};

const ORACLE_MAX_ROOTS: usize = 6;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RootJson {
    pub root: String,
    pub mult: u32,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FactoredJson {
    pub roots: Vec<RootJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DenseJson {
    pub coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum PolyJson {
    Factored(FactoredJson),
    Dense(DenseJson),
}

impl FactoredJson {
    pub fn from_poly(f: &FactoredPoly) -> Self {
        FactoredJson {
            roots: f
                .factors()
                .iter()
                .map(|(r, m)| RootJson {
                    root: format_scalar(r),
                    mult: *m,
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<FactoredPoly> {
        let pairs = self
            .roots
            .iter()
            .map(|r| Ok((parse_scalar(&r.root)?, r.mult)))
            .collect::<Result<Vec<_>>>()?;
        FactoredPoly::new(pairs)
    }
}

impl DenseJson {
    pub fn from_poly(p: &DensePoly) -> Self {
        DenseJson {
            coeffs: p.coeffs().iter().map(format_scalar).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<DensePoly> {
        let c = self
            .coeffs
            .iter()
            .map(|s| parse_scalar(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(DensePoly::new(c))
    }
}

impl PolyJson {
    fn to_factored(&self) -> Result<FactoredPoly> {
        match self {
            PolyJson::Factored(f) => f.to_poly(),
            PolyJson::Dense(d) => rational_roots(&d.to_poly()?),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PairJson {
    pub p: FactoredJson,
    pub q: FactoredJson,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FactorizationJson {
    pub p: FactoredJson,
    pub q: FactoredJson,
    pub canonical: PairJson,
    pub grid: Vec<Vec<usize>>,
    pub e: Vec<u32>,
    pub eps: Vec<u32>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FactorReport {
    pub input: FactoredJson,
    pub factorizations: Vec<FactorizationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
}

/// Input accepted by `verify --input`: either a single claim or a full
/// `factor --json` report.
#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum VerifyDoc {
    Report(FactorReport),
    Claim { p: PolyJson, q: PolyJson, r: PolyJson },
}

fn canonical_json(c: &CanonicalPair) -> PairJson {
    PairJson {
        p: FactoredJson::from_poly(&c.p),
        q: FactoredJson::from_poly(&c.q),
    }
}

fn decomposition_json(d: &TensorDecomposition) -> FactorizationJson {
    FactorizationJson {
        p: FactoredJson::from_poly(&d.p),
        q: FactoredJson::from_poly(&d.q),
        canonical: canonical_json(&d.canonical()),
        grid: d.grid.to_one_based(),
        e: d.assignment.e.clone(),
        eps: d.assignment.eps.clone(),
    }
}

fn lincomb_json(d: &LinCombDecomposition) -> Value {
    json!({
        "p1": FactoredJson::from_poly(&d.p1),
        "q1": FactoredJson::from_poly(&d.q1),
        "p2": FactoredJson::from_poly(&d.p2),
        "q2": FactoredJson::from_poly(&d.q2),
        "degenerate": d.degenerate,
    })
}

enum Operand {
    Dense(DensePoly),
    Factored(FactoredPoly),
}

impl Operand {
    fn dense(&self) -> DensePoly {
        match self {
            Operand::Dense(p) => p.monic(),
            Operand::Factored(f) => f.expand(),
        }
    }

    fn factored(&self) -> Result<FactoredPoly> {
        match self {
            Operand::Dense(p) => rational_roots(p),
            Operand::Factored(f) => Ok(f.clone()),
        }
    }
}

fn read_terms(path: &str) -> Result<Vec<ExactScalar>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        let list = match &v {
            Value::Array(a) => a.clone(),
            Value::Object(o) => match o.get("terms") {
                Some(Value::Array(a)) => a.clone(),
                _ => return Err(Error::Parse(format!("{path}: expected a \"terms\" array"))),
            },
            _ => return Err(Error::Parse(format!("{path}: expected an array"))),
        };
        return list
            .iter()
            .map(|x| match x {
                Value::String(s) => parse_scalar(s),
                other => Err(Error::Parse(format!("terms must be strings, got {other}"))),
            })
            .collect();
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_scalar)
        .collect()
}

fn parse_mults(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad multiplicity {s:?}: {e}")))
        })
        .collect()
}

fn operands(m: &ArgMatches) -> Result<Vec<Operand>> {
    let mut events: Vec<(usize, &str, String)> = Vec::new();
    for id in ["coeffs", "roots", "mults", "terms"] {
        if let (Some(vals), Some(idx)) = (m.get_many::<String>(id), m.indices_of(id)) {
            for (v, i) in vals.zip(idx) {
                events.push((i, id, v.clone()));
            }
        }
    }
    events.sort_by_key(|e| e.0);

    let mut out: Vec<Operand> = Vec::new();
    let mut pending_roots: Option<Vec<ExactScalar>> = None;
    let flush = |pending: &mut Option<Vec<ExactScalar>>, out: &mut Vec<Operand>| -> Result<()> {
        if let Some(r) = pending.take() {
            out.push(Operand::Factored(FactoredPoly::from_roots(&r)?));
        }
        Ok(())
    };
    for (_, id, v) in events {
        match id {
            "mults" => {
                let roots = pending_roots
                    .take()
                    .ok_or_else(|| invalid("--mults must follow a --roots list"))?;
                let mults = parse_mults(&v)?;
                if mults.len() != roots.len() {
                    return Err(invalid("--mults and --roots differ in length"));
                }
                out.push(Operand::Factored(FactoredPoly::new(roots.into_iter().zip(mults))?));
            }
            "roots" => {
                flush(&mut pending_roots, &mut out)?;
                pending_roots = Some(parse_scalar_list(&v)?);
            }
            "coeffs" => {
                flush(&mut pending_roots, &mut out)?;
                let p = DensePoly::parse(&v)?;
                if p.is_zero() {
                    return Err(invalid("zero polynomial"));
                }
                out.push(Operand::Dense(p));
            }
            _ => {
                flush(&mut pending_roots, &mut out)?;
                out.push(Operand::Dense(guess_recurrence(&read_terms(&v)?)?));
            }
        }
    }
    flush(&mut pending_roots, &mut out)?;
    Ok(out)
}

fn exactly<const N: usize>(m: &ArgMatches) -> Result<[Operand; N]> {
    let ops = operands(m)?;
    let got = ops.len();
    ops.try_into()
        .map_err(|_| invalid(format!("expected {N} polynomial operand(s), got {got}")))
}

fn poly_args(cmd: Command) -> Command {
    cmd.arg(Arg::new("coeffs").long("coeffs").action(ArgAction::Append).allow_hyphen_values(true).value_name("C0,C1,..").help("ascending coefficients"))
        .arg(Arg::new("roots").long("roots").action(ArgAction::Append).allow_hyphen_values(true).value_name("R1,R2,..").help("roots, repeated roots add up"))
        .arg(Arg::new("mults").long("mults").action(ArgAction::Append).allow_hyphen_values(true).value_name("M1,M2,..").help("multiplicities for the preceding --roots"))
        .arg(Arg::new("terms").long("terms").action(ArgAction::Append).allow_hyphen_values(true).value_name("FILE").help("sequence terms; an operator is guessed"))
        .arg(Arg::new("json").long("json").action(ArgAction::SetTrue).help("JSON output"))
}

fn command() -> Command {
    let seed = Arg::new("seed")
        .long("seed")
        .value_parser(clap::value_parser!(u64))
        .default_value("0")
        .help("seed for randomized checks");
    let oracle = Arg::new("oracle")
        .long("oracle")
        .action(ArgAction::SetTrue)
        .help("cross-check against exhaustive enumeration (at most 6 distinct roots)");
    Command::new("cfinite")
        .about("Tensor products and tensor factorization of C-finite recurrence operators")
        .subcommand_required(true)
        .subcommand(poly_args(Command::new("tensor").about("tensor product of two operators from their roots")))
        .subcommand(poly_args(Command::new("mul").about("full root-product polynomial from coefficients alone")))
        .subcommand(poly_args(Command::new("testfact").about("quick screen for factorability of a squarefree operator")))
        .subcommand(poly_args(Command::new("factor").about("all factorizations r = p ⊗ q")).arg(oracle.clone()))
        .subcommand(poly_args(Command::new("lincomb").about("decompositions r = lcm(p1 ⊗ q1, p2 ⊗ q2)")).arg(oracle))
        .subcommand(
            Command::new("guess")
                .about("minimal recurrence for a list of terms")
                .arg(Arg::new("terms").long("terms").required(true).value_name("FILE"))
                .arg(Arg::new("json").long("json").action(ArgAction::SetTrue)),
        )
        .subcommand(
            poly_args(Command::new("unroll").about("terms of a sequence from its operator and initial values"))
                .arg(Arg::new("init").long("init").required(true).allow_hyphen_values(true).value_name("A0,A1,.."))
                .arg(
                    Arg::new("count")
                        .long("count")
                        .value_parser(clap::value_parser!(usize))
                        .default_value("10"),
                ),
        )
        .subcommand(
            poly_args(Command::new("verify").about("check a claimed r = p ⊗ q (operands p, q, r or --input FILE)"))
                .arg(Arg::new("input").long("input").value_name("FILE"))
                .arg(seed)
                .arg(
                    Arg::new("trials")
                        .long("trials")
                        .value_parser(clap::value_parser!(usize))
                        .default_value("5"),
                ),
        )
}

struct Output {
    code: i32,
    text: String,
    json: Value,
}

fn found(nonempty: bool) -> i32 {
    if nonempty {
        0
    } else {
        1
    }
}

fn cmd_tensor(m: &ArgMatches) -> Result<Output> {
    let [a, b] = exactly::<2>(m)?;
    let t = tensor_factored(&a.factored()?, &b.factored()?);
    let dense = t.expand();
    Ok(Output {
        code: 0,
        text: format!("{t}\n{dense}\n"),
        json: json!({"factored": FactoredJson::from_poly(&t), "dense": DenseJson::from_poly(&dense)}),
    })
}

fn cmd_mul(m: &ArgMatches) -> Result<Output> {
    let [a, b] = exactly::<2>(m)?;
    let r = mul_coeff(&a.dense(), &b.dense())?;
    Ok(Output {
        code: 0,
        text: format!("{r}\n"),
        json: serde_json::to_value(DenseJson::from_poly(&r)).expect("serializable"),
    })
}

fn cmd_testfact(m: &ArgMatches) -> Result<Output> {
    let [a] = exactly::<1>(m)?;
    let rep = test_fact(&a.dense())?;
    let name = match rep.verdict {
        Verdict::NotFactorable => "NotFactorable",
        Verdict::PossiblyFactorable => "PossiblyFactorable",
    };
    let prof: Vec<String> = rep.profile.pairs().iter().map(|(mu, c)| format!("{mu}:{c}")).collect();
    Ok(Output {
        code: found(rep.verdict == Verdict::PossiblyFactorable),
        text: format!("{name}\nprofile {}\n", prof.join(" ")),
        json: json!({
            "verdict": name,
            "profile": rep.profile.pairs().iter().map(|(mu, c)| json!({"mult": mu, "count": c})).collect::<Vec<_>>(),
        }),
    })
}

fn grid_oracle(roots: &RootList) -> Result<Option<bool>> {
    if roots.len() > ORACLE_MAX_ROOTS {
        return Ok(None);
    }
    let ours = closure_signature(roots, &search_grids(roots));
    let brute = closure_signature(roots, &all_small_grids(roots)?);
    Ok(Some(ours == brute))
}

fn oracle_word(v: Option<bool>) -> &'static str {
    match v {
        None => "skipped",
        Some(true) => "agrees",
        Some(false) => "disagrees",
    }
}

fn cmd_factor(m: &ArgMatches) -> Result<Output> {
    let [a] = exactly::<1>(m)?;
    let r = a.factored()?;
    let got = factor(&r)?;
    let oracle = if m.get_flag("oracle") {
        Some(grid_oracle(&RootList::from_factored(&r))?)
    } else {
        None
    };
    let mut text = String::new();
    for d in &got {
        writeln!(text, "{}", d.canonical()).expect("string write");
    }
    if got.is_empty() {
        text.push_str("no factorization\n");
    }
    if let Some(o) = oracle {
        writeln!(text, "oracle: {}", oracle_word(o)).expect("string write");
    }
    let report = FactorReport {
        input: FactoredJson::from_poly(&r),
        factorizations: got.iter().map(decomposition_json).collect(),
        oracle: oracle.map(|o| oracle_word(o).to_string()),
    };
    let code = if oracle == Some(Some(false)) { 3 } else { found(!got.is_empty()) };
    Ok(Output {
        code,
        text,
        json: serde_json::to_value(report).expect("serializable"),
    })
}

fn pair_oracle(roots: &RootList) -> Result<Option<bool>> {
    if roots.len() > ORACLE_MAX_ROOTS {
        return Ok(None);
    }
    let small = |g: &crate::gridsearch::GridMap| g.n() * g.m() <= MAX_GRID_CELLS;
    let ours: Vec<_> = search_grid_pairs(roots)?
        .into_iter()
        .filter(|p| !p.is_degenerate() && small(p.first()) && small(p.second()))
        .collect();
    Ok(Some(ours == brute_force_grid_pairs(roots)?))
}

fn cmd_lincomb(m: &ArgMatches) -> Result<Output> {
    let [a] = exactly::<1>(m)?;
    let r = a.factored()?;
    let got = lincomb_decompose(&r)?;
    let oracle = if m.get_flag("oracle") {
        Some(pair_oracle(&RootList::from_factored(&r.squarefree()))?)
    } else {
        None
    };
    let mut text = String::new();
    for d in &got {
        let (c1, c2) = d.canonical();
        let tag = if d.degenerate { " [degenerate]" } else { "" };
        writeln!(text, "lcm({c1}, {c2}){tag}").expect("string write");
    }
    if got.is_empty() {
        text.push_str("no decomposition\n");
    }
    if let Some(o) = oracle {
        writeln!(text, "oracle: {}", oracle_word(o)).expect("string write");
    }
    let mut doc = json!({
        "input": FactoredJson::from_poly(&r),
        "decompositions": got.iter().map(lincomb_json).collect::<Vec<_>>(),
    });
    if let Some(o) = oracle {
        doc["oracle"] = json!(oracle_word(o));
    }
    let code = if oracle == Some(Some(false)) { 3 } else { found(!got.is_empty()) };
    Ok(Output { code, text, json: doc })
}

fn cmd_guess(m: &ArgMatches) -> Result<Output> {
    let path = m.get_one::<String>("terms").expect("required");
    let p = guess_recurrence(&read_terms(path)?)?;
    Ok(Output {
        code: 0,
        text: format!("{p}\n"),
        json: serde_json::to_value(DenseJson::from_poly(&p)).expect("serializable"),
    })
}

fn cmd_unroll(m: &ArgMatches) -> Result<Output> {
    let [a] = exactly::<1>(m)?;
    let init = parse_scalar_list(m.get_one::<String>("init").expect("required"))?;
    let count = *m.get_one::<usize>("count").expect("defaulted");
    let terms = CFiniteSeq::new(&a.dense(), init)?.unroll(count);
    let strs: Vec<String> = terms.iter().map(format_scalar).collect();
    Ok(Output {
        code: 0,
        text: format!("{}\n", strs.join(",")),
        json: json!({ "terms": strs }),
    })
}

fn verify_one(p: &FactoredPoly, q: &FactoredPoly, r: &FactoredPoly, trials: usize, seed: u64) -> Result<bool> {
    if tensor_factored(p, q) != *r {
        return Ok(false);
    }
    check_product_annihilated(&p.expand(), &q.expand(), &r.expand(), trials, 10, seed)
}

fn cmd_verify(m: &ArgMatches) -> Result<Output> {
    let seed = *m.get_one::<u64>("seed").expect("defaulted");
    let trials = *m.get_one::<usize>("trials").expect("defaulted");
    let mut claims: Vec<(FactoredPoly, FactoredPoly, FactoredPoly)> = Vec::new();
    if let Some(path) = m.get_one::<String>("input") {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        let doc: VerifyDoc = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        match doc {
            VerifyDoc::Report(rep) => {
                let r = rep.input.to_poly()?;
                for f in &rep.factorizations {
                    claims.push((f.p.to_poly()?, f.q.to_poly()?, r.clone()));
                }
            }
            VerifyDoc::Claim { p, q, r } => claims.push((p.to_factored()?, q.to_factored()?, r.to_factored()?)),
        }
    } else {
        let [p, q, r] = exactly::<3>(m)?;
        claims.push((p.factored()?, q.factored()?, r.factored()?));
    }
    if claims.is_empty() {
        return Err(invalid("nothing to verify"));
    }
    let mut ok = true;
    let mut text = String::new();
    let mut results = Vec::new();
    for (p, q, r) in &claims {
        let good = verify_one(p, q, r, trials, seed)?;
        ok &= good;
        writeln!(text, "{} {p} ⊗ {q} = {r}", if good { "ok" } else { "FAILED" }).expect("string write");
        results.push(json!({
            "p": FactoredJson::from_poly(p),
            "q": FactoredJson::from_poly(q),
            "r": FactoredJson::from_poly(r),
            "ok": good,
        }));
    }
    Ok(Output {
        code: found(ok),
        text,
        json: json!({ "ok": ok, "results": results }),
    })
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out, err) = run_captured(argv);
    print!("{out}");
    eprint!("{err}");
    code
}

/// Like [`run`], returning `(exit code, stdout, stderr)` instead of printing.
pub fn run_captured<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), rendered)
            } else {
                (code, rendered, String::new())
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let res = match name {
        "tensor" => cmd_tensor(sub),
        "mul" => cmd_mul(sub),
        "testfact" => cmd_testfact(sub),
        "factor" => cmd_factor(sub),
        "lincomb" => cmd_lincomb(sub),
        "guess" => cmd_guess(sub),
        "unroll" => cmd_unroll(sub),
        "verify" => cmd_verify(sub),
        _ => unreachable!("unknown subcommand"),
    };
    match res {
        Ok(o) => {
            let body = if sub.get_flag("json") {
                format!("{}\n", serde_json::to_string_pretty(&o.json).expect("serializable"))
            } else {
                o.text
            };
            (o.code, body, String::new())
        }
        Err(e) => (2, String::new(), format!("error: {e}\n")),
    }
}
