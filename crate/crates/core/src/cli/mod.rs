//! Command-line front end: `.div` problem files, `.prf` proof scripts and
//! the `check`, `prove`, `derive` and `falsify` commands.
//!
//! ```text
//! # rotation
//! var x, y
//! const p
//! ode x' = y, y' = -x
//! domain true
//! pre x^2 + y^2 >= p^2
//! post x^2 + y^2 >= p^2
//! ```

pub mod script;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser as ClapParser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::point_json;
use crate::derivation::{derive_formula_with, DerivationMode, OdeSystem};
use crate::formulas::{parse_formula, Formula, OperatorClass};
use crate::kernel::{check_proof, CheckReport, Kernel, NodePath, Problem, ProofNode, TreeVerdict};
use crate::numsim::{describe, falsify, FalsifyConfig};
use crate::search::{search_with_cuts, SearchConfig};
use crate::terms::{parse_polynomial, ParseError, Parser, Polynomial, Rational, TokenKind, Var};
use script::parse_script;

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
/// Search or falsification found nothing.
pub const EXIT_NONE: i32 = 4;

pub const SEED_VAR: &str = "DIFFINV_SEED";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: ParseError },
    #[error("line {line}: unknown keyword `{word}`")]
    UnknownKeyword { line: usize, word: String },
    #[error("line {line}: `{keyword}` given twice")]
    Duplicate { line: usize, keyword: &'static str },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("symbol `{0}` is not declared")]
    Undeclared(Var),
    #[error("`{0}` is declared twice")]
    Redeclared(Var),
    #[error("constant `{0}` cannot have a differential equation")]
    ConstantEvolves(Var),
    #[error("`{0}` has two differential equations")]
    DoubleEquation(Var),
}

/// A parsed `.div` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub vars: Vec<Var>,
    pub consts: Vec<Var>,
    pub problem: Problem,
}

fn names(line: usize, rest: &str) -> Result<Vec<Var>, ProblemError> {
    let mut p = Parser::new(rest).map_err(|source| ProblemError::Syntax { line, source })?;
    let mut out = Vec::new();
    loop {
        let name = p.ident("a name").map_err(|source| ProblemError::Syntax { line, source })?;
        out.push(Var::new(&name));
        if !p.eat(&TokenKind::Comma) {
            break;
        }
    }
    p.finish().map_err(|source| ProblemError::Syntax { line, source })?;
    Ok(out)
}

fn equations(line: usize, rest: &str) -> Result<Vec<(Var, Polynomial)>, ProblemError> {
    let wrap = |source| ProblemError::Syntax { line, source };
    let mut p = Parser::new(rest).map_err(wrap)?;
    let mut out = Vec::new();
    loop {
        let name = p.ident("a variable").map_err(wrap)?;
        p.expect(&TokenKind::Prime, "`'`").map_err(wrap)?;
        p.expect(&TokenKind::Eq, "`=`").map_err(wrap)?;
        out.push((Var::new(&name), p.term().map_err(wrap)?));
        if !p.eat(&TokenKind::Comma) {
            break;
        }
    }
    p.finish().map_err(wrap)?;
    Ok(out)
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, ProblemError> {
        let mut vars = Vec::new();
        let mut consts = Vec::new();
        let mut ode: Option<Vec<(Var, Polynomial)>> = None;
        let (mut domain, mut pre, mut post) = (None, None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (word, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let formula = |rest: &str| parse_formula(rest).map_err(|source| ProblemError::Syntax { line, source });
            let once = |slot: &mut Option<Formula>, keyword: &'static str, f: Formula| {
                if slot.replace(f).is_some() {
                    return Err(ProblemError::Duplicate { line, keyword });
                }
                Ok(())
            };
            match word {
                "var" => vars.extend(names(line, rest)?),
                "const" => consts.extend(names(line, rest)?),
                "ode" => {
                    if ode.replace(equations(line, rest)?).is_some() {
                        return Err(ProblemError::Duplicate { line, keyword: "ode" });
                    }
                }
                "domain" => once(&mut domain, "domain", formula(rest)?)?,
                "pre" => once(&mut pre, "pre", formula(rest)?)?,
                "post" => once(&mut post, "post", formula(rest)?)?,
                _ => return Err(ProblemError::UnknownKeyword { line, word: word.to_string() }),
            }
        }
        let ode = ode.ok_or(ProblemError::Missing("ode"))?;
        let pre = pre.ok_or(ProblemError::Missing("pre"))?;
        let post = post.ok_or(ProblemError::Missing("post"))?;
        let domain = domain.unwrap_or(Formula::True);

        let mut declared = BTreeSet::new();
        for v in vars.iter().chain(&consts) {
            if !declared.insert(v.clone()) {
                return Err(ProblemError::Redeclared(v.clone()));
            }
        }
        let mut evolving = BTreeSet::new();
        for (v, _) in &ode {
            if consts.contains(v) {
                return Err(ProblemError::ConstantEvolves(v.clone()));
            }
            if !evolving.insert(v.clone()) {
                return Err(ProblemError::DoubleEquation(v.clone()));
            }
        }
        let sys = OdeSystem::new(ode, domain);
        let mut used = sys.symbols();
        used.extend(pre.vars());
        used.extend(post.vars());
        if let Some(v) = used.into_iter().find(|v| !declared.contains(v)) {
            return Err(ProblemError::Undeclared(v));
        }
        Ok(ProblemFile { vars, consts, problem: Problem::new(sys, pre, post) })
    }
}

impl std::str::FromStr for ProblemFile {
    type Err = ProblemError;
    fn from_str(s: &str) -> Result<ProblemFile, ProblemError> {
        ProblemFile::parse(s)
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }

    fn out(code: i32, stdout: String) -> Outcome {
        Outcome { code, stdout, stderr: String::new() }
    }
}

#[derive(Debug, ClapParser)]
#[command(name = "diffinv", version, about = "Differential invariant proofs for polynomial ODEs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Problem file (.div)
    pub problem: PathBuf,
    /// Oracle seed; defaults to $DIFFINV_SEED, then 0
    #[arg(long)]
    pub seed: Option<u64>,
    /// Machine-readable output
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a proof script through the kernel
    Check {
        #[command(flatten)]
        common: Common,
        /// Proof script (.prf)
        #[arg(long)]
        proof: PathBuf,
        /// Derive `p > 0` to `D(p) > 0` instead of `D(p) >= 0`
        #[arg(long)]
        strict: bool,
    },
    /// Search for a proof
    Prove {
        #[command(flatten)]
        common: Common,
        /// Operator class, a comma list from geq,gt,eq,and,or
        #[arg(long, default_value = "geq,gt,eq,and,or")]
        class: String,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        /// Coefficient pool, e.g. `-1,0,1`, `-2..2` or `1/2,1`
        #[arg(long, default_value = "-1..1", allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value_t = 2)]
        max_atoms: usize,
        /// Maximum number of differential cuts
        #[arg(long, default_value_t = 0)]
        cuts: usize,
        /// Allow open differential induction
        #[arg(long)]
        open: bool,
        /// Enable auxiliary templates `y' = c*y` (any value >= 1)
        #[arg(long, default_value_t = 0)]
        da_degree: u32,
        /// Maximum number of candidates examined
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Print the differential formula of F under the problem's ODE
    Derive {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        formula: String,
        #[arg(long)]
        strict: bool,
    },
    /// Search numerically for a trajectory leaving the postcondition
    Falsify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Sampling box `lo,hi` applied to every variable
        #[arg(long = "box", default_value = "-5,5", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long, default_value_t = 10.0)]
        time: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_problem(path: &Path) -> Result<ProblemFile, String> {
    ProblemFile::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn seed(common: &Common, env_seed: Option<&str>) -> Result<u64, String> {
    match (common.seed, env_seed) {
        (Some(s), _) => Ok(s),
        (None, Some(s)) => s.trim().parse().map_err(|_| format!("{SEED_VAR}={s} is not a seed")),
        (None, None) => Ok(0),
    }
}

fn rational(text: &str) -> Result<Rational, String> {
    let p = parse_polynomial(text).map_err(|e| format!("`{text}`: {e}"))?;
    p.constant_value().ok_or_else(|| format!("`{text}` is not a number"))
}

/// `-1,0,1`, `-2..2`, or a mix.
pub fn parse_pool(text: &str) -> Result<Vec<Rational>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let (lo, hi) = (rational(lo)?, rational(hi)?);
            if !lo.is_integer() || !hi.is_integer() || lo > hi {
                return Err(format!("bad range `{part}`"));
            }
            let mut c = lo;
            while c <= hi {
                out.push(c.clone());
                c += Rational::from_integer(1.into());
            }
        } else {
            out.push(rational(part)?);
        }
    }
    if out.is_empty() {
        return Err("coefficient pool is empty".into());
    }
    Ok(out)
}

fn parse_box(text: &str) -> Result<(Rational, Rational), String> {
    let (lo, hi) = text.split_once(',').ok_or_else(|| format!("box `{text}` is not `lo,hi`"))?;
    let (lo, hi) = (rational(lo.trim())?, rational(hi.trim())?);
    if lo > hi {
        return Err(format!("box `{text}` is empty"));
    }
    Ok((lo, hi))
}

fn leaf_index(report: &CheckReport) -> std::collections::HashMap<&NodePath, &crate::kernel::LeafStatus> {
    report.leaves.iter().map(|(p, s)| (p, s)).collect()
}

fn render_tree(tree: &ProofNode, report: &CheckReport) -> String {
    let leaves = leaf_index(report);
    let mut out = String::new();
    fn go(
        node: &ProofNode,
        path: NodePath,
        depth: usize,
        leaves: &std::collections::HashMap<&NodePath, &crate::kernel::LeafStatus>,
        out: &mut String,
    ) {
        let pad = "  ".repeat(depth);
        let _ = write!(out, "{pad}{}  {}", node.rule, node.conclusion);
        if let Some(s) = leaves.get(&path) {
            let _ = write!(out, "  [{s}]");
        }
        out.push('\n');
        for (i, p) in node.premises.iter().enumerate() {
            let mut child = path.0.clone();
            child.push(i);
            go(p, NodePath(child), depth + 1, leaves, out);
        }
    }
    go(tree, NodePath::default(), 0, &leaves, &mut out);
    out
}

/// The tree as JSON: rule ids, rule instantiations, conclusions and leaf
/// verdicts.
pub fn tree_json(tree: &ProofNode, report: &CheckReport) -> Value {
    let leaves = leaf_index(report);
    fn go(
        node: &ProofNode,
        path: NodePath,
        leaves: &std::collections::HashMap<&NodePath, &crate::kernel::LeafStatus>,
    ) -> Value {
        let mut inst = serde_json::to_value(&node.rule).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut inst {
            m.remove("rule");
        }
        let premises: Vec<Value> = node
            .premises
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut child = path.0.clone();
                child.push(i);
                go(p, NodePath(child), leaves)
            })
            .collect();
        let mut v = json!({
            "path": path.to_string(),
            "rule": node.rule.id(),
            "instantiation": inst,
            "conclusion": node.conclusion.to_string(),
        });
        if let Some(s) = leaves.get(&path) {
            v["leaf"] = serde_json::to_value(s).unwrap_or(Value::Null);
        }
        if !premises.is_empty() {
            v["premises"] = Value::Array(premises);
        }
        v
    }
    go(tree, NodePath::default(), &leaves)
}

fn verdict_code(v: &TreeVerdict) -> i32 {
    match v {
        TreeVerdict::Valid => EXIT_VALID,
        TreeVerdict::Invalid { .. } => EXIT_INVALID,
        TreeVerdict::Unknown { .. } => EXIT_UNKNOWN,
    }
}


fn mode(strict: bool) -> DerivationMode {
    if strict {
        DerivationMode::Strict
    } else {
        DerivationMode::Weak
    }
}

fn cmd_check(common: &Common, proof: &Path, strict: bool, seed: u64) -> Outcome {
    let pf = match load_problem(&common.problem) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let script = match read(proof).and_then(|t| parse_script(&t).map_err(|e| format!("{}: {e}", proof.display()))) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let kernel = Kernel::new(mode(strict), seed);
    let tree = match script.build(&pf.problem.sequent(), &kernel) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("script does not apply: {e}")),
    };
    let report = match check_proof(&kernel, &tree) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("malformed proof: {e}")),
    };
    let code = verdict_code(&report.verdict);
    if common.json {
        let doc = json!({
            "command": "check",
            "script": script.to_string(),
            "verdict": report.verdict,
            "hash": report.hash,
            "tree": tree_json(&tree, &report),
        });
        return Outcome::out(code, format!("{doc:#}\n"));
    }
    let mut out = render_tree(&tree, &report);
    let _ = writeln!(out, "verdict: {}", report.verdict);
    let _ = writeln!(out, "hash: {}", report.hash);
    Outcome::out(code, out)
}

fn cmd_prove(common: &Common, cfg: SearchConfig) -> Outcome {
    let pf = match load_problem(&common.problem) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    match search_with_cuts(&pf.problem, &cfg) {
        Some(found) => {
            let kernel = Kernel::new(cfg.mode, cfg.seed);
            let report = match check_proof(&kernel, &found.proof) {
                Ok(r) => r,
                Err(e) => return Outcome::usage(format!("malformed proof: {e}")),
            };
            if common.json {
                let doc = json!({
                    "command": "prove",
                    "found": true,
                    "script": found.script.to_string(),
                    "examined": found.examined,
                    "hash": report.hash,
                    "tree": tree_json(&found.proof, &report),
                });
                return Outcome::out(EXIT_VALID, format!("{doc:#}\n"));
            }
            Outcome::out(EXIT_VALID, format!("{}\n", found.script))
        }
        None => {
            if common.json {
                let doc = json!({ "command": "prove", "found": false, "budget": cfg.budget });
                return Outcome::out(EXIT_NONE, format!("{doc:#}\n"));
            }
            Outcome::out(EXIT_NONE, format!("no proof found within a budget of {} candidates\n", cfg.budget))
        }
    }
}

fn cmd_derive(common: &Common, formula: &str, strict: bool) -> Outcome {
    let pf = match load_problem(&common.problem) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let f = match parse_formula(formula) {
        Ok(f) => f,
        Err(e) => return Outcome::usage(format!("`{formula}`: {e}")),
    };
    let d = derive_formula_with(&f, &pf.problem.sys, mode(strict));
    if common.json {
        let doc = json!({ "command": "derive", "formula": f.to_string(), "derived": d.to_string() });
        return Outcome::out(EXIT_VALID, format!("{doc:#}\n"));
    }
    Outcome::out(EXIT_VALID, format!("{d}\n"))
}

fn cmd_falsify(common: &Common, cfg: FalsifyConfig) -> Outcome {
    let pf = match load_problem(&common.problem) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let found = match falsify(&pf.problem, &cfg) {
        Ok(f) => f,
        Err(e) => return Outcome::usage(e),
    };
    match found {
        Some(c) => {
            if common.json {
                let doc = json!({
                    "command": "falsify",
                    "found": true,
                    "initial": point_json(&c.initial),
                    "sample": c.sample,
                    "exit_time": c.exit_time,
                    "exit_state": c.exit_state.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                    "margin": c.margin,
                });
                return Outcome::out(EXIT_VALID, format!("{doc:#}\n"));
            }
            Outcome::out(EXIT_VALID, format!("{}\n", describe(&c)))
        }
        None => {
            if common.json {
                let doc = json!({ "command": "falsify", "found": false, "samples": cfg.samples });
                return Outcome::out(EXIT_NONE, format!("{doc:#}\n"));
            }
            Outcome::out(EXIT_NONE, format!("no counterexample in {} samples\n", cfg.samples))
        }
    }
}

/// Runs a command line (including the program name), reading the default
/// seed from `env_seed`.
pub fn run_with_env<I, S>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::out(EXIT_VALID, text)
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let common = match &cli.command {
        Command::Check { common, .. }
        | Command::Prove { common, .. }
        | Command::Derive { common, .. }
        | Command::Falsify { common, .. } => common,
    };
    let seed = match seed(common, env_seed) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    match &cli.command {
        Command::Check { common, proof, strict } => cmd_check(common, proof, *strict, seed),
        Command::Prove { common, class, max_degree, coeffs, max_atoms, cuts, open, da_degree, budget } => {
            let opclass = match OperatorClass::parse(class) {
                Ok(c) => c,
                Err(e) => return Outcome::usage(format!("--class: {e}")),
            };
            let pool = match parse_pool(coeffs) {
                Ok(p) => p,
                Err(e) => return Outcome::usage(format!("--coeffs: {e}")),
            };
            if *budget == 0 {
                return Outcome::usage("--budget must be positive");
            }
            let cfg = SearchConfig {
                opclass,
                max_degree: *max_degree,
                pool,
                max_atoms: *max_atoms,
                max_cuts: *cuts,
                allow_open_di: *open,
                allow_da: *da_degree > 0,
                aux_templates: Vec::new(),
                budget: *budget,
                seed,
                mode: DerivationMode::Weak,
            };
            cmd_prove(common, cfg)
        }
        Command::Derive { common, formula, strict } => cmd_derive(common, formula, *strict),
        Command::Falsify { common, samples, bounds, time, step } => {
            let bounds = match parse_box(bounds) {
                Ok(b) => b,
                Err(e) => return Outcome::usage(format!("--box: {e}")),
            };
            cmd_falsify(common, FalsifyConfig { samples: *samples, bounds, step: *step, time: *time, seed })
        }
    }
}

/// Runs a command line, taking the default seed from `$DIFFINV_SEED`.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(SEED_VAR).ok();
    run_with_env(args, env.as_deref())
}
