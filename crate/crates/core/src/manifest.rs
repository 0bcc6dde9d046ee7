//! Verification manifests: one case per line, such as
//!
//! ```text
//! # comment
//! theorem34 k=1 l=2 m=-1 lambda=[2,1] order=4
//! theorem34 k=2 l=2 m=0 lambda=[1] order=3 mutate=prefactor-sign
//! contraction l=2 m=1 lambda=[2,1] order=4
//! ```
//!
//! Cases run in parallel and their reports come back in manifest order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::IndexWindow;
use crate::partitions::Partition;
use crate::vertex::{self, ComparisonReport, Mutation, VertexConfig};

/// The identity a case checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseKind {
    Theorem34,
    Contraction,
    Wedging,
    Commutation,
    Prefactor,
    Lowering,
    RCommutation,
    Djkm,
    Stability,
}

const KINDS: [(CaseKind, &str); 9] = [
    (CaseKind::Theorem34, "theorem34"),
    (CaseKind::Contraction, "contraction"),
    (CaseKind::Wedging, "wedging"),
    (CaseKind::Commutation, "commutation"),
    (CaseKind::Prefactor, "prefactor"),
    (CaseKind::Lowering, "lowering"),
    (CaseKind::RCommutation, "r-commutation"),
    (CaseKind::Djkm, "djkm"),
    (CaseKind::Stability, "stability"),
];

impl CaseKind {
    /// Keys a line of this kind must carry.
    fn required(self) -> &'static [&'static str] {
        match self {
            CaseKind::Contraction => &["l", "m", "lambda", "order"],
            CaseKind::Wedging => &["k", "m", "lambda", "order"],
            CaseKind::Prefactor => &["k", "l", "order"],
            CaseKind::Djkm => &["m", "lambda", "order"],
            _ => &["k", "l", "m", "lambda", "order"],
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(KINDS.iter().find(|(k, _)| k == self).map(|(_, n)| *n).unwrap())
    }
}

impl FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KINDS
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(k, _)| *k)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown case kind {s:?}") })
    }
}

/// One manifest line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    /// 1-based line number in the manifest.
    pub line: usize,
    pub kind: CaseKind,
    pub k: usize,
    pub l: usize,
    pub m: i64,
    pub lambda: Partition,
    pub order: i32,
    pub x_weight: Option<u32>,
    pub mutation: Option<Mutation>,
    /// Widening step of a stability case.
    pub step: i64,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for key in self.kind.required() {
            match *key {
                "k" => write!(f, " k={}", self.k)?,
                "l" => write!(f, " l={}", self.l)?,
                "m" => write!(f, " m={}", self.m)?,
                "lambda" => write!(f, " lambda={}", self.lambda)?,
                _ => write!(f, " order={}", self.order)?,
            }
        }
        if let Some(d) = self.x_weight {
            write!(f, " x-weight={d}")?;
        }
        if let Some(mu) = self.mutation {
            write!(f, " mutate={mu}")?;
        }
        if self.kind == CaseKind::Stability && self.step != 1 {
            write!(f, " step={}", self.step)?;
        }
        Ok(())
    }
}

/// A malformed manifest line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

fn parse_line(line: usize, text: &str) -> std::result::Result<Case, String> {
    let mut words = text.split_whitespace();
    let name = words.next().unwrap_or_default();
    let kind: CaseKind = name.parse().map_err(|_| format!("unknown case kind {name:?}"))?;
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for w in words {
        let (key, value) = w.split_once('=').ok_or_else(|| format!("expected key=value, found {w:?}"))?;
        if fields.insert(key, value).is_some() {
            return Err(format!("duplicate key {key:?}"));
        }
    }
    for key in kind.required() {
        if !fields.contains_key(key) {
            return Err(format!("{kind} needs {key}="));
        }
    }
    let mut case = Case {
        line,
        kind,
        k: 0,
        l: 0,
        m: 0,
        lambda: Partition::empty(),
        order: 0,
        x_weight: None,
        mutation: None,
        step: 1,
    };
    fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
        v.parse().map_err(|_| format!("bad value for {key}: {v:?}"))
    }
    for (key, v) in fields {
        match key {
            "k" => case.k = num(key, v)?,
            "l" => case.l = num(key, v)?,
            "m" => case.m = num(key, v)?,
            "order" => case.order = num(key, v)?,
            "x-weight" => case.x_weight = Some(num(key, v)?),
            "step" if kind == CaseKind::Stability => case.step = num(key, v)?,
            "lambda" => case.lambda = v.parse().map_err(|e: Error| format!("bad lambda {v:?}: {e}"))?,
            "mutate" if kind == CaseKind::Theorem34 => case.mutation = Some(v.parse().map_err(|_| format!("unknown mutation {v:?}"))?),
            _ => return Err(format!("unexpected key {key:?} for {kind}")),
        }
    }
    match kind {
        CaseKind::Wedging => case.l = 0,
        CaseKind::Contraction => case.k = 0,
        CaseKind::Djkm => (case.k, case.l) = (1, 1),
        _ => {}
    }
    if case.order < 0 {
        return Err("order must be non-negative".into());
    }
    vertex_config(&case, &RunOptions::default()).validate().map_err(|e| e.to_string())?;
    Ok(case)
}

/// Parses a manifest, collecting every malformed line.
pub fn parse_manifest(text: &str) -> std::result::Result<Vec<Case>, Vec<LineError>> {
    let mut cases = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match parse_line(i + 1, body) {
            Ok(c) => cases.push(c),
            Err(msg) => errors.push(LineError { line: i + 1, msg }),
        }
    }
    if errors.is_empty() {
        Ok(cases)
    } else {
        Err(errors)
    }
}

/// Command-line overrides applied to every case.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub order: Option<i32>,
    pub x_weight: Option<u32>,
    pub index_window: Option<IndexWindow>,
}

fn vertex_config(case: &Case, opts: &RunOptions) -> VertexConfig {
    VertexConfig {
        k: case.k,
        l: case.l,
        order: opts.order.unwrap_or(case.order),
        x_weight: opts.x_weight.or(case.x_weight),
        index_window: opts.index_window,
        mutation: case.mutation,
    }
}

/// Runs one case.
pub fn run_case(case: &Case, opts: &RunOptions) -> Result<ComparisonReport> {
    let cfg = vertex_config(case, opts);
    let (m, lambda) = (case.m, &case.lambda);
    match case.kind {
        CaseKind::Theorem34 => vertex::verify_theorem34(&cfg, m, lambda),
        CaseKind::Contraction => vertex::verify_prop_contraction(cfg.l, m, lambda, cfg.order),
        CaseKind::Wedging => vertex::verify_prop_wedging(cfg.k, m, lambda, cfg.order),
        CaseKind::Commutation => vertex::verify_commutation(&cfg, m, lambda),
        CaseKind::Prefactor => vertex::verify_prefactor_identity(&cfg),
        CaseKind::Lowering => vertex::verify_lowering_pair(&cfg, m, lambda),
        CaseKind::RCommutation => vertex::verify_r_commutation(&cfg, m, lambda),
        CaseKind::Djkm => vertex::verify_djkm(cfg.order, m, lambda),
        CaseKind::Stability => vertex::verify_truncation_stability(&cfg, m, lambda, case.step),
    }
}

/// A case together with its report, or the error that stopped it.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub case: Case,
    pub result: Result<ComparisonReport>,
}

impl Outcome {
    pub fn success(&self) -> bool {
        self.result.as_ref().is_ok_and(ComparisonReport::success)
    }
}

/// Runs every case on the current rayon pool, in manifest order.
pub fn run_all(cases: &[Case], opts: &RunOptions) -> Vec<Outcome> {
    cases.par_iter().map(|c| Outcome { case: c.clone(), result: run_case(c, opts) }).collect()
}

/// [`run_all`] on a dedicated pool of at most `threads` workers.
pub fn run_all_with_threads(cases: &[Case], opts: &RunOptions, threads: Option<usize>) -> Vec<Outcome> {
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()) {
        Some(pool) => pool.install(|| run_all(cases, opts)),
        None => run_all(cases, opts),
    }
}
