//! `fockcalc`: expand operator words, run verification manifests and print
//! coefficient tables of the classical vertex operator.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fockcalc::exterior::IndexWindow;
use fockcalc::manifest::{parse_manifest, run_all_with_threads, Case, CaseKind, Outcome, RunOptions};
use fockcalc::vertex::djkm_table;
use fockcalc::word::{OperatorWord, Target, WordConfig};
use fockcalc::Partition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const PAPER_CORE: &str = include_str!("../../../manifests/paper-core.txt");

#[derive(Parser)]
#[command(name = "fockcalc", version, about = "Exact computations in the fermionic Fock space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Plain text for reading.
    Text,
    /// One JSON object per line.
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operator word to a Fock element or a bosonic series.
    Expand {
        /// Operator word, e.g. "sbar-(z1) * s+(z1)".
        word: String,
        /// Target, e.g. "F[0;2,1]" or "x1^2 - x2".
        target: String,
        /// Half-width of the exponent box for every z and w.
        #[arg(long, default_value_t = 4)]
        order: i32,
        /// Largest x-weight kept; defaults to the target's weight plus the order.
        #[arg(long)]
        x_weight: Option<u32>,
        /// Print the result in the other picture.
        #[arg(long)]
        transpose: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification manifest; exits nonzero if any case fails.
    Verify {
        /// Manifest file; the bundled paper-core manifest when omitted.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Override the order of every case.
        #[arg(long)]
        order: Option<i32>,
        /// Override the x-weight bound of every case.
        #[arg(long)]
        x_weight: Option<u32>,
        /// Explicit index range LO:HI for the direct expansion.
        #[arg(long, value_parser = parse_index_window)]
        index_window: Option<IndexWindow>,
        /// Append this many random theorem34 cases.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Seed for the random cases.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Coefficients of z^i w^-j in E(z, w^-1) applied to xi^m, in the Schur basis.
    DjkmTable {
        /// Charges LO:HI, or a single charge.
        #[arg(long, default_value = "0", value_parser = parse_range)]
        m: (i64, i64),
        #[arg(long, default_value_t = 3)]
        order: i32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad bound {lo:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

fn parse_index_window(s: &str) -> Result<IndexWindow, String> {
    if !s.contains(':') {
        return Err("expected LO:HI".into());
    }
    parse_range(s).map(|(lo, hi)| IndexWindow::new(lo, hi))
}

fn threads() -> Option<usize> {
    std::env::var("FOCKCALC_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Expand { word, target, order, x_weight, transpose, format } => {
            expand(&mut out, &word, &target, WordConfig { order, x_weight }, transpose, format)
        }
        Command::Verify { manifest, order, x_weight, index_window, random, seed, format } => {
            let opts = RunOptions { order, x_weight, index_window };
            verify(&mut out, manifest, &opts, random, seed, format)
        }
        Command::DjkmTable { m, order, format } => table(&mut out, m, order, format),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = out.flush();
            eprintln!("fockcalc: {msg}");
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<ExitCode, String>;

fn expand(out: &mut impl Write, word: &str, target: &str, cfg: WordConfig, transpose: bool, format: Format) -> CmdResult {
    let w = OperatorWord::parse(word).map_err(|e| format!("in operator word: {e}"))?;
    let t = Target::parse(target).map_err(|e| format!("in target: {e}"))?;
    let mut r = t.apply(&w, &cfg).map_err(|e| e.to_string())?;
    if transpose {
        r = r.transpose();
    }
    let line = match format {
        Format::Text => r.to_string(),
        Format::Records => json!({
            "word": w.to_string(),
            "target": target,
            "order": cfg.order,
            "x_weight": cfg.x_weight,
            "result": r.to_string(),
        })
        .to_string(),
    };
    writeln!(out, "{line}").map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

/// Random theorem34 cases: small degrees, charges and partitions.
fn random_cases(n: usize, seed: u64, first_line: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)];
    (0..n)
        .map(|i| {
            let (k, l) = pairs[rng.gen_range(0..pairs.len())];
            let weight = rng.gen_range(0..=3);
            let choices = Partition::all_of_weight(weight);
            let lambda = choices[rng.gen_range(0..choices.len())].clone();
            Case {
                line: first_line + i,
                kind: CaseKind::Theorem34,
                k,
                l,
                m: rng.gen_range(-2..=2),
                lambda,
                order: rng.gen_range(1..=3),
                x_weight: None,
                mutation: None,
                step: 1,
            }
        })
        .collect()
}

fn record(o: &Outcome) -> Value {
    let c = &o.case;
    let mut v = json!({
        "line": c.line,
        "case": c.to_string(),
        "kind": c.kind.to_string(),
        "k": c.k,
        "l": c.l,
        "m": c.m,
        "lambda": c.lambda.parts(),
        "order": c.order,
        "mutation": c.mutation.map(|m| m.to_string()),
    });
    match &o.result {
        Ok(r) => {
            v["status"] = json!(if r.success() { "ok" } else { "fail" });
            v["window"] = json!(r.window.to_string());
            v["compared"] = json!(r.compared);
            v["differences"] = json!(r.diffs.len());
            v["first_diff"] = match r.first_diff() {
                Some(d) => json!({
                    "route": d.route,
                    "monomial": d.monomial.to_string(),
                    "expected": d.expected.to_string(),
                    "actual": d.actual.to_string(),
                }),
                None => Value::Null,
            };
        }
        Err(e) => {
            v["status"] = json!("error");
            v["error"] = json!(e.to_string());
        }
    }
    v
}

fn verify(out: &mut impl Write, manifest: Option<PathBuf>, opts: &RunOptions, random: usize, seed: u64, format: Format) -> CmdResult {
    let (name, text) = match &manifest {
        Some(path) => (path.display().to_string(), std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?),
        None => ("paper-core.txt".to_string(), PAPER_CORE.to_string()),
    };
    let mut cases = match parse_manifest(&text) {
        Ok(c) => c,
        Err(errors) => {
            let lines: Vec<String> = errors.iter().map(|e| format!("{name}: {e}")).collect();
            return Err(format!("malformed manifest, nothing was run\n{}", lines.join("\n")));
        }
    };
    let next_line = text.lines().count() + 1;
    cases.extend(random_cases(random, seed, next_line));

    let outcomes = run_all_with_threads(&cases, opts, threads());
    let io = |e: io::Error| e.to_string();
    for o in &outcomes {
        match format {
            Format::Text => match &o.result {
                Ok(r) => writeln!(out, "{r}").map_err(io)?,
                Err(e) => writeln!(out, "error {} (line {}): {e}", o.case, o.case.line).map_err(io)?,
            },
            Format::Records => writeln!(out, "{}", record(o)).map_err(io)?,
        }
    }
    let failed = outcomes.iter().filter(|o| !o.success()).count();
    let summary = if cases.is_empty() {
        "0 cases".to_string()
    } else {
        format!("{} cases, {} passed, {failed} failed", cases.len(), cases.len() - failed)
    };
    match format {
        Format::Text => writeln!(out, "{summary}").map_err(io)?,
        Format::Records => writeln!(out, "{}", json!({ "summary": summary, "cases": cases.len(), "failed": failed })).map_err(io)?,
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn schur_sum(entry: &std::collections::BTreeMap<(i64, Partition), fockcalc::Q>) -> String {
    let mut s = String::new();
    for (i, ((_, lambda), c)) in entry.iter().enumerate() {
        let basis = if lambda.length() == 0 { None } else { Some(format!("S{lambda}")) };
        let neg = c < &fockcalc::Q::from_integer(0.into());
        let a = if neg { -c } else { c.clone() };
        s.push_str(match (i == 0, neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        match basis {
            None => s.push_str(&a.to_string()),
            Some(b) if a == fockcalc::Q::from_integer(1.into()) => s.push_str(&b),
            Some(b) => s.push_str(&format!("{a} {b}")),
        }
    }
    s
}

fn table(out: &mut impl Write, (lo, hi): (i64, i64), order: i32, format: Format) -> CmdResult {
    let io = |e: io::Error| e.to_string();
    for m in lo..=hi {
        let t = djkm_table(m, order).map_err(|e| e.to_string())?;
        if format == Format::Text {
            writeln!(out, "m = {m}").map_err(io)?;
        }
        for ((i, j), entry) in &t {
            match format {
                Format::Text => writeln!(out, "  z^{i} w^{}: {}", -j, schur_sum(entry)).map_err(io)?,
                Format::Records => {
                    let terms: Vec<Value> = entry
                        .iter()
                        .map(|((_, lambda), c)| json!({ "lambda": lambda.parts(), "coefficient": c.to_string() }))
                        .collect();
                    writeln!(out, "{}", json!({ "m": m, "i": i, "j": j, "order": order, "entry": terms })).map_err(io)?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
