//! Operator words: products of Schubert derivations, charge shifts,
//! `R`-maps, the generating-function operator `E` and scalar series,
//! applied right to left to a Fock element or to a bosonic series.
//!
//! ```text
//! word    := factor ('*' factor)*
//! factor  := kind '(' var (',' var)* ')'
//!          | 'xi' ['^' int]
//!          | 'R' '(' vars ';' vars ')'
//!          | 'E' '(' vars ';' vars ')'
//!          | '[' series ']'
//! kind    := 's+' | 's-' | 'sbar+' | 'sbar-'
//! ```
//!
//! In `R(z1,z2;w1)` and `E(z1,z2;w1)` the variables before the semicolon
//! must be `z1..zk` and those after it `w1..wl`, either list possibly empty.

use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{boson_to_fermion, fermion_to_boson, xi_shift, FockElement};
use crate::schubert::{apply_on_boson, apply_on_fock, eigen_multiplier, SchubertKind, SchubertOperator};
use crate::symfunc::{parse_var, Monomial, SeriesElement, TruncationWindow, Var};
use crate::vertex::{apply_r_b, apply_r_f, eb_closed, ef_direct, VertexConfig};

/// One factor of an operator word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Schubert(SchubertKind, Vec<Var>),
    Xi(i64),
    R { k: usize, l: usize },
    E { k: usize, l: usize },
    Scalar(SeriesElement),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = |f: &mut fmt::Formatter<'_>, k: usize, l: usize| {
            let z: Vec<String> = (1..=k).map(|i| format!("z{i}")).collect();
            let w: Vec<String> = (1..=l).map(|j| format!("w{j}")).collect();
            write!(f, "({};{})", z.join(","), w.join(","))
        };
        match self {
            Factor::Schubert(kind, vars) => {
                let names: Vec<String> = vars.iter().map(Var::to_string).collect();
                write!(f, "{kind}({})", names.join(","))
            }
            Factor::Xi(p) => write!(f, "xi^{p}"),
            Factor::R { k, l } => {
                f.write_str("R")?;
                blocks(f, *k, *l)
            }
            Factor::E { k, l } => {
                f.write_str("E")?;
                blocks(f, *k, *l)
            }
            Factor::Scalar(s) => write!(f, "[{s}]"),
        }
    }
}

/// A parsed operator word, stored left to right as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorWord {
    pub factors: Vec<Factor>,
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(Factor::to_string).collect();
        f.write_str(&parts.join(" * "))
    }
}

/// Windows used when applying a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordConfig {
    /// Box half-width for every `z` and `w`.
    pub order: i32,
    /// `x`-weight bound; defaults to the weight of the target plus `order`.
    pub x_weight: Option<u32>,
}

impl WordConfig {
    pub fn new(order: i32) -> Self {
        WordConfig { order, x_weight: None }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn var_list(&mut self, close: &[u8]) -> Result<Vec<Var>> {
        let mut vars = Vec::new();
        if self.peek().is_some_and(|c| close.contains(&c)) {
            return Ok(vars);
        }
        loop {
            let at = self.pos;
            let name = self.ident();
            match parse_var(name) {
                Some(v @ (Var::Z(_) | Var::W(_))) => vars.push(v),
                _ => {
                    self.pos = at;
                    return self.err(format!("expected a z or w variable, found {name:?}"));
                }
            }
            if !self.eat(b',') {
                return Ok(vars);
            }
        }
    }

    fn blocks(&mut self) -> Result<(usize, usize)> {
        self.expect(b'(')?;
        let at = self.pos;
        let z = self.var_list(b";")?;
        self.expect(b';')?;
        let w = self.var_list(b")")?;
        self.expect(b')')?;
        let z_ok = z.iter().enumerate().all(|(i, v)| *v == Var::Z(i + 1));
        let w_ok = w.iter().enumerate().all(|(j, v)| *v == Var::W(j + 1));
        if !z_ok || !w_ok {
            self.pos = at;
            return self.err("expected z1..zk before ';' and w1..wl after it");
        }
        Ok((z.len(), w.len()))
    }

    fn factor(&mut self) -> Result<Factor> {
        let at = self.pos;
        if self.eat(b'[') {
            let start = self.pos;
            let Some(len) = self.s[start..].iter().position(|&c| c == b']') else {
                return self.err("unclosed '['");
            };
            let text = std::str::from_utf8(&self.s[start..start + len]).unwrap();
            let series = SeriesElement::parse(text, TruncationWindow::unbounded())
                .map_err(|e| shift_error(e, start))?;
            self.pos = start + len + 1;
            return Ok(Factor::Scalar(series));
        }
        let name = self.ident();
        match name {
            "s" | "sbar" => {
                let kind = match (name, self.s.get(self.pos)) {
                    ("s", Some(b'+')) => SchubertKind::Plus,
                    ("s", Some(b'-')) => SchubertKind::Minus,
                    ("sbar", Some(b'+')) => SchubertKind::BarPlus,
                    ("sbar", Some(b'-')) => SchubertKind::BarMinus,
                    _ => return self.err("expected '+' or '-' after the operator name"),
                };
                self.pos += 1;
                self.expect(b'(')?;
                let vars = self.var_list(b")")?;
                self.expect(b')')?;
                if vars.is_empty() {
                    self.pos = at;
                    return self.err("a Schubert derivation needs at least one variable");
                }
                Ok(Factor::Schubert(kind, vars))
            }
            "xi" => {
                let p = if self.eat(b'^') { self.int()? } else { 1 };
                Ok(Factor::Xi(p))
            }
            "R" => self.blocks().map(|(k, l)| Factor::R { k, l }),
            "E" => self.blocks().map(|(k, l)| Factor::E { k, l }),
            "" => self.err("expected an operator"),
            _ => {
                self.pos = at;
                self.err(format!("unknown operator {name:?}"))
            }
        }
    }
}

fn shift_error(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

impl OperatorWord {
    pub fn parse(text: &str) -> Result<OperatorWord> {
        let mut p = Parser { s: text.as_bytes(), pos: 0 };
        let mut factors = vec![p.factor()?];
        while p.eat(b'*') {
            factors.push(p.factor()?);
        }
        if p.peek().is_some() {
            return p.err("unexpected trailing input");
        }
        Ok(OperatorWord { factors })
    }

    /// Applies the word to a Fock element, rightmost factor first.
    pub fn apply_fock(&self, target: &FockElement, cfg: &WordConfig) -> Result<FockElement> {
        let top = target.terms().keys().map(|l| l.weight()).max().unwrap_or(0);
        let d = cfg.x_weight.unwrap_or(top + cfg.order.max(0) as u32);
        let mut cur = target.clone();
        for factor in self.factors.iter().rev() {
            cur = match factor {
                Factor::Schubert(kind, vars) => apply_on_fock(&SchubertOperator::new(*kind, vars.clone(), word_window(cfg, d))?, &cur)?,
                Factor::Xi(p) => xi_shift(*p, &cur),
                Factor::R { k, l } => apply_r_f(&VertexConfig::new(*k, *l, cfg.order), &cur),
                Factor::E { k, l } => {
                    let vc = VertexConfig::new(*k, *l, cfg.order).with_x_weight(d);
                    let mut out = FockElement::zero(vc.window(&crate::partitions::Partition::empty()));
                    for (label, c) in cur.terms() {
                        let image = ef_direct(&vc, label.charge, &label.lambda)?;
                        out.add_assign(&image.scale(&c.clone().with_window(TruncationWindow::unbounded())));
                    }
                    out
                }
                Factor::Scalar(s) => cur.scale(s),
            };
        }
        Ok(cur)
    }

    /// Applies the word to a bosonic series, rightmost factor first.
    pub fn apply_boson(&self, target: &SeriesElement, cfg: &WordConfig) -> Result<SeriesElement> {
        let d = cfg.x_weight.unwrap_or(target.max_x_weight() + cfg.order.max(0) as u32);
        let mut cur = target.clone();
        for factor in self.factors.iter().rev() {
            cur = match factor {
                Factor::Schubert(kind, vars) if kind.is_raising() => {
                    // expand far enough that negative powers already present
                    // cannot pull truncated terms back into the box
                    let mut reach = TruncationWindow::unbounded().with_x_weight(d);
                    for v in vars {
                        let low = cur.min_exponent(*v).unwrap_or(0).min(0);
                        reach = reach.with_bound(*v, 0, cfg.order - low);
                    }
                    let eigen = eigen_multiplier(*kind, vars, &reach)?.with_window(TruncationWindow::unbounded());
                    cur.with_window(TruncationWindow::unbounded().with_x_weight(d)).mul_series(&eigen).restrict(&word_window(cfg, d))
                }
                Factor::Schubert(kind, vars) => {
                    apply_on_boson(&SchubertOperator::new(*kind, vars.clone(), TruncationWindow::unbounded())?, &cur)?
                }
                Factor::Xi(p) => cur.mul_monomial(&Monomial::var(Var::Xi, *p as i32), &crate::symfunc::Q::from_integer(1.into())),
                Factor::R { k, l } => apply_r_b(&VertexConfig::new(*k, *l, cfg.order), &cur),
                Factor::E { k, l } => eb_closed(&VertexConfig::new(*k, *l, cfg.order), &cur, d)?,
                Factor::Scalar(s) => cur.mul_series(&s.clone().with_window(TruncationWindow::unbounded())),
            };
        }
        Ok(cur)
    }
}

/// The box `[-order, order]` on every `z` and `w` with `x`-weight `d`.
fn word_window(cfg: &WordConfig, d: u32) -> TruncationWindow {
    use crate::symfunc::MAX_BLOCK;
    TruncationWindow::square(MAX_BLOCK, MAX_BLOCK, cfg.order).with_x_weight(d)
}

/// A target for [`OperatorWord`]: a Fock element or a bosonic series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Fock(FockElement),
    Boson(SeriesElement),
}

impl Target {
    /// Fock elements are recognized by their `F[...]` labels.
    pub fn parse(text: &str) -> Result<Target> {
        if text.contains("F[") {
            FockElement::parse(text, TruncationWindow::unbounded()).map(Target::Fock)
        } else {
            SeriesElement::parse(text, TruncationWindow::unbounded()).map(Target::Boson)
        }
    }

    pub fn apply(&self, word: &OperatorWord, cfg: &WordConfig) -> Result<Target> {
        match self {
            Target::Fock(f) => word.apply_fock(f, cfg).map(Target::Fock),
            Target::Boson(g) => word.apply_boson(g, cfg).map(Target::Boson),
        }
    }

    /// The same element in the other picture.
    pub fn transpose(&self) -> Target {
        match self {
            Target::Fock(f) => Target::Boson(fermion_to_boson(f, None)),
            Target::Boson(g) => Target::Fock(boson_to_fermion(g)),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Fock(x) => x.fmt(f),
            Target::Boson(g) => g.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(word: &str, target: &str, order: i32) -> String {
        let w = OperatorWord::parse(word).unwrap();
        Target::parse(target).unwrap().apply(&w, &WordConfig::new(order)).unwrap().to_string()
    }

    #[test]
    fn parses_and_prints() {
        let w = OperatorWord::parse("sbar-(z1) * s+( z1 ,z2)*xi^-2 * R(z1;w1,w2) * E(;w1) * [1/2 + z1]").unwrap();
        assert_eq!(w.factors.len(), 6);
        assert_eq!(w.to_string(), "sbar-(z1) * s+(z1,z2) * xi^-2 * R(z1;w1,w2) * E(;w1) * [z1 + 1/2]");
        assert_eq!(OperatorWord::parse(&w.to_string()).unwrap(), w);
        assert_eq!(OperatorWord::parse("xi").unwrap().factors, vec![Factor::Xi(1)]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        for (text, pos) in [("s+(x1)", 3), ("foo(z1)", 0), ("s+(z1) *", 8), ("R(z2;)", 2), ("s*(z1)", 1), ("s+(z1) s-(w1)", 7)] {
            match OperatorWord::parse(text) {
                Err(Error::Parse { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(OperatorWord::parse("s+()").is_err());
        assert!(OperatorWord::parse("[1 + ").is_err());
    }

    #[test]
    fn shifting_charge() {
        assert_eq!(run("xi^2", "F[-2;]", 2), "F[0;]");
        assert_eq!(run("xi^-1", "x1", 2), "x1 * xi^-1");
    }

    #[test]
    fn lowering_a_coordinate() {
        assert_eq!(run("s-(w1)", "x1", 2), "x1 + w1^-1");
        assert_eq!(run("sbar-(w1)", "x1", 2), "x1 - w1^-1");
    }

    #[test]
    fn raising_the_vacuum() {
        let s = run("sbar+(z1)", "F[0;]", 3);
        assert_eq!(s, "F[0;] - F[0;1] z1 + F[0;1,1] z1^2 - F[0;1,1,1] z1^3");
    }

    #[test]
    fn words_apply_right_to_left() {
        let a = run("s+(z1) * xi^1", "F[0;]", 2);
        let b = run("xi^1 * s+(z1)", "F[0;]", 2);
        assert_eq!(a, b);
        let inverse = run("sbar-(z1) * s-(z1)", "F[1;2,1]", 3);
        assert_eq!(inverse, "F[1;2,1]");
        let scaled = run("[2] * xi", "F[0;]", 1);
        assert_eq!(scaled, "2 F[1;]");
    }

    #[test]
    fn both_pictures_agree() {
        let cfg = WordConfig { order: 2, x_weight: Some(4) };
        for word in ["s+(z1)", "sbar+(w1) * s-(w1)", "R(z1;w1) * sbar-(z1)", "E(z1;w1)", "s+(z1,z2)"] {
            let w = OperatorWord::parse(word).unwrap();
            let f = Target::parse("F[0;1] - F[1;]").unwrap();
            let (Target::Fock(a), Target::Boson(b)) = (f.apply(&w, &cfg).unwrap(), f.transpose().apply(&w, &cfg).unwrap()) else {
                panic!()
            };
            let window = TruncationWindow::square(2, 2, 2).with_x_weight(4);
            let a = fermion_to_boson(&a, Some(4)).restrict(&window);
            assert!(a.diff(&b.restrict(&window)).is_empty(), "{word}");
        }
    }
}
