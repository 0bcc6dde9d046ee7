//! The coefficient ring: sparse Laurent polynomials over ℚ in the bosonic
//! variables `x_1, x_2, …`, the formal variables `z_i`, `w_j` and the charge
//! variable `ξ`, truncated to a [`TruncationWindow`].

mod diffop;
mod expand;
mod schur;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

pub use diffop::{apply_exp_diff, DiffOperatorSeries};
pub use expand::{schur_expand, schur_expand_graded, GradedSchurExpansion};
pub use schur::{
    classical_schur, complete_homogeneous, extended_schur, generating_normalizer, power_sum,
    schur, vandermonde, Block,
};

use crate::error::{Error, Result};

/// Exact rational coefficients.
pub type Q = BigRational;

/// Largest number of `z` (and of `w`) variables a monomial can carry.
pub const MAX_BLOCK: usize = 4;

pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub(crate) fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// A single variable. Indices are 1-based, as in `x1`, `z2`, `w1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u32),
    Z(usize),
    W(usize),
    Xi,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(n) => write!(f, "x{n}"),
            Var::Z(i) => write!(f, "z{i}"),
            Var::W(j) => write!(f, "w{j}"),
            Var::Xi => write!(f, "xi"),
        }
    }
}

/// An exponent vector. Ordered by weighted `x`-degree first, then
/// lexicographically on the full exponent vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    weight: u32,
    x: SmallVec<[u32; 8]>,
    z: [i32; MAX_BLOCK],
    w: [i32; MAX_BLOCK],
    xi: i32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var, e: i32) -> Self {
        Monomial::one().with(v, e)
    }

    /// The monomial `∏ x_n^{e_n}` with `exps[n-1] = e_n`.
    pub fn from_x(exps: &[u32]) -> Self {
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            m = m.with(Var::X(i as u32 + 1), e as i32);
        }
        m
    }

    /// Returns a copy with the exponent of `v` replaced by `e`.
    ///
    /// Panics on a negative `x` exponent or a block index out of range.
    pub fn with(mut self, v: Var, e: i32) -> Self {
        match v {
            Var::X(n) => {
                assert!(n >= 1 && e >= 0, "invalid x exponent");
                let i = (n - 1) as usize;
                if self.x.len() <= i {
                    self.x.resize(i + 1, 0);
                }
                self.weight = self.weight - self.x[i] * n + e as u32 * n;
                self.x[i] = e as u32;
                while self.x.last() == Some(&0) {
                    self.x.pop();
                }
            }
            Var::Z(i) => self.z[i - 1] = e,
            Var::W(j) => self.w[j - 1] = e,
            Var::Xi => self.xi = e,
        }
        self
    }

    pub fn exponent(&self, v: Var) -> i32 {
        match v {
            Var::X(n) => self.x.get((n - 1) as usize).copied().unwrap_or(0) as i32,
            Var::Z(i) => self.z[i - 1],
            Var::W(j) => self.w[j - 1],
            Var::Xi => self.xi,
        }
    }

    /// Weighted `x`-degree, `x_n` having weight `n`.
    pub fn x_weight(&self) -> u32 {
        self.weight
    }

    pub fn x_exponents(&self) -> &[u32] {
        &self.x
    }

    pub fn z_exponents(&self) -> &[i32; MAX_BLOCK] {
        &self.z
    }

    pub fn w_exponents(&self) -> &[i32; MAX_BLOCK] {
        &self.w
    }

    pub fn xi_exponent(&self) -> i32 {
        self.xi
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::one()
    }

    /// The same monomial with all `x` exponents cleared.
    pub fn formal_part(&self) -> Monomial {
        Monomial { weight: 0, x: SmallVec::new(), ..self.clone() }
    }

    /// The `x` part alone.
    pub fn x_part(&self) -> Monomial {
        Monomial { weight: self.weight, x: self.x.clone(), ..Monomial::default() }
    }

    pub fn has_x(&self) -> bool {
        !self.x.is_empty()
    }

    /// Total `z` degree.
    pub fn z_degree(&self) -> i32 {
        self.z.iter().sum()
    }

    /// Total `w` degree.
    pub fn w_degree(&self) -> i32 {
        self.w.iter().sum()
    }

    /// Sends every `z_i^e` to `w_i^{-e}` and clears the `z` exponents.
    pub fn z_to_inverse_w(&self) -> Monomial {
        let mut m = self.clone();
        for i in 0..MAX_BLOCK {
            m.w[i] -= m.z[i];
            m.z[i] = 0;
        }
        m
    }

    /// Number of `x` factors counted with multiplicity.
    pub fn x_length(&self) -> u32 {
        self.x.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.x.len() >= other.x.len() { (self, other) } else { (other, self) };
        let mut x = long.x.clone();
        for (a, b) in x.iter_mut().zip(&short.x) {
            *a += b;
        }
        let mut z = self.z;
        let mut w = self.w;
        for i in 0..MAX_BLOCK {
            z[i] += other.z[i];
            w[i] += other.w[i];
        }
        Monomial { weight: self.weight + other.weight, x, z, w, xi: self.xi + other.xi }
    }

    fn factors(&self) -> Vec<(Var, i32)> {
        let mut out = Vec::new();
        for (i, &e) in self.x.iter().enumerate() {
            if e != 0 {
                out.push((Var::X(i as u32 + 1), e as i32));
            }
        }
        for (i, &e) in self.z.iter().enumerate() {
            if e != 0 {
                out.push((Var::Z(i + 1), e));
            }
        }
        for (i, &e) in self.w.iter().enumerate() {
            if e != 0 {
                out.push((Var::W(i + 1), e));
            }
        }
        if self.xi != 0 {
            out.push((Var::Xi, self.xi));
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.factors();
        if factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A closed integer interval of allowed exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: i32,
    pub hi: i32,
}

impl Interval {
    pub const FULL: Interval = Interval { lo: i32::MIN, hi: i32::MAX };

    pub fn new(lo: i32, hi: i32) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, e: i32) -> bool {
        self.lo <= e && e <= self.hi
    }

    pub fn meet(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn is_full(&self) -> bool {
        *self == Interval::FULL
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = if self.lo == i32::MIN { "-inf".to_string() } else { self.lo.to_string() };
        let hi = if self.hi == i32::MAX { "inf".to_string() } else { self.hi.to_string() };
        write!(f, "[{lo},{hi}]")
    }
}

/// The region of exponent space on which a series is kept.
///
/// Bosonic variables are bounded by weighted degree, formal variables by
/// per-variable exponent intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncationWindow {
    pub x_weight: Option<u32>,
    pub z: [Interval; MAX_BLOCK],
    pub w: [Interval; MAX_BLOCK],
    pub xi: Interval,
}

impl Default for TruncationWindow {
    fn default() -> Self {
        TruncationWindow::unbounded()
    }
}

impl TruncationWindow {
    pub fn unbounded() -> Self {
        TruncationWindow {
            x_weight: None,
            z: [Interval::FULL; MAX_BLOCK],
            w: [Interval::FULL; MAX_BLOCK],
            xi: Interval::FULL,
        }
    }

    pub fn with_x_weight(mut self, d: u32) -> Self {
        self.x_weight = Some(d);
        self
    }

    /// Restricts the exponent of a formal variable to `[lo, hi]`.
    pub fn with_bound(mut self, v: Var, lo: i32, hi: i32) -> Self {
        let iv = Interval::new(lo, hi);
        match v {
            Var::Z(i) => self.z[i - 1] = self.z[i - 1].meet(&iv),
            Var::W(j) => self.w[j - 1] = self.w[j - 1].meet(&iv),
            Var::Xi => self.xi = self.xi.meet(&iv),
            Var::X(_) => panic!("x variables are bounded by weight"),
        }
        self
    }

    /// Every `z_1..z_k` and `w_1..w_l` restricted to `[-order, order]`.
    pub fn square(k: usize, l: usize, order: i32) -> Self {
        let mut w = TruncationWindow::unbounded();
        for i in 1..=k {
            w = w.with_bound(Var::Z(i), -order, order);
        }
        for j in 1..=l {
            w = w.with_bound(Var::W(j), -order, order);
        }
        w
    }

    pub fn meet(&self, other: &TruncationWindow) -> TruncationWindow {
        let x_weight = match (self.x_weight, other.x_weight) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = TruncationWindow { x_weight, ..TruncationWindow::unbounded() };
        for i in 0..MAX_BLOCK {
            out.z[i] = self.z[i].meet(&other.z[i]);
            out.w[i] = self.w[i].meet(&other.w[i]);
        }
        out.xi = self.xi.meet(&other.xi);
        out
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        if let Some(d) = self.x_weight {
            if m.weight > d {
                return false;
            }
        }
        (0..MAX_BLOCK).all(|i| self.z[i].contains(m.z[i]) && self.w[i].contains(m.w[i]))
            && self.xi.contains(m.xi)
    }

    pub fn interval(&self, v: Var) -> Interval {
        match v {
            Var::Z(i) => self.z[i - 1],
            Var::W(j) => self.w[j - 1],
            Var::Xi => self.xi,
            Var::X(_) => Interval::FULL,
        }
    }

    /// Checks `lo ≤ hi` on every variable.
    pub fn validate(&self) -> Result<()> {
        let all = self.z.iter().chain(&self.w).chain(std::iter::once(&self.xi));
        if all.into_iter().any(|iv| iv.lo > iv.hi) {
            return Err(Error::Window(format!("empty interval in {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for TruncationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(d) = self.x_weight {
            parts.push(format!("xweight<={d}"));
        }
        for (i, iv) in self.z.iter().enumerate() {
            if !iv.is_full() {
                parts.push(format!("z{}:{iv}", i + 1));
            }
        }
        for (i, iv) in self.w.iter().enumerate() {
            if !iv.is_full() {
                parts.push(format!("w{}:{iv}", i + 1));
            }
        }
        if !self.xi.is_full() {
            parts.push(format!("xi:{}", self.xi));
        }
        if parts.is_empty() {
            write!(f, "unbounded")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A finite sum of monomials with nonzero rational coefficients, all inside
/// the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesElement {
    terms: BTreeMap<Monomial, Q>,
    window: TruncationWindow,
}

impl SeriesElement {
    pub fn zero(window: TruncationWindow) -> Self {
        SeriesElement { terms: BTreeMap::new(), window }
    }

    pub fn one(window: TruncationWindow) -> Self {
        Self::term(Monomial::one(), q(1), window)
    }

    pub fn constant(c: Q, window: TruncationWindow) -> Self {
        Self::term(Monomial::one(), c, window)
    }

    /// `c · m`, or zero if `m` is outside the window.
    pub fn term(m: Monomial, c: Q, window: TruncationWindow) -> Self {
        let mut s = Self::zero(window);
        s.add_term(m, c);
        s
    }

    pub fn var(v: Var, window: TruncationWindow) -> Self {
        Self::term(Monomial::var(v, 1), q(1), window)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>, window: TruncationWindow) -> Self {
        let mut s = Self::zero(window);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Q> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c · m`, dropping it if `m` lies outside the window.
    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() || !self.window.contains(&m) {
            return;
        }
        add_into(&mut self.terms, m, c);
    }

    /// Replaces the window and drops the terms falling outside it.
    pub fn restrict(&self, window: &TruncationWindow) -> SeriesElement {
        let window = self.window.meet(window);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| window.contains(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        SeriesElement { terms, window }
    }

    /// Replaces the window without dropping terms. Callers use this when they
    /// know the terms are exact on a larger region than the window records.
    pub fn with_window(mut self, window: TruncationWindow) -> SeriesElement {
        self.terms.retain(|m, _| window.contains(m));
        self.window = window;
        self
    }

    pub fn scale(&self, c: &Q) -> SeriesElement {
        if c.is_zero() {
            return SeriesElement::zero(self.window.clone());
        }
        SeriesElement {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
            window: self.window.clone(),
        }
    }

    /// Multiplies by `c · m`.
    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> SeriesElement {
        let mut out = SeriesElement::zero(self.window.clone());
        if c.is_zero() {
            return out;
        }
        for (a, x) in &self.terms {
            let p = a.mul(m);
            if out.window.contains(&p) {
                out.terms.insert(p, x * c);
            }
        }
        out
    }

    /// Product truncated to the intersection of both windows.
    pub fn mul_series(&self, other: &SeriesElement) -> SeriesElement {
        let window = self.window.meet(&other.window);
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let p = a.mul(b);
                if window.contains(&p) {
                    add_into(&mut terms, p, x * y);
                }
            }
        }
        SeriesElement { terms, window }
    }

    /// `∂/∂x_n`.
    pub fn derivative_x(&self, n: u32) -> SeriesElement {
        let mut out = SeriesElement::zero(self.window.clone());
        for (m, c) in &self.terms {
            let e = m.exponent(Var::X(n));
            if e > 0 {
                out.terms.insert(m.clone().with(Var::X(n), e - 1), c * q(e as i64));
            }
        }
        out
    }

    /// The exponential of a series with no constant term, truncated to the
    /// window. Fails if the powers do not vanish within `max_steps`.
    pub fn exp(&self) -> Result<SeriesElement> {
        self.exp_with_limit(10_000)
    }

    pub fn exp_with_limit(&self, max_steps: usize) -> Result<SeriesElement> {
        if self.terms.contains_key(&Monomial::one()) {
            return Err(Error::Domain("exp of a series with a constant term".into()));
        }
        let mut result = SeriesElement::one(self.window.clone());
        let mut power = result.clone();
        for t in 1..=max_steps {
            power = power.mul_series(self).scale(&q_frac(1, t as i64));
            if power.is_zero() {
                return Ok(result);
            }
            result += &power;
        }
        Err(Error::NonTerminating(max_steps))
    }

    /// Applies `f` to every monomial, summing the results into the window.
    pub fn map_monomials(&self, window: TruncationWindow, f: impl Fn(&Monomial) -> Monomial) -> SeriesElement {
        let mut out = SeriesElement::zero(window);
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Keeps only the terms satisfying `pred`.
    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> SeriesElement {
        SeriesElement {
            terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
            window: self.window.clone(),
        }
    }

    /// Largest weighted `x`-degree present.
    pub fn max_x_weight(&self) -> u32 {
        self.terms.keys().map(Monomial::x_weight).max().unwrap_or(0)
    }

    /// Smallest exponent of `v` present, if any term exists.
    pub fn min_exponent(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent(v)).min()
    }

    pub fn max_exponent(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Monomials where `self` and `other` disagree, with both coefficients.
    pub fn diff(&self, other: &SeriesElement) -> Vec<(Monomial, Q, Q)> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let d = other.coefficient(m);
            if *c != d {
                out.push((m.clone(), c.clone(), d));
            }
        }
        for (m, d) in &other.terms {
            if !self.terms.contains_key(m) {
                out.push((m.clone(), Q::zero(), d.clone()));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Parses sums of monomials such as `x1^2 - 3/2*x2*xi^-1 + w1^-1`.
    pub fn parse(s: &str, window: TruncationWindow) -> Result<SeriesElement> {
        parse_series(s, window)
    }
}

fn add_into(terms: &mut BTreeMap<Monomial, Q>, m: Monomial, c: Q) {
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Writes `c·m` as a signed term; `first` suppresses the leading ` + `.
pub(crate) fn write_term(f: &mut impl fmt::Write, c: &Q, m: &Monomial, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if m.is_one() {
        write!(f, "{a}")
    } else if a.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{a} * {m}")
    }
}

impl fmt::Display for SeriesElement {
    /// Terms are written from the highest monomial down.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, c, m, i == 0)?;
        }
        Ok(())
    }
}

impl AddAssign<&SeriesElement> for SeriesElement {
    fn add_assign(&mut self, rhs: &SeriesElement) {
        self.window = self.window.meet(&rhs.window);
        let window = self.window.clone();
        self.terms.retain(|m, _| window.contains(m));
        for (m, c) in &rhs.terms {
            if window.contains(m) {
                add_into(&mut self.terms, m.clone(), c.clone());
            }
        }
    }
}

impl SubAssign<&SeriesElement> for SeriesElement {
    fn sub_assign(&mut self, rhs: &SeriesElement) {
        *self += &(-rhs);
    }
}

impl Add for &SeriesElement {
    type Output = SeriesElement;
    fn add(self, rhs: &SeriesElement) -> SeriesElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SeriesElement {
    type Output = SeriesElement;
    fn sub(self, rhs: &SeriesElement) -> SeriesElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &SeriesElement {
    type Output = SeriesElement;
    fn mul(self, rhs: &SeriesElement) -> SeriesElement {
        self.mul_series(rhs)
    }
}

impl Neg for &SeriesElement {
    type Output = SeriesElement;
    fn neg(self) -> SeriesElement {
        SeriesElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            window: self.window.clone(),
        }
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("expected integer")
        })
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap()
    }
}

/// Parses a variable name such as `x3`, `z1`, `w2` or `xi`.
pub fn parse_var(name: &str) -> Option<Var> {
    if name == "xi" {
        return Some(Var::Xi);
    }
    let (head, tail) = name.split_at(1.min(name.len()));
    let idx: usize = tail.parse().ok()?;
    match head {
        "x" if idx >= 1 => Some(Var::X(idx as u32)),
        "z" if (1..=MAX_BLOCK).contains(&idx) => Some(Var::Z(idx)),
        "w" if (1..=MAX_BLOCK).contains(&idx) => Some(Var::W(idx)),
        _ => None,
    }
}

fn parse_series(s: &str, window: TruncationWindow) -> Result<SeriesElement> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    let mut out = SeriesElement::zero(window);
    let mut first = true;
    loop {
        let sign = match cur.peek() {
            None if !first => break,
            None => return cur.err("empty expression"),
            Some(b'+') => {
                cur.pos += 1;
                1
            }
            Some(b'-') => {
                cur.pos += 1;
                -1
            }
            Some(_) if first => 1,
            Some(_) => return cur.err("expected '+' or '-'"),
        };
        first = false;
        let mut coeff = q(sign);
        let mut mono = Monomial::one();
        loop {
            match cur.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = cur.int()?;
                    let d = if cur.peek() == Some(b'/') {
                        cur.pos += 1;
                        cur.int()?
                    } else {
                        1
                    };
                    if d == 0 {
                        return cur.err("zero denominator");
                    }
                    coeff *= q_frac(n, d);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = cur.pos;
                    let name = cur.ident();
                    let v = match parse_var(name) {
                        Some(v) => v,
                        None => {
                            cur.pos = start;
                            return cur.err(format!("unknown variable {name:?}"));
                        }
                    };
                    let e = if cur.peek() == Some(b'^') {
                        cur.pos += 1;
                        cur.int()? as i32
                    } else {
                        1
                    };
                    if matches!(v, Var::X(_)) && e < 0 {
                        return cur.err("negative power of an x variable");
                    }
                    let old = mono.exponent(v);
                    mono = mono.with(v, old + e);
                }
                _ => return cur.err("expected a coefficient or variable"),
            }
            if cur.peek() == Some(b'*') {
                cur.pos += 1;
            } else {
                break;
            }
        }
        out.add_term(mono, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
