//! The fermionic Fock space `F = ⊕_m F_m` with basis `[b]_{m+λ}`.
//!
//! `[b]_{m+λ} = b_{m+λ_1} ∧ b_{m−1+λ_2} ∧ … ∧ b_{m−r+1+λ_r} ∧ [b]_{m−r}` for any
//! `r ≥ ℓ(λ)`, where `[b]_{m−r} = b_{m−r} ∧ b_{m−r−1} ∧ …` is the vacuum of
//! charge `m − r`. Semi-infinite wedges are never materialized: finite
//! wedges are merged into tails by [`normal_order`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{contract_multi_monomial, ContractionOrder, Flavor, WedgeElement, WedgeMonomial};
use crate::partitions::{parse_int_list, sort_decreasing_with_sign, Partition};
use crate::symfunc::{q, schur, schur_expand_graded, Monomial, SeriesElement, TruncationWindow, Var, Q};

/// The basis vector `[b]_{m+λ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockLabel {
    pub charge: i64,
    pub lambda: Partition,
}

impl FockLabel {
    pub fn new(charge: i64, lambda: Partition) -> Self {
        FockLabel { charge, lambda }
    }

    /// `[b]_m`.
    pub fn vacuum(charge: i64) -> Self {
        FockLabel { charge, lambda: Partition::empty() }
    }

    pub fn weight(&self) -> u32 {
        self.lambda.weight()
    }

    /// The first `r` indices `m − j + 1 + λ_j`, `j = 1..r`; the tail below
    /// them starts at `m − r`.
    pub fn block(&self, r: usize) -> Vec<i64> {
        assert!(r >= self.lambda.length(), "depth below the length of the partition");
        (0..r)
            .map(|j| self.charge - j as i64 + self.lambda.part(j) as i64)
            .collect()
    }

    /// Whether `b_i` is one of the factors of `[b]_{m+λ}`.
    pub fn is_occupied(&self, i: i64) -> bool {
        let r = self.lambda.length();
        i <= self.charge - r as i64 || self.block(r).contains(&i)
    }

    /// Smallest depth whose block contains every index `≥ lowest`.
    pub fn depth_for(&self, lowest: i64) -> usize {
        self.lambda.length().max((self.charge - lowest + 1).max(0) as usize)
    }
}

impl PartialOrd for FockLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FockLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.charge, self.weight(), &self.lambda).cmp(&(other.charge, other.weight(), &other.lambda))
    }
}

impl fmt::Display for FockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambda.parts().iter().map(u32::to_string).collect();
        write!(f, "F[{};{}]", self.charge, parts.join(","))
    }
}

impl FromStr for FockLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix("F[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected F[m;parts], got {s:?}") })?;
        let (m, parts) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse { pos: 2, msg: "missing ';' in Fock label".into() })?;
        let charge = m.trim().parse::<i64>().map_err(|e| Error::Parse { pos: 2, msg: e.to_string() })?;
        let parts = parse_int_list(parts)?
            .into_iter()
            .map(|p| u32::try_from(p).map_err(|_| Error::Domain("negative part in Fock label".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(FockLabel::new(charge, Partition::new(parts)?))
    }
}

/// Merges finite indices onto the vacuum `[b]_tail`: returns the signed
/// label, or `None` when the wedge vanishes.
pub fn normal_order(indices: &[i64], tail: i64) -> Option<(i32, FockLabel)> {
    let mut v = indices.to_vec();
    let sign = sort_decreasing_with_sign(&mut v)?;
    normal_order_sorted(&v, tail).map(|l| (sign, l))
}

/// [`normal_order`] for indices already strictly decreasing.
pub(crate) fn normal_order_sorted(v: &[i64], tail: i64) -> Option<FockLabel> {
    if v.last().is_some_and(|&i| i <= tail) {
        return None;
    }
    let charge = tail + v.len() as i64;
    let parts: Vec<u32> = v.iter().enumerate().map(|(j, &i)| (i - (charge - j as i64)) as u32).collect();
    Some(FockLabel::new(charge, Partition::new(parts).ok()?))
}

/// A finite combination of basis labels with series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockElement {
    terms: BTreeMap<FockLabel, SeriesElement>,
    window: TruncationWindow,
}

impl FockElement {
    pub fn zero(window: TruncationWindow) -> Self {
        FockElement { terms: BTreeMap::new(), window }
    }

    pub fn basis(label: FockLabel, window: TruncationWindow) -> Self {
        let mut f = FockElement::zero(window.clone());
        f.add_term(label, SeriesElement::one(window));
        f
    }

    pub fn terms(&self) -> &BTreeMap<FockLabel, SeriesElement> {
        &self.terms
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, label: &FockLabel) -> SeriesElement {
        self.terms.get(label).cloned().unwrap_or_else(|| SeriesElement::zero(self.window.clone()))
    }

    pub fn add_term(&mut self, label: FockLabel, c: SeriesElement) {
        let c = if c.window() == &self.window { c } else { c.restrict(&self.window) };
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&label) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&label);
                }
            }
            None => {
                self.terms.insert(label, c);
            }
        }
    }

    /// Adds `c·m` to the coefficient of `label`.
    pub fn add_monomial(&mut self, label: FockLabel, m: Monomial, c: Q) {
        let window = self.window.clone();
        let entry = self.terms.entry(label.clone()).or_insert_with(|| SeriesElement::zero(window));
        entry.add_term(m, c);
        if entry.is_zero() {
            self.terms.remove(&label);
        }
    }

    pub fn add(&self, other: &FockElement) -> FockElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &FockElement) {
        for (l, c) in &other.terms {
            self.add_term(l.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &FockElement) -> FockElement {
        self.add(&other.scale_q(&q(-1)))
    }

    pub fn scale_q(&self, c: &Q) -> FockElement {
        let mut out = FockElement::zero(self.window.clone());
        if c.is_zero() {
            return out;
        }
        for (l, a) in &self.terms {
            out.terms.insert(l.clone(), a.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by `c`, truncating to the meet of windows.
    pub fn scale(&self, c: &SeriesElement) -> FockElement {
        let mut out = FockElement::zero(self.window.meet(c.window()));
        for (l, a) in &self.terms {
            out.add_term(l.clone(), a.mul_series(c));
        }
        out
    }

    /// Multiplies every coefficient by `c·m`.
    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> FockElement {
        let mut out = FockElement::zero(self.window.clone());
        for (l, a) in &self.terms {
            out.add_term(l.clone(), a.mul_monomial(m, c));
        }
        out
    }

    /// Restricts all coefficients to `window`.
    pub fn restrict(&self, window: &TruncationWindow) -> FockElement {
        let mut out = FockElement::zero(self.window.meet(window));
        for (l, a) in &self.terms {
            out.add_term(l.clone(), a.restrict(window));
        }
        out
    }

    /// Replaces the coefficient window without truncating existing terms
    /// beyond what the new window excludes.
    pub fn with_window(self, window: TruncationWindow) -> FockElement {
        let mut out = FockElement::zero(window.clone());
        for (l, a) in self.terms {
            out.add_term(l, a.with_window(window.clone()));
        }
        out
    }

    /// Keeps the labels satisfying `pred`.
    pub fn filter_labels(&self, pred: impl Fn(&FockLabel) -> bool) -> FockElement {
        FockElement {
            terms: self.terms.iter().filter(|(l, _)| pred(l)).map(|(l, c)| (l.clone(), c.clone())).collect(),
            window: self.window.clone(),
        }
    }

    /// Keeps the coefficient monomials satisfying `pred`.
    pub fn filter_monomials(&self, pred: impl Fn(&FockLabel, &Monomial) -> bool) -> FockElement {
        let mut out = FockElement::zero(self.window.clone());
        for (l, c) in &self.terms {
            out.add_term(l.clone(), c.filter(|m| pred(l, m)));
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, window: TruncationWindow, f: impl Fn(&FockLabel, &SeriesElement) -> SeriesElement) -> FockElement {
        let mut out = FockElement::zero(window);
        for (l, c) in &self.terms {
            out.add_term(l.clone(), f(l, c));
        }
        out
    }

    /// Number of `(label, monomial)` pairs.
    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(SeriesElement::len).sum()
    }

    /// `(label, monomial, self coefficient, other coefficient)` wherever the
    /// two elements disagree.
    pub fn diff(&self, other: &FockElement) -> Vec<(FockLabel, Monomial, Q, Q)> {
        let mut out = Vec::new();
        let zero = SeriesElement::zero(TruncationWindow::unbounded());
        let labels: std::collections::BTreeSet<&FockLabel> = self.terms.keys().chain(other.terms.keys()).collect();
        for l in labels {
            let a = self.terms.get(l).unwrap_or(&zero);
            let b = other.terms.get(l).unwrap_or(&zero);
            for (m, x, y) in a.diff(b) {
                out.push((l.clone(), m, x, y));
            }
        }
        out
    }

    /// Parses sums like `F[0;] - 2*F[1;1] + 1/2*F[-1;2,1]`.
    pub fn parse(s: &str, window: TruncationWindow) -> Result<FockElement> {
        let mut out = FockElement::zero(window);
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut first = true;
        let skip = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip(&mut pos);
            if pos == bytes.len() {
                if first {
                    return Err(Error::Parse { pos, msg: "empty Fock element".into() });
                }
                return Ok(out);
            }
            let mut sign = 1;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
                skip(&mut pos);
            } else if !first {
                return Err(Error::Parse { pos, msg: "expected '+' or '-'".into() });
            }
            first = false;
            let start = pos;
            let f_at = s[pos..].find('F').map(|i| i + pos).ok_or(Error::Parse { pos, msg: "expected a label F[..]".into() })?;
            let coeff_text = s[start..f_at].trim().trim_end_matches('*').trim();
            let coeff = if coeff_text.is_empty() {
                Q::one()
            } else {
                let (n, d) = coeff_text.split_once('/').unwrap_or((coeff_text, "1"));
                let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| Error::Parse { pos: start, msg: e.to_string() });
                let (n, d) = (parse(n)?, parse(d)?);
                if d == 0 {
                    return Err(Error::Parse { pos: start, msg: "zero denominator".into() });
                }
                Q::new(n.into(), d.into())
            };
            let close = s[f_at..].find(']').map(|i| i + f_at).ok_or(Error::Parse { pos: f_at, msg: "unclosed label".into() })?;
            let label: FockLabel = s[f_at..=close].parse().map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + f_at, msg },
                other => other,
            })?;
            out.add_monomial(label, Monomial::one(), coeff * q(sign));
            pos = close + 1;
        }
    }
}

impl fmt::Display for FockElement {
    /// One signed term per coefficient monomial, ordered by label and then by
    /// monomial, e.g. `F[0;] - F[0;1] z1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in &self.terms {
            for (m, a) in c.terms() {
                match (first, a.is_negative()) {
                    (true, true) => write!(f, "-")?,
                    (true, false) => {}
                    (false, true) => write!(f, " - ")?,
                    (false, false) => write!(f, " + ")?,
                }
                let a = a.abs();
                if !a.is_one() {
                    write!(f, "{a} ")?;
                }
                write!(f, "{l}")?;
                if !m.is_one() {
                    write!(f, " {m}")?;
                }
                first = false;
            }
        }
        Ok(())
    }
}

/// `u ∧ f` for a b-side wedge element `u`.
pub fn wedge_fock(u: &WedgeElement, f: &FockElement) -> Result<FockElement> {
    if u.flavor() != Flavor::B {
        return Err(Error::Domain("only b-side wedges act on the Fock space by wedging".into()));
    }
    let mut out = FockElement::zero(f.window.meet(u.window()));
    for (um, uc) in u.terms() {
        for (label, c) in &f.terms {
            let r = label.lambda.length();
            let mut idx = um.indices().to_vec();
            idx.extend(label.block(r));
            if let Some((sign, l)) = normal_order(&idx, label.charge - r as i64) {
                out.add_term(l, uc.mul_series(c).scale(&q(sign as i64)));
            }
        }
    }
    Ok(out)
}

/// `[β]_ν ⌟ [b]_{m+λ}` computed with an explicit depth `r`. The depth must
/// put every index of `ν` inside the block.
pub fn contract_label_at_depth(
    nu: &WedgeMonomial,
    label: &FockLabel,
    r: usize,
    order: ContractionOrder,
) -> Result<Option<(i32, FockLabel)>> {
    let lowest = nu.indices().last().copied().unwrap_or(i64::MAX);
    if r < label.lambda.length() || (nu.degree() > 0 && lowest < label.charge - r as i64 + 1) {
        return Err(Error::Domain(format!("depth {r} is not admissible for {nu} and {label}")));
    }
    if nu.degree() > r {
        return Ok(None);
    }
    let block = WedgeMonomial::new(Flavor::B, label.block(r))?;
    Ok(contract_multi_monomial(nu, &block, order)?
        .and_then(|(s, rest)| normal_order_sorted(rest.indices(), label.charge - r as i64).map(|l| (s, l))))
}

/// `[β]_ν ⌟ [b]_{m+λ}` at the smallest admissible depth.
pub fn contract_label(nu: &WedgeMonomial, label: &FockLabel, order: ContractionOrder) -> Result<Option<(i32, FockLabel)>> {
    let lowest = nu.indices().last().copied().unwrap_or(label.charge);
    let r = label.depth_for(lowest).max(nu.degree());
    contract_label_at_depth(nu, label, r, order)
}

/// `[β]_ν ⌟ f`.
pub fn contract_fock(nu: &WedgeMonomial, f: &FockElement, order: ContractionOrder) -> Result<FockElement> {
    if nu.flavor() != Flavor::Beta {
        return Err(Error::Domain("contraction needs a beta-side monomial".into()));
    }
    let mut out = FockElement::zero(f.window.clone());
    for (label, c) in &f.terms {
        if let Some((sign, l)) = contract_label(nu, label, order)? {
            out.add_term(l, c.scale(&q(sign as i64)));
        }
    }
    Ok(out)
}

/// `ξ^p f`: shifts every charge by `p`.
pub fn xi_shift(p: i64, f: &FockElement) -> FockElement {
    FockElement {
        terms: f
            .terms
            .iter()
            .map(|(l, c)| (FockLabel::new(l.charge + p, l.lambda.clone()), c.clone()))
            .collect(),
        window: f.window.clone(),
    }
}

/// `ξ^m S_λ(x) ↦ [b]_{m+λ}`, extended linearly over the formal variables.
pub fn boson_to_fermion(g: &SeriesElement) -> FockElement {
    let mut out = FockElement::zero(g.window().clone().with_x_weight(u32::MAX));
    out.window.x_weight = None;
    for ((formal, lambda), c) in schur_expand_graded(g) {
        let m = formal.xi_exponent() as i64;
        out.add_monomial(FockLabel::new(m, lambda), formal.with(Var::Xi, 0), c);
    }
    out
}

/// `[b]_{m+λ} ↦ ξ^m S_λ(x)`. The result carries the coefficient window with
/// the `x`-weight bound `max_weight`.
pub fn fermion_to_boson(f: &FockElement, max_weight: Option<u32>) -> SeriesElement {
    let mut window = f.window.clone();
    window.x_weight = max_weight;
    let mut out = SeriesElement::zero(window.clone());
    for (l, c) in &f.terms {
        if max_weight.is_some_and(|d| l.weight() > d) {
            continue;
        }
        let s = schur(&l.lambda, &TruncationWindow::unbounded()).mul_monomial(&Monomial::var(Var::Xi, l.charge as i32), &Q::one());
        out += &c.clone().with_window(window.clone()).mul_series(&s);
    }
    out
}
