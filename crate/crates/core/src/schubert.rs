//! Schubert derivations `σ±(z)`, `σ̄±(z)` on `∧V`, on `F` and on `B(ξ)`.
//!
//! On `b_j` they act by `σ±(z) b_j = Σ_{i≥0} b_{j±i} z^{±i}` and
//! `σ̄±(z) b_j = b_j − b_{j±1} z^{±1}`, extended to wedges as Hasse–Schmidt
//! derivations. On `F` a label is split into a finite block and a vacuum
//! tail; the block transforms factor by factor and the tail by
//!
//! ```text
//! σ+(z)[b]_t = Σ_i [b]_{t+(i)} z^i      σ̄+(z)[b]_t = Σ_j (−1)^j [b]_{t+(1^j)} z^j
//! σ−(z)[b]_t = σ̄−(z)[b]_t = [b]_t
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{domain, Error, Result};
use crate::exterior::{wedge, Flavor, WedgeElement, WedgeMonomial};
use crate::fock::{normal_order, FockElement, FockLabel};
use crate::partitions::{signed_permutations, Partition};
use crate::symfunc::{apply_exp_diff, q, DiffOperatorSeries, Monomial, SeriesElement, TruncationWindow, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchubertKind {
    /// `σ+`
    Plus,
    /// `σ−`
    Minus,
    /// `σ̄+`
    BarPlus,
    /// `σ̄−`
    BarMinus,
}

impl SchubertKind {
    pub fn inverse(self) -> SchubertKind {
        match self {
            SchubertKind::Plus => SchubertKind::BarPlus,
            SchubertKind::BarPlus => SchubertKind::Plus,
            SchubertKind::Minus => SchubertKind::BarMinus,
            SchubertKind::BarMinus => SchubertKind::Minus,
        }
    }

    /// Whether the operator raises indices.
    pub fn is_raising(self) -> bool {
        matches!(self, SchubertKind::Plus | SchubertKind::BarPlus)
    }
}

impl fmt::Display for SchubertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchubertKind::Plus => "s+",
            SchubertKind::Minus => "s-",
            SchubertKind::BarPlus => "sbar+",
            SchubertKind::BarMinus => "sbar-",
        })
    }
}

impl FromStr for SchubertKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s+" => Ok(SchubertKind::Plus),
            "s-" => Ok(SchubertKind::Minus),
            "sbar+" => Ok(SchubertKind::BarPlus),
            "sbar-" => Ok(SchubertKind::BarMinus),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown Schubert operator {s:?}") }),
        }
    }
}

/// `op(v_1)·op(v_2)⋯op(v_n)`, applied with `v_n` first.
///
/// On `F` the `x_weight` of the window caps the weight of output labels;
/// the formal intervals truncate coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertOperator {
    pub kind: SchubertKind,
    pub vars: Vec<Var>,
    pub window: TruncationWindow,
}

impl SchubertOperator {
    pub fn new(kind: SchubertKind, vars: Vec<Var>, window: TruncationWindow) -> Result<Self> {
        if vars.is_empty() {
            return domain("a Schubert operator needs at least one variable");
        }
        if vars.iter().any(|v| matches!(v, Var::X(_) | Var::Xi)) {
            return domain("Schubert operators take z or w variables");
        }
        Ok(SchubertOperator { kind, vars, window })
    }

    pub fn single(kind: SchubertKind, var: Var, window: TruncationWindow) -> Self {
        SchubertOperator::new(kind, vec![var], window).expect("formal variable")
    }

    pub fn inverse(&self) -> SchubertOperator {
        SchubertOperator { kind: self.kind.inverse(), vars: self.vars.iter().rev().copied().collect(), window: self.window.clone() }
    }
}

impl fmt::Display for SchubertOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.vars.iter().map(Var::to_string).collect();
        write!(f, "{}({})", self.kind, vars.join(","))
    }
}

/// Largest admissible `|exponent|` for a single application on a coefficient
/// whose `v`-exponents lie in `[lo, hi]`, or `None` if unbounded.
fn exponent_budget(kind: SchubertKind, v: Var, window: &TruncationWindow, existing: Option<(i32, i32)>) -> Option<u32> {
    let iv = window.interval(v);
    let (lo, hi) = existing.unwrap_or((0, 0));
    if kind.is_raising() {
        (iv.hi != i32::MAX).then(|| (iv.hi as i64 - lo as i64).max(0) as u32)
    } else {
        (iv.lo != i32::MIN).then(|| (hi as i64 - iv.lo as i64).max(0) as u32)
    }
}

/// `σ̂(v) b_j` for one factor, as `(index, |exponent|, sign)`.
fn factor_image(kind: SchubertKind, j: i64, budget: u32) -> Vec<(i64, u32, i32)> {
    match kind {
        SchubertKind::Plus => (0..=budget).map(|i| (j + i as i64, i, 1)).collect(),
        SchubertKind::Minus => (0..=budget).map(|i| (j - i as i64, i, 1)).collect(),
        SchubertKind::BarPlus => [(j, 0, 1), (j + 1, 1, -1)].into_iter().filter(|t| t.1 <= budget).collect(),
        SchubertKind::BarMinus => [(j, 0, 1), (j - 1, 1, -1)].into_iter().filter(|t| t.1 <= budget).collect(),
    }
}

/// Image of the vacuum `[b]_t` as `(extra indices, new tail, |exponent|, sign)`.
fn tail_image(kind: SchubertKind, t: i64, budget: u32) -> Vec<(Vec<i64>, i64, u32, i32)> {
    match kind {
        SchubertKind::Plus => (0..=budget).map(|i| (vec![t + i as i64], t - 1, i, 1)).collect(),
        SchubertKind::BarPlus => (0..=budget)
            .map(|j| {
                let idx: Vec<i64> = (0..j as i64).map(|s| t + 1 - s).collect();
                (idx, t - j as i64, j, if j % 2 == 0 { 1 } else { -1 })
            })
            .collect(),
        SchubertKind::Minus | SchubertKind::BarMinus => vec![(Vec::new(), t, 0, 1)],
    }
}

/// `(label, |exponent|, coefficient)` for one label.
type Kernel = Vec<(FockLabel, u32, i64)>;
type KernelCache = Mutex<HashMap<(SchubertKind, FockLabel, u32), Arc<Kernel>>>;

fn kernel_cache() -> &'static KernelCache {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Single-variable action on `[b]_{m+λ}` with every `|exponent| ≤ budget`.
fn label_kernel(kind: SchubertKind, label: &FockLabel, budget: u32) -> Arc<Kernel> {
    let key = (kind, label.clone(), budget);
    if let Some(k) = kernel_cache().lock().unwrap().get(&key) {
        return k.clone();
    }
    let k = Arc::new(compute_kernel(kind, label, budget));
    kernel_cache().lock().unwrap().insert(key, k.clone());
    k
}

fn compute_kernel(kind: SchubertKind, label: &FockLabel, budget: u32) -> Kernel {
    let r = label.lambda.length();
    let block = label.block(r);
    let tail = label.charge - r as i64;
    let mut acc: HashMap<(FockLabel, u32), i64> = HashMap::new();
    let mut chosen = Vec::with_capacity(r + budget as usize + 1);

    #[allow(clippy::too_many_arguments)]
    fn rec(
        kind: SchubertKind,
        block: &[i64],
        tail: i64,
        pos: usize,
        spent: u32,
        budget: u32,
        sign: i32,
        chosen: &mut Vec<i64>,
        acc: &mut HashMap<(FockLabel, u32), i64>,
    ) {
        if pos == block.len() {
            for (extra, new_tail, cost, s) in tail_image(kind, tail, budget - spent) {
                let len = chosen.len();
                chosen.extend(extra);
                if let Some((ns, l)) = normal_order(chosen, new_tail) {
                    *acc.entry((l, spent + cost)).or_default() += (sign * s * ns) as i64;
                }
                chosen.truncate(len);
            }
            return;
        }
        for (j, cost, s) in factor_image(kind, block[pos], budget - spent) {
            if j <= tail && !kind.is_raising() {
                break;
            }
            if chosen.contains(&j) {
                continue;
            }
            chosen.push(j);
            rec(kind, block, tail, pos + 1, spent + cost, budget, sign * s, chosen, acc);
            chosen.pop();
        }
    }

    rec(kind, &block, tail, 0, 0, budget, 1, &mut chosen, &mut acc);
    let mut out: Kernel = acc.into_iter().filter(|(_, c)| *c != 0).map(|((l, e), c)| (l, e, c)).collect();
    out.sort();
    out
}

fn apply_single(kind: SchubertKind, v: Var, window: &TruncationWindow, f: &FockElement) -> Result<FockElement> {
    let mut out = FockElement::zero(f.window().meet(window));
    for (label, c) in f.terms() {
        let existing = c.min_exponent(v).zip(c.max_exponent(v));
        let by_exponent = exponent_budget(kind, v, out.window(), existing);
        let budget = if kind.is_raising() {
            let by_weight = match window.x_weight {
                Some(d) if d < label.weight() => continue,
                Some(d) => Some(d - label.weight()),
                None => None,
            };
            match (by_weight, by_exponent) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => {
                    return Err(Error::Window(format!("{kind}({v}) on F needs a weight cap or a bound on {v}")));
                }
            }
        } else {
            // Lowering is finite: a block index cannot fall into the tail.
            by_exponent.unwrap_or(u32::MAX).min(label.weight() + (label.lambda.length() as u32).pow(2))
        };
        let sgn = if kind.is_raising() { 1 } else { -1 };
        for (l, e, k) in label_kernel(kind, label, budget).iter() {
            let m = Monomial::var(v, sgn * *e as i32);
            out.add_term(l.clone(), c.mul_monomial(&m, &q(*k)));
        }
    }
    Ok(out)
}

/// The action on `F`.
pub fn apply_on_fock(op: &SchubertOperator, f: &FockElement) -> Result<FockElement> {
    let mut cur = f.clone();
    for v in op.vars.iter().rev() {
        cur = apply_single(op.kind, *v, &op.window, &cur)?;
    }
    Ok(cur)
}

/// The action on finite b-side wedges, truncated by the formal intervals.
pub fn apply_on_exterior(op: &SchubertOperator, u: &WedgeElement) -> Result<WedgeElement> {
    if u.flavor() != Flavor::B {
        return domain("Schubert derivations act on the b-side");
    }
    let mut cur = u.clone();
    for v in op.vars.iter().rev() {
        let window = cur.window().meet(&op.window);
        let mut out = WedgeElement::zero(Flavor::B, window.clone());
        for (m, c) in cur.terms() {
            let existing = c.min_exponent(*v).zip(c.max_exponent(*v));
            let budget = match (op.kind, exponent_budget(op.kind, *v, &window, existing)) {
                (_, Some(b)) => b,
                (SchubertKind::BarPlus | SchubertKind::BarMinus, None) => 1,
                (kind, None) => {
                    return Err(Error::Window(format!("{kind}({v}) on wedges needs a bound on {v}")));
                }
            };
            let sgn = if op.kind.is_raising() { 1 } else { -1 };
            let mut image = WedgeElement::from_monomial(WedgeMonomial::unit(Flavor::B), window.clone());
            for &j in m.indices() {
                let mut factor = WedgeElement::zero(Flavor::B, window.clone());
                for (i, e, s) in factor_image(op.kind, j, budget) {
                    let coeff = SeriesElement::term(Monomial::var(*v, sgn * e as i32), q(s as i64), window.clone());
                    factor.add_term(WedgeMonomial::new(Flavor::B, vec![i])?, coeff);
                }
                image = wedge(&image, &factor)?;
            }
            out = out.add(&image.scale(c));
        }
        cur = out;
    }
    Ok(cur)
}

/// `σ_i f`, the `z^i` coefficient of `σ+(z) f`.
pub fn sigma_coefficient(i: i64, f: &FockElement) -> FockElement {
    let mut out = FockElement::zero(f.window().clone());
    if i < 0 {
        return out;
    }
    for (label, c) in f.terms() {
        for (l, e, k) in label_kernel(SchubertKind::Plus, label, i as u32).iter() {
            if *e as i64 == i {
                out.add_term(l.clone(), c.scale(&q(*k)));
            }
        }
    }
    out
}

/// `det(σ_{λ_j−j+i}) [b]_m`, expanded over permutations.
pub fn giambelli(m: i64, lambda: &Partition, window: &TruncationWindow) -> FockElement {
    let n = lambda.length();
    let entry = |row: usize, col: usize| lambda.part(col) as i64 - col as i64 + row as i64;
    let vacuum = FockElement::basis(FockLabel::vacuum(m), window.clone());
    let mut out = FockElement::zero(window.clone());
    for (sign, perm) in signed_permutations(n, |col, row| entry(row, col) >= 0) {
        let mut cur = vacuum.clone();
        for (col, &row) in perm.iter().enumerate() {
            cur = sigma_coefficient(entry(row, col), &cur);
        }
        out.add_assign(&cur.scale_q(&q(sign as i64)));
    }
    out
}

/// `exp(±Σ_n x_n p_n(vars))`: `+` for `σ+`, `−` for `σ̄+`. The window must
/// bound the `x`-weight.
pub fn eigen_multiplier(kind: SchubertKind, vars: &[Var], window: &TruncationWindow) -> Result<SeriesElement> {
    let sign = match kind {
        SchubertKind::Plus => 1,
        SchubertKind::BarPlus => -1,
        _ => return domain("only raising operators act by multiplication"),
    };
    let Some(d) = window.x_weight else {
        return Err(Error::Window("the eigenvalue multiplier needs an x-weight bound".into()));
    };
    let mut arg = SeriesElement::zero(window.clone());
    for n in 1..=d {
        for v in vars {
            arg.add_term(Monomial::var(Var::X(n), 1).with(*v, n as i32), q(sign));
        }
    }
    arg.exp()
}

/// The exponential differential operator realizing `σ−` or `σ̄−` on `B(ξ)`
/// up to `x`-weight `degree`.
pub fn lowering_operator(kind: SchubertKind, vars: &[Var], degree: u32) -> Result<DiffOperatorSeries> {
    let scale = match kind {
        SchubertKind::Minus => 1,
        SchubertKind::BarMinus => -1,
        _ => return domain("raising operators are not differential operators on B(xi)"),
    };
    let full = TruncationWindow::unbounded();
    DiffOperatorSeries::from_fn(degree, scale, |n| {
        let mut p = SeriesElement::zero(full.clone());
        for v in vars {
            p.add_term(Monomial::var(*v, -(n as i32)), q(1));
        }
        p
    })
}

/// The action of `σ−` or `σ̄−` on `B(ξ)`.
pub fn apply_on_boson(op: &SchubertOperator, g: &SeriesElement) -> Result<SeriesElement> {
    let d = lowering_operator(op.kind, &op.vars, g.max_x_weight())?;
    Ok(apply_exp_diff(&d, g).restrict(&op.window))
}

/// Clears the shared label kernels.
pub fn clear_cache() {
    kernel_cache().lock().unwrap().clear();
}

#[cfg(test)]
mod tests;
