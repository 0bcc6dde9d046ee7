//! The operators `E(z_k, w_l⁻¹)` on `F` and `B(ξ)`, their vertex-operator
//! closed forms, and windowed verification of the identities relating them.
//!
//! Conventions. Exponents of `z_1..z_k`, `w_1..w_l` are certified on the
//! box `[-N, N]`, and bosonic coordinates up to `x`-weight `D` (equivalently
//! Fock labels of weight at most `D`). Every computation below is arranged
//! so that truncating to the box is exact, never approximate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{decreasing_tuples, dual_generating_wedge, generating_wedge, ContractionOrder, Flavor, IndexWindow, WedgeMonomial};
use crate::fock::{boson_to_fermion, contract_label, fermion_to_boson, normal_order, wedge_fock, FockElement, FockLabel};
use crate::partitions::{indices_to_bilateral, Partition};
use crate::schubert::{apply_on_boson, apply_on_fock, eigen_multiplier, lowering_operator, SchubertKind, SchubertOperator};
use crate::symfunc::{
    apply_exp_diff, extended_schur, generating_normalizer, q, q_frac, schur, Block, DiffOperatorSeries, Monomial, SeriesElement,
    TruncationWindow, Var, MAX_BLOCK, Q,
};

/// A deliberate corruption of the closed form, used to show that the
/// verifier can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// `exp(−Σ p_n(w)p_n(z⁻¹)/n)` in place of `exp(+…)`.
    PrefactorSign,
    /// `R` with exponent `m − l` in place of `m − l + 1`.
    RExponent,
    /// The last-row contraction convention in the direct expansion.
    ContractionOrder,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mutation::PrefactorSign => "prefactor-sign",
            Mutation::RExponent => "r-exponent",
            Mutation::ContractionOrder => "contraction-order",
        })
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prefactor-sign" => Ok(Mutation::PrefactorSign),
            "r-exponent" => Ok(Mutation::RExponent),
            "contraction-order" => Ok(Mutation::ContractionOrder),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown mutation {s:?}") }),
        }
    }
}

/// Degrees `(k, l)` and the certified window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexConfig {
    pub k: usize,
    pub l: usize,
    /// Box half-width `N` for every formal variable.
    pub order: i32,
    /// `x`-weight bound; defaults to `|λ| + N`.
    pub x_weight: Option<u32>,
    /// Explicit index range for the direct expansion, replacing the derived
    /// bounds on both the `b` and `β` side.
    pub index_window: Option<IndexWindow>,
    pub mutation: Option<Mutation>,
}

impl VertexConfig {
    pub fn new(k: usize, l: usize, order: i32) -> Self {
        VertexConfig { k, l, order, x_weight: None, index_window: None, mutation: None }
    }

    pub fn with_x_weight(mut self, d: u32) -> Self {
        self.x_weight = Some(d);
        self
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k > MAX_BLOCK || self.l > MAX_BLOCK {
            return Err(Error::Window(format!("at most {MAX_BLOCK} variables per block")));
        }
        if self.order < 0 {
            return Err(Error::Window("the order must be non-negative".into()));
        }
        if let Some(iw) = self.index_window {
            if iw.lo > iw.hi {
                return Err(Error::Window(format!("empty index window {}:{}", iw.lo, iw.hi)));
            }
        }
        Ok(())
    }

    pub fn weight_bound(&self, lambda: &Partition) -> u32 {
        self.x_weight.unwrap_or(lambda.weight() + self.order as u32)
    }

    /// The certified window for a case.
    pub fn window(&self, lambda: &Partition) -> TruncationWindow {
        TruncationWindow::square(self.k, self.l, self.order).with_x_weight(self.weight_bound(lambda))
    }

    fn contraction_order(&self) -> ContractionOrder {
        match self.mutation {
            Some(Mutation::ContractionOrder) => ContractionOrder::LastRow,
            _ => ContractionOrder::FirstRow,
        }
    }

    fn z_block(&self) -> Block {
        Block::Z(self.k)
    }

    fn w_block(&self) -> Block {
        Block::W(self.l)
    }

    fn z_vars(&self) -> Vec<Var> {
        (1..=self.k).map(Var::Z).collect()
    }

    fn w_vars(&self) -> Vec<Var> {
        (1..=self.l).map(Var::W).collect()
    }
}

/// Enumeration ranges of the direct expansion.
///
/// `β`-indices `c_1 > … > c_l` lie in `beta` with `Σc` in `beta_sum`;
/// `b`-indices `a_1 > … > a_k` lie in `b` with `Σa` in `b_sum`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectBounds {
    pub beta: IndexWindow,
    pub beta_sum: (i64, i64),
    pub b: IndexWindow,
    pub b_sum: (i64, i64),
}

impl DirectBounds {
    /// The smallest ranges outside of which no term reaches the window.
    ///
    /// `β_c` kills `[b]_{m+λ}` unless `c ≤ m + λ_1`. A Schur polynomial in
    /// `r` variables has total degree `|μ| = Σ indices − r(r−1)/2`, which
    /// must lie in `[−rN, rN]` for a monomial to fit the box. Wedged indices
    /// sit above the lowest hole of the contracted label and at most `D`
    /// above the final charge.
    pub fn derive(cfg: &VertexConfig, m: i64, lambda: &Partition) -> DirectBounds {
        let n = cfg.order as i64;
        let (k, l) = (cfg.k as i64, cfg.l as i64);
        let d = cfg.weight_bound(lambda) as i64;
        let beta_sum = (l * (l - 1) / 2 - l * n, l * (l - 1) / 2 + l * n);
        let beta_hi = m + lambda.part(0) as i64;
        let beta_lo = beta_sum.0 - (0..l - 1).map(|j| beta_hi - j).sum::<i64>();
        let b_sum = (k * (k - 1) / 2 - k * n, k * (k - 1) / 2 + k * n);
        let b_lo = beta_lo.min(m - lambda.length() as i64 + 1);
        let b_hi = m - l + k + d;
        DirectBounds { beta: IndexWindow::new(beta_lo, beta_hi), beta_sum, b: IndexWindow::new(b_lo, b_hi), b_sum }
    }

    /// Every range enlarged by `step` on both ends.
    pub fn widen(&self, step: i64) -> DirectBounds {
        DirectBounds {
            beta: self.beta.widen(step),
            beta_sum: (self.beta_sum.0 - step, self.beta_sum.1 + step),
            b: self.b.widen(step),
            b_sum: (self.b_sum.0 - step, self.b_sum.1 + step),
        }
    }

    /// Ranges taken from an explicit index window, with unconstrained sums.
    pub fn explicit(iw: IndexWindow) -> DirectBounds {
        DirectBounds { beta: iw, beta_sum: (i64::MIN, i64::MAX), b: iw, b_sum: (i64::MIN, i64::MAX) }
    }
}

fn in_range(v: &[i64], sum: (i64, i64)) -> bool {
    let s: i64 = v.iter().sum();
    sum.0 <= s && s <= sum.1
}

/// `E_f(z_k, w_l⁻¹)[b]_{m+λ}` from its definition, with the derived
/// enumeration ranges.
pub fn ef_direct(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<FockElement> {
    let bounds = match cfg.index_window {
        Some(iw) => DirectBounds::explicit(iw),
        None => DirectBounds::derive(cfg, m, lambda),
    };
    ef_direct_with(cfg, m, lambda, &bounds)
}

/// `Σ_μ Σ_ν s_μ(z) s_ν(w⁻¹) [b]_μ ∧ ([β]_ν ⌟ [b]_{m+λ})` over the given
/// ranges, restricted to the certified window.
pub fn ef_direct_with(cfg: &VertexConfig, m: i64, lambda: &Partition, bounds: &DirectBounds) -> Result<FockElement> {
    cfg.validate()?;
    let window = cfg.window(lambda);
    let d = cfg.weight_bound(lambda);
    let label = FockLabel::new(m, lambda.clone());

    // β side, grouped by the contracted label.
    let mut contracted: BTreeMap<FockLabel, SeriesElement> = BTreeMap::new();
    for c in decreasing_tuples(cfg.l, bounds.beta) {
        if !in_range(&c, bounds.beta_sum) {
            continue;
        }
        let s = extended_schur(&indices_to_bilateral(&c)?, cfg.w_block(), &window)?;
        if s.is_zero() {
            continue;
        }
        let nu = WedgeMonomial::new(Flavor::Beta, c)?;
        if let Some((sign, rho)) = contract_label(&nu, &label, cfg.contraction_order())? {
            let e = contracted.entry(rho).or_insert_with(|| SeriesElement::zero(window.clone()));
            *e += &s.scale(&q(sign as i64));
        }
    }

    // b side: s_μ(z) is shared by every contracted label.
    let mut mus: Vec<(Vec<i64>, SeriesElement)> = Vec::new();
    for a in decreasing_tuples(cfg.k, bounds.b) {
        if !in_range(&a, bounds.b_sum) {
            continue;
        }
        let s = extended_schur(&indices_to_bilateral(&a)?, cfg.z_block(), &window)?;
        if !s.is_zero() {
            mus.push((a, s));
        }
    }

    let mut out = FockElement::zero(window.clone());
    for (rho, cw) in contracted {
        if cw.is_zero() {
            continue;
        }
        let r = rho.lambda.length();
        let block = rho.block(r);
        let tail = rho.charge - r as i64;
        let mut by_label: HashMap<FockLabel, SeriesElement> = HashMap::new();
        for (a, s) in &mus {
            let mut idx = a.clone();
            idx.extend_from_slice(&block);
            if let Some((sign, l)) = normal_order(&idx, tail) {
                if l.weight() > d {
                    continue;
                }
                let e = by_label.entry(l).or_insert_with(|| SeriesElement::zero(window.clone()));
                *e += &s.scale(&q(sign as i64));
            }
        }
        for (l, cz) in by_label {
            out.add_term(l, cz.mul_series(&cw));
        }
    }
    Ok(out)
}

/// `∏ z_i^{e} / ∏ w_j^{e} · ξ^{k−l}` with `e = m − l + 1`.
pub fn r_multiplier(cfg: &VertexConfig, m: i64) -> SeriesElement {
    let e = r_exponent(cfg, m);
    let mut mono = Monomial::var(Var::Xi, cfg.k as i32 - cfg.l as i32);
    for v in cfg.z_vars() {
        mono = mono.with(v, e);
    }
    for v in cfg.w_vars() {
        mono = mono.with(v, -e);
    }
    SeriesElement::term(mono, Q::from_integer(1.into()), TruncationWindow::unbounded())
}

fn r_exponent(cfg: &VertexConfig, m: i64) -> i32 {
    let e = m as i32 - cfg.l as i32 + 1;
    if cfg.mutation == Some(Mutation::RExponent) {
        e - 1
    } else {
        e
    }
}

/// `R_f` on a Fock element.
pub fn apply_r_f(cfg: &VertexConfig, f: &FockElement) -> FockElement {
    let shift = cfg.k as i64 - cfg.l as i64;
    let mut out = FockElement::zero(f.window().clone());
    for (label, c) in f.terms() {
        let r = r_multiplier(cfg, label.charge);
        let mono = r.terms().keys().next().expect("monomial").clone().with(Var::Xi, 0);
        out.add_term(FockLabel::new(label.charge + shift, label.lambda.clone()), c.mul_monomial(&mono, &q(1)));
    }
    out
}

/// `R_b` on `B(ξ)`, acting on each `ξ^m` component separately.
pub fn apply_r_b(cfg: &VertexConfig, g: &SeriesElement) -> SeriesElement {
    let mut out = SeriesElement::zero(g.window().clone());
    let charges: std::collections::BTreeSet<i32> = g.terms().keys().map(Monomial::xi_exponent).collect();
    for m in charges {
        let part = g.filter(|mono| mono.xi_exponent() == m);
        let r = r_multiplier(cfg, m as i64);
        let (mono, c) = r.terms().iter().next().expect("monomial");
        out += &part.mul_monomial(mono, c);
    }
    out
}

/// `exp(±Σ_n p_n(w_l) p_n(z_k⁻¹)/n)` on `window`, whose `w` intervals must
/// be bounded above. The sign is negative only under the prefactor mutation.
pub fn commutation_prefactor(cfg: &VertexConfig, window: &TruncationWindow) -> Result<SeriesElement> {
    let sign = if cfg.mutation == Some(Mutation::PrefactorSign) { -1 } else { 1 };
    if cfg.k == 0 || cfg.l == 0 {
        return Ok(SeriesElement::one(window.clone()));
    }
    let mut top = 0;
    for v in cfg.w_vars() {
        let hi = window.interval(v).hi;
        if hi == i32::MAX {
            return Err(Error::Window(format!("the prefactor needs an upper bound on {v}")));
        }
        top = top.max(hi);
    }
    let mut arg = SeriesElement::zero(window.clone());
    for n in 1..=top.max(0) {
        for zi in cfg.z_vars() {
            for wj in cfg.w_vars() {
                arg.add_term(Monomial::var(wj, n).with(zi, -n), q_frac(sign, n as i64));
            }
        }
    }
    arg.exp()
}

/// `∏_{i,j} (1 − w_j/z_i)⁻¹` expanded as geometric series on `window`.
pub fn prefactor_product(cfg: &VertexConfig, window: &TruncationWindow) -> Result<SeriesElement> {
    let mut acc = SeriesElement::one(window.clone());
    for zi in cfg.z_vars() {
        for wj in cfg.w_vars() {
            let hi = window.interval(wj).hi;
            if hi == i32::MAX {
                return Err(Error::Window(format!("the prefactor needs an upper bound on {wj}")));
            }
            let geo = SeriesElement::from_terms((0..=hi.max(0)).map(|a| (Monomial::var(wj, a).with(zi, -a), q(1))), window.clone());
            acc = acc.mul_series(&geo);
        }
    }
    Ok(acc)
}

/// The window on which the prefactor must be expanded so that its product
/// with `g` is exact on the box `[-N, N]`: the prefactor raises `w` and
/// lowers `z`, so only the lowest `w` and highest `z` exponents of `g` matter.
fn prefactor_window(cfg: &VertexConfig, g_terms: impl Iterator<Item = Monomial> + Clone) -> TruncationWindow {
    let n = cfg.order;
    let mut w = TruncationWindow::unbounded();
    for v in cfg.w_vars() {
        let lo = g_terms.clone().map(|m| m.exponent(v)).min().unwrap_or(0);
        w = w.with_bound(v, 0, (n - lo).max(0));
    }
    for v in cfg.z_vars() {
        let hi = g_terms.clone().map(|m| m.exponent(v)).max().unwrap_or(0);
        w = w.with_bound(v, (-n - hi).min(0), 0);
    }
    w
}

/// Multiplies by the prefactor one factor `(1 − w_j/z_i)^{∓1}` at a time,
/// keeping only terms that can still land in the box: later factors only
/// raise `w` and lower `z` exponents.
fn apply_prefactor(cfg: &VertexConfig, s: &SeriesElement) -> SeriesElement {
    let n = cfg.order;
    let inverse = cfg.mutation != Some(Mutation::PrefactorSign);
    let mut cur: BTreeMap<Monomial, Q> =
        s.terms().iter().filter(|(m, _)| in_reach(cfg, m)).map(|(m, c)| (m.clone(), c.clone())).collect();
    for zi in cfg.z_vars() {
        for wj in cfg.w_vars() {
            let mut next: BTreeMap<Monomial, Q> = BTreeMap::new();
            for (m, c) in &cur {
                let top = if inverse { n - m.exponent(wj) } else { 1 };
                for a in 0..=top.max(0) {
                    let p = m.clone().with(wj, m.exponent(wj) + a).with(zi, m.exponent(zi) - a);
                    if !in_reach(cfg, &p) {
                        break;
                    }
                    let c = if !inverse && a == 1 { -c } else { c.clone() };
                    let e = next.entry(p).or_insert_with(|| q(0));
                    *e += c;
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
    }
    SeriesElement::from_terms(cur, s.window().clone())
}

fn in_reach(cfg: &VertexConfig, m: &Monomial) -> bool {
    cfg.w_vars().iter().all(|v| m.exponent(*v) <= cfg.order) && cfg.z_vars().iter().all(|v| m.exponent(*v) >= -cfg.order)
}

fn fock_monomials(f: &FockElement) -> Vec<Monomial> {
    f.terms().values().flat_map(|c| c.terms().keys().cloned()).collect()
}

fn lowering_on_fock(cfg: &VertexConfig, f: &FockElement) -> Result<FockElement> {
    let full = TruncationWindow::unbounded();
    let mut cur = f.clone();
    if cfg.l > 0 {
        cur = apply_on_fock(&SchubertOperator::new(SchubertKind::Minus, cfg.w_vars(), full.clone())?, &cur)?;
    }
    if cfg.k > 0 {
        cur = apply_on_fock(&SchubertOperator::new(SchubertKind::BarMinus, cfg.z_vars(), full)?, &cur)?;
    }
    Ok(cur)
}

/// `Γ_f(z_k, w_l)[b]_{m+λ}` with the raising pair replaced by its eigenvalue
/// `exp(Σ x_n (p_n(z_k) − p_n(w_l)))`, acting through the `B(ξ)`-module
/// structure.
pub fn gamma_f(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<FockElement> {
    cfg.validate()?;
    let d = cfg.weight_bound(lambda);
    let start = FockElement::basis(FockLabel::new(m, lambda.clone()), TruncationWindow::unbounded());
    let lowered = lowering_on_fock(cfg, &start)?;
    let g = fermion_to_boson(&lowered, Some(d));
    let eigen = eigenvalue(cfg, d)?;
    let raised = boson_to_fermion(&g.mul_series(&eigen));
    Ok(apply_r_f(cfg, &raised))
}

/// `Γ_f(z_k, w_l)[b]_{m+λ}` as the operator word
/// `R_f σ+(z_k) σ̄+(w_l) σ̄−(z_k) σ−(w_l)`, evaluated on `F`.
pub fn gamma_f_operator(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<FockElement> {
    cfg.validate()?;
    let cap = TruncationWindow::unbounded().with_x_weight(cfg.weight_bound(lambda));
    let start = FockElement::basis(FockLabel::new(m, lambda.clone()), TruncationWindow::unbounded());
    let mut cur = lowering_on_fock(cfg, &start)?;
    if cfg.l > 0 {
        cur = apply_on_fock(&SchubertOperator::new(SchubertKind::BarPlus, cfg.w_vars(), cap.clone())?, &cur)?;
    }
    if cfg.k > 0 {
        cur = apply_on_fock(&SchubertOperator::new(SchubertKind::Plus, cfg.z_vars(), cap)?, &cur)?;
    }
    Ok(apply_r_f(cfg, &cur.with_window(TruncationWindow::unbounded())))
}

/// `exp(Σ_{n≤D} x_n (p_n(z_k) − p_n(w_l)))`.
fn eigenvalue(cfg: &VertexConfig, d: u32) -> Result<SeriesElement> {
    let window = TruncationWindow::unbounded().with_x_weight(d);
    let mut e = SeriesElement::one(window.clone());
    if cfg.k > 0 {
        e = e.mul_series(&eigen_multiplier(SchubertKind::Plus, &cfg.z_vars(), &window)?);
    }
    if cfg.l > 0 {
        e = e.mul_series(&eigen_multiplier(SchubertKind::BarPlus, &cfg.w_vars(), &window)?);
    }
    Ok(e)
}

/// `exp(−Σ (p_n(z_k⁻¹) − p_n(w_l⁻¹))/n ∂/∂x_n)` up to `x`-degree `degree`.
fn lowering_diff_operator(cfg: &VertexConfig, degree: u32) -> Result<DiffOperatorSeries> {
    let z = lowering_operator(SchubertKind::BarMinus, &cfg.z_vars(), degree)?;
    let w = lowering_operator(SchubertKind::Minus, &cfg.w_vars(), degree)?;
    let coeffs = z.coefficients().iter().zip(w.coefficients()).map(|(a, b)| a + b).collect();
    DiffOperatorSeries::new(coeffs)
}

/// `Γ_b(z_k, w_l) g` on `B(ξ)`, exact up to `x`-weight `d`.
pub fn gamma_b(cfg: &VertexConfig, g: &SeriesElement, d: u32) -> Result<SeriesElement> {
    cfg.validate()?;
    let op = lowering_diff_operator(cfg, g.max_x_weight())?;
    let lowered = apply_exp_diff(&op, &g.clone().with_window(TruncationWindow::unbounded()));
    let raised = lowered.with_window(TruncationWindow::unbounded().with_x_weight(d)).mul_series(&eigenvalue(cfg, d)?);
    Ok(apply_r_b(cfg, &raised))
}

/// `E_f[b]_{m+λ}` from the closed form `exp(Σ p_n(w)p_n(z⁻¹)/n) Γ_f`,
/// restricted to the certified window.
pub fn ef_closed(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<FockElement> {
    let gamma = gamma_f(cfg, m, lambda)?;
    let window = cfg.window(lambda);
    Ok(gamma.map_coefficients(gamma.window().clone(), |_, c| apply_prefactor(cfg, c)).restrict(&window))
}

/// `E_b g` from the closed form, restricted to the certified window.
pub fn eb_closed(cfg: &VertexConfig, g: &SeriesElement, d: u32) -> Result<SeriesElement> {
    let gamma = gamma_b(cfg, g, d)?;
    let mut window = TruncationWindow::square(cfg.k, cfg.l, cfg.order);
    window.x_weight = Some(d);
    Ok(apply_prefactor(cfg, &gamma).restrict(&window))
}

/// The DJKM operator at `k = l = 1`, written with explicit single-variable
/// series: `(z^m/w^m) (1 − w/z)⁻¹ exp(Σ x_n (z^n − w^n)) exp(−Σ (z^{−n} − w^{−n})/n ∂_n)`
/// on each `ξ^m` component.
pub fn djkm_formula(order: i32, g: &SeriesElement, d: u32) -> Result<SeriesElement> {
    let (z, w) = (Var::Z(1), Var::W(1));
    let full = TruncationWindow::unbounded();
    let degree = g.max_x_weight();
    let op = DiffOperatorSeries::from_fn(degree, -1, |n| {
        SeriesElement::from_terms([(Monomial::var(z, -(n as i32)), q(1)), (Monomial::var(w, -(n as i32)), q(-1))], full.clone())
    })?;
    let lowered = apply_exp_diff(&op, &g.clone().with_window(full.clone()));
    let capped = full.clone().with_x_weight(d);
    let mut arg = SeriesElement::zero(capped.clone());
    for n in 1..=d {
        arg.add_term(Monomial::var(Var::X(n), 1).with(z, n as i32), q(1));
        arg.add_term(Monomial::var(Var::X(n), 1).with(w, n as i32), q(-1));
    }
    let raised = lowered.with_window(capped).mul_series(&arg.exp()?);
    let mut out = SeriesElement::zero(full.clone());
    let charges: std::collections::BTreeSet<i32> = raised.terms().keys().map(Monomial::xi_exponent).collect();
    for m in charges {
        let part = raised.filter(|mono| mono.xi_exponent() == m);
        out += &part.mul_monomial(&Monomial::var(z, m).with(w, -m), &q(1));
    }
    let lo_w = out.min_exponent(w).unwrap_or(0);
    let top = (order - lo_w).max(0);
    let geo = SeriesElement::from_terms((0..=top).map(|a| (Monomial::var(w, a).with(z, -a), q(1))), full);
    let mut window = TruncationWindow::square(1, 1, order);
    window.x_weight = Some(d);
    Ok(out.mul_series(&geo).restrict(&window))
}

/// One route compared against the reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteDiff {
    pub route: String,
    pub monomial: Monomial,
    pub expected: Q,
    pub actual: Q,
}

/// Outcome of one verification case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub case: String,
    pub window: TruncationWindow,
    /// Number of coefficients present on the reference side.
    pub compared: usize,
    pub diffs: Vec<RouteDiff>,
    pub elapsed: Duration,
}

impl ComparisonReport {
    fn new(case: String, window: TruncationWindow) -> Self {
        ComparisonReport { case, window, compared: 0, diffs: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn success(&self) -> bool {
        self.diffs.is_empty()
    }

    pub fn first_diff(&self) -> Option<&RouteDiff> {
        self.diffs.first()
    }

    /// Records the disagreements between `reference` and `other`.
    pub fn compare(&mut self, route: &str, reference: &SeriesElement, other: &SeriesElement) {
        self.compared += reference.len();
        self.diffs.extend(reference.diff(other).into_iter().map(|(monomial, expected, actual)| RouteDiff {
            route: route.to_string(),
            monomial,
            expected,
            actual,
        }));
    }

    /// Compares two Fock elements through the correspondence.
    pub fn compare_fock(&mut self, route: &str, reference: &FockElement, other: &FockElement, d: u32) {
        let a = fermion_to_boson(reference, Some(d)).restrict(&self.window);
        let b = fermion_to_boson(other, Some(d)).restrict(&self.window);
        self.compare(route, &a, &b);
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.success() { "ok" } else { "FAIL" };
        write!(f, "{status} {} [{}] {} coefficients", self.case, self.window, self.compared)?;
        if let Some(d) = self.first_diff() {
            write!(f, "; {} differs at {}: expected {}, got {}", d.route, d.monomial, d.expected, d.actual)?;
        }
        Ok(())
    }
}

fn case_name(kind: &str, cfg: &VertexConfig, m: i64, lambda: &Partition) -> String {
    let mut s = format!("{kind} k={} l={} m={m} lambda={lambda} order={}", cfg.k, cfg.l, cfg.order);
    if let Some(mu) = cfg.mutation {
        s.push_str(&format!(" mutate={mu}"));
    }
    s
}

fn timed(f: impl FnOnce() -> Result<ComparisonReport>) -> Result<ComparisonReport> {
    let t = Instant::now();
    let mut r = f()?;
    r.elapsed = t.elapsed();
    Ok(r)
}

/// Compares the direct expansion of `E_f[b]_{m+λ}` with the fermionic closed
/// form (eigenvalue and operator forms of `Γ_f`) and the bosonic closed form
/// applied to `ξ^m S_λ`.
pub fn verify_theorem34(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<ComparisonReport> {
    cfg.validate()?;
    timed(|| {
        let window = cfg.window(lambda);
        let d = cfg.weight_bound(lambda);
        let mut report = ComparisonReport::new(case_name("theorem34", cfg, m, lambda), window.clone());
        let direct = fermion_to_boson(&ef_direct(cfg, m, lambda)?, Some(d)).restrict(&window);
        let closed = fermion_to_boson(&ef_closed(cfg, m, lambda)?, Some(d)).restrict(&window);
        report.compare("fermionic closed form", &direct, &closed);

        let op = gamma_f_operator(cfg, m, lambda)?;
        let op = op.map_coefficients(op.window().clone(), |_, c| apply_prefactor(cfg, c));
        let via_ops = fermion_to_boson(&op.restrict(&window), Some(d)).restrict(&window);
        report.compare("operator form", &direct, &via_ops);

        let g = schur(lambda, &TruncationWindow::unbounded()).mul_monomial(&Monomial::var(Var::Xi, m as i32), &q(1));
        report.compare("bosonic closed form", &direct, &eb_closed(cfg, &g, d)?);
        Ok(report)
    })
}

/// Checks that enlarging every enumeration range of the direct expansion by
/// `step` leaves the certified coefficients unchanged.
pub fn verify_truncation_stability(cfg: &VertexConfig, m: i64, lambda: &Partition, step: i64) -> Result<ComparisonReport> {
    cfg.validate()?;
    timed(|| {
        let window = cfg.window(lambda);
        let d = cfg.weight_bound(lambda);
        let mut report = ComparisonReport::new(case_name("stability", cfg, m, lambda), window.clone());
        let bounds = DirectBounds::derive(cfg, m, lambda);
        let base = ef_direct_with(cfg, m, lambda, &bounds)?;
        let wide = ef_direct_with(cfg, m, lambda, &bounds.widen(step))?;
        report.compare_fock("widened enumeration", &base, &wide, d);
        Ok(report)
    })
}

/// The contraction side of the generating functions:
///
/// * `β(w_1⁻¹)∧…∧β(w_l⁻¹) ⌟ [b]_{m+λ} = N(w) / ∏ w_j^{m−l+1} · σ̄+(w_l)σ−(w_l)[b]_{m−l+λ}`,
///   where `N(w) = ∏_{i<j}(w_i⁻¹ − w_j⁻¹)` normalizes the generating wedge;
/// * `Σ_ν [β]_ν s_ν(w⁻¹) ⌟ [b]_{m+λ} = ∏ w_j^{−m+l−1} σ̄+(w_l)σ−(w_l)[b]_{m−l+λ}`.
pub fn verify_prop_contraction(l: usize, m: i64, lambda: &Partition, order: i32) -> Result<ComparisonReport> {
    let cfg = VertexConfig::new(0, l, order);
    cfg.validate()?;
    timed(|| {
        let window = cfg.window(lambda);
        let d = cfg.weight_bound(lambda);
        let mut report = ComparisonReport::new(case_name("contraction", &cfg, m, lambda), window.clone());
        let label = FockLabel::new(m, lambda.clone());

        let iw = IndexWindow::new(-(order as i64), (order as i64).min(m + lambda.part(0) as i64));
        let gen = dual_generating_wedge(l, iw, &window)?;
        let mut direct = FockElement::zero(window.clone());
        for (nu, c) in gen.terms() {
            if let Some((sign, rho)) = contract_label(nu, &label, ContractionOrder::FirstRow)? {
                direct.add_term(rho, c.scale(&q(sign as i64)));
            }
        }

        let inner = contraction_closed_core(&cfg, m, lambda, d)?;
        let shift = monomial_power(&cfg.w_vars(), -(m as i32 - l as i32 + 1));
        let schur_side = inner.mul_monomial(&shift, &q(1));
        let normalized = schur_side.scale(&generating_normalizer(Block::W(l), &TruncationWindow::unbounded()));
        report.compare_fock("generating wedge", &direct, &normalized, d);

        let indexed = ef_direct(&cfg, m, lambda)?;
        report.compare_fock("Schur-indexed form", &indexed, &schur_side, d);
        Ok(report)
    })
}

/// `σ̄+(w_l)σ−(w_l)[b]_{m−l+λ}` with labels of weight at most `d`.
fn contraction_closed_core(cfg: &VertexConfig, m: i64, lambda: &Partition, d: u32) -> Result<FockElement> {
    let full = TruncationWindow::unbounded();
    let f = FockElement::basis(FockLabel::new(m - cfg.l as i64, lambda.clone()), full.clone());
    let lowered = apply_on_fock(&SchubertOperator::new(SchubertKind::Minus, cfg.w_vars(), full.clone())?, &f)?;
    apply_on_fock(&SchubertOperator::new(SchubertKind::BarPlus, cfg.w_vars(), full.with_x_weight(d))?, &lowered)
        .map(|g| g.with_window(TruncationWindow::unbounded()))
}

fn monomial_power(vars: &[Var], e: i32) -> Monomial {
    vars.iter().fold(Monomial::one(), |m, v| m.with(*v, e))
}

/// The wedging side of the generating functions:
///
/// * `b(z_k)∧…∧b(z_1)∧[b]_{m+λ} = ∏ z_j^{m+1} Δ_0(z_k) σ+(z_k)σ̄−(z_k)[b]_{m+k+λ}`;
/// * `Σ_μ [b]_μ s_μ(z) ∧ [b]_{m+λ} = ∏ z_j^{m+1} σ+(z_k)σ̄−(z_k)[b]_{m+k+λ}`.
pub fn verify_prop_wedging(k: usize, m: i64, lambda: &Partition, order: i32) -> Result<ComparisonReport> {
    let cfg = VertexConfig::new(k, 0, order);
    cfg.validate()?;
    timed(|| {
        let window = cfg.window(lambda);
        let d = cfg.weight_bound(lambda);
        let mut report = ComparisonReport::new(case_name("wedging", &cfg, m, lambda), window.clone());
        let f = FockElement::basis(FockLabel::new(m, lambda.clone()), window.clone());
        let n = order as i64;
        let gen = generating_wedge(k, IndexWindow::new(-n, n), &window)?;
        let direct = wedge_fock(&gen, &f)?;

        let full = TruncationWindow::unbounded();
        let start = FockElement::basis(FockLabel::new(m + k as i64, lambda.clone()), full.clone());
        let lowered = apply_on_fock(&SchubertOperator::new(SchubertKind::BarMinus, cfg.z_vars(), full.clone())?, &start)?;
        let raised = apply_on_fock(&SchubertOperator::new(SchubertKind::Plus, cfg.z_vars(), full.clone().with_x_weight(d))?, &lowered)?
            .with_window(full.clone());
        let schur_side = raised.mul_monomial(&monomial_power(&cfg.z_vars(), m as i32 + 1), &q(1));
        let normalized = schur_side.scale(&generating_normalizer(Block::Z(k), &full));
        report.compare_fock("generating wedge", &direct, &normalized, d);

        let indexed = ef_direct(&cfg, m, lambda)?;
        report.compare_fock("Schur-indexed form", &indexed, &schur_side, d);
        Ok(report)
    })
}

/// `σ̄−(z_k)σ̄+(w_l) = P · σ̄+(w_l)σ̄−(z_k)` on `[b]_{m+λ}`, with `P` both
/// as `∏(1 − w_j/z_i)⁻¹` and as `exp(Σ p_n(w)p_n(z⁻¹)/n)`. Truncation is by
/// the `w`-box, since `σ̄−` may lower weights raised by `σ̄+`.
pub fn verify_commutation(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<ComparisonReport> {
    cfg.validate()?;
    timed(|| {
        let window = TruncationWindow::square(cfg.k, cfg.l, cfg.order);
        let mut report = ComparisonReport::new(case_name("commutation", cfg, m, lambda), window.clone());
        let full = TruncationWindow::unbounded();
        let f = FockElement::basis(FockLabel::new(m, lambda.clone()), full.clone());
        let mut w_box = full.clone();
        for v in cfg.w_vars() {
            w_box = w_box.with_bound(v, -cfg.order, cfg.order);
        }
        let bar_plus = |g: &FockElement| -> Result<FockElement> {
            if cfg.l == 0 {
                return Ok(g.clone());
            }
            Ok(apply_on_fock(&SchubertOperator::new(SchubertKind::BarPlus, cfg.w_vars(), w_box.clone())?, g)?.with_window(full.clone()))
        };
        let bar_minus = |g: &FockElement| -> Result<FockElement> {
            if cfg.k == 0 {
                return Ok(g.clone());
            }
            apply_on_fock(&SchubertOperator::new(SchubertKind::BarMinus, cfg.z_vars(), full.clone())?, g)
        };
        let lhs = bar_minus(&bar_plus(&f)?)?.restrict(&window);
        let swapped = bar_plus(&bar_minus(&f)?)?;
        let as_product = swapped.map_coefficients(full.clone(), |_, c| apply_prefactor(cfg, c)).restrict(&window);
        let pre = commutation_prefactor(cfg, &prefactor_window(cfg, fock_monomials(&swapped).into_iter()))?
            .with_window(TruncationWindow::unbounded());
        let as_exp = swapped.scale(&pre).restrict(&window);
        report.compare_fock("product prefactor", &lhs, &as_product, u32::MAX);
        report.compare_fock("exponential prefactor", &lhs, &as_exp, u32::MAX);
        Ok(report)
    })
}

/// `exp(Σ p_n(w)p_n(z⁻¹)/n) = ∏(1 − w_j/z_i)⁻¹` on the box.
pub fn verify_prefactor_identity(cfg: &VertexConfig) -> Result<ComparisonReport> {
    cfg.validate()?;
    timed(|| {
        let mut window = TruncationWindow::square(cfg.k, cfg.l, cfg.order);
        for v in cfg.w_vars() {
            window = window.with_bound(v, 0, cfg.order);
        }
        let mut report = ComparisonReport::new(format!("prefactor k={} l={} order={}", cfg.k, cfg.l, cfg.order), window.clone());
        report.compare("product", &commutation_prefactor(cfg, &window)?, &prefactor_product(cfg, &window)?);
        Ok(report)
    })
}

/// The fermionic `σ̄−(z_k)σ−(w_l)[b]_{m+λ}` against
/// `exp(−Σ (p_n(z⁻¹) − p_n(w⁻¹))/n ∂_n) ξ^m S_λ`.
pub fn verify_lowering_pair(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<ComparisonReport> {
    cfg.validate()?;
    timed(|| {
        let full = TruncationWindow::unbounded();
        let mut report = ComparisonReport::new(case_name("lowering", cfg, m, lambda), full.clone());
        let f = FockElement::basis(FockLabel::new(m, lambda.clone()), full.clone());
        let fermionic = fermion_to_boson(&lowering_on_fock(cfg, &f)?, None);
        let g = schur(lambda, &full).mul_monomial(&Monomial::var(Var::Xi, m as i32), &q(1));
        let op = lowering_diff_operator(cfg, lambda.weight())?;
        report.compare("exp-diff", &fermionic, &apply_exp_diff(&op, &g));
        let mut sequential = g.clone();
        if cfg.l > 0 {
            sequential = apply_on_boson(&SchubertOperator::new(SchubertKind::Minus, cfg.w_vars(), full.clone())?, &sequential)?;
        }
        if cfg.k > 0 {
            sequential = apply_on_boson(&SchubertOperator::new(SchubertKind::BarMinus, cfg.z_vars(), full.clone())?, &sequential)?;
        }
        report.compare("factorwise", &fermionic, &sequential);
        Ok(report)
    })
}

/// At `k = l = 1`, the bosonic closed form against the DJKM display on
/// `ξ^m S_λ`.
pub fn verify_djkm(order: i32, m: i64, lambda: &Partition) -> Result<ComparisonReport> {
    let cfg = VertexConfig::new(1, 1, order);
    timed(|| {
        let d = cfg.weight_bound(lambda);
        let window = cfg.window(lambda);
        let mut report = ComparisonReport::new(case_name("djkm", &cfg, m, lambda), window);
        let g = schur(lambda, &TruncationWindow::unbounded()).mul_monomial(&Monomial::var(Var::Xi, m as i32), &q(1));
        report.compare("DJKM display", &eb_closed(&cfg, &g, d)?, &djkm_formula(order, &g, d)?);
        Ok(report)
    })
}

/// `σ(z_k) R_f = R_f σ(z_k)` for every Schubert kind on `[b]_{m+λ}`.
pub fn verify_r_commutation(cfg: &VertexConfig, m: i64, lambda: &Partition) -> Result<ComparisonReport> {
    cfg.validate()?;
    timed(|| {
        let full = TruncationWindow::unbounded();
        let d = cfg.weight_bound(lambda);
        let mut report = ComparisonReport::new(case_name("r-commutation", cfg, m, lambda), full.clone());
        if cfg.k == 0 {
            return Ok(report);
        }
        let f = FockElement::basis(FockLabel::new(m, lambda.clone()), full.clone());
        for kind in [SchubertKind::Plus, SchubertKind::Minus, SchubertKind::BarPlus, SchubertKind::BarMinus] {
            let op = SchubertOperator::new(kind, cfg.z_vars(), full.clone().with_x_weight(d))?;
            let lhs = apply_on_fock(&op, &apply_r_f(cfg, &f))?;
            let rhs = apply_r_f(cfg, &apply_on_fock(&op, &f)?);
            report.compare_fock(&format!("{kind}"), &lhs, &rhs, d);
        }
        Ok(report)
    })
}

/// Entries keyed by `(i, j)`, each a map from `(charge, λ)` to its coefficient.
pub type DjkmTable = BTreeMap<(i32, i32), BTreeMap<(i64, Partition), Q>>;

/// Coefficient of `z^i w^{−j}` in `E_b(z, w⁻¹) ξ^m` for `i, j ∈ [−N, N]`,
/// each expanded in the basis `ξ^{m'} S_λ`.
pub fn djkm_table(m: i64, order: i32) -> Result<DjkmTable> {
    if order < 1 {
        return Err(Error::Window("the table needs order at least 1".into()));
    }
    let cfg = VertexConfig::new(1, 1, order);
    let d = order as u32;
    let g = SeriesElement::term(Monomial::var(Var::Xi, m as i32), q(1), TruncationWindow::unbounded());
    let e = eb_closed(&cfg, &g, d)?;
    let mut grouped: BTreeMap<(i32, i32), SeriesElement> = BTreeMap::new();
    for (mono, c) in e.terms() {
        let key = (mono.exponent(Var::Z(1)), -mono.exponent(Var::W(1)));
        let rest = mono.clone().with(Var::Z(1), 0).with(Var::W(1), 0);
        grouped.entry(key).or_insert_with(|| SeriesElement::zero(TruncationWindow::unbounded())).add_term(rest, c.clone());
    }
    let mut out = BTreeMap::new();
    for (key, s) in grouped {
        let f = boson_to_fermion(&s);
        let entry: BTreeMap<(i64, Partition), Q> =
            f.terms().iter().map(|(l, c)| ((l.charge, l.lambda.clone()), c.coefficient(&Monomial::one()))).collect();
        if !entry.is_empty() {
            out.insert(key, entry);
        }
    }
    Ok(out)
}
