//! Change of basis from `x`-monomials to Schur polynomials.
//!
//! The expansion runs in two triangular passes. First `f` is written in the
//! basis `h_ρ = ∏ S_{ρ_i}`: since `S_n = x_n + (products of two or more
//! variables)`, the part of `f` with the fewest `x` factors reads off the `h`
//! coefficients directly. Then Jacobi–Trudi, `S_λ = h_λ + Σ_{μ ▷ λ} c_μ h_μ`,
//! is inverted by peeling off the lexicographically smallest partition.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use super::{complete_homogeneous, q, Monomial, SeriesElement, TruncationWindow, Q};
use crate::error::{Error, Result};
use crate::partitions::{signed_permutations, Partition};

fn h_cache() -> &'static Mutex<HashMap<Partition, Arc<SeriesElement>>> {
    static CACHE: OnceLock<Mutex<HashMap<Partition, Arc<SeriesElement>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn h_product(rho: &Partition) -> Arc<SeriesElement> {
    if let Some(h) = h_cache().lock().unwrap().get(rho) {
        return h.clone();
    }
    let full = TruncationWindow::unbounded();
    let mut acc = SeriesElement::one(full.clone());
    for &p in rho.parts() {
        acc = acc.mul_series(&complete_homogeneous(p as i64, &full));
    }
    let acc = Arc::new(acc);
    h_cache().lock().unwrap().insert(rho.clone(), acc.clone());
    acc
}

fn partition_of(m: &Monomial) -> Partition {
    let mut parts = Vec::new();
    for (i, &e) in m.x_exponents().iter().enumerate().rev() {
        parts.extend(std::iter::repeat_n(i as u32 + 1, e as usize));
    }
    Partition::new(parts).unwrap()
}

/// Jacobi–Trudi expansion of `S_λ` in the `h` basis.
fn jacobi_trudi_h(lambda: &Partition) -> BTreeMap<Partition, i64> {
    let n = lambda.length();
    let entry = |i: usize, j: usize| lambda.part(j) as i64 - j as i64 + i as i64;
    let mut out: BTreeMap<Partition, i64> = BTreeMap::new();
    for (sign, perm) in signed_permutations(n, |i, j| entry(i, j) >= 0) {
        let mut parts: Vec<u32> = perm.iter().enumerate().map(|(i, &j)| entry(i, j) as u32).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        *out.entry(Partition::new(parts).unwrap()).or_default() += sign as i64;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn expand_x_only(f: &SeriesElement) -> BTreeMap<Partition, Q> {
    let mut work = f.clone().with_window(TruncationWindow::unbounded());
    let mut hcoef: BTreeMap<Partition, Q> = BTreeMap::new();
    while !work.is_zero() {
        let len = work.terms().keys().map(Monomial::x_length).min().unwrap();
        let layer: Vec<(Monomial, Q)> = work
            .terms()
            .iter()
            .filter(|(m, _)| m.x_length() == len)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        for (m, c) in layer {
            let rho = partition_of(&m);
            work -= &h_product(&rho).scale(&c);
            hcoef.insert(rho, c);
        }
    }
    let mut out = BTreeMap::new();
    while let Some((lambda, c)) = hcoef.iter().next().map(|(p, c)| (p.clone(), c.clone())) {
        for (mu, s) in jacobi_trudi_h(&lambda) {
            let e = hcoef.entry(mu).or_insert_with(Q::zero);
            *e -= &c * q(s);
        }
        hcoef.retain(|_, v| !v.is_zero());
        out.insert(lambda, c);
    }
    out
}

/// Coefficients of a polynomial in `x` alone in the Schur basis `S_λ`,
/// `|λ| ≤ bound`. Terms of higher weight, or terms involving formal
/// variables, are reported as a residual error.
pub fn schur_expand(f: &SeriesElement, bound: u32) -> Result<BTreeMap<Partition, Q>> {
    let residual = f.filter(|m| m.x_weight() > bound || !m.formal_part().is_one());
    if !residual.is_zero() {
        return Err(Error::Residual(residual.to_string()));
    }
    Ok(expand_x_only(f))
}

/// Schur coefficients of a series with formal variables, keyed by the formal
/// part of the monomial (`z`, `w` and `ξ` exponents) and the partition.
pub type GradedSchurExpansion = BTreeMap<(Monomial, Partition), Q>;

/// Expands every formal coefficient of `f` in the Schur basis.
pub fn schur_expand_graded(f: &SeriesElement) -> GradedSchurExpansion {
    let mut groups: BTreeMap<Monomial, SeriesElement> = BTreeMap::new();
    for (m, c) in f.terms() {
        groups
            .entry(m.formal_part())
            .or_insert_with(|| SeriesElement::zero(TruncationWindow::unbounded()))
            .add_term(m.x_part(), c.clone());
    }
    let mut out = BTreeMap::new();
    for (formal, g) in groups {
        for (lambda, c) in expand_x_only(&g) {
            out.insert((formal.clone(), lambda), c);
        }
    }
    out
}
