//! Complete homogeneous and Schur polynomials, power sums, Vandermonde
//! products.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;

use super::{q, q_frac, Monomial, SeriesElement, TruncationWindow, Var, Q};
use crate::error::{domain, Result};
use crate::partitions::{signed_permutations, BilateralPartition, Partition};

/// A block of formal variables: `z_1..z_k` or `w_1..w_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Z(usize),
    W(usize),
}

impl Block {
    pub fn len(&self) -> usize {
        match *self {
            Block::Z(k) | Block::W(k) => k,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `i`-th variable, 1-based.
    pub fn var(&self, i: usize) -> Var {
        match self {
            Block::Z(_) => Var::Z(i),
            Block::W(_) => Var::W(i),
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        (1..=self.len()).map(|i| self.var(i)).collect()
    }
}

type Terms = Arc<BTreeMap<Monomial, Q>>;

fn cache() -> &'static Mutex<HashMap<Partition, Terms>> {
    static CACHE: OnceLock<Mutex<HashMap<Partition, Terms>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `S_i(x)`, the coefficient of `t^i` in `exp(Σ x_n t^n)`.
pub fn complete_homogeneous(i: i64, window: &TruncationWindow) -> SeriesElement {
    if i < 0 {
        return SeriesElement::zero(window.clone());
    }
    let mut out = SeriesElement::zero(window.clone());
    for rho in Partition::all_of_weight(i as u32) {
        let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
        for &p in rho.parts() {
            *mult.entry(p).or_default() += 1;
        }
        let mut m = Monomial::one();
        let mut denom: i64 = 1;
        for (&n, &e) in &mult {
            m = m.with(Var::X(n), e as i32);
            denom *= (1..=e as i64).product::<i64>();
        }
        out.add_term(m, q_frac(1, denom));
    }
    out
}

fn schur_terms(lambda: &Partition) -> Terms {
    if let Some(t) = cache().lock().unwrap().get(lambda) {
        return t.clone();
    }
    let n = lambda.length();
    let full = TruncationWindow::unbounded();
    let h: Vec<SeriesElement> = (0..=lambda.part(0) as i64 + n as i64)
        .map(|i| complete_homogeneous(i, &full))
        .collect();
    let entry = |i: usize, j: usize| lambda.part(j) as i64 - j as i64 + i as i64;
    let mut acc = SeriesElement::zero(full.clone());
    for (sign, perm) in signed_permutations(n, |i, j| entry(i, j) >= 0) {
        let mut prod = SeriesElement::one(full.clone());
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul_series(&h[entry(i, j) as usize]);
        }
        acc += &prod.scale(&q(sign as i64));
    }
    let terms = Arc::new(acc.into_terms());
    cache().lock().unwrap().insert(lambda.clone(), terms.clone());
    terms
}

/// `S_λ(x) = det(S_{λ_j − j + i}(x))`, the Schur polynomial in the
/// bosonic variables.
pub fn schur(lambda: &Partition, window: &TruncationWindow) -> SeriesElement {
    let terms = schur_terms(lambda);
    let mut out = SeriesElement::zero(window.clone());
    for (m, c) in terms.iter() {
        out.add_term(m.clone(), c.clone());
    }
    out
}

/// `h_i` in the variables of `block`.
fn complete_in_block(i: i64, block: Block) -> SeriesElement {
    let full = TruncationWindow::unbounded();
    let mut out = SeriesElement::zero(full);
    if i < 0 {
        return out;
    }
    fn rec(block: Block, v: usize, left: i64, m: Monomial, out: &mut SeriesElement) {
        if v == block.len() {
            if left == 0 {
                out.add_term(m, q(1));
            }
            return;
        }
        let last = v + 1 == block.len();
        let range = if last { left..=left } else { 0..=left };
        for e in range {
            rec(block, v + 1, left - e, m.clone().with(block.var(v + 1), e as i32), out);
        }
    }
    if block.is_empty() {
        if i == 0 {
            out.add_term(Monomial::one(), q(1));
        }
        return out;
    }
    rec(block, 0, i, Monomial::one(), &mut out);
    out
}

/// The classical Schur polynomial `s_κ` in the variables of `block`, by
/// Jacobi–Trudi in complete homogeneous polynomials. Zero when `κ` has more
/// parts than there are variables.
pub fn classical_schur(kappa: &Partition, block: Block) -> SeriesElement {
    let full = TruncationWindow::unbounded();
    if kappa.length() > block.len() {
        return SeriesElement::zero(full);
    }
    let n = kappa.length();
    let entry = |i: usize, j: usize| kappa.part(j) as i64 - j as i64 + i as i64;
    let mut acc = SeriesElement::zero(full.clone());
    for (sign, perm) in signed_permutations(n, |i, j| entry(i, j) >= 0) {
        let mut prod = SeriesElement::one(full.clone());
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul_series(&complete_in_block(entry(i, j), block));
        }
        acc += &prod.scale(&q(sign as i64));
    }
    acc
}

/// The extended Schur polynomial `s_μ` attached to a bilateral partition.
///
/// For `Block::Z(k)` this is `(z_1⋯z_k)^{μ_k} s_{μ − μ_k}(z_1..z_k)`. For
/// `Block::W(l)` the same polynomial is evaluated at `w_j^{-1}`.
pub fn extended_schur(mu: &BilateralPartition, block: Block, window: &TruncationWindow) -> Result<SeriesElement> {
    if mu.len() != block.len() {
        return domain(format!("{mu} has length {} but the block has {} variables", mu.len(), block.len()));
    }
    let (c, kappa) = mu.split_shift();
    let z = Block::Z(block.len());
    let mut shift = Monomial::one();
    for v in z.vars() {
        shift = shift.with(v, c as i32);
    }
    let base = classical_schur(&kappa, z).mul_monomial(&shift, &Q::one());
    Ok(match block {
        Block::Z(_) => base.restrict(window),
        Block::W(_) => base.map_monomials(window.clone(), Monomial::z_to_inverse_w),
    })
}

/// The power sum `Σ_i v_i^{±n}` over the block.
pub fn power_sum(n: u32, block: Block, inverse: bool, window: &TruncationWindow) -> SeriesElement {
    let e = if inverse { -(n as i32) } else { n as i32 };
    SeriesElement::from_terms(
        block.vars().into_iter().map(|v| (Monomial::var(v, e), q(1))),
        window.clone(),
    )
}

/// `∏_{i<j}(v_j − v_i)`, with `v_i = w_i^{-1}` when `inverted`.
pub fn vandermonde(block: Block, inverted: bool, window: &TruncationWindow) -> SeriesElement {
    let e = if inverted { -1 } else { 1 };
    let full = TruncationWindow::unbounded();
    let mut acc = SeriesElement::one(full.clone());
    for j in 1..=block.len() {
        for i in 1..j {
            let f = SeriesElement::from_terms(
                [(Monomial::var(block.var(j), e), q(1)), (Monomial::var(block.var(i), e), q(-1))],
                full.clone(),
            );
            acc = acc.mul_series(&f);
        }
    }
    acc.restrict(window)
}

/// The factor relating the wedge of generating series to the Schur-indexed
/// expansion, `b(z_k)∧…∧b(z_1) = Σ [b]_μ s_μ(z) · N` and
/// `β(w_1⁻¹)∧…∧β(w_l⁻¹) = Σ [β]_ν s_ν(w⁻¹) · N`.
///
/// For `z` this is `∏_{i<j}(z_j − z_i)`; for `w` it is
/// `∏_{i<j}(w_i⁻¹ − w_j⁻¹)`, which differs from [`vandermonde`] with
/// `inverted` by `(−1)^{l(l−1)/2}`.
pub fn generating_normalizer(block: Block, window: &TruncationWindow) -> SeriesElement {
    match block {
        Block::Z(_) => vandermonde(block, false, window),
        Block::W(l) => {
            let v = vandermonde(block, true, window);
            if (l * l.saturating_sub(1) / 2) % 2 == 1 {
                -&v
            } else {
                v
            }
        }
    }
}
