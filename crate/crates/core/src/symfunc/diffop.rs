use super::{q_frac, SeriesElement, TruncationWindow, Q};
use crate::error::{domain, Result};

/// The operator `exp(Σ_n c_n ∂/∂x_n)` with coefficients free of `x` and `ξ`.
///
/// `coeffs[n-1]` holds `c_n`; the operator only needs as many coefficients as
/// the weighted degree of its argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperatorSeries {
    coeffs: Vec<SeriesElement>,
}

impl DiffOperatorSeries {
    pub fn new(coeffs: Vec<SeriesElement>) -> Result<Self> {
        for c in &coeffs {
            if c.terms().keys().any(|m| m.has_x() || m.xi_exponent() != 0) {
                return domain("differential operator coefficients must be free of x and xi");
            }
        }
        Ok(DiffOperatorSeries { coeffs })
    }

    /// Builds `c_n = scale · f(n) / n` for `n = 1..=degree`.
    pub fn from_fn(degree: u32, scale: i64, f: impl Fn(u32) -> SeriesElement) -> Result<Self> {
        let coeffs = (1..=degree).map(|n| f(n).scale(&q_frac(scale, n as i64))).collect();
        Self::new(coeffs)
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coefficients(&self) -> &[SeriesElement] {
        &self.coeffs
    }

    pub fn negate(&self) -> Self {
        DiffOperatorSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// `Σ c_n ∂/∂x_n` applied once.
    fn apply_linear(&self, f: &SeriesElement) -> SeriesElement {
        let mut out = SeriesElement::zero(f.window().clone());
        for (i, c) in self.coeffs.iter().enumerate() {
            let d = f.derivative_x(i as u32 + 1);
            if !d.is_zero() && !c.is_zero() {
                out += &d.mul_series(&c.clone().with_window(TruncationWindow::unbounded()));
            }
        }
        out
    }
}

/// `exp(Σ c_n ∂/∂x_n) f`. The exponential is summed until the iterated
/// derivatives vanish, which happens after at most `deg_x f` steps.
///
/// Coefficients `c_n` with `n` larger than the operator degree are treated as
/// zero, so the result is exact when `degree ≥ max x-weight of f`.
pub fn apply_exp_diff(op: &DiffOperatorSeries, f: &SeriesElement) -> SeriesElement {
    let mut result = f.clone();
    let mut term = f.clone();
    let mut t: i64 = 1;
    loop {
        term = op.apply_linear(&term).scale(&Q::new(1.into(), t.into()));
        if term.is_zero() {
            return result;
        }
        result += &term;
        t += 1;
    }
}
