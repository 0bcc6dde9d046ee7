//! Exact computations in the fermionic Fock space.
//!
//! The crate models the semi-infinite wedge space `F = ⊕ F_m` with basis
//! `[b]_{m+λ}`, its bosonic counterpart `B(ξ) = ℚ[x_1, x_2, …][ξ, ξ⁻¹]`,
//! Schubert derivations acting on both, and the generalized vertex operators
//! describing `b(z_1)∧…∧b(z_k) ∧ β(w_1⁻¹)∧…∧β(w_l⁻¹)⌟`. Infinite series are
//! handled through explicit truncation windows, and every result is exact on
//! the window it reports.

pub mod error;
pub mod exterior;
pub mod fock;
pub mod manifest;
pub mod partitions;
pub mod schubert;
pub mod symfunc;
pub mod vertex;
pub mod word;

pub use error::{Error, Result};
pub use exterior::{ContractionOrder, Flavor, WedgeElement, WedgeMonomial};
pub use fock::{FockElement, FockLabel};
pub use partitions::{BilateralPartition, Partition};
pub use schubert::{SchubertKind, SchubertOperator};
pub use symfunc::{Interval, Monomial, SeriesElement, TruncationWindow, Var, Q};
