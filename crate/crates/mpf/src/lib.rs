//! Well-conditioned multiproduct formulas for Hamiltonian simulation.
//!
//! A multiproduct formula (MPF) approximates `exp(-iHΔ)` by a linear
//! combination of powers of a low-order symmetric product formula,
//!
//!   U_k(Δ) = Σ_j a_j · U₂^{k_j}(Δ/k_j) = exp(-iHΔ) + O(Δ^{2m+1}),
//!
//! with integer exponents `k` and exact rational coefficients `a` pinned by
//! a Vandermonde-type moment system. The crate covers the full pipeline:
//!
//! * [`exact`] — arbitrary-precision rationals and exact linear solving;
//! * [`construct`] — Chebyshev-node formula families, the rounded
//!   integer-exponent construction, and the arithmetic-progression baseline;
//! * [`optimize`] — exact-rational linear programming and support searches
//!   for optimally conditioned formulas, plus the amplitude-amplification
//!   query multiplier;
//! * [`cost`] — analytic step counts, order selection, and query/gate cost
//!   accounting;
//! * [`sim`] — dense-matrix validation: exact evolution, Trotter/Suzuki
//!   integrators, MPF application, and spectral-norm errors;
//! * [`bench`] — the Heisenberg-chain benchmark protocol, figure data,
//!   and table fixture verification/regeneration.

pub mod bench;
pub mod construct;
pub mod cost;
mod error;
pub mod exact;
pub mod optimize;
pub mod sim;

pub use error::{Error, Result};
