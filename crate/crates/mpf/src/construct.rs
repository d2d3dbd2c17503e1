//! Construction of multiproduct formulas.
//!
//! Three families are built here:
//!
//! * the arithmetic-progression baseline `k_j = j` (well ordered but with
//!   condition number growing exponentially in the order),
//! * real-exponent families on Chebyshev interpolation points, with the
//!   closed-form coefficients `a″_j = ((-1)^{j+1}/m)·cot(π(2j−1)/(4m))`,
//! * integer formulas obtained by scaling and rounding the halved Chebyshev
//!   exponents, which keep the condition number logarithmic in the order.
//!
//! Integer formulas carry exact rational coefficients and are validated
//! against the full moment system on construction.

use std::f64::consts::PI;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    self, generalized_vandermonde, norm1, parse_rational, rat, rat_u, residual, solve_exact,
    unit_first, vandermonde_closed_form, Rational,
};

/// Integer-exponent multiproduct formula of order `2m` over a base sequence
/// of order `base_order`: exponents ascending and distinct, coefficients
/// exact, residual of the generalized moment system exactly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpfFormula {
    base_order: u32,
    order: u32,
    exponents: Vec<u64>,
    coefficients: Vec<Rational>,
}

impl MpfFormula {
    /// Validating constructor. Checks every structural invariant, including
    /// the exact zero residual; prefer [`MpfFormula::from_exponents`] when
    /// the coefficients are not already known.
    pub fn new(
        base_order: u32,
        order: u32,
        exponents: Vec<u64>,
        coefficients: Vec<Rational>,
    ) -> Result<Self> {
        if !order.is_multiple_of(2) || order == 0 {
            return Err(Error::invalid(format!("order {order} must be even and positive")));
        }
        let m = order / 2;
        let expected = exact::row_powers(base_order, m)?.len();
        if exponents.len() != expected || coefficients.len() != expected {
            return Err(Error::invalid(format!(
                "order {order} over base {base_order} needs exactly {expected} exponents \
                 and coefficients, got {} and {}",
                exponents.len(),
                coefficients.len()
            )));
        }
        if exponents.first().is_some_and(|&k| k == 0) {
            return Err(Error::invalid("exponents must be positive"));
        }
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("exponents must be strictly ascending"));
        }
        let sum: Rational = coefficients.iter().fold(Rational::zero(), |a, c| a + c);
        if sum != rat(1) {
            return Err(Error::invalid(format!("coefficients sum to {sum}, expected 1")));
        }
        let f = Self {
            base_order,
            order,
            exponents,
            coefficients,
        };
        let r = f.system_residual()?;
        if r.iter().any(|v| !v.is_zero()) {
            return Err(Error::invalid("moment-system residual is not exactly zero"));
        }
        Ok(f)
    }

    /// Build the formula on the given ascending exponents, solving for the
    /// exact coefficients (closed form for base order 2, exact elimination
    /// for the generalized system otherwise).
    pub fn from_exponents(base_order: u32, order: u32, exponents: Vec<u64>) -> Result<Self> {
        if !order.is_multiple_of(2) || order == 0 {
            return Err(Error::invalid(format!("order {order} must be even and positive")));
        }
        let m = order / 2;
        let k: Vec<Rational> = exponents.iter().map(|&v| rat_u(v)).collect();
        let coefficients = if base_order == 2 {
            vandermonde_closed_form(&k)?
        } else {
            let v = generalized_vandermonde(&k, base_order, m)?;
            if !v.is_square() {
                return Err(Error::invalid(format!(
                    "{} exponents cannot pin an order-{order} base-{base_order} formula \
                     ({} constraint rows)",
                    k.len(),
                    v.rows()
                )));
            }
            solve_exact(&v, &unit_first(v.rows()))?
        };
        Self::new(base_order, order, exponents, coefficients)
    }

    pub fn base_order(&self) -> u32 {
        self.base_order
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The order parameter m (the formula cancels error terms through Δ^{2m}).
    pub fn m(&self) -> u32 {
        self.order / 2
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Condition number ‖a‖₁, exact.
    pub fn a_norm1(&self) -> Rational {
        norm1(&self.coefficients)
    }

    /// Base-sequence query count ‖k‖₁ per multiproduct step.
    pub fn k_norm1(&self) -> u64 {
        self.exponents.iter().sum()
    }

    pub fn max_exponent(&self) -> u64 {
        *self.exponents.last().expect("validated nonempty")
    }

    pub fn support_size(&self) -> usize {
        self.exponents.len()
    }

    /// Exact residual of the generalized moment system for this formula.
    pub fn system_residual(&self) -> Result<Vec<Rational>> {
        let k: Vec<Rational> = self.exponents.iter().map(|&v| rat_u(v)).collect();
        let v = generalized_vandermonde(&k, self.base_order, self.m())?;
        residual(&v, &self.coefficients, &unit_first(v.rows()))
    }

    pub fn condition_report(&self) -> ConditionReport {
        ConditionReport::new(
            self.order,
            self.a_norm1().to_f64().unwrap_or(f64::INFINITY),
            self.k_norm1() as f64,
        )
    }
}

/// Real-exponent multiproduct formula: interpolation points in (0,1),
/// exponents `k_j = 1/√x_j`, floating coefficients.
#[derive(Clone, Debug)]
pub struct RealMpf {
    order: u32,
    interpolation_points: Vec<f64>,
    real_exponents: Vec<f64>,
    coefficients: Vec<f64>,
}

impl RealMpf {
    fn new(order: u32, interpolation_points: Vec<f64>, coefficients: Vec<f64>) -> Self {
        let real_exponents = interpolation_points.iter().map(|x| 1.0 / x.sqrt()).collect();
        Self {
            order,
            interpolation_points,
            real_exponents,
            coefficients,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn interpolation_points(&self) -> &[f64] {
        &self.interpolation_points
    }

    pub fn real_exponents(&self) -> &[f64] {
        &self.real_exponents
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn a_norm1(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    pub fn k_norm1(&self) -> f64 {
        self.real_exponents.iter().sum()
    }

    pub fn condition_report(&self) -> ConditionReport {
        ConditionReport::new(self.order, self.a_norm1(), self.k_norm1())
    }
}

/// Condition summary of a formula: ‖a‖₁ (the condition number), ‖k‖₁ (the
/// per-step query count; integral for integer formulas), and their product.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConditionReport {
    pub order: u32,
    pub a_norm1: f64,
    pub k_norm1: f64,
    pub product: f64,
}

impl ConditionReport {
    fn new(order: u32, a_norm1: f64, k_norm1: f64) -> Self {
        Self {
            order,
            a_norm1,
            k_norm1,
            product: a_norm1 * k_norm1,
        }
    }
}

/// Chebyshev interpolation points `x_j = sin²(π(2j−1)/(4m))`, j = 1..m,
/// strictly increasing in (0, 1).
pub fn chebyshev_nodes(m: usize) -> Vec<f64> {
    (1..=m)
        .map(|j| {
            let s = (PI * (2 * j - 1) as f64 / (4 * m) as f64).sin();
            s * s
        })
        .collect()
}

/// Order-2m real-exponent formula on the m Chebyshev points, with the
/// closed-form coefficients `a″_j = ((-1)^{j+1}/m)·cot(π(2j−1)/(4m))`.
pub fn chebyshev_mpf(m: usize) -> RealMpf {
    let coefficients = (1..=m)
        .map(|j| {
            let theta = PI * (2 * j - 1) as f64 / (4 * m) as f64;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            sign * theta.cos() / (theta.sin() * m as f64)
        })
        .collect();
    RealMpf::new(2 * m as u32, chebyshev_nodes(m), coefficients)
}

/// Closed-form α = 2 coefficients over real exponents, the floating twin of
/// [`exact::vandermonde_closed_form`]: a_j = ∏_{q≠j} 1/(1 − x_j/x_q).
fn closed_form_from_points(points: &[f64]) -> Vec<f64> {
    (0..points.len())
        .map(|j| {
            points
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != j)
                .map(|(_, xq)| 1.0 / (1.0 - points[j] / xq))
                .product()
        })
        .collect()
}

/// Order-2m formula on the first m nodes of the 2m-point Chebyshev set.
/// Dropping the latter half of the points enlarges the gaps between
/// consecutive exponents, which is what makes integer rounding safe; the
/// coefficients stay bounded by the full-set coefficients componentwise.
pub fn halved_chebyshev_mpf(m: usize) -> RealMpf {
    let points: Vec<f64> = chebyshev_nodes(2 * m).into_iter().take(m).collect();
    let coefficients = closed_form_from_points(&points);
    RealMpf::new(2 * m as u32, points, coefficients)
}

/// Scale policy for exponent rounding: `K = fraction · √8·m/π`. The default
/// stays just below the uniqueness bound, which maximizes the gaps between
/// rounded exponents.
#[derive(Clone, Copy, Debug)]
pub struct ScalePolicy {
    pub fraction: f64,
}

impl Default for ScalePolicy {
    fn default() -> Self {
        Self { fraction: 0.999 }
    }
}

impl ScalePolicy {
    pub fn scale_factor(&self, m: usize) -> f64 {
        self.fraction * 8f64.sqrt() * m as f64 / PI
    }
}

/// Integer-exponent order-2m formula: round the halved-Chebyshev exponents
/// `k_j = ⌈K/√(x_j^{(2m)})⌉`, then solve the α = 2 system exactly.
///
/// Fails with [`Error::RoundingCollision`] if the policy's scale factor
/// rounds two nodes to the same integer.
pub fn rounded_mpf(m: usize, policy: ScalePolicy) -> Result<MpfFormula> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let scale = policy.scale_factor(m);
    let points: Vec<f64> = chebyshev_nodes(2 * m).into_iter().take(m).collect();
    // Points ascend, so raw exponents descend.
    let raw: Vec<u64> = points
        .iter()
        .map(|x| (scale / x.sqrt()).ceil().max(1.0) as u64)
        .collect();
    for j in 0..m.saturating_sub(1) {
        if raw[j] == raw[j + 1] {
            return Err(Error::RoundingCollision {
                j: j + 1,
                next: j + 2,
                value: raw[j],
            });
        }
    }
    let mut exponents = raw;
    exponents.reverse();
    MpfFormula::from_exponents(2, 2 * m as u32, exponents)
}

/// The arithmetic-progression baseline `k = (1, 2, …, m)` with exact
/// closed-form coefficients. Well ordered, but ‖a‖₁ grows exponentially
/// with m, which is exactly the conditioning problem the Chebyshev families
/// solve.
pub fn chin_mpf(m: usize) -> MpfFormula {
    arithmetic_mpf(m as u32, 2).expect("arithmetic exponents are distinct and positive")
}

/// Arithmetic-progression formula over a general base order: exponents
/// `1..=(m − α/2 + 1)` with coefficients from the generalized system.
pub fn arithmetic_mpf(m: u32, base_order: u32) -> Result<MpfFormula> {
    let count = exact::row_powers(base_order, m)?.len() as u64;
    MpfFormula::from_exponents(base_order, 2 * m, (1..=count).collect())
}

/// Wire form of an integer formula: coefficients as `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormulaJson {
    pub alpha: u32,
    pub order: u32,
    pub exponents: Vec<u64>,
    pub coefficients: Vec<String>,
}

impl From<&MpfFormula> for FormulaJson {
    fn from(f: &MpfFormula) -> Self {
        Self {
            alpha: f.base_order,
            order: f.order,
            exponents: f.exponents.clone(),
            coefficients: f.coefficients.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<FormulaJson> for MpfFormula {
    type Error = Error;

    fn try_from(j: FormulaJson) -> Result<Self> {
        let coefficients = j
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        MpfFormula::new(j.alpha, j.order, j.exponents, coefficients)
    }
}
