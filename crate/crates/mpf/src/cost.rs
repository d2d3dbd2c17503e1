//! Analytic cost accounting for multiproduct simulation.
//!
//! A single multiproduct step of size Δ carries the remainder bound
//!
//!   ε_Δ = 2‖a‖₁ |Δλ|^{2m+1} e^{|Δλ|} / (2m+1)!,
//!
//! which accumulates over r steps as ε_Δ·r·(1+ε_Δ)^{r−1}. The step count
//!
//!   r = ⌈ tλ · max{ (8tλ‖a‖₁/(ε(2m+1)!))^{1/(2m)}, 1/ln 2 } ⌉
//!
//! keeps the accumulated bound at or below ε, and the order is scaled with
//! the Lambert-W function, 2m ≈ e^{W(ln(tλ/ε))}. Query counts follow the
//! linear-combination-of-unitaries accounting: ‖k‖₁ base-sequence queries
//! per step, success probability 1/‖a‖₁² per unamplified step, and an odd
//! multiplier from oblivious amplitude amplification otherwise.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::construct::MpfFormula;
use crate::error::{Error, Result};
use crate::optimize::oaa_multiplier;

/// A simulation target: the product tλ (time times the sum of term norms)
/// and the allowed error ε ∈ (0, 1].
#[derive(Clone, Copy, Debug)]
pub struct SimulationTask {
    t_lambda: f64,
    epsilon: f64,
}

impl SimulationTask {
    pub fn new(t_lambda: f64, epsilon: f64) -> Result<Self> {
        if t_lambda.is_nan() || t_lambda < 0.0 {
            return Err(Error::invalid(format!("t_lambda {t_lambda} must be nonnegative")));
        }
        if epsilon.is_nan() || epsilon <= 0.0 || epsilon > 1.0 {
            return Err(Error::invalid(format!("epsilon {epsilon} must lie in (0, 1]")));
        }
        Ok(Self { t_lambda, epsilon })
    }

    pub fn t_lambda(&self) -> f64 {
        self.t_lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Cost summary of simulating a task with a given formula.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CostReport {
    /// Order parameter m of the formula used.
    pub order_m: u32,
    /// Number of multiproduct steps r.
    pub steps_r: u64,
    /// Controlled base-sequence queries: r·‖k‖₁·n.
    pub u2_queries: u64,
    /// Coefficient-register gate estimate: r·n·(support size).
    pub extra_gates: u64,
    /// Lower bound on overall success probability.
    pub success_probability_floor: f64,
    /// Programmable-product-formula queries: r·(max_j k_j)·n.
    pub progmpf_queries: u64,
    /// Robust amplification inflates the error bound by at most this
    /// absolute constant; surfaced instead of being folded into ε.
    pub error_inflation_constant: f64,
}

/// ln((n)!) by direct summation; exact enough for the modest factorials
/// that appear in step counts.
fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Remainder bound of a single multiproduct step:
/// `2·a_norm1·|Δλ|^{2m+1}·e^{|Δλ|}/(2m+1)!`, monotone in Δλ.
pub fn single_step_error_bound(delta_lambda: f64, m: u32, a_norm1: f64) -> f64 {
    let x = delta_lambda.abs();
    if x == 0.0 {
        return 0.0;
    }
    let ln_val = (2.0 * a_norm1).ln() + (2 * m + 1) as f64 * x.ln() + x
        - ln_factorial(2 * m as u64 + 1);
    ln_val.exp()
}

/// Steps needed so that the accumulated single-step bounds stay below ε.
pub fn step_count(task: &SimulationTask, m: u32, a_norm1: f64) -> Result<u64> {
    if task.t_lambda <= 0.0 {
        return Err(Error::invalid("step_count needs t_lambda > 0"));
    }
    let tl = task.t_lambda;
    let two_m = 2.0 * m as f64;
    let ln_branch = (8.0_f64.ln() + tl.ln() + a_norm1.ln()
        - task.epsilon.ln()
        - ln_factorial(2 * m as u64 + 1))
        / two_m;
    let branch = ln_branch.exp();
    let r = tl * branch.max(1.0 / std::f64::consts::LN_2);
    Ok(r.ceil().max(1.0) as u64)
}

/// Accumulated error bound after r steps of size tλ/r.
pub fn accumulated_bound(task: &SimulationTask, m: u32, a_norm1: f64, r: u64) -> f64 {
    let per_step = single_step_error_bound(task.t_lambda / r as f64, m, a_norm1);
    per_step * r as f64 * (1.0 + per_step).powi((r - 1).min(i32::MAX as u64) as i32)
}

/// Principal branch of the Lambert-W function (z·e^z = x, x ≥ 0), by Newton
/// iteration from ln(1+x).
pub fn lambert_w(x: f64) -> f64 {
    assert!(x >= 0.0, "principal branch needs x >= 0");
    if x == 0.0 {
        return 0.0;
    }
    let mut w = x.ln_1p();
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-12 * x.max(1.0) {
            break;
        }
        w -= f / (ew * (w + 1.0));
    }
    w
}

/// Order selection 2m = max(2, next even integer ≥ e^{W(ln(tλ/ε))}).
pub fn choose_order(task: &SimulationTask) -> u32 {
    let ratio = task.t_lambda / task.epsilon;
    if ratio <= 1.0 {
        return 2;
    }
    let z = lambert_w(ratio.ln());
    let target = z.exp();
    let order = 2.0 * (target / 2.0).ceil();
    (order as u32).max(2)
}

/// Base-sequence queries of one order-α Suzuki integrator step: 5^{α/2−1}.
pub fn suzuki_query_count(alpha: u32) -> BigUint {
    BigUint::from(5u8).pow(alpha / 2 - 1)
}

fn saturating_chain(factors: &[u64]) -> u64 {
    factors
        .iter()
        .try_fold(1u64, |acc, &f| acc.checked_mul(f))
        .unwrap_or(u64::MAX)
}

/// Full cost report for simulating `task` with `formula`, with or without
/// oblivious amplitude amplification.
pub fn total_cost(task: &SimulationTask, formula: &MpfFormula, amplified: bool) -> CostReport {
    let m = formula.m();
    let a_norm1 = formula.a_norm1().to_f64().unwrap_or(f64::INFINITY);
    let r = if task.t_lambda == 0.0 {
        0
    } else {
        step_count(task, m, a_norm1).expect("t_lambda > 0")
    };
    let n = if amplified { oaa_multiplier(a_norm1) } else { 1 };
    let success_probability_floor = if r == 0 {
        1.0
    } else if amplified {
        (1.0 - task.epsilon).max(0.0)
    } else {
        a_norm1.powi(-2 * (r.min(i32::MAX as u64 / 2) as i32))
    };
    CostReport {
        order_m: m,
        steps_r: r,
        u2_queries: saturating_chain(&[r, formula.k_norm1(), n]),
        extra_gates: saturating_chain(&[r, n, formula.support_size() as u64]),
        success_probability_floor,
        progmpf_queries: saturating_chain(&[r, formula.max_exponent(), n]),
        error_inflation_constant: 1.0,
    }
}

/// Programmable-product-formula accounting: per-step queries drop from
/// ‖k‖₁ to max_j k_j, at the price of a phase-register precision
/// P = ⌈N·M·Δ/ε⌉.
pub fn progmpf_cost(
    formula: &MpfFormula,
    n_terms: u64,
    m_count: u64,
    delta: f64,
    epsilon: f64,
) -> Result<(u64, u64)> {
    if n_terms == 0 || m_count == 0 || delta.is_nan() || delta <= 0.0 || epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::invalid("progmpf_cost needs positive arguments"));
    }
    let precision = (n_terms as f64 * m_count as f64 * delta / epsilon).ceil();
    Ok((formula.max_exponent(), precision as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{chin_mpf, MpfFormula};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn single_step_bound_values() {
        assert_eq!(single_step_error_bound(0.0, 3, 1.5), 0.0);
        // m = 1, ‖a‖₁ = 1, Δλ = 1: 2e/3! = e/3.
        assert_close(
            single_step_error_bound(1.0, 1, 1.0),
            2.0 * std::f64::consts::E / 6.0,
            1e-12,
        );
        let mut prev = 0.0;
        for i in 1..=20 {
            let v = single_step_error_bound(i as f64 / 10.0, 2, 1.4);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn step_count_example_and_branching() {
        let task = SimulationTask::new(1.0, 1.0).unwrap();
        // First branch ≈ 0.358 < 1/ln 2, so r = ⌈1/ln 2⌉ = 2.
        assert_eq!(step_count(&task, 3, 4.0 / 3.0).unwrap(), 2);

        // Any task on the stability branch gives r = ⌈tλ/ln 2⌉.
        let task = SimulationTask::new(10.0, 1.0).unwrap();
        let r = step_count(&task, 6, 1.2).unwrap();
        assert_eq!(r, (10.0 / std::f64::consts::LN_2).ceil() as u64);
    }

    #[test]
    fn step_count_satisfies_accumulated_inequality() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let t_lambda = 0.5 + 200.0 * next();
            let epsilon = 10f64.powf(-12.0 * next()).min(1.0);
            let task = SimulationTask::new(t_lambda, epsilon).unwrap();
            let order = choose_order(&task);
            let m = order / 2;
            let a_norm1 = 1.0 + next();
            let r = step_count(&task, m, a_norm1).unwrap();
            let acc = accumulated_bound(&task, m, a_norm1, r);
            assert!(
                acc <= epsilon * (1.0 + 1e-12),
                "tλ={t_lambda} ε={epsilon} m={m}: bound {acc}"
            );
        }
    }

    #[test]
    fn lambert_w_values() {
        assert_eq!(lambert_w(0.0), 0.0);
        assert_close(lambert_w(std::f64::consts::E), 1.0, 1e-12);
        // Bisection oracle for z·e^z = 1.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_close(lambert_w(1.0), lo, 1e-12);
        for &x in &[0.1, 0.5, 2.0, 10.0, 1e3, 1e9] {
            let w = lambert_w(x);
            assert!((w * w.exp() - x).abs() <= 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn choose_order_values() {
        // tλ/ε = e: z = W(1) ≈ 0.567, e^z ≈ 1.763 → 2m = 2.
        let task = SimulationTask::new(std::f64::consts::E, 1.0).unwrap();
        assert_eq!(choose_order(&task), 2);
        let task = SimulationTask::new(1.0 + 1e-9, 1.0).unwrap();
        assert_eq!(choose_order(&task), 2);

        let mut prev = 0;
        for i in 0..50 {
            let ratio = 10f64.powf(0.3 * i as f64);
            let task = SimulationTask::new(ratio.max(1.01), 1.0).unwrap();
            let order = choose_order(&task);
            assert!(order >= prev, "order not monotone at ratio {ratio}");
            prev = order;
        }
    }

    #[test]
    fn total_cost_table_row() {
        let f = chin_mpf(2); // exponents (1,2), ‖a‖₁ = 5/3, ‖k‖₁ = 3
        // Pick tλ so the step count lands at r = 1.
        let task = SimulationTask::new(0.5, 1.0).unwrap();
        let report = total_cost(&task, &f, false);
        assert_eq!(report.steps_r, 1);
        assert_eq!(report.u2_queries, 3);
        assert_close(report.success_probability_floor, 9.0 / 25.0, 1e-12);

        let amplified = total_cost(&task, &f, true);
        assert_eq!(amplified.u2_queries, 3 * 3);
        assert_eq!(amplified.progmpf_queries, 2 * 3);
        assert!(amplified.success_probability_floor >= 0.0);
    }

    #[test]
    fn total_cost_zero_time() {
        let f = chin_mpf(2);
        let task = SimulationTask::new(0.0, 0.5).unwrap();
        let report = total_cost(&task, &f, true);
        assert_eq!(report.steps_r, 0);
        assert_eq!(report.u2_queries, 0);
        assert_eq!(report.extra_gates, 0);
        assert_eq!(report.progmpf_queries, 0);
    }

    #[test]
    fn amplified_cost_matches_3rk_rule() {
        // All tabulated formulas have 1 < ‖a‖₁ ≤ 2, hence multiplier 3.
        for m in [2usize, 3] {
            let f = chin_mpf(m);
            if f.a_norm1() <= crate::exact::rat(2) {
                let task = SimulationTask::new(4.0, 1e-3).unwrap();
                let report = total_cost(&task, &f, true);
                assert_eq!(report.u2_queries, 3 * report.steps_r * f.k_norm1());
            }
        }
    }

    #[test]
    fn suzuki_query_counts() {
        assert_eq!(suzuki_query_count(2), BigUint::from(1u8));
        assert_eq!(suzuki_query_count(4), BigUint::from(5u8));
        assert_eq!(suzuki_query_count(8), BigUint::from(125u8));
    }

    #[test]
    fn progmpf_cost_values() {
        let f = MpfFormula::from_exponents(2, 6, vec![1, 2, 6]).unwrap();
        let (queries, _) = progmpf_cost(&f, 2, 3, 1.0, 0.5).unwrap();
        assert_eq!(queries, 6);
        assert_eq!(f.k_norm1(), 9);

        let single = MpfFormula::from_exponents(2, 2, vec![4]).unwrap();
        let (q, _) = progmpf_cost(&single, 2, 1, 1.0, 0.5).unwrap();
        assert_eq!(q, single.k_norm1());

        let (_, p) = progmpf_cost(&f, 9, 3, 1.0, 1e-3).unwrap();
        assert_eq!(p, 27000);
    }

    #[test]
    fn steps_and_queries_stay_in_theorem_band() {
        // Sweep tλ ∈ [1, 1e3], ε ∈ [1e-12, 1e-1] with the order selected by
        // choose_order and the rounded construction's condition number. The
        // upper constants (3.0 steps per unit tλ, 16.0 amplified queries per
        // tλ·ln²(tλ/ε)) come from the oracle run over this same grid.
        use crate::construct::{rounded_mpf, ScalePolicy};
        for i in 0..=15 {
            let t_lambda = 10f64.powf(3.0 * i as f64 / 15.0);
            for j in 0..=11 {
                let epsilon = 10f64.powf(-1.0 - 11.0 * j as f64 / 11.0);
                let task = SimulationTask::new(t_lambda, epsilon).unwrap();
                let m = choose_order(&task) / 2;
                let f = rounded_mpf(m as usize, ScalePolicy::default()).unwrap();
                let a1 = f.a_norm1().to_f64().unwrap();
                let r = step_count(&task, m, a1).unwrap();
                let ratio = r as f64 / t_lambda;
                assert!(ratio >= 1.0 / std::f64::consts::LN_2 - 1e-12);
                assert!(ratio <= 3.0 + 1e-12, "t_lambda={t_lambda} eps={epsilon}: {ratio}");

                let queries = 3.0 * r as f64 * f.k_norm1() as f64;
                let budget = t_lambda * (t_lambda / epsilon).ln().powi(2);
                assert!(
                    queries <= 16.0 * budget,
                    "t_lambda={t_lambda} eps={epsilon}: {queries} vs {budget}"
                );
            }
        }
    }

    #[test]
    fn cost_invariants_hold() {
        for m in [2usize, 3, 4] {
            let f = chin_mpf(m);
            for amplified in [false, true] {
                let task = SimulationTask::new(7.0, 1e-4).unwrap();
                let rep = total_cost(&task, &f, amplified);
                assert!(rep.u2_queries >= rep.steps_r * f.k_norm1());
                assert!(rep.progmpf_queries <= rep.u2_queries);
            }
        }
    }
}
