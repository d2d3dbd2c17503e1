//! Browser bindings for the interactive demo page.
//!
//! Three operations back the static page in `www/`: a formula explorer
//! (construct any family member and inspect its exponents, coefficients,
//! and condition number), the per-order query/condition curves, and the
//! analytic cost model. Everything returns JSON strings so the page stays
//! framework-free; the same functions compile and run natively, which is
//! how they are tested.

use num_traits::ToPrimitive;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use mpf::construct::{
    arithmetic_mpf, chebyshev_mpf, halved_chebyshev_mpf, rounded_mpf, MpfFormula, ScalePolicy,
};
use mpf::cost::{choose_order, total_cost, SimulationTask};
use mpf::optimize::{oaa_multiplier, search_min_k1_capped, search_min_product};

#[derive(Serialize)]
struct FormulaView {
    method: String,
    order: u32,
    base_order: u32,
    exponents: Vec<f64>,
    coefficients_exact: Option<Vec<String>>,
    coefficients: Vec<f64>,
    a_norm1: f64,
    k_norm1: f64,
    product: f64,
    exhaustive: Option<bool>,
}

impl FormulaView {
    fn from_integer(method: &str, f: &MpfFormula, exhaustive: Option<bool>) -> Self {
        let a_norm1 = f.a_norm1().to_f64().unwrap_or(f64::INFINITY);
        Self {
            method: method.to_string(),
            order: f.order(),
            base_order: f.base_order(),
            exponents: f.exponents().iter().map(|&k| k as f64).collect(),
            coefficients_exact: Some(f.coefficients().iter().map(|c| c.to_string()).collect()),
            coefficients: f
                .coefficients()
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect(),
            a_norm1,
            k_norm1: f.k_norm1() as f64,
            product: a_norm1 * f.k_norm1() as f64,
            exhaustive,
        }
    }
}

fn build_formula(method: &str, m: u32) -> Result<FormulaView, mpf::Error> {
    match method {
        "chebyshev" | "halved" => {
            let f = if method == "chebyshev" {
                chebyshev_mpf(m as usize)
            } else {
                halved_chebyshev_mpf(m as usize)
            };
            Ok(FormulaView {
                method: method.to_string(),
                order: f.order(),
                base_order: 2,
                exponents: f.real_exponents().to_vec(),
                coefficients_exact: None,
                coefficients: f.coefficients().to_vec(),
                a_norm1: f.a_norm1(),
                k_norm1: f.k_norm1(),
                product: f.a_norm1() * f.k_norm1(),
                exhaustive: None,
            })
        }
        "rounded" => {
            let f = rounded_mpf(m as usize, ScalePolicy::default())?;
            Ok(FormulaView::from_integer(method, &f, None))
        }
        "chin" => Ok(FormulaView::from_integer(method, &arithmetic_mpf(m, 2)?, None)),
        "optimal-product" => {
            let sol = search_min_product(m, 2, None)?;
            let f = MpfFormula::new(2, 2 * m, sol.support.clone(), sol.coefficients.clone())?;
            Ok(FormulaView::from_integer(method, &f, Some(sol.exhaustive)))
        }
        "optimal-capped" => {
            let cap = mpf::exact::rat(2);
            let sol = search_min_k1_capped(m, 2, &cap, None)?;
            let f = MpfFormula::new(2, 2 * m, sol.support.clone(), sol.coefficients.clone())?;
            Ok(FormulaView::from_integer(method, &f, Some(sol.exhaustive)))
        }
        other => Err(mpf::Error::InvalidInput {
            details: format!("unknown method {other:?}"),
        }),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn formula_json_impl(method: &str, m: u32) -> Result<String, String> {
    if m == 0 || m > 48 {
        return Err("m must lie in 1..=48".to_string());
    }
    let view = build_formula(method, m).map_err(|e| e.to_string())?;
    to_json(&view)
}

/// Build a formula of order 2m by the named method and return it as JSON.
/// Methods: "chebyshev", "halved", "rounded", "chin", "optimal-product",
/// "optimal-capped".
#[wasm_bindgen]
pub fn formula_json(method: &str, m: u32) -> Result<String, JsValue> {
    formula_json_impl(method, m).map_err(|e| JsValue::from_str(&e))
}

#[derive(Serialize)]
struct CurveRow {
    m: u32,
    order: u32,
    suzuki_u2_queries: f64,
    chin_a_norm1: f64,
    chin_k_norm1: f64,
    rounded_a_norm1: f64,
    rounded_k_norm1: f64,
}

fn figure1_json_impl(m_max: u32) -> Result<String, String> {
    let rows = mpf::bench::figure1_data(m_max as usize).map_err(|e| e.to_string())?;
    let view: Vec<CurveRow> = rows
        .iter()
        .map(|r| CurveRow {
            m: r.m,
            order: r.order,
            suzuki_u2_queries: r.suzuki_u2_queries.to_f64().unwrap_or(f64::INFINITY),
            chin_a_norm1: r.chin_a_norm1,
            chin_k_norm1: r.chin_k_norm1 as f64,
            rounded_a_norm1: r.rounded_a_norm1,
            rounded_k_norm1: r.rounded_k_norm1 as f64,
        })
        .collect();
    to_json(&view)
}

/// Per-order curves (base-sequence queries and condition numbers) for
/// m = 1..=m_max, as a JSON array.
#[wasm_bindgen]
pub fn figure1_json(m_max: u32) -> Result<String, JsValue> {
    figure1_json_impl(m_max).map_err(|e| JsValue::from_str(&e))
}

#[derive(Serialize)]
struct CostView {
    t_lambda: f64,
    epsilon: f64,
    order: u32,
    exponents: Vec<u64>,
    a_norm1: f64,
    k_norm1: u64,
    oaa_multiplier: u64,
    steps_r: u64,
    u2_queries: u64,
    progmpf_queries: u64,
    extra_gates: u64,
    success_probability_floor: f64,
}

fn cost_json_impl(t_lambda: f64, epsilon: f64) -> Result<String, String> {
    let task = SimulationTask::new(t_lambda, epsilon).map_err(|e| e.to_string())?;
    let m = choose_order(&task) / 2;
    let formula = rounded_mpf(m as usize, ScalePolicy::default()).map_err(|e| e.to_string())?;
    let report = total_cost(&task, &formula, true);
    let view = CostView {
        t_lambda,
        epsilon,
        order: 2 * m,
        exponents: formula.exponents().to_vec(),
        a_norm1: formula.a_norm1().to_f64().unwrap_or(f64::INFINITY),
        k_norm1: formula.k_norm1(),
        oaa_multiplier: oaa_multiplier(formula.a_norm1().to_f64().unwrap_or(f64::INFINITY)),
        steps_r: report.steps_r,
        u2_queries: report.u2_queries,
        progmpf_queries: report.progmpf_queries,
        extra_gates: report.extra_gates,
        success_probability_floor: report.success_probability_floor,
    };
    to_json(&view)
}

/// Analytic cost of simulating for the product tλ at error ε: the order is
/// chosen by the Lambert-W rule and the formula is the rounded construction
/// at that order. JSON object out.
#[wasm_bindgen]
pub fn cost_json(t_lambda: f64, epsilon: f64) -> Result<String, JsValue> {
    cost_json_impl(t_lambda, epsilon).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_json_shapes() {
        for method in ["chebyshev", "halved", "rounded", "chin", "optimal-product", "optimal-capped"] {
            let text = formula_json_impl(method, 3).unwrap();
            let json: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(json["order"], 6, "{method}");
            let coeffs = json["coefficients"].as_array().unwrap();
            let sum: f64 = coeffs.iter().map(|c| c.as_f64().unwrap()).sum();
            assert!((sum - 1.0).abs() < 1e-9, "{method}: sum {sum}");
        }
        assert!(formula_json_impl("nonsense", 3).is_err());
        assert!(formula_json_impl("chin", 0).is_err());
    }

    #[test]
    fn figure1_json_shape() {
        let text = figure1_json_impl(6).unwrap();
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rows = json.as_array().unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1]["suzuki_u2_queries"], 5.0);
    }

    #[test]
    fn cost_json_shape() {
        let text = cost_json_impl(100.0, 1e-8).unwrap();
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(json["order"].as_u64().unwrap() >= 4);
        assert!(json["u2_queries"].as_u64().unwrap() > 0);
        assert_eq!(json["oaa_multiplier"], 3);
        assert!(cost_json_impl(1.0, 2.0).is_err());
    }
}
