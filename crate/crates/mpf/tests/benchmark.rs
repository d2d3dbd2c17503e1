//! Benchmark-protocol trends on the 4-site Heisenberg chain: polylog cost
//! growth of the best tabulated formula and the ε^{-1/4} growth of plain
//! fourth-order Suzuki.

use mpf::bench::{builtin_tables, fixture_formulas, benchmark_sweep, min_steps_suzuki};

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

#[test]
fn winner_cost_growth_is_polylog_consistent() {
    let (base2, _) = builtin_tables().unwrap();
    let formulas = fixture_formulas(&base2, "min_k1_capped", 15).unwrap();
    let eps_list = [1e-2, 1e-6, 1e-10];
    let points = benchmark_sweep(4, 4.0, &eps_list, &formulas, 2).unwrap();

    // Point-level invariants: targets met, amplified cost rule.
    for p in points.iter().filter(|p| p.reachable) {
        assert!(p.measured_error <= p.epsilon, "{}: {:e}", p.formula, p.measured_error);
        assert_eq!(p.total_cost, 3 * p.steps * p.k_norm1, "{}", p.formula);
    }

    let winner_cost = |eps: f64| -> f64 {
        points
            .iter()
            .find(|p| p.epsilon == eps && p.rank == 0)
            .expect("winner present")
            .total_cost as f64
    };
    // Cost ratio bounded by the polylog ratio cubed.
    let ratio = winner_cost(1e-10) / winner_cost(1e-2);
    let log_ratio = (1e10f64).ln() / (1e2f64).ln();
    assert!(
        ratio <= log_ratio.powi(3),
        "cost ratio {ratio} vs polylog bound {}",
        log_ratio.powi(3)
    );

    // Per formula, cost never increases as the target loosens.
    for (id, _) in &formulas {
        let mut costs: Vec<(f64, u64, bool)> = points
            .iter()
            .filter(|p| &p.formula == id)
            .map(|p| (p.epsilon, p.total_cost, p.reachable))
            .collect();
        costs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in costs.windows(2) {
            if w[0].2 && w[1].2 {
                assert!(
                    w[1].1 <= w[0].1,
                    "{id}: cost rose from {} to {} as ε loosened",
                    w[0].1,
                    w[1].1
                );
            }
        }
    }
}

#[test]
fn suzuki4_cost_grows_as_quarter_power() {
    let h = mpf::sim::heisenberg_chain(4).unwrap();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..=6 {
        let eps = 10f64.powi(-4 - i);
        if let Ok(cert) = min_steps_suzuki(&h, 4, 4.0, eps) {
            xs.push(eps.recip().ln());
            ys.push(((5 * cert.steps) as f64).ln());
        }
    }
    assert!(xs.len() >= 5, "too few reachable targets: {}", xs.len());
    let slope = fit_slope(&xs, &ys);
    assert!(
        (slope - 0.25).abs() <= 0.1,
        "Suzuki-4 slope {slope} outside 0.25 ± 0.1"
    );
}
