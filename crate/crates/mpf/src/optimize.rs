//! Optimally conditioned multiproduct formulas by exact linear programming
//! and support search.
//!
//! The conditioning problem is cast as
//!
//!   min ‖a‖₁  s.t.  V(k⁻²)·a = ê₁,  k_j = j ∈ [M],
//!
//! solved exactly over rationals with the standard split `a = a⁺ − a⁻`.
//! Around the plain LP sit two searches that reproduce the bundled tables:
//! one minimizing the product ‖a‖₁·‖k‖₁, one minimizing ‖k‖₁ subject to a
//! cap on ‖a‖₁. Both are exhaustive for m ≤ 6 (pruned enumeration over all
//! candidate supports) and best-found above, flagged in the result.

use num_traits::{Signed, ToPrimitive, Zero};


use crate::construct::{rounded_mpf, ScalePolicy};
use crate::error::{Error, Result};
use crate::exact::{
    generalized_vandermonde, norm1, rat_u, row_powers, solve_exact, unit_first,
    vandermonde_closed_form, Rational,
};

/// Objective selector for [`LpProblem`].
#[derive(Clone, Debug, PartialEq)]
pub enum LpObjective {
    /// min ‖a‖₁ over the fixed candidate set.
    MinANorm1,
    /// min ‖k‖₁ subject to ‖a‖₁ ≤ cap (the bottom table halves).
    MinK1Capped { cap: Rational },
}

/// A conditioning problem: order parameter `m`, base order `alpha`,
/// candidate exponents `1..=max_exponent`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub m: u32,
    pub alpha: u32,
    pub max_exponent: u64,
    pub objective: LpObjective,
}

/// Dispatch a problem to the matching solver.
pub fn solve_problem(p: &LpProblem) -> Result<LpSolution> {
    match &p.objective {
        LpObjective::MinANorm1 => l1_min_lp(p),
        LpObjective::MinK1Capped { cap } => {
            search_min_k1_capped(p.m, p.alpha, cap, Some(p.max_exponent))
        }
    }
}

/// Solution of a conditioning problem: exponent support, exact coefficients,
/// and both norms. `exhaustive` records whether the search that produced it
/// certifies global optimality.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub support: Vec<u64>,
    pub coefficients: Vec<Rational>,
    pub a_norm1: Rational,
    pub k_norm1: u64,
    pub objective_tag: &'static str,
    pub exhaustive: bool,
}

impl LpSolution {
    fn from_support(
        support: Vec<u64>,
        coefficients: Vec<Rational>,
        objective_tag: &'static str,
        exhaustive: bool,
    ) -> Self {
        let a_norm1 = norm1(&coefficients);
        let k_norm1 = support.iter().sum();
        Self {
            support,
            coefficients,
            a_norm1,
            k_norm1,
            objective_tag,
            exhaustive,
        }
    }

    /// ‖a‖₁·‖k‖₁, exact.
    pub fn product(&self) -> Rational {
        &self.a_norm1 * rat_u(self.k_norm1)
    }
}

/// Exact coefficients for a given ascending support (closed form for the
/// α = 2 Vandermonde system, exact elimination for the generalized one).
pub(crate) fn support_coefficients(support: &[u64], alpha: u32, m: u32) -> Result<Vec<Rational>> {
    let k: Vec<Rational> = support.iter().map(|&v| rat_u(v)).collect();
    if alpha == 2 {
        vandermonde_closed_form(&k)
    } else {
        let v = generalized_vandermonde(&k, alpha, m)?;
        if v.rows() != k.len() {
            return Err(Error::invalid(format!(
                "support of size {} cannot pin an order-{} base-{alpha} formula",
                k.len(),
                2 * m
            )));
        }
        solve_exact(&v, &unit_first(v.rows()))
    }
}

fn support_coefficients_f64(support: &[u64], alpha: u32, m: u32) -> Option<Vec<f64>> {
    if alpha == 2 {
        let mut out = Vec::with_capacity(support.len());
        for j in 0..support.len() {
            let kj2 = (support[j] * support[j]) as f64;
            let mut prod = 1.0;
            for q in 0..support.len() {
                if q != j {
                    let kq2 = (support[q] * support[q]) as f64;
                    prod *= kj2 / (kj2 - kq2);
                }
            }
            out.push(prod);
        }
        Some(out)
    } else {
        let powers = row_powers(alpha, m).ok()?;
        if powers.len() != support.len() {
            return None;
        }
        let a: Vec<Vec<f64>> = powers
            .iter()
            .map(|&p| {
                support
                    .iter()
                    .map(|&kj| (kj as f64).powi(-(p as i32)))
                    .collect()
            })
            .collect();
        let mut rhs = vec![0.0; support.len()];
        rhs[0] = 1.0;
        solve_dense_f64(a, rhs)
    }
}

fn solve_dense_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col] == 0.0 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[r][j] -= f * a[col][j];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Two-phase simplex, generic over exact rationals and f64.
// ---------------------------------------------------------------------------

/// Minimal scalar interface for the simplex. The f64 instance carries a
/// pivot tolerance; the rational instance is exact.
trait LpScalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_neg(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn lt(&self, other: &Self) -> bool;
}

impl LpScalar for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_neg(&self) -> bool {
        self < &<Rational as LpScalar>::zero()
    }
    fn is_pos(&self) -> bool {
        self > &<Rational as LpScalar>::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn lt(&self, other: &Self) -> bool {
        self < other
    }
}

const F64_PIVOT_TOL: f64 = 1e-9;

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_neg(&self) -> bool {
        *self < -F64_PIVOT_TOL
    }
    fn is_pos(&self) -> bool {
        *self > F64_PIVOT_TOL
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn lt(&self, other: &Self) -> bool {
        self < other
    }
}

struct Simplex<T> {
    rows: usize,
    structural: usize,
    // rows × (structural + rows + 1): structural columns, artificials, rhs.
    tableau: Vec<Vec<T>>,
    basis: Vec<usize>,
}

enum Phase {
    ArtificialSum,
    Costs,
}

impl<T: LpScalar> Simplex<T> {
    fn new(a: Vec<Vec<T>>, b: Vec<T>) -> Self {
        let rows = b.len();
        let structural = a.first().map_or(0, Vec::len);
        let mut tableau = Vec::with_capacity(rows);
        for (i, mut row) in a.into_iter().enumerate() {
            for r in 0..rows {
                row.push(if r == i { T::one() } else { T::zero() });
            }
            row.push(b[i].clone());
            tableau.push(row);
        }
        let basis = (structural..structural + rows).collect();
        Self {
            rows,
            structural,
            tableau,
            basis,
        }
    }

    fn rhs(&self, i: usize) -> &T {
        let cols = self.tableau[i].len();
        &self.tableau[i][cols - 1]
    }

    fn cost_of(&self, phase: &Phase, costs: &[T], var: usize) -> T {
        match phase {
            Phase::ArtificialSum => {
                if var >= self.structural {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Phase::Costs => {
                if var < self.structural {
                    costs[var].clone()
                } else {
                    T::zero()
                }
            }
        }
    }

    fn reduced_cost(&self, phase: &Phase, costs: &[T], col: usize) -> T {
        let mut z = self.cost_of(phase, costs, col);
        for i in 0..self.rows {
            let cb = self.cost_of(phase, costs, self.basis[i]);
            if cb.is_pos() || cb.is_neg() {
                z = z.sub(&cb.mul(&self.tableau[i][col]));
            }
        }
        z
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.tableau[row][col].clone();
        for v in self.tableau[row].iter_mut() {
            *v = v.div(&p);
        }
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let f = self.tableau[i][col].clone();
            if f.is_pos() || f.is_neg() {
                for j in 0..self.tableau[i].len() {
                    let delta = f.mul(&self.tableau[row][j]);
                    self.tableau[i][j] = self.tableau[i][j].sub(&delta);
                }
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: first improving column, leaving row by minimum ratio
    /// with ties broken by smallest basis variable. Returns at optimality,
    /// errors if unbounded.
    fn run(&mut self, phase: Phase, costs: &[T], allow_artificial: bool) -> Result<()> {
        let enterable = if allow_artificial {
            self.structural + self.rows
        } else {
            self.structural
        };
        let cap = 200_000usize;
        for _ in 0..cap {
            let mut entering = None;
            for col in 0..enterable {
                if self.basis.contains(&col) {
                    continue;
                }
                if self.reduced_cost(&phase, costs, col).is_neg() {
                    entering = Some(col);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows {
                let t = &self.tableau[i][col];
                if t.is_pos() {
                    let ratio = self.rhs(i).div(t);
                    let better = match &leaving {
                        None => true,
                        Some((li, lr)) => {
                            ratio.lt(lr) || (!lr.lt(&ratio) && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(Error::invalid("linear program is unbounded"));
            };
            self.pivot(row, col);
        }
        Err(Error::invalid("simplex iteration cap exceeded"))
    }

    fn objective(&self, phase: &Phase, costs: &[T]) -> T {
        let mut total = T::zero();
        for i in 0..self.rows {
            let cb = self.cost_of(phase, costs, self.basis[i]);
            total = total.add(&cb.mul(self.rhs(i)));
        }
        total
    }

    /// Drive basic artificial variables out of the basis where a structural
    /// pivot exists in their row.
    fn evict_artificials(&mut self) {
        for i in 0..self.rows {
            if self.basis[i] >= self.structural {
                let col = (0..self.structural).find(|&c| {
                    let t = &self.tableau[i][c];
                    t.is_pos() || t.is_neg()
                });
                if let Some(c) = col {
                    self.pivot(i, c);
                }
            }
        }
    }

    fn solution(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.structural];
        for i in 0..self.rows {
            if self.basis[i] < self.structural {
                x[self.basis[i]] = self.rhs(i).clone();
            }
        }
        x
    }
}

/// Minimize `c·x` subject to `A·x = b`, `x ≥ 0` (with `b ≥ 0`).
fn simplex_min<T: LpScalar>(a: Vec<Vec<T>>, b: Vec<T>, c: &[T]) -> Result<(Vec<T>, T)> {
    let mut s = Simplex::new(a, b);
    s.run(Phase::ArtificialSum, c, true)?;
    let infeasibility = s.objective(&Phase::ArtificialSum, c);
    if infeasibility.is_pos() {
        return Err(Error::infeasible("phase-1 optimum is positive"));
    }
    s.evict_artificials();
    s.run(Phase::Costs, c, false)?;
    let value = s.objective(&Phase::Costs, c);
    Ok((s.solution(), value))
}

/// Build the split-variable equality system for min ‖a‖₁ over candidates
/// `1..=max_exponent`: columns are `+V` then `−V`, costs all one.
fn split_system<T: LpScalar>(
    v_entry: impl Fn(u32, u64) -> T,
    powers: &[u32],
    max_exponent: u64,
) -> (Vec<Vec<T>>, Vec<T>, Vec<T>) {
    let m_cols = max_exponent as usize;
    let mut a = Vec::with_capacity(powers.len());
    for &p in powers {
        let mut row = Vec::with_capacity(2 * m_cols);
        for k in 1..=max_exponent {
            row.push(v_entry(p, k));
        }
        for k in 1..=max_exponent {
            row.push(T::zero().sub(&v_entry(p, k)));
        }
        a.push(row);
    }
    let mut b = vec![T::zero(); powers.len()];
    b[0] = T::one();
    let c = vec![T::one(); 2 * m_cols];
    (a, b, c)
}

/// Solve the ‖a‖₁-minimization linear program exactly (two-phase simplex
/// with Bland's rule on rationals).
pub fn l1_min_lp(p: &LpProblem) -> Result<LpSolution> {
    if p.objective != LpObjective::MinANorm1 {
        return Err(Error::invalid("l1_min_lp solves the min_a_norm1 objective"));
    }
    let powers = row_powers(p.alpha, p.m)?;
    if (p.max_exponent as usize) < powers.len() {
        return Err(Error::infeasible(format!(
            "need at least {} candidate exponents, got {}",
            powers.len(),
            p.max_exponent
        )));
    }
    let (a, b, c) = split_system::<Rational>(
        |pow, k| rat_u(k).pow(-(pow as i32)),
        &powers,
        p.max_exponent,
    );
    let (x, value) = simplex_min(a, b, &c)?;
    let m_cols = p.max_exponent as usize;
    let mut support = Vec::new();
    let mut coefficients = Vec::new();
    for j in 0..m_cols {
        let a_j = &x[j] - &x[m_cols + j];
        if !a_j.is_zero() {
            support.push(j as u64 + 1);
            coefficients.push(a_j);
        }
    }
    let sol = LpSolution::from_support(support, coefficients, "min_a_norm1", true);
    debug_assert_eq!(sol.a_norm1, value);
    Ok(sol)
}

/// Floating pre-pass of the same LP; returns the support found, if clean.
fn l1_min_lp_f64_support(powers: &[u32], max_exponent: u64) -> Option<Vec<u64>> {
    let (a, b, c) = split_system::<f64>(
        |pow, k| (k as f64).powi(-(pow as i32)),
        powers,
        max_exponent,
    );
    let (x, _) = simplex_min(a, b, &c).ok()?;
    let m_cols = max_exponent as usize;
    let mut support = Vec::new();
    for j in 0..m_cols {
        if (x[j] - x[m_cols + j]).abs() > 1e-10 {
            support.push(j as u64 + 1);
        }
    }
    if support.len() == powers.len() {
        Some(support)
    } else {
        None
    }
}

fn default_max_exponent(m: u32) -> u64 {
    (3 * m as u64 * m as u64).clamp(16, 280)
}

/// Enumerate ascending supports of `parts` distinct positive integers with
/// the given sum, lexicographically, invoking `visit` on each.
fn enumerate_supports(parts: usize, sum: u64, visit: &mut impl FnMut(&[u64])) {
    fn rec(parts: usize, sum: u64, min: u64, prefix: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
        if parts == 1 {
            if sum >= min {
                prefix.push(sum);
                visit(prefix);
                prefix.pop();
            }
            return;
        }
        let p = parts as u64;
        // Remaining entries exceed k, so k + (k+1) + … + (k+p−1) ≤ sum.
        let max_k = (sum - p * (p - 1) / 2) / p;
        for k in min..=max_k {
            prefix.push(k);
            rec(parts - 1, sum - k, k + 1, prefix, visit);
            prefix.pop();
        }
    }
    if parts == 0 {
        return;
    }
    let min_sum = (parts as u64) * (parts as u64 + 1) / 2;
    if sum < min_sum {
        return;
    }
    rec(parts, sum, 1, &mut Vec::with_capacity(parts), visit);
}

fn is_valid_support(s: &[u64]) -> bool {
    !s.is_empty() && s[0] >= 1 && s.windows(2).all(|w| w[0] < w[1])
}

fn support_a1_f64(support: &[u64], alpha: u32, m: u32) -> Option<f64> {
    let a1: f64 = support_coefficients_f64(support, alpha, m)?
        .iter()
        .map(|v| v.abs())
        .sum();
    a1.is_finite().then_some(a1)
}

/// Start candidates for the best-found searches: the arithmetic and
/// geometric families, scaled roundings of the Chebyshev exponents, and
/// arithmetic-prefix families with one or two spread tail exponents
/// (screened in f64 by the given score).
fn candidate_starts(
    r: usize,
    m: u32,
    alpha: u32,
    score: impl Fn(&[u64], f64) -> Option<f64>,
) -> Vec<Vec<u64>> {
    let mut starts: Vec<Vec<u64>> = vec![
        (1..=r as u64).collect(),
        (0..r as u32).map(|i| 1u64 << i.min(62)).collect(),
    ];
    if alpha == 2 {
        for fraction in [0.999, 0.7, 0.5, 0.35, 0.25] {
            if let Ok(f) = rounded_mpf(m as usize, ScalePolicy { fraction }) {
                starts.push(f.exponents().to_vec());
            }
        }
    } else if let Ok(f) = rounded_mpf(m as usize, ScalePolicy::default()) {
        // Ascending subsets of the order-2m rounded set still make usable
        // base-4 starts.
        let exps = f.exponents();
        if exps.len() >= r {
            starts.push(exps[exps.len() - r..].to_vec());
            starts.push(exps[..r].to_vec());
        }
    }

    let screened = |family: &mut dyn Iterator<Item = Vec<u64>>| -> Vec<Vec<u64>> {
        let mut scored: Vec<(f64, Vec<u64>)> = family
            .filter(|s| is_valid_support(s))
            .filter_map(|s| {
                let a1 = support_a1_f64(&s, alpha, m)?;
                Some((score(&s, a1)?, s))
            })
            .collect();
        scored.sort_by(|x, y| x.0.total_cmp(&y.0));
        scored.into_iter().take(3).map(|(_, s)| s).collect()
    };

    if r >= 2 {
        let tail_hi = (12 * r as u64).max(72);
        let mut tail1 = (r as u64..=tail_hi).map(|t| {
            let mut s: Vec<u64> = (1..=r as u64 - 1).collect();
            s.push(t);
            s
        });
        starts.extend(screened(&mut tail1));
    }
    if r >= 3 {
        let mid_hi = 4 * r as u64;
        let tail_hi = (12 * r as u64).max(72);
        let mut tail2 = (r as u64 - 1..=mid_hi)
            .step_by(2)
            .flat_map(|s_mid| {
                (s_mid + 2..=tail_hi).step_by(3).map(move |t| {
                    let mut s: Vec<u64> = (1..=r as u64 - 2).collect();
                    s.push(s_mid);
                    s.push(t);
                    s
                })
            });
        starts.extend(screened(&mut tail2));
    }
    starts.retain(|s| s.len() == r && is_valid_support(s));
    starts
}

/// Neighbor supports one move away: any element shifted by ±{1, 8, 64}
/// while staying distinct, ascending, and positive.
fn neighbor_supports(support: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for i in 0..support.len() {
        for delta in [1u64, 8, 64] {
            let up = support[i] + delta;
            if i + 1 >= support.len() || up < support[i + 1] {
                let mut s = support.to_vec();
                s[i] = up;
                out.push(s);
            }
            if support[i] > delta {
                let down = support[i] - delta;
                if i == 0 || down > support[i - 1] {
                    let mut s = support.to_vec();
                    s[i] = down;
                    out.push(s);
                }
            }
        }
    }
    out
}

fn trivial_solution(tag: &'static str) -> LpSolution {
    LpSolution::from_support(vec![1], vec![crate::exact::rat(1)], tag, true)
}

/// Minimize ‖a‖₁·‖k‖₁ over supports. Exhaustive (pruned enumeration over
/// all supports of any magnitude) for m ≤ 6; best-found above that, from
/// LP supports and structured starts refined by local search. Ties break
/// toward smaller ‖k‖₁, then lexicographically smaller support.
pub fn search_min_product(m: u32, alpha: u32, max_exponent: Option<u64>) -> Result<LpSolution> {
    const TAG: &str = "min_a1k1";
    let powers = row_powers(alpha, m)?;
    let r = powers.len();
    if r == 1 {
        return Ok(trivial_solution(TAG));
    }

    let mut best: Option<LpSolution> = None;
    let consider = |support: &[u64], best: &mut Option<LpSolution>| {
        // Cheap floating screen before the exact evaluation.
        if let Some(best_sol) = best.as_ref() {
            if let Some(af) = support_coefficients_f64(support, alpha, m) {
                let a1: f64 = af.iter().map(|c| c.abs()).sum();
                let prod = a1 * support.iter().sum::<u64>() as f64;
                let incumbent = best_sol.product().to_f64().unwrap_or(f64::INFINITY);
                if prod > incumbent * (1.0 + 1e-6) + 1e-9 {
                    return;
                }
            }
        }
        let Ok(coeffs) = support_coefficients(support, alpha, m) else {
            return;
        };
        let cand = LpSolution::from_support(support.to_vec(), coeffs, TAG, false);
        let replace = match best.as_ref() {
            None => true,
            Some(cur) => {
                let (cp, np) = (cur.product(), cand.product());
                np < cp
                    || (np == cp
                        && (cand.k_norm1 < cur.k_norm1
                            || (cand.k_norm1 == cur.k_norm1 && cand.support < cur.support)))
            }
        };
        if replace {
            *best = Some(cand);
        }
    };

    if m <= 6 {
        for seed in candidate_starts(r, m, alpha, |_, a1| Some(a1)) {
            consider(&seed, &mut best);
        }
        // Any support summing to s has product ≥ s (‖a‖₁ ≥ 1 from Σa = 1),
        // so scanning sums in increasing order terminates exactly.
        let mut s = (r as u64) * (r as u64 + 1) / 2;
        loop {
            if let Some(b) = best.as_ref() {
                if rat_u(s) >= b.product() {
                    break;
                }
            }
            enumerate_supports(r, s, &mut |support| consider(support, &mut best));
            s += 1;
        }
        let mut sol = best.expect("the arithmetic support always evaluates");
        sol.exhaustive = true;
        Ok(sol)
    } else {
        // Best-found regime: f64 LP supports over a small candidate grid,
        // plus structured starts, each refined by product-descent local
        // search.
        let cap = max_exponent.unwrap_or_else(|| default_max_exponent(m));
        let mut starts = candidate_starts(r, m, alpha, |s, a1| {
            Some(a1 * s.iter().sum::<u64>() as f64)
        });
        let mut grid_m = r as u64;
        while grid_m <= (4 * r as u64).min(cap) {
            if let Some(support) = l1_min_lp_f64_support(&powers, grid_m) {
                starts.push(support);
            }
            grid_m += (r as u64 / 2).max(1);
        }
        for start in starts {
            let Ok(coeffs) = support_coefficients(&start, alpha, m) else {
                continue;
            };
            let mut current = LpSolution::from_support(start, coeffs, TAG, false);
            consider(&current.support.clone(), &mut best);
            for _ in 0..20_000 {
                let mut moves: Vec<(f64, Vec<u64>)> = neighbor_supports(&current.support)
                    .into_iter()
                    .filter(|s| s.iter().sum::<u64>() <= 4 * cap)
                    .filter_map(|s| {
                        let a1 = support_a1_f64(&s, alpha, m)?;
                        Some((a1 * s.iter().sum::<u64>() as f64, s))
                    })
                    .collect();
                moves.sort_by(|x, y| x.0.total_cmp(&y.0));
                let mut advanced = false;
                for (_, cand) in moves.into_iter().take(4) {
                    let Ok(coeffs) = support_coefficients(&cand, alpha, m) else {
                        continue;
                    };
                    let candidate = LpSolution::from_support(cand, coeffs, TAG, false);
                    if candidate.product() < current.product() {
                        current = candidate;
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
            consider(&current.support.clone(), &mut best);
        }
        best.ok_or_else(|| Error::infeasible("no support found in the sweep"))
    }
}

/// Minimize ‖k‖₁ subject to ‖a‖₁ ≤ cap. Exhaustive for m ≤ 6 (enumeration
/// by increasing ‖k‖₁, so the first feasible level is optimal); best-found
/// greedy descent from well-conditioned starts above that.
pub fn search_min_k1_capped(
    m: u32,
    alpha: u32,
    cap: &Rational,
    max_exponent: Option<u64>,
) -> Result<LpSolution> {
    const TAG: &str = "min_k1_capped";
    if cap < &crate::exact::rat(1) {
        return Err(Error::invalid("cap must be at least 1"));
    }
    let powers = row_powers(alpha, m)?;
    let r = powers.len();
    if r == 1 {
        return Ok(trivial_solution(TAG));
    }
    let cap_f = cap.to_f64().unwrap_or(f64::INFINITY);

    let exact_feasible = |support: &[u64]| -> Option<Vec<Rational>> {
        let coeffs = support_coefficients(support, alpha, m).ok()?;
        (norm1(&coeffs) <= *cap).then_some(coeffs)
    };

    if m <= 6 {
        let min_sum = (r as u64) * (r as u64 + 1) / 2;
        // Generous halt for caps so tight that no small support qualifies.
        let abort = min_sum + 600;
        for s in min_sum..=abort {
            let mut found: Option<LpSolution> = None;
            enumerate_supports(r, s, &mut |support| {
                if found.is_some() {
                    return;
                }
                if let Some(af) = support_coefficients_f64(support, alpha, m) {
                    let a1: f64 = af.iter().map(|c| c.abs()).sum();
                    if a1 > cap_f + 1e-6 {
                        return;
                    }
                }
                if let Some(coeffs) = exact_feasible(support) {
                    found = Some(LpSolution::from_support(support.to_vec(), coeffs, TAG, true));
                }
            });
            if let Some(sol) = found {
                return Ok(sol);
            }
        }
        return Err(Error::infeasible(format!(
            "no support with ‖a‖₁ ≤ {cap} and ‖k‖₁ ≤ {abort}"
        )));
    }

    // Best-found regime: greedy descent over ‖k‖₁-reducing moves from
    // feasible starts (screened in f64, accepted on exact feasibility).
    let mut starts = candidate_starts(r, m, alpha, |s, a1| {
        (a1 <= cap_f + 1e-6).then(|| s.iter().sum::<u64>() as f64)
    });
    if let Ok(top) = search_min_product(m, alpha, max_exponent) {
        starts.push(top.support);
    }

    let mut best: Option<LpSolution> = None;
    for start in starts {
        let Some(coeffs) = exact_feasible(&start) else {
            continue;
        };
        let mut current = LpSolution::from_support(start, coeffs, TAG, false);
        for _ in 0..20_000 {
            let mut moves: Vec<(u64, f64, Vec<u64>)> = neighbor_supports(&current.support)
                .into_iter()
                .filter_map(|s| {
                    let sum: u64 = s.iter().sum();
                    if sum >= current.k_norm1 {
                        return None;
                    }
                    let a1 = support_a1_f64(&s, alpha, m)?;
                    (a1 <= cap_f + 1e-6).then_some((sum, a1, s))
                })
                .collect();
            // Deepest cut first; break sum ties toward the smaller norm.
            moves.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
            let mut advanced = false;
            for (_, _, cand) in moves.into_iter().take(6) {
                if let Some(coeffs) = exact_feasible(&cand) {
                    current = LpSolution::from_support(cand, coeffs, TAG, false);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        let replace = match best.as_ref() {
            None => true,
            Some(b) => {
                current.k_norm1 < b.k_norm1
                    || (current.k_norm1 == b.k_norm1 && current.support < b.support)
            }
        };
        if replace {
            best = Some(current);
        }
    }
    best.ok_or_else(|| Error::infeasible(format!("no feasible start for cap {cap}")))
}

/// Odd query multiplier for robust oblivious amplitude amplification: the
/// number of reflections needed to rotate an amplitude of `1/a_norm1` to
/// within a quarter turn of certainty, `n = 2⌈π/(4·asin(1/y)) − 1/2⌉ + 1`.
/// Equal to 1 exactly when no amplification is needed, and 3 for every
/// tabulated formula (1 < ‖a‖₁ ≤ 2).
pub fn oaa_multiplier(a_norm1: f64) -> u64 {
    if a_norm1 <= 1.0 {
        return 1;
    }
    let theta = (1.0 / a_norm1).asin();
    let rounds = (std::f64::consts::PI / (4.0 * theta) - 0.5).ceil().max(0.0) as u64;
    2 * rounds + 1
}
