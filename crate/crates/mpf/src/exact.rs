//! Exact rational arithmetic and exact linear solving for multiproduct
//! coefficient systems.
//!
//! Multiproduct coefficients are pinned by moment constraints
//!
//!   V(k⁻²) · a = ê₁,
//!
//! a Vandermonde system in the inverse squared exponents, or by the
//! generalized system whose row powers are `{0, α, α+2, …, 2m−2}` when the
//! base sequence has order α. Everything in this module is exact:
//! [`Rational`] is an arbitrary-precision fraction kept in canonical form
//! (reduced, positive denominator), so a zero residual really is zero.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form: reduced, denominator
/// positive, zero stored as 0/1. Serializes as `"p/q"` (or `"n"` when the
/// denominator is one).
pub type Rational = num_rational::BigRational;

/// Column vector of rationals.
pub type RationalVector = Vec<Rational>;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an unsigned integer exponent value.
pub fn rat_u(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse the `"p/q"` (or plain integer) string form.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse().map_err(|_| Error::ParseError {
        locator: s.to_string(),
        message: "expected `p/q` or an integer".into(),
    })
}

/// Standard basis vector ê₁ of the given length.
pub fn unit_first(len: usize) -> RationalVector {
    let mut v = vec![Rational::zero(); len];
    if len > 0 {
        v[0] = rat(1);
    }
    v
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dim(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<RationalVector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dim("ragged rows"));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = rat(1);
        }
        Self {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    /// Matrix-vector product, exact.
    pub fn mul_vec(&self, x: &[Rational]) -> Result<RationalVector> {
        if x.len() != self.cols {
            return Err(Error::dim(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &x[j])
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .collect())
    }
}

/// Row powers `{0, α, α+2, …, 2m−2}` of the generalized coefficient system
/// for base order `alpha` and target order `2m`. The count is
/// `m − α/2 + 1`, which is also the required number of exponents.
pub fn row_powers(alpha: u32, m: u32) -> Result<Vec<u32>> {
    if alpha < 2 || !alpha.is_multiple_of(2) {
        return Err(Error::invalid(format!("base order {alpha} must be even and >= 2")));
    }
    if 2 * m < alpha {
        return Err(Error::invalid(format!(
            "target order {} below base order {alpha}",
            2 * m
        )));
    }
    let mut powers = vec![0];
    let mut p = alpha;
    while p <= 2 * m - 2 {
        powers.push(p);
        p += 2;
    }
    Ok(powers)
}

/// Generalized Vandermonde-type system matrix: entry `(i, j)` is
/// `k_j^{-p_i}` with the row powers of [`row_powers`]. Columns may exceed
/// the row count (the under-determined setting used by the linear program).
pub fn generalized_vandermonde(k: &[Rational], alpha: u32, m: u32) -> Result<RationalMatrix> {
    let powers = row_powers(alpha, m)?;
    if k.iter().any(Rational::is_zero) {
        return Err(Error::invalid("exponents must be nonzero"));
    }
    let mut rows = Vec::with_capacity(powers.len());
    for &p in &powers {
        rows.push(
            k.iter()
                .map(|kj| kj.pow(-(p as i32)))
                .collect::<RationalVector>(),
        );
    }
    RationalMatrix::from_rows(rows)
}

/// Magnitude estimate used only for pivot selection; exactness of the
/// elimination does not depend on it.
fn pivot_estimate(r: &Rational) -> f64 {
    r.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
}

/// Solve `A·x = b` exactly by pivoted Gaussian elimination.
///
/// Pivots are chosen by the largest floating estimate of the candidate
/// entries, which keeps intermediate fractions from ballooning on the
/// ill-scaled systems produced by large exponents.
pub fn solve_exact(a: &RationalMatrix, b: &[Rational]) -> Result<RationalVector> {
    if !a.is_square() {
        return Err(Error::dim(format!("{}x{} matrix is not square", a.rows, a.cols)));
    }
    let n = a.rows;
    if b.len() != n {
        return Err(Error::dim(format!(
            "matrix is {n}x{n}, right-hand side has {} entries",
            b.len()
        )));
    }

    // Augmented working copy.
    let mut w: Vec<RationalVector> = (0..n)
        .map(|i| {
            let mut row: RationalVector = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();

    for col in 0..n {
        let mut pivot = None;
        let mut best = f64::NEG_INFINITY;
        for (r, row) in w.iter().enumerate().skip(col) {
            if !row[col].is_zero() {
                let est = pivot_estimate(&row[col]);
                if pivot.is_none() || est > best {
                    pivot = Some(r);
                    best = est;
                }
            }
        }
        let Some(p) = pivot else {
            return Err(Error::SingularMatrix { column: col });
        };
        w.swap(col, p);
        for r in col + 1..n {
            if w[r][col].is_zero() {
                continue;
            }
            let factor = &w[r][col] / &w[col][col];
            for j in col..=n {
                let delta = &factor * &w[col][j];
                w[r][j] = &w[r][j] - delta;
            }
        }
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = w[i][n].clone();
        for j in i + 1..n {
            acc -= &w[i][j] * &x[j];
        }
        x[i] = acc / &w[i][i];
    }
    Ok(x)
}

/// Closed-form solution of the square α = 2 system `V(k⁻²)·a = ê₁`:
///
///   a_j = ∏_{q≠j} 1 / (1 − (k_q/k_j)²) = ∏_{q≠j} k_j² / (k_j² − k_q²).
///
/// Exponents must be distinct and nonzero.
pub fn vandermonde_closed_form(k: &[Rational]) -> Result<RationalVector> {
    if k.iter().any(Rational::is_zero) {
        return Err(Error::invalid("exponents must be nonzero"));
    }
    let squares: Vec<Rational> = k.iter().map(|kj| kj * kj).collect();
    for j in 0..k.len() {
        for q in 0..j {
            if squares[j] == squares[q] {
                return Err(Error::DuplicateExponent {
                    value: k[j].to_string(),
                });
            }
        }
    }
    Ok((0..k.len())
        .map(|j| {
            squares
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != j)
                .map(|(_, kq2)| &squares[j] / (&squares[j] - kq2))
                .fold(rat(1), |acc, f| acc * f)
        })
        .collect())
}

/// Exact residual `A·x − b`.
pub fn residual(a: &RationalMatrix, x: &[Rational], b: &[Rational]) -> Result<RationalVector> {
    if b.len() != a.rows {
        return Err(Error::dim(format!(
            "matrix has {} rows, right-hand side has {} entries",
            a.rows,
            b.len()
        )));
    }
    let ax = a.mul_vec(x)?;
    Ok(ax.into_iter().zip(b).map(|(l, r)| l - r).collect())
}

/// Exact one-norm Σ|v_i|.
pub fn norm1(v: &[Rational]) -> Rational {
    v.iter().map(Signed::abs).fold(Rational::zero(), |a, t| a + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn rats(vals: &[(i64, i64)]) -> RationalVector {
        vals.iter().map(|&(n, d)| ratio(n, d)).collect()
    }

    #[test]
    fn solve_two_by_two_table_row() {
        // k = (1, 2) system: rows (1, 1) and (1, 1/4).
        let a = RationalMatrix::from_rows(vec![rats(&[(1, 1), (1, 1)]), rats(&[(1, 1), (1, 4)])])
            .unwrap();
        let b = vec![rat(1), rat(0)];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x, rats(&[(-1, 3), (4, 3)]));
    }

    #[test]
    fn solve_identity() {
        let a = RationalMatrix::identity(3);
        let b = vec![rat(1), rat(0), rat(0)];
        assert_eq!(solve_exact(&a, &b).unwrap(), b);
    }

    #[test]
    fn solve_k126_system() {
        // Rows (1, k^-2, k^-4) over k = (1, 2, 6).
        let k = vec![rat(1), rat(2), rat(6)];
        let a = generalized_vandermonde(&k, 2, 3).unwrap();
        let x = solve_exact(&a, &unit_first(3)).unwrap();
        assert_eq!(x, rats(&[(1, 105), (-1, 6), (81, 70)]));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = RationalMatrix::from_rows(vec![rats(&[(1, 1), (2, 1)]), rats(&[(2, 1), (4, 1)])])
            .unwrap();
        let err = solve_exact(&a, &[rat(1), rat(0)]).unwrap_err();
        assert!(matches!(err, Error::SingularMatrix { column: 1 }));
    }

    #[test]
    fn closed_form_matches_table_values() {
        assert_eq!(
            vandermonde_closed_form(&[rat(1), rat(2)]).unwrap(),
            rats(&[(-1, 3), (4, 3)])
        );
        assert_eq!(vandermonde_closed_form(&[rat(1)]).unwrap(), vec![rat(1)]);
        assert_eq!(
            vandermonde_closed_form(&[rat(1), rat(2), rat(4)]).unwrap(),
            rats(&[(1, 45), (-4, 9), (64, 45)])
        );
    }

    #[test]
    fn closed_form_rejects_duplicates() {
        let err = vandermonde_closed_form(&[rat(2), rat(2)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateExponent { .. }));
    }

    #[test]
    fn residual_zero_vector_case() {
        let a = RationalMatrix::identity(2);
        let z = vec![rat(0), rat(0)];
        assert_eq!(residual(&a, &z, &z).unwrap(), z);
    }

    #[test]
    fn residual_dimension_mismatch() {
        let a = RationalMatrix::identity(2);
        assert!(residual(&a, &[rat(1)], &[rat(1), rat(0)]).is_err());
        assert!(residual(&a, &[rat(1), rat(0)], &[rat(1)]).is_err());
    }

    #[test]
    fn row_powers_match_expected_counts() {
        assert_eq!(row_powers(2, 3).unwrap(), vec![0, 2, 4]);
        assert_eq!(row_powers(4, 5).unwrap(), vec![0, 4, 6, 8]);
        assert_eq!(row_powers(4, 2).unwrap(), vec![0]);
        for alpha in [2u32, 4] {
            for m in (alpha / 2)..12 {
                let n = row_powers(alpha, m).unwrap().len() as u32;
                assert_eq!(n, m - alpha / 2 + 1);
            }
        }
    }

    #[test]
    fn rational_string_round_trip() {
        assert_eq!(ratio(-1, 3).to_string(), "-1/3");
        assert_eq!(rat(7).to_string(), "7");
        assert_eq!(parse_rational("-1/3").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("7/1").unwrap(), rat(7));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("7/0").is_err() || parse_rational("x").is_err());
    }

    /// Deterministic small-rational generator for round-trip tests.
    fn small_rational(seed: &mut u64) -> Rational {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let n = ((*seed >> 16) % 41) as i64 - 20;
        let d = ((*seed >> 40) % 19) as i64 + 1;
        ratio(n, d)
    }

    #[test]
    fn random_solve_round_trips_through_residual() {
        let mut seed = 0x5eed;
        for trial in 0..50 {
            let entries: RationalVector = (0..9).map(|_| small_rational(&mut seed)).collect();
            let a = match RationalMatrix::new(3, 3, entries) {
                Ok(a) => a,
                Err(_) => unreachable!(),
            };
            let b: RationalVector = (0..3).map(|_| small_rational(&mut seed)).collect();
            match solve_exact(&a, &b) {
                Ok(x) => {
                    let r = residual(&a, &x, &b).unwrap();
                    assert!(r.iter().all(Rational::is_zero), "trial {trial} residual nonzero");
                }
                Err(Error::SingularMatrix { .. }) => {} // singular draws are fine
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
    }

    proptest! {
        /// Closed form agrees with exact elimination on the same system.
        #[test]
        fn closed_form_matches_elimination(raw in proptest::collection::btree_set(1u64..=30, 1..=8)) {
            let k: RationalVector = raw.iter().map(|&v| rat_u(v)).collect();
            let m = k.len() as u32;
            let a = generalized_vandermonde(&k, 2, m).unwrap();
            let by_form = vandermonde_closed_form(&k).unwrap();
            let by_elim = solve_exact(&a, &unit_first(k.len())).unwrap();
            prop_assert_eq!(&by_form, &by_elim);
            let r = residual(&a, &by_form, &unit_first(k.len())).unwrap();
            prop_assert!(r.iter().all(Rational::is_zero));
        }

        /// Canonical form survives arithmetic: (p+q)−q = p and (p·q)/q = p.
        #[test]
        fn canonical_form_round_trip(
            pn in -1000i64..1000, pd in 1i64..1000,
            qn in -1000i64..1000, qd in 1i64..1000,
        ) {
            let p = ratio(pn, pd);
            let q = ratio(qn, qd);
            prop_assert_eq!(&(&p + &q) - &q, p.clone());
            if !q.is_zero() {
                prop_assert_eq!(&(&p * &q) / &q, p.clone());
            }
            // Canonical form after arithmetic: positive denominator, reduced.
            let r = &p + &q;
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(num_integer::Integer::gcd(r.numer(), r.denom()).is_one());
            prop_assert!(Rational::zero().denom().is_one());
        }
    }
}
