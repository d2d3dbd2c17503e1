//! Dense-matrix validation engine.
//!
//! Small systems (up to 12 qubits, dimension 4096) are simulated with dense
//! complex matrices so that product-formula and multiproduct errors can be
//! measured in the exact spectral norm. Hermitian exponentials go through
//! spectral decomposition, which keeps product-formula outputs unitary to
//! roundoff; eigendecompositions of the terms and of the total Hamiltonian
//! are computed once at construction and reused across step sizes.

use nalgebra::{Complex, DMatrix, DVector};
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::construct::MpfFormula;
use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;
pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance on matrix entries.
const HERMITIAN_TOL: f64 = 1e-12;
/// Site cap for the Heisenberg builder (dimension 4096).
const MAX_SITES: usize = 12;

fn eigendecompose(h: &CMatrix) -> (DVector<f64>, CMatrix) {
    // Symmetrize first so roundoff in term assembly cannot leak into the
    // decomposition.
    let sym = (h + h.adjoint()).unscale(2.0);
    let eig = nalgebra::SymmetricEigen::new(sym);
    (eig.eigenvalues, eig.eigenvectors)
}

/// exp(-i·θ·H) from a cached spectral decomposition of H.
fn phase_exponential(values: &DVector<f64>, vectors: &CMatrix, theta: f64) -> CMatrix {
    let mut scaled = vectors.clone();
    for (q, mut col) in scaled.column_iter_mut().enumerate() {
        let phase = Complex64::from_polar(1.0, -values[q] * theta);
        for v in col.iter_mut() {
            *v *= phase;
        }
    }
    scaled * vectors.adjoint()
}

/// A Hamiltonian H = Σ_j h_j given as an ordered list of dense Hermitian
/// terms, with λ = Σ_j ‖h_j‖ (spectral norms).
#[derive(Debug)]
pub struct HamiltonianModel {
    terms: Vec<CMatrix>,
    term_eigen: Vec<(DVector<f64>, CMatrix)>,
    total_eigen: (DVector<f64>, CMatrix),
    lambda: f64,
    dimension: usize,
}

impl HamiltonianModel {
    pub fn new(terms: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::invalid("at least one Hamiltonian term required"));
        };
        let dimension = first.nrows();
        if !dimension.is_power_of_two() {
            return Err(Error::invalid(format!("dimension {dimension} is not a power of two")));
        }
        for (j, t) in terms.iter().enumerate() {
            if t.nrows() != dimension || t.ncols() != dimension {
                return Err(Error::dim(format!("term {j} is not {dimension}x{dimension}")));
            }
            let defect = (t - t.adjoint()).camax();
            if defect > HERMITIAN_TOL {
                return Err(Error::invalid(format!(
                    "term {j} is not Hermitian (defect {defect:e})"
                )));
            }
        }
        let term_eigen: Vec<_> = terms.iter().map(eigendecompose).collect();
        let lambda = term_eigen
            .iter()
            .map(|(vals, _)| vals.iter().fold(0.0f64, |a, &v| a.max(v.abs())))
            .sum();
        let total = terms.iter().skip(1).fold(terms[0].clone(), |acc, t| acc + t);
        let total_eigen = eigendecompose(&total);
        Ok(Self {
            terms,
            term_eigen,
            total_eigen,
            lambda,
            dimension,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[CMatrix] {
        &self.terms
    }

    /// λ = Σ_j ‖h_j‖.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The assembled total Hamiltonian.
    pub fn total(&self) -> CMatrix {
        self.terms.iter().skip(1).fold(self.terms[0].clone(), |acc, t| acc + t)
    }

    /// Eigenvalues of the total Hamiltonian (unordered).
    pub fn spectrum(&self) -> &DVector<f64> {
        &self.total_eigen.0
    }

    fn term_exponential(&self, j: usize, theta: f64) -> CMatrix {
        let (vals, vecs) = &self.term_eigen[j];
        phase_exponential(vals, vecs, theta)
    }
}

/// Dense unitary with its dimension; product-formula outputs satisfy
/// ‖U†U − I‖ ≤ 1e−10.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }

    /// ‖U†U − I‖.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.0.nrows();
        spectral_norm(&(self.0.adjoint() * &self.0 - CMatrix::identity(n, n)))
    }
}

const PAULI_X: [[Complex64; 2]; 2] = [
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
];
const PAULI_Y: [[Complex64; 2]; 2] = [
    [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
    [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
];
const PAULI_Z: [[Complex64; 2]; 2] = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
];

/// Pauli flavors in the order they appear within a bond.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

fn pauli_matrix(p: Pauli) -> CMatrix {
    let data = match p {
        Pauli::X => &PAULI_X,
        Pauli::Y => &PAULI_Y,
        Pauli::Z => &PAULI_Z,
    };
    CMatrix::from_fn(2, 2, |i, j| data[i][j])
}

/// Embed the same Pauli on two sites of an n-site register (site 0 is the
/// leftmost tensor factor).
pub fn two_site_pauli(n_sites: usize, a: usize, b: usize, p: Pauli) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for site in 0..n_sites {
        let factor = if site == a || site == b {
            pauli_matrix(p)
        } else {
            CMatrix::identity(2, 2)
        };
        out = out.kronecker(&factor);
    }
    out
}

/// Periodic 1D Heisenberg chain H = Σ_j (X_jX_{j+1} + Y_jY_{j+1} + Z_jZ_{j+1})
/// on N sites: 3N unit-norm terms ordered bond-ascending with X, Y, Z inside
/// each bond, so λ = 3N. The N = 2 chain keeps both (1,2) and (2,1) bonds of
/// the periodic sum, duplicating each coupling.
pub fn heisenberg_chain(n_sites: usize) -> Result<HamiltonianModel> {
    if n_sites < 2 {
        return Err(Error::invalid("chain needs at least 2 sites"));
    }
    if n_sites > MAX_SITES {
        return Err(Error::DimensionCap {
            sites: n_sites,
            cap: MAX_SITES,
        });
    }
    let mut terms = Vec::with_capacity(3 * n_sites);
    for bond in 0..n_sites {
        let (a, b) = (bond, (bond + 1) % n_sites);
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push(two_site_pauli(n_sites, a, b, p));
        }
    }
    HamiltonianModel::new(terms)
}

/// e^{-iHt} by spectral decomposition of the total Hamiltonian.
pub fn exact_evolution(h: &HamiltonianModel, t: f64) -> UnitaryMatrix {
    UnitaryMatrix(phase_exponential(&h.total_eigen.0, &h.total_eigen.1, t))
}

fn ordered_product(h: &HamiltonianModel, delta: f64, reverse: bool) -> CMatrix {
    let n = h.n_terms();
    let indices: Vec<usize> = if reverse {
        (0..n).rev().collect()
    } else {
        (0..n).collect()
    };
    let mut acc = h.term_exponential(indices[0], delta);
    for &j in &indices[1..] {
        acc *= h.term_exponential(j, delta);
    }
    acc
}

/// First-order product formula: the ordered product e^{-ih₁Δ}e^{-ih₂Δ}⋯ over
/// the terms as stored.
pub fn trotter_u1(h: &HamiltonianModel, delta: f64) -> UnitaryMatrix {
    UnitaryMatrix(ordered_product(h, delta, false))
}

fn u2_matrix(h: &HamiltonianModel, delta: f64) -> CMatrix {
    ordered_product(h, delta / 2.0, false) * ordered_product(h, delta / 2.0, true)
}

/// Second-order symmetric product formula U₂(Δ) = U⃗₁(Δ/2)·U⃖₁(Δ/2).
pub fn trotter_u2(h: &HamiltonianModel, delta: f64) -> UnitaryMatrix {
    UnitaryMatrix(u2_matrix(h, delta))
}

/// Suzuki recursion with p_α = 1/(4 − 4^{1/(α−1)}):
/// U_α(Δ) = U²_{α−2}(p_αΔ) · U_{α−2}((1−4p_α)Δ) · U²_{α−2}(p_αΔ).
///
/// Evaluated literally, so an order-α integrator invokes the base sequence
/// exactly 5^{α/2−1} times.
pub(crate) fn suzuki_compose(
    base: &mut dyn FnMut(f64) -> CMatrix,
    alpha: u32,
    delta: f64,
) -> CMatrix {
    if alpha == 2 {
        return base(delta);
    }
    let p = 1.0 / (4.0 - 4f64.powf(1.0 / (alpha as f64 - 1.0)));
    let left = suzuki_compose(base, alpha - 2, p * delta)
        * suzuki_compose(base, alpha - 2, p * delta);
    let mid = suzuki_compose(base, alpha - 2, (1.0 - 4.0 * p) * delta);
    let right = suzuki_compose(base, alpha - 2, p * delta)
        * suzuki_compose(base, alpha - 2, p * delta);
    left * mid * right
}

/// Order-α Trotter-Suzuki integrator (α even, α = 2 is plain U₂).
pub fn suzuki_u_alpha(h: &HamiltonianModel, delta: f64, alpha: u32) -> Result<UnitaryMatrix> {
    if alpha < 2 || !alpha.is_multiple_of(2) {
        return Err(Error::invalid(format!("order {alpha} must be even and >= 2")));
    }
    let mut base = |d: f64| u2_matrix(h, d);
    Ok(UnitaryMatrix(suzuki_compose(&mut base, alpha, delta)))
}

/// Binary exponentiation of a dense matrix.
pub fn matrix_power(m: &CMatrix, e: u64) -> CMatrix {
    let n = m.nrows();
    let mut result = CMatrix::identity(n, n);
    let mut base = m.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Apply the multiproduct formula: Σ_j a_j·(U_base(Δ/k_j))^{k_j} with the
/// base sequence selected by the formula's base order (2 or 4). The output
/// is not unitary in general, but equals the exact evolution whenever all
/// terms commute, since Σ a_j = 1.
pub fn apply_mpf(h: &HamiltonianModel, formula: &MpfFormula, delta: f64) -> Result<CMatrix> {
    let base_order = formula.base_order();
    if base_order != 2 && base_order != 4 {
        return Err(Error::invalid(format!(
            "base order {base_order} not supported by the dense engine"
        )));
    }
    let n = h.dimension();
    let mut sum = CMatrix::zeros(n, n);
    for (k, a) in formula.exponents().iter().zip(formula.coefficients()) {
        let step = delta / *k as f64;
        let base = if base_order == 2 {
            u2_matrix(h, step)
        } else {
            let mut b = |d: f64| u2_matrix(h, d);
            suzuki_compose(&mut b, 4, step)
        };
        let coeff = Complex64::new(a.to_f64().unwrap_or(f64::NAN), 0.0);
        sum += matrix_power(&base, *k) * coeff;
    }
    Ok(sum)
}

/// Largest singular value by power iteration on A†A, with a deterministic
/// start and restart. The full-SVD route exists independently in the test
/// suite as the cross-check oracle.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let adj = a.adjoint();
    let mut best = 0.0f64;
    for restart in 0..2u64 {
        let mut state = 0x9e3779b97f4a7c15u64.wrapping_add(restart.wrapping_mul(0xbf58476d1ce4e5b9));
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut v = DVector::<Complex64>::from_fn(n, |_, _| Complex64::new(next(), next()));
        let norm = v.norm();
        if norm == 0.0 {
            continue;
        }
        v = v.unscale(norm);
        let mut sigma = 0.0f64;
        let mut stable = 0;
        for _ in 0..10_000 {
            let w = a * &v;
            let estimate = w.norm();
            if estimate == 0.0 {
                sigma = 0.0;
                break;
            }
            let u = &adj * w;
            let un = u.norm();
            if un == 0.0 {
                sigma = estimate;
                break;
            }
            v = u.unscale(un);
            if (estimate - sigma).abs() <= 1e-13 * estimate.max(1e-300) {
                stable += 1;
                if stable >= 3 {
                    sigma = estimate;
                    break;
                }
            } else {
                stable = 0;
            }
            sigma = estimate;
        }
        best = best.max(sigma);
    }
    best
}

/// ‖(U_mpf(t/r))^r − e^{-iHt}‖: the multiproduct evolution error after r
/// steps.
pub fn evolution_error(h: &HamiltonianModel, formula: &MpfFormula, t: f64, r: u64) -> Result<f64> {
    if r == 0 {
        return Err(Error::invalid("step count must be positive"));
    }
    let step = apply_mpf(h, formula, t / r as f64)?;
    let diff = matrix_power(&step, r) - exact_evolution(h, t).into_matrix();
    Ok(spectral_norm(&diff))
}

/// Single-step multiproduct error ‖U_mpf(Δ) − e^{-iHΔ}‖.
pub fn single_step_error(h: &HamiltonianModel, formula: &MpfFormula, delta: f64) -> Result<f64> {
    let step = apply_mpf(h, formula, delta)?;
    let diff = step - exact_evolution(h, delta).into_matrix();
    Ok(spectral_norm(&diff))
}

/// ‖(U_α(t/r))^r − e^{-iHt}‖ for the plain Suzuki integrator.
pub fn suzuki_evolution_error(h: &HamiltonianModel, alpha: u32, t: f64, r: u64) -> Result<f64> {
    if r == 0 {
        return Err(Error::invalid("step count must be positive"));
    }
    let step = suzuki_u_alpha(h, t / r as f64, alpha)?.into_matrix();
    let diff = matrix_power(&step, r) - exact_evolution(h, t).into_matrix();
    Ok(spectral_norm(&diff))
}

/// Reproducible random Hamiltonian: `n_terms` dense Hermitian terms on
/// `n_qubits` qubits, each normalized to unit spectral norm, so λ = n_terms.
pub fn random_hamiltonian(n_qubits: usize, n_terms: usize, seed: u64) -> HamiltonianModel {
    let dim = 1usize << n_qubits;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let h = (&g + g.adjoint()).unscale(2.0);
        let (vals, _) = eigendecompose(&h);
        let norm = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        terms.push(h.unscale(norm.max(f64::MIN_POSITIVE)));
    }
    HamiltonianModel::new(terms).expect("terms are Hermitian by construction")
}
