//! Weighted Sobolev reproducing kernels, their cosine eigenbasis, cubature
//! worst-case errors, and the uniform-approximation tail bound.
//!
//! Two kernel families are supported, both in tensor-product form over
//! `[0,1]^d` with one weight `γ_k > 0` per coordinate:
//!
//! * `AnchoredMin`: `K₁(x, y) = 1 + γ min(x, y)` (anchored at 0), whose
//!   coordinate integrals have closed forms;
//! * `UnanchoredCoshSinh`:
//!   `K₁(x, y) = √γ/sinh(√γ) · cosh(√γ(1-max(x,y))) · cosh(√γ min(x,y))`,
//!   integrated by Gauss–Legendre quadrature.
//!
//! The worst-case error of a cubature rule `Σ aᵢ f(xⁱ)` against uniform
//! integration is computed exactly from the kernel:
//! `Δ² = ∫∫K - 2 Σᵢ aᵢ ∫K(·,xⁱ) + Σᵢⱼ aᵢaⱼ K(xⁱ,xʲ)`,
//! every integral factorizing across coordinates.

use thiserror::Error;

use crate::enumerate::best_first_top;
use crate::quad::{integrate_split_to_tol, integrate_to_tol};
use crate::series::{zeta, CompensatedSum};
use crate::symmetry::{MultiIndex, SymmetrySpec};

const PI_SQ: f64 = std::f64::consts::PI * std::f64::consts::PI;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RkhsError {
    #[error("kernel weights must be positive (got {0})")]
    InvalidWeight(f64),
    #[error("point coordinate {0} is outside [0,1]")]
    OutOfDomain(f64),
    #[error("point dimension {got} does not match kernel dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("cubature rule has {points} points but {weights} weights")]
    RuleLengthMismatch { points: usize, weights: usize },
    #[error("tau must lie in (1/2, 1) (got {0})")]
    InvalidTau(f64),
    #[error("computed squared error {0} is more negative than the tolerance allows")]
    NegativeVariance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    AnchoredMin,
    UnanchoredCoshSinh,
}

/// A tensor-product reproducing kernel on `[0,1]^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub gammas: Vec<f64>,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, gammas: Vec<f64>) -> Result<Self, RkhsError> {
        for &g in &gammas {
            if !(g.is_finite() && g > 0.0) {
                return Err(RkhsError::InvalidWeight(g));
            }
        }
        Ok(KernelSpec { kind, gammas })
    }

    pub fn d(&self) -> usize {
        self.gammas.len()
    }

    fn univariate(&self, gamma: f64, x: f64, y: f64) -> f64 {
        match self.kind {
            KernelKind::AnchoredMin => 1.0 + gamma * x.min(y),
            KernelKind::UnanchoredCoshSinh => {
                let r = gamma.sqrt();
                r / r.sinh() * (r * (1.0 - x.max(y))).cosh() * (r * x.min(y)).cosh()
            }
        }
    }

    /// `K_d(x, y)`, the product of the univariate kernels.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64, RkhsError> {
        if x.len() != self.d() || y.len() != self.d() {
            return Err(RkhsError::DimensionMismatch {
                got: if x.len() != self.d() { x.len() } else { y.len() },
                expected: self.d(),
            });
        }
        for &c in x.iter().chain(y) {
            if !(0.0..=1.0).contains(&c) {
                return Err(RkhsError::OutOfDomain(c));
            }
        }
        Ok(self
            .gammas
            .iter()
            .zip(x.iter().zip(y))
            .map(|(&g, (&a, &b))| self.univariate(g, a, b))
            .product())
    }

    /// `∫₀¹ K₁(t, x) dt` for one coordinate. The min/max in the kernel puts
    /// a kink at `t = x`, so the quadrature splits there.
    fn univariate_mean(&self, gamma: f64, x: f64, quad_tol: f64) -> f64 {
        match self.kind {
            // ∫₀¹ min(t, x) dt = x - x²/2
            KernelKind::AnchoredMin => 1.0 + gamma * (x - 0.5 * x * x),
            KernelKind::UnanchoredCoshSinh => {
                integrate_split_to_tol(|t| self.univariate(gamma, t, x), x, quad_tol)
            }
        }
    }

    /// `∫₀¹∫₀¹ K₁ dt ds` for one coordinate.
    fn univariate_double_mean(&self, gamma: f64, quad_tol: f64) -> f64 {
        match self.kind {
            // ∫∫ min = 1/3
            KernelKind::AnchoredMin => 1.0 + gamma / 3.0,
            KernelKind::UnanchoredCoshSinh => {
                integrate_to_tol(|x| self.univariate_mean(gamma, x, quad_tol), quad_tol)
            }
        }
    }
}

/// Sample points and weights of a cubature rule on `[0,1]^d`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CubatureRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl CubatureRule {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self, RkhsError> {
        if points.len() != weights.len() {
            return Err(RkhsError::RuleLengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        Ok(CubatureRule { points, weights })
    }

    /// The zero-point rule (the zero algorithm).
    pub fn empty() -> Self {
        CubatureRule::default()
    }

    /// One point per CSV row, coordinates first, the weight in the last
    /// column.
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
            if cols.len() < 2 {
                return Err(format!("line {}: need at least one coordinate and a weight", lineno + 1));
            }
            weights.push(cols[cols.len() - 1]);
            points.push(cols[..cols.len() - 1].to_vec());
        }
        Ok(CubatureRule { points, weights })
    }
}

/// Worst-case error of the cubature rule for uniform integration over the
/// unit ball of the kernel's space.
///
/// Small negative squared errors within `10·quad_tol` clamp to zero; more
/// negative values signal broken numerics and are reported as an error.
pub fn qmc_worst_case_error(
    kernel: &KernelSpec,
    rule: &CubatureRule,
    quad_tol: f64,
) -> Result<f64, RkhsError> {
    assert!(quad_tol > 0.0);
    let d = kernel.d();
    for p in &rule.points {
        if p.len() != d {
            return Err(RkhsError::DimensionMismatch { got: p.len(), expected: d });
        }
        for &c in p {
            if !(0.0..=1.0).contains(&c) {
                return Err(RkhsError::OutOfDomain(c));
            }
        }
    }
    if rule.points.len() != rule.weights.len() {
        return Err(RkhsError::RuleLengthMismatch {
            points: rule.points.len(),
            weights: rule.weights.len(),
        });
    }

    let double_mean: f64 = kernel
        .gammas
        .iter()
        .map(|&g| kernel.univariate_double_mean(g, quad_tol))
        .product();

    let mut cross = CompensatedSum::new();
    for (p, &a) in rule.points.iter().zip(&rule.weights) {
        let mean: f64 = kernel
            .gammas
            .iter()
            .zip(p)
            .map(|(&g, &x)| kernel.univariate_mean(g, x, quad_tol))
            .product();
        cross.add(a * mean);
    }

    let mut quad_form = CompensatedSum::new();
    for (pi, &ai) in rule.points.iter().zip(&rule.weights) {
        for (pj, &aj) in rule.points.iter().zip(&rule.weights) {
            quad_form.add(ai * aj * kernel.eval(pi, pj)?);
        }
    }

    let sq = double_mean - 2.0 * cross.value() + quad_form.value();
    if sq < -10.0 * quad_tol {
        return Err(RkhsError::NegativeVariance(sq));
    }
    Ok(sq.max(0.0).sqrt())
}

/// The `i`-th orthonormal basis function of the univariate unanchored
/// Sobolev space with weight `gamma`: constant 1 for `i = 1`, and
/// `cos(π(i-1)x) · √(2γ/(γ + π²(i-1)²))` for `i ≥ 2`.
pub fn sobolev_basis(gamma: f64, i: u32, x: f64) -> f64 {
    assert!(i >= 1);
    if i == 1 {
        return 1.0;
    }
    let n = (i - 1) as f64;
    (std::f64::consts::PI * n * x).cos() * (2.0 * gamma / (gamma + PI_SQ * n * n)).sqrt()
}

/// Tail bound for uniform approximation on the weighted Sobolev space by the
/// first `n` basis elements (ordered by sup-norm):
/// `√(τ/(1-τ)) · exp(b_τ Σ_k γ_k^τ) · n^(-(1-τ)/(2τ))` with
/// `b_τ = (2/π²)^τ ζ(2τ)/(2τ)`.
///
/// For `n = 0` the bound is the supremum of the kernel diagonal,
/// `Π_k √γ_k·coth(√γ_k)` square-rooted, which the basis squares sum to.
pub fn linfty_tail_bound(gammas: &[f64], n: u64, tau: f64) -> Result<f64, RkhsError> {
    if !(tau > 0.5 && tau < 1.0) {
        return Err(RkhsError::InvalidTau(tau));
    }
    if n == 0 {
        let diag_sup: f64 = gammas
            .iter()
            .map(|&g| {
                let r = g.sqrt();
                r / r.tanh()
            })
            .product();
        return Ok(diag_sup.sqrt());
    }
    let amp = (tau / (1.0 - tau)).sqrt();
    let coeff = (2.0 / PI_SQ).powf(tau) * zeta(2.0 * tau) / (2.0 * tau);
    let weight_sum: f64 = gammas.iter().map(|&g| g.powf(tau)).sum();
    Ok(amp * (coeff * weight_sum).exp() * (n as f64).powf(-(1.0 - tau) / (2.0 * tau)))
}

/// Squared sup-norm of the `i`-th univariate basis function: 1 for `i = 1`,
/// `2γ/(γ + π²(i-1)²)` for `i ≥ 2`.
fn basis_sq_norm(gamma: f64, i: u32) -> f64 {
    if i == 1 {
        1.0
    } else {
        let n = (i - 1) as f64;
        2.0 * gamma / (gamma + PI_SQ * n * n)
    }
}

/// The `k` largest products `Π_l w(γ_l, m_l)` of squared basis sup-norms,
/// with the producing indices - the sup-norm ordering of the tensor basis.
///
/// The univariate sequence is not monotone in the raw index when `γ > π²`
/// (low cosine modes then beat the constant), so each coordinate is ranked
/// first and the best-first enumeration runs in rank space.
pub fn ordered_basis_sq_norms(gammas: &[f64], k: usize) -> Vec<(MultiIndex, f64)> {
    let d = gammas.len();
    if d == 0 || k == 0 {
        return Vec::new();
    }
    // rank ↦ raw index per coordinate: cosine modes with 2γ/(γ+π²n²) > 1,
    // i.e. n < √γ/π, precede the constant function
    let ahead: Vec<u32> = gammas
        .iter()
        .map(|&g| {
            let bound = (g.sqrt() / std::f64::consts::PI).ceil() as u32;
            (2..=bound.saturating_add(1))
                .take_while(|&i| basis_sq_norm(g, i) > 1.0)
                .count() as u32
        })
        .collect();
    let rank_to_index = |coord: usize, rank: u32| -> u32 {
        let a = ahead[coord];
        if rank <= a {
            rank + 1 // the large cosine modes, already in decreasing order
        } else if rank == a + 1 {
            1 // the constant function
        } else {
            rank
        }
    };

    let symmetry = SymmetrySpec::entire(d).expect("d >= 1");
    let mut log_of = |coord: usize, rank: u32| basis_sq_norm(gammas[coord], rank_to_index(coord, rank)).ln();
    let raw = best_first_top(&symmetry, k, 0.0, &mut log_of);
    raw.into_iter()
        .map(|(logvalue, ranks)| {
            let index: MultiIndex = ranks
                .iter()
                .enumerate()
                .map(|(c, &r)| rank_to_index(c, r))
                .collect();
            (index, logvalue.exp())
        })
        .collect()
}
