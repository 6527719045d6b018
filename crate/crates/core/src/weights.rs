//! Product-weight machinery: generator families, sum exponents, the greedy
//! block partition behind the `2^s` complexity lower bound, and the
//! exponential-in-weights upper bound for uniform approximation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::zeta;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum WeightsError {
    #[error("generator weights must satisfy C_gamma >= g_1 >= ... >= g_d > 0")]
    InvalidGenerators,
    #[error("explicit weights are only defined up to dimension {len}, requested {d}")]
    DimensionTooLarge { d: usize, len: usize },
    #[error("tau must lie in (1/2, 1) (got {0})")]
    InvalidTau(f64),
    #[error("the asymptotics of explicit weights are not declared")]
    Undecidable,
}

/// Generator-weight family; in dimension `d` the generators are
/// `γ_{d,1} ≥ … ≥ γ_{d,d} > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum WeightFamily {
    /// `γ_{d,j} = g` for every `j`.
    Uniform { g: f64 },
    /// `γ_{d,j} = j^(-beta)`, `beta ≥ 0`.
    PowerGen { beta: f64 },
    /// Explicit nonincreasing positive list; dimension `d` uses the first
    /// `d` entries.
    Explicit { values: Vec<f64> },
}

/// A weight family together with the uniform generator bound `C_γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightsRepr", into = "WeightsRepr")]
pub struct GeneratorWeights {
    family: WeightFamily,
    c_gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct WeightsRepr {
    #[serde(flatten)]
    family: WeightFamily,
    #[serde(default)]
    c_gamma: Option<f64>,
}

impl TryFrom<WeightsRepr> for GeneratorWeights {
    type Error = WeightsError;

    fn try_from(repr: WeightsRepr) -> Result<Self, Self::Error> {
        match repr.c_gamma {
            Some(c) => GeneratorWeights::new(repr.family, c),
            None => GeneratorWeights::with_default_bound(repr.family),
        }
    }
}

impl From<GeneratorWeights> for WeightsRepr {
    fn from(w: GeneratorWeights) -> Self {
        WeightsRepr { family: w.family, c_gamma: Some(w.c_gamma) }
    }
}

/// Greedy block partition of the coordinates `1..=d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Number of complete blocks.
    pub s: usize,
    /// The blocks, as 0-based half-open coordinate ranges.
    pub blocks: Vec<std::ops::Range<usize>>,
}

/// The partition lower bound on the information complexity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    /// `2^s`, saturating at `u128::MAX`.
    pub n: u128,
    /// The smooth estimate `½ · 2^(Σ γ_{d,j} / (2 + C_γ))`.
    pub smooth: f64,
}

impl GeneratorWeights {
    pub fn new(family: WeightFamily, c_gamma: f64) -> Result<Self, WeightsError> {
        if !(c_gamma.is_finite() && c_gamma > 0.0) {
            return Err(WeightsError::InvalidGenerators);
        }
        match &family {
            WeightFamily::Uniform { g } => {
                if !(g.is_finite() && *g > 0.0 && *g <= c_gamma) {
                    return Err(WeightsError::InvalidGenerators);
                }
            }
            WeightFamily::PowerGen { beta } => {
                if !(beta.is_finite() && *beta >= 0.0 && c_gamma >= 1.0) {
                    return Err(WeightsError::InvalidGenerators);
                }
            }
            WeightFamily::Explicit { values } => {
                if values.is_empty() {
                    return Err(WeightsError::InvalidGenerators);
                }
                let ordered = values.windows(2).all(|w| w[0] >= w[1]);
                let positive = values.iter().all(|&v| v.is_finite() && v > 0.0);
                if !ordered || !positive || values[0] > c_gamma {
                    return Err(WeightsError::InvalidGenerators);
                }
            }
        }
        Ok(GeneratorWeights { family, c_gamma })
    }

    /// Bound `C_γ` taken as the largest generator.
    pub fn with_default_bound(family: WeightFamily) -> Result<Self, WeightsError> {
        let bound = match &family {
            WeightFamily::Uniform { g } => *g,
            WeightFamily::PowerGen { .. } => 1.0,
            WeightFamily::Explicit { values } => values.first().copied().unwrap_or(0.0),
        };
        Self::new(family, bound)
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn c_gamma(&self) -> f64 {
        self.c_gamma
    }

    /// `γ_{d,j}` for `1 ≤ j ≤ d`.
    pub fn weight(&self, d: usize, j: usize) -> Result<f64, WeightsError> {
        assert!(j >= 1 && j <= d);
        match &self.family {
            WeightFamily::Uniform { g } => Ok(*g),
            WeightFamily::PowerGen { beta } => Ok((j as f64).powf(-beta)),
            WeightFamily::Explicit { values } => {
                if d > values.len() {
                    Err(WeightsError::DimensionTooLarge { d, len: values.len() })
                } else {
                    Ok(values[j - 1])
                }
            }
        }
    }

    /// The generator vector at dimension `d`.
    pub fn weights_at(&self, d: usize) -> Result<Vec<f64>, WeightsError> {
        (1..=d).map(|j| self.weight(d, j)).collect()
    }

    /// Sum exponents `(p(γ), q(γ))`: the infima of `κ` for which
    /// `Σ_{j≤d} γ_{d,j}^κ` stays bounded, respectively grows at most like
    /// `ln d`. Infinite when no `κ` works; `None` for explicit weights,
    /// whose asymptotics are undeclared.
    pub fn sum_exponents(&self) -> Option<(f64, f64)> {
        match &self.family {
            WeightFamily::Uniform { .. } => Some((f64::INFINITY, f64::INFINITY)),
            WeightFamily::PowerGen { beta } => {
                if *beta > 0.0 {
                    // Σ j^(-βκ) is bounded iff βκ > 1 and ~ ln d at βκ = 1
                    Some((1.0 / beta, 1.0 / beta))
                } else {
                    Some((f64::INFINITY, f64::INFINITY))
                }
            }
            WeightFamily::Explicit { .. } => None,
        }
    }

    /// Greedy partition of `1..=d`: each block is the shortest prefix of the
    /// remaining coordinates whose weight sum reaches 2. Every complete
    /// block's sum lies in `[2, 2 + C_γ)`, which forces
    /// `s > (Σ_j γ_{d,j} - 2)/(2 + C_γ)`.
    pub fn partition_blocks(&self, d: usize) -> Result<Partition, WeightsError> {
        let weights = self.weights_at(d)?;
        let mut blocks = Vec::new();
        let mut start = 0usize;
        let mut acc = 0.0;
        for (j, &w) in weights.iter().enumerate() {
            acc += w;
            if acc >= 2.0 {
                blocks.push(start..j + 1);
                start = j + 1;
                acc = 0.0;
            }
        }
        Ok(Partition { s: blocks.len(), blocks })
    }

    /// The lower bound `n(ε, d) ≥ 2^s` valid for every `ε` below the
    /// embedding threshold, together with the smooth form
    /// `½·2^(Σγ/(2+C_γ))`.
    pub fn lower_bound_complexity(&self, d: usize) -> Result<LowerBound, WeightsError> {
        let partition = self.partition_blocks(d)?;
        let total: f64 = self.weights_at(d)?.iter().sum();
        let n = if partition.s >= 127 {
            u128::MAX
        } else {
            1u128 << partition.s
        };
        Ok(LowerBound { n, smooth: 0.5 * (total / (2.0 + self.c_gamma)).exp2() })
    }

    /// The explicit information-complexity upper bound
    /// `⌈(a·a_τ·exp(b·Σγ^t + b_τ·Σγ^τ)/ε)^(2τ/(1-τ))⌉` obtained by inverting
    /// the tail bound of the weighted-Sobolev algorithm through an embedding
    /// with constants `(a, b, t)`.
    pub fn upper_bound_complexity(
        &self,
        d: usize,
        eps: f64,
        tau: f64,
        t: f64,
        a: f64,
        b: f64,
    ) -> Result<f64, WeightsError> {
        if !(tau > 0.5 && tau < 1.0) {
            return Err(WeightsError::InvalidTau(tau));
        }
        assert!(eps > 0.0 && t > 0.0 && t <= 1.0 && a > 0.0 && b >= 0.0);
        let weights = self.weights_at(d)?;
        let sum_t: f64 = weights.iter().map(|&g| g.powf(t)).sum();
        let sum_tau: f64 = weights.iter().map(|&g| g.powf(tau)).sum();
        let amp = (tau / (1.0 - tau)).sqrt();
        let coeff = (2.0 / (std::f64::consts::PI * std::f64::consts::PI)).powf(tau)
            * zeta(2.0 * tau)
            / (2.0 * tau);
        let base = a * amp * (b * sum_t + coeff * sum_tau).exp() / eps;
        Ok(base.powf(2.0 * tau / (1.0 - tau)).ceil().max(1.0))
    }

    /// The weak-tractability criterion `lim_d (1/d) Σ_j γ_{d,j}^κ = 0`,
    /// decided analytically; explicit weights are undecidable.
    pub fn wt_criterion(&self, kappa: f64) -> Result<bool, WeightsError> {
        assert!(kappa > 0.0 && kappa <= 1.0);
        match &self.family {
            WeightFamily::Uniform { .. } => Ok(false),
            WeightFamily::PowerGen { beta } => Ok(*beta > 0.0),
            WeightFamily::Explicit { .. } => Err(WeightsError::Undecidable),
        }
    }
}

/// Embedding constants `(a, b, t)` of the space into the weighted Sobolev
/// space, used by [`GeneratorWeights::upper_bound_complexity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingConstants {
    pub a: f64,
    pub b: f64,
    pub t: f64,
}

impl EmbeddingConstants {
    /// Smooth-function scales (`C^∞`, once-differentiable, low polynomials):
    /// the embedding norm is `exp(½ Σ γ_{d,j})`.
    pub const SMOOTH: EmbeddingConstants = EmbeddingConstants { a: 1.0, b: 0.5, t: 1.0 };
    /// The weighted Sobolev space itself.
    pub const SOBOLEV: EmbeddingConstants = EmbeddingConstants { a: 1.0, b: 0.0, t: 1.0 };
}
