//! Minimal worst-case errors, information complexity, and tractability of
//! linear tensor-product problems between Hilbert spaces.
//!
//! The `d`-variate problems handled here are built from one compact
//! univariate operator: their squared singular values are `d`-fold products
//! of the univariate sequence `λ = (λ_m)`, optionally rescaled by a factor
//! `s_d` on the source norm and restricted to (anti)symmetric subspaces.
//! Everything of interest (the error of the `n`-th optimal algorithm, the
//! information complexity `n(ε, d)`, tractability verdicts for whole problem
//! families) reduces to ordered enumeration, counting, and summability
//! analysis of those product sequences, which is what this crate implements:
//!
//! * [`spectrum`]: the univariate sequences and their `ℓ_τ` analytics;
//! * [`symmetry`]: (anti)symmetric coordinate groups, admissible index
//!   sets, symmetrizer expansions;
//! * [`enumerate`]: lazy best-first enumeration and pruned counting of
//!   product eigenvalues;
//! * [`complexity`]: initial/minimal errors, information complexity,
//!   average-case tail errors, optimal-algorithm plans;
//! * [`tractability`]: a rule engine classifying problem families into
//!   tractability classes from declared analytic facts;
//! * [`weights`]: product-weight sum exponents and the block-partition
//!   lower / exponential upper complexity bounds;
//! * [`rkhs`]: weighted Sobolev kernels, the cosine eigenbasis, cubature
//!   worst-case errors, uniform-approximation tail bounds;
//! * [`moments`]: moments of sums of uniform variables and the cube-slicing
//!   block sizes.

pub mod complexity;
pub mod enumerate;
pub mod moments;
pub mod problem;
pub mod quad;
pub mod rkhs;
pub mod series;
pub mod spectrum;
pub mod symmetry;
pub mod tractability;
pub mod weights;

pub use complexity::{
    avg_tail_error, info_complexity, info_complexity_capped, initial_error, minimal_error,
    optimal_algorithm_plan, ComplexityError,
};
pub use enumerate::{
    count_above, count_above_capped, enumerate_top, product_eigenvalue, EnumError, EnumItem,
};
pub use problem::{ErrorCriterion, ProblemError, ProblemSpec};
pub use spectrum::{Spectrum, SpectrumError};
pub use symmetry::{
    multiplicity_factor, symmetrizer_coefficients, GroupKind, MultiIndex, SymmetryError,
    SymmetrySpec,
};
pub use tractability::{
    classify_antisymmetric, classify_scaled, classify_symmetric, classify_unscaled,
    suf_antisym_margin, ScalingFamily, SymmetryGrowth, TractClass, TractabilityError, Verdict,
};
pub use weights::{GeneratorWeights, WeightFamily, WeightsError};
