//! One concrete `d`-variate tensor-product problem instance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectrum::Spectrum;
use crate::symmetry::SymmetrySpec;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ProblemError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("scaling factor must be positive and finite (got {0})")]
    InvalidScaling(f64),
    #[error("symmetry dimension {sym} does not match problem dimension {d}")]
    DimensionMismatch { sym: usize, d: usize },
}

/// Error criterion: thresholds measured directly, or relative to the error
/// of the zero algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCriterion {
    Absolute,
    Normalized,
}

/// A univariate spectrum, a dimension, a source-norm scaling factor, a
/// symmetry structure, and an error criterion.
///
/// The squared singular values of the induced `d`-variate problem are the
/// scaled products `s · λ_{k_1} ⋯ λ_{k_d}` over the admissible index set of
/// the symmetry structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct ProblemSpec {
    spectrum: Spectrum,
    d: usize,
    scaling: f64,
    symmetry: SymmetrySpec,
    criterion: ErrorCriterion,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    spectrum: Spectrum,
    d: usize,
    #[serde(default = "default_scaling")]
    scaling: f64,
    #[serde(default)]
    symmetry: Option<SymmetrySpec>,
    #[serde(default = "default_criterion")]
    criterion: ErrorCriterion,
}

fn default_scaling() -> f64 {
    1.0
}

fn default_criterion() -> ErrorCriterion {
    ErrorCriterion::Absolute
}

impl TryFrom<ProblemRepr> for ProblemSpec {
    type Error = ProblemError;

    fn try_from(repr: ProblemRepr) -> Result<Self, Self::Error> {
        let symmetry = match repr.symmetry {
            Some(s) => s,
            None => SymmetrySpec::entire(repr.d).map_err(|_| ProblemError::ZeroDimension)?,
        };
        ProblemSpec::new(repr.spectrum, repr.d, repr.scaling, symmetry, repr.criterion)
    }
}

impl From<ProblemSpec> for ProblemRepr {
    fn from(p: ProblemSpec) -> Self {
        ProblemRepr {
            spectrum: p.spectrum,
            d: p.d,
            scaling: p.scaling,
            symmetry: Some(p.symmetry),
            criterion: p.criterion,
        }
    }
}

impl ProblemSpec {
    pub fn new(
        spectrum: Spectrum,
        d: usize,
        scaling: f64,
        symmetry: SymmetrySpec,
        criterion: ErrorCriterion,
    ) -> Result<Self, ProblemError> {
        if d == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        if !(scaling.is_finite() && scaling > 0.0) {
            return Err(ProblemError::InvalidScaling(scaling));
        }
        if symmetry.d() != d {
            return Err(ProblemError::DimensionMismatch { sym: symmetry.d(), d });
        }
        Ok(ProblemSpec { spectrum, d, scaling, symmetry, criterion })
    }

    /// Unscaled, unconstrained, absolute-criterion problem.
    pub fn entire(spectrum: Spectrum, d: usize) -> Result<Self, ProblemError> {
        let symmetry = SymmetrySpec::entire(d).map_err(|_| ProblemError::ZeroDimension)?;
        Self::new(spectrum, d, 1.0, symmetry, ErrorCriterion::Absolute)
    }

    pub fn with_symmetry(
        spectrum: Spectrum,
        d: usize,
        symmetry: SymmetrySpec,
    ) -> Result<Self, ProblemError> {
        Self::new(spectrum, d, 1.0, symmetry, ErrorCriterion::Absolute)
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn scaling(&self) -> f64 {
        self.scaling
    }

    pub fn symmetry(&self) -> &SymmetrySpec {
        &self.symmetry
    }

    pub fn criterion(&self) -> ErrorCriterion {
        self.criterion
    }

    pub fn with_criterion(mut self, criterion: ErrorCriterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn with_scaling(mut self, scaling: f64) -> Result<Self, ProblemError> {
        if !(scaling.is_finite() && scaling > 0.0) {
            return Err(ProblemError::InvalidScaling(scaling));
        }
        self.scaling = scaling;
        Ok(self)
    }
}
