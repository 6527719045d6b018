//! Tractability classification of problem families.
//!
//! A family is a spectrum together with how the problem changes with the
//! dimension: a scaling sequence `s_d`, or a growth law for the
//! (anti)symmetric coordinate group. The classifier is a rule engine over
//! declared analytic facts - `λ_1`, `λ_2`, `ℓ_τ` membership, the decay class
//! of `λ_n` against powers of `ln n`, `limsup s_d^{1/d}`, the asymptotic
//! regime of the initial error, and the growth class of the constrained
//! group. It never infers asymptotics from finite samples; where the known
//! conditions leave a gap the honest answer is [`TractClass::Undecidable`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::ln_factorial;
use crate::spectrum::Spectrum;
use crate::symmetry::GroupKind;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TractabilityError {
    #[error("lambda_2 = 0: the family is trivial (at most one informative functional)")]
    TrivialSpectrum,
    #[error("the sequence is not in l_tau for tau = {tau}")]
    Divergent { tau: f64 },
    #[error("growth law {got} does not match the {expected} classifier")]
    WrongGrowthKind { got: String, expected: &'static str },
}

/// Tractability classes, strongest knowledge first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TractClass {
    /// `n(ε,d) ≤ C ε^(-p)` uniformly in `d`.
    Spt,
    /// `n(ε,d) ≤ C ε^(-p) d^q`.
    Pt,
    /// `ln n(ε,d) / (ε^(-1) + d) → 0`; polynomial tractability fails or is
    /// unknown (see the rule string).
    Wt,
    /// Polynomial tractability fails; the rule string records whether weak
    /// tractability fails too.
    PolynomiallyIntractable,
    /// `n(ε,d)` grows exponentially in `d` at some fixed `ε`.
    Curse,
    /// The known conditions do not decide the family.
    Undecidable,
}

/// A classification result: the strongest class the rules establish, the
/// rule that fired, the weaker classes it implies, and the strong-
/// tractability exponent when one is defined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub class: TractClass,
    pub rule: String,
    pub implied: Vec<TractClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spt_exponent: Option<f64>,
}

impl Verdict {
    fn new(class: TractClass, rule: impl Into<String>) -> Self {
        let implied = match class {
            TractClass::Spt => vec![TractClass::Pt, TractClass::Wt],
            TractClass::Pt => vec![TractClass::Wt],
            TractClass::Curse => vec![TractClass::PolynomiallyIntractable],
            _ => vec![],
        };
        Verdict { class, rule: rule.into(), implied, spt_exponent: None }
    }

    fn with_exponent(mut self, p: Option<f64>) -> Self {
        self.spt_exponent = p;
        self
    }
}

/// Dimension-dependence of the scaling sequence `s_d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum ScalingFamily {
    /// `s_d = s`.
    Constant { s: f64 },
    /// `s_d = r^d`.
    GeometricScale { r: f64 },
    /// `s_d` chosen so the initial error is exactly `c·d^alpha`.
    PolynomialInit { alpha: f64, c: f64 },
    /// Initial error tends to zero subexponentially; the flag declares
    /// whether the decay is `o(1/d)`. (Exponentially decaying initial errors
    /// are expressed through [`ScalingFamily::GeometricScale`].)
    DecayInit { o_inv_d: bool },
}

/// Asymptotic regime of the initial error `ε_d^init`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum InitRegime {
    /// `ln ε_d^init ∉ o(d)`.
    ExponentialGrowth,
    /// `ε_d^init ∈ Θ(d^alpha)`, `alpha ≥ 0`.
    PolyTheta(f64),
    /// `ε_d^init → 0`.
    ToZero { o_inv_d: bool },
}

impl ScalingFamily {
    /// `limsup_d s_d^{1/d}`.
    fn limsup_root(&self, lambda1: f64) -> f64 {
        match *self {
            ScalingFamily::Constant { .. } => 1.0,
            ScalingFamily::GeometricScale { r } => r,
            ScalingFamily::PolynomialInit { .. } | ScalingFamily::DecayInit { .. } => {
                1.0 / lambda1
            }
        }
    }

    /// Concrete value of `s_d`.
    pub fn scaling_at(&self, lambda1: f64, d: usize) -> f64 {
        match *self {
            ScalingFamily::Constant { s } => s,
            ScalingFamily::GeometricScale { r } => r.powi(d as i32),
            ScalingFamily::PolynomialInit { alpha, c } => {
                c * c * (d as f64).powf(2.0 * alpha) / lambda1.powi(d as i32)
            }
            // representative instance with ε_d^init = d^{-2} or 1/ln(d+1)
            ScalingFamily::DecayInit { o_inv_d } => {
                let init = if o_inv_d {
                    (d as f64).powi(-2)
                } else {
                    1.0 / ((d + 1) as f64).ln()
                };
                init * init / lambda1.powi(d as i32)
            }
        }
    }

    fn init_regime(&self, lambda1: f64) -> InitRegime {
        match *self {
            ScalingFamily::Constant { .. } => {
                if lambda1 > 1.0 {
                    InitRegime::ExponentialGrowth
                } else if lambda1 == 1.0 {
                    InitRegime::PolyTheta(0.0)
                } else {
                    InitRegime::ToZero { o_inv_d: true }
                }
            }
            ScalingFamily::GeometricScale { r } => {
                let growth = r * lambda1;
                if growth > 1.0 {
                    InitRegime::ExponentialGrowth
                } else if growth == 1.0 {
                    InitRegime::PolyTheta(0.0)
                } else {
                    InitRegime::ToZero { o_inv_d: true }
                }
            }
            ScalingFamily::PolynomialInit { alpha, .. } => InitRegime::PolyTheta(alpha),
            ScalingFamily::DecayInit { o_inv_d } => InitRegime::ToZero { o_inv_d },
        }
    }
}

/// Growth law of the (anti)symmetry structure across dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum SymmetryGrowth {
    /// One symmetric group covering all `d` coordinates.
    FullSym,
    /// One antisymmetric group covering all `d` coordinates.
    FullAntisym,
    /// A fixed number `b` of free coordinates; the rest form the group.
    FixedFreeCoords { kind: GroupKind, b: u64 },
    /// `b_d = ⌈c·ln d⌉` free coordinates.
    LogFreeCoords { kind: GroupKind, c: f64 },
    /// `a_d = ⌈fraction·d⌉` antisymmetric coordinates, `fraction ∈ (0,1]`.
    LinearAntisym { fraction: f64 },
    /// `a_d = ⌈d / (gamma·ln d)⌉` antisymmetric coordinates.
    SublinearAntisym { gamma: f64 },
}

/// Growth class of the free-coordinate count `b_d = d - a_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FreeClass {
    Bounded,
    Logarithmic,
    Linear,
}

impl SymmetryGrowth {
    pub fn kind(&self) -> GroupKind {
        match *self {
            SymmetryGrowth::FullSym => GroupKind::Sym,
            SymmetryGrowth::FullAntisym
            | SymmetryGrowth::LinearAntisym { .. }
            | SymmetryGrowth::SublinearAntisym { .. } => GroupKind::Antisym,
            SymmetryGrowth::FixedFreeCoords { kind, .. }
            | SymmetryGrowth::LogFreeCoords { kind, .. } => kind,
        }
    }

    /// Size of the constrained group in dimension `d`.
    pub fn group_size(&self, d: u64) -> u64 {
        match *self {
            SymmetryGrowth::FullSym | SymmetryGrowth::FullAntisym => d,
            SymmetryGrowth::FixedFreeCoords { b, .. } => d.saturating_sub(b).max(1),
            SymmetryGrowth::LogFreeCoords { c, .. } => {
                let b = (c * (d as f64).ln()).ceil() as u64;
                d.saturating_sub(b).max(1)
            }
            SymmetryGrowth::LinearAntisym { fraction } => {
                ((fraction * d as f64).ceil() as u64).clamp(1, d)
            }
            SymmetryGrowth::SublinearAntisym { gamma } => {
                if d < 2 {
                    1
                } else {
                    ((d as f64 / (gamma * (d as f64).ln())).ceil() as u64).clamp(1, d)
                }
            }
        }
    }

    fn free_class(&self) -> FreeClass {
        match *self {
            SymmetryGrowth::FullSym | SymmetryGrowth::FullAntisym => FreeClass::Bounded,
            SymmetryGrowth::FixedFreeCoords { .. } => FreeClass::Bounded,
            SymmetryGrowth::LogFreeCoords { .. } => FreeClass::Logarithmic,
            SymmetryGrowth::LinearAntisym { fraction } => {
                if fraction >= 1.0 {
                    FreeClass::Bounded
                } else {
                    FreeClass::Linear
                }
            }
            SymmetryGrowth::SublinearAntisym { .. } => FreeClass::Linear,
        }
    }

    /// Whether the group size grows linearly with `d` (`a_d/d` bounded away
    /// from zero).
    fn group_is_linear(&self) -> bool {
        !matches!(self, SymmetryGrowth::SublinearAntisym { .. })
    }
}

use crate::problem::ErrorCriterion;

fn check_nontrivial(spectrum: &Spectrum) -> Result<(), TractabilityError> {
    if spectrum.lambda2() == 0.0 {
        Err(TractabilityError::TrivialSpectrum)
    } else {
        Ok(())
    }
}

/// Classification of the plain (unscaled, unconstrained) tensor-product
/// family, by the eigenvalue case split on `λ_1` against 1.
pub fn classify_unscaled(
    spectrum: &Spectrum,
    criterion: ErrorCriterion,
) -> Result<Verdict, TractabilityError> {
    check_nontrivial(spectrum)?;
    let l1 = spectrum.lambda1();
    let l2 = spectrum.lambda2();
    Ok(match criterion {
        ErrorCriterion::Absolute => {
            if l1 > 1.0 {
                Verdict::new(
                    TractClass::Curse,
                    "absolute: lambda_1 > 1, so a binomially large set of product eigenvalues stays above any fixed threshold",
                )
            } else if l1 == 1.0 {
                if l2 == 1.0 {
                    Verdict::new(
                        TractClass::Curse,
                        "absolute: lambda_1 = lambda_2 = 1, so all 2^d binary index vectors keep full weight",
                    )
                } else if spectrum.decays_faster_than_log_power(2.0) {
                    Verdict::new(
                        TractClass::Wt,
                        "absolute: lambda_1 = 1 forces polynomial intractability, but lambda_2 < 1 with lambda_n in o(ln^-2 n) gives weak tractability",
                    )
                } else {
                    Verdict::new(
                        TractClass::PolynomiallyIntractable,
                        "absolute: lambda_1 = 1 and lambda_n decays no faster than ln^-2 n: not even weakly tractable",
                    )
                }
            } else if spectrum.summable_for_some_tau() {
                Verdict::new(
                    TractClass::Spt,
                    "absolute: lambda_1 < 1 and lambda in some l_tau; polynomial and strong polynomial tractability coincide",
                )
                .with_exponent(spectrum.spt_exponent(1e-9))
            } else if spectrum.decays_faster_than_log_power(2.0) {
                Verdict::new(
                    TractClass::Wt,
                    "absolute: lambda_1 < 1 but lambda in no l_tau: weakly tractable only",
                )
            } else {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "absolute: lambda_1 < 1, lambda in no l_tau and lambda_n decays no faster than ln^-2 n: not weakly tractable",
                )
            }
        }
        ErrorCriterion::Normalized => {
            if l1 == l2 {
                Verdict::new(
                    TractClass::Curse,
                    "normalized: lambda_1 = lambda_2, so the ratio sequence has two leading ones",
                )
            } else if spectrum.decays_faster_than_log_power(2.0) {
                Verdict::new(
                    TractClass::Wt,
                    "normalized: polynomially intractable for every spectrum, weakly tractable since lambda_1 > lambda_2 and lambda_n in o(ln^-2 n)",
                )
            } else {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "normalized: lambda_n decays no faster than ln^-2 n: not weakly tractable",
                )
            }
        }
    })
}

/// Classification of the scaled family `s_d · λ`.
pub fn classify_scaled(
    spectrum: &Spectrum,
    scaling: &ScalingFamily,
    criterion: ErrorCriterion,
) -> Result<Verdict, TractabilityError> {
    check_nontrivial(spectrum)?;
    if criterion == ErrorCriterion::Normalized {
        let mut verdict = classify_unscaled(spectrum, ErrorCriterion::Normalized)?;
        verdict.rule = format!("scaling has no influence under the normalized criterion; {}", verdict.rule);
        return Ok(verdict);
    }
    let l1 = spectrum.lambda1();
    let l2 = spectrum.lambda2();

    // polynomial tractability is equivalent to strong polynomial
    // tractability and to: lambda summable and limsup s_d^{1/d} < 1/lambda_1
    if spectrum.summable_for_some_tau() && scaling.limsup_root(l1) < 1.0 / l1 {
        let exponent = match *scaling {
            ScalingFamily::Constant { .. } => spectrum.spt_exponent(1e-9),
            ScalingFamily::GeometricScale { r } => spectrum.spt_exponent_scaled(r, 1e-9),
            _ => None,
        };
        return Ok(Verdict::new(
            TractClass::Spt,
            "absolute, scaled: lambda in some l_tau and limsup s_d^{1/d} < 1/lambda_1",
        )
        .with_exponent(exponent));
    }

    Ok(match scaling.init_regime(l1) {
        InitRegime::ExponentialGrowth => Verdict::new(
            TractClass::Curse,
            "absolute, scaled: the initial error grows exponentially in d",
        ),
        InitRegime::PolyTheta(alpha) => {
            if l1 == l2 {
                Verdict::new(
                    TractClass::Curse,
                    "absolute, scaled: initial error in Theta(d^alpha) with lambda_1 = lambda_2",
                )
            } else if spectrum.decays_faster_than_log_power(2.0 * (1.0 + alpha)) {
                Verdict::new(
                    TractClass::Wt,
                    format!(
                        "absolute, scaled: initial error in Theta(d^{alpha}), lambda_1 > lambda_2 and lambda_n in o(ln^-{} n): weakly tractable, not polynomially tractable",
                        2.0 * (1.0 + alpha)
                    ),
                )
            } else {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    format!(
                        "absolute, scaled: initial error in Theta(d^{alpha}) and lambda_n decays no faster than ln^-{} n: not weakly tractable",
                        2.0 * (1.0 + alpha)
                    ),
                )
            }
        }
        InitRegime::ToZero { o_inv_d } => {
            let decay_ok = spectrum.decays_faster_than_log_power(2.0);
            if l1 == l2 {
                if o_inv_d && decay_ok {
                    Verdict::new(
                        TractClass::Wt,
                        "absolute, scaled: initial error in o(1/d) compensates lambda_1 = lambda_2; weakly tractable, not polynomially tractable",
                    )
                } else {
                    Verdict::new(
                        TractClass::PolynomiallyIntractable,
                        "absolute, scaled: vanishing initial error with lambda_1 = lambda_2 needs decay o(1/d) and lambda_n in o(ln^-2 n); not weakly tractable (no curse)",
                    )
                }
            } else if decay_ok {
                Verdict::new(
                    TractClass::Wt,
                    "absolute, scaled: vanishing initial error, lambda_1 > lambda_2, lambda_n in o(ln^-2 n): weakly tractable, not polynomially tractable",
                )
            } else {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "absolute, scaled: lambda_n decays no faster than ln^-2 n: not weakly tractable (no curse)",
                )
            }
        }
    })
}

/// Classification of the symmetric family (growth law of symmetric kind).
pub fn classify_symmetric(
    spectrum: &Spectrum,
    growth: &SymmetryGrowth,
    criterion: ErrorCriterion,
) -> Result<Verdict, TractabilityError> {
    if growth.kind() != GroupKind::Sym {
        return Err(TractabilityError::WrongGrowthKind {
            got: format!("{growth:?}"),
            expected: "symmetric",
        });
    }
    check_nontrivial(spectrum)?;
    let l1 = spectrum.lambda1();
    let l2 = spectrum.lambda2();
    let free = growth.free_class();
    let summable = spectrum.summable_for_some_tau();

    Ok(match criterion {
        ErrorCriterion::Absolute => {
            if !summable {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "symmetric, absolute: lambda in no l_tau, which polynomial tractability requires",
                )
            } else if l1 < 1.0 {
                Verdict::new(
                    TractClass::Spt,
                    "symmetric, absolute: lambda_1 < 1 and lambda in some l_tau",
                )
            } else if l1 == 1.0 {
                if l2 < 1.0 && free == FreeClass::Bounded {
                    Verdict::new(
                        TractClass::Spt,
                        "symmetric, absolute: 1 = lambda_1 > lambda_2 and d - #I_d in O(1)",
                    )
                } else if free != FreeClass::Linear {
                    Verdict::new(
                        TractClass::Pt,
                        "symmetric, absolute: lambda_1 = 1 and d - #I_d in O(ln d); strong polynomial tractability fails",
                    )
                } else {
                    Verdict::new(
                        TractClass::Undecidable,
                        "symmetric, absolute: linearly many free coordinates leave the known conditions silent",
                    )
                }
            } else {
                Verdict::new(
                    TractClass::Undecidable,
                    "symmetric, absolute: no sufficient conditions for polynomial tractability are known when lambda_1 > 1",
                )
            }
        }
        ErrorCriterion::Normalized => {
            if !summable {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "symmetric, normalized: lambda in no l_tau, which polynomial tractability requires",
                )
            } else if l1 > l2 && free == FreeClass::Bounded {
                Verdict::new(
                    TractClass::Spt,
                    "symmetric, normalized: lambda_1 > lambda_2 and d - #I_d in O(1)",
                )
            } else if free != FreeClass::Linear {
                Verdict::new(
                    TractClass::Pt,
                    "symmetric, normalized: lambda in some l_tau and d - #I_d in O(ln d)",
                )
            } else {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "symmetric, normalized: d - #I_d grows linearly, beyond the O(ln d) bound polynomial tractability requires",
                )
            }
        }
    })
}

/// Grid of 16 doubling `τ` values starting just above the summability
/// threshold, used to search the sufficient antisymmetric condition.
fn tau_grid(spectrum: &Spectrum) -> Vec<f64> {
    let threshold = spectrum.ell_tau_threshold();
    let start = if threshold > 0.0 { threshold * 1.0001 } else { 1e-3 };
    (0..16).map(|k| start * 2f64.powi(k)).collect()
}

/// Classification of the antisymmetric family (growth law of antisymmetric
/// kind).
pub fn classify_antisymmetric(
    spectrum: &Spectrum,
    growth: &SymmetryGrowth,
    criterion: ErrorCriterion,
) -> Result<Verdict, TractabilityError> {
    if growth.kind() != GroupKind::Antisym {
        return Err(TractabilityError::WrongGrowthKind {
            got: format!("{growth:?}"),
            expected: "antisymmetric",
        });
    }
    check_nontrivial(spectrum)?;
    let l1 = spectrum.lambda1();
    let summable = spectrum.summable_for_some_tau();

    Ok(match criterion {
        ErrorCriterion::Absolute => {
            if !summable {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "antisymmetric, absolute: lambda in no l_tau, which polynomial tractability requires",
                )
            } else if l1 < 1.0 {
                Verdict::new(
                    TractClass::Spt,
                    "antisymmetric, absolute: lambda_1 < 1 and lambda in some l_tau, independent of the group growth",
                )
            } else if growth.group_is_linear() {
                Verdict::new(
                    TractClass::Spt,
                    "antisymmetric, absolute: lambda in some l_tau and the group grows linearly with d",
                )
            } else {
                // sublinear group: the factorial gain ln(a_d!)/d tends to
                // 1/gamma, so the sufficient condition holds iff
                // gamma·ln(Σ λ^τ) < 1 for some admissible τ
                let SymmetryGrowth::SublinearAntisym { gamma } = *growth else {
                    unreachable!("every other antisymmetric growth law is linear")
                };
                let satisfied = tau_grid(spectrum).into_iter().any(|tau| {
                    spectrum
                        .power_sum(tau, 1e-12)
                        .map(|sum| {
                            let ln_sum = sum.ln();
                            ln_sum <= 0.0 || gamma < 1.0 / ln_sum
                        })
                        .unwrap_or(false)
                });
                if satisfied {
                    Verdict::new(
                        TractClass::Spt,
                        format!(
                            "antisymmetric, absolute: group size d/(gamma ln d) with gamma = {gamma} below 1/ln(Sum lambda^tau) on the tau grid"
                        ),
                    )
                } else {
                    Verdict::new(
                        TractClass::Undecidable,
                        format!(
                            "antisymmetric, absolute: gamma = {gamma} exceeds 1/ln(Sum lambda^tau) on the whole tau grid; the sufficient condition fails and no matching necessary condition applies"
                        ),
                    )
                }
            }
        }
        ErrorCriterion::Normalized => {
            if !summable {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "antisymmetric, normalized: lambda in no l_tau, which polynomial tractability requires",
                )
            } else if growth.free_class() == FreeClass::Linear {
                Verdict::new(
                    TractClass::PolynomiallyIntractable,
                    "antisymmetric, normalized: d - #I_d grows linearly, beyond the O(ln d) bound polynomial tractability requires",
                )
            } else {
                Verdict::new(
                    TractClass::Undecidable,
                    "antisymmetric, normalized: the necessary conditions hold but no sufficient conditions are known",
                )
            }
        }
    })
}

/// Margin of the sufficient antisymmetric condition at dimension `d`:
/// `ln(a_d!)/d + ln(C·d^q)/d - ln(Σ_m λ_m^τ)`. Nonnegative means the
/// condition holds at this `d`.
pub fn suf_antisym_margin(
    spectrum: &Spectrum,
    tau: f64,
    growth: &SymmetryGrowth,
    d: u64,
    c: f64,
    q: f64,
) -> Result<f64, TractabilityError> {
    assert!(c >= 1.0 && q >= 0.0 && d >= 1);
    let sum = spectrum
        .power_sum(tau, 1e-12)
        .map_err(|_| TractabilityError::Divergent { tau })?;
    let a_d = growth.group_size(d);
    let df = d as f64;
    Ok(ln_factorial(a_d) / df + (c.ln() + q * df.ln()) / df - sum.ln())
}
