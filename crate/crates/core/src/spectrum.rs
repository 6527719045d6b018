//! Univariate squared-singular-value sequences and their `ℓ_τ` analytics.
//!
//! A [`Spectrum`] is a nonincreasing, nonnegative sequence `λ_1 ≥ λ_2 ≥ …`
//! given either as an explicit finite list (implicitly extended by zeros) or
//! as one of four parametric decay families. Everything downstream - product
//! eigenvalues, minimal errors, tractability verdicts - is driven by these
//! sequences, so the module also provides the summability machinery:
//! membership in `ℓ_τ`, the norm `(Σ λ_m^τ)^(1/τ)` with analytic tail bounds,
//! and the strong-tractability exponent `p* = inf{2τ : Σ λ_m^τ ≤ 1}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{zeta_tail, CompensatedSum};

const PI_SQ: f64 = std::f64::consts::PI * std::f64::consts::PI;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("finite spectrum entries must be finite and nonnegative (got {0})")]
    InvalidEntry(f64),
    #[error("parameter {name} must satisfy {requirement} (got {value})")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("the sequence is not in l_tau for tau = {tau}")]
    Divergent { tau: f64 },
}

/// A nonincreasing, nonnegative univariate eigenvalue sequence.
///
/// Construct through the checked constructors ([`Spectrum::finite`],
/// [`Spectrum::power_law`], …); deserialization routes through the same
/// validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumRepr", into = "SpectrumRepr")]
pub enum Spectrum {
    /// Explicit list, sorted nonincreasing, zero for indices past the end.
    Finite { values: Vec<f64>, reordered: bool },
    /// `λ_m = c · m^(-β)` with `c, β > 0`.
    PowerLaw { c: f64, beta: f64 },
    /// `λ_m = c · q^(m-1)` with `c > 0`, `0 < q < 1`.
    Geometric { c: f64, q: f64 },
    /// `λ_1 = lambda1`, `λ_m = min(lambda1, 1/ln m)` for `m ≥ 2`.
    ///
    /// The clamp keeps the sequence nonincreasing; without it `1/ln 2 > 1`
    /// would sit above any unit leading value.
    LogDecay { lambda1: f64 },
    /// `λ_m = γ / (γ + π²(m-1)²)`, the L₂-approximation eigenvalues of the
    /// weighted Sobolev space with weight `γ > 0`; `λ_1 = 1` exactly.
    Sobolev { gamma: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
enum SpectrumRepr {
    Finite { values: Vec<f64> },
    PowerLaw { c: f64, beta: f64 },
    Geometric { c: f64, q: f64 },
    LogDecay { lambda1: f64 },
    Sobolev { gamma: f64 },
}

impl TryFrom<SpectrumRepr> for Spectrum {
    type Error = SpectrumError;

    fn try_from(repr: SpectrumRepr) -> Result<Self, Self::Error> {
        match repr {
            SpectrumRepr::Finite { values } => Ok(Spectrum::finite(values)?),
            SpectrumRepr::PowerLaw { c, beta } => Spectrum::power_law(c, beta),
            SpectrumRepr::Geometric { c, q } => Spectrum::geometric(c, q),
            SpectrumRepr::LogDecay { lambda1 } => Spectrum::log_decay(lambda1),
            SpectrumRepr::Sobolev { gamma } => Spectrum::sobolev(gamma),
        }
    }
}

impl From<Spectrum> for SpectrumRepr {
    fn from(s: Spectrum) -> Self {
        match s {
            Spectrum::Finite { values, .. } => SpectrumRepr::Finite { values },
            Spectrum::PowerLaw { c, beta } => SpectrumRepr::PowerLaw { c, beta },
            Spectrum::Geometric { c, q } => SpectrumRepr::Geometric { c, q },
            Spectrum::LogDecay { lambda1 } => SpectrumRepr::LogDecay { lambda1 },
            Spectrum::Sobolev { gamma } => SpectrumRepr::Sobolev { gamma },
        }
    }
}

fn require(cond: bool, name: &'static str, requirement: &'static str, value: f64) -> Result<(), SpectrumError> {
    if cond {
        Ok(())
    } else {
        Err(SpectrumError::InvalidParameter { name, requirement, value })
    }
}

impl Spectrum {
    /// Explicit finite list. Unsorted input is reordered descending; the
    /// second component of the result records whether that happened.
    pub fn finite(values: Vec<f64>) -> Result<Self, SpectrumError> {
        for &v in &values {
            if !v.is_finite() || v < 0.0 {
                return Err(SpectrumError::InvalidEntry(v));
            }
        }
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).expect("entries are finite"));
        let reordered = sorted != values;
        Ok(Spectrum::Finite { values: sorted, reordered })
    }

    pub fn power_law(c: f64, beta: f64) -> Result<Self, SpectrumError> {
        require(c.is_finite() && c > 0.0, "c", "> 0", c)?;
        require(beta.is_finite() && beta > 0.0, "beta", "> 0", beta)?;
        Ok(Spectrum::PowerLaw { c, beta })
    }

    pub fn geometric(c: f64, q: f64) -> Result<Self, SpectrumError> {
        require(c.is_finite() && c > 0.0, "c", "> 0", c)?;
        require(q.is_finite() && q > 0.0 && q < 1.0, "q", "in (0,1)", q)?;
        Ok(Spectrum::Geometric { c, q })
    }

    pub fn log_decay(lambda1: f64) -> Result<Self, SpectrumError> {
        require(lambda1.is_finite() && lambda1 > 0.0, "lambda1", "> 0", lambda1)?;
        Ok(Spectrum::LogDecay { lambda1 })
    }

    pub fn sobolev(gamma: f64) -> Result<Self, SpectrumError> {
        require(gamma.is_finite() && gamma > 0.0, "gamma", "> 0", gamma)?;
        Ok(Spectrum::Sobolev { gamma })
    }

    /// `λ_m` for `m ≥ 1`. Total on every valid spectrum.
    pub fn eigenvalue(&self, m: u32) -> f64 {
        assert!(m >= 1, "eigenvalue index is 1-based");
        match self {
            Spectrum::Finite { values, .. } => {
                values.get(m as usize - 1).copied().unwrap_or(0.0)
            }
            Spectrum::PowerLaw { c, beta } => c * (m as f64).powf(-beta),
            Spectrum::Geometric { c, q } => c * q.powi(m as i32 - 1),
            Spectrum::LogDecay { lambda1 } => {
                if m == 1 {
                    *lambda1
                } else {
                    lambda1.min(1.0 / (m as f64).ln())
                }
            }
            Spectrum::Sobolev { gamma } => {
                let n = m as f64 - 1.0;
                gamma / (gamma + PI_SQ * n * n)
            }
        }
    }

    pub fn lambda1(&self) -> f64 {
        self.eigenvalue(1)
    }

    pub fn lambda2(&self) -> f64 {
        self.eigenvalue(2)
    }

    /// Whether the sequence belongs to `ℓ_τ`, decided analytically per family.
    pub fn ell_tau_member(&self, tau: f64) -> bool {
        assert!(tau > 0.0);
        match self {
            Spectrum::Finite { .. } => true,
            Spectrum::PowerLaw { beta, .. } => tau * beta > 1.0,
            Spectrum::Geometric { .. } => true,
            // 1/ln^τ(m) is eventually above m^(-ε) for every ε > 0.
            Spectrum::LogDecay { .. } => false,
            Spectrum::Sobolev { .. } => tau > 0.5,
        }
    }

    /// `true` iff `λ ∈ ℓ_τ` for some `τ > 0`.
    pub fn summable_for_some_tau(&self) -> bool {
        !matches!(self, Spectrum::LogDecay { .. })
    }

    /// The infimum of `{τ : λ ∈ ℓ_τ}`; membership holds strictly above it.
    /// Infinite for the log-decay family.
    pub fn ell_tau_threshold(&self) -> f64 {
        match self {
            Spectrum::Finite { .. } | Spectrum::Geometric { .. } => 0.0,
            Spectrum::PowerLaw { beta, .. } => 1.0 / beta,
            Spectrum::LogDecay { .. } => f64::INFINITY,
            Spectrum::Sobolev { .. } => 0.5,
        }
    }

    /// Whether `λ_n ∈ o(ln^(-power) n)` as `n → ∞`, tabulated per family.
    ///
    /// Polynomial and geometric decay beat every power of the logarithm; the
    /// log-decay family (`λ_n ≍ 1/ln n`) only beats powers below one.
    pub fn decays_faster_than_log_power(&self, power: f64) -> bool {
        match self {
            Spectrum::Finite { .. }
            | Spectrum::PowerLaw { .. }
            | Spectrum::Geometric { .. }
            | Spectrum::Sobolev { .. } => true,
            Spectrum::LogDecay { .. } => power < 1.0,
        }
    }

    /// `Σ_m λ_m^τ` with absolute error at most `tol` (floored near machine
    /// precision), or [`SpectrumError::Divergent`] when `λ ∉ ℓ_τ`.
    pub fn power_sum(&self, tau: f64, tol: f64) -> Result<f64, SpectrumError> {
        assert!(tau > 0.0 && tol > 0.0);
        if !self.ell_tau_member(tau) {
            return Err(SpectrumError::Divergent { tau });
        }
        Ok(match self {
            Spectrum::Finite { values, .. } => {
                let mut acc = CompensatedSum::new();
                for &v in values {
                    acc.add(v.powf(tau));
                }
                acc.value()
            }
            Spectrum::PowerLaw { c, beta } => {
                let s = tau * beta;
                let scale = c.powf(tau);
                const M: u64 = 256;
                let mut acc = CompensatedSum::new();
                for m in 1..=M {
                    acc.add((m as f64).powf(-s));
                }
                scale * (acc.value() + zeta_tail(s, M))
            }
            Spectrum::Geometric { c, q } => c.powf(tau) / (1.0 - q.powf(tau)),
            Spectrum::LogDecay { .. } => unreachable!("never in any l_tau"),
            Spectrum::Sobolev { gamma } => {
                // λ_m^τ = (γ/π²)^τ n^(-2τ) (1 + γ/(π² n²))^(-τ) with n = m-1;
                // sum explicitly until the correction factor is close to 1,
                // then expand it binomially against zeta tails.
                let ratio = gamma / PI_SQ;
                let m_cut = (64.0_f64).max(4.0 * ratio.sqrt()).ceil() as u64;
                let mut acc = CompensatedSum::new();
                acc.add(1.0);
                for n in 1..=m_cut {
                    let nf = n as f64;
                    acc.add((gamma / (gamma + PI_SQ * nf * nf)).powf(tau));
                }
                let mut tail = CompensatedSum::new();
                let mut coeff = 1.0; // binomial(-τ, j) · ratio^j, built incrementally
                for j in 0u32..24 {
                    let jf = j as f64;
                    if j > 0 {
                        coeff *= -(tau + jf - 1.0) / jf * ratio;
                    }
                    let term = coeff * zeta_tail(2.0 * tau + 2.0 * jf, m_cut);
                    tail.add(term);
                    if term.abs() < 1e-3 * tol && j > 2 {
                        break;
                    }
                }
                acc.value() + ratio.powf(tau) * tail.value()
            }
        })
    }

    /// `‖λ | ℓ_τ‖ = (Σ_m λ_m^τ)^(1/τ)` to absolute tolerance `tol` on the
    /// power sum, or [`SpectrumError::Divergent`].
    pub fn ell_tau_norm(&self, tau: f64, tol: f64) -> Result<f64, SpectrumError> {
        Ok(self.power_sum(tau, tol)?.powf(1.0 / tau))
    }

    /// Trace class means `λ ∈ ℓ_1`.
    pub fn is_trace_class(&self) -> bool {
        self.ell_tau_member(1.0)
    }

    /// The strong-tractability exponent `p* = inf{2τ : Σ_m λ_m^τ ≤ 1}`, to
    /// absolute tolerance `tol` on `τ`. `None` when no `τ` qualifies, in
    /// particular whenever `λ_1 ≥ 1`.
    pub fn spt_exponent(&self, tol: f64) -> Option<f64> {
        self.spt_exponent_scaled(1.0, tol)
    }

    /// Same as [`Spectrum::spt_exponent`] for the pointwise-scaled sequence
    /// `(r·λ_m)`, i.e. `inf{2τ : r^τ Σ_m λ_m^τ ≤ 1}`.
    pub fn spt_exponent_scaled(&self, r: f64, tol: f64) -> Option<f64> {
        assert!(r > 0.0 && tol > 0.0);
        if r * self.lambda1() >= 1.0 {
            return None;
        }
        let scaled_sum = |tau: f64| -> f64 {
            match self.power_sum(tau, 1e-14) {
                Ok(s) => r.powf(tau) * s,
                Err(_) => f64::INFINITY,
            }
        };
        let mut lo = 2.0_f64.powi(-8);
        let mut hi = 64.0;
        while scaled_sum(hi) > 1.0 {
            hi *= 2.0;
            if hi > 2.0_f64.powi(20) {
                return None;
            }
        }
        if scaled_sum(lo) <= 1.0 {
            // the infimum sits at or below the bracket floor
            return Some(2.0 * lo);
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if scaled_sum(mid) <= 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(values: &[f64]) -> Spectrum {
        Spectrum::finite(values.to_vec()).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(Spectrum::sobolev(1.0).unwrap().eigenvalue(1), 1.0);
        assert_eq!(finite(&[1.0, 1.0]).eigenvalue(3), 0.0);
        assert_eq!(Spectrum::power_law(1.0, 2.0).unwrap().eigenvalue(2), 0.25);
    }

    #[test]
    fn monotone_over_horizon() {
        let specs = [
            finite(&[0.9, 0.9, 0.4, 0.1]),
            Spectrum::power_law(2.0, 1.5).unwrap(),
            Spectrum::geometric(1.0, 0.7).unwrap(),
            Spectrum::log_decay(1.0).unwrap(),
            Spectrum::log_decay(0.25).unwrap(),
            Spectrum::sobolev(10.0).unwrap(),
        ];
        for spec in &specs {
            for m in 1..10_000u32 {
                assert!(
                    spec.eigenvalue(m) >= spec.eigenvalue(m + 1),
                    "{spec:?} not monotone at m = {m}"
                );
            }
        }
    }

    #[test]
    fn finite_constructor_sorts_and_flags() {
        match Spectrum::finite(vec![0.5, 1.0]).unwrap() {
            Spectrum::Finite { values, reordered } => {
                assert_eq!(values, vec![1.0, 0.5]);
                assert!(reordered);
            }
            _ => unreachable!(),
        }
        match finite(&[1.0, 0.5]) {
            Spectrum::Finite { reordered, .. } => assert!(!reordered),
            _ => unreachable!(),
        }
        assert!(Spectrum::finite(vec![1.0, -0.5]).is_err());
    }

    #[test]
    fn power_sum_power_law_hits_zeta_two() {
        let spec = Spectrum::power_law(1.0, 2.0).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        let norm = spec.ell_tau_norm(1.0, 1e-10).unwrap();
        assert!((norm - exact).abs() < 1e-10, "norm = {norm}");
    }

    #[test]
    fn power_sum_finite_is_exact() {
        let spec = finite(&[1.0, 1.0]);
        assert_eq!(spec.ell_tau_norm(2.0, 1e-12).unwrap(), 2.0_f64.sqrt());
    }

    #[test]
    fn power_sum_divergence_cases() {
        let spec = Spectrum::power_law(1.0, 2.0).unwrap();
        assert!(matches!(
            spec.ell_tau_norm(0.5, 1e-10),
            Err(SpectrumError::Divergent { .. })
        ));
        assert!(Spectrum::log_decay(1.0).unwrap().power_sum(10.0, 1e-6).is_err());
    }

    #[test]
    fn power_sum_sobolev_closed_form_at_tau_one() {
        // Σ_{n≥1} 1/(n² + a²) = (π a coth(π a) - 1)/(2a²) with a = √γ/π gives
        // Σ_m λ_m = 1 + (√γ coth(√γ) - 1)/2.
        for &gamma in &[0.1, 1.0, 10.0, 1000.0] {
            let spec = Spectrum::sobolev(gamma).unwrap();
            let r = gamma.sqrt();
            let exact = 1.0 + (r / r.tanh() - 1.0) / 2.0;
            let got = spec.power_sum(1.0, 1e-12).unwrap();
            assert!((got - exact).abs() < 1e-10, "gamma={gamma} got={got} exact={exact}");
        }
    }

    #[test]
    fn power_sum_sobolev_within_truncation_bracket() {
        // direct partial sum ≤ power sum ≤ partial sum + power-law majorant tail
        for &(gamma, tau) in &[(0.1, 0.8), (10.0, 0.6), (100.0, 2.0)] {
            let spec = Spectrum::sobolev(gamma).unwrap();
            let m_max = 200_000u64;
            let mut direct = CompensatedSum::new();
            direct.add(1.0);
            for n in 1..=m_max {
                let nf = n as f64;
                direct.add((gamma / (gamma + PI_SQ * nf * nf)).powf(tau));
            }
            let lower = direct.value();
            let mf = m_max as f64;
            let majorant =
                (gamma / PI_SQ).powf(tau) * (mf.powf(1.0 - 2.0 * tau) / (2.0 * tau - 1.0) + mf.powf(-2.0 * tau));
            let got = spec.power_sum(tau, 1e-12).unwrap();
            assert!(
                got >= lower - 1e-9 && got <= lower + majorant + 1e-9,
                "gamma={gamma} tau={tau} got={got} bracket=[{lower}, {}]",
                lower + majorant
            );
        }
    }

    #[test]
    fn membership_agrees_with_norm() {
        let specs = [
            finite(&[1.0, 0.5]),
            Spectrum::power_law(1.0, 2.0).unwrap(),
            Spectrum::geometric(0.5, 0.5).unwrap(),
            Spectrum::log_decay(1.0).unwrap(),
            Spectrum::sobolev(2.0).unwrap(),
        ];
        for spec in &specs {
            for &tau in &[0.3, 0.5, 0.75, 1.0, 2.0] {
                assert_eq!(
                    spec.ell_tau_member(tau),
                    spec.ell_tau_norm(tau, 1e-9).is_ok(),
                    "{spec:?} tau={tau}"
                );
            }
        }
    }

    #[test]
    fn spt_exponent_closed_forms() {
        // 2·4^(-τ) = 1 at τ = 1/2, so p* = 1
        let spec = finite(&[0.25, 0.25]);
        let p = spec.spt_exponent(1e-10).unwrap();
        assert!((p - 1.0).abs() < 1e-8, "p = {p}");

        // Σ 2^(-τ m) = 1 at τ = 1, so p* = 2
        let spec = Spectrum::geometric(0.5, 0.5).unwrap();
        let p = spec.spt_exponent(1e-10).unwrap();
        assert!((p - 2.0).abs() < 1e-8, "p = {p}");

        assert_eq!(finite(&[1.0, 0.5]).spt_exponent(1e-10), None);
        assert_eq!(Spectrum::log_decay(0.9).unwrap().spt_exponent(1e-8), None);
    }

    #[test]
    fn spt_exponent_bracketing_property() {
        let tol = 1e-9;
        for spec in [
            finite(&[0.25, 0.25]),
            Spectrum::geometric(0.5, 0.5).unwrap(),
            Spectrum::power_law(0.5, 2.0).unwrap(),
        ] {
            let p = spec.spt_exponent(tol).unwrap();
            let delta = 10.0 * tol;
            assert!(spec.power_sum(p / 2.0 + delta, 1e-13).is_ok_and(|s| s <= 1.0));
            assert!(spec
                .power_sum(p / 2.0 - delta, 1e-13)
                .map_or(true, |s| s > 1.0));
        }
    }

    #[test]
    fn serde_round_trip() {
        let spec = Spectrum::geometric(0.5, 0.25).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"family\":\"geometric\""));
        let back: Spectrum = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);

        let parsed: Spectrum =
            serde_json::from_str(r#"{"family":"finite","params":{"values":[0.5,1.0]}}"#).unwrap();
        match parsed {
            Spectrum::Finite { values, reordered } => {
                assert_eq!(values, vec![1.0, 0.5]);
                assert!(reordered);
            }
            _ => unreachable!(),
        }
    }
}
