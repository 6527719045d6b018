//! Minimal worst-case errors, information complexity, average-case tail
//! errors, and the optimal algorithm's evaluation plan.
//!
//! For a compact problem between Hilbert spaces the `n`-th minimal
//! worst-case error equals the square root of the `(n+1)`-st largest squared
//! singular value, attained by spectral truncation; the information
//! complexity at threshold `ε` is the number of squared singular values
//! above `ε²`. Everything here reduces to the ordered product-eigenvalue
//! machinery of [`crate::enumerate`].

use thiserror::Error;

use crate::enumerate::{count_above_log, enumerate_top, EnumError};
use crate::problem::{ErrorCriterion, ProblemSpec};
use crate::series::{
    complete_homogeneous_from_power_sums, elementary_from_power_sums, CompensatedSum,
};
use crate::symmetry::{multiplicity_factor, GroupKind, MultiIndex};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ComplexityError {
    #[error("count overflow: {0}")]
    Overflow(#[from] EnumError),
    #[error("normalized criterion is undefined: the initial error is zero")]
    DegenerateProblem,
    #[error("threshold must be positive and finite (got {0})")]
    InvalidThreshold(f64),
    #[error("the spectrum is not trace class; the average-case tail diverges")]
    NotTraceClass,
}

/// `ln` of the largest squared singular value over the admissible index set,
/// including the scaling factor. `-inf` when the set carries no positive
/// product.
fn log_top_eigenvalue(problem: &ProblemSpec) -> f64 {
    let min = problem.symmetry().minimal_element();
    let mut log = problem.scaling().ln();
    for &m in &min {
        let v = problem.spectrum().eigenvalue(m);
        if v == 0.0 {
            return f64::NEG_INFINITY;
        }
        log += v.ln();
    }
    log
}

/// Error of the zero algorithm: the square root of the largest squared
/// singular value over the admissible index set, scaling included.
pub fn initial_error(problem: &ProblemSpec) -> f64 {
    (0.5 * log_top_eigenvalue(problem)).exp()
}

/// The `n`-th minimal worst-case error: `√(λ_{d,n+1})` over the admissible
/// set, divided by the initial error under the normalized criterion.
pub fn minimal_error(problem: &ProblemSpec, n: usize) -> Result<f64, ComplexityError> {
    let top = enumerate_top(problem, n + 1);
    let absolute = if top.len() == n + 1 { top[n].value.sqrt() } else { 0.0 };
    match problem.criterion() {
        ErrorCriterion::Absolute => Ok(absolute),
        ErrorCriterion::Normalized => {
            let init = initial_error(problem);
            if init == 0.0 {
                return Err(ComplexityError::DegenerateProblem);
            }
            Ok(absolute / init)
        }
    }
}

/// Information complexity `n(ε, d)`: the number of admissible squared
/// singular values strictly above `ε²` (above `ε² · λ_{d,1}` under the
/// normalized criterion).
///
/// The normalized count is evaluated on the scale-free ratio sequence, so
/// the scaling factor cancels exactly and never enters the arithmetic.
pub fn info_complexity(problem: &ProblemSpec, eps: f64) -> Result<u64, ComplexityError> {
    info_complexity_capped(problem, eps, 1_000_000_000)
}

/// [`info_complexity`] with a caller-chosen visited-node cap for the count.
pub fn info_complexity_capped(
    problem: &ProblemSpec,
    eps: f64,
    node_cap: u64,
) -> Result<u64, ComplexityError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ComplexityError::InvalidThreshold(eps));
    }
    let log_threshold = match problem.criterion() {
        // unscaled products against ε²/s: ln(ε²) - ln s
        ErrorCriterion::Absolute => 2.0 * eps.ln() - problem.scaling().ln(),
        // unscaled products against ε² · λ_{d,1}^unscaled
        ErrorCriterion::Normalized => {
            let log_top = log_top_eigenvalue(problem) - problem.scaling().ln();
            if log_top == f64::NEG_INFINITY {
                return Err(ComplexityError::DegenerateProblem);
            }
            2.0 * eps.ln() + log_top
        }
    };
    Ok(count_above_log(problem.spectrum(), problem.symmetry(), log_threshold, node_cap)?)
}

/// Power sums `p_j = Σ_m λ_m^j` for `j = 1..=max_order`, each to near
/// machine precision.
fn power_sums(problem: &ProblemSpec, max_order: usize) -> Result<Vec<f64>, ComplexityError> {
    (1..=max_order)
        .map(|j| {
            problem
                .spectrum()
                .power_sum(j as f64, 1e-14)
                .map_err(|_| ComplexityError::NotTraceClass)
        })
        .collect()
}

/// Sum of all squared singular values over the admissible set (the trace of
/// the associated self-adjoint operator), scaling included.
///
/// The free coordinates contribute `‖λ‖₁` each; a symmetric group of size
/// `a` contributes the complete homogeneous sum of order `a`, an
/// antisymmetric group the elementary symmetric sum, both evaluated from
/// power sums by Newton's identities.
fn total_trace(problem: &ProblemSpec) -> Result<f64, ComplexityError> {
    if !problem.spectrum().is_trace_class() {
        return Err(ComplexityError::NotTraceClass);
    }
    let groups = problem.symmetry().groups();
    let constrained: usize = groups.iter().map(|g| g.coords.len()).sum();
    let free = problem.d() - constrained;
    let max_order = groups.iter().map(|g| g.coords.len()).max().unwrap_or(0);
    let p = power_sums(problem, max_order.max(1))?;

    let mut log_trace = problem.scaling().ln() + free as f64 * p[0].ln();
    for g in groups {
        let a = g.coords.len();
        let factor = match g.kind {
            GroupKind::Sym => complete_homogeneous_from_power_sums(&p, a)[a],
            GroupKind::Antisym => elementary_from_power_sums(&p, a)[a],
        };
        if factor <= 0.0 {
            return Ok(0.0);
        }
        log_trace += factor.ln();
    }
    Ok(log_trace.exp())
}

/// Average-case error of the `n`-th optimal algorithm: the square root of
/// the tail sum `Σ_{i > n} λ_{d,i}` over the admissible set, to absolute
/// tolerance `tol` on the sum. Requires `λ ∈ ℓ₁`.
pub fn avg_tail_error(problem: &ProblemSpec, n: usize, tol: f64) -> Result<f64, ComplexityError> {
    assert!(tol > 0.0);
    let total = total_trace(problem)?;
    let mut head = CompensatedSum::new();
    for item in enumerate_top(problem, n) {
        head.add(item.value);
    }
    Ok((total - head.value()).max(0.0).sqrt())
}

/// The index plan of the `n`-th optimal algorithm: the `n` largest
/// admissible indices in enumeration order, each with the normalization
/// factor of its symmetrized basis element (1 when unconstrained).
pub fn optimal_algorithm_plan(problem: &ProblemSpec, n: usize) -> Vec<(MultiIndex, f64)> {
    enumerate_top(problem, n)
        .into_iter()
        .map(|item| {
            let mut norm = 1.0;
            for g in problem.symmetry().groups() {
                norm *= multiplicity_factor(&g.coords, &item.index).1;
            }
            (item.index, norm)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Spectrum;
    use crate::symmetry::SymmetrySpec;

    fn entire(spectrum: Spectrum, d: usize) -> ProblemSpec {
        ProblemSpec::entire(spectrum, d).unwrap()
    }

    #[test]
    fn initial_error_examples() {
        let p = ProblemSpec::with_symmetry(
            Spectrum::finite(vec![1.0, 0.25]).unwrap(),
            2,
            SymmetrySpec::full_antisym(2).unwrap(),
        )
        .unwrap();
        assert!((initial_error(&p) - 0.5).abs() < 1e-15);

        let p = entire(Spectrum::finite(vec![1.0, 0.5]).unwrap(), 3)
            .with_scaling(4.0)
            .unwrap();
        assert!((initial_error(&p) - 2.0).abs() < 1e-12);

        let p = entire(Spectrum::sobolev(2.0).unwrap(), 5);
        assert!((initial_error(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn minimal_error_examples() {
        let geo = Spectrum::geometric(0.5, 0.5).unwrap();
        let p = entire(geo.clone(), 2);
        assert!((minimal_error(&p, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((minimal_error(&p, 1).unwrap() - 0.125_f64.sqrt()).abs() < 1e-15);

        let p = ProblemSpec::with_symmetry(
            Spectrum::finite(vec![1.0, 1.0]).unwrap(),
            4,
            SymmetrySpec::full_antisym(4).unwrap(),
        )
        .unwrap();
        assert_eq!(minimal_error(&p, 0).unwrap(), 0.0);
    }

    #[test]
    fn minimal_error_at_zero_matches_initial_error() {
        for spec in [
            Spectrum::geometric(0.9, 0.3).unwrap(),
            Spectrum::finite(vec![2.0, 1.0, 0.5]).unwrap(),
        ] {
            for d in 1..=3 {
                let p = entire(spec.clone(), d).with_scaling(2.5).unwrap();
                assert!(
                    (minimal_error(&p, 0).unwrap() - initial_error(&p)).abs() < 1e-12
                );
                let p = p.with_criterion(ErrorCriterion::Normalized);
                assert!((minimal_error(&p, 0).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn info_complexity_toy_counts() {
        let two = Spectrum::finite(vec![1.0, 1.0]).unwrap();
        let p = entire(two.clone(), 10);
        assert_eq!(info_complexity(&p, 0.5).unwrap(), 1024);

        let p = ProblemSpec::with_symmetry(two, 10, SymmetrySpec::full_sym(10).unwrap()).unwrap();
        assert_eq!(info_complexity(&p, 0.5).unwrap(), 11);

        let five = Spectrum::finite(vec![1.0; 5]).unwrap();
        let p =
            ProblemSpec::with_symmetry(five, 3, SymmetrySpec::full_antisym(3).unwrap()).unwrap();
        assert_eq!(info_complexity(&p, 0.9).unwrap(), 10);
    }

    #[test]
    fn info_complexity_zero_above_initial_error() {
        let p = entire(Spectrum::geometric(0.7, 0.4).unwrap(), 3)
            .with_scaling(3.0)
            .unwrap();
        let init = initial_error(&p);
        assert_eq!(info_complexity(&p, init + 1e-9).unwrap(), 0);
        assert!(info_complexity(&p, init - 1e-6).unwrap() >= 1);
    }

    #[test]
    fn error_complexity_duality() {
        let p = entire(Spectrum::geometric(0.9, 0.6).unwrap(), 2);
        for eps in [0.5, 0.25, 0.1, 0.05] {
            let n = info_complexity(&p, eps).unwrap() as usize;
            assert!(minimal_error(&p, n).unwrap() <= eps);
            if n > 0 {
                assert!(minimal_error(&p, n - 1).unwrap() > eps);
            }
        }
    }

    #[test]
    fn info_complexity_matches_binomial_representation() {
        // independent counting route for unconstrained problems: split the
        // indices by how many coordinates exceed 1, so that
        // n = Σ_k C(d,k) · #{ j in {2..}^k : Π λ_{j_l}/λ_1 > (ε/ε_init)² }
        fn tuples_above(ratios: &[f64], k: usize, threshold: f64) -> u64 {
            if k == 0 {
                return if 1.0 > threshold { 1 } else { 0 };
            }
            let mut count = 0;
            let mut stack = vec![(0usize, 1.0f64)];
            while let Some((depth, product)) = stack.pop() {
                for &r in ratios {
                    let next = product * r;
                    if next <= threshold {
                        continue;
                    }
                    if depth + 1 == k {
                        count += 1;
                    } else {
                        stack.push((depth + 1, next));
                    }
                }
            }
            count
        }
        fn binom(n: u64, k: u64) -> u64 {
            let k = k.min(n - k);
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }

        let spec = Spectrum::geometric(0.8, 0.5).unwrap();
        let lambda1 = spec.lambda1();
        // ratios λ_m/λ_1 for m ≥ 2, far past anything a tested threshold
        // can reach
        let ratios: Vec<f64> =
            (2..=60u32).map(|m| spec.eigenvalue(m) / lambda1).collect();
        for d in 1..=6usize {
            let problem = entire(spec.clone(), d).with_scaling(3.0).unwrap();
            let init = initial_error(&problem);
            for frac in [0.9, 0.5, 0.2, 0.05] {
                let eps = frac * init;
                let t = (eps / init).powi(2);
                let expected: u64 = (0..=d as u64)
                    .map(|k| binom(d as u64, k) * tuples_above(&ratios, k as usize, t))
                    .sum();
                assert_eq!(
                    info_complexity(&problem, eps).unwrap(),
                    expected,
                    "d={d} frac={frac}"
                );
            }
        }
    }

    #[test]
    fn normalized_complexity_ignores_scaling() {
        let spec = Spectrum::geometric(0.8, 0.5).unwrap();
        for d in 1..=3usize {
            for eps in [0.9, 0.5, 0.2] {
                let base = entire(spec.clone(), d).with_criterion(ErrorCriterion::Normalized);
                let n1 = info_complexity(&base, eps).unwrap();
                for s in [0.01, 0.25, 4.0, 1e6] {
                    let scaled = base.clone().with_scaling(s).unwrap();
                    assert_eq!(info_complexity(&scaled, eps).unwrap(), n1);
                }
            }
        }
    }

    #[test]
    fn avg_tail_error_closed_forms() {
        // dropping the top eigenvalue leaves Σ_{m≥2} 2^(-m) = 1/2
        let p = entire(Spectrum::geometric(0.5, 0.5).unwrap(), 1);
        assert!((avg_tail_error(&p, 1, 1e-12).unwrap() - 0.5_f64.sqrt()).abs() < 1e-12);
        // the full trace is Σ_{m≥1} 2^(-m) = 1
        assert!((avg_tail_error(&p, 0, 1e-12).unwrap() - 1.0).abs() < 1e-12);

        let p = entire(Spectrum::finite(vec![0.5, 0.25]).unwrap(), 2);
        let expect = (9.0 / 16.0 - 0.25_f64).sqrt();
        assert!((avg_tail_error(&p, 1, 1e-12).unwrap() - expect).abs() < 1e-12);

        let p = entire(Spectrum::power_law(1.0, 1.0).unwrap(), 2);
        assert!(matches!(avg_tail_error(&p, 0, 1e-9), Err(ComplexityError::NotTraceClass)));
    }

    #[test]
    fn avg_tail_error_brute_force_trace() {
        // head + tail² = trace, checked against a truncated grid
        let spec = Spectrum::finite(vec![0.8, 0.3, 0.1]).unwrap();
        for d in 1..=3usize {
            for sym in [
                SymmetrySpec::entire(d).unwrap(),
                SymmetrySpec::full_sym(d).unwrap(),
                SymmetrySpec::full_antisym(d).unwrap(),
            ] {
                let p = ProblemSpec::with_symmetry(spec.clone(), d, sym).unwrap();
                let mut trace = 0.0;
                let mut stack = vec![Vec::<u32>::new()];
                while let Some(prefix) = stack.pop() {
                    if prefix.len() == d {
                        if p.symmetry().contains(&prefix).unwrap() {
                            trace += prefix
                                .iter()
                                .map(|&m| p.spectrum().eigenvalue(m))
                                .product::<f64>();
                        }
                        continue;
                    }
                    for m in 1..=3u32 {
                        let mut next = prefix.clone();
                        next.push(m);
                        stack.push(next);
                    }
                }
                for n in 0..4usize {
                    let head: f64 = enumerate_top(&p, n).iter().map(|it| it.value).sum();
                    let tail = avg_tail_error(&p, n, 1e-12).unwrap();
                    assert!(
                        (tail * tail + head - trace).abs() < 1e-10,
                        "d={d} n={n}: {} vs {trace}",
                        tail * tail + head
                    );
                }
            }
        }
    }

    #[test]
    fn plan_examples() {
        let p = entire(Spectrum::finite(vec![1.0, 0.5]).unwrap(), 2);
        let plan = optimal_algorithm_plan(&p, 2);
        assert_eq!(plan.len(), 2);
        assert_eq!(plan[0].0, vec![1, 1]);
        assert_eq!(plan[1].0, vec![1, 2]); // value tie with (2,1) broken lexicographically
        assert!((plan[0].1 - 1.0).abs() < 1e-15);

        let p = ProblemSpec::with_symmetry(
            Spectrum::finite(vec![1.0, 0.5]).unwrap(),
            2,
            SymmetrySpec::full_antisym(2).unwrap(),
        )
        .unwrap();
        let plan = optimal_algorithm_plan(&p, 1);
        assert_eq!(plan, vec![(vec![1, 2], 2.0_f64.sqrt())]);

        assert!(optimal_algorithm_plan(&p, 0).is_empty());
    }
}
