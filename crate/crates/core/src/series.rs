//! Numeric series helpers: compensated summation, zeta tail sums, log-gamma.

/// Kahan–Neumaier compensated accumulator.
///
/// Keeps the running error of repeated `f64` additions near one ulp of the
/// total, which is what makes the advertised tolerances of the power-sum
/// routines meaningful.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sum of the tail `Σ_{n > m} n^(-s)` for `s > 1`, by Euler–Maclaurin.
///
/// Absolute error is below `1e-15 · value` once `m ≥ 64`.
pub fn zeta_tail(s: f64, m: u64) -> f64 {
    debug_assert!(s > 1.0);
    let a = (m + 1) as f64;
    let a_pow = a.powf(-s);
    a.powf(1.0 - s) / (s - 1.0) + 0.5 * a_pow + s * a_pow / a / 12.0
        - s * (s + 1.0) * (s + 2.0) * a_pow / a.powi(3) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * a_pow / a.powi(5) / 30240.0
}

/// Riemann zeta `ζ(s)` for `s > 1`: partial sum plus Euler–Maclaurin tail.
pub fn zeta(s: f64) -> f64 {
    debug_assert!(s > 1.0);
    const M: u64 = 256;
    let mut acc = CompensatedSum::new();
    for n in 1..=M {
        acc.add((n as f64).powf(-s));
    }
    acc.value() + zeta_tail(s, M)
}

/// `ln Γ(x)` for `x > 0` via the Stirling series, with upward recurrence
/// below the asymptotic range.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut shift = 0.0;
    // ln Γ(x) = ln Γ(x + k) - ln(x (x+1) ... (x+k-1))
    while x < 12.0 {
        shift += x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0
        - inv * inv2 * inv2 * inv2 / 1680.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// `ln(n!)` through [`ln_gamma`].
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Elementary symmetric sums `e_0 .. e_max_order` of an implicit sequence,
/// from its power sums `p[j-1] = Σ_m λ_m^j` (Newton's identities).
///
/// `e_k` is the sum of all products of `k` distinct sequence entries.
/// Slightly negative round-off results clamp to zero.
pub fn elementary_from_power_sums(power_sums: &[f64], max_order: usize) -> Vec<f64> {
    debug_assert!(power_sums.len() >= max_order);
    let mut e = vec![0.0; max_order + 1];
    e[0] = 1.0;
    for k in 1..=max_order {
        let mut acc = CompensatedSum::new();
        let mut sign = 1.0;
        for j in 1..=k {
            acc.add(sign * power_sums[j - 1] * e[k - j]);
            sign = -sign;
        }
        e[k] = (acc.value() / k as f64).max(0.0);
    }
    e
}

/// Complete homogeneous symmetric sums `h_0 .. h_max_order` from power sums;
/// `h_k` sums the products over all nondecreasing index tuples of length `k`.
pub fn complete_homogeneous_from_power_sums(power_sums: &[f64], max_order: usize) -> Vec<f64> {
    debug_assert!(power_sums.len() >= max_order);
    let mut h = vec![0.0; max_order + 1];
    h[0] = 1.0;
    for k in 1..=max_order {
        let mut acc = CompensatedSum::new();
        for j in 1..=k {
            acc.add(power_sums[j - 1] * h[k - j]);
        }
        h[k] = acc.value() / k as f64;
    }
    h
}
