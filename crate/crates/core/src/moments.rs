//! Absolute moments of sums of independent uniform(-1/2, 1/2) variables,
//! and the block sizes they certify for the low-degree-polynomial lower
//! bound in `L_p` norms.
//!
//! The `p`-th moment `∫_{[-1/2,1/2]^k} |z_1 + … + z_k|^p dz` grows like
//! `k^{p/2}`; for even `p = 2N` it is a rational number computed exactly by
//! the multinomial theorem, and for general `p` a seeded Monte Carlo
//! estimate is provided.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MomentError {
    #[error("exact evaluation requires an even integer p (got {0})")]
    OddPExact(f64),
    #[error("k·N = {0} exceeds the exact-enumeration guard of 60")]
    EnumerationTooLarge(u64),
    #[error("p must be at least 1 (got {0})")]
    InvalidP(f64),
    #[error("Monte Carlo needs at least 2 samples")]
    TooFewSamples,
}

/// How to evaluate the moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMode {
    /// Exact rational evaluation; requires `p` to be an even integer.
    ExactEven,
    /// Seeded Monte Carlo with the given sample count.
    MonteCarlo { samples: u64, seed: u64 },
}

/// The result of a moment evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentEstimate {
    Exact(f64),
    Estimate { value: f64, std_error: f64 },
}

impl MomentEstimate {
    pub fn value(&self) -> f64 {
        match *self {
            MomentEstimate::Exact(v) => v,
            MomentEstimate::Estimate { value, .. } => value,
        }
    }
}

fn big_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Exact even moment by the multinomial theorem: only even powers of each
/// coordinate survive integration, and `∫ z^{2j} dz = 2^{-2j}/(2j+1)` over
/// `[-1/2, 1/2]`, so
/// `𝔍_{k,2N} = 2^{-2N} Σ_{|j| = N} (2N; 2j_1, …, 2j_k) Π_m 1/(2j_m + 1)`.
fn exact_even_moment(k: u64, n_half: u64) -> BigRational {
    let two_n = 2 * n_half;
    let numerator_fact = big_factorial(two_n);
    let mut total = BigRational::zero();
    // walk the compositions of n_half into k nonnegative parts
    let mut parts = vec![0u64; k as usize];
    parts[0] = n_half;
    loop {
        let mut denom = BigInt::one();
        for &j in &parts {
            denom *= big_factorial(2 * j);
            denom *= BigInt::from(2 * j + 1);
        }
        total += BigRational::new(numerator_fact.clone(), denom);

        // next composition in colex order
        let Some(pos) = parts[..k as usize - 1].iter().rposition(|&p| p > 0) else {
            break;
        };
        let tail: u64 = parts[pos + 1..].iter().sum();
        parts[pos] -= 1;
        for p in parts[pos + 1..].iter_mut() {
            *p = 0;
        }
        parts[pos + 1] = tail + 1;
    }
    total / BigRational::from(BigInt::from(4u64).pow(n_half as u32))
}

/// `𝔍_{k,p}`, the `p`-th absolute moment of the sum of `k` independent
/// uniform(-1/2, 1/2) variables.
pub fn cube_moment(k: u64, p: f64, mode: MomentMode) -> Result<MomentEstimate, MomentError> {
    if k == 0 || p < 1.0 {
        return Err(MomentError::InvalidP(p));
    }
    match mode {
        MomentMode::ExactEven => {
            if p.fract() != 0.0 || !(p as u64).is_multiple_of(2) {
                return Err(MomentError::OddPExact(p));
            }
            let n_half = p as u64 / 2;
            if k * n_half > 60 {
                return Err(MomentError::EnumerationTooLarge(k * n_half));
            }
            let rational = exact_even_moment(k, n_half);
            Ok(MomentEstimate::Exact(rational_to_f64(&rational)))
        }
        MomentMode::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(MomentError::TooFewSamples);
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..samples {
                let mut z = 0.0;
                for _ in 0..k {
                    // 53-bit uniform in [0,1), shifted to [-1/2, 1/2)
                    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                    z += u - 0.5;
                }
                let v = z.abs().powf(p);
                sum += v;
                sum_sq += v * v;
            }
            let nf = samples as f64;
            let mean = sum / nf;
            let variance = (sum_sq / nf - mean * mean).max(0.0);
            Ok(MomentEstimate::Estimate {
                value: mean,
                std_error: (variance / nf).sqrt(),
            })
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // scale down huge numerators/denominators together before converting
    let mut numer = r.numer().clone();
    let mut denom = r.denom().clone();
    let bits = numer.abs().bits().max(denom.bits());
    if bits > 900 {
        let shift = bits - 900;
        numer >>= shift;
        denom >>= shift;
    }
    numer.to_f64().unwrap_or(f64::NAN) / denom.to_f64().unwrap_or(f64::NAN)
}

/// The smallest published block size `k` for which the `p`-th moment bound
/// certifies the norm condition over boxes of side `l`:
/// `⌈12/l²⌉` for `2 ≤ p < 4`, `⌈4√5/l²⌉` for `p ≥ 4`, and the general
/// `⌈8(p+1)^{2/p}/l²⌉` for `1 ≤ p < 2`.
pub fn lp_block_size(p: f64, l: f64) -> Result<u64, MomentError> {
    if p < 1.0 {
        return Err(MomentError::InvalidP(p));
    }
    assert!(l > 0.0);
    let raw = if p >= 4.0 {
        4.0 * 5.0_f64.sqrt() / (l * l)
    } else if p >= 2.0 {
        12.0 / (l * l)
    } else {
        8.0 * (p + 1.0).powf(2.0 / p) / (l * l)
    };
    Ok(raw.ceil() as u64)
}
