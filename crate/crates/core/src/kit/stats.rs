//! Frequency and runs tests at the two-sided 0.001 level.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

pub const MIN_BITS: usize = 100;

/// Two-sided normal critical value at level 0.001.
pub const CRITICAL_Z: f64 = 3.29;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonobitResult {
    pub bits: usize,
    /// `Σ (2·bit − 1)`.
    pub sum: i64,
    /// `|sum| / √N`.
    pub statistic: f64,
    pub pass: bool,
}

pub fn monobit_test(bits: &BitVector) -> Result<MonobitResult> {
    let n = bits.len();
    if n < MIN_BITS {
        return Err(Error::TooFewBits {
            got: n,
            min: MIN_BITS,
        });
    }
    let ones = bits.weight() as i64;
    let sum = 2 * ones - n as i64;
    let statistic = sum.unsigned_abs() as f64 / libm::sqrt(n as f64);
    Ok(MonobitResult {
        bits: n,
        sum,
        statistic,
        pass: statistic <= CRITICAL_Z,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunsVerdict {
    Pass,
    Fail,
    /// Not evaluated because the frequency test failed.
    Gated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunsResult {
    pub bits: usize,
    pub runs: u64,
    /// `2Nπ(1−π) + 1`.
    pub expected: f64,
    /// `(runs − expected)/σ`, absent when gated.
    pub statistic: Option<f64>,
    pub verdict: RunsVerdict,
}

/// Wald–Wolfowitz runs test, gated on the frequency test.
///
/// With `n₁` ones and `n₀` zeros, the run count has mean
/// `μ = 2n₀n₁/N + 1 = 2Nπ(1−π) + 1` and variance `(μ−1)(μ−2)/(N−1)`.
pub fn runs_test(bits: &BitVector) -> Result<RunsResult> {
    let monobit = monobit_test(bits)?;
    let n = bits.len();
    let ones = bits.weight() as f64;
    let pi = ones / n as f64;
    let expected = 2.0 * n as f64 * pi * (1.0 - pi) + 1.0;
    let mut runs = 1u64;
    let mut prev = bits.get(0)?;
    for b in bits.iter().skip(1) {
        if b != prev {
            runs += 1;
        }
        prev = b;
    }
    let variance = (expected - 1.0) * (expected - 2.0) / (n as f64 - 1.0);
    if !monobit.pass || variance <= 0.0 {
        return Ok(RunsResult {
            bits: n,
            runs,
            expected,
            statistic: None,
            verdict: RunsVerdict::Gated,
        });
    }
    let z = (runs as f64 - expected) / libm::sqrt(variance);
    let verdict = if z.abs() <= CRITICAL_Z {
        RunsVerdict::Pass
    } else {
        RunsVerdict::Fail
    };
    Ok(RunsResult {
        bits: n,
        runs,
        expected,
        statistic: Some(z),
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryVerdict {
    pub monobit: MonobitResult,
    pub runs: RunsResult,
    pub pass: bool,
}

pub fn battery(bits: &BitVector) -> Result<BatteryVerdict> {
    let monobit = monobit_test(bits)?;
    let runs = runs_test(bits)?;
    Ok(BatteryVerdict {
        monobit,
        runs,
        pass: monobit.pass && runs.verdict == RunsVerdict::Pass,
    })
}
