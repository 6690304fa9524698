use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{toeplitz_apply, BitVector, ToeplitzMatrix};

/// Largest length for which sources are tabulated exactly.
pub const TABLE_MAX_LEN: usize = 16;

/// Tolerance on the total mass of a probability table.
pub const MASS_TOLERANCE: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Debug, Clone, PartialEq)]
enum Distribution {
    /// `table[v]` is the probability of the vector with integer value `v`.
    Table {
        probs: Vec<f64>,
        cumulative: Vec<f64>,
    },
    /// Uniform over an explicit support.
    Flat(Vec<BitVector>),
    /// Uniform over all of `{0,1}^n`.
    Uniform,
}

/// A distribution on `{0,1}^n` whose every outcome has probability at most `max_prob`.
#[derive(Debug, Clone, PartialEq)]
pub struct JunkSource {
    n: usize,
    dist: Distribution,
    max_prob: f64,
}

impl JunkSource {
    /// An explicit table of `2^n` probabilities (`n <= 16`).
    pub fn from_table(n: usize, probs: Vec<f64>, max_prob: f64) -> Result<Self> {
        if n == 0 || n > TABLE_MAX_LEN {
            return Err(Error::Distribution("tabulated sources need 1 <= n <= 16"));
        }
        if probs.len() != 1 << n {
            return Err(Error::Distribution("table must have 2^n entries"));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Distribution(
                "probabilities must be finite and non-negative",
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Distribution("probabilities must sum to 1"));
        }
        if probs.iter().any(|&p| p > max_prob) {
            return Err(Error::Distribution(
                "an outcome exceeds the declared max probability",
            ));
        }
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self {
            n,
            dist: Distribution::Table { probs, cumulative },
            max_prob,
        })
    }

    /// Uniform on `{0,1}^n`; tabulated when `n <= 16`.
    pub fn uniform(n: usize) -> Result<Self> {
        let p = libm::ldexp(1.0, -(n as i32));
        if n <= TABLE_MAX_LEN {
            return Self::from_table(n, vec![p; 1 << n], p);
        }
        BitVector::zeros(n)?;
        Ok(Self {
            n,
            dist: Distribution::Uniform,
            max_prob: p,
        })
    }

    /// Uniform over `support` (distinct vectors of length `n`).
    pub fn flat(n: usize, support: Vec<BitVector>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Distribution("empty support"));
        }
        if support.iter().any(|v| v.len() != n) {
            return Err(Error::Distribution("support vector of wrong length"));
        }
        let mut sorted = support.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != support.len() {
            return Err(Error::Distribution("support has repeated vectors"));
        }
        let max_prob = 1.0 / support.len() as f64;
        Ok(Self {
            n,
            dist: Distribution::Flat(support),
            max_prob,
        })
    }

    /// All mass on `x`.
    pub fn point_mass(x: &BitVector) -> Result<Self> {
        let n = x.len();
        let mut probs = vec![0.0; 1usize.checked_shl(n as u32).unwrap_or(0)];
        let v = x.to_u64()? as usize;
        if v >= probs.len() {
            return Err(Error::Distribution("tabulated sources need 1 <= n <= 16"));
        }
        probs[v] = 1.0;
        Self::from_table(n, probs, 1.0)
    }

    /// A step-shaped source with peak probability `4^-level`.
    ///
    /// Step `j` of `steps` carries mass `1/steps` spread evenly over outcomes
    /// of probability `4^-level · 2^-j`. Outcomes are placed at positions
    /// chosen by a seeded shuffle; the rest of `{0,1}^n` gets probability 0.
    pub fn staircase(n: usize, level: u32, steps: u32, seed: u64) -> Result<Self> {
        if n == 0 || n > TABLE_MAX_LEN || steps == 0 {
            return Err(Error::Distribution(
                "staircase needs 1 <= n <= 16 and steps >= 1",
            ));
        }
        let peak = libm::ldexp(1.0, -2 * level as i32);
        let mut counts = Vec::with_capacity(steps as usize);
        for j in 0..steps {
            // (1/steps) / (4^-level · 2^-j) outcomes on this step
            let numer = 1u128 << (2 * level + j);
            if !numer.is_multiple_of(steps as u128) {
                return Err(Error::Distribution(
                    "staircase step counts are not integral",
                ));
            }
            counts.push((numer / steps as u128) as usize);
        }
        let total: usize = counts.iter().sum();
        if total > 1 << n {
            return Err(Error::Distribution("staircase support exceeds 2^n"));
        }
        let mut positions: Vec<usize> = (0..1 << n).collect();
        positions.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut probs = vec![0.0; 1 << n];
        let mut next = positions.into_iter();
        for (j, &c) in counts.iter().enumerate() {
            let p = libm::ldexp(peak, -(j as i32));
            for pos in next.by_ref().take(c) {
                probs[pos] = p;
            }
        }
        Self::from_table(n, probs, peak)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_prob(&self) -> f64 {
        self.max_prob
    }

    pub fn table(&self) -> Option<&[f64]> {
        match &self.dist {
            Distribution::Table { probs, .. } => Some(probs),
            _ => None,
        }
    }

    /// `Σ p(x)²`, for tabulated sources.
    pub fn collision_probability(&self) -> Option<f64> {
        self.table().map(|t| t.iter().map(|p| p * p).sum())
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> Result<BitVector> {
        match &self.dist {
            Distribution::Table { cumulative, .. } => {
                let u: f64 = rng.gen();
                // first index whose cumulative mass exceeds u, skipping zero-mass cells
                let idx = cumulative
                    .partition_point(|&c| c <= u)
                    .min(cumulative.len() - 1);
                BitVector::from_u64(idx as u64, self.n)
            }
            Distribution::Flat(support) => Ok(support[rng.gen_range(0..support.len())].clone()),
            Distribution::Uniform => BitVector::random(self.n, rng),
        }
    }
}

/// `i` output bits from one sample via a Toeplitz matrix.
pub fn multibit(t: &ToeplitzMatrix, x: &BitVector) -> Result<BitVector> {
    toeplitz_apply(t, x)
}

/// The bound `½·2^{−i/2}` on the extractor's distance from uniform
/// when every source outcome has probability at most `4^{−i}`.
pub fn extractor_distance_bound(i: usize) -> f64 {
    0.5 * libm::pow(2.0, -(i as f64) / 2.0)
}

fn check_extractor(source: &JunkSource, t: &ToeplitzMatrix) -> Result<()> {
    if t.rows() != source.n() {
        return Err(Error::LengthMismatch {
            expected: source.n(),
            actual: t.rows(),
        });
    }
    let limit = libm::ldexp(1.0, -2 * t.cols() as i32);
    if source.max_prob() > limit {
        return Err(Error::Distribution("source max probability exceeds 4^-i"));
    }
    Ok(())
}

/// Concatenates `multibit(T, x)` over `count` fresh samples; `T` stays fixed.
pub fn extract_stream(
    source: &JunkSource,
    t: &ToeplitzMatrix,
    count: usize,
    rng: &mut dyn RngCore,
) -> Result<BitVector> {
    check_extractor(source, t)?;
    if count == 0 {
        return Err(Error::Parameter("count must be at least 1"));
    }
    let i = t.cols();
    let mut bits = Vec::with_capacity(count * i);
    for _ in 0..count {
        bits.extend(multibit(t, &source.sample(rng)?)?.iter());
    }
    BitVector::from_bits(&bits)
}

/// Exact output distribution of `x ↦ x·T` for a tabulated source.
pub fn push_forward(source: &JunkSource, t: &ToeplitzMatrix) -> Result<Vec<f64>> {
    let table = source
        .table()
        .ok_or(Error::Distribution("source is not tabulated"))?;
    if t.rows() != source.n() {
        return Err(Error::LengthMismatch {
            expected: source.n(),
            actual: t.rows(),
        });
    }
    if t.cols() > 24 {
        return Err(Error::Parameter(
            "push-forward output must be at most 24 bits",
        ));
    }
    let mut out = vec![0.0; 1 << t.cols()];
    for (v, &p) in table.iter().enumerate() {
        if p > 0.0 {
            let x = BitVector::from_u64(v as u64, source.n())?;
            out[toeplitz_apply(t, &x)?.to_u64()? as usize] += p;
        }
    }
    Ok(out)
}

/// `½ Σ |d(z) − 2^{−i}|` for a distribution on `2^i` outcomes.
pub fn distance_from_uniform(dist: &[f64]) -> f64 {
    let u = 1.0 / dist.len() as f64;
    0.5 * dist.iter().map(|p| (p - u).abs()).sum::<f64>()
}

/// Exact distance of the extractor output from uniform for one `T`.
pub fn extractor_distance(source: &JunkSource, t: &ToeplitzMatrix) -> Result<f64> {
    Ok(distance_from_uniform(&push_forward(source, t)?))
}
