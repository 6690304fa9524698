use alloc::vec::Vec;

use rand::RngCore;

use super::function::{OneWayFunction, PaddedFunction};
use super::guesser::{DeterministicSnapshotGuesser, Guesser, PlantGuesser};
use crate::error::{Error, Result};
use crate::gf2::{hardcore_bit, BitVector};

/// Normal quantile for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A point estimate with its standard error and a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
}

impl RateEstimate {
    /// Binomial proportion with a Wilson score interval.
    pub fn from_successes(successes: u64, trials: u64) -> Self {
        let t = trials as f64;
        let p = successes as f64 / t;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / t;
        let centre = (p + z2 / (2.0 * t)) / denom;
        let half = Z95 * libm::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
        Self {
            estimate: p,
            std_error: libm::sqrt(p * (1.0 - p) / t),
            // the Wilson interval always brackets p; min/max guard rounding
            ci_low: (centre - half).max(0.0).min(p),
            ci_high: (centre + half).min(1.0).max(p),
            trials,
        }
    }
}

/// Monte Carlo estimate of `(E[G·b])² / E[G²]` with both moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuesserRate {
    pub rate: RateEstimate,
    /// Sample mean of `G·b`.
    pub correlation: f64,
    pub correlation_se: f64,
    /// Sample mean of `G²`.
    pub second_moment: f64,
    pub second_moment_se: f64,
}

#[derive(Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    fn std_error(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 2 {
            return 0.0;
        }
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        libm::sqrt(var / n)
    }
}

/// Estimates the guesser success rate on the padded function `f'(x‖r) = (f(x), r)`.
///
/// Each trial draws `x‖r` uniformly, evaluates `(y, r) = f'(x‖r)`, plants a
/// guesser on `x` and asks it about `(y, r)`. Both moments come from the same
/// samples. The rate is defined as 0 when no sample has `G ≠ 0`.
pub fn guesser_rate<P, F>(
    planter: &P,
    f: &PaddedFunction<F>,
    trials: u64,
    rng: &mut dyn RngCore,
) -> Result<GuesserRate>
where
    P: PlantGuesser + ?Sized,
    F: OneWayFunction,
{
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1"));
    }
    let n = f.half_len();
    let n_y = f.inner().n_out();
    let mut gb = Moments::default();
    let mut gg = Moments::default();
    for _ in 0..trials {
        let input = BitVector::random(2 * n, rng)?;
        let x = input.slice(0, n)?;
        let out = f.eval(&input)?;
        let (y, r) = out.split_at(n_y)?;
        let g = planter.plant(&x)?.query(&y, &r, rng);
        if !(-1..=1).contains(&g) {
            return Err(Error::GuesserOutput(g));
        }
        let g = g as f64;
        gb.push(g * hardcore_bit(&x, &r)? as f64);
        gg.push(g * g);
    }
    let (c, d) = (gb.mean(), gg.mean());
    let (c_se, d_se) = (gb.std_error(), gg.std_error());
    let (estimate, std_error) = if d == 0.0 {
        (0.0, 0.0)
    } else {
        // delta method on c²/d, moments treated as independent
        let dc = 2.0 * c / d;
        let dd = c * c / (d * d);
        (
            c * c / d,
            libm::sqrt(dc * dc * c_se * c_se + dd * dd * d_se * d_se),
        )
    };
    Ok(GuesserRate {
        rate: RateEstimate {
            estimate,
            std_error,
            ci_low: (estimate - Z95 * std_error).max(0.0),
            ci_high: estimate + Z95 * std_error,
            trials,
        },
        correlation: c,
        correlation_se: c_se,
        second_moment: d,
        second_moment_se: d_se,
    })
}

/// Exact `c(x) = E_r[b(x,r)·G_r] / √(E_r[G_r²])` by enumerating every `r`.
///
/// Zero when the snapshot is identically zero.
pub fn correlation_exact(g: &DeterministicSnapshotGuesser, x: &BitVector) -> Result<f64> {
    let n = g.n();
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    let mut num = 0i64;
    let mut den = 0i64;
    for (r, &gr) in g.table().iter().enumerate() {
        let rv = BitVector::from_u64(r as u64, n)?;
        num += (hardcore_bit(x, &rv)? * gr) as i64;
        den += (gr * gr) as i64;
    }
    if den == 0 {
        return Ok(0.0);
    }
    let size = (1u64 << n) as f64;
    Ok((num as f64 / size) / libm::sqrt(den as f64 / size))
}

/// A procedure that, given `y = f(x)` and guesser access, lists candidate preimages.
pub trait Inverter: Send + Sync {
    fn invert(
        &self,
        guesser: &dyn Guesser,
        y: &BitVector,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<BitVector>>;

    /// Whether the produced list contains `x`.
    fn recovers(
        &self,
        x: &BitVector,
        guesser: &dyn Guesser,
        y: &BitVector,
        rng: &mut dyn RngCore,
    ) -> Result<bool> {
        Ok(self.invert(guesser, y, rng)?.contains(x))
    }
}

/// The known secret of one experiment trial and its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedInstance {
    pub x: BitVector,
    pub y: BitVector,
}

impl PlantedInstance {
    pub fn new<F: OneWayFunction + ?Sized>(f: &F, x: BitVector) -> Result<Self> {
        let y = f.eval(&x)?;
        Ok(Self { x, y })
    }

    /// Uniform `x` from `rng`.
    pub fn sample<F: OneWayFunction + ?Sized>(f: &F, rng: &mut dyn RngCore) -> Result<Self> {
        let x = BitVector::random(f.n_in(), rng)?;
        Self::new(f, x)
    }
}

/// Fraction of trials in which `inverter` lists the planted `x`.
///
/// Each trial draws `x`, computes `y = f(x)`, plants a guesser on `x` and
/// runs the inverter on `y` with the same `rng` stream.
pub fn inverter_rate<I, P, F>(
    inverter: &I,
    planter: &P,
    f: &F,
    trials: u64,
    rng: &mut dyn RngCore,
) -> Result<RateEstimate>
where
    I: Inverter + ?Sized,
    P: PlantGuesser + ?Sized,
    F: OneWayFunction + ?Sized,
{
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1"));
    }
    let mut hits = 0u64;
    for _ in 0..trials {
        let inst = PlantedInstance::sample(f, rng)?;
        let g = planter.plant(&inst.x)?;
        if inverter.recovers(&inst.x, &g, &inst.y, rng)? {
            hits += 1;
        }
    }
    Ok(RateEstimate::from_successes(hits, trials))
}
