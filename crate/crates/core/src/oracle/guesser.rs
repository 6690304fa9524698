use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::gf2::{hardcore_bit, BitVector};

/// An oracle `G(y, r, ω) ∈ {−1, 0, +1}` predicting `(−1)^(x·r)` from `y = f(x)`.
///
/// `ω` is supplied per query as `rng`; a guesser that needs no coins ignores it.
pub trait Guesser: Send + Sync {
    fn query(&self, y: &BitVector, r: &BitVector, rng: &mut dyn RngCore) -> i8;
}

impl<G: Guesser + ?Sized> Guesser for &G {
    fn query(&self, y: &BitVector, r: &BitVector, rng: &mut dyn RngCore) -> i8 {
        (**self).query(y, r, rng)
    }
}

impl<G: Guesser + ?Sized> Guesser for alloc::boxed::Box<G> {
    fn query(&self, y: &BitVector, r: &BitVector, rng: &mut dyn RngCore) -> i8 {
        (**self).query(y, r, rng)
    }
}

#[inline]
fn truth(x: &BitVector, r: &BitVector) -> i8 {
    // lengths are fixed when the guesser is planted; a mismatch is an abstention
    hardcore_bit(x, r).unwrap_or(0)
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Parameter("epsilon must lie in [0, 1]"));
    }
    Ok(())
}

/// Always answers `b(x, r)` for the planted `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectGuesser {
    x: BitVector,
}

impl PerfectGuesser {
    pub fn new(x: BitVector) -> Self {
        Self { x }
    }
}

impl Guesser for PerfectGuesser {
    fn query(&self, _y: &BitVector, r: &BitVector, _rng: &mut dyn RngCore) -> i8 {
        truth(&self.x, r)
    }
}

/// Answers `b(x, r)` with probability `(1 + ε)/2`, otherwise `−b(x, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyGuesser {
    x: BitVector,
    epsilon: f64,
}

impl NoisyGuesser {
    pub fn new(x: BitVector, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self { x, epsilon })
    }
}

impl Guesser for NoisyGuesser {
    fn query(&self, _y: &BitVector, r: &BitVector, rng: &mut dyn RngCore) -> i8 {
        let b = truth(&self.x, r);
        if rng.gen_bool((1.0 + self.epsilon) / 2.0) {
            b
        } else {
            -b
        }
    }
}

/// Abstains with probability `1 − q`; otherwise behaves like `NoisyGuesser(ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstainingGuesser {
    noisy: NoisyGuesser,
    answer_prob: f64,
}

impl AbstainingGuesser {
    pub fn new(x: BitVector, epsilon: f64, answer_prob: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&answer_prob) {
            return Err(Error::Parameter("answer probability must lie in [0, 1]"));
        }
        Ok(Self {
            noisy: NoisyGuesser::new(x, epsilon)?,
            answer_prob,
        })
    }
}

impl Guesser for AbstainingGuesser {
    fn query(&self, y: &BitVector, r: &BitVector, rng: &mut dyn RngCore) -> i8 {
        if rng.gen_bool(self.answer_prob) {
            self.noisy.query(y, r, rng)
        } else {
            0
        }
    }
}

/// Which `r` an [`AdversarialSignGuesser`] answers correctly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorrectSet {
    /// `r` with `selector · r = 0`.
    Halfspace(BitVector),
    /// Explicit membership indexed by `r` as an integer (`n <= 16`).
    Table(Vec<bool>),
}

/// Correct on a chosen set of `r`, sign-flipped everywhere else.
///
/// With `CorrectSet::Halfspace(s)` and `s ≠ 0` the answers are exactly the
/// character of `x ⊕ s`, so the correlation with `x` is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversarialSignGuesser {
    x: BitVector,
    correct: CorrectSet,
}

impl AdversarialSignGuesser {
    pub fn new(x: BitVector, correct: CorrectSet) -> Result<Self> {
        match &correct {
            CorrectSet::Halfspace(s) if s.len() != x.len() => {
                return Err(Error::LengthMismatch {
                    expected: x.len(),
                    actual: s.len(),
                })
            }
            CorrectSet::Table(t) if x.len() > 16 || t.len() != 1 << x.len() => {
                return Err(Error::Parameter(
                    "correct-set table must have 2^n entries, n <= 16",
                ))
            }
            _ => {}
        }
        Ok(Self { x, correct })
    }
}

impl Guesser for AdversarialSignGuesser {
    fn query(&self, _y: &BitVector, r: &BitVector, _rng: &mut dyn RngCore) -> i8 {
        let b = truth(&self.x, r);
        let correct = match &self.correct {
            CorrectSet::Halfspace(s) => !s.dot(r).unwrap_or(true),
            CorrectSet::Table(t) => r.to_u64().map(|i| t[i as usize]).unwrap_or(false),
        };
        if correct {
            b
        } else {
            -b
        }
    }
}

/// A guesser frozen for one `(y, ω)`: a table `G_r` over every `r ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicSnapshotGuesser {
    n: usize,
    table: Vec<i8>,
}

impl DeterministicSnapshotGuesser {
    pub const MAX_INPUT: usize = 16;

    pub fn from_table(n: usize, table: Vec<i8>) -> Result<Self> {
        if n == 0 || n > Self::MAX_INPUT || table.len() != 1 << n {
            return Err(Error::Parameter(
                "snapshot table must have 2^n entries, 1 <= n <= 16",
            ));
        }
        if let Some(&bad) = table.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::GuesserOutput(bad));
        }
        Ok(Self { n, table })
    }

    /// Builds the table from `values(r)` for every `r`.
    pub fn from_fn(n: usize, mut values: impl FnMut(&BitVector) -> i8) -> Result<Self> {
        if n == 0 || n > Self::MAX_INPUT {
            return Err(Error::Parameter("snapshot length must be 1..=16"));
        }
        let table = (0..1u64 << n)
            .map(|r| values(&BitVector::from_u64(r, n).expect("n <= 16")))
            .collect();
        Self::from_table(n, table)
    }

    /// Freezes `g` at `y`: one query per `r` in increasing order, coins from `rng`.
    pub fn capture<G: Guesser + ?Sized>(
        g: &G,
        y: &BitVector,
        n: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Self> {
        Self::from_fn(n, |r| g.query(y, r, rng))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }
}

impl Guesser for DeterministicSnapshotGuesser {
    fn query(&self, _y: &BitVector, r: &BitVector, _rng: &mut dyn RngCore) -> i8 {
        match r.to_u64() {
            Ok(i) if r.len() == self.n => self.table[i as usize],
            _ => 0,
        }
    }
}

/// Wraps a guesser and counts its queries.
#[derive(Debug, Default)]
pub struct CountingGuesser<G> {
    inner: G,
    count: AtomicU64,
}

impl<G> CountingGuesser<G> {
    pub fn new(inner: G) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    pub fn into_inner(self) -> G {
        self.inner
    }
}

impl<G: Guesser> Guesser for CountingGuesser<G> {
    fn query(&self, y: &BitVector, r: &BitVector, rng: &mut dyn RngCore) -> i8 {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.query(y, r, rng)
    }
}

/// Builds a guesser around a planted secret `x`.
///
/// Experiments draw a fresh `x` per trial, so guessers are described by a
/// planter rather than a single instance.
pub trait PlantGuesser: Send + Sync {
    type Guesser: Guesser;
    fn plant(&self, x: &BitVector) -> Result<Self::Guesser>;
}

/// The built-in guesser families as plain data.
#[derive(Debug, Clone, PartialEq)]
pub enum GuesserSpec {
    Perfect,
    Noisy {
        epsilon: f64,
    },
    Abstaining {
        epsilon: f64,
        answer_prob: f64,
    },
    Adversarial {
        selector: BitVector,
    },
    /// Answers 0 everywhere.
    Silent,
}

impl GuesserSpec {
    /// The correlation `c(x)` the family is calibrated to, in expectation over ω.
    pub fn nominal_correlation(&self) -> f64 {
        match self {
            Self::Perfect => 1.0,
            Self::Noisy { epsilon } => *epsilon,
            Self::Abstaining {
                epsilon,
                answer_prob,
            } => epsilon * libm::sqrt(*answer_prob),
            Self::Adversarial { selector } => {
                if selector.is_zero() {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Silent => 0.0,
        }
    }
}

/// A planted built-in guesser.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinGuesser {
    Perfect(PerfectGuesser),
    Noisy(NoisyGuesser),
    Abstaining(AbstainingGuesser),
    Adversarial(AdversarialSignGuesser),
    Silent,
}

impl Guesser for BuiltinGuesser {
    fn query(&self, y: &BitVector, r: &BitVector, rng: &mut dyn RngCore) -> i8 {
        match self {
            Self::Perfect(g) => g.query(y, r, rng),
            Self::Noisy(g) => g.query(y, r, rng),
            Self::Abstaining(g) => g.query(y, r, rng),
            Self::Adversarial(g) => g.query(y, r, rng),
            Self::Silent => 0,
        }
    }
}

impl PlantGuesser for GuesserSpec {
    type Guesser = BuiltinGuesser;

    fn plant(&self, x: &BitVector) -> Result<BuiltinGuesser> {
        let x = x.clone();
        Ok(match self {
            Self::Perfect => BuiltinGuesser::Perfect(PerfectGuesser::new(x)),
            Self::Noisy { epsilon } => BuiltinGuesser::Noisy(NoisyGuesser::new(x, *epsilon)?),
            Self::Abstaining {
                epsilon,
                answer_prob,
            } => BuiltinGuesser::Abstaining(AbstainingGuesser::new(x, *epsilon, *answer_prob)?),
            Self::Adversarial { selector } => BuiltinGuesser::Adversarial(
                AdversarialSignGuesser::new(x, CorrectSet::Halfspace(selector.clone()))?,
            ),
            Self::Silent => BuiltinGuesser::Silent,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn agreement<G: Guesser>(g: &G, x: &BitVector, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = BitVector::zeros(1).unwrap();
        let mut sum = 0i64;
        for _ in 0..samples {
            let r = BitVector::random(x.len(), &mut rng).unwrap();
            sum += (g.query(&y, &r, &mut rng) * hardcore_bit(x, &r).unwrap()) as i64;
        }
        sum as f64 / samples as f64
    }

    #[test]
    fn outputs_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = BitVector::random(12, &mut rng).unwrap();
        let specs = [
            GuesserSpec::Perfect,
            GuesserSpec::Noisy { epsilon: 0.3 },
            GuesserSpec::Abstaining {
                epsilon: 0.3,
                answer_prob: 0.5,
            },
            GuesserSpec::Adversarial {
                selector: BitVector::unit(12, 3).unwrap(),
            },
            GuesserSpec::Silent,
        ];
        let y = BitVector::zeros(12).unwrap();
        for spec in specs {
            let g = spec.plant(&x).unwrap();
            for _ in 0..500 {
                let r = BitVector::random(12, &mut rng).unwrap();
                assert!((-1..=1).contains(&g.query(&y, &r, &mut rng)));
            }
        }
    }

    #[test]
    fn noisy_epsilon_one_is_perfect() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = BitVector::random(10, &mut rng).unwrap();
        let noisy = NoisyGuesser::new(x.clone(), 1.0).unwrap();
        let perfect = PerfectGuesser::new(x);
        let y = BitVector::zeros(10).unwrap();
        for _ in 0..1000 {
            let r = BitVector::random(10, &mut rng).unwrap();
            assert_eq!(
                noisy.query(&y, &r, &mut rng),
                perfect.query(&y, &r, &mut rng)
            );
        }
    }

    #[test]
    fn noisy_correlation_tracks_epsilon() {
        let x: BitVector = "110100101101".parse().unwrap();
        let n = 40_000;
        for (i, eps) in [0.0, 0.25, 0.5, 1.0].into_iter().enumerate() {
            let g = NoisyGuesser::new(x.clone(), eps).unwrap();
            let se = libm::sqrt((1.0 - eps * eps) / n as f64).max(1e-9);
            let got = agreement(&g, &x, n, i as u64);
            assert!((got - eps).abs() <= 3.0 * se + 1e-12, "eps {eps}: {got}");
        }
    }

    #[test]
    fn adversarial_halfspace_has_zero_correlation() {
        let x: BitVector = "1011".parse().unwrap();
        let g =
            AdversarialSignGuesser::new(x.clone(), CorrectSet::Halfspace("0100".parse().unwrap()))
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let snap = DeterministicSnapshotGuesser::capture(&g, &x, 4, &mut rng).unwrap();
        let sum: i32 = (0..16u64)
            .map(|r| {
                let rv = BitVector::from_u64(r, 4).unwrap();
                (snap.table()[r as usize] * hardcore_bit(&x, &rv).unwrap()) as i32
            })
            .sum();
        assert_eq!(sum, 0);
    }

    #[test]
    fn parameter_validation() {
        let x = BitVector::zeros(4).unwrap();
        assert!(NoisyGuesser::new(x.clone(), 1.5).is_err());
        assert!(AbstainingGuesser::new(x.clone(), 0.5, -0.1).is_err());
        assert!(DeterministicSnapshotGuesser::from_table(2, alloc::vec![0, 1, 2, -1]).is_err());
        assert!(DeterministicSnapshotGuesser::from_table(2, alloc::vec![0, 1]).is_err());
        assert!(AdversarialSignGuesser::new(x, CorrectSet::Table(alloc::vec![true; 8])).is_err());
    }

    #[test]
    fn counting_wrapper_counts() {
        let g = CountingGuesser::new(
            GuesserSpec::Silent
                .plant(&BitVector::zeros(3).unwrap())
                .unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let z = BitVector::zeros(3).unwrap();
        for _ in 0..17 {
            g.query(&z, &z, &mut rng);
        }
        assert_eq!(g.count(), 17);
    }
}
