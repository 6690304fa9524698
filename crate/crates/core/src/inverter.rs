//! List-decoding inverter.
//!
//! Given `y = f(x)` and a guesser for `b(x, r) = (−1)^(x·r)`, draw a random
//! `R ∈ {0,1}^{n×k}`, query the guesser at `R·p ⊕ e_i` for every `p ∈ {0,1}^k`
//! and every bit position `i`, and Walsh-transform each row of answers:
//!
//! ```text
//! h_i(z) = Σ_p (−1)^{z·p} G(R·p ⊕ e_i)
//! ```
//!
//! When `z = x·R` the summands are `(−1)^{x_i}` times the agreement of the
//! guesser with `b(x, ·)`, so the sign of `h_i(z)` is bit `i` of `x`. Since
//! `x·R` is unknown, every `z` yields a candidate and the output is a list of
//! `2^k` strings.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::gf2::{random_matrix, BitMatrix, BitVector};
use crate::oracle::{Guesser, Inverter, OneWayFunction, PlantGuesser};
use crate::seed::trial_rng;
use crate::walsh::{fwht_in_place, MAX_DIMENSION};

pub const DEFAULT_K_MAX: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverterConfig {
    pub n: usize,
    /// Fixed spectrum dimension; `None` selects the randomized-k driver.
    pub k: Option<usize>,
    pub k_max: usize,
    /// Keep only candidates `x̂` with `f(x̂) = y`.
    pub verify: bool,
}

impl InverterConfig {
    pub fn fixed(n: usize, k: usize) -> Self {
        Self {
            n,
            k: Some(k),
            k_max: DEFAULT_K_MAX.max(k),
            verify: false,
        }
    }

    pub fn randomized(n: usize) -> Self {
        Self {
            n,
            k: None,
            k_max: DEFAULT_K_MAX,
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("secret length must be positive"));
        }
        if self.k_max == 0 || self.k_max > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge {
                k: self.k_max,
                max: MAX_DIMENSION,
            });
        }
        match self.k {
            Some(0) => Err(Error::Parameter("k must be at least 1")),
            Some(k) if k > self.k_max => Err(Error::DimensionTooLarge { k, max: self.k_max }),
            None if self.n < 2 => Err(Error::Parameter("randomized k needs n >= 2")),
            _ => Ok(()),
        }
    }
}

/// `⌈log₂ v⌉` for `v >= 1`.
pub fn ceil_log2(v: u64) -> usize {
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros() as usize
    }
}

/// Outcome of drawing the spectrum dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSample {
    Drawn {
        l: usize,
        k: usize,
    },
    /// Every one of the `2n` coins came up 1.
    AllOnes {
        flips: usize,
    },
    /// `k` exceeded the cap.
    Overflow {
        l: usize,
        k: usize,
    },
}

impl KSample {
    pub fn k(&self) -> Option<usize> {
        match self {
            Self::Drawn { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn l(&self) -> Option<usize> {
        match self {
            Self::Drawn { l, .. } | Self::Overflow { l, .. } => Some(*l),
            Self::AllOnes { .. } => None,
        }
    }
}

/// Flips up to `2n` fair coins; `l` is the number of ones before the first
/// zero and `k = l + ⌈log₂ 5n⌉`.
pub fn sample_k(n: usize, k_max: usize, rng: &mut dyn RngCore) -> Result<KSample> {
    if n < 2 {
        return Err(Error::Parameter("randomized k needs n >= 2"));
    }
    let flips = 2 * n;
    let Some(l) = (0..flips).find(|_| !rng.gen::<bool>()) else {
        return Ok(KSample::AllOnes { flips });
    };
    let k = l + ceil_log2(5 * n as u64);
    Ok(if k > k_max {
        KSample::Overflow { l, k }
    } else {
        KSample::Drawn { l, k }
    })
}

/// The `2^k` candidates, stored as `n` bit-planes over `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateList {
    n: usize,
    k: usize,
    planes: Vec<Vec<u64>>,
}

impl CandidateList {
    fn new(n: usize, k: usize) -> Self {
        let words = (1usize << k).div_ceil(64);
        Self {
            n,
            k,
            planes: vec![vec![0; words]; n],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn candidate(&self, z: usize) -> Result<BitVector> {
        if z >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: z,
                len: self.len(),
            });
        }
        let mut v = BitVector::zeros(self.n)?;
        for (i, plane) in self.planes.iter().enumerate() {
            if (plane[z / 64] >> (z % 64)) & 1 == 1 {
                v.set(i, true)?;
            }
        }
        Ok(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.len()).map(move |z| self.candidate(z).expect("z in range"))
    }

    /// Smallest `z` whose candidate equals `x`.
    pub fn find(&self, x: &BitVector) -> Option<usize> {
        if x.len() != self.n {
            return None;
        }
        let len = self.len();
        let words = self.planes.first().map_or(0, Vec::len);
        for w in 0..words {
            let valid = if (w + 1) * 64 <= len {
                u64::MAX
            } else {
                (1u64 << (len % 64)) - 1
            };
            let mut m = valid;
            for (i, plane) in self.planes.iter().enumerate() {
                m &= if x.bit(i) { plane[w] } else { !plane[w] };
                if m == 0 {
                    break;
                }
            }
            if m != 0 {
                return Some(w * 64 + m.trailing_zeros() as usize);
            }
        }
        None
    }

    fn set_plane_from_spectrum(&mut self, i: usize, h: &[i64]) {
        let plane = &mut self.planes[i];
        for (z, &v) in h.iter().enumerate() {
            // positive or zero spectrum reads as bit 0
            if v < 0 {
                plane[z / 64] |= 1 << (z % 64);
            }
        }
    }
}

/// Everything produced by one fixed-k run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedKRun {
    pub list: CandidateList,
    pub matrix: BitMatrix,
    pub queries: u64,
}

/// Runs the decoder at a fixed `k`.
///
/// `R` is drawn first from `rng`; guesser coins come from the same stream.
/// Issues exactly `n·2^k` queries, one per `(i, p)` with `p = 0` included.
pub fn invert_fixed_k(
    guesser: &dyn Guesser,
    y: &BitVector,
    n: usize,
    k: usize,
    k_max: usize,
    rng: &mut dyn RngCore,
) -> Result<FixedKRun> {
    InverterConfig {
        n,
        k: Some(k),
        k_max,
        verify: false,
    }
    .validate()?;
    let matrix = random_matrix(n, k, rng)?;
    let span = matrix.span()?;
    let mut list = CandidateList::new(n, k);
    let mut g = vec![0i64; 1 << k];
    let mut point = BitVector::zeros(n)?;
    let mut queries = 0u64;
    for i in 0..n {
        for (p, rp) in span.iter().enumerate() {
            point.assign(rp)?;
            point.flip(i)?;
            let v = guesser.query(y, &point, rng);
            if !(-1..=1).contains(&v) {
                return Err(Error::GuesserOutput(v));
            }
            g[p] = v as i64;
            queries += 1;
        }
        fwht_in_place(&mut g);
        list.set_plane_from_spectrum(i, &g);
    }
    Ok(FixedKRun {
        list,
        matrix,
        queries,
    })
}

/// Raw spectra `h_i` for every `i`, for cross-checking against direct sums.
pub fn spectra_for_matrix(
    guesser: &dyn Guesser,
    y: &BitVector,
    matrix: &BitMatrix,
    rng: &mut dyn RngCore,
) -> Result<Vec<Vec<i64>>> {
    let n = matrix.rows();
    let span = matrix.span()?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut g: Vec<i64> = span
            .iter()
            .map(|rp| {
                let mut point = rp.clone();
                point.flip(i)?;
                Ok(guesser.query(y, &point, rng) as i64)
            })
            .collect::<Result<_>>()?;
        fwht_in_place(&mut g);
        out.push(g);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedRun {
    pub draw: KSample,
    /// Absent when the draw failed; the trial then counts as unsuccessful.
    pub run: Option<FixedKRun>,
}

impl RandomizedRun {
    pub fn queries(&self) -> u64 {
        self.run.as_ref().map_or(0, |r| r.queries)
    }
}

/// One `sample_k` draw followed by [`invert_fixed_k`] at the drawn `k`.
pub fn invert_randomized(
    guesser: &dyn Guesser,
    y: &BitVector,
    n: usize,
    k_max: usize,
    rng: &mut dyn RngCore,
) -> Result<RandomizedRun> {
    let draw = sample_k(n, k_max, rng)?;
    let run = match draw {
        KSample::Drawn { k, .. } => Some(invert_fixed_k(guesser, y, n, k, k_max, rng)?),
        _ => None,
    };
    Ok(RandomizedRun { draw, run })
}

/// Candidates `(z, x̂)` with `f(x̂) = y`, in increasing `z`.
pub fn verify_candidates<F: OneWayFunction + ?Sized>(
    f: &F,
    y: &BitVector,
    list: &CandidateList,
) -> Result<Vec<(usize, BitVector)>> {
    if f.n_in() != list.n() {
        return Err(Error::LengthMismatch {
            expected: list.n(),
            actual: f.n_in(),
        });
    }
    let mut out = Vec::new();
    for (z, cand) in list.iter().enumerate() {
        if f.eval(&cand)? == *y {
            out.push((z, cand));
        }
    }
    Ok(out)
}

/// Per-trial record; reproducible from `(master_seed, trial)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialTranscript {
    pub trial: u64,
    pub master_seed: u64,
    pub secret: BitVector,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub draw_failure: Option<KSample>,
    pub matrix: Option<BitMatrix>,
    pub queries: u64,
    pub success: bool,
    /// `z` at which the secret was found.
    pub hit_index: Option<u64>,
    pub verified: Option<usize>,
}

/// Runs trial `index`: draws `x`, plants the guesser, inverts `f(x)`.
pub fn run_trial<P, F>(
    config: &InverterConfig,
    planter: &P,
    f: &F,
    master_seed: u64,
    index: u64,
) -> Result<TrialTranscript>
where
    P: PlantGuesser + ?Sized,
    F: OneWayFunction + ?Sized,
{
    config.validate()?;
    if f.n_in() != config.n {
        return Err(Error::LengthMismatch {
            expected: config.n,
            actual: f.n_in(),
        });
    }
    let mut rng = trial_rng(master_seed, index);
    let secret = BitVector::random(config.n, &mut rng)?;
    let y = f.eval(&secret)?;
    let guesser = planter.plant(&secret)?;
    let (draw, run) = match config.k {
        Some(k) => (
            KSample::Drawn { l: 0, k },
            Some(invert_fixed_k(
                &guesser,
                &y,
                config.n,
                k,
                config.k_max,
                &mut rng,
            )?),
        ),
        None => {
            let r = invert_randomized(&guesser, &y, config.n, config.k_max, &mut rng)?;
            (r.draw, r.run)
        }
    };
    let mut transcript = TrialTranscript {
        trial: index,
        master_seed,
        secret: secret.clone(),
        k: draw.k(),
        l: if config.k.is_some() { None } else { draw.l() },
        draw_failure: run.is_none().then_some(draw),
        matrix: None,
        queries: 0,
        success: false,
        hit_index: None,
        verified: None,
    };
    if let Some(run) = run {
        let hit = if config.verify {
            let verified = verify_candidates(f, &y, &run.list)?;
            transcript.verified = Some(verified.len());
            verified.iter().find(|(_, c)| *c == secret).map(|(z, _)| *z)
        } else {
            run.list.find(&secret)
        };
        transcript.queries = run.queries;
        transcript.success = hit.is_some();
        transcript.hit_index = hit.map(|z| z as u64);
        transcript.matrix = Some(run.matrix);
    }
    Ok(transcript)
}

/// [`Inverter`] adapter for the decoder, fixed or randomized per its config.
#[derive(Debug, Clone)]
pub struct GlInverter {
    pub config: InverterConfig,
}

impl GlInverter {
    fn run(
        &self,
        guesser: &dyn Guesser,
        y: &BitVector,
        rng: &mut dyn RngCore,
    ) -> Result<Option<FixedKRun>> {
        self.config.validate()?;
        let c = &self.config;
        Ok(match c.k {
            Some(k) => Some(invert_fixed_k(guesser, y, c.n, k, c.k_max, rng)?),
            None => invert_randomized(guesser, y, c.n, c.k_max, rng)?.run,
        })
    }
}

impl Inverter for GlInverter {
    fn invert(
        &self,
        guesser: &dyn Guesser,
        y: &BitVector,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<BitVector>> {
        Ok(self
            .run(guesser, y, rng)?
            .map(|r| r.list.iter().collect())
            .unwrap_or_default())
    }

    fn recovers(
        &self,
        x: &BitVector,
        guesser: &dyn Guesser,
        y: &BitVector,
        rng: &mut dyn RngCore,
    ) -> Result<bool> {
        Ok(self
            .run(guesser, y, rng)?
            .is_some_and(|r| r.list.find(x).is_some()))
    }
}

/// Exact check that `R·p` and `R·p'` are jointly uniform over a uniform `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseReport {
    pub n: usize,
    pub k: usize,
    pub matrices: u64,
    pub pairs: usize,
    pub expected_per_cell: u64,
    /// Largest `|count − expected|` over every pair and cell.
    pub max_deviation: u64,
    /// Each single `R·p` (`p ≠ 0`) uniform on `{0,1}^n`.
    pub marginals_uniform: bool,
    pub uniform: bool,
}

pub const PAIRWISE_MAX_N: usize = 4;
pub const PAIRWISE_MAX_K: usize = 3;

fn check_pairwise_dims(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || n > PAIRWISE_MAX_N || k > PAIRWISE_MAX_K {
        return Err(Error::Parameter(
            "exact pairwise check needs 1 <= n <= 4, 1 <= k <= 3",
        ));
    }
    Ok(())
}

/// Row `a` of matrix number `m` holds bits `a·k .. (a+1)·k` of `m`.
fn matrix_from_index(n: usize, k: usize, m: u64) -> Result<BitMatrix> {
    let rows = (0..n)
        .map(|a| BitVector::from_u64(m >> (a * k), k))
        .collect::<Result<Vec<_>>>()?;
    BitMatrix::from_rows(rows)
}

/// Counts of `(R·p, R·p')` over all `2^{nk}` matrices, indexed `Rp + 2^n·Rp'`.
pub fn joint_distribution(n: usize, k: usize, p: u64, p2: u64) -> Result<Vec<u64>> {
    check_pairwise_dims(n, k)?;
    let top = 1u64 << k;
    if p == 0 || p2 == 0 || p >= top || p2 >= top {
        return Err(Error::Parameter("p and p' must be nonzero k-bit vectors"));
    }
    if p == p2 {
        return Err(Error::Parameter("p and p' must differ"));
    }
    let pv = BitVector::from_u64(p, k)?;
    let pv2 = BitVector::from_u64(p2, k)?;
    let mut counts = vec![0u64; 1 << (2 * n)];
    for m in 0..1u64 << (n * k) {
        let r = matrix_from_index(n, k, m)?;
        let a = r.mat_vec(&pv)?.to_u64()?;
        let b = r.mat_vec(&pv2)?.to_u64()?;
        counts[(a | (b << n)) as usize] += 1;
    }
    Ok(counts)
}

/// Enumerates every `R ∈ {0,1}^{n×k}` (`n <= 4`, `k <= 3`).
pub fn pairwise_independence_check(n: usize, k: usize) -> Result<PairwiseReport> {
    check_pairwise_dims(n, k)?;
    let matrices = 1u64 << (n * k);
    let expected = matrices >> (2 * n);
    let mut max_deviation = 0;
    let mut pairs = 0;
    for p in 1..1u64 << k {
        for p2 in (p + 1)..1u64 << k {
            pairs += 1;
            for c in joint_distribution(n, k, p, p2)? {
                max_deviation = max_deviation.max(c.abs_diff(expected));
            }
        }
    }
    let mut marginals_uniform = true;
    for p in 1..1u64 << k {
        let pv = BitVector::from_u64(p, k)?;
        let mut counts = vec![0u64; 1 << n];
        for m in 0..matrices {
            counts[matrix_from_index(n, k, m)?.mat_vec(&pv)?.to_u64()? as usize] += 1;
        }
        marginals_uniform &= counts.iter().all(|&c| c == matrices >> n);
    }
    Ok(PairwiseReport {
        n,
        k,
        matrices,
        pairs,
        expected_per_cell: expected,
        max_deviation,
        marginals_uniform,
        uniform: max_deviation == 0 && marginals_uniform,
    })
}
