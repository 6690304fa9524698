use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{toeplitz_apply, BitVector, ToeplitzMatrix};
use crate::oracle::OneWayFunction;

/// Largest width checked exhaustively for bijectivity at construction.
pub const EXHAUSTIVE_CHECK_MAX: usize = 16;

/// Bits emitted from each state; fixed when the generator is seeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    /// The single bit `x · r`.
    InnerProduct(BitVector),
    /// The `i` bits `x · T`.
    Toeplitz(ToeplitzMatrix),
}

impl Predicate {
    pub fn bits_per_step(&self) -> usize {
        match self {
            Self::InnerProduct(_) => 1,
            Self::Toeplitz(t) => t.cols(),
        }
    }

    fn input_len(&self) -> usize {
        match self {
            Self::InnerProduct(r) => r.len(),
            Self::Toeplitz(t) => t.rows(),
        }
    }

    pub fn eval(&self, x: &BitVector) -> Result<BitVector> {
        match self {
            Self::InnerProduct(r) => BitVector::from_bits(&[x.dot(r)?]),
            Self::Toeplitz(t) => toeplitz_apply(t, x),
        }
    }
}

/// Iterated-predicate generator: step `j >= 1` emits `predicate(f^j(seed))`.
#[derive(Debug, Clone)]
pub struct PrgState<F> {
    f: F,
    current: BitVector,
    predicate: Predicate,
}

/// Whether `f` permutes `{0,1}^n`, by enumeration (`n <= 16`).
pub fn is_permutation<F: OneWayFunction + ?Sized>(f: &F) -> Result<bool> {
    let n = f.n_in();
    if n > EXHAUSTIVE_CHECK_MAX {
        return Err(Error::Parameter("exhaustive bijection check needs n <= 16"));
    }
    if f.n_out() != n {
        return Ok(false);
    }
    let mut seen = vec![false; 1 << n];
    for v in 0..1u64 << n {
        let img = f.eval(&BitVector::from_u64(v, n)?)?.to_u64()? as usize;
        if core::mem::replace(&mut seen[img], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl<F: OneWayFunction> PrgState<F> {
    /// Rejects `f` unless it is a bijection: checked exhaustively for
    /// `n <= 16`, taken from [`OneWayFunction::is_bijection`] above that.
    pub fn new(f: F, seed: BitVector, predicate: Predicate) -> Result<Self> {
        let n = f.n_in();
        if f.n_out() != n {
            return Err(Error::NotBijective);
        }
        if seed.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: seed.len(),
            });
        }
        if predicate.input_len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: predicate.input_len(),
            });
        }
        let ok = if n <= EXHAUSTIVE_CHECK_MAX {
            is_permutation(&f)?
        } else {
            f.is_bijection()
        };
        if !ok {
            return Err(Error::NotBijective);
        }
        Ok(Self {
            f,
            current: seed,
            predicate,
        })
    }

    pub fn current(&self) -> &BitVector {
        &self.current
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    /// Advances the state once and returns the predicate bits of the new state.
    pub fn step(&mut self) -> Result<BitVector> {
        self.current = self.f.eval(&self.current)?;
        self.predicate.eval(&self.current)
    }

    pub fn generate(&mut self, num_bits: usize) -> Result<BitVector> {
        if num_bits == 0 {
            return Err(Error::Parameter("num_bits must be at least 1"));
        }
        let mut bits = Vec::with_capacity(num_bits);
        while bits.len() < num_bits {
            let block = self.step()?;
            bits.extend(block.iter().take(num_bits - bits.len()));
        }
        BitVector::from_bits(&bits)
    }
}

/// `num_bits` generator output; emits `i` bits per step with a Toeplitz predicate.
pub fn prg_generate<F: OneWayFunction>(
    state: &mut PrgState<F>,
    num_bits: usize,
) -> Result<BitVector> {
    state.generate(num_bits)
}

/// Tail length and cycle length of the orbit of `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cycle {
    pub pre_period: u64,
    pub period: u64,
}

/// Floyd's tortoise-and-hare on the orbit of `start` under `f`.
///
/// Returns `None` if no repeat is found within `limit` hare steps.
pub fn floyd_cycle<F: OneWayFunction + ?Sized>(
    f: &F,
    start: &BitVector,
    limit: u64,
) -> Result<Option<Cycle>> {
    let mut tortoise = f.eval(start)?;
    let mut hare = f.eval(&tortoise)?;
    let mut steps = 2u64;
    while tortoise != hare {
        if steps >= limit {
            return Ok(None);
        }
        tortoise = f.eval(&tortoise)?;
        hare = f.eval(&f.eval(&hare)?)?;
        steps += 2;
    }
    let mut pre_period = 0;
    tortoise = start.clone();
    while tortoise != hare {
        tortoise = f.eval(&tortoise)?;
        hare = f.eval(&hare)?;
        pre_period += 1;
    }
    let mut period = 1;
    hare = f.eval(&tortoise)?;
    while tortoise != hare {
        hare = f.eval(&hare)?;
        period += 1;
    }
    Ok(Some(Cycle { pre_period, period }))
}
