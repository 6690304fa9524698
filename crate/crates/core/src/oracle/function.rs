use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, FieldElement};

/// A deterministic map `{0,1}^n_in → {0,1}^n_out`.
pub trait OneWayFunction: Send + Sync {
    fn n_in(&self) -> usize;
    fn n_out(&self) -> usize;
    fn eval(&self, x: &BitVector) -> Result<BitVector>;

    /// Whether the function is a permutation of `{0,1}^n` by construction.
    fn is_bijection(&self) -> bool {
        false
    }

    fn check_input(&self, x: &BitVector) -> Result<()> {
        if x.len() != self.n_in() {
            return Err(Error::LengthMismatch {
                expected: self.n_in(),
                actual: x.len(),
            });
        }
        Ok(())
    }
}

impl<F: OneWayFunction + ?Sized> OneWayFunction for Box<F> {
    fn n_in(&self) -> usize {
        (**self).n_in()
    }
    fn n_out(&self) -> usize {
        (**self).n_out()
    }
    fn eval(&self, x: &BitVector) -> Result<BitVector> {
        (**self).eval(x)
    }
    fn is_bijection(&self) -> bool {
        (**self).is_bijection()
    }
}

impl<F: OneWayFunction + ?Sized> OneWayFunction for &F {
    fn n_in(&self) -> usize {
        (**self).n_in()
    }
    fn n_out(&self) -> usize {
        (**self).n_out()
    }
    fn eval(&self, x: &BitVector) -> Result<BitVector> {
        (**self).eval(x)
    }
    fn is_bijection(&self) -> bool {
        (**self).is_bijection()
    }
}

/// `f(x) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroFunction {
    n_in: usize,
    n_out: usize,
}

impl ZeroFunction {
    pub fn new(n_in: usize, n_out: usize) -> Result<Self> {
        BitVector::zeros(n_in)?;
        BitVector::zeros(n_out)?;
        Ok(Self { n_in, n_out })
    }
}

impl OneWayFunction for ZeroFunction {
    fn n_in(&self) -> usize {
        self.n_in
    }
    fn n_out(&self) -> usize {
        self.n_out
    }
    fn eval(&self, x: &BitVector) -> Result<BitVector> {
        self.check_input(x)?;
        BitVector::zeros(self.n_out)
    }
}

/// Random function given by a keyed hash of the input: entry `x` of the
/// table is computed on demand, so no table is materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomTableFunction {
    n_in: usize,
    n_out: usize,
    key: u64,
}

impl RandomTableFunction {
    pub const MAX_INPUT: usize = 20;

    pub fn new(n_in: usize, n_out: usize, seed: u64) -> Result<Self> {
        if n_in == 0 || n_in > Self::MAX_INPUT {
            return Err(Error::Parameter("random table input length must be 1..=20"));
        }
        if n_out == 0 || n_out > 64 {
            return Err(Error::Parameter(
                "random table output length must be 1..=64",
            ));
        }
        Ok(Self {
            n_in,
            n_out,
            key: splitmix64(seed ^ 0x5a17_7ab1_e000_0000),
        })
    }
}

impl OneWayFunction for RandomTableFunction {
    fn n_in(&self) -> usize {
        self.n_in
    }
    fn n_out(&self) -> usize {
        self.n_out
    }
    fn eval(&self, x: &BitVector) -> Result<BitVector> {
        self.check_input(x)?;
        let v = splitmix64(splitmix64(self.key ^ x.to_u64()?) ^ self.key.rotate_left(17));
        BitVector::from_u64(v, self.n_out)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Balanced Feistel network over `n = 2h` bits with one lookup table per round.
///
/// The left half is bits `0..h`, the right half bits `h..n`. A round maps
/// `(L, R) ↦ (R, L ⊕ F(R))`, which is invertible whatever `F` is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyedBijection {
    n: usize,
    half: usize,
    tables: Vec<Vec<u32>>,
}

impl KeyedBijection {
    pub const ROUNDS: usize = 4;
    pub const MAX_INPUT: usize = 32;

    /// Four rounds with tables drawn from `seed`.
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        let half = Self::check_width(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = half_mask(half);
        let tables = (0..Self::ROUNDS)
            .map(|_| {
                (0..1usize << half)
                    .map(|_| rng.gen::<u32>() & mask)
                    .collect()
            })
            .collect();
        Ok(Self { n, half, tables })
    }

    /// Explicit round tables; each must have `2^(n/2)` entries below `2^(n/2)`.
    pub fn from_tables(n: usize, tables: Vec<Vec<u32>>) -> Result<Self> {
        let half = Self::check_width(n)?;
        if tables.is_empty() {
            return Err(Error::Parameter("feistel needs at least one round"));
        }
        let mask = half_mask(half);
        for t in &tables {
            if t.len() != 1 << half || t.iter().any(|&v| v & !mask != 0) {
                return Err(Error::Parameter("feistel table has wrong shape"));
            }
        }
        Ok(Self { n, half, tables })
    }

    fn check_width(n: usize) -> Result<usize> {
        if !(2..=Self::MAX_INPUT).contains(&n) || !n.is_multiple_of(2) {
            return Err(Error::Parameter("feistel width must be even and 2..=32"));
        }
        Ok(n / 2)
    }

    pub fn rounds(&self) -> usize {
        self.tables.len()
    }

    pub fn apply_u64(&self, x: u64) -> u64 {
        let mask = half_mask(self.half) as u64;
        let (mut l, mut r) = (x & mask, (x >> self.half) & mask);
        for t in &self.tables {
            let next = l ^ t[r as usize] as u64;
            l = r;
            r = next;
        }
        l | (r << self.half)
    }

    pub fn invert_u64(&self, y: u64) -> u64 {
        let mask = half_mask(self.half) as u64;
        let (mut l, mut r) = (y & mask, (y >> self.half) & mask);
        for t in self.tables.iter().rev() {
            let prev_l = r ^ t[l as usize] as u64;
            r = l;
            l = prev_l;
        }
        l | (r << self.half)
    }

    pub fn invert(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: y.len(),
            });
        }
        BitVector::from_u64(self.invert_u64(y.to_u64()?), self.n)
    }
}

fn half_mask(half: usize) -> u32 {
    if half >= 32 {
        u32::MAX
    } else {
        (1u32 << half) - 1
    }
}

impl OneWayFunction for KeyedBijection {
    fn n_in(&self) -> usize {
        self.n
    }
    fn n_out(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &BitVector) -> Result<BitVector> {
        self.check_input(x)?;
        BitVector::from_u64(self.apply_u64(x.to_u64()?), self.n)
    }
    fn is_bijection(&self) -> bool {
        true
    }
}

/// `f'(x ‖ r) = f(x) ‖ r`.
#[derive(Debug, Clone)]
pub struct PaddedFunction<F> {
    inner: F,
}

/// Pads `f` so its input carries the predicate vector `r` alongside `x`.
pub fn pad<F: OneWayFunction>(f: F) -> PaddedFunction<F> {
    PaddedFunction { inner: f }
}

impl<F: OneWayFunction> PaddedFunction<F> {
    pub fn inner(&self) -> &F {
        &self.inner
    }

    /// Length of `x` (and of `r`).
    pub fn half_len(&self) -> usize {
        self.inner.n_in()
    }
}

impl<F: OneWayFunction> OneWayFunction for PaddedFunction<F> {
    fn n_in(&self) -> usize {
        2 * self.inner.n_in()
    }
    fn n_out(&self) -> usize {
        self.inner.n_out() + self.inner.n_in()
    }
    fn eval(&self, input: &BitVector) -> Result<BitVector> {
        if !input.len().is_multiple_of(2) {
            return Err(Error::Parameter("padded input length must be even"));
        }
        self.check_input(input)?;
        let (x, r) = input.split_at(self.inner.n_in())?;
        self.inner.eval(&x)?.concat(&r)
    }
    fn is_bijection(&self) -> bool {
        self.inner.is_bijection() && self.inner.n_in() == self.inner.n_out()
    }
}

/// `(a, x) ↦ (a, f(x) ⊕ a·x)` over GF(2^m), with `x` and `f(x)` zero-padded
/// to `m` bits. Input layout is `a ‖ x` (`m + n` bits), output `a ‖ v` (`2m`).
#[derive(Debug, Clone)]
pub struct AlmostBijection<F> {
    inner: F,
    m: u32,
}

pub fn almost_bijection<F: OneWayFunction>(f: F, m: u32) -> Result<AlmostBijection<F>> {
    let n = f.n_in();
    if f.n_out() != n {
        return Err(Error::Parameter(
            "almost_bijection needs a length-preserving f",
        ));
    }
    if (m as usize) < n + 1 {
        return Err(Error::Parameter(
            "field degree must exceed the input length",
        ));
    }
    FieldElement::zero(m)?;
    Ok(AlmostBijection { inner: f, m })
}

impl<F: OneWayFunction> AlmostBijection<F> {
    pub fn degree(&self) -> u32 {
        self.m
    }
}

impl<F: OneWayFunction> OneWayFunction for AlmostBijection<F> {
    fn n_in(&self) -> usize {
        self.m as usize + self.inner.n_in()
    }
    fn n_out(&self) -> usize {
        2 * self.m as usize
    }
    fn eval(&self, input: &BitVector) -> Result<BitVector> {
        self.check_input(input)?;
        let m = self.m as usize;
        let (a_bits, x) = input.split_at(m)?;
        let a = FieldElement::new(self.m, a_bits.to_u64()?)?;
        let fx = self.inner.eval(&x)?.resized(m)?.to_u64()?;
        let xe = FieldElement::new(self.m, x.resized(m)?.to_u64()?)?;
        let v = fx ^ a.mul(&xe)?.value();
        a_bits.concat(&BitVector::from_u64(v, m)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn all_inputs(n: usize) -> impl Iterator<Item = BitVector> {
        (0..1u64 << n).map(move |v| BitVector::from_u64(v, n).unwrap())
    }

    fn is_injective<F: OneWayFunction>(f: &F) -> bool {
        let mut seen = alloc::collections::BTreeSet::new();
        all_inputs(f.n_in()).all(|x| seen.insert(f.eval(&x).unwrap()))
    }

    #[test]
    fn zero_function() {
        let f = ZeroFunction::new(5, 3).unwrap();
        assert!(f.eval(&"10110".parse().unwrap()).unwrap().is_zero());
        assert!(f.eval(&"1011".parse().unwrap()).is_err());
    }

    #[test]
    fn random_table_is_deterministic_and_seeded() {
        let f = RandomTableFunction::new(20, 20, 5).unwrap();
        let g = RandomTableFunction::new(20, 20, 6).unwrap();
        let x = BitVector::from_u64(0xabcde, 20).unwrap();
        assert_eq!(f.eval(&x).unwrap(), f.eval(&x).unwrap());
        assert_ne!(f.eval(&x).unwrap(), g.eval(&x).unwrap());
        assert!(RandomTableFunction::new(21, 8, 0).is_err());
    }

    #[test]
    fn feistel_is_bijective_exhaustively() {
        for n in [4, 6, 8, 10, 12, 14, 16] {
            let f = KeyedBijection::new(n, n as u64 * 31).unwrap();
            assert!(is_injective(&f), "n = {n}");
        }
    }

    #[test]
    fn feistel_inverse_roundtrips() {
        let f = KeyedBijection::new(32, 1).unwrap();
        for x in [0u64, 1, 0xdead_beef, 0xffff_ffff] {
            assert_eq!(f.invert_u64(f.apply_u64(x)), x);
        }
        assert!(KeyedBijection::new(7, 0).is_err());
        assert!(KeyedBijection::new(34, 0).is_err());
    }

    #[test]
    fn single_zero_round_swaps_halves() {
        let f = KeyedBijection::from_tables(8, vec![vec![0; 16]]).unwrap();
        assert_eq!(f.apply_u64(0x3a), 0xa3);
    }

    #[test]
    fn pad_zero_function() {
        let f = pad(ZeroFunction::new(4, 4).unwrap());
        assert_eq!(f.n_in(), 8);
        let out = f.eval(&"10111001".parse().unwrap()).unwrap();
        assert_eq!(out, "00001001".parse().unwrap());
        assert!(f.eval(&"1011100".parse().unwrap()).is_err());
        assert!(f.eval(&"1011100101".parse().unwrap()).is_err());
    }

    #[test]
    fn pad_of_bijection_is_bijection() {
        let f = pad(KeyedBijection::new(6, 9).unwrap());
        assert!(f.is_bijection());
        assert!(is_injective(&f));
    }

    #[test]
    fn almost_bijection_examples() {
        let f = KeyedBijection::new(4, 2).unwrap();
        let h = almost_bijection(f.clone(), 5).unwrap();
        let x: BitVector = "1101".parse().unwrap();
        let a0 = BitVector::zeros(5).unwrap();
        let out = h.eval(&a0.concat(&x).unwrap()).unwrap();
        let (a_out, v) = out.split_at(5).unwrap();
        assert!(a_out.is_zero());
        assert_eq!(v, f.eval(&x).unwrap().resized(5).unwrap());
        assert_eq!(out, h.eval(&a0.concat(&x).unwrap()).unwrap());
        assert!(almost_bijection(KeyedBijection::new(4, 2).unwrap(), 4).is_err());
        assert!(almost_bijection(ZeroFunction::new(4, 3).unwrap(), 8).is_err());
    }

    #[test]
    fn multiplication_by_nonzero_is_injective() {
        for m in 2..=8u32 {
            let n = m as usize - 1;
            let h = almost_bijection(ZeroFunction::new(n, n).unwrap(), m).unwrap();
            for a in 1..(1u64 << m) {
                let a_bits = BitVector::from_u64(a, m as usize).unwrap();
                let mut seen = alloc::collections::BTreeSet::new();
                for x in all_inputs(n) {
                    assert!(seen.insert(h.eval(&a_bits.concat(&x).unwrap()).unwrap()));
                }
            }
        }
    }
}
