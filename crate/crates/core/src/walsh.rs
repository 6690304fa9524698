//! Integer Walsh–Hadamard transform over Z₂ᵏ.
//!
//! `h(z) = Σ_p (−1)^{popcount(z & p)} g(p)`, with `p` and `z` read as
//! little-endian k-bit integers. Arithmetic is exact `i64` throughout.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported transform dimension (2²⁶ entries, 512 MiB of `i64`).
pub const MAX_DIMENSION: usize = 26;

/// Largest dimension accepted by the quadratic reference transform.
pub const NAIVE_MAX_DIMENSION: usize = 14;

/// `2^k` signed integers indexed by `p ∈ {0,1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum {
    k: usize,
    values: Vec<i64>,
}

impl Spectrum {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let k = len.trailing_zeros() as usize;
        if k > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge {
                k,
                max: MAX_DIMENSION,
            });
        }
        Ok(Self { k, values })
    }

    pub fn zeros(k: usize) -> Result<Self> {
        if k > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge {
                k,
                max: MAX_DIMENSION,
            });
        }
        Ok(Self {
            k,
            values: alloc::vec![0; 1 << k],
        })
    }

    /// Indicator of `p`.
    pub fn delta(k: usize, p: usize) -> Result<Self> {
        let mut s = Self::zeros(k)?;
        if p >= s.values.len() {
            return Err(Error::IndexOutOfRange {
                index: p,
                len: s.values.len(),
            });
        }
        s.values[p] = 1;
        Ok(s)
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }
}

/// In-place butterfly on a slice whose length is a power of two.
///
/// Used directly by the inverter to avoid reallocating per bit position.
pub fn fwht_in_place(values: &mut [i64]) {
    debug_assert!(values.len().is_power_of_two());
    let len = values.len();
    let mut half = 1;
    while half < len {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        half *= 2;
    }
}

/// Fast transform in `O(k·2^k)`; the input is left untouched.
pub fn fwht(g: &Spectrum) -> Result<Spectrum> {
    if g.k > MAX_DIMENSION {
        return Err(Error::DimensionTooLarge {
            k: g.k,
            max: MAX_DIMENSION,
        });
    }
    let mut values = g.values.clone();
    fwht_in_place(&mut values);
    Ok(Spectrum { k: g.k, values })
}

/// Direct double sum in `O(4^k)`. Reference for [`fwht`].
pub fn naive_wht(g: &Spectrum) -> Result<Spectrum> {
    if g.k > NAIVE_MAX_DIMENSION {
        return Err(Error::DimensionTooLarge {
            k: g.k,
            max: NAIVE_MAX_DIMENSION,
        });
    }
    let values = (0..g.values.len())
        .map(|z| {
            g.values
                .iter()
                .enumerate()
                .map(|(p, &v)| if (z & p).count_ones() % 2 == 0 { v } else { -v })
                .sum()
        })
        .collect();
    Ok(Spectrum { k: g.k, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signs(k: usize, rng: &mut ChaCha8Rng) -> Spectrum {
        Spectrum::new((0..1 << k).map(|_| rng.gen_range(-1i64..=1)).collect()).unwrap()
    }

    #[test]
    fn delta_at_zero_gives_all_ones() {
        for k in 0..=6 {
            let d = Spectrum::delta(k, 0).unwrap();
            assert!(fwht(&d).unwrap().values().iter().all(|&v| v == 1));
            assert!(naive_wht(&d).unwrap().values().iter().all(|&v| v == 1));
        }
    }

    #[test]
    fn all_ones_concentrates_at_zero() {
        let g = Spectrum::new(vec![1; 8]).unwrap();
        assert_eq!(fwht(&g).unwrap().values(), &[8, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn dimension_zero_is_identity() {
        let g = Spectrum::new(vec![-5]).unwrap();
        assert_eq!(naive_wht(&g).unwrap(), g);
        assert_eq!(fwht(&g).unwrap(), g);
    }

    #[test]
    fn k3_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let g = random_signs(3, &mut rng);
            assert_eq!(fwht(&g).unwrap(), naive_wht(&g).unwrap());
        }
    }

    #[test]
    fn agrees_with_naive_up_to_k10() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for trial in 0..1000 {
            let g = random_signs(trial % 11, &mut rng);
            assert_eq!(fwht(&g).unwrap(), naive_wht(&g).unwrap());
        }
    }

    #[test]
    fn shape_errors() {
        assert_eq!(Spectrum::new(vec![1, 2, 3]), Err(Error::NotPowerOfTwo(3)));
        assert_eq!(Spectrum::new(vec![]), Err(Error::NotPowerOfTwo(0)));
        assert!(Spectrum::zeros(MAX_DIMENSION + 1).is_err());
        let big = Spectrum::zeros(NAIVE_MAX_DIMENSION + 1).unwrap();
        assert!(naive_wht(&big).is_err());
    }

    #[test]
    fn input_not_mutated() {
        let g = Spectrum::new(vec![1, -1, 0, 1]).unwrap();
        let copy = g.clone();
        let _ = fwht(&g).unwrap();
        assert_eq!(g, copy);
    }

    proptest! {
        #[test]
        fn involution_and_parseval(seed: u64, k in 0usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_signs(k, &mut rng);
            let h = fwht(&g).unwrap();
            let hh = fwht(&h).unwrap();
            let scale = 1i64 << k;
            prop_assert!(hh.values().iter().zip(g.values()).all(|(&a, &b)| a == scale * b));
            let energy_h: i64 = h.values().iter().map(|v| v * v).sum();
            let energy_g: i64 = g.values().iter().map(|v| v * v).sum();
            prop_assert_eq!(energy_h, scale * energy_g);
            prop_assert!(h.values().iter().all(|v| v.abs() <= scale));
        }

        #[test]
        fn linearity(seed: u64, k in 0usize..9, a in -5i64..5, b in -5i64..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_signs(k, &mut rng);
            let g2 = random_signs(k, &mut rng);
            let combo = Spectrum::new(
                g.values().iter().zip(g2.values()).map(|(x, y)| a * x + b * y).collect(),
            ).unwrap();
            let lhs = fwht(&combo).unwrap();
            let (h, h2) = (fwht(&g).unwrap(), fwht(&g2).unwrap());
            prop_assert!(lhs.values().iter().zip(h.values().iter().zip(h2.values()))
                .all(|(&l, (&x, &y))| l == a * x + b * y));
        }
    }
}
