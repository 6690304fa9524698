use rand::RngCore;

use super::{BitMatrix, BitVector};
use crate::error::{Error, Result};

/// An `n × i` Toeplitz matrix over GF(2), stored as its `n + i − 1` bit seed.
///
/// `entry(a, b) = seed[a − b + i − 1]`, so the matrix is constant along
/// diagonals. Column `b` is the seed window starting at `i − 1 − b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToeplitzMatrix {
    rows: usize,
    cols: usize,
    seed: BitVector,
}

impl ToeplitzMatrix {
    pub fn new(rows: usize, cols: usize, seed: BitVector) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Parameter("toeplitz dimensions must be positive"));
        }
        if seed.len() != rows + cols - 1 {
            return Err(Error::LengthMismatch {
                expected: rows + cols - 1,
                actual: seed.len(),
            });
        }
        Ok(Self { rows, cols, seed })
    }

    pub fn random<R: RngCore + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Parameter("toeplitz dimensions must be positive"));
        }
        Self::new(rows, cols, BitVector::random(rows + cols - 1, rng)?)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> &BitVector {
        &self.seed
    }

    pub fn entry(&self, a: usize, b: usize) -> Result<bool> {
        if a >= self.rows {
            return Err(Error::IndexOutOfRange {
                index: a,
                len: self.rows,
            });
        }
        if b >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: b,
                len: self.cols,
            });
        }
        self.seed.get(a + self.cols - 1 - b)
    }

    pub fn column(&self, b: usize) -> Result<BitVector> {
        if b >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: b,
                len: self.cols,
            });
        }
        self.seed.slice(self.cols - 1 - b, self.rows)
    }

    /// Dense copy, mainly for cross-checks.
    pub fn to_dense(&self) -> Result<BitMatrix> {
        let mut m = BitMatrix::zeros(self.rows, self.cols)?;
        for a in 0..self.rows {
            for b in 0..self.cols {
                m.set(a, b, self.entry(a, b)?)?;
            }
        }
        Ok(m)
    }

    /// Rank over GF(2) by Gaussian elimination on the columns.
    pub fn rank(&self) -> Result<usize> {
        let mut basis: alloc::vec::Vec<BitVector> = alloc::vec::Vec::new();
        for b in 0..self.cols {
            let mut v = self.column(b)?;
            for piv in &basis {
                let lead = first_one(piv);
                if v.bit(lead) {
                    v.xor_assign(piv)?;
                }
            }
            if !v.is_zero() {
                // keep basis reduced so each pivot bit appears in one vector
                let lead = first_one(&v);
                for piv in basis.iter_mut() {
                    if piv.bit(lead) {
                        piv.xor_assign(&v)?;
                    }
                }
                basis.push(v);
            }
        }
        Ok(basis.len())
    }
}

fn first_one(v: &BitVector) -> usize {
    v.iter().position(|b| b).unwrap_or(0)
}

/// `x·T`: bit `b` is the parity of `Σ_a x[a]·entry(a, b)`.
pub fn toeplitz_apply(t: &ToeplitzMatrix, x: &BitVector) -> Result<BitVector> {
    if x.len() != t.rows {
        return Err(Error::LengthMismatch {
            expected: t.rows,
            actual: x.len(),
        });
    }
    let mut out = BitVector::zeros(t.cols)?;
    for b in 0..t.cols {
        if t.column(b)?.dot_unchecked(x) {
            out.set(b, true)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    // independent oracle: read entries off the seed directly and multiply densely
    fn dense_apply(seed: &BitVector, n: usize, i: usize, x: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(i).unwrap();
        for b in 0..i {
            let mut acc = false;
            for a in 0..n {
                acc ^= x.get(a).unwrap() & seed.get(a + i - 1 - b).unwrap();
            }
            out.set(b, acc).unwrap();
        }
        out
    }

    #[test]
    fn worked_example() {
        let seed = bv("10110");
        let t = ToeplitzMatrix::new(4, 2, seed.clone()).unwrap();
        let x = bv("1100");
        // column 0 = seed[1..5] = 0110, column 1 = seed[0..4] = 1011
        // x·col0 = 0+1 = 1, x·col1 = 1+0 = 1
        assert_eq!(dense_apply(&seed, 4, 2, &x), bv("11"));
        assert_eq!(toeplitz_apply(&t, &x).unwrap(), bv("11"));
        assert_eq!(t.to_dense().unwrap().vec_mat(&x).unwrap(), bv("11"));
    }

    #[test]
    fn constant_along_diagonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = ToeplitzMatrix::random(9, 5, &mut rng).unwrap();
        for a in 0..8 {
            for b in 0..4 {
                assert_eq!(t.entry(a, b).unwrap(), t.entry(a + 1, b + 1).unwrap());
            }
        }
        let again = ToeplitzMatrix::new(9, 5, t.seed().clone()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn zero_and_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let t = ToeplitzMatrix::random(13, 4, &mut rng).unwrap();
            let x = BitVector::random(13, &mut rng).unwrap();
            let y = BitVector::random(13, &mut rng).unwrap();
            assert!(toeplitz_apply(&t, &BitVector::zeros(13).unwrap())
                .unwrap()
                .is_zero());
            let lhs = toeplitz_apply(&t, &x.xor(&y).unwrap()).unwrap();
            let rhs = toeplitz_apply(&t, &x)
                .unwrap()
                .xor(&toeplitz_apply(&t, &y).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(lhs, dense_apply(t.seed(), 13, 4, &x.xor(&y).unwrap()));
        }
    }

    #[test]
    fn dimension_errors() {
        assert!(ToeplitzMatrix::new(4, 2, bv("1011")).is_err());
        let t = ToeplitzMatrix::new(4, 2, bv("10110")).unwrap();
        assert!(toeplitz_apply(&t, &bv("101")).is_err());
        assert!(t.entry(4, 0).is_err());
    }

    #[test]
    fn two_universal_exact() {
        let (n, i) = (8usize, 4usize);
        let seeds = 1u64 << (n + i - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let x = BitVector::random(n, &mut rng).unwrap();
            let mut x2 = BitVector::random(n, &mut rng).unwrap();
            if x2 == x {
                x2.flip(0).unwrap();
            }
            let collisions = (0..seeds)
                .filter(|&s| {
                    let t = ToeplitzMatrix::new(n, i, BitVector::from_u64(s, n + i - 1).unwrap())
                        .unwrap();
                    toeplitz_apply(&t, &x).unwrap() == toeplitz_apply(&t, &x2).unwrap()
                })
                .count() as u64;
            assert_eq!(collisions * 16, seeds);
        }
    }

    #[test]
    fn rank_of_identity_like() {
        // seed 0001000 with n=4,i=4 puts ones on the main diagonal
        let t = ToeplitzMatrix::new(4, 4, bv("0001000")).unwrap();
        assert_eq!(t.rank().unwrap(), 4);
        let z = ToeplitzMatrix::new(4, 4, bv("0000000")).unwrap();
        assert_eq!(z.rank().unwrap(), 0);
    }
}
