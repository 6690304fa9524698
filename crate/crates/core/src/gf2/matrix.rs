use alloc::vec::Vec;

use rand::RngCore;

use super::BitVector;
use crate::error::{Error, Result};

/// Dense `rows × cols` matrix over GF(2), stored both row- and column-major.
///
/// Rows serve `mat_vec` (one dot product per output bit); columns serve the
/// span enumeration used by the inverter, where `R·p` is the XOR of the
/// columns selected by `p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Ok(Self {
            rows: (0..rows)
                .map(|_| BitVector::zeros(cols))
                .collect::<Result<_>>()?,
            cols: (0..cols)
                .map(|_| BitVector::zeros(rows))
                .collect::<Result<_>>()?,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true)?;
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Parameter("matrix needs at least one row"));
        };
        let k = first.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::LengthMismatch {
                expected: k,
                actual: bad.len(),
            });
        }
        let mut cols: Vec<BitVector> = (0..k)
            .map(|_| BitVector::zeros(rows.len()))
            .collect::<Result<_>>()?;
        for (a, row) in rows.iter().enumerate() {
            for (b, col) in cols.iter_mut().enumerate() {
                if row.bit(b) {
                    col.set(a, true)?;
                }
            }
        }
        Ok(Self { rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, a: usize) -> &BitVector {
        &self.rows[a]
    }

    pub fn column(&self, b: usize) -> &BitVector {
        &self.cols[b]
    }

    pub fn entry(&self, row: usize, col: usize) -> Result<bool> {
        self.rows
            .get(row)
            .ok_or(Error::IndexOutOfRange {
                index: row,
                len: self.rows.len(),
            })?
            .get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) -> Result<()> {
        if row >= self.rows() {
            return Err(Error::IndexOutOfRange {
                index: row,
                len: self.rows(),
            });
        }
        self.rows[row].set(col, value)?;
        self.cols[col].set(row, value)
    }

    /// `R·p`: output bit `a` is `row_a · p`.
    pub fn mat_vec(&self, p: &BitVector) -> Result<BitVector> {
        if p.len() != self.cols() {
            return Err(Error::LengthMismatch {
                expected: self.cols(),
                actual: p.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows())?;
        for (a, row) in self.rows.iter().enumerate() {
            if row.dot_unchecked(p) {
                out.set(a, true)?;
            }
        }
        Ok(out)
    }

    /// `x·R` (row vector times matrix): bit `b` is `x · column_b`.
    pub fn vec_mat(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.rows() {
            return Err(Error::LengthMismatch {
                expected: self.rows(),
                actual: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols())?;
        for (b, col) in self.cols.iter().enumerate() {
            if col.dot_unchecked(x) {
                out.set(b, true)?;
            }
        }
        Ok(out)
    }

    /// All `2^cols` products `R·p`, indexed by `p` as a little-endian integer.
    pub fn span(&self) -> Result<Vec<BitVector>> {
        let k = self.cols();
        if k > 30 {
            return Err(Error::DimensionTooLarge { k, max: 30 });
        }
        let mut out = Vec::with_capacity(1 << k);
        out.push(BitVector::zeros(self.rows())?);
        for p in 1usize..(1 << k) {
            let low = p.trailing_zeros() as usize;
            let mut v = out[p & (p - 1)].clone();
            v.xor_assign(&self.cols[low])?;
            out.push(v);
        }
        Ok(out)
    }
}

impl core::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list()
            .entries(self.rows.iter().map(|r| alloc::format!("{r}")))
            .finish()
    }
}

/// Uniform `n × k` matrix; each row takes `ceil(k/64)` words from `rng` in row order.
pub fn random_matrix<R: RngCore + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<BitMatrix> {
    if n == 0 || k == 0 {
        return Err(Error::Parameter("matrix dimensions must be positive"));
    }
    let rows = (0..n)
        .map(|_| BitVector::random(k, rng))
        .collect::<Result<Vec<_>>>()?;
    BitMatrix::from_rows(rows)
}

/// `R·p` as a free function.
pub fn mat_vec(r: &BitMatrix, p: &BitVector) -> Result<BitVector> {
    r.mat_vec(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    // independent oracle: entry-by-entry double loop
    fn naive_mat_vec(r: &BitMatrix, p: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(r.rows()).unwrap();
        for a in 0..r.rows() {
            let mut acc = false;
            for b in 0..r.cols() {
                acc ^= r.entry(a, b).unwrap() & p.get(b).unwrap();
            }
            out.set(a, acc).unwrap();
        }
        out
    }

    #[test]
    fn worked_example() {
        let r = BitMatrix::from_rows(alloc::vec![bv("11"), bv("01"), bv("10")]).unwrap();
        let p = bv("11");
        let expected = bv("011");
        assert_eq!(naive_mat_vec(&r, &p), expected);
        assert_eq!(mat_vec(&r, &p).unwrap(), expected);
    }

    #[test]
    fn zero_and_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_matrix(7, 5, &mut rng).unwrap();
        assert!(r.mat_vec(&BitVector::zeros(5).unwrap()).unwrap().is_zero());
        let id = BitMatrix::identity(9).unwrap();
        let p = BitVector::random(9, &mut rng).unwrap();
        assert_eq!(id.mat_vec(&p).unwrap(), p);
        assert!(r.mat_vec(&p).is_err());
    }

    #[test]
    fn linearity_exhaustive_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=4 {
            for k in 1..=4 {
                for _ in 0..8 {
                    let r = random_matrix(n, k, &mut rng).unwrap();
                    for p in 0..(1u64 << k) {
                        for q in 0..(1u64 << k) {
                            let pv = BitVector::from_u64(p, k).unwrap();
                            let qv = BitVector::from_u64(q, k).unwrap();
                            let lhs = r.mat_vec(&pv.xor(&qv).unwrap()).unwrap();
                            let rhs = r
                                .mat_vec(&pv)
                                .unwrap()
                                .xor(&r.mat_vec(&qv).unwrap())
                                .unwrap();
                            assert_eq!(lhs, rhs);
                            assert_eq!(r.mat_vec(&pv).unwrap(), naive_mat_vec(&r, &pv));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn span_matches_mat_vec() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = random_matrix(70, 6, &mut rng).unwrap();
        let span = r.span().unwrap();
        for (p, v) in span.iter().enumerate() {
            assert_eq!(
                *v,
                r.mat_vec(&BitVector::from_u64(p as u64, 6).unwrap())
                    .unwrap()
            );
        }
    }

    #[test]
    fn vec_mat_is_transpose_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = random_matrix(10, 4, &mut rng).unwrap();
        let x = BitVector::random(10, &mut rng).unwrap();
        let z = r.vec_mat(&x).unwrap();
        for b in 0..4 {
            assert_eq!(z.get(b).unwrap(), x.dot(r.column(b)).unwrap());
        }
    }

    #[test]
    fn random_matrix_is_deterministic() {
        let a = random_matrix(5, 3, &mut ChaCha8Rng::seed_from_u64(77)).unwrap();
        let b = random_matrix(5, 3, &mut ChaCha8Rng::seed_from_u64(77)).unwrap();
        assert_eq!(a, b);
        let one = random_matrix(1, 1, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(one.rows(), 1);
        assert!(random_matrix(0, 3, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn random_matrix_entries_are_fair() {
        let seeds = 100_000u64;
        let mut counts = [[0u32; 2]; 3];
        for s in 0..seeds {
            let r = random_matrix(3, 2, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            for (a, row) in counts.iter_mut().enumerate() {
                for (b, c) in row.iter_mut().enumerate() {
                    *c += r.entry(a, b).unwrap() as u32;
                }
            }
        }
        for row in counts {
            for c in row {
                let mean = c as f64 / seeds as f64;
                assert!((mean - 0.5).abs() <= 0.01, "mean {mean}");
            }
        }
    }
}
