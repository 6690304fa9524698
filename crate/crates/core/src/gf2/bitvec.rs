use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::RngCore;

use crate::error::{Error, Result};

/// Largest supported vector length.
pub const MAX_LEN: usize = 1 << 20;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// An element of {0,1}ⁿ packed into 64-bit words.
///
/// Bit `j` lives in word `j / 64` at position `j % 64`, so for `n <= 64` the
/// vector reads as the integer `Σ bit_j · 2^j`. Bits past `len` in the last
/// word are always zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(Self {
            len,
            words: vec![0; words_for(len)],
        })
    }

    /// The unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        v.set(index, true)?;
        Ok(v)
    }

    /// Builds a vector of `len <= 64` bits from the low bits of `value`.
    pub fn from_u64(value: u64, len: usize) -> Result<Self> {
        check_len(len)?;
        if len > WORD {
            return Err(Error::Parameter("from_u64 needs len <= 64"));
        }
        Ok(Self {
            len,
            words: vec![value & low_mask(len)],
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut v = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        Ok(v)
    }

    /// Wraps packed words; bits beyond `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Result<Self> {
        check_len(len)?;
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        Ok(v)
    }

    /// Uniformly random vector; consumes `ceil(len/64)` words of `rng`.
    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Result<Self> {
        check_len(len)?;
        let words = (0..words_for(len)).map(|_| rng.next_u64()).collect();
        let mut v = Self { len, words };
        v.clear_tail();
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: vectors have at least one bit.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The vector as an integer; only defined for `len <= 64`.
    pub fn to_u64(&self) -> Result<u64> {
        if self.len > WORD {
            return Err(Error::Parameter("to_u64 needs len <= 64"));
        }
        Ok(self.words[0])
    }

    pub fn get(&self, index: usize) -> Result<bool> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        Ok(self.bit(index))
    }

    #[inline]
    pub(crate) fn bit(&self, index: usize) -> bool {
        (self.words[index / WORD] >> (index % WORD)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) -> Result<()> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        let mask = 1u64 << (index % WORD);
        if value {
            self.words[index / WORD] |= mask;
        } else {
            self.words[index / WORD] &= !mask;
        }
        Ok(())
    }

    pub fn flip(&mut self, index: usize) -> Result<()> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        self.words[index / WORD] ^= 1 << (index % WORD);
        Ok(())
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &Self) -> Result<()> {
        self.check_same_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Inner product over GF(2): parity of `self AND other`.
    pub fn dot(&self, other: &Self) -> Result<bool> {
        self.check_same_len(other)?;
        Ok(self.dot_unchecked(other))
    }

    #[inline]
    pub(crate) fn dot_unchecked(&self, other: &Self) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Overwrites `self` with `other` without reallocating.
    pub fn assign(&mut self, other: &Self) -> Result<()> {
        self.check_same_len(other)?;
        self.words.copy_from_slice(&other.words);
        Ok(())
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self ‖ other`, with `self` occupying the low indices.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zeros(self.len + other.len)?;
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.or_shifted(other, self.len);
        Ok(out)
    }

    /// Bits `start .. start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.len {
            return Err(Error::IndexOutOfRange {
                index: start + len - 1,
                len: self.len,
            });
        }
        let mut out = Self::zeros(len)?;
        let shift = start % WORD;
        let first = start / WORD;
        for (w, slot) in out.words.iter_mut().enumerate() {
            let lo = self.words.get(first + w).copied().unwrap_or(0) >> shift;
            let hi = if shift == 0 {
                0
            } else {
                self.words.get(first + w + 1).copied().unwrap_or(0) << (WORD - shift)
            };
            *slot = lo | hi;
        }
        out.clear_tail();
        Ok(out)
    }

    /// Splits into `(bits[..at], bits[at..])`.
    pub fn split_at(&self, at: usize) -> Result<(Self, Self)> {
        if at == 0 || at >= self.len {
            return Err(Error::Parameter(
                "split point must leave both halves non-empty",
            ));
        }
        Ok((self.slice(0, at)?, self.slice(at, self.len - at)?))
    }

    /// Copy zero-extended (or truncated) to `len` bits.
    pub fn resized(&self, len: usize) -> Result<Self> {
        let mut out = Self::zeros(len)?;
        let n = out.words.len().min(self.words.len());
        out.words[..n].copy_from_slice(&self.words[..n]);
        out.clear_tail();
        Ok(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    fn or_shifted(&mut self, other: &Self, offset: usize) {
        let shift = offset % WORD;
        let base = offset / WORD;
        for (w, &word) in other.words.iter().enumerate() {
            self.words[base + w] |= word << shift;
            if shift != 0 && base + w + 1 < self.words.len() {
                self.words[base + w + 1] |= word >> (WORD - shift);
            }
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= low_mask(rem);
            }
        }
    }

    fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= WORD {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_LEN {
        return Err(Error::InvalidLength(len));
    }
    Ok(())
}

/// Parity of `x · r`.
pub fn dot(x: &BitVector, r: &BitVector) -> Result<bool> {
    x.dot(r)
}

/// The hardcore predicate `(−1)^(x·r)` as `+1` / `−1`.
pub fn hardcore_bit(x: &BitVector, r: &BitVector) -> Result<i8> {
    Ok(if x.dot(r)? { -1 } else { 1 })
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Parses the text form: index 0 is the leftmost character.
impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBitChar(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn dot_examples() {
        assert!(!dot(&bv("0000"), &bv("1011")).unwrap());
        assert!(dot(&bv("1111"), &bv("1011")).unwrap());
        let r = bv("1011");
        for i in 0..4 {
            let u = BitVector::unit(4, i).unwrap();
            assert_eq!(dot(&u, &r).unwrap(), r.get(i).unwrap());
        }
    }

    #[test]
    fn length_mismatch_is_error() {
        assert_eq!(
            dot(&bv("01"), &bv("011")),
            Err(Error::LengthMismatch {
                expected: 2,
                actual: 3
            })
        );
        assert!(hardcore_bit(&bv("1"), &bv("11")).is_err());
    }

    #[test]
    fn out_of_range_access() {
        let v = bv("101");
        assert!(v.get(3).is_err());
        assert!(BitVector::unit(3, 3).is_err());
        assert!(BitVector::zeros(0).is_err());
        assert!(BitVector::zeros(MAX_LEN + 1).is_err());
    }

    #[test]
    fn hardcore_bit_examples() {
        let x = bv("0110101");
        assert_eq!(hardcore_bit(&x, &BitVector::zeros(7).unwrap()).unwrap(), 1);
        let u = BitVector::unit(5, 0).unwrap();
        assert_eq!(hardcore_bit(&u, &u).unwrap(), -1);
    }

    #[test]
    fn hardcore_bit_matches_dot_exhaustively() {
        for n in 1..=10usize {
            for xi in 0..(1u64 << n) {
                let x = BitVector::from_u64(xi, n).unwrap();
                for ri in 0..(1u64 << n) {
                    let r = BitVector::from_u64(ri, n).unwrap();
                    let b = hardcore_bit(&x, &r).unwrap();
                    assert_eq!(b == 1, !dot(&x, &r).unwrap());
                    assert_eq!(b == 1, (xi & ri).count_ones() % 2 == 0);
                }
            }
        }
    }

    #[test]
    fn text_form_roundtrip_and_indexing() {
        let v = bv("1000");
        assert!(v.get(0).unwrap());
        assert_eq!(v.to_u64().unwrap(), 1);
        assert_eq!(v.to_string(), "1000");
        assert!("10a".parse::<BitVector>().is_err());
    }

    #[test]
    fn concat_slice_split_across_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = BitVector::random(70, &mut rng).unwrap();
        let b = BitVector::random(91, &mut rng).unwrap();
        let c = a.concat(&b).unwrap();
        assert_eq!(c.len(), 161);
        let (l, r) = c.split_at(70).unwrap();
        assert_eq!(l, a);
        assert_eq!(r, b);
        let s = c.slice(33, 100).unwrap();
        for i in 0..100 {
            assert_eq!(s.get(i).unwrap(), c.get(33 + i).unwrap());
        }
    }

    #[test]
    fn self_xor_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for len in [1, 63, 64, 65, 200] {
            let v = BitVector::random(len, &mut rng).unwrap();
            let z = v.xor(&v).unwrap();
            assert!(z.is_zero());
            assert_eq!(z.len(), len);
        }
    }

    proptest::proptest! {
        #[test]
        fn character_property(seed: u64, n in 1usize..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = BitVector::random(n, &mut rng).unwrap();
            let r = BitVector::random(n, &mut rng).unwrap();
            let r2 = BitVector::random(n, &mut rng).unwrap();
            let lhs = hardcore_bit(&x, &r).unwrap() * hardcore_bit(&x, &r2).unwrap();
            proptest::prop_assert_eq!(lhs, hardcore_bit(&x, &r.xor(&r2).unwrap()).unwrap());
        }

        #[test]
        fn text_roundtrip(bits in proptest::collection::vec(proptest::bool::ANY, 1..300)) {
            let v = BitVector::from_bits(&bits).unwrap();
            let back: BitVector = v.to_string().parse().unwrap();
            proptest::prop_assert_eq!(&back, &v);
            proptest::prop_assert_eq!(back.iter().collect::<Vec<_>>(), bits);
        }
    }
}
