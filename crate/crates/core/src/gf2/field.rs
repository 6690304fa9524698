use crate::error::{Error, Result};

/// Low coefficients of the lexicographically least irreducible polynomial of
/// each degree `m` in `2..=64`; the `x^m` term is implicit. Entry `m - 2`.
pub const IRREDUCIBLE_LOW: [u64; 63] = [
    0x3, 0x3, 0x3, 0x5, 0x3, 0x3, 0x1b, 0x3, 0x9, 0x5, 0x9, 0x1b, 0x21, 0x3, 0x2b, 0x9, //
    0x9, 0x27, 0x9, 0x5, 0x3, 0x21, 0x1b, 0x9, 0x1b, 0x27, 0x3, 0x5, 0x3, 0x9, 0x8d, 0x4b, 0x1b,
    0x5, 0x35, 0x3f, 0x63, 0x11, 0x39, 0x9, 0x27, 0x59, 0x21, 0x1b, 0x3, 0x21, 0x2d, 0x71, 0x1d,
    0x4b, 0x9, 0x47, 0x7d, 0x47, 0x95, 0x11, 0x63, 0x7b, 0x3, 0x27, 0x69, 0x3, 0x1b,
];

/// Full modulus for degree `m` as a `u128` with the leading term set.
pub fn modulus(m: u32) -> Result<u128> {
    if !(2..=64).contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    Ok((1u128 << m) | IRREDUCIBLE_LOW[m as usize - 2] as u128)
}

/// An element of GF(2^m) in polynomial basis: bit `j` is the coefficient of `x^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    m: u32,
    value: u64,
}

impl FieldElement {
    pub fn new(m: u32, value: u64) -> Result<Self> {
        modulus(m)?;
        if m < 64 && value >> m != 0 {
            return Err(Error::Parameter("field element wider than its degree"));
        }
        Ok(Self { m, value })
    }

    pub fn zero(m: u32) -> Result<Self> {
        Self::new(m, 0)
    }

    pub fn one(m: u32) -> Result<Self> {
        Self::new(m, 1)
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            m: self.m,
            value: self.value ^ other.value,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            m: self.m,
            value: mul_raw(self.value, other.value, self.m),
        })
    }

    /// `self^(2^m − 2)`, the inverse of a nonzero element.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut result = 1u64;
        let mut base = self.value;
        // 2^m − 2 = 0b111…10
        for _ in 1..self.m {
            base = mul_raw(base, base, self.m);
            result = mul_raw(result, base, self.m);
        }
        Ok(Self {
            m: self.m,
            value: result,
        })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::FieldMismatch(self.m, other.m));
        }
        Ok(())
    }
}

/// Product of two field elements.
pub fn field_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.mul(b)
}

fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= (a as u128) << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn reduce(mut v: u128, m: u32) -> u64 {
    let poly = (1u128 << m) | IRREDUCIBLE_LOW[m as usize - 2] as u128;
    for bit in (m..(2 * m)).rev() {
        if (v >> bit) & 1 == 1 {
            v ^= poly << (bit - m);
        }
    }
    v as u64
}

fn mul_raw(a: u64, b: u64, m: u32) -> u64 {
    reduce(clmul(a, b), m)
}

/// Polynomial remainder over GF(2) for `u128` polynomials.
fn poly_rem(mut a: u128, b: u128) -> u128 {
    let db = 127 - b.leading_zeros();
    while a != 0 && 127 - a.leading_zeros() >= db {
        a ^= b << (127 - a.leading_zeros() - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a degree-`m` polynomial (`2 <= m <= 64`).
///
/// `p` is irreducible iff `x^(2^m) ≡ x (mod p)` and, for each prime `q | m`,
/// `gcd(x^(2^(m/q)) − x, p) = 1`.
pub fn is_irreducible(p: u128, m: u32) -> bool {
    if !(2..=64).contains(&m) || 127 - p.leading_zeros() != m {
        return false;
    }
    let mulmod = |a: u128, b: u128| -> u128 {
        let mut acc = 0u128;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a >> m) & 1 == 1 {
                a ^= p;
            }
        }
        acc
    };
    let frobenius = |times: u32| -> u128 {
        let mut a = 2u128;
        for _ in 0..times {
            a = mulmod(a, a);
        }
        a
    };
    if frobenius(m) != 2 {
        return false;
    }
    let mut rest = m;
    let mut q = 2;
    while rest > 1 {
        if rest.is_multiple_of(q) {
            while rest.is_multiple_of(q) {
                rest /= q;
            }
            if poly_gcd(p, frobenius(m / q) ^ 2) != 1 {
                return false;
            }
        }
        q += 1;
    }
    true
}
