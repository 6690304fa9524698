//! Plain-text and packed bit files, and integer-per-line files.

use anyhow::{bail, Context};
use gl_decode_core::gf2::BitVector;

use crate::UsageError;

/// `'0'`/`'1'` characters; whitespace is ignored.
pub fn parse_bit_text(text: &str) -> anyhow::Result<BitVector> {
    let mut bits = Vec::with_capacity(text.len());
    for (i, c) in text.chars().enumerate() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            c if c.is_whitespace() => {}
            c => bail!(UsageError(format!(
                "invalid bit character {c:?} at offset {i}"
            ))),
        }
    }
    Ok(BitVector::from_bits(&bits)?)
}

pub fn format_bit_text(bits: &BitVector) -> String {
    let mut s = bits.to_string();
    s.push('\n');
    s
}

/// Packs bits most-significant first; the last byte is zero-padded.
pub fn pack_bits(bits: &BitVector) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, b) in bits.iter().enumerate() {
        if b {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

/// Every bit of every byte, most-significant first.
pub fn unpack_bits(bytes: &[u8]) -> anyhow::Result<BitVector> {
    let bits: Vec<bool> = bytes
        .iter()
        .flat_map(|&b| (0..8).map(move |j| b & (0x80 >> j) != 0))
        .collect();
    Ok(BitVector::from_bits(&bits)?)
}

pub fn encode_bits(bits: &BitVector, binary: bool) -> Vec<u8> {
    if binary {
        pack_bits(bits)
    } else {
        format_bit_text(bits).into_bytes()
    }
}

/// One signed integer per line; blank lines are skipped.
pub fn parse_integers(text: &str) -> anyhow::Result<Vec<i64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<i64>()
                .with_context(|| UsageError(format!("line {}: not an integer: {l:?}", i + 1)))
        })
        .collect()
}

pub fn format_integers(values: &[i64]) -> String {
    let mut s = String::with_capacity(values.len() * 4);
    for v in values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}
