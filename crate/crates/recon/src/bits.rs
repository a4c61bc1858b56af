//! Word-packed bit buffer, LSB-first within each 64-bit word.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitBuf {
    len: usize,
    words: Vec<u64>,
}

impl BitBuf {
    pub fn zeros(len: usize) -> Self {
        BitBuf {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut b = BitBuf::zeros(bits.len());
        for (i, &v) in bits.iter().enumerate() {
            if v {
                b.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        b
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut b = BitBuf::zeros(len);
        for i in 0..len {
            if f(i) {
                b.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Appends another buffer's bits.
    pub fn extend_from(&mut self, other: &BitBuf) {
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    pub fn push(&mut self, v: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if v {
            *self.words.last_mut().unwrap() |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Hamming distance to another buffer of the same length.
    pub fn hamming(&self, other: &BitBuf) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Packs into little-endian bytes, final partial byte zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len.div_ceil(8));
        for i in 0..self.len.div_ceil(8) {
            let mut byte = 0u8;
            for b in 0..8 {
                let idx = i * 8 + b;
                if idx < self.len && self.get(idx) {
                    byte |= 1 << b;
                }
            }
            out.push(byte);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Self {
        assert!(len <= bytes.len() * 8);
        BitBuf::from_fn(len, |i| (bytes[i / 8] >> (i % 8)) & 1 == 1)
    }

    /// Reads `count` bits starting at `offset` into a new buffer.
    pub fn slice(&self, offset: usize, count: usize) -> BitBuf {
        assert!(offset + count <= self.len);
        BitBuf::from_fn(count, |i| self.get(offset + i))
    }
}
