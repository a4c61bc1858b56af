//! Information reconciliation and privacy amplification.
//!
//! Reverse reconciliation: Bob quantizes nothing — he draws uniform key
//! bits, maps each normalized block of his measured symbols onto the BPSK
//! image of those bits with a division-algebra rotation, and publishes the
//! rotation together with the syndrome of his bits under an LDPC code.
//! Alice rotates her own blocks, decodes toward Bob's syndrome with belief
//! propagation, and verifies with a polynomial hash. Verified bits from both
//! sides are then compressed with a seeded binary Toeplitz extractor.

pub mod beta;
pub mod bits;
pub mod ldpc;
pub mod md;
pub mod pa;
pub mod report;

pub use beta::{measure_beta, operating_snr_for_beta};
pub use bits::BitBuf;
pub use ldpc::{DecodeOutcome, LdpcCode};
pub use md::MdMap;
pub use pa::toeplitz_extract;
pub use report::ReconReport;

#[derive(Debug, thiserror::Error)]
pub enum ReconError {
    #[error("block dimension must be 1, 2, 4 or 8, got {0}")]
    BadDimension(usize),
    #[error("block has zero norm")]
    ZeroNormBlock,
    #[error("dimension mismatch: map is {map}, block is {block}")]
    DimensionMismatch { map: usize, block: usize },
    #[error("llr length {got} does not match code block length {want}")]
    LlrLength { got: usize, want: usize },
    #[error("syndrome length {got} does not match check count {want}")]
    SyndromeLength { got: usize, want: usize },
    #[error("privacy amplification length violation: {0}")]
    PaLength(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parity-check file parse error: {0}")]
    ParseError(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// 64-bit polynomial hash used to verify decoded frames.
///
/// Both endpoints hash the packed key bits; equality gates a frame into the
/// distilled key.
pub fn verify_hash(bits: &BitBuf) -> u64 {
    let mut h: u64 = 0x9ae1_6a3b_2f90_404f ^ (bits.len() as u64);
    for &w in bits.words() {
        h ^= w;
        h = h.wrapping_mul(0x100_0000_01b3);
        h ^= h >> 31;
    }
    h
}
