//! Toeplitz-hash privacy amplification.
//!
//! The extractor is the binary Toeplitz matrix T[i][j] = seed[i + L − 1 − j]
//! applied over GF(2): out[i] = parity of the reversed key AND a sliding
//! seed window. Output rows are independent, so the row loop fans out over
//! the parallel helpers while staying bit-deterministic.

use crate::bits::BitBuf;
use crate::ReconError;
use cvqkd_core::par;

/// Compresses `key` to `out_len` bits with the Toeplitz matrix described by
/// `seed`. Requires `seed.len() == key.len() + out_len − 1` and
/// `out_len ≤ key.len()`; deterministic in (key, seed).
pub fn toeplitz_extract(key: &BitBuf, seed: &BitBuf, out_len: usize) -> Result<BitBuf, ReconError> {
    let klen = key.len();
    if out_len == 0 || klen == 0 {
        return Err(ReconError::PaLength("empty key or output".into()));
    }
    if out_len > klen {
        return Err(ReconError::PaLength(format!(
            "out_len {out_len} exceeds key length {klen}"
        )));
    }
    let want_seed = klen + out_len - 1;
    if seed.len() != want_seed {
        return Err(ReconError::PaLength(format!(
            "seed length {} != key + out − 1 = {want_seed}",
            seed.len()
        )));
    }

    // out[i] = XOR_j key[j] & seed[i + L−1 − j] = XOR_r krev[r] & seed[i + r].
    let krev = BitBuf::from_fn(klen, |r| key.get(klen - 1 - r));

    // 64 pre-shifted copies of the reversed key so each output bit reduces
    // to word-aligned AND/XOR/popcount against the seed words.
    let kwords = krev.words();
    let shifted: Vec<Vec<u64>> = (0..64)
        .map(|s| {
            let mut w = vec![0u64; (klen + s).div_ceil(64) + 1];
            if s == 0 {
                w[..kwords.len()].copy_from_slice(kwords);
            } else {
                for (i, &kw) in kwords.iter().enumerate() {
                    w[i] |= kw << s;
                    w[i + 1] |= kw >> (64 - s);
                }
            }
            w
        })
        .collect();

    let seed_words = seed.words();
    let bits = par::map_range(out_len, |i| {
        let (q, s) = (i / 64, i % 64);
        let kw = &shifted[s];
        let mut acc = 0u64;
        for (w, &k) in kw.iter().enumerate() {
            if let Some(&sw) = seed_words.get(q + w) {
                acc ^= k & sw;
            }
        }
        acc.count_ones() & 1 == 1
    });
    Ok(BitBuf::from_bools(&bits))
}
