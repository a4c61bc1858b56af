//! LDPC codes and sum-product syndrome decoding.
//!
//! Codes are held as a bipartite edge list grouped both by check and by
//! variable. Decoding runs belief propagation toward a target syndrome, so
//! the payload never needs to be a codeword — the syndrome of Bob's raw key
//! bits is what Alice decodes against.

use crate::bits::BitBuf;
use crate::ReconError;
use cvqkd_core::RngStream;

/// Sparse parity-check matrix with decoder adjacency.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    n: usize,
    m: usize,
    check_offsets: Vec<u32>,
    edge_var: Vec<u32>,
}

/// Result of one decode attempt. `bits` is present only when the decoder
/// converged onto the target syndrome.
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub bits: Option<BitBuf>,
    pub iterations: usize,
}

impl LdpcCode {
    /// Builds from an explicit per-check adjacency.
    pub fn from_rows(n: usize, rows: Vec<Vec<u32>>) -> Result<Self, ReconError> {
        let m = rows.len();
        if n == 0 || m == 0 {
            return Err(ReconError::InvalidConfig("empty code".into()));
        }
        let mut check_offsets = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::new();
        check_offsets.push(0u32);
        for row in &rows {
            for &v in row {
                if v as usize >= n {
                    return Err(ReconError::InvalidConfig(format!(
                        "column {v} out of range (n = {n})"
                    )));
                }
                edge_var.push(v);
            }
            check_offsets.push(edge_var.len() as u32);
        }
        Ok(LdpcCode {
            n,
            m,
            check_offsets,
            edge_var,
        })
    }

    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn check_count(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edge_var.len()
    }

    /// Design rate (n − m)/n.
    pub fn rate(&self) -> f64 {
        (self.n - self.m) as f64 / self.n as f64
    }

    fn check_edges(&self, c: usize) -> std::ops::Range<usize> {
        self.check_offsets[c] as usize..self.check_offsets[c + 1] as usize
    }

    /// Syndrome H·bits over GF(2).
    pub fn syndrome(&self, bits: &BitBuf) -> Result<BitBuf, ReconError> {
        if bits.len() != self.n {
            return Err(ReconError::LlrLength {
                got: bits.len(),
                want: self.n,
            });
        }
        Ok(BitBuf::from_fn(self.m, |c| {
            let mut parity = false;
            for e in self.check_edges(c) {
                parity ^= bits.get(self.edge_var[e] as usize);
            }
            parity
        }))
    }

    fn syndrome_matches(&self, bits: &BitBuf, target: &BitBuf) -> bool {
        for c in 0..self.m {
            let mut parity = false;
            for e in self.check_edges(c) {
                parity ^= bits.get(self.edge_var[e] as usize);
            }
            if parity != target.get(c) {
                return false;
            }
        }
        true
    }

    /// Sum-product belief propagation toward `syndrome`.
    ///
    /// Positive LLR means bit 0. Convergence is declared as soon as the hard
    /// decision satisfies the target syndrome; running out of iterations is
    /// a failure value, not an error.
    pub fn decode(
        &self,
        llrs: &[f64],
        syndrome: &BitBuf,
        max_iters: usize,
    ) -> Result<DecodeOutcome, ReconError> {
        if llrs.len() != self.n {
            return Err(ReconError::LlrLength {
                got: llrs.len(),
                want: self.n,
            });
        }
        if syndrome.len() != self.m {
            return Err(ReconError::SyndromeLength {
                got: syndrome.len(),
                want: self.m,
            });
        }

        let hard = BitBuf::from_fn(self.n, |v| llrs[v] < 0.0);
        if self.syndrome_matches(&hard, syndrome) {
            return Ok(DecodeOutcome {
                bits: Some(hard),
                iterations: 0,
            });
        }

        let ne = self.edge_count();
        let mut q = vec![0.0f64; ne]; // variable → check
        let mut r = vec![0.0f64; ne]; // check → variable
        for (e, &v) in self.edge_var.iter().enumerate() {
            q[e] = llrs[v as usize];
        }
        let max_deg = (0..self.m)
            .map(|c| self.check_edges(c).len())
            .max()
            .unwrap_or(0);
        let mut tanhs = vec![0.0f64; max_deg];
        let mut prefix = vec![0.0f64; max_deg + 1];
        let mut suffix = vec![0.0f64; max_deg + 1];
        let mut totals = vec![0.0f64; self.n];

        for iteration in 1..=max_iters {
            for c in 0..self.m {
                let edges = self.check_edges(c);
                let deg = edges.len();
                let sign = if syndrome.get(c) { -1.0 } else { 1.0 };
                for (k, e) in edges.clone().enumerate() {
                    tanhs[k] = (q[e] * 0.5).tanh();
                }
                prefix[0] = 1.0;
                for k in 0..deg {
                    prefix[k + 1] = prefix[k] * tanhs[k];
                }
                suffix[deg] = 1.0;
                for k in (0..deg).rev() {
                    suffix[k] = suffix[k + 1] * tanhs[k];
                }
                for (k, e) in edges.enumerate() {
                    let ex = (prefix[k] * suffix[k + 1]).clamp(-0.999_999_999_999_99, 0.999_999_999_999_99);
                    r[e] = sign * 2.0 * ex.atanh();
                }
            }

            totals.copy_from_slice(llrs);
            for (e, &v) in self.edge_var.iter().enumerate() {
                totals[v as usize] += r[e];
            }
            for (e, &v) in self.edge_var.iter().enumerate() {
                q[e] = totals[v as usize] - r[e];
            }

            let hard = BitBuf::from_fn(self.n, |v| totals[v] < 0.0);
            if self.syndrome_matches(&hard, syndrome) {
                return Ok(DecodeOutcome {
                    bits: Some(hard),
                    iterations: iteration,
                });
            }
        }

        Ok(DecodeOutcome {
            bits: None,
            iterations: max_iters,
        })
    }

    /// Regular code with uniform column weight `wc` and row weight `wr`.
    pub fn regular(n: usize, wc: usize, wr: usize, rng: &mut RngStream) -> Result<Self, ReconError> {
        if n == 0 || wc == 0 || wr == 0 || (n * wc) % wr != 0 {
            return Err(ReconError::InvalidConfig(format!(
                "regular({n}, {wc}, {wr}) does not divide evenly"
            )));
        }
        let m = n * wc / wr;
        let col_degrees = vec![wc; n];
        let row_degrees = vec![wr; m];
        Self::from_degree_sequences(n, &col_degrees, &row_degrees, rng)
    }

    /// Irregular code from an edge-perspective variable degree profile
    /// λ = [(degree, edge fraction)...] at the given design rate. Check
    /// degrees come out near-uniform.
    pub fn irregular(
        n: usize,
        rate: f64,
        lambda: &[(usize, f64)],
        rng: &mut RngStream,
    ) -> Result<Self, ReconError> {
        if !(0.0 < rate && rate < 1.0) || lambda.is_empty() {
            return Err(ReconError::InvalidConfig("bad irregular profile".into()));
        }
        // Node-perspective fractions ∝ λ_i / i.
        let weight: f64 = lambda.iter().map(|&(d, f)| f / d as f64).sum();
        let mut col_degrees = Vec::with_capacity(n);
        let mut acc = 0.0;
        let mut assigned = 0usize;
        for &(d, f) in lambda {
            acc += f / d as f64 / weight;
            let upto = (acc * n as f64).round() as usize;
            for _ in assigned..upto.min(n) {
                col_degrees.push(d);
            }
            assigned = upto.min(n);
        }
        while col_degrees.len() < n {
            col_degrees.push(lambda.last().unwrap().0);
        }
        let edges: usize = col_degrees.iter().sum();
        let m = ((n as f64) * (1.0 - rate)).round() as usize;
        let base = edges / m;
        let extra = edges - base * m;
        let mut row_degrees = vec![base; m];
        for rd in row_degrees.iter_mut().take(extra) {
            *rd += 1;
        }
        Self::from_degree_sequences(n, &col_degrees, &row_degrees, rng)
    }

    /// Configuration-model construction from explicit degree sequences,
    /// with parallel edges removed by stub swaps.
    fn from_degree_sequences(
        n: usize,
        col_degrees: &[usize],
        row_degrees: &[usize],
        rng: &mut RngStream,
    ) -> Result<Self, ReconError> {
        let e_cols: usize = col_degrees.iter().sum();
        let e_rows: usize = row_degrees.iter().sum();
        if e_cols != e_rows {
            return Err(ReconError::InvalidConfig(format!(
                "degree sequences disagree: {e_cols} column stubs vs {e_rows} row stubs"
            )));
        }
        let mut col_stubs: Vec<u32> = Vec::with_capacity(e_cols);
        for (v, &d) in col_degrees.iter().enumerate() {
            col_stubs.extend(std::iter::repeat_n(v as u32, d));
        }
        let mut row_stubs: Vec<u32> = Vec::with_capacity(e_rows);
        for (c, &d) in row_degrees.iter().enumerate() {
            row_stubs.extend(std::iter::repeat_n(c as u32, d));
        }
        // Fisher–Yates on the column stubs.
        for i in (1..col_stubs.len()).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            col_stubs.swap(i, j);
        }
        // Swap away parallel edges.
        use std::collections::HashSet;
        let key = |v: u32, c: u32| ((c as u64) << 32) | v as u64;
        let mut seen: HashSet<u64> = HashSet::with_capacity(e_cols * 2);
        let mut dup: Vec<usize> = Vec::new();
        for i in 0..col_stubs.len() {
            if !seen.insert(key(col_stubs[i], row_stubs[i])) {
                dup.push(i);
            }
        }
        let mut guard = 0;
        while let Some(&i) = dup.last() {
            guard += 1;
            if guard > 100 * e_cols {
                return Err(ReconError::InvalidConfig(
                    "could not remove parallel edges".into(),
                ));
            }
            let j = rng.below(col_stubs.len() as u64) as usize;
            let (vi, ci) = (col_stubs[i], row_stubs[i]);
            let (vj, cj) = (col_stubs[j], row_stubs[j]);
            // Swapping columns i and j rewires (vi,ci),(vj,cj) to
            // (vj,ci),(vi,cj); both must be fresh.
            if dup.contains(&j) && j != i {
                continue;
            }
            if seen.contains(&key(vj, ci)) || seen.contains(&key(vi, cj)) {
                continue;
            }
            seen.remove(&key(vj, cj));
            seen.insert(key(vj, ci));
            seen.insert(key(vi, cj));
            col_stubs.swap(i, j);
            dup.pop();
        }
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); row_degrees.len()];
        for (v, c) in col_stubs.into_iter().zip(row_stubs) {
            rows[c as usize].push(v);
        }
        for row in rows.iter_mut() {
            row.sort_unstable();
        }
        Self::from_rows(n, rows)
    }

    /// Serializes as one `row: col col col` line per check, preceded by a
    /// dimension comment.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# n={} m={}\n", self.n, self.m));
        for c in 0..self.m {
            out.push_str(&format!("{c}:"));
            for e in self.check_edges(c) {
                out.push_str(&format!(" {}", self.edge_var[e]));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the `row: col col col` format. Dimensions come from the
    /// header comment when present, otherwise from the largest indexes.
    pub fn from_text(text: &str) -> Result<Self, ReconError> {
        let mut n_hint = None;
        let mut entries: Vec<(usize, Vec<u32>)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for tok in comment.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("n=") {
                        n_hint = v.parse::<usize>().ok();
                    }
                }
                continue;
            }
            let (row, cols) = line.split_once(':').ok_or_else(|| {
                ReconError::ParseError(format!("line {}: missing ':'", lineno + 1))
            })?;
            let row: usize = row.trim().parse().map_err(|_| {
                ReconError::ParseError(format!("line {}: bad row index", lineno + 1))
            })?;
            let cols: Vec<u32> = cols
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>().map_err(|_| {
                        ReconError::ParseError(format!("line {}: bad column index", lineno + 1))
                    })
                })
                .collect::<Result<_, _>>()?;
            entries.push((row, cols));
        }
        if entries.is_empty() {
            return Err(ReconError::ParseError("no rows".into()));
        }
        let m = entries.iter().map(|(r, _)| r + 1).max().unwrap();
        let n = n_hint.unwrap_or_else(|| {
            entries
                .iter()
                .flat_map(|(_, cols)| cols.iter())
                .map(|&c| c as usize + 1)
                .max()
                .unwrap_or(0)
        });
        let mut rows = vec![Vec::new(); m];
        for (r, cols) in entries {
            rows[r] = cols;
        }
        Self::from_rows(n, rows)
    }

    /// The default rate-1/2 working code: an irregular profile with degrees
    /// up to 20 whose belief-propagation threshold sits near the β ≈ 0.95
    /// operating point at this block length.
    pub fn default_rate_half(n: usize, rng: &mut RngStream) -> Result<Self, ReconError> {
        Self::irregular(n, 0.5, RATE_HALF_PROFILE, rng)
    }
}

/// Edge-perspective variable degree profile for the default rate-1/2 code.
pub const RATE_HALF_PROFILE: &[(usize, f64)] = &[
    (2, 0.23403),
    (3, 0.21242),
    (6, 0.14690),
    (7, 0.10284),
    (20, 0.30381),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn small_code(rng: &mut RngStream) -> LdpcCode {
        LdpcCode::regular(512, 3, 6, rng).unwrap()
    }

    #[test]
    fn regular_code_shape() {
        let mut rng = RngStream::new(1);
        let code = small_code(&mut rng);
        assert_eq!(code.block_len(), 512);
        assert_eq!(code.check_count(), 256);
        assert_eq!(code.edge_count(), 512 * 3);
        assert_eq!(code.rate(), 0.5);
    }

    #[test]
    fn valid_word_syndrome_is_reachable() {
        // Zero word has zero syndrome; decoder sees it immediately.
        let mut rng = RngStream::new(2);
        let code = small_code(&mut rng);
        let zero = BitBuf::zeros(512);
        let synd = code.syndrome(&zero).unwrap();
        assert_eq!(synd.count_ones(), 0);
    }

    #[test]
    fn noiseless_decode_is_immediate() {
        let mut rng = RngStream::new(3);
        let code = small_code(&mut rng);
        let bits = BitBuf::from_fn(512, |_| rng.bit());
        let synd = code.syndrome(&bits).unwrap();
        let llrs: Vec<f64> = bits.iter().map(|b| if b { -8.0 } else { 8.0 }).collect();
        let out = code.decode(&llrs, &synd, 50).unwrap();
        assert!(out.iterations <= 1);
        assert_eq!(out.bits.unwrap(), bits);
    }

    #[test]
    fn decodes_through_moderate_noise() {
        let mut rng = RngStream::new(4);
        let code = small_code(&mut rng);
        let bits = BitBuf::from_fn(512, |_| rng.bit());
        let synd = code.syndrome(&bits).unwrap();
        // BPSK at comfortable SNR (sigma well below the (3,6) threshold).
        let sigma = 0.7f64;
        let llrs: Vec<f64> = bits
            .iter()
            .map(|b| {
                let s = if b { -1.0 } else { 1.0 };
                let y = s + sigma * rng.normal();
                2.0 * y / (sigma * sigma)
            })
            .collect();
        let out = code.decode(&llrs, &synd, 100).unwrap();
        let decoded = out.bits.expect("should converge at this SNR");
        assert_eq!(decoded.hamming(&bits), 0, "residual errors after verify");
    }

    #[test]
    fn failure_is_a_value() {
        let mut rng = RngStream::new(5);
        let code = small_code(&mut rng);
        let bits = BitBuf::from_fn(512, |_| rng.bit());
        let synd = code.syndrome(&bits).unwrap();
        let llrs = vec![0.1; 512]; // no information
        let out = code.decode(&llrs, &synd, 5).unwrap();
        assert!(out.bits.is_none());
        assert_eq!(out.iterations, 5);
    }

    #[test]
    fn text_round_trip() {
        let mut rng = RngStream::new(6);
        let code = small_code(&mut rng);
        let text = code.to_text();
        let back = LdpcCode::from_text(&text).unwrap();
        assert_eq!(back.block_len(), code.block_len());
        assert_eq!(back.check_count(), code.check_count());
        assert_eq!(back.edge_var, code.edge_var);
    }

    #[test]
    fn irregular_profile_counts() {
        let mut rng = RngStream::new(7);
        let code = LdpcCode::irregular(4096, 0.5, RATE_HALF_PROFILE, &mut rng).unwrap();
        assert_eq!(code.block_len(), 4096);
        assert_eq!(code.check_count(), 2048);
        // Edge count ≈ n / Σ(λ_i/i) = n / 0.242187.
        let expect = 4096.0 / 0.242_186_9;
        assert!((code.edge_count() as f64 - expect).abs() / expect < 0.02);
    }

    #[test]
    fn no_parallel_edges() {
        let mut rng = RngStream::new(8);
        let code = LdpcCode::default_rate_half(4096, &mut rng).unwrap();
        for c in 0..code.check_count() {
            let edges = code.check_edges(c);
            let vars: Vec<u32> = edges.map(|e| code.edge_var[e]).collect();
            let mut dedup = vars.clone();
            dedup.dedup();
            assert_eq!(vars.len(), dedup.len(), "parallel edge in check {c}");
        }
    }
}
