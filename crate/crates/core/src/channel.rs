//! BPSK over AWGN, channel LLRs and SNR-grouped frames.
//!
//! SNR is Es/N0 per BPSK symbol with unit symbol energy, so the noise
//! variance is `σ² = 10^(−snr_db/10)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bits::BitVector;
use crate::error::{check_len, Error, Result};
use crate::textfmt::fmt9;

/// Noise variance for a given SNR in dB. `+∞` gives zero variance.
pub fn noise_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// Bit 0 maps to +1, bit 1 to −1.
pub fn bpsk_modulate(x: &BitVector) -> Vec<f64> {
    x.iter().map(|b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Adds i.i.d. Gaussian noise of variance `10^(−snr_db/10)`. The generator
/// is seeded from `seed` on every call; `snr_db = +∞` disables the noise.
pub fn awgn_apply(s: &[f64], snr_db: f64, seed: u64) -> Vec<f64> {
    if snr_db == f64::INFINITY {
        return s.to_vec();
    }
    let sigma = noise_variance(snr_db).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    s.iter()
        .map(|&v| {
            let n: f64 = StandardNormal.sample(&mut rng);
            v + sigma * n
        })
        .collect()
}

/// `L_i = 2·y_i/σ²`; positive values favor bit 0.
pub fn llr_from_variance(y: &[f64], sigma2: f64) -> Result<Vec<f64>> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise variance must be positive and finite, got {sigma2}"
        )));
    }
    Ok(y.iter().map(|&v| 2.0 * v / sigma2).collect())
}

pub fn llr_compute(y: &[f64], snr_db: f64) -> Result<Vec<f64>> {
    llr_from_variance(y, noise_variance(snr_db))
}

/// Bit 1 iff the LLR is negative.
pub fn hard_decision(llrs: &[f64]) -> Vec<u8> {
    llrs.iter().map(|&l| u8::from(l < 0.0)).collect()
}

/// One received code block.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock {
    pub block_id: u64,
    pub snr_db: f64,
    pub symbols: Vec<f64>,
    pub llrs: Vec<f64>,
    /// Known data word, present for preamble blocks.
    pub truth: Option<BitVector>,
}

impl ReceivedBlock {
    pub fn new(
        block_id: u64,
        snr_db: f64,
        symbols: Vec<f64>,
        llrs: Vec<f64>,
        truth: Option<BitVector>,
    ) -> Result<Self> {
        check_len(symbols.len(), llrs.len())?;
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        if llrs.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("LLRs must be finite".into()));
        }
        Ok(Self {
            block_id,
            snr_db,
            symbols,
            llrs,
            truth,
        })
    }

    /// Modulates `codeword`, passes it through the channel and computes LLRs.
    pub fn transmit(
        block_id: u64,
        codeword: &BitVector,
        snr_db: f64,
        seed: u64,
        truth: Option<BitVector>,
    ) -> Result<Self> {
        let y = awgn_apply(&bpsk_modulate(codeword), snr_db, seed);
        let llrs = llr_compute(&y, snr_db)?;
        Self::new(block_id, snr_db, y, llrs, truth)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Blocks sharing one SNR bin; blocks with known truth form the preamble.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub snr_db: f64,
    pub preamble: Vec<ReceivedBlock>,
    pub payload: Vec<ReceivedBlock>,
}

/// Partitions blocks into frames by SNR rounded half-up to a multiple of
/// `step_db`. Frames come out in increasing SNR; block order is preserved
/// within each frame.
pub fn group_by_snr(blocks: Vec<ReceivedBlock>, step_db: f64) -> Result<Vec<Frame>> {
    if blocks.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(step_db > 0.0 && step_db.is_finite()) {
        return Err(Error::InvalidParameter(format!("SNR step {step_db}")));
    }
    let mut frames: Vec<(i64, Frame)> = Vec::new();
    for block in blocks {
        let bin = (block.snr_db / step_db + 0.5).floor() as i64;
        let idx = match frames.iter().position(|(b, _)| *b == bin) {
            Some(i) => i,
            None => {
                frames.push((
                    bin,
                    Frame {
                        snr_db: bin as f64 * step_db,
                        preamble: Vec::new(),
                        payload: Vec::new(),
                    },
                ));
                frames.len() - 1
            }
        };
        let frame = &mut frames[idx].1;
        if block.truth.is_some() {
            frame.preamble.push(block);
        } else {
            frame.payload.push(block);
        }
    }
    frames.sort_by_key(|(b, _)| *b);
    Ok(frames.into_iter().map(|(_, f)| f).collect())
}

/// Serializes blocks as CSV with columns
/// `block_id,snr_db,symbol_0..,llr_0..,truth_bits`.
pub fn blocks_to_csv(blocks: &[ReceivedBlock]) -> Result<String> {
    let n = blocks.first().ok_or(Error::EmptyInput)?.len();
    let mut header = vec!["block_id".to_string(), "snr_db".to_string()];
    header.extend((0..n).map(|i| format!("symbol_{i}")));
    header.extend((0..n).map(|i| format!("llr_{i}")));
    header.push("truth_bits".into());
    let mut out = header.join(",");
    out.push('\n');
    for b in blocks {
        check_len(n, b.len())?;
        let mut row = vec![b.block_id.to_string(), fmt9(b.snr_db)];
        row.extend(b.symbols.iter().map(|&v| fmt9(v)));
        row.extend(b.llrs.iter().map(|&v| fmt9(v)));
        row.push(b.truth.as_ref().map(|t| t.to_string()).unwrap_or_default());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Parses the CSV layout written by [`blocks_to_csv`].
pub fn blocks_from_csv(text: &str) -> Result<Vec<ReceivedBlock>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let n = cols.iter().filter(|c| c.starts_with("symbol_")).count();
    if cols.len() != 2 * n + 3 || cols[0] != "block_id" || cols[1] != "snr_db" {
        return Err(Error::Parse {
            line: 1,
            message: "unexpected block CSV header".into(),
        });
    }
    let parse_f = |line: usize, s: &str| -> Result<f64> {
        s.trim().parse::<f64>().map_err(|e| Error::Parse {
            line,
            message: format!("{s:?}: {e}"),
        })
    };
    let mut blocks = Vec::new();
    for (i, l) in lines {
        let line = i + 1;
        let f: Vec<&str> = l.split(',').collect();
        check_len(cols.len(), f.len()).map_err(|_| Error::Parse {
            line,
            message: format!("expected {} fields", cols.len()),
        })?;
        let block_id = f[0].trim().parse::<u64>().map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let snr = parse_f(line, f[1])?;
        let symbols = f[2..2 + n]
            .iter()
            .map(|s| parse_f(line, s))
            .collect::<Result<Vec<_>>>()?;
        let llrs = f[2 + n..2 + 2 * n]
            .iter()
            .map(|s| parse_f(line, s))
            .collect::<Result<Vec<_>>>()?;
        let truth_s = f[2 + 2 * n].trim();
        let truth = if truth_s.is_empty() {
            None
        } else {
            Some(BitVector::parse(truth_s)?)
        };
        blocks.push(ReceivedBlock::new(block_id, snr, symbols, llrs, truth)?);
    }
    Ok(blocks)
}
