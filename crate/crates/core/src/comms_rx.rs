//! Bit decisions: the two-branch dechirp-and-integrate receiver for
//! triangle/V symbols and the matched-filter LFM-pulse baseline.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::ComplexSignal;
use crate::waveform::{
    gen_lfm_pulse, gen_symbol, lfm_pulse_fs, ChirpDirection, SymbolShape, WaveformParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommsScheme {
    /// Triangle/V symbols, two-branch receiver.
    Proposed,
    /// Up/down LFM pulses, matched filter.
    LfmMf,
}

impl CommsScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            CommsScheme::Proposed => "proposed",
            CommsScheme::LfmMf => "lfm_mf",
        }
    }
}

impl fmt::Display for CommsScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CommsScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proposed" => Ok(CommsScheme::Proposed),
            "lfm_mf" => Ok(CommsScheme::LfmMf),
            _ => Err(Error::param(format!(
                "unknown scheme {s:?} (expected proposed or lfm_mf)"
            ))),
        }
    }
}

/// Branch magnitudes for one symbol. For the matched-filter baseline
/// `branch_tri` holds the up-chirp (bit 1) peak and `branch_v` the
/// down-chirp peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionStatistics {
    pub branch_tri: f64,
    pub branch_v: f64,
    pub decided_bit: u8,
}

impl DecisionStatistics {
    fn decide(branch_tri: f64, branch_v: f64) -> Self {
        // Ties go to 1.
        let decided_bit = u8::from(branch_tri >= branch_v);
        Self {
            branch_tri,
            branch_v,
            decided_bit,
        }
    }
}

fn check_rate(rx: &ComplexSignal, fs: f64, len: usize) -> Result<()> {
    if rx.len() != len {
        return Err(Error::param(format!(
            "symbol has {} samples, expected {len}",
            rx.len()
        )));
    }
    if (rx.fs() - fs).abs() > 1e-9 * fs {
        return Err(Error::param(format!(
            "symbol sampled at {} Hz, expected {fs} Hz",
            rx.fs()
        )));
    }
    Ok(())
}

/// Reusable two-branch receiver.
#[derive(Debug, Clone)]
pub struct DualBranchReceiver {
    tri: Vec<Complex64>,
    v: Vec<Complex64>,
    fs: f64,
}

impl DualBranchReceiver {
    pub fn new(params: &WaveformParams) -> Self {
        Self {
            tri: gen_symbol(params, SymbolShape::TriangleLfm).into_samples(),
            v: gen_symbol(params, SymbolShape::VLfm).into_samples(),
            fs: params.fs(),
        }
    }

    pub fn symbol_len(&self) -> usize {
        self.tri.len()
    }

    /// Branches `|Σ rx·conj(ref)|/fs`; a clean unit-energy symbol scores 1
    /// on its own branch.
    pub fn statistics(&self, rx: &[Complex64]) -> DecisionStatistics {
        let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for ((x, t), v) in rx.iter().zip(&self.tri).zip(&self.v) {
            a += x * t.conj();
            b += x * v.conj();
        }
        DecisionStatistics::decide(a.norm() / self.fs, b.norm() / self.fs)
    }
}

/// Reusable matched-filter receiver for the LFM-pulse baseline. Each branch
/// is the peak of the full cross-correlation over every lag.
#[derive(Clone)]
pub struct MatchedFilterReceiver {
    up_spec: Vec<Complex64>,
    down_spec: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    len: usize,
    fs: f64,
}

impl fmt::Debug for MatchedFilterReceiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatchedFilterReceiver")
            .field("len", &self.len)
            .field("fs", &self.fs)
            .finish()
    }
}

impl MatchedFilterReceiver {
    pub fn new(params: &WaveformParams) -> Self {
        let up = gen_lfm_pulse(params, ChirpDirection::Up);
        let down = gen_lfm_pulse(params, ChirpDirection::Down);
        let len = up.len();
        // Any length >= 2·len - 1 keeps every lag distinct; 2·len has small
        // prime factors for the preset sizes.
        let n = 2 * len;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let spectrum = |s: &ComplexSignal| {
            let mut buf = s.samples().to_vec();
            buf.resize(n, Complex64::new(0.0, 0.0));
            fwd.process(&mut buf);
            buf.iter_mut().for_each(|z| *z = z.conj());
            buf
        };
        Self {
            up_spec: spectrum(&up),
            down_spec: spectrum(&down),
            fwd,
            inv,
            len,
            fs: lfm_pulse_fs(params),
        }
    }

    pub fn symbol_len(&self) -> usize {
        self.len
    }

    fn peak(
        &self,
        rx_spec: &[Complex64],
        tmpl: &[Complex64],
        buf: &mut [Complex64],
        scratch: &mut [Complex64],
    ) -> f64 {
        for ((b, a), t) in buf.iter_mut().zip(rx_spec).zip(tmpl) {
            *b = a * t;
        }
        self.inv.process_with_scratch(buf, scratch);
        let n = buf.len() as f64;
        buf.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt() / (n * self.fs)
    }

    pub fn statistics(&self, rx: &[Complex64]) -> DecisionStatistics {
        let n = self.up_spec.len();
        let mut spec = rx.to_vec();
        spec.resize(n, Complex64::new(0.0, 0.0));
        let zero = Complex64::new(0.0, 0.0);
        let mut scratch = vec![
            zero;
            self.fwd
                .get_inplace_scratch_len()
                .max(self.inv.get_inplace_scratch_len())
        ];
        self.fwd.process_with_scratch(&mut spec, &mut scratch);
        let mut buf = vec![zero; n];
        let up = self.peak(&spec, &self.up_spec, &mut buf, &mut scratch);
        let down = self.peak(&spec, &self.down_spec, &mut buf, &mut scratch);
        DecisionStatistics::decide(up, down)
    }
}

/// Decision for one received triangle/V symbol spanning `2T` at `fs`.
pub fn demodulate_symbol(
    rx: &ComplexSignal,
    params: &WaveformParams,
) -> Result<DecisionStatistics> {
    check_rate(rx, params.fs(), params.symbol_len())?;
    Ok(DualBranchReceiver::new(params).statistics(rx.samples()))
}

/// Decision for one received baseline LFM pulse spanning `T` at `2·fs`.
pub fn demodulate_symbol_lfm_mf(
    rx: &ComplexSignal,
    params: &WaveformParams,
) -> Result<DecisionStatistics> {
    check_rate(rx, lfm_pulse_fs(params), params.symbol_len())?;
    Ok(MatchedFilterReceiver::new(params).statistics(rx.samples()))
}

/// Per-symbol statistics for `n_bits` consecutive symbols of `scheme`.
pub fn demodulate_stream_stats(
    rx: &ComplexSignal,
    n_bits: usize,
    scheme: CommsScheme,
    params: &WaveformParams,
) -> Result<Vec<DecisionStatistics>> {
    let n = params.symbol_len();
    let fs = match scheme {
        CommsScheme::Proposed => params.fs(),
        CommsScheme::LfmMf => lfm_pulse_fs(params),
    };
    if n_bits == 0 {
        return Err(Error::param("need at least one bit"));
    }
    check_rate(rx, fs, n_bits * n)?;
    let chunks = rx.samples().chunks(n);
    Ok(match scheme {
        CommsScheme::Proposed => {
            let r = DualBranchReceiver::new(params);
            par_map(chunks, |c| r.statistics(c))
        }
        CommsScheme::LfmMf => {
            let r = MatchedFilterReceiver::new(params);
            par_map(chunks, |c| r.statistics(c))
        }
    })
}

pub fn demodulate_stream(
    rx: &ComplexSignal,
    n_bits: usize,
    scheme: CommsScheme,
    params: &WaveformParams,
) -> Result<Vec<u8>> {
    Ok(demodulate_stream_stats(rx, n_bits, scheme, params)?
        .iter()
        .map(|s| s.decided_bit)
        .collect())
}

#[cfg(feature = "parallel")]
fn par_map<'a, F>(chunks: std::slice::Chunks<'a, Complex64>, f: F) -> Vec<DecisionStatistics>
where
    F: Fn(&[Complex64]) -> DecisionStatistics + Sync + Send,
{
    use rayon::prelude::*;
    chunks.collect::<Vec<_>>().into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<'a, F>(chunks: std::slice::Chunks<'a, Complex64>, f: F) -> Vec<DecisionStatistics>
where
    F: Fn(&[Complex64]) -> DecisionStatistics,
{
    chunks.map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{add_awgn, apply_rician, RicianChannel, SnrReference};
    use crate::rng::seeded;
    use crate::waveform::{modulate_bits, modulate_bits_lfm};
    use rand::Rng;

    #[test]
    fn matched_branch_dominates() {
        for p in [WaveformParams::desk(), WaveformParams::paper()] {
            let tri = gen_symbol(&p, SymbolShape::TriangleLfm);
            let s = demodulate_symbol(&tri, &p).unwrap();
            assert_eq!(s.decided_bit, 1);
            assert!((s.branch_tri - 1.0).abs() < 1e-9);
            assert!(s.branch_tri / s.branch_v >= 10.0, "{s:?}");
        }
    }

    #[test]
    fn branch_separation_oracle() {
        // Inner product of the two unit-energy symbols, summed directly.
        let p = WaveformParams::paper();
        let a = gen_symbol(&p, SymbolShape::TriangleLfm);
        let b = gen_symbol(&p, SymbolShape::VLfm);
        let ip: Complex64 = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| x * y.conj())
            .sum::<Complex64>()
            / p.fs();
        assert!(ip.norm() < 0.1, "{}", ip.norm());
        let s = demodulate_symbol(&a, &p).unwrap();
        assert!((s.branch_v - ip.norm()).abs() < 1e-9);
    }

    #[test]
    fn phase_invariance() {
        let p = WaveformParams::desk();
        let v = gen_symbol(&p, SymbolShape::VLfm);
        for k in 0..12 {
            let g = Complex64::from_polar(0.3, k as f64 * 0.55);
            assert_eq!(demodulate_symbol(&v.scaled(g), &p).unwrap().decided_bit, 0);
            let up = gen_lfm_pulse(&p, ChirpDirection::Up).scaled(g);
            let down = gen_lfm_pulse(&p, ChirpDirection::Down).scaled(g);
            assert_eq!(demodulate_symbol_lfm_mf(&up, &p).unwrap().decided_bit, 1);
            assert_eq!(demodulate_symbol_lfm_mf(&down, &p).unwrap().decided_bit, 0);
        }
    }

    #[test]
    fn matched_filter_peak_is_unity() {
        let p = WaveformParams::desk();
        let up = gen_lfm_pulse(&p, ChirpDirection::Up);
        let s = demodulate_symbol_lfm_mf(&up, &p).unwrap();
        assert!((s.branch_tri - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wrong_length_or_rate() {
        let p = WaveformParams::desk();
        let x = gen_symbol(&p, SymbolShape::TriangleLfm);
        assert!(demodulate_symbol(&x.slice(0..10).unwrap(), &p).is_err());
        assert!(demodulate_symbol_lfm_mf(&x, &p).is_err());
        assert!(demodulate_stream(&x, 2, CommsScheme::Proposed, &p).is_err());
    }

    #[test]
    fn loopback() {
        let p = WaveformParams::desk();
        let bits = [1u8, 0, 1];
        let x = modulate_bits(&p, &bits).unwrap();
        assert_eq!(
            demodulate_stream(&x, 3, CommsScheme::Proposed, &p).unwrap(),
            bits
        );
        let y = modulate_bits_lfm(&p, &bits).unwrap();
        assert_eq!(
            demodulate_stream(&y, 3, CommsScheme::LfmMf, &p).unwrap(),
            bits
        );
        let los = RicianChannel {
            k_factor: f64::INFINITY,
            los_phase: 2.0,
        };
        let faded = apply_rician(&x, &los, p.symbol_len(), 1).unwrap();
        assert_eq!(
            demodulate_stream(&faded, 3, CommsScheme::Proposed, &p).unwrap(),
            bits
        );
    }

    #[test]
    fn faded_noiseless_loopback_is_error_free() {
        let p = WaveformParams::desk();
        let ch = RicianChannel::new(10.0).unwrap();
        let mut rng = seeded(8);
        // 10^5 bits in blocks to bound memory.
        for block in 0..50 {
            let bits: Vec<u8> = (0..2_000).map(|_| rng.random_range(0..=1u8)).collect();
            let x = modulate_bits(&p, &bits).unwrap();
            let y = apply_rician(&x, &ch, p.symbol_len(), block).unwrap();
            assert_eq!(
                demodulate_stream(&y, bits.len(), CommsScheme::Proposed, &p).unwrap(),
                bits
            );
        }
    }

    #[test]
    fn stream_equals_per_symbol() {
        let p = WaveformParams::desk();
        let bits = [0u8, 1, 1, 0];
        let x = modulate_bits(&p, &bits).unwrap();
        let x = add_awgn(
            &x,
            0.0,
            SnrReference::PerSymbol {
                symbol_len: p.symbol_len(),
            },
            4,
        )
        .unwrap();
        let stats = demodulate_stream_stats(&x, 4, CommsScheme::Proposed, &p).unwrap();
        for (k, s) in stats.iter().enumerate() {
            let sl = x
                .slice(k * p.symbol_len()..(k + 1) * p.symbol_len())
                .unwrap();
            assert_eq!(*s, demodulate_symbol(&sl, &p).unwrap());
        }
    }

    #[test]
    fn scheme_names_roundtrip() {
        for s in [CommsScheme::Proposed, CommsScheme::LfmMf] {
            assert_eq!(s.as_str().parse::<CommsScheme>().unwrap(), s);
        }
        assert!("fsk".parse::<CommsScheme>().is_err());
    }
}
