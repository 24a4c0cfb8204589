//! Chirp synthesis: single up/down chirps, the triangle-LFM and V-LFM
//! symbols, bit mapping, and the baseline FMCW / LFM-pulse transmissions.
//!
//! A symbol occupies `-T <= t < T` with `T = t_half`. The triangle symbol is
//! `exp(+jπμt²)` on the first half (rising frequency) and `exp(-jπμt²)` on
//! the second; the V symbol is its complex conjugate. Every generated
//! waveform is normalized to unit continuous-time energy `Σ|x|²/fs = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::ComplexSignal;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Minimum ratio `fs / delta_f`.
pub const MIN_OVERSAMPLING: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWaveformParams", into = "RawWaveformParams")]
pub struct WaveformParams {
    f0: f64,
    delta_f: f64,
    t_half: f64,
    fs: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWaveformParams {
    f0: f64,
    delta_f: f64,
    t_half: f64,
    fs: f64,
}

impl TryFrom<RawWaveformParams> for WaveformParams {
    type Error = Error;

    fn try_from(r: RawWaveformParams) -> Result<Self> {
        WaveformParams::new(r.f0, r.delta_f, r.t_half, r.fs)
    }
}

impl From<WaveformParams> for RawWaveformParams {
    fn from(p: WaveformParams) -> Self {
        RawWaveformParams {
            f0: p.f0,
            delta_f: p.delta_f,
            t_half: p.t_half,
            fs: p.fs,
        }
    }
}

impl WaveformParams {
    pub fn new(f0: f64, delta_f: f64, t_half: f64, fs: f64) -> Result<Self> {
        for (name, v) in [
            ("f0", f0),
            ("delta_f", delta_f),
            ("t_half", t_half),
            ("fs", fs),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if fs < MIN_OVERSAMPLING * delta_f * (1.0 - 1e-12) {
            return Err(Error::param(format!(
                "fs = {fs} Hz violates fs >= {MIN_OVERSAMPLING} * delta_f = {} Hz",
                MIN_OVERSAMPLING * delta_f
            )));
        }
        if (t_half * fs).round() < 2.0 {
            return Err(Error::param("t_half * fs must be at least 2 samples"));
        }
        Ok(Self {
            f0,
            delta_f,
            t_half,
            fs,
        })
    }

    /// 340 GHz carrier, 288 MHz sweep, 300 µs chirps, 360 MHz sampling.
    pub fn paper() -> Self {
        Self::new(340e9, 288e6, 300e-6, 360e6).expect("paper preset is valid")
    }

    /// Chirp slope preserved, sweep and duration scaled by 1/10; the carrier
    /// is lowered to 120 GHz so the scenario's Doppler fits the 36 MHz band.
    pub fn desk() -> Self {
        Self::new(120e9, 28.8e6, 30e-6, 36e6).expect("desk preset is valid")
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn delta_f(&self) -> f64 {
        self.delta_f
    }

    pub fn t_half(&self) -> f64 {
        self.t_half
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    /// Chirp slope μ = ΔF / T in Hz/s.
    pub fn mu(&self) -> f64 {
        self.delta_f / self.t_half
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.f0
    }

    /// Samples per chirp half.
    pub fn half_len(&self) -> usize {
        (self.t_half * self.fs).round() as usize
    }

    /// Samples per symbol (both halves).
    pub fn symbol_len(&self) -> usize {
        2 * self.half_len()
    }

    /// Start time of a symbol on the sample grid; sample `half_len()` is `t = 0`.
    pub fn symbol_t_start(&self) -> f64 {
        -(self.half_len() as f64) / self.fs
    }

    pub fn with_fs(&self, fs: f64) -> Result<Self> {
        Self::new(self.f0, self.delta_f, self.t_half, fs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChirpDirection {
    /// c = 1, rising frequency.
    Up,
    /// c = 0, falling frequency.
    Down,
}

impl ChirpDirection {
    /// `(-1)^(1-c)`.
    pub fn sign(self) -> f64 {
        match self {
            ChirpDirection::Up => 1.0,
            ChirpDirection::Down => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            ChirpDirection::Up => ChirpDirection::Down,
            ChirpDirection::Down => ChirpDirection::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolShape {
    /// Carries bit 1: up-chirp then down-chirp.
    #[serde(rename = "triangle")]
    TriangleLfm,
    /// Carries bit 0: down-chirp then up-chirp.
    #[serde(rename = "v")]
    VLfm,
}

impl SymbolShape {
    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            1 => Ok(SymbolShape::TriangleLfm),
            0 => Ok(SymbolShape::VLfm),
            b => Err(Error::param(format!("bit must be 0 or 1, got {b}"))),
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            SymbolShape::TriangleLfm => 1,
            SymbolShape::VLfm => 0,
        }
    }

    /// Chirp directions of the first (`t < 0`) and second (`t >= 0`) halves.
    pub fn halves(self) -> [ChirpDirection; 2] {
        match self {
            SymbolShape::TriangleLfm => [ChirpDirection::Up, ChirpDirection::Down],
            SymbolShape::VLfm => [ChirpDirection::Down, ChirpDirection::Up],
        }
    }

    /// Direction of the half containing `t`, or `None` outside `[-T, T)`.
    pub fn direction_at(self, params: &WaveformParams, t: f64) -> Option<ChirpDirection> {
        let [first, second] = self.halves();
        if t < -params.t_half || t >= params.t_half {
            None
        } else if t < 0.0 {
            Some(first)
        } else {
            Some(second)
        }
    }

    /// Continuous-time complex envelope with amplitude `1/√(2T)`.
    pub fn envelope(self, params: &WaveformParams, t: f64) -> Complex64 {
        match self.direction_at(params, t) {
            Some(dir) => {
                let amp = (2.0 * params.t_half).sqrt().recip();
                Complex64::from_polar(amp, dir.sign() * PI * params.mu() * t * t)
            }
            None => Complex64::new(0.0, 0.0),
        }
    }
}

fn chirp_sample(amp: f64, sign: f64, mu: f64, t: f64) -> Complex64 {
    Complex64::from_polar(amp, sign * PI * mu * t * t)
}

/// Single chirp `A·exp(jπ(±μ)t²)` for `t ∈ [0, duration)`.
pub fn gen_chirp(
    params: &WaveformParams,
    dir: ChirpDirection,
    duration: f64,
) -> Result<ComplexSignal> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::param(format!(
            "chirp duration must be positive, got {duration}"
        )));
    }
    let n = (duration * params.fs).round();
    if n < 2.0 {
        return Err(Error::param("chirp must span at least 2 samples"));
    }
    let n = n as usize;
    let fs = params.fs;
    let amp = (fs / n as f64).sqrt();
    let (sign, mu) = (dir.sign(), params.mu());
    let samples = (0..n)
        .map(|k| chirp_sample(amp, sign, mu, k as f64 / fs))
        .collect();
    ComplexSignal::new(samples, fs, 0.0)
}

fn symbol_samples(params: &WaveformParams, shape: SymbolShape, out: &mut Vec<Complex64>) {
    let half = params.half_len();
    let fs = params.fs;
    let amp = (fs / (2 * half) as f64).sqrt();
    let mu = params.mu();
    let [first, second] = shape.halves();
    out.extend((0..2 * half).map(|k| {
        let t = (k as f64 - half as f64) / fs;
        let sign = if k < half {
            first.sign()
        } else {
            second.sign()
        };
        chirp_sample(amp, sign, mu, t)
    }));
}

/// One triangle-LFM or V-LFM symbol on `[-T, T)`.
pub fn gen_symbol(params: &WaveformParams, shape: SymbolShape) -> ComplexSignal {
    let mut samples = Vec::with_capacity(params.symbol_len());
    symbol_samples(params, shape, &mut samples);
    ComplexSignal::new(samples, params.fs, params.symbol_t_start())
        .expect("valid params give a valid symbol")
}

/// Concatenates one symbol per bit (1 → triangle, 0 → V).
pub fn modulate_bits(params: &WaveformParams, bits: &[u8]) -> Result<ComplexSignal> {
    if bits.is_empty() {
        return Err(Error::param("bit sequence is empty"));
    }
    let mut samples = Vec::with_capacity(bits.len() * params.symbol_len());
    for &b in bits {
        symbol_samples(params, SymbolShape::from_bit(b)?, &mut samples);
    }
    ComplexSignal::new(samples, params.fs, params.symbol_t_start())
}

/// `n_ramps` back-to-back up-ramps, each a copy of the triangle's rising half,
/// starting at the symbol start time. Unit total energy.
pub fn gen_fmcw_ramps(params: &WaveformParams, n_ramps: usize) -> Result<ComplexSignal> {
    if n_ramps == 0 {
        return Err(Error::param("need at least one FMCW ramp"));
    }
    let half = params.half_len();
    let fs = params.fs;
    let amp = (fs / (n_ramps * half) as f64).sqrt();
    let mu = params.mu();
    let samples = (0..n_ramps * half)
        .map(|k| {
            let u = ((k % half) as f64 - half as f64) / fs;
            chirp_sample(amp, 1.0, mu, u)
        })
        .collect();
    ComplexSignal::new(samples, fs, params.symbol_t_start())
}

/// Sample rate of the matched-filter LFM-pulse baseline.
pub fn lfm_pulse_fs(params: &WaveformParams) -> f64 {
    2.0 * params.fs
}

/// Baseline LFM pulse: a single chirp of duration `T` centred on `t = 0`,
/// sampled at twice the system rate. Unit energy.
pub fn gen_lfm_pulse(params: &WaveformParams, dir: ChirpDirection) -> ComplexSignal {
    let mut samples = Vec::with_capacity(params.symbol_len());
    lfm_pulse_samples(params, dir, &mut samples);
    let fs2 = lfm_pulse_fs(params);
    ComplexSignal::new(samples, fs2, -(params.half_len() as f64) / fs2)
        .expect("valid params give a valid pulse")
}

fn lfm_pulse_samples(params: &WaveformParams, dir: ChirpDirection, out: &mut Vec<Complex64>) {
    // T at 2·fs spans the same sample count as a 2T symbol at fs.
    let n = params.symbol_len();
    let fs2 = lfm_pulse_fs(params);
    let amp = (fs2 / n as f64).sqrt();
    let mu = params.mu();
    let half = n / 2;
    out.extend((0..n).map(|k| chirp_sample(amp, dir.sign(), mu, (k as f64 - half as f64) / fs2)));
}

/// Baseline bit mapping: up-chirp pulse for 1, down-chirp pulse for 0.
pub fn modulate_bits_lfm(params: &WaveformParams, bits: &[u8]) -> Result<ComplexSignal> {
    if bits.is_empty() {
        return Err(Error::param("bit sequence is empty"));
    }
    let mut samples = Vec::with_capacity(bits.len() * params.symbol_len());
    for &b in bits {
        let dir = match b {
            1 => ChirpDirection::Up,
            0 => ChirpDirection::Down,
            b => return Err(Error::param(format!("bit must be 0 or 1, got {b}"))),
        };
        lfm_pulse_samples(params, dir, &mut samples);
    }
    let fs2 = lfm_pulse_fs(params);
    ComplexSignal::new(samples, fs2, -(params.half_len() as f64) / fs2)
}

/// Per-sample frequency from successive phase differences, in
/// `(-fs/2, fs/2]`. Output has one fewer element than the input.
pub fn instantaneous_frequency(sig: &ComplexSignal) -> Result<Vec<f64>> {
    if sig.len() < 2 {
        return Err(Error::param(
            "instantaneous frequency needs at least 2 samples",
        ));
    }
    let scale = sig.fs() / (2.0 * PI);
    Ok(sig
        .samples()
        .windows(2)
        .map(|w| (w[1] * w[0].conj()).arg() * scale)
        .collect())
}

/// Removes the ±fs wraps a swept tone picks up when it crosses the Nyquist
/// edge, so a chirp wider than the sample band reads as a continuous ramp.
pub fn unwrap_frequency(freqs: &[f64], fs: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(freqs.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &f in freqs {
        if let Some(p) = prev {
            let d = f - p;
            if d > fs / 2.0 {
                offset -= fs;
            } else if d < -fs / 2.0 {
                offset += fs;
            }
        }
        prev = Some(f);
        out.push(f + offset);
    }
    out
}
