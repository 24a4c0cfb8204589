//! Debris radar receiver: per-half dechirp, decimation, root-MUSIC beat
//! estimation and the range/velocity solver, plus the two-ramp FMCW
//! baseline.

pub mod music;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{round_trip_delay, MAX_RANGE_M, MAX_SPEED_MPS};
use crate::error::{Error, Result};
use crate::signal::ComplexSignal;
use crate::waveform::{
    gen_fmcw_ramps, gen_symbol, ChirpDirection, SymbolShape, WaveformParams, SPEED_OF_LIGHT,
};

pub use music::{rootmusic, ToneEstimate};

/// Margin kept between the largest expected beat and the post-decimation
/// Nyquist frequency when the factor is chosen automatically.
const AUTO_DECIMATION_MARGIN: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    /// Require `0 < f_up <= f_down` (Doppler dominates the delay term).
    #[default]
    Strict,
    /// Use the signed beats directly. Valid for any regime, including
    /// static and receding targets; meant for diagnostics.
    Signed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadarRxConfig {
    /// `None` picks the largest factor whose Nyquist clears the scenario's
    /// worst-case beat.
    pub decimation: Option<usize>,
    pub subarray_len: usize,
    pub model_order: usize,
    /// Fraction of each half discarded at both edges. The leading trim is
    /// never shorter than the longest in-scenario round trip.
    pub trim_fraction: f64,
    pub solve: SolveMode,
}

impl Default for RadarRxConfig {
    fn default() -> Self {
        Self {
            decimation: None,
            subarray_len: music::DEFAULT_SUBARRAY,
            model_order: 1,
            trim_fraction: 0.02,
            solve: SolveMode::Strict,
        }
    }
}

impl RadarRxConfig {
    pub fn validate(&self, params: &WaveformParams) -> Result<()> {
        if self.subarray_len < 2 || self.model_order == 0 || self.model_order >= self.subarray_len {
            return Err(Error::param(
                "need subarray_len >= 2 and 1 <= model_order < subarray_len",
            ));
        }
        if !(0.0..0.25).contains(&self.trim_fraction) {
            return Err(Error::param("trim_fraction must lie in [0, 0.25)"));
        }
        let factor = self.decimation_for(params)?;
        check_nyquist(params.fs(), factor, max_beat_hz(params))
    }

    pub fn decimation_for(&self, params: &WaveformParams) -> Result<usize> {
        match self.decimation {
            Some(0) => Err(Error::param("decimation factor must be >= 1")),
            Some(f) => Ok(f),
            None => Ok(auto_decimation(params)),
        }
    }
}

/// Largest beat the scenario bounds allow: `2V_max/λ + μ·2R_max/c`.
pub fn max_beat_hz(params: &WaveformParams) -> f64 {
    2.0 * MAX_SPEED_MPS / params.wavelength() + params.mu() * round_trip_delay(MAX_RANGE_M)
}

pub fn auto_decimation(params: &WaveformParams) -> usize {
    let need = AUTO_DECIMATION_MARGIN * max_beat_hz(params);
    let mut f = 1;
    while params.fs() / (2.0 * (f + 1) as f64) > need {
        f += 1;
    }
    f
}

fn check_nyquist(fs: f64, factor: usize, max_freq_hz: f64) -> Result<()> {
    let nyq = fs / (2.0 * factor as f64);
    if max_freq_hz >= nyq {
        return Err(Error::param(format!(
            "decimation by {factor} leaves Nyquist {nyq:.6e} Hz, below the expected {max_freq_hz:.6e} Hz"
        )));
    }
    Ok(())
}

/// Magnitudes of the up- and down-chirp beat frequencies. For the FMCW
/// baseline they are the first and second up-ramp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeatPair {
    pub f_up: f64,
    pub f_down: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentDiagnostics {
    pub signed_beat_hz: f64,
    pub root_modulus: f64,
    pub subarray_len: usize,
    pub snapshots: usize,
    pub trimmed_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub first: SegmentDiagnostics,
    pub second: SegmentDiagnostics,
    pub decimation: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub beat: BeatPair,
    pub range_m: f64,
    pub velocity_mps: f64,
    pub diagnostics: Diagnostics,
}

/// `rx[n]·conj(ref[n])`.
pub fn dechirp(rx: &ComplexSignal, reference: &ComplexSignal) -> Result<ComplexSignal> {
    if rx.len() != reference.len() {
        return Err(Error::param(format!(
            "dechirp length mismatch: {} vs {}",
            rx.len(),
            reference.len()
        )));
    }
    if (rx.fs() - reference.fs()).abs() > 1e-9 * rx.fs() {
        return Err(Error::param("dechirp sample rate mismatch"));
    }
    if (rx.t_start() - reference.t_start()).abs() > 0.5 / rx.fs() {
        return Err(Error::param("dechirp time base mismatch"));
    }
    let out = rx
        .samples()
        .iter()
        .zip(reference.samples())
        .map(|(a, b)| a * b.conj())
        .collect();
    ComplexSignal::new(out, rx.fs(), rx.t_start())
}

/// Blackman-windowed sinc low-pass with unit DC gain.
fn lowpass_taps(factor: usize) -> Vec<f64> {
    let n = 32 * factor + 1;
    let mid = (n / 2) as f64;
    let cutoff = 0.5 / factor as f64;
    let mut h: Vec<f64> = (0..n)
        .map(|k| {
            let x = k as f64 - mid;
            let sinc = if x == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * PI * cutoff * x).sin() / (PI * x)
            };
            let w = 0.42 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos()
                + 0.08 * (4.0 * PI * k as f64 / (n - 1) as f64).cos();
            sinc * w
        })
        .collect();
    let sum: f64 = h.iter().sum();
    h.iter_mut().for_each(|v| *v /= sum);
    h
}

/// Anti-alias filter then keep every `factor`-th sample. Only fully
/// overlapped filter outputs are kept. `max_freq_hz` is the highest
/// frequency the caller needs preserved.
pub fn decimate(sig: &ComplexSignal, factor: usize, max_freq_hz: f64) -> Result<ComplexSignal> {
    if factor == 0 {
        return Err(Error::param("decimation factor must be >= 1"));
    }
    check_nyquist(sig.fs(), factor, max_freq_hz)?;
    if factor == 1 {
        return Ok(sig.clone());
    }
    let h = lowpass_taps(factor);
    let x = sig.samples();
    if x.len() < h.len() {
        return Err(Error::param("signal shorter than the decimation filter"));
    }
    let delay = h.len() / 2;
    let out: Vec<Complex64> = (0..=x.len() - h.len())
        .step_by(factor)
        .map(|start| h.iter().zip(&x[start..]).map(|(&c, &v)| v * c).sum())
        .collect();
    ComplexSignal::new(out, sig.fs() / factor as f64, sig.time(delay))
}

fn trim_bounds(n: usize, fs: f64, frac: f64) -> (usize, usize) {
    let edge = (frac * n as f64).ceil() as usize;
    let lead = edge.max((round_trip_delay(MAX_RANGE_M) * fs).ceil() as usize);
    (lead, n.saturating_sub(edge))
}

/// Signed beat of one dechirped segment.
fn segment_beat(
    dechirped: &ComplexSignal,
    params: &WaveformParams,
    cfg: &RadarRxConfig,
) -> Result<SegmentDiagnostics> {
    let factor = cfg.decimation_for(params)?;
    let (a, b) = trim_bounds(dechirped.len(), dechirped.fs(), cfg.trim_fraction);
    if b <= a {
        return Err(Error::param("segment too short after trimming"));
    }
    let trimmed = dechirped.slice(a..b)?;
    let dec = decimate(&trimmed, factor, max_beat_hz(params))?;
    let t = rootmusic(dec.samples(), dec.fs(), cfg.model_order, cfg.subarray_len)?;
    Ok(SegmentDiagnostics {
        signed_beat_hz: t.freq_hz,
        root_modulus: t.root_modulus,
        subarray_len: t.subarray_len,
        snapshots: t.snapshots,
        trimmed_len: b - a,
    })
}

fn dechirp_halves(
    rx: &ComplexSignal,
    reference: &ComplexSignal,
    params: &WaveformParams,
    cfg: &RadarRxConfig,
) -> Result<(SegmentDiagnostics, SegmentDiagnostics)> {
    let h = params.half_len();
    let d = dechirp(&rx.window(reference.t_start(), 2 * h)?, reference)?;
    let first = segment_beat(&d.slice(0..h)?, params, cfg)?;
    let second = segment_beat(&d.slice(h..2 * h)?, params, cfg)?;
    Ok((first, second))
}

/// Range and velocity from one received symbol of the given shape.
///
/// With `f_up = f_d - μτ` and `f_down = f_d + μτ`:
/// `R = (f_down - f_up)·T·c / (4ΔF)` and `V = (f_down + f_up)·λ/4`.
pub fn estimate_target(
    rx: &ComplexSignal,
    shape: SymbolShape,
    params: &WaveformParams,
    cfg: &RadarRxConfig,
) -> Result<EstimationResult> {
    cfg.validate(params)?;
    let reference = gen_symbol(params, shape);
    let (first, second) = dechirp_halves(rx, &reference, params, cfg)?;
    let (up, down) = match shape.halves()[0] {
        ChirpDirection::Up => (first.signed_beat_hz, second.signed_beat_hz),
        ChirpDirection::Down => (second.signed_beat_hz, first.signed_beat_hz),
    };
    let beat = BeatPair {
        f_up: up.abs(),
        f_down: down.abs(),
    };
    if cfg.solve == SolveMode::Strict && (up <= 0.0 || down < up) {
        return Err(Error::AmbiguousRegime {
            f_up_hz: beat.f_up,
            f_down_hz: beat.f_down,
        });
    }
    Ok(EstimationResult {
        beat,
        range_m: (down - up) * params.t_half() * SPEED_OF_LIGHT / (4.0 * params.delta_f()),
        velocity_mps: (down + up) * params.wavelength() / 4.0,
        diagnostics: Diagnostics {
            first,
            second,
            decimation: cfg.decimation_for(params)?,
        },
    })
}

/// Two-ramp FMCW baseline. Each ramp's whole beat is read as delay,
/// `R_k = -f_k·c/(2μ)`, so a moving target's range carries the coupled bias
/// `-f_d·c/(2μ)` and can come out negative. Velocity is the range rate
/// between the two ramps.
pub fn estimate_target_fmcw(
    rx: &ComplexSignal,
    params: &WaveformParams,
    cfg: &RadarRxConfig,
) -> Result<EstimationResult> {
    cfg.validate(params)?;
    let reference = gen_fmcw_ramps(params, 2)?;
    let (first, second) = dechirp_halves(rx, &reference, params, cfg)?;
    let k = SPEED_OF_LIGHT / (2.0 * params.mu());
    let (r0, r1) = (-first.signed_beat_hz * k, -second.signed_beat_hz * k);
    Ok(EstimationResult {
        beat: BeatPair {
            f_up: first.signed_beat_hz.abs(),
            f_down: second.signed_beat_hz.abs(),
        },
        range_m: 0.5 * (r0 + r1),
        velocity_mps: (r0 - r1) / params.t_half(),
        diagnostics: Diagnostics {
            first,
            second,
            decimation: cfg.decimation_for(params)?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{echo, echo_stop_and_hop, DebrisTarget};
    use rustfft::FftPlanner;

    fn fft_peak_hz(x: &[Complex64], fs: f64) -> f64 {
        let n = (8 * x.len()).next_power_of_two();
        let mut buf = x.to_vec();
        buf.resize(n, Complex64::new(0.0, 0.0));
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let k = (0..n)
            .max_by(|&a, &b| buf[a].norm().total_cmp(&buf[b].norm()))
            .unwrap();
        let k = if k >= n / 2 {
            k as f64 - n as f64
        } else {
            k as f64
        };
        k * fs / n as f64
    }

    fn tone(f: f64, fs: f64, n: usize) -> ComplexSignal {
        let s = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * f * k as f64 / fs))
            .collect();
        ComplexSignal::new(s, fs, 0.0).unwrap()
    }

    #[test]
    fn self_dechirp_is_constant() {
        let p = WaveformParams::desk();
        let x = gen_symbol(&p, SymbolShape::TriangleLfm);
        let d = dechirp(&x, &x).unwrap();
        let m0 = d.samples()[0];
        assert!(d
            .samples()
            .iter()
            .all(|z| (z - m0).norm() < 1e-12 * m0.norm() && z.im.abs() < 1e-12 * m0.norm()));
        assert!(dechirp(&x, &x.slice(0..10).unwrap()).is_err());
    }

    #[test]
    fn dechirped_halves_oracle() {
        let p = WaveformParams::paper();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let t = DebrisTarget::new(250.0, 10_000.0).unwrap();
        let rx = echo(&tx, &t, &p)
            .unwrap()
            .window(tx.t_start(), tx.len())
            .unwrap();
        let d = dechirp(&rx, &tx).unwrap();
        let h = p.half_len();
        let res = p.fs() / (8 * (h - 4000)).next_power_of_two() as f64;
        let up = fft_peak_hz(&d.samples()[2000..h - 2000], p.fs());
        let down = fft_peak_hz(&d.samples()[h + 2000..2 * h - 2000], p.fs());
        assert!((up - 21.082e6).abs() < res + 1e3, "{up}");
        assert!((down - 24.284e6).abs() < res + 1e3, "{down}");
    }

    #[test]
    fn decimation() {
        let x = tone(21.082e6, 360e6, 20_000);
        assert_eq!(decimate(&x, 1, 30e6).unwrap(), x);
        let d = decimate(&x, 5, 30e6).unwrap();
        assert_eq!(d.fs(), 72e6);
        let f = music::rootmusic(d.samples(), d.fs(), 1, 64)
            .unwrap()
            .freq_hz;
        assert!((f - 21.082e6).abs() < 10.0, "{f}");
        let f = fft_peak_hz(d.samples(), d.fs());
        assert!((f - 21.082e6).abs() < 72e6 / (8 * d.len()).next_power_of_two() as f64);
        assert!(decimate(&tone(40e6, 360e6, 1000), 5, 40e6).is_err());
        assert!(decimate(&x, 0, 1.0).is_err());
    }

    #[test]
    fn decimation_rejects_out_of_band() {
        // A tone past the output Nyquist is strongly attenuated, not folded in.
        let x = tone(60e6, 360e6, 20_000);
        let d = decimate(&x, 4, 30e6).unwrap();
        assert!(d.mean_power() < 1e-4, "{}", d.mean_power());
    }

    #[test]
    fn preset_decimation_factors() {
        assert_eq!(auto_decimation(&WaveformParams::paper()), 4);
        assert_eq!(auto_decimation(&WaveformParams::desk()), 1);
        assert!((max_beat_hz(&WaveformParams::paper()) - 37.22e6).abs() < 0.05e6);
        let bad = RadarRxConfig {
            decimation: Some(5),
            ..Default::default()
        };
        assert!(bad.validate(&WaveformParams::paper()).is_err());
    }

    fn closed_loop(
        p: &WaveformParams,
        shape: SymbolShape,
        r: f64,
        v: f64,
        cfg: &RadarRxConfig,
    ) -> EstimationResult {
        let tx = gen_symbol(p, shape);
        let t = DebrisTarget::new(r, v).unwrap();
        let rx = echo(&tx, &t, p).unwrap();
        estimate_target(&rx, shape, p, cfg).unwrap()
    }

    #[test]
    fn noiseless_reference_target() {
        let p = WaveformParams::paper();
        let e = closed_loop(
            &p,
            SymbolShape::TriangleLfm,
            250.0,
            10_000.0,
            &RadarRxConfig::default(),
        );
        assert!((e.range_m - 250.0).abs() < 0.5, "{e:?}");
        assert!((e.velocity_mps - 10_000.0).abs() < 2.0, "{e:?}");
        assert!((e.beat.f_up - 21.082e6).abs() < 5e3 && (e.beat.f_down - 24.284e6).abs() < 5e3);
        assert_eq!(e.diagnostics.decimation, 4);
    }

    #[test]
    fn shapes_agree_and_edge_cases() {
        let p = WaveformParams::desk();
        let cfg = RadarRxConfig::default();
        let a = closed_loop(&p, SymbolShape::TriangleLfm, 321.0, 8_765.0, &cfg);
        let b = closed_loop(&p, SymbolShape::VLfm, 321.0, 8_765.0, &cfg);
        assert!(
            (a.range_m - b.range_m).abs() < 0.5 && (a.velocity_mps - b.velocity_mps).abs() < 2.0
        );
        assert!((a.range_m - 321.0).abs() < 0.5 && (a.velocity_mps - 8_765.0).abs() < 2.0);

        let near = closed_loop(&p, SymbolShape::TriangleLfm, 5.0, 10_000.0, &cfg);
        assert!(near.range_m < 10.0 && (near.velocity_mps - 10_000.0).abs() < 2.0);

        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let rx = echo(&tx, &DebrisTarget::new(250.0, 0.0).unwrap(), &p).unwrap();
        assert!(matches!(
            estimate_target(&rx, SymbolShape::TriangleLfm, &p, &cfg),
            Err(Error::AmbiguousRegime { .. })
        ));
        let signed = RadarRxConfig {
            solve: SolveMode::Signed,
            ..cfg
        };
        let s = estimate_target(&rx, SymbolShape::TriangleLfm, &p, &signed).unwrap();
        assert!(
            (s.range_m - 250.0).abs() < 0.5 && s.velocity_mps.abs() < 2.0,
            "{s:?}"
        );
        assert!((s.beat.f_up - s.beat.f_down).abs() < 50.0);
    }

    #[test]
    fn fmcw_coupling() {
        let p = WaveformParams::desk();
        let cfg = RadarRxConfig::default();
        let tx = gen_fmcw_ramps(&p, 2).unwrap();
        let run = |r: f64, v: f64| {
            let t = DebrisTarget::new(r, v).unwrap();
            let rx = echo_stop_and_hop(&tx, &t, &p, 2).unwrap();
            (estimate_target_fmcw(&rx, &p, &cfg).unwrap(), t.doppler(&p))
        };
        let (s, _) = run(250.0, 0.0);
        assert!(
            (s.range_m - 250.0).abs() < 0.5 && s.velocity_mps.abs() < 50.0,
            "{s:?}"
        );
        for v in [100.0, 10_000.0] {
            let (m, fd) = run(250.0, v);
            let bias = fd * p.t_half() * SPEED_OF_LIGHT / (2.0 * p.delta_f());
            assert!((250.0 - m.range_m - bias).abs() < 1.0, "{m:?} bias {bias}");
            assert!((m.velocity_mps - v).abs() < 50.0, "{m:?}");
        }
    }

    #[test]
    fn fmcw_reference_target_paper_scale() {
        let p = WaveformParams::paper();
        let tx = gen_fmcw_ramps(&p, 2).unwrap();
        let t = DebrisTarget::new(250.0, 10_000.0).unwrap();
        let rx = echo_stop_and_hop(&tx, &t, &p, 2).unwrap();
        let m = estimate_target_fmcw(&rx, &p, &RadarRxConfig::default()).unwrap();
        assert!((m.range_m.abs() - 3292.0).abs() < 2.0, "{m:?}");
    }
}
