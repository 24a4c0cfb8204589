//! Propagation models: the monostatic debris echo, block Rician fading on
//! the communications link, AWGN, and random debris scenarios.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{complex_normal, seeded};
use crate::signal::ComplexSignal;
use crate::waveform::{WaveformParams, SPEED_OF_LIGHT};

pub const MAX_RANGE_M: f64 = 500.0;
pub const MAX_SPEED_MPS: f64 = 15_000.0;

/// Samples kept on either side of the delayed waveform so the interpolation
/// ringing at its edges is not cut off.
pub const ECHO_GUARD: usize = 128;

/// Point scatterer. Range is measured at the transmission's `t = 0`;
/// positive velocity means approaching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DebrisTarget {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl DebrisTarget {
    pub fn new(range_m: f64, velocity_mps: f64) -> Result<Self> {
        let t = Self {
            range_m,
            velocity_mps,
            amplitude: 1.0,
            phase: 0.0,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range_m > 0.0 && self.range_m <= MAX_RANGE_M) {
            return Err(Error::param(format!(
                "target range {} m outside (0, {MAX_RANGE_M}]",
                self.range_m
            )));
        }
        if !(self.velocity_mps.abs() <= MAX_SPEED_MPS) {
            return Err(Error::param(format!(
                "target velocity {} m/s exceeds ±{MAX_SPEED_MPS}",
                self.velocity_mps
            )));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0 && self.phase.is_finite()) {
            return Err(Error::param(
                "echo amplitude must be finite and non-negative, phase finite",
            ));
        }
        Ok(())
    }

    /// Round-trip delay `2R/c`.
    pub fn delay(&self) -> f64 {
        round_trip_delay(self.range_m)
    }

    /// Doppler shift `2V/λ`.
    pub fn doppler(&self, params: &WaveformParams) -> f64 {
        2.0 * self.velocity_mps / params.wavelength()
    }
}

pub fn round_trip_delay(range_m: f64) -> f64 {
    2.0 * range_m / SPEED_OF_LIGHT
}

/// Samples appended to an echo so that any in-scenario delay fits.
fn echo_extension(tx: &ComplexSignal) -> usize {
    let worst = round_trip_delay(MAX_RANGE_M + MAX_SPEED_MPS * tx.duration());
    (worst * tx.fs()).ceil() as usize + ECHO_GUARD
}

/// Delays `samples` by `delay` seconds with a linear phase ramp in the
/// frequency domain on a zero-padded block. `centre_hz` is the middle of
/// the occupied band; the signal is shifted there first so band edges do
/// not wrap. The result starts `pre` samples before `t_start` and is the
/// whole padded block, at least `min_len` samples: keeping every sample
/// makes the delay exactly energy preserving. Ringing that would precede
/// the block start lands at its far end.
pub fn fractional_delay(
    samples: &[Complex64],
    fs: f64,
    t_start: f64,
    delay: f64,
    centre_hz: f64,
    pre: usize,
    min_len: usize,
) -> Vec<Complex64> {
    let m = (2 * min_len.max(samples.len() + pre)).next_power_of_two();
    let t0 = t_start - pre as f64 / fs;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (n, (b, &x)) in buf[pre..].iter_mut().zip(samples).enumerate() {
        let t = t_start + n as f64 / fs;
        *b = x * Complex64::from_polar(1.0, -2.0 * PI * centre_hz * t);
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let df = fs / m as f64;
    for (k, b) in buf.iter_mut().enumerate() {
        // The Nyquist bin is treated as -fs/2 so the ramp stays unitary.
        let f = if k < m / 2 {
            k as f64 * df
        } else {
            (k as f64 - m as f64) * df
        };
        *b *= Complex64::from_polar(1.0, -2.0 * PI * f * delay);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    for (n, b) in buf.iter_mut().enumerate() {
        let t = t0 + n as f64 / fs;
        *b *= Complex64::from_polar(scale, 2.0 * PI * centre_hz * (t - delay));
    }
    buf
}

/// `A_r · x(t - τ) · e^{j2πf_d(t - τ)} · e^{jφ}` with `τ = 2R/c`,
/// `f_d = 2V/λ`. The output is on `tx`'s sample grid; it starts
/// [`ECHO_GUARD`] samples early and runs well past the end of `tx`, so the
/// whole delayed waveform is kept.
pub fn echo(
    tx: &ComplexSignal,
    target: &DebrisTarget,
    params: &WaveformParams,
) -> Result<ComplexSignal> {
    target.validate()?;
    echo_with_delay(tx, target, params, target.delay(), echo_extension(tx))
}

fn echo_with_delay(
    tx: &ComplexSignal,
    target: &DebrisTarget,
    params: &WaveformParams,
    tau: f64,
    extension: usize,
) -> Result<ComplexSignal> {
    if tau >= params.t_half() {
        return Err(Error::BlindSpot {
            delay_s: tau,
            t_half_s: params.t_half(),
        });
    }
    if (tx.fs() - params.fs()).abs() > 1e-9 * params.fs() {
        return Err(Error::param(
            "transmit signal sample rate does not match waveform parameters",
        ));
    }
    let out_len = ECHO_GUARD + tx.len() + extension;
    // Generated transmissions occupy [-ΔF, 0].
    let centre = -0.5 * params.delta_f();
    let mut out = fractional_delay(
        tx.samples(),
        tx.fs(),
        tx.t_start(),
        tau,
        centre,
        ECHO_GUARD,
        out_len,
    );
    let t0 = tx.t_start() - ECHO_GUARD as f64 / tx.fs();
    let fd = target.doppler(params);
    for (n, z) in out.iter_mut().enumerate() {
        let t = t0 + n as f64 / tx.fs();
        *z *= Complex64::from_polar(target.amplitude, 2.0 * PI * fd * (t - tau) + target.phase);
    }
    ComplexSignal::new(out, tx.fs(), t0)
}

/// Echo of a moving target under the stop-and-hop approximation: `tx` is
/// split into `segments` equal parts and each part is delayed by the
/// round trip to the range the target has at that part's centre time,
/// `R - V·t_c`. With one segment centred on `t = 0` this is [`echo`].
pub fn echo_stop_and_hop(
    tx: &ComplexSignal,
    target: &DebrisTarget,
    params: &WaveformParams,
    segments: usize,
) -> Result<ComplexSignal> {
    target.validate()?;
    if segments == 0 || !tx.len().is_multiple_of(segments) {
        return Err(Error::param(format!(
            "cannot split {} samples into {segments} equal segments",
            tx.len()
        )));
    }
    let seg_len = tx.len() / segments;
    let ext = echo_extension(tx);
    let mut out: Vec<Complex64> = Vec::new();
    let mut t0 = tx.t_start();
    for k in 0..segments {
        let t_centre = tx.time(k * seg_len) + 0.5 * seg_len as f64 / tx.fs();
        let range = target.range_m - target.velocity_mps * t_centre;
        let part = echo_with_delay(tx, target, params, round_trip_delay(range), ext)?;
        let start = if k == 0 { 0 } else { ECHO_GUARD + k * seg_len };
        let end = if k + 1 == segments {
            part.len()
        } else {
            ECHO_GUARD + (k + 1) * seg_len
        };
        out.extend_from_slice(&part.samples()[start..end]);
        t0 = part.t_start();
    }
    ComplexSignal::new(out, tx.fs(), t0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RicianChannel {
    /// LOS-to-scattered power ratio (linear).
    pub k_factor: f64,
    /// Phase of the line-of-sight component.
    #[serde(default)]
    pub los_phase: f64,
}

impl RicianChannel {
    pub fn new(k_factor: f64) -> Result<Self> {
        let ch = Self {
            k_factor,
            los_phase: 0.0,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_factor >= 0.0) || !self.los_phase.is_finite() {
            return Err(Error::param(format!(
                "Rician K must be >= 0, got {}",
                self.k_factor
            )));
        }
        Ok(())
    }

    /// One block-fading tap with `E|h|² = 1`.
    pub fn draw_tap<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let los = Complex64::from_polar(1.0, self.los_phase);
        let scattered = complex_normal(rng);
        if self.k_factor.is_infinite() {
            return los;
        }
        let k = self.k_factor;
        los * (k / (k + 1.0)).sqrt() + scattered * (1.0 / (k + 1.0)).sqrt()
    }
}

/// Multiplies each `block_len`-sample block by its own tap.
pub fn apply_rician(
    sig: &ComplexSignal,
    ch: &RicianChannel,
    block_len: usize,
    seed: u64,
) -> Result<ComplexSignal> {
    ch.validate()?;
    if block_len == 0 {
        return Err(Error::param("fading block length must be positive"));
    }
    let mut rng = seeded(seed);
    let mut out = sig.clone();
    for block in out.samples_mut().chunks_mut(block_len) {
        let h = ch.draw_tap(&mut rng);
        block.iter_mut().for_each(|z| *z *= h);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnrReference {
    /// SNR is the ratio of mean signal power to noise variance per sample.
    PerSample,
    /// SNR refers to energy integrated over a symbol of `symbol_len`
    /// samples: the per-sample SNR is lower by `10·log10(symbol_len)`.
    PerSymbol { symbol_len: usize },
}

/// Noise variance per complex sample for a signal of the given mean power.
pub fn noise_variance(mean_power: f64, snr_db: f64, reference: SnrReference) -> f64 {
    let snr = 10f64.powf(snr_db / 10.0);
    match reference {
        SnrReference::PerSample => mean_power / snr,
        SnrReference::PerSymbol { symbol_len } => mean_power * symbol_len as f64 / snr,
    }
}

/// Adds circular complex white Gaussian noise. `snr_db = +∞` returns the
/// input unchanged.
pub fn add_awgn(
    sig: &ComplexSignal,
    snr_db: f64,
    reference: SnrReference,
    seed: u64,
) -> Result<ComplexSignal> {
    if snr_db == f64::INFINITY {
        return Ok(sig.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::param(format!(
            "SNR must be finite or +inf, got {snr_db}"
        )));
    }
    if let SnrReference::PerSymbol { symbol_len: 0 } = reference {
        return Err(Error::param("symbol length must be positive"));
    }
    let sigma = noise_variance(sig.mean_power(), snr_db, reference).sqrt();
    let mut rng = seeded(seed);
    let mut out = sig.clone();
    for z in out.samples_mut() {
        *z += complex_normal(&mut rng) * sigma;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDistribution {
    pub range_mean_m: f64,
    pub range_std_m: f64,
    pub velocity_mean_mps: f64,
    pub velocity_std_mps: f64,
}

impl Default for ScenarioDistribution {
    fn default() -> Self {
        Self {
            range_mean_m: 250.0,
            range_std_m: 70.0,
            velocity_mean_mps: 10_000.0,
            velocity_std_mps: 2_000.0,
        }
    }
}

impl ScenarioDistribution {
    pub fn validate(&self) -> Result<()> {
        let ok = self.range_std_m > 0.0
            && self.velocity_std_mps > 0.0
            && self.range_mean_m > 0.0
            && self.range_mean_m <= MAX_RANGE_M
            && self.velocity_mean_mps > 0.0
            && self.velocity_mean_mps <= MAX_SPEED_MPS;
        if !ok {
            return Err(Error::param(
                "scenario means must lie inside (0, 500] m and (0, 15000] m/s with positive deviations",
            ));
        }
        Ok(())
    }

    /// Rejection-samples ranges in `(0, 500]` m and velocities in
    /// `(0, 15 000]` m/s.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DebrisTarget {
        let range = Normal::new(self.range_mean_m, self.range_std_m).expect("validated std");
        let vel =
            Normal::new(self.velocity_mean_mps, self.velocity_std_mps).expect("validated std");
        let r = loop {
            let r = range.sample(rng);
            if r > 0.0 && r <= MAX_RANGE_M {
                break r;
            }
        };
        let v = loop {
            let v = vel.sample(rng);
            if v > 0.0 && v <= MAX_SPEED_MPS {
                break v;
            }
        };
        DebrisTarget {
            range_m: r,
            velocity_mps: v,
            amplitude: 1.0,
            phase: 0.0,
        }
    }

    /// Deterministic stream of draws for a seed.
    pub fn sampler(&self, seed: u64) -> impl Iterator<Item = DebrisTarget> + '_ {
        let mut rng = seeded(seed);
        std::iter::repeat_with(move || self.sample(&mut rng))
    }
}

pub fn sample_scenario(dist: &ScenarioDistribution, seed: u64) -> Result<DebrisTarget> {
    dist.validate()?;
    Ok(dist.sample(&mut seeded(seed)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{gen_symbol, SymbolShape};

    fn xcorr_peak_lag(
        a: &[Complex64],
        b: &[Complex64],
        lags: std::ops::RangeInclusive<i64>,
    ) -> (i64, f64) {
        // Returns the integer lag maximizing |Σ a[n] b*[n - lag]| and a
        // parabolic refinement.
        let score = |lag: i64| -> f64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (n, &x) in a.iter().enumerate() {
                let m = n as i64 - lag;
                if m >= 0 && (m as usize) < b.len() {
                    acc += x * b[m as usize].conj();
                }
            }
            acc.norm()
        };
        let (best, _) = lags
            .clone()
            .map(|l| (l, score(l)))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        let (ym, y0, yp) = (score(best - 1), score(best), score(best + 1));
        let frac = 0.5 * (ym - yp) / (ym - 2.0 * y0 + yp);
        (best, best as f64 + frac)
    }

    #[test]
    fn target_validation() {
        assert!(DebrisTarget::new(0.0, 0.0).is_err());
        assert!(DebrisTarget::new(501.0, 0.0).is_err());
        assert!(DebrisTarget::new(500.0, 15_001.0).is_err());
        assert!(DebrisTarget::new(500.0, -15_000.0).is_ok());
    }

    #[test]
    fn delay_and_doppler_of_reference_target() {
        let p = WaveformParams::paper();
        let t = DebrisTarget::new(250.0, 10_000.0).unwrap();
        assert!((t.delay() - 1.6678e-6).abs() < 1e-10);
        assert!((t.doppler(&p) - 22.683e6).abs() < 1e3);
    }

    #[test]
    fn blind_spot_is_rejected() {
        // Any legal range at the paper scale returns well within T; shrink T.
        let p = WaveformParams::new(340e9, 1e6, 2e-6, 2e6).unwrap();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let t = DebrisTarget::new(400.0, 0.0).unwrap();
        assert!(matches!(echo(&tx, &t, &p), Err(Error::BlindSpot { .. })));
    }

    #[test]
    fn near_zero_range_is_near_identity() {
        let p = WaveformParams::desk();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let t = DebrisTarget::new(0.15, 0.0).unwrap();
        let e = echo(&tx, &t, &p)
            .unwrap()
            .window(tx.t_start(), tx.len())
            .unwrap();
        assert!((t.delay() - 1.0007e-9).abs() < 1e-12);
        let err: f64 = tx
            .samples()
            .iter()
            .zip(e.samples())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / p.fs();
        // A 1 ns shift of a 28.8 MHz-wide signal moves each sample by at
        // most 2π·ΔF·τ ≈ 0.18 of its amplitude.
        assert!(err < 0.04, "{err}");
    }

    #[test]
    fn pure_delay_shows_in_cross_correlation() {
        let p = WaveformParams::desk();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let t = DebrisTarget::new(500.0, 0.0).unwrap();
        let e = echo(&tx, &t, &p)
            .unwrap()
            .window(tx.t_start(), tx.len())
            .unwrap();
        let expected = t.delay() * p.fs();
        assert!((t.delay() - 3.3356e-6).abs() < 1e-9);
        let (_, refined) = xcorr_peak_lag(e.samples(), tx.samples(), 100..=140);
        assert!((refined - expected).abs() < 0.5, "{refined} vs {expected}");
    }

    #[test]
    fn echo_preserves_energy() {
        for p in [WaveformParams::desk(), WaveformParams::paper()] {
            let tx = gen_symbol(&p, SymbolShape::VLfm);
            let mut t = DebrisTarget::new(377.7, 12_345.0).unwrap();
            t.amplitude = 0.5;
            t.phase = 1.0;
            let e = echo(&tx, &t, &p).unwrap();
            assert!((e.energy() - 0.25).abs() < 1e-6, "{}", e.energy());
        }
    }

    #[test]
    fn dechirped_up_half_is_a_tone_at_doppler_minus_delay_term() {
        let p = WaveformParams::paper();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let t = DebrisTarget::new(250.0, 10_000.0).unwrap();
        let e = echo(&tx, &t, &p)
            .unwrap()
            .window(tx.t_start(), tx.len())
            .unwrap();
        let expected = t.doppler(&p) - p.mu() * t.delay();
        assert!((expected - 21.082e6).abs() < 1e3);
        // Phase slope over a clean stretch of the rising half.
        let h = p.half_len();
        let (a, b) = (h / 10, h - h / 10);
        let z0 = e.samples()[a] * tx.samples()[a].conj();
        let z1 = e.samples()[b] * tx.samples()[b].conj();
        let step = e.samples()[a + 1] * tx.samples()[a + 1].conj() * z0.conj();
        let coarse = step.arg() * p.fs() / (2.0 * PI);
        let span = (b - a) as f64 / p.fs();
        let cycles = ((coarse * span) - (z1 * z0.conj()).arg() / (2.0 * PI)).round();
        let fine = (cycles + (z1 * z0.conj()).arg() / (2.0 * PI)) / span;
        assert!((fine - expected).abs() < 1.0, "{fine} vs {expected}");
    }

    #[test]
    fn stop_and_hop_single_segment_equals_echo() {
        let p = WaveformParams::desk();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let t = DebrisTarget::new(123.0, 9_000.0).unwrap();
        assert_eq!(
            echo(&tx, &t, &p).unwrap(),
            echo_stop_and_hop(&tx, &t, &p, 1).unwrap()
        );
        assert!(echo_stop_and_hop(&tx, &t, &p, 7).is_err());
    }

    #[test]
    fn rician_los_limit() {
        let p = WaveformParams::desk();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        let ch = RicianChannel {
            k_factor: 1e12,
            los_phase: 0.7,
        };
        let out = apply_rician(&tx, &ch, tx.len(), 3).unwrap();
        let g = out.samples()[5] / tx.samples()[5];
        assert!((g.norm() - 1.0).abs() < 1e-5);
        for (a, b) in tx.samples().iter().zip(out.samples()) {
            assert!((a * g - b).norm() < 1e-9);
        }
        assert!(RicianChannel::new(-1.0).is_err());
    }

    fn tap_moments(k: f64) -> (f64, f64) {
        let ch = RicianChannel::new(k).unwrap();
        let mut rng = seeded(11);
        let n = 100_000;
        let mut power = 0.0;
        let mut mean = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let h = ch.draw_tap(&mut rng);
            power += h.norm_sqr();
            mean += h;
        }
        (power / n as f64, (mean / n as f64).norm_sqr())
    }

    #[test]
    fn rician_tap_moments() {
        let (p0, los0) = tap_moments(0.0);
        assert!((p0 - 1.0).abs() < 0.02);
        assert!(los0 < 1e-3);
        let (p10, los10) = tap_moments(10.0);
        assert!((p10 - 1.0).abs() < 0.02);
        assert!((los10 - 10.0 / 11.0).abs() < 0.02);
    }

    #[test]
    fn awgn_infinite_snr_is_identity() {
        let p = WaveformParams::desk();
        let tx = gen_symbol(&p, SymbolShape::TriangleLfm);
        assert_eq!(
            add_awgn(&tx, f64::INFINITY, SnrReference::PerSample, 1).unwrap(),
            tx
        );
        assert!(add_awgn(&tx, f64::NAN, SnrReference::PerSample, 1).is_err());
    }

    #[test]
    fn awgn_power_per_sample_and_per_symbol() {
        let n = 1 << 20;
        let sig = ComplexSignal::new(vec![Complex64::new(0.6, 0.8); n], 1.0, 0.0).unwrap();
        let noisy = add_awgn(&sig, 0.0, SnrReference::PerSample, 5).unwrap();
        let noise: Vec<Complex64> = noisy
            .samples()
            .iter()
            .zip(sig.samples())
            .map(|(a, b)| a - b)
            .collect();
        let pn = noise.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        assert!((pn - 1.0).abs() < 0.01, "{pn}");

        // Whiteness: lag-k autocorrelation within 3σ of the estimator, σ = 1/√n.
        for lag in [1usize, 2, 7, 100] {
            let r: Complex64 = noise[lag..]
                .iter()
                .zip(&noise)
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
                / (n - lag) as f64;
            assert!(
                r.norm() < 3.0 / (n as f64).sqrt(),
                "lag {lag}: {}",
                r.norm()
            );
        }

        let len = 1 << 16;
        let sym = add_awgn(&sig, 0.0, SnrReference::PerSymbol { symbol_len: len }, 6).unwrap();
        let pn: f64 = sym
            .samples()
            .iter()
            .zip(sig.samples())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / n as f64;
        let realized = 10.0 * (1.0 / pn).log10();
        assert!((realized + 10.0 * (len as f64).log10()).abs() < 0.05);
        assert!((10.0 * (len as f64).log10() - 48.16).abs() < 0.01);
    }

    #[test]
    fn scenario_draws() {
        let dist = ScenarioDistribution::default();
        let a: Vec<_> = dist.sampler(42).take(5).collect();
        let b: Vec<_> = dist.sampler(42).take(5).collect();
        assert_eq!(a, b);
        assert_eq!(
            sample_scenario(&dist, 9).unwrap(),
            sample_scenario(&dist, 9).unwrap()
        );

        let draws: Vec<_> = dist.sampler(1).take(100_000).collect();
        assert!(draws.iter().all(|t| t.range_m > 0.0 && t.range_m <= 500.0));
        assert!(draws
            .iter()
            .all(|t| t.velocity_mps > 0.0 && t.velocity_mps <= 15_000.0));
        let n = draws.len() as f64;
        let mean = draws.iter().map(|t| t.range_m).sum::<f64>() / n;
        let std = (draws
            .iter()
            .map(|t| (t.range_m - mean).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        assert!(
            (mean - 250.0).abs() < 2.0 && (std - 70.0).abs() < 2.0,
            "{mean} {std}"
        );
    }
}
