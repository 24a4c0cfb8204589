//! Seeded Monte Carlo sweeps comparing the triangle/V waveform against its
//! baselines, plus the metrics and CSV/manifest output they feed.
//!
//! Every trial draws from its own RNG seeded by [`derive_seed`], so results
//! do not depend on how trials are spread over threads.

mod ber;
mod output;
mod radar;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::rng::derive_seed;

pub use ber::{replay_ber_trial, run_ber_sweep, BerPoint, BerSweep};
pub use output::{
    atomic_write, ber_csv, radar_csv, trials_csv, write_ber_csv, write_radar_csv, write_trials_csv,
    Manifest, BER_CSV_HEADER, RADAR_CSV_HEADER, TRIALS_CSV_HEADER,
};
pub use radar::{replay_radar_trial, run_radar_sweep, RadarPoint, RadarScheme, RadarSweep};

/// `(100 - |R - R̂|/R·100, 100 - |V - V̂|/V·100)`. Not clipped: gross errors
/// go negative.
pub fn accuracy_metrics(truth: (f64, f64), est: (f64, f64)) -> Result<(f64, f64)> {
    let (r, v) = truth;
    if !(r.is_finite() && v.is_finite()) || r == 0.0 || v == 0.0 {
        return Err(Error::param(format!(
            "accuracy needs nonzero finite truth, got ({r}, {v})"
        )));
    }
    let pct = |t: f64, e: f64| 100.0 - (t - e).abs() / t.abs() * 100.0;
    Ok((pct(r, est.0), pct(v, est.1)))
}

/// 95% Wilson score interval half-width for `errors` out of `n`.
pub fn wilson_halfwidth(errors: u64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = n as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

/// 95% Wilson score interval `(lo, hi)`.
pub fn wilson_interval(errors: u64, n: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let nf = n as f64;
    let p = errors as f64 / nf;
    let centre = (p + Z * Z / (2.0 * nf)) / (1.0 + Z * Z / nf);
    let h = wilson_halfwidth(errors, n);
    (centre - h, centre + h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Target { range_m: f64, velocity_mps: f64 },
    Bit { bit: u8 },
}

/// One stochastic trial. Re-running it from `seed` reproduces `estimate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub seed: u64,
    pub snr_db: f64,
    pub scheme: String,
    pub truth: Outcome,
    /// `None` when the estimator failed.
    pub estimate: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult<P> {
    pub scheme: String,
    pub points: Vec<P>,
}

/// Stream tags mixed into trial seeds so the sweeps never share draws.
pub(crate) const RADAR_STREAM: u64 = 0x5241_4441_0000_0000;
pub(crate) const BER_STREAM: u64 = 0x4245_5200_0000_0000;

#[cfg(feature = "parallel")]
pub(crate) fn par_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_examples() {
        assert_eq!(
            accuracy_metrics((250.0, 10_000.0), (247.5, 10_000.0)).unwrap(),
            (99.0, 100.0)
        );
        assert_eq!(
            accuracy_metrics((250.0, 10_000.0), (250.0, 10_000.0)).unwrap(),
            (100.0, 100.0)
        );
        let (r, _) = accuracy_metrics((250.0, 10_000.0), (3292.0, 0.0)).unwrap();
        assert!((r + 1116.8).abs() < 1e-9);
        assert!(accuracy_metrics((0.0, 1.0), (1.0, 1.0)).is_err());
    }

    #[test]
    fn wilson_reference_values() {
        // 10 of 100: interval (0.0552, 0.1744) from the closed form.
        let (lo, hi) = wilson_interval(10, 100);
        assert!(
            (lo - 0.05523).abs() < 1e-4 && (hi - 0.17437).abs() < 1e-4,
            "{lo} {hi}"
        );
        let h = wilson_halfwidth(0, 20_000);
        assert!(h > 0.0 && h < 1e-3);
    }
}
