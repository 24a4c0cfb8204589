//! Run configuration: one TOML document covering the waveform, scenario,
//! channel, receiver knobs and sweep grids.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ambiguity::{linspace, Method};
use crate::channel::{RicianChannel, ScenarioDistribution};
use crate::error::{Error, Result};
use crate::radar_rx::RadarRxConfig;
use crate::waveform::WaveformParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    #[default]
    Paper,
    Desk,
}

impl Preset {
    pub fn params(self) -> WaveformParams {
        match self {
            Preset::Paper => WaveformParams::paper(),
            Preset::Desk => WaveformParams::desk(),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            _ => Err(Error::Config(format!(
                "unknown preset {s:?} (expected paper or desk)"
            ))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Paper => "paper",
            Preset::Desk => "desk",
        })
    }
}

/// `start, start + step, ...` up to and including `stop`.
pub fn db_range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as i64;
    (0..=n).map(|k| start + k as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadarSweepConfig {
    /// Per-sample echo SNR points in dB; `inf` means noiseless.
    pub snr_db: Vec<f64>,
    pub trials: usize,
    /// Stop-and-hop segments used to synthesize each echo.
    pub echo_segments: usize,
}

impl Default for RadarSweepConfig {
    fn default() -> Self {
        Self {
            snr_db: db_range(-10.0, 14.0, 2.0),
            trials: 500,
            echo_segments: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BerSweepConfig {
    /// Eb/N0 points in dB; `inf` means noiseless.
    pub ebn0_db: Vec<f64>,
    pub bits: usize,
    /// Lowest BER the run must resolve; `bits` must be at least
    /// `100 / target_ber`.
    pub target_ber: f64,
}

impl Default for BerSweepConfig {
    fn default() -> Self {
        Self {
            ebn0_db: db_range(-4.0, 14.0, 1.0),
            bits: 20_000,
            target_ber: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AmbiguityConfig {
    pub tau_points: usize,
    pub fd_points: usize,
    /// Delay axis covers `±tau_span·T`.
    pub tau_span: f64,
    /// Doppler axis covers `±fd_span/T`.
    pub fd_span: f64,
    pub method: Method,
}

impl AmbiguityConfig {
    /// Delay and Doppler axes for `params`.
    pub fn axes(&self, params: &WaveformParams) -> (Vec<f64>, Vec<f64>) {
        let t = params.t_half();
        (
            linspace(-self.tau_span * t, self.tau_span * t, self.tau_points),
            linspace(-self.fd_span / t, self.fd_span / t, self.fd_points),
        )
    }
}

impl Default for AmbiguityConfig {
    fn default() -> Self {
        Self {
            tau_points: 241,
            fd_points: 241,
            tau_span: 1.8,
            fd_span: 4.0,
            method: Method::Analytic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub preset: Preset,
    /// Overrides the preset when present.
    pub waveform: Option<WaveformParams>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub scenario: ScenarioDistribution,
    pub channel: RicianChannel,
    pub receiver: RadarRxConfig,
    pub radar_sweep: RadarSweepConfig,
    pub ber_sweep: BerSweepConfig,
    pub ambiguity: AmbiguityConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: Preset::Paper,
            waveform: None,
            seed: 0,
            threads: None,
            out_dir: None,
            scenario: ScenarioDistribution::default(),
            channel: RicianChannel {
                k_factor: 10.0,
                los_phase: 0.0,
            },
            receiver: RadarRxConfig::default(),
            radar_sweep: RadarSweepConfig::default(),
            ber_sweep: BerSweepConfig::default(),
            ambiguity: AmbiguityConfig::default(),
        }
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config(format!("{name} grid is empty")));
    }
    if let Some(v) = grid
        .iter()
        .find(|v| !(v.is_finite() || **v == f64::INFINITY))
    {
        return Err(Error::Config(format!(
            "{name} grid value {v} must be finite or +inf"
        )));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn params(&self) -> WaveformParams {
        self.waveform.unwrap_or_else(|| self.preset.params())
    }

    /// Checks every module precondition the config feeds into.
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |e: Error| match e {
            Error::InvalidParameter(m) => Error::Config(m),
            other => other,
        };
        let params = self.params();
        self.scenario.validate().map_err(cfg_err)?;
        self.channel.validate().map_err(cfg_err)?;
        self.receiver.validate(&params).map_err(cfg_err)?;
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        check_grid("radar_sweep.snr_db", &self.radar_sweep.snr_db)?;
        check_grid("ber_sweep.ebn0_db", &self.ber_sweep.ebn0_db)?;
        if self.radar_sweep.trials == 0 {
            return Err(Error::Config("radar_sweep.trials must be >= 1".into()));
        }
        let segs = self.radar_sweep.echo_segments;
        if segs == 0 || !params.symbol_len().is_multiple_of(segs) {
            return Err(Error::Config(format!(
                "radar_sweep.echo_segments = {segs} must divide the symbol length {}",
                params.symbol_len()
            )));
        }
        let b = &self.ber_sweep;
        if !(b.target_ber > 0.0 && b.target_ber <= 0.5) {
            return Err(Error::Config(
                "ber_sweep.target_ber must lie in (0, 0.5]".into(),
            ));
        }
        if (b.bits as f64) < 100.0 / b.target_ber {
            return Err(Error::Config(format!(
                "ber_sweep.bits = {} is below 100 / target_ber = {}",
                b.bits,
                (100.0 / b.target_ber).ceil()
            )));
        }
        let a = &self.ambiguity;
        if a.tau_points == 0
            || a.fd_points == 0
            || !(a.tau_span > 0.0 && a.tau_span < 2.0)
            || !(a.fd_span > 0.0)
        {
            return Err(Error::Config(
                "ambiguity grid needs points >= 1, 0 < tau_span < 2 and fd_span > 0".into(),
            ));
        }
        Ok(())
    }
}
