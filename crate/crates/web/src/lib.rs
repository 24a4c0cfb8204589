//! Browser bindings for the interactive demo in `www/`.
//!
//! The plain functions are ordinary Rust so they can be tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors.

use chirpjrc::ambiguity::{ambiguity_grid, AmbiguityGrid, CutAxis, Method};
use chirpjrc::channel::{add_awgn, echo_stop_and_hop, DebrisTarget, SnrReference};
use chirpjrc::config::{AmbiguityConfig, Preset};
use chirpjrc::radar_rx::{estimate_target, estimate_target_fmcw, RadarRxConfig};
use chirpjrc::waveform::{
    gen_fmcw_ramps, gen_symbol, instantaneous_frequency, modulate_bits, SymbolShape,
};
use chirpjrc::{Error, Result, WaveformParams};
use wasm_bindgen::prelude::*;

/// Upper bound on points handed to the canvas per trace.
const MAX_TRACE: usize = 4000;

fn params(preset: &str) -> Result<WaveformParams> {
    Ok(preset.parse::<Preset>()?.params())
}

fn shape(name: &str) -> Result<SymbolShape> {
    match name {
        "triangle" => Ok(SymbolShape::TriangleLfm),
        "v" => Ok(SymbolShape::VLfm),
        other => Err(Error::InvalidParameter(format!(
            "unknown shape {other:?}, expected triangle or v"
        ))),
    }
}

/// Instantaneous baseband frequency of a modulated bit string, as
/// interleaved `[t_s, f_hz, ...]` pairs thinned to at most `MAX_TRACE` points.
pub fn time_frequency(preset: &str, bits: &str) -> Result<Vec<f64>> {
    let p = params(preset)?;
    let bits: Vec<u8> = bits
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidParameter(format!(
                "bit string may only contain 0 and 1, found {other:?}"
            ))),
        })
        .collect::<Result<_>>()?;
    if bits.len() > 64 {
        return Err(Error::InvalidParameter("at most 64 bits".into()));
    }
    let sig = modulate_bits(&p, &bits)?;
    let fs = sig.fs();
    let n_sym = p.symbol_len();
    let raw = instantaneous_frequency(&sig)?;
    let step = raw.len().div_ceil(MAX_TRACE).max(1);
    let mut out = Vec::with_capacity(2 * (raw.len() / step + 1));
    // A triangle occupies [-ΔF, 0] and a V symbol [0, ΔF]. Either band is
    // narrower than fs, so each aliased reading has one image in an fs-wide
    // window centred on its symbol's band. Differences that straddle a symbol
    // boundary mix two symbols and are skipped.
    for (n, v) in raw
        .iter()
        .enumerate()
        .step_by(step)
        .filter(|(n, _)| (n + 1) % n_sym != 0)
    {
        let centre = if bits[n / n_sym] == 1 { -0.5 } else { 0.5 } * p.delta_f();
        let lo = centre - 0.5 * fs;
        out.push(sig.time(n));
        out.push((v - lo).rem_euclid(fs) + lo);
    }
    Ok(out)
}

#[wasm_bindgen]
pub struct Surface {
    grid: AmbiguityGrid,
}

#[wasm_bindgen]
impl Surface {
    /// Delay axis in seconds.
    #[wasm_bindgen(getter)]
    pub fn tau(&self) -> Vec<f64> {
        self.grid.tau_axis().to_vec()
    }

    /// Doppler axis in Hz.
    #[wasm_bindgen(getter)]
    pub fn fd(&self) -> Vec<f64> {
        self.grid.fd_axis().to_vec()
    }

    /// Normalized magnitude, row-major in delay.
    #[wasm_bindgen(getter)]
    pub fn mag(&self) -> Vec<f64> {
        self.grid.values().to_vec()
    }
}

pub fn surface(preset: &str, shape_name: &str, points: usize, numeric: bool) -> Result<Surface> {
    if !(3..=241).contains(&points) || points.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "grid points must be odd and lie in 3..=241".into(),
        ));
    }
    let p = params(preset)?;
    let cfg = AmbiguityConfig {
        tau_points: points,
        fd_points: points,
        ..AmbiguityConfig::default()
    };
    let (tau, fd) = cfg.axes(&p);
    let method = if numeric {
        Method::Numeric
    } else {
        Method::Analytic
    };
    Ok(Surface {
        grid: ambiguity_grid(&p, shape(shape_name)?, &tau, &fd, method)?,
    })
}

impl Surface {
    /// Magnitudes along the zero-Doppler (`Delay`) or zero-delay (`Doppler`) cut.
    pub fn cut(&self, axis: CutAxis) -> Vec<f64> {
        self.grid
            .cut(axis)
            .map(|(_, y)| y)
            .expect("odd axes contain the origin")
    }
}

#[wasm_bindgen]
impl Surface {
    #[wasm_bindgen(js_name = delayCut)]
    pub fn delay_cut(&self) -> Vec<f64> {
        self.cut(CutAxis::Delay)
    }

    #[wasm_bindgen(js_name = dopplerCut)]
    pub fn doppler_cut(&self) -> Vec<f64> {
        self.cut(CutAxis::Doppler)
    }
}

/// Proposed and FMCW estimates for one noisy echo. Fields are NaN when an
/// estimator reports failure; `message` then carries the reason.
#[wasm_bindgen(getter_with_clone)]
#[derive(Debug, Clone)]
pub struct RadarDemo {
    pub range_m: f64,
    pub velocity_mps: f64,
    pub f_up_hz: f64,
    pub f_down_hz: f64,
    pub fmcw_range_m: f64,
    pub fmcw_velocity_mps: f64,
    pub message: String,
}

pub fn radar(
    preset: &str,
    shape_name: &str,
    range_m: f64,
    velocity_mps: f64,
    snr_db: f64,
    seed: u64,
) -> Result<RadarDemo> {
    let p = params(preset)?;
    let shape = shape(shape_name)?;
    let target = DebrisTarget::new(range_m, velocity_mps)?;
    let cfg = RadarRxConfig::default();
    // Two delay segments so the FMCW ramps see the range change.
    let observe = |tx: chirpjrc::ComplexSignal| -> Result<chirpjrc::ComplexSignal> {
        let rx = echo_stop_and_hop(&tx, &target, &p, 2)?.window(tx.t_start(), tx.len())?;
        add_awgn(&rx, snr_db, SnrReference::PerSample, seed)
    };
    let nan = f64::NAN;
    let mut out = RadarDemo {
        range_m: nan,
        velocity_mps: nan,
        f_up_hz: nan,
        f_down_hz: nan,
        fmcw_range_m: nan,
        fmcw_velocity_mps: nan,
        message: String::new(),
    };
    match estimate_target(&observe(gen_symbol(&p, shape))?, shape, &p, &cfg) {
        Ok(e) => {
            out.range_m = e.range_m;
            out.velocity_mps = e.velocity_mps;
            out.f_up_hz = e.beat.f_up;
            out.f_down_hz = e.beat.f_down;
        }
        Err(e) => out.message = format!("proposed: {e}"),
    }
    match estimate_target_fmcw(&observe(gen_fmcw_ramps(&p, 2)?)?, &p, &cfg) {
        Ok(e) => {
            out.fmcw_range_m = e.range_m;
            out.fmcw_velocity_mps = e.velocity_mps;
        }
        Err(e) => {
            if !out.message.is_empty() {
                out.message.push_str("; ");
            }
            out.message.push_str(&format!("fmcw: {e}"));
        }
    }
    Ok(out)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = timeFrequency)]
pub fn time_frequency_js(preset: &str, bits: &str) -> Result<Vec<f64>, JsError> {
    time_frequency(preset, bits).map_err(js)
}

#[wasm_bindgen(js_name = ambiguitySurface)]
pub fn surface_js(
    preset: &str,
    shape: &str,
    points: usize,
    numeric: bool,
) -> Result<Surface, JsError> {
    surface(preset, shape, points, numeric).map_err(js)
}

#[wasm_bindgen(js_name = radarEstimate)]
pub fn radar_js(
    preset: &str,
    shape: &str,
    range_m: f64,
    velocity_mps: f64,
    snr_db: f64,
    seed: u64,
) -> Result<RadarDemo, JsError> {
    radar(preset, shape, range_m, velocity_mps, snr_db, seed).map_err(js)
}
