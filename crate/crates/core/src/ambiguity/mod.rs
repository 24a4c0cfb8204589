//! Narrowband ambiguity function `χ(τ, f_d) = ∫ x(t) x*(t-τ) e^{j2πf_d t} dt`
//! of the chirp symbols.
//!
//! Two independent routes are provided: a closed form built from the
//! decomposition of the triangle symbol into its up half `x₁` and down half
//! `x₂`, and direct quadrature of the defining integral.
//!
//! In the closed form, integrals are written in the lag variable `s = t - τ`
//! whose limits `a(τ)`, `b(τ)` are the piecewise overlap tables of each term.
//! Same-direction products (`x₁x₁*`, `x₂x₂*`) are pure tones in `s` and
//! integrate to sinc kernels; the cross product `x₂x₁*` has a quadratic
//! phase of rate `2μ` and integrates to Fresnel differences.

mod fresnel;

use std::f64::consts::PI;

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use fresnel::{fresnel, FresnelPair};

use crate::error::{Error, Result};
use crate::waveform::{SymbolShape, WaveformParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutAxis {
    /// Zero-Doppler cut, width in seconds of delay.
    Delay,
    /// Zero-delay cut, width in Hz.
    Doppler,
}

/// `|χ|` on a delay × Doppler grid, normalized by `|χ(0, 0)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityGrid {
    tau_axis: Vec<f64>,
    fd_axis: Vec<f64>,
    /// Row-major in delay: `values[i_tau * fd_axis.len() + i_fd]`.
    values: Vec<f64>,
}

impl AmbiguityGrid {
    pub fn new(tau_axis: Vec<f64>, fd_axis: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_axis("tau", &tau_axis)?;
        check_axis("fd", &fd_axis)?;
        if values.len() != tau_axis.len() * fd_axis.len() {
            return Err(Error::param("grid values do not match axis dimensions"));
        }
        Ok(Self {
            tau_axis,
            fd_axis,
            values,
        })
    }

    pub fn tau_axis(&self) -> &[f64] {
        &self.tau_axis
    }

    pub fn fd_axis(&self) -> &[f64] {
        &self.fd_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i_tau: usize, i_fd: usize) -> f64 {
        self.values[i_tau * self.fd_axis.len() + i_fd]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Cut through the grid origin: `(axis, |χ|)` along delay at `f_d = 0`
    /// or along Doppler at `τ = 0`.
    pub fn cut(&self, axis: CutAxis) -> Result<(Vec<f64>, Vec<f64>)> {
        match axis {
            CutAxis::Delay => {
                let j = zero_index(&self.fd_axis).ok_or_else(|| {
                    Error::ResolutionUndefined("f_d = 0 is not on the Doppler axis".into())
                })?;
                Ok((
                    self.tau_axis.clone(),
                    (0..self.tau_axis.len()).map(|i| self.get(i, j)).collect(),
                ))
            }
            CutAxis::Doppler => {
                let i = zero_index(&self.tau_axis).ok_or_else(|| {
                    Error::ResolutionUndefined("τ = 0 is not on the delay axis".into())
                })?;
                Ok((
                    self.fd_axis.clone(),
                    (0..self.fd_axis.len()).map(|j| self.get(i, j)).collect(),
                ))
            }
        }
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::param(format!("{name} axis is empty")));
    }
    if axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(format!(
            "{name} axis must be finite and strictly increasing"
        )));
    }
    Ok(())
}

fn zero_index(axis: &[f64]) -> Option<usize> {
    let span = axis.last()? - axis[0];
    let tol = if span > 0.0 { 1e-9 * span } else { 0.0 };
    axis.iter().position(|v| v.abs() <= tol)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            let mid = (n - 1) as f64 / 2.0;
            let centre = 0.5 * (lo + hi);
            // Built around the centre so symmetric axes are exactly symmetric
            // and hit 0 exactly when n is odd.
            (0..n).map(|k| centre + (k as f64 - mid) * step).collect()
        }
    }
}

// ---------------------------------------------------------------------------
// Closed form
// ---------------------------------------------------------------------------

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        let px = PI * x;
        1.0 - px * px / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// `∫_a^b e^{j2πνs} ds`.
fn tone_integral(nu: f64, a: f64, b: f64) -> Complex64 {
    Complex64::from_polar((b - a) * sinc(nu * (b - a)), PI * nu * (a + b))
}

fn energy_density(params: &WaveformParams) -> f64 {
    1.0 / (2.0 * params.t_half())
}

/// Self term of the rising half, `∫ x₁(t) x₁*(t-τ) e^{j2πf_d t} dt`.
/// Nonzero for `-T < τ < T`.
pub fn chi_u11(params: &WaveformParams, tau: f64, fd: f64) -> Complex64 {
    let t = params.t_half();
    if !(tau > -t && tau < t) {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b) = if tau < 0.0 {
        (-t - tau, 0.0)
    } else {
        (-t, -tau)
    };
    let mu = params.mu();
    Complex64::from_polar(
        energy_density(params),
        2.0 * PI * fd * tau + PI * mu * tau * tau,
    ) * tone_integral(mu * tau + fd, a, b)
}

/// Self term of the falling half, `∫ x₂(t) x₂*(t-τ) e^{j2πf_d t} dt`.
/// Nonzero for `-T < τ < T`.
pub fn chi_u22(params: &WaveformParams, tau: f64, fd: f64) -> Complex64 {
    let t = params.t_half();
    if !(tau > -t && tau < t) {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b) = if tau < 0.0 { (-tau, t) } else { (0.0, t - tau) };
    let mu = params.mu();
    Complex64::from_polar(
        energy_density(params),
        2.0 * PI * fd * tau - PI * mu * tau * tau,
    ) * tone_integral(fd - mu * tau, a, b)
}

/// Cross term `∫ x₂(t) x₁*(t-τ) e^{j2πf_d t} dt`, nonzero for `0 < τ < 2T`.
pub fn chi_u12(params: &WaveformParams, tau: f64, fd: f64) -> Complex64 {
    let t = params.t_half();
    if !(tau > 0.0 && tau < 2.0 * t) {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b) = if tau < t { (-tau, 0.0) } else { (-t, t - tau) };
    let mu = params.mu();
    let root = mu.sqrt();
    // Completing the square: -2πμ(s - c)² with c = f_d/(2μ) - τ/2.
    let c = fd / (2.0 * mu) - tau / 2.0;
    let u1 = 2.0 * root * (a - c);
    let u2 = 2.0 * root * (b - c);
    let f1 = fresnel::fresnel_unchecked(u1);
    let f2 = fresnel::fresnel_unchecked(u2);
    let bracket = Complex64::new(f2.c - f1.c, -(f2.s - f1.s));
    let phase = 2.0 * PI * mu * c * c - PI * mu * tau * tau + 2.0 * PI * fd * tau;
    Complex64::from_polar(energy_density(params) / (2.0 * root), phase) * bracket
}

/// Closed-form triangle-symbol ambiguity:
/// `χ₁₁ + χ₂₂ + χ₁₂ + e^{j2πf_dτ} χ₁₂*(-τ, -f_d)`.
pub fn chi_triangle(params: &WaveformParams, tau: f64, fd: f64) -> Complex64 {
    let mirrored =
        chi_u12(params, -tau, -fd).conj() * Complex64::from_polar(1.0, 2.0 * PI * fd * tau);
    chi_u11(params, tau, fd) + chi_u22(params, tau, fd) + chi_u12(params, tau, fd) + mirrored
}

/// Closed form for either shape; the V symbol is the conjugate waveform,
/// so `χ_V(τ, f_d) = χ_tri(τ, -f_d)*`.
pub fn chi_analytic(params: &WaveformParams, shape: SymbolShape, tau: f64, fd: f64) -> Complex64 {
    match shape {
        SymbolShape::TriangleLfm => chi_triangle(params, tau, fd),
        SymbolShape::VLfm => chi_triangle(params, tau, -fd).conj(),
    }
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Simpson nodes per cycle of the fastest integrand oscillation.
const NODES_PER_CYCLE: f64 = 16.0;
const MIN_PANELS: usize = 32;

/// Direct composite-Simpson evaluation of the defining integral, split at
/// every point where either factor changes chirp direction or support.
pub fn chi_numeric(params: &WaveformParams, shape: SymbolShape, tau: f64, fd: f64) -> Complex64 {
    let t = params.t_half();
    if !(tau.abs() < 2.0 * t) {
        return Complex64::new(0.0, 0.0);
    }
    let lo = (-t).max(tau - t);
    let hi = t.min(tau + t);
    let mut cuts = vec![lo, hi];
    for b in [0.0, tau] {
        if b > lo && b < hi {
            cuts.push(b);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let mu = params.mu();
    let integrand = |time: f64| {
        shape.envelope(params, time)
            * shape.envelope(params, time - tau).conj()
            * Complex64::from_polar(1.0, 2.0 * PI * fd * time)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let (Some(d1), Some(d2)) = (
            shape.direction_at(params, mid),
            shape.direction_at(params, mid - tau),
        ) else {
            continue;
        };
        // Integrand frequency is linear in time within a piece.
        let rate = |x: f64| d1.sign() * mu * x - d2.sign() * mu * (x - tau) + fd;
        let cycles = rate(a).abs().max(rate(b).abs()) * (b - a);
        let panels = ((cycles * NODES_PER_CYCLE).ceil() as usize).max(MIN_PANELS);
        let panels = panels + panels % 2;
        let h = (b - a) / panels as f64;
        // Endpoints are evaluated just inside the piece so the half-open
        // support of the envelope is respected.
        let eps = h * 1e-9;
        let mut sum = integrand(a + eps) + integrand(b - eps);
        for k in 1..panels {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += integrand(a + k as f64 * h) * w;
        }
        acc += sum * (h / 3.0);
    }
    acc
}

pub fn chi(
    params: &WaveformParams,
    shape: SymbolShape,
    tau: f64,
    fd: f64,
    method: Method,
) -> Complex64 {
    match method {
        Method::Analytic => chi_analytic(params, shape, tau, fd),
        Method::Numeric => chi_numeric(params, shape, tau, fd),
    }
}

/// Evaluates `|χ|/|χ(0,0)|` over the grid.
pub fn ambiguity_grid(
    params: &WaveformParams,
    shape: SymbolShape,
    tau_axis: &[f64],
    fd_axis: &[f64],
    method: Method,
) -> Result<AmbiguityGrid> {
    check_axis("tau", tau_axis)?;
    check_axis("fd", fd_axis)?;
    let peak = chi(params, shape, 0.0, 0.0, method).norm();
    let nf = fd_axis.len();
    let eval = |idx: usize| {
        chi(params, shape, tau_axis[idx / nf], fd_axis[idx % nf], method).norm() / peak
    };
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = (0..tau_axis.len() * nf).into_par_iter().map(eval).collect();
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = (0..tau_axis.len() * nf).map(eval).collect();
    AmbiguityGrid::new(tau_axis.to_vec(), fd_axis.to_vec(), values)
}

/// -3 dB full width of the main lobe along a zero cut through the origin.
pub fn resolution_from_cut(grid: &AmbiguityGrid, axis: CutAxis) -> Result<f64> {
    let (x, y) = grid.cut(axis)?;
    lobe_width(&x, &y, 10f64.powf(-3.0 / 20.0))
}

/// Full width at `level` (relative to the peak) of the lobe containing the
/// origin of `x`, with linear interpolation between samples.
pub fn lobe_width(x: &[f64], y: &[f64], level: f64) -> Result<f64> {
    let i0 = zero_index(x)
        .ok_or_else(|| Error::ResolutionUndefined("cut does not contain the origin".into()))?;
    let peak = y[i0];
    let global = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(peak > 0.0) || peak < global * (1.0 - 1e-9) {
        return Err(Error::ResolutionUndefined(
            "peak is not at the origin of the cut".into(),
        ));
    }
    let thr = level * peak;
    let crossing = |step: isize| -> Result<f64> {
        let mut i = i0 as isize;
        loop {
            let j = i + step;
            if j < 0 || j >= x.len() as isize {
                return Err(Error::ResolutionUndefined(
                    "main lobe extends beyond the grid".into(),
                ));
            }
            let (yi, yj) = (y[i as usize], y[j as usize]);
            if yj < thr {
                if i as usize == i0 {
                    return Err(Error::ResolutionUndefined(
                        "main lobe is narrower than the grid spacing".into(),
                    ));
                }
                let frac = (yi - thr) / (yi - yj);
                return Ok(x[i as usize] + frac * (x[j as usize] - x[i as usize]));
            }
            i = j;
        }
    };
    let right = crossing(1)?;
    let left = crossing(-1)?;
    Ok(right - left)
}
