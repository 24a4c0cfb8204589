//! Uniformly sampled complex baseband signals and their on-disk formats.
//!
//! Binary export writes interleaved `f32` little-endian `(I, Q)` pairs to
//! `<name>` and a TOML sidecar `<name>.toml` holding `fs`, `t_start` and
//! `count`.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    samples: Vec<Complex64>,
    fs: f64,
    t_start: f64,
}

impl ComplexSignal {
    pub fn new(samples: Vec<Complex64>, fs: f64, t_start: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::param("signal must contain at least one sample"));
        }
        if !(fs.is_finite() && fs > 0.0) {
            return Err(Error::param(format!(
                "sample rate must be positive, got {fs}"
            )));
        }
        if !t_start.is_finite() {
            return Err(Error::param("t_start must be finite"));
        }
        Ok(Self {
            samples,
            fs,
            t_start,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Time of sample `n`.
    pub fn time(&self, n: usize) -> f64 {
        self.t_start + n as f64 / self.fs
    }

    /// Continuous-time energy `Σ|x|² / fs`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.fs
    }

    /// Mean power per sample `Σ|x|² / N`.
    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.samples.len() {
            return Err(Error::param(format!(
                "slice {}..{} out of bounds for signal of {} samples",
                range.start,
                range.end,
                self.samples.len()
            )));
        }
        Ok(Self {
            t_start: self.time(range.start),
            fs: self.fs,
            samples: self.samples[range].to_vec(),
        })
    }

    /// The `len` samples starting at time `t0`, which must fall on this
    /// signal's sample grid.
    pub fn window(&self, t0: f64, len: usize) -> Result<Self> {
        let offset = (t0 - self.t_start) * self.fs;
        let k = offset.round();
        if (offset - k).abs() > 1e-3 || k < 0.0 {
            return Err(Error::param(format!(
                "time {t0} s is not on the sample grid at or after {} s",
                self.t_start
            )));
        }
        let k = k as usize;
        self.slice(k..k + len)
    }

    pub fn scaled(&self, gain: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|&z| z * gain).collect(),
            ..self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            samples: self.samples.iter().map(|z| z.conj()).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalHeader {
    pub fs: f64,
    pub t_start: f64,
    pub count: usize,
}

/// Path of the TOML sidecar that accompanies a binary signal file.
pub fn header_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".toml");
    PathBuf::from(p)
}

pub fn write_iq<W: Write>(mut w: W, sig: &ComplexSignal) -> io::Result<()> {
    let mut buf = Vec::with_capacity(sig.len() * 8);
    for z in sig.samples() {
        buf.extend_from_slice(&(z.re as f32).to_le_bytes());
        buf.extend_from_slice(&(z.im as f32).to_le_bytes());
    }
    w.write_all(&buf)
}

pub fn read_iq<R: Read>(mut r: R, header: &SignalHeader) -> Result<ComplexSignal> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != header.count * 8 {
        return Err(Error::param(format!(
            "signal file holds {} bytes, header announces {} samples ({} bytes)",
            bytes.len(),
            header.count,
            header.count * 8
        )));
    }
    let samples = bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    ComplexSignal::new(samples, header.fs, header.t_start)
}

pub fn header_of(sig: &ComplexSignal) -> SignalHeader {
    SignalHeader {
        fs: sig.fs(),
        t_start: sig.t_start(),
        count: sig.len(),
    }
}

/// Reads a binary signal together with its sidecar header.
pub fn load_signal(path: &Path) -> Result<ComplexSignal> {
    let text = fs::read_to_string(header_path(path))?;
    let header: SignalHeader =
        toml::from_str(&text).map_err(|e| Error::Config(format!("signal header: {e}")))?;
    read_iq(fs::File::open(path)?, &header)
}

/// CSV with columns `t,re,im`.
pub fn write_csv<W: Write>(mut w: W, sig: &ComplexSignal) -> io::Result<()> {
    writeln!(w, "t,re,im")?;
    for (n, z) in sig.samples().iter().enumerate() {
        writeln!(w, "{:.12e},{:.9e},{:.9e}", sig.time(n), z.re, z.im)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_bad_rate() {
        assert!(ComplexSignal::new(vec![], 1.0, 0.0).is_err());
        assert!(ComplexSignal::new(vec![Complex64::new(1.0, 0.0)], 0.0, 0.0).is_err());
        assert!(ComplexSignal::new(vec![Complex64::new(1.0, 0.0)], f64::NAN, 0.0).is_err());
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn duration_and_slice_time_base() {
        let sig = ComplexSignal::new(vec![Complex64::new(1.0, 0.0); 100], 50.0, -1.0).unwrap();
        assert!((sig.duration() - 2.0).abs() < 1e-12);
        let s = sig.slice(50..60).unwrap();
        assert!((s.t_start() - 0.0).abs() < 1e-12);
        assert!(sig.slice(60..50).is_err());
        assert!(sig.slice(90..101).is_err());
    }

    #[test]
    fn iq_length_mismatch_is_rejected() {
        let header = SignalHeader {
            fs: 1.0,
            t_start: 0.0,
            count: 3,
        };
        assert!(read_iq(&[0u8; 16][..], &header).is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let sig = ComplexSignal::new(vec![Complex64::new(0.5, -0.25); 3], 10.0, 0.0).unwrap();
        let mut out = Vec::new();
        write_csv(&mut out, &sig).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,re,im");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("1.000000000000e-1,"));
    }

    proptest::proptest! {
        #[test]
        fn iq_roundtrip_is_f32_exact(vals in proptest::collection::vec((-1e3f32..1e3, -1e3f32..1e3), 1..64),
                                     fs in 1.0f64..1e9, t0 in -1.0f64..1.0) {
            let samples: Vec<_> = vals.iter().map(|&(a, b)| Complex64::new(a as f64, b as f64)).collect();
            let sig = ComplexSignal::new(samples, fs, t0).unwrap();
            let mut buf = Vec::new();
            write_iq(&mut buf, &sig).unwrap();
            let back = read_iq(&buf[..], &header_of(&sig)).unwrap();
            proptest::prop_assert_eq!(back, sig);
        }
    }
}
