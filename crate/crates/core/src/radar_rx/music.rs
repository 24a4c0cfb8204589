//! Root-MUSIC single-tone frequency estimation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Subarray length used when the caller does not choose one.
pub const DEFAULT_SUBARRAY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneEstimate {
    /// Signed frequency in Hz, in `[-fs/2, fs/2)`.
    pub freq_hz: f64,
    /// Modulus of the selected polynomial root.
    pub root_modulus: f64,
    pub subarray_len: usize,
    pub snapshots: usize,
}

/// `min(max_len, n / 3)`.
pub fn subarray_len(n: usize, max_len: usize) -> usize {
    max_len.min(n / 3)
}

/// Forward-backward smoothed covariance of `x` with subarray length `l`.
pub fn fb_covariance(x: &[Complex64], l: usize) -> DMatrix<Complex64> {
    let n = x.len();
    let m = n - l + 1;
    let inv_m = 1.0 / m as f64;
    let mut r = DMatrix::<Complex64>::zeros(l, l);
    // First row directly, the rest by sliding each diagonal one snapshot on.
    for j in 0..l {
        let s: Complex64 = (0..m).map(|k| x[k] * x[k + j].conj()).sum();
        r[(0, j)] = s * inv_m;
    }
    for i in 1..l {
        for j in i..l {
            let add = x[m + i - 1] * x[m + j - 1].conj();
            let sub = x[i - 1] * x[j - 1].conj();
            r[(i, j)] = r[(i - 1, j - 1)] + (add - sub) * inv_m;
        }
    }
    for i in 0..l {
        for j in 0..i {
            r[(i, j)] = r[(j, i)].conj();
        }
    }
    let mut fb = DMatrix::<Complex64>::zeros(l, l);
    for i in 0..l {
        for j in 0..l {
            fb[(i, j)] = 0.5 * (r[(i, j)] + r[(l - 1 - i, l - 1 - j)].conj());
        }
    }
    fb
}

/// Roots of `Σ coeffs[k] z^k` (lowest degree first). Aberth-Ehrlich
/// iteration, with companion-matrix eigenvalues as the fallback.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() == 0.0 {
        hi -= 1;
    }
    let mut lo = 0;
    while lo < hi && coeffs[lo].norm() == 0.0 {
        lo += 1;
    }
    if hi == 0 {
        return Err(Error::EstimationFailed("zero polynomial".into()));
    }
    // Trailing zero coefficients are roots at the origin.
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    let c = &coeffs[lo..hi];
    if c.len() == 1 {
        return Ok(roots);
    }
    match aberth(c) {
        Some(r) => roots.extend(r),
        None => roots.extend(companion_roots(c)?),
    }
    Ok(roots)
}

/// `(p(z), p'(z), Σ|c_k||z|^k)` by Horner.
fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let az = z.norm();
    let mut p = c[c.len() - 1];
    let mut d = Complex64::new(0.0, 0.0);
    let mut bound = p.norm();
    for &ck in c[..c.len() - 1].iter().rev() {
        d = d * z + p;
        p = p * z + ck;
        bound = bound * az + ck.norm();
    }
    (p, d, bound)
}

fn aberth(c: &[Complex64]) -> Option<Vec<Complex64>> {
    const MAX_ITER: usize = 800;
    let n = c.len() - 1;
    let radius = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let radius = if radius.is_finite() && radius > 0.0 {
        radius
    } else {
        1.0
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, d, bound) = horner(c, z[k]);
            if p.norm() <= 32.0 * f64::EPSILON * bound {
                done[k] = true;
                continue;
            }
            all = false;
            let ratio = p / d;
            let repel: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repel);
            if !w.is_finite() {
                return None;
            }
            z[k] -= w;
        }
        if all {
            return Some(z);
        }
    }
    None
}

fn companion_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    let eig = comp.eigenvalues().ok_or_else(|| {
        Error::EstimationFailed("polynomial root finding did not converge".into())
    })?;
    Ok(eig.iter().copied().collect())
}

fn bartlett_power(r: &DMatrix<Complex64>, w: f64) -> f64 {
    let l = r.nrows();
    let a: Vec<Complex64> = (0..l)
        .map(|k| Complex64::from_polar(1.0, w * k as f64))
        .collect();
    let mut p = Complex64::new(0.0, 0.0);
    for i in 0..l {
        for j in 0..l {
            p += a[i].conj() * r[(i, j)] * a[j];
        }
    }
    p.re
}

/// Frequency of the strongest complex exponential in `x` sampled at `fs`.
///
/// The `model_order` roots inside the unit circle and nearest to it are the
/// candidates; with more than one, the one with the largest Bartlett power
/// wins.
pub fn rootmusic(
    x: &[Complex64],
    fs: f64,
    model_order: usize,
    max_subarray: usize,
) -> Result<ToneEstimate> {
    if model_order == 0 {
        return Err(Error::param("model order must be at least 1"));
    }
    let l = subarray_len(x.len(), max_subarray);
    if l < model_order + 1 || l < 2 {
        return Err(Error::param(format!(
            "{} samples too short for a subarray longer than model order {model_order}",
            x.len()
        )));
    }
    let r = fb_covariance(x, l);
    let trace: f64 = (0..l).map(|i| r[(i, i)].re).sum();
    if !(trace.is_finite() && trace > 0.0) {
        return Err(Error::EstimationFailed("signal has no power".into()));
    }
    let eig = SymmetricEigen::new(r.clone());
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let rank = order
        .iter()
        .filter(|&&i| eig.eigenvalues[i] > 1e-12 * trace)
        .count();
    if rank < model_order {
        return Err(Error::EstimationFailed(format!(
            "covariance rank {rank} below model order {model_order}"
        )));
    }

    // Diagonal sums of the noise projector E_n E_n^H = I - E_s E_s^H.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * l - 1];
    coeffs[l - 1] += l as f64;
    for &s in &order[..model_order] {
        let v = eig.eigenvectors.column(s);
        for i in 0..l {
            for j in 0..l {
                // Term conj(a_i) C_ij a_j carries z^(j - i).
                coeffs[j + l - 1 - i] -= v[i] * v[j].conj();
            }
        }
    }
    let roots = poly_roots(&coeffs)?;
    // A noiseless tone gives a double root on the circle, which rounding
    // may split to either side.
    let mut inside: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|z| z.norm() <= 1.0 + 1e-6)
        .collect();
    if inside.is_empty() {
        inside = roots;
    }
    inside.sort_by(|a, b| (1.0 - a.norm()).abs().total_cmp(&(1.0 - b.norm()).abs()));
    inside.truncate(model_order);
    let best = inside
        .iter()
        .copied()
        .max_by(|a, b| bartlett_power(&r, a.arg()).total_cmp(&bartlett_power(&r, b.arg())))
        .ok_or_else(|| Error::EstimationFailed("no polynomial roots".into()))?;
    Ok(ToneEstimate {
        freq_hz: best.arg() / (2.0 * PI) * fs,
        root_modulus: best.norm(),
        subarray_len: l,
        snapshots: x.len() - l + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal, seeded};

    fn tone(f: f64, fs: f64, n: usize, amp: f64, phase: f64) -> Vec<Complex64> {
        (0..n)
            .map(|k| Complex64::from_polar(amp, 2.0 * PI * f * k as f64 / fs + phase))
            .collect()
    }

    fn noisy(mut x: Vec<Complex64>, snr_db: f64, seed: u64) -> Vec<Complex64> {
        let p = x.iter().map(|z| z.norm_sqr()).sum::<f64>() / x.len() as f64;
        let sigma = (p / 10f64.powf(snr_db / 10.0)).sqrt();
        let mut rng = seeded(seed);
        x.iter_mut()
            .for_each(|z| *z += complex_normal(&mut rng) * sigma);
        x
    }

    #[test]
    fn covariance_matches_direct_sum() {
        let x = noisy(tone(3.0, 50.0, 200, 1.0, 0.3), 5.0, 1);
        let l = 7;
        let m = x.len() - l + 1;
        let fb = fb_covariance(&x, l);
        for i in 0..l {
            for j in 0..l {
                let f: Complex64 = (0..m)
                    .map(|k| x[k + i] * x[k + j].conj())
                    .sum::<Complex64>()
                    / m as f64;
                let b: Complex64 = (0..m)
                    .map(|k| x[k + l - 1 - i].conj() * x[k + l - 1 - j])
                    .sum::<Complex64>()
                    / m as f64;
                assert!((fb[(i, j)] - 0.5 * (f + b)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (z - 2)(z + 1j)(z - 0.5) = z³ + (-2.5 + j)z² + (1 - 2.5j)z + j
        let c = [
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, -2.5),
            Complex64::new(-2.5, 1.0),
            Complex64::new(1.0, 0.0),
        ];
        let mut r = poly_roots(&c).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        let want = [
            Complex64::new(0.0, -1.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(2.0, 0.0),
        ];
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
        assert_eq!(
            poly_roots(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn iteration_agrees_with_companion_matrix() {
        let c: Vec<Complex64> = (0..127)
            .map(|k| Complex64::new((k as f64).sin(), (0.3 * k as f64).cos()))
            .collect();
        let fast = aberth(&c).unwrap();
        let slow = companion_roots(&c).unwrap();
        assert_eq!(fast.len(), 126);
        for z in &slow {
            let nearest = fast
                .iter()
                .map(|w| (w - z).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-8, "{z}: {nearest}");
        }
    }

    #[test]
    fn noiseless_tone_sign_and_value() {
        for f in [-7.3e6, 0.0, 1.25e6, 21.082e6] {
            let est = rootmusic(&tone(f, 72e6, 1000, 1.0, 0.4), 72e6, 1, DEFAULT_SUBARRAY).unwrap();
            assert!((est.freq_hz - f).abs() < 1.0, "{} vs {f}", est.freq_hz);
            assert_eq!(est.subarray_len, 64);
            assert_eq!(est.snapshots, 937);
        }
    }

    #[test]
    fn noisy_tone_within_a_kilohertz() {
        let f = 21.082e6;
        let worst = (0..100)
            .map(|seed| {
                let x = noisy(tone(f, 72e6, 4096, 1.0, 0.1 * seed as f64), 20.0, seed);
                (rootmusic(&x, 72e6, 1, DEFAULT_SUBARRAY).unwrap().freq_hz - f).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e3, "worst error {worst} Hz");
    }

    #[test]
    fn dc_with_noise() {
        let x = noisy(vec![Complex64::new(1.0, 0.0); 4096], 20.0, 3);
        assert!(
            rootmusic(&x, 72e6, 1, DEFAULT_SUBARRAY)
                .unwrap()
                .freq_hz
                .abs()
                < 1e3
        );
    }

    #[test]
    fn stronger_of_two_tones() {
        let (f1, f2) = (5e6, -12e6);
        let x: Vec<Complex64> = tone(f1, 72e6, 4096, 1.0, 0.0)
            .into_iter()
            .zip(tone(f2, 72e6, 4096, 0.4, 1.0))
            .map(|(a, b)| a + b)
            .collect();
        let x = noisy(x, 20.0, 4);
        assert!((rootmusic(&x, 72e6, 1, DEFAULT_SUBARRAY).unwrap().freq_hz - f1).abs() < 1e4);
        assert!((rootmusic(&x, 72e6, 2, DEFAULT_SUBARRAY).unwrap().freq_hz - f1).abs() < 1e4);
    }

    #[test]
    fn degenerate_inputs() {
        let zeros = vec![Complex64::new(0.0, 0.0); 300];
        assert!(matches!(
            rootmusic(&zeros, 1.0, 1, 64),
            Err(Error::EstimationFailed(_))
        ));
        let one = tone(0.1, 1.0, 300, 1.0, 0.0);
        assert!(matches!(
            rootmusic(&one, 1.0, 2, 64),
            Err(Error::EstimationFailed(_))
        ));
        assert!(rootmusic(&one[..5], 1.0, 1, 64).is_err());
        assert!(rootmusic(&one, 1.0, 0, 64).is_err());
    }
}
