use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    derive_seed, par_collect, wilson_halfwidth, Outcome, SweepResult, TrialRecord, BER_STREAM,
};
use crate::channel::{noise_variance, SnrReference};
use crate::comms_rx::{CommsScheme, DualBranchReceiver, MatchedFilterReceiver};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::rng::{complex_normal, seeded};
use crate::waveform::{gen_lfm_pulse, gen_symbol, ChirpDirection, SymbolShape};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    /// Eb/N0 in dB.
    pub snr_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub ci95_halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerSweep {
    pub proposed: SweepResult<BerPoint>,
    pub lfm_mf: SweepResult<BerPoint>,
    /// Trials in which at least one scheme decided wrongly, both schemes'
    /// records in that order.
    pub error_records: Vec<TrialRecord>,
}

struct Context {
    /// Indexed by bit.
    symbols: [Vec<Complex64>; 2],
    pulses: [Vec<Complex64>; 2],
    sym_power: f64,
    pulse_power: f64,
    dual: DualBranchReceiver,
    mf: MatchedFilterReceiver,
    channel: crate::channel::RicianChannel,
}

impl Context {
    fn new(cfg: &RunConfig) -> Self {
        let p = cfg.params();
        let v = gen_symbol(&p, SymbolShape::VLfm);
        let t = gen_symbol(&p, SymbolShape::TriangleLfm);
        let down = gen_lfm_pulse(&p, ChirpDirection::Down);
        let up = gen_lfm_pulse(&p, ChirpDirection::Up);
        Self {
            sym_power: t.mean_power(),
            pulse_power: up.mean_power(),
            symbols: [v.into_samples(), t.into_samples()],
            pulses: [down.into_samples(), up.into_samples()],
            dual: DualBranchReceiver::new(&p),
            mf: MatchedFilterReceiver::new(&p),
            channel: cfg.channel,
        }
    }

    /// One bit through both chains with a shared bit, fading tap and unit
    /// noise vector. Returns the two decisions.
    fn trial(&self, seed: u64, ebn0_db: f64) -> (u8, [u8; 2]) {
        let mut rng = seeded(seed);
        let bit = rng.random_range(0..=1u8);
        let h = self.channel.draw_tap(&mut rng);
        let n = self.symbols[0].len();
        let reference = SnrReference::PerSymbol { symbol_len: n };
        let noise: Vec<Complex64> = if ebn0_db == f64::INFINITY {
            vec![Complex64::new(0.0, 0.0); n]
        } else {
            (0..n).map(|_| complex_normal(&mut rng)).collect()
        };
        let build = |tx: &[Complex64], power: f64| -> Vec<Complex64> {
            let sigma = if ebn0_db == f64::INFINITY {
                0.0
            } else {
                noise_variance(power, ebn0_db, reference).sqrt()
            };
            tx.iter()
                .zip(&noise)
                .map(|(x, w)| h * x + w * sigma)
                .collect()
        };
        let b = bit as usize;
        let p = self
            .dual
            .statistics(&build(&self.symbols[b], self.sym_power))
            .decided_bit;
        let m = self
            .mf
            .statistics(&build(&self.pulses[b], self.pulse_power))
            .decided_bit;
        (bit, [p, m])
    }
}

fn trial_seed(master: u64, point: usize, bit: u64) -> u64 {
    derive_seed(master, BER_STREAM | point as u64, bit)
}

fn records(trial_id: u64, seed: u64, snr_db: f64, bit: u8, decided: [u8; 2]) -> [TrialRecord; 2] {
    let rec = |scheme: CommsScheme, d: u8| TrialRecord {
        trial_id,
        seed,
        snr_db,
        scheme: scheme.as_str().to_string(),
        truth: Outcome::Bit { bit },
        estimate: Some(Outcome::Bit { bit: d }),
    };
    [
        rec(CommsScheme::Proposed, decided[0]),
        rec(CommsScheme::LfmMf, decided[1]),
    ]
}

fn point(snr_db: f64, bits: u64, errors: u64) -> BerPoint {
    BerPoint {
        snr_db,
        bits,
        errors,
        ber: errors as f64 / bits as f64,
        ci95_halfwidth: wilson_halfwidth(errors, bits),
    }
}

/// Paired BER sweep over Rician block fading: each bit is sent once as a
/// triangle/V symbol and once as an LFM pulse through the same tap and the
/// same unit noise, scaled to the requested Eb/N0 for each scheme.
pub fn run_ber_sweep(cfg: &RunConfig) -> Result<BerSweep> {
    cfg.validate()?;
    let ctx = Context::new(cfg);
    let grid = &cfg.ber_sweep.ebn0_db;
    let bits = cfg.ber_sweep.bits;
    let outcomes = par_collect(grid.len() * bits, |k| {
        let (i, j) = (k / bits, k % bits);
        let seed = trial_seed(cfg.seed, i, j as u64);
        let (bit, d) = ctx.trial(seed, grid[i]);
        (seed, bit, d)
    });
    let mut proposed = Vec::new();
    let mut lfm = Vec::new();
    let mut error_records = Vec::new();
    for (i, &snr) in grid.iter().enumerate() {
        let (mut ep, mut em) = (0u64, 0u64);
        for (j, &(seed, bit, d)) in outcomes[i * bits..(i + 1) * bits].iter().enumerate() {
            ep += u64::from(d[0] != bit);
            em += u64::from(d[1] != bit);
            if d[0] != bit || d[1] != bit {
                error_records.extend(records((i * bits + j) as u64, seed, snr, bit, d));
            }
        }
        proposed.push(point(snr, bits as u64, ep));
        lfm.push(point(snr, bits as u64, em));
    }
    Ok(BerSweep {
        proposed: SweepResult {
            scheme: CommsScheme::Proposed.as_str().into(),
            points: proposed,
        },
        lfm_mf: SweepResult {
            scheme: CommsScheme::LfmMf.as_str().into(),
            points: lfm,
        },
        error_records,
    })
}

/// Re-executes one recorded bit trial.
pub fn replay_ber_trial(cfg: &RunConfig, record: &TrialRecord) -> Result<TrialRecord> {
    let ctx = Context::new(cfg);
    let (bit, d) = ctx.trial(record.seed, record.snr_db);
    records(record.trial_id, record.seed, record.snr_db, bit, d)
        .into_iter()
        .find(|r| r.scheme == record.scheme)
        .ok_or_else(|| Error::param(format!("unknown comms scheme {:?}", record.scheme)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Preset;

    fn small(bits: usize, grid: Vec<f64>) -> RunConfig {
        let mut cfg = RunConfig {
            preset: Preset::Desk,
            seed: 5,
            ..Default::default()
        };
        cfg.ber_sweep.bits = bits;
        cfg.ber_sweep.target_ber = 100.0 / bits as f64;
        cfg.ber_sweep.ebn0_db = grid;
        cfg
    }

    #[test]
    fn noiseless_is_error_free() {
        let s = run_ber_sweep(&small(2_000, vec![f64::INFINITY])).unwrap();
        assert_eq!(s.proposed.points[0].errors, 0);
        assert_eq!(s.lfm_mf.points[0].errors, 0);
        assert!(s.error_records.is_empty());
    }

    #[test]
    fn low_snr_errors_replay() {
        let cfg = small(400, vec![-4.0]);
        let s = run_ber_sweep(&cfg).unwrap();
        assert!(s.proposed.points[0].errors > 0 && s.lfm_mf.points[0].errors > 0);
        for r in &s.error_records {
            assert_eq!(&replay_ber_trial(&cfg, r).unwrap(), r);
        }
        assert_eq!(run_ber_sweep(&cfg).unwrap(), s);
    }
}
