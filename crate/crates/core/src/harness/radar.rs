use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    accuracy_metrics, derive_seed, par_collect, Outcome, SweepResult, TrialRecord, RADAR_STREAM,
};
use crate::channel::{add_awgn, echo_stop_and_hop, SnrReference};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::radar_rx::{estimate_target, estimate_target_fmcw, EstimationResult};
use crate::rng::seeded;
use crate::signal::ComplexSignal;
use crate::waveform::{gen_fmcw_ramps, gen_symbol, SymbolShape, WaveformParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadarScheme {
    Proposed,
    Fmcw,
}

impl RadarScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            RadarScheme::Proposed => "proposed",
            RadarScheme::Fmcw => "fmcw",
        }
    }
}

impl fmt::Display for RadarScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarPoint {
    pub snr_db: f64,
    pub trials: usize,
    pub mean_pct_r: f64,
    pub mean_pct_v: f64,
    pub fail_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadarSweep {
    pub proposed: SweepResult<RadarPoint>,
    pub fmcw: SweepResult<RadarPoint>,
    /// Ordered by SNR point, then trial, then scheme.
    pub records: Vec<TrialRecord>,
}

struct Context<'a> {
    cfg: &'a RunConfig,
    params: WaveformParams,
    tri: ComplexSignal,
    v: ComplexSignal,
    ramps: ComplexSignal,
}

impl<'a> Context<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self> {
        let params = cfg.params();
        Ok(Self {
            cfg,
            params,
            tri: gen_symbol(&params, SymbolShape::TriangleLfm),
            v: gen_symbol(&params, SymbolShape::VLfm),
            ramps: gen_fmcw_ramps(&params, 2)?,
        })
    }

    /// Echo of `tx` cut to the transmit window, plus noise. Both schemes
    /// get the same unit noise draw for a given `noise_seed`.
    fn received(
        &self,
        tx: &ComplexSignal,
        target: &crate::channel::DebrisTarget,
        snr_db: f64,
        noise_seed: u64,
    ) -> Result<ComplexSignal> {
        let e = echo_stop_and_hop(tx, target, &self.params, self.cfg.radar_sweep.echo_segments)?;
        let e = e.window(tx.t_start(), tx.len())?;
        add_awgn(&e, snr_db, SnrReference::PerSample, noise_seed)
    }

    fn trial(&self, trial_id: u64, seed: u64, snr_db: f64) -> Result<[TrialRecord; 2]> {
        let mut rng = seeded(seed);
        let target = self.cfg.scenario.sample(&mut rng);
        let shape = SymbolShape::from_bit(rng.random_range(0..=1u8))?;
        let noise_seed: u64 = rng.random();
        let tx = match shape {
            SymbolShape::TriangleLfm => &self.tri,
            SymbolShape::VLfm => &self.v,
        };
        let rx = self.received(tx, &target, snr_db, noise_seed)?;
        let proposed = estimate_target(&rx, shape, &self.params, &self.cfg.receiver);
        let rx = self.received(&self.ramps, &target, snr_db, noise_seed)?;
        let fmcw = estimate_target_fmcw(&rx, &self.params, &self.cfg.receiver);
        let truth = Outcome::Target {
            range_m: target.range_m,
            velocity_mps: target.velocity_mps,
        };
        let record = |scheme: RadarScheme, est: Result<EstimationResult>| TrialRecord {
            trial_id,
            seed,
            snr_db,
            scheme: scheme.as_str().to_string(),
            truth,
            estimate: est
                .ok()
                .filter(|e| e.range_m.is_finite() && e.velocity_mps.is_finite())
                .map(|e| Outcome::Target {
                    range_m: e.range_m,
                    velocity_mps: e.velocity_mps,
                }),
        };
        Ok([
            record(RadarScheme::Proposed, proposed),
            record(RadarScheme::Fmcw, fmcw),
        ])
    }
}

fn trial_seed(master: u64, point: usize, trial: usize) -> u64 {
    derive_seed(master, RADAR_STREAM | point as u64, trial as u64)
}

/// Scores a record; failures count as 0%.
fn score(r: &TrialRecord) -> Result<Option<(f64, f64)>> {
    let Outcome::Target {
        range_m,
        velocity_mps,
    } = r.truth
    else {
        return Err(Error::param("radar record without a target truth"));
    };
    match r.estimate {
        Some(Outcome::Target {
            range_m: er,
            velocity_mps: ev,
        }) => Ok(Some(accuracy_metrics((range_m, velocity_mps), (er, ev))?)),
        _ => Ok(None),
    }
}

fn summarize(snr_db: f64, recs: &[&TrialRecord]) -> Result<RadarPoint> {
    let (mut sr, mut sv, mut fails) = (0.0, 0.0, 0);
    for r in recs {
        match score(r)? {
            Some((pr, pv)) => {
                sr += pr;
                sv += pv;
            }
            None => fails += 1,
        }
    }
    let n = recs.len() as f64;
    Ok(RadarPoint {
        snr_db,
        trials: recs.len(),
        mean_pct_r: sr / n,
        mean_pct_v: sv / n,
        fail_count: fails,
    })
}

/// Paired accuracy sweep: at each SNR point every trial draws one target
/// and one noise realization and runs both the triangle/V receiver and the
/// FMCW baseline on them.
pub fn run_radar_sweep(cfg: &RunConfig) -> Result<RadarSweep> {
    cfg.validate()?;
    let ctx = Context::new(cfg)?;
    let grid = &cfg.radar_sweep.snr_db;
    let trials = cfg.radar_sweep.trials;
    let results = par_collect(grid.len() * trials, |k| {
        let (i, j) = (k / trials, k % trials);
        ctx.trial(k as u64, trial_seed(cfg.seed, i, j), grid[i])
    });
    let mut records = Vec::with_capacity(2 * results.len());
    for r in results {
        records.extend(r?);
    }
    let mut proposed = Vec::new();
    let mut fmcw = Vec::new();
    for (i, &snr) in grid.iter().enumerate() {
        let chunk = &records[2 * i * trials..2 * (i + 1) * trials];
        let p: Vec<&TrialRecord> = chunk.iter().step_by(2).collect();
        let f: Vec<&TrialRecord> = chunk.iter().skip(1).step_by(2).collect();
        proposed.push(summarize(snr, &p)?);
        fmcw.push(summarize(snr, &f)?);
    }
    Ok(RadarSweep {
        proposed: SweepResult {
            scheme: RadarScheme::Proposed.as_str().into(),
            points: proposed,
        },
        fmcw: SweepResult {
            scheme: RadarScheme::Fmcw.as_str().into(),
            points: fmcw,
        },
        records,
    })
}

/// Re-executes one recorded radar trial.
pub fn replay_radar_trial(cfg: &RunConfig, record: &TrialRecord) -> Result<TrialRecord> {
    let ctx = Context::new(cfg)?;
    let pair = ctx.trial(record.trial_id, record.seed, record.snr_db)?;
    pair.into_iter()
        .find(|r| r.scheme == record.scheme)
        .ok_or_else(|| Error::param(format!("unknown radar scheme {:?}", record.scheme)))
}
