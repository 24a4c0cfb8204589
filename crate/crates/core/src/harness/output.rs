use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BerPoint, BerSweep, Outcome, RadarPoint, RadarSweep, TrialRecord};
use crate::config::RunConfig;
use crate::error::{Error, Result};

pub const RADAR_CSV_HEADER: &str = "snr_db,scheme,trials,mean_pct_r,mean_pct_v,fail_count";
pub const BER_CSV_HEADER: &str = "snr_db,scheme,bits,errors,ber,ci95_halfwidth";
pub const TRIALS_CSV_HEADER: &str = "trial_id,seed,snr_db,scheme,truth_a,truth_b,est_a,est_b";

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::param(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let res = (|| -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(res?)
}

fn radar_row(out: &mut String, scheme: &str, p: &RadarPoint) {
    let _ = writeln!(
        out,
        "{},{},{},{:.6},{:.6},{}",
        p.snr_db, scheme, p.trials, p.mean_pct_r, p.mean_pct_v, p.fail_count
    );
}

/// Rows ordered by SNR, proposed before FMCW.
pub fn radar_csv(s: &RadarSweep) -> String {
    let mut out = format!("{RADAR_CSV_HEADER}\n");
    for (p, f) in s.proposed.points.iter().zip(&s.fmcw.points) {
        radar_row(&mut out, &s.proposed.scheme, p);
        radar_row(&mut out, &s.fmcw.scheme, f);
    }
    out
}

fn ber_row(out: &mut String, scheme: &str, p: &BerPoint) {
    let _ = writeln!(
        out,
        "{},{},{},{},{:.6e},{:.6e}",
        p.snr_db, scheme, p.bits, p.errors, p.ber, p.ci95_halfwidth
    );
}

/// Rows ordered by Eb/N0, proposed before the matched-filter baseline.
pub fn ber_csv(s: &BerSweep) -> String {
    let mut out = format!("{BER_CSV_HEADER}\n");
    for (p, m) in s.proposed.points.iter().zip(&s.lfm_mf.points) {
        ber_row(&mut out, &s.proposed.scheme, p);
        ber_row(&mut out, &s.lfm_mf.scheme, m);
    }
    out
}

fn outcome_fields(o: Option<&Outcome>) -> (String, String) {
    match o {
        Some(Outcome::Target {
            range_m,
            velocity_mps,
        }) => (format!("{range_m:.6}"), format!("{velocity_mps:.6}")),
        Some(Outcome::Bit { bit }) => (bit.to_string(), String::new()),
        None => (String::new(), String::new()),
    }
}

/// Per-trial table with the seed of every trial. Targets fill
/// `(a, b) = (range, velocity)`; bits use `a` only. Empty estimates mark
/// failures.
pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = format!("{TRIALS_CSV_HEADER}\n");
    for r in records {
        let (ta, tb) = outcome_fields(Some(&r.truth));
        let (ea, eb) = outcome_fields(r.estimate.as_ref());
        let _ = writeln!(
            out,
            "{},{},{},{},{ta},{tb},{ea},{eb}",
            r.trial_id, r.seed, r.snr_db, r.scheme
        );
    }
    out
}

pub fn write_radar_csv(path: &Path, s: &RadarSweep) -> Result<()> {
    atomic_write(path, radar_csv(s).as_bytes())
}

pub fn write_ber_csv(path: &Path, s: &BerSweep) -> Result<()> {
    atomic_write(path, ber_csv(s).as_bytes())
}

pub fn write_trials_csv(path: &Path, records: &[TrialRecord]) -> Result<()> {
    atomic_write(path, trials_csv(records).as_bytes())
}

/// Everything needed to repeat a run: the subcommand, its arguments, and
/// the fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
    pub config: RunConfig,
}

impl Manifest {
    pub fn new(command: &str, args: Vec<String>, config: RunConfig) -> Self {
        Self {
            tool: "chirpjrc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            args,
            outputs: Vec::new(),
            config,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let m: Manifest = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        m.config.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        atomic_write(path, self.to_toml()?.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SweepResult;

    #[test]
    fn csv_layout() {
        let pt = |snr| RadarPoint {
            snr_db: snr,
            trials: 2,
            mean_pct_r: 99.5,
            mean_pct_v: -3.25,
            fail_count: 1,
        };
        let s = RadarSweep {
            proposed: SweepResult {
                scheme: "proposed".into(),
                points: vec![pt(-10.0), pt(f64::INFINITY)],
            },
            fmcw: SweepResult {
                scheme: "fmcw".into(),
                points: vec![pt(-10.0), pt(f64::INFINITY)],
            },
            records: vec![],
        };
        let text = radar_csv(&s);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], RADAR_CSV_HEADER);
        assert_eq!(lines[1], "-10,proposed,2,99.500000,-3.250000,1");
        assert_eq!(lines[2], "-10,fmcw,2,99.500000,-3.250000,1");
        assert_eq!(lines[4], "inf,fmcw,2,99.500000,-3.250000,1");
    }

    #[test]
    fn manifest_roundtrip_and_atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = Manifest::new(
            "radar-sweep",
            vec!["--seed".into(), "7".into()],
            RunConfig::default(),
        );
        m.outputs.push("radar.csv".into());
        let path = dir.path().join("manifest.toml");
        m.write(&path).unwrap();
        assert_eq!(Manifest::load(&path).unwrap(), m);
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names.len(), 1, "temporary file left behind: {names:?}");
    }
}
