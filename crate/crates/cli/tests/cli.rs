use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn chirpjrc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chirpjrc"))
        .current_dir(dir)
        .env_remove("CHIRPJRC_THREADS")
        .args(args)
        .output()
        .expect("spawn chirpjrc")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn radar_sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        [
            "radar-sweep",
            "--preset",
            "desk",
            "--seed",
            "7",
            "--trials",
            "4",
            "--snr-db=-6,6",
            "--out",
            out,
        ]
    };
    ok(&chirpjrc(dir.path(), &args("a")));
    ok(&chirpjrc(dir.path(), &args("b")));
    let a = fs::read(dir.path().join("a/radar.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b/radar.csv")).unwrap());
    assert!(String::from_utf8_lossy(&a)
        .starts_with("snr_db,scheme,trials,mean_pct_r,mean_pct_v,fail_count\n"));

    // Replaying the manifest with more workers gives the same bytes.
    let out = Command::new(env!("CARGO_BIN_EXE_chirpjrc"))
        .current_dir(dir.path())
        .env("CHIRPJRC_THREADS", "3")
        .args(["radar-sweep", "--config", "a/manifest.toml", "--out", "c"])
        .output()
        .unwrap();
    ok(&out);
    assert_eq!(a, fs::read(dir.path().join("c/radar.csv")).unwrap());
    assert_eq!(
        fs::read(dir.path().join("a/radar_trials.csv")).unwrap(),
        fs::read(dir.path().join("c/radar_trials.csv")).unwrap()
    );
    let manifest = fs::read_to_string(dir.path().join("c/manifest.toml")).unwrap();
    assert!(
        manifest.contains("threads = 3") && manifest.contains("seed = 7"),
        "{manifest}"
    );
}

#[test]
fn paper_symbol_length() {
    let dir = tempfile::tempdir().unwrap();
    ok(&chirpjrc(
        dir.path(),
        &[
            "waveform", "--shape", "triangle", "--preset", "paper", "--out", "w",
        ],
    ));
    let header = fs::read_to_string(dir.path().join("w/signal.iq.toml")).unwrap();
    assert!(header.contains("count = 216000"), "{header}");
    assert_eq!(
        fs::metadata(dir.path().join("w/signal.iq")).unwrap().len(),
        216_000 * 8
    );
}

#[test]
fn estimate_closed_loop() {
    let dir = tempfile::tempdir().unwrap();
    let echo = [
        "waveform",
        "--preset",
        "paper",
        "--shape",
        "v",
        "--echo-range",
        "250",
        "--echo-velocity",
        "10000",
        "--out",
        "e",
    ];
    ok(&chirpjrc(dir.path(), &echo));
    let out = ok(&chirpjrc(
        dir.path(),
        &[
            "estimate",
            "--preset",
            "paper",
            "--shape",
            "v",
            "--input",
            "e/signal.iq",
            "--out",
            "e",
        ],
    ));
    let row: Vec<f64> = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[2] - 250.0).abs() < 0.5, "{out}");
    assert!((row[3] - 10_000.0).abs() < 2.0, "{out}");
    assert!(dir.path().join("e/estimate.diagnostics.toml").exists());
}

#[test]
fn demod_recovers_bits() {
    let dir = tempfile::tempdir().unwrap();
    let bits = "0110100111";
    for scheme in ["proposed", "lfm-mf"] {
        ok(&chirpjrc(
            dir.path(),
            &[
                "waveform", "--preset", "desk", "--bits", bits, "--scheme", scheme, "--out", scheme,
            ],
        ));
        let input = format!("{scheme}/signal.iq");
        let out = ok(&chirpjrc(
            dir.path(),
            &[
                "demod", "--preset", "desk", "--scheme", scheme, "--input", &input, "--stats",
                "--out", scheme,
            ],
        ));
        assert_eq!(out.trim(), bits);
        let stats =
            fs::read_to_string(dir.path().join(format!("{scheme}/demod_stats.csv"))).unwrap();
        assert_eq!(stats.lines().next(), Some("branch_tri,branch_v,bit"));
        assert_eq!(stats.lines().count(), bits.len() + 1);
    }
}

#[test]
fn ambiguity_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(
        &cfg,
        "preset = \"desk\"\n[ambiguity]\ntau_points = 21\nfd_points = 11\n",
    )
    .unwrap();
    ok(&chirpjrc(
        dir.path(),
        &["ambiguity", "--config", "small.toml", "--out", "a"],
    ));
    let grid = fs::read_to_string(dir.path().join("a/ambiguity.csv")).unwrap();
    assert_eq!(grid.lines().next(), Some("tau_s,fd_hz,mag"));
    assert_eq!(grid.lines().count(), 21 * 11 + 1);
    let cut = fs::read_to_string(dir.path().join("a/cut_delay.csv")).unwrap();
    assert_eq!(cut.lines().next(), Some("tau_s,mag"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let far = chirpjrc(
        dir.path(),
        &[
            "waveform",
            "--preset",
            "desk",
            "--echo-range",
            "900",
            "--echo-velocity",
            "1",
        ],
    );
    assert_eq!(far.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&far.stderr).contains("500"));

    fs::write(dir.path().join("bad.toml"), "seed = 1\nbogus = 2\n").unwrap();
    let bad = chirpjrc(dir.path(), &["radar-sweep", "--config", "bad.toml"]);
    assert_eq!(bad.status.code(), Some(2));

    let few = chirpjrc(
        dir.path(),
        &["ber-sweep", "--preset", "desk", "--bits", "10"],
    );
    assert_eq!(few.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&few.stderr).contains("target_ber"));

    // A stationary target puts both beats at the same sign: runtime failure.
    ok(&chirpjrc(
        dir.path(),
        &[
            "waveform",
            "--preset",
            "desk",
            "--echo-range",
            "250",
            "--echo-velocity",
            "0",
            "--out",
            "s",
        ],
    ));
    let amb = chirpjrc(
        dir.path(),
        &[
            "estimate",
            "--preset",
            "desk",
            "--input",
            "s/signal.iq",
            "--out",
            "s",
        ],
    );
    assert_eq!(amb.status.code(), Some(1));

    let missing = chirpjrc(dir.path(), &["demod", "--input", "nope.iq"]);
    assert_eq!(missing.status.code(), Some(1));
}
