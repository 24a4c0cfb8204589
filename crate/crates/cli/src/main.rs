//! `chirpjrc` command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chirpjrc::ambiguity::{ambiguity_grid, resolution_from_cut, AmbiguityGrid, CutAxis, Method};
use chirpjrc::channel::{
    add_awgn, apply_rician, echo, echo_stop_and_hop, DebrisTarget, SnrReference,
};
use chirpjrc::comms_rx::{demodulate_stream_stats, CommsScheme};
use chirpjrc::config::{Preset, RunConfig};
use chirpjrc::harness::{
    atomic_write, run_ber_sweep, run_radar_sweep, write_ber_csv, write_radar_csv, write_trials_csv,
    Manifest,
};
use chirpjrc::radar_rx::{estimate_target, estimate_target_fmcw, EstimationResult};
use chirpjrc::rng::derive_seed;
use chirpjrc::signal::{header_of, header_path, load_signal, write_csv, write_iq};
use chirpjrc::waveform::{
    gen_fmcw_ramps, gen_lfm_pulse, gen_symbol, modulate_bits, modulate_bits_lfm, ChirpDirection,
    SymbolShape,
};
use chirpjrc::{ComplexSignal, Error};

const NOISE_STREAM: u64 = 0x4e4f_4953_0000_0000;
const FADE_STREAM: u64 = 0x4641_4445_0000_0000;

#[derive(Parser)]
#[command(
    name = "chirpjrc",
    version,
    about = "Triangle/V-LFM joint radar-communications simulator"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML). A run manifest is also accepted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    preset: Option<Preset>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and grids.
    #[arg(long, global = true, env = "CHIRPJRC_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a symbol, ramp pair, LFM pulse or modulated bit stream.
    Waveform(WaveformArgs),
    /// Ambiguity surface and zero cuts.
    Ambiguity(AmbiguityArgs),
    /// Range and velocity from a received signal file.
    Estimate(EstimateArgs),
    /// Recover bits from a received symbol stream.
    Demod(DemodArgs),
    /// Accuracy versus SNR for the proposed waveform and the FMCW baseline.
    RadarSweep(RadarSweepArgs),
    /// BER versus Eb/N0 for the proposed waveform and the LFM matched filter.
    BerSweep(BerSweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Shape {
    Triangle,
    V,
    Fmcw,
    LfmUp,
    LfmDown,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Proposed,
    LfmMf,
}

impl From<Scheme> for CommsScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Proposed => CommsScheme::Proposed,
            Scheme::LfmMf => CommsScheme::LfmMf,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Iq,
    Csv,
}

#[derive(Args)]
struct WaveformArgs {
    #[arg(long, value_enum, default_value = "triangle", conflicts_with = "bits")]
    shape: Shape,
    /// Bit string such as 0110; modulates a stream instead of one symbol.
    #[arg(long)]
    bits: Option<String>,
    #[arg(long, value_enum, default_value = "proposed", requires = "bits")]
    scheme: Scheme,
    /// Reflect off a point target at this range (m).
    #[arg(long, requires = "echo_velocity")]
    echo_range: Option<f64>,
    /// Target radial velocity (m/s), positive when closing.
    #[arg(long, requires = "echo_range")]
    echo_velocity: Option<f64>,
    /// Piecewise-constant delay segments for the echo; 1 is a constant delay.
    #[arg(long, default_value_t = 1)]
    hop_segments: usize,
    /// Pass each symbol through an independent Rician tap.
    #[arg(long)]
    fading: bool,
    /// AWGN level: per-sample SNR for echoes, Eb/N0 for bit streams.
    #[arg(long, allow_negative_numbers = true)]
    snr_db: Option<f64>,
    #[arg(long, value_enum, default_value = "iq")]
    format: Format,
    /// File name inside the output directory.
    #[arg(long, default_value = "signal")]
    name: String,
}

#[derive(Args)]
struct AmbiguityArgs {
    #[arg(long, value_enum, default_value = "triangle")]
    shape: Shape,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Analytic,
    Numeric,
}

#[derive(Args)]
struct EstimateArgs {
    /// Binary signal file with its `.toml` header next to it.
    #[arg(long)]
    input: PathBuf,
    /// Transmitted waveform: triangle or v for the proposed receiver, fmcw for the baseline.
    #[arg(long, value_enum, default_value = "triangle")]
    shape: Shape,
}

#[derive(Args)]
struct DemodArgs {
    #[arg(long)]
    input: PathBuf,
    /// Number of symbols to decode; defaults to all whole symbols in the file.
    #[arg(long)]
    n_bits: Option<usize>,
    #[arg(long, value_enum, default_value = "proposed")]
    scheme: Scheme,
    /// Also write per-symbol branch statistics.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct RadarSweepArgs {
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated SNR grid in dB.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    snr_db: Option<Vec<f64>>,
}

#[derive(Args)]
struct BerSweepArgs {
    #[arg(long)]
    bits: Option<usize>,
    /// Comma-separated Eb/N0 grid in dB.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    ebn0_db: Option<Vec<f64>>,
}

type Res<T> = Result<T, Error>;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli.command, &cli.common, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}

fn load_config(common: &Common) -> Res<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            if toml::from_str::<toml::Table>(&text).is_ok_and(|t| t.contains_key("tool")) {
                Manifest::from_toml(&text)?.config
            } else {
                RunConfig::from_toml(&text)?
            }
        }
        None => RunConfig::default(),
    };
    if let Some(p) = common.preset {
        cfg.preset = p;
        cfg.waveform = None;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(o) = &common.out {
        cfg.out_dir = Some(o.clone());
    }
    if common.threads.is_some() {
        cfg.threads = common.threads;
    }
    Ok(cfg)
}

fn init_threads(cfg: &RunConfig) -> Res<()> {
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

struct Run {
    cfg: RunConfig,
    dir: PathBuf,
    outputs: Vec<String>,
}

impl Run {
    fn path(&mut self, name: &str) -> PathBuf {
        self.outputs.push(name.to_string());
        self.dir.join(name)
    }

    fn finish(self, command: &str, args: &[String]) -> Res<()> {
        let mut m = Manifest::new(command, args.to_vec(), self.cfg);
        m.outputs = self.outputs;
        m.write(&self.dir.join("manifest.toml"))
    }
}

fn run(command: Command, common: &Common, args: &[String]) -> Res<()> {
    let cfg = load_config(common)?;
    cfg.validate()?;
    init_threads(&cfg)?;
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir)?;
    let mut run = Run {
        cfg,
        dir,
        outputs: Vec::new(),
    };
    let name = match command {
        Command::Waveform(a) => {
            waveform(&mut run, &a)?;
            "waveform"
        }
        Command::Ambiguity(a) => {
            ambiguity(&mut run, &a)?;
            "ambiguity"
        }
        Command::Estimate(a) => {
            estimate(&mut run, &a)?;
            "estimate"
        }
        Command::Demod(a) => {
            demod(&mut run, &a)?;
            "demod"
        }
        Command::RadarSweep(a) => {
            radar_sweep(&mut run, &a)?;
            "radar-sweep"
        }
        Command::BerSweep(a) => {
            ber_sweep(&mut run, &a)?;
            "ber-sweep"
        }
    };
    run.finish(name, args)
}

fn parse_bits(s: &str) -> Res<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidParameter(format!(
                "bit string may only contain 0 and 1, found {other:?}"
            ))),
        })
        .collect()
}

fn symbol_shape(shape: Shape) -> Option<SymbolShape> {
    match shape {
        Shape::Triangle => Some(SymbolShape::TriangleLfm),
        Shape::V => Some(SymbolShape::VLfm),
        _ => None,
    }
}

fn waveform(run: &mut Run, a: &WaveformArgs) -> Res<()> {
    let p = run.cfg.params();
    let seed = run.cfg.seed;
    let mut sig = match &a.bits {
        Some(bits) => {
            let bits = parse_bits(bits)?;
            match a.scheme {
                Scheme::Proposed => modulate_bits(&p, &bits)?,
                Scheme::LfmMf => modulate_bits_lfm(&p, &bits)?,
            }
        }
        None => match a.shape {
            Shape::Triangle | Shape::V => {
                gen_symbol(&p, symbol_shape(a.shape).expect("symbol shape"))
            }
            Shape::Fmcw => gen_fmcw_ramps(&p, 2)?,
            Shape::LfmUp => gen_lfm_pulse(&p, ChirpDirection::Up),
            Shape::LfmDown => gen_lfm_pulse(&p, ChirpDirection::Down),
        },
    };
    if let (Some(r), Some(v)) = (a.echo_range, a.echo_velocity) {
        let target = DebrisTarget::new(r, v)?;
        let rx = if a.hop_segments == 1 {
            echo(&sig, &target, &p)?
        } else {
            echo_stop_and_hop(&sig, &target, &p, a.hop_segments)?
        };
        sig = rx.window(sig.t_start(), sig.len())?;
    }
    let per_symbol = a.bits.is_some();
    if a.fading {
        sig = apply_rician(
            &sig,
            &run.cfg.channel,
            p.symbol_len(),
            derive_seed(seed, FADE_STREAM, 0),
        )?;
    }
    if let Some(snr) = a.snr_db {
        let reference = if per_symbol {
            SnrReference::PerSymbol {
                symbol_len: p.symbol_len(),
            }
        } else {
            SnrReference::PerSample
        };
        sig = add_awgn(&sig, snr, reference, derive_seed(seed, NOISE_STREAM, 0))?;
    }
    match a.format {
        Format::Iq => {
            let file = format!("{}.iq", a.name);
            let path = run.path(&file);
            let mut bytes = Vec::new();
            write_iq(&mut bytes, &sig)?;
            let header =
                toml::to_string(&header_of(&sig)).map_err(|e| Error::Config(e.to_string()))?;
            atomic_write(&path, &bytes)?;
            let hp = header_path(&path);
            atomic_write(&hp, header.as_bytes())?;
            run.outputs.push(format!("{file}.toml"));
        }
        Format::Csv => {
            let path = run.path(&format!("{}.csv", a.name));
            let mut bytes = Vec::new();
            write_csv(&mut bytes, &sig)?;
            atomic_write(&path, &bytes)?;
        }
    }
    println!("{} samples at {} Hz", sig.len(), sig.fs());
    Ok(())
}

fn grid_csv(g: &AmbiguityGrid) -> String {
    let mut s = String::from("tau_s,fd_hz,mag\n");
    for (i, tau) in g.tau_axis().iter().enumerate() {
        for (j, fd) in g.fd_axis().iter().enumerate() {
            let _ = writeln!(s, "{tau:.9e},{fd:.9e},{:.9e}", g.get(i, j));
        }
    }
    s
}

fn cut_csv(x_name: &str, x: &[f64], y: &[f64]) -> String {
    let mut s = format!("{x_name},mag\n");
    for (a, b) in x.iter().zip(y) {
        let _ = writeln!(s, "{a:.9e},{b:.9e}");
    }
    s
}

fn ambiguity(run: &mut Run, a: &AmbiguityArgs) -> Res<()> {
    let p = run.cfg.params();
    let shape = symbol_shape(a.shape).ok_or_else(|| {
        Error::InvalidParameter("ambiguity is defined for the triangle and v shapes".into())
    })?;
    let method = match a.method {
        Some(MethodArg::Analytic) => Method::Analytic,
        Some(MethodArg::Numeric) => Method::Numeric,
        None => run.cfg.ambiguity.method,
    };
    run.cfg.ambiguity.method = method;
    let (tau, fd) = run.cfg.ambiguity.axes(&p);
    let grid = ambiguity_grid(&p, shape, &tau, &fd, method)?;
    atomic_write(&run.path("ambiguity.csv"), grid_csv(&grid).as_bytes())?;
    let (x, y) = grid.cut(CutAxis::Delay)?;
    atomic_write(
        &run.path("cut_delay.csv"),
        cut_csv("tau_s", &x, &y).as_bytes(),
    )?;
    let (x, y) = grid.cut(CutAxis::Doppler)?;
    atomic_write(
        &run.path("cut_doppler.csv"),
        cut_csv("fd_hz", &x, &y).as_bytes(),
    )?;
    for (label, axis, unit) in [
        ("delay", CutAxis::Delay, "s"),
        ("doppler", CutAxis::Doppler, "Hz"),
    ] {
        match resolution_from_cut(&grid, axis) {
            Ok(w) => println!("{label} -3 dB width: {w:.6e} {unit}"),
            Err(e) => println!("{label} -3 dB width: {e}"),
        }
    }
    Ok(())
}

fn estimate(run: &mut Run, a: &EstimateArgs) -> Res<()> {
    let p = run.cfg.params();
    let rx = load_signal(&a.input)?;
    let cfg = run.cfg.receiver;
    let e: EstimationResult = match a.shape {
        Shape::Fmcw => estimate_target_fmcw(&rx, &p, &cfg)?,
        s => {
            let shape = symbol_shape(s).ok_or_else(|| {
                Error::InvalidParameter("estimate expects the triangle, v or fmcw shape".into())
            })?;
            estimate_target(&rx, shape, &p, &cfg)?
        }
    };
    let row = format!(
        "f_up_hz,f_down_hz,range_m,velocity_mps\n{:.6},{:.6},{:.6},{:.6}\n",
        e.beat.f_up, e.beat.f_down, e.range_m, e.velocity_mps
    );
    atomic_write(&run.path("estimate.csv"), row.as_bytes())?;
    let diag = toml::to_string(&e.diagnostics).map_err(|err| Error::Config(err.to_string()))?;
    atomic_write(&run.path("estimate.diagnostics.toml"), diag.as_bytes())?;
    print!("{row}");
    Ok(())
}

fn demod(run: &mut Run, a: &DemodArgs) -> Res<()> {
    let p = run.cfg.params();
    let rx: ComplexSignal = load_signal(&a.input)?;
    let n_bits = a.n_bits.unwrap_or(rx.len() / p.symbol_len());
    let stats = demodulate_stream_stats(&rx, n_bits, a.scheme.into(), &p)?;
    let bits: String = stats
        .iter()
        .map(|s| if s.decided_bit == 1 { '1' } else { '0' })
        .collect();
    atomic_write(&run.path("bits.txt"), format!("{bits}\n").as_bytes())?;
    if a.stats {
        let mut s = String::from("branch_tri,branch_v,bit\n");
        for st in &stats {
            let _ = writeln!(
                s,
                "{:.9e},{:.9e},{}",
                st.branch_tri, st.branch_v, st.decided_bit
            );
        }
        atomic_write(&run.path("demod_stats.csv"), s.as_bytes())?;
    }
    let mut out = io::stdout().lock();
    writeln!(out, "{bits}")?;
    Ok(())
}

fn radar_sweep(run: &mut Run, a: &RadarSweepArgs) -> Res<()> {
    if let Some(t) = a.trials {
        run.cfg.radar_sweep.trials = t;
    }
    if let Some(g) = &a.snr_db {
        run.cfg.radar_sweep.snr_db = g.clone();
    }
    run.cfg.validate()?;
    let s = run_radar_sweep(&run.cfg)?;
    write_radar_csv(&run.path("radar.csv"), &s)?;
    write_trials_csv(&run.path("radar_trials.csv"), &s.records)?;
    for (p, f) in s.proposed.points.iter().zip(&s.fmcw.points) {
        println!(
            "snr {:>5} dB  proposed %R {:>9.3} %V {:>9.3}  fmcw %R {:>9.3} %V {:>9.3}",
            p.snr_db, p.mean_pct_r, p.mean_pct_v, f.mean_pct_r, f.mean_pct_v
        );
    }
    Ok(())
}

fn ber_sweep(run: &mut Run, a: &BerSweepArgs) -> Res<()> {
    if let Some(b) = a.bits {
        run.cfg.ber_sweep.bits = b;
    }
    if let Some(g) = &a.ebn0_db {
        run.cfg.ber_sweep.ebn0_db = g.clone();
    }
    run.cfg.validate()?;
    let s = run_ber_sweep(&run.cfg)?;
    write_ber_csv(&run.path("ber.csv"), &s)?;
    write_trials_csv(&run.path("ber_errors.csv"), &s.error_records)?;
    for (p, m) in s.proposed.points.iter().zip(&s.lfm_mf.points) {
        println!(
            "Eb/N0 {:>5} dB  proposed {:.3e}  lfm_mf {:.3e}",
            p.snr_db, p.ber, m.ber
        );
    }
    Ok(())
}
