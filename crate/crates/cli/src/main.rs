//! `crnsig`: compile, simulate, synthesize and analyze chemical reaction
//! networks from the command line.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crnsig::analysis::{
    band_monitor, bode_csv, bode_svg, bode_sweep, log_grid, BandSpec, Port, ResponseConfig, Verdict,
};
use crnsig::filters::{
    synth_bandpass, synth_bandpass_catalytic, synth_lowpass, synth_lowpass2_dualrail,
    synth_lowpass_dualrail, BandPassPorts, BandPassSpec, FirstOrderLowPassSpec,
};
use crnsig::kinetics::{Drive, Waveform};
use crnsig::modem::{
    channel_oscillator, run_modem_experiment, synth_demodulator, synth_modulator,
    synth_multiplexer, CarrierSpec, Channel, DemodSpec, ExperimentConfig, MediumSignal,
};
use crnsig::{
    compile_odes, network_from_json, network_to_json, parse_network, serialize_network, simulate,
    DualRailSignal, Execution, Network, SimOptions, Species, Tolerances,
};

/// Exit status for runtime failures; kept clear of the monitor verdicts.
const EXIT_ERROR: u8 = 10;
/// Exit status for malformed command lines.
const EXIT_USAGE: u8 = 11;

#[derive(Parser, Debug)]
#[command(
    name = "crnsig",
    version,
    about = "Chemical reaction networks as analog signal processors"
)]
struct Cli {
    /// Relative tolerance of the ODE integrator.
    #[arg(long, global = true, default_value_t = Tolerances::default().rel_tol)]
    tol_rel: f64,
    /// Absolute tolerance of the ODE integrator.
    #[arg(long, global = true, default_value_t = Tolerances::default().abs_tol)]
    tol_abs: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the mass-action ODEs of a network.
    Compile {
        /// Network file (`.crn` text or `.json`); `-` reads stdin.
        network: PathBuf,
    },
    /// Integrate a network and write its trace as CSV.
    Simulate(SimulateArgs),
    /// Write a synthesized network.
    Synth(SynthArgs),
    /// Measure a frequency response by sine sweep.
    Bode(BodeArgs),
    /// Run a modulation experiment from a JSON config.
    Modem {
        config: PathBuf,
        /// Directory receiving `traces.csv` and `metrics.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check whether a species oscillates within a band. Exits 0 when in
    /// band, 1 when oscillating out of band, 2 when not oscillating.
    Monitor(MonitorArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    network: PathBuf,
    /// Simulation horizon in seconds.
    #[arg(long)]
    t_end: f64,
    /// Sampling interval of the output; defaults to one row per integrator step.
    #[arg(long)]
    dt: Option<f64>,
    /// Output CSV; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Hold a species at a waveform: `NAME=const:V` or `NAME=sine:AMP,FREQ,OFFSET`.
    #[arg(long = "drive", value_name = "NAME=WAVE")]
    drives: Vec<String>,
    /// Override an initial concentration: `NAME=VALUE`.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    sets: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Dsl,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Kind {
    Lowpass,
    Bandpass,
    Oscillator,
    Modulator,
    Multiplexer,
    Demodulator,
}

#[derive(Args, Debug)]
struct SynthArgs {
    kind: Kind,
    #[arg(long, value_enum, default_value_t = Format::Dsl)]
    format: Format,
    /// Output file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Gain (low-pass `k`, band-pass `k`).
    #[arg(long)]
    k: Option<f64>,
    /// Low-pass cutoff rate `c`, or band-pass coefficient `c` with `--a --b`.
    #[arg(long)]
    c: Option<f64>,
    /// Band-pass coefficient `a`.
    #[arg(long)]
    a: Option<f64>,
    /// Band-pass coefficient `b`.
    #[arg(long)]
    b: Option<f64>,
    /// Quality factor.
    #[arg(long)]
    q: Option<f64>,
    /// Band-pass center frequency in rad/s.
    #[arg(long)]
    w0: Option<f64>,
    /// Carrier frequency in rad/s.
    #[arg(long)]
    f: Option<f64>,
    /// Band-pass rate constants as catalyst concentrations `A`, `B`, `C`.
    #[arg(long)]
    catalytic: bool,
    /// Dual-rail low-pass on `Xp/Xm -> Vp/Vm`.
    #[arg(long)]
    dual: bool,
    /// Low-pass order (1 or 2); order 2 is dual-rail.
    #[arg(long, default_value_t = 1)]
    order: usize,
    /// Channel name for oscillator and modulator species.
    #[arg(long, default_value = "a")]
    name: String,
    /// Multiplexer channels as `NAME=FREQ`.
    #[arg(long = "channel", value_name = "NAME=FREQ")]
    channels: Vec<String>,
    /// Pursuit rate of the medium; defaults to 100 times the fastest carrier.
    #[arg(long)]
    rate: Option<f64>,
    /// Demodulator low-pass cutoff; defaults to a fifth of the carrier.
    #[arg(long)]
    lp_cutoff: Option<f64>,
    /// Demodulator output species.
    #[arg(long, default_value = "D")]
    output: String,
}

#[derive(Args, Debug)]
struct BodeArgs {
    network: PathBuf,
    /// Input port: a species, or `PLUS-MINUS` for a dual-rail pair.
    #[arg(long)]
    input: String,
    /// Output port, as for `--input`.
    #[arg(long)]
    output: String,
    /// Lowest frequency in rad/s.
    #[arg(long)]
    from: f64,
    /// Highest frequency in rad/s.
    #[arg(long)]
    to: f64,
    /// Number of log-spaced frequencies.
    #[arg(long, default_value_t = 30)]
    points: usize,
    /// Slowest time constant of the network in seconds. The first
    /// `max(10 periods, 10 * settle)` of every run are discarded, so an
    /// underestimate leaves a decaying transient that fails the sinusoid fit.
    #[arg(long, default_value_t = 0.0)]
    settle: f64,
    /// Input amplitude.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Output CSV; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Measure one frequency at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct MonitorArgs {
    network: PathBuf,
    /// Species to watch.
    #[arg(long)]
    species: String,
    /// Lower band edge in rad/s.
    #[arg(long)]
    low: f64,
    /// Upper band edge in rad/s.
    #[arg(long)]
    high: f64,
    /// AC level relative to peak below which the species counts as silent.
    #[arg(long, default_value_t = -40.0, allow_hyphen_values = true)]
    stopband_db: f64,
    /// Observation window in seconds.
    #[arg(long)]
    window: f64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let tol = Tolerances {
        rel_tol: cli.tol_rel,
        abs_tol: cli.tol_abs,
    };
    match cli.command {
        Command::Compile { network } => {
            let n = load_network(&network)?;
            emit(None, &compile_odes(&n).to_string())?;
        }
        Command::Simulate(args) => cmd_simulate(args, tol)?,
        Command::Synth(args) => cmd_synth(args)?,
        Command::Bode(args) => cmd_bode(args, tol)?,
        Command::Modem { config, out } => {
            let text = read_input(&config)?;
            let cfg: ExperimentConfig = serde_json::from_str(&text)
                .with_context(|| format!("invalid experiment config {}", config.display()))?;
            let report = run_modem_experiment(&cfg, tol)?;
            report.write_to(&out)?;
        }
        Command::Monitor(args) => return cmd_monitor(args, tol),
    }
    Ok(ExitCode::SUCCESS)
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Parses JSON when the file is `.json` or starts with `{`, the text format
/// otherwise.
fn load_network(path: &Path) -> Result<Network> {
    let text = read_input(path)?;
    let is_json =
        path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let n = if is_json {
        network_from_json(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
    } else {
        parse_network(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
    };
    Ok(n)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn split_assignment(s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .ok_or_else(|| anyhow!("expected NAME=VALUE, got `{s}`"))
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| anyhow!("`{s}` is not a number"))
}

fn parse_drive(s: &str) -> Result<Drive> {
    let (name, wave) = split_assignment(s)?;
    let waveform = match wave.split_once(':') {
        Some(("const", v)) => Waveform::constant(parse_number(v)?),
        Some(("sine", params)) => {
            let p = params
                .split(',')
                .map(parse_number)
                .collect::<Result<Vec<_>>>()?;
            match p[..] {
                [amp, freq, offset] => Waveform::sine(amp, freq, offset),
                _ => bail!("sine drive needs AMP,FREQ,OFFSET, got `{params}`"),
            }
        }
        _ => bail!("drive must be `const:V` or `sine:AMP,FREQ,OFFSET`, got `{wave}`"),
    };
    Ok(Drive::new(name, waveform))
}

fn cmd_simulate(args: SimulateArgs, tol: Tolerances) -> Result<()> {
    let mut n = load_network(&args.network)?;
    for s in &args.sets {
        let (name, v) = split_assignment(s)?;
        n.set_init(name, parse_number(v)?)?;
    }
    let mut opts = match args.dt {
        Some(dt) => SimOptions::uniform(dt),
        None => SimOptions::default(),
    }
    .with_tolerances(tol);
    for d in &args.drives {
        opts = opts.with_drive(parse_drive(d)?);
    }
    let trace = simulate(&n, args.t_end, &opts)?;
    emit(args.out.as_deref(), &trace.to_csv())
}

fn require(v: Option<f64>, flag: &str, kind: Kind) -> Result<f64> {
    v.ok_or_else(|| anyhow!("{kind:?} needs --{flag}"))
}

fn bandpass_spec(args: &SynthArgs) -> Result<BandPassSpec> {
    Ok(match (args.a, args.b, args.c) {
        (Some(a), Some(b), Some(c)) => BandPassSpec::from_coefficients(a, b, c)?,
        (None, None, None) => BandPassSpec::new(
            args.k.unwrap_or(1.0),
            require(args.q, "q", args.kind)?,
            require(args.w0, "w0", args.kind)?,
        )?,
        _ => bail!("give either --a --b --c or --k --q --w0"),
    })
}

fn synthesize(args: &SynthArgs) -> Result<Network> {
    let rails = |base: &str| DualRailSignal::named(base);
    let medium = MediumSignal::default();
    let channel = |name: &str, f: f64| Channel::new(name, CarrierSpec::new(f)?);
    let n = match args.kind {
        Kind::Lowpass => {
            let spec = FirstOrderLowPassSpec::new(args.c.unwrap_or(1.0), args.k.unwrap_or(1.0))?;
            match (args.order, args.dual) {
                (1, false) => synth_lowpass(&spec, "Vin", "Vout")?,
                (1, true) => synth_lowpass_dualrail(&spec, &rails("X")?, &rails("V")?)?,
                (2, _) => synth_lowpass2_dualrail(&spec, &rails("X")?, &rails("V")?)?,
                (o, _) => bail!("low-pass order must be 1 or 2, got {o}"),
            }
        }
        Kind::Bandpass => {
            let spec = bandpass_spec(args)?;
            let ports = BandPassPorts::standard();
            if args.catalytic {
                synth_bandpass_catalytic(&spec, &ports)?
            } else {
                synth_bandpass(&spec, &ports)?
            }
        }
        Kind::Oscillator => {
            channel_oscillator(&channel(&args.name, require(args.f, "f", args.kind)?)?)?
        }
        Kind::Modulator => {
            let f = require(args.f, "f", args.kind)?;
            synth_modulator(
                &channel(&args.name, f)?,
                &medium,
                args.rate.unwrap_or(100.0 * f),
            )?
        }
        Kind::Multiplexer => {
            let chans = args
                .channels
                .iter()
                .map(|s| {
                    let (name, f) = split_assignment(s)?;
                    channel(name, parse_number(f)?).map_err(anyhow::Error::from)
                })
                .collect::<Result<Vec<_>>>()?;
            let fastest = chans
                .iter()
                .map(|c| c.carrier.frequency)
                .fold(0.0, f64::max);
            synth_multiplexer(&chans, &medium, args.rate.unwrap_or(100.0 * fastest))?
        }
        Kind::Demodulator => {
            let mut spec = DemodSpec::for_carrier(require(args.f, "f", args.kind)?);
            if let Some(q) = args.q {
                spec.q = q;
            }
            if let Some(c) = args.lp_cutoff {
                spec.lp_cutoff = c;
            }
            spec.lp_order = args.order;
            synth_demodulator(&spec, &medium, &args.output)?.0
        }
    };
    Ok(n)
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let n = synthesize(&args)?;
    let text = match args.format {
        Format::Dsl => serialize_network(&n),
        Format::Json => network_to_json(&n),
    };
    emit(args.out.as_deref(), &text)
}

fn parse_port(s: &str) -> Result<Port> {
    Ok(match s.split_once('-') {
        Some((p, m)) => Port::Dual(DualRailSignal::new(Species::new(p)?, Species::new(m)?)?),
        None => Port::single(s)?,
    })
}

fn cmd_bode(args: BodeArgs, tol: Tolerances) -> Result<()> {
    let n = load_network(&args.network)?;
    let (input, output) = (parse_port(&args.input)?, parse_port(&args.output)?);
    if !(args.from > 0.0 && args.to >= args.from) {
        bail!("need 0 < --from <= --to, got [{}, {}]", args.from, args.to);
    }
    let cfg = ResponseConfig {
        amplitude: args.amplitude,
        settle_time: args.settle,
        tolerances: tol,
        ..ResponseConfig::default()
    };
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let grid = log_grid(args.from, args.to, args.points);
    let sweep = bode_sweep(&n, &input, &output, &grid, &cfg, exec)?;
    if !sweep.failures.is_empty() {
        eprintln!(
            "warning: {} of {} points failed",
            sweep.failures.len(),
            grid.len()
        );
    }
    emit(args.out.as_deref(), &bode_csv(&sweep.points))?;
    if let Some(svg) = &args.svg {
        fs::write(svg, bode_svg(&sweep.points))
            .with_context(|| format!("writing {}", svg.display()))?;
    }
    Ok(())
}

fn cmd_monitor(args: MonitorArgs, tol: Tolerances) -> Result<ExitCode> {
    let n = load_network(&args.network)?;
    let band = BandSpec::new(args.low, args.high, args.stopband_db)?;
    let report = band_monitor(&n, &args.species, &band, args.window, tol)?;
    let (line, code) = match report.verdict {
        Verdict::InBand => ("in_band".to_string(), 0),
        Verdict::OutOfBand(w) => (format!("out_of_band {w}"), 1),
        Verdict::NoOscillation => ("no_oscillation".to_string(), 2),
    };
    emit(
        None,
        &format!(
            "{line}\npassband_ratio_db {}\nac_level_db {}\n",
            report.passband_ratio_db, report.ac_level_db
        ),
    )?;
    Ok(ExitCode::from(code))
}
