//! Carrier oscillators, amplitude modulation onto a shared medium, and
//! diode-detector demodulation.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filters::{
    synth_bandpass, synth_lowpass_cascade, BandPassPorts, BandPassSpec, FilterError,
    FirstOrderLowPassSpec,
};
use crate::kinetics::{simulate, Drive, SimError, SimOptions, Tolerances, Trace, Waveform};
use crate::network::{compose, DualRailSignal, Network, NetworkError, Species};

#[derive(Debug, Error)]
pub enum ModemError {
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("carrier frequency {0} is used by more than one channel")]
    DuplicateCarrier(f64),
    #[error("channel name `{0}` is used more than once")]
    DuplicateChannel(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("writing report: {0}")]
    Io(#[from] io::Error),
}

/// A carrier of angular frequency `frequency` and unit amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierSpec {
    pub frequency: f64,
}

impl CarrierSpec {
    pub fn new(frequency: f64) -> Result<Self, ModemError> {
        if frequency > 0.0 && frequency.is_finite() {
            Ok(CarrierSpec { frequency })
        } else {
            Err(ModemError::Invalid(format!(
                "carrier frequency must be positive, got {frequency}"
            )))
        }
    }

    pub fn period(&self) -> f64 {
        TAU / self.frequency
    }
}

/// One user signal and the oscillator that carries it.
///
/// For a channel named `a` the species are `U_a` (input), `S_ap`/`S_am`
/// (sine rails), `C_ap`/`C_am` (cosine rails) and `F_a` (tuner).
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub name: String,
    pub input: Species,
    pub carrier: CarrierSpec,
    pub sine: DualRailSignal,
    pub cosine: DualRailSignal,
    pub tuner: Species,
}

impl Channel {
    pub fn new(name: &str, carrier: CarrierSpec) -> Result<Self, ModemError> {
        Ok(Channel {
            name: name.to_string(),
            input: Species::new(format!("U_{name}"))?,
            carrier,
            sine: DualRailSignal::named(&format!("S_{name}"))?,
            cosine: DualRailSignal::named(&format!("C_{name}"))?,
            tuner: Species::new(format!("F_{name}"))?,
        })
    }
}

/// The shared dual-rail medium `m = Mp - Mm`.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumSignal {
    pub rails: DualRailSignal,
}

impl Default for MediumSignal {
    fn default() -> Self {
        MediumSignal {
            rails: DualRailSignal::named("M").expect("valid name"),
        }
    }
}

/// Harmonic oscillator on dual rails with frequency set by the tuner's
/// concentration:
///
/// ```text
/// F + Cp -> F + Cp + Sp     F + Cm -> F + Cm + Sm
/// F + Sm -> F + Sm + Cp     F + Sp -> F + Sp + Cm
/// Sp + Sm -> 0              Cp + Cm -> 0
/// ```
///
/// Starting from `Cp = 1` and all other rails empty, the differences follow
/// `s(t) = sin(f t)` and `c(t) = cos(f t)`.
pub fn synth_oscillator(
    spec: &CarrierSpec,
    sine: &DualRailSignal,
    cosine: &DualRailSignal,
    tuner: &str,
) -> Result<Network, ModemError> {
    let names = [
        tuner,
        sine.plus.as_str(),
        sine.minus.as_str(),
        cosine.plus.as_str(),
        cosine.minus.as_str(),
    ];
    for (i, a) in names.iter().enumerate() {
        if names[i + 1..].contains(a) {
            return Err(ModemError::Invalid(format!(
                "species `{a}` used for two roles"
            )));
        }
    }
    let [f, sp, sm, cp, cm] = names;
    let mut n = Network::new();
    n.add_species(f, spec.frequency)?
        .add_species(sp, 0.0)?
        .add_species(sm, 0.0)?
        .add_species(cp, 1.0)?
        .add_species(cm, 0.0)?;
    n.react(&[(f, 1), (cp, 1)], &[(f, 1), (cp, 1), (sp, 1)], 1.0)?;
    n.react(&[(f, 1), (cm, 1)], &[(f, 1), (cm, 1), (sm, 1)], 1.0)?;
    n.react(&[(f, 1), (sm, 1)], &[(f, 1), (sm, 1), (cp, 1)], 1.0)?;
    n.react(&[(f, 1), (sp, 1)], &[(f, 1), (sp, 1), (cm, 1)], 1.0)?;
    n.react(&[(sp, 1), (sm, 1)], &[], 1.0)?;
    n.react(&[(cp, 1), (cm, 1)], &[], 1.0)?;
    Ok(n)
}

/// The oscillator of `ch`.
pub fn channel_oscillator(ch: &Channel) -> Result<Network, ModemError> {
    synth_oscillator(&ch.carrier, &ch.sine, &ch.cosine, ch.tuner.as_str())
}

/// `n` with the tuner's initial concentration set to `new_f`. A zero
/// frequency freezes the oscillator.
pub fn retune(n: &Network, tuner: &str, new_f: f64) -> Result<Network, ModemError> {
    if !(new_f >= 0.0 && new_f.is_finite()) {
        return Err(ModemError::Invalid(format!(
            "frequency must be nonnegative, got {new_f}"
        )));
    }
    let mut out = n.clone();
    out.set_init(tuner, new_f)?;
    Ok(out)
}

/// A single channel modulated onto the medium; see [`synth_multiplexer`].
pub fn synth_modulator(
    ch: &Channel,
    medium: &MediumSignal,
    pursuit_rate: f64,
) -> Result<Network, ModemError> {
    synth_multiplexer(std::slice::from_ref(ch), medium, pursuit_rate)
}

/// Oscillators for every channel plus the medium reactions, all at rate `r`:
///
/// ```text
/// Mp -> 0                 Mm -> 0
/// U + Sp -> U + Sp + Mp   U + Sm -> U + Sm + Mm    (per channel)
/// ```
///
/// so that `dm/dt = r (sum_i u_i s_i - m)`.
pub fn synth_multiplexer(
    channels: &[Channel],
    medium: &MediumSignal,
    pursuit_rate: f64,
) -> Result<Network, ModemError> {
    if channels.is_empty() {
        return Err(ModemError::Invalid(
            "at least one channel is required".into(),
        ));
    }
    if !(pursuit_rate > 0.0 && pursuit_rate.is_finite()) {
        return Err(ModemError::Invalid(format!(
            "pursuit rate must be positive, got {pursuit_rate}"
        )));
    }
    for (i, a) in channels.iter().enumerate() {
        for b in &channels[i + 1..] {
            if a.name == b.name {
                return Err(ModemError::DuplicateChannel(a.name.clone()));
            }
            if a.carrier.frequency == b.carrier.frequency {
                return Err(ModemError::DuplicateCarrier(a.carrier.frequency));
            }
        }
    }
    let (mp, mm) = (medium.rails.plus.as_str(), medium.rails.minus.as_str());
    let mut n = Network::new();
    for ch in channels {
        let osc = channel_oscillator(ch)?;
        for s in osc.species() {
            if n.contains(s.as_str()) || s.as_str() == mp || s.as_str() == mm {
                return Err(ModemError::Invalid(format!(
                    "species `{s}` used for two roles"
                )));
            }
        }
        n = compose(&n, &osc, &[], &ch.name)?;
        n.add_species(ch.input.as_str(), 0.0)?;
    }
    n.add_species(mp, 0.0)?.add_species(mm, 0.0)?;
    n.react(&[(mp, 1)], &[], pursuit_rate)?;
    n.react(&[(mm, 1)], &[], pursuit_rate)?;
    for ch in channels {
        let u = ch.input.as_str();
        let (sp, sm) = (ch.sine.plus.as_str(), ch.sine.minus.as_str());
        n.react(
            &[(u, 1), (sp, 1)],
            &[(u, 1), (sp, 1), (mp, 1)],
            pursuit_rate,
        )?;
        n.react(
            &[(u, 1), (sm, 1)],
            &[(u, 1), (sm, 1), (mm, 1)],
            pursuit_rate,
        )?;
    }
    Ok(n)
}

/// Diode-detector parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemodSpec {
    pub carrier_f: f64,
    pub q: f64,
    pub lp_cutoff: f64,
    pub lp_order: usize,
}

impl DemodSpec {
    /// `Q = 2` and a first-order low-pass at a fifth of the carrier.
    pub fn for_carrier(carrier_f: f64) -> Self {
        DemodSpec {
            carrier_f,
            q: 2.0,
            lp_cutoff: carrier_f / 5.0,
            lp_order: 1,
        }
    }

    fn validate(&self) -> Result<(), ModemError> {
        CarrierSpec::new(self.carrier_f)?;
        if !(self.lp_cutoff > 0.0 && self.lp_cutoff < self.carrier_f) {
            return Err(ModemError::Invalid(format!(
                "low-pass cutoff must lie in (0, carrier), got {}",
                self.lp_cutoff
            )));
        }
        if !(1..=2).contains(&self.lp_order) {
            return Err(ModemError::Invalid(format!(
                "low-pass order must be 1 or 2, got {}",
                self.lp_order
            )));
        }
        Ok(())
    }

    /// A generous bound on the detector's group delay.
    pub fn max_delay(&self) -> f64 {
        3.0 * (self.lp_order as f64 / self.lp_cutoff + 2.0 * self.q / self.carrier_f)
    }
}

/// Species names of a demodulator attached to the medium.
#[derive(Debug, Clone, PartialEq)]
pub struct DemodPorts {
    pub bandpass: BandPassPorts,
    pub output: Species,
}

impl DemodPorts {
    /// Band-pass rails prefixed with `{output}_bp_`.
    pub fn new(medium: &MediumSignal, output: &str) -> Result<Self, ModemError> {
        let output = Species::new(output)?;
        let bandpass =
            BandPassPorts::prefixed(&format!("{output}_bp_")).with_input(medium.rails.clone());
        Ok(DemodPorts { bandpass, output })
    }
}

/// Band-pass at the carrier on the medium rails, the positive output rail as
/// a rectifier, then a unity-gain low-pass chain into the single-rail
/// `output`. Low-pass stages after the first are named `{output}_s1`, ...
pub fn synth_demodulator(
    spec: &DemodSpec,
    medium: &MediumSignal,
    output: &str,
) -> Result<(Network, DemodPorts), ModemError> {
    spec.validate()?;
    let ports = DemodPorts::new(medium, output)?;
    let bp = synth_bandpass(
        &BandPassSpec::new(1.0, spec.q, spec.carrier_f)?,
        &ports.bandpass,
    )?;
    let tap = ports.bandpass.output.plus.as_str();
    let lp = synth_lowpass_cascade(
        &FirstOrderLowPassSpec::unity(spec.lp_cutoff)?,
        spec.lp_order,
        tap,
        output,
    )?;
    let n = compose(&bp, &lp, &[(tap, tap)], output)?;
    Ok((n, ports))
}

/// A `const` waveform holds `offset`; a `sine` is
/// `offset + amplitude * sin(freq * t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    Const,
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformConfig {
    pub kind: WaveKind,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub freq: f64,
    #[serde(default)]
    pub offset: f64,
}

impl WaveformConfig {
    pub fn waveform(&self) -> Waveform {
        match self.kind {
            WaveKind::Const => Waveform::constant(self.offset),
            WaveKind::Sine => Waveform::sine(self.amplitude, self.freq, self.offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub name: String,
    pub carrier_f: f64,
    pub waveform: WaveformConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemodConfig {
    /// Output species; defaults to `D1`, `D2`, ... by position.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub carrier_f: f64,
    #[serde(rename = "Q", default = "default_q")]
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp_cutoff: Option<f64>,
    #[serde(default = "default_order")]
    pub lp_order: usize,
}

fn default_q() -> f64 {
    2.0
}

fn default_order() -> usize {
    1
}

impl DemodConfig {
    pub fn spec(&self) -> DemodSpec {
        DemodSpec {
            carrier_f: self.carrier_f,
            q: self.q,
            lp_cutoff: self.lp_cutoff.unwrap_or(self.carrier_f / 5.0),
            lp_order: self.lp_order,
        }
    }
}

/// An end-to-end modulation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub duration: f64,
    pub sample_dt: f64,
    pub channels: Vec<ChannelConfig>,
    #[serde(default)]
    pub demodulators: Vec<DemodConfig>,
    /// Defaults to 100 times the fastest carrier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pursuit_rate: Option<f64>,
    /// Start of the window used for metrics; defaults to a quarter of the
    /// duration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transient: Option<f64>,
}

impl ExperimentConfig {
    pub fn pursuit_rate(&self) -> f64 {
        self.pursuit_rate.unwrap_or_else(|| {
            100.0
                * self
                    .channels
                    .iter()
                    .map(|c| c.carrier_f)
                    .fold(0.0, f64::max)
        })
    }

    pub fn transient(&self) -> f64 {
        self.transient.unwrap_or(self.duration / 4.0)
    }

    fn demod_name(&self, i: usize) -> String {
        self.demodulators[i]
            .name
            .clone()
            .unwrap_or_else(|| format!("D{}", i + 1))
    }
}

/// Recovery quality of one demodulator output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemodMetrics {
    pub output: String,
    pub carrier_f: f64,
    /// Channel whose carrier matches, if any.
    pub channel: Option<String>,
    /// Delay (seconds) at which the output best correlates with its channel.
    pub lag: f64,
    /// Pearson correlation of the delayed input of every channel with the
    /// output; `None` for constant inputs.
    pub corr: BTreeMap<String, Option<f64>>,
    /// RMS error of the best affine map from output to the own channel's
    /// input, relative to that input's standard deviation.
    pub nrmse: Option<f64>,
    /// RMS deviation of the output from its one-carrier-period moving mean.
    pub ripple: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelMetrics {
    /// Demodulator used for this channel (the first one tuned to its carrier).
    pub demodulator: Option<String>,
    pub nrmse: Option<f64>,
    pub corr_own: Option<f64>,
    pub corr_other_max: Option<f64>,
    pub ripple: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub transient: f64,
    pub pursuit_rate: f64,
    pub per_channel: BTreeMap<String, ChannelMetrics>,
    pub per_demodulator: Vec<DemodMetrics>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub network: Network,
    pub trace: Trace,
    pub metrics: Metrics,
    channels: Vec<Channel>,
    medium: MediumSignal,
}

impl ExperimentReport {
    /// The trace with logical columns appended: `s_<name>` for each carrier,
    /// `m` for the medium.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let sines: Vec<Vec<f64>> = self
            .channels
            .iter()
            .map(|c| {
                self.trace
                    .difference(&c.sine)
                    .expect("carrier rails present")
            })
            .collect();
        let medium = self
            .trace
            .difference(&self.medium.rails)
            .expect("medium present");
        write!(w, "t")?;
        for s in &self.trace.species {
            write!(w, ",{s}")?;
        }
        for c in &self.channels {
            write!(w, ",s_{}", c.name)?;
        }
        writeln!(w, ",m")?;
        for (i, (t, row)) in self.trace.times.iter().zip(&self.trace.states).enumerate() {
            write!(w, "{t}")?;
            for v in row {
                write!(w, ",{v}")?;
            }
            for s in &sines {
                write!(w, ",{}", s[i])?;
            }
            writeln!(w, ",{}", medium[i])?;
        }
        Ok(())
    }

    pub fn metrics_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.metrics).expect("metrics serialize");
        s.push('\n');
        s
    }

    /// Writes `traces.csv` and `metrics.json` into `dir`, creating it.
    pub fn write_to(&self, dir: &Path) -> Result<(), ModemError> {
        fs::create_dir_all(dir)?;
        let mut f = io::BufWriter::new(fs::File::create(dir.join("traces.csv"))?);
        self.write_csv(&mut f)?;
        f.flush()?;
        fs::write(dir.join("metrics.json"), self.metrics_json())?;
        Ok(())
    }
}

/// Builds the multiplexer and every demodulator, simulates with the channel
/// inputs driven by their waveforms, and scores each demodulator's output.
pub fn run_modem_experiment(
    cfg: &ExperimentConfig,
    tolerances: Tolerances,
) -> Result<ExperimentReport, ModemError> {
    if !(cfg.duration > 0.0 && cfg.duration.is_finite()) {
        return Err(ModemError::Invalid(format!(
            "duration must be positive, got {}",
            cfg.duration
        )));
    }
    if !(cfg.sample_dt > 0.0 && cfg.sample_dt < cfg.duration) {
        return Err(ModemError::Invalid(format!(
            "sample_dt must lie in (0, duration), got {}",
            cfg.sample_dt
        )));
    }
    let transient = cfg.transient();
    if !(transient >= 0.0 && transient < cfg.duration) {
        return Err(ModemError::Invalid(format!(
            "transient must lie in [0, duration), got {transient}"
        )));
    }

    let channels = cfg
        .channels
        .iter()
        .map(|c| Channel::new(&c.name, CarrierSpec::new(c.carrier_f)?))
        .collect::<Result<Vec<_>, _>>()?;
    let medium = MediumSignal::default();
    let rate = cfg.pursuit_rate();
    let mut net = synth_multiplexer(&channels, &medium, rate)?;
    let shared = [
        (medium.rails.plus.as_str(), medium.rails.plus.as_str()),
        (medium.rails.minus.as_str(), medium.rails.minus.as_str()),
    ];
    let mut outputs = Vec::new();
    for (i, d) in cfg.demodulators.iter().enumerate() {
        let name = cfg.demod_name(i);
        if net.contains(&name) {
            return Err(ModemError::Invalid(format!(
                "demodulator output `{name}` clashes"
            )));
        }
        let (demod, _) = synth_demodulator(&d.spec(), &medium, &name)?;
        net = compose(&net, &demod, &shared, &name)?;
        outputs.push(name);
    }

    let mut opts = SimOptions::uniform(cfg.sample_dt).with_tolerances(tolerances);
    for (ch, c) in channels.iter().zip(&cfg.channels) {
        opts = opts.with_drive(Drive::new(ch.input.as_str(), c.waveform.waveform()));
    }
    log::info!(
        "modem experiment: {} species, {} reactions, t_end={}",
        net.species().len(),
        net.reactions().len(),
        cfg.duration
    );
    let trace = simulate(&net, cfg.duration, &opts)?;

    let start = trace.times.partition_point(|&t| t < transient);
    let inputs: Vec<Vec<f64>> = channels
        .iter()
        .map(|c| trace.column(c.input.as_str()).expect("input present"))
        .collect();
    let mut per_demodulator = Vec::new();
    for (i, name) in outputs.iter().enumerate() {
        let spec = cfg.demodulators[i].spec();
        let y = trace.column(name).expect("output present");
        let own = cfg
            .channels
            .iter()
            .position(|c| c.carrier_f == spec.carrier_f);
        let max_lag = ((spec.max_delay() / cfg.sample_dt).round() as usize).min(start);
        let lag = match own {
            Some(k) => best_lag(&inputs[k], &y, start, max_lag),
            None => 0,
        };
        let corr = channels
            .iter()
            .zip(&inputs)
            .map(|(c, u)| (c.name.clone(), lagged_corr(u, &y, start, lag)))
            .collect();
        let nrmse = own.and_then(|k| affine_nrmse(&inputs[k], &y, start, lag));
        let window = ((TAU / spec.carrier_f / cfg.sample_dt).round() as usize).max(1);
        per_demodulator.push(DemodMetrics {
            output: name.clone(),
            carrier_f: spec.carrier_f,
            channel: own.map(|k| cfg.channels[k].name.clone()),
            lag: lag as f64 * cfg.sample_dt,
            corr,
            nrmse,
            ripple: ripple(&y[start..], window),
        });
    }

    let mut per_channel = BTreeMap::new();
    for c in &cfg.channels {
        let d = per_demodulator
            .iter()
            .find(|d| d.channel.as_deref() == Some(c.name.as_str()));
        let m = match d {
            Some(d) => ChannelMetrics {
                demodulator: Some(d.output.clone()),
                nrmse: d.nrmse,
                corr_own: d.corr[&c.name],
                corr_other_max: d
                    .corr
                    .iter()
                    .filter(|(k, _)| **k != c.name)
                    .filter_map(|(_, v)| *v)
                    .reduce(f64::max),
                ripple: Some(d.ripple),
            },
            None => ChannelMetrics {
                demodulator: None,
                nrmse: None,
                corr_own: None,
                corr_other_max: None,
                ripple: None,
            },
        };
        per_channel.insert(c.name.clone(), m);
    }

    Ok(ExperimentReport {
        network: net,
        trace,
        metrics: Metrics {
            transient,
            pursuit_rate: rate,
            per_channel,
            per_demodulator,
        },
        channels,
        medium,
    })
}

/// Pearson correlation of `a` and `b`; `None` if either is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len(), "equal-length series");
    if a.is_empty() {
        return None;
    }
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    // Treat variation at rounding level as constant.
    let tiny = |s: f64, m: f64| s <= (1e-12 * m.abs().max(f64::MIN_POSITIVE)).powi(2) * n;
    if tiny(saa, ma) || tiny(sbb, mb) {
        None
    } else {
        Some(sab / (saa * sbb).sqrt())
    }
}

/// `corr(u[t - lag], y[t])` over samples `t >= start`.
fn lagged_corr(u: &[f64], y: &[f64], start: usize, lag: usize) -> Option<f64> {
    pearson(&u[start - lag..u.len() - lag], &y[start..])
}

fn best_lag(u: &[f64], y: &[f64], start: usize, max_lag: usize) -> usize {
    (0..=max_lag)
        .filter_map(|l| lagged_corr(u, y, start, l).map(|c| (l, c)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(0, |(l, _)| l)
}

fn affine_nrmse(u: &[f64], y: &[f64], start: usize, lag: usize) -> Option<f64> {
    let u = &u[start - lag..u.len() - lag];
    let y = &y[start..];
    let n = u.len() as f64;
    let (mu, my) = (u.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut suy, mut syy, mut suu) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(y) {
        suy += (a - mu) * (b - my);
        syy += (b - my) * (b - my);
        suu += (a - mu) * (a - mu);
    }
    pearson(u, y)?;
    let slope = if syy > 0.0 { suy / syy } else { 0.0 };
    let sq: f64 = u
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = a - (mu + slope * (b - my));
            r * r
        })
        .sum();
    Some((sq / suu).sqrt())
}

/// RMS of `y` minus its centered moving average of `window` samples, over
/// the samples where the full window fits.
pub fn ripple(y: &[f64], window: usize) -> f64 {
    let window = window.max(1);
    if y.len() < window {
        return 0.0;
    }
    let half = window / 2;
    let mut sum: f64 = y[..window].iter().sum();
    let mut sq = 0.0;
    let mut count = 0usize;
    for start in 0..=y.len() - window {
        if start > 0 {
            sum += y[start + window - 1] - y[start - 1];
        }
        let d = y[start + half] - sum / window as f64;
        sq += d * d;
        count += 1;
    }
    (sq / count as f64).sqrt()
}
