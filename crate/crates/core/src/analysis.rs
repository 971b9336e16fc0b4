//! Empirical frequency-domain measurements on simulated networks.
//!
//! A response point is measured by driving the input with a sinusoid, letting
//! the transient die out, and projecting the output onto `sin(wt)` and
//! `cos(wt)` by least squares.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::io::{self, Write};

use thiserror::Error;

use crate::exec::Execution;
use crate::filters::{
    half_power_db, synth_bandpass_catalytic, BandPassPorts, BandPassSpec, FilterError,
};
use crate::kinetics::{
    simulate, Drive, Sampling, SimError, SimOptions, Tolerances, Trace, Waveform,
};
use crate::network::{compose, DualRailSignal, Network, NetworkError, Species};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),
    #[error("amplitude must be positive and finite, got {0}")]
    InvalidAmplitude(f64),
    #[error("output is not a steady sinusoid at omega={omega} (relative residual {residual:.3})")]
    NonPeriodic { omega: f64, residual: f64 },
    #[error("no measurable output at omega={0}")]
    NoResponse(f64),
    #[error("found {0} zero crossings, need at least 4")]
    TooFewCrossings(usize),
    #[error("frequency grid is empty")]
    EmptyGrid,
    #[error("invalid band: {0}")]
    InvalidBand(String),
    #[error("gain never crosses the half-power level within [{lo}, {hi}]")]
    NoBandEdge { lo: f64, hi: f64 },
}

/// One point of a Bode plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodePoint {
    pub omega: f64,
    pub gain_db: f64,
    /// Radians in `(-pi, pi]`.
    pub phase: f64,
}

/// Where a signal enters or leaves a network.
#[derive(Debug, Clone, PartialEq)]
pub enum Port {
    /// A nonnegative concentration.
    Single(Species),
    /// The difference of two rails.
    Dual(DualRailSignal),
}

impl Port {
    pub fn single(name: &str) -> Result<Self, NetworkError> {
        Ok(Port::Single(Species::new(name)?))
    }

    /// Rails `{base}p` and `{base}m`.
    pub fn dual(base: &str) -> Result<Self, NetworkError> {
        Ok(Port::Dual(DualRailSignal::named(base)?))
    }

    fn check(&self, n: &Network) -> Result<(), AnalysisError> {
        let names: Vec<&Species> = match self {
            Port::Single(s) => vec![s],
            Port::Dual(r) => vec![&r.plus, &r.minus],
        };
        for s in names {
            if !n.contains(s.as_str()) {
                return Err(AnalysisError::UnknownSpecies(s.to_string()));
            }
        }
        Ok(())
    }

    /// Drives that hold the port at `amplitude * sin(omega t)`; a single rail
    /// is biased by `amplitude` to stay nonnegative.
    fn drives(&self, amplitude: f64, omega: f64) -> Vec<Drive> {
        match self {
            Port::Single(s) => vec![Drive::new(
                s.as_str(),
                Waveform::sine(amplitude, omega, amplitude),
            )],
            Port::Dual(r) => {
                let half = amplitude / 2.0;
                vec![
                    Drive::new(r.plus.as_str(), Waveform::sine(half, omega, half)),
                    Drive::new(r.minus.as_str(), Waveform::sine(-half, omega, half)),
                ]
            }
        }
    }

    /// The port's logical value at every sample of `trace`.
    pub fn read(&self, trace: &Trace) -> Result<Vec<f64>, AnalysisError> {
        match self {
            Port::Single(s) => trace
                .column(s.as_str())
                .ok_or_else(|| AnalysisError::UnknownSpecies(s.to_string())),
            Port::Dual(r) => trace
                .difference(r)
                .ok_or_else(|| AnalysisError::UnknownSpecies(r.plus.to_string())),
        }
    }
}

/// Knobs for [`measure_response`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseConfig {
    /// Peak amplitude of the input sinusoid.
    pub amplitude: f64,
    /// Slowest time constant of the network under test, used to size the
    /// transient discard (`max(10 periods, 10 settle_time)`).
    pub settle_time: f64,
    pub samples_per_period: usize,
    /// Largest tolerated RMS fit residual relative to the fitted amplitude.
    pub max_residual: f64,
    pub tolerances: Tolerances,
}

impl Default for ResponseConfig {
    fn default() -> Self {
        ResponseConfig {
            amplitude: 1.0,
            settle_time: 0.0,
            samples_per_period: 64,
            max_residual: 0.05,
            tolerances: Tolerances::default(),
        }
    }
}

impl ResponseConfig {
    pub fn with_settle_time(mut self, settle_time: f64) -> Self {
        self.settle_time = settle_time;
        self
    }
}

/// Least-squares fit `y ~ offset + amplitude * sin(omega t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineFit {
    pub amplitude: f64,
    /// Radians in `(-pi, pi]`.
    pub phase: f64,
    pub offset: f64,
    /// RMS of the fit residual.
    pub residual: f64,
}

/// Projects `values` onto `{1, sin(omega t), cos(omega t)}`.
pub fn fit_sinusoid(times: &[f64], values: &[f64], omega: f64) -> SineFit {
    assert_eq!(times.len(), values.len(), "one value per sample time");
    // Normal equations of the 3-parameter linear model.
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (&t, &y) in times.iter().zip(values) {
        let basis = [1.0, (omega * t).sin(), (omega * t).cos()];
        for i in 0..3 {
            rhs[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let [c, a, b] = solve3(m, rhs);
    let mut sq = 0.0;
    for (&t, &y) in times.iter().zip(values) {
        let r = y - (c + a * (omega * t).sin() + b * (omega * t).cos());
        sq += r * r;
    }
    SineFit {
        amplitude: a.hypot(b),
        phase: wrap_phase(b.atan2(a)),
        offset: c,
        residual: (sq / times.len().max(1) as f64).sqrt(),
    }
}

fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty range");
        m.swap(col, pivot);
        v.swap(col, pivot);
        let p = m[col][col];
        if p == 0.0 {
            return [f64::NAN; 3];
        }
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (offset, row) in rest.iter_mut().enumerate() {
            let f = row[col] / p;
            for (a, b) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *a -= f * b;
            }
            v[col + 1 + offset] -= f * v[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (v[row] - s) / m[row][row];
    }
    x
}

fn wrap_phase(p: f64) -> f64 {
    let mut p = p % TAU;
    if p > PI {
        p -= TAU;
    } else if p <= -PI {
        p += TAU;
    }
    p
}

/// Gain and phase from `input` to `output` at angular frequency `omega`.
pub fn measure_response(
    n: &Network,
    input: &Port,
    output: &Port,
    omega: f64,
    cfg: &ResponseConfig,
) -> Result<BodePoint, AnalysisError> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(AnalysisError::InvalidFrequency(omega));
    }
    if !(cfg.amplitude > 0.0 && cfg.amplitude.is_finite()) {
        return Err(AnalysisError::InvalidAmplitude(cfg.amplitude));
    }
    input.check(n)?;
    output.check(n)?;

    let period = TAU / omega;
    let settle = (10.0 * period).max(10.0 * cfg.settle_time);
    let periods = (settle / period).ceil();
    let t_start = periods * period;
    let t_end = 2.0 * t_start;
    let spp = cfg.samples_per_period.max(8);
    let count = periods as usize * spp;
    let times: Vec<f64> = (0..=count)
        .map(|i| (t_start + (t_end - t_start) * i as f64 / count as f64).min(t_end))
        .collect();

    let opts = SimOptions {
        tolerances: cfg.tolerances,
        sampling: Sampling::Times(times),
        drives: input.drives(cfg.amplitude, omega),
        ..SimOptions::default()
    };
    let trace = simulate(n, t_end, &opts)?;
    // The trace also holds t = 0; drop it.
    let y = &output.read(&trace)?[1..];
    let fit = fit_sinusoid(&trace.times[1..], y, omega);
    if !(fit.amplitude > 1e-12 * cfg.amplitude) {
        return Err(AnalysisError::NoResponse(omega));
    }
    let residual = fit.residual / fit.amplitude;
    if residual > cfg.max_residual {
        return Err(AnalysisError::NonPeriodic { omega, residual });
    }
    Ok(BodePoint {
        omega,
        gain_db: 20.0 * (fit.amplitude / cfg.amplitude).log10(),
        phase: fit.phase,
    })
}

/// Result of [`bode_sweep`]: successful points sorted by frequency, and the
/// frequencies that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub points: Vec<BodePoint>,
    pub failures: Vec<(f64, AnalysisError)>,
}

/// [`measure_response`] at every grid frequency. Points are independent and
/// run concurrently under [`Execution::Parallel`].
pub fn bode_sweep(
    n: &Network,
    input: &Port,
    output: &Port,
    grid: &[f64],
    cfg: &ResponseConfig,
    exec: Execution,
) -> Result<Sweep, AnalysisError> {
    if grid.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    let results = exec.map(grid, |&w| measure_response(n, input, output, w, cfg));
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (&w, r) in grid.iter().zip(results) {
        match r {
            Ok(p) => points.push(p),
            Err(e) => {
                log::warn!("bode point at omega={w} failed: {e}");
                failures.push((w, e));
            }
        }
    }
    points.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    Ok(Sweep { points, failures })
}

/// `count` logarithmically spaced frequencies from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| match i {
                    0 => lo,
                    i if i == count - 1 => hi,
                    i => (a + (b - a) * i as f64 / (count - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

/// Measured half-power edges `(low, high)` around `center`: the frequencies
/// where the gain falls 3.01 dB below its value at `center`, located by
/// bisection in `log omega` within a factor of 8 either side.
pub fn measure_bandwidth(
    n: &Network,
    input: &Port,
    output: &Port,
    center: f64,
    cfg: &ResponseConfig,
) -> Result<(f64, f64), AnalysisError> {
    let peak = measure_response(n, input, output, center, cfg)?.gain_db;
    let target = peak + half_power_db();
    let gain = |w: f64| measure_response(n, input, output, w, cfg).map(|p| p.gain_db - target);
    let edge = |inside: f64, outside: f64| -> Result<f64, AnalysisError> {
        if gain(outside)? > 0.0 {
            return Err(AnalysisError::NoBandEdge {
                lo: inside.min(outside),
                hi: inside.max(outside),
            });
        }
        let (mut a, mut b) = (inside.ln(), outside.ln());
        while (a - b).abs() > 1e-5 {
            let mid = 0.5 * (a + b);
            if gain(mid.exp())? > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok((0.5 * (a + b)).exp())
    };
    Ok((edge(center, center / 8.0)?, edge(center, center * 8.0)?))
}

/// Dominant angular frequency of a sampled signal from the spacing of its
/// upward zero crossings, after removing the mean. A small hysteresis band
/// keeps numerical noise from registering as crossings.
pub fn estimate_frequency(times: &[f64], values: &[f64]) -> Result<f64, AnalysisError> {
    assert_eq!(times.len(), values.len(), "one value per sample time");
    if values.is_empty() {
        return Err(AnalysisError::TooFewCrossings(0));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = hi - lo;
    if !(range > 1e-9 * mean.abs().max(1e-12)) {
        return Err(AnalysisError::TooFewCrossings(0));
    }
    let band = 0.01 * range;

    let mut crossings = 0usize;
    let mut upward: Vec<f64> = Vec::new();
    // +1 above the band, -1 below it; 0 before the signal has left the band.
    let mut state = 0i8;
    let mut last_below: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        let d = v - mean;
        if d < -band {
            if state == 1 {
                crossings += 1;
            }
            state = -1;
            last_below = Some(i);
        } else if d > band {
            if state == -1 {
                crossings += 1;
                // Interpolate the zero between the last sample at or below
                // zero and the next one above it.
                let start = last_below.expect("state -1 implies a sample below");
                let j = (start..i)
                    .rev()
                    .find(|&j| values[j] - mean <= 0.0)
                    .unwrap_or(start);
                let (t0, t1) = (times[j], times[j + 1]);
                let (y0, y1) = (values[j] - mean, values[j + 1] - mean);
                upward.push(if y1 == y0 {
                    t0
                } else {
                    t0 + (t1 - t0) * (-y0) / (y1 - y0)
                });
            }
            state = 1;
        }
    }
    if crossings < 4 || upward.len() < 2 {
        return Err(AnalysisError::TooFewCrossings(crossings));
    }
    let span = upward[upward.len() - 1] - upward[0];
    Ok(TAU * (upward.len() - 1) as f64 / span)
}

/// [`estimate_frequency`] on one port of a trace.
pub fn estimate_trace_frequency(trace: &Trace, port: &Port) -> Result<f64, AnalysisError> {
    estimate_frequency(&trace.times, &port.read(trace)?)
}

/// A frequency band with a floor below which a signal counts as silent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSpec {
    pub low: f64,
    pub high: f64,
    /// Level of the watched signal's AC component, relative to its peak
    /// concentration, below which it is considered not to oscillate.
    pub stopband_db: f64,
}

impl BandSpec {
    pub fn new(low: f64, high: f64, stopband_db: f64) -> Result<Self, AnalysisError> {
        if !(low > 0.0 && high > low && high.is_finite()) {
            return Err(AnalysisError::InvalidBand(format!(
                "need 0 < low < high, got [{low}, {high}]"
            )));
        }
        if !(stopband_db < 0.0) {
            return Err(AnalysisError::InvalidBand(format!(
                "stopband_db must be negative, got {stopband_db}"
            )));
        }
        Ok(BandSpec {
            low,
            high,
            stopband_db,
        })
    }

    pub fn center(&self) -> f64 {
        (self.low * self.high).sqrt()
    }

    /// Band-pass whose -3 dB width is `high - low`, centered geometrically.
    pub fn filter(&self) -> Result<BandPassSpec, FilterError> {
        let w0 = self.center();
        BandPassSpec::new(1.0, w0 / (self.high - self.low), w0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    InBand,
    /// Oscillating outside the band, at the estimated frequency.
    OutOfBand(f64),
    NoOscillation,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::InBand => "in_band",
            Verdict::OutOfBand(_) => "out_of_band",
            Verdict::NoOscillation => "no_oscillation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub verdict: Verdict,
    /// Energy of the band-pass output relative to the watched signal's AC
    /// energy over the second half of the window.
    pub passband_ratio_db: f64,
    /// RMS of the watched signal's AC component relative to its peak.
    pub ac_level_db: f64,
    /// The monitored network, for inspection.
    pub network: Network,
    pub ports: BandPassPorts,
}

/// Attaches a catalytic band-pass for `band` that reads `watched` as a single
/// rail. The watched species only ever appears as a catalyst in the added
/// reactions, so its own dynamics are untouched.
pub fn attach_monitor(
    n: &Network,
    watched: &str,
    band: &BandSpec,
) -> Result<(Network, BandPassPorts), AnalysisError> {
    let init = n
        .init_of(watched)
        .ok_or_else(|| AnalysisError::UnknownSpecies(watched.to_string()))?;
    let prefix = (1..)
        .map(|i| {
            if i == 1 {
                "mon_".to_string()
            } else {
                format!("mon{i}_")
            }
        })
        .find(|p| {
            !n.species()
                .iter()
                .any(|s| s.as_str().starts_with(p.as_str()))
        })
        .expect("unbounded prefix search");
    let base = BandPassPorts::prefixed(&prefix);
    let input = DualRailSignal::new(Species::new(watched)?, base.input.minus.clone())?;
    let ports = base.with_input(input);
    let mut monitor = synth_bandpass_catalytic(&band.filter()?, &ports)?;
    monitor.set_init(watched, init)?;
    let joined = compose(n, &monitor, &[(watched, watched)], &prefix)?;
    Ok((joined, ports))
}

/// Checks whether `watched` oscillates within `band` over a run of length
/// `window` seconds.
///
/// The verdict is `no_oscillation` when the watched signal's AC level falls
/// below `band.stopband_db`; otherwise `in_band` when the monitor passes at
/// least half of the watched signal's AC energy, and `out_of_band` with the
/// estimated frequency when it does not.
pub fn band_monitor(
    n: &Network,
    watched: &str,
    band: &BandSpec,
    window: f64,
    tolerances: Tolerances,
) -> Result<MonitorReport, AnalysisError> {
    let (joined, ports) = attach_monitor(n, watched, band)?;
    let dt = TAU / band.high / 32.0;
    let opts = SimOptions::uniform(dt.min(window / 256.0)).with_tolerances(tolerances);
    let trace = simulate(&joined, window, &opts)?;

    let half = trace.len() / 2;
    let w = &trace.column(watched).expect("watched species is present")[half..];
    let y = &trace
        .difference(&ports.output)
        .expect("monitor output is present")[half..];
    let peak = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ac_in = variance(w);
    let ac_level_db = if peak > 0.0 {
        10.0 * (ac_in / (peak * peak)).log10()
    } else {
        f64::NEG_INFINITY
    };
    let passband_ratio_db = 10.0 * (variance(y) / ac_in).log10();

    let verdict = if !(ac_level_db >= band.stopband_db) {
        Verdict::NoOscillation
    } else if passband_ratio_db >= half_power_db() {
        Verdict::InBand
    } else {
        match estimate_frequency(&trace.times[half..], w) {
            Ok(f) => Verdict::OutOfBand(f),
            Err(AnalysisError::TooFewCrossings(_)) => Verdict::NoOscillation,
            Err(e) => return Err(e),
        }
    };
    Ok(MonitorReport {
        verdict,
        passband_ratio_db,
        ac_level_db,
        network: joined,
        ports,
    })
}

fn variance(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64
}

/// Bode data as CSV with header `omega,gain_db,phase_rad`.
pub fn write_bode_csv<W: Write>(points: &[BodePoint], mut w: W) -> io::Result<()> {
    writeln!(w, "omega,gain_db,phase_rad")?;
    for p in points {
        writeln!(w, "{},{},{}", p.omega, p.gain_db, p.phase)?;
    }
    Ok(())
}

pub fn bode_csv(points: &[BodePoint]) -> String {
    let mut buf = Vec::new();
    write_bode_csv(points, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// A self-contained SVG with gain (top) and phase (bottom) against log omega.
pub fn bode_svg(points: &[BodePoint]) -> String {
    const W: f64 = 640.0;
    const PANEL: f64 = 240.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 20.0;
    const GAP: f64 = 50.0;
    let plot_w = W - LEFT - RIGHT;
    let height = TOP + 2.0 * PANEL + GAP + 40.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{height}" viewBox="0 0 {W} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if points.is_empty() {
        let _ = writeln!(s, r#"<text x="{LEFT}" y="{TOP}">no data</text></svg>"#);
        return s;
    }

    let lx: Vec<f64> = points.iter().map(|p| p.omega.log10()).collect();
    let (x0, x1) = nice_range(lx[0], lx[lx.len() - 1], 1.0);
    let gains: Vec<f64> = points.iter().map(|p| p.gain_db).collect();
    let (gmin, gmax) = gains
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &g| {
            (a.min(g), b.max(g))
        });
    let (g0, g1) = nice_range(gmin, gmax, 10.0);
    let px = |v: f64| LEFT + (v - x0) / (x1 - x0) * plot_w;

    let panels = [
        ("gain (dB)", TOP, g0, g1, 10.0, gains),
        (
            "phase (rad)",
            TOP + PANEL + GAP,
            -PI,
            PI,
            PI / 2.0,
            points.iter().map(|p| p.phase).collect(),
        ),
    ];
    for (label, top, y0, y1, step, ys) in panels {
        let py = |v: f64| top + PANEL - (v - y0) / (y1 - y0) * PANEL;
        let _ = writeln!(
            s,
            r##"<rect x="{LEFT}" y="{top}" width="{plot_w}" height="{PANEL}" fill="none" stroke="#444"/>"##
        );
        let mut d = x0.ceil();
        while d <= x1 + 1e-9 {
            let x = px(d);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{top}" x2="{x:.2}" y2="{}" stroke="#ddd"/><text x="{x:.2}" y="{}" text-anchor="middle">1e{d}</text>"##,
                top + PANEL,
                top + PANEL + 14.0
            );
            d += 1.0;
        }
        let mut v = (y0 / step).ceil() * step;
        while v <= y1 + 1e-9 {
            let y = py(v);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{v:.2}</text>"##,
                LEFT + plot_w,
                LEFT - 6.0,
                y + 4.0
            );
            v += step;
        }
        let path: Vec<String> = lx
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#1f5fbf" stroke-width="1.5"/>"##,
            path.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">{label}</text>"#,
            top + PANEL / 2.0,
            top + PANEL / 2.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">omega (rad/s)</text>"#,
        LEFT + plot_w / 2.0,
        height - 8.0
    );
    s.push_str("</svg>\n");
    s
}

fn nice_range(lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let (a, b) = ((lo / step).floor() * step, (hi / step).ceil() * step);
    if a == b {
        (a - step, b + step)
    } else {
        (a, b)
    }
}
