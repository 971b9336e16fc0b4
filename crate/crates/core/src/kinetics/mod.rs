//! Mass-action semantics: compile a network to its polynomial ODEs and
//! integrate them.

mod integrator;
mod ode;
mod trace;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::Network;

pub use ode::{compile_odes, Monomial, OdeSystem, Polynomial};
pub use trace::Trace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("simulation horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("tolerances must be positive, got rel={rel_tol} abs={abs_tol}")]
    InvalidTolerance { rel_tol: f64, abs_tol: f64 },
    #[error("invalid sampling: {0}")]
    InvalidSampling(String),
    #[error("state has {got} entries, system has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("step size underflow at t={t} (h={h}); system is too stiff")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("non-finite state at t={t}")]
    NonFinite { t: f64 },
    #[error("step budget exhausted at t={t}")]
    TooManySteps { t: f64 },
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("drive for `{0}` would go negative")]
    NegativeDrive(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
        }
    }
}

impl Tolerances {
    /// Largest negative excursion tolerated in a trace.
    pub fn negative_slack(&self) -> f64 {
        10.0 * self.abs_tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sampling {
    /// One sample per accepted integrator step.
    Steps,
    /// `0, dt, 2dt, ...` up to and including the horizon.
    Uniform(f64),
    /// Explicit, strictly increasing sample times within `[0, t_end]`.
    Times(Vec<f64>),
}

/// A prescribed concentration profile `offset + amplitude * sin(freq * t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waveform {
    pub amplitude: f64,
    pub freq: f64,
    pub offset: f64,
    pub phase: f64,
}

impl Waveform {
    pub fn constant(value: f64) -> Self {
        Waveform {
            amplitude: 0.0,
            freq: 0.0,
            offset: value,
            phase: 0.0,
        }
    }

    pub fn sine(amplitude: f64, freq: f64, offset: f64) -> Self {
        Waveform {
            amplitude,
            freq,
            offset,
            phase: 0.0,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        if self.amplitude == 0.0 {
            self.offset
        } else {
            self.offset + self.amplitude * (self.freq * t + self.phase).sin()
        }
    }

    pub fn minimum(&self) -> f64 {
        if self.freq == 0.0 {
            self.value(0.0)
        } else {
            self.offset - self.amplitude.abs()
        }
    }
}

/// Holds a species at a prescribed concentration for the whole run. The
/// species' own reaction terms are ignored, which is exact for species that
/// only act as catalysts.
#[derive(Debug, Clone, PartialEq)]
pub struct Drive {
    pub species: String,
    pub waveform: Waveform,
}

impl Drive {
    pub fn new(species: impl Into<String>, waveform: Waveform) -> Self {
        Drive {
            species: species.into(),
            waveform,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub tolerances: Tolerances,
    pub sampling: Sampling,
    pub drives: Vec<Drive>,
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            tolerances: Tolerances::default(),
            sampling: Sampling::Steps,
            drives: Vec::new(),
            max_step: None,
            max_steps: 20_000_000,
        }
    }
}

impl SimOptions {
    pub fn uniform(dt: f64) -> Self {
        SimOptions {
            sampling: Sampling::Uniform(dt),
            ..Self::default()
        }
    }

    pub fn with_drive(mut self, drive: Drive) -> Self {
        self.drives.push(drive);
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }
}

/// Integrates the mass-action ODEs of `n` from its initial concentrations
/// over `[0, t_end]`.
pub fn simulate(n: &Network, t_end: f64, opts: &SimOptions) -> Result<Trace, SimError> {
    let sys = compile_odes(n);
    simulate_system(&sys, n.initial_concentrations(), t_end, opts)
}

pub fn simulate_system(
    sys: &OdeSystem,
    init: &[f64],
    t_end: f64,
    opts: &SimOptions,
) -> Result<Trace, SimError> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(SimError::InvalidHorizon(t_end));
    }
    let tol = opts.tolerances;
    if !(tol.rel_tol > 0.0 && tol.abs_tol > 0.0) {
        return Err(SimError::InvalidTolerance {
            rel_tol: tol.rel_tol,
            abs_tol: tol.abs_tol,
        });
    }
    if init.len() != sys.dim() {
        return Err(SimError::DimensionMismatch {
            expected: sys.dim(),
            got: init.len(),
        });
    }
    let sample_times = sample_times(&opts.sampling, t_end)?;

    let mut driven: Vec<(usize, Waveform)> = Vec::with_capacity(opts.drives.len());
    for d in &opts.drives {
        let i = sys
            .variables()
            .iter()
            .position(|s| s.as_str() == d.species)
            .ok_or_else(|| SimError::UnknownSpecies(d.species.clone()))?;
        if d.waveform.minimum() < 0.0 {
            return Err(SimError::NegativeDrive(d.species.clone()));
        }
        driven.push((i, d.waveform));
    }
    let apply_drives = |t: f64, y: &mut [f64]| {
        for &(i, w) in &driven {
            y[i] = w.value(t);
        }
    };

    let mut y0 = init.to_vec();
    apply_drives(0.0, &mut y0);

    let mut max_step = opts.max_step.unwrap_or(f64::INFINITY);
    for (_, w) in &driven {
        if w.freq > 0.0 && w.amplitude != 0.0 {
            max_step = max_step.min(2.0 * PI / w.freq / 8.0);
        }
    }
    let settings = integrator::Settings {
        tol,
        max_step,
        max_steps: opts.max_steps,
        clamp_negative: true,
    };

    let mut scratch = vec![0.0; sys.dim()];
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        if driven.is_empty() {
            sys.evaluate_into(y, dy);
        } else {
            scratch.copy_from_slice(y);
            apply_drives(t, &mut scratch);
            sys.evaluate_into(&scratch, dy);
            for &(i, _) in &driven {
                dy[i] = 0.0;
            }
        }
    };

    let mut times = Vec::new();
    let mut states: Vec<Vec<f64>> = Vec::new();
    times.push(0.0);
    states.push(y0.clone());
    let mut next = match &sample_times {
        Some(ts) => usize::from(ts.first() == Some(&0.0)),
        None => 0,
    };
    let mut buf = vec![0.0; sys.dim()];

    integrator::integrate(rhs, 0.0, &y0, t_end, &settings, |step| {
        let t1 = step.t1;
        match &sample_times {
            None => {
                times.push(t1);
                let mut row = step.y1.to_vec();
                apply_drives(t1, &mut row);
                states.push(row);
            }
            Some(ts) => {
                while next < ts.len() && ts[next] <= t1 {
                    let t = ts[next];
                    if t >= t1 {
                        buf.copy_from_slice(step.y1);
                    } else {
                        step.interpolate(t, &mut buf);
                    }
                    apply_drives(t, &mut buf);
                    times.push(t);
                    states.push(buf.clone());
                    next += 1;
                }
            }
        }
    })?;
    if let Some(ts) = &sample_times {
        // the final step ends at exactly t_end, so every sample was visited
        debug_assert_eq!(next, ts.len());
    }

    Ok(Trace {
        species: sys.variables().iter().map(|s| s.to_string()).collect(),
        times,
        states,
        tolerances: tol,
    })
}

fn sample_times(sampling: &Sampling, t_end: f64) -> Result<Option<Vec<f64>>, SimError> {
    match sampling {
        Sampling::Steps => Ok(None),
        Sampling::Uniform(dt) => {
            if !(*dt > 0.0 && dt.is_finite()) {
                return Err(SimError::InvalidSampling(format!(
                    "dt must be positive, got {dt}"
                )));
            }
            let count = (t_end / dt + 1e-9).floor() as usize;
            let mut ts: Vec<f64> = (0..=count)
                .map(|k| k as f64 * dt)
                .filter(|&t| t <= t_end)
                .collect();
            match ts.last_mut() {
                Some(v) if t_end - *v <= 1e-9 * dt => *v = t_end,
                _ => ts.push(t_end),
            }
            Ok(Some(ts))
        }
        Sampling::Times(ts) => {
            if ts.is_empty()
                || ts.windows(2).any(|w| w[1] <= w[0])
                || ts[0] < 0.0
                || *ts.last().unwrap() > t_end
            {
                return Err(SimError::InvalidSampling(
                    "times must be strictly increasing within [0, t_end]".into(),
                ));
            }
            Ok(Some(ts.clone()))
        }
    }
}
