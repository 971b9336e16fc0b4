//! Dormand–Prince 5(4) with step-size control and continuous output.

use super::{SimError, Tolerances};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension (Hairer & Wanner, DOPRI5 `contd5`).
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// One accepted step `[t0, t0 + h]` with its interpolation coefficients.
pub(crate) struct Step<'a> {
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    pub y1: &'a [f64],
    cont: &'a [Vec<f64>; 5],
}

impl Step<'_> {
    /// Fourth-order dense output at `t` in `[t0, t1]`.
    pub fn interpolate(&self, t: f64, out: &mut [f64]) {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = self.cont;
        for i in 0..out.len() {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
    }
}

pub(crate) struct Settings {
    pub tol: Tolerances,
    pub max_step: f64,
    pub max_steps: usize,
    /// Clamp negative components to zero after every accepted step.
    pub clamp_negative: bool,
}

pub(crate) struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end`, calling `observe` on every
/// accepted step.
pub(crate) fn integrate<F, O>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    settings: &Settings,
    mut observe: O,
) -> Result<Stats, SimError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(&Step<'_>),
{
    let n = y0.len();
    let Tolerances { rel_tol, abs_tol } = settings.tol;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut y1 = vec![0.0; n];
    let mut cont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
    let mut stats = Stats {
        accepted: 0,
        rejected: 0,
    };

    f(t, &y, &mut k1);
    if n == 0 {
        observe(&Step {
            t0,
            t1: t_end,
            h: t_end - t0,
            y1: &y,
            cont: &cont,
        });
        return Ok(stats);
    }
    let mut h = initial_step(&mut f, t, &y, &k1, t_end - t0, settings, &mut ytmp, &mut k2);
    let mut last_rejected = false;

    while t < t_end {
        if stats.accepted + stats.rejected >= settings.max_steps {
            return Err(SimError::TooManySteps { t });
        }
        let mut last = false;
        if t + h >= t_end || t + 1.01 * h >= t_end {
            h = t_end - t;
            last = true;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(SimError::StepSizeUnderflow { t, h });
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t_end } else { t + h };
        f(t_new, &ytmp, &mut k6);
        for i in 0..n {
            y1[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t_new, &y1, &mut k7);

        let mut err = 0.0;
        for i in 0..n {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = abs_tol + rel_tol * y[i].abs().max(y1[i].abs());
            err += (e / sk) * (e / sk);
        }
        let err = (err / n as f64).sqrt();
        if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite { t });
        }

        if err <= 1.0 {
            for i in 0..n {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let mut clamped = false;
            if settings.clamp_negative {
                for v in y1.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                        clamped = true;
                    }
                }
            }
            observe(&Step {
                t0: t,
                t1: t_new,
                h,
                y1: &y1,
                cont: &cont,
            });
            stats.accepted += 1;
            t = t_new;
            std::mem::swap(&mut y, &mut y1);
            if clamped {
                f(t, &y, &mut k1);
            } else {
                std::mem::swap(&mut k1, &mut k7);
            }
            let mut fac = SAFETY * err.max(1e-10).powf(-0.2);
            fac = fac.clamp(FAC_MIN, if last_rejected { 1.0 } else { FAC_MAX });
            h = (h * fac).min(settings.max_step);
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let fac = (SAFETY * err.powf(-0.2)).max(FAC_MIN);
            h *= fac;
            last_rejected = true;
        }
    }
    Ok(stats)
}

/// Starting step size following Hairer, Nørsett & Wanner (II.4).
#[allow(clippy::too_many_arguments)]
fn initial_step<F>(
    f: &mut F,
    t: f64,
    y: &[f64],
    f0: &[f64],
    span: f64,
    settings: &Settings,
    ytmp: &mut [f64],
    f1: &mut [f64],
) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len() as f64;
    let Tolerances { rel_tol, abs_tol } = settings.tol;
    let sk = |v: f64| abs_tol + rel_tol * v.abs();
    let d0 = (y.iter().map(|v| (v / sk(*v)).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (y
        .iter()
        .zip(f0)
        .map(|(v, d)| (d / sk(*v)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(settings.max_step).min(span);
    for i in 0..y.len() {
        ytmp[i] = y[i] + h0 * f0[i];
    }
    f(t + h0, ytmp, f1);
    let d2 = (y
        .iter()
        .zip(f0.iter().zip(f1.iter()))
        .map(|(v, (a, b))| ((b - a) / sk(*v)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(settings.max_step).min(span)
}
