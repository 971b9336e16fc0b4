//! Filter networks synthesized from engineering parameters, and their
//! analytic transfer functions.
//!
//! The first-order low-pass is the pure-pursuit pair `out -> 0` (rate `c`),
//! `in -> in + out` (rate `k`), giving `H(s) = k / (s + c)`. The band-pass
//! realizes `dy/dt = a x - b y - c z`, `dz/dt = y` on dual rails, giving
//! `H(s) = a s / (s^2 + b s + c)`.

use std::f64::consts::FRAC_1_SQRT_2;

use thiserror::Error;

use crate::network::{compose, DualRailSignal, Network, NetworkError, Species};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("invalid filter parameters: {0}")]
    InvalidSpec(String),
    #[error("input and output must be distinct species, got `{0}`")]
    SameSpecies(String),
    #[error("transfer function has a pole at omega={0}")]
    Pole(f64),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

fn positive(name: &str, v: f64) -> Result<f64, FilterError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(FilterError::InvalidSpec(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// `H(s) = gain / (s + cutoff)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderLowPassSpec {
    pub cutoff: f64,
    pub gain: f64,
}

impl FirstOrderLowPassSpec {
    pub fn new(cutoff: f64, gain: f64) -> Result<Self, FilterError> {
        Ok(FirstOrderLowPassSpec {
            cutoff: positive("cutoff", cutoff)?,
            gain: positive("gain", gain)?,
        })
    }

    /// `1/RC` for both rate constants, as in the RC circuit.
    pub fn from_rc(r: f64, c: f64) -> Result<Self, FilterError> {
        let rate = 1.0 / (positive("R", r)? * positive("C", c)?);
        Self::new(rate, rate)
    }

    /// Unity DC gain at the given cutoff.
    pub fn unity(cutoff: f64) -> Result<Self, FilterError> {
        Self::new(cutoff, cutoff)
    }

    pub fn dc_gain(&self) -> f64 {
        self.gain / self.cutoff
    }

    pub fn time_constant(&self) -> f64 {
        1.0 / self.cutoff
    }
}

/// Second-order band-pass `H(s) = a s / (s^2 + b s + c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPassSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BandPassSpec {
    /// From gain `k`, quality `q` and center frequency `w0` (rad/s):
    /// `a = k w0/q`, `b = w0/q`, `c = w0^2`.
    pub fn new(k: f64, q: f64, w0: f64) -> Result<Self, FilterError> {
        let (k, q, w0) = (positive("k", k)?, positive("Q", q)?, positive("w0", w0)?);
        let b = w0 / q;
        Ok(BandPassSpec {
            a: k * b,
            b,
            c: w0 * w0,
        })
    }

    pub fn from_coefficients(a: f64, b: f64, c: f64) -> Result<Self, FilterError> {
        Ok(BandPassSpec {
            a: positive("a", a)?,
            b: positive("b", b)?,
            c: positive("c", c)?,
        })
    }

    pub fn gain(&self) -> f64 {
        self.a / self.b
    }

    pub fn center(&self) -> f64 {
        self.c.sqrt()
    }

    pub fn quality(&self) -> f64 {
        self.center() / self.b
    }

    /// -3 dB width of the pass band.
    pub fn bandwidth(&self) -> f64 {
        self.b
    }

    /// Decay time of the free response envelope.
    pub fn time_constant(&self) -> f64 {
        2.0 / self.b
    }
}

/// Rational function in `s`, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl TransferFunction {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self, FilterError> {
        let degree = |p: &[f64]| p.iter().rposition(|&c| c != 0.0);
        match (degree(&num), degree(&den)) {
            (_, None) => Err(FilterError::InvalidSpec("zero denominator".into())),
            (Some(n), Some(d)) if n > d => Err(FilterError::InvalidSpec(
                "numerator degree exceeds denominator degree".into(),
            )),
            _ => Ok(TransferFunction { num, den }),
        }
    }

    /// `H(j omega)` as `(re, im)`.
    pub fn eval_jw(&self, omega: f64) -> Result<(f64, f64), FilterError> {
        let (nr, ni) = poly_jw(&self.num, omega);
        let (dr, di) = poly_jw(&self.den, omega);
        let mag2 = dr * dr + di * di;
        if mag2 == 0.0 {
            return Err(FilterError::Pole(omega));
        }
        Ok(((nr * dr + ni * di) / mag2, (ni * dr - nr * di) / mag2))
    }

    pub fn magnitude(&self, omega: f64) -> Result<f64, FilterError> {
        let (re, im) = self.eval_jw(omega)?;
        Ok(re.hypot(im))
    }
}

fn poly_jw(coeffs: &[f64], omega: f64) -> (f64, f64) {
    // (j w)^k cycles through 1, j, -1, -j
    let (mut re, mut im, mut p) = (0.0, 0.0, 1.0);
    for (k, &c) in coeffs.iter().enumerate() {
        match k % 4 {
            0 => re += c * p,
            1 => im += c * p,
            2 => re -= c * p,
            _ => im -= c * p,
        }
        p *= omega;
    }
    (re, im)
}

/// Either filter family, for code that handles both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSpec {
    LowPass(FirstOrderLowPassSpec),
    BandPass(BandPassSpec),
}

impl From<FirstOrderLowPassSpec> for FilterSpec {
    fn from(s: FirstOrderLowPassSpec) -> Self {
        FilterSpec::LowPass(s)
    }
}

impl From<BandPassSpec> for FilterSpec {
    fn from(s: BandPassSpec) -> Self {
        FilterSpec::BandPass(s)
    }
}

pub fn analytic_tf(spec: impl Into<FilterSpec>) -> TransferFunction {
    match spec.into() {
        FilterSpec::LowPass(s) => TransferFunction {
            num: vec![s.gain],
            den: vec![s.cutoff, 1.0],
        },
        FilterSpec::BandPass(s) => TransferFunction {
            num: vec![0.0, s.a],
            den: vec![s.c, s.b, 1.0],
        },
    }
}

/// `(20 log10 |H(j omega)|, arg H(j omega))`.
pub fn tf_response(tf: &TransferFunction, omega: f64) -> Result<(f64, f64), FilterError> {
    if !(omega >= 0.0) {
        return Err(FilterError::InvalidSpec(format!(
            "omega must be >= 0, got {omega}"
        )));
    }
    let (re, im) = tf.eval_jw(omega)?;
    Ok((20.0 * re.hypot(im).log10(), im.atan2(re)))
}

/// Gain of `1/sqrt(2)` in dB, the pass-band edge.
pub fn half_power_db() -> f64 {
    20.0 * FRAC_1_SQRT_2.log10()
}

fn distinct(a: &Species, b: &Species) -> Result<(), FilterError> {
    if a == b {
        Err(FilterError::SameSpecies(a.to_string()))
    } else {
        Ok(())
    }
}

/// Pure pursuit with gain: `output ->{c} 0`, `input ->{k} input + output`.
pub fn synth_lowpass(
    spec: &FirstOrderLowPassSpec,
    input: &str,
    output: &str,
) -> Result<Network, FilterError> {
    let (i, o) = (Species::new(input)?, Species::new(output)?);
    distinct(&i, &o)?;
    let mut n = Network::new();
    n.add_species(input, 0.0)?.add_species(output, 0.0)?;
    n.react(&[(output, 1)], &[], spec.cutoff)?;
    n.react(&[(input, 1)], &[(input, 1), (output, 1)], spec.gain)?;
    Ok(n)
}

/// A chain of `order` unity-style first-order stages from `input` to
/// `output`; intermediate stages are named `{output}_s1`, `{output}_s2`, ...
pub fn synth_lowpass_cascade(
    spec: &FirstOrderLowPassSpec,
    order: usize,
    input: &str,
    output: &str,
) -> Result<Network, FilterError> {
    if order == 0 {
        return Err(FilterError::InvalidSpec("order must be at least 1".into()));
    }
    let names: Vec<String> = (1..order)
        .map(|i| format!("{output}_s{i}"))
        .chain(std::iter::once(output.to_string()))
        .collect();
    let mut net = synth_lowpass(spec, input, &names[0])?;
    for w in names.windows(2) {
        let stage = synth_lowpass(spec, &w[0], &w[1])?;
        net = compose(&net, &stage, &[(w[0].as_str(), w[0].as_str())], "stage")?;
    }
    Ok(net)
}

/// Dual-rail low-pass: each input rail drives its output rail at rate `k`,
/// each output rail decays at `c`, and the output rails annihilate.
pub fn synth_lowpass_dualrail(
    spec: &FirstOrderLowPassSpec,
    input: &DualRailSignal,
    output: &DualRailSignal,
) -> Result<Network, FilterError> {
    for a in [&input.plus, &input.minus] {
        for b in [&output.plus, &output.minus] {
            distinct(a, b)?;
        }
    }
    let (xp, xm) = (input.plus.as_str(), input.minus.as_str());
    let (vp, vm) = (output.plus.as_str(), output.minus.as_str());
    let mut n = Network::new();
    for s in [xp, xm, vp, vm] {
        n.add_species(s, 0.0)?;
    }
    n.react(&[(xp, 1)], &[(xp, 1), (vp, 1)], spec.gain)?;
    n.react(&[(xm, 1)], &[(xm, 1), (vm, 1)], spec.gain)?;
    n.react(&[(vp, 1)], &[], spec.cutoff)?;
    n.react(&[(vm, 1)], &[], spec.cutoff)?;
    n.react(&[(vp, 1), (vm, 1)], &[], 1.0)?;
    Ok(n)
}

/// Two dual-rail first-order stages in series; the intermediate rails are
/// `{output.plus}_s1` / `{output.minus}_s1`.
pub fn synth_lowpass2_dualrail(
    spec: &FirstOrderLowPassSpec,
    input: &DualRailSignal,
    output: &DualRailSignal,
) -> Result<Network, FilterError> {
    let mid = DualRailSignal::new(
        Species::new(format!("{}_s1", output.plus))?,
        Species::new(format!("{}_s1", output.minus))?,
    )?;
    let first = synth_lowpass_dualrail(spec, input, &mid)?;
    let second = synth_lowpass_dualrail(spec, &mid, output)?;
    Ok(compose(
        &first,
        &second,
        &[
            (mid.plus.as_str(), mid.plus.as_str()),
            (mid.minus.as_str(), mid.minus.as_str()),
        ],
        "stage2",
    )?)
}

/// Species names used by a band-pass network.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPassPorts {
    pub input: DualRailSignal,
    pub output: DualRailSignal,
    /// Rails holding the running integral of the output.
    pub integrator: DualRailSignal,
    /// Catalysts standing in for `a`, `b`, `c` in the catalytic variant.
    pub catalysts: [Species; 3],
}

impl BandPassPorts {
    /// `X`, `Y`, `Z` rails and catalysts `A`, `B`, `C`.
    pub fn standard() -> Self {
        Self::prefixed("")
    }

    /// Standard names with `prefix` prepended, e.g. `bp1_Xp`.
    pub fn prefixed(prefix: &str) -> Self {
        let rail = |b: &str| DualRailSignal::named(&format!("{prefix}{b}")).expect("valid prefix");
        let sp = |b: &str| Species::new(format!("{prefix}{b}")).expect("valid prefix");
        BandPassPorts {
            input: rail("X"),
            output: rail("Y"),
            integrator: rail("Z"),
            catalysts: [sp("A"), sp("B"), sp("C")],
        }
    }

    pub fn with_input(mut self, input: DualRailSignal) -> Self {
        self.input = input;
        self
    }

    fn validate(&self) -> Result<(), FilterError> {
        let mut all: Vec<&Species> = Vec::new();
        for r in [&self.input, &self.output, &self.integrator] {
            all.push(&r.plus);
            all.push(&r.minus);
        }
        all.extend(self.catalysts.iter());
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                distinct(a, b)?;
            }
        }
        Ok(())
    }

    fn declare_rails(&self, n: &mut Network) -> Result<(), FilterError> {
        for r in [&self.input, &self.output, &self.integrator] {
            n.add_species(r.plus.as_str(), 0.0)?;
            n.add_species(r.minus.as_str(), 0.0)?;
        }
        Ok(())
    }
}

/// Band-pass with rate constants `a`, `b`, `c`:
///
/// ```text
/// Xp ->{a} Xp + Yp      Xm ->{a} Xm + Ym
/// Yp ->{b} 0            Ym ->{b} 0
/// Zp ->{c} Zp + Ym      Zm ->{c} Zm + Yp
/// Yp ->{1} Yp + Zp      Ym ->{1} Ym + Zm
/// Yp + Ym ->{1} 0       Zp + Zm ->{1} 0
/// ```
pub fn synth_bandpass(spec: &BandPassSpec, ports: &BandPassPorts) -> Result<Network, FilterError> {
    ports.validate()?;
    let mut n = Network::new();
    ports.declare_rails(&mut n)?;
    let (xp, xm) = (ports.input.plus.as_str(), ports.input.minus.as_str());
    let (yp, ym) = (ports.output.plus.as_str(), ports.output.minus.as_str());
    let (zp, zm) = (
        ports.integrator.plus.as_str(),
        ports.integrator.minus.as_str(),
    );
    n.react(&[(xp, 1)], &[(xp, 1), (yp, 1)], spec.a)?;
    n.react(&[(xm, 1)], &[(xm, 1), (ym, 1)], spec.a)?;
    n.react(&[(yp, 1)], &[], spec.b)?;
    n.react(&[(ym, 1)], &[], spec.b)?;
    n.react(&[(zp, 1)], &[(zp, 1), (ym, 1)], spec.c)?;
    n.react(&[(zm, 1)], &[(zm, 1), (yp, 1)], spec.c)?;
    n.react(&[(yp, 1)], &[(yp, 1), (zp, 1)], 1.0)?;
    n.react(&[(ym, 1)], &[(ym, 1), (zm, 1)], 1.0)?;
    n.react(&[(yp, 1), (ym, 1)], &[], 1.0)?;
    n.react(&[(zp, 1), (zm, 1)], &[], 1.0)?;
    Ok(n)
}

/// Same filter with `a`, `b`, `c` supplied as concentrations of catalysts
/// `A`, `B`, `C` acting in unit-rate bimolecular reactions. The catalysts are
/// declared first, with initial concentrations `a`, `b`, `c`.
pub fn synth_bandpass_catalytic(
    spec: &BandPassSpec,
    ports: &BandPassPorts,
) -> Result<Network, FilterError> {
    ports.validate()?;
    let mut n = Network::new();
    let [ca, cb, cc] = &ports.catalysts;
    let (ca, cb, cc) = (ca.as_str(), cb.as_str(), cc.as_str());
    n.add_species(ca, spec.a)?
        .add_species(cb, spec.b)?
        .add_species(cc, spec.c)?;
    ports.declare_rails(&mut n)?;
    let (xp, xm) = (ports.input.plus.as_str(), ports.input.minus.as_str());
    let (yp, ym) = (ports.output.plus.as_str(), ports.output.minus.as_str());
    let (zp, zm) = (
        ports.integrator.plus.as_str(),
        ports.integrator.minus.as_str(),
    );
    n.react(&[(ca, 1), (xp, 1)], &[(ca, 1), (xp, 1), (yp, 1)], 1.0)?;
    n.react(&[(ca, 1), (xm, 1)], &[(ca, 1), (xm, 1), (ym, 1)], 1.0)?;
    n.react(&[(cb, 1), (yp, 1)], &[(cb, 1)], 1.0)?;
    n.react(&[(cb, 1), (ym, 1)], &[(cb, 1)], 1.0)?;
    n.react(&[(cc, 1), (zp, 1)], &[(cc, 1), (zp, 1), (ym, 1)], 1.0)?;
    n.react(&[(cc, 1), (zm, 1)], &[(cc, 1), (zm, 1), (yp, 1)], 1.0)?;
    n.react(&[(yp, 1)], &[(yp, 1), (zp, 1)], 1.0)?;
    n.react(&[(ym, 1)], &[(ym, 1), (zm, 1)], 1.0)?;
    n.react(&[(yp, 1), (ym, 1)], &[], 1.0)?;
    n.react(&[(zp, 1), (zm, 1)], &[], 1.0)?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::{compile_odes, Polynomial};
    use std::f64::consts::PI;

    fn slow_bandpass() -> BandPassSpec {
        BandPassSpec::new(1.0, 2.0, 0.009).unwrap()
    }

    #[test]
    fn slow_bandpass_coefficients() {
        let s = slow_bandpass();
        assert_eq!(s.a, 0.0045);
        assert_eq!(s.b, 0.0045);
        // 0.009^2 rounds one ulp below the literal 0.000081
        assert_eq!(s.c, 0.009 * 0.009);
        assert!((s.c - 0.000081).abs() <= f64::EPSILON * 0.000081);
        assert!((s.center() - 0.009).abs() < 1e-15);
        assert!((s.quality() - 2.0).abs() < 1e-12);
        assert_eq!(s.gain(), 1.0);
    }

    #[test]
    fn analytic_coefficients() {
        let lp = analytic_tf(FirstOrderLowPassSpec::new(1.0, 1.0).unwrap());
        assert_eq!(lp.num, vec![1.0]);
        assert_eq!(lp.den, vec![1.0, 1.0]);
        let bp = analytic_tf(slow_bandpass());
        assert_eq!(bp.num, vec![0.0, 0.0045]);
        assert_eq!(bp.den, vec![slow_bandpass().c, 0.0045, 1.0]);
        assert_eq!(bp.den[2], 1.0);
    }

    #[test]
    fn responses() {
        let lp = analytic_tf(FirstOrderLowPassSpec::new(1.0, 1.0).unwrap());
        let (g, p) = tf_response(&lp, 1.0).unwrap();
        assert!((g - (-3.0103)).abs() < 1e-4);
        assert!((p + PI / 4.0).abs() < 1e-12);
        let lp = analytic_tf(FirstOrderLowPassSpec::new(2.0, 3.0).unwrap());
        let (g, p) = tf_response(&lp, 0.0).unwrap();
        assert!((g - 20.0 * 1.5f64.log10()).abs() < 1e-12);
        assert_eq!(p, 0.0);

        let bp = analytic_tf(BandPassSpec::new(2.0, 2.0, 0.009).unwrap());
        let (g, p) = tf_response(&bp, 0.009).unwrap();
        assert!((g - 20.0 * 2.0f64.log10()).abs() < 1e-9);
        assert!(p.abs() < 1e-9);

        // |H(j 2 w0)| = a w / sqrt((c - w^2)^2 + (b w)^2)
        let s = slow_bandpass();
        let w = 0.018;
        let expected = s.a * w / ((s.c - w * w).powi(2) + (s.b * w).powi(2)).sqrt();
        assert!((expected - 0.316228).abs() < 1e-6);
        let mag = analytic_tf(s).magnitude(w).unwrap();
        assert!((mag - expected).abs() < 1e-12);
        let (g, _) = tf_response(&analytic_tf(s), w).unwrap();
        assert!((g + 10.0).abs() < 0.01);
    }

    #[test]
    fn pole_is_an_error() {
        let tf = TransferFunction::new(vec![1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(tf_response(&tf, 0.0), Err(FilterError::Pole(0.0)));
        assert!(TransferFunction::new(vec![1.0], vec![0.0]).is_err());
        assert!(TransferFunction::new(vec![0.0, 0.0, 1.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn lowpass_is_crn1_for_unit_rc() {
        let n = synth_lowpass(
            &FirstOrderLowPassSpec::from_rc(1.0, 1.0).unwrap(),
            "Vin",
            "Vout",
        )
        .unwrap();
        let text = crate::dsl::serialize_network(&n);
        assert!(text.contains("Vout ->{1} 0\nVin ->{1} Vin + Vout\n"));
        assert!(n.is_only_catalytic("Vin"));
        assert!(synth_lowpass(&FirstOrderLowPassSpec::new(1.0, 1.0).unwrap(), "V", "V").is_err());
        assert!(FirstOrderLowPassSpec::new(0.0, 1.0).is_err());
        assert_eq!(FirstOrderLowPassSpec::new(0.1, 0.1).unwrap().dc_gain(), 1.0);
    }

    #[test]
    fn dualrail_lowpass_difference_dynamics() {
        let spec = FirstOrderLowPassSpec::new(0.5, 2.0).unwrap();
        let x = DualRailSignal::named("X").unwrap();
        let v = DualRailSignal::named("V").unwrap();
        let sys = compile_odes(&synth_lowpass_dualrail(&spec, &x, &v).unwrap());
        let diff = sys.rhs_of("Vp").unwrap().to_string();
        assert_eq!(diff, "-Vm*Vp - 0.5*Vp + 2*Xp");
        assert_eq!(
            sys.rhs_of("Vm").unwrap().to_string(),
            "-0.5*Vm - Vm*Vp + 2*Xm"
        );
    }

    #[test]
    fn bandpass_structure() {
        let s = slow_bandpass();
        let n = synth_bandpass(&s, &BandPassPorts::standard()).unwrap();
        assert_eq!(n.reactions().len(), 10);
        assert!(n.is_only_catalytic("Xp") && n.is_only_catalytic("Xm"));
        let sys = compile_odes(&n);
        let yp = sys.rhs_of("Yp").unwrap();
        let ym = sys.rhs_of("Ym").unwrap();
        // dYp/dt - dYm/dt = a (xp - xm) - b (yp - ym) - c (zp - zm)
        let expect_yp = Polynomial::from_terms(&[
            (s.a, &[("Xp", 1)][..]),
            (-s.b, &[("Yp", 1)][..]),
            (s.c, &[("Zm", 1)][..]),
            (-1.0, &[("Ym", 1), ("Yp", 1)][..]),
        ]);
        assert_eq!(yp, &expect_yp);
        let expect_ym = Polynomial::from_terms(&[
            (s.a, &[("Xm", 1)][..]),
            (-s.b, &[("Ym", 1)][..]),
            (s.c, &[("Zp", 1)][..]),
            (-1.0, &[("Ym", 1), ("Yp", 1)][..]),
        ]);
        assert_eq!(ym, &expect_ym);
        assert_eq!(
            sys.rhs_of("Zp").unwrap(),
            &Polynomial::from_terms(&[
                (1.0, &[("Yp", 1)][..]),
                (-1.0, &[("Zm", 1), ("Zp", 1)][..])
            ])
        );
    }

    #[test]
    fn catalytic_variant_matches_after_substitution() {
        let s = slow_bandpass();
        let ports = BandPassPorts::standard();
        let cat = synth_bandpass_catalytic(&s, &ports).unwrap();
        assert_eq!(cat.init_of("A"), Some(0.0045));
        assert_eq!(cat.init_of("B"), Some(0.0045));
        assert_eq!(cat.init_of("C"), Some(s.c));
        for c in ["A", "B", "C"] {
            assert!(cat.is_only_catalytic(c));
        }
        let substituted = compile_odes(&cat).substitute(&[("A", s.a), ("B", s.b), ("C", s.c)]);
        assert_eq!(
            substituted,
            compile_odes(&synth_bandpass(&s, &ports).unwrap())
        );
    }

    #[test]
    fn cascade_names_and_order() {
        let spec = FirstOrderLowPassSpec::unity(0.02).unwrap();
        let n = synth_lowpass_cascade(&spec, 2, "Yp", "Out").unwrap();
        let names: Vec<&str> = n.species().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["Yp", "Out_s1", "Out"]);
        assert_eq!(n.reactions().len(), 4);
        assert!(synth_lowpass_cascade(&spec, 0, "Yp", "Out").is_err());
        let one = synth_lowpass_cascade(&spec, 1, "Yp", "Out").unwrap();
        assert_eq!(one, synth_lowpass(&spec, "Yp", "Out").unwrap());
    }

    #[test]
    fn ports_must_be_distinct() {
        let ports = BandPassPorts::standard().with_input(DualRailSignal::named("Y").unwrap());
        assert!(matches!(
            synth_bandpass(&slow_bandpass(), &ports),
            Err(FilterError::SameSpecies(_))
        ));
    }
}
