use std::f64::consts::TAU;

use crnsig::analysis::{estimate_trace_frequency, Port};
use crnsig::kinetics::{compile_odes, simulate, Drive, SimOptions, Tolerances, Waveform};
use crnsig::modem::{
    channel_oscillator, retune, run_modem_experiment, synth_modulator, synth_multiplexer,
    CarrierSpec, Channel, ChannelConfig, DemodConfig, ExperimentConfig, MediumSignal, ModemError,
    WaveKind, WaveformConfig,
};
use crnsig::{compose, parse_network};

fn channel(name: &str, f: f64) -> Channel {
    Channel::new(name, CarrierSpec::new(f).unwrap()).unwrap()
}

fn sine(offset: f64, amplitude: f64, freq: f64) -> WaveformConfig {
    WaveformConfig {
        kind: WaveKind::Sine,
        amplitude,
        freq,
        offset,
    }
}

#[test]
fn retuned_oscillator_runs_at_the_new_frequency() {
    let ch = channel("a", 0.1);
    let n = retune(&channel_oscillator(&ch).unwrap(), "F_a", 0.2).unwrap();
    let tr = simulate(&n, 20.0 * TAU / 0.2, &SimOptions::uniform(0.5)).unwrap();
    let est = estimate_trace_frequency(&tr, &Port::Dual(ch.sine.clone())).unwrap();
    assert!((est - 0.2).abs() < 1e-3 * 0.2, "{est}");
}

#[test]
fn zero_frequency_freezes_the_oscillator() {
    let ch = channel("a", 0.1);
    let n = retune(&channel_oscillator(&ch).unwrap(), "F_a", 0.0).unwrap();
    let tr = simulate(&n, 100.0, &SimOptions::uniform(10.0)).unwrap();
    let (s, c) = (
        tr.difference(&ch.sine).unwrap(),
        tr.difference(&ch.cosine).unwrap(),
    );
    assert!(s.iter().all(|v| v.abs() < 1e-12));
    assert!(c.iter().all(|v| (v - 1.0).abs() < 1e-12));
    assert!(retune(&n, "F_a", -1.0).is_err());
}

#[test]
fn medium_follows_the_modulated_carrier() {
    let ch = channel("a", 0.5);
    let medium = MediumSignal::default();
    let n = synth_modulator(&ch, &medium, 50.0).unwrap();
    for level in [1.0, 0.0] {
        let opts = SimOptions::uniform(0.05)
            .with_drive(Drive::new(ch.input.as_str(), Waveform::constant(level)));
        let tr = simulate(&n, 40.0, &opts).unwrap();
        let (s, m) = (
            tr.difference(&ch.sine).unwrap(),
            tr.difference(&medium.rails).unwrap(),
        );
        let start = tr.len() / 2;
        let worst = (start..tr.len())
            .map(|i| (m[i] - level * s[i]).abs())
            .fold(0.0, f64::max);
        // Pure pursuit lags a sinusoid by about f/r relative error.
        assert!(worst < 0.02, "u={level}: {worst}");
    }
}

#[test]
fn modulator_is_oscillator_plus_multiplier() {
    let ch = channel("a", 0.3);
    let osc = channel_oscillator(&ch).unwrap();
    let multiplier = parse_network(
        "Mp ->{7} 0\nMm ->{7} 0\nU_a + S_ap ->{7} U_a + S_ap + Mp\nU_a + S_am ->{7} U_a + S_am + Mm",
    )
    .unwrap();
    let shared = [("S_ap", "S_ap"), ("S_am", "S_am")];
    let built = compose(&osc, &multiplier, &shared, "mul").unwrap();
    let direct = synth_modulator(&ch, &MediumSignal::default(), 7.0).unwrap();
    let (a, b) = (compile_odes(&built), compile_odes(&direct));
    assert_eq!(a.dim(), b.dim());
    for v in b.variables() {
        assert_eq!(a.rhs_of(v.as_str()), b.rhs_of(v.as_str()), "d{v}/dt");
    }
}

#[test]
fn multiplexed_medium_is_the_sum_of_single_channels() {
    let (a, b) = (channel("a", 0.1), channel("b", 0.25));
    let medium = MediumSignal::default();
    let (ua, ub) = (
        Waveform::sine(0.3, 0.01, 1.0),
        Waveform::sine(0.5, 0.02, 0.8),
    );
    let run = |chs: &[Channel], drives: &[(&Channel, Waveform)]| {
        let n = synth_multiplexer(chs, &medium, 25.0).unwrap();
        let mut opts = SimOptions::uniform(0.5);
        for (c, w) in drives {
            opts = opts.with_drive(Drive::new(c.input.as_str(), *w));
        }
        simulate(&n, 300.0, &opts)
            .unwrap()
            .difference(&medium.rails)
            .unwrap()
    };
    let both = run(&[a.clone(), b.clone()], &[(&a, ua), (&b, ub)]);
    let only_a = run(std::slice::from_ref(&a), &[(&a, ua)]);
    let only_b = run(std::slice::from_ref(&b), &[(&b, ub)]);
    let worst = (0..both.len())
        .map(|i| (both[i] - only_a[i] - only_b[i]).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn multiplexer_rejects_bad_inputs() {
    let a = channel("a", 0.1);
    let medium = MediumSignal::default();
    assert!(matches!(
        synth_multiplexer(&[], &medium, 1.0),
        Err(ModemError::Invalid(_))
    ));
    assert!(matches!(
        synth_multiplexer(&[a.clone(), channel("b", 0.1)], &medium, 1.0),
        Err(ModemError::DuplicateCarrier(_))
    ));
    assert!(matches!(
        synth_multiplexer(&[a.clone(), channel("a", 0.2)], &medium, 1.0),
        Err(ModemError::DuplicateChannel(_))
    ));
    assert!(synth_multiplexer(&[a], &medium, 0.0).is_err());
}

fn single_channel_config(duration: f64) -> ExperimentConfig {
    ExperimentConfig {
        duration,
        sample_dt: 1.0,
        channels: vec![ChannelConfig {
            name: "a".into(),
            carrier_f: 0.1,
            waveform: sine(1.0, 0.5, 0.01),
        }],
        demodulators: vec![],
        pursuit_rate: None,
        transient: None,
    }
}

#[test]
fn zero_duration_is_an_error() {
    let err = run_modem_experiment(&single_channel_config(0.0), Tolerances::default());
    assert!(matches!(err, Err(ModemError::Invalid(_))));
}

#[test]
fn experiment_writes_traces_and_metrics() {
    let report =
        run_modem_experiment(&single_channel_config(200.0), Tolerances::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    report.write_to(dir.path()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("traces.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(header[0], "t");
    for col in ["U_a", "S_ap", "S_am", "Mp", "Mm", "s_a", "m"] {
        assert!(header.contains(&col), "missing {col} in {header:?}");
    }
    assert_eq!(*header.last().unwrap(), "m");
    assert_eq!(csv.lines().count(), 202);
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    assert_eq!(metrics["pursuit_rate"], 10.0);
    assert_eq!(metrics["transient"], 50.0);
    assert!(metrics["per_channel"]["a"]["corr_own"].is_null());
}

#[test]
fn config_parses_from_json() {
    let text = r#"{
        "duration": 100, "sample_dt": 0.5,
        "channels": [{"name": "a", "carrier_f": 0.1,
                      "waveform": {"kind": "const", "offset": 1}}],
        "demodulators": [{"carrier_f": 0.1, "Q": 3}]
    }"#;
    let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
    assert_eq!(cfg.demodulators[0].q, 3.0);
    assert_eq!(cfg.demodulators[0].lp_order, 1);
    assert_eq!(cfg.channels[0].waveform.waveform().value(5.0), 1.0);
    let typo = text.replace("sample_dt", "sample_step");
    assert!(serde_json::from_str::<ExperimentConfig>(&typo).is_err());
}

#[test]
fn each_demodulator_prefers_its_own_channel() {
    let demod = |carrier_f: f64| DemodConfig {
        name: None,
        carrier_f,
        q: 2.0,
        lp_cutoff: None,
        lp_order: 2,
    };
    let cfg = ExperimentConfig {
        duration: 3000.0,
        sample_dt: 0.5,
        channels: vec![
            ChannelConfig {
                name: "a".into(),
                carrier_f: 0.1,
                waveform: sine(1.0, 0.6, 0.01),
            },
            ChannelConfig {
                name: "b".into(),
                carrier_f: 0.2,
                waveform: sine(1.0, 0.6, 0.02),
            },
        ],
        demodulators: vec![demod(0.1), demod(0.2)],
        pursuit_rate: None,
        transient: None,
    };
    let report = run_modem_experiment(&cfg, Tolerances::default()).unwrap();
    let m = &report.metrics;
    assert_eq!(m.per_demodulator[0].output, "D1");
    assert_eq!(m.per_channel["b"].demodulator.as_deref(), Some("D2"));
    for ch in ["a", "b"] {
        let c = &m.per_channel[ch];
        let (own, other) = (c.corr_own.unwrap(), c.corr_other_max.unwrap());
        assert!(own > 0.8 && own > other, "{ch}: own {own} other {other}");
    }
}
