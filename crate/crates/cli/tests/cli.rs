use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use crnsig::modem::ExperimentConfig;
use crnsig::parse_network;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn example(name: &str) -> String {
    examples().join(name).to_string_lossy().into_owned()
}

fn crnsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crnsig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn crnsig_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_crnsig"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn compile_prints_the_example_system() {
    let text = "X + Y ->{1} 2Z\nX + Z ->{1} 2X\nY + Z ->{1} 2Y\n";
    let o = crnsig_stdin(&["compile", "-"], text);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "dX/dt = -X*Y + X*Z\ndY/dt = -X*Y + Y*Z\ndZ/dt = 2*X*Y - X*Z - Y*Z\n"
    );
}

#[test]
fn compile_accepts_an_empty_file() {
    let o = crnsig_stdin(&["compile", "-"], "");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
}

#[test]
fn compile_reports_the_failing_line() {
    let o = crnsig_stdin(&["compile", "-"], "A ->{1} B\n# fine\nA -> B\n");
    assert_eq!(o.status.code(), Some(10));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn simulate_lowpass_matches_closed_form() {
    let o = crnsig(&[
        "simulate",
        &example("lowpass.crn"),
        "--t-end",
        "10",
        "--dt",
        "0.1",
        "--set",
        "Vin=1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    let (t, v) = (column(&csv, "t"), column(&csv, "Vout"));
    assert_eq!(t.len(), 101);
    for (t, v) in t.iter().zip(&v) {
        assert!((v - (1.0 - (-t).exp())).abs() < 1e-6, "t={t} v={v}");
    }
}

#[test]
fn simulate_rejects_zero_horizon() {
    let o = crnsig(&["simulate", &example("lowpass.crn"), "--t-end", "0"]);
    assert_eq!(o.status.code(), Some(10));
}

#[test]
fn simulated_oscillator_has_the_expected_period() {
    let period = std::f64::consts::TAU / 0.1;
    let dt = period / 8.0;
    let o = crnsig(&[
        "simulate",
        &example("oscillator.crn"),
        "--t-end",
        &(4.0 * period).to_string(),
        "--dt",
        &dt.to_string(),
    ]);
    let csv = stdout(&o);
    let (sp, sm) = (column(&csv, "S_ap"), column(&csv, "S_am"));
    let s: Vec<f64> = sp.iter().zip(&sm).map(|(p, m)| p - m).collect();
    // Eight samples per period: s = sin(f t) peaks at sample 2 of every period.
    for k in 0..4 {
        assert!(
            (s[8 * k + 2] - 1.0).abs() < 1e-5,
            "period {k}: {}",
            s[8 * k + 2]
        );
        assert!(s[8 * k + 4].abs() < 1e-5);
    }
}

#[test]
fn simulate_with_drives() {
    let o = crnsig(&[
        "simulate",
        &example("lowpass.crn"),
        "--t-end",
        "5",
        "--dt",
        "1",
        "--drive",
        "Vin=const:2",
    ]);
    let v = column(&stdout(&o), "Vout");
    assert!((v[5] - 2.0 * (1.0 - (-5.0f64).exp())).abs() < 1e-6);
    let bad = crnsig(&[
        "simulate",
        &example("lowpass.crn"),
        "--t-end",
        "1",
        "--drive",
        "Vin=square:1",
    ]);
    assert_eq!(bad.status.code(), Some(10));
}

/// Each network fixture is a one-line comment followed by the synth output.
#[test]
fn synth_outputs_match_the_fixtures() {
    for (file, args) in [
        (
            "fig4_bandpass.crn",
            &[
                "bandpass",
                "--k",
                "1",
                "--q",
                "2",
                "--w0",
                "0.009",
                "--catalytic",
            ][..],
        ),
        (
            "bandpass_q5.crn",
            &["bandpass", "--k", "1", "--q", "5", "--w0", "1"][..],
        ),
        ("oscillator.crn", &["oscillator", "--f", "0.1"][..]),
        ("lowpass.crn", &["lowpass", "--c", "1", "--k", "1"][..]),
    ] {
        let o = crnsig(&[&["synth"][..], args].concat());
        assert!(o.status.success());
        let fixture = fs::read_to_string(examples().join(file)).unwrap();
        assert_eq!(fixture.split_once('\n').unwrap().1, stdout(&o), "{file}");
    }
}

#[test]
fn synth_oscillator_has_six_reactions() {
    let o = crnsig(&["synth", "oscillator", "--f", "0.1", "--format", "json"]);
    let n = crnsig::network_from_json(&stdout(&o)).unwrap();
    assert_eq!(n.reactions().len(), 6);
    assert_eq!(n.init_of("F_a"), Some(0.1));
}

#[test]
fn synth_every_kind() {
    for args in [
        &["synth", "lowpass", "--order", "2"][..],
        &["synth", "lowpass", "--dual"][..],
        &["synth", "bandpass", "--a", "1", "--b", "2", "--c", "3"][..],
        &["synth", "modulator", "--f", "0.1"][..],
        &[
            "synth",
            "multiplexer",
            "--channel",
            "a=0.1",
            "--channel",
            "b=0.2",
        ][..],
        &[
            "synth",
            "demodulator",
            "--f",
            "0.1",
            "--q",
            "4",
            "--order",
            "2",
        ][..],
    ] {
        let o = crnsig(args);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        parse_network(&stdout(&o)).unwrap();
    }
    let o = crnsig(&["synth", "bandpass", "--q", "2"]);
    assert_eq!(o.status.code(), Some(10));
    let o = crnsig(&[
        "synth",
        "multiplexer",
        "--channel",
        "a=0.1",
        "--channel",
        "b=0.1",
    ]);
    assert_eq!(o.status.code(), Some(10));
}

#[test]
fn bode_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let svg = dir.path().join(format!("{name}.svg"));
        let o = crnsig(&[
            "bode",
            &example("lowpass.crn"),
            "--input",
            "Vin",
            "--output",
            "Vout",
            "--from",
            "0.1",
            "--to",
            "10",
            "--points",
            "5",
            "--settle",
            "1",
            "--out",
            out.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (fs::read(out).unwrap(), fs::read(svg).unwrap())
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let csv = String::from_utf8(a.0).unwrap();
    assert_eq!(csv.lines().count(), 6);
    let gain = column(&csv, "gain_db");
    assert!((gain[2] + 3.0103).abs() < 0.01, "{gain:?}");
}

#[test]
fn modem_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = crnsig(&[
            "modem",
            &example("fig6.json"),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (
            fs::read(out.join("traces.csv")).unwrap(),
            fs::read(out.join("metrics.json")).unwrap(),
        )
    };
    let (a, b) = (run("a"), run("b"));
    assert_eq!(a, b);
    let header = String::from_utf8(a.0)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert!(header.ends_with(",s_a,m"), "{header}");
    assert!(header.contains(",U_a,"));
}

#[test]
fn modem_rejects_unknown_config_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"duration": 10, "sample_dt": 1, "channels": [], "extra": 1}"#,
    )
    .unwrap();
    let o = crnsig(&[
        "modem",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(10));
}

#[test]
fn monitor_exit_codes_encode_the_verdict() {
    let osc = example("oscillator.crn");
    let run = |file: &str, species: &str, low: &str, high: &str| {
        crnsig(&[
            "monitor",
            file,
            "--species",
            species,
            "--low",
            low,
            "--high",
            high,
            "--window",
            "2000",
        ])
    };
    let o = run(&osc, "S_ap", "0.05", "0.2");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("in_band\n"));
    let o = run(&osc, "S_ap", "0.5", "1");
    assert_eq!(o.status.code(), Some(1));
    let first = stdout(&o).lines().next().unwrap().to_string();
    let est: f64 = first.strip_prefix("out_of_band ").unwrap().parse().unwrap();
    assert!((est - 0.1).abs() < 1e-3);
    let o = run(&example("lowpass.crn"), "Vout", "0.5", "1");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&osc, "S_ap", "1", "0.5");
    assert_eq!(o.status.code(), Some(10));
    let o = run(&osc, "Nope", "0.5", "1");
    assert_eq!(o.status.code(), Some(10));
}

#[test]
fn usage_errors_do_not_collide_with_verdicts() {
    assert_eq!(crnsig(&["frobnicate"]).status.code(), Some(11));
    assert_eq!(crnsig(&["--help"]).status.code(), Some(0));
}

#[test]
fn manifest_fixtures_are_valid() {
    let mut seen = 0;
    for entry in fs::read_dir(examples()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        match path.extension().and_then(|e| e.to_str()) {
            Some("crn") => {
                parse_network(&text).unwrap();
            }
            Some("json") => {
                serde_json::from_str::<ExperimentConfig>(&text).unwrap();
            }
            _ => continue,
        }
        seen += 1;
    }
    assert!(seen >= 8);
}
