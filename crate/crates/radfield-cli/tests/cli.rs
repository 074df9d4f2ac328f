// Copyright 2026 Radfield Contributors
// SPDX-License-Identifier: Apache-2.0

//! Black box tests of the installed binary: each test spawns the real
//! executable with files in a temporary directory and checks bytes, exit
//! codes and the documented output keys.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use radfield::constants::angular_from_hz;
use radfield::lindblad::steady_reflection;
use radfield::thermometry::{band_weight, bose_occupation};
use radfield::trace::ReflectionTrace;
use radfield::{BathOccupation, DriveParams, TransmonParams};
use tempfile::TempDir;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radfield"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("spawn radfield")
}

fn write_file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

/// Parse `key = value` manifest lines, skipping `#` headers.
fn parse_manifest(text: &str) -> HashMap<String, String> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .filter_map(|l| {
            let (k, v) = l.split_once('=')?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn value(map: &HashMap<String, String>, key: &str) -> f64 {
    map.get(key)
        .unwrap_or_else(|| panic!("missing key {key}"))
        .parse()
        .unwrap_or_else(|_| panic!("key {key} is not a number"))
}

const MODEL: &str = "frequency_ge_hz = 5.332e9\n\
                     anharmonicity_hz = -217e6\n\
                     gamma_hz = 38e6\n";

fn simulate_config(extra: &str) -> String {
    format!(
        "{MODEL}levels = 3\n\
         attenuation_db = 110\n\
         powers_watt = 1e-7, 1e-5\n\
         detuning_start_hz = -60e6\n\
         detuning_stop_hz = 60e6\n\
         detuning_points = 21\n\
         {extra}"
    )
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let config = write_file(&dir, "sim.conf", &simulate_config("noise_level = 0.01\nseed = 3\n"));
    let out_a = dir.path().join("a.dat");
    let out_b = dir.path().join("b.dat");
    let out_c = dir.path().join("c.dat");

    let config_s = config.to_str().unwrap();
    for (out, seed) in [(&out_a, "3"), (&out_b, "3"), (&out_c, "4")] {
        let res = run(&[
            "simulate",
            "--config",
            config_s,
            "--output",
            out.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        let stdout = String::from_utf8_lossy(&res.stdout);
        assert!(stdout.contains("wrote 42 points"), "stdout: {stdout}");
    }

    let bytes_a = fs::read(&out_a).unwrap();
    assert_eq!(bytes_a, fs::read(&out_b).unwrap(), "same seed, different bytes");
    assert_ne!(bytes_a, fs::read(&out_c).unwrap(), "different seed, same bytes");

    // The trace reads back with the model parameters in its header.
    let trace = ReflectionTrace::read_path(&out_a).unwrap();
    assert_eq!(trace.len(), 42);
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.contains("# frequency_ge_hz: 5332000000"), "header: {text}");
}

#[test]
fn simulate_flags_override_the_config() {
    let dir = TempDir::new().unwrap();
    let config = write_file(&dir, "sim.conf", &simulate_config("occupation = 0.3\n"));
    let config_s = config.to_str().unwrap();

    let mut traces = Vec::new();
    for (name, extra) in [
        ("on.dat", vec!["--cross-terms", "on"]),
        ("off.dat", vec!["--cross-terms", "off"]),
        ("two.dat", vec!["--levels", "2"]),
    ] {
        let out = dir.path().join(name);
        let mut args = vec!["simulate", "--config", config_s, "--output", out.to_str().unwrap()];
        args.extend(extra.iter());
        let res = binary().args(&args).output().unwrap();
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        traces.push(fs::read(&out).unwrap());
    }
    assert_ne!(traces[0], traces[1], "cross terms flag had no effect");
    assert_ne!(traces[0], traces[2], "levels flag had no effect");
}

#[test]
fn fit_recovers_the_simulated_model() {
    let dir = TempDir::new().unwrap();
    let sim_config = write_file(&dir, "sim.conf", &simulate_config(""));
    let trace = dir.path().join("trace.dat");
    let res = run(&[
        "simulate",
        "--config",
        sim_config.to_str().unwrap(),
        "--output",
        trace.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let fit_config = write_file(
        &dir,
        "fit.conf",
        "levels = 3\n\
         init_frequency_ge_hz = 5.30e9\n\
         init_gamma_hz = 30e6\n\
         init_anharmonicity_hz = -200e6\n\
         init_attenuation_db = 112\n",
    );
    let res = run(&[
        "fit",
        "--config",
        fit_config.to_str().unwrap(),
        "--data",
        trace.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let map = parse_manifest(&String::from_utf8_lossy(&res.stdout));

    // Clean data, so the fit lands on the generator to solver precision.
    assert!((value(&map, "frequency_ge_hz") / 5.332e9 - 1.0).abs() < 1e-6);
    assert!((value(&map, "gamma_hz") / 38.0e6 - 1.0).abs() < 1e-3);
    assert!((value(&map, "anharmonicity_hz") / -217.0e6 - 1.0).abs() < 1e-3);
    assert!((value(&map, "attenuation_db") - 110.0).abs() < 0.01);
    assert_eq!(map.get("points").map(String::as_str), Some("42"));
}

#[test]
fn thermometer_converts_between_all_three_quantities() {
    let dir = TempDir::new().unwrap();
    let config = write_file(
        &dir,
        "thermo.conf",
        &format!("{MODEL}levels = 3\nrabi_ratio = 0.42\ninversion_mode = real\n"),
    );
    let config_s = config.to_str().unwrap();

    // Temperature in: per transition occupations out.
    let res = run(&["thermometer", "--config", config_s, "--temperature", "0.037"]);
    assert!(res.status.success());
    let map = parse_manifest(&String::from_utf8_lossy(&res.stdout));
    let p = TransmonParams::new(
        angular_from_hz(5.332e9),
        angular_from_hz(-217.0e6),
        angular_from_hz(38.0e6),
        3,
    )
    .unwrap();
    let expect_ge = bose_occupation(p.omega_ge, 0.037).unwrap();
    assert!((value(&map, "occupation_transition_1") / expect_ge - 1.0).abs() < 1e-9);

    // Occupation in: temperature out, near the 37 mK point.
    let res = run(&["thermometer", "--config", config_s, "--occupation", "1e-3"]);
    assert!(res.status.success());
    let map = parse_manifest(&String::from_utf8_lossy(&res.stdout));
    let t = value(&map, "temperature_k");
    assert!((0.034..=0.040).contains(&t), "T = {t}");

    // Reflection in: the occupation that generated it comes back.
    let n_true = 2.5e-3;
    let bath = BathOccupation::uniform(n_true, p.transitions()).unwrap();
    let drive = DriveParams::resonant(0.42 * p.gamma).unwrap();
    let r = steady_reflection(&p, &bath, &drive, true).unwrap();
    // The real part is negative, so the value is attached with '=' to
    // keep the parser from reading it as a flag.
    let arg = format!("--reflection={},{}", r.re, r.im);
    let res = run(&["thermometer", "--config", config_s, &arg]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let map = parse_manifest(&String::from_utf8_lossy(&res.stdout));
    assert!((value(&map, "occupation") / n_true - 1.0).abs() < 1e-6);
}

#[test]
fn thermometer_rejects_two_inputs_at_once() {
    let dir = TempDir::new().unwrap();
    let config = write_file(&dir, "thermo.conf", MODEL);
    let res = run(&[
        "thermometer",
        "--config",
        config.to_str().unwrap(),
        "--occupation",
        "1e-3",
        "--temperature",
        "0.05",
    ]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("cannot be used with"), "stderr: {stderr}");
}

#[test]
fn sensitivity_reports_the_noise_floor() {
    let dir = TempDir::new().unwrap();
    let config = write_file(&dir, "sens.conf", &format!("{MODEL}efficiency = 0.014\n"));
    let res = run(&["sensitivity", "--config", config.to_str().unwrap()]);
    assert!(res.status.success());
    let map = parse_manifest(&String::from_utf8_lossy(&res.stdout));

    assert!((value(&map, "optimal_rabi_ratio") - 0.42).abs() <= 0.01);
    let neo = value(&map, "noise_equivalent_occupation_per_sqrt_rad_s");
    assert!((2.0e-4..=8.0e-4).contains(&neo), "floor {neo}");
    let ratio = value(&map, "noise_equivalent_occupation_per_sqrt_hz") / neo;
    assert!((ratio - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    assert!(value(&map, "noise_equivalent_power_w_per_sqrt_rad_s") < 1e-18);
}

#[test]
fn chain_tabulates_each_stage() {
    let dir = TempDir::new().unwrap();
    let config = write_file(&dir, "chain.conf", "frequency_hz = 5.332e9\n");
    let chain = write_file(&dir, "chain.csv", "20, 4.0\n20, 0.1\n20, 0.015\n");
    let res = run(&[
        "chain",
        "--config",
        config.to_str().unwrap(),
        "--chain",
        chain.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);

    let rows: Vec<Vec<f64>> = stdout
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split(',').map(|f| f.trim().parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3, "stdout: {stdout}");

    // Final stage reproduces the hand recursion at the probe frequency.
    let omega = angular_from_hz(5.332e9);
    let mut n = bose_occupation(omega, 300.0).unwrap();
    for &(db, t) in &[(20.0, 4.0), (20.0, 0.1), (20.0, 0.015)] {
        let a = 10f64.powf(db / 10.0);
        n = n / a + (1.0 - 1.0 / a) * bose_occupation(omega, t).unwrap();
    }
    let last = rows.last().unwrap();
    assert!((last[3] / n - 1.0).abs() < 1e-12, "occupation {} vs {n}", last[3]);
}

#[test]
fn noise_weights_a_flat_spectrum() {
    let dir = TempDir::new().unwrap();
    let config = write_file(
        &dir,
        "noise.conf",
        &format!("{MODEL}levels = 3\nband_center_hz = 5.2235e9\nband_width_hz = 400e6\n"),
    );
    // Flat occupation 0.05 across a band much wider than both lines.
    let spectrum = write_file(&dir, "spectrum.csv", "4.6e9, 0.05\n5.9e9, 0.05\n");
    let res = run(&[
        "noise",
        "--config",
        config.to_str().unwrap(),
        "--spectrum",
        spectrum.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let map = parse_manifest(&String::from_utf8_lossy(&res.stdout));

    let p = TransmonParams::new(
        angular_from_hz(5.332e9),
        angular_from_hz(-217.0e6),
        angular_from_hz(38.0e6),
        3,
    )
    .unwrap();

    // A flat band weights the occupation by its own capture fraction;
    // Lorentzian tails leak a percent or so past the edges.
    let weighted = value(&map, "weighted_occupation");
    let support = band_weight(&p, angular_from_hz(5.25e9), angular_from_hz(1.3e9)).unwrap();
    assert!((weighted / (0.05 * support) - 1.0).abs() < 1e-6, "weighted {weighted}");
    assert!((0.045..0.05).contains(&weighted), "weighted {weighted}");
    assert!(value(&map, "temperature_k") > 0.0);

    let expect =
        band_weight(&p, angular_from_hz(5.2235e9), angular_from_hz(400.0e6)).unwrap();
    assert!((value(&map, "band_weight") / expect - 1.0).abs() < 1e-12);
}

#[test]
fn missing_config_key_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let config = write_file(&dir, "bad.conf", "frequency_ge_hz = 5.332e9\n");
    let res = run(&["sensitivity", "--config", config.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("anharmonicity_hz"), "stderr: {stderr}");
}

#[test]
fn invalid_model_parameter_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    // Positive anharmonicity is outside the modeled ladder.
    let config = write_file(
        &dir,
        "bad.conf",
        "frequency_ge_hz = 5.332e9\nanharmonicity_hz = 217e6\ngamma_hz = 38e6\nefficiency = 0.014\n",
    );
    let res = run(&["sensitivity", "--config", config.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.conf");
    let res = run(&["sensitivity", "--config", missing.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn unreadable_reflection_is_a_range_error() {
    let dir = TempDir::new().unwrap();
    let config = write_file(
        &dir,
        "thermo.conf",
        &format!("{MODEL}levels = 3\nrabi_ratio = 0.42\n"),
    );
    // No physical occupation reflects more than everything.
    let res = run(&[
        "thermometer",
        "--config",
        config.to_str().unwrap(),
        "--reflection",
        "2,0",
    ]);
    assert_eq!(res.status.code(), Some(5));
}

#[test]
fn unused_config_keys_warn_on_stderr() {
    let dir = TempDir::new().unwrap();
    let config = write_file(
        &dir,
        "sens.conf",
        &format!("{MODEL}efficiency = 0.014\nbogus_key = 1\n"),
    );
    let res = run(&["sensitivity", "--config", config.to_str().unwrap()]);
    assert!(res.status.success());
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("unused config keys: bogus_key"), "stderr: {stderr}");
}
