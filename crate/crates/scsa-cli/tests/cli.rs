//! End-to-end tests of the `scsa` binary: command behavior, CSV formats,
//! and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn scsa() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scsa"))
}

fn run(args: &[&str]) -> Output {
    scsa().args(args).output().expect("binary runs")
}

fn assert_code(out: &Output, code: i32, context: &str) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "{context}: stdout={} stderr={}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read_csv(path: &Path) -> (Vec<f64>, Vec<f64>) {
    let text = fs::read_to_string(path).expect("csv exists");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,y"), "header of {}", path.display());
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for line in lines {
        let (t, y) = line.split_once(',').expect("two fields");
        ts.push(t.parse().unwrap());
        ys.push(y.parse().unwrap());
    }
    (ts, ys)
}

fn write_csv(path: &Path, rows: impl Iterator<Item = (f64, f64)>) {
    let mut text = String::from("t,y\n");
    for (t, y) in rows {
        text.push_str(&format!("{t},{y}\n"));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn gen_gaussian_defaults_hit_the_paper_pulse() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pulse.csv");
    let result = run(&["gen", "gaussian", "--out", out.to_str().unwrap()]);
    assert_code(&result, 0, "gen gaussian");
    let (ts, ys) = read_csv(&out);
    assert_eq!(ys.len(), 512);
    let max = ys.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(max, 2.0, "peak amplitude");
    // The peak sits at t = 5 exactly.
    let idx = ys.iter().position(|&v| v == 2.0).unwrap();
    assert_eq!(ts[idx], 5.0);
}

#[test]
fn gen_blocks_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("blocks.csv");
    let result = run(&[
        "gen",
        "blocks",
        "--n",
        "512",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_code(&result, 0, "gen blocks");
    let (_, ys) = read_csv(&out);
    assert_eq!(ys.len(), 512);
}

#[test]
fn gen_unwritable_path_exits_2() {
    let result = run(&["gen", "blocks", "--out", "/nonexistent-dir/x.csv"]);
    assert_code(&result, 2, "unwritable path");
}

#[test]
fn gen_sing_is_heavisine_alias() {
    let dir = tempfile::tempdir().unwrap();
    let sing = dir.path().join("sing.csv");
    let heavi = dir.path().join("heavi.csv");
    assert_code(
        &run(&["gen", "sing", "--out", sing.to_str().unwrap()]),
        0,
        "sing",
    );
    assert_code(
        &run(&["gen", "heavisine", "--out", heavi.to_str().unwrap()]),
        0,
        "heavisine",
    );
    assert_eq!(fs::read(&sing).unwrap(), fs::read(&heavi).unwrap());
}

#[test]
fn csv_round_trip_is_byte_exact() {
    // moving average with window 1 is the identity, so input and output
    // files must match byte for byte (same values, same formatting).
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.csv");
    let dst = dir.path().join("dst.csv");
    let gen = run(&[
        "gen",
        "gaussian",
        "--noise-level",
        "7.5",
        "--seed",
        "9",
        "--out",
        src.to_str().unwrap(),
    ]);
    assert_code(&gen, 0, "gen");
    let den = run(&[
        "denoise",
        "--input",
        src.to_str().unwrap(),
        "--method",
        "ma",
        "--window",
        "1",
        "--out",
        dst.to_str().unwrap(),
    ]);
    assert_code(&den, 0, "identity denoise");
    assert_eq!(fs::read(&src).unwrap(), fs::read(&dst).unwrap());
}

#[test]
fn denoise_fixed_h_on_reflectionless_well() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("sech2.csv");
    let dst = dir.path().join("out.csv");
    let n = 512;
    let delta = 32.0 / n as f64;
    write_csv(
        &src,
        (0..n).map(|i| {
            let t = -16.0 + i as f64 * delta;
            (t, 2.0 / t.cosh().powi(2))
        }),
    );
    let out = run(&[
        "denoise",
        "--input",
        src.to_str().unwrap(),
        "--method",
        "cscsa",
        "--h",
        "1.0",
        "--mu",
        "1.0",
        "--out",
        dst.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "fixed-h denoise");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("h_star=1"), "summary line: {stdout}");
    assert!(stdout.contains("n_h=1"), "summary line: {stdout}");

    let (_, input_y) = read_csv(&src);
    let (_, output_y) = read_csv(&dst);
    let max_err = input_y
        .iter()
        .zip(&output_y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(max_err <= 1e-2, "reconstruction error {max_err}");
}

#[test]
fn denoise_sg_reproduces_cubic_on_interior() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("cubic.csv");
    let dst = dir.path().join("smooth.csv");
    write_csv(
        &src,
        (0..64).map(|i| {
            let t = i as f64 * 0.1;
            (t, t * t * t - 2.0 * t)
        }),
    );
    let out = run(&[
        "denoise",
        "--input",
        src.to_str().unwrap(),
        "--method",
        "sg",
        "--window",
        "5",
        "--order",
        "3",
        "--out",
        dst.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "sg denoise");
    let (_, input_y) = read_csv(&src);
    let (_, output_y) = read_csv(&dst);
    for i in 2..62 {
        assert!(
            (input_y[i] - output_y[i]).abs() <= 1e-10,
            "interior sample {i} moved"
        );
    }
}

#[test]
fn denoise_missing_flag_exits_1_with_usage() {
    let out = run(&["denoise", "--method", "cscsa", "--out", "/tmp/x.csv"]);
    assert_code(&out, 1, "missing --input");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "stderr: {stderr}");
}

#[test]
fn denoise_malformed_csv_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("bad.csv");
    fs::write(&src, "t,y\n0,1\n1,not-a-number\n").unwrap();
    let out = run(&[
        "denoise",
        "--input",
        src.to_str().unwrap(),
        "--method",
        "ma",
        "--window",
        "3",
        "--out",
        "/tmp/x.csv",
    ]);
    assert_code(&out, 3, "malformed csv");
}

#[test]
fn curvature_of_line_and_parabola() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("line.csv");
    write_csv(
        &line,
        (0..32).map(|i| (i as f64 * 0.25, 1.5 * (i as f64 * 0.25))),
    );
    let out = run(&["curvature", "--input", line.to_str().unwrap()]);
    assert_code(&out, 0, "line curvature");
    assert!(
        String::from_utf8_lossy(&out.stdout).contains("total_curvature=0"),
        "line should be flat"
    );

    let parabola = dir.path().join("parabola.csv");
    let delta = 0.125;
    let n = 33;
    let t0 = -2.0;
    write_csv(
        &parabola,
        (0..n).map(|i| {
            let t = t0 + i as f64 * delta;
            (t, t * t)
        }),
    );
    let profile = dir.path().join("profile.csv");
    let out = run(&[
        "curvature",
        "--input",
        parabola.to_str().unwrap(),
        "--profile",
        profile.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "parabola curvature");
    let expected: f64 = (1..n - 1)
        .map(|m| {
            let tm = t0 + m as f64 * delta;
            2.0 / (1.0 + 4.0 * tm * tm).powf(1.5)
        })
        .sum();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let total: f64 = stdout
        .trim()
        .strip_prefix("total_curvature=")
        .expect("summary line")
        .parse()
        .unwrap();
    assert!(
        (total - expected).abs() <= 1e-10 * expected,
        "{total} vs {expected}"
    );

    // Profile has N-2 rows.
    let text = fs::read_to_string(&profile).unwrap();
    assert_eq!(
        text.lines().count(),
        1 + (n - 2),
        "header plus interior rows"
    );
}

#[test]
fn curvature_short_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("short.csv");
    fs::write(&src, "t,y\n0,1\n1,2\n").unwrap();
    let out = run(&["curvature", "--input", src.to_str().unwrap()]);
    assert_code(&out, 3, "short input");
}

#[test]
fn bench_row_count_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let detail = dir.path().join("detail.csv");
    let agg = dir.path().join("agg.csv");
    let config = dir.path().join("bench.toml");
    fs::write(
        &config,
        format!(
            r#"
[signals]
kinds = ["gaussian"]
n = 128

[noise]
kind = "white"
levels_percent = [2.0, 5.0]

[run]
seeds = 3
out = "{}"
aggregate_out = "{}"

[methods.sg]
window = 9
order = 2

[methods.ma]
window = 5
"#,
            detail.display(),
            agg.display()
        ),
    )
    .unwrap();
    let out = run(&["bench", "--config", config.to_str().unwrap()]);
    assert_code(&out, 0, "bench run");
    // 1 signal x 2 levels x 2 methods x 3 seeds = 12 detail rows.
    let text = fs::read_to_string(&detail).unwrap();
    assert_eq!(text.lines().count(), 1 + 12);
    let agg_text = fs::read_to_string(&agg).unwrap();
    assert_eq!(agg_text.lines().count(), 1 + 4);

    // Unknown config fields are a usage error.
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[signals]\nkinds=[\"gaussian\"]\nn=128\nbogus=1\n").unwrap();
    let out = run(&["bench", "--config", bad.to_str().unwrap()]);
    assert_code(&out, 1, "invalid config");

    let missing = run(&["bench", "--config", "/nonexistent/config.toml"]);
    assert_code(&missing, 2, "missing config file");
}

#[test]
fn bench_accepts_the_paper_level_sweep() {
    // 1% to 12% with 0.5% spacing is 23 levels.
    let levels: Vec<f64> = (0..)
        .map(|i| 1.0 + 0.5 * i as f64)
        .take_while(|&l| l <= 12.0)
        .collect();
    assert_eq!(levels.len(), 23);
    let dir = tempfile::tempdir().unwrap();
    let detail = dir.path().join("detail.csv");
    let config = dir.path().join("bench.toml");
    fs::write(
        &config,
        format!(
            r#"
[signals]
kinds = ["gaussian"]
n = 64

[noise]
kind = "white"
levels_percent = [{}]

[run]
seeds = 1
out = "{}"
aggregate_out = "{}"

[methods.ma]
window = 5
"#,
            levels
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(", "),
            detail.display(),
            dir.path().join("agg.csv").display()
        ),
    )
    .unwrap();
    let out = run(&["bench", "--config", config.to_str().unwrap()]);
    assert_code(&out, 0, "level sweep");
    let text = fs::read_to_string(&detail).unwrap();
    assert_eq!(text.lines().count(), 1 + 23);
}

#[test]
fn out_dir_env_var_resolves_relative_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = scsa()
        .args(["gen", "blocks", "--n", "64", "--out", "rel.csv"])
        .env("SCSA_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_code(&out, 0, "gen with SCSA_OUT_DIR");
    assert!(dir.path().join("rel.csv").exists());
}

#[test]
fn gen_mixture_noise_from_records() {
    let dir = tempfile::tempdir().unwrap();
    let rec_a = dir.path().join("a.csv");
    let rec_b = dir.path().join("b.csv");
    // Deterministic pseudo-noise records.
    write_csv(
        &rec_a,
        (0..512).map(|i| {
            let t = i as f64 * 0.3125 - 70.0;
            (t, (i as f64 * 0.77).sin() + 0.3 * (i as f64 * 2.1).cos())
        }),
    );
    write_csv(
        &rec_b,
        (0..512).map(|i| {
            let t = i as f64 * 0.3125 - 70.0;
            (t, (i as f64 * 0.13).cos())
        }),
    );
    let clean = dir.path().join("clean.csv");
    let noisy = dir.path().join("noisy.csv");
    let out = run(&[
        "gen",
        "gaussian",
        "--mix-a",
        rec_a.to_str().unwrap(),
        "--mix-b",
        rec_b.to_str().unwrap(),
        "--target-snr-db",
        "10",
        "--out",
        noisy.to_str().unwrap(),
        "--clean-out",
        clean.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "gen mixture");
    let (_, clean_y) = read_csv(&clean);
    let (_, noisy_y) = read_csv(&noisy);
    let signal: f64 = clean_y.iter().map(|v| v * v).sum();
    let noise: f64 = clean_y
        .iter()
        .zip(&noisy_y)
        .map(|(c, n)| (c - n) * (c - n))
        .sum();
    let snr = 10.0 * (signal / noise).log10();
    assert!((snr - 10.0).abs() <= 0.01, "achieved {snr} dB");
}

#[test]
fn tune_nu_reports_the_chosen_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean.csv");
    let noisy = dir.path().join("noisy.csv");
    let out_path = dir.path().join("out.csv");
    assert_code(
        &run(&[
            "gen",
            "gaussian",
            "--n",
            "128",
            "--noise-level",
            "5",
            "--seed",
            "1",
            "--out",
            noisy.to_str().unwrap(),
            "--clean-out",
            clean.to_str().unwrap(),
        ]),
        0,
        "gen",
    );
    let out = run(&[
        "denoise",
        "--input",
        noisy.to_str().unwrap(),
        "--method",
        "cscsa",
        "--tune-nu",
        "--reference",
        clean.to_str().unwrap(),
        "--h-count",
        "12",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "tune-nu");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("nu_star="), "stdout: {stdout}");
    assert!(stdout.contains("h_star="), "stdout: {stdout}");
}
