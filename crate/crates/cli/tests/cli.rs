use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csi-outage"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV output into (evaluator, p_out, std_err) triples.
fn rows(text: &str) -> Vec<(String, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("axis,value,scheme,evaluator,p_out,std_err,flags"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[3].to_string(), f[4].parse().unwrap(), f[5].parse().unwrap())
        })
        .collect()
}

#[test]
fn analytic_closed_and_quadrature_agree() {
    let o = run(&[
        "analytic",
        "--scheme",
        "miso-rvq",
        "--nt",
        "4",
        "--rate",
        "2",
        "--snr-db",
        "10",
        "--rho",
        "0.9",
        "--codebook-size",
        "8",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2);
    assert_eq!(r[0].0, "closed");
    assert_eq!(r[1].0, "quadrature");
    assert!((r[0].1 - r[1].1).abs() < 1e-6);
}

#[test]
fn simulate_matches_gamma_cdf_without_delay() {
    let o = run(&[
        "simulate",
        "--scheme",
        "miso-pbf",
        "--snr-db",
        "10",
        "--rho",
        "1",
        "--seed",
        "7",
        "--trials",
        "200000",
        "--workers",
        "2",
    ]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    // P(4, 1.2), written out term by term
    let x: f64 = 1.2;
    let exact = 1.0 - (-x).exp() * (1.0 + x + x * x / 2.0 + x * x * x / 6.0);
    let se = (exact * (1.0 - exact) / 200_000.0).sqrt();
    assert!((r[0].1 - exact).abs() <= 3.0 * se, "{} vs {exact}", r[0].1);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = run(&[
        "analytic", "--scheme", "miso-pbf", "--snr-db", "10", "--rho", "1", "--bogus",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn missing_seed_for_monte_carlo_is_rejected() {
    let o = run(&[
        "analytic", "--scheme", "miso-pbf", "--snr-db", "10", "--rho", "1", "--eval", "mc",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
    let o = run(&["simulate", "--scheme", "miso-pbf", "--snr-db", "10", "--rho", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn domain_errors_exit_with_usage_status() {
    let o = run(&["analytic", "--scheme", "miso-pbf", "--snr-db", "10", "--rho", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["analytic", "--scheme", "miso-rvq", "--snr-db", "10", "--rho", "0.9"]);
    assert_eq!(o.status.code(), Some(1), "RVQ without a codebook size");
    let o = run(&["analytic", "--scheme", "miso-pbf", "--snr-db", "10"]);
    assert_eq!(o.status.code(), Some(1), "no persistence given");
}

#[test]
fn jakes_persistence_is_accepted() {
    let o = run(&[
        "analytic",
        "--scheme",
        "miso-pbf",
        "--snr-db",
        "10",
        "--doppler-hz",
        "10",
        "--delay-s",
        "0.005",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn reruns_are_byte_identical_and_worker_independent() {
    let base = [
        "sweep",
        "--scheme",
        "mu-rvq",
        "--nu",
        "2",
        "--codebook-size",
        "4",
        "--rho",
        "0.9",
        "--axis",
        "snr-db",
        "--values",
        "5,10",
        "--seed",
        "11",
        "--trials",
        "20000",
        "--chunk",
        "4096",
    ];
    let a = run(&base);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&base);
    assert_eq!(a.stdout, b.stdout);
    let mut parallel = base.to_vec();
    parallel.extend(["--workers", "8"]);
    assert_eq!(a.stdout, run(&parallel).stdout);
    assert_eq!(rows(&stdout(&a)).len(), 6);
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "# shared settings\nscheme = miso-tas\nsnr_db = 20\nrho = 0.9\n").unwrap();
    let p = path.to_str().unwrap();
    let from_file = run(&["analytic", "--config", p, "--eval", "closed"]);
    assert!(
        from_file.status.success(),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );
    let explicit = run(&[
        "analytic", "--scheme", "miso-tas", "--snr-db", "20", "--rho", "0.9", "--eval", "closed",
    ]);
    assert_eq!(from_file.stdout, explicit.stdout);

    let overridden = run(&["analytic", "--config", p, "--snr-db", "5", "--eval", "closed"]);
    let expected = run(&[
        "analytic", "--scheme", "miso-tas", "--snr-db", "5", "--rho", "0.9", "--eval", "closed",
    ]);
    assert_eq!(overridden.stdout, expected.stdout);
}

#[test]
fn json_output_and_file_target() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = run(&[
        "analytic",
        "--scheme",
        "mu-tas",
        "--nu",
        "3",
        "--snr-db",
        "10",
        "--rho",
        "0.8",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.trim_start().starts_with('['));
    assert_eq!(text.matches("\"evaluator\"").count(), 2);
}

#[test]
fn codebook_round_trip_through_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cb.txt");
    let o = run(&[
        "gen-codebook",
        "--nt",
        "4",
        "--size",
        "8",
        "--seed",
        "5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = run(&[
        "simulate",
        "--scheme",
        "miso-rvq",
        "--codebook-size",
        "8",
        "--snr-db",
        "10",
        "--rho",
        "0.9",
        "--seed",
        "1",
        "--trials",
        "10000",
        "--codebook-file",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn codebook_size_reports_the_minimum() {
    let o = run(&[
        "codebook-size",
        "--snr-db",
        "10",
        "--rho-values",
        "0.95",
        "--targets",
        "0.1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().contains(",attained,167,"), "{text}");
}
