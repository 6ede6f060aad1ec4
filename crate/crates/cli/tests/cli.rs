#![allow(clippy::excessive_precision)]

use assert_cmd::Command;
use std::fs;

fn singosc() -> Command {
    Command::cargo_bin("singosc").unwrap()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = singosc().args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Data rows of a CSV document, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn assert_single_line_error(r: &Run, code: i32) {
    assert_eq!(r.code, code, "stderr: {}", r.stderr);
    assert_eq!(r.stderr.lines().count(), 1, "{}", r.stderr);
    assert!(r.stderr.starts_with("error: "), "{}", r.stderr);
}

#[test]
fn identity_table_at_zero_rho() {
    let r = run(&["table", "--rho", "0", "--max", "3"]);
    assert_eq!(r.code, 0);
    let expected = "m,n,w\n\
        0,0,1.0000000000000000e0\n\
        1,1,1.0000000000000000e0\n\
        2,2,1.0000000000000000e0\n\
        3,3,1.0000000000000000e0\n\
        # tail_mass m=0 0.0000000000000000e0\n\
        # tail_mass m=1 0.0000000000000000e0\n\
        # tail_mass m=2 0.0000000000000000e0\n\
        # tail_mass m=3 0.0000000000000000e0\n";
    assert_eq!(r.stdout, expected);
}

#[test]
fn boundary_coupling_gives_a_geometric_column() {
    let r = run(&[
        "table",
        "--g",
        "-1",
        "--allow-boundary",
        "--rho",
        "0.5",
        "--m",
        "0",
        "--max-n",
        "5",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let data = rows(&r.stdout);
    assert_eq!(data.len(), 6);
    for (n, row) in data.iter().enumerate() {
        assert_eq!(row[0], "0");
        assert_eq!(num(&row[1]) as usize, n);
        let exact = 0.5f64.powi(n as i32 + 1);
        assert!((num(&row[2]) - exact).abs() < 1e-15 * exact.max(1e-300) + 1e-17);
    }
    assert!(r.stdout.contains("# tail_mass m=0 1.5625"));
}

#[test]
fn boundary_coupling_needs_the_flag() {
    let r = run(&["table", "--g", "-1", "--rho", "0.5"]);
    assert_single_line_error(&r, 2);
    assert!(r.stderr.contains("--g") && r.stderr.contains("allow_boundary"));
}

#[test]
fn table_rows_plus_tail_sum_to_one() {
    let r = run(&[
        "table", "--g", "2", "--rho", "0.3", "--max-m", "4", "--max-n", "30",
    ]);
    assert_eq!(r.code, 0);
    let mut sums = [0.0f64; 5];
    for row in rows(&r.stdout) {
        sums[row[0].parse::<usize>().unwrap()] += num(&row[2]);
    }
    let tails: Vec<f64> = r
        .stdout
        .lines()
        .filter_map(|l| l.strip_prefix("# tail_mass m="))
        .map(|l| num(l.split_whitespace().nth(1).unwrap()))
        .collect();
    assert_eq!(tails.len(), 5);
    for (sum, tail) in sums.iter().zip(&tails) {
        assert!((sum + tail - 1.0).abs() < 1e-12, "{sum} + {tail}");
    }
}

#[test]
fn rho_of_standard_profiles() {
    let r = run(&[
        "rho",
        "--profile",
        "sudden_jump",
        "--omega-minus",
        "1",
        "--omega-plus",
        "3",
    ]);
    assert_eq!(r.code, 0);
    let row = &rows(&r.stdout)[0];
    assert!((num(&row[0]) - 0.25).abs() < 1e-9);
    assert!(num(&row[3]) < 1e-8);

    let r = run(&["rho", "--profile", "constant", "--omega", "1.7"]);
    assert!(num(&rows(&r.stdout)[0][0]) < 1e-20);

    let r = run(&[
        "rho",
        "--profile",
        "tanh_step",
        "--omega-minus",
        "1",
        "--omega-plus",
        "2",
        "--tau",
        "20",
    ]);
    assert!(num(&rows(&r.stdout)[0][0]) < 1e-6);
}

#[test]
fn invalid_profiles_are_config_errors() {
    let r = run(&[
        "rho",
        "--profile",
        "sudden_jump",
        "--omega-minus",
        "0",
        "--omega-plus",
        "3",
    ]);
    assert_single_line_error(&r, 2);
    assert!(r.stderr.contains("omega_minus"), "{}", r.stderr);
    let r = run(&["rho", "--profile", "zigzag"]);
    assert_single_line_error(&r, 2);
    assert!(r.stderr.contains("tanh_step"));
    let r = run(&["rho"]);
    assert_single_line_error(&r, 2);
}

#[test]
fn generating_functions() {
    let r = run(&["gen", "--rho", "0.4", "--m", "0", "--z", "1,0"]);
    let g0 = rows(&r.stdout);
    let r = run(&["gen", "--rho", "0.4", "--m", "1", "--z", "1,0"]);
    let g1 = rows(&r.stdout);
    assert!((num(&g0[0][3]) - 1.0).abs() < 1e-12);
    assert!((num(&g1[0][3]) - 1.0).abs() < 1e-12);

    let table = rows(&run(&["table", "--rho", "0.4", "--max", "1"]).stdout);
    let w = |m: &str, n: &str| num(&table.iter().find(|r| r[0] == m && r[1] == n).unwrap()[2]);
    assert!((num(&g0[1][3]) - w("0", "0")).abs() < 1e-15);
    assert!((num(&g1[1][3]) - w("1", "0")).abs() < 1e-15);
}

#[test]
fn generating_function_pole_is_a_domain_error() {
    let r = run(&["gen", "--rho", "0.5", "--z", "2"]);
    assert_single_line_error(&r, 4);
    let r = run(&["gen", "--rho", "0.5", "--m", "2", "--z", "0"]);
    assert_single_line_error(&r, 2);
}

#[test]
fn adiabatic_invariant() {
    let r = run(&["invariant", "--rho", "0"]);
    assert_eq!(num(&rows(&r.stdout)[0][2]), 1.0);
    for m in 0..=4 {
        let m = m.to_string();
        let r = run(&["invariant", "--rho", "0.5", "--g", "2", "--m", &m]);
        let row = &rows(&r.stdout)[0];
        assert_eq!(num(&row[2]), 3.0);
        assert!(num(&row[4]) < 1e-8);
    }
}

#[test]
fn levels_and_single_entries() {
    let r = run(&["levels", "--g", "0", "--omega", "2", "--max", "2"]);
    assert_eq!(
        r.stdout,
        "n,energy\n0,3.0000000000000000e0\n1,7.0000000000000000e0\n2,1.1000000000000000e1\n"
    );
    let a = run(&["wmn", "--rho", "0.4", "--m", "2", "--n", "5"]);
    let b = run(&[
        "wmn",
        "--rho",
        "0.4",
        "--m",
        "2",
        "--n",
        "5",
        "--method",
        "hypergeometric",
    ]);
    let (a, b) = (num(&rows(&a.stdout)[0][3]), num(&rows(&b.stdout)[0][3]));
    assert!((a - 0.034_784_347_867_625_749).abs() < 1e-15 && (a - b).abs() < 1e-15);
    let r = run(&["wmn", "--rho", "0.4", "--m", "2"]);
    assert_single_line_error(&r, 2);
}

#[test]
fn rho_out_of_range_is_rejected() {
    for bad in ["1.5", "-0.1", "1"] {
        let r = run(&["table", "--rho", bad]);
        assert_single_line_error(&r, 2);
        assert!(r.stderr.contains("rho"));
    }
}

#[test]
fn tsv_and_precision() {
    let r = run(&[
        "table",
        "--rho",
        "0.5",
        "--max",
        "1",
        "--format",
        "tsv",
        "--precision",
        "4",
    ]);
    assert!(r.stdout.starts_with("m\tn\tw\n0\t0\t"));
    assert!(r.stdout.lines().nth(1).unwrap().ends_with("e-1"));
    let r = run(&["table", "--rho", "0.5", "--format", "xml"]);
    assert_single_line_error(&r, 2);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = [
        "rho",
        "--profile",
        "tanh_step",
        "--omega-minus",
        "1",
        "--omega-plus",
        "2",
        "--tau",
        "1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.csv");
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let c = run(&with_out);
    assert_eq!(c.code, 0);
    assert!(c.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), a.stdout);
}

#[test]
fn config_file_with_table_profile_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = String::from("# t omega\n");
    for i in 0..=1600 {
        let t = -20.0 + 40.0 * i as f64 / 1600.0;
        table.push_str(&format!("{t} {}\n", 1.5 + 0.5 * t.tanh()));
    }
    fs::write(dir.path().join("omega.txt"), table).unwrap();
    let cfg = dir.path().join("run.ini");
    fs::write(
        &cfg,
        "[model]\ng = 3\n\n[profile]\nkind = table\nfile = omega.txt\n\n[task]\nmax = 2\n\n[output]\nprecision = 10\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();

    let r = run(&["--config", c, "table"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(rows(&r.stdout).len(), 9);
    assert!(rows(&r.stdout)[0][2].len() < 18);

    let r = run(&["--config", c, "table", "--max", "1", "--precision", "17"]);
    assert_eq!(rows(&r.stdout).len(), 4);

    let direct = run(&[
        "rho",
        "--profile",
        "tanh_step",
        "--omega-minus",
        "1",
        "--omega-plus",
        "2",
        "--tau",
        "1",
    ]);
    let from_table = run(&["--config", c, "rho"]);
    let (a, b) = (
        num(&rows(&direct.stdout)[0][0]),
        num(&rows(&from_table.stdout)[0][0]),
    );
    assert!((a - b).abs() < 1e-5 * a, "{a} vs {b}");
}

#[test]
fn config_errors_name_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.ini");
    fs::write(&cfg, "[model]\ng = 1\n[task]\nrho = lots\n").unwrap();
    let r = run(&["--config", cfg.to_str().unwrap(), "table"]);
    assert_single_line_error(&r, 2);
    assert!(r.stderr.contains("bad.ini:4"), "{}", r.stderr);

    fs::write(&cfg, "[model]\ng = 1\ncolour = blue\n").unwrap();
    let r = run(&["--config", cfg.to_str().unwrap(), "table", "--rho", "0.1"]);
    assert_single_line_error(&r, 2);
    assert!(r.stderr.contains("bad.ini:3"), "{}", r.stderr);

    fs::write(&cfg, "[model]\ng = -3\n").unwrap();
    let r = run(&["--config", cfg.to_str().unwrap(), "table", "--rho", "0.1"]);
    assert_single_line_error(&r, 2);
    assert!(r.stderr.contains("bad.ini:2"), "{}", r.stderr);

    let r = run(&[
        "--config",
        dir.path().join("missing.ini").to_str().unwrap(),
        "table",
    ]);
    assert_single_line_error(&r, 2);
}

#[test]
fn argument_errors_exit_with_config_code() {
    assert_single_line_error(&run(&["frobnicate"]), 2);
    assert_single_line_error(&run(&["table", "--rho", "abc"]), 2);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("verify"));
}

#[test]
fn verify_constant_profile() {
    let r = run(&[
        "verify",
        "--profile",
        "constant",
        "--omega",
        "1.3",
        "--basis",
        "60",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let diff = r
        .stdout
        .lines()
        .find_map(|l| l.strip_prefix("# max_abs_diff "))
        .unwrap();
    assert!(num(diff) < 1e-10);
    assert!(r.stdout.contains("# status pass"));
}

#[test]
fn verify_standard_tanh_case() {
    let r = run(&[
        "verify",
        "--profile",
        "tanh_step",
        "--omega-minus",
        "1",
        "--omega-plus",
        "2",
        "--tau",
        "1",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(rows(&r.stdout).len(), 36);
    let diff = r
        .stdout
        .lines()
        .find_map(|l| l.strip_prefix("# max_abs_diff "))
        .unwrap();
    assert!(num(diff) < 1e-4);
}

#[test]
fn verify_fails_on_tiny_basis_or_tight_tolerance() {
    let r = run(&[
        "verify",
        "--profile",
        "tanh_step",
        "--omega-minus",
        "1",
        "--omega-plus",
        "2",
        "--tau",
        "1",
        "--basis",
        "20",
    ]);
    assert_single_line_error(&r, 3);

    let r = run(&[
        "verify",
        "--profile",
        "sudden_jump",
        "--omega-minus",
        "1",
        "--omega-plus",
        "8",
        "--width",
        "0.01",
        "--basis",
        "24",
        "--max",
        "1",
    ]);
    assert_single_line_error(&r, 3);
    assert!(r.stderr.contains("leakage"));

    let r = run(&[
        "verify",
        "--profile",
        "tanh_step",
        "--omega-minus",
        "1",
        "--omega-plus",
        "2",
        "--tau",
        "1",
        "--basis",
        "40",
        "--max",
        "2",
        "--tol",
        "1e-14",
    ]);
    assert_single_line_error(&r, 3);
    assert!(r.stdout.contains("# status fail"));
}
