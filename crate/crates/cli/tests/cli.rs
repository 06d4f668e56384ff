use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const ANNULUS: [&str; 8] = [
    "--family", "annulus", "--R", "1", "--r", "0.8", "--delta", "0.1",
];

fn l1tv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l1tv"))
        .args(args)
        .env_remove("L1TV_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .unwrap()
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn energy_lists_every_candidate_and_the_winner() {
    let out = l1tv(&with(&["energy"], &with(&ANNULUS, &["--lambda", "10"])));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "candidate,validity,perimeter,fidelity_area,total");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("S1:outer-disc,valid,"));
    assert!(lines[6].starts_with("winner,S4:opening,,,"));
    let total: f64 = lines[3].rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(total, 3.6 * std::f64::consts::PI);
}

#[test]
fn energy_rejects_inadmissible_input() {
    let out = l1tv(&with(&["energy"], &with(&ANNULUS, &["--lambda", "2"])));
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("2/λ < r"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&l1tv(&["--help"])), 0);
    assert_eq!(code(&l1tv(&["--version"])), 0);
    assert_eq!(
        code(&l1tv(&["energy", "--family", "annulus", "--lambda", "ten"])),
        1
    );
    assert_eq!(code(&l1tv(&["energy", "--family", "torus"])), 1);
    assert_eq!(
        code(&l1tv(&["energy", "--family", "annulus", "--lambda", "10"])),
        1
    );
    assert_eq!(code(&l1tv(&["frobnicate"])), 1);
    assert_eq!(
        code(&l1tv(&[
            "phase",
            "--family",
            "disc",
            "--R",
            "1",
            "--x",
            "lambda:1:2",
            "--y",
            "R:1:2:3",
            "--out",
            "x"
        ])),
        1
    );
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_l1tv"))
        .args(with(&["energy"], &with(&ANNULUS, &["--lambda", "10"])))
        .env("L1TV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn phase_writes_table_image_and_touching_curve() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("nested/run");
    let out = l1tv(&[
        "phase",
        "--family",
        "annulus",
        "--R",
        "1",
        "--r",
        "0.8",
        "--x",
        "delta:0.01:0.19:7",
        "--y",
        "lambda:2.6:12:5",
        "--out",
        prefix.to_str().unwrap(),
        "--image",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let rows = read_csv(&dir.path().join("nested/run.csv"));
    assert_eq!(rows.len(), 1 + 35);
    assert_eq!(rows[0].len(), 4 + 5 + 5 + 2);
    assert_eq!(rows[0][14], "winner");
    // The second axis is the outer loop.
    assert_eq!(rows[1][3], rows[7][3]);
    assert_ne!(rows[1][1], rows[2][1]);

    let pgm = fs::read(dir.path().join("nested/run.pgm")).unwrap();
    let header = b"P5\n7 5\n255\n";
    assert_eq!(&pgm[..header.len()], header);
    assert_eq!(pgm.len(), header.len() + 35);
    // Every admissible pixel is 40 i or 255.
    assert!(pgm[header.len()..].iter().all(|&v| v % 40 == 0 || v == 255));

    let touch = read_csv(&dir.path().join("nested/run_touch.csv"));
    assert_eq!(
        touch[0],
        ["lambda", "delta_star", "residual", "root_count", "status"]
    );
    assert_eq!(touch.len(), 1 + 5);
    let solved: Vec<_> = touch[1..].iter().filter(|r| r[4] == "ok").collect();
    assert!(!solved.is_empty());
    for row in solved {
        let delta: f64 = row[1].parse().unwrap();
        assert!(delta > 0.0 && delta < 0.2);
    }
}

#[test]
fn phase_keeps_inadmissible_cells() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("bad");
    // λ ≤ 2/r everywhere.
    let out = l1tv(&[
        "phase",
        "--family",
        "annulus",
        "--R",
        "1",
        "--r",
        "0.8",
        "--x",
        "delta:0.05:0.15:3",
        "--y",
        "lambda:1:2:3",
        "--out",
        prefix.to_str().unwrap(),
        "--image",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_csv(&dir.path().join("bad.csv"));
    assert_eq!(rows.len(), 10);
    assert!(rows[1..].iter().all(|r| r[14] == "inadmissible"));
    let pgm = fs::read(dir.path().join("bad.pgm")).unwrap();
    assert!(pgm.ends_with(&[0; 9]));
}

#[test]
fn phase_output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let prefix = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_l1tv"))
            .args([
                "phase",
                "--family",
                "square",
                "--r",
                "1",
                "--delta",
                "0.1",
                "--x",
                "L:0.5:4:20",
                "--y",
                "lambda:14.3:19:20",
                "--out",
                prefix.to_str().unwrap(),
                "--image",
            ])
            .env("L1TV_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        (
            fs::read(dir.path().join(format!("{name}.csv"))).unwrap(),
            fs::read(dir.path().join(format!("{name}.pgm"))).unwrap(),
        )
    };
    assert_eq!(run("one", "1"), run("four", "4"));
}

#[test]
fn verify_passes_on_the_reference_annulus() {
    let out = l1tv(&with(
        &["verify", "--resolution", "512"],
        &with(&ANNULUS, &["--lambda", "10"]),
    ));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("problem,check,analytic,oracle,error,tolerance,status\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));
}

#[test]
fn verify_reports_consistent_infeasibility() {
    let out = l1tv(&with(
        &["verify", "--resolution", "256"],
        &with(&ANNULUS, &["--lambda", "2"]),
    ));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains(",consistent-infeasible\n"));
}

#[test]
fn verify_fails_under_tight_tolerances() {
    let out = l1tv(&with(
        &[
            "verify",
            "--resolution",
            "256",
            "--angle-tol",
            "1e-12",
            "--energy-tol",
            "1e-12",
            "--raster-tol",
            "1e-12",
        ],
        &with(&ANNULUS, &["--lambda", "10"]),
    ));
    assert_eq!(code(&out), 5);
    assert!(stdout(&out).contains(",fail\n"));
}

#[test]
fn verify_reads_sample_files() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.txt");
    fs::write(
        &samples,
        "# reference problems\n\
         family=annulus R=1 r=0.8 delta=0.1 lambda=10\n\
         \n\
         family=dumbbell R=1 r=0.3 L=1 delta=0.2 lambda=8\n",
    )
    .unwrap();
    let report = dir.path().join("report.csv");
    let out = l1tv(&[
        "verify",
        "--family",
        "disc",
        "--resolution",
        "256",
        "--samples",
        samples.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_csv(&report);
    assert!(rows.iter().any(|r| r[0].starts_with("annulus R=1")));
    assert!(rows
        .iter()
        .any(|r| r[0] == "dumbbell R=1 r=0.3 L=1 delta=0.2 lambda=8"));

    fs::write(&samples, "family=annulus R=1 r=oops\n").unwrap();
    let out = l1tv(&[
        "verify",
        "--family",
        "disc",
        "--samples",
        samples.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("samples.txt:1"));
}

#[test]
fn solve_writes_mask_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("disc");
    let out = l1tv(&[
        "solve",
        "--family",
        "disc",
        "--R",
        "1",
        "--lambda",
        "4",
        "--resolution",
        "128",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = fs::read_to_string(dir.path().join("disc.csv")).unwrap();
    assert_eq!(summary, stdout(&out));
    let rows = read_csv(&dir.path().join("disc.csv"));
    assert_eq!(rows[0][8], "classification");
    assert_eq!(rows[1][8], "S2:omega");
    assert_eq!(rows[1][6], "S2:omega");
    assert_eq!(rows[1][4], rows[1][5], "energy equals max flow");
    let pgm = fs::read(dir.path().join("disc.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n"));
}

#[test]
fn solve_checks_admissibility_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("x");
    let p = prefix.to_str().unwrap();
    let out = l1tv(&with(
        &["solve", "--out", p],
        &with(&ANNULUS, &["--lambda", "2"]),
    ));
    assert_eq!(code(&out), 2);
    let out = l1tv(&[
        "solve",
        "--family",
        "disc",
        "--R",
        "1",
        "--lambda",
        "4",
        "--resolution",
        "1000000",
        "--out",
        p,
    ]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(!dir.path().join("x.pgm").exists());
    let out = l1tv(&[
        "solve",
        "--family",
        "disc",
        "--R",
        "1",
        "--lambda",
        "4",
        "--stencil",
        "12",
        "--out",
        p,
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn novel_minimizers_exit_three_after_writing_outputs() {
    // Thin square annulus where the discrete minimizer trims the corners of
    // the opening beyond the classification threshold.
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("thin");
    let out = l1tv(&[
        "solve",
        "--family",
        "square",
        "--r",
        "1",
        "--L",
        "1.94",
        "--delta",
        "0.06",
        "--lambda",
        "29.75",
        "--resolution",
        "1024",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    let rows = read_csv(&dir.path().join("thin.csv"));
    assert_eq!(rows[1][8], "novel");
    assert!(dir.path().join("thin.pgm").exists());
}
