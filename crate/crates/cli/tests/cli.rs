use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use quake_core::io::read_lamination;

fn quakelab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quakelab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV report, header included, comments dropped.
fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn gen_dyadic_has_fifteen_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let o = quakelab(
        &[
            "gen", "--family", "dyadic", "--depth", "4", "--rule", "pow2", "-o", "d.txt",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(
        read_lamination(&dir.path().join("d.txt")).unwrap().len(),
        15
    );
}

#[test]
fn gen_random_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen", "--family", "random", "--atoms", "10", "--norm", "1.0", "--seed", "7", "-o",
    ];
    for f in ["a.txt", "b.txt"] {
        let mut v = args.to_vec();
        v.push(f);
        assert!(quakelab(&v, dir.path()).status.success());
    }
    let a = fs::read(dir.path().join("a.txt")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.txt")).unwrap());
    let mu = read_lamination(&dir.path().join("a.txt")).unwrap();
    assert_eq!(mu.len(), 10);
    assert!((mu.thurston_norm() - 1.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        quakelab(&["gen", "--family", "random", "--atoms", "3"], dir.path())
            .status
            .code(),
        Some(1)
    );
    fs::write(dir.path().join("x.txt"), "0 1 1\n").unwrap();
    assert_eq!(
        quakelab(&["qs", "x.txt"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(
        quakelab(&["norm", "missing.txt", "--seed", "1"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        quakelab(
            &["gen", "--family", "dyadic", "--depth", "2", "--rule", "bogus"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(quakelab(&["bogus"], dir.path()).status.code(), Some(1));
}

#[test]
fn norm_reports() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("empty.txt"), "").unwrap();
    fs::write(p.join("one.txt"), "0.5 2.0 2.5\n").unwrap();
    assert!(quakelab(
        &["gen", "--family", "fan", "--atoms", "5", "-o", "fan.txt"],
        p
    )
    .status
    .success());
    for (file, want) in [("empty.txt", 0.0), ("one.txt", 2.5), ("fan.txt", 5.0)] {
        let o = quakelab(&["norm", file, "--seed", "1", "--samples", "20000"], p);
        assert!(o.status.success());
        let rows = csv_rows(&o);
        assert_eq!(rows[0][0], "exact_norm");
        assert!((num(&rows[1][0]) - want).abs() < 1e-12, "{file}");
        assert!(num(&rows[1][1]) <= want + 1e-12);
    }
    assert!(stdout(&quakelab(&["norm", "one.txt", "--seed", "9"], p)).contains("# seed = 9"));
}

#[test]
fn boundary_of_empty_is_identity_and_monotone_otherwise() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("empty.txt"), "# nothing\n").unwrap();
    let rows = csv_rows(&quakelab(&["boundary", "empty.txt", "--grid", "64"], p));
    assert_eq!(rows.len(), 65);
    for r in &rows[1..] {
        assert!((num(&r[0]) - num(&r[1])).abs() < 1e-15);
    }
    assert!(quakelab(
        &["gen", "--family", "random", "--atoms", "8", "--seed", "3", "-o", "r.txt"],
        p
    )
    .status
    .success());
    let o = quakelab(
        &[
            "boundary",
            "r.txt",
            "--grid",
            "2000",
            "--normalize",
            "--svg",
            "b.svg",
        ],
        p,
    );
    assert!(o.status.success());
    let lift: Vec<f64> = csv_rows(&o)[1..].iter().map(|r| num(&r[2])).collect();
    assert!(lift.windows(2).all(|w| w[1] > w[0]));
    let svg = fs::read_to_string(p.join("b.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.contains("boundary r.txt"));
}

#[test]
fn reports_for_empty_lamination_are_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("empty.txt"), "").unwrap();
    let qs = csv_rows(&quakelab(
        &["qs", "empty.txt", "--seed", "1", "--samples", "5000"],
        p,
    ));
    assert!((num(&qs[1][1]) - 2.0).abs() < 1e-9 && (num(&qs[2][1]) - 2.0).abs() < 1e-9);
    let sym = csv_rows(&quakelab(
        &["sym", "empty.txt", "--seed", "1", "--samples", "2000"],
        p,
    ));
    assert!(sym[1..].iter().all(|r| num(&r[1]) < 1e-9));
    let prof = csv_rows(&quakelab(
        &["profile", "empty.txt", "--seed", "1", "--samples", "2000"],
        p,
    ));
    assert!(prof[1..].iter().all(|r| num(&r[1]) == 0.0));
}

#[test]
fn sampling_commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("one.txt"), "0.5 2.0 1.0\n").unwrap();
    for args in [
        vec!["qs", "one.txt", "--seed", "4", "--samples", "5000"],
        vec!["sym", "one.txt", "--seed", "4", "--samples", "2000"],
        vec!["profile", "one.txt", "--seed", "4", "--samples", "2000"],
    ] {
        let a = stdout(&quakelab(&args, p));
        let mut seq = args.clone();
        seq.push("--sequential");
        assert_eq!(a, stdout(&quakelab(&seq, p)));
    }
}

fn write_sequence(p: &Path, members: &[&str], limit: &str) {
    let mut manifest = String::new();
    for (i, m) in members.iter().enumerate() {
        fs::write(p.join(format!("m{i}.txt")), m).unwrap();
        manifest.push_str(&format!("m{i}.txt\n"));
    }
    fs::write(p.join("limit.txt"), limit).unwrap();
    manifest.push_str("limit: limit.txt\n");
    fs::write(p.join("seq.manifest"), manifest).unwrap();
}

#[test]
fn converge_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write_sequence(p, &["1 2.5 1\n"; 6], "1 2.5 1\n");
    let o = quakelab(&["converge", "seq.manifest"], p);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(
        rows[0],
        [
            "index",
            "norm",
            "weak_star_discrepancy",
            "boundary_sup_distance"
        ]
    );
    assert!(rows[1..]
        .iter()
        .all(|r| num(&r[2]) == 0.0 && num(&r[3]) == 0.0));
    assert!(stdout(&o).contains("# verdict = PASS"));

    let members: Vec<String> = (0..10)
        .map(|i| {
            format!(
                "{} {} 1\n",
                1.0 + 0.04 / (i + 1) as f64,
                2.5 - 0.02 / (i + 1) as f64
            )
        })
        .collect();
    write_sequence(
        p,
        &members.iter().map(String::as_str).collect::<Vec<_>>(),
        "1 2.5 1\n",
    );
    assert_eq!(
        quakelab(&["converge", "seq.manifest", "--svg", "c.svg"], p)
            .status
            .code(),
        Some(0)
    );
    assert!(fs::read_to_string(p.join("c.svg"))
        .unwrap()
        .contains("polyline"));

    let alt: Vec<&str> = (0..10)
        .map(|i| if i % 2 == 0 { "1 2.5 1\n" } else { "4 5.5 1\n" })
        .collect();
    write_sequence(p, &alt, "1 2.5 1\n");
    let o = quakelab(&["converge", "seq.manifest"], p);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("# verdict = FAIL"));
}

#[test]
fn barycentric_reports() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("id.txt"), "0 0\n2 2\n4 4\n").unwrap();
    let rows = csv_rows(&quakelab(
        &["barycentric", "--tabulated", "id.txt", "--at", "0.3,0"],
        p,
    ));
    assert!((num(&rows[1][2]) - 0.3).abs() < 1e-8 && num(&rows[1][3]).abs() < 1e-8);
    assert!(num(&rows[1][4]) < 1e-8);

    fs::write(p.join("one.txt"), "0.4 2.2 1.0\n").unwrap();
    let coarse = csv_rows(&quakelab(
        &[
            "barycentric",
            "one.txt",
            "--profile",
            "--radii",
            "0.5,0.8",
            "--samples",
            "8",
        ],
        p,
    ));
    let fine = csv_rows(&quakelab(
        &[
            "barycentric",
            "one.txt",
            "--profile",
            "--radii",
            "0.5,0.8",
            "--samples",
            "8",
            "--quadrature",
            "2048",
        ],
        p,
    ));
    for (c, f) in coarse[1..].iter().zip(&fine[1..]) {
        assert!(num(&c[1]) > 1e-3);
        assert!((num(&c[1]) - num(&f[1])).abs() < 1e-3);
    }
    let o = quakelab(
        &[
            "barycentric",
            "one.txt",
            "--at",
            "0.3,0",
            "--max-iter",
            "0",
            "--tol",
            "1e-300",
        ],
        p,
    );
    assert_eq!(o.status.code(), Some(3));
}
