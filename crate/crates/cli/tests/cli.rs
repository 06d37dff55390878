use std::path::Path;
use std::process::{Command, Output};

use fif_cli::model_file::{ModelFile, Provenance};
use fif_core::collage::FitReport;
use fif_core::ifs::{build_model, Knots};

fn fif(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fif"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_csv_column(path: &Path, column: usize) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(column).unwrap().parse().unwrap())
        .collect()
}

fn tent_model(dir: &Path) -> std::path::PathBuf {
    let knots = Knots::from_xy(&[0.0, 0.5, 1.0], &[0.0, 0.5, 0.0]).unwrap();
    let model = build_model(knots, &[0.5, 0.5]).unwrap();
    let report = FitReport {
        d: vec![0.5, 0.5],
        clamped: vec![false; 2],
        degenerate: vec![false; 2],
        collage_rss: 0.0,
        samples: 0,
        contraction_factor: 0.5,
        collage_bound: 0.0,
    };
    let path = dir.join("tent.json");
    ModelFile::fractal(&model, &report, None, Provenance::new("tent".into(), None))
        .write(&path)
        .unwrap();
    path
}

#[test]
fn gen_polynomial_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let o = fif(dir.path(), &["gen", "--kind", "polynomial", "--m", "10000", "--out", "poly"]);
    assert!(o.status.success());
    let w = read_csv_column(&dir.path().join("poly/series.csv"), 1);
    assert_eq!(w.len(), 10_000);
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    let msq = w.iter().map(|v| v * v).sum::<f64>() / w.len() as f64;
    assert!(mean.abs() <= 1e-12);
    assert!((msq - 1.0).abs() <= 1e-12);
    let raw = read_csv_column(&dir.path().join("poly/raw.csv"), 1);
    assert_eq!(raw[0], 0.0);
}

#[test]
fn gen_random_walk_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = fif(dir.path(), &["gen", "--kind", "random-walk", "--m", "10000", "--seed", "7", "--out", out]);
        assert!(o.status.success());
    }
    for file in ["raw.csv", "series.csv", "normalization.json"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn gen_dna_walk_has_sequence_length() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("seq.fasta"), ">test sequence\nACGTTGCA\nggat\n\nAC\n").unwrap();
    let o = fif(dir.path(), &["gen", "--kind", "dna", "--input", "seq.fasta", "--out", "dna"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let raw = read_csv_column(&dir.path().join("dna/raw.csv"), 1);
    assert_eq!(raw.len(), 14);
    assert_eq!(&raw[..4], &[0.0, -1.0, 0.0, -1.0]);

    let missing = fif(dir.path(), &["gen", "--kind", "dna", "--out", "x"]);
    assert_eq!(missing.status.code(), Some(2));

    std::fs::write(dir.path().join("bad.txt"), "ACGU").unwrap();
    let bad = fif(dir.path(), &["gen", "--kind", "dna", "--input", "bad.txt", "--out", "x"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn fit_polynomial_benchmark_matches_reference_scalings() {
    let dir = tempfile::tempdir().unwrap();
    assert!(fif(dir.path(), &["gen", "--kind", "polynomial", "--out", "poly"]).status.success());
    let o = fif(
        dir.path(),
        &["fit", "--series", "poly/series.csv", "--knots", "500,4000,7500", "--out", "model.json", "--report", "report.json"],
    );
    assert!(o.status.success());
    let model = ModelFile::read(&dir.path().join("model.json")).unwrap();
    let fif_cli::model_file::Parameters::Fractal(segments) = &model.parameters else {
        panic!("expected fractal parameters");
    };
    assert_eq!(segments.len(), 4);
    for (s, want) in segments.iter().zip([0.066, 0.155, 0.033, 0.096]) {
        assert!((s.d - want).abs() <= 0.005);
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["method"], "fractal");
    assert_eq!(report["d"].as_array().unwrap().len(), 4);
}

#[test]
fn fit_usage_and_strict_errors() {
    let dir = tempfile::tempdir().unwrap();
    // tall bump on a short first segment forces clamping
    let mut csv = String::from("value\n");
    for z in 1..=201 {
        let z = z as f64;
        let w = if z <= 11.0 {
            10.0 * (std::f64::consts::PI * (z - 1.0) / 10.0).sin()
        } else {
            0.5 * (std::f64::consts::PI * (z - 11.0) / 190.0).sin()
        };
        csv.push_str(&format!("{w}\n"));
    }
    std::fs::write(dir.path().join("bump.csv"), csv).unwrap();

    let relaxed = fif(dir.path(), &["fit", "--series", "bump.csv", "--knots", "11", "--out", "m.json"]);
    assert!(relaxed.status.success());
    assert!(stdout(&relaxed).contains("clamped"));

    let strict = fif(dir.path(), &["fit", "--series", "bump.csv", "--knots", "11", "--out", "m.json", "--strict"]);
    assert_eq!(strict.status.code(), Some(1));

    let missing = fif(dir.path(), &["fit", "--series", "bump.csv", "--out", "m.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let no_n = fif(dir.path(), &["fit", "--series", "bump.csv", "--knots-mode", "extrema"]);
    assert_eq!(no_n.status.code(), Some(2));

    let bad_flag = fif(dir.path(), &["fit", "--bogus"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let reserved = fif(dir.path(), &["fit", "--series", "bump.csv", "--knots", "1,50"]);
    assert_eq!(reserved.status.code(), Some(1));

    let bad_dmax = fif(dir.path(), &["fit", "--series", "bump.csv", "--knots", "50", "--d-max", "1.5"]);
    assert_eq!(bad_dmax.status.code(), Some(2));
}

#[test]
fn fit_extrema_mode() {
    let dir = tempfile::tempdir().unwrap();
    assert!(fif(dir.path(), &["gen", "--kind", "random-walk", "--m", "3000", "--seed", "4", "--out", "rw"]).status.success());
    let o = fif(
        dir.path(),
        &["fit", "--series", "rw/series.csv", "--knots-mode", "extrema", "--n", "9", "--out", "m.json"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let model = ModelFile::read(&dir.path().join("m.json")).unwrap();
    assert_eq!(model.knots.len(), 10);
}

#[test]
fn eval_tent_interpolates_knots() {
    let dir = tempfile::tempdir().unwrap();
    let model = tent_model(dir.path());
    let o = fif(dir.path(), &["eval", "--model", model.to_str().unwrap(), "--grid", "1025", "--out", "curve.csv"]);
    assert!(o.status.success());
    let xs = read_csv_column(&dir.path().join("curve.csv"), 0);
    let vs = read_csv_column(&dir.path().join("curve.csv"), 1);
    assert_eq!(xs.len(), 1025);
    for (x, y) in [(0.0, 0.0), (0.5, 0.5), (1.0, 0.0)] {
        let j = xs.iter().position(|&v| v == x).unwrap();
        assert_eq!(vs[j], y);
    }

    let chord = fif(dir.path(), &["eval", "--model", model.to_str().unwrap(), "--grid", "9", "--depth", "0"]);
    let values: Vec<f64> = stdout(&chord).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(values.iter().all(|&v| v == 0.0));
}

#[test]
fn eval_quadratic_and_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv: String = std::iter::once("value\n".to_owned())
        .chain((1..=50).map(|m| format!("{}\n", ((m as f64) * 0.3).sin())))
        .collect();
    std::fs::write(dir.path().join("s.csv"), csv).unwrap();
    assert!(fif(dir.path(), &["fit", "--method", "quadratic", "--series", "s.csv", "--knots", "20", "--out", "q.json"])
        .status
        .success());
    let o = fif(dir.path(), &["eval", "--model", "q.json", "--grid", "3"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines[1], format!("1,{}", 0.3f64.sin()));
    assert_eq!(lines[3], format!("50,{}", 15.0f64.sin()));

    std::fs::write(dir.path().join("far.csv"), "z,w\n0,1\n60,1\n").unwrap();
    let outside = fif(dir.path(), &["eval", "--model", "q.json", "--at", "far.csv"]);
    assert_eq!(outside.status.code(), Some(1));

    let none = fif(dir.path(), &["eval", "--model", "q.json"]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn compare_chord_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let csv: String = (0..100).map(|k| format!("{}\n", 0.5 * k as f64 - 7.0)).collect();
    std::fs::write(dir.path().join("chord.csv"), csv).unwrap();
    let run = || fif(dir.path(), &["compare", "--series", "chord.csv", "--knots", "30,60", "--format", "json"]);
    let first = run();
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&run()));
    let table: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    let row = &table["rows"][0];
    assert!(row["fractal_rms"].as_f64().unwrap() <= 1e-9);
    assert!(row["quadratic_rms"].as_f64().unwrap() <= 1e-9);
}
