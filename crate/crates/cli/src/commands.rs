use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fif_core::analysis::{compare, CompareOptions, ComparisonRow};
use fif_core::collage::{fit_model, FitOptions, FitReport};
use fif_core::datasets::{
    gen_dna_walk, gen_polynomial, gen_random_walk, normalize, read_series_csv, select_knots,
    write_series_csv, ExtremaParams, KnotSelection, NormalizationParams,
};
use fif_core::ifs::Knots;
use fif_core::quadratic::{fit_quadratic, QuadReport};
use fif_core::series::Series;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{
    Cli, Command, CompareArgs, DataKind, EvalArgs, FitArgs, Format, GenArgs, GlobalArgs, KnotArgs,
    KnotsMode, Method,
};
use crate::error::{CliError, Result};
use crate::model_file::{ModelFile, Provenance};

/// Run a parsed command line; returns what should go to stdout.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(&cli.global, args),
        Command::Fit(args) => cmd_fit(&cli.global, args),
        Command::Eval(args) => cmd_eval(&cli.global, args),
        Command::Compare(args) => cmd_compare(&cli.global, args),
    }
}

fn sha256_label(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Load a series CSV and return it with the hash of its bytes.
fn load_series(path: &Path) -> Result<(Series, String)> {
    let bytes = read_bytes(path)?;
    let series = read_series_csv(bytes.as_slice(), path)?;
    Ok((series, sha256_label(&bytes)))
}

fn fit_options(global: &GlobalArgs) -> Result<FitOptions> {
    FitOptions::with_d_max(global.d_max).map_err(|e| CliError::Usage(e.to_string()))
}

fn knot_selection(args: &KnotArgs) -> Result<KnotSelection> {
    match args.knots_mode {
        KnotsMode::Manual => match &args.knots {
            Some(indices) if !indices.is_empty() => Ok(KnotSelection::Manual(indices.clone())),
            _ => Err(CliError::Usage(
                "missing interior knot indices: pass --knots i1,i2,... or --knots-mode extrema --n N"
                    .into(),
            )),
        },
        KnotsMode::Extrema => {
            if args.knots.is_some() {
                return Err(CliError::Usage("--knots cannot be combined with --knots-mode extrema".into()));
            }
            match args.n {
                Some(n) if n >= 2 => Ok(KnotSelection::Extrema(ExtremaParams {
                    interior: n - 1,
                    window: args.window,
                    prominence: args.prominence,
                })),
                Some(n) => Err(CliError::Usage(format!("--n must be at least 2, got {n}"))),
                None => Err(CliError::Usage("--knots-mode extrema requires --n".into())),
            }
        }
    }
}

fn maybe_normalize(series: Series, enabled: bool) -> Result<(Series, Option<NormalizationParams>)> {
    if enabled {
        let (s, params) = normalize(&series)?;
        Ok((s, Some(params)))
    } else {
        Ok((series, None))
    }
}

#[derive(Serialize)]
struct NormalizationSidecar {
    s1: f64,
    s2: f64,
    kind: &'static str,
    samples: usize,
    provenance: Provenance,
}

fn cmd_gen(global: &GlobalArgs, args: &GenArgs) -> Result<String> {
    let out = global
        .out
        .as_ref()
        .ok_or_else(|| CliError::Usage("gen requires --out <DIR>".into()))?;
    let (raw, kind, provenance) = match args.kind {
        DataKind::Polynomial => (
            gen_polynomial(args.m)?,
            "polynomial",
            Provenance::new("builtin:polynomial".into(), None),
        ),
        DataKind::RandomWalk => (
            gen_random_walk(args.m, global.seed)?,
            "random-walk",
            Provenance::new("builtin:random-walk".into(), Some(global.seed)),
        ),
        DataKind::Dna => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| CliError::Usage("--kind dna requires --input <FILE>".into()))?;
            let bytes = read_bytes(path)?;
            let text = String::from_utf8_lossy(&bytes);
            (
                gen_dna_walk(&text)?,
                "dna",
                Provenance::new(sha256_label(&bytes), None),
            )
        }
    };
    let (normalized, params) = normalize(&raw)?;

    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let raw_path = out.join("raw.csv");
    let series_path = out.join("series.csv");
    let sidecar_path = out.join("normalization.json");
    let mut buf = Vec::new();
    write_series_csv(&raw, &mut buf)?;
    write_file(&raw_path, &buf)?;
    buf.clear();
    write_series_csv(&normalized, &mut buf)?;
    write_file(&series_path, &buf)?;
    let sidecar = NormalizationSidecar {
        s1: params.s1,
        s2: params.s2,
        kind,
        samples: raw.len(),
        provenance,
    };
    write_file(&sidecar_path, to_json(&sidecar))?;

    Ok(match global.format {
        Format::Json => to_json(&sidecar),
        Format::Text => format!(
            "{kind}: {} samples, mean {}, deviation {}\nwrote {}, {}, {}\n",
            raw.len(),
            params.s1,
            params.s2,
            raw_path.display(),
            series_path.display(),
            sidecar_path.display()
        ),
    })
}

#[derive(Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
enum ReportFile {
    Fractal {
        knots: Vec<[f64; 2]>,
        #[serde(flatten)]
        report: FitReport,
    },
    Quadratic {
        knots: Vec<[f64; 2]>,
        #[serde(flatten)]
        report: QuadReport,
    },
}

fn knot_pairs(knots: &Knots) -> Vec<[f64; 2]> {
    knots.points().iter().map(|p| [p.x, p.y]).collect()
}

fn fractal_summary(report: &FitReport) -> String {
    let mut s = String::new();
    for (i, d) in report.d.iter().enumerate() {
        let mut flags = Vec::new();
        if report.clamped[i] {
            flags.push("clamped");
        }
        if report.degenerate[i] {
            flags.push("degenerate");
        }
        let _ = writeln!(s, "d_{} = {d:.6}{}", i + 1, if flags.is_empty() { String::new() } else { format!("  [{}]", flags.join(", ")) });
    }
    let _ = writeln!(s, "collage rms = {:.7}", report.collage_rms());
    let _ = writeln!(s, "contraction factor = {:.6}", report.contraction_factor);
    let _ = writeln!(s, "collage bound = {:.7}", report.collage_bound);
    s
}

fn quadratic_summary(model: &fif_core::quadratic::QuadModel, report: &QuadReport) -> String {
    let mut s = String::new();
    for (i, c) in model.coeffs().iter().enumerate() {
        let flag = if report.chord_only[i] { "  [chord]" } else { "" };
        let _ = writeln!(s, "q_{}: k = {:e}, r = {:e}, l = {:e}{flag}", i + 1, c.k, c.r, c.l);
    }
    let _ = writeln!(s, "rss = {:.7}", report.segment_rss.iter().sum::<f64>());
    s
}

fn cmd_fit(global: &GlobalArgs, args: &FitArgs) -> Result<String> {
    let selection = knot_selection(&args.knots)?;
    let options = fit_options(global)?;
    let (series, input) = load_series(&args.series)?;
    let (series, normalization) = maybe_normalize(series, args.normalize)?;
    let knots = select_knots(&series, &selection)?;
    let provenance = Provenance::new(input, None);

    let (model_file, report_file, summary, flagged) = match args.method {
        Method::Fractal => {
            let (model, report) = fit_model(&series, &knots, &options)?;
            let file = ModelFile::fractal(&model, &report, normalization, provenance);
            let summary = fractal_summary(&report);
            let flagged = report.any_flagged();
            (
                file,
                ReportFile::Fractal {
                    knots: knot_pairs(&knots),
                    report,
                },
                summary,
                flagged,
            )
        }
        Method::Quadratic => {
            let (model, report) = fit_quadratic(&series, &knots)?;
            let file = ModelFile::quadratic(&model, normalization, provenance);
            let summary = quadratic_summary(&model, &report);
            let flagged = report.any_flagged();
            (
                file,
                ReportFile::Quadratic {
                    knots: knot_pairs(&knots),
                    report,
                },
                summary,
                flagged,
            )
        }
    };

    let report_json = to_json(&report_file);
    if let Some(path) = &args.report {
        write_file(path, &report_json)?;
    }
    let stdout = match &global.out {
        Some(path) => {
            model_file.write(path)?;
            match global.format {
                Format::Json => report_json,
                Format::Text => summary,
            }
        }
        None => model_file.to_json(),
    };
    if global.strict && flagged {
        return Err(CliError::Strict(
            "fit clamped or degenerated on at least one segment".into(),
        ));
    }
    Ok(stdout)
}

fn cmd_eval(global: &GlobalArgs, args: &EvalArgs) -> Result<String> {
    let model = ModelFile::read(&args.model)?.to_model()?;
    let (a, b) = model.domain();
    let xs: Vec<f64> = match (&args.grid, &args.at) {
        (Some(n), _) => {
            if *n < 2 {
                return Err(CliError::Usage("--grid needs at least 2 points".into()));
            }
            let last = (*n - 1) as f64;
            (0..*n)
                .map(|k| {
                    let t = k as f64 / last;
                    a * (1.0 - t) + b * t
                })
                .collect()
        }
        (None, Some(path)) => load_series(path)?.0.abscissae().to_vec(),
        (None, None) => return Err(CliError::Usage("pass --grid <N> or --at <CSV>".into())),
    };
    let mut csv = String::from("x,value\n");
    for x in xs {
        let v = model.evaluate(x, global.depth)?;
        let _ = writeln!(csv, "{x},{v}");
    }
    match &global.out {
        Some(path) => {
            write_file(path, &csv)?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

#[derive(Serialize)]
struct ComparisonTable {
    rows: Vec<ComparisonRow>,
    provenance: Vec<Provenance>,
}

fn render_table(rows: &[ComparisonRow]) -> String {
    let mut s = format!(
        "{:<16} {:>12} {:>12} {:>12} {:>12} {:>6}\n",
        "dataset", "fractal", "quadratic", "bound", "max|d|", "depth"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<16} {:>12.7} {:>12.7} {:>12.7} {:>12.6} {:>6}{}",
            r.dataset,
            r.fractal_rms,
            r.quadratic_rms,
            r.collage_bound,
            r.contraction_factor,
            r.eval_depth,
            if r.clamped { "  clamped" } else { "" }
        );
    }
    s
}

/// Polynomial benchmark knots, as 1-based interior sample indices.
pub const POLYNOMIAL_KNOTS: [usize; 3] = [500, 4000, 7500];
pub const EXAMPLE_SAMPLES: usize = 10_000;
pub const WALK_SEGMENTS: usize = 10;

fn cmd_compare(global: &GlobalArgs, args: &CompareArgs) -> Result<String> {
    let options = CompareOptions {
        fit: fit_options(global)?,
        depth: global.depth,
    };
    let mut rows = Vec::new();
    let mut provenance = Vec::new();
    if args.all_examples {
        let (poly, _) = normalize(&gen_polynomial(EXAMPLE_SAMPLES)?)?;
        let knots = select_knots(&poly, &KnotSelection::Manual(POLYNOMIAL_KNOTS.to_vec()))?;
        rows.push(compare("polynomial", &poly, &knots, &options)?.row);
        provenance.push(Provenance::new("builtin:polynomial".into(), None));

        let (walk, _) = normalize(&gen_random_walk(EXAMPLE_SAMPLES, global.seed)?)?;
        let knots = select_knots(&walk, &KnotSelection::Extrema(ExtremaParams::for_segments(WALK_SEGMENTS)))?;
        rows.push(compare("random-walk", &walk, &knots, &options)?.row);
        provenance.push(Provenance::new("builtin:random-walk".into(), Some(global.seed)));
    } else {
        let path: &PathBuf = args
            .series
            .as_ref()
            .ok_or_else(|| CliError::Usage("pass --series <CSV> or --all-examples".into()))?;
        let selection = knot_selection(&args.knots)?;
        let (series, input) = load_series(path)?;
        let (series, _) = maybe_normalize(series, args.normalize)?;
        let knots = select_knots(&series, &selection)?;
        let name = args.name.clone().unwrap_or_else(|| {
            path.file_stem()
                .map_or_else(|| "series".to_owned(), |s| s.to_string_lossy().into_owned())
        });
        rows.push(compare(&name, &series, &knots, &options)?.row);
        provenance.push(Provenance::new(input, None));
    }

    let table = ComparisonTable { rows, provenance };
    let json = to_json(&table);
    if let Some(path) = &global.out {
        write_file(path, &json)?;
    }
    if global.strict && table.rows.iter().any(|r| r.clamped) {
        return Err(CliError::Strict("a fit clamped at least one scaling".into()));
    }
    Ok(match global.format {
        Format::Json => json,
        Format::Text => render_table(&table.rows),
    })
}
