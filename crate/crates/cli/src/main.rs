//! Command-line front end: construct, complete, verify, classify, lift,
//! slice, render, run scenarios, and execute the acceptance suite.

use penrose_cli::{document, render};

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use penrose_core::completion::{complete, seven_from_lattice, SevenConfig, SolveMode};
use penrose_core::engine::{build_lattice, IndexSet};
use penrose_core::lift3d::{extrude_seven, plane_basis, slice_cube, ExtrusionFrame};
use penrose_core::scalar::{Comparator, Scalar};
use penrose_core::scenarios;
use penrose_core::{CompleteConic, ProjHyperplane, ProjPoint};
use serde_json::{json, Value};

use document::{DocError, DocResult};

#[derive(Parser)]
#[command(name = "penrose", about = "Exact kernel for double-contact cube configurations", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Arithmetic mode for parsing documents.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Float-mode comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Conic,
    Quadric,
}

#[derive(Subcommand)]
enum Command {
    /// Build the full lattice from a params document.
    Construct {
        input: PathBuf,
        /// Lattice order (3 or 4), overriding the document.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Complete a seven-vertex config document to eight.
    Complete { input: PathBuf },
    /// Re-verify every identity of a constructed cube document.
    Verify { input: PathBuf },
    /// Name the specialization of a params document.
    Classify { input: PathBuf },
    /// Build and verify a named classical scenario.
    Scenario {
        /// One of: dual-salmon, brianchon, pappus, braikenridge-maclaurin,
        /// desargues, monge.
        name: String,
    },
    /// Extrude a seven-vertex conic document to quadrics and complete it.
    Lift {
        input: PathBuf,
        /// Frame document holding the u-plane (defaults to u = `[1:0:0:0]`).
        #[arg(long)]
        frame: Option<PathBuf>,
    },
    /// Slice an eight-vertex quadric document with a plane.
    Slice {
        input: PathBuf,
        /// Plane document; defaults to the base plane x0 = 0.
        #[arg(long)]
        plane: Option<PathBuf>,
    },
    /// Render a constructed cube document as a schematic SVG.
    Render { input: PathBuf },
    /// Run the acceptance suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmp = Comparator::new(cli.tol);
    match dispatch(&cli, &cmp) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> DocResult<()> {
    use std::io::Write;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| DocError(format!("{}: {e}", path.display()))),
        None => {
            // A closed pipe downstream is not an error worth reporting.
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli, cmp: &Comparator) -> DocResult<ExitCode> {
    match &cli.command {
        Command::Construct { input, n } => cmd_construct(cli, cmp, input, *n),
        Command::Complete { input } => cmd_complete(cli, cmp, input),
        Command::Verify { input } => cmd_verify(cli, cmp, input),
        Command::Classify { input } => cmd_classify(cli, cmp, input),
        Command::Scenario { name } => cmd_scenario(cli, cmp, name),
        Command::Lift { input, frame } => cmd_lift(cli, cmp, input, frame.as_deref()),
        Command::Slice { input, plane } => cmd_slice(cli, cmp, input, plane.as_deref()),
        Command::Render { input } => cmd_render(cli, cmp, input),
        Command::Selftest => cmd_selftest(cli),
    }
}

fn cmd_construct(cli: &Cli, cmp: &Comparator, input: &Path, n_override: Option<usize>) -> DocResult<ExitCode> {
    let doc = document::read_document(input)?;
    let mut doc = doc;
    if let Some(n) = n_override {
        if let Some(params) = doc.get_mut("params") {
            params["n"] = json!(n);
        }
    }
    let params = document::parse_params(&doc)?;
    let lat = build_lattice(&params, cmp).map_err(|e| DocError(format!("lattice: {e}")))?;
    let out = json!({
        "version": 1,
        "space": if params.vars == 4 { "quadric" } else { "conic" },
        "mode": doc.get("mode").cloned().unwrap_or(json!("exact")),
        "params": document::params_to_value(&params),
        "cube": document::lattice_to_value(&lat, cmp),
    });
    emit(cli, &(serde_json::to_string_pretty(&out).unwrap() + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn seven_from_doc(doc: &Value) -> DocResult<SevenConfig> {
    let config = document::parse_config(doc)?;
    let vars = match doc.get("space").and_then(Value::as_str) {
        Some("quadric") => 4,
        _ => 3,
    };
    let mut vertices = BTreeMap::new();
    for (om, c) in config {
        if om == IndexSet::from_indices(&[1, 2, 3]) {
            continue;
        }
        vertices.insert(om, c);
    }
    SevenConfig::new(vars, vertices).map_err(|e| DocError(format!("config: {e}")))
}

fn cmd_complete(cli: &Cli, cmp: &Comparator, input: &Path) -> DocResult<ExitCode> {
    let doc = document::read_document(input)?;
    let seven = if doc.get("config").is_some() {
        seven_from_doc(&doc)?
    } else {
        let params = document::parse_params(&doc)?;
        let lat = build_lattice(&params, cmp).map_err(|e| DocError(format!("lattice: {e}")))?;
        seven_from_lattice(&lat).map_err(|e| DocError(format!("{e}")))?
    };
    let result = match complete(&seven, cmp) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("completion failed: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let mut out = json!({
        "version": 1,
        "space": doc.get("space").cloned().unwrap_or(json!("conic")),
        "mode": doc.get("mode").cloned().unwrap_or(json!("exact")),
        "completion": {
            "primal": document::matrix_to_value(&result.primal),
            "dual": result.dual.as_ref().map(document::matrix_to_value).unwrap_or(Value::Null),
            "unique": result.unique,
            "notes": result.notes,
        },
    });
    if let Some(second) = &result.second {
        out["completion"]["second"] = json!({
            "primal": document::matrix_to_value(&second.primal),
            "mode": match second.mode { SolveMode::Exact => "exact", SolveMode::Approximate => "approximate" },
            "residual": second.residual,
            "matches_determinant": second.matches_determinant,
        });
    }
    emit(cli, &(serde_json::to_string_pretty(&out).unwrap() + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

/// One verification record of the report.
fn report_line(name: &str, anchor: &str, pass: bool, residual: &str) -> Value {
    json!({ "check": name, "anchor": anchor, "status": if pass { "pass" } else { "fail" }, "residual": residual })
}

fn cmd_verify(cli: &Cli, cmp: &Comparator, input: &Path) -> DocResult<ExitCode> {
    let doc = document::read_document(input)?;
    let params = document::parse_params(&doc)?;
    let mode = document::parse_mode(&doc);
    let mut lines = Vec::new();
    let mut all_pass = true;
    // Rebuild and verify structurally.
    let lat = match build_lattice(&params, cmp) {
        Ok(l) => l,
        Err(e) => {
            lines.push(report_line("lattice construction", "double-contact edge identity", false, &format!("{e}")));
            let report = json!({ "report": lines, "summary": {"pass": 0, "fail": 1} });
            emit(cli, &(serde_json::to_string_pretty(&report).unwrap() + "\n"))?;
            return Ok(ExitCode::from(1));
        }
    };
    // Documented vertices, when present, must satisfy the edge identities
    // verbatim: a perturbed entry fails here.
    if let Some(cube) = doc.get("cube") {
        if let Some(verts) = cube.get("vertices").and_then(Value::as_object) {
            let mut documented: BTreeMap<IndexSet, penrose_core::HomogeneousPoly> = BTreeMap::new();
            for (label, value) in verts {
                if value.is_null() {
                    continue;
                }
                let om = document::label_to_set(label)?;
                let m = document::parse_matrix(value, mode)?;
                documented.insert(om, penrose_core::sym_to_poly(&m));
            }
            for om in IndexSet::all_subsets(params.n) {
                for k in 1..=params.n {
                    if om.contains(k) {
                        continue;
                    }
                    let hi = om.insert(k);
                    let (Some(lo_p), Some(hi_p)) = (documented.get(&om), documented.get(&hi)) else { continue };
                    let name = format!("edge identity at {}+{k}", om.label());
                    let f_lo = &lat.f[&om];
                    let f_hi = &lat.f[&hi];
                    let chord = &lat.chords[&(om, k)];
                    let residual = lo_p
                        .scale(f_hi)
                        .sub(&hi_p.scale(f_lo))
                        .and_then(|d| d.sub(&chord.square()?));
                    let ok = residual.as_ref().map(|r| r.is_zero_within(cmp)).unwrap_or(false);
                    let rtxt = residual
                        .map(|r| if r.is_zero() { "0".to_string() } else { format!("{r}") })
                        .unwrap_or_else(|e| format!("{e}"));
                    if !ok {
                        all_pass = false;
                    }
                    lines.push(report_line(&name, "double-contact edge identity", ok, &rtxt));
                }
            }
        }
    } else {
        lines.push(report_line("edge identities", "double-contact edge identity", true, "verified during construction"));
    }
    for (what, anchor, res) in [
        ("face concurrency", "face chord concurrency", lat.verify_faces(cmp).map(|_| ())),
        ("face conics", "face-conic identity", lat.verify_face_conics(cmp)),
        ("face diagonals", "face-diagonal identity", lat.verify_face_diagonals(cmp)),
        ("diagonal relations", "face-conic and diagonal relations", lat.verify_diag_relations(cmp)),
    ] {
        let ok = res.is_ok();
        if !ok {
            all_pass = false;
        }
        lines.push(report_line(what, anchor, ok, &res.err().map(|e| format!("{e}")).unwrap_or_else(|| "0".into())));
    }
    let pass_count = lines.iter().filter(|l| l["status"] == "pass").count();
    let fail_count = lines.len() - pass_count;
    let report = json!({ "report": lines, "summary": {"pass": pass_count, "fail": fail_count} });
    emit(cli, &(serde_json::to_string_pretty(&report).unwrap() + "\n"))?;
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_classify(cli: &Cli, cmp: &Comparator, input: &Path) -> DocResult<ExitCode> {
    let doc = document::read_document(input)?;
    let params = document::parse_params(&doc)?;
    let lat = build_lattice(&params, cmp).map_err(|e| DocError(format!("lattice: {e}")))?;
    let label = scenarios::classify(&lat, cmp);
    emit(cli, &format!("{}\n", label.as_str()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scenario(cli: &Cli, cmp: &Comparator, name: &str) -> DocResult<ExitCode> {
    let inst = build_named_scenario(name, cli.seed).map_err(|e| DocError(format!("{e}")))?;
    let verdict = scenarios::verify_scenario(&inst, cmp).map_err(|e| DocError(format!("{e}")))?;
    let report = json!({
        "scenario": inst.name,
        "predicate": inst.predicate,
        "lattice_predicate": verdict.lattice_ok,
        "classical_oracle": verdict.classical_ok,
        "details": verdict.details,
        "status": if verdict.passed() { "pass" } else { "fail" },
    });
    emit(cli, &(serde_json::to_string_pretty(&report).unwrap() + "\n"))?;
    Ok(if verdict.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn build_named_scenario(name: &str, seed: u64) -> penrose_core::Result<scenarios::ScenarioInstance> {
    use penrose_core::corpus;
    use penrose_core::poly::line_i64;
    let mut rng = corpus::rng(seed);
    let circle = line_i64(1, 0, 0)
        .square()?
        .add(&line_i64(0, 1, 0).square()?)?
        .sub(&line_i64(0, 0, 1).square()?)?;
    let small = |rng: &mut corpus::CorpusRng| corpus::small_rational(rng);
    match name {
        "dual-salmon" => scenarios::build_dual_salmon(
            circle,
            [line_i64(1, 0, 0), line_i64(0, 1, 0), corpus::random_line(&mut rng, 3)],
            [Scalar::int(1), Scalar::int(4), Scalar::int(9)],
            [1, 1, 1],
        ),
        "brianchon" => {
            // Rational points of x² + y² = 2z² from the Pythagorean-style
            // parametrization of the circle through (1, 1).
            let pt = |t: &Scalar| -> penrose_core::Result<ProjPoint> {
                // (x, y) = ((1 - 2t - t²)/(1 + t²), (1 + 2t - t²)/(1 + t²)) scaled.
                let one = Scalar::one();
                let t2 = t * t;
                let denom = &one + &t2;
                let x = &(&one - &(&Scalar::int(2) * t)) - &t2;
                let y = &(&one + &(&Scalar::int(2) * t)) - &t2;
                ProjPoint::new(vec![x, y, denom])
            };
            loop {
                let mut ts: Vec<Scalar> = Vec::new();
                while ts.len() < 3 {
                    let t = small(&mut rng);
                    if !ts.iter().any(|u: &Scalar| u.eq_strict(&t)) {
                        ts.push(t);
                    }
                }
                match scenarios::build_brianchon(
                    circle.clone(),
                    [pt(&ts[0])?, pt(&ts[1])?, pt(&ts[2])?],
                    [1, 1, 1],
                ) {
                    Err(penrose_core::Error::DegeneratePosition) => continue,
                    other => break other,
                }
            }
        }
        "pappus" => {
            let cmp = Comparator::default();
            let l1 = ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::zero()])?;
            let l2 = ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::int(-1)])?;
            let mut xs: Vec<Scalar> = Vec::new();
            while xs.len() < 6 {
                let t = small(&mut rng);
                if !xs.iter().any(|u| u.eq_strict(&t)) {
                    xs.push(t);
                }
            }
            let a = |t: &Scalar| ProjPoint::new(vec![t.clone(), Scalar::zero(), Scalar::one()]).unwrap();
            let b = |t: &Scalar| ProjPoint::new(vec![t.clone(), Scalar::one(), Scalar::one()]).unwrap();
            scenarios::build_pappus(
                &l1,
                &l2,
                [a(&xs[0]), a(&xs[1]), a(&xs[2])],
                [b(&xs[3]), b(&xs[4]), b(&xs[5])],
                &cmp,
            )
        }
        "braikenridge-maclaurin" => scenarios::build_braikenridge_maclaurin(
            line_i64(0, 0, 1),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 0)],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, -1],
        ),
        "desargues" => scenarios::build_desargues(
            line_i64(0, 0, 1),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 0)],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, 1],
        ),
        "monge" => scenarios::build_monge(
            [
                (Scalar::int(0), Scalar::int(0)),
                (Scalar::int(4), Scalar::int(0)),
                (Scalar::int(1), Scalar::int(3)),
            ],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, 1],
        ),
        other => Err(penrose_core::Error::InvalidParameter(format!("unknown scenario {other:?}"))),
    }
}

fn cmd_lift(cli: &Cli, cmp: &Comparator, input: &Path, frame_path: Option<&std::path::Path>) -> DocResult<ExitCode> {
    let doc = document::read_document(input)?;
    let mode = document::parse_mode(&doc);
    // Accept either a params document (strip the eighth) or a seven config.
    let seven = if doc.get("config").is_some() {
        seven_from_doc(&doc)?
    } else {
        let params = document::parse_params(&doc)?;
        let lat = build_lattice(&params, cmp).map_err(|e| DocError(format!("lattice: {e}")))?;
        seven_from_lattice(&lat).map_err(|e| DocError(format!("{e}")))?
    };
    let u = match frame_path {
        Some(p) => {
            let fdoc = document::read_document(p)?;
            let uv = fdoc
                .get("frame")
                .and_then(|f| f.get("u"))
                .ok_or_else(|| DocError("frame document needs frame.u".into()))?;
            let v = document::parse_vector(uv, mode)?;
            [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
        }
        None => [Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()],
    };
    let frame = ExtrusionFrame::standard(u);
    let seven3d = match extrude_seven(&seven, &frame, cmp) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("extrusion failed: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let result = match complete(&seven3d, cmp) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("completion in space failed: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let mut eight = seven3d.vertices.clone();
    eight.insert(
        IndexSet::from_indices(&[1, 2, 3]),
        CompleteConic { primal: result.primal.clone(), dual: result.primal.adjugate() },
    );
    let out = json!({
        "version": 1,
        "space": "quadric",
        "mode": doc.get("mode").cloned().unwrap_or(json!("exact")),
        "config": document::config_to_value(&eight),
        "frame": { "u": document::vector_to_value(&frame.u) },
    });
    emit(cli, &(serde_json::to_string_pretty(&out).unwrap() + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_slice(cli: &Cli, cmp: &Comparator, input: &Path, plane_path: Option<&std::path::Path>) -> DocResult<ExitCode> {
    let doc = document::read_document(input)?;
    let mode = document::parse_mode(&doc);
    let config = document::parse_config(&doc)?;
    let plane = match plane_path {
        Some(p) => {
            let pdoc = document::read_document(p)?;
            let pv = pdoc
                .get("plane")
                .and_then(|f| f.get("plane"))
                .ok_or_else(|| DocError("plane document needs plane.plane".into()))?;
            ProjHyperplane::new(document::parse_vector(pv, mode)?).map_err(|e| DocError(format!("{e}")))?
        }
        None => ProjHyperplane::new(vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()])
            .map_err(|e| DocError(format!("{e}")))?,
    };
    let basis = plane_basis(&plane).map_err(|e| DocError(format!("{e}")))?;
    let sliced = match slice_cube(&config, &basis, cmp) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("slice failed: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let out = json!({
        "version": 1,
        "space": "conic",
        "mode": doc.get("mode").cloned().unwrap_or(json!("exact")),
        "config": document::config_to_value(&sliced),
        "plane": { "plane": document::vector_to_value(&plane.0) },
    });
    emit(cli, &(serde_json::to_string_pretty(&out).unwrap() + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_render(cli: &Cli, cmp: &Comparator, input: &Path) -> DocResult<ExitCode> {
    let doc = document::read_document(input)?;
    let params = document::parse_params(&doc)?;
    let lat = build_lattice(&params, cmp).map_err(|e| DocError(format!("lattice: {e}")))?;
    let svg = render::render_lattice(&lat, cmp, 128);
    emit(cli, &svg)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(cli: &Cli) -> DocResult<ExitCode> {
    let results = penrose_core::selftest::run_all(cli.seed);
    let mut all = true;
    let mut text = String::new();
    for r in &results {
        let status = if r.passed { "pass" } else { "FAIL" };
        if !r.passed {
            all = false;
        }
        text.push_str(&format!("[{status}] {} ({}): {}\n", r.name, r.anchor, r.details));
    }
    text.push_str(&format!(
        "{} checks, {} passed, {} failed\n",
        results.len(),
        results.iter().filter(|r| r.passed).count(),
        results.iter().filter(|r| !r.passed).count()
    ));
    emit(cli, &text)?;
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
