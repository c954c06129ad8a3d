//! Batch front-end: build monodromy triangulations, solve angle
//! structures, audit fairly normal disc types, verify invariants, and
//! export artifacts deterministically.
//!
//! Exit codes: 0 ok, 1 IO/parse, 2 invalid monodromy, 3 infeasible angle
//! system, 4 verification failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use ptbundle::angles::{self, build_constraints, check_assignment, solve_max_min, AngleAssignment, SolveOutcome};
use ptbundle::discs::{enumerate_fairly_normal_types, report_json, report_text};
use ptbundle::farey::{factorize, MonodromyWord, Sign, UnimodularMatrix};
use ptbundle::triangulation::{
    self, build_monodromy_triangulation, compute_edge_classes, euler_check, find_involution,
    is_automorphism, vertex_link, Gluing, Triangulation,
};
use ptbundle::Rat;

const EXIT_PARSE: u8 = 1;
const EXIT_MONODROMY: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "ptbundle", about = "Monodromy triangulations of once-punctured torus bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct MonodromyInput {
    /// Cyclic word over R, L with optional leading '-' for sign -1.
    #[arg(long)]
    word: Option<String>,
    /// Monodromy matrix "a,b;c,d" (factorized into a word).
    #[arg(long)]
    matrix: Option<String>,
    /// Sign override for --word (+ or -).
    #[arg(long)]
    sign: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the layered triangulation of a monodromy.
    Build {
        #[command(flatten)]
        monodromy: MonodromyInput,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Solve the angle equalities for maximal slack.
    Angles {
        /// Triangulation file produced by `build`.
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Enumerate and audit the fairly normal disc types.
    Discs {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verify the combinatorial invariants of a triangulation file.
    Verify {
        input: PathBuf,
        /// Angle assignment file to check against the triangulation.
        #[arg(long)]
        with_angles: Option<PathBuf>,
    },
    /// Re-export a triangulation file in the requested format.
    Export {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type Fail = (u8, String);

fn run(cmd: Command) -> Result<(), Fail> {
    match cmd {
        Command::Build { monodromy, out, format } => {
            let word = parse_monodromy(&monodromy)?;
            let t = build_monodromy_triangulation(&word)
                .map_err(|e| (EXIT_MONODROMY, e.to_string()))?;
            let body = match format {
                Format::Json => triangulation::to_json(&t),
                Format::Text => triangulation::to_text(&t),
            };
            emit(out.as_deref(), &body)
        }
        Command::Angles { input, out, format } => {
            let t = load_triangulation(&input)?;
            let c = build_constraints(&t);
            match solve_max_min(&c) {
                SolveOutcome::Feasible { slack, assignment } => {
                    let body = match format {
                        Format::Json => angles::to_json(&slack, &assignment),
                        Format::Text => angles::to_text(&slack, &assignment),
                    };
                    emit(out.as_deref(), &body)
                }
                SolveOutcome::Infeasible => {
                    let body = match format {
                        Format::Json => "{\n  \"infeasible\": true\n}".to_string(),
                        Format::Text => "infeasible".to_string(),
                    };
                    emit(out.as_deref(), &body)?;
                    Err((EXIT_INFEASIBLE, "angle system is infeasible".into()))
                }
            }
        }
        Command::Discs { out, format } => {
            let types = enumerate_fairly_normal_types();
            let body = match format {
                Format::Json => report_json(&types),
                Format::Text => report_text(&types),
            };
            emit(out.as_deref(), &body)
        }
        Command::Verify { input, with_angles } => {
            let t = load_triangulation(&input)?;
            verify(&t, with_angles.as_deref())
        }
        Command::Export { input, out, format } => {
            let t = load_triangulation(&input)?;
            let body = match format {
                Format::Json => triangulation::to_json(&t),
                Format::Text => triangulation::to_text(&t),
            };
            emit(out.as_deref(), &body)
        }
    }
}

fn parse_monodromy(m: &MonodromyInput) -> Result<MonodromyWord, Fail> {
    match (&m.word, &m.matrix) {
        (Some(w), None) => {
            let mut word =
                MonodromyWord::parse(w).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            if let Some(s) = &m.sign {
                let sign = match s.as_str() {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => return Err((EXIT_PARSE, format!("invalid sign {other:?}"))),
                };
                word = MonodromyWord::new(word.letters().to_vec(), sign)
                    .map_err(|e| (EXIT_PARSE, e.to_string()))?;
            }
            Ok(word)
        }
        (None, Some(s)) => {
            if m.sign.is_some() {
                return Err((EXIT_PARSE, "--sign applies only to --word".into()));
            }
            let mat =
                UnimodularMatrix::parse(s).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            factorize(&mat).map_err(|e| (EXIT_MONODROMY, e.to_string()))
        }
        _ => Err((EXIT_PARSE, "supply exactly one of --word or --matrix".into())),
    }
}

#[derive(Deserialize)]
struct TriangulationFile {
    word: String,
    sign: i64,
    gluings: Vec<[(usize, u8, [u8; 4]); 4]>,
}

/// Rebuild a triangulation from a file: the tetrahedra follow from the
/// word; the gluing table is taken from the file so that hand edits are
/// caught by `verify`.
fn load_triangulation(path: &std::path::Path) -> Result<Triangulation, Fail> {
    let raw = fs::read_to_string(path).map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let doc: TriangulationFile =
        serde_json::from_str(&raw).map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let word_str = match doc.sign {
        1 => doc.word.clone(),
        -1 => format!("-{}", doc.word),
        s => return Err((EXIT_PARSE, format!("invalid sign {s}"))),
    };
    let word = MonodromyWord::parse(&word_str).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let mut t =
        build_monodromy_triangulation(&word).map_err(|e| (EXIT_MONODROMY, e.to_string()))?;
    if doc.gluings.len() != t.tet_count() {
        return Err((
            EXIT_VERIFY,
            format!("gluing table has {} rows, word has length {}", doc.gluings.len(), t.tet_count()),
        ));
    }
    t.gluings = doc
        .gluings
        .iter()
        .map(|row| std::array::from_fn(|f| Gluing { tet: row[f].0, face: row[f].1, perm: row[f].2 }))
        .collect();
    for row in &t.gluings {
        for g in row {
            if g.tet >= t.tet_count() || g.face > 3 || {
                let mut seen = [false; 4];
                g.perm.iter().any(|&v| v > 3 || std::mem::replace(&mut seen[v as usize], true))
            } {
                return Err((EXIT_VERIFY, "gluing entry out of range".into()));
            }
        }
    }
    Ok(t)
}

#[derive(Deserialize)]
struct AnglesFile {
    angles: Vec<[String; 6]>,
}

fn verify(t: &Triangulation, with_angles: Option<&std::path::Path>) -> Result<(), Fail> {
    let fail = |msg: &str| Err((EXIT_VERIFY, msg.to_string()));
    if !t.check_involutive() {
        return fail("gluing table is not an odd involution");
    }
    let euler = euler_check(t).map_err(|e| (EXIT_VERIFY, e.to_string()))?;
    println!("euler: e={} f={} p={} ok", euler.e, euler.f, euler.p);
    let edges = compute_edge_classes(t);
    if let Some(e) = edges.iter().find(|e| e.valence() < 3) {
        return fail(&format!("edge of valence {} found", e.valence()));
    }
    println!("valences: {} ok", edges.iter().map(|e| e.valence().to_string()).collect::<Vec<_>>().join(","));
    let cusp = vertex_link(t);
    if cusp.components != 1 || cusp.euler.iter().sum::<i64>() != 0 {
        return fail(&format!("cusp check failed: {} components, chi {:?}", cusp.components, cusp.euler));
    }
    println!("cusp: 1 torus component ok");
    match find_involution(t) {
        Ok(phi) => {
            if !is_automorphism(t, &phi) {
                return fail("involution is not an automorphism");
            }
            println!("involution: found ok");
        }
        Err(e) => return fail(&e.to_string()),
    }
    if let Some(path) = with_angles {
        let raw = fs::read_to_string(path)
            .map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display())))?;
        let doc: AnglesFile = serde_json::from_str(&raw)
            .map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display())))?;
        let mut theta = Vec::with_capacity(doc.angles.len());
        for row in &doc.angles {
            let mut r: [Rat; 6] = Default::default();
            for (i, s) in row.iter().enumerate() {
                r[i] = Rat::from_str(s).map_err(|e| (EXIT_PARSE, format!("bad rational {s:?}: {e}")))?;
            }
            theta.push(r);
        }
        let report = check_assignment(t, &AngleAssignment { theta });
        if !report.ok() {
            return fail(&format!("angle assignment violations: {}", report.violations.join("; ")));
        }
        println!("angles: assignment verified ok");
    }
    Ok(())
}

/// Write the artifact with a trailing newline, or print it.
fn emit(out: Option<&std::path::Path>, body: &str) -> Result<(), Fail> {
    let mut data = body.to_string();
    if !data.ends_with('\n') {
        data.push('\n');
    }
    match out {
        Some(path) => fs::write(path, data)
            .map_err(|e| (EXIT_PARSE, format!("{}: {e}", path.display()))),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}
