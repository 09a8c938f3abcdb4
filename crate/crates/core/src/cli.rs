//! Command-line surface: parse algebra files, run the quiver constructions,
//! and emit reports as JSON, Graphviz DOT, or comma/bracket notation.

use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_algebra_with_prime, PathAlgebra};
use crate::artheory::{
    covering_check, knit_fixed_size, periodic_ar_quiver_method1, periodic_ar_quiver_method2,
    verify_almost_split, ARQuiver, Caps,
};
use crate::complexes::{comma_string, hom_dim, parse_comma_complex, Complex};
use crate::decomp::KsObject;
use crate::error::{Error, Result};
use crate::periodic::{bracket_string, compress, periodic_hom_dim};
use crate::sectional::{
    classify_pi_positions, compose_along, enumerate_sectional_paths, radical_power_membership,
    PiPlacement,
};

/// Write a line to stdout, ignoring a closed pipe (e.g. piping into head).
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "arquiver",
    about = "Auslander-Reiten quivers of categories of m-periodic complexes of projectives",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// field characteristic, overriding the algebra file
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// seed for the randomized isomorphism and decomposition tests
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// cap on the number of quiver vertices before aborting
    #[arg(long, global = true, default_value_t = 512)]
    caps: usize,
    /// output format for quiver-valued commands
    #[arg(long, global = true, value_enum, default_value_t = Format::Paper)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// Strong global dimension of the algebra
    Sgldim {
        /// algebra description file (TOML)
        algebra: String,
        /// give up above this bound
        #[arg(long, default_value_t = 16)]
        cap: usize,
    },
    /// AR quiver of bounded complexes on a window, or of m-periodic complexes
    Arq {
        algebra: String,
        /// window size n for the bounded quiver
        #[arg(long, conflicts_with = "periodic")]
        fixed: Option<usize>,
        /// period m for the periodic quiver
        #[arg(long)]
        periodic: Option<usize>,
        /// window size feeding the periodic constructions (default: strong
        /// global dimension + 1)
        #[arg(long)]
        window: Option<usize>,
        /// construction for the periodic quiver: 1 = transport a window
        /// section, 2 = knit directly, both = run and compare
        #[arg(long, default_value = "1")]
        method: String,
    },
    /// Compression of a bounded complex (comma notation) to period m
    Compress {
        algebra: String,
        /// complex in comma notation, e.g. "0,3,2"
        complex: String,
        #[arg(short, long)]
        m: usize,
    },
    /// Dimension of the chain-map hom space between two complexes
    Hom {
        algebra: String,
        x: String,
        y: String,
        /// compare the compressions to period m instead
        #[arg(long)]
        periodic: Option<usize>,
    },
    /// Sectional paths of the m-periodic AR quiver with composite diagnostics
    Sectional {
        algebra: String,
        #[arg(long)]
        periodic: usize,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Run the full invariant suite and exit nonzero on any failure
    Verify {
        algebra: String,
        #[arg(long)]
        window: Option<usize>,
        #[arg(short, long, default_value_t = 4)]
        m: usize,
    },
}

/// Serializable snapshot of an AR quiver with vertices in display notation.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub kind: String,
    pub vertices: Vec<String>,
    pub projective_injective: Vec<bool>,
    /// (source, target, multiplicity)
    pub arrows: Vec<(usize, usize, usize)>,
    /// (end, translate-of-end)
    pub tau_pairs: Vec<(usize, usize)>,
    pub meshes: Vec<MeshDoc>,
    pub complete: bool,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshDoc {
    pub start: usize,
    pub middle: Vec<usize>,
    pub end: usize,
}

pub fn quiver_doc<T: KsObject>(
    arq: &ARQuiver<T>,
    kind: &str,
    label: impl Fn(&T) -> String,
) -> QuiverDoc {
    QuiverDoc {
        kind: kind.to_string(),
        vertices: arq.vertices.iter().map(label).collect(),
        projective_injective: arq.pi_flags.clone(),
        arrows: arq.arrows.clone(),
        tau_pairs: arq.tau_pairs.clone(),
        meshes: arq
            .meshes
            .iter()
            .map(|m| MeshDoc { start: m.start, middle: m.middle.clone(), end: m.end })
            .collect(),
        complete: arq.complete,
    }
}

/// Graphviz rendering: solid irreducible arrows, dashed translate edges,
/// boxed projective-injective vertices.
pub fn quiver_dot(doc: &QuiverDoc) -> String {
    let mut out = String::from("digraph arquiver {\n  rankdir=LR;\n");
    for (i, v) in doc.vertices.iter().enumerate() {
        let shape = if doc.projective_injective[i] { "box" } else { "ellipse" };
        out.push_str(&format!("  v{i} [label=\"{v}\", shape={shape}];\n"));
    }
    for &(s, t, mult) in &doc.arrows {
        if mult > 1 {
            out.push_str(&format!("  v{s} -> v{t} [label=\"{mult}\"];\n"));
        } else {
            out.push_str(&format!("  v{s} -> v{t};\n"));
        }
    }
    for &(end, start) in &doc.tau_pairs {
        out.push_str(&format!(
            "  v{end} -> v{start} [style=dashed, arrowhead=open, constraint=false];\n"
        ));
    }
    out.push_str("}\n");
    out
}

fn quiver_paper(doc: &QuiverDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} AR quiver: {} vertices, {} arrows, {} meshes{}\n",
        doc.kind,
        doc.vertices.len(),
        doc.arrows.len(),
        doc.meshes.len(),
        if doc.complete { "" } else { " (cap hit: prefix only)" }
    ));
    for (i, v) in doc.vertices.iter().enumerate() {
        let tag = if doc.projective_injective[i] { "  [proj-inj]" } else { "" };
        out.push_str(&format!("  {i}: {v}{tag}\n"));
    }
    out.push_str("arrows:\n");
    for &(s, t, mult) in &doc.arrows {
        let m = if mult > 1 { format!("  (x{mult})") } else { String::new() };
        out.push_str(&format!("  {} -> {}{}\n", doc.vertices[s], doc.vertices[t], m));
    }
    out.push_str("translate pairs:\n");
    for &(end, start) in &doc.tau_pairs {
        out.push_str(&format!("  tau({}) = {}\n", doc.vertices[end], doc.vertices[start]));
    }
    out
}

fn emit(doc: &QuiverDoc, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable"),
        Format::Dot => quiver_dot(doc),
        Format::Paper => quiver_paper(doc),
    }
}

fn load_algebra(path: &str, prime: Option<u64>) -> Result<PathAlgebra> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
    parse_algebra_with_prime(&text, prime)
}

fn auto_window(alg: &PathAlgebra, window: Option<usize>) -> Result<usize> {
    match window {
        Some(n) => Ok(n),
        None => Ok(crate::artheory::strong_global_dimension(alg, 16)? + 1),
    }
}

fn fixed_labels(alg: &PathAlgebra, arq: &ARQuiver<Complex>, n: usize) -> QuiverDoc {
    quiver_doc(arq, "fixed-window", |v| comma_string(alg, v, n))
}

fn periodic_doc(
    alg: &PathAlgebra,
    arq: &ARQuiver<crate::periodic::PeriodicComplex>,
) -> QuiverDoc {
    quiver_doc(arq, "periodic", |v| bracket_string(alg, v))
}

/// Do two quivers over the same algebra present isomorphic vertex sets with
/// matching mesh counts?
fn quivers_agree<T: KsObject>(
    alg: &PathAlgebra,
    a: &ARQuiver<T>,
    b: &ARQuiver<T>,
    seed: u64,
) -> bool {
    a.vertices.len() == b.vertices.len()
        && a.meshes.len() == b.meshes.len()
        && a.vertices.iter().all(|v| b.find_vertex(alg, v, seed).is_some())
}

fn cmd_arq(
    alg: &PathAlgebra,
    fixed: Option<usize>,
    periodic: Option<usize>,
    window: Option<usize>,
    method: &str,
    caps: &Caps,
    seed: u64,
    format: Format,
) -> Result<()> {
    if let Some(n) = fixed {
        let arq = knit_fixed_size(alg, n, caps)?;
        outln!("{}", emit(&fixed_labels(alg, &arq, n), format));
        return Ok(());
    }
    let m = periodic.ok_or_else(|| Error::Input("pass --fixed n or --periodic m".into()))?;
    if m < 2 {
        return Err(Error::Input("the period m must be at least 2".into()));
    }
    let n = auto_window(alg, window)?;
    let quiver = match method {
        "1" => {
            let fixed_arq = knit_fixed_size(alg, n, caps)?;
            periodic_ar_quiver_method1(alg, &fixed_arq, m, seed)?
        }
        "2" => periodic_ar_quiver_method2(alg, n, m, caps, seed)?,
        "both" => {
            let fixed_arq = knit_fixed_size(alg, n, caps)?;
            let q1 = periodic_ar_quiver_method1(alg, &fixed_arq, m, seed)?;
            let q2 = periodic_ar_quiver_method2(alg, n, m, caps, seed)?;
            if !quivers_agree(alg, &q1, &q2, seed) {
                return Err(Error::TheoremCheck(
                    "the two periodic constructions disagree".into(),
                ));
            }
            outln!("methods agree");
            q1
        }
        other => {
            return Err(Error::Input(format!(
                "unknown --method {other}; expected 1, 2, or both"
            )))
        }
    };
    outln!("{}", emit(&periodic_doc(alg, &quiver), format));
    Ok(())
}

fn cmd_sectional(
    alg: &PathAlgebra,
    m: usize,
    window: Option<usize>,
    max_len: usize,
    caps: &Caps,
    seed: u64,
) -> Result<()> {
    let n = auto_window(alg, window)?;
    let fixed = knit_fixed_size(alg, n, caps)?;
    let per = periodic_ar_quiver_method1(alg, &fixed, m, seed)?;
    let paths = enumerate_sectional_paths(alg, &per, max_len, seed)?;
    outln!("path | sectional | composite zero | max k with composite in rad^k");
    for path in &paths {
        let display = path
            .vertices
            .iter()
            .map(|&v| bracket_string(alg, &per.vertices[v]))
            .collect::<Vec<_>>()
            .join(" -> ");
        for (f, zero) in compose_along(alg, &per, path) {
            let depth = if zero {
                "inf".to_string()
            } else {
                let x = path.vertices[0];
                let y = *path.vertices.last().unwrap();
                let mut k = path.len();
                while k < max_len + 2
                    && radical_power_membership(alg, &per.vertices, x, y, &f, k + 1, seed)?
                {
                    k += 1;
                }
                k.to_string()
            };
            let placement = match classify_pi_positions(&per.pi_flags, &path.vertices) {
                PiPlacement::InteriorViolation(pos) if !zero => {
                    format!("  interior proj-inj at {pos}: VIOLATION")
                }
                _ => String::new(),
            };
            outln!("{display} | yes | {} | {depth}{placement}", if zero { "yes" } else { "no" });
        }
    }
    Ok(())
}

fn cmd_verify(alg: &PathAlgebra, window: Option<usize>, m: usize, caps: &Caps, seed: u64) -> Result<()> {
    let n = auto_window(alg, window)?;
    outln!("window n = {n}, period m = {m}");
    let fixed = knit_fixed_size(alg, n, caps)?;
    outln!("fixed-window quiver: {} vertices, {} meshes", fixed.vertices.len(), fixed.meshes.len());
    for mesh in &fixed.meshes {
        let ok = verify_almost_split(
            alg,
            &fixed.vertices[mesh.start],
            &mesh.extension,
            &fixed.vertices[mesh.end],
            &mesh.pi,
            &fixed.vertices,
            seed,
        )?;
        if !ok {
            return Err(Error::TheoremCheck(format!(
                "fixed mesh ending at vertex {} is not almost split",
                mesh.end
            )));
        }
    }
    outln!("all fixed meshes verified almost split");
    let q1 = periodic_ar_quiver_method1(alg, &fixed, m, seed)?;
    let q2 = periodic_ar_quiver_method2(alg, n, m, caps, seed)?;
    if !quivers_agree(alg, &q1, &q2, seed) {
        return Err(Error::TheoremCheck("periodic constructions disagree".into()));
    }
    outln!("periodic constructions agree: {} vertices", q1.vertices.len());
    for mesh in &q1.meshes {
        let ok = verify_almost_split(
            alg,
            &q1.vertices[mesh.start],
            &mesh.extension,
            &q1.vertices[mesh.end],
            &mesh.pi,
            &q1.vertices,
            seed,
        )?;
        if !ok {
            return Err(Error::TheoremCheck(format!(
                "periodic mesh ending at vertex {} is not almost split",
                mesh.end
            )));
        }
    }
    outln!("all periodic meshes verified almost split");
    let report = covering_check(alg, &fixed, &q1, m, 50, seed)?;
    if !report.all_ok() {
        return Err(Error::TheoremCheck(format!(
            "covering check failed: counts {} vs {} x {}, unroll {}, hom identity {}",
            report.periodic_count,
            m,
            report.normalized_fixed_count,
            report.unroll_round_trips,
            report.hom_identity_ok
        )));
    }
    outln!(
        "covering check: {} = {} x {}, unroll round-trips, hom identity on {} pairs",
        report.periodic_count, m, report.normalized_fixed_count, report.hom_identity_pairs
    );
    outln!("all checks pass");
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    let caps = Caps { max_vertices: cli.caps, ..Caps::default() };
    let seed = cli.seed;
    match &cli.command {
        Command::Sgldim { algebra, cap } => {
            let alg = load_algebra(algebra, cli.prime)?;
            outln!("{}", crate::artheory::strong_global_dimension(&alg, *cap)?);
            Ok(())
        }
        Command::Arq { algebra, fixed, periodic, window, method } => {
            let alg = load_algebra(algebra, cli.prime)?;
            cmd_arq(&alg, *fixed, *periodic, *window, method, &caps, seed, cli.format)
        }
        Command::Compress { algebra, complex, m } => {
            let alg = load_algebra(algebra, cli.prime)?;
            if *m < 2 {
                return Err(Error::Input("the period m must be at least 2".into()));
            }
            let x = parse_comma_complex(&alg, complex)?;
            outln!("{}", bracket_string(&alg, &compress(&x, *m)));
            Ok(())
        }
        Command::Hom { algebra, x, y, periodic } => {
            let alg = load_algebra(algebra, cli.prime)?;
            let cx = parse_comma_complex(&alg, x)?;
            let cy = parse_comma_complex(&alg, y)?;
            let dim = match periodic {
                Some(m) => periodic_hom_dim(&alg, &compress(&cx, *m), &compress(&cy, *m)),
                None => hom_dim(&alg, &cx, &cy),
            };
            outln!("{dim}");
            Ok(())
        }
        Command::Sectional { algebra, periodic, window, max_len } => {
            let alg = load_algebra(algebra, cli.prime)?;
            cmd_sectional(&alg, *periodic, *window, *max_len, &caps, seed)
        }
        Command::Verify { algebra, window, m } => {
            let alg = load_algebra(algebra, cli.prime)?;
            cmd_verify(&alg, *window, *m, &caps, seed)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_)
        | Error::Dimension(_)
        | Error::NotFiniteDimensional(_)
        | Error::UnsupportedRelation(_)
        | Error::PrimeTooSmall { .. }
        | Error::SquareNonzero { .. } => 2,
        Error::CapExceeded(_) | Error::SgldimNotCertified(_) | Error::NoSection => 3,
        _ => 4,
    }
}

/// Entry point for the binary: parse arguments, run, map errors to exit
/// codes (0 success, 2 input error, 3 cap exceeded, 4 check failure).
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
