//! Command-line front end for the polyomino ideal toolkit.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use polyomino_ideals::graph::{search_labeling, RepStatus, SearchOptions, TraceStep};
use polyomino_ideals::groebner::{first_quadratic_gb_violation, DEFAULT_DEGREE_CAP};
use polyomino_ideals::localization::verify_localization;
use polyomino_ideals::workbench::survey::{to_ndjson, to_table};
use polyomino_ideals::workbench::{
    canonical_id, enumerate_polyominoes, parse_document, render_ascii_marked, survey,
    PolyominoDocument, SurveyOptions,
};
use polyomino_ideals::{
    buchberger, generators, geometry::complement, is_prime, CellCollection, Error, GbConfig,
    MonomialOrder, Polyomino, Verdict,
};

#[derive(Parser)]
#[command(
    name = "polyideal",
    version,
    about = "Polyomino ideals: Groebner bases, primality, localization, graph representability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Polyomino document to read; standard input when omitted or `-`.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Wall-clock budget per computation (per row for `survey`).
    #[arg(long, global = true, default_value_t = 30)]
    budget_seconds: u64,
    /// Vertex cap for the graph search (default: twice the vertex count).
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Largest degree allowed in a Groebner basis computation.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Is the polyomino free of holes?
    CheckSimple,
    /// Is every row and every column contiguous?
    CheckConvex,
    /// List the inner 2-minors.
    Gens,
    /// Reduced lex Groebner basis of the polyomino ideal.
    Groebner,
    /// Combinatorial test for the minors forming a reduced Groebner basis.
    QuadraticGb,
    /// Primality certificate via lattice saturation and ideal saturation.
    Prime,
    /// Check the localization construction for the complement of a convex hole.
    Localize,
    /// Search for a simple graph whose toric ideal is the polyomino ideal.
    GraphRep,
    /// Cells of the bounding interval not in the polyomino.
    Complement,
    /// All fixed polyominoes with the given number of cells.
    Enumerate { cells: usize },
    /// Facts for every fixed polyomino up to the given size.
    Survey { max_cells: usize },
    /// ASCII drawing.
    Render,
}

enum Outcome {
    Holds,
    Fails,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded | Error::DegreeCap { .. } => 3,
        _ => 2,
    }
}

fn read_document(path: &Option<PathBuf>) -> Result<PolyominoDocument, (u8, String)> {
    let text = match path.as_deref() {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| (2, format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| (2, format!("cannot read standard input: {e}")))?;
            s
        }
    };
    parse_document(&text).map_err(|e| (2, e.to_string()))
}

fn emit<T: Serialize>(json_mode: bool, value: &T, text: impl FnOnce() -> String) {
    if json_mode {
        out(&format!(
            "{}\n",
            serde_json::to_string(value).expect("reports serialize")
        ));
    } else {
        out(&text());
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn out(s: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(s.as_bytes()).and_then(|()| stdout.flush());
}

fn verdict(holds: bool) -> Outcome {
    if holds {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

fn run(cli: &Cli) -> Result<Outcome, (u8, String)> {
    let lib = |e: Error| (exit_code(&e), e.to_string());
    let budget = Duration::from_secs(cli.budget_seconds);
    let cfg = GbConfig {
        degree_cap: cli.degree_cap,
        deadline: Some(Instant::now() + budget),
    };
    let doc = || read_document(&cli.input);
    match &cli.command {
        Command::CheckSimple => {
            let d = doc()?;
            let holes = d.cells.hole_cells();
            let simple = holes.is_empty();
            emit(
                cli.json,
                &json!({"simple": simple, "hole_cells": holes}),
                || format!("simple: {simple}\n"),
            );
            Ok(verdict(simple))
        }
        Command::CheckConvex => {
            let c = doc()?.cells;
            let (row, col) = (c.is_row_convex(), c.is_column_convex());
            emit(
                cli.json,
                &json!({"convex": row && col, "row_convex": row, "column_convex": col}),
                || {
                    format!(
                        "convex: {}\nrow convex: {row}\ncolumn convex: {col}\n",
                        row && col
                    )
                },
            );
            Ok(verdict(row && col))
        }
        Command::Gens => {
            let gens = generators(&doc()?.cells);
            let strings: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
            emit(
                cli.json,
                &json!({"count": gens.len(), "generators": strings}),
                || {
                    strings.iter().map(|s| format!("{s}\n")).collect::<String>()
                        + &format!("count: {}\n", gens.len())
                },
            );
            Ok(Outcome::Holds)
        }
        Command::Groebner => {
            let gens = generators(&doc()?.cells);
            let gb = buchberger(&gens, &MonomialOrder::lex(), &cfg).map_err(lib)?;
            let elements: Vec<String> = gb.elements().iter().map(|g| g.to_string()).collect();
            let same = gb.equals_set(&gens);
            let report = json!({
                "order": gb.order_tag(),
                "size": gb.len(),
                "max_degree": gb.max_degree(),
                "equals_generators": same,
                "elements": elements,
            });
            emit(cli.json, &report, || {
                elements
                    .iter()
                    .map(|s| format!("{s}\n"))
                    .collect::<String>()
                    + &format!("size: {}\nequals generators: {same}\n", gb.len())
            });
            Ok(Outcome::Holds)
        }
        Command::QuadraticGb => {
            let cells = doc()?.cells;
            let violation = first_quadratic_gb_violation(&cells);
            let gens = generators(&cells);
            let gb = buchberger(&gens, &MonomialOrder::lex(), &cfg).map_err(lib)?;
            let reduced_equal = gb.equals_set(&gens);
            let holds = violation.is_none();
            let report = json!({
                "condition": holds,
                "violation": violation.map(|(a, b)| [a.to_string(), b.to_string()]),
                "reduced_gb_equals_generators": reduced_equal,
            });
            emit(cli.json, &report, || {
                let mut s = format!("quadratic gb condition: {holds}\nreduced gb equals generators: {reduced_equal}\n");
                if let Some((a, b)) = violation {
                    s.push_str(&format!("violated by {a} and {b}\n"));
                }
                s
            });
            Ok(verdict(holds))
        }
        Command::Prime => {
            let cert = is_prime(&generators(&doc()?.cells), &cfg).map_err(lib)?;
            let prime = cert.verdict == Verdict::Prime;
            emit(cli.json, &cert, || {
                format!(
                    "verdict: {}\nlattice saturated: {}\nequal to saturation: {}\nlattice rank: {}\n",
                    if prime { "prime" } else { "not prime" },
                    cert.lattice_saturated,
                    cert.saturation_equal,
                    cert.lattice_rank
                )
            });
            Ok(verdict(prime))
        }
        Command::Localize => {
            let d = doc()?;
            let bounding = d
                .bounding_or_box()
                .ok_or((2, "document has no cells".to_string()))?;
            let hole = Polyomino::new(d.holes_or_gaps()).map_err(|e| {
                (
                    1,
                    format!("hypothesis violated: hole is not a polyomino ({e})"),
                )
            })?;
            let report = verify_localization(&bounding, &hole, &cfg).map_err(lib)?;
            emit(cli.json, &report, || {
                let mut s = format!("bounding: {bounding}\n");
                if let Some(v) = &report.hypothesis_violation {
                    s.push_str(&format!("hypothesis violated: {v}\n"));
                }
                if let Some(c) = &report.construction {
                    s.push_str(&format!("corner set size: {}\n", c.corner_triples.len()));
                    s.push_str(&format!("P' cells: {}\n", c.p_prime));
                }
                if let Some(ch) = &report.checks {
                    s.push_str(&format!(
                        "nonzerodivisor: {}\np' polyomino: {}\np' simple: {}\nideal correspondence: {}\n",
                        ch.nonzerodivisor, ch.p_prime_polyomino, ch.p_prime_simple, ch.ideal_correspondence
                    ));
                }
                s
            });
            Ok(verdict(report.passed()))
        }
        Command::GraphRep => {
            let cells = doc()?.cells;
            let opts = SearchOptions {
                max_vertices: cli.max_vertices,
                deadline: cfg.deadline,
                gb: cfg,
                ..Default::default()
            };
            let v = search_labeling(&cells, &opts).map_err(lib)?;
            let representable = v.status == RepStatus::Representable;
            emit(cli.json, &v, || {
                let mut s = format!(
                    "status: {}\nseed cell: {}\nsearch nodes: {}\ntrace steps: {}\n",
                    if representable {
                        "representable"
                    } else {
                        "not_representable"
                    },
                    v.seed,
                    v.nodes,
                    v.trace.len() + v.trace_omitted
                );
                let contradictions = v
                    .trace
                    .iter()
                    .filter(|t| matches!(t, TraceStep::Contradiction { .. }))
                    .count();
                s.push_str(&format!("contradictions: {contradictions}\n"));
                if let Some(l) = &v.labeling {
                    for (var, [a, b]) in &l.edges {
                        s.push_str(&format!("{var} -> t{a} t{b}\n"));
                    }
                }
                s
            });
            Ok(verdict(representable))
        }
        Command::Complement => {
            let d = doc()?;
            let bounding = d
                .bounding
                .ok_or((2, "complement needs a bounding record".to_string()))?;
            let cells = complement(&bounding, &d.cells).map_err(lib)?;
            let name = if d.name.is_empty() {
                String::new()
            } else {
                format!("{}-complement", d.name)
            };
            let out = PolyominoDocument {
                name,
                cells,
                bounding: Some(bounding),
                holes: None,
            };
            emit(
                cli.json,
                &json!({"bounding": bounding, "cells": out.cells}),
                || out.to_canonical_string(),
            );
            Ok(Outcome::Holds)
        }
        Command::Enumerate { cells } => {
            let all = enumerate_polyominoes(*cells).map_err(lib)?;
            let ids: Vec<String> = all.iter().map(|p| canonical_id(p.cells())).collect();
            emit(
                cli.json,
                &json!({"cells": cells, "count": ids.len(), "ids": ids}),
                || ids.iter().map(|s| format!("{s}\n")).collect::<String>(),
            );
            Ok(Outcome::Holds)
        }
        Command::Survey { max_cells } => {
            let opts = SurveyOptions {
                budget,
                max_vertices: cli.max_vertices,
                degree_cap: cli.degree_cap,
            };
            let rows = survey(*max_cells, &opts).map_err(lib)?;
            if cli.json {
                out(&to_ndjson(&rows));
            } else {
                out(&to_table(&rows));
            }
            Ok(Outcome::Holds)
        }
        Command::Render => {
            let d = doc()?;
            let holes: CellCollection = d.cells.hole_cells();
            let art = render_ascii_marked(&d.cells, &holes);
            emit(
                cli.json,
                &json!({"id": canonical_id(&d.cells), "ascii": art}),
                || art.clone(),
            );
            Ok(Outcome::Holds)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
