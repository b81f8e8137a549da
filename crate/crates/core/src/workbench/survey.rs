//! One row of facts per polyomino, computed in parallel and reported in
//! corpus order.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::binomial::generators;
use crate::error::{Error, Result};
use crate::geometry::CellCollection;
use crate::graph::{search_labeling, RepStatus, SearchOptions};
use crate::groebner::{
    minors_form_reduced_gb, quadratic_gb_condition, GbConfig, DEFAULT_DEGREE_CAP,
};
use crate::toric::{is_prime, PrimalityWitness, Verdict};
use crate::workbench::enumerate::{canonical_id, enumerate_polyominoes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphRepStatus {
    Representable,
    NotRepresentable,
    Timeout,
}

/// Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub id: String,
    pub cells: usize,
    pub simple: bool,
    pub convex: bool,
    /// The combinatorial criterion for the minors to be a quadratic Groebner basis.
    pub quadratic_gb: bool,
    /// Buchberger's answer to the same question; `None` on timeout.
    pub gb_equals_generators: Option<bool>,
    /// `None` on timeout.
    pub prime: Option<bool>,
    pub prime_witness: Option<PrimalityWitness>,
    pub graph_rep: GraphRepStatus,
    pub graph_search_nodes: Option<usize>,
    pub graph_trace_steps: Option<usize>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SurveyOptions {
    /// Wall-clock budget per row.
    pub budget: Duration,
    pub max_vertices: Option<usize>,
    pub degree_cap: u32,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            budget: Duration::from_secs(30),
            max_vertices: None,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

fn limit_note<T>(what: &str, r: Result<T>, notes: &mut Vec<String>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::BudgetExceeded) => {
            notes.push(format!("{what}: timeout"));
            None
        }
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            None
        }
    }
}

pub fn survey_row(cells: &CellCollection, opts: &SurveyOptions) -> SurveyRow {
    let deadline = Instant::now() + opts.budget;
    let cfg = GbConfig {
        degree_cap: opts.degree_cap,
        deadline: Some(deadline),
    };
    let mut notes = Vec::new();
    let gens = generators(cells);

    let gb_equals_generators =
        limit_note("groebner", minors_form_reduced_gb(cells, &cfg), &mut notes);
    let cert = limit_note("prime", is_prime(&gens, &cfg), &mut notes);
    let search_opts = SearchOptions {
        max_vertices: opts.max_vertices,
        deadline: Some(deadline),
        gb: cfg,
        ..Default::default()
    };
    let verdict = limit_note(
        "graph_rep",
        search_labeling(cells, &search_opts),
        &mut notes,
    );

    SurveyRow {
        id: canonical_id(cells),
        cells: cells.len(),
        simple: cells.is_simple(),
        convex: cells.is_convex(),
        quadratic_gb: quadratic_gb_condition(cells),
        gb_equals_generators,
        prime: cert.as_ref().map(|c| c.verdict == Verdict::Prime),
        prime_witness: cert.and_then(|c| c.witness),
        graph_rep: match verdict.as_ref().map(|v| v.status) {
            Some(RepStatus::Representable) => GraphRepStatus::Representable,
            Some(RepStatus::NotRepresentable) => GraphRepStatus::NotRepresentable,
            None => GraphRepStatus::Timeout,
        },
        graph_search_nodes: verdict.as_ref().map(|v| v.nodes),
        graph_trace_steps: verdict.as_ref().map(|v| v.trace.len() + v.trace_omitted),
        notes,
    }
}

/// Rows for a given corpus, in corpus order.
pub fn survey_corpus(corpus: &[CellCollection], opts: &SurveyOptions) -> Vec<SurveyRow> {
    corpus.par_iter().map(|c| survey_row(c, opts)).collect()
}

/// Rows for every fixed polyomino with at most `max_cells` cells.
pub fn survey(max_cells: usize, opts: &SurveyOptions) -> Result<Vec<SurveyRow>> {
    let mut corpus = Vec::new();
    for n in 1..=max_cells {
        corpus.extend(
            enumerate_polyominoes(n)?
                .into_iter()
                .map(|p| p.into_cells()),
        );
    }
    Ok(survey_corpus(&corpus, opts))
}

/// Newline-delimited JSON, one row per line.
pub fn to_ndjson(rows: &[SurveyRow]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("rows serialize") + "\n")
        .collect()
}

/// A fixed-width table for terminals.
pub fn to_table(rows: &[SurveyRow]) -> String {
    let yn = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "?",
    };
    let mut out = format!(
        "{:<40} {:>5} {:>6} {:>6} {:>6} {:>6} {:>18}\n",
        "id", "cells", "simple", "convex", "quadgb", "prime", "graph"
    );
    for r in rows {
        let graph = match r.graph_rep {
            GraphRepStatus::Representable => "representable",
            GraphRepStatus::NotRepresentable => "not_representable",
            GraphRepStatus::Timeout => "timeout",
        };
        out.push_str(&format!(
            "{:<40} {:>5} {:>6} {:>6} {:>6} {:>6} {:>18}\n",
            r.id,
            r.cells,
            yn(Some(r.simple)),
            yn(Some(r.convex)),
            yn(Some(r.quadratic_gb)),
            yn(r.prime),
            graph
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::frame;

    #[test]
    fn frame_row() {
        let r = survey_row(frame().cells(), &SurveyOptions::default());
        assert!(!r.simple && !r.convex && r.quadratic_gb);
        assert_eq!(r.prime, Some(true));
        assert_eq!(r.graph_rep, GraphRepStatus::NotRepresentable);
    }

    #[test]
    fn single_cell_row() {
        let r = survey_row(
            &CellCollection::from_coords(&[(0, 0)]),
            &SurveyOptions::default(),
        );
        assert!(r.simple && r.convex && r.quadratic_gb);
        assert_eq!(r.prime, Some(true));
        assert_eq!(r.graph_rep, GraphRepStatus::Representable);
        assert_eq!(r.id, "1:0.0");
    }

    #[test]
    fn s_tetromino_row() {
        let s = CellCollection::from_coords(&[(0, 0), (1, 0), (1, 1), (2, 1)]);
        let r = survey_row(&s, &SurveyOptions::default());
        // Every row and every column of the S shape is contiguous.
        assert!(r.simple && r.convex && !r.quadratic_gb);
        assert_eq!(r.gb_equals_generators, Some(false));
        assert_eq!(r.prime, Some(true));
        assert_eq!(r.graph_rep, GraphRepStatus::Representable);
    }

    #[test]
    fn zero_budget_times_out_instead_of_dropping() {
        let opts = SurveyOptions {
            budget: Duration::ZERO,
            ..Default::default()
        };
        let rows = survey_corpus(&[frame().into_cells()], &opts);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].graph_rep, GraphRepStatus::Timeout);
        assert!(!rows[0].notes.is_empty());
    }

    #[test]
    fn ndjson_is_deterministic() {
        let opts = SurveyOptions::default();
        let a = to_ndjson(&survey(3, &opts).unwrap());
        let b = to_ndjson(&survey(3, &opts).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 9);
        assert!(a
            .lines()
            .next()
            .unwrap()
            .starts_with("{\"id\":\"1:0.0\",\"cells\":1,"));
    }
}
