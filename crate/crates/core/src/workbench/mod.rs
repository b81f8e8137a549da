//! Files, corpora and reports built on top of the algebra.

pub mod document;
pub mod enumerate;
pub mod render;
pub mod survey;

pub use document::{parse_document, parse_polyomino, PolyominoDocument};
pub use enumerate::{canonical_id, enumerate_polyominoes, MAX_ENUMERATION_CELLS};
pub use render::{render_ascii, render_ascii_marked};
pub use survey::{survey, survey_row, GraphRepStatus, SurveyOptions, SurveyRow};
