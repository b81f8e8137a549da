//! The line-oriented polyomino file format.
//!
//! ```text
//! # the frame
//! name frame
//! bounding 0 0 3 3
//! cell 0 0
//! hole 1 1
//! ```
//!
//! Records are `name <text>`, `cell <i> <j>`, `hole <i> <j>` and at most one
//! `bounding <i1> <j1> <i2> <j2>`. A document with a bounding interval and
//! holes but no cells describes the complement of the holes. Parsed documents
//! are translated so that the bounding interval, or else the cells, start at
//! the origin.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{complement, Cell, CellCollection, Interval, Point};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolyominoDocument {
    pub name: String,
    pub cells: CellCollection,
    pub bounding: Option<Interval>,
    pub holes: Option<CellCollection>,
}

impl PolyominoDocument {
    pub fn new(name: impl Into<String>, cells: CellCollection) -> Self {
        PolyominoDocument {
            name: name.into(),
            cells,
            bounding: None,
            holes: None,
        }
    }

    /// Canonical text: name, bounding, sorted cells, sorted holes.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            writeln!(out, "name {}", self.name).unwrap();
        }
        if let Some(b) = &self.bounding {
            let (a, c) = b.diagonal_corners();
            writeln!(out, "bounding {} {} {} {}", a.i, a.j, c.i, c.j).unwrap();
        }
        for c in self.cells.iter() {
            writeln!(out, "cell {} {}", c.lower_left.i, c.lower_left.j).unwrap();
        }
        for h in self.holes.iter().flat_map(|h| h.iter()) {
            writeln!(out, "hole {} {}", h.lower_left.i, h.lower_left.j).unwrap();
        }
        out
    }

    /// The declared bounding interval, or the bounding box of the cells.
    pub fn bounding_or_box(&self) -> Option<Interval> {
        self.bounding.or_else(|| self.cells.bounding_interval())
    }

    /// The declared holes, or the cells of the bounding interval missing from the document.
    pub fn holes_or_gaps(&self) -> CellCollection {
        match (&self.holes, self.bounding_or_box()) {
            (Some(h), _) => h.clone(),
            (None, Some(b)) => b.cells().difference(&self.cells),
            (None, None) => CellCollection::default(),
        }
    }
}

fn coords<const N: usize>(line: usize, args: &[&str]) -> Result<[u32; N]> {
    if args.len() != N {
        return Err(Error::Parse {
            line,
            message: format!("expected {N} coordinates, found {}", args.len()),
        });
    }
    let mut out = [0u32; N];
    for (slot, a) in out.iter_mut().zip(args) {
        let v: i64 = a.parse().map_err(|_| Error::Parse {
            line,
            message: format!("not an integer: {a:?}"),
        })?;
        if v < 0 {
            return Err(Error::NegativeCoordinate { line });
        }
        *slot = u32::try_from(v).map_err(|_| Error::Parse {
            line,
            message: format!("coordinate too large: {v}"),
        })?;
    }
    Ok(out)
}

/// Parse and normalize a document.
pub fn parse_document(text: &str) -> Result<PolyominoDocument> {
    let mut name = String::new();
    let mut cells = BTreeSet::new();
    let mut holes: Option<BTreeSet<Cell>> = None;
    let mut bounding: Option<Interval> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let args: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "name" => name = rest.trim().to_string(),
            "cell" | "hole" => {
                let [i, j] = coords::<2>(line, &args)?;
                let cell = Cell::at(i, j);
                let set = if keyword == "cell" {
                    &mut cells
                } else {
                    holes.get_or_insert_with(BTreeSet::new)
                };
                if !set.insert(cell) {
                    return Err(Error::DuplicateCell { line, cell });
                }
            }
            "bounding" => {
                if bounding.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "bounding declared twice".into(),
                    });
                }
                let [a, b, c, d] = coords::<4>(line, &args)?;
                bounding = Some(Interval::from_coords(a, b, c, d).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?);
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown record {other:?}"),
                })
            }
        }
    }
    let mut cells = CellCollection::new(cells);
    let holes = holes.map(CellCollection::new);
    if let Some(b) = &bounding {
        if let Some(c) = cells
            .iter()
            .chain(holes.iter().flat_map(|h| h.iter()))
            .find(|c| !b.contains_cell(c))
        {
            return Err(Error::NotContained(*c));
        }
        if cells.is_empty() {
            if let Some(h) = &holes {
                cells = complement(b, h)?;
            }
        }
    }
    if let Some(h) = &holes {
        if let Some(c) = h.iter().find(|c| cells.contains(c)) {
            return Err(Error::DuplicateCell { line: 0, cell: *c });
        }
    }
    if cells.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let offset = match &bounding {
        Some(b) => b.lower_left(),
        None => cells.bounding_interval().expect("nonempty").lower_left(),
    };
    let shift = |p: Point| Point::new(p.i - offset.i, p.j - offset.j);
    Ok(PolyominoDocument {
        name,
        cells: cells.translated_down(offset),
        bounding: bounding.map(|b| {
            Interval::new(shift(b.lower_left()), shift(b.upper_right())).expect("translation")
        }),
        holes: holes.map(|h| h.translated_down(offset)),
    })
}

/// The normalized cells of a document.
pub fn parse_polyomino(text: &str) -> Result<CellCollection> {
    parse_document(text).map(|d| d.cells)
}
