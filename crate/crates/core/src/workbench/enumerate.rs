//! Fixed polyominoes by growth.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{Cell, CellCollection, Point, Polyomino};

/// Largest cell count [`enumerate_polyominoes`] accepts.
pub const MAX_ENUMERATION_CELLS: usize = 10;

/// All fixed polyominoes with `n` cells, normalized to the origin, sorted.
pub fn enumerate_polyominoes(n: usize) -> Result<Vec<Polyomino>> {
    if n == 0 {
        return Err(Error::EmptyCollection);
    }
    if n > MAX_ENUMERATION_CELLS {
        return Err(Error::EnumerationCap {
            requested: n,
            cap: MAX_ENUMERATION_CELLS,
        });
    }
    let mut level: BTreeSet<CellCollection> =
        BTreeSet::from([CellCollection::from_coords(&[(0, 0)])]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for p in &level {
            // Shift by one so every neighbor has nonnegative coordinates.
            let shifted = p.translated_up(Point::new(1, 1));
            for c in shifted.iter() {
                for nb in c.neighbors() {
                    if shifted.contains(&nb) {
                        continue;
                    }
                    let grown: CellCollection = shifted.iter().copied().chain([nb]).collect();
                    next.insert(grown.normalized());
                }
            }
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|c| Polyomino::new(c).expect("grown shapes are connected"))
        .collect())
}

/// Stable identifier of a normalized collection, e.g. `3:0.0-1.0-1.1`.
pub fn canonical_id(cells: &CellCollection) -> String {
    let norm = cells.normalized();
    let parts: Vec<String> = norm
        .iter()
        .map(|Cell { lower_left: p }| format!("{}.{}", p.i, p.j))
        .collect();
    format!("{}:{}", norm.len(), parts.join("-"))
}
