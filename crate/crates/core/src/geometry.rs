//! Cells, intervals and polyominoes on the nonnegative integer lattice.
//!
//! A cell is identified with its lower-left corner. Collections of cells are
//! kept in a `BTreeSet`, so iteration follows the canonical order: lex on
//! `(i, j)` of the lower-left corners.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice point `(i, j)`: `i` is the column, `j` the row.
///
/// The derived ordering is lex on `(i, j)`, which is also the variable order
/// used for the polynomial ring (`x_a > x_b` iff `a > b` here).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub i: u32,
    pub j: u32,
}

impl Point {
    pub const fn new(i: u32, j: u32) -> Self {
        Point { i, j }
    }

    /// Strict componentwise order: `i < k` and `j < l`.
    pub fn strictly_below(&self, other: &Point) -> bool {
        self.i < other.i && self.j < other.j
    }

    /// Weak componentwise order.
    pub fn weakly_below(&self, other: &Point) -> bool {
        self.i <= other.i && self.j <= other.j
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// An axis-aligned lattice rectangle `[a, b]` with `a < b` strictly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    lower_left: Point,
    upper_right: Point,
}

impl Interval {
    pub fn new(lower_left: Point, upper_right: Point) -> Result<Self> {
        if !lower_left.strictly_below(&upper_right) {
            return Err(Error::DegenerateInterval {
                lower_left,
                upper_right,
            });
        }
        Ok(Interval {
            lower_left,
            upper_right,
        })
    }

    /// Shorthand for `Interval::new` on raw coordinates.
    pub fn from_coords(i: u32, j: u32, k: u32, l: u32) -> Result<Self> {
        Interval::new(Point::new(i, j), Point::new(k, l))
    }

    pub fn lower_left(&self) -> Point {
        self.lower_left
    }

    pub fn upper_right(&self) -> Point {
        self.upper_right
    }

    /// The diagonal corners `(a, b)`.
    pub fn diagonal_corners(&self) -> (Point, Point) {
        (self.lower_left, self.upper_right)
    }

    /// The anti-diagonal corners `((i, l), (k, j))` for `a = (i, j)`, `b = (k, l)`:
    /// upper-left first, lower-right second.
    pub fn anti_diagonal_corners(&self) -> (Point, Point) {
        let (a, b) = (self.lower_left, self.upper_right);
        (Point::new(a.i, b.j), Point::new(b.i, a.j))
    }

    pub fn upper_left(&self) -> Point {
        self.anti_diagonal_corners().0
    }

    pub fn width(&self) -> u32 {
        self.upper_right.i - self.lower_left.i
    }

    pub fn height(&self) -> u32 {
        self.upper_right.j - self.lower_left.j
    }

    /// The cells of the polyomino `P_[a,b]`.
    pub fn cells(&self) -> CellCollection {
        let mut out = BTreeSet::new();
        for i in self.lower_left.i..self.upper_right.i {
            for j in self.lower_left.j..self.upper_right.j {
                out.insert(Cell::at(i, j));
            }
        }
        CellCollection(out)
    }

    pub fn contains_cell(&self, cell: &Cell) -> bool {
        let p = cell.lower_left;
        self.lower_left.weakly_below(&p) && p.i < self.upper_right.i && p.j < self.upper_right.j
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.lower_left.weakly_below(p) && p.weakly_below(&self.upper_right)
    }

    /// Border cells of `P_[a,b]` are exactly the cells touching its outline.
    pub fn is_border_cell(&self, cell: &Cell) -> bool {
        let p = cell.lower_left;
        self.contains_cell(cell)
            && (p.i == self.lower_left.i
                || p.j == self.lower_left.j
                || p.i + 1 == self.upper_right.i
                || p.j + 1 == self.upper_right.j)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lower_left, self.upper_right)
    }
}

/// A unit cell, identified by its lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub lower_left: Point,
}

impl Cell {
    pub const fn at(i: u32, j: u32) -> Self {
        Cell {
            lower_left: Point::new(i, j),
        }
    }

    pub fn interval(&self) -> Interval {
        let a = self.lower_left;
        Interval {
            lower_left: a,
            upper_right: Point::new(a.i + 1, a.j + 1),
        }
    }

    pub fn vertices(&self) -> [Point; 4] {
        let Point { i, j } = self.lower_left;
        [
            Point::new(i, j),
            Point::new(i + 1, j),
            Point::new(i, j + 1),
            Point::new(i + 1, j + 1),
        ]
    }

    pub fn edges(&self) -> [Edge; 4] {
        let [a, r, u, ru] = self.vertices();
        [
            Edge::new(a, r),
            Edge::new(a, u),
            Edge::new(r, ru),
            Edge::new(u, ru),
        ]
    }

    /// Edge-adjacent cells that stay in the nonnegative quadrant.
    pub fn neighbors(&self) -> impl Iterator<Item = Cell> {
        let Point { i, j } = self.lower_left;
        [
            i.checked_sub(1).map(|i| Cell::at(i, j)),
            Some(Cell::at(i + 1, j)),
            j.checked_sub(1).map(|j| Cell::at(i, j)),
            Some(Cell::at(i, j + 1)),
        ]
        .into_iter()
        .flatten()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lower_left)
    }
}

/// An unordered pair of adjacent lattice points, stored smaller point first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(Point, Point);

impl Edge {
    pub fn new(a: Point, b: Point) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn endpoints(&self) -> (Point, Point) {
        (self.0, self.1)
    }
}

/// `[A, B]`: every cell whose lower-left corner lies between those of `from` and `to`.
pub fn cell_interval(from: Cell, to: Cell) -> Result<CellCollection> {
    let (a, b) = (from.lower_left, to.lower_left);
    if !a.weakly_below(&b) {
        return Err(Error::CellIntervalOrder { from, to });
    }
    let mut out = BTreeSet::new();
    for i in a.i..=b.i {
        for j in a.j..=b.j {
            out.insert(Cell::at(i, j));
        }
    }
    Ok(CellCollection(out))
}

/// A finite set of cells with no connectivity requirement.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellCollection(BTreeSet<Cell>);

impl CellCollection {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Self {
        CellCollection(cells.into_iter().collect())
    }

    pub fn from_coords(coords: &[(u32, u32)]) -> Self {
        CellCollection::new(coords.iter().map(|&(i, j)| Cell::at(i, j)))
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cell> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.0.contains(cell)
    }

    pub fn is_subset(&self, other: &CellCollection) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &CellCollection) -> CellCollection {
        CellCollection(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &CellCollection) -> CellCollection {
        CellCollection(self.0.difference(&other.0).copied().collect())
    }

    pub fn vertices(&self) -> BTreeSet<Point> {
        self.0.iter().flat_map(|c| c.vertices()).collect()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.0.iter().flat_map(|c| c.edges()).collect()
    }

    /// Smallest interval containing every cell, `None` when empty.
    pub fn bounding_interval(&self) -> Option<Interval> {
        let first = self.0.iter().next()?.lower_left;
        let (mut lo, mut hi) = (first, first);
        for c in &self.0 {
            let p = c.lower_left;
            lo = Point::new(lo.i.min(p.i), lo.j.min(p.j));
            hi = Point::new(hi.i.max(p.i), hi.j.max(p.j));
        }
        Some(Interval {
            lower_left: lo,
            upper_right: Point::new(hi.i + 1, hi.j + 1),
        })
    }

    /// Translate so that the minimal occupied corner sits at the origin.
    pub fn normalized(&self) -> CellCollection {
        match self.bounding_interval() {
            Some(iv) => self.translated_down(iv.lower_left),
            None => self.clone(),
        }
    }

    /// Subtract `offset` from every cell; the caller guarantees nonnegativity.
    pub fn translated_down(&self, offset: Point) -> CellCollection {
        CellCollection(
            self.0
                .iter()
                .map(|c| Cell::at(c.lower_left.i - offset.i, c.lower_left.j - offset.j))
                .collect(),
        )
    }

    pub fn translated_up(&self, offset: Point) -> CellCollection {
        CellCollection(
            self.0
                .iter()
                .map(|c| Cell::at(c.lower_left.i + offset.i, c.lower_left.j + offset.j))
                .collect(),
        )
    }

    /// Connected components under edge adjacency, each in canonical order.
    pub fn components(&self) -> Vec<CellCollection> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.0 {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(c) = queue.pop_front() {
                comp.insert(c);
                for n in c.neighbors() {
                    if self.0.contains(&n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            out.push(CellCollection(comp));
        }
        out
    }

    /// True iff the edge-adjacency graph on the cells is connected.
    pub fn is_polyomino(&self) -> Result<bool> {
        if self.0.is_empty() {
            return Err(Error::EmptyCollection);
        }
        Ok(self.components().len() == 1)
    }

    pub fn is_row_convex(&self) -> bool {
        contiguous_runs(self.0.iter().map(|c| (c.lower_left.j, c.lower_left.i)))
    }

    pub fn is_column_convex(&self) -> bool {
        contiguous_runs(self.0.iter().map(|c| (c.lower_left.i, c.lower_left.j)))
    }

    pub fn is_convex(&self) -> bool {
        self.is_row_convex() && self.is_column_convex()
    }

    /// Edges that belong to exactly one cell.
    pub fn free_edges(&self) -> BTreeSet<Edge> {
        let mut count: BTreeMap<Edge, u32> = BTreeMap::new();
        for e in self.0.iter().flat_map(|c| c.edges()) {
            *count.entry(e).or_default() += 1;
        }
        count
            .into_iter()
            .filter(|&(_, n)| n == 1)
            .map(|(e, _)| e)
            .collect()
    }

    /// The boundary as a set of free edges.
    pub fn boundary(&self) -> BTreeSet<Edge> {
        self.free_edges()
    }

    pub fn border_cells(&self) -> CellCollection {
        let free = self.free_edges();
        CellCollection(
            self.0
                .iter()
                .filter(|c| c.edges().iter().any(|e| free.contains(e)))
                .copied()
                .collect(),
        )
    }

    /// Cells of the bounding interval that cannot reach its outside through non-member cells.
    pub fn hole_cells(&self) -> CellCollection {
        let Some(bb) = self.bounding_interval() else {
            return CellCollection::default();
        };
        // Flood from a one-cell margin, shifted by one so coordinates stay nonnegative.
        let (lo, hi) = (bb.lower_left, bb.upper_right);
        let w = (hi.i - lo.i + 2) as i64;
        let h = (hi.j - lo.j + 2) as i64;
        let occupied = |x: i64, y: i64| {
            x >= 1
                && y >= 1
                && x < w
                && y < h
                && self
                    .0
                    .contains(&Cell::at(lo.i + x as u32 - 1, lo.j + y as u32 - 1))
        };
        let mut outside = BTreeSet::from([(0i64, 0i64)]);
        let mut queue = VecDeque::from([(0i64, 0i64)]);
        while let Some((x, y)) = queue.pop_front() {
            for (dx, dy) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx > w || ny > h || occupied(nx, ny) {
                    continue;
                }
                if outside.insert((nx, ny)) {
                    queue.push_back((nx, ny));
                }
            }
        }
        CellCollection(
            bb.cells()
                .0
                .into_iter()
                .filter(|c| {
                    let x = (c.lower_left.i - lo.i + 1) as i64;
                    let y = (c.lower_left.j - lo.j + 1) as i64;
                    !self.0.contains(c) && !outside.contains(&(x, y))
                })
                .collect(),
        )
    }

    /// No cell outside the collection is trapped inside its bounding interval.
    pub fn is_simple(&self) -> bool {
        self.hole_cells().is_empty()
    }

    /// All intervals `[a, b]` whose cell rectangle lies inside the collection, lex on corners.
    pub fn inner_intervals(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        for c in &self.0 {
            let Point { i: x0, j: y0 } = c.lower_left;
            let mut max_w = u32::MAX;
            let mut y = y0;
            loop {
                let mut run = 0;
                while run < max_w && self.0.contains(&Cell::at(x0 + run, y)) {
                    run += 1;
                }
                max_w = run;
                if max_w == 0 {
                    break;
                }
                for w in 1..=max_w {
                    out.push(Interval {
                        lower_left: c.lower_left,
                        upper_right: Point::new(x0 + w, y + 1),
                    });
                }
                y += 1;
            }
        }
        out.sort();
        out
    }

    pub fn is_inner_interval(&self, iv: &Interval) -> bool {
        iv.cells().is_subset(self)
    }
}

impl FromIterator<Cell> for CellCollection {
    fn from_iter<T: IntoIterator<Item = Cell>>(iter: T) -> Self {
        CellCollection(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CellCollection {
    type Item = &'a Cell;
    type IntoIter = std::collections::btree_set::Iter<'a, Cell>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for CellCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, c) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

// Keys are (line, position); each line's positions must form one contiguous run.
fn contiguous_runs(keys: impl Iterator<Item = (u32, u32)>) -> bool {
    let mut lines: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (line, pos) in keys {
        lines.entry(line).or_default().push(pos);
    }
    lines.values_mut().all(|v| {
        v.sort_unstable();
        v.windows(2).all(|w| w[1] == w[0] + 1)
    })
}

/// A nonempty, edge-connected collection of cells.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Polyomino(CellCollection);

impl Polyomino {
    pub fn new(cells: CellCollection) -> Result<Self> {
        if cells.is_polyomino()? {
            Ok(Polyomino(cells))
        } else {
            Err(Error::NotConnected)
        }
    }

    pub fn from_coords(coords: &[(u32, u32)]) -> Result<Self> {
        Polyomino::new(CellCollection::from_coords(coords))
    }

    pub fn cells(&self) -> &CellCollection {
        &self.0
    }

    pub fn into_cells(self) -> CellCollection {
        self.0
    }

    pub fn normalized(&self) -> Polyomino {
        Polyomino(self.0.normalized())
    }

    /// A polyomino `Q` is a subpolyomino of `self` when every cell of `Q` is in `self`.
    pub fn contains_subpolyomino(&self, other: &Polyomino) -> bool {
        other.0.is_subset(&self.0)
    }
}

impl Deref for Polyomino {
    type Target = CellCollection;

    fn deref(&self) -> &CellCollection {
        &self.0
    }
}

impl fmt::Display for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `P^c = P_I \ P`, the cells of the bounding interval not in `P`.
pub fn complement(bounding: &Interval, p: &CellCollection) -> Result<CellCollection> {
    if let Some(c) = p.iter().find(|c| !bounding.contains_cell(c)) {
        return Err(Error::NotContained(*c));
    }
    Ok(bounding.cells().difference(p))
}

/// The ring-shaped polyomino `{0,1,2}^2 \ {(1,1)}`.
pub fn frame() -> Polyomino {
    let cells = Interval::from_coords(0, 0, 3, 3)
        .unwrap()
        .cells()
        .difference(&CellCollection::from_coords(&[(1, 1)]));
    Polyomino(cells)
}
