//! ASCII drawings: `+` at vertices, `-` and `|` along cell edges, `#` inside cells.

use crate::geometry::{Cell, CellCollection};

pub fn render_ascii(cells: &CellCollection) -> String {
    let Some(bb) = cells.bounding_interval() else {
        return String::new();
    };
    let (w, h) = (bb.width() as usize, bb.height() as usize);
    let (oi, oj) = (bb.lower_left().i, bb.lower_left().j);
    let mut grid = vec![vec![' '; 2 * w + 1]; 2 * h + 1];
    for c in cells.iter() {
        let x = 2 * (c.lower_left.i - oi) as usize;
        let y = 2 * (c.lower_left.j - oj) as usize;
        for (dx, dy, ch) in [
            (0, 0, '+'),
            (2, 0, '+'),
            (0, 2, '+'),
            (2, 2, '+'),
            (1, 0, '-'),
            (1, 2, '-'),
            (0, 1, '|'),
            (2, 1, '|'),
            (1, 1, '#'),
        ] {
            grid[y + dy][x + dx] = ch;
        }
    }
    let mut out = String::new();
    for row in grid.iter().rev() {
        out.push_str(row.iter().collect::<String>().trim_end());
        out.push('\n');
    }
    out
}

/// Render and mark the given cells (e.g. holes) with `o` instead of leaving them blank.
pub fn render_ascii_marked(cells: &CellCollection, marked: &CellCollection) -> String {
    let all = cells.union(marked);
    let Some(bb) = all.bounding_interval() else {
        return String::new();
    };
    let base = render_ascii(&all);
    let h = bb.height() as usize;
    let mut lines: Vec<Vec<char>> = base.lines().map(|l| l.chars().collect()).collect();
    for Cell { lower_left: p } in marked.iter() {
        let x = 2 * (p.i - bb.lower_left().i) as usize + 1;
        let y = 2 * h - (2 * (p.j - bb.lower_left().j) as usize + 1);
        if !cells.contains(&Cell::at(p.i, p.j)) {
            lines[y][x] = 'o';
        }
    }
    lines
        .into_iter()
        .map(|l| l.into_iter().collect::<String>() + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::frame;

    #[test]
    fn single_cell() {
        assert_eq!(
            render_ascii(&CellCollection::from_coords(&[(0, 0)])),
            "+-+\n|#|\n+-+\n"
        );
    }

    #[test]
    fn domino() {
        assert_eq!(
            render_ascii(&CellCollection::from_coords(&[(0, 0), (1, 0)])),
            "+-+-+\n|#|#|\n+-+-+\n"
        );
    }

    #[test]
    fn frame_ring() {
        let expected = "+-+-+-+\n|#|#|#|\n+-+-+-+\n|#| |#|\n+-+-+-+\n|#|#|#|\n+-+-+-+\n";
        assert_eq!(render_ascii(frame().cells()), expected);
        let marked = render_ascii_marked(frame().cells(), &CellCollection::from_coords(&[(1, 1)]));
        assert_eq!(marked.lines().nth(3), Some("|#|o|#|"));
    }

    #[test]
    fn origin_is_lower_left() {
        let l = CellCollection::from_coords(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(render_ascii(&l), "+-+\n|#|\n+-+-+\n|#|#|\n+-+-+\n");
    }
}
