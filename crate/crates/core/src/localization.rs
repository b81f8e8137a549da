//! Localizing the complement of a convex hole at its upper-left corner.
//!
//! Setting: a bounding interval `I = [a, b]`, a convex polyomino `P` inside it
//! that stays off the border of `P_I`, and `P^c = P_I \ P`. With `c` the
//! upper-left corner of `I`, the variable `x_c` is a nonzerodivisor modulo
//! `I_{P^c}`, so primality of `I_{P^c}` reduces to primality after
//! inverting `x_c`. There every corner `p` of an interval `[r, q]` anchored at
//! `c` satisfies `x_p = x_r x_q / x_c`, and the remaining relations become
//! those of a smaller simple polyomino `P'`.
//!
//! This module builds `P'` and the vertex identification for concrete
//! instances and checks each step. It verifies instances; it proves nothing
//! about inputs it is not run on.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::binomial::{generators, Binomial, Monomial, MonomialOrder, Var};
use crate::error::{HypothesisViolation, Result};
use crate::geometry::{complement, CellCollection, Interval, Point, Polyomino};
use crate::groebner::{buchberger, GbConfig};

/// An interval `[r, q]` of `P^c` whose anti-diagonal corners are `c` and `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CornerTriple {
    pub p: Point,
    pub r: Point,
    pub q: Point,
}

impl CornerTriple {
    pub fn interval(&self) -> Interval {
        Interval::new(self.r, self.q).expect("corner triples come from intervals")
    }
}

/// Vertex substitutions gluing the left and top border segments of `P_I`
/// onto vertices of `P'`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IdentificationMap {
    /// `(source on the border of P_I, target in V(P'))`, sorted by source.
    pub pairs: Vec<(Point, Point)>,
}

impl IdentificationMap {
    pub fn apply(&self, p: Point) -> Point {
        self.pairs
            .iter()
            .find(|(s, _)| *s == p)
            .map(|(_, t)| *t)
            .unwrap_or(p)
    }

    fn apply_var(&self, v: Var) -> Var {
        match v {
            Var::Point(p) => Var::Point(self.apply(p)),
            other => other,
        }
    }

    pub fn is_injective(&self) -> bool {
        let targets: BTreeSet<Point> = self.pairs.iter().map(|(_, t)| *t).collect();
        targets.len() == self.pairs.len()
    }
}

/// The pieces of the construction of `P'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub corner_triples: Vec<CornerTriple>,
    pub removed_cells: CellCollection,
    pub p_prime: CellCollection,
    pub identification: IdentificationMap,
    /// Same segments glued in the opposite direction; used to detect ambiguity.
    pub reversed_identification: IdentificationMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalizationChecks {
    pub nonzerodivisor: bool,
    pub p_prime_polyomino: bool,
    pub p_prime_simple: bool,
    pub ideal_correspondence: bool,
}

impl LocalizationChecks {
    pub fn all(&self) -> bool {
        self.nonzerodivisor
            && self.p_prime_polyomino
            && self.p_prime_simple
            && self.ideal_correspondence
    }

    pub fn failing(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.nonzerodivisor, "nonzerodivisor"),
            (self.p_prime_polyomino, "p_prime_polyomino"),
            (self.p_prime_simple, "p_prime_simple"),
            (self.ideal_correspondence, "ideal_correspondence"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub bounding: Interval,
    pub hole: CellCollection,
    /// `None` when the hypotheses hold; otherwise the construction is skipped.
    pub hypothesis_violation: Option<String>,
    pub construction: Option<Construction>,
    pub checks: Option<LocalizationChecks>,
    /// Whether gluing the segments in reverse yields the same ideal.
    pub reversed_direction_agrees: Option<bool>,
}

impl LocalizationReport {
    pub fn passed(&self) -> bool {
        self.checks.is_some_and(|c| c.all())
    }
}

/// The corner `c`: upper-left corner of the bounding interval.
pub fn corner(bounding: &Interval) -> Point {
    bounding.upper_left()
}

/// Check the hypotheses of the construction, returning the complement `P^c`.
pub fn check_hypotheses(
    bounding: &Interval,
    hole: &Polyomino,
) -> std::result::Result<CellCollection, HypothesisViolation> {
    if !hole.is_convex() {
        return Err(HypothesisViolation::HoleNotConvex);
    }
    let pc =
        complement(bounding, hole.cells()).map_err(|_| HypothesisViolation::HoleNotContained)?;
    if hole.iter().any(|c| bounding.is_border_cell(c)) {
        return Err(HypothesisViolation::HoleTouchesBoundary);
    }
    if pc.is_empty() || pc.components().len() != 1 {
        return Err(HypothesisViolation::ComplementDisconnected);
    }
    Ok(pc)
}

/// All corner triples `(p, r, q)` of `P^c`.
pub fn corner_set(bounding: &Interval, hole: &Polyomino) -> Result<Vec<CornerTriple>> {
    let pc = check_hypotheses(bounding, hole)?;
    corner_triples_of(&pc, corner(bounding))
}

fn corner_triples_of(pc: &CellCollection, c: Point) -> Result<Vec<CornerTriple>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for iv in pc.inner_intervals() {
        let (upper_left, lower_right) = iv.anti_diagonal_corners();
        if upper_left != c {
            continue;
        }
        if !seen.insert(lower_right) {
            return Err(HypothesisViolation::AmbiguousCorner(lower_right).into());
        }
        out.push(CornerTriple {
            p: lower_right,
            r: iv.lower_left(),
            q: iv.upper_right(),
        });
    }
    out.sort();
    Ok(out)
}

/// Check the segment claim: for each triple, every point of `[r, p]` other than `r` is in `A`.
pub fn segment_claim_holds(triples: &[CornerTriple]) -> bool {
    let a: BTreeSet<Point> = triples.iter().map(|t| t.p).collect();
    triples
        .iter()
        .all(|t| (t.r.i + 1..=t.p.i).all(|x| a.contains(&Point::new(x, t.p.j))))
}

/// Build `P'` and the identification maps.
pub fn construct_p_prime(bounding: &Interval, hole: &Polyomino) -> Result<Construction> {
    let pc = check_hypotheses(bounding, hole)?;
    let corner_triples = corner_triples_of(&pc, corner(bounding))?;
    let removed_cells: CellCollection = corner_triples
        .iter()
        .flat_map(|t| t.interval().cells().iter().copied().collect::<Vec<_>>())
        .collect();
    let p_prime = pc.difference(&removed_cells);

    let (a, b) = bounding.diagonal_corners();
    let verts = hole.vertices();
    // Lowest vertex of the leftmost column of P, and rightmost vertex of its top row.
    let low_left = *verts.iter().min().expect("hole is nonempty");
    let top_right = *verts
        .iter()
        .max_by_key(|p| (p.j, p.i))
        .expect("hole is nonempty");

    let mut forward = Vec::new();
    let mut reversed = Vec::new();
    for y in a.j..=low_left.j {
        forward.push((Point::new(a.i, y), Point::new(low_left.i, y)));
        reversed.push((
            Point::new(a.i, y),
            Point::new(low_left.i, a.j + low_left.j - y),
        ));
    }
    for x in top_right.i..=b.i {
        forward.push((Point::new(x, b.j), Point::new(x, top_right.j)));
        reversed.push((
            Point::new(x, b.j),
            Point::new(top_right.i + b.i - x, top_right.j),
        ));
    }
    forward.sort();
    reversed.sort();
    Ok(Construction {
        corner_triples,
        removed_cells,
        p_prime,
        identification: IdentificationMap { pairs: forward },
        reversed_identification: IdentificationMap { pairs: reversed },
    })
}

/// `x_c` divides no initial term of the reduced lex basis of `I_{P^c}`,
/// with `c` the upper-left corner of the bounding box of `pc`.
pub fn nonzerodivisor_check(pc: &CellCollection, cfg: &GbConfig) -> Result<bool> {
    nonzerodivisor_check_under(pc, &MonomialOrder::lex(), cfg)
}

/// [`nonzerodivisor_check`] under an arbitrary order.
pub fn nonzerodivisor_check_under(
    pc: &CellCollection,
    order: &MonomialOrder,
    cfg: &GbConfig,
) -> Result<bool> {
    let Some(bb) = pc.bounding_interval() else {
        return Ok(true);
    };
    nonzerodivisor_at(pc, corner(&bb), order, cfg)
}

fn nonzerodivisor_at(
    pc: &CellCollection,
    c: Point,
    order: &MonomialOrder,
    cfg: &GbConfig,
) -> Result<bool> {
    let xc = Var::Point(c);
    let gb = buchberger(&generators(pc), order, cfg)?;
    let free = gb.initial_terms().all(|m| m.exponent(&xc) == 0);
    Ok(free)
}

/// Rewrite a generator of `I_{P^c}` in the localization: substitute
/// `x_p -> x_r x_q`, balance the two sides with powers of `x_c`, glue
/// vertices through `ident` and strip the common monomial factor. `None`
/// when the image vanishes.
pub fn transform_generator(
    g: &Binomial,
    substitution: &BTreeMap<Var, Monomial>,
    xc: Var,
    ident: &IdentificationMap,
) -> Option<Binomial> {
    let substitute = |m: &Monomial| -> (Monomial, u32) {
        let mut out = Monomial::one();
        let mut count = 0;
        for (v, e) in m.iter() {
            let image = substitution
                .get(v)
                .cloned()
                .unwrap_or_else(|| Monomial::var(*v));
            if substitution.contains_key(v) {
                count += e;
            }
            for _ in 0..*e {
                out = out.mul(&image);
            }
        }
        (out, count)
    };
    let (plus, s_plus) = substitute(g.plus());
    let (minus, s_minus) = substitute(g.minus());
    let top = s_plus.max(s_minus);
    let plus = plus.mul(&Monomial::from_pairs([(xc, top - s_plus)]));
    let minus = minus.mul(&Monomial::from_pairs([(xc, top - s_minus)]));
    let plus = plus.map_vars(|v| ident.apply_var(v));
    let minus = minus.map_vars(|v| ident.apply_var(v));
    Binomial::nonzero(plus, minus, &MonomialOrder::lex()).map(|b| b.without_content())
}

fn transformed_generators(
    pc: &CellCollection,
    construction: &Construction,
    c: Point,
    ident: &IdentificationMap,
) -> Vec<Binomial> {
    let substitution: BTreeMap<Var, Monomial> = construction
        .corner_triples
        .iter()
        .map(|t| {
            (
                Var::Point(t.p),
                Monomial::product([Var::Point(t.r), Var::Point(t.q)]),
            )
        })
        .collect();
    let xc = Var::Point(c);
    let set: BTreeSet<Binomial> = generators(pc)
        .iter()
        .filter_map(|g| transform_generator(g, &substitution, xc, ident))
        .collect();
    set.into_iter().collect()
}

/// Whether the transformed generators generate exactly `I_{P'}`.
fn correspondence_holds(
    transformed: &[Binomial],
    p_prime: &CellCollection,
    cfg: &GbConfig,
) -> Result<bool> {
    let target = generators(p_prime);
    let order = MonomialOrder::lex();
    let gb_target = buchberger(&target, &order, cfg)?;
    if !transformed.iter().all(|h| gb_target.contains(h)) {
        return Ok(false);
    }
    let gb_transformed = buchberger(transformed, &order, cfg)?;
    Ok(target.iter().all(|f| gb_transformed.contains(f)))
}

/// Run the construction and all four checks.
///
/// Hypothesis violations produce a report with the violation recorded and
/// no checks; only algebra limits (degree cap, budget) are errors.
pub fn verify_localization(
    bounding: &Interval,
    hole: &Polyomino,
    cfg: &GbConfig,
) -> Result<LocalizationReport> {
    let mut report = LocalizationReport {
        bounding: *bounding,
        hole: hole.cells().clone(),
        hypothesis_violation: None,
        construction: None,
        checks: None,
        reversed_direction_agrees: None,
    };
    let pc = match check_hypotheses(bounding, hole) {
        Ok(pc) => pc,
        Err(v) => {
            report.hypothesis_violation = Some(v.to_string());
            return Ok(report);
        }
    };
    let construction = match construct_p_prime(bounding, hole) {
        Ok(c) => c,
        Err(crate::Error::Hypothesis(v)) => {
            report.hypothesis_violation = Some(v.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let c = corner(bounding);
    let nonzerodivisor = nonzerodivisor_at(&pc, c, &MonomialOrder::lex(), cfg)?;
    let p_prime_polyomino = construction.p_prime.is_polyomino().unwrap_or(false);
    let p_prime_simple = p_prime_polyomino && construction.p_prime.is_simple();

    let forward = transformed_generators(&pc, &construction, c, &construction.identification);
    let ideal_correspondence =
        p_prime_polyomino && correspondence_holds(&forward, &construction.p_prime, cfg)?;
    let backward =
        transformed_generators(&pc, &construction, c, &construction.reversed_identification);
    let reversed_direction_agrees = crate::groebner::ideal_equal(&forward, &backward, cfg)?;

    report.checks = Some(LocalizationChecks {
        nonzerodivisor,
        p_prime_polyomino,
        p_prime_simple,
        ideal_correspondence,
    });
    report.reversed_direction_agrees = Some(reversed_direction_agrees);
    report.construction = Some(construction);
    Ok(report)
}

/// Every admissible instance with bounding interval at most `max_w x max_h`
/// cells: each convex hole that avoids the border, in canonical order.
pub fn convex_hole_instances(max_w: u32, max_h: u32) -> Vec<(Interval, Polyomino)> {
    let mut out = Vec::new();
    for w in 3..=max_w {
        for h in 3..=max_h {
            let bounding = Interval::from_coords(0, 0, w, h).expect("positive size");
            let inner = Interval::from_coords(1, 1, w - 1, h - 1).expect("w, h >= 3");
            let inner_cells: Vec<_> = inner.cells().iter().copied().collect();
            let n = inner_cells.len();
            let mut holes: Vec<Polyomino> = (1u32..(1 << n))
                .filter_map(|mask| {
                    let cells: CellCollection = (0..n)
                        .filter(|k| mask & (1 << k) != 0)
                        .map(|k| inner_cells[k])
                        .collect();
                    Polyomino::new(cells).ok().filter(|p| p.is_convex())
                })
                .collect();
            holes.sort();
            out.extend(holes.into_iter().map(|p| (bounding, p)));
        }
    }
    out
}
