//! Buchberger's algorithm for pure-difference binomial ideals.
//!
//! Internally monomials are dense exponent vectors indexed by variable
//! position, with position 0 the largest variable of the active order. Lex
//! comparison of two monomials is then plain slice comparison.
//!
//! Reduction of a binomial `u - v` rewrites each term separately: a term
//! divisible by an initial term `L` of `L - T` becomes `(m / L) * T`. Both
//! terms stay monomials, so no object with more than two terms ever exists.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use crate::binomial::{generators, Binomial, Monomial, MonomialOrder, Var};
use crate::error::{Error, Result};
use crate::geometry::{CellCollection, Interval, Point};

pub const DEFAULT_DEGREE_CAP: u32 = 20;

/// Limits for a Groebner basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    /// Abort when a new basis element exceeds this total degree.
    pub degree_cap: u32,
    /// Abort with [`Error::BudgetExceeded`] once this instant passes.
    pub deadline: Option<Instant>,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            degree_cap: DEFAULT_DEGREE_CAP,
            deadline: None,
        }
    }
}

impl GbConfig {
    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }
}

type Exps = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct DenseBinomial {
    lead: Exps,
    tail: Exps,
}

impl DenseBinomial {
    fn degree(&self) -> u32 {
        self.lead.iter().sum::<u32>().max(self.tail.iter().sum())
    }

    /// `u - v` oriented so the lead is the larger term, `None` if zero.
    fn oriented(u: Exps, v: Exps) -> Option<Self> {
        match u.cmp(&v) {
            std::cmp::Ordering::Greater => Some(DenseBinomial { lead: u, tail: v }),
            std::cmp::Ordering::Less => Some(DenseBinomial { lead: v, tail: u }),
            std::cmp::Ordering::Equal => None,
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `m / lead * tail`, assuming `lead | m`.
fn rewrite(m: &[u32], lead: &[u32], tail: &[u32]) -> Exps {
    m.iter()
        .zip(lead)
        .zip(tail)
        .map(|((x, l), t)| x - l + t)
        .collect()
}

fn normal_form(mut m: Exps, basis: &[DenseBinomial]) -> Exps {
    while let Some(g) = basis.iter().find(|g| divides(&g.lead, &m)) {
        let next = rewrite(&m, &g.lead, &g.tail);
        debug_assert!(next < m, "reduction must strictly decrease the term");
        m = next;
    }
    m
}

/// Variables of a computation, sorted from largest to smallest.
#[derive(Debug, Clone)]
struct Ring {
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
}

impl Ring {
    fn new(vars: impl IntoIterator<Item = Var>, order: &MonomialOrder) -> Ring {
        let mut vars: Vec<Var> = vars
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        order.sort_descending(&mut vars);
        let index = vars.iter().enumerate().map(|(n, v)| (*v, n)).collect();
        Ring { vars, index }
    }

    fn for_binomials<'a>(
        gens: impl IntoIterator<Item = &'a Binomial>,
        order: &MonomialOrder,
    ) -> Ring {
        Ring::new(
            gens.into_iter().flat_map(|g| g.vars().collect::<Vec<_>>()),
            order,
        )
    }

    /// Split a monomial into its dense part over the ring and the rest.
    fn split(&self, m: &Monomial) -> (Exps, Monomial) {
        let mut dense = vec![0; self.vars.len()];
        let mut rest = Vec::new();
        for (v, e) in m.iter() {
            match self.index.get(v) {
                Some(&n) => dense[n] = *e,
                None => rest.push((*v, *e)),
            }
        }
        (dense, Monomial::from_pairs(rest))
    }

    fn dense(&self, m: &Monomial) -> Exps {
        let (d, rest) = self.split(m);
        debug_assert!(rest.is_one(), "monomial uses variables outside the ring");
        d
    }

    fn sparse(&self, d: &[u32]) -> Monomial {
        Monomial::from_pairs(self.vars.iter().zip(d).map(|(v, e)| (*v, *e)))
    }

    fn binomial(&self, b: &DenseBinomial) -> Binomial {
        Binomial::from_sorted(self.sparse(&b.lead), self.sparse(&b.tail))
    }
}

/// A reduced Groebner basis, tagged with its monomial order.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    elements: Vec<Binomial>,
    ring: Ring,
    dense: Vec<DenseBinomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn order_tag(&self) -> String {
        self.order.tag()
    }

    /// Elements sorted by initial term, smallest first.
    pub fn elements(&self) -> &[Binomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn initial_terms(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().map(|b| b.initial_term())
    }

    pub fn max_degree(&self) -> u32 {
        self.elements.iter().map(|b| b.degree()).max().unwrap_or(0)
    }

    /// The unique standard monomial congruent to `m`.
    pub fn normal_form(&self, m: &Monomial) -> Monomial {
        // Variables outside the ring never take part in a rewrite.
        let (dense, rest) = self.ring.split(m);
        self.ring
            .sparse(&normal_form(dense, &self.dense))
            .mul(&rest)
    }

    /// Normal form of `f`, `None` when it reduces to zero.
    pub fn reduce(&self, f: &Binomial) -> Option<Binomial> {
        Binomial::nonzero(
            self.normal_form(f.plus()),
            self.normal_form(f.minus()),
            &self.order,
        )
    }

    /// Ideal membership regardless of how `f` is oriented.
    pub fn contains(&self, f: &Binomial) -> bool {
        self.normal_form(f.plus()) == self.normal_form(f.minus())
    }

    /// Same elements as `gens`, compared as sets after normalizing `gens` under this order.
    pub fn equals_set(&self, gens: &[Binomial]) -> bool {
        let ours: BTreeSet<&Binomial> = self.elements.iter().collect();
        let theirs: BTreeSet<Binomial> = gens.iter().map(|g| g.renormalized(&self.order)).collect();
        ours.len() == theirs.len() && theirs.iter().all(|g| ours.contains(g))
    }

    /// Elements that only use variables accepted by `keep`, as a basis of the contraction.
    pub fn eliminate(&self, keep: impl Fn(&Var) -> bool) -> Vec<Binomial> {
        self.elements
            .iter()
            .filter(|b| b.vars().all(|v| keep(&v)))
            .cloned()
            .collect()
    }
}

fn dense_inputs(gens: &[Binomial], ring: &Ring) -> Vec<DenseBinomial> {
    let set: BTreeSet<DenseBinomial> = gens
        .iter()
        .filter_map(|g| DenseBinomial::oriented(ring.dense(g.plus()), ring.dense(g.minus())))
        .collect();
    set.into_iter().collect()
}

fn buchberger_dense(mut basis: Vec<DenseBinomial>, cfg: &GbConfig) -> Result<Vec<DenseBinomial>> {
    // Normal strategy: smallest lcm first, ties by pair indices. Indices follow
    // the canonical input order, so the run is deterministic.
    let mut pairs: BTreeSet<(Exps, usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            if !coprime(&basis[i].lead, &basis[j].lead) {
                pairs.insert((lcm(&basis[i].lead, &basis[j].lead), i, j));
            }
        }
    }
    while let Some((l, i, j)) = pairs.pop_first() {
        cfg.check_deadline()?;
        let u = normal_form(rewrite(&l, &basis[i].lead, &basis[i].tail), &basis);
        let v = normal_form(rewrite(&l, &basis[j].lead, &basis[j].tail), &basis);
        let Some(new) = DenseBinomial::oriented(u, v) else {
            continue;
        };
        let degree = new.degree();
        if degree > cfg.degree_cap {
            return Err(Error::DegreeCap {
                degree,
                cap: cfg.degree_cap,
            });
        }
        let k = basis.len();
        for (n, g) in basis.iter().enumerate() {
            if !coprime(&g.lead, &new.lead) {
                pairs.insert((lcm(&g.lead, &new.lead), n, k));
            }
        }
        basis.push(new);
    }
    Ok(autoreduce(basis))
}

fn autoreduce(mut basis: Vec<DenseBinomial>) -> Vec<DenseBinomial> {
    basis.sort();
    let mut minimal: Vec<DenseBinomial> = Vec::new();
    for g in &basis {
        let redundant = basis
            .iter()
            .any(|h| h.lead != g.lead && divides(&h.lead, &g.lead))
            || minimal.iter().any(|h| h.lead == g.lead);
        if !redundant {
            minimal.push(g.clone());
        }
    }
    // A lead never divides its own tail, so reducing against the whole
    // minimal basis only touches the other elements.
    let reduced: Vec<DenseBinomial> = minimal
        .iter()
        .filter_map(|g| {
            DenseBinomial::oriented(g.lead.clone(), normal_form(g.tail.clone(), &minimal))
        })
        .collect();
    let mut reduced = reduced;
    reduced.sort();
    reduced
}

/// Reduced Groebner basis of the ideal generated by `gens` under `order`.
///
/// Deterministic: the result does not depend on the order of `gens`.
pub fn buchberger(
    gens: &[Binomial],
    order: &MonomialOrder,
    cfg: &GbConfig,
) -> Result<GroebnerBasis> {
    let ring = Ring::for_binomials(gens, order);
    let dense = buchberger_dense(dense_inputs(gens, &ring), cfg)?;
    let elements = dense.iter().map(|b| ring.binomial(b)).collect();
    Ok(GroebnerBasis {
        order: order.clone(),
        elements,
        ring,
        dense,
    })
}

/// The S-pair of two binomials, `None` when it vanishes.
pub fn s_pair(f: &Binomial, g: &Binomial, order: &MonomialOrder) -> Option<Binomial> {
    let l = f.initial_term().lcm(g.initial_term());
    let from_f = l.checked_div(f.initial_term()).expect("lcm").mul(f.minus());
    let from_g = l.checked_div(g.initial_term()).expect("lcm").mul(g.minus());
    Binomial::nonzero(from_g, from_f, order)
}

/// Fully reduce `f` modulo `basis`, `None` when it reduces to zero.
///
/// When `basis` is not a Groebner basis the result depends on which divisor
/// is tried first; here it is the first matching element of `basis`.
pub fn reduce(f: &Binomial, basis: &[Binomial], order: &MonomialOrder) -> Option<Binomial> {
    let ring = Ring::for_binomials(basis.iter().chain([f]), order);
    let dense: Vec<DenseBinomial> = basis
        .iter()
        .filter_map(|g| DenseBinomial::oriented(ring.dense(g.plus()), ring.dense(g.minus())))
        .collect();
    let u = normal_form(ring.dense(f.plus()), &dense);
    let v = normal_form(ring.dense(f.minus()), &dense);
    DenseBinomial::oriented(u, v).map(|b| ring.binomial(&b))
}

/// Membership of `f` in the ideal of `gb`; `f` must be normalized under the basis order.
pub fn ideal_membership(f: &Binomial, gb: &GroebnerBasis) -> Result<bool> {
    if !f.is_normalized_under(gb.order()) {
        return Err(Error::OrderMismatch(gb.order_tag()));
    }
    Ok(gb.contains(f))
}

/// Whether two generating sets define the same ideal.
pub fn ideal_equal(a: &[Binomial], b: &[Binomial], cfg: &GbConfig) -> Result<bool> {
    let order = MonomialOrder::lex();
    let gb_b = buchberger(b, &order, cfg)?;
    if !a.iter().all(|f| gb_b.contains(f)) {
        return Ok(false);
    }
    let gb_a = buchberger(a, &order, cfg)?;
    Ok(b.iter().all(|f| gb_a.contains(f)))
}

/// The combinatorial test for the inner 2-minors being a reduced lex Groebner basis.
///
/// For every pair of inner intervals `[a, b]` and `[b, c]` one of `[e, c]`,
/// `[d, c]` must be inner, where `d`, `e` are the anti-diagonal corners of
/// `[a, b]`.
pub fn quadratic_gb_condition(cells: &CellCollection) -> bool {
    first_quadratic_gb_violation(cells).is_none()
}

/// The first pair `([a, b], [b, c])` violating the quadratic condition.
pub fn first_quadratic_gb_violation(cells: &CellCollection) -> Option<(Interval, Interval)> {
    let intervals = cells.inner_intervals();
    let inner: BTreeSet<Interval> = intervals.iter().copied().collect();
    let mut by_lower_left: BTreeMap<Point, Vec<Interval>> = BTreeMap::new();
    for iv in &intervals {
        by_lower_left.entry(iv.lower_left()).or_default().push(*iv);
    }
    for first in &intervals {
        let (e, d) = first.anti_diagonal_corners();
        for second in by_lower_left
            .get(&first.upper_right())
            .into_iter()
            .flatten()
        {
            let c = second.upper_right();
            let completes = |p: Point| {
                Interval::new(p, c)
                    .map(|iv| inner.contains(&iv))
                    .unwrap_or(false)
            };
            if !completes(e) && !completes(d) {
                return Some((*first, *second));
            }
        }
    }
    None
}

/// Whether the reduced lex Groebner basis of `I_P` is exactly the set of inner 2-minors.
pub fn minors_form_reduced_gb(cells: &CellCollection, cfg: &GbConfig) -> Result<bool> {
    let gens = generators(cells);
    Ok(buchberger(&gens, &MonomialOrder::lex(), cfg)?.equals_set(&gens))
}
