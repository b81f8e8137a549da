//! Is `I_P` the toric ideal of a simple graph?
//!
//! A labeling sends every vertex variable of `P` to an edge `{u, v}` of an
//! abstract graph, i.e. to the monomial `t_u t_v`. The search below looks for
//! a labeling whose toric ideal equals `I_P`, propagating the local
//! constraints of the inner minors and pruning with degree-two fibers: two
//! quadratic monomials with the same image must be congruent modulo `I_P`.

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use serde::Serialize;

use crate::binomial::{generators, inner_minor, Binomial, Monomial, MonomialOrder, Var};
use crate::error::{Error, Result};
use crate::geometry::{Cell, CellCollection, Point};
use crate::groebner::{buchberger, ideal_equal, GbConfig};
use crate::lattice::IntegerMatrix;
use crate::toric::{exponent_lattice, is_prime, toric_ideal_of_map, MonomialMap, Verdict};

/// An abstract vertex id.
pub type Vertex = u32;

/// `φ(x_a) ⊎ φ(x_b) = φ(x_c) ⊎ φ(x_d)` for the minor `x_a x_b - x_c x_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationConstraint {
    pub lhs: [Point; 2],
    pub rhs: [Point; 2],
}

/// Variables of `P` mapped to edges of an abstract graph on `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphLabeling {
    pub vertex_count: u32,
    pub edges: BTreeMap<Var, [Vertex; 2]>,
}

impl GraphLabeling {
    pub fn has_loops(&self) -> bool {
        self.edges.values().any(|[u, v]| u == v)
    }

    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<[Vertex; 2]> = self.edges.values().map(|e| sorted(*e)).collect();
        distinct.len() == self.edges.len()
    }

    /// Vertex degrees in the graph formed by the edges.
    pub fn degrees(&self) -> BTreeMap<Vertex, usize> {
        let mut deg = BTreeMap::new();
        for [u, v] in self.edges.values() {
            *deg.entry(*u).or_insert(0) += 1;
            *deg.entry(*v).or_insert(0) += 1;
        }
        deg
    }

    pub fn monomial_map(&self) -> MonomialMap {
        MonomialMap::new(
            self.edges
                .iter()
                .map(|(x, [u, v])| (*x, Monomial::product([Var::Target(*u), Var::Target(*v)])))
                .collect(),
        )
    }

    /// Whether every relation constraint holds.
    pub fn satisfies(&self, constraints: &[RelationConstraint]) -> bool {
        let img = |p: &Point| self.edges.get(&Var::Point(*p)).copied();
        constraints.iter().all(|c| {
            let side = |pts: &[Point; 2]| -> Option<Vec<Vertex>> {
                let mut out: Vec<Vertex> =
                    pts.iter().map(img).collect::<Option<Vec<_>>>()?.concat();
                out.sort_unstable();
                Some(out)
            };
            matches!((side(&c.lhs), side(&c.rhs)), (Some(a), Some(b)) if a == b)
        })
    }
}

fn sorted([u, v]: [Vertex; 2]) -> [Vertex; 2] {
    if u <= v {
        [u, v]
    } else {
        [v, u]
    }
}

/// One constraint per inner 2-minor.
pub fn relation_constraints(cells: &CellCollection) -> Vec<RelationConstraint> {
    cells
        .inner_intervals()
        .iter()
        .map(|iv| {
            let (a, b) = iv.diagonal_corners();
            let (c, d) = iv.anti_diagonal_corners();
            RelationConstraint {
                lhs: [a, b],
                rhs: [c, d],
            }
        })
        .collect()
}

/// `x_(i,j) -> {col_i, row_j}`, with columns numbered first.
pub fn bipartite_grid_labeling(cells: &CellCollection) -> GraphLabeling {
    let verts = cells.vertices();
    let cols: BTreeSet<u32> = verts.iter().map(|p| p.i).collect();
    let rows: BTreeSet<u32> = verts.iter().map(|p| p.j).collect();
    let col_id: BTreeMap<u32, Vertex> = cols
        .iter()
        .enumerate()
        .map(|(k, c)| (*c, k as Vertex))
        .collect();
    let row_id: BTreeMap<u32, Vertex> = rows
        .iter()
        .enumerate()
        .map(|(k, r)| (*r, (cols.len() + k) as Vertex))
        .collect();
    GraphLabeling {
        vertex_count: (cols.len() + rows.len()) as u32,
        edges: verts
            .iter()
            .map(|p| (Var::Point(*p), [col_id[&p.i], row_id[&p.j]]))
            .collect(),
    }
}

/// True iff the toric ideal of the labeling equals `I_P`.
pub fn verify_representation(
    cells: &CellCollection,
    labeling: &GraphLabeling,
    cfg: &GbConfig,
) -> Result<bool> {
    let verts = cells.vertices();
    if verts.len() != labeling.edges.len()
        || !verts
            .iter()
            .all(|p| labeling.edges.contains_key(&Var::Point(*p)))
    {
        return Ok(false);
    }
    let kernel = toric_ideal_of_map(&labeling.monomial_map(), cfg)?;
    ideal_equal(&kernel, &generators(cells), cfg)
}

/// Same answer as [`verify_representation`] without computing the toric ideal.
///
/// Toric ideals are prime, so equality needs `I_P` prime. Given that and the
/// local constraints (`I_P` inside `I_G`), both ideals are lattice ideals of
/// saturated lattices, one inside the other, and they coincide iff the ranks
/// agree: `rank L_P + rank A = |V(P)|` with `A` the incidence matrix of the labeling.
pub fn verify_representation_by_lattice(
    cells: &CellCollection,
    labeling: &GraphLabeling,
    cfg: &GbConfig,
) -> Result<bool> {
    let gens = generators(cells);
    let prime = is_prime(&gens, cfg)?.verdict == Verdict::Prime;
    Ok(lattice_check(
        cells,
        labeling,
        prime,
        exponent_lattice(&gens).rank(),
    ))
}

fn lattice_check(
    cells: &CellCollection,
    labeling: &GraphLabeling,
    prime: bool,
    lattice_rank: usize,
) -> bool {
    let verts = cells.vertices();
    if !prime
        || verts.len() != labeling.edges.len()
        || !verts
            .iter()
            .all(|p| labeling.edges.contains_key(&Var::Point(*p)))
        || !labeling.satisfies(&relation_constraints(cells))
    {
        return false;
    }
    let ncols = labeling.vertex_count as usize;
    let rows: Vec<Vec<i64>> = labeling
        .edges
        .values()
        .map(|[u, v]| {
            let mut row = vec![0i64; ncols];
            row[*u as usize] += 1;
            row[*v as usize] += 1;
            row
        })
        .collect();
    lattice_rank + IntegerMatrix::<i64>::from_rows(rows, ncols).rank() == verts.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepStatus {
    Representable,
    NotRepresentable,
}

/// One event of the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceStep {
    /// A branch: `var` tried with `edge`, the `choice`-th of `options` candidates.
    Decide {
        depth: usize,
        var: Var,
        edge: [Vertex; 2],
        choice: usize,
        options: usize,
    },
    /// The only candidate left for `var`.
    Force {
        depth: usize,
        var: Var,
        edge: [Vertex; 2],
    },
    /// The current branch is dead; `assignment` is the partial labeling at that point.
    Contradiction {
        depth: usize,
        reason: String,
        assignment: Vec<(Var, [Vertex; 2])>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepVerdict {
    pub status: RepStatus,
    pub labeling: Option<GraphLabeling>,
    pub seed: Cell,
    pub trace: Vec<TraceStep>,
    /// Events dropped from the middle of the trace once the cap is hit.
    pub trace_omitted: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Defaults to twice the number of vertices of `P`.
    pub max_vertices: Option<usize>,
    /// Distinct variables must go to distinct edges.
    pub injective: bool,
    /// Cell whose minor is labeled first; see [`default_seed`].
    pub seed: Option<Cell>,
    pub deadline: Option<Instant>,
    pub trace_cap: usize,
    pub gb: GbConfig,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_vertices: None,
            injective: true,
            seed: None,
            deadline: None,
            trace_cap: 20_000,
            gb: GbConfig::default(),
        }
    }
}

/// The cell directly above the first hole column, or the first cell when
/// `P` has no hole.
pub fn default_seed(cells: &CellCollection) -> Option<Cell> {
    let holes = cells.hole_cells();
    let first = holes.iter().next().copied();
    match first {
        Some(h) => {
            let mut c = h;
            while !cells.contains(&c) {
                c = Cell::at(c.lower_left.i, c.lower_left.j + 1);
            }
            Some(c)
        }
        None => cells.iter().next().copied(),
    }
}

/// Backtracking search for a graph labeling realizing `I_P`.
pub fn search_labeling(cells: &CellCollection, opts: &SearchOptions) -> Result<RepVerdict> {
    let n_verts = cells.vertices().len();
    let max_vertices = opts.max_vertices.unwrap_or(2 * n_verts);
    if max_vertices < 4 {
        return Err(Error::MaxVerticesTooSmall(max_vertices));
    }
    let seed = match opts.seed.or_else(|| default_seed(cells)) {
        Some(s) if cells.contains(&s) => s,
        Some(s) => return Err(Error::NotContained(s)),
        None => return Err(Error::EmptyCollection),
    };
    let problem = Problem::new(cells, max_vertices, opts)?;
    let iv = seed.interval();
    let (ul, lr) = iv.anti_diagonal_corners();
    let (_, ur) = iv.diagonal_corners();
    let seed_vars = [problem.index[&ul], problem.index[&lr], problem.index[&ur]];

    let rank = seed_distances(cells, seed, &problem);
    let mut search = Search {
        problem: &problem,
        opts,
        trace: Vec::new(),
        omitted: 0,
        nodes: 0,
        seed_vars,
        rank,
    };
    let state = State::new(problem.vars.len());
    let outcome = search.run(state, 0)?;
    search.push(TraceStep::Contradiction {
        depth: 0,
        reason: match outcome {
            Some(_) => return Ok(search.finish(RepStatus::Representable, outcome, seed)),
            None => "search exhausted".into(),
        },
        assignment: Vec::new(),
    });
    Ok(search.finish(RepStatus::NotRepresentable, None, seed))
}

fn seed_distances(cells: &CellCollection, seed: Cell, p: &Problem) -> Vec<usize> {
    let mut dist: HashMap<Cell, usize> = HashMap::from([(seed, 0)]);
    let mut queue = std::collections::VecDeque::from([seed]);
    while let Some(c) = queue.pop_front() {
        let d = dist[&c];
        for nb in c.neighbors() {
            if cells.contains(&nb) && !dist.contains_key(&nb) {
                dist.insert(nb, d + 1);
                queue.push_back(nb);
            }
        }
    }
    let mut rank = vec![usize::MAX; p.vars.len()];
    for (c, d) in dist {
        for v in c.vertices() {
            let k = p.index[&v];
            rank[k] = rank[k].min(d);
        }
    }
    rank
}

struct Problem<'a> {
    cells: &'a CellCollection,
    vars: Vec<Point>,
    index: HashMap<Point, usize>,
    /// `[a, b, c, d]` for `x_a x_b - x_c x_d`.
    constraints: Vec<[usize; 4]>,
    by_var: Vec<Vec<usize>>,
    /// Class of `x_a x_b` modulo `I_P`, indexed by `a * n + b`.
    quad_class: Vec<usize>,
    max_vertices: usize,
    /// Primality of `I_P` and the rank of its lattice, computed at the first full assignment.
    lattice: OnceCell<(bool, usize)>,
}

impl<'a> Problem<'a> {
    fn new(cells: &'a CellCollection, max_vertices: usize, opts: &SearchOptions) -> Result<Self> {
        let vars: Vec<Point> = cells.vertices().into_iter().collect();
        let index: HashMap<Point, usize> = vars.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        let n = vars.len();
        let constraints: Vec<[usize; 4]> = relation_constraints(cells)
            .iter()
            .map(|c| {
                [
                    index[&c.lhs[0]],
                    index[&c.lhs[1]],
                    index[&c.rhs[0]],
                    index[&c.rhs[1]],
                ]
            })
            .collect();
        let mut by_var = vec![Vec::new(); n];
        for (k, c) in constraints.iter().enumerate() {
            for &v in c {
                by_var[v].push(k);
            }
        }
        let gb = buchberger(&generators(cells), &MonomialOrder::lex(), &opts.gb)?;
        let mut classes: HashMap<Monomial, usize> = HashMap::new();
        let mut quad_class = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let nf = gb.normal_form(&Monomial::product([
                    Var::Point(vars[a]),
                    Var::Point(vars[b]),
                ]));
                let next = classes.len();
                let id = *classes.entry(nf).or_insert(next);
                quad_class[a * n + b] = id;
                quad_class[b * n + a] = id;
            }
        }
        Ok(Problem {
            cells,
            vars,
            index,
            constraints,
            by_var,
            quad_class,
            max_vertices,
            lattice: OnceCell::new(),
        })
    }

    fn class(&self, a: usize, b: usize) -> usize {
        self.quad_class[a * self.vars.len() + b]
    }
}

#[derive(Clone)]
struct State {
    assign: Vec<Option<[Vertex; 2]>>,
    vertex_count: u32,
    used: HashMap<[Vertex; 2], usize>,
    /// Image of a quadratic monomial -> its class modulo `I_P` and the pair.
    fibers: HashMap<[Vertex; 4], (usize, usize, usize)>,
}

impl State {
    fn new(n: usize) -> Self {
        State {
            assign: vec![None; n],
            vertex_count: 0,
            used: HashMap::new(),
            fibers: HashMap::new(),
        }
    }

    fn snapshot(&self, p: &Problem) -> Vec<(Var, [Vertex; 2])> {
        self.assign
            .iter()
            .enumerate()
            .filter_map(|(k, e)| e.map(|e| (Var::Point(p.vars[k]), e)))
            .collect()
    }
}

fn quad_key(e: [Vertex; 2], f: [Vertex; 2]) -> [Vertex; 4] {
    let mut k = [e[0], e[1], f[0], f[1]];
    k.sort_unstable();
    k
}

fn multiset_minus(whole: [Vertex; 4], part: [Vertex; 2]) -> Option<[Vertex; 2]> {
    let mut rest: Vec<Vertex> = whole.to_vec();
    for x in part {
        let pos = rest.iter().position(|y| *y == x)?;
        rest.remove(pos);
    }
    Some(sorted([rest[0], rest[1]]))
}

struct Search<'p, 'a> {
    problem: &'p Problem<'a>,
    opts: &'p SearchOptions,
    trace: Vec<TraceStep>,
    omitted: usize,
    nodes: usize,
    seed_vars: [usize; 3],
    /// Cell distance from the seed; ties in branching go to nearer variables.
    rank: Vec<usize>,
}

impl Search<'_, '_> {
    fn push(&mut self, step: TraceStep) {
        if self.trace.len() < self.opts.trace_cap.max(1) {
            self.trace.push(step);
        } else {
            self.omitted += 1;
            *self.trace.last_mut().expect("cap is positive") = step;
        }
    }

    fn finish(self, status: RepStatus, labeling: Option<GraphLabeling>, seed: Cell) -> RepVerdict {
        RepVerdict {
            status,
            labeling,
            seed,
            trace: self.trace,
            trace_omitted: self.omitted,
            nodes: self.nodes,
        }
    }

    fn contradiction(&mut self, depth: usize, state: &State, reason: String) {
        let assignment = state.snapshot(self.problem);
        self.push(TraceStep::Contradiction {
            depth,
            reason,
            assignment,
        });
    }

    /// Why assigning `e` to `v` is inconsistent, if it is.
    fn conflict(&self, state: &State, v: usize, e: [Vertex; 2]) -> Option<String> {
        let p = self.problem;
        let name = |k: usize| Var::Point(p.vars[k]);
        if e[0] == e[1] {
            return Some(format!("{} would be a loop", name(v)));
        }
        if self.opts.injective {
            if let Some(&w) = state.used.get(&e) {
                return Some(format!("{} and {} would share an edge", name(v), name(w)));
            }
        }
        let mut own: Vec<([Vertex; 4], usize)> = Vec::new();
        let partners = state
            .assign
            .iter()
            .enumerate()
            .filter_map(|(w, f)| f.map(|f| (w, f)));
        for (w, f) in partners.chain(std::iter::once((v, e))) {
            let key = quad_key(e, f);
            let class = p.class(v, w);
            let clash = state
                .fibers
                .get(&key)
                .filter(|(c, _, _)| *c != class)
                .map(|(_, a, b)| (*a, *b));
            let clash = clash.or_else(|| {
                own.iter()
                    .find(|(k, c)| *k == key && *c != class)
                    .map(|_| (v, v))
            });
            if let Some((a, b)) = clash {
                return Some(format!(
                    "{}*{} and {}*{} have the same image but differ modulo I_P",
                    name(v),
                    name(w),
                    name(a),
                    name(b)
                ));
            }
            own.push((key, class));
        }
        let get = |k: usize| if k == v { Some(e) } else { state.assign[k] };
        for &ci in &p.by_var[v] {
            let c = p.constraints[ci];
            let vals = c.map(get);
            let known = vals.iter().filter(|x| x.is_some()).count();
            let bad = match known {
                4 => {
                    let (l, r) = (
                        quad_key(vals[0].unwrap(), vals[1].unwrap()),
                        quad_key(vals[2].unwrap(), vals[3].unwrap()),
                    );
                    l != r
                }
                3 => {
                    let hole = vals.iter().position(|x| x.is_none()).unwrap();
                    let (partner, other) = match hole {
                        0 => (1, [2, 3]),
                        1 => (0, [2, 3]),
                        2 => (3, [0, 1]),
                        _ => (2, [0, 1]),
                    };
                    let whole = quad_key(vals[other[0]].unwrap(), vals[other[1]].unwrap());
                    match multiset_minus(whole, vals[partner].unwrap()) {
                        None => true,
                        Some(f) => {
                            f[0] == f[1]
                                || (self.opts.injective
                                    && (f == e
                                        || state.used.get(&f).is_some_and(|w| *w != c[hole])))
                        }
                    }
                }
                2 if self.opts.injective => {
                    // One known on each side: they must share exactly one vertex.
                    let l = vals[0].or(vals[1]);
                    let r = vals[2].or(vals[3]);
                    match (l, r) {
                        (Some(l), Some(r)) if vals[..2].iter().flatten().count() == 1 => {
                            l.iter().filter(|x| r.contains(x)).count() != 1
                        }
                        _ => false,
                    }
                }
                _ => false,
            };
            if bad {
                let [a, b, cc, d] = c.map(name);
                return Some(format!("{} violates {}*{} = {}*{}", name(v), a, b, cc, d));
            }
        }
        None
    }

    /// Candidate edges for `v`, in canonical order, before consistency checks.
    fn raw_candidates(&self, state: &State, v: usize) -> Vec<[Vertex; 2]> {
        let p = self.problem;
        let n = state.vertex_count;
        let max = p.max_vertices as u32;
        let mut required: Option<Vertex> = None;
        let mut within: Option<[Vertex; 4]> = None;
        for &ci in &p.by_var[v] {
            let c = p.constraints[ci];
            let pos = c.iter().position(|x| *x == v).unwrap();
            let (partner, other) = match pos {
                0 => (1, [2, 3]),
                1 => (0, [2, 3]),
                2 => (3, [0, 1]),
                _ => (2, [0, 1]),
            };
            let o: Vec<[Vertex; 2]> = other.iter().filter_map(|k| state.assign[c[*k]]).collect();
            if o.len() == 2 {
                let whole = quad_key(o[0], o[1]);
                if let Some(pe) = state.assign[c[partner]] {
                    return multiset_minus(whole, pe).into_iter().collect();
                }
            }
            if state.assign[c[partner]].is_none() && o.len() == 2 {
                within = Some(quad_key(o[0], o[1]));
            }
            if self.opts.injective && o.len() == 1 {
                if let Some(pe) = state.assign[c[partner]] {
                    // φ(v) must contain the vertex of the opposite edge not in the partner's edge.
                    if let Some(x) = o[0].iter().find(|x| !pe.contains(x)) {
                        required = Some(*x);
                    }
                }
            }
        }
        let mut out = Vec::new();
        if let Some(m) = within {
            for a in 0..4 {
                for b in a + 1..4 {
                    let e = [m[a], m[b]];
                    if !out.contains(&e) {
                        out.push(e);
                    }
                }
            }
            return out;
        }
        let fresh_ok = n < max;
        if let Some(r) = required {
            out.extend((0..n).filter(|x| *x != r).map(|x| sorted([r, x])));
            if fresh_ok {
                out.push([r, n]);
            }
            return out;
        }
        for a in 0..n {
            for b in a + 1..n {
                out.push([a, b]);
            }
        }
        if fresh_ok {
            out.extend((0..n).map(|a| [a, n]));
            if n + 1 < max {
                out.push([n, n + 1]);
            }
        }
        out
    }

    fn domain(&self, state: &State, v: usize) -> Vec<[Vertex; 2]> {
        self.raw_candidates(state, v)
            .into_iter()
            .filter(|e| self.conflict(state, v, *e).is_none())
            .collect()
    }

    fn assign(&self, state: &mut State, v: usize, e: [Vertex; 2]) {
        let p = self.problem;
        for (w, f) in state
            .assign
            .iter()
            .enumerate()
            .filter_map(|(w, f)| f.map(|f| (w, f)))
            .collect::<Vec<_>>()
        {
            state
                .fibers
                .entry(quad_key(e, f))
                .or_insert((p.class(v, w), v, w));
        }
        state
            .fibers
            .entry(quad_key(e, e))
            .or_insert((p.class(v, v), v, v));
        state.assign[v] = Some(e);
        state.used.entry(e).or_insert(v);
        state.vertex_count = state.vertex_count.max(e[1] + 1);
    }

    fn run(&mut self, mut state: State, depth: usize) -> Result<Option<GraphLabeling>> {
        let p = self.problem;
        let name = |k: usize| Var::Point(p.vars[k]);
        self.nodes += 1;
        if state.assign.iter().all(|a| a.is_none()) {
            let first = self.seed_vars[0];
            self.push(TraceStep::Decide {
                depth,
                var: name(first),
                edge: [0, 1],
                choice: 0,
                options: 1,
            });
            self.assign(&mut state, first, [0, 1]);
        }
        loop {
            if let Some(d) = self.opts.deadline {
                if Instant::now() >= d {
                    return Err(Error::BudgetExceeded);
                }
            }
            let mut frontier: Vec<usize> = (0..p.vars.len())
                .filter(|&v| state.assign[v].is_none())
                .filter(|&v| {
                    p.by_var[v]
                        .iter()
                        .any(|&ci| p.constraints[ci].iter().any(|&w| state.assign[w].is_some()))
                })
                .collect();
            frontier.sort_by_key(|&v| (self.rank[v], v));
            if frontier.is_empty() {
                return self.leaf(&state, depth);
            }
            let mut best: Option<(usize, Vec<[Vertex; 2]>)> = None;
            for &v in &frontier {
                let dom = self.domain(&state, v);
                if dom.len() <= 1 {
                    best = Some((v, dom));
                    break;
                }
                if best.as_ref().is_none_or(|(_, d)| dom.len() < d.len()) {
                    best = Some((v, dom));
                }
            }
            let (mut v, mut dom) = best.expect("frontier is nonempty");
            if dom.is_empty() {
                let reason = self.explain_empty(&state, v);
                self.contradiction(depth, &state, reason);
                return Ok(None);
            }
            if dom.len() == 1 {
                self.push(TraceStep::Force {
                    depth,
                    var: name(v),
                    edge: dom[0],
                });
                self.assign(&mut state, v, dom[0]);
                continue;
            }
            if let Some(&s) = self.seed_vars[1..]
                .iter()
                .find(|&&s| state.assign[s].is_none())
            {
                v = s;
                dom = self.domain(&state, s);
            }
            let options = dom.len();
            for (choice, e) in dom.into_iter().enumerate() {
                self.push(TraceStep::Decide {
                    depth,
                    var: name(v),
                    edge: e,
                    choice,
                    options,
                });
                let mut child = state.clone();
                self.assign(&mut child, v, e);
                if let Some(found) = self.run(child, depth + 1)? {
                    return Ok(Some(found));
                }
            }
            return Ok(None);
        }
    }

    fn explain_empty(&self, state: &State, v: usize) -> String {
        let name = Var::Point(self.problem.vars[v]);
        let reasons: Vec<String> = self
            .raw_candidates(state, v)
            .into_iter()
            .filter_map(|e| self.conflict(state, v, e).map(|r| format!("{:?}: {r}", e)))
            .collect();
        if reasons.is_empty() {
            format!("no edge left for {name}")
        } else {
            format!("no edge left for {name} ({})", reasons.join("; "))
        }
    }

    fn leaf(&mut self, state: &State, depth: usize) -> Result<Option<GraphLabeling>> {
        let p = self.problem;
        let labeling = GraphLabeling {
            vertex_count: state.vertex_count,
            edges: state
                .assign
                .iter()
                .enumerate()
                .map(|(k, e)| (Var::Point(p.vars[k]), e.expect("complete")))
                .collect(),
        };
        let (prime, rank) = match p.lattice.get() {
            Some(v) => *v,
            None => {
                let gb = GbConfig {
                    deadline: self.opts.deadline,
                    ..self.opts.gb
                };
                let gens = generators(p.cells);
                let v = (
                    is_prime(&gens, &gb)?.verdict == Verdict::Prime,
                    exponent_lattice(&gens).rank(),
                );
                *p.lattice.get_or_init(|| v)
            }
        };
        if lattice_check(p.cells, &labeling, prime, rank) {
            Ok(Some(labeling))
        } else {
            self.contradiction(
                depth,
                state,
                "toric ideal of the labeling differs from I_P".into(),
            );
            Ok(None)
        }
    }
}

/// Binomials of the toric ideal of `labeling` that are not in `I_P`.
pub fn extra_relations(
    cells: &CellCollection,
    labeling: &GraphLabeling,
    cfg: &GbConfig,
) -> Result<Vec<Binomial>> {
    let kernel = toric_ideal_of_map(&labeling.monomial_map(), cfg)?;
    let gb = buchberger(&generators(cells), &MonomialOrder::lex(), cfg)?;
    Ok(kernel.into_iter().filter(|f| !gb.contains(f)).collect())
}

/// The minor of a single cell, for building seeds by hand.
pub fn cell_minor(cell: Cell) -> Binomial {
    inner_minor(&cell.interval())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::frame;

    fn search(cells: &CellCollection) -> RepVerdict {
        search_labeling(cells, &SearchOptions::default()).unwrap()
    }

    /// Paper-style numbering of the FRAME vertices: rows top to bottom, left to right.
    fn x(k: u32) -> Var {
        let k = k - 1;
        Var::at(k % 4, 3 - k / 4)
    }

    #[test]
    fn constraint_counts() {
        assert_eq!(
            relation_constraints(&CellCollection::from_coords(&[(0, 0)])).len(),
            1
        );
        assert_eq!(relation_constraints(frame().cells()).len(), 20);
        let block = CellCollection::from_coords(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(relation_constraints(&block).len(), 9);
    }

    #[test]
    fn single_cell_is_a_four_cycle() {
        let cell = CellCollection::from_coords(&[(0, 0)]);
        let v = search(&cell);
        assert_eq!(v.status, RepStatus::Representable);
        let l = v.labeling.unwrap();
        assert_eq!(l.vertex_count, 4);
        assert!(l.degrees().values().all(|d| *d == 2));
        assert!(verify_representation(&cell, &l, &GbConfig::default()).unwrap());
        let grid = bipartite_grid_labeling(&cell);
        assert_eq!(grid.vertex_count, 4);
        assert!(grid.degrees().values().all(|d| *d == 2));
    }

    #[test]
    fn grid_rectangle() {
        let rect = CellCollection::from_coords(&[(0, 0), (1, 0)]);
        let l = bipartite_grid_labeling(&rect);
        assert!(l.satisfies(&relation_constraints(&rect)));
        assert!(verify_representation(&rect, &l, &GbConfig::default()).unwrap());
        assert_eq!(search(&rect).status, RepStatus::Representable);
    }

    #[test]
    fn shared_edge_fails_verification() {
        let cell = CellCollection::from_coords(&[(0, 0)]);
        let mut l = bipartite_grid_labeling(&cell);
        let e = l.edges[&Var::at(0, 0)];
        l.edges.insert(Var::at(1, 1), e);
        assert!(!l.is_injective());
        assert!(!verify_representation(&cell, &l, &GbConfig::default()).unwrap());
    }

    #[test]
    fn frame_grid_labeling_has_extra_relations() {
        let f = frame();
        let l = bipartite_grid_labeling(f.cells());
        assert!(l.satisfies(&relation_constraints(f.cells())));
        let cfg = GbConfig::default();
        assert!(!verify_representation(f.cells(), &l, &cfg).unwrap());
        let hole_minor = cell_minor(Cell::at(1, 1));
        assert!(extra_relations(f.cells(), &l, &cfg)
            .unwrap()
            .contains(&hole_minor));
    }

    #[test]
    fn frame_seed_is_above_the_hole() {
        assert_eq!(default_seed(frame().cells()), Some(Cell::at(1, 2)));
    }

    #[test]
    fn frame_is_not_representable() {
        let v = search(frame().cells());
        assert_eq!(v.status, RepStatus::NotRepresentable);
        assert!(matches!(
            v.trace.last(),
            Some(TraceStep::Contradiction { .. })
        ));
        assert_eq!(v.trace_omitted, 0);
        assert!(matches!(v.trace[0], TraceStep::Decide { var, edge: [0, 1], .. } if var == x(2)));
    }

    /// Contradictions reached under the seed case φ(x3) = t_i t_k.
    fn case_one_contradictions(v: &RepVerdict) -> Vec<(String, BTreeMap<Var, [Vertex; 2]>)> {
        let mut inside = false;
        let mut out = Vec::new();
        for step in &v.trace {
            match step {
                TraceStep::Decide { var, edge, .. } if *var == x(3) => inside = *edge == [0, 2],
                TraceStep::Contradiction {
                    reason, assignment, ..
                } if inside => out.push((reason.clone(), assignment.iter().copied().collect())),
                _ => {}
            }
        }
        out
    }

    #[test]
    fn frame_trace_follows_the_forced_chain() {
        let v = search(frame().cells());
        // Seed: φ(x2) = t_i t_j = {0, 1}, φ(x7) = t_k t_l = {2, 3}, φ(x3) = t_i t_k = {0, 2}.
        assert!(v
            .trace
            .iter()
            .any(|s| matches!(s, TraceStep::Decide { var, edge: [2, 3], .. } if *var == x(7))));
        let dead = case_one_contradictions(&v);
        assert!(!dead.is_empty());
        let (i, j, k, l) = (0, 1, 2, 3);
        let shares = |e: [Vertex; 2], t: Vertex| e.contains(&t);
        let mut k_is_s = false;
        let mut k_is_q = false;
        for (reason, a) in &dead {
            assert_eq!(a[&x(6)], [j, l]);
            let (Some(&x1), Some(&x10)) = (a.get(&x(1)), a.get(&x(10))) else {
                continue;
            };
            // φ(x1) = t_i t_p, φ(x10) = t_j t_q.
            assert!(shares(x1, i));
            assert!(shares(x10, j));
            if let (Some(&x14), Some(&x15)) = (a.get(&x(14)), a.get(&x(15))) {
                // φ(x14) = t_r t_j, φ(x15) = t_s t_r.
                assert!(shares(x14, j));
                let r = if x14[0] == j { x14[1] } else { x14[0] };
                assert!(shares(x15, r));
            }
            // k = s: φ(x11) = t_k t_q makes x6 x11 and x7 x10 collide.
            let k_s = format!(
                "{:?}",
                sorted([k, if x10[0] == j { x10[1] } else { x10[0] }])
            );
            if !shares(x10, k)
                && reason.contains(&format!("{k_s}: {}*", x(11)))
                && reason.contains("same image")
            {
                k_is_s = true;
            }
            if shares(x10, k) {
                k_is_q = true;
            }
        }
        assert!(k_is_s, "k = s branch not refuted");
        assert!(k_is_q, "k = q branch not refuted");
    }

    #[test]
    fn max_vertices_bounds() {
        let cell = CellCollection::from_coords(&[(0, 0)]);
        let opts = SearchOptions {
            max_vertices: Some(3),
            ..Default::default()
        };
        assert!(matches!(
            search_labeling(&cell, &opts),
            Err(Error::MaxVerticesTooSmall(3))
        ));
        let opts = SearchOptions {
            max_vertices: Some(4),
            ..Default::default()
        };
        let v = search_labeling(&cell, &opts).unwrap();
        assert!(v.labeling.unwrap().vertex_count <= 4);
    }

    #[test]
    fn relaxed_injectivity_still_verifies() {
        let cell = CellCollection::from_coords(&[(0, 0), (0, 1)]);
        let opts = SearchOptions {
            injective: false,
            ..Default::default()
        };
        let v = search_labeling(&cell, &opts).unwrap();
        assert_eq!(v.status, RepStatus::Representable);
        assert!(verify_representation(&cell, &v.labeling.unwrap(), &GbConfig::default()).unwrap());
    }

    #[test]
    fn lattice_shortcut_agrees_with_elimination_on_small_corpus() {
        let cfg = GbConfig::default();
        for n in 1..=4 {
            for p in crate::workbench::enumerate_polyominoes(n).unwrap() {
                let grid = bipartite_grid_labeling(p.cells());
                assert_eq!(
                    verify_representation(p.cells(), &grid, &cfg).unwrap(),
                    verify_representation_by_lattice(p.cells(), &grid, &cfg).unwrap(),
                    "{p}"
                );
            }
        }
        let f = frame();
        let grid = bipartite_grid_labeling(f.cells());
        assert!(!verify_representation_by_lattice(f.cells(), &grid, &cfg).unwrap());
    }

    proptest::proptest! {
        #[test]
        fn lattice_shortcut_agrees_on_random_labelings(
            two_cells in proptest::bool::ANY,
            raw in proptest::collection::vec((0u32..5, 0u32..5), 6),
        ) {
            let cells = if two_cells {
                CellCollection::from_coords(&[(0, 0), (1, 0)])
            } else {
                CellCollection::from_coords(&[(0, 0)])
            };
            let verts: Vec<Point> = cells.vertices().into_iter().collect();
            let mut edges = BTreeMap::new();
            for (p, (u, v)) in verts.iter().zip(raw) {
                let e = if u == v { [u, (v + 1) % 5] } else { sorted([u, v]) };
                edges.insert(Var::Point(*p), e);
            }
            let l = GraphLabeling { vertex_count: 5, edges };
            let cfg = GbConfig::default();
            proptest::prop_assert_eq!(
                verify_representation(&cells, &l, &cfg).unwrap(),
                verify_representation_by_lattice(&cells, &l, &cfg).unwrap()
            );
        }
    }
}
