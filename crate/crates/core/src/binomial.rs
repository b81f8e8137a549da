//! Variables, monomials and pure-difference binomials.
//!
//! Every binomial here is `plus - minus` with implicit coefficients `+1` and
//! `-1`. No field arithmetic is ever materialized: the ideals we care about
//! are generated by such binomials and S-pairs and reductions keep them in
//! that shape.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{CellCollection, Interval, Point};

/// A polynomial ring variable.
///
/// `Point` variables are the `x_a` of a polyomino. `Target` variables are the
/// `t_i` of an edge ring, `Marker` variables the inverse markers adjoined for
/// saturation. The derived order puts `Point < Target < Marker`, so the
/// default lex order already eliminates markers, then targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Point(Point),
    Target(u32),
    Marker(u32),
}

impl Var {
    pub const fn at(i: u32, j: u32) -> Var {
        Var::Point(Point::new(i, j))
    }

    pub fn point(&self) -> Option<Point> {
        match self {
            Var::Point(p) => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Point(p) => write!(f, "x{p}"),
            Var::Target(n) => write!(f, "t{n}"),
            Var::Marker(n) => write!(f, "u{n}"),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A monomial as a map from variables to positive exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn product(vars: impl IntoIterator<Item = Var>) -> Self {
        Monomial::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &u32)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(*v).or_insert(0) += e;
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            let slot = out.get_mut(v).expect("divisibility checked");
            *slot -= e;
            if *slot == 0 {
                out.remove(v);
            }
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let m = (*e).min(other.exponent(v));
                    (m > 0).then_some((*v, m))
                })
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            let slot = out.entry(*v).or_insert(0);
            *slot = (*slot).max(*e);
        }
        Monomial(out)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.keys().all(|v| !other.0.contains_key(v))
    }

    /// Replace every variable through `f`, merging exponents of collisions.
    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|(v, e)| (f(*v), *e)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        // Largest variable first, matching how terms are read off a lex order.
        for (n, (v, e)) in self.0.iter().rev().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A lex order on variables, optionally with a block of variables ranked
/// above all others.
///
/// With an empty priority list this is the polyomino lex order:
/// `x_(i,j) > x_(k,l)` iff `i > k`, or `i = k` and `j > l`. Listed variables
/// rank above every unlisted one, earlier entries higher; that is how
/// elimination orders and the "make `x_c` largest" variants are expressed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    priority: Vec<Var>,
}

impl MonomialOrder {
    pub fn lex() -> Self {
        MonomialOrder::default()
    }

    pub fn with_priority(priority: Vec<Var>) -> Self {
        MonomialOrder { priority }
    }

    pub fn priority(&self) -> &[Var] {
        &self.priority
    }

    pub fn tag(&self) -> String {
        if self.priority.is_empty() {
            "lex".to_string()
        } else {
            let block: Vec<String> = self.priority.iter().map(|v| v.to_string()).collect();
            format!("lex[{}]", block.join(">"))
        }
    }

    pub fn cmp_vars(&self, a: &Var, b: &Var) -> Ordering {
        let rank = |v: &Var| self.priority.iter().position(|p| p == v);
        match (rank(a), rank(b)) {
            (Some(x), Some(y)) => y.cmp(&x),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => a.cmp(b),
        }
    }

    /// Sort variables from largest to smallest.
    pub fn sort_descending(&self, vars: &mut [Var]) {
        vars.sort_by(|a, b| self.cmp_vars(b, a));
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let mut vars: Vec<Var> = a.vars().chain(b.vars()).collect();
        vars.sort();
        vars.dedup();
        self.sort_descending(&mut vars);
        for v in vars {
            match a.exponent(&v).cmp(&b.exponent(&v)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}

/// Compare two polyomino variables under the lex order.
pub fn compare_vars(a: Point, b: Point) -> Ordering {
    MonomialOrder::lex().cmp_vars(&Var::Point(a), &Var::Point(b))
}

/// A pure-difference binomial `plus - minus` with `plus` the initial term
/// under the order it was normalized with.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Binomial {
    plus: Monomial,
    minus: Monomial,
}

impl Binomial {
    /// Build `u - v` (up to sign) normalized under `order`.
    pub fn new(u: Monomial, v: Monomial, order: &MonomialOrder) -> Result<Self> {
        match order.cmp_monomials(&u, &v) {
            Ordering::Greater => Ok(Binomial { plus: u, minus: v }),
            Ordering::Less => Ok(Binomial { plus: v, minus: u }),
            Ordering::Equal => Err(Error::TrivialBinomial),
        }
    }

    /// `new` under the default lex order.
    pub fn lex(u: Monomial, v: Monomial) -> Result<Self> {
        Binomial::new(u, v, &MonomialOrder::lex())
    }

    /// Builds `u - v`, returning `None` for the zero binomial.
    pub fn nonzero(u: Monomial, v: Monomial, order: &MonomialOrder) -> Option<Self> {
        Binomial::new(u, v, order).ok()
    }

    pub(crate) fn from_sorted(plus: Monomial, minus: Monomial) -> Self {
        debug_assert_ne!(plus, minus);
        Binomial { plus, minus }
    }

    pub fn plus(&self) -> &Monomial {
        &self.plus
    }

    pub fn minus(&self) -> &Monomial {
        &self.minus
    }

    /// The initial term under the order used at construction.
    pub fn initial_term(&self) -> &Monomial {
        &self.plus
    }

    pub fn is_normalized_under(&self, order: &MonomialOrder) -> bool {
        order.cmp_monomials(&self.plus, &self.minus) == Ordering::Greater
    }

    pub fn renormalized(&self, order: &MonomialOrder) -> Binomial {
        if self.is_normalized_under(order) {
            self.clone()
        } else {
            Binomial {
                plus: self.minus.clone(),
                minus: self.plus.clone(),
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.plus.degree().max(self.minus.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.plus.degree() == self.minus.degree()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.plus.vars().chain(self.minus.vars())
    }

    pub fn involves(&self, v: &Var) -> bool {
        self.plus.exponent(v) > 0 || self.minus.exponent(v) > 0
    }

    /// Divide out the common monomial factor of the two terms.
    pub fn without_content(&self) -> Binomial {
        let g = self.plus.gcd(&self.minus);
        Binomial {
            plus: self.plus.checked_div(&g).expect("gcd divides"),
            minus: self.minus.checked_div(&g).expect("gcd divides"),
        }
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.plus, self.minus)
    }
}

/// The inner 2-minor `x_a x_b - x_c x_d` of an interval `[a, b]`.
pub fn inner_minor(iv: &Interval) -> Binomial {
    let (a, b) = iv.diagonal_corners();
    let (c, d) = iv.anti_diagonal_corners();
    Binomial::lex(
        Monomial::product([Var::Point(a), Var::Point(b)]),
        Monomial::product([Var::Point(c), Var::Point(d)]),
    )
    .expect("diagonal and anti-diagonal corners are distinct")
}

/// One inner 2-minor per inner interval, in canonical interval order.
pub fn generators(cells: &CellCollection) -> Vec<Binomial> {
    cells.inner_intervals().iter().map(inner_minor).collect()
}
