//! Primality of pure-difference binomial ideals through their lattices, and
//! toric ideals of monomial maps.
//!
//! A pure-difference ideal `I` with exponent lattice `L` satisfies
//! `I : (x_1 ... x_n)^inf = I_L`, and `I_L` is prime exactly when `L` is
//! saturated. So `I` is prime iff it equals its saturation and `L` has no
//! torsion. The test does not depend on the coefficient field.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::binomial::{Binomial, Monomial, MonomialOrder, Var};
use crate::error::Result;
use crate::groebner::{buchberger, GbConfig};
use crate::ExactMatrix;

/// Exponent difference vectors of a generating set, one row per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentLattice {
    /// Column labels in canonical variable order.
    pub columns: Vec<Var>,
    pub matrix: ExactMatrix,
}

impl ExponentLattice {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// The binomial `x^{v+} - x^{v-}` of an integer vector over the columns.
    pub fn binomial_of(&self, v: &[BigInt]) -> Option<Binomial> {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (var, x) in self.columns.iter().zip(v) {
            let e = x.abs().to_u32().expect("exponent fits in u32");
            if x.is_positive() {
                plus.push((*var, e));
            } else if x.is_negative() {
                minus.push((*var, e));
            }
        }
        Binomial::nonzero(
            Monomial::from_pairs(plus),
            Monomial::from_pairs(minus),
            &MonomialOrder::lex(),
        )
    }
}

pub fn exponent_lattice(gens: &[Binomial]) -> ExponentLattice {
    let columns: Vec<Var> = gens
        .iter()
        .flat_map(|g| g.vars().collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            columns
                .iter()
                .map(|v| BigInt::from(g.plus().exponent(v)) - BigInt::from(g.minus().exponent(v)))
                .collect::<Vec<_>>()
        })
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    let ncols = columns.len();
    ExponentLattice {
        columns,
        matrix: ExactMatrix::from_rows(rows, ncols),
    }
}

/// A vector of the saturated lattice missing from the lattice itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionWitness {
    /// The elementary divisor above one, in decimal.
    pub divisor: String,
    pub vector: Vec<String>,
    pub binomial: Option<Binomial>,
}

/// Whether the row lattice is saturated (all elementary divisors are one).
pub fn is_saturated_lattice(lattice: &ExponentLattice) -> (bool, Option<TorsionWitness>) {
    let snf = lattice.matrix.smith_form();
    match snf.torsion_witness() {
        None => (true, None),
        Some((d, v)) => {
            let witness = TorsionWitness {
                divisor: d.to_string(),
                vector: v.iter().map(|x| x.to_string()).collect(),
                binomial: lattice.binomial_of(&v),
            };
            (false, Some(witness))
        }
    }
}

/// `I : x_v^inf`, by adjoining an inverse marker `u` with `u x_v - 1` and
/// eliminating `u` under a lex order that ranks it highest.
pub fn saturate_by_var(gens: &[Binomial], v: Var, cfg: &GbConfig) -> Result<Vec<Binomial>> {
    let marker = Var::Marker(0);
    let order = MonomialOrder::with_priority(vec![marker]);
    let mut extended: Vec<Binomial> = gens.iter().map(|g| g.renormalized(&order)).collect();
    extended.push(Binomial::new(
        Monomial::product([marker, v]),
        Monomial::one(),
        &order,
    )?);
    let gb = buchberger(&extended, &order, cfg)?;
    Ok(gb.eliminate(|x| *x != marker))
}

/// Generators of `I : (prod of all variables)^inf`, as a reduced lex basis.
///
/// Saturates one variable at a time and repeats full passes until a pass
/// leaves the basis unchanged.
pub fn saturate(gens: &[Binomial], cfg: &GbConfig) -> Result<Vec<Binomial>> {
    let order = MonomialOrder::lex();
    let vars: BTreeSet<Var> = gens
        .iter()
        .flat_map(|g| g.vars().collect::<Vec<_>>())
        .collect();
    let mut current = buchberger(gens, &order, cfg)?.elements().to_vec();
    loop {
        let before = current.clone();
        for &v in &vars {
            if current.iter().any(|g| g.initial_term().exponent(&v) > 0) {
                current = saturate_by_var(&current, v, cfg)?;
            }
        }
        if current == before {
            return Ok(current);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Prime,
    NotPrime,
}

/// Evidence for a primality verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimalityWitness {
    /// The exponent lattice has torsion.
    Torsion(TorsionWitness),
    /// An element of the saturation that is not in the ideal.
    MissingBinomial(Binomial),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimalityCertificate {
    pub verdict: Verdict,
    pub lattice_saturated: bool,
    pub saturation_equal: bool,
    pub lattice_rank: usize,
    pub witness: Option<PrimalityWitness>,
}

/// Decide primality of the ideal generated by `gens`.
pub fn is_prime(gens: &[Binomial], cfg: &GbConfig) -> Result<PrimalityCertificate> {
    let lattice = exponent_lattice(gens);
    let lattice_rank = lattice.rank();
    let (lattice_saturated, torsion) = is_saturated_lattice(&lattice);
    let ideal = buchberger(gens, &MonomialOrder::lex(), cfg)?;
    let sat = saturate(gens, cfg)?;
    let missing = sat.iter().find(|f| !ideal.contains(f)).cloned();
    let saturation_equal = missing.is_none();
    let verdict = if lattice_saturated && saturation_equal {
        Verdict::Prime
    } else {
        Verdict::NotPrime
    };
    let witness = match (torsion, missing) {
        (Some(t), _) => Some(PrimalityWitness::Torsion(t)),
        (None, Some(b)) => Some(PrimalityWitness::MissingBinomial(b)),
        (None, None) => None,
    };
    Ok(PrimalityCertificate {
        verdict,
        lattice_saturated,
        saturation_equal,
        lattice_rank,
        witness,
    })
}

/// A ring map sending each source variable to a monomial over target variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonomialMap {
    assignment: BTreeMap<Var, Monomial>,
}

impl MonomialMap {
    pub fn new(assignment: BTreeMap<Var, Monomial>) -> Self {
        MonomialMap { assignment }
    }

    pub fn assignment(&self) -> &BTreeMap<Var, Monomial> {
        &self.assignment
    }

    pub fn image(&self, m: &Monomial) -> Monomial {
        m.iter().fold(Monomial::one(), |acc, (v, e)| {
            let img = &self.assignment[v];
            (0..*e).fold(acc, |a, _| a.mul(img))
        })
    }
}

/// Generators of the kernel of `x_a -> m(x_a)`.
///
/// The graph ideal `(x_a - m(x_a))` is computed under a lex order with the
/// target variables ranked above the source ones; the basis elements free of
/// target variables generate the kernel.
pub fn toric_ideal_of_map(map: &MonomialMap, cfg: &GbConfig) -> Result<Vec<Binomial>> {
    let sources: BTreeSet<Var> = map.assignment.keys().copied().collect();
    let targets: Vec<Var> = {
        let mut t: Vec<Var> = map
            .assignment
            .values()
            .flat_map(|m| m.vars().collect::<Vec<_>>())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        t.reverse();
        t
    };
    let order = MonomialOrder::with_priority(targets);
    let graph: Vec<Binomial> = map
        .assignment
        .iter()
        .filter_map(|(v, img)| Binomial::nonzero(Monomial::var(*v), img.clone(), &order))
        .collect();
    let gb = buchberger(&graph, &order, cfg)?;
    let kernel: Vec<Binomial> = gb
        .eliminate(|v| sources.contains(v))
        .iter()
        .map(|b| b.renormalized(&MonomialOrder::lex()))
        .collect();
    Ok(kernel)
}
