//! Polyomino ideals: the binomial ideals generated by the inner 2-minors of a
//! collection of lattice cells.
//!
//! The crate covers the whole path from cells to algebra:
//!
//! - [`geometry`]: cells, intervals, connectivity, convexity, holes.
//! - [`binomial`]: variables indexed by lattice points, pure-difference
//!   binomials and the lex order.
//! - [`groebner`]: Buchberger's algorithm for binomial ideals and the
//!   combinatorial quadratic Groebner basis test.
//! - [`lattice`] and [`toric`]: Smith normal form, saturation and the
//!   primality certificate, toric ideals of monomial maps.
//! - [`localization`]: the localization argument for complements of convex
//!   holes, checked on concrete instances.
//! - [`graph`]: searching for a graph whose toric ideal is `I_P`.
//! - [`workbench`]: file format, enumeration, survey and ASCII rendering.

pub mod binomial;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod groebner;
pub mod lattice;
pub mod localization;
pub mod toric;
pub mod workbench;

pub use binomial::{generators, inner_minor, Binomial, Monomial, MonomialOrder, Var};
pub use error::{Error, HypothesisViolation, Result};
pub use geometry::{Cell, CellCollection, Interval, Point, Polyomino};
pub use groebner::{buchberger, GbConfig, GroebnerBasis};
pub use lattice::{IntegerMatrix, SmithForm};
pub use toric::{is_prime, saturate, PrimalityCertificate, Verdict};

/// Arbitrary-precision integer matrix, used for every certificate.
pub type ExactMatrix = IntegerMatrix<num_bigint::BigInt>;
/// Machine-integer matrix for quick experiments on small inputs.
pub type MachineMatrix = IntegerMatrix<i64>;
/// Smith form over arbitrary-precision integers.
pub type ExactSmithForm = SmithForm<num_bigint::BigInt>;
