//! Exact Lie algebroid calculus and Kuranishi local models of flat connections.
//!
//! The symbolic layers ([`exactpoly`], [`algebroid`], [`cartan`]) work over
//! exact rationals so that every identity check ends in a literal zero. The
//! [`kuranishi`] module specializes to a Lie algebra over a point, where the
//! deformation theory of a flat connection is finite dimensional linear algebra.

pub mod algebroid;
pub mod cartan;
pub mod documents;
pub mod exactpoly;
pub mod kuranishi;
pub mod tuples;

pub use algebroid::{AlgebroidError, AlgebroidSpec, ExampleKind, SectionExpr, ValidationReport};
pub use cartan::{CartanError, ConnectionForm, GaugeMap, LForm, SuiteReport, ValuedIn};
pub use kuranishi::{KuranishiError, KuranishiModel, ModuliReport, RepSpec, ScalarField, SolverParams};
pub use exactpoly::{parse_polynomial, PolyError, PolyMatrix, Polynomial, Rational};
