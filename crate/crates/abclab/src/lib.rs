//! Exact-arithmetic toolkit for experiments around the abc inequality.
//!
//! The crate is organized around one pipeline: enumerate coprime triples
//! `a + b + c = 0`, lift them to points on graph varieties through power
//! decompositions, and verify the unconditional height and counting
//! inequalities exactly, with conditional quantities reported as residuals.
//! Side experiments cover the maximal-power split `u x^m + v y^m + w z^m = 0`,
//! square factors of Pell-equation solutions, the polynomial abc theorem,
//! and Nevanlinna functionals of rational maps.
//!
//! - [`arith`]: factorization, radicals, valuations, power divisors.
//! - [`heights`]: places, projective points, Weil functions, exact
//!   proximity/counting decomposition of heights.
//! - [`gamma`]: abc triples, power decompositions, graph-variety points,
//!   the torus action, and the exact verifiers.
//! - [`sweep`]: allocation-free exhaustive sweeps, partitionable by sum.
//! - [`power`]: the m-th power split and its chain bounds.
//! - [`pell`]: solutions of `x^2 - d y^2 = +-4` and square statistics.
//! - [`poly`] and [`function_field`]: exact rational polynomials, divisors
//!   on the line, pullbacks, Mason-Stothers.
//! - [`nevanlinna`]: counting/proximity/characteristic functionals of
//!   rational maps with residual verdicts.

pub mod arith;
pub mod function_field;
pub mod gamma;
pub mod heights;
pub mod nevanlinna;
pub mod pell;
pub mod poly;
pub mod power;
pub mod sweep;
