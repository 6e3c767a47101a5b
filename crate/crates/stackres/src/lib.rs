//! Exact resolution of plane curve singularities by stack-theoretic weighted
//! blow-ups.
//!
//! The crate takes a curve `f(x, y) = 0` over the rationals or a finite
//! field, locates its singular points, attaches to each one a canonical
//! weighted center through the combinatorics of its Newton polygon, and blows
//! the center up — weighted when that already yields a smooth stack with
//! abelian stabilizers, multi-weighted when the characteristic divides a
//! weight.  Iterating strictly drops the singular order at every step, and
//! every arithmetic operation is exact: rationals of arbitrary precision or
//! residues in `F_{p^r}`, never floating point.

pub mod blowup;
pub mod charpoly;
pub mod resolve;
pub mod field;
pub mod poly;
