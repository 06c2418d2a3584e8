//! Newton polygons of reductions of abelian varieties with complex
//! multiplication, computed from Galois-theoretic data.
//!
//! The library is organised bottom-up:
//!
//! * [`group`] — concrete finite groups with dense multiplication tables,
//!   subgroups and double cosets;
//! * [`cyclotomic`] — the Galois groups `(Z/n)^*` of cyclotomic fields with
//!   explicit decomposition and inertia groups of rational primes;
//! * [`cm`] — CM field data `(G, H, c)` and lifted CM types;
//! * [`newton`] — the slope formula, polygon classification, prime
//!   splitting reports and the type-independent splitting criteria;
//! * [`ec`] — an elliptic-curve point-counting oracle for the
//!   one-dimensional case.
//!
//! All slope arithmetic is exact rational; nothing here uses floating
//! point.

pub mod arith;
pub mod cm;
pub mod cyclotomic;
pub mod ec;
pub mod group;
pub mod newton;

pub use num_rational::Rational64;
