//! Exceptional maps over finite fields and exceptional extensions of
//! equal-characteristic local fields.
//!
//! * [`field`], [`poly`], [`ratfunc`]: finite-field towers, polynomials and
//!   rational functions on `P^1` with ramification indices.
//! * [`exceptional`]: bijectivity scans, exceptionality verdicts with
//!   certificates, and the census of normalized polynomials.
//! * [`group`]: permutation groups, monodromy triples and the equivalence
//!   batteries for exceptional totally ramified extensions.
//! * [`laurent`], [`tame`]: truncated Laurent series over `F_q`, tame
//!   uniformizers and the Kummer model of tame extensions.
//! * [`text`]: the textual syntax for maps and series.

pub mod exceptional;
pub mod field;
pub mod group;
pub mod laurent;
pub mod poly;
pub mod ratfunc;
pub mod tame;
pub mod text;

pub use field::{embed, make_field, FFElem, Field, FieldEmbedding, FieldError};
pub use poly::Poly;
pub use ratfunc::{separable_core, ProjPoint, RatFunc, RatFuncError};
