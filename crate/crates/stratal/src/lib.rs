//! A library and CLI for the language of stratified set comprehensions:
//! parsing, stratification checking and level inference, an internal
//! normal-form syntax with its substitution action, a big-step normalizer,
//! a small-step rewrite engine with strategies, and the measures that make
//! termination observable — plus a property harness that machine-checks
//! the algebraic laws at desk scale.

pub mod cli;
pub mod gen;
pub mod internal;
pub mod measures;
pub mod nominal;
pub mod normalize;
pub mod parse;
pub mod print;
pub mod props;
pub mod rng;
pub mod sigma;
pub mod stratify;
pub mod surface;

pub use internal::{Conjuncts, IPred, ISet};
pub use nominal::{fresh, Atom, Binder, Level, Nominal, Permutation, Var};
pub use surface::{Formula, Position, Syntax, Term};
