//! Finite models of categorical automata.
//!
//! The crate works with machines whose state sets and alphabets are finite,
//! labelled sets. Everything that quantifies over a free monoid does so up to
//! an explicit word-length bound.
//!
//! - [`finset`]: finite sets, functions, words and finite monoids.
//! - [`machines`]: Mealy and Moore machines, runs, morphisms and diamond
//!   (series) composition.
//! - [`fugal`]: machines between monoids, fugality, fugal extension and the
//!   restrict/extend round trips.
//! - [`guitart`]: finite categories, translation categories, discrete
//!   opfibrations and spans composed by strict pullback.
//! - [`kleisli`]: nondeterministic machines through the powerset monad.
//! - [`rel`]: machines valued in relations; reachability as a right extension.
//! - [`cat`]: machines valued in finite set-valued functor categories.
//! - [`intertwiner`]: intertwiners between machines and their 2-cells.

pub mod cat;
mod error;
pub mod finset;
pub mod fugal;
pub mod gen;
pub mod guitart;
pub mod intertwiner;
pub mod kleisli;
pub mod machines;
pub mod rel;
mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;
