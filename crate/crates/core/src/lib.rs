//! Random Latin squares and the combinatorics of their intercalates.
//!
//! Squares, rectangles and partial squares live in [`latin`]; [`counting`]
//! computes intercalate statistics; [`sampling`] holds the
//! Jacobson–Matthews chain, exhaustive enumerators and permanent-based
//! extension counts. [`trp`] runs the triangle removal process and the
//! binomial coupling model, [`switching`] studies row switchings on
//! rectangles, [`decompose`] splits 3-uniform hypergraphs into stars and
//! matchings, and [`harness`] drives seeded Monte Carlo experiments.

pub mod codec;
pub mod constructions;
pub mod counting;
pub mod decompose;
pub mod error;
pub mod harness;
pub mod latin;
pub mod rng;
pub mod sampling;
pub mod switching;
pub mod trp;

pub use error::{Error, Result};
pub use latin::{
    Intercalate, LatinGrid, LatinRectangle, LatinSquare, OrderedTripleSet, Triple, TripleBag,
    TripleSet,
};
