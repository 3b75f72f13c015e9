//! Shared building blocks for the density-lab crates.
//!
//! Every numeric quantity is an exact [`Rational`]. Words over finite
//! alphabets are plain slices (`&[u8]` for binary words, `&[i8]` for
//! triadic words, `&[u32]` for sequences of naturals); the [`word`] module
//! parses and prints them.

pub mod bounds;
pub mod error;
pub mod rational;
pub mod tree;
pub mod word;

pub use bounds::MeasureBounds;
pub use error::{Error, Result};
pub use rational::Rational;
pub use tree::{
    baire_interval, tree_measure_check, BaireMeasure, BernoulliMeasure, BinaryMeasure,
    CantorMeasure, FnMeasure, FnTree, FullBaireTree, FullBinaryTree, PrunedTree, Successors,
    TreeCheck, TreeMeasure, Violation,
};
