//! Coded points of `2^{ω×ω}` and two reductions of `P₃` to density classes.

pub mod compact;
pub mod matrix;
pub mod sharp;

pub use compact::{
    compactness_reduction, row_home, CompactCertificate, CompactReduction, CompactStep,
    Stabilization,
};
pub use matrix::{doubling_transform, gamma, p3_membership, MatrixCode, TailRule};
pub use sharp::{
    good_tree, locate, rho_of, sharp_K_measure, sharp_reduction, sharp_trajectory, Block, GoodNode,
    Located, Rho, SharpK, SharpMeasure, SharpStep,
};
