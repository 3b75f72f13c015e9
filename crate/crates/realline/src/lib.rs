//! Interval sets on the real line and density windows around a point.

pub mod constructions;
pub mod fat;
pub mod interval;

pub use constructions::{
    basis_counterexample, example_halfdensity, halfdensity_set, oscillation_example,
    GeometricUnion, Variant,
};
pub use fat::{fat_cantor, FatCantor, FatNode, Schedule};
pub use interval::{
    endpoint_density_check, one_sided_ratio, window_ratio, Interval, IntervalSet, LebesgueSet, Side,
};
