//! Clopen sets, approximated sets and density computations on `2^ω`.

pub mod approx;
pub mod cylinder;
pub mod density;
pub mod thick;
pub mod thin;

pub use approx::{ApproxSet, Approximation, Mode, StageReport};
pub use cylinder::{CylinderJson, CylinderSet, Position};
pub use density::{
    density_bounds, density_profile, density_tree, mu_operators, thickness_certificate,
    DensityBounds, DensityTree, Flag, MuOperators, ThicknessCertificate,
};
pub use thick::{thick_cothick_sigma, SigmaComponent, ThickCothick};
pub use thin::{compact_thin, Removal, ThinCompact};
