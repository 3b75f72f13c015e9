//! Triadic Cantor constructions with blurry boundary points and no sharp points.

pub mod triadic;
pub mod variant;

pub use triadic::{
    blur_windows, build_level, component_code, g_values, node, spongy_measure, verify,
    window_measure, BlurWindows, Check, Code, GValues, TriadicConfig, TriadicNode, VerifyReport,
};
pub use variant::{spongy_variant, EndpointOsc, Flavor, Piece, Shape, SpongyVariant};
