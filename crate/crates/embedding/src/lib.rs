//! Measure-preserving embeddings of the Cantor space into trees, built one
//! stage at a time.

pub mod allocation;
pub mod random;
pub mod stage;

pub use allocation::{allocate_amphorae, allocate_barrels, amphora_bound, barrel_bound};
pub use random::RandomTree;
pub use stage::{
    embed_stage, embed_stages, embed_verify, minimal_cover, Choice, InvariantRow, Sandwich, Stage,
    StagePlan,
};
