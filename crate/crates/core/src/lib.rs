pub mod field;
pub mod geometry;
pub mod perm;
pub mod group;
pub mod relations;
pub mod dynamics;
pub mod zeta;
pub mod harness;
pub mod pipeline;
