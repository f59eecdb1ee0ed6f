//! Exact symbolic machinery for point symmetries, Noether correspondences and
//! conservation laws of plane one-dimensional MHD in mass Lagrangian
//! coordinates.

pub mod expr;
pub mod jet;
pub mod corpus;
pub mod symmetry;
pub mod noether;
