//! Computational tools for the squarefree algebra over characteristic-3
//! fields, permanental rank of stacked matrices, and additive bases of
//! `Z_p^n`.

pub mod algebra;
pub mod ff;
pub mod matrix;
pub mod formspace;
pub mod rng;
pub mod perrank;
pub mod format;
pub mod additive;
pub mod verify;
