//! Discontinuous Galerkin space on polygonal meshes and operator assembly.

mod assembly;
pub mod basis;
pub mod quadrature;
mod space;

pub use assembly::{
    apply_nonlinear_reaction, assemble_linear_reaction, assemble_load, assemble_mass, assemble_nonlinear_reaction,
    assemble_stiffness, face_penalty, harmonic_mean, max_eigenvalue, min_eigenvalue, Tensor2,
};
pub use space::{DgSpace, ElementData};
