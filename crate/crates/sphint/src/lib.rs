//! Exact integrals of compact polynomial SPH kernels and their gradients over 2D triangles.

pub mod elementary_regions;
pub mod geometry;
pub mod kernels;
pub mod mesh_io;
pub mod quadrature_oracle;
pub mod real;
pub mod special_functions;
pub mod sph_demo;
pub mod triangle_integrator;

pub use real::Real;
