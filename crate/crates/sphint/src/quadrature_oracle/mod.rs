//! Numerical references: fixed-order triangle rules and an adaptive oracle.

mod adaptive;
mod convergence;
mod rules;

pub use adaptive::{adaptive_clipped_integrate, CELL_BUDGET, DEFAULT_TOL};
pub use convergence::{
    convergence_mesh_triangles, convergence_queries, convergence_study, ConvergenceCase, ConvergenceError,
    ConvergenceRow, ConvergenceStudy, CONVERGENCE_H,
};
pub use rules::{build_rule, gauss_legendre, quadrature_integrate, QuadratureError, QuadratureRule, MAX_ORDER, MIN_ORDER};
