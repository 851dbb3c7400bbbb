//! Solution bases: ray integration of linear ODEs, lattice recurrences for
//! difference and q-difference equations, and equation residuals.

mod growth;
mod lattice;
mod ray;
mod residual;

pub use growth::{ray_dump_csv, solution_growth, GrowthOptions, SolutionGrowth};
pub use lattice::{delta_to_shift, iterate_lattice, shift_to_delta, LatticeSolution, LATTICE_RESIDUAL_TOL};
pub use ray::{integrate_ray, state_at, RayOptions, RayPoint, RaySolution, DEFAULT_RAY_TOL};
pub use residual::{equation_residual, ResidualReport};

use crate::funcexpr::ExprError;
use num_complex::Complex64 as C;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("ray integration needs a derivative-kind equation")]
    NotDerivative,
    #[error("zero initial condition gives the trivial solution")]
    ZeroInitialCondition,
    #[error("radius {0} lies outside the unit disc")]
    RadiusOutsideDomain(f64),
    #[error("ray at theta={theta} truncated at r={r}")]
    Truncated { theta: f64, r: f64 },
    #[error("leading shift coefficient vanishes at lattice point {0}")]
    LeadingVanishes(C),
    #[error("lattice recurrence residual {0:e} exceeds tolerance")]
    LatticeResidual(f64),
    #[error("{0}")]
    Invalid(String),
}

#[cfg(test)]
mod tests;
