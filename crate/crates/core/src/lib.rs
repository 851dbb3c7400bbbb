//! Numerical value-distribution toolkit for linear differential, difference
//! and q-difference equations.
//!
//! Modules:
//! - [`funcexpr`]: expression trees, parsing, differentiation, log-scale evaluation
//! - [`nevanlinna`]: proximity, counting and characteristic functions and friends
//! - [`order_reduction`]: the order-reduction recursion and its coefficient identity
//! - [`solvers`]: ray integration, lattice recurrences, equation residuals
//! - [`dominance`]: dominance index search and conclusion ratios
//! - [`harness`]: scenarios, the built-in catalogue and report generation

mod dd;
pub mod dominance;
pub mod equation;
pub mod funcexpr;
pub mod grid;
pub mod harness;
pub mod nevanlinna;
pub mod order_reduction;
pub mod par;
pub mod samples;
pub mod scaled;
pub mod solvers;
pub mod special;

pub use funcexpr::{Domain, ExprError, FunctionExpr, LogValue};
pub use num_complex::Complex64;
