//! Linear and binary-integer programs: model building, a dense two-phase
//! simplex, best-first branch-and-bound, and lp_solve text output.

mod branch;
mod lpformat;
mod model;
mod simplex;

pub use lpformat::emit_lp_format;
pub use model::{Constraint, LpBuilder, LpModel, Objective, Relation, Sense, VarId, VarKind, Variable};

use crate::error::{Error, Result};

/// Primal feasibility tolerance (scaled by row magnitude).
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Distance from {0, 1} accepted as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERATIONS: u64 = 1_000_000;
pub const DEFAULT_MAX_NODES: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration budget exhausted or the final point failed verification.
    NumericalFailure,
    /// Branch-and-bound node budget exhausted; `values` holds the incumbent
    /// when one was found.
    NodeLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Indexed by [`VarId`]; empty unless a point is available.
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: u64,
    /// Branch-and-bound child nodes created.
    pub nodes: u64,
}

impl SolveResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn value(&self, v: VarId) -> f64 {
        self.values[v.0]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Simplex pivots per relaxation.
    pub max_iterations: u64,
    pub max_nodes: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

/// Solves a model whose variables are all continuous.
pub fn solve_lp(model: &LpModel, opts: &SolverOptions) -> Result<SolveResult> {
    if model.has_binaries() {
        return Err(Error::Model("solve_lp called on a model with binary variables".into()));
    }
    Ok(simplex::solve_relaxation(model, &base_bounds(model), opts))
}

/// Exact optimum of a model with binary variables.
pub fn solve_ilp(model: &LpModel, opts: &SolverOptions) -> SolveResult {
    branch::branch_and_bound(model, opts)
}

/// Dispatches on whether the model has binaries.
pub fn solve(model: &LpModel, opts: &SolverOptions) -> SolveResult {
    if model.has_binaries() {
        solve_ilp(model, opts)
    } else {
        simplex::solve_relaxation(model, &base_bounds(model), opts)
    }
}

fn base_bounds(model: &LpModel) -> Vec<(f64, f64)> {
    model
        .variables()
        .iter()
        .map(|v| match v.kind {
            VarKind::Continuous => (v.lower, v.upper),
            VarKind::Binary => (v.lower.max(0.0), v.upper.min(1.0)),
        })
        .collect()
}
