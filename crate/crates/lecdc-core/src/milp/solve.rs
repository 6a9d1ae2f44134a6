//! Solve interface and solution verification.

use super::{Model, MilpError, VarKind, VarRef, FEASIBILITY_TOL};

/// Outcome category of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// A time or iteration limit stopped the search; `values` holds the
    /// incumbent when one was found.
    Limit,
}

/// Options forwarded to the adapter.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub time_limit_s: Option<f64>,
    pub mip_gap: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            time_limit_s: None,
            mip_gap: 1e-6,
        }
    }
}

/// What an adapter hands back before verification.
#[derive(Debug, Clone)]
pub struct RawSolution {
    pub status: SolveStatus,
    /// Objective claimed by the engine, if it reports one.
    pub objective: Option<f64>,
    /// Dense values in variable insertion order; may be empty for
    /// non-optimal statuses.
    pub values: Vec<f64>,
}

/// Verified solution of a model.
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    pub objective: f64,
    values: Vec<f64>,
    pub solve_seconds: f64,
}

impl Solution {
    pub fn value(&self, var: VarRef) -> f64 {
        self.values[var.index()]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn series(&self, vars: &[VarRef]) -> Vec<f64> {
        vars.iter().map(|&v| self.value(v)).collect()
    }
}

/// A MILP engine. Implementations translate the model, run the engine and
/// read the assignment back; [`solve`] does the checking.
pub trait SolverAdapter {
    fn name(&self) -> &str;
    fn solve_raw(&self, model: &Model, options: &SolveOptions) -> Result<RawSolution, MilpError>;
}

/// Solves `model` with `adapter` and verifies the result.
///
/// For an optimal status the returned assignment must satisfy every
/// constraint and bound within [`FEASIBILITY_TOL`], every binary must be
/// within the same tolerance of 0 or 1, and the engine's claimed objective
/// (when present) must match the objective expression evaluated at the
/// assignment to 1e-6 relative. Anything else is reported as an inconsistent
/// adapter, not returned as a solution.
pub fn solve(
    model: &Model,
    adapter: &dyn SolverAdapter,
    options: &SolveOptions,
) -> Result<Solution, MilpError> {
    let objective_expr = model.objective().ok_or(MilpError::NoObjective)?;
    let start = std::time::Instant::now();
    let raw = adapter.solve_raw(model, options)?;
    let solve_seconds = start.elapsed().as_secs_f64();

    let inconsistent = |message: String| MilpError::InconsistentSolution {
        adapter: adapter.name().to_string(),
        message,
    };

    if raw.status != SolveStatus::Optimal {
        let objective = raw.objective.unwrap_or(f64::NAN);
        return Ok(Solution {
            status: raw.status,
            objective,
            values: raw.values,
            solve_seconds,
        });
    }

    if raw.values.len() != model.num_vars() {
        return Err(inconsistent(format!(
            "expected {} values, got {}",
            model.num_vars(),
            raw.values.len()
        )));
    }

    let (violation, worst) = model.max_violation(&raw.values);
    if violation > FEASIBILITY_TOL {
        return Err(inconsistent(format!(
            "constraint violation {:.3e} at {:?}",
            violation,
            worst.unwrap_or("?")
        )));
    }

    let mut values = raw.values;
    for (var, name, kind, _, _) in model.iter_vars() {
        if kind == VarKind::Binary {
            let x = values[var.index()];
            let rounded = if x >= 0.5 { 1.0 } else { 0.0 };
            if (x - rounded).abs() > FEASIBILITY_TOL {
                return Err(inconsistent(format!(
                    "binary {} = {} is not integral",
                    name, x
                )));
            }
            values[var.index()] = rounded;
        }
    }

    let objective = objective_expr.eval(&values);
    if let Some(claimed) = raw.objective {
        let scale = 1.0_f64.max(objective.abs()).max(claimed.abs());
        if (claimed - objective).abs() > 1e-6 * scale {
            return Err(inconsistent(format!(
                "claimed objective {} but expression evaluates to {}",
                claimed, objective
            )));
        }
    }

    Ok(Solution {
        status: SolveStatus::Optimal,
        objective,
        values,
        solve_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{LinExpr, Model, Sense};

    struct LyingAdapter;
    impl SolverAdapter for LyingAdapter {
        fn name(&self) -> &str {
            "lying"
        }
        fn solve_raw(&self, model: &Model, _: &SolveOptions) -> Result<RawSolution, MilpError> {
            Ok(RawSolution {
                status: SolveStatus::Optimal,
                objective: Some(0.0),
                values: vec![0.0; model.num_vars()],
            })
        }
    }

    #[test]
    fn infeasible_assignments_are_rejected() {
        let mut m = Model::new("t");
        let x = m.add_var("x", VarKind::Continuous, 0.0, 10.0).unwrap();
        m.add_constraint("c", LinExpr::term(x, 1.0), Sense::Ge, 2.0)
            .unwrap();
        m.set_objective(LinExpr::term(x, 1.0)).unwrap();
        let err = solve(&m, &LyingAdapter, &SolveOptions::default());
        assert!(matches!(err, Err(MilpError::InconsistentSolution { .. })));
    }
}
