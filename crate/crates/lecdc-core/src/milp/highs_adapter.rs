//! Embedded HiGHS adapter.

use highs::{HighsModelStatus, RowProblem, Sense as HighsSense};

use super::{Model, MilpError, RawSolution, Sense, SolveOptions, SolveStatus, SolverAdapter};

/// In-process solve through the bundled HiGHS engine.
///
/// Runs single-threaded so repeated solves of the same model are
/// reproducible.
#[derive(Debug, Clone, Default)]
pub struct HighsSolver;

impl SolverAdapter for HighsSolver {
    fn name(&self) -> &str {
        "highs"
    }

    fn solve_raw(&self, model: &Model, options: &SolveOptions) -> Result<RawSolution, MilpError> {
        let objective = model.objective().ok_or(MilpError::NoObjective)?;
        let mut obj_coefs = vec![0.0; model.num_vars()];
        for (var, coef) in objective.iter_terms() {
            obj_coefs[var.index()] = coef;
        }

        let mut problem = RowProblem::default();
        let mut cols = Vec::with_capacity(model.num_vars());
        for (var, _, kind, lower, upper) in model.iter_vars() {
            let c = obj_coefs[var.index()];
            let col = match kind {
                super::VarKind::Continuous => problem.add_column(c, lower..=upper),
                super::VarKind::Binary => problem.add_integer_column(c, lower..=upper),
            };
            cols.push(col);
        }
        for con in model.constraints() {
            let coefs: Vec<_> = con
                .expr
                .iter_terms()
                .map(|(v, c)| (cols[v.index()], c))
                .collect();
            match con.sense {
                Sense::Le => problem.add_row(..=con.rhs, coefs),
                Sense::Ge => problem.add_row(con.rhs.., coefs),
                Sense::Eq => problem.add_row(con.rhs..=con.rhs, coefs),
            }
        }

        let mut highs_model = problem.optimise(HighsSense::Minimise);
        highs_model.set_option("output_flag", false);
        highs_model.set_option("threads", 1);
        highs_model.set_option("mip_rel_gap", options.mip_gap);
        highs_model.set_option("primal_feasibility_tolerance", 1e-9);
        highs_model.set_option("mip_feasibility_tolerance", 1e-9);
        if let Some(limit) = options.time_limit_s {
            highs_model.set_option("time_limit", limit);
        }

        let solved = highs_model.solve();
        let status = match solved.status() {
            HighsModelStatus::Optimal | HighsModelStatus::ModelEmpty => SolveStatus::Optimal,
            HighsModelStatus::Infeasible => SolveStatus::Infeasible,
            HighsModelStatus::Unbounded | HighsModelStatus::UnboundedOrInfeasible => {
                SolveStatus::Unbounded
            }
            HighsModelStatus::ReachedTimeLimit | HighsModelStatus::ReachedIterationLimit => {
                SolveStatus::Limit
            }
            other => {
                return Err(MilpError::AdapterFailure {
                    adapter: self.name().to_string(),
                    message: format!("unexpected HiGHS status {:?}", other),
                })
            }
        };

        let values = if status == SolveStatus::Optimal {
            let solution = solved.get_solution();
            let columns = solution.columns();
            if columns.len() == model.num_vars() {
                columns.to_vec()
            } else {
                vec![0.0; model.num_vars()]
            }
        } else {
            Vec::new()
        };

        Ok(RawSolution {
            status,
            objective: None,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{solve, LinExpr, Model, VarKind};

    #[test]
    fn bounded_minimum() {
        let mut m = Model::new("t");
        let x = m.add_var("x", VarKind::Continuous, 1.0, 2.0).unwrap();
        m.set_objective(LinExpr::term(x, 1.0)).unwrap();
        let s = solve(&m, &HighsSolver, &SolveOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-9);

        m.set_objective(LinExpr::term(x, -1.0)).unwrap();
        let s = solve(&m, &HighsSolver, &SolveOptions::default()).unwrap();
        assert!((s.objective + 2.0).abs() < 1e-9);
    }

    #[test]
    fn conflicting_rows_are_infeasible() {
        let mut m = Model::new("t");
        let x = m.add_var("x", VarKind::Continuous, 0.0, 10.0).unwrap();
        m.add_constraint("hi", LinExpr::term(x, 1.0), Sense::Ge, 2.0)
            .unwrap();
        m.add_constraint("lo", LinExpr::term(x, 1.0), Sense::Le, 1.0)
            .unwrap();
        m.set_objective(LinExpr::term(x, 1.0)).unwrap();
        let s = solve(&m, &HighsSolver, &SolveOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
    }

    #[test]
    fn zero_objective_is_fine() {
        let mut m = Model::new("t");
        let x = m.add_var("x", VarKind::Continuous, 0.0, 1.0).unwrap();
        m.add_constraint("c", LinExpr::term(x, 1.0), Sense::Le, 1.0)
            .unwrap();
        m.set_objective(LinExpr::new()).unwrap();
        let s = solve(&m, &HighsSolver, &SolveOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.objective, 0.0);
    }
}
