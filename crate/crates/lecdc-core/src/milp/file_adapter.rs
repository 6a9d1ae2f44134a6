//! File-exchange adapter: emit LP, shell out, parse the solution back.
//!
//! The external command is given as a template with `{lp}` and `{sol}`
//! placeholders, e.g. `python3 tools/solve_lp.py {lp} {sol}`. It must write a
//! solution file in this grammar (one entry per line, `#` starts a comment):
//!
//! ```text
//! status optimal|infeasible|unbounded|limit
//! objective <float>            # optional
//! <variable-name> <float>      # one per variable; omitted variables are 0
//! ```

use std::process::Command;

use super::{write_lp, Model, MilpError, RawSolution, SolveOptions, SolveStatus, SolverAdapter};

/// Runs an external solver through LP and solution files.
#[derive(Debug, Clone)]
pub struct FileExchangeSolver {
    command: String,
}

impl FileExchangeSolver {
    /// `command` is a whitespace-split template containing `{lp}` and
    /// `{sol}` placeholders. Paths with spaces are not supported.
    pub fn new(command: impl Into<String>) -> Self {
        FileExchangeSolver {
            command: command.into(),
        }
    }

    fn parse_solution(model: &Model, text: &str) -> Result<RawSolution, MilpError> {
        let bad = |message: String| MilpError::InconsistentSolution {
            adapter: "file-exchange".to_string(),
            message,
        };
        let mut status = None;
        let mut objective = None;
        let mut values = vec![0.0; model.num_vars()];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            let value = parts
                .next()
                .ok_or_else(|| bad(format!("line {}: missing value", lineno + 1)))?;
            match key {
                "status" => {
                    status = Some(match value {
                        "optimal" => SolveStatus::Optimal,
                        "infeasible" => SolveStatus::Infeasible,
                        "unbounded" => SolveStatus::Unbounded,
                        "limit" => SolveStatus::Limit,
                        other => return Err(bad(format!("unknown status {:?}", other))),
                    });
                }
                "objective" => {
                    objective = Some(value.parse::<f64>().map_err(|_| {
                        bad(format!("line {}: bad objective {:?}", lineno + 1, value))
                    })?);
                }
                name => {
                    let var = model
                        .lookup_var(name)
                        .ok_or_else(|| bad(format!("unknown variable {:?}", name)))?;
                    values[var.index()] = value.parse::<f64>().map_err(|_| {
                        bad(format!("line {}: bad value for {:?}", lineno + 1, name))
                    })?;
                }
            }
        }
        let status = status.ok_or_else(|| bad("solution file has no status line".into()))?;
        if status != SolveStatus::Optimal {
            values = Vec::new();
        }
        Ok(RawSolution {
            status,
            objective,
            values,
        })
    }
}

impl SolverAdapter for FileExchangeSolver {
    fn name(&self) -> &str {
        "file-exchange"
    }

    fn solve_raw(&self, model: &Model, _options: &SolveOptions) -> Result<RawSolution, MilpError> {
        let failure = |message: String| MilpError::AdapterFailure {
            adapter: "file-exchange".to_string(),
            message,
        };
        let dir = tempfile::tempdir().map_err(|e| failure(format!("tempdir: {}", e)))?;
        let lp_path = dir.path().join("model.lp");
        let sol_path = dir.path().join("model.sol");
        std::fs::write(&lp_path, write_lp(model)?)
            .map_err(|e| failure(format!("write {}: {}", lp_path.display(), e)))?;

        let rendered = self
            .command
            .replace("{lp}", &lp_path.to_string_lossy())
            .replace("{sol}", &sol_path.to_string_lossy());
        let mut parts = rendered.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| failure("empty solver command".into()))?;
        let output = Command::new(program)
            .args(parts)
            .output()
            .map_err(|e| failure(format!("spawn {:?}: {}", program, e)))?;
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            let tail: Vec<&str> = stderr.lines().rev().take(15).collect();
            let tail: Vec<&str> = tail.into_iter().rev().collect();
            return Err(failure(format!(
                "command exited with {}: {}",
                output.status,
                tail.join(" | ")
            )));
        }
        let text = std::fs::read_to_string(&sol_path)
            .map_err(|e| failure(format!("read {}: {}", sol_path.display(), e)))?;
        Self::parse_solution(model, &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::VarKind;

    #[test]
    fn parses_sparse_solution_files() {
        let mut m = Model::new("t");
        m.add_var("x", VarKind::Continuous, 0.0, 10.0).unwrap();
        m.add_var("y", VarKind::Continuous, 0.0, 10.0).unwrap();
        let raw = FileExchangeSolver::parse_solution(
            &m,
            "# solved externally\nstatus optimal\nobjective 3.5\nx 3.5\n",
        )
        .unwrap();
        assert_eq!(raw.status, SolveStatus::Optimal);
        assert_eq!(raw.objective, Some(3.5));
        assert_eq!(raw.values, vec![3.5, 0.0]);
    }

    #[test]
    fn rejects_unknown_variables() {
        let mut m = Model::new("t");
        m.add_var("x", VarKind::Continuous, 0.0, 10.0).unwrap();
        let err = FileExchangeSolver::parse_solution(&m, "status optimal\nbogus 1\n");
        assert!(matches!(err, Err(MilpError::InconsistentSolution { .. })));
    }

    #[test]
    fn missing_command_is_an_environment_failure() {
        let mut m = Model::new("t");
        let x = m.add_var("x", VarKind::Continuous, 0.0, 1.0).unwrap();
        m.set_objective(crate::milp::LinExpr::term(x, 1.0)).unwrap();
        let solver = FileExchangeSolver::new("definitely-not-a-solver {lp} {sol}");
        let err = solver.solve_raw(&m, &SolveOptions::default());
        assert!(matches!(err, Err(MilpError::AdapterFailure { .. })));
    }
}
