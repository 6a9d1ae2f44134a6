//! LP-format text emission.
//!
//! The writer produces the common CPLEX-style LP dialect restricted to what
//! this crate generates, so third-party solvers can consume the files
//! directly:
//!
//! ```text
//! \ Problem: <model name>
//! Minimize
//!  obj: <coef> <var> [+|- <coef> <var> ...]
//! Subject To
//!  <name>: <coef> <var> ... <=|=|>= <rhs>
//! Bounds
//!  <lo> <= <var> <= <hi>      (finite bounds)
//!  <var> >= <lo>              (no upper bound)
//!  <var> <= <hi>              (no lower bound)
//!  <var> = <v>                (fixed)
//!  <var> free                 (unbounded both ways)
//! Binaries
//!  <var> <var> ...
//! End
//! ```
//!
//! Every coefficient is written explicitly (including `1`), variables and
//! constraints appear in insertion order, and numbers use Rust's shortest
//! round-trip decimal form, so emission is deterministic: the same model
//! always yields byte-identical text. A non-zero objective constant is not
//! representable portably and is recorded in a leading comment instead.

use std::fmt::Write as _;

use super::{LinExpr, Model, MilpError, Sense, VarKind};

const TERMS_PER_LINE: usize = 8;

/// Formats a finite f64 the way the LP writer does everywhere.
fn num(x: f64) -> String {
    format!("{}", x)
}

fn push_expr(out: &mut String, expr: &LinExpr, model: &Model) {
    let mut on_line = 0usize;
    let mut first = true;
    for (var, coef) in expr.iter_terms() {
        if on_line == TERMS_PER_LINE {
            out.push_str("\n ");
            on_line = 0;
        }
        if first {
            if coef < 0.0 {
                let _ = write!(out, " -{} {}", num(-coef), model.var_name(var));
            } else {
                let _ = write!(out, " {} {}", num(coef), model.var_name(var));
            }
            first = false;
        } else if coef < 0.0 {
            let _ = write!(out, " - {} {}", num(-coef), model.var_name(var));
        } else {
            let _ = write!(out, " + {} {}", num(coef), model.var_name(var));
        }
        on_line += 1;
    }
    if first {
        // empty expression: anchor on the first variable with coefficient 0
        let v = model.var_ref(0);
        let _ = write!(out, " 0 {}", model.var_name(v));
    }
}

/// Serialises the model as LP-format text.
///
/// Fails if the model has no objective or no variables.
pub fn write_lp(model: &Model) -> Result<String, MilpError> {
    let objective = model.objective().ok_or(MilpError::NoObjective)?;
    if model.num_vars() == 0 {
        return Err(MilpError::EmptyModel);
    }
    let mut out = String::new();
    let _ = writeln!(out, "\\ Problem: {}", model.name());
    if objective.constant_part() != 0.0 {
        let _ = writeln!(
            out,
            "\\ objective constant {} omitted from obj",
            num(objective.constant_part())
        );
    }
    out.push_str("Minimize\n obj:");
    push_expr(&mut out, objective, model);
    out.push('\n');

    out.push_str("Subject To\n");
    for c in model.constraints() {
        let _ = write!(out, " {}:", c.name);
        push_expr(&mut out, &c.expr, model);
        let _ = writeln!(out, " {} {}", c.sense, num(c.rhs));
    }

    out.push_str("Bounds\n");
    for (_, name, kind, lo, hi) in model.iter_vars() {
        if kind == VarKind::Binary {
            // binaries carry implicit [0,1]; narrower bounds (fixings) still
            // need to be written out
            if lo > 0.0 || hi < 1.0 {
                if lo == hi {
                    let _ = writeln!(out, " {} = {}", name, num(lo));
                } else {
                    let _ = writeln!(out, " {} <= {} <= {}", num(lo), name, num(hi));
                }
            }
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) if lo == hi => {
                let _ = writeln!(out, " {} = {}", name, num(lo));
            }
            (true, true) => {
                let _ = writeln!(out, " {} <= {} <= {}", num(lo), name, num(hi));
            }
            (true, false) => {
                let _ = writeln!(out, " {} >= {}", name, num(lo));
            }
            (false, true) => {
                let _ = writeln!(out, " {} <= {}", name, num(hi));
            }
            (false, false) => {
                let _ = writeln!(out, " {} free", name);
            }
        }
    }

    let binaries: Vec<&str> = model
        .iter_vars()
        .filter(|(_, _, kind, _, _)| *kind == VarKind::Binary)
        .map(|(_, name, _, _, _)| name)
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::VarKind;

    #[test]
    fn single_bound_model() {
        let mut m = Model::new("tiny");
        let x = m.add_var("x", VarKind::Continuous, 0.0, f64::INFINITY).unwrap();
        m.add_constraint("floor", LinExpr::term(x, 1.0), Sense::Ge, 1.0)
            .unwrap();
        m.set_objective(LinExpr::term(x, 1.0)).unwrap();
        let text = write_lp(&m).unwrap();
        assert!(text.contains("Minimize"));
        assert!(text.contains(" floor: 1 x >= 1"));
        assert!(text.contains(" x >= 0"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn emission_is_deterministic() {
        let mut m = Model::new("det");
        let mut obj = LinExpr::new();
        for i in 0..30 {
            let v = m
                .add_var(format!("v{}", i), VarKind::Continuous, -1.0, 1.0)
                .unwrap();
            obj.add_term(v, 0.5 + i as f64);
        }
        let z = m.add_var("z", VarKind::Binary, 0.0, 1.0).unwrap();
        obj.add_term(z, -2.0);
        m.add_constraint("row", obj.clone(), Sense::Le, 40.0).unwrap();
        m.set_objective(obj).unwrap();
        assert_eq!(write_lp(&m).unwrap(), write_lp(&m).unwrap());
    }

    #[test]
    fn no_objective_is_an_error() {
        let mut m = Model::new("noobj");
        m.add_var("x", VarKind::Continuous, 0.0, 1.0).unwrap();
        assert!(matches!(write_lp(&m), Err(MilpError::NoObjective)));
    }
}
