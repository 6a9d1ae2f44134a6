//! Solver-agnostic mixed-integer linear program store.
//!
//! A [`Model`] owns variables, linear constraints and a minimisation
//! objective. It knows nothing about any particular solver: engines plug in
//! through the [`SolverAdapter`] trait, and the model can always be exported
//! as LP-format text for external tools.

mod file_adapter;
mod highs_adapter;
mod lp_format;
mod solve;

pub use file_adapter::FileExchangeSolver;
pub use highs_adapter::HighsSolver;
pub use lp_format::write_lp;
pub use solve::{solve, RawSolution, Solution, SolveOptions, SolveStatus, SolverAdapter};

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Absolute feasibility and integrality tolerance applied to every solution
/// accepted by [`solve`].
pub const FEASIBILITY_TOL: f64 = 1e-6;

static NEXT_MODEL_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Error)]
pub enum MilpError {
    #[error("variable name {0:?} already used in this model")]
    DuplicateVariable(String),
    #[error("constraint name {0:?} already used in this model")]
    DuplicateConstraint(String),
    #[error("invalid name {0:?}: use [A-Za-z_][A-Za-z0-9_]*")]
    InvalidName(String),
    #[error("inverted bounds for {name:?}: {lower} > {upper}")]
    InvertedBounds { name: String, lower: f64, upper: f64 },
    #[error("non-finite coefficient or bound involving {0:?}")]
    NonFinite(String),
    #[error("expression references a variable from another model")]
    ForeignVariable,
    #[error("model has no objective")]
    NoObjective,
    #[error("model has no variables")]
    EmptyModel,
    #[error("solver adapter {adapter:?} failed: {message}")]
    AdapterFailure { adapter: String, message: String },
    #[error("adapter {adapter:?} returned an inconsistent solution: {message}")]
    InconsistentSolution { adapter: String, message: String },
}

/// Continuous or binary decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

/// Handle to a variable of a specific [`Model`].
///
/// Handles are small and copyable; they remember which model created them so
/// cross-model use is rejected instead of silently mis-indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarRef {
    model: u64,
    index: u32,
}

impl VarRef {
    /// Position of the variable in insertion order.
    pub fn index(self) -> usize {
        self.index as usize
    }
}

#[derive(Debug, Clone)]
struct VarData {
    name: String,
    kind: VarKind,
    lower: f64,
    upper: f64,
}

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Le => write!(f, "<="),
            Sense::Eq => write!(f, "="),
            Sense::Ge => write!(f, ">="),
        }
    }
}

/// Sparse linear expression: a coefficient per variable plus a constant.
///
/// Zero coefficients are never retained, so equality of the term maps means
/// algebraic equality.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    terms: BTreeMap<VarRef, f64>,
    constant: f64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: value,
        }
    }

    pub fn term(var: VarRef, coef: f64) -> Self {
        let mut e = LinExpr::new();
        e.add_term(var, coef);
        e
    }

    /// Adds `coef * var`, merging with any existing term and dropping it if
    /// the merged coefficient is zero.
    pub fn add_term(&mut self, var: VarRef, coef: f64) -> &mut Self {
        let entry = self.terms.entry(var).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.terms.remove(&var);
        }
        self
    }

    pub fn add_constant(&mut self, value: f64) -> &mut Self {
        self.constant += value;
        self
    }

    pub fn add_expr(&mut self, other: &LinExpr) -> &mut Self {
        for (&v, &c) in &other.terms {
            self.add_term(v, c);
        }
        self.constant += other.constant;
        self
    }

    pub fn scale(&mut self, factor: f64) -> &mut Self {
        if factor == 0.0 {
            self.terms.clear();
        } else {
            for c in self.terms.values_mut() {
                *c *= factor;
            }
        }
        self.constant *= factor;
        self
    }

    /// Sum of `coef * var` over parallel slices.
    pub fn weighted_sum(vars: &[VarRef], coefs: &[f64]) -> Self {
        let mut e = LinExpr::new();
        for (&v, &c) in vars.iter().zip(coefs) {
            e.add_term(v, c);
        }
        e
    }

    pub fn constant_part(&self) -> f64 {
        self.constant
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (VarRef, f64)> + '_ {
        self.terms.iter().map(|(&v, &c)| (v, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Evaluates the expression against a dense value vector indexed like the
    /// owning model's variables.
    pub fn eval(&self, values: &[f64]) -> f64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|(v, c)| c * values[v.index()])
                .sum::<f64>()
    }

    fn all_finite(&self) -> bool {
        self.constant.is_finite() && self.terms.values().all(|c| c.is_finite())
    }
}

impl From<VarRef> for LinExpr {
    fn from(v: VarRef) -> Self {
        LinExpr::term(v, 1.0)
    }
}

impl std::ops::Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self.add_expr(&rhs);
        self
    }
}

impl std::ops::Sub for LinExpr {
    type Output = LinExpr;
    fn sub(mut self, rhs: LinExpr) -> LinExpr {
        let mut neg = rhs;
        neg.scale(-1.0);
        self.add_expr(&neg);
        self
    }
}

impl std::ops::Mul<f64> for LinExpr {
    type Output = LinExpr;
    fn mul(mut self, rhs: f64) -> LinExpr {
        self.scale(rhs);
        self
    }
}

/// Handle to a registered constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintRef {
    index: u32,
}

impl ConstraintRef {
    pub fn index(self) -> usize {
        self.index as usize
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintData {
    pub name: String,
    pub expr: LinExpr,
    pub sense: Sense,
    pub rhs: f64,
}

/// Size summary of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub constraints: usize,
    pub nonzeros: usize,
}

impl fmt::Display for ModelStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} constraints, {} variables, {} binaries, {} nonzeros",
            self.constraints, self.variables, self.binaries, self.nonzeros
        )
    }
}

/// Mixed-integer linear program under construction.
///
/// Variables and constraints keep their insertion order everywhere, including
/// LP-format emission, so an unchanged model always reproduces byte-identical
/// artifacts.
#[derive(Debug)]
pub struct Model {
    id: u64,
    name: String,
    vars: Vec<VarData>,
    var_index: HashMap<String, u32>,
    constraints: Vec<ConstraintData>,
    constraint_index: HashMap<String, u32>,
    objective: Option<LinExpr>,
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Model {
            id: NEXT_MODEL_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            vars: Vec::new(),
            var_index: HashMap::new(),
            constraints: Vec::new(),
            constraint_index: HashMap::new(),
            objective: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn check_name(name: &str) -> Result<(), MilpError> {
        let mut chars = name.chars();
        let ok_first = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
        let ok_rest = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if name.is_empty() || !ok_first || !ok_rest {
            return Err(MilpError::InvalidName(name.to_string()));
        }
        Ok(())
    }

    /// Registers a variable and returns its handle.
    ///
    /// Binary variables have their bounds intersected with `[0, 1]`, so a
    /// binary can be fixed (e.g. bounds `[0, 0]`) but never widened.
    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: f64,
        upper: f64,
    ) -> Result<VarRef, MilpError> {
        let name = name.into();
        Self::check_name(&name)?;
        if self.var_index.contains_key(&name) {
            return Err(MilpError::DuplicateVariable(name));
        }
        if lower.is_nan() || upper.is_nan() {
            return Err(MilpError::NonFinite(name));
        }
        let (lower, upper) = match kind {
            VarKind::Continuous => (lower, upper),
            VarKind::Binary => (lower.max(0.0), upper.min(1.0)),
        };
        if lower > upper {
            return Err(MilpError::InvertedBounds { name, lower, upper });
        }
        let index = self.vars.len() as u32;
        self.var_index.insert(name.clone(), index);
        self.vars.push(VarData {
            name,
            kind,
            lower,
            upper,
        });
        Ok(VarRef {
            model: self.id,
            index,
        })
    }

    pub fn var_ref(&self, index: usize) -> VarRef {
        assert!(index < self.vars.len());
        VarRef {
            model: self.id,
            index: index as u32,
        }
    }

    pub fn var_name(&self, var: VarRef) -> &str {
        &self.vars[var.index()].name
    }

    pub fn var_kind(&self, var: VarRef) -> VarKind {
        self.vars[var.index()].kind
    }

    pub fn var_bounds(&self, var: VarRef) -> (f64, f64) {
        let d = &self.vars[var.index()];
        (d.lower, d.upper)
    }

    pub fn lookup_var(&self, name: &str) -> Option<VarRef> {
        self.var_index.get(name).map(|&index| VarRef {
            model: self.id,
            index,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn check_owned(&self, expr: &LinExpr) -> Result<(), MilpError> {
        if expr
            .terms
            .keys()
            .any(|v| v.model != self.id || v.index() >= self.vars.len())
        {
            return Err(MilpError::ForeignVariable);
        }
        Ok(())
    }

    /// Registers `expr (sense) rhs`.
    ///
    /// Any constant inside `expr` is folded into the right-hand side, so the
    /// stored expression is always pure terms.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        expr: LinExpr,
        sense: Sense,
        rhs: f64,
    ) -> Result<ConstraintRef, MilpError> {
        let name = name.into();
        Self::check_name(&name)?;
        if self.constraint_index.contains_key(&name) {
            return Err(MilpError::DuplicateConstraint(name));
        }
        self.check_owned(&expr)?;
        if !expr.all_finite() || !rhs.is_finite() {
            return Err(MilpError::NonFinite(name));
        }
        let mut expr = expr;
        let rhs = rhs - expr.constant;
        expr.constant = 0.0;
        let index = self.constraints.len() as u32;
        self.constraint_index.insert(name.clone(), index);
        self.constraints.push(ConstraintData {
            name,
            expr,
            sense,
            rhs,
        });
        Ok(ConstraintRef { index })
    }

    /// Replaces the objective. The model always minimises.
    pub fn set_objective(&mut self, expr: LinExpr) -> Result<(), MilpError> {
        self.check_owned(&expr)?;
        if !expr.all_finite() {
            return Err(MilpError::NonFinite("objective".into()));
        }
        self.objective = Some(expr);
        Ok(())
    }

    pub fn objective(&self) -> Option<&LinExpr> {
        self.objective.as_ref()
    }

    pub fn constraints(&self) -> &[ConstraintData] {
        &self.constraints
    }

    pub fn iter_vars(&self) -> impl Iterator<Item = (VarRef, &str, VarKind, f64, f64)> + '_ {
        self.vars.iter().enumerate().map(|(i, d)| {
            (
                VarRef {
                    model: self.id,
                    index: i as u32,
                },
                d.name.as_str(),
                d.kind,
                d.lower,
                d.upper,
            )
        })
    }

    pub fn stats(&self) -> ModelStats {
        ModelStats {
            variables: self.vars.len(),
            binaries: self
                .vars
                .iter()
                .filter(|v| v.kind == VarKind::Binary)
                .count(),
            constraints: self.constraints.len(),
            nonzeros: self.constraints.iter().map(|c| c.expr.len()).sum(),
        }
    }

    /// Largest absolute constraint violation at `values`, together with the
    /// name of the worst row.
    pub fn max_violation(&self, values: &[f64]) -> (f64, Option<&str>) {
        let mut worst = 0.0_f64;
        let mut name = None;
        for c in &self.constraints {
            let lhs = c.expr.eval(values);
            let viol = match c.sense {
                Sense::Le => lhs - c.rhs,
                Sense::Ge => c.rhs - lhs,
                Sense::Eq => (lhs - c.rhs).abs(),
            };
            if viol > worst {
                worst = viol;
                name = Some(c.name.as_str());
            }
        }
        for v in &self.vars {
            let idx = self.var_index[&v.name] as usize;
            let x = values[idx];
            let viol = (v.lower - x).max(x - v.upper).max(0.0);
            if viol > worst {
                worst = viol;
                name = Some(v.name.as_str());
            }
        }
        (worst, name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_var_basics() {
        let mut m = Model::new("t");
        let x = m.add_var("p_ed_0", VarKind::Continuous, 0.0, 500.0).unwrap();
        assert_eq!(m.var_bounds(x), (0.0, 500.0));
        let z = m.add_var("z_dtc_0", VarKind::Binary, 0.0, 1.0).unwrap();
        assert_eq!(m.var_kind(z), VarKind::Binary);
        let err = m.add_var("p_ed_0", VarKind::Continuous, 0.0, 1.0);
        assert!(matches!(err, Err(MilpError::DuplicateVariable(_))));
        let err = m.add_var("bad", VarKind::Continuous, 2.0, 1.0);
        assert!(matches!(err, Err(MilpError::InvertedBounds { .. })));
        let err = m.add_var("3bad", VarKind::Continuous, 0.0, 1.0);
        assert!(matches!(err, Err(MilpError::InvalidName(_))));
    }

    #[test]
    fn binary_bounds_clamped() {
        let mut m = Model::new("t");
        let z = m.add_var("z", VarKind::Binary, -3.0, 7.0).unwrap();
        assert_eq!(m.var_bounds(z), (0.0, 1.0));
        let f = m.add_var("z_fixed", VarKind::Binary, 0.0, 0.0).unwrap();
        assert_eq!(m.var_bounds(f), (0.0, 0.0));
    }

    #[test]
    fn constraints_reject_foreign_vars() {
        let mut a = Model::new("a");
        let mut b = Model::new("b");
        let x = a.add_var("x", VarKind::Continuous, 0.0, 1.0).unwrap();
        let y = b.add_var("y", VarKind::Continuous, 0.0, 1.0).unwrap();
        let mut e = LinExpr::term(x, 1.0);
        e.add_term(y, 1.0);
        assert!(matches!(
            b.add_constraint("c", e, Sense::Le, 5.0),
            Err(MilpError::ForeignVariable)
        ));
        // an empty expression is fine and trivially satisfiable
        let c = b.add_constraint("empty", LinExpr::new(), Sense::Eq, 0.0);
        assert!(c.is_ok());
    }

    #[test]
    fn constraint_constant_folds_into_rhs() {
        let mut m = Model::new("t");
        let x = m.add_var("x", VarKind::Continuous, 0.0, 10.0).unwrap();
        let mut e = LinExpr::term(x, 2.0);
        e.add_constant(3.0);
        let c = m.add_constraint("c", e, Sense::Le, 5.0).unwrap();
        let data = &m.constraints()[c.index()];
        assert_eq!(data.rhs, 2.0);
        assert_eq!(data.expr.constant_part(), 0.0);
    }

    #[test]
    fn linexpr_drops_zero_coefficients() {
        let mut m = Model::new("t");
        let x = m.add_var("x", VarKind::Continuous, 0.0, 1.0).unwrap();
        let mut e = LinExpr::term(x, 2.0);
        e.add_term(x, -2.0);
        assert!(e.is_empty());
        let sum = LinExpr::term(x, 1.5) + LinExpr::term(x, 0.5);
        assert_eq!(sum.iter_terms().next().unwrap().1, 2.0);
        let diff = LinExpr::term(x, 1.5) - LinExpr::term(x, 1.5);
        assert!(diff.is_empty());
    }
}
