use std::collections::HashSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    /// Integer in {0, 1}; bounds are forced to [0, 1].
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: Option<String>,
    pub terms: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|(v, c)| c * values[v.0]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub sense: Sense,
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl Objective {
    pub fn value(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|(v, c)| c * values[v.0]).sum::<f64>()
    }
}

/// A validated linear program with continuous and binary variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
}

impl LpModel {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn has_binaries(&self) -> bool {
        self.variables.iter().any(|v| v.kind == VarKind::Binary)
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name).map(VarId)
    }
}

/// Incrementally describes an [`LpModel`]; [`LpBuilder::build`] validates it.
#[derive(Debug, Clone)]
pub struct LpBuilder {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
}

impl Default for LpBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl LpBuilder {
    pub fn new() -> Self {
        Self {
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Objective {
                sense: Sense::Minimize,
                terms: Vec::new(),
                constant: 0.0,
            },
        }
    }

    pub fn var(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> VarId {
        self.push(name.into(), VarKind::Continuous, lower, upper)
    }

    /// Continuous variable with bounds [0, +inf).
    pub fn nonneg(&mut self, name: impl Into<String>) -> VarId {
        self.var(name, 0.0, f64::INFINITY)
    }

    pub fn binary(&mut self, name: impl Into<String>) -> VarId {
        self.push(name.into(), VarKind::Binary, 0.0, 1.0)
    }

    fn push(&mut self, name: String, kind: VarKind, lower: f64, upper: f64) -> VarId {
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        VarId(self.variables.len() - 1)
    }

    pub fn constraint(&mut self, terms: Vec<(VarId, f64)>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            name: None,
            terms,
            relation,
            rhs,
        });
        self
    }

    pub fn named_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> &mut Self {
        self.constraints.push(Constraint {
            name: Some(name.into()),
            terms,
            relation,
            rhs,
        });
        self
    }

    pub fn objective(&mut self, sense: Sense, terms: Vec<(VarId, f64)>, constant: f64) -> &mut Self {
        self.objective = Objective {
            sense,
            terms,
            constant,
        };
        self
    }

    pub fn build(self) -> Result<LpModel> {
        let n = self.variables.len();
        let mut names = HashSet::new();
        for v in &self.variables {
            if v.name.is_empty() {
                return Err(Error::Model("empty variable name".into()));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::Model(format!("duplicate variable `{}`", v.name)));
            }
            if v.lower.is_nan() || v.upper.is_nan() || v.lower == f64::INFINITY || v.upper == f64::NEG_INFINITY {
                return Err(Error::Model(format!("variable `{}` has invalid bounds", v.name)));
            }
        }
        let check_terms = |terms: &[(VarId, f64)], what: &str| -> Result<()> {
            for (id, c) in terms {
                if id.0 >= n {
                    return Err(Error::Model(format!("{what} references undefined variable #{}", id.0)));
                }
                if !c.is_finite() {
                    return Err(Error::Model(format!("{what} has non-finite coefficient {c}")));
                }
            }
            Ok(())
        };
        for (i, c) in self.constraints.iter().enumerate() {
            let what = format!("constraint {}", i + 1);
            check_terms(&c.terms, &what)?;
            if !c.rhs.is_finite() {
                return Err(Error::Model(format!("{what} has non-finite rhs")));
            }
        }
        check_terms(&self.objective.terms, "objective")?;
        if !self.objective.constant.is_finite() {
            return Err(Error::Model("objective constant is not finite".into()));
        }
        Ok(LpModel {
            variables: self.variables,
            constraints: self.constraints,
            objective: self.objective,
        })
    }
}
