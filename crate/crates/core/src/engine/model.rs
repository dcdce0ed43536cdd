use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::{Layout, ModelState, Value, VarId, View};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("model `{0}` declares no invariant")]
    NoInvariant(String),
    #[error("duplicate rule name `{0}`")]
    DuplicateRule(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVar(String),
    #[error("initial value {value} of `{var}` is outside its domain")]
    BadInitial { var: String, value: Value },
    #[error("rule `{rule}` assigned {value} to `{var}`, outside its domain")]
    DomainViolation {
        rule: String,
        var: String,
        value: Value,
    },
    #[error("scalarset `{0}` is malformed: {1}")]
    BadScalarset(String, String),
    #[error("parent link missing for state {0}")]
    MissingParent(usize),
    #[error("trace replay diverged at step {0}")]
    ReplayMismatch(usize),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

/// Finite value domain of a state variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Domain {
    Bool,
    Enum(Vec<String>),
    Range { lo: Value, hi: Value },
    /// Decimal fixed-point: the stored integer is the value times `10^places`.
    Fixed { lo: Value, hi: Value, places: u32 },
}

impl Domain {
    pub fn labels(labels: &[&str]) -> Domain {
        Domain::Enum(labels.iter().map(|s| s.to_string()).collect())
    }

    pub fn contains(&self, v: Value) -> bool {
        match self {
            Domain::Bool => v == 0 || v == 1,
            Domain::Enum(ls) => v >= 0 && (v as usize) < ls.len(),
            Domain::Range { lo, hi } | Domain::Fixed { lo, hi, .. } => *lo <= v && v <= *hi,
        }
    }

    pub fn render(&self, v: Value) -> serde_json::Value {
        match self {
            Domain::Bool => serde_json::Value::Bool(v != 0),
            Domain::Enum(ls) => ls
                .get(v as usize)
                .map(|s| serde_json::Value::String(s.clone()))
                .unwrap_or(serde_json::Value::from(v)),
            Domain::Range { .. } => serde_json::Value::from(v),
            Domain::Fixed { places, .. } => {
                serde_json::Value::from(v as f64 / 10f64.powi(*places as i32))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarDecl {
    pub name: String,
    pub domain: Domain,
    pub init: Value,
}

pub type Pred = Arc<dyn Fn(&View) -> bool + Send + Sync>;
pub type ValueFn = Arc<dyn Fn(&View) -> Value + Send + Sync>;

#[derive(Clone)]
pub struct Guard {
    pub reads: Vec<VarId>,
    pub pred: Pred,
}

/// `target := expr(pre-state)`; all assignments of a rule read the same
/// pre-state.
#[derive(Clone)]
pub struct Assign {
    pub target: VarId,
    pub reads: Vec<VarId>,
    pub expr: ValueFn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Honest,
    Intruder,
    Leak,
}

#[derive(Clone)]
pub struct Rule {
    /// Unique instance name.
    pub name: String,
    /// Human label shown in traces; several instances may share one.
    pub label: String,
    /// Rule family, the object name in the dependency context.
    pub group: String,
    pub kind: RuleKind,
    pub guard: Guard,
    pub assigns: Vec<Assign>,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule")
            .field("name", &self.name)
            .field("group", &self.group)
            .field("kind", &self.kind)
            .finish()
    }
}

impl Rule {
    pub fn new(name: impl Into<String>, kind: RuleKind) -> Self {
        let name = name.into();
        Rule {
            label: name.clone(),
            group: name.clone(),
            name,
            kind,
            guard: Guard {
                reads: Vec::new(),
                pred: Arc::new(|_| true),
            },
            assigns: Vec::new(),
        }
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn group(mut self, group: impl Into<String>) -> Self {
        self.group = group.into();
        self
    }

    pub fn when(
        mut self,
        reads: &[VarId],
        pred: impl Fn(&View) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.guard = Guard {
            reads: reads.to_vec(),
            pred: Arc::new(pred),
        };
        self
    }

    pub fn set(
        mut self,
        target: VarId,
        reads: &[VarId],
        expr: impl Fn(&View) -> Value + Send + Sync + 'static,
    ) -> Self {
        self.assigns.push(Assign {
            target,
            reads: reads.to_vec(),
            expr: Arc::new(expr),
        });
        self
    }

    pub fn set_const(self, target: VarId, value: Value) -> Self {
        self.set(target, &[], move |_| value)
    }

    pub fn enabled(&self, s: &ModelState, layout: &Layout) -> bool {
        (self.guard.pred)(&View::new(s, layout, &self.guard.reads))
    }

    /// Post-state of firing from `s`; the guard is not re-checked.
    pub fn fire(&self, s: &ModelState, layout: &Layout) -> ModelState {
        let mut next = s.clone();
        for a in &self.assigns {
            if let Some(slot) = layout.slot(a.target) {
                next.0[slot] = (a.expr)(&View::new(s, layout, &a.reads));
            }
        }
        next
    }

    pub fn reads(&self) -> BTreeSet<VarId> {
        self.guard
            .reads
            .iter()
            .chain(self.assigns.iter().flat_map(|a| a.reads.iter()))
            .copied()
            .collect()
    }

    pub fn writes(&self) -> BTreeSet<VarId> {
        self.assigns.iter().map(|a| a.target).collect()
    }
}

#[derive(Clone)]
pub struct Invariant {
    pub name: String,
    pub reads: Vec<VarId>,
    pub pred: Pred,
}

impl Invariant {
    pub fn holds(&self, s: &ModelState, layout: &Layout) -> bool {
        (self.pred)(&View::new(s, layout, &self.reads))
    }
}

impl fmt::Debug for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Invariant").field("name", &self.name).finish()
    }
}

/// Interchangeable identifiers `0..size`.
///
/// `value_vars` hold an element as `base + id` (other values are left
/// alone); `index_vars[e]` are the variables owned by element `e`, which move
/// together when elements are permuted.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalarset {
    pub name: String,
    pub size: usize,
    pub value_vars: Vec<(VarId, Value)>,
    pub index_vars: Vec<Vec<VarId>>,
}

#[derive(Clone)]
pub struct Model {
    pub name: String,
    pub vars: Vec<VarDecl>,
    pub layout: Layout,
    pub initial: Vec<ModelState>,
    pub rules: Vec<Rule>,
    pub invariants: Vec<Invariant>,
    pub scalarsets: Vec<Scalarset>,
    pub observables: Vec<(String, VarId)>,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("name", &self.name)
            .field("vars", &self.vars.len())
            .field("rules", &self.rules.len())
            .field("invariants", &self.invariants)
            .finish()
    }
}

impl Model {
    pub fn var(&self, name: &str) -> Option<VarId> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .map(|i| VarId(i as u16))
    }

    pub fn live_vars(&self) -> Vec<VarId> {
        (0..self.vars.len() as u16)
            .map(VarId)
            .filter(|v| self.layout.is_live(*v))
            .collect()
    }

    pub fn rule(&self, name: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.name == name)
    }

    /// Value of `v` in `s`, if `v` is live.
    pub fn read(&self, s: &ModelState, v: VarId) -> Option<Value> {
        self.layout.slot(v).map(|i| s.0[i])
    }

    pub fn read_named(&self, s: &ModelState, name: &str) -> Option<Value> {
        self.read(s, self.var(name)?)
    }

    /// Names of violated invariants, in declaration order.
    pub fn check_invariants(&self, s: &ModelState) -> Vec<String> {
        check_invariants(s, &self.layout, &self.invariants)
    }

    pub(crate) fn first_violation(&self, s: &ModelState) -> Option<usize> {
        self.invariants.iter().position(|i| !i.holds(s, &self.layout))
    }

    pub(crate) fn check_domains(&self, rule: &Rule, s: &ModelState) -> Result<(), EngineError> {
        for a in &rule.assigns {
            if let Some(slot) = self.layout.slot(a.target) {
                let decl = &self.vars[a.target.index()];
                let value = s.0[slot];
                if !decl.domain.contains(value) {
                    return Err(EngineError::DomainViolation {
                        rule: rule.name.clone(),
                        var: decl.name.clone(),
                        value,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn observe(&self, s: &ModelState) -> std::collections::BTreeMap<String, serde_json::Value> {
        self.observables
            .iter()
            .filter_map(|(name, v)| {
                let value = self.read(s, *v)?;
                Some((name.clone(), self.vars[v.index()].domain.render(value)))
            })
            .collect()
    }
}

pub fn check_invariants(s: &ModelState, layout: &Layout, invariants: &[Invariant]) -> Vec<String> {
    invariants
        .iter()
        .filter(|i| !i.holds(s, layout))
        .map(|i| i.name.clone())
        .collect()
}

pub struct ModelBuilder {
    name: String,
    vars: Vec<VarDecl>,
    rules: Vec<Rule>,
    invariants: Vec<Invariant>,
    scalarsets: Vec<Scalarset>,
    observables: Vec<(String, VarId)>,
    initial: Vec<Vec<Value>>,
}

impl ModelBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        ModelBuilder {
            name: name.into(),
            vars: Vec::new(),
            rules: Vec::new(),
            invariants: Vec::new(),
            scalarsets: Vec::new(),
            observables: Vec::new(),
            initial: Vec::new(),
        }
    }

    pub fn var(&mut self, name: impl Into<String>, domain: Domain, init: Value) -> VarId {
        self.vars.push(VarDecl {
            name: name.into(),
            domain,
            init,
        });
        VarId(self.vars.len() as u16 - 1)
    }

    pub fn rule(&mut self, rule: Rule) -> &mut Self {
        self.rules.push(rule);
        self
    }

    pub fn invariant(
        &mut self,
        name: impl Into<String>,
        reads: &[VarId],
        pred: impl Fn(&View) -> bool + Send + Sync + 'static,
    ) -> &mut Self {
        self.invariants.push(Invariant {
            name: name.into(),
            reads: reads.to_vec(),
            pred: Arc::new(pred),
        });
        self
    }

    pub fn scalarset(&mut self, s: Scalarset) -> &mut Self {
        self.scalarsets.push(s);
        self
    }

    pub fn observable(&mut self, name: impl Into<String>, v: VarId) -> &mut Self {
        self.observables.push((name.into(), v));
        self
    }

    /// Adds an explicit initial state; without any, the declared initial
    /// values form the single initial state.
    pub fn initial(&mut self, values: Vec<Value>) -> &mut Self {
        self.initial.push(values);
        self
    }

    pub fn build(self) -> Result<Model, EngineError> {
        if self.invariants.is_empty() {
            return Err(EngineError::NoInvariant(self.name));
        }
        let mut seen = BTreeSet::new();
        for v in &self.vars {
            if !seen.insert(v.name.as_str()) {
                return Err(EngineError::DuplicateVar(v.name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for r in &self.rules {
            if !seen.insert(r.name.as_str()) {
                return Err(EngineError::DuplicateRule(r.name.clone()));
            }
        }
        for s in &self.scalarsets {
            if s.index_vars.len() != s.size && !s.index_vars.is_empty() {
                return Err(EngineError::BadScalarset(
                    s.name.clone(),
                    "index_vars must have one entry per element".into(),
                ));
            }
            let widths: BTreeSet<usize> = s.index_vars.iter().map(|v| v.len()).collect();
            if widths.len() > 1 {
                return Err(EngineError::BadScalarset(
                    s.name.clone(),
                    "elements own different numbers of variables".into(),
                ));
            }
        }
        let mut initial = self.initial;
        if initial.is_empty() {
            initial.push(self.vars.iter().map(|v| v.init).collect());
        }
        for values in &initial {
            for (decl, &value) in self.vars.iter().zip(values) {
                if !decl.domain.contains(value) {
                    return Err(EngineError::BadInitial {
                        var: decl.name.clone(),
                        value,
                    });
                }
            }
        }
        Ok(Model {
            name: self.name,
            layout: Layout::identity(self.vars.len()),
            vars: self.vars,
            initial: initial.into_iter().map(ModelState::from_values).collect(),
            rules: self.rules,
            invariants: self.invariants,
            scalarsets: self.scalarsets,
            observables: self.observables,
        })
    }
}
