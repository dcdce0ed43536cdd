use std::collections::BTreeMap;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use super::{EngineError, Model, ModelState, Parent, Symmetry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    /// Trace label of the fired rule.
    pub rule: String,
    /// Unique rule instance name, used for replay.
    pub instance: String,
    pub digest: String,
    pub observables: BTreeMap<String, serde_json::Value>,
}

/// Counterexample path from an initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    /// Whether digests refer to symmetry-canonical states.
    pub canonical: bool,
    pub initial: String,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.rule.as_str()).collect()
    }
}

/// Walks parent links back from `target` to a root and returns the path in
/// firing order.
pub fn reconstruct_trace(
    model: &Model,
    visited: &IndexSet<ModelState>,
    parents: &[Option<Parent>],
    target: usize,
    canonical: bool,
) -> Result<Trace, EngineError> {
    let mut chain = Vec::new();
    let mut cur = target;
    loop {
        match parents.get(cur) {
            None => return Err(EngineError::MissingParent(cur)),
            Some(None) => break,
            Some(Some(p)) => {
                chain.push((p.rule as usize, cur));
                cur = p.state as usize;
                if chain.len() > parents.len() {
                    return Err(EngineError::MissingParent(cur));
                }
            }
        }
    }
    chain.reverse();
    let root = visited.get_index(cur).ok_or(EngineError::MissingParent(cur))?;
    let mut steps = Vec::with_capacity(chain.len());
    for (i, (rule, idx)) in chain.into_iter().enumerate() {
        let s = visited.get_index(idx).ok_or(EngineError::MissingParent(idx))?;
        let r = model.rules.get(rule).ok_or(EngineError::MissingParent(idx))?;
        steps.push(TraceStep {
            step: i + 1,
            rule: r.label.clone(),
            instance: r.name.clone(),
            digest: s.digest(),
            observables: model.observe(s),
        });
    }
    Ok(Trace {
        canonical,
        initial: root.digest(),
        steps,
    })
}

/// Re-executes a trace and checks every recorded digest. Returns the final
/// state.
pub fn replay(model: &Model, trace: &Trace) -> Result<ModelState, EngineError> {
    let sym = Symmetry::new(model);
    let canon = |s: ModelState| {
        if trace.canonical {
            sym.canonicalize(&s)
        } else {
            s
        }
    };
    let mut cur = model
        .initial
        .iter()
        .map(|s| canon(s.clone()))
        .find(|s| s.digest() == trace.initial)
        .ok_or(EngineError::ReplayMismatch(0))?;
    for step in &trace.steps {
        let idx = model
            .rule(&step.instance)
            .ok_or_else(|| EngineError::UnknownRule(step.instance.clone()))?;
        let rule = &model.rules[idx];
        if !rule.enabled(&cur, &model.layout) {
            return Err(EngineError::ReplayMismatch(step.step));
        }
        cur = canon(rule.fire(&cur, &model.layout));
        if cur.digest() != step.digest {
            return Err(EngineError::ReplayMismatch(step.step));
        }
    }
    Ok(cur)
}
