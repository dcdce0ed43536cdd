use std::collections::BTreeSet;

use super::{enumerate_e_reducts, extract_context, is_e_consistent, ReductError};
use crate::engine::{Layout, Model, ModelState, VarId};

fn var_name(m: &Model, v: VarId) -> String {
    m.vars[v.index()].name.clone()
}

/// Variables that can influence a guard or an invariant: the smallest set
/// containing everything guards and invariants read and closed under the
/// reads of assignments to its members.
pub fn live_closure(m: &Model) -> BTreeSet<VarId> {
    let mut live: BTreeSet<VarId> = m
        .rules
        .iter()
        .flat_map(|r| r.guard.reads.iter().copied())
        .chain(m.invariants.iter().flat_map(|i| i.reads.iter().copied()))
        .filter(|v| m.layout.is_live(*v))
        .collect();
    close_under_assign_reads(m, &mut live);
    live
}

fn close_under_assign_reads(m: &Model, keep: &mut BTreeSet<VarId>) {
    loop {
        let before = keep.len();
        for a in m.rules.iter().flat_map(|r| &r.assigns) {
            if keep.contains(&a.target) {
                keep.extend(a.reads.iter().copied().filter(|v| m.layout.is_live(*v)));
            }
        }
        if keep.len() == before {
            return;
        }
    }
}

/// Attributes to keep when pruning `m`: a reduct of its dependency context
/// joined with the live closure and closed under assignment reads, choosing the reduct that leaves the
/// smallest state vector (first such reduct on ties).
pub fn select_keep(m: &Model) -> Result<Vec<VarId>, ReductError> {
    let ctx = extract_context(m);
    let report = enumerate_e_reducts(&ctx)?;
    let attrs = m.live_vars();
    let live = live_closure(m);
    report
        .reduct_indices
        .iter()
        .map(|r| {
            let mut keep: BTreeSet<VarId> = r.iter().map(|&a| attrs[a]).collect();
            keep.extend(&live);
            close_under_assign_reads(m, &mut keep);
            keep.into_iter().collect::<Vec<_>>()
        })
        .min_by_key(|k| k.len())
        .ok_or_else(|| ReductError::NoKeep(m.name.clone()))
}

/// Projects `m` onto `keep`.
///
/// Rejects pruning of invariant attributes, inconsistent keep sets, and any
/// guard or kept assignment that would still read a pruned variable.
/// Assignments to pruned variables are dropped.
pub fn prune_model(m: &Model, keep: &[VarId]) -> Result<Model, ReductError> {
    let keep: BTreeSet<VarId> = keep.iter().copied().collect();
    for &v in &keep {
        if !m.layout.is_live(v) {
            return Err(ReductError::UnknownAttribute(format!("#{}", v.0)));
        }
    }
    for inv in &m.invariants {
        if let Some(&v) = inv.reads.iter().find(|v| !keep.contains(v)) {
            return Err(ReductError::InvariantAttribute(var_name(m, v)));
        }
    }
    let attrs = m.live_vars();
    let idx: Vec<usize> = (0..attrs.len()).filter(|&a| keep.contains(&attrs[a])).collect();
    if !is_e_consistent(&extract_context(m).binarize(), &idx) {
        return Err(ReductError::Inconsistent);
    }
    for r in &m.rules {
        let reads_pruned = |reads: &[VarId]| reads.iter().find(|v| !keep.contains(v)).copied();
        let bad = reads_pruned(&r.guard.reads).or_else(|| {
            r.assigns
                .iter()
                .filter(|a| keep.contains(&a.target))
                .find_map(|a| reads_pruned(&a.reads))
        });
        if let Some(v) = bad {
            return Err(ReductError::ReadsPruned {
                reader: r.name.clone(),
                var: var_name(m, v),
            });
        }
    }

    let mut next = 0u16;
    let slots = (0..m.vars.len() as u16)
        .map(|i| {
            keep.contains(&VarId(i)).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    let layout = Layout::from_slots(slots);
    let mut initial: Vec<ModelState> = Vec::new();
    for s in &m.initial {
        let p = ModelState::from_values(
            keep.iter()
                .map(|&v| m.read(s, v).expect("kept variables are live"))
                .collect(),
        );
        if !initial.contains(&p) {
            initial.push(p);
        }
    }
    let mut rules = m.rules.clone();
    for r in &mut rules {
        r.assigns.retain(|a| keep.contains(&a.target));
    }
    Ok(Model {
        name: m.name.clone(),
        vars: m.vars.clone(),
        layout,
        initial,
        rules,
        invariants: m.invariants.clone(),
        scalarsets: m.scalarsets.clone(),
        observables: m
            .observables
            .iter()
            .filter(|(_, v)| keep.contains(v))
            .cloned()
            .collect(),
    })
}
