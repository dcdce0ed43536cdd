use itertools::Itertools;

use super::{Layout, Model, ModelState, Scalarset, Value};

/// Resolved permutation group of a model's scalarsets.
pub struct Symmetry<'a> {
    layout: &'a Layout,
    sets: &'a [Scalarset],
    perms: Vec<Vec<Vec<usize>>>,
}

impl<'a> Symmetry<'a> {
    pub fn new(model: &'a Model) -> Self {
        Self::over(&model.layout, &model.scalarsets)
    }

    pub fn over(layout: &'a Layout, sets: &'a [Scalarset]) -> Self {
        let perms = sets
            .iter()
            .map(|s| (0..s.size).permutations(s.size).collect())
            .collect();
        Symmetry {
            layout,
            sets,
            perms,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.iter().all(|p| p.len() <= 1)
    }

    /// Applies one permutation per scalarset, in declaration order.
    pub fn permute(&self, s: &ModelState, perm: &[&Vec<usize>]) -> ModelState {
        let mut cur = s.clone();
        for (set, pi) in self.sets.iter().zip(perm) {
            cur = self.permute_one(&cur, set, pi);
        }
        cur
    }

    fn permute_one(&self, s: &ModelState, set: &Scalarset, pi: &[usize]) -> ModelState {
        let mut mapped = s.clone();
        for &(v, base) in &set.value_vars {
            if let Some(slot) = self.layout.slot(v) {
                let x = s.0[slot];
                if x >= base && x < base + set.size as Value {
                    mapped.0[slot] = base + pi[(x - base) as usize] as Value;
                }
            }
        }
        let mut out = mapped.clone();
        for (e, owned) in set.index_vars.iter().enumerate() {
            let dest = &set.index_vars[pi[e]];
            for (src, dst) in owned.iter().zip(dest) {
                if let (Some(a), Some(b)) = (self.layout.slot(*src), self.layout.slot(*dst)) {
                    out.0[b] = mapped.0[a];
                }
            }
        }
        out
    }

    /// Every image of `s` under the group, identity first.
    pub fn orbit(&self, s: &ModelState) -> Vec<ModelState> {
        if self.perms.is_empty() {
            return vec![s.clone()];
        }
        self.perms
            .iter()
            .map(|p| p.iter())
            .multi_cartesian_product()
            .map(|combo| self.permute(s, &combo))
            .collect()
    }

    /// Lexicographically least member of the orbit of `s`.
    pub fn canonicalize(&self, s: &ModelState) -> ModelState {
        if self.is_trivial() {
            return s.clone();
        }
        self.orbit(s).into_iter().min().expect("orbit is never empty")
    }
}

pub fn canonicalize(s: &ModelState, model: &Model) -> ModelState {
    Symmetry::new(model).canonicalize(s)
}
