use std::ops::Index;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Every state variable holds a small integer; domains give it meaning.
pub type Value = i32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VarId(pub u16);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Fixed-width state vector over the live (unpruned) variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelState(pub(crate) Box<[Value]>);

impl ModelState {
    pub fn from_values(values: Vec<Value>) -> Self {
        ModelState(values.into_boxed_slice())
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    /// Truncated SHA-256 over the little-endian cells, hex encoded.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for v in self.0.iter() {
            h.update(v.to_le_bytes());
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Where each declared variable lives in the state vector. Pruned variables
/// have no slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    slots: Vec<Option<u16>>,
}

impl Layout {
    pub fn identity(n: usize) -> Self {
        Layout {
            slots: (0..n as u16).map(Some).collect(),
        }
    }

    pub fn from_slots(slots: Vec<Option<u16>>) -> Self {
        Layout { slots }
    }

    pub fn slot(&self, v: VarId) -> Option<usize> {
        self.slots.get(v.index()).copied().flatten().map(|s| s as usize)
    }

    pub fn is_live(&self, v: VarId) -> bool {
        self.slot(v).is_some()
    }

    pub fn width(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn declared(&self) -> usize {
        self.slots.len()
    }
}

/// Read-only access to a state by variable id.
///
/// Debug builds assert that guards and expressions only read the variables
/// they declared, which is what makes dependency extraction trustworthy.
pub struct View<'a> {
    state: &'a ModelState,
    layout: &'a Layout,
    #[cfg_attr(not(debug_assertions), allow(dead_code))]
    reads: &'a [VarId],
}

impl<'a> View<'a> {
    pub fn new(state: &'a ModelState, layout: &'a Layout, reads: &'a [VarId]) -> Self {
        View {
            state,
            layout,
            reads,
        }
    }

    pub fn get(&self, v: VarId) -> Value {
        self[v]
    }

    pub fn flag(&self, v: VarId) -> bool {
        self[v] != 0
    }
}

impl Index<VarId> for View<'_> {
    type Output = Value;

    fn index(&self, v: VarId) -> &Value {
        debug_assert!(self.reads.contains(&v), "undeclared read of variable {}", v.0);
        let slot = self
            .layout
            .slot(v)
            .unwrap_or_else(|| panic!("variable {} was pruned but is still read", v.0));
        &self.state.0[slot]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_distinguishes() {
        let a = ModelState::from_values(vec![1, 2, 3]);
        let b = ModelState::from_values(vec![1, 2, 4]);
        assert_eq!(a.digest(), a.clone().digest());
        assert_eq!(a.digest().len(), 16);
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn view_follows_layout() {
        let layout = Layout::from_slots(vec![Some(1), None, Some(0)]);
        let s = ModelState::from_values(vec![10, 20]);
        let reads = [VarId(0), VarId(2)];
        let v = View::new(&s, &layout, &reads);
        assert_eq!(v[VarId(0)], 20);
        assert_eq!(v[VarId(2)], 10);
        assert_eq!(layout.width(), 2);
        assert!(!layout.is_live(VarId(1)));
    }

    #[test]
    #[should_panic(expected = "pruned")]
    fn reading_pruned_variable_panics() {
        let layout = Layout::from_slots(vec![Some(0), None]);
        let s = ModelState::from_values(vec![1]);
        let reads = [VarId(1)];
        let _ = View::new(&s, &layout, &reads)[VarId(1)];
    }
}
