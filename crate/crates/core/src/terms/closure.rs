use std::collections::BTreeSet;

use super::Term;

/// Default constructor-depth bound for deduction.
pub const DEFAULT_DEPTH: usize = 3;

/// Crisp attacker knowledge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KnowledgeSet(BTreeSet<Term>);

impl KnowledgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: Term) -> bool {
        self.0.insert(t)
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.0.contains(t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &KnowledgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn as_set(&self) -> &BTreeSet<Term> {
        &self.0
    }
}

impl FromIterator<Term> for KnowledgeSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        KnowledgeSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a KnowledgeSet {
    type Item = &'a Term;
    type IntoIter = std::collections::btree_set::Iter<'a, Term>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Finite, subterm-closed set of candidate terms that composition may
/// produce. Terms deeper than the bound are never composed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    bound: usize,
    terms: BTreeSet<Term>,
}

impl Universe {
    pub fn new(bound: usize) -> Self {
        Universe {
            bound,
            terms: BTreeSet::new(),
        }
    }

    pub fn of<'a>(bound: usize, seeds: impl IntoIterator<Item = &'a Term>) -> Self {
        let mut u = Universe::new(bound);
        for t in seeds {
            u.add(t);
        }
        u
    }

    /// Adds every subterm of `t` that fits under the depth bound.
    pub fn add(&mut self, t: &Term) {
        let mut subs = BTreeSet::new();
        t.collect_subterms(&mut subs);
        self.terms.extend(subs.into_iter().filter(|s| s.depth() <= self.bound));
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn terms(&self) -> &BTreeSet<Term> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }
}

/// Least set containing `s` closed under pairing, projection, symmetric and
/// public-key encryption/decryption, with composition limited to `universe`.
pub fn crisp_closure_in(s: &KnowledgeSet, universe: &Universe) -> KnowledgeSet {
    let mut known: BTreeSet<Term> = s.0.clone();
    loop {
        let mut fresh = Vec::new();
        for t in &known {
            match t {
                Term::Pair(a, b) => {
                    fresh.push((**a).clone());
                    fresh.push((**b).clone());
                }
                Term::SEnc(m, k) if known.contains(k) => fresh.push((**m).clone()),
                Term::PEnc(m, k) => {
                    if let Term::PubKey(a) = **k {
                        if known.contains(&Term::SecKey(a)) {
                            fresh.push((**m).clone());
                        }
                    }
                }
                _ => {}
            }
        }
        for u in universe.terms() {
            if known.contains(u) {
                continue;
            }
            let composable = match u {
                Term::Pair(a, b) | Term::SEnc(a, b) | Term::PEnc(a, b) => {
                    known.contains(a) && known.contains(b)
                }
                _ => false,
            };
            if composable {
                fresh.push(u.clone());
            }
        }
        let before = known.len();
        known.extend(fresh);
        if known.len() == before {
            return KnowledgeSet(known);
        }
    }
}

/// Closure of `s` over the universe spanned by its own subterms.
pub fn crisp_closure(s: &KnowledgeSet, bound: usize) -> KnowledgeSet {
    crisp_closure_in(s, &Universe::of(bound, s.iter()))
}

/// `s ⊢ target`.
pub fn derivable(s: &KnowledgeSet, target: &Term, bound: usize) -> bool {
    let universe = Universe::of(bound, s.iter().chain(std::iter::once(target)));
    crisp_closure_in(s, &universe).contains(target)
}
