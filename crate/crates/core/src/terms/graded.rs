use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Expr, KnowledgeSet, Term, Universe};
use crate::fuzzy::{check_alpha, FuzzyError, Grade};

/// Graded attacker knowledge `μ_K`; absent terms have grade 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KnowledgeMap(BTreeMap<Term, Grade>);

impl KnowledgeMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, t: &Term) -> Grade {
        self.0.get(t).copied().unwrap_or(Grade::ZERO)
    }

    pub fn set(&mut self, t: Term, g: Grade) {
        if g == Grade::ZERO {
            self.0.remove(&t);
        } else {
            self.0.insert(t, g);
        }
    }

    /// Raises the grade of `t` to at least `g`.
    pub fn raise(&mut self, t: Term, g: Grade) {
        if g > self.get(&t) {
            self.set(t, g);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = &Term> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, Grade)> {
        self.0.iter().map(|(t, g)| (t, *g))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &KnowledgeMap) -> bool {
        self.iter().all(|(t, g)| g <= other.get(t))
    }
}

impl FromIterator<(Term, Grade)> for KnowledgeMap {
    fn from_iter<I: IntoIterator<Item = (Term, Grade)>>(iter: I) -> Self {
        let mut m = KnowledgeMap::new();
        for (t, g) in iter {
            m.raise(t, g);
        }
        m
    }
}

/// One instantiated graded inference: `conclusion ≥ min(premises)`.
struct Inference {
    premises: [usize; 2],
    arity: usize,
    conclusion: usize,
}

struct Table {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl Table {
    fn id(&mut self, t: &Term) -> usize {
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        self.terms.push(t.clone());
        self.index.insert(t.clone(), self.terms.len() - 1);
        self.terms.len() - 1
    }
}

/// Sup-min fixpoint of the graded deduction rules over `mu`'s support and
/// `universe`. Every term of the universe appears in the result (possibly
/// with grade 0 omitted).
pub fn graded_closure_in(mu: &KnowledgeMap, universe: &Universe) -> KnowledgeMap {
    let mut seeds: BTreeSet<Term> = universe.terms().clone();
    for t in mu.support() {
        t.collect_subterms(&mut seeds);
    }
    let mut table = Table {
        terms: Vec::new(),
        index: HashMap::new(),
    };
    for t in &seeds {
        table.id(t);
    }

    let mut rules = Vec::new();
    for t in &seeds {
        let c = table.id(t);
        match t {
            Term::Pair(a, b) => {
                let (a, b) = (table.id(a), table.id(b));
                rules.push(Inference { premises: [c, 0], arity: 1, conclusion: a });
                rules.push(Inference { premises: [c, 0], arity: 1, conclusion: b });
                if universe.contains(t) {
                    rules.push(Inference { premises: [a, b], arity: 2, conclusion: c });
                }
            }
            Term::SEnc(m, k) => {
                let (m, k) = (table.id(m), table.id(k));
                rules.push(Inference { premises: [c, k], arity: 2, conclusion: m });
                if universe.contains(t) {
                    rules.push(Inference { premises: [m, k], arity: 2, conclusion: c });
                }
            }
            Term::PEnc(m, k) => {
                let (mi, ki) = (table.id(m), table.id(k));
                if let Term::PubKey(a) = **k {
                    let sk = table.id(&Term::SecKey(a));
                    rules.push(Inference { premises: [c, sk], arity: 2, conclusion: mi });
                }
                if universe.contains(t) {
                    rules.push(Inference { premises: [mi, ki], arity: 2, conclusion: c });
                }
            }
            _ => {}
        }
    }

    let mut deg: Vec<Grade> = table.terms.iter().map(|t| mu.get(t)).collect();
    loop {
        let mut changed = false;
        for r in &rules {
            let v = r.premises[..r.arity]
                .iter()
                .map(|&p| deg[p])
                .min()
                .unwrap_or(Grade::ZERO);
            if v > deg[r.conclusion] {
                deg[r.conclusion] = v;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    table.terms.into_iter().zip(deg).collect()
}

/// Graded closure over the universe spanned by `mu`'s own support.
pub fn graded_closure(mu: &KnowledgeMap, bound: usize) -> KnowledgeMap {
    graded_closure_in(mu, &Universe::of(bound, mu.support()))
}

/// `μ ⊢ target = v`: the best min-grade over all bounded derivations.
pub fn graded_degree(mu: &KnowledgeMap, target: &Term, bound: usize) -> Grade {
    let universe = Universe::of(bound, mu.support().chain(std::iter::once(target)));
    graded_closure_in(mu, &universe).get(target)
}

/// Degree of an expression, taken on its normal form. Expressions that do
/// not normalize to a constructor term are not derivable messages.
pub fn graded_degree_expr(mu: &KnowledgeMap, target: &Expr, bound: usize) -> Grade {
    match target.normalize().to_term() {
        Some(t) => graded_degree(mu, &t, bound),
        None => Grade::ZERO,
    }
}

/// `π_α(μ) = {t : μ(t) ≥ α}`.
pub fn alpha_project(mu: &KnowledgeMap, alpha: f64) -> Result<KnowledgeSet, FuzzyError> {
    check_alpha(alpha)?;
    Ok(mu
        .iter()
        .filter(|(_, g)| g.value() >= alpha)
        .map(|(t, _)| t.clone())
        .collect())
}
