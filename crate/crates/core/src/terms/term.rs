use std::collections::BTreeSet;
use std::fmt;

/// Ground message term. Only constructor terms are represented; destructor
/// applications live in [`Expr`](super::Expr).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Agent(char),
    Nonce { owner: char, index: u8 },
    SymKey(u8),
    PubKey(char),
    SecKey(char),
    Pair(Box<Term>, Box<Term>),
    SEnc(Box<Term>, Box<Term>),
    PEnc(Box<Term>, Box<Term>),
    Sign(Box<Term>, Box<Term>),
}

impl Term {
    pub fn agent(a: char) -> Term {
        Term::Agent(a)
    }

    pub fn nonce(owner: char, index: u8) -> Term {
        Term::Nonce { owner, index }
    }

    pub fn key(id: u8) -> Term {
        Term::SymKey(id)
    }

    pub fn pk(a: char) -> Term {
        Term::PubKey(a)
    }

    pub fn sk(a: char) -> Term {
        Term::SecKey(a)
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn senc(m: Term, k: Term) -> Term {
        Term::SEnc(Box::new(m), Box::new(k))
    }

    pub fn penc(m: Term, pk: Term) -> Term {
        Term::PEnc(Box::new(m), Box::new(pk))
    }

    pub fn sign(m: Term, sk: Term) -> Term {
        Term::Sign(Box::new(m), Box::new(sk))
    }

    pub fn is_atom(&self) -> bool {
        self.children().is_none()
    }

    pub fn children(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Pair(a, b) | Term::SEnc(a, b) | Term::PEnc(a, b) | Term::Sign(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Constructor depth: atoms are 0.
    pub fn depth(&self) -> usize {
        match self.children() {
            None => 0,
            Some((a, b)) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self.children() {
            None => 1,
            Some((a, b)) => 1 + a.size() + b.size(),
        }
    }

    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.collect_subterms(&mut out);
        out
    }

    pub(crate) fn collect_subterms(&self, out: &mut BTreeSet<Term>) {
        if out.contains(self) {
            return;
        }
        if let Some((a, b)) = self.children() {
            a.collect_subterms(out);
            b.collect_subterms(out);
        }
        out.insert(self.clone());
    }

    /// Keys are admissible in key position of the matching constructor.
    pub fn is_key(&self) -> bool {
        matches!(self, Term::SymKey(_) | Term::PubKey(_) | Term::SecKey(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Agent(a) => write!(f, "agent({a})"),
            Term::Nonce { owner, index } => write!(f, "nonce({owner},{index})"),
            Term::SymKey(k) => write!(f, "k({k})"),
            Term::PubKey(a) => write!(f, "pk({a})"),
            Term::SecKey(a) => write!(f, "sk({a})"),
            Term::Pair(a, b) => write!(f, "pair({a},{b})"),
            Term::SEnc(m, k) => write!(f, "senc({m}, {k})"),
            Term::PEnc(m, k) => write!(f, "penc({m}, {k})"),
            Term::Sign(m, k) => write!(f, "sign({m}, {k})"),
        }
    }
}
