use std::fmt;

use super::Term;

/// Term expression that may also contain destructor applications.
///
/// Stored knowledge only ever holds [`Term`]s; expressions exist so that the
/// cancellation equations can be applied and checked.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Atom(Term),
    Pair(Box<Expr>, Box<Expr>),
    SEnc(Box<Expr>, Box<Expr>),
    PEnc(Box<Expr>, Box<Expr>),
    Sign(Box<Expr>, Box<Expr>),
    SDec(Box<Expr>, Box<Expr>),
    PDec(Box<Expr>, Box<Expr>),
    Verify(Box<Expr>, Box<Expr>),
    True,
}

type Ctor = fn(Box<Expr>, Box<Expr>) -> Expr;

impl Expr {
    pub fn sdec(c: Expr, k: Expr) -> Expr {
        Expr::SDec(Box::new(c), Box::new(k))
    }

    pub fn pdec(c: Expr, k: Expr) -> Expr {
        Expr::PDec(Box::new(c), Box::new(k))
    }

    pub fn verify(s: Expr, k: Expr) -> Expr {
        Expr::Verify(Box::new(s), Box::new(k))
    }

    pub fn pair(a: Expr, b: Expr) -> Expr {
        Expr::Pair(Box::new(a), Box::new(b))
    }

    pub fn senc(m: Expr, k: Expr) -> Expr {
        Expr::SEnc(Box::new(m), Box::new(k))
    }

    pub fn penc(m: Expr, k: Expr) -> Expr {
        Expr::PEnc(Box::new(m), Box::new(k))
    }

    pub fn sign(m: Expr, k: Expr) -> Expr {
        Expr::Sign(Box::new(m), Box::new(k))
    }

    fn split(&self) -> Option<(&Expr, &Expr, Ctor)> {
        match self {
            Expr::Pair(a, b) => Some((a, b, Expr::Pair)),
            Expr::SEnc(a, b) => Some((a, b, Expr::SEnc)),
            Expr::PEnc(a, b) => Some((a, b, Expr::PEnc)),
            Expr::Sign(a, b) => Some((a, b, Expr::Sign)),
            Expr::SDec(a, b) => Some((a, b, Expr::SDec)),
            Expr::PDec(a, b) => Some((a, b, Expr::PDec)),
            Expr::Verify(a, b) => Some((a, b, Expr::Verify)),
            Expr::Atom(_) | Expr::True => None,
        }
    }

    /// Result of contracting this node if it is a cancellation redex.
    fn contract(&self) -> Option<Expr> {
        match self {
            Expr::SDec(c, k) => match &**c {
                Expr::SEnc(m, k2) if k2 == k => Some((**m).clone()),
                _ => None,
            },
            Expr::PDec(c, k) => match (&**c, &**k) {
                (Expr::PEnc(m, pk), Expr::Atom(Term::SecKey(b))) => match &**pk {
                    Expr::Atom(Term::PubKey(a)) if a == b => Some((**m).clone()),
                    _ => None,
                },
                _ => None,
            },
            Expr::Verify(s, k) => match (&**s, &**k) {
                (Expr::Sign(_, sk), Expr::Atom(Term::PubKey(b))) => match &**sk {
                    Expr::Atom(Term::SecKey(a)) if a == b => Some(Expr::True),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Positions (child-index paths) of every redex, in pre-order.
    pub fn redexes(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.collect_redexes(&mut Vec::new(), &mut out);
        out
    }

    fn collect_redexes(&self, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if self.contract().is_some() {
            out.push(path.clone());
        }
        if let Some((a, b, _)) = self.split() {
            path.push(0);
            a.collect_redexes(path, out);
            path.pop();
            path.push(1);
            b.collect_redexes(path, out);
            path.pop();
        }
    }

    /// One rewrite step at `path`; `None` if there is no redex there.
    pub fn step_at(&self, path: &[u8]) -> Option<Expr> {
        match path.split_first() {
            None => self.contract(),
            Some((&i, rest)) => {
                let (a, b, ctor) = self.split()?;
                if i == 0 {
                    Some(ctor(Box::new(a.step_at(rest)?), Box::new(b.clone())))
                } else {
                    Some(ctor(Box::new(a.clone()), Box::new(b.step_at(rest)?)))
                }
            }
        }
    }

    /// Innermost normalization. Destructors whose keys do not match stay in
    /// place (stuck).
    pub fn normalize(&self) -> Expr {
        let e = match self.split() {
            None => return self.clone(),
            Some((a, b, ctor)) => ctor(Box::new(a.normalize()), Box::new(b.normalize())),
        };
        match e.contract() {
            Some(r) => r.normalize(),
            None => e,
        }
    }

    pub fn is_normal(&self) -> bool {
        self.redexes().is_empty()
    }

    /// The constructor term, if this expression has no destructors left.
    pub fn to_term(&self) -> Option<Term> {
        Some(match self {
            Expr::Atom(t) => t.clone(),
            Expr::Pair(a, b) => Term::pair(a.to_term()?, b.to_term()?),
            Expr::SEnc(a, b) => Term::senc(a.to_term()?, b.to_term()?),
            Expr::PEnc(a, b) => Term::penc(a.to_term()?, b.to_term()?),
            Expr::Sign(a, b) => Term::sign(a.to_term()?, b.to_term()?),
            _ => return None,
        })
    }
}

impl From<&Term> for Expr {
    fn from(t: &Term) -> Expr {
        match t {
            Term::Pair(a, b) => Expr::pair(a.as_ref().into(), b.as_ref().into()),
            Term::SEnc(a, b) => Expr::senc(a.as_ref().into(), b.as_ref().into()),
            Term::PEnc(a, b) => Expr::penc(a.as_ref().into(), b.as_ref().into()),
            Term::Sign(a, b) => Expr::sign(a.as_ref().into(), b.as_ref().into()),
            atom => Expr::Atom(atom.clone()),
        }
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Expr {
        Expr::from(&t)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(t) => write!(f, "{t}"),
            Expr::True => write!(f, "true"),
            Expr::Pair(a, b) => write!(f, "pair({a},{b})"),
            Expr::SEnc(a, b) => write!(f, "senc({a}, {b})"),
            Expr::PEnc(a, b) => write!(f, "penc({a}, {b})"),
            Expr::Sign(a, b) => write!(f, "sign({a}, {b})"),
            Expr::SDec(a, b) => write!(f, "sdec({a}, {b})"),
            Expr::PDec(a, b) => write!(f, "pdec({a}, {b})"),
            Expr::Verify(a, b) => write!(f, "verify({a}, {b})"),
        }
    }
}

/// Normal form of `e`.
pub fn normalize(e: &Expr) -> Expr {
    e.normalize()
}
