//! Term-level reading of NSL states: what the intruder's concretized store
//! means as a Dolev–Yao knowledge set.

use super::nsl::{AGENT_A, AGENT_B, AGENT_I, M1, M2, M3, NONCE_A, NONCE_B};
use super::{LeakModel, MessageRecord};
use crate::engine::{Model, ModelState};
use crate::fuzzy::Grade;
use crate::terms::{KnowledgeMap, Term};

fn agent(id: u8) -> Option<Term> {
    match id {
        AGENT_A => Some(Term::agent('A')),
        AGENT_B => Some(Term::agent('B')),
        AGENT_I => Some(Term::agent('I')),
        _ => None,
    }
}

fn pk(id: u8) -> Option<Term> {
    match id {
        AGENT_A => Some(Term::pk('A')),
        AGENT_B => Some(Term::pk('B')),
        AGENT_I => Some(Term::pk('I')),
        _ => None,
    }
}

pub fn nonce(id: u8) -> Option<Term> {
    match id {
        NONCE_A => Some(Term::nonce('A', 1)),
        NONCE_B => Some(Term::nonce('B', 1)),
        _ => None,
    }
}

/// `{n, src}pk`, `{n1, n2, src}pk` or `{n}pk`, by message type.
pub fn message_term(m: &MessageRecord) -> Option<Term> {
    let key = pk(m.key)?;
    let body = match m.mtype {
        M1 => Term::pair(nonce(m.nonce1)?, agent(m.source)?),
        M2 => Term::pair(nonce(m.nonce1)?, Term::pair(nonce(m.nonce2)?, agent(m.source)?)),
        M3 => nonce(m.nonce1)?,
        _ => return None,
    };
    Some(Term::penc(body, key))
}

/// Initial intruder knowledge: every identity, every public key and its own
/// private key.
pub fn base_knowledge() -> Vec<Term> {
    vec![
        Term::agent('A'),
        Term::agent('B'),
        Term::agent('I'),
        Term::pk('A'),
        Term::pk('B'),
        Term::pk('I'),
        Term::sk('I'),
    ]
}

/// Graded intruder knowledge in state `s` of an NSL model: base knowledge,
/// every stored or in-flight message and every learned nonce at grade 1,
/// and `Nb` at its leak grade when it has not been learned outright.
pub fn nsl_knowledge(model: &Model, leak: Option<&LeakModel>, s: &ModelState) -> KnowledgeMap {
    let mut mu: KnowledgeMap = base_knowledge().into_iter().map(|t| (t, Grade::ONE)).collect();
    let read = |name: &str| model.read_named(s, name);
    let mut slots = vec![read("net")];
    slots.extend((0..).map_while(|k| model.var(&format!("intr.store[{k}]")).map(|v| model.read(s, v))));
    for m in slots.into_iter().flatten().filter_map(MessageRecord::unpack) {
        if let Some(t) = message_term(&m) {
            mu.raise(t, Grade::ONE);
        }
    }
    for (flag, n) in [("intr_known_nonce[A]", NONCE_A), ("intr_known_nonce[B]", NONCE_B)] {
        if read(flag).is_some_and(|x| x != 0) {
            mu.raise(nonce(n).expect("known nonce"), Grade::ONE);
        }
    }
    if let (Some(leak), Some(sigma)) = (leak, read("leak_sigma")) {
        mu.raise(nonce(NONCE_B).expect("known nonce"), leak.grade(sigma));
    }
    mu
}
