//! Needham–Schroeder–Lowe public-key protocol with a bounded Dolev–Yao
//! intruder and optional side-channel leakage of the responder nonce.
//!
//! ```text
//! 1. A -> B : {Na, A}pk(B)
//! 2. B -> A : {Na, Nb, B}pk(A)
//! 3. A -> B : {Nb}pk(B)
//! ```

use std::sync::Arc;

use super::leak::{forge_guard, leak_rules, Carrier, LeakModel, LeakTarget, LeakVars};
use super::{MessageRecord, Network, ProtocolConfig, ProtocolError};
use crate::engine::{Domain, Model, ModelBuilder, Rule, RuleKind, Value, VarId};

pub const AGENT_A: u8 = 1;
pub const AGENT_B: u8 = 2;
pub const AGENT_I: u8 = 3;

pub const NONCE_A: u8 = 1;
pub const NONCE_B: u8 = 2;

pub const M1: u8 = 1;
pub const M2: u8 = 2;
pub const M3: u8 = 3;

pub const I_SLEEP: Value = 0;
pub const I_WAIT: Value = 1;
pub const I_COMMIT: Value = 2;
pub const R_SLEEP: Value = 0;
pub const R_WAIT: Value = 1;
pub const R_COMMIT: Value = 2;

pub const INV_RESPONDER_AUTH: &str = "responder correctly authenticated";
pub const INV_INITIATOR_AUTH: &str = "initiator correctly authenticated";
pub const INV_NB_SECRET: &str = "Nb remains confidential from intruder";
pub const INV_ONE_BIT: &str = "one-bit flag implies at least one leak step";

pub const LEAK_COARSE: &str = "Leak (coarse)";
pub const LEAK_FINE: &str = "Leak (fine)";
pub const FORGE: &str = "Intruder forge {Nb}Kb";
pub const INTERCEPT: &str = "Intruder intercept";
pub const REPLAY_RESPONDER: &str = "Intruder replay to responder";
pub const REPLAY_INITIATOR: &str = "Intruder replay to initiator";
pub const INITIATOR_START: &str = "Initiator start (step 3)";
pub const RESPONDER_REACT: &str = "Responder nonce reaction (3/6)";
pub const INITIATOR_REACT: &str = "Initiator nonce reaction";
pub const RESPONDER_CHECK: &str = "Responder nonce check (7)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NslProperty {
    Auth,
    Conf,
}

fn agent_domain() -> Domain {
    Domain::labels(&["none", "A", "B", "I"])
}

fn role_domain() -> Domain {
    Domain::labels(&["sleep", "wait", "commit"])
}

/// The carrier of `Nb`: message 2, whose second payload slot is `Nb`.
pub fn nb_carrier() -> Carrier {
    Arc::new(|m: &MessageRecord| m.mtype == M2 && m.nonce2 == NONCE_B)
}

pub fn build_nsl(cfg: &ProtocolConfig, property: NslProperty) -> Result<Model, ProtocolError> {
    let name = match (property, cfg.leak_enabled) {
        (NslProperty::Auth, false) => "ns_fuzzy_auth_safe",
        (NslProperty::Auth, true) => "ns_fuzzy_auth",
        (NslProperty::Conf, false) => "ns_fuzzy_conf_safe",
        (NslProperty::Conf, true) => "ns_fuzzy_conf",
    };
    build(name, cfg, property, false)
}

/// Safe authentication model with extra write-only audit attributes, the
/// unreduced input of the reduct benchmark.
pub fn build_nsl_fullctx(cfg: &ProtocolConfig) -> Result<Model, ProtocolError> {
    if cfg.leak_enabled {
        return Err(ProtocolError::InvalidConfig(
            "the full-context benchmark model is leak-free".into(),
        ));
    }
    build("nsl_safe_fullctx", cfg, NslProperty::Auth, true)
}

struct Audit {
    intercepts: VarId,
    relays: VarId,
    last_slot: VarId,
    init_sends: VarId,
}

/// Saturation point of the audit counters.
const AUDIT_CAP: Value = 4;

fn bump(rule: Rule, v: VarId, max: Value) -> Rule {
    rule.set(v, &[v], move |s| (s[v] + 1).min(max))
}

fn build(
    name: &str,
    cfg: &ProtocolConfig,
    property: NslProperty,
    audit: bool,
) -> Result<Model, ProtocolError> {
    cfg.validate()?;
    let leak = Arc::new(LeakModel::new(cfg)?);
    let mut b = ModelBuilder::new(name);

    let init_state = b.var("init_state", role_domain(), I_SLEEP);
    let init_responder = b.var("init_responder", agent_domain(), 0);
    let resp_state = b.var("resp_state", role_domain(), R_SLEEP);
    let resp_initiator = b.var("resp_initiator", agent_domain(), 0);
    let nw = Network::declare(&mut b, cfg.store_size);
    let known_na = b.var("intr_known_nonce[A]", Domain::Bool, 0);
    let known_nb = b.var("intr_known_nonce[B]", Domain::Bool, 0);
    let lv = LeakVars::declare(&mut b, &leak, cfg.leak_enabled);
    let audit = audit.then(|| Audit {
        intercepts: b.var("audit.intercepts", Domain::Range { lo: 0, hi: AUDIT_CAP }, 0),
        relays: b.var("audit.relays", Domain::Range { lo: 0, hi: AUDIT_CAP }, 0),
        last_slot: b.var(
            "audit.last_slot",
            Domain::Range {
                lo: 0,
                hi: cfg.store_size as Value,
            },
            0,
        ),
        init_sends: b.var("audit.init_sends", Domain::Range { lo: 0, hi: AUDIT_CAP }, 0),
    });

    let (net, delivered) = (nw.net, nw.delivered);
    let sigma = lv.sigma;
    let carrier = nb_carrier();

    if cfg.leak_enabled {
        let target = LeakTarget {
            store: nw.store.clone(),
            carrier: carrier.clone(),
            target_known: Some(known_nb),
        };
        for r in leak_rules(
            cfg,
            &leak,
            &lv,
            &target,
            [LEAK_COARSE, LEAK_FINE],
            cfg.coarse_sigma,
            cfg.fine_sigma,
        ) {
            b.rule(r);
        }
        let mut reads = vec![net, sigma];
        reads.extend(&nw.store);
        let (l, store, c) = (leak.clone(), nw.store.clone(), carrier.clone());
        let forge = Rule::new(FORGE, RuleKind::Intruder)
            .group("intruder_forge")
            .when(&reads, move |v| v[net] == 0 && forge_guard(v, &l, sigma, &store, &c));
        b.rule(nw.send_delivered(
            forge,
            MessageRecord {
                source: AGENT_A,
                dest: AGENT_B,
                key: AGENT_B,
                mtype: M3,
                nonce1: NONCE_B,
                nonce2: 0,
            },
        ));
    }

    for (peer, tag) in [(AGENT_B, "B"), (AGENT_I, "I")] {
        let mut r = Rule::new(format!("{INITIATOR_START} with {tag}"), RuleKind::Honest)
            .label(INITIATOR_START)
            .group("initiator_start")
            .when(&[init_state, net], move |v| v[init_state] == I_SLEEP && v[net] == 0)
            .set_const(init_state, I_WAIT)
            .set_const(init_responder, peer as Value);
        if let Some(a) = &audit {
            r = bump(r, a.init_sends, AUDIT_CAP);
        }
        b.rule(nw.send(
            r,
            MessageRecord {
                source: AGENT_A,
                dest: peer,
                key: peer,
                mtype: M1,
                nonce1: NONCE_A,
                nonce2: 0,
            },
        ));
    }

    let inbound = move |v: &crate::engine::View, me: u8, mtype: u8| {
        v.flag(delivered)
            && MessageRecord::unpack(v[net]).is_some_and(|m| m.dest == me && m.key == me && m.mtype == mtype)
    };

    b.rule(
        Rule::new(RESPONDER_REACT, RuleKind::Honest)
            .group("responder_react")
            .when(&[resp_state, net, delivered], move |v| {
                v[resp_state] == R_SLEEP
                    && inbound(v, AGENT_B, M1)
                    && MessageRecord::unpack(v[net]).is_some_and(|m| m.source == AGENT_A)
            })
            .set_const(resp_state, R_WAIT)
            .set(resp_initiator, &[net], move |v| {
                MessageRecord::unpack(v[net]).expect("guarded").source as Value
            })
            .set(net, &[net], move |v| {
                let m1 = MessageRecord::unpack(v[net]).expect("guarded");
                MessageRecord {
                    source: AGENT_B,
                    dest: m1.source,
                    key: m1.source,
                    mtype: M2,
                    nonce1: m1.nonce1,
                    nonce2: NONCE_B,
                }
                .pack()
            })
            .set_const(delivered, 0),
    );

    let mut react = Rule::new(INITIATOR_REACT, RuleKind::Honest)
        .group("initiator_react")
        .when(&[init_state, init_responder, net, delivered], move |v| {
            v[init_state] == I_WAIT
                && inbound(v, AGENT_A, M2)
                && MessageRecord::unpack(v[net])
                    .is_some_and(|m| m.nonce1 == NONCE_A && m.source as Value == v[init_responder])
        })
        .set_const(init_state, I_COMMIT)
        .set(net, &[net, init_responder], move |v| {
            let m2 = MessageRecord::unpack(v[net]).expect("guarded");
            let peer = v[init_responder] as u8;
            MessageRecord {
                source: AGENT_A,
                dest: peer,
                key: peer,
                mtype: M3,
                nonce1: m2.nonce2,
                nonce2: 0,
            }
            .pack()
        })
        .set_const(delivered, 0);
    if let Some(a) = &audit {
        react = bump(react, a.init_sends, AUDIT_CAP);
    }
    b.rule(react);

    b.rule(
        Rule::new(RESPONDER_CHECK, RuleKind::Honest)
            .group("responder_check")
            .when(&[resp_state, net, delivered], move |v| {
                v[resp_state] == R_WAIT
                    && inbound(v, AGENT_B, M3)
                    && MessageRecord::unpack(v[net]).is_some_and(|m| m.nonce1 == NONCE_B)
            })
            .set_const(resp_state, R_COMMIT)
            .set_const(net, 0)
            .set_const(delivered, 0),
    );

    for k in 0..nw.store.len() {
        let l = leak.clone();
        let c = carrier.clone();
        let mut r = nw
            .intercept(k, INTERCEPT)
            .set(known_na, &[known_na, net], move |v| {
                let m = MessageRecord::unpack(v[net]).expect("guarded");
                let learned = m.key == AGENT_I && (m.nonce1 == NONCE_A || m.nonce2 == NONCE_A);
                (v.flag(known_na) || learned) as Value
            })
            .set(known_nb, &[known_nb, net, sigma], move |v| {
                let m = MessageRecord::unpack(v[net]).expect("guarded");
                let opened = m.key == AGENT_I && (m.nonce1 == NONCE_B || m.nonce2 == NONCE_B);
                let leaked = c(&m) && l.actionable(v[sigma]);
                (v.flag(known_nb) || opened || leaked) as Value
            });
        if let Some(a) = &audit {
            r = bump(r, a.intercepts, AUDIT_CAP);
            r = bump(r, a.relays, AUDIT_CAP);
            r = r.set_const(a.last_slot, k as Value + 1);
        }
        b.rule(r);
        for (dest, label) in [(AGENT_B, REPLAY_RESPONDER), (AGENT_A, REPLAY_INITIATOR)] {
            let mut r = nw.replay(k, dest, label);
            if let Some(a) = &audit {
                r = bump(r, a.relays, AUDIT_CAP);
                r = r.set_const(a.last_slot, k as Value + 1);
            }
            b.rule(r);
        }
    }

    inject_rules(&mut b, &nw, known_na, known_nb);

    b.invariant(
        INV_RESPONDER_AUTH,
        &[init_state, init_responder, resp_initiator, resp_state],
        move |v| {
            !(v[init_state] == I_COMMIT && v[init_responder] == AGENT_B as Value)
                || (v[resp_initiator] == AGENT_A as Value
                    && (v[resp_state] == R_WAIT || v[resp_state] == R_COMMIT))
        },
    );
    b.invariant(
        INV_INITIATOR_AUTH,
        &[resp_state, resp_initiator, init_state, init_responder],
        move |v| {
            !(v[resp_state] == R_COMMIT && v[resp_initiator] == AGENT_A as Value)
                || (v[init_state] == I_COMMIT && v[init_responder] == AGENT_B as Value)
        },
    );
    if property == NslProperty::Conf {
        b.invariant(INV_NB_SECRET, &[known_nb], move |v| !v.flag(known_nb));
    }
    let (one_bit, phase) = (lv.one_bit, lv.phase);
    b.invariant(INV_ONE_BIT, &[one_bit, phase], move |v| {
        !v.flag(one_bit) || v[phase] != super::leak::LP_NONE
    });

    let slot_value = audit.as_ref().map(|a| vec![(a.last_slot, 1)]).unwrap_or_default();
    b.scalarset(nw.scalarset(slot_value));
    b.observable("leak phase", lv.phase);
    b.observable("sigma_leak", lv.sigma);
    b.observable("responder state", resp_state);
    Ok(b.build()?)
}

/// Messages the intruder can assemble from nonces it has learned.
fn inject_rules(b: &mut ModelBuilder, nw: &Network, known_na: VarId, known_nb: VarId) {
    let net = nw.net;
    let known = move |n: u8| if n == NONCE_A { known_na } else { known_nb };
    let nonces = [(NONCE_A, "Na"), (NONCE_B, "Nb")];
    let mut add = |name: String, needs: Vec<VarId>, msg: MessageRecord| {
        let mut reads = vec![net];
        reads.extend(&needs);
        let r = Rule::new(name, RuleKind::Intruder)
            .label("Intruder inject")
            .group("intruder_inject")
            .when(&reads, move |v| v[net] == 0 && needs.iter().all(|&k| v.flag(k)));
        b.rule(nw.send_delivered(r, msg));
    };
    for (n, tag) in nonces {
        add(
            format!("Intruder inject {{{tag}, A}}pk(B)"),
            vec![known(n)],
            MessageRecord {
                source: AGENT_A,
                dest: AGENT_B,
                key: AGENT_B,
                mtype: M1,
                nonce1: n,
                nonce2: 0,
            },
        );
    }
    for (n1, t1) in nonces {
        for (n2, t2) in nonces {
            for (who, tw) in [(AGENT_B, "B"), (AGENT_I, "I")] {
                add(
                    format!("Intruder inject {{{t1}, {t2}, {tw}}}pk(A)"),
                    vec![known(n1), known(n2)],
                    MessageRecord {
                        source: who,
                        dest: AGENT_A,
                        key: AGENT_A,
                        mtype: M2,
                        nonce1: n1,
                        nonce2: n2,
                    },
                );
            }
        }
    }
    for (n, tag) in nonces {
        add(
            format!("Intruder inject {{{tag}}}pk(B)"),
            vec![known(n)],
            MessageRecord {
                source: AGENT_A,
                dest: AGENT_B,
                key: AGENT_B,
                mtype: M3,
                nonce1: n,
                nonce2: 0,
            },
        );
    }
}
