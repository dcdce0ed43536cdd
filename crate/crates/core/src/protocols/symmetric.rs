//! Server-mediated symmetric-key authentication template (NSSK and the
//! template-equivalent Yahalom, Otway–Rees and Woo–Lam abstractions).
//!
//! ```text
//! 1. A -> S : A, B, Na
//! 2. S -> A : {Na, B, Kab, {Kab, A}Kbs}Kas
//! 3. A -> B : {Kab, A}Kbs
//! 4. B -> A : {Nb}Kab
//! 5. A -> B : {Nb - 1}Kab
//! ```

use std::str::FromStr;
use std::sync::Arc;

use super::leak::{forge_guard, leak_rules, Carrier, LeakModel, LeakTarget, LeakVars, LP_NONE};
use super::{MessageRecord, Network, ProtocolConfig, ProtocolError};
use crate::engine::{Domain, Model, ModelBuilder, Rule, RuleKind, Value, View};

pub const AGENT_A: u8 = 1;
pub const AGENT_B: u8 = 2;
pub const AGENT_I: u8 = 3;
pub const SERVER: u8 = 4;

/// Session key id; long-term keys are named after their owner.
pub const KAB: u8 = 5;
pub const NONCE_A: u8 = 1;
pub const NONCE_B: u8 = 2;

pub const REQ: u8 = 1;
pub const PKG: u8 = 2;
pub const TICKET: u8 = 3;
pub const CHAL: u8 = 4;
pub const RESP: u8 = 5;

pub const IA_SLEEP: Value = 0;
pub const IA_WAIT_SERVER: Value = 1;
pub const IA_WAIT_CHAL: Value = 2;
pub const IA_COMMIT: Value = 3;
pub const RB_SLEEP: Value = 0;
pub const RB_WAIT: Value = 1;
pub const RB_COMMIT: Value = 2;

pub const INV_RESPONDER_AUTH: &str = "responder authenticated initiator";
pub const INV_INITIATOR_PARTNER: &str = "initiator commits only for responder B";
pub const INV_ONE_BIT: &str = "one-bit flag implies at least one leak";

pub const LEAK_COARSE: &str = "intruder side-channel leak (coarse session-key reading)";
pub const LEAK_FINE: &str = "intruder side-channel leak (fine session-key reading)";
pub const FORGE: &str = "intruder forges challenge response after leakage";
pub const INTERCEPT: &str = "intruder intercepts";
pub const REPLAY_SERVER: &str = "intruder replays recorded message to server";
pub const REPLAY_INITIATOR: &str = "intruder replays recorded message to initiator";
pub const REPLAY_RESPONDER: &str = "intruder replays recorded message to responder";
pub const SERVER_RESPOND: &str = "Server responds with package to initiator";
pub const INITIATOR_PACKAGE: &str = "Initiator processes server package and sends ticket";
pub const RESPONDER_TICKET: &str = "Responder processes ticket and sends challenge";
pub const INITIATOR_ANSWER: &str = "Initiator answers challenge";
pub const RESPONDER_VERIFY: &str = "Responder verifies challenge response";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetricFamily {
    Nssk,
    Yahalom,
    OtwayRees,
    WooLam,
}

impl SymmetricFamily {
    pub const ALL: [SymmetricFamily; 4] = [
        SymmetricFamily::Nssk,
        SymmetricFamily::Yahalom,
        SymmetricFamily::OtwayRees,
        SymmetricFamily::WooLam,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SymmetricFamily::Nssk => "nssk",
            SymmetricFamily::Yahalom => "yahalom",
            SymmetricFamily::OtwayRees => "otway_rees",
            SymmetricFamily::WooLam => "woo_lam",
        }
    }

    pub fn display(self) -> &'static str {
        match self {
            SymmetricFamily::Nssk => "NSSK",
            SymmetricFamily::Yahalom => "Yahalom",
            SymmetricFamily::OtwayRees => "Otway-Rees",
            SymmetricFamily::WooLam => "Woo-Lam",
        }
    }

    /// Multipliers applied to the configured coarse and fine observation σ.
    pub fn leak_factors(self) -> (f64, f64) {
        match self {
            SymmetricFamily::Nssk => (1.0, 1.0),
            SymmetricFamily::Yahalom => (1.10, 0.90),
            SymmetricFamily::OtwayRees => (0.90, 0.95),
            SymmetricFamily::WooLam => (1.05, 0.92),
        }
    }

    pub fn start_label(self) -> String {
        format!("A starts {} request to server", self.display())
    }
}

impl FromStr for SymmetricFamily {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SymmetricFamily::ALL
            .into_iter()
            .find(|f| f.key() == s)
            .ok_or_else(|| ProtocolError::UnknownFamily(s.to_string()))
    }
}

pub fn build_nssk(cfg: &ProtocolConfig) -> Result<Model, ProtocolError> {
    build_symmetric_family(SymmetricFamily::Nssk, cfg)
}

pub fn challenge_carrier() -> Carrier {
    Arc::new(|m: &MessageRecord| m.mtype == CHAL && m.nonce1 == NONCE_B)
}

pub fn build_symmetric_family(
    family: SymmetricFamily,
    cfg: &ProtocolConfig,
) -> Result<Model, ProtocolError> {
    cfg.validate()?;
    let name = format!(
        "{}_{}",
        family.key(),
        if cfg.leak_enabled { "leaky" } else { "safe" }
    );
    let leak = Arc::new(LeakModel::new(cfg)?);
    let mut b = ModelBuilder::new(name);

    let agents = Domain::labels(&["none", "A", "B", "I", "S"]);
    let a_state = b.var(
        "a_state",
        Domain::labels(&["sleep", "wait-server", "wait-challenge", "commit"]),
        IA_SLEEP,
    );
    let a_partner = b.var("a_partner", agents.clone(), 0);
    let b_state = b.var("b_state", Domain::labels(&["sleep", "wait", "commit"]), RB_SLEEP);
    let b_initiator = b.var("b_initiator", agents, 0);
    let nw = Network::declare(&mut b, cfg.store_size);
    let lv = LeakVars::declare(&mut b, &leak, cfg.leak_enabled);
    let (net, delivered, sigma) = (nw.net, nw.delivered, lv.sigma);
    let carrier = challenge_carrier();

    if cfg.leak_enabled {
        let (fc, ff) = family.leak_factors();
        let target = LeakTarget {
            store: nw.store.clone(),
            carrier: carrier.clone(),
            target_known: None,
        };
        for r in leak_rules(
            cfg,
            &leak,
            &lv,
            &target,
            [LEAK_COARSE, LEAK_FINE],
            cfg.coarse_sigma * fc,
            cfg.fine_sigma * ff,
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
                key: KAB,
                mtype: RESP,
                nonce1: NONCE_B,
                nonce2: 0,
            },
        ));
    }

    let inbound = move |v: &View, me: u8, key: u8, mtype: u8| {
        v.flag(delivered)
            && MessageRecord::unpack(v[net]).is_some_and(|m| m.dest == me && m.key == key && m.mtype == mtype)
    };
    let msg = move |v: &View| MessageRecord::unpack(v[net]).expect("guarded");

    let start = Rule::new(family.start_label(), RuleKind::Honest)
        .group("initiator_start")
        .when(&[a_state, net], move |v| v[a_state] == IA_SLEEP && v[net] == 0)
        .set_const(a_state, IA_WAIT_SERVER)
        .set_const(a_partner, AGENT_B as Value);
    b.rule(nw.send(
        start,
        MessageRecord {
            source: AGENT_A,
            dest: SERVER,
            key: 0,
            mtype: REQ,
            nonce1: AGENT_B,
            nonce2: NONCE_A,
        },
    ));

    b.rule(
        Rule::new(SERVER_RESPOND, RuleKind::Honest)
            .group("server_respond")
            .when(&[net, delivered], move |v| inbound(v, SERVER, 0, REQ))
            .set(net, &[net], move |v| {
                let req = msg(v);
                MessageRecord {
                    source: SERVER,
                    dest: req.source,
                    key: req.source,
                    mtype: PKG,
                    nonce1: req.nonce1,
                    nonce2: KAB,
                }
                .pack()
            })
            .set_const(delivered, 0),
    );

    b.rule(
        Rule::new(INITIATOR_PACKAGE, RuleKind::Honest)
            .group("initiator_package")
            .when(&[a_state, a_partner, net, delivered], move |v| {
                v[a_state] == IA_WAIT_SERVER
                    && inbound(v, AGENT_A, AGENT_A, PKG)
                    && msg(v).nonce1 as Value == v[a_partner]
            })
            .set_const(a_state, IA_WAIT_CHAL)
            .set(net, &[net, a_partner], move |v| {
                let peer = v[a_partner] as u8;
                MessageRecord {
                    source: AGENT_A,
                    dest: peer,
                    key: peer,
                    mtype: TICKET,
                    nonce1: msg(v).nonce2,
                    nonce2: 0,
                }
                .pack()
            })
            .set_const(delivered, 0),
    );

    b.rule(
        Rule::new(RESPONDER_TICKET, RuleKind::Honest)
            .group("responder_ticket")
            .when(&[b_state, net, delivered], move |v| {
                v[b_state] == RB_SLEEP && inbound(v, AGENT_B, AGENT_B, TICKET)
            })
            .set_const(b_state, RB_WAIT)
            .set(b_initiator, &[net], move |v| msg(v).source as Value)
            .set(net, &[net], move |v| {
                let t = msg(v);
                MessageRecord {
                    source: AGENT_B,
                    dest: t.source,
                    key: t.nonce1,
                    mtype: CHAL,
                    nonce1: NONCE_B,
                    nonce2: 0,
                }
                .pack()
            })
            .set_const(delivered, 0),
    );

    b.rule(
        Rule::new(INITIATOR_ANSWER, RuleKind::Honest)
            .group("initiator_answer")
            .when(&[a_state, net, delivered], move |v| {
                v[a_state] == IA_WAIT_CHAL && inbound(v, AGENT_A, KAB, CHAL)
            })
            .set_const(a_state, IA_COMMIT)
            .set(net, &[net, a_partner], move |v| {
                let peer = v[a_partner] as u8;
                MessageRecord {
                    source: AGENT_A,
                    dest: peer,
                    key: KAB,
                    mtype: RESP,
                    nonce1: msg(v).nonce1,
                    nonce2: 0,
                }
                .pack()
            })
            .set_const(delivered, 0),
    );

    b.rule(
        Rule::new(RESPONDER_VERIFY, RuleKind::Honest)
            .group("responder_verify")
            .when(&[b_state, net, delivered], move |v| {
                v[b_state] == RB_WAIT
                    && inbound(v, AGENT_B, KAB, RESP)
                    && msg(v).nonce1 == NONCE_B
            })
            .set_const(b_state, RB_COMMIT)
            .set_const(net, 0)
            .set_const(delivered, 0),
    );

    for k in 0..nw.store.len() {
        b.rule(nw.intercept(k, INTERCEPT));
        for (dest, label) in [
            (SERVER, REPLAY_SERVER),
            (AGENT_A, REPLAY_INITIATOR),
            (AGENT_B, REPLAY_RESPONDER),
        ] {
            b.rule(nw.replay(k, dest, label));
        }
    }

    b.invariant(
        INV_RESPONDER_AUTH,
        &[b_state, a_state, a_partner, b_initiator],
        move |v| {
            v[b_state] != RB_COMMIT
                || (v[a_state] == IA_COMMIT
                    && v[a_partner] == AGENT_B as Value
                    && v[b_initiator] == AGENT_A as Value)
        },
    );
    b.invariant(INV_INITIATOR_PARTNER, &[a_state, a_partner], move |v| {
        v[a_state] != IA_COMMIT || v[a_partner] == AGENT_B as Value
    });
    let (one_bit, phase) = (lv.one_bit, lv.phase);
    b.invariant(INV_ONE_BIT, &[one_bit, phase], move |v| {
        !v.flag(one_bit) || v[phase] != LP_NONE
    });

    b.scalarset(nw.scalarset(Vec::new()));
    b.observable("leak phase", lv.phase);
    b.observable("sigma_leak", lv.sigma);
    b.observable("responder state", b_state);
    Ok(b.build()?)
}
