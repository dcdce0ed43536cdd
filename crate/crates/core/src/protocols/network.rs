use super::MessageRecord;
use crate::engine::{Domain, ModelBuilder, Rule, RuleKind, Scalarset, VarId};

/// One in-flight message slot plus the intruder's bounded store.
///
/// Honest principals only consume messages flagged as delivered, and only
/// the intruder delivers, so every exchange passes through
/// intercept/replay (or a forgery).
#[derive(Debug, Clone)]
pub struct Network {
    pub net: VarId,
    pub delivered: VarId,
    pub store: Vec<VarId>,
}

impl Network {
    pub fn declare(b: &mut ModelBuilder, store_size: usize) -> Network {
        let net = b.var("net", MessageRecord::domain(), 0);
        let delivered = b.var("net.delivered", Domain::Bool, 0);
        let store = (0..store_size)
            .map(|k| b.var(format!("intr.store[{k}]"), MessageRecord::domain(), 0))
            .collect();
        Network {
            net,
            delivered,
            store,
        }
    }

    /// Store slots are interchangeable.
    pub fn scalarset(&self, extra_value_vars: Vec<(VarId, i32)>) -> Scalarset {
        Scalarset {
            name: "store slot".into(),
            size: self.store.len(),
            value_vars: extra_value_vars,
            index_vars: self.store.iter().map(|&s| vec![s]).collect(),
        }
    }

    /// Takes the in-flight message into slot `k`, overwriting it.
    pub fn intercept(&self, k: usize, label: &str) -> Rule {
        let (net, delivered, slot) = (self.net, self.delivered, self.store[k]);
        Rule::new(format!("{label}[{k}]"), RuleKind::Intruder)
            .label(label)
            .group("intruder_intercept")
            .when(&[net], move |v| v[net] != 0)
            .set(slot, &[net], move |v| v[net])
            .set_const(net, 0)
            .set_const(delivered, 0)
    }

    /// Delivers the message recorded in slot `k` to `dest`.
    pub fn replay(&self, k: usize, dest: u8, label: &str) -> Rule {
        let (net, delivered, slot) = (self.net, self.delivered, self.store[k]);
        Rule::new(format!("{label}[{k}]"), RuleKind::Intruder)
            .label(label)
            .group("intruder_replay")
            .when(&[net, slot], move |v| v[net] == 0 && v[slot] != 0)
            .set(net, &[slot], move |v| {
                MessageRecord::unpack(v[slot])
                    .expect("guarded non-empty")
                    .routed_to(dest)
                    .pack()
            })
            .set_const(delivered, 1)
    }

    /// Puts an intruder-built message on the wire, already delivered.
    pub fn send_delivered(&self, rule: Rule, msg: MessageRecord) -> Rule {
        rule.set_const(self.net, msg.pack()).set_const(self.delivered, 1)
    }

    /// Honest send: the message waits for the intruder.
    pub fn send(&self, rule: Rule, msg: MessageRecord) -> Rule {
        rule.set_const(self.net, msg.pack()).set_const(self.delivered, 0)
    }
}
