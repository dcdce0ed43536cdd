use crate::engine::{Domain, Value};

/// Concretized network message: routing header plus two bounded payload
/// slots. `source` is the identity carried inside the ciphertext.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MessageRecord {
    pub source: u8,
    pub dest: u8,
    pub key: u8,
    pub mtype: u8,
    pub nonce1: u8,
    pub nonce2: u8,
}

const FIELD_BITS: u32 = 4;
const FIELD_MASK: Value = (1 << FIELD_BITS) - 1;

impl MessageRecord {
    /// The state-variable domain of a packed record; 0 is the empty slot.
    pub fn domain() -> Domain {
        Domain::Range {
            lo: 0,
            hi: (1 << (6 * FIELD_BITS)) - 1,
        }
    }

    pub fn pack(&self) -> Value {
        let fields = [self.source, self.dest, self.key, self.mtype, self.nonce1, self.nonce2];
        fields
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                debug_assert!((f as Value) <= FIELD_MASK);
                (f as Value) << (i as u32 * FIELD_BITS)
            })
            .sum()
    }

    pub fn unpack(v: Value) -> Option<MessageRecord> {
        if v == 0 {
            return None;
        }
        let f = |i: u32| ((v >> (i * FIELD_BITS)) & FIELD_MASK) as u8;
        Some(MessageRecord {
            source: f(0),
            dest: f(1),
            key: f(2),
            mtype: f(3),
            nonce1: f(4),
            nonce2: f(5),
        })
    }

    pub fn routed_to(mut self, dest: u8) -> MessageRecord {
        self.dest = dest;
        self
    }
}
