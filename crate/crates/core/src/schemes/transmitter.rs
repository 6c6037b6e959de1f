use std::collections::VecDeque;

use super::SchemeKind;
use crate::linalg::PrimeField;
use crate::network::TxPort;
use crate::symbols::LinComb;
use crate::types::{AntennaConfig, StreamClass, SymbolId, TrafficState, User};

/// One stream put on a transmitter basis slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxEmission {
    pub port: TxPort,
    pub content: LinComb,
    /// Set when the stream carries a newly emitted symbol.
    pub fresh: Option<SymbolId>,
}

#[derive(Debug, Clone, Default)]
struct LastSlot {
    relay_bound: Vec<SymbolId>,
    support_sent: usize,
}

/// Transmitter-side state of a scheme.
///
/// The policy sees only its own current activity bit and the public state of
/// earlier slots (through [`TransmitterState::observe_feedback`]); there is no
/// way to hand it the other transmitter's current bit.
#[derive(Debug, Clone)]
pub struct TransmitterState {
    kind: SchemeKind,
    user: User,
    config: AntennaConfig,
    field: PrimeField,
    next_seq: u64,
    /// Own relay-bound symbols still to be supported on the cross basis:
    /// collided ones awaiting nulling (C2) or side information not yet
    /// delivered cleanly (C3′).
    pending: VecDeque<SymbolId>,
    last: LastSlot,
}

impl TransmitterState {
    pub fn new(kind: SchemeKind, user: User, config: AntennaConfig, field: PrimeField) -> Self {
        Self {
            kind,
            user,
            config,
            field,
            next_seq: 0,
            pending: VecDeque::new(),
            last: LastSlot::default(),
        }
    }

    pub fn user(&self) -> User {
        self.user
    }

    /// Number of fresh symbols emitted so far.
    pub fn emitted(&self) -> u64 {
        self.next_seq
    }

    pub fn pending(&self) -> &VecDeque<SymbolId> {
        &self.pending
    }

    /// Public state of the previous slot, delivered once per slot before
    /// [`emit`](Self::emit).
    pub fn observe_feedback(&mut self, prev: TrafficState) {
        let me = prev.active(self.user);
        let partner = prev.active(self.user.other());
        let last = std::mem::take(&mut self.last);
        match self.kind {
            SchemeKind::CoopNullC2 => {
                if me && partner {
                    self.pending.extend(last.relay_bound);
                } else if me {
                    self.pending.drain(..last.support_sent);
                }
            }
            SchemeKind::SideInfoC3 => {
                if me && !partner {
                    self.pending.drain(..last.support_sent);
                }
            }
            SchemeKind::NaiveC1 | SchemeKind::SisoRelay => {}
        }
    }

    fn fresh(&mut self, class: StreamClass) -> SymbolId {
        let id = SymbolId::new(self.user, self.next_seq, class);
        self.next_seq += 1;
        id
    }

    /// Emissions for the current slot.
    ///
    /// `active` is the transmitter's own (effective) activity bit,
    /// `relay_gate` the side-information scheme's relay-stream throttle, and
    /// `fresh_allowed` is false while draining.
    pub fn emit(&mut self, active: bool, relay_gate: bool, fresh_allowed: bool) -> Vec<TxEmission> {
        self.last = LastSlot::default();
        if !active {
            return Vec::new();
        }
        let AntennaConfig { m, n, l } = self.config;
        let mut out = Vec::new();
        let push_fresh =
            |this: &mut Self, port: TxPort, class: StreamClass, out: &mut Vec<TxEmission>| {
                let id = this.fresh(class);
                out.push(TxEmission {
                    port,
                    content: LinComb::symbol(id),
                    fresh: Some(id),
                });
                id
            };
        match self.kind {
            SchemeKind::NaiveC1 => {
                if fresh_allowed {
                    for i in 0..m {
                        push_fresh(self, TxPort::Antenna(i), StreamClass::Direct, &mut out);
                    }
                }
            }
            SchemeKind::SisoRelay => {
                if fresh_allowed {
                    push_fresh(self, TxPort::Antenna(0), StreamClass::Direct, &mut out);
                }
            }
            SchemeKind::CoopNullC2 => {
                if fresh_allowed {
                    for i in 0..l {
                        let id =
                            push_fresh(self, TxPort::Relay(i), StreamClass::RelayBound, &mut out);
                        self.last.relay_bound.push(id);
                    }
                    for i in 0..n {
                        push_fresh(self, TxPort::OwnRx(i), StreamClass::Direct, &mut out);
                    }
                }
                let k = self.pending.len().min(n);
                for (i, &id) in self.pending.iter().take(k).enumerate() {
                    let content = LinComb::symbol(id).scaled(self.field, self.field.neg(1));
                    out.push(TxEmission {
                        port: TxPort::CrossRx(i),
                        content,
                        fresh: None,
                    });
                }
                self.last.support_sent = k;
            }
            SchemeKind::SideInfoC3 => {
                if fresh_allowed {
                    if relay_gate {
                        for i in 0..l {
                            let id = push_fresh(
                                self,
                                TxPort::Relay(i),
                                StreamClass::RelayBound,
                                &mut out,
                            );
                            self.pending.push_back(id);
                        }
                    }
                    for i in 0..n {
                        push_fresh(self, TxPort::OwnRx(i), StreamClass::Direct, &mut out);
                    }
                }
                let k = self.pending.len().min(n - l);
                for (i, &id) in self.pending.iter().take(k).enumerate() {
                    out.push(TxEmission {
                        port: TxPort::CrossRx(i),
                        content: LinComb::symbol(id),
                        fresh: None,
                    });
                }
                self.last.support_sent = k;
            }
        }
        out
    }
}
