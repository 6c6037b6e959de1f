use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::SchemeKind;
use crate::linalg::{FieldElement, PrimeField};
use crate::network::RelayPort;
use crate::symbols::LinComb;
use crate::types::{AntennaConfig, SymbolId, TrafficState, User};

/// One stored relay-antenna reception: the numeric value it heard and the
/// combination of symbols that value stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelayEntry {
    pub value: FieldElement,
    pub content: LinComb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelayEmission {
    pub port: RelayPort,
    pub content: LinComb,
    pub value: FieldElement,
}

impl RelayEmission {
    fn of(port: RelayPort, e: &RelayEntry) -> Self {
        Self {
            port,
            content: e.content.clone(),
            value: e.value,
        }
    }
}

#[derive(Debug, Clone)]
struct SharedEntry {
    entry: RelayEntry,
    waiting: [bool; 2],
}

/// FIFO state at the relay.
#[derive(Debug, Clone)]
pub struct RelayQueues {
    kind: SchemeKind,
    config: AntennaConfig,
    field: PrimeField,
    /// Collided sums (cooperative nulling).
    type1: VecDeque<RelayEntry>,
    /// Leading type1 entries already resolved for each user.
    resolved: [usize; 2],
    /// Collision-free reserved symbols per user (cooperative nulling).
    type2: [VecDeque<RelayEntry>; 2],
    /// Side-information scheme: stored receptions, and per user the ids of
    /// those not yet broadcast while that user was idle.
    shared: BTreeMap<u64, SharedEntry>,
    shared_next: u64,
    waiting: [VecDeque<u64>; 2],
    /// SISO scheme: stored relay reception vectors.
    siso_pending: VecDeque<Vec<RelayEntry>>,
}

impl RelayQueues {
    pub fn new(kind: SchemeKind, config: AntennaConfig, field: PrimeField) -> Self {
        Self {
            kind,
            config,
            field,
            type1: VecDeque::new(),
            resolved: [0, 0],
            type2: [VecDeque::new(), VecDeque::new()],
            shared: BTreeMap::new(),
            shared_next: 0,
            waiting: [VecDeque::new(), VecDeque::new()],
            siso_pending: VecDeque::new(),
        }
    }

    /// Named queue lengths relevant to the scheme.
    pub fn lengths(&self) -> Vec<(&'static str, usize)> {
        match self.kind {
            SchemeKind::NaiveC1 => vec![],
            SchemeKind::CoopNullC2 => vec![
                ("type1", self.type1.len()),
                ("type2_user1", self.type2[0].len()),
                ("type2_user2", self.type2[1].len()),
            ],
            SchemeKind::SideInfoC3 => {
                vec![
                    ("relay_user1", self.waiting[0].len()),
                    ("relay_user2", self.waiting[1].len()),
                ]
            }
            SchemeKind::SisoRelay => vec![("siso", self.siso_pending.len())],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lengths().iter().all(|&(_, n)| n == 0)
    }

    /// Type1 entries still unresolved for `user`.
    pub fn unresolved_for(&self, user: User) -> usize {
        self.type1.len() - self.resolved[user.index()]
    }

    /// Symbols mentioned by anything still stored.
    pub fn stored_symbols(&self) -> BTreeSet<SymbolId> {
        let entries = self
            .type1
            .iter()
            .chain(self.type2.iter().flatten())
            .chain(self.shared.values().map(|s| &s.entry))
            .chain(self.siso_pending.iter().flatten());
        entries.flat_map(|e| e.content.symbols()).collect()
    }

    /// Relay transmission for the current slot, given the public state `s`.
    pub fn transmit(&mut self, s: TrafficState) -> Vec<RelayEmission> {
        let n = self.config.n;
        let l = self.config.l;
        let mut out = Vec::new();
        match self.kind {
            SchemeKind::NaiveC1 => {}
            SchemeKind::CoopNullC2 => {
                for u in User::BOTH {
                    if !s.active(u.other()) {
                        continue;
                    }
                    let start = self.resolved[u.index()];
                    let k = self.unresolved_for(u).min(n);
                    for i in 0..k {
                        out.push(RelayEmission::of(
                            RelayPort::ToRx(u, i),
                            &self.type1[start + i],
                        ));
                    }
                    if !s.active(u) {
                        self.resolved[u.index()] += k;
                    }
                }
                while self.resolved[0] > 0 && self.resolved[1] > 0 {
                    self.type1.pop_front();
                    self.resolved[0] -= 1;
                    self.resolved[1] -= 1;
                }
                if s == TrafficState::IDLE {
                    for u in User::BOTH {
                        let q = &mut self.type2[u.index()];
                        for i in 0..q.len().min(n) {
                            let e = q.pop_front().expect("length checked");
                            out.push(RelayEmission::of(RelayPort::ToRx(u, i), &e));
                        }
                    }
                }
            }
            SchemeKind::SideInfoC3 => {
                let idle: Vec<User> = User::BOTH.into_iter().filter(|&u| !s.active(u)).collect();
                let take: Vec<Vec<u64>> = idle
                    .iter()
                    .map(|&u| {
                        let q = &mut self.waiting[u.index()];
                        let k = q.len().min(l);
                        q.drain(..k).collect()
                    })
                    .collect();
                for i in 0..l {
                    let mut ids: Vec<u64> = take.iter().filter_map(|t| t.get(i).copied()).collect();
                    ids.dedup();
                    if ids.is_empty() {
                        continue;
                    }
                    let mut content = LinComb::zero();
                    let mut value = 0;
                    for id in &ids {
                        let e = &self.shared[id].entry;
                        content = content.add_scaled(self.field, &e.content, 1);
                        value = self.field.add(value, e.value);
                    }
                    out.push(RelayEmission {
                        port: RelayPort::Antenna(i),
                        content,
                        value,
                    });
                }
                for (u, ids) in idle.iter().zip(&take) {
                    for id in ids {
                        let gone = {
                            let s = self.shared.get_mut(id).expect("queued entry is stored");
                            s.waiting[u.index()] = false;
                            !s.waiting[0] && !s.waiting[1]
                        };
                        if gone {
                            self.shared.remove(id);
                        }
                    }
                }
            }
            SchemeKind::SisoRelay => {
                if s == TrafficState::IDLE {
                    if let Some(stored) = self.siso_pending.pop_front() {
                        for (i, e) in stored.iter().enumerate() {
                            out.push(RelayEmission::of(RelayPort::Antenna(i), e));
                        }
                    }
                }
            }
        }
        out
    }

    /// Stores what the relay heard this slot (one entry per relay antenna).
    pub fn receive(&mut self, s: TrafficState, heard: Vec<RelayEntry>) {
        match self.kind {
            SchemeKind::NaiveC1 => {}
            SchemeKind::CoopNullC2 => {
                for e in heard.into_iter().filter(|e| !e.content.is_zero()) {
                    match (e.content.involves(User::One), e.content.involves(User::Two)) {
                        (true, true) => self.type1.push_back(e),
                        (true, false) => self.type2[0].push_back(e),
                        (false, true) => self.type2[1].push_back(e),
                        (false, false) => unreachable!("non-zero content involves a user"),
                    }
                }
            }
            SchemeKind::SideInfoC3 => {
                for e in heard.into_iter().filter(|e| !e.content.is_zero()) {
                    let id = self.shared_next;
                    self.shared_next += 1;
                    let waiting = [e.content.involves(User::One), e.content.involves(User::Two)];
                    for u in User::BOTH {
                        if waiting[u.index()] {
                            self.waiting[u.index()].push_back(id);
                        }
                    }
                    self.shared.insert(id, SharedEntry { entry: e, waiting });
                }
            }
            SchemeKind::SisoRelay => {
                if s.s1 && s.s2 && heard.iter().any(|e| !e.content.is_zero()) {
                    self.siso_pending.push_back(heard);
                }
            }
        }
    }
}
