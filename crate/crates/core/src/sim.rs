//! The discrete-time loop: traffic, one-slot-delayed feedback, scheme
//! policies, exact propagation, receiver decoding and bookkeeping.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{FieldElement, LinalgError, PrimeField, DEFAULT_PRIME};
use crate::network::{
    instantiate, NetworkInstance, Node, PrecoderBank, RelayPort, SlotTransmission, TxPort,
};
use crate::schemes::{
    derive_throttle, InconsistentSystem, ReceiverLedger, RelayEmission, RelayEntry, RelayQueues,
    SchemeKind, TransmitterState, TxEmission,
};
use crate::seeds::{derive_seed, symbol_value};
use crate::symbols::LinComb;
use crate::types::{
    AntennaConfig, ConfigError, SymbolId, TrafficModel, TrafficState, TrafficTrace, User,
};

pub const DEFAULT_DRAIN_SLOTS: usize = 5000;
pub const DEFAULT_WINDOW: usize = 10_000;
pub const DEFAULT_WARMUP: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub config: AntennaConfig,
    pub model: TrafficModel,
    pub scheme: SchemeKind,
    pub slots: usize,
    pub drain_slots: usize,
    pub prime: u64,
    pub seed: u64,
    pub forced_trace: Option<TrafficTrace>,
    /// Keep every decode event in [`Metrics::events`].
    pub record_events: bool,
    /// Check per slot that every undecoded own symbol is still held somewhere.
    pub audit: bool,
    pub window: usize,
    pub warmup: usize,
}

impl SimConfig {
    pub fn new(
        config: AntennaConfig,
        model: TrafficModel,
        scheme: SchemeKind,
        slots: usize,
        seed: u64,
    ) -> Self {
        Self {
            config,
            model,
            scheme,
            slots,
            drain_slots: DEFAULT_DRAIN_SLOTS,
            prime: DEFAULT_PRIME,
            seed,
            forced_trace: None,
            record_events: false,
            audit: false,
            window: DEFAULT_WINDOW,
            warmup: DEFAULT_WARMUP,
        }
    }

    /// Runs exactly `trace`, recording decode events.
    pub fn forced(
        config: AntennaConfig,
        scheme: SchemeKind,
        trace: TrafficTrace,
        seed: u64,
    ) -> Self {
        let mut sim = Self::new(
            config,
            TrafficModel::new(0.5, 0.01).with_q(1.0),
            scheme,
            trace.len(),
            seed,
        );
        sim.forced_trace = Some(trace);
        sim.record_events = true;
        sim
    }

    pub fn validate(&self) -> Result<(), SimError> {
        crate::types::validate_config(&self.config, &self.model)?;
        if !self.scheme.compatible(self.config) {
            return Err(SimError::Incompatible {
                scheme: self.scheme,
                config: self.config,
            });
        }
        if let Some(trace) = &self.forced_trace {
            if trace.len() != self.slots {
                return Err(ConfigError::TraceLength {
                    expected: self.slots,
                    got: trace.len(),
                }
                .into());
            }
        }
        if self.slots == 0 {
            return Err(SimError::EmptyHorizon);
        }
        Ok(())
    }

    /// Throttle probability in force for this run.
    pub fn throttle(&self) -> Result<f64, ConfigError> {
        match self.model.q_override {
            Some(q) => Ok(q),
            None => derive_throttle(self.scheme, self.config, self.model.p, self.model.epsilon),
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scheme {scheme} cannot run on {config}")]
    Incompatible {
        scheme: SchemeKind,
        config: AntennaConfig,
    },
    #[error("horizon must be at least one slot")]
    EmptyHorizon,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("receiver {receiver}: {source}")]
    Inconsistent {
        receiver: User,
        source: InconsistentSystem,
    },
    #[error("slot log: {0}")]
    Log(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecodeEvent {
    /// 1-based slot.
    pub slot: usize,
    pub receiver: User,
    pub symbol: SymbolId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueueStats {
    pub name: &'static str,
    pub max: usize,
    /// Per stability window: whether the queue was empty at the end of some slot.
    pub window_hits: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub slots: usize,
    pub drain_used: usize,
    pub throttle: f64,
    pub emitted_fresh: [u64; 2],
    pub decoded_fresh: [u64; 2],
    pub empirical_dof: [f64; 2],
    pub decode_mismatches: u64,
    pub zf_violations: u64,
    pub observation_mismatches: u64,
    /// Receiver observations that mention the other user's symbols; always
    /// zero for the cooperative-nulling scheme.
    pub foreign_observations: u64,
    pub conservation_violations: u64,
    pub queues: Vec<QueueStats>,
    pub queues_empty_at_end: bool,
    /// Decode latency in slots → count.
    pub latency: BTreeMap<u64, u64>,
    pub events: Vec<DecodeEvent>,
    pub window: usize,
    pub warmup: usize,
}

impl Metrics {
    pub fn queue_max(&self, name: &str) -> Option<usize> {
        self.queues.iter().find(|q| q.name == name).map(|q| q.max)
    }

    pub fn sum_dof(&self) -> f64 {
        self.empirical_dof[0] + self.empirical_dof[1]
    }

    /// No exactness check fired.
    pub fn exact(&self) -> bool {
        self.decode_mismatches == 0
            && self.zf_violations == 0
            && self.observation_mismatches == 0
            && self.conservation_violations == 0
    }

    pub fn decoded_at(&self, slot: usize, receiver: User) -> Vec<String> {
        self.events
            .iter()
            .filter(|e| e.slot == slot && e.receiver == receiver)
            .map(|e| e.symbol.label())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StabilityVerdict {
    Stable,
    Unstable { queue: String, window_start: usize },
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable)
    }
}

impl std::fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StabilityVerdict::Stable => write!(f, "stable"),
            StabilityVerdict::Unstable {
                queue,
                window_start,
            } => {
                write!(f, "unstable ({queue} never empties in the window starting at slot {window_start})")
            }
        }
    }
}

/// Stable iff every relay queue empties at least once in every complete
/// window after warm-up.
pub fn stability_report(metrics: &Metrics) -> StabilityVerdict {
    let windows = metrics
        .queues
        .iter()
        .map(|q| q.window_hits.len())
        .max()
        .unwrap_or(0);
    for w in 0..windows {
        for q in &metrics.queues {
            if !q.window_hits[w] {
                return StabilityVerdict::Unstable {
                    queue: q.name.to_string(),
                    window_start: metrics.warmup + w * metrics.window + 1,
                };
            }
        }
    }
    StabilityVerdict::Stable
}

/// Images of every basis slot at every node, computed once per run.
struct PortImages {
    tx: HashMap<(User, TxPort), [Vec<FieldElement>; 3]>,
    relay: HashMap<RelayPort, [Vec<FieldElement>; 2]>,
}

const NODES: [Node; 3] = [Node::Rx(User::One), Node::Rx(User::Two), Node::Relay];

fn node_index(node: Node) -> usize {
    match node {
        Node::Rx(u) => u.index(),
        Node::Relay => 2,
    }
}

impl PortImages {
    fn new() -> Self {
        Self {
            tx: HashMap::new(),
            relay: HashMap::new(),
        }
    }

    fn tx(
        &mut self,
        net: &NetworkInstance,
        bank: &PrecoderBank,
        user: User,
        port: TxPort,
    ) -> &[Vec<FieldElement>; 3] {
        self.tx.entry((user, port)).or_insert_with(|| {
            let v = bank.tx_vector(net.config, user, port);
            NODES.map(|node| {
                net.channel_from_tx(user, node)
                    .mul_vec(&v)
                    .expect("precoder length")
            })
        })
    }

    fn relay(
        &mut self,
        net: &NetworkInstance,
        bank: &PrecoderBank,
        port: RelayPort,
    ) -> &[Vec<FieldElement>; 2] {
        self.relay.entry(port).or_insert_with(|| {
            let v = bank.relay_vector(net.config, port);
            User::BOTH.map(|u| {
                net.channel_from_relay(u)
                    .mul_vec(&v)
                    .expect("precoder length")
            })
        })
    }
}

struct Stream {
    images: Vec<(usize, Vec<FieldElement>)>,
    content: LinComb,
    value: FieldElement,
}

fn drain_state(kind: SchemeKind, i: usize) -> TrafficState {
    match kind {
        SchemeKind::CoopNullC2 | SchemeKind::SideInfoC3 => [
            TrafficState::new(false, true),
            TrafficState::new(true, false),
            TrafficState::IDLE,
        ][i % 3],
        SchemeKind::NaiveC1 | SchemeKind::SisoRelay => TrafficState::IDLE,
    }
}

fn labels<'a>(it: impl Iterator<Item = &'a LinComb>) -> Vec<String> {
    it.map(|c| c.to_string()).collect()
}

/// Runs one simulation.
pub fn run(sim: &SimConfig) -> Result<Metrics, SimError> {
    run_logged(sim, None)
}

/// Runs one simulation, writing one JSON record per slot to `log` if given.
pub fn run_logged(sim: &SimConfig, mut log: Option<&mut dyn Write>) -> Result<Metrics, SimError> {
    sim.validate()?;
    let q = sim.throttle()?;
    let field = PrimeField::new(sim.prime)?;
    let cfg = sim.config;
    let kind = sim.scheme;
    let (net, bank) = instantiate(
        cfg,
        field,
        derive_seed(sim.seed, "network", 0),
        kind.precoders(),
    )?;
    let key = derive_seed(sim.seed, "symbols", 0);
    let truth = |id: SymbolId| symbol_value(field, key, id.user, id.seq);

    let mut traffic = ChaCha8Rng::seed_from_u64(derive_seed(sim.seed, "traffic", 0));
    let mut throttles = User::BOTH
        .map(|u| ChaCha8Rng::seed_from_u64(derive_seed(sim.seed, "throttle", u.index() as u64)));
    let mut txs = User::BOTH.map(|u| TransmitterState::new(kind, u, cfg, field));
    let mut relay = RelayQueues::new(kind, cfg, field);
    let mut ledgers = [ReceiverLedger::new(field), ReceiverLedger::new(field)];
    let mut images = PortImages::new();

    let queue_names: Vec<&'static str> = relay.lengths().into_iter().map(|(n, _)| n).collect();
    let windows = if sim.window == 0 {
        0
    } else {
        sim.slots.saturating_sub(sim.warmup) / sim.window
    };
    let mut m = Metrics {
        slots: sim.slots,
        drain_used: 0,
        throttle: q,
        emitted_fresh: [0, 0],
        decoded_fresh: [0, 0],
        empirical_dof: [0.0, 0.0],
        decode_mismatches: 0,
        zf_violations: 0,
        observation_mismatches: 0,
        foreign_observations: 0,
        conservation_violations: 0,
        queues: queue_names
            .iter()
            .map(|&name| QueueStats {
                name,
                max: 0,
                window_hits: vec![false; windows],
            })
            .collect(),
        queues_empty_at_end: true,
        latency: BTreeMap::new(),
        events: Vec::new(),
        window: sim.window,
        warmup: sim.warmup,
    };
    let mut emitted_at: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    let mut undecoded: [BTreeSet<SymbolId>; 2] = [BTreeSet::new(), BTreeSet::new()];
    let mut prev = TrafficState::IDLE;

    let total = sim.slots + sim.drain_slots;
    for t in 0..total {
        let draining = t >= sim.slots;
        if draining && relay.is_empty() && txs.iter().all(|x| x.pending().is_empty()) {
            break;
        }
        let slot = t + 1;

        // Traffic and throttle.
        let (state, gate) = if draining {
            m.drain_used += 1;
            (drain_state(kind, t - sim.slots), [true, true])
        } else {
            let raw = match &sim.forced_trace {
                Some(trace) => trace.states[t],
                None => {
                    TrafficState::new(traffic.gen_bool(sim.model.p), traffic.gen_bool(sim.model.p))
                }
            };
            let gate = User::BOTH.map(|u| {
                if raw.active(u) && q < 1.0 {
                    throttles[u.index()].gen_bool(q)
                } else {
                    true
                }
            });
            if kind.throttle_gates_slot() {
                (
                    TrafficState::new(raw.s1 && gate[0], raw.s2 && gate[1]),
                    [true, true],
                )
            } else {
                (raw, gate)
            }
        };

        // Policies. Transmitters get last slot's public state and their own bit.
        let mut tx_out: [Vec<TxEmission>; 2] = [Vec::new(), Vec::new()];
        for u in User::BOTH {
            let tx = &mut txs[u.index()];
            tx.observe_feedback(prev);
            tx_out[u.index()] = tx.emit(state.active(u), gate[u.index()], !draining);
        }
        let relay_out: Vec<RelayEmission> = relay.transmit(state);

        // Assemble numeric transmissions and symbolic streams.
        let mut tx = SlotTransmission::silent(cfg);
        tx.active = state.as_array();
        let mut streams = Vec::new();
        for u in User::BOTH {
            for e in &tx_out[u.index()] {
                if let Some(id) = e.fresh {
                    let seq = id.seq as usize;
                    debug_assert_eq!(seq, emitted_at[u.index()].len());
                    emitted_at[u.index()].push(slot as u32);
                    m.emitted_fresh[u.index()] += 1;
                    if id.user == u {
                        undecoded[u.index()].insert(id);
                    }
                }
                let value = e.content.eval(field, truth);
                field.axpy(
                    &mut tx.tx[u.index()],
                    &bank.tx_vector(cfg, u, e.port),
                    value,
                );
                let img = images.tx(&net, &bank, u, e.port);
                for node in e.port.null_targets(u) {
                    if img[node_index(node)].iter().any(|&x| x != 0) {
                        m.zf_violations += 1;
                    }
                }
                streams.push(Stream {
                    images: (0..3).map(|i| (i, img[i].clone())).collect(),
                    content: e.content.clone(),
                    value,
                });
            }
        }
        for e in &relay_out {
            field.axpy(&mut tx.relay, &bank.relay_vector(cfg, e.port), e.value);
            let img = images.relay(&net, &bank, e.port);
            for node in e.port.null_targets() {
                if img[node_index(node)].iter().any(|&x| x != 0) {
                    m.zf_violations += 1;
                }
            }
            streams.push(Stream {
                images: (0..2).map(|i| (i, img[i].clone())).collect(),
                content: e.content.clone(),
                value: e.value,
            });
        }

        let rx = net.propagate(&tx)?;

        // Per-antenna observations: symbolic map plus the numeric value heard.
        let mut observed: [Vec<(LinComb, FieldElement)>; 3] = Default::default();
        for node in NODES {
            let ni = node_index(node);
            let heard = rx.at(node);
            for (r, &value) in heard.iter().enumerate() {
                let mut comb = LinComb::zero();
                let mut predicted = 0;
                for s in &streams {
                    if let Some((_, img)) = s.images.iter().find(|(i, _)| *i == ni) {
                        let c = img[r];
                        if c != 0 {
                            comb = comb.add_scaled(field, &s.content, c);
                            predicted = field.mul_add(predicted, c, s.value);
                        }
                    }
                }
                if predicted != value || comb.eval(field, truth) != value {
                    m.observation_mismatches += 1;
                }
                observed[ni].push((comb, value));
            }
        }

        relay.receive(
            state,
            observed[2]
                .iter()
                .map(|(c, v)| RelayEntry {
                    value: *v,
                    content: c.clone(),
                })
                .collect(),
        );

        let mut decoded_now: [Vec<SymbolId>; 2] = [Vec::new(), Vec::new()];
        for u in User::BOTH {
            for (comb, value) in &observed[u.index()] {
                if comb.is_zero() && *value == 0 {
                    continue;
                }
                if kind == SchemeKind::CoopNullC2 && comb.involves(u.other()) {
                    m.foreign_observations += 1;
                }
                let newly = ledgers[u.index()].ingest(comb, *value).map_err(|source| {
                    SimError::Inconsistent {
                        receiver: u,
                        source,
                    }
                })?;
                for id in newly {
                    if ledgers[u.index()].value(id) != Some(truth(id)) {
                        m.decode_mismatches += 1;
                    }
                    if id.user == u {
                        m.decoded_fresh[u.index()] += 1;
                        undecoded[u.index()].remove(&id);
                        let at = emitted_at[u.index()][id.seq as usize] as u64;
                        *m.latency.entry(slot as u64 - at).or_default() += 1;
                    }
                    if sim.record_events {
                        m.events.push(DecodeEvent {
                            slot,
                            receiver: u,
                            symbol: id,
                        });
                    }
                    decoded_now[u.index()].push(id);
                }
            }
        }

        if sim.audit {
            let held = relay.stored_symbols();
            for u in User::BOTH {
                let rows = ledgers[u.index()].pending_symbols();
                m.conservation_violations += undecoded[u.index()]
                    .iter()
                    .filter(|id| !rows.contains(id) && !held.contains(id))
                    .count() as u64;
                let pending = undecoded[u.index()].len() as u64;
                if m.emitted_fresh[u.index()] != m.decoded_fresh[u.index()] + pending {
                    m.conservation_violations += 1;
                }
            }
        }

        let lengths = relay.lengths();
        for (stat, &(_, len)) in m.queues.iter_mut().zip(&lengths) {
            stat.max = stat.max.max(len);
            if !draining && len == 0 && t >= sim.warmup && sim.window > 0 {
                let w = (t - sim.warmup) / sim.window;
                if w < stat.window_hits.len() {
                    stat.window_hits[w] = true;
                }
            }
        }

        if let Some(sink) = log.as_deref_mut() {
            let record = serde_json::json!({
                "slot": slot,
                "phase": if draining { "drain" } else { "main" },
                "state": [state.s1 as u8, state.s2 as u8],
                "emissions": {
                    "tx1": labels(tx_out[0].iter().map(|e| &e.content)),
                    "tx2": labels(tx_out[1].iter().map(|e| &e.content)),
                    "relay": labels(relay_out.iter().map(|e| &e.content)),
                },
                "decoded": {
                    "rx1": decoded_now[0].iter().map(SymbolId::label).collect::<Vec<_>>(),
                    "rx2": decoded_now[1].iter().map(SymbolId::label).collect::<Vec<_>>(),
                },
                "queues": lengths.iter().map(|&(n, l)| (n.to_string(), l)).collect::<BTreeMap<_, _>>(),
            });
            writeln!(sink, "{record}")?;
        }

        prev = state;
    }

    m.queues_empty_at_end = relay.is_empty();
    for u in User::BOTH {
        m.empirical_dof[u.index()] = m.decoded_fresh[u.index()] as f64 / sim.slots as f64;
    }
    Ok(m)
}

/// Mean and standard error of the per-user empirical DoF over repetitions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DofEstimate {
    pub mean: [f64; 2],
    pub stderr: [f64; 2],
    pub sum_mean: f64,
    pub sum_stderr: f64,
    pub runs: Vec<Metrics>,
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Seed of repetition `r`.
pub fn repetition_seed(seed: u64, r: usize) -> u64 {
    derive_seed(seed, "repetition", r as u64)
}

/// Runs `repetitions` independent copies (in parallel) with derived seeds.
pub fn estimate_dof(sim: &SimConfig, repetitions: usize) -> Result<DofEstimate, SimError> {
    let repetitions = repetitions.max(1);
    let runs: Vec<Metrics> = (0..repetitions)
        .into_par_iter()
        .map(|r| {
            let mut s = sim.clone();
            s.seed = repetition_seed(sim.seed, r);
            run(&s)
        })
        .collect::<Result<_, _>>()?;
    let per = |k: usize| runs.iter().map(|m| m.empirical_dof[k]).collect::<Vec<_>>();
    let (m1, s1) = mean_stderr(&per(0));
    let (m2, s2) = mean_stderr(&per(1));
    let (sm, ss) = mean_stderr(&runs.iter().map(Metrics::sum_dof).collect::<Vec<_>>());
    Ok(DofEstimate {
        mean: [m1, m2],
        stderr: [s1, s2],
        sum_mean: sm,
        sum_stderr: ss,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(pairs: &[(u8, u8)]) -> TrafficTrace {
        TrafficTrace::from_pairs(pairs)
    }

    #[test]
    fn idle_trace_decodes_nothing() {
        let sim = SimConfig::forced(
            AntennaConfig::new(4, 1, 2),
            SchemeKind::CoopNullC2,
            trace(&[(0, 0); 6]),
            1,
        );
        let m = run(&sim).unwrap();
        assert_eq!(m.decoded_fresh, [0, 0]);
        assert_eq!(m.empirical_dof, [0.0, 0.0]);
        assert_eq!(m.drain_used, 0);
        assert!(stability_report(&m).is_stable());
    }

    #[test]
    fn naive_scheme_decodes_everything_immediately() {
        let mut sim = SimConfig::new(
            AntennaConfig::new(1, 3, 0),
            TrafficModel::new(0.4, 0.01),
            SchemeKind::NaiveC1,
            2000,
            3,
        );
        sim.audit = true;
        let m = run(&sim).unwrap();
        assert_eq!(m.emitted_fresh, m.decoded_fresh);
        assert!(m.exact());
        assert_eq!(m.latency.keys().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn rejects_bad_configs() {
        let sim = SimConfig::new(
            AntennaConfig::new(4, 1, 2),
            TrafficModel::default(),
            SchemeKind::SideInfoC3,
            10,
            0,
        );
        assert!(matches!(run(&sim), Err(SimError::Incompatible { .. })));
        let mut sim = SimConfig::new(
            AntennaConfig::new(4, 1, 2),
            TrafficModel::default(),
            SchemeKind::CoopNullC2,
            3,
            0,
        );
        sim.forced_trace = Some(trace(&[(1, 1)]));
        assert!(matches!(
            run(&sim),
            Err(SimError::Config(ConfigError::TraceLength { .. }))
        ));
        let sim = SimConfig::new(
            AntennaConfig::new(4, 1, 2),
            TrafficModel::new(1.2, 0.01),
            SchemeKind::CoopNullC2,
            3,
            0,
        );
        assert!(matches!(
            run(&sim),
            Err(SimError::Config(ConfigError::POutOfRange(_)))
        ));
    }

    #[test]
    fn stability_windows() {
        let mk = |hits: Vec<bool>| Metrics {
            slots: 0,
            drain_used: 0,
            throttle: 1.0,
            emitted_fresh: [0, 0],
            decoded_fresh: [0, 0],
            empirical_dof: [0.0, 0.0],
            decode_mismatches: 0,
            zf_violations: 0,
            observation_mismatches: 0,
            foreign_observations: 0,
            conservation_violations: 0,
            queues: vec![QueueStats {
                name: "type1",
                max: 3,
                window_hits: hits,
            }],
            queues_empty_at_end: true,
            latency: BTreeMap::new(),
            events: vec![],
            window: 100,
            warmup: 50,
        };
        assert_eq!(
            stability_report(&mk(vec![true, true])),
            StabilityVerdict::Stable
        );
        assert_eq!(
            stability_report(&mk(vec![true, false, false])),
            StabilityVerdict::Unstable {
                queue: "type1".into(),
                window_start: 151
            }
        );
    }

    #[test]
    fn mean_and_stderr() {
        assert_eq!(mean_stderr(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-12);
    }
}
