//! Concrete noiseless linear-deterministic networks: channel matrices drawn
//! generically over a prime field, zero-forcing precoders derived from them,
//! and exact per-slot propagation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{FieldElement, LinalgError, Matrix, PrimeField, MAX_GENERICITY_ATTEMPTS};
use crate::seeds::derive_seed;
use crate::types::{AntennaConfig, User};

/// Which precoders a scheme needs; mirrors the scheme kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrecoderRegime {
    /// Raw antennas, receivers resolve both users jointly.
    Naive,
    /// Transmitter and relay zero-forcing bases.
    CooperativeNulling,
    /// Transmitter bases only; the relay broadcasts.
    SideInformation,
    /// Single-antenna users; the relay's stored sum must be fresh to both receivers.
    Siso,
}

/// A receiving node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Node {
    Rx(User),
    Relay,
}

/// Basis slot a transmitter stream is sent on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TxPort {
    /// Nulled at the other receiver and the relay.
    OwnRx(usize),
    /// Nulled at both receivers.
    Relay(usize),
    /// Nulled at the own receiver and the relay.
    CrossRx(usize),
    /// Unit vector on one antenna, no nulling.
    Antenna(usize),
}

impl TxPort {
    pub fn null_targets(self, user: User) -> Vec<Node> {
        match self {
            TxPort::OwnRx(_) => vec![Node::Rx(user.other()), Node::Relay],
            TxPort::Relay(_) => vec![Node::Rx(User::One), Node::Rx(User::Two)],
            TxPort::CrossRx(_) => vec![Node::Rx(user), Node::Relay],
            TxPort::Antenna(_) => vec![],
        }
    }
}

/// Basis slot a relay stream is sent on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelayPort {
    /// Nulled at the other receiver.
    ToRx(User, usize),
    /// Unit vector on one relay antenna (broadcast).
    Antenna(usize),
}

impl RelayPort {
    pub fn null_targets(self) -> Vec<Node> {
        match self {
            RelayPort::ToRx(u, _) => vec![Node::Rx(u.other())],
            RelayPort::Antenna(_) => vec![],
        }
    }
}

/// Zero-forcing bases of one transmitter. Each basis is normalised so that
/// its image at the intended node is the identity: stream `i` arrives on
/// antenna `i` of the target.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TxPrecoders {
    pub own_rx: Vec<Vec<FieldElement>>,
    pub relay: Vec<Vec<FieldElement>>,
    pub cross_rx: Vec<Vec<FieldElement>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecoderBank {
    pub tx: [TxPrecoders; 2],
    /// Per-receiver relay bases, present only under cooperative nulling.
    pub relay_to_rx: Option<[Vec<Vec<FieldElement>>; 2]>,
}

/// Channel matrices of one network realisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkInstance {
    pub config: AntennaConfig,
    pub field: PrimeField,
    pub seed: u64,
    /// `rx_from_tx[j][i]`: N×M, transmitter i to receiver j.
    pub rx_from_tx: [[Matrix; 2]; 2],
    /// `relay_from_tx[i]`: L×M.
    pub relay_from_tx: [Matrix; 2],
    /// `rx_from_relay[j]`: N×L.
    pub rx_from_relay: [Matrix; 2],
}

/// What every node puts on the air in one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotTransmission {
    pub active: [bool; 2],
    pub tx: [Vec<FieldElement>; 2],
    pub relay: Vec<FieldElement>,
}

impl SlotTransmission {
    pub fn silent(config: AntennaConfig) -> Self {
        Self {
            active: [false, false],
            tx: [vec![0; config.m], vec![0; config.m]],
            relay: vec![0; config.l],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotReception {
    pub rx: [Vec<FieldElement>; 2],
    pub relay: Vec<FieldElement>,
}

impl SlotReception {
    pub fn at(&self, node: Node) -> &[FieldElement] {
        match node {
            Node::Rx(u) => &self.rx[u.index()],
            Node::Relay => &self.relay,
        }
    }
}

impl NetworkInstance {
    fn draw(config: AntennaConfig, field: PrimeField, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let AntennaConfig { m, n, l } = config;
        let mut mat = |r, c| Matrix::random(field, r, c, &mut rng);
        let rx_from_tx = [[mat(n, m), mat(n, m)], [mat(n, m), mat(n, m)]];
        let relay_from_tx = [mat(l, m), mat(l, m)];
        let rx_from_relay = [mat(n, l), mat(n, l)];
        Self {
            config,
            field,
            seed,
            rx_from_tx,
            relay_from_tx,
            rx_from_relay,
        }
    }

    fn all_full_rank(&self) -> bool {
        self.rx_from_tx.iter().flatten().all(Matrix::is_full_rank)
            && self.relay_from_tx.iter().all(Matrix::is_full_rank)
            && self.rx_from_relay.iter().all(Matrix::is_full_rank)
    }

    /// Channel from transmitter `user` to `node`.
    pub fn channel_from_tx(&self, user: User, node: Node) -> &Matrix {
        match node {
            Node::Rx(j) => &self.rx_from_tx[j.index()][user.index()],
            Node::Relay => &self.relay_from_tx[user.index()],
        }
    }

    pub fn channel_from_relay(&self, rx: User) -> &Matrix {
        &self.rx_from_relay[rx.index()]
    }

    /// Exact noiseless reception for one slot.
    pub fn propagate(&self, tx: &SlotTransmission) -> Result<SlotReception, LinalgError> {
        let AntennaConfig { m, n, l } = self.config;
        if tx.tx.iter().any(|x| x.len() != m) || tx.relay.len() != l {
            return Err(LinalgError::DimensionMismatch(format!(
                "transmission lengths {:?}/{} for config {}",
                tx.tx.iter().map(Vec::len).collect::<Vec<_>>(),
                tx.relay.len(),
                self.config
            )));
        }
        let f = self.field;
        let mut rx = [vec![0; n], vec![0; n]];
        let mut relay = vec![0; l];
        for user in User::BOTH {
            if !tx.active[user.index()] {
                continue;
            }
            let x = &tx.tx[user.index()];
            for j in User::BOTH {
                let y = self.channel_from_tx(user, Node::Rx(j)).mul_vec(x)?;
                add_into(f, &mut rx[j.index()], &y);
            }
            let y = self.channel_from_tx(user, Node::Relay).mul_vec(x)?;
            add_into(f, &mut relay, &y);
        }
        for j in User::BOTH {
            let y = self.channel_from_relay(j).mul_vec(&tx.relay)?;
            add_into(f, &mut rx[j.index()], &y);
        }
        Ok(SlotReception { rx, relay })
    }

    /// JSON audit record of the channel realisation.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = |m: &Matrix| m.to_rows();
        serde_json::json!({
            "prime": self.field.modulus(),
            "seed": self.seed,
            "config": { "M": self.config.m, "N": self.config.n, "L": self.config.l },
            "rx_from_tx": self.rx_from_tx.iter()
                .map(|row| row.iter().map(rows).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "relay_from_tx": self.relay_from_tx.iter().map(rows).collect::<Vec<_>>(),
            "rx_from_relay": self.rx_from_relay.iter().map(rows).collect::<Vec<_>>(),
        })
    }
}

fn add_into(f: PrimeField, acc: &mut [FieldElement], y: &[FieldElement]) {
    for (a, &b) in acc.iter_mut().zip(y) {
        *a = f.add(*a, b);
    }
}

/// `count` null-space vectors of `null_of`, normalised so their image under
/// `target` is the identity. `None` when the null space is too small or the
/// image is rank-deficient.
fn normalised_basis(
    null_of: &Matrix,
    target: &Matrix,
    count: usize,
) -> Option<Vec<Vec<FieldElement>>> {
    let field = null_of.field();
    let basis = null_of.null_space_basis();
    if basis.len() < count {
        return None;
    }
    if count == 0 {
        return Some(Vec::new());
    }
    let chosen = Matrix::from_columns(field, null_of.cols(), &basis[..count]);
    let image = target.mul(&chosen).ok()?;
    if image.rows() != count {
        return None;
    }
    let normalised = chosen.mul(&image.inverse()?).ok()?;
    Some((0..count).map(|c| normalised.column(c)).collect())
}

fn dimension_check(config: AntennaConfig, regime: PrecoderRegime) -> Result<(), String> {
    let AntennaConfig { m, n, l } = config;
    match regime {
        PrecoderRegime::Naive if 2 * m > n => Err(format!(
            "receivers need N >= 2M to separate both users, got {config}"
        )),
        PrecoderRegime::CooperativeNulling | PrecoderRegime::SideInformation if m < 2 * n + l => {
            Err(format!("transmitter bases need M >= 2N + L, got {config}"))
        }
        PrecoderRegime::CooperativeNulling if l < 2 * n => {
            Err(format!("relay bases need L >= 2N, got {config}"))
        }
        PrecoderRegime::SideInformation if l > n => {
            Err(format!("side information needs L <= N, got {config}"))
        }
        PrecoderRegime::Siso if !(m == 1 && n == 1 && l >= 1) => Err(format!(
            "SISO relay scheme needs M = N = 1 and L >= 1, got {config}"
        )),
        _ => Ok(()),
    }
}

fn build_bank(net: &NetworkInstance, regime: PrecoderRegime) -> Option<PrecoderBank> {
    let AntennaConfig { n, l, .. } = net.config;
    let f = net.field;
    let mut bank = PrecoderBank::default();
    match regime {
        PrecoderRegime::Naive => {
            for j in User::BOTH {
                let joint = Matrix::hstack(&[
                    net.channel_from_tx(User::One, Node::Rx(j)),
                    net.channel_from_tx(User::Two, Node::Rx(j)),
                ])
                .ok()?;
                if joint.rank() != joint.cols() {
                    return None;
                }
            }
        }
        PrecoderRegime::CooperativeNulling | PrecoderRegime::SideInformation => {
            for k in User::BOTH {
                let own = net.channel_from_tx(k, Node::Rx(k));
                let other = net.channel_from_tx(k, Node::Rx(k.other()));
                let relay = net.channel_from_tx(k, Node::Relay);
                let own_rx = normalised_basis(&Matrix::vstack(&[other, relay]).ok()?, own, n)?;
                let relay_b = normalised_basis(&Matrix::vstack(&[own, other]).ok()?, relay, l)?;
                let cross = normalised_basis(&Matrix::vstack(&[own, relay]).ok()?, other, n)?;
                bank.tx[k.index()] = TxPrecoders {
                    own_rx,
                    relay: relay_b,
                    cross_rx: cross,
                };
            }
            if regime == PrecoderRegime::CooperativeNulling {
                let to_rx = |u: User| {
                    normalised_basis(
                        net.channel_from_relay(u.other()),
                        net.channel_from_relay(u),
                        n,
                    )
                };
                bank.relay_to_rx = Some([to_rx(User::One)?, to_rx(User::Two)?]);
            } else {
                // A receiver whose transmitter is idle hears the relay's L streams
                // plus N - L side-information streams on its first antennas.
                for j in User::BOTH {
                    let mut cols: Vec<Vec<FieldElement>> = (0..l)
                        .map(|c| net.channel_from_relay(j).column(c))
                        .collect();
                    for i in 0..(n - l) {
                        let mut e = vec![0; n];
                        e[i] = 1;
                        cols.push(e);
                    }
                    if Matrix::from_columns(f, n, &cols).rank() != n {
                        return None;
                    }
                }
            }
        }
        PrecoderRegime::Siso => {
            // The relay's stored reception, forwarded later, must be independent
            // of each receiver's own collision equation.
            for j in User::BOTH {
                let g = net.channel_from_relay(j);
                let via_relay = [
                    g.mul(net.channel_from_tx(User::One, Node::Relay)).ok()?,
                    g.mul(net.channel_from_tx(User::Two, Node::Relay)).ok()?,
                ];
                let direct = [
                    net.channel_from_tx(User::One, Node::Rx(j)),
                    net.channel_from_tx(User::Two, Node::Rx(j)),
                ];
                let system = Matrix::from_rows(
                    f,
                    &[
                        vec![direct[0].get(0, 0) as i64, direct[1].get(0, 0) as i64],
                        vec![via_relay[0].get(0, 0) as i64, via_relay[1].get(0, 0) as i64],
                    ],
                );
                if system.rank() != 2 {
                    return None;
                }
            }
        }
    }
    Some(bank)
}

/// Draws a generic network for `config` and the precoders `regime` requires.
///
/// Each attempt uses its own sub-seed derived from `seed`; the result is a
/// pure function of the arguments.
pub fn instantiate(
    config: AntennaConfig,
    field: PrimeField,
    seed: u64,
    regime: PrecoderRegime,
) -> Result<(NetworkInstance, PrecoderBank), LinalgError> {
    if let Err(what) = dimension_check(config, regime) {
        return Err(LinalgError::GenericityFailure { attempts: 0, what });
    }
    for attempt in 0..MAX_GENERICITY_ATTEMPTS {
        let net =
            NetworkInstance::draw(config, field, derive_seed(seed, "channel", attempt as u64));
        if !net.all_full_rank() {
            continue;
        }
        if let Some(bank) = build_bank(&net, regime) {
            return Ok((NetworkInstance { seed, ..net }, bank));
        }
    }
    Err(LinalgError::GenericityFailure {
        attempts: MAX_GENERICITY_ATTEMPTS,
        what: format!("no generic {regime:?} network for {config}"),
    })
}

impl PrecoderBank {
    /// Transmit vector for `port` of transmitter `user` (length M).
    pub fn tx_vector(&self, config: AntennaConfig, user: User, port: TxPort) -> Vec<FieldElement> {
        let p = &self.tx[user.index()];
        match port {
            TxPort::OwnRx(i) => p.own_rx[i].clone(),
            TxPort::Relay(i) => p.relay[i].clone(),
            TxPort::CrossRx(i) => p.cross_rx[i].clone(),
            TxPort::Antenna(i) => unit(config.m, i),
        }
    }

    /// Relay vector for `port` (length L).
    pub fn relay_vector(&self, config: AntennaConfig, port: RelayPort) -> Vec<FieldElement> {
        match port {
            RelayPort::ToRx(u, i) => self
                .relay_to_rx
                .as_ref()
                .expect("relay bases not instantiated")[u.index()][i]
                .clone(),
            RelayPort::Antenna(i) => unit(config.l, i),
        }
    }
}

fn unit(len: usize, i: usize) -> Vec<FieldElement> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}
