//! The four transmission schemes as deterministic per-slot state machines.

mod ledger;
mod relay;
mod transmitter;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ledger::{InconsistentSystem, ReceiverLedger};
pub use relay::{RelayEmission, RelayEntry, RelayQueues};
pub use transmitter::{TransmitterState, TxEmission};

use crate::network::PrecoderRegime;
use crate::types::{AntennaConfig, ConfigError, RegimeClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    NaiveC1,
    CoopNullC2,
    SideInfoC3,
    SisoRelay,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::NaiveC1,
        SchemeKind::CoopNullC2,
        SchemeKind::SideInfoC3,
        SchemeKind::SisoRelay,
    ];

    /// The scheme that serves `regime`, if any.
    pub fn for_regime(regime: RegimeClass) -> Option<SchemeKind> {
        match regime {
            RegimeClass::C1 => Some(SchemeKind::NaiveC1),
            RegimeClass::C2 => Some(SchemeKind::CoopNullC2),
            RegimeClass::C3Prime => Some(SchemeKind::SideInfoC3),
            RegimeClass::Siso => Some(SchemeKind::SisoRelay),
            RegimeClass::C3Only | RegimeClass::None => None,
        }
    }

    pub fn for_config(config: AntennaConfig) -> Option<SchemeKind> {
        Self::for_regime(config.classify())
    }

    /// Whether the scheme's antenna requirements hold for `config`. Wider
    /// than the classification: e.g. (1,2,0) is both C1 and naive-compatible,
    /// and (1,1,L) runs the SISO scheme.
    pub fn compatible(self, config: AntennaConfig) -> bool {
        let AntennaConfig { m, n, l } = config;
        match self {
            SchemeKind::NaiveC1 => 2 * m <= n,
            SchemeKind::CoopNullC2 => m >= 2 * n + l && l >= 2 * n,
            SchemeKind::SideInfoC3 => m >= 2 * n + l && 3 * l <= n,
            SchemeKind::SisoRelay => m == 1 && n == 1 && l >= 1,
        }
    }

    pub fn precoders(self) -> PrecoderRegime {
        match self {
            SchemeKind::NaiveC1 => PrecoderRegime::Naive,
            SchemeKind::CoopNullC2 => PrecoderRegime::CooperativeNulling,
            SchemeKind::SideInfoC3 => PrecoderRegime::SideInformation,
            SchemeKind::SisoRelay => PrecoderRegime::Siso,
        }
    }

    /// Whether the throttle silences the whole slot (as opposed to only the
    /// relay-bound streams).
    pub fn throttle_gates_slot(self) -> bool {
        !matches!(self, SchemeKind::SideInfoC3)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::NaiveC1 => "NaiveC1",
            SchemeKind::CoopNullC2 => "CoopNullC2",
            SchemeKind::SideInfoC3 => "SideInfoC3",
            SchemeKind::SisoRelay => "SisoRelay",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// Per-slot emission probability `q` for scheme `kind`.
///
/// Below the scheme's traffic threshold `q = 1`; above it, `q` is chosen so
/// the relay queues stay stable with slack `epsilon`.
pub fn derive_throttle(
    kind: SchemeKind,
    config: AntennaConfig,
    p: f64,
    epsilon: f64,
) -> Result<f64, ConfigError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ConfigError::POutOfRange(p));
    }
    let q = match kind {
        SchemeKind::NaiveC1 => 1.0,
        SchemeKind::CoopNullC2 => {
            let threshold = config.n as f64 / (config.n + config.l) as f64;
            if p < threshold {
                1.0
            } else {
                (threshold - epsilon) / p
            }
        }
        SchemeKind::SideInfoC3 => {
            if p < 0.5 {
                1.0
            } else {
                (1.0 - p - epsilon) / p
            }
        }
        SchemeKind::SisoRelay => {
            if p < 0.5 {
                1.0
            } else {
                (1.0 - epsilon) / (2.0 * p)
            }
        }
    };
    if !(0.0..=1.0).contains(&q) {
        return Err(ConfigError::QOutOfRange(q));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn throttle_examples() {
        let c2 = AntennaConfig::new(4, 1, 2);
        let q = derive_throttle(SchemeKind::CoopNullC2, c2, 0.6, 0.01).unwrap();
        assert!((q - (1.0 / 3.0 - 0.01) / 0.6).abs() < 1e-12);
        assert!((q - 0.538_89).abs() < 1e-5);
        let c3 = AntennaConfig::new(7, 3, 1);
        assert!(
            (derive_throttle(SchemeKind::SideInfoC3, c3, 0.75, 0.01).unwrap() - 0.32).abs() < 1e-12
        );
        let siso = AntennaConfig::new(1, 1, 2);
        assert!(
            (derive_throttle(SchemeKind::SisoRelay, siso, 0.7, 0.02).unwrap() - 0.7).abs() < 1e-12
        );
        for kind in SchemeKind::ALL {
            assert_eq!(derive_throttle(kind, c2, 0.1, 0.01).unwrap(), 1.0);
        }
        assert_eq!(
            derive_throttle(SchemeKind::NaiveC1, c2, 0.9, 0.01).unwrap(),
            1.0
        );
    }

    #[test]
    fn throttle_keeps_pq_below_one_and_rejects_bad_slack() {
        let cfg = AntennaConfig::new(7, 3, 1);
        for k in 0..=99 {
            let p = k as f64 / 100.0;
            for kind in SchemeKind::ALL {
                let q = derive_throttle(kind, cfg, p, 0.01).unwrap();
                assert!((0.0..=1.0).contains(&q) && p * q <= 1.0);
            }
        }
        // the side-information relay rate 1 - p - epsilon turns negative at p = 1
        assert!(derive_throttle(SchemeKind::SideInfoC3, cfg, 1.0, 0.01).is_err());
        // slack larger than the threshold drives q negative
        assert!(matches!(
            derive_throttle(SchemeKind::SideInfoC3, cfg, 0.9, 0.5),
            Err(ConfigError::QOutOfRange(_))
        ));
        assert!(derive_throttle(SchemeKind::SisoRelay, cfg, 1.5, 0.01).is_err());
    }

    #[test]
    fn p_one_is_valid() {
        let q = derive_throttle(
            SchemeKind::CoopNullC2,
            AntennaConfig::new(4, 1, 2),
            1.0,
            0.01,
        )
        .unwrap();
        assert!((q - (1.0 / 3.0 - 0.01)).abs() < 1e-12);
    }

    #[test]
    fn regime_mapping_and_parse() {
        assert_eq!(
            SchemeKind::for_config(AntennaConfig::new(4, 1, 2)),
            Some(SchemeKind::CoopNullC2)
        );
        assert_eq!(
            SchemeKind::for_config(AntennaConfig::new(7, 3, 1)),
            Some(SchemeKind::SideInfoC3)
        );
        assert_eq!(
            SchemeKind::for_config(AntennaConfig::new(1, 1, 2)),
            Some(SchemeKind::SisoRelay)
        );
        assert_eq!(
            SchemeKind::for_config(AntennaConfig::new(1, 3, 0)),
            Some(SchemeKind::NaiveC1)
        );
        assert_eq!(SchemeKind::for_config(AntennaConfig::new(6, 3, 1)), None);
        assert_eq!(
            "coopnullc2".parse::<SchemeKind>(),
            Ok(SchemeKind::CoopNullC2)
        );
        assert!("bogus".parse::<SchemeKind>().is_err());
        for kind in SchemeKind::ALL {
            assert_eq!(kind.to_string().parse::<SchemeKind>(), Ok(kind));
        }
    }
}
