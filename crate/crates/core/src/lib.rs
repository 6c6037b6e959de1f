//! Analysis and simulation of the two-user bursty MIMO interference channel
//! with an in-band relay.
//!
//! * [`formulas`] evaluates the degrees-of-freedom bounds, the achievable
//!   scheme regions and the antenna conditions in exact rationals.
//! * [`network`], [`schemes`] and [`sim`] run the achievable schemes
//!   symbol-exactly over a prime field on a noiseless linear channel and
//!   measure the delivered symbols per slot.

pub mod formulas;
pub mod linalg;
pub mod network;
pub mod region;
pub mod schemes;
pub mod seeds;
pub mod sim;
pub mod symbols;
pub mod types;

pub use formulas::{
    achievable_per_user, achievable_region, bounds, interference_free_check, necessary_condition,
    numeric_necessity_oracle, outer_region, parse_probability, probability_from_f64,
    relay_channel_dof, sufficient_condition, sum_dof_bound, BoundSet, FormulaError,
};
pub use linalg::{LinalgError, Matrix, PrimeField, DEFAULT_PRIME};
pub use network::{instantiate, NetworkInstance, PrecoderBank, PrecoderRegime};
pub use region::{DofRegion, HalfPlane, Q};
pub use schemes::{derive_throttle, SchemeKind};
pub use sim::{
    estimate_dof, run, stability_report, DofEstimate, Metrics, SimConfig, SimError,
    StabilityVerdict,
};
pub use types::{
    classify, validate_config, AntennaConfig, ConfigError, RegimeClass, StreamClass, SymbolId,
    TrafficModel, TrafficState, TrafficTrace, User,
};
