//! Shared domain vocabulary: antenna configurations, traffic, regimes and
//! symbol identities.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the two transmitter/receiver pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    pub const BOTH: [User; 2] = [User::One, User::Two];

    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }

    pub fn from_index(i: usize) -> User {
        match i {
            0 => User::One,
            1 => User::Two,
            _ => panic!("user index {i} out of range"),
        }
    }

    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }

    /// Letter used for this user's symbols in logs (`a` for user 1, `b` for user 2).
    pub fn letter(self) -> char {
        match self {
            User::One => 'a',
            User::Two => 'b',
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Antenna counts: `m` per transmitter, `n` per receiver, `l` at the relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntennaConfig {
    pub m: usize,
    pub n: usize,
    pub l: usize,
}

impl AntennaConfig {
    pub const fn new(m: usize, n: usize, l: usize) -> Self {
        Self { m, n, l }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m == 0 {
            return Err(ConfigError::NonPositiveM);
        }
        if self.n == 0 {
            return Err(ConfigError::NonPositiveN);
        }
        Ok(())
    }

    pub fn classify(&self) -> RegimeClass {
        classify(*self)
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m, self.n, self.l)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("M must be positive")]
    NonPositiveM,
    #[error("N must be positive")]
    NonPositiveN,
    #[error("p out of range: {0} (expected 0 <= p <= 1)")]
    POutOfRange(f64),
    #[error("epsilon out of range: {0} (expected 0 < epsilon < 1)")]
    EpsilonOutOfRange(f64),
    #[error("q out of range: {0} (expected 0 <= q <= 1)")]
    QOutOfRange(f64),
    #[error("trace length {got} does not match horizon {expected}")]
    TraceLength { expected: usize, got: usize },
}

/// Bernoulli traffic parameters.
///
/// `q_override` pins the throttle probability instead of deriving it from
/// the scheme; `Some(1.0)` disables throttling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficModel {
    pub p: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub q_override: Option<f64>,
}

impl TrafficModel {
    pub fn new(p: f64, epsilon: f64) -> Self {
        Self {
            p,
            epsilon,
            q_override: None,
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q_override = Some(q);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(ConfigError::POutOfRange(self.p));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(ConfigError::EpsilonOutOfRange(self.epsilon));
        }
        if let Some(q) = self.q_override {
            if !(0.0..=1.0).contains(&q) {
                return Err(ConfigError::QOutOfRange(q));
            }
        }
        Ok(())
    }
}

impl Default for TrafficModel {
    fn default() -> Self {
        Self::new(0.2, 0.01)
    }
}

pub fn validate_config(config: &AntennaConfig, model: &TrafficModel) -> Result<(), ConfigError> {
    config.validate()?;
    model.validate()
}

/// Per-slot activity of the two transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TrafficState {
    pub s1: bool,
    pub s2: bool,
}

impl TrafficState {
    pub const IDLE: TrafficState = TrafficState {
        s1: false,
        s2: false,
    };

    pub fn new(s1: bool, s2: bool) -> Self {
        Self { s1, s2 }
    }

    pub fn active(&self, user: User) -> bool {
        match user {
            User::One => self.s1,
            User::Two => self.s2,
        }
    }

    pub fn as_array(&self) -> [bool; 2] {
        [self.s1, self.s2]
    }
}

impl fmt::Display for TrafficState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s1 as u8, self.s2 as u8)
    }
}

/// A fixed sequence of traffic states, one per slot.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TrafficTrace {
    pub states: Vec<TrafficState>,
}

impl TrafficTrace {
    pub fn new(states: Vec<TrafficState>) -> Self {
        Self { states }
    }

    pub fn from_pairs(pairs: &[(u8, u8)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(a, b)| TrafficState::new(a != 0, b != 0))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Parses the text format: one slot per line as `s1 s2`, with `#` comments
    /// and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, TraceParseError> {
        let mut states = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bits: Vec<&str> = line.split_whitespace().collect();
            let parse_bit = |s: &str| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(TraceParseError {
                    line: lineno + 1,
                    content: raw.to_string(),
                }),
            };
            if bits.len() != 2 {
                return Err(TraceParseError {
                    line: lineno + 1,
                    content: raw.to_string(),
                });
            }
            states.push(TrafficState::new(parse_bit(bits[0])?, parse_bit(bits[1])?));
        }
        Ok(Self { states })
    }

    pub fn to_text(&self) -> String {
        self.states
            .iter()
            .map(|s| format!("{} {}\n", s.s1 as u8, s.s2 as u8))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed trace line {line}: {content:?} (expected \"s1 s2\" with bits 0/1)")]
pub struct TraceParseError {
    pub line: usize,
    pub content: String,
}

/// Antenna-configuration regime.
///
/// `C3Only` names the configurations meeting the necessary condition's third
/// clause but not the sufficient one, for which no scheme is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeClass {
    C1,
    C2,
    C3Prime,
    C3Only,
    Siso,
    None,
}

impl fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeClass::C1 => "C1",
            RegimeClass::C2 => "C2",
            RegimeClass::C3Prime => "C3prime",
            RegimeClass::C3Only => "C3only",
            RegimeClass::Siso => "SISO",
            RegimeClass::None => "None",
        };
        f.write_str(s)
    }
}

pub fn classify(config: AntennaConfig) -> RegimeClass {
    let AntennaConfig { m, n, l } = config;
    if m == 1 && n == 1 && l >= 1 {
        return RegimeClass::Siso;
    }
    if 2 * m <= n {
        RegimeClass::C1
    } else if m >= 2 * n + l && l >= 2 * n {
        RegimeClass::C2
    } else if m >= 2 * n + l && 3 * l <= n {
        RegimeClass::C3Prime
    } else if m >= 2 * n && 3 * l <= n {
        RegimeClass::C3Only
    } else {
        RegimeClass::None
    }
}

/// What a stream carries. Fresh symbols are either `Direct` or `RelayBound`;
/// the other two classes label retransmissions of existing symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StreamClass {
    Direct,
    RelayBound,
    Cooperation,
    SideInfo,
}

/// Identity of one fresh field symbol.
///
/// `seq` is a per-user emission counter shared across stream classes, so
/// `seq + 1` matches the usual `a_1, a_2, ...` labelling of a walk-through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolId {
    pub user: User,
    pub seq: u64,
    pub class: StreamClass,
}

impl SymbolId {
    pub fn new(user: User, seq: u64, class: StreamClass) -> Self {
        Self { user, seq, class }
    }

    /// Label such as `a3` (user 1, third symbol).
    pub fn label(&self) -> String {
        format!("{}{}", self.user.letter(), self.seq + 1)
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.user.letter(), self.seq + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(AntennaConfig::new(4, 1, 2)), RegimeClass::C2);
        assert_eq!(classify(AntennaConfig::new(7, 3, 1)), RegimeClass::C3Prime);
        assert_eq!(classify(AntennaConfig::new(1, 3, 0)), RegimeClass::C1);
        assert_eq!(classify(AntennaConfig::new(4, 2, 1)), RegimeClass::None);
        assert_eq!(classify(AntennaConfig::new(1, 1, 2)), RegimeClass::Siso);
        assert_eq!(classify(AntennaConfig::new(1, 1, 0)), RegimeClass::None);
        // M >= 2N and 3L <= N but M < 2N + L
        assert_eq!(classify(AntennaConfig::new(6, 3, 1)), RegimeClass::C3Only);
    }

    #[test]
    fn c2_and_c3prime_never_overlap() {
        for m in 1..=20 {
            for n in 1..=20 {
                for l in 0..=20 {
                    let c2 = m >= 2 * n + l && l >= 2 * n;
                    let c3p = m >= 2 * n + l && 3 * l <= n;
                    assert!(!(c2 && c3p), "({m},{n},{l})");
                }
            }
        }
    }

    #[test]
    fn classify_matches_predicate_table() {
        for m in 1..=12 {
            for n in 1..=12 {
                for l in 0..=12 {
                    let tag = classify(AntennaConfig::new(m, n, l));
                    let siso = m == 1 && n == 1 && l >= 1;
                    let c1 = 2 * m <= n;
                    let c2 = m >= 2 * n + l && l >= 2 * n;
                    let c3p = m >= 2 * n + l && 3 * l <= n;
                    let c3 = m >= 2 * n && 3 * l <= n;
                    let expected = if siso {
                        RegimeClass::Siso
                    } else if c1 {
                        RegimeClass::C1
                    } else if c2 {
                        RegimeClass::C2
                    } else if c3p {
                        RegimeClass::C3Prime
                    } else if c3 {
                        RegimeClass::C3Only
                    } else {
                        RegimeClass::None
                    };
                    assert_eq!(tag, expected, "({m},{n},{l})");
                    // the predicates themselves never fire twice (SISO aside)
                    let fired = [c1, c2, c3p, c3 && !c3p].iter().filter(|&&b| b).count();
                    assert!(fired <= 1, "({m},{n},{l})");
                }
            }
        }
    }

    #[test]
    fn validate_examples() {
        let ok = TrafficModel::new(0.2, 0.01);
        assert!(validate_config(&AntennaConfig::new(4, 1, 2), &ok).is_ok());
        let err = validate_config(&AntennaConfig::new(0, 1, 2), &ok).unwrap_err();
        assert_eq!(err.to_string(), "M must be positive");
        let err = validate_config(&AntennaConfig::new(4, 0, 2), &ok).unwrap_err();
        assert_eq!(err, ConfigError::NonPositiveN);
        let err = validate_config(&AntennaConfig::new(4, 1, 2), &TrafficModel::new(1.5, 0.01))
            .unwrap_err();
        assert!(err.to_string().starts_with("p out of range"));
        assert!(TrafficModel::new(0.2, 0.0).validate().is_err());
        assert!(TrafficModel::new(0.2, 1.0).validate().is_err());
        assert!(TrafficModel::new(0.2, 0.5).with_q(1.2).validate().is_err());
    }

    #[test]
    fn trace_text_round_trip() {
        let trace = TrafficTrace::parse("1 1\n# comment\n0 1\n\n1 0\n0 0\n").unwrap();
        assert_eq!(
            trace,
            TrafficTrace::from_pairs(&[(1, 1), (0, 1), (1, 0), (0, 0)])
        );
        assert_eq!(TrafficTrace::parse(&trace.to_text()).unwrap(), trace);
        assert_eq!(TrafficTrace::parse("1 2\n").unwrap_err().line, 1);
        assert!(TrafficTrace::parse("1\n").is_err());
    }

    #[test]
    fn symbol_labels() {
        let id = SymbolId::new(User::Two, 5, StreamClass::Direct);
        assert_eq!(id.label(), "b6");
        assert_eq!(User::One.other(), User::Two);
    }
}
