//! Closed-form DoF expressions: the single-user bursty relay channel, the
//! two-user outer bound, the scheme regions, and the antenna conditions.
//!
//! Everything is evaluated in exact rationals so that equality checks
//! (interference-free identity, oracle agreement) carry no tolerance.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::region::{DofRegion, Q};
use crate::types::{classify, AntennaConfig, RegimeClass};

/// Grid density used by [`numeric_necessity_oracle`] unless told otherwise.
pub const DEFAULT_ORACLE_GRID: usize = 99;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("no scheme is known for {config} (regime {regime})")]
    NoScheme {
        config: AntennaConfig,
        regime: RegimeClass,
    },
    #[error("grid size must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error("malformed probability {0:?}")]
    BadProbability(String),
}

/// Right-hand sides of the per-user and sum outer bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundSet {
    pub individual_cap: Q,
    pub sum_cap: Q,
}

fn int(x: usize) -> Q {
    Q::from_integer(x as i64)
}

fn pos(x: i64) -> Q {
    Q::from_integer(x.max(0))
}

/// Parses a decimal such as `0.25` or `1/3` into an exact rational in `[0, 1]`.
pub fn parse_probability(s: &str) -> Result<Q, FormulaError> {
    let bad = || FormulaError::BadProbability(s.to_string());
    let s = s.trim();
    if s.starts_with('-') {
        return Err(bad());
    }
    let q = if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Q::new(num, den)
    } else {
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: i64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let frac: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        Q::new(whole * den + frac, den)
    };
    if q < Q::zero() || q > Q::one() {
        return Err(bad());
    }
    Ok(q)
}

/// Exact rational for an `f64` probability, via its shortest decimal form.
pub fn probability_from_f64(p: f64) -> Result<Q, FormulaError> {
    parse_probability(&format!("{p}"))
}

/// DoF of the single-user bursty MIMO relay channel. This is also the
/// per-user outer bound of the two-user channel.
pub fn relay_channel_dof(config: AntennaConfig, p: Q) -> Q {
    let AntennaConfig { m, n, l } = config;
    let broadcast = p * int(m.min(n + l));
    let multiple_access = p * int((m + l).min(n)) + (Q::one() - p) * int(l.min(n));
    broadcast.min(multiple_access)
}

/// Sum-DoF outer bound of the two-user channel.
pub fn sum_dof_bound(config: AntennaConfig, p: Q) -> Q {
    let AntennaConfig { m, n, l } = config;
    let (mi, ni, li) = (m as i64, n as i64, l as i64);
    let one = Q::one();
    let first = (p * pos(mi - ni).min(int(n + l)))
        .min(p * pos(mi + li - ni).min(int(n)) + (one - p) * pos(li - ni).min(int(n)));
    first
        + p * p * int((2 * m + l).min(n))
        + Q::from_integer(2) * p * (one - p) * int((m + l).min(n))
        + (one - p) * (one - p) * int(l.min(n))
}

pub fn bounds(config: AntennaConfig, p: Q) -> BoundSet {
    BoundSet {
        individual_cap: relay_channel_dof(config, p),
        sum_cap: sum_dof_bound(config, p),
    }
}

pub fn outer_region(config: AntennaConfig, p: Q) -> DofRegion {
    let b = bounds(config, p);
    DofRegion::per_user_and_sum(b.individual_cap, b.sum_cap)
}

/// Union of the three necessary antenna conditions.
pub fn necessary_condition(config: AntennaConfig) -> bool {
    let AntennaConfig { m, n, l } = config;
    2 * m <= n || (m >= 2 * n + l && l >= 2 * n) || (m >= 2 * n && 3 * l <= n)
}

/// Union of the three sufficient antenna conditions.
pub fn sufficient_condition(config: AntennaConfig) -> bool {
    let AntennaConfig { m, n, l } = config;
    2 * m <= n || (m >= 2 * n + l && l >= 2 * n) || (m >= 2 * n + l && 3 * l <= n)
}

/// The interior grid `{1/(g+1), ..., g/(g+1)}`.
pub fn open_grid(grid_size: usize) -> impl Iterator<Item = Q> {
    let den = grid_size as i64 + 1;
    (1..den).map(move |k| Q::new(k, den))
}

/// Brute-force check that the sum bound never undercuts twice the per-user
/// bound on the interior grid, i.e. that interference-free DoF is not ruled
/// out for any sampled `p`.
pub fn numeric_necessity_oracle(
    config: AntennaConfig,
    grid_size: usize,
) -> Result<bool, FormulaError> {
    if grid_size < 2 {
        return Err(FormulaError::GridTooSmall(grid_size));
    }
    let two = Q::from_integer(2);
    Ok(
        open_grid(grid_size)
            .all(|p| two * relay_channel_dof(config, p) <= sum_dof_bound(config, p)),
    )
}

/// Region reached by the scheme for `config`'s regime.
pub fn achievable_region(config: AntennaConfig, p: Q) -> Result<DofRegion, FormulaError> {
    let AntennaConfig { m, n, l } = config;
    let one = Q::one();
    match classify(config) {
        RegimeClass::C1 => Ok(DofRegion::per_user(p * int(m))),
        RegimeClass::C2 => Ok(DofRegion::per_user((p * int(n + l)).min(int(n)))),
        RegimeClass::C3Prime => Ok(DofRegion::per_user(p * int(n) + p.min(one - p) * int(l))),
        RegimeClass::Siso => Ok(DofRegion::per_user_and_sum(
            p,
            (Q::from_integer(2) * p).min(one),
        )),
        regime @ (RegimeClass::C3Only | RegimeClass::None) => {
            Err(FormulaError::NoScheme { config, regime })
        }
    }
}

/// Per-user cap of the achievable region, if a scheme exists.
pub fn achievable_per_user(config: AntennaConfig, p: Q) -> Result<Q, FormulaError> {
    let region = achievable_region(config, p)?;
    Ok(region.per_user_cap().expect("scheme regions are bounded"))
}

/// Whether the scheme's per-user cap equals the single-user relay-channel DoF.
pub fn interference_free_check(config: AntennaConfig, p: Q) -> Result<bool, FormulaError> {
    Ok(achievable_per_user(config, p)? == relay_channel_dof(config, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    const C412: AntennaConfig = AntennaConfig::new(4, 1, 2);
    const C731: AntennaConfig = AntennaConfig::new(7, 3, 1);

    #[test]
    fn parse_probability_forms() {
        assert_eq!(parse_probability("0.2").unwrap(), q(1, 5));
        assert_eq!(parse_probability("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_probability("1").unwrap(), q(1, 1));
        assert_eq!(parse_probability(".75").unwrap(), q(3, 4));
        assert!(parse_probability("1.5").is_err());
        assert!(parse_probability("-0.1").is_err());
        assert!(parse_probability("abc").is_err());
        assert_eq!(probability_from_f64(0.05).unwrap(), q(1, 20));
    }

    #[test]
    fn relay_channel_examples() {
        assert_eq!(
            relay_channel_dof(AntennaConfig::new(10, 1, 2), q(1, 5)),
            q(3, 5)
        );
        assert_eq!(relay_channel_dof(C731, q(0, 1)), q(0, 1));
        assert_eq!(relay_channel_dof(C412, q(1, 1)), q(1, 1));
    }

    #[test]
    fn sum_bound_examples() {
        assert_eq!(sum_dof_bound(C412, q(1, 5)), q(8, 5));
        assert_eq!(
            sum_dof_bound(AntennaConfig::new(3, 2, 1), q(9, 10)),
            q(289, 100)
        );
        // at p = 0 only the relay-only term survives
        for (m, n, l) in [(4, 1, 2), (7, 3, 1), (2, 3, 5), (1, 1, 0)] {
            let c = AntennaConfig::new(m, n, l);
            assert_eq!(sum_dof_bound(c, q(0, 1)), int(l.min(n)), "{c}");
        }
    }

    #[test]
    fn outer_region_examples() {
        let r = outer_region(C412, q(1, 5));
        assert_eq!(r.constraints()[0].c, q(3, 5));
        assert_eq!(r.constraints()[2].c, q(8, 5));
        let r = outer_region(AntennaConfig::new(4, 1, 0), q(1, 5));
        assert_eq!(
            (r.constraints()[0].c, r.constraints()[2].c),
            (q(1, 5), q(14, 25))
        );
        let r = outer_region(AntennaConfig::new(4, 1, 0), q(0, 1));
        assert!(r.constraints().iter().all(|h| h.c == q(0, 1)));
    }

    #[test]
    fn condition_examples() {
        assert!(necessary_condition(C412));
        assert!(necessary_condition(C731));
        assert!(!necessary_condition(AntennaConfig::new(3, 2, 1)));
        assert!(sufficient_condition(C731));
        assert!(sufficient_condition(AntennaConfig::new(6, 3, 0)));
        let c832 = AntennaConfig::new(8, 3, 2);
        assert!(!necessary_condition(c832));
        assert!(!sufficient_condition(c832));
        // C3 but not C3'
        let c631 = AntennaConfig::new(6, 3, 1);
        assert!(necessary_condition(c631) && !sufficient_condition(c631));
    }

    #[test]
    fn oracle_examples() {
        assert!(numeric_necessity_oracle(C412, 99).unwrap());
        assert!(!numeric_necessity_oracle(AntennaConfig::new(3, 2, 1), 99).unwrap());
        assert!(numeric_necessity_oracle(AntennaConfig::new(1, 3, 5), 99).unwrap());
        assert_eq!(
            numeric_necessity_oracle(C412, 1),
            Err(FormulaError::GridTooSmall(1))
        );
    }

    #[test]
    fn achievable_examples() {
        assert_eq!(achievable_per_user(C412, q(1, 5)).unwrap(), q(3, 5));
        assert_eq!(achievable_per_user(C731, q(3, 4)).unwrap(), q(5, 2));
        let siso = achievable_region(AntennaConfig::new(1, 1, 2), q(3, 10)).unwrap();
        assert!(siso.same_set(&DofRegion::per_user_and_sum(q(3, 10), q(3, 5))));
        assert!(matches!(
            achievable_region(AntennaConfig::new(4, 2, 1), q(1, 2)),
            Err(FormulaError::NoScheme {
                regime: RegimeClass::None,
                ..
            })
        ));
        assert!(achievable_region(AntennaConfig::new(6, 3, 1), q(1, 2)).is_err());
    }

    #[test]
    fn interference_free_examples() {
        assert!(interference_free_check(C412, q(1, 5)).unwrap());
        assert!(interference_free_check(C731, q(3, 4)).unwrap());
        assert!(interference_free_check(AntennaConfig::new(1, 2, 0), q(2, 5)).unwrap());
        assert_eq!(
            relay_channel_dof(AntennaConfig::new(1, 2, 0), q(2, 5)),
            q(2, 5)
        );
    }

    #[test]
    fn boundary_values_recover_known_cases() {
        // p = 1: a relay adds nothing to the non-bursty per-user DoF min(M, N)
        // when the relay cannot beat the direct link.
        for (m, n, l) in [(4, 1, 2), (7, 3, 1), (2, 2, 3), (3, 5, 0)] {
            let c = AntennaConfig::new(m, n, l);
            let with = relay_channel_dof(c, q(1, 1));
            assert_eq!(with, int(m.min(n + l)).min(int((m + l).min(n))), "{c}");
        }
        // L = 0: per-user bound is p·min(M, N) and the sum bound reduces to the
        // no-relay expression.
        for k in 1..20 {
            let p = q(k, 20);
            for (m, n) in [(4, 1), (2, 3), (3, 3), (1, 4)] {
                let c = AntennaConfig::new(m, n, 0);
                assert_eq!(relay_channel_dof(c, p), p * int(m.min(n)));
                let expected = p * pos(m as i64 - n as i64).min(int(n))
                    + p * p * int((2 * m).min(n))
                    + q(2, 1) * p * (Q::one() - p) * int(m.min(n));
                assert_eq!(sum_dof_bound(c, p), expected, "{c} p={p}");
            }
        }
    }

    #[test]
    fn scheme_regions_sit_inside_the_outer_bound() {
        for m in 1..=8 {
            for n in 1..=8 {
                for l in 0..=8 {
                    let c = AntennaConfig::new(m, n, l);
                    for p in open_grid(19).chain([q(0, 1), q(1, 1)]) {
                        if let Ok(ach) = achievable_region(c, p) {
                            assert!(ach.is_subset_of(&outer_region(c, p)), "{c} p={p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounds_are_monotone_in_antenna_counts() {
        for p in open_grid(9) {
            for m in 1..=6 {
                for n in 1..=6 {
                    for l in 0..=6 {
                        let c = AntennaConfig::new(m, n, l);
                        let (i0, s0) = (relay_channel_dof(c, p), sum_dof_bound(c, p));
                        for bigger in [
                            AntennaConfig::new(m + 1, n, l),
                            AntennaConfig::new(m, n + 1, l),
                            AntennaConfig::new(m, n, l + 1),
                        ] {
                            assert!(relay_channel_dof(bigger, p) >= i0, "{c}->{bigger} p={p}");
                            assert!(sum_dof_bound(bigger, p) >= s0, "{c}->{bigger} p={p}");
                        }
                    }
                }
            }
        }
    }
}
