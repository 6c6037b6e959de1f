//! Two-dimensional DoF regions as intersections of half-planes in the
//! non-negative quadrant, with exact rational arithmetic.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

/// Exact rational used throughout the formula layer.
pub type Q = Rational64;

/// `a·d1 + b·d2 <= c` with `a, b, c >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfPlane {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl HalfPlane {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        assert!(
            !a.is_negative() && !b.is_negative() && !c.is_negative(),
            "half-plane coefficients must be non-negative: {a}·d1 + {b}·d2 <= {c}"
        );
        Self { a, b, c }
    }

    pub fn holds(&self, d1: Q, d2: Q) -> bool {
        self.a * d1 + self.b * d2 <= self.c
    }
}

/// A polytope `{(d1, d2) >= 0 : every constraint holds}`.
#[derive(Debug, Clone, Default)]
pub struct DofRegion {
    constraints: Vec<HalfPlane>,
}

impl DofRegion {
    pub fn new(constraints: Vec<HalfPlane>) -> Self {
        Self { constraints }
    }

    /// `{d1 <= cap, d2 <= cap}`.
    pub fn per_user(cap: Q) -> Self {
        let one = Q::from_integer(1);
        let zero = Q::zero();
        Self::new(vec![
            HalfPlane::new(one, zero, cap),
            HalfPlane::new(zero, one, cap),
        ])
    }

    /// `{d1, d2 <= cap, d1 + d2 <= sum}`.
    pub fn per_user_and_sum(cap: Q, sum: Q) -> Self {
        let one = Q::from_integer(1);
        let mut region = Self::per_user(cap);
        region.constraints.push(HalfPlane::new(one, one, sum));
        region
    }

    pub fn constraints(&self) -> &[HalfPlane] {
        &self.constraints
    }

    pub fn contains_point(&self, d1: Q, d2: Q) -> bool {
        !d1.is_negative() && !d2.is_negative() && self.constraints.iter().all(|h| h.holds(d1, d2))
    }

    /// Unbounded along `d1` (resp. `d2`) iff no constraint involves it.
    fn unbounded(&self) -> [bool; 2] {
        [
            self.constraints.iter().all(|h| h.a.is_zero()),
            self.constraints.iter().all(|h| h.b.is_zero()),
        ]
    }

    /// Extreme points, sorted and deduplicated.
    pub fn vertices(&self) -> Vec<(Q, Q)> {
        let zero = Q::zero();
        let one = Q::from_integer(1);
        let mut lines: Vec<HalfPlane> = vec![
            HalfPlane {
                a: one,
                b: zero,
                c: zero,
            },
            HalfPlane {
                a: zero,
                b: one,
                c: zero,
            },
        ];
        lines.extend(
            self.constraints
                .iter()
                .filter(|h| !(h.a.is_zero() && h.b.is_zero())),
        );

        let mut out = Vec::new();
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                let (p, q) = (lines[i], lines[j]);
                let det = p.a * q.b - p.b * q.a;
                if det.is_zero() {
                    continue;
                }
                let d1 = (p.c * q.b - p.b * q.c) / det;
                let d2 = (p.a * q.c - p.c * q.a) / det;
                if self.contains_point(d1, d2) {
                    out.push((d1, d2));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Largest achievable `d1` (equal to the largest `d2` for the symmetric
    /// regions built here). `None` when unbounded.
    pub fn per_user_cap(&self) -> Option<Q> {
        if self.unbounded()[0] {
            return None;
        }
        self.vertices().into_iter().map(|(d1, _)| d1).max()
    }

    /// Largest `d1 + d2`. `None` when unbounded.
    pub fn sum_cap(&self) -> Option<Q> {
        let unb = self.unbounded();
        if unb[0] || unb[1] {
            return None;
        }
        self.vertices().into_iter().map(|(d1, d2)| d1 + d2).max()
    }

    /// `self ⊆ other`, decided on vertices plus recession directions.
    pub fn is_subset_of(&self, other: &DofRegion) -> bool {
        let (mine, theirs) = (self.unbounded(), other.unbounded());
        if (mine[0] && !theirs[0]) || (mine[1] && !theirs[1]) {
            return false;
        }
        self.vertices()
            .iter()
            .all(|&(d1, d2)| other.contains_point(d1, d2))
    }

    /// Set equality, independent of how the constraints are written.
    pub fn same_set(&self, other: &DofRegion) -> bool {
        self.unbounded() == other.unbounded() && self.vertices() == other.vertices()
    }
}

impl fmt::Display for DofRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|h| {
                let term = |coef: Q, var: &str| {
                    if coef.is_zero() {
                        None
                    } else if coef == Q::from_integer(1) {
                        Some(var.to_string())
                    } else {
                        Some(format!("{coef}·{var}"))
                    }
                };
                let lhs: Vec<String> = [term(h.a, "d1"), term(h.b, "d2")]
                    .into_iter()
                    .flatten()
                    .collect();
                format!("{} <= {}", lhs.join(" + "), h.c)
            })
            .collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}
