//! Receiver-side decoding: an incrementally maintained reduced echelon form
//! over the symbols a receiver has seen.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::linalg::{FieldElement, PrimeField};
use crate::symbols::LinComb;
use crate::types::{SymbolId, User};

const UNKNOWN: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("inconsistent system: observation {observation} reduced to 0 = {residual}")]
pub struct InconsistentSystem {
    pub observation: String,
    pub residual: FieldElement,
}

#[derive(Debug, Clone)]
struct Row {
    comb: LinComb,
    rhs: FieldElement,
}

/// Accumulated linear observations at one receiver.
///
/// Rows are kept fully reduced: each row has a pivot that appears in no other
/// row and no row mentions a decoded symbol. A symbol is decoded exactly when
/// its row has shrunk to the pivot alone.
#[derive(Debug, Clone)]
pub struct ReceiverLedger {
    field: PrimeField,
    rows: BTreeMap<SymbolId, Row>,
    /// Non-pivot symbol → pivots of the rows that mention it.
    occurs: BTreeMap<SymbolId, BTreeSet<SymbolId>>,
    decoded: [Vec<u32>; 2],
    observations: u64,
}

impl ReceiverLedger {
    pub fn new(field: PrimeField) -> Self {
        Self {
            field,
            rows: BTreeMap::new(),
            occurs: BTreeMap::new(),
            decoded: [Vec::new(), Vec::new()],
            observations: 0,
        }
    }

    pub fn value(&self, id: SymbolId) -> Option<FieldElement> {
        match self.decoded[id.user.index()].get(id.seq as usize) {
            Some(&v) if v != UNKNOWN => Some(v as FieldElement),
            _ => None,
        }
    }

    pub fn is_decoded(&self, id: SymbolId) -> bool {
        self.value(id).is_some()
    }

    pub fn decoded_count(&self, user: User) -> usize {
        self.decoded[user.index()]
            .iter()
            .filter(|&&v| v != UNKNOWN)
            .count()
    }

    /// Rows that still mention more than one unknown.
    pub fn pending_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn observations(&self) -> u64 {
        self.observations
    }

    /// Every symbol mentioned by an unresolved row.
    pub fn pending_symbols(&self) -> BTreeSet<SymbolId> {
        self.rows.values().flat_map(|r| r.comb.symbols()).collect()
    }

    fn set_decoded(&mut self, id: SymbolId, v: FieldElement) {
        let store = &mut self.decoded[id.user.index()];
        let i = id.seq as usize;
        if store.len() <= i {
            store.resize(i + 1, UNKNOWN);
        }
        debug_assert_eq!(store[i], UNKNOWN, "decoded value must never change");
        store[i] = v as u32;
    }

    fn index_row(&mut self, pivot: SymbolId) {
        let syms: Vec<SymbolId> = self.rows[&pivot]
            .comb
            .symbols()
            .filter(|&s| s != pivot)
            .collect();
        for s in syms {
            self.occurs.entry(s).or_default().insert(pivot);
        }
    }

    fn unindex_row(&mut self, pivot: SymbolId) {
        let syms: Vec<SymbolId> = self.rows[&pivot]
            .comb
            .symbols()
            .filter(|&s| s != pivot)
            .collect();
        for s in syms {
            if let Some(set) = self.occurs.get_mut(&s) {
                set.remove(&pivot);
                if set.is_empty() {
                    self.occurs.remove(&s);
                }
            }
        }
    }

    /// Adds one observation `comb = value` and returns the newly decoded symbols
    /// in decoding order.
    pub fn ingest(
        &mut self,
        comb: &LinComb,
        value: FieldElement,
    ) -> Result<Vec<SymbolId>, InconsistentSystem> {
        let f = self.field;
        self.observations += 1;
        let mut rhs = f.reduce(value);
        let mut reduced = LinComb::zero();
        let mut pivots = Vec::new();
        for &(id, c) in comb.terms() {
            if let Some(v) = self.value(id) {
                rhs = f.sub(rhs, f.mul(c, v));
            } else {
                reduced.add_term(f, id, c);
                if self.rows.contains_key(&id) {
                    pivots.push(id);
                }
            }
        }
        for p in pivots {
            let row = &self.rows[&p];
            let c = reduced.coefficient(p);
            reduced = reduced.add_scaled(f, &row.comb, f.neg(c));
            rhs = f.sub(rhs, f.mul(c, row.rhs));
        }
        if reduced.is_zero() {
            return if rhs == 0 {
                Ok(Vec::new())
            } else {
                Err(InconsistentSystem {
                    observation: comb.to_string(),
                    residual: rhs,
                })
            };
        }

        let pivot = reduced
            .symbols()
            .min_by_key(|s| (self.occurs.get(s).map_or(0, BTreeSet::len), *s))
            .expect("non-empty combination");
        let inv = f.inv(reduced.coefficient(pivot));
        let row = Row {
            comb: reduced.scaled(f, inv),
            rhs: f.mul(rhs, inv),
        };

        // Eliminate the new pivot from every row mentioning it.
        let mut touched = Vec::new();
        if let Some(holders) = self.occurs.remove(&pivot) {
            for h in holders {
                self.unindex_row(h);
                let target = self.rows.get_mut(&h).expect("indexed row exists");
                let c = target.comb.coefficient(pivot);
                target.comb = target.comb.add_scaled(f, &row.comb, f.neg(c));
                target.rhs = f.sub(target.rhs, f.mul(c, row.rhs));
                self.index_row(h);
                touched.push(h);
            }
        }
        self.rows.insert(pivot, row);
        self.index_row(pivot);
        touched.push(pivot);

        let mut newly = Vec::new();
        let mut work: Vec<SymbolId> = touched
            .into_iter()
            .filter(|p| self.rows[p].comb.len() == 1)
            .collect();
        while let Some(p) = work.pop() {
            let Some(row) = self.rows.get(&p) else {
                continue;
            };
            if row.comb.len() != 1 {
                continue;
            }
            let v = row.rhs;
            self.rows.remove(&p);
            self.set_decoded(p, v);
            newly.push(p);
            if let Some(holders) = self.occurs.remove(&p) {
                for h in holders {
                    let target = self.rows.get_mut(&h).expect("indexed row exists");
                    let c = target.comb.coefficient(p);
                    target.comb = target.comb.add_scaled(f, &LinComb::symbol(p), f.neg(c));
                    target.rhs = f.sub(target.rhs, f.mul(c, v));
                    if target.comb.len() == 1 {
                        work.push(h);
                    }
                }
            }
        }
        Ok(newly)
    }
}
