//! Symbolic linear combinations of fresh symbols, tracked alongside every
//! numeric signal so receivers know the coefficient map of each observation.

use std::fmt;

use crate::linalg::{FieldElement, PrimeField};
use crate::types::{SymbolId, User};

/// Sparse `Σ c_i · x_i` over symbol ids, sorted by id, no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LinComb {
    terms: Vec<(SymbolId, FieldElement)>,
}

impl LinComb {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(id: SymbolId) -> Self {
        Self {
            terms: vec![(id, 1)],
        }
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(
        field: PrimeField,
        terms: impl IntoIterator<Item = (SymbolId, FieldElement)>,
    ) -> Self {
        let mut out = Self::zero();
        for (id, c) in terms {
            out.add_term(field, id, c);
        }
        out
    }

    pub fn terms(&self) -> &[(SymbolId, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, id: SymbolId) -> FieldElement {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(&id))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, field: PrimeField, id: SymbolId, c: FieldElement) {
        let c = field.reduce(c);
        match self.terms.binary_search_by(|(k, _)| k.cmp(&id)) {
            Ok(i) => {
                let v = field.add(self.terms[i].1, c);
                if v == 0 {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = v;
                }
            }
            Err(i) if c != 0 => self.terms.insert(i, (id, c)),
            Err(_) => {}
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, field: PrimeField, other: &LinComb, s: FieldElement) -> LinComb {
        let s = field.reduce(s);
        if s == 0 {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                terms.push(a[i]);
                i += 1;
            } else if take_b {
                terms.push((b[j].0, field.mul(s, b[j].1)));
                j += 1;
            } else {
                let v = field.mul_add(a[i].1, s, b[j].1);
                if v != 0 {
                    terms.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        LinComb { terms }
    }

    pub fn scaled(&self, field: PrimeField, s: FieldElement) -> LinComb {
        LinComb::zero().add_scaled(field, self, s)
    }

    pub fn involves(&self, user: User) -> bool {
        self.terms.iter().any(|(id, _)| id.user == user)
    }

    pub fn symbols(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.terms.iter().map(|(id, _)| *id)
    }

    /// Evaluates against true symbol values.
    pub fn eval(
        &self,
        field: PrimeField,
        value: impl Fn(SymbolId) -> FieldElement,
    ) -> FieldElement {
        self.terms
            .iter()
            .fold(0, |acc, &(id, c)| field.mul_add(acc, c, value(id)))
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (id, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *c == 1 {
                write!(f, "{}", id.label())?;
            } else {
                write!(f, "{c}·{}", id.label())?;
            }
        }
        Ok(())
    }
}
