//! Exact linear algebra over a prime field `GF(p)`.
//!
//! Field elements are plain `u64` residues in `[0, p)`; every operation goes
//! through a [`PrimeField`] so the modulus is carried once per matrix instead
//! of once per entry. Moduli are limited to 32 bits so products fit in `u64`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Rejection-sampling cap for [`random_matrix_with_property`].
pub const MAX_GENERICITY_ATTEMPTS: usize = 1000;

/// A field element: a residue in `[0, p)` of the owning [`PrimeField`].
pub type FieldElement = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("genericity failure after {attempts} attempts: {what}")]
    GenericityFailure { attempts: usize, what: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    modulus: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self, LinalgError> {
        if modulus > u32::MAX as u64 || !is_prime(modulus) {
            return Err(LinalgError::NotPrime(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> FieldElement {
        x % self.modulus
    }

    pub fn from_i64(&self, x: i64) -> FieldElement {
        x.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        (a * b) % self.modulus
    }

    /// `a + b·c`
    #[inline]
    pub fn mul_add(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        (a + b * c) % self.modulus
    }

    pub fn pow(&self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(
            a % self.modulus != 0,
            "inverse of zero in GF({})",
            self.modulus
        );
        self.pow(a, self.modulus - 2)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        rng.gen_range(0..self.modulus)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        rng.gen_range(1..self.modulus)
    }

    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.mul_add(acc, x, y))
    }

    /// `v·s` elementwise.
    pub fn scale(&self, v: &[FieldElement], s: FieldElement) -> Vec<FieldElement> {
        v.iter().map(|&x| self.mul(x, s)).collect()
    }

    /// `acc += v·s` elementwise.
    pub fn axpy(&self, acc: &mut [FieldElement], v: &[FieldElement], s: FieldElement) {
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.mul_add(*a, x, s);
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self {
            modulus: DEFAULT_PRIME,
        }
    }
}

/// Dense row-major matrix over a [`PrimeField`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over GF({})",
            self.rows, self.cols, self.field.modulus
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Outcome of [`Matrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<FieldElement>),
    NoSolution,
    Underdetermined,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(
        field: PrimeField,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| field.reduce(x)).collect();
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds from signed integer rows (reduced mod p). Panics on ragged input.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().map(|&x| field.from_i64(x)).collect();
        Self {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, height: usize, columns: &[Vec<FieldElement>]) -> Self {
        let mut m = Self::zeros(field, height, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), height, "column {j} has wrong height");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, field.reduce(x));
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn same_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(
                self.field.modulus,
                other.field.modulus,
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * out.cols + c;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(k, c));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.field.dot(self.row(r), v))
            .collect())
    }

    /// Stacks matrices on top of each other.
    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix, LinalgError> {
        let first = parts
            .first()
            .ok_or_else(|| LinalgError::DimensionMismatch("empty vstack".into()))?;
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            first.same_field(p)?;
            if p.cols != first.cols {
                return Err(LinalgError::DimensionMismatch(format!(
                    "vstack of {} and {} columns",
                    first.cols, p.cols
                )));
            }
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Ok(Matrix {
            field: first.field,
            rows,
            cols: first.cols,
            data,
        })
    }

    /// Places matrices side by side.
    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix, LinalgError> {
        let ts: Vec<Matrix> = parts.iter().map(|m| m.transpose()).collect();
        let refs: Vec<&Matrix> = ts.iter().collect();
        Ok(Matrix::vstack(&refs)?.transpose())
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(sel) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if sel != row {
                for c in 0..m.cols {
                    m.data.swap(sel * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = m.get(row, c);
                m.set(row, c, f.mul(v, inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.rows.min(self.cols)
    }

    /// A basis of `{v : A·v = 0}`, `cols - rank` vectors long.
    pub fn null_space_basis(&self) -> Vec<Vec<FieldElement>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    pub fn solve(&self, b: &[FieldElement]) -> Result<Solution, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} system with right-hand side of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let column = Matrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let aug = Matrix::hstack(&[self, &column])?;
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(Solution::NoSolution);
        }
        if pivots.len() < self.cols {
            return Ok(Solution::Underdetermined);
        }
        Ok(Solution::Unique(
            (0..self.cols).map(|i| r.get(i, self.cols)).collect(),
        ))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(self.field, n)]).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// Draws uniformly random `rows × cols` matrices until `predicate` accepts one.
pub fn random_matrix_with_property<R, P>(
    field: PrimeField,
    rows: usize,
    cols: usize,
    predicate: P,
    rng: &mut R,
) -> Result<Matrix, LinalgError>
where
    R: Rng + ?Sized,
    P: Fn(&Matrix) -> bool,
{
    for _ in 0..MAX_GENERICITY_ATTEMPTS {
        let m = Matrix::random(field, rows, cols, rng);
        if predicate(&m) {
            return Ok(m);
        }
    }
    Err(LinalgError::GenericityFailure {
        attempts: MAX_GENERICITY_ATTEMPTS,
        what: format!("no {rows}x{cols} matrix satisfied the predicate"),
    })
}
