use std::fmt;

use super::{Elem, PrimeField};
use crate::error::{Error, Result};

/// Dense row-major matrix of residues. The field is passed to each
/// operation rather than stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>, field: &PrimeField) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&v| v >= field.modulus()) {
            return Err(Error::DimensionMismatch(format!(
                "entry {bad} outside GF({})",
                field.modulus()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Reduces signed integer rows into the field. All rows must share a length.
    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize, field: &PrimeField) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&v| field.reduce(v)));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Rows that may be shorter than `cols`; missing entries are zero.
    pub fn from_padded_rows<'a, I>(rows: I, cols: usize) -> Self
    where
        I: IntoIterator<Item = &'a [Elem]>,
    {
        let mut data = Vec::new();
        let mut n = 0;
        for r in rows {
            let start = data.len();
            data.extend(r.iter().take(cols).copied());
            data.resize(start + cols, 0);
            n += 1;
        }
        Self {
            rows: n,
            cols,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self, field: &PrimeField) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = field.mul_add(a, other.get(k, j), out.data[idx]);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[Elem], field: &PrimeField) -> Vec<Elem> {
        self.iter_rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| field.mul_add(a, b, acc))
            })
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Self {
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        let mut m = self.clone();
        m.reduce_rows(field, self.cols).len()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self, field: &PrimeField) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| m.get(r, c) != 0) else {
                return Ok(0);
            };
            if p != c {
                m.swap_rows(p, c);
                det = field.neg(det);
            }
            let pivot = m.get(c, c);
            det = field.mul(det, pivot);
            let inv = field.inv(pivot).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = field.mul(m.get(r, c), inv);
                if factor != 0 {
                    m.sub_scaled_row(r, c, factor, field);
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self, field: &PrimeField) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }

    pub fn inverse(&self, field: &PrimeField) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        left_solve(self, &Self::identity(self.rows), field).ok().flatten()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_scaled_row(&mut self, target: usize, source: usize, factor: Elem, field: &PrimeField) {
        let neg = field.neg(factor);
        for c in 0..self.cols {
            let s = self.data[source * self.cols + c];
            if s != 0 {
                let idx = target * self.cols + c;
                self.data[idx] = field.mul_add(neg, s, self.data[idx]);
            }
        }
    }

    fn scale_row(&mut self, r: usize, factor: Elem, field: &PrimeField) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = field.mul(self.data[idx], factor);
        }
    }

    /// Reduced row echelon form in place, pivoting only on the first
    /// `pivot_cols` columns. Returns the pivot columns; the first
    /// `len()` rows are the pivot rows.
    fn reduce_rows(&mut self, field: &PrimeField, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..pivot_cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(p, next);
            let inv = field.inv(self.get(next, c)).expect("nonzero pivot");
            self.scale_row(next, inv, field);
            for r in 0..self.rows {
                if r != next {
                    let factor = self.get(r, c);
                    if factor != 0 {
                        self.sub_scaled_row(r, next, factor, field);
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.iter_rows() {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

/// Row rank over GF(p).
pub fn rank(m: &FieldMatrix, field: &PrimeField) -> usize {
    m.rank(field)
}

/// Finds `D` with `D * a = t`, or `None` when some row of `t` lies outside
/// the row space of `a`.
pub fn left_solve(a: &FieldMatrix, t: &FieldMatrix, field: &PrimeField) -> Result<Option<FieldMatrix>> {
    if a.cols != t.cols {
        return Err(Error::DimensionMismatch(format!(
            "left_solve with {} and {} columns",
            a.cols, t.cols
        )));
    }
    // [A | I] reduced on the A block records which combination of A's rows
    // produced each echelon row.
    let mut aug = a.hstack(&FieldMatrix::identity(a.rows))?;
    let pivots = aug.reduce_rows(field, a.cols);
    let mut d = FieldMatrix::zeros(t.rows, a.rows);
    for i in 0..t.rows {
        let mut residual = t.row(i).to_vec();
        for (k, &pc) in pivots.iter().enumerate() {
            let coef = residual[pc];
            if coef == 0 {
                continue;
            }
            let neg = field.neg(coef);
            for (c, r) in residual.iter_mut().enumerate() {
                *r = field.mul_add(neg, aug.get(k, c), *r);
            }
            for j in 0..a.rows {
                let e = aug.get(k, a.cols + j);
                if e != 0 {
                    let cur = d.get(i, j);
                    d.set(i, j, field.mul_add(coef, e, cur));
                }
            }
        }
        if residual.iter().any(|&v| v != 0) {
            return Ok(None);
        }
    }
    Ok(Some(d))
}

/// Incrementally maintained row space in reduced echelon form. Vectors of
/// different lengths are compared as if zero-padded.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: PrimeField,
    basis: Vec<(usize, Vec<Elem>)>,
}

impl RowSpace {
    pub fn new(field: PrimeField) -> Self {
        Self {
            field,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.basis {
            let coef = v.get(*pivot).copied().unwrap_or(0);
            if coef == 0 {
                continue;
            }
            if v.len() < row.len() {
                v.resize(row.len(), 0);
            }
            let neg = f.neg(coef);
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.mul_add(neg, r, *x);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(pivot) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[pivot]).expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.basis.iter_mut() {
            let coef = row.get(pivot).copied().unwrap_or(0);
            if coef == 0 {
                continue;
            }
            if row.len() < r.len() {
                row.resize(r.len(), 0);
            }
            let neg = f.neg(coef);
            for (x, &n) in row.iter_mut().zip(&r) {
                *x = f.mul_add(neg, n, *x);
            }
        }
        self.basis.push((pivot, r));
        true
    }
}
