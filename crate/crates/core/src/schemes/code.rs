//! Linear multicast codes over the `m` coding points of a CCN, optionally
//! secure against `k` tapped edges.
//!
//! A code is an `h x n` generator whose rows index the inputs (message
//! symbols first, then `k` keys) and whose columns are the global
//! coefficient vectors of the `n` coding-point outputs. Any `h` columns are
//! independent, so every receiver decodes. When additionally every `k`
//! columns of the key rows are independent, no `k` edges (each carrying a
//! multiple of one column) reveal anything about the message.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{projective_points, vandermonde, Elem, FieldMatrix, PrimeField};
use crate::protocol::LinearForm;

const POINT_SET_CANDIDATES: usize = 64;
const RANDOM_CANDIDATES: usize = 512;
const KEY_ROW_CANDIDATES: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecureCode {
    generator: FieldMatrix,
    keys: usize,
}

impl SecureCode {
    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    /// Number of inputs (`h`).
    pub fn inputs(&self) -> usize {
        self.generator.rows()
    }

    pub fn message_dim(&self) -> usize {
        self.inputs() - self.keys
    }

    pub fn keys(&self) -> usize {
        self.keys
    }

    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Output `col` as a form over the input forms.
    pub fn encode(&self, inputs: &[LinearForm], col: usize, f: &PrimeField) -> LinearForm {
        let terms: Vec<_> = inputs
            .iter()
            .enumerate()
            .map(|(i, x)| (self.generator.get(i, col) as i64, x))
            .collect();
        LinearForm::combine(f, &terms)
    }

    /// Coefficients `a` with `column(col) = sum_l a_l * column(l)`, `l < h`.
    /// These are the local coefficients a coding point applies to the first
    /// `h` outputs.
    pub fn combination(&self, col: usize, f: &PrimeField) -> Vec<Elem> {
        let h = self.inputs();
        let basis: Vec<usize> = (0..h).collect();
        let base = self.generator.select_columns(&basis);
        let target = self.generator.select_columns(&[col]);
        let inv = base.inverse(f).expect("first h columns are independent");
        inv.mul(&target, f).expect("shapes agree").column(0)
    }
}

fn every_subset_invertible(g: &FieldMatrix, size: usize, f: &PrimeField) -> bool {
    if size == 0 {
        return true;
    }
    if g.cols() < size {
        return g.rank(f) == g.cols();
    }
    (0..g.cols())
        .combinations(size)
        .all(|cols| g.select_columns(&cols).is_invertible(f))
}

/// Rows completing `key_rows` to an invertible `h x h` matrix, placed first.
fn complete_basis(key_rows: &FieldMatrix, f: &PrimeField) -> Option<FieldMatrix> {
    let h = key_rows.cols();
    let mut rows = FieldMatrix::zeros(0, h);
    let mut current = key_rows.clone();
    for i in 0..h {
        if rows.rows() + key_rows.rows() == h {
            break;
        }
        let mut unit = FieldMatrix::zeros(1, h);
        unit.set(0, i, 1);
        let trial = current.vstack(&unit).ok()?;
        if trial.rank(f) == trial.rows() {
            current = trial;
            rows = rows.vstack(&unit).ok()?;
        }
    }
    let basis = rows.vstack(key_rows).ok()?;
    basis.is_invertible(f).then_some(basis)
}

/// Tries to choose `k` key functionals for an MDS generator `g`, returning
/// the re-based generator on success.
fn with_key_rows(g: &FieldMatrix, k: usize, seed: u64, f: &PrimeField) -> Option<FieldMatrix> {
    let h = g.rows();
    let try_rows = |phi: FieldMatrix| -> Option<FieldMatrix> {
        if phi.rank(f) < k || !every_subset_invertible(&phi.mul(g, f).ok()?, k, f) {
            return None;
        }
        complete_basis(&phi, f)?.mul(g, f).ok()
    };
    // Bottom k rows as they are.
    let mut phi = FieldMatrix::zeros(k, h);
    for i in 0..k {
        phi.set(i, h - k + i, 1);
    }
    if let Some(out) = try_rows(phi) {
        return Some(out);
    }
    let p = f.modulus() as u64;
    if k == 1 {
        let total = (p as u128).checked_pow(h as u32).unwrap_or(u128::MAX);
        for idx in 1..total.min(KEY_ROW_CANDIDATES as u128) {
            let mut row = FieldMatrix::zeros(1, h);
            let mut rest = idx;
            for c in (0..h).rev() {
                row.set(0, c, (rest % p as u128) as Elem);
                rest /= p as u128;
            }
            if let Some(out) = try_rows(row) {
                return Some(out);
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_CANDIDATES {
        let mut phi = FieldMatrix::zeros(k, h);
        for r in 0..k {
            for c in 0..h {
                phi.set(r, c, rng.gen_range(0..f.modulus()));
            }
        }
        if let Some(out) = try_rows(phi) {
            return Some(out);
        }
    }
    None
}

/// Deterministic sequence of `k x n` generator candidates: Vandermonde
/// matrices over successive sets of projective points, then seeded random
/// matrices.
pub fn generator_candidates(
    n: usize,
    k: usize,
    f: &PrimeField,
) -> impl Iterator<Item = FieldMatrix> + '_ {
    let points = projective_points(f);
    let structured = points
        .into_iter()
        .combinations(n)
        .take(POINT_SET_CANDIDATES)
        .map(move |pts| vandermonde(&pts, k, f));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ((n as u64) << 8) ^ k as u64);
    let random = (0..RANDOM_CANDIDATES).map(move |_| {
        let data = (0..n * k).map(|_| rng.gen_range(0..f.modulus())).collect();
        FieldMatrix::new(k, n, data, f).expect("entries in range")
    });
    structured.chain(random)
}

/// First candidate generator accepted by `accept`.
pub fn search_generator<F>(n: usize, k: usize, f: &PrimeField, mut accept: F) -> Result<FieldMatrix>
where
    F: FnMut(&FieldMatrix) -> Result<bool>,
{
    for g in generator_candidates(n, k, f) {
        if accept(&g)? {
            return Ok(g);
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no [{n},{k}] generator over {f} passed the decodability check"
    )))
}

/// An `h`-input code on `n` outputs where any `h` outputs determine the
/// inputs and any `k` outputs reveal nothing about the first `h - k`.
pub fn secure_code(n: usize, h: usize, k: usize, f: &PrimeField) -> Result<SecureCode> {
    if h == 0 || k >= h || n < h {
        return Err(Error::InvalidParameters(format!(
            "secure code needs k < h <= n, got n={n} h={h} k={k}"
        )));
    }
    if n > f.modulus() as usize + 1 {
        return Err(Error::FieldTooSmall {
            needed: n - 1,
            modulus: f.modulus(),
        });
    }
    for (i, g) in generator_candidates(n, h, f).enumerate() {
        if !every_subset_invertible(&g, h, f) {
            continue;
        }
        if let Some(generator) = with_key_rows(&g, k, i as u64, f) {
            return Ok(SecureCode {
                generator,
                keys: k,
            });
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no {k}-edge secure code with {h} inputs on {n} outputs over {f}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn check(code: &SecureCode, f: &PrimeField) {
        let h = code.inputs();
        let k = code.keys();
        let g = code.generator();
        assert!(every_subset_invertible(g, h, f));
        let key_rows: Vec<usize> = (h - k..h).collect();
        assert!(every_subset_invertible(&g.select_rows(&key_rows), k, f));
    }

    #[test]
    fn codes_over_default_field() {
        let f = gf(13);
        for (n, h, k) in [(3, 2, 1), (4, 3, 1), (6, 3, 2), (3, 3, 1), (12, 4, 3)] {
            let code = secure_code(n, h, k, &f).unwrap();
            assert_eq!(code.message_dim(), h - k);
            check(&code, &f);
        }
    }

    #[test]
    fn codes_over_gf3_need_rebasing() {
        let f = gf(3);
        // Four outputs in GF(3)^3 require the zero evaluation point, whose
        // column has no key component until the basis is changed.
        let code = secure_code(4, 3, 1, &f).unwrap();
        check(&code, &f);
        let code = secure_code(3, 2, 1, &f).unwrap();
        check(&code, &f);
        assert!(secure_code(5, 2, 1, &f).is_err());
    }

    #[test]
    fn combination_reproduces_columns() {
        let f = gf(13);
        let code = secure_code(5, 3, 1, &f).unwrap();
        for col in 3..5 {
            let a = code.combination(col, &f);
            assert!(a.iter().all(|&x| x != 0));
            for row in 0..3 {
                let v = (0..3).fold(0, |acc, l| f.mul_add(a[l], code.generator().get(row, l), acc));
                assert_eq!(v, code.generator().get(row, col));
            }
        }
    }

    #[test]
    fn plain_code_has_no_keys() {
        let f = gf(5);
        let code = secure_code(4, 2, 0, &f).unwrap();
        assert_eq!(code.message_dim(), 2);
        assert!(secure_code(2, 3, 0, &f).is_err());
        assert!(secure_code(3, 2, 2, &f).is_err());
    }
}
