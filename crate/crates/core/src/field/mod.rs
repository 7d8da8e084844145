//! Prime-field arithmetic, dense matrices over GF(p), and the two code
//! families the schemes are built from (Vandermonde MDS generators and
//! Sylvester–Hadamard codewords).

mod codes;
mod matrix;

pub use codes::{
    hamming_distance, is_mds, mds_generator, projective_points, sylvester_hadamard_codewords,
    vandermonde, ProjectivePoint,
};
pub use matrix::{left_solve, rank, FieldMatrix, RowSpace};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residue in `[0, p)`.
pub type Elem = u32;

/// Field used by scheme runs unless overridden.
pub const DEFAULT_MODULUS: u32 = 13;

/// GF(p) for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Maps any signed integer to its residue.
    pub fn reduce(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        ((a as u64 + b as u64) % self.p as u64) as Elem
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as Elem
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        ((a as u64 * b as u64) % self.p as u64) as Elem
    }

    pub fn pow(&self, base: Elem, mut exp: u64) -> Elem {
        let p = self.p as u64;
        let mut acc = 1 % p;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as Elem
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// `a * b + c`
    pub fn mul_add(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        ((a as u64 * b as u64 + c as u64) % self.p as u64) as Elem
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_MODULUS }
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p as u64
    }
}

impl std::fmt::Display for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// Builds a field handle for `p`, rejecting composites.
pub fn make_field(p: u64) -> Result<PrimeField> {
    PrimeField::new(p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_accepts_primes() {
        assert_eq!(make_field(2).unwrap().modulus(), 2);
        assert_eq!(make_field(13).unwrap(), PrimeField::default());
        assert!(matches!(make_field(9), Err(Error::NotPrime(9))));
        assert!(make_field(1).is_err());
        assert!(make_field(0).is_err());
        assert!(matches!(make_field(1 << 31), Err(Error::ModulusTooLarge(_))));
    }

    #[test]
    fn arithmetic_mod_7() {
        let f = make_field(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.neg(3), 4);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.reduce(-1), 6);
        assert_eq!(f.inv(0), None);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn inverse_in_gf2() {
        let f = make_field(2).unwrap();
        assert_eq!(f.inv(1), Some(1));
        assert_eq!(f.neg(1), 1);
    }
}
