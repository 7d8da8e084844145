use itertools::Itertools;

use super::{Elem, FieldMatrix, PrimeField};
use crate::error::{Error, Result};

/// Evaluation point of a (doubly extended) Reed–Solomon code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjectivePoint {
    Finite(Elem),
    /// Contributes the column `(0, ..., 0, 1)`.
    Infinity,
}

/// All `p + 1` points, nonzero ones first, then infinity, then zero.
pub fn projective_points(field: &PrimeField) -> Vec<ProjectivePoint> {
    let mut pts: Vec<_> = (1..field.modulus()).map(ProjectivePoint::Finite).collect();
    pts.push(ProjectivePoint::Infinity);
    pts.push(ProjectivePoint::Finite(0));
    pts
}

/// `k x n` Vandermonde matrix, one column `(1, x, ..., x^(k-1))` per point.
pub fn vandermonde(points: &[ProjectivePoint], k: usize, field: &PrimeField) -> FieldMatrix {
    let mut g = FieldMatrix::zeros(k, points.len());
    for (j, pt) in points.iter().enumerate() {
        match *pt {
            ProjectivePoint::Finite(x) => {
                let mut v = 1;
                for i in 0..k {
                    g.set(i, j, v);
                    v = field.mul(v, x);
                }
            }
            ProjectivePoint::Infinity => {
                if k > 0 {
                    g.set(k - 1, j, 1);
                }
            }
        }
    }
    g
}

/// `k x n` generator of an MDS code: every `k x k` column submatrix is
/// invertible. Uses the nonzero points `1..p-1`, adding the point at
/// infinity when `n = p`.
pub fn mds_generator(n: usize, k: usize, field: &PrimeField) -> Result<FieldMatrix> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!(
            "MDS generator needs 1 <= k <= n, got n={n} k={k}"
        )));
    }
    if n > field.modulus() as usize {
        return Err(Error::FieldTooSmall {
            needed: n,
            modulus: field.modulus(),
        });
    }
    let points: Vec<_> = projective_points(field).into_iter().take(n).collect();
    Ok(vandermonde(&points, k, field))
}

/// Checks every `rows x rows` column submatrix for invertibility.
pub fn is_mds(g: &FieldMatrix, field: &PrimeField) -> bool {
    let k = g.rows();
    (0..g.cols())
        .combinations(k)
        .all(|cols| g.select_columns(&cols).is_invertible(field))
}

/// The `2N` binary codewords of length `N` from Sylvester's construction:
/// the rows of the 0/1 Hadamard matrix and their complements. The all-zero
/// word comes first and the all-one word second.
pub fn sylvester_hadamard_codewords(n: usize) -> Result<Vec<Vec<u8>>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut h: Vec<Vec<u8>> = vec![vec![0]];
    while h.len() < n {
        let top = h.iter().map(|r| [r.as_slice(), r.as_slice()].concat());
        let bottom = h
            .iter()
            .map(|r| [r.clone(), r.iter().map(|b| b ^ 1).collect()].concat());
        h = top.chain(bottom).collect();
    }
    let complement = |r: &Vec<u8>| r.iter().map(|b| b ^ 1).collect::<Vec<u8>>();
    let mut words = vec![h[0].clone(), complement(&h[0])];
    words.extend(h.iter().skip(1).cloned());
    words.extend(h.iter().skip(1).map(complement));
    Ok(words)
}

pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    // Leibniz expansion, independent of the elimination code path.
    fn det_by_permutations(m: &FieldMatrix, f: &PrimeField) -> Elem {
        let n = m.rows();
        let mut total = 0;
        for perm in (0..n).permutations(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let mut term = 1;
            for (r, &c) in perm.iter().enumerate() {
                term = f.mul(term, m.get(r, c));
            }
            total = if inversions % 2 == 0 {
                f.add(total, term)
            } else {
                f.sub(total, term)
            };
        }
        total
    }

    #[test]
    fn mds_6_4_over_gf7_every_submatrix_invertible() {
        let f = gf(7);
        let g = mds_generator(6, 4, &f).unwrap();
        let subsets: Vec<_> = (0..6).combinations(4).collect();
        assert_eq!(subsets.len(), 15);
        for cols in subsets {
            assert_ne!(det_by_permutations(&g.select_columns(&cols), &f), 0, "{cols:?}");
        }
    }

    #[test]
    fn mds_small_cases() {
        let f = gf(5);
        let g = mds_generator(3, 3, &f).unwrap();
        assert!(g.is_invertible(&f));
        let g = mds_generator(3, 1, &f).unwrap();
        assert!(g.row(0).iter().all(|&v| v != 0));
        // n = p uses the point at infinity.
        let g = mds_generator(5, 2, &f).unwrap();
        assert!(is_mds(&g, &f));
        assert!(matches!(
            mds_generator(6, 2, &f),
            Err(Error::FieldTooSmall { needed: 6, .. })
        ));
        assert!(mds_generator(2, 3, &f).is_err());
    }

    #[test]
    fn determinant_matches_leibniz() {
        let f = gf(13);
        let g = vandermonde(&projective_points(&f)[..4], 4, &f);
        assert_eq!(g.determinant(&f).unwrap(), det_by_permutations(&g, &f));
    }

    #[test]
    fn hadamard_n2_words() {
        let words = sylvester_hadamard_codewords(2).unwrap();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(sorted, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(words[0], vec![0, 0]);
        assert_eq!(words[1], vec![1, 1]);
    }

    #[test]
    fn hadamard_pairwise_distance() {
        for n in [1usize, 2, 4, 8, 16] {
            let words = sylvester_hadamard_codewords(n).unwrap();
            assert_eq!(words.len(), 2 * n);
            assert!(words.iter().all(|w| w.len() == n));
            assert!(words.contains(&vec![0; n]));
            assert!(words.contains(&vec![1; n]));
            let min = words
                .iter()
                .tuple_combinations()
                .map(|(a, b)| hamming_distance(a, b))
                .min()
                .unwrap();
            assert!(min * 2 >= n, "N={n} min distance {min}");
        }
    }

    #[test]
    fn hadamard_rejects_non_powers() {
        assert!(matches!(sylvester_hadamard_codewords(6), Err(Error::NotPowerOfTwo(6))));
        assert!(sylvester_hadamard_codewords(0).is_err());
    }
}
