//! Multi-round routing schemes on the directed CCN.
//!
//! In round `i` the source draws a fresh pad `δ_i` and the next `h - 1`
//! codeword symbols `c_i`. First layer node `S_l` receives pad symbol
//! `l - 1`, a fixed combination of `c_i` and `δ_i`. Trivial coding nodes
//! always take their own `S_l`; a non-trivial node `A_j` takes the symbol
//! named by the routing matrix entry for round `i`, column `j`. Any single
//! node sees one padded symbol per round, and every receiver collects enough
//! distinct symbols across rounds to cancel pads and decode the codeword.

use crate::error::{Error, Result};
use crate::field::{sylvester_hadamard_codewords, Elem, FieldMatrix, PrimeField};
use crate::network::{build_ccn, Orientation};
use crate::protocol::{new_session, LinearForm, Trace};
use crate::verifier::decodability_check;

use super::code::{generator_candidates, search_generator};
use super::deliver;

/// Which pad symbol each coding node receives per round. Rows are rounds,
/// columns are coding nodes `A_1..A_m`; the first `h` columns are the
/// constants `0, 1, ..., h - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingMatrix {
    h: usize,
    rows: Vec<Vec<usize>>,
}

impl RoutingMatrix {
    pub fn new(h: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        let Some(m) = rows.first().map(Vec::len) else {
            return bad("routing matrix has no rounds".into());
        };
        if m < h {
            return bad(format!("routing matrix has {m} columns, fewer than h={h}"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return bad(format!("round {} has {} columns, expected {m}", i + 1, row.len()));
            }
            if let Some(&s) = row.iter().find(|&&s| s >= h) {
                return bad(format!("symbol {s} out of range for h={h}"));
            }
            if row[..h].iter().enumerate().any(|(j, &s)| s != j) {
                return bad(format!("round {}: trivial columns must read 0..{h}", i + 1));
            }
        }
        Ok(Self { h, rows })
    }

    /// The cyclic matrix for `h = 3`: column `3 + c` reads `(c, c+1, c+2)`
    /// mod 3 over the three rounds.
    pub fn h3(m: usize) -> Result<Self> {
        if !(4..=6).contains(&m) {
            return Err(Error::InvalidParameters(format!("h = 3 routing needs 4 <= m <= 6, got {m}")));
        }
        let rows = (0..3)
            .map(|i| (0..m).map(|j| if j < 3 { j } else { (i + j - 3) % 3 }).collect())
            .collect();
        Self::new(3, rows)
    }

    /// Columns are the first `m` words of the binary Sylvester-Hadamard
    /// code with `2N >= m` words of length `N`.
    pub fn hadamard(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParameters(format!("needs m >= 3, got {m}")));
        }
        let n = hadamard_length(m);
        let words = sylvester_hadamard_codewords(n)?;
        let rows = (0..n)
            .map(|i| words[..m].iter().map(|w| w[i] as usize).collect())
            .collect();
        Self::new(2, rows)
    }

    /// `m = h + 1`; the extra node reads symbol `i - 1` in round `i`.
    pub fn plus_one(h: usize) -> Result<Self> {
        let rows = (0..h)
            .map(|i| (0..h).chain(std::iter::once(i)).collect())
            .collect();
        Self::new(h, rows)
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn rounds(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows[0].len()
    }

    /// Symbol for round `i` (0-based) and coding node column `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.rows[i][j]
    }
}

/// Smallest power of two `N >= 2` with `2N >= m`.
pub fn hadamard_length(m: usize) -> usize {
    m.div_ceil(2).next_power_of_two().max(2)
}

/// Per-round `h x h` matrices: row `s` gives pad symbol `s` as a
/// combination of `(c_1, ..., c_{h-1}, δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadProfile {
    rounds: Vec<FieldMatrix>,
}

impl PadProfile {
    /// Checked profile: every round matrix is invertible and every symbol
    /// carries the pad.
    pub fn new(rounds: Vec<FieldMatrix>, f: &PrimeField) -> Result<Self> {
        let profile = Self { rounds };
        match profile.violation(f) {
            Some(why) => Err(Error::InvalidParameters(why)),
            None => Ok(profile),
        }
    }

    /// No validation; for demonstrating what goes wrong with bad pads.
    pub fn unchecked(rounds: Vec<FieldMatrix>) -> Self {
        Self { rounds }
    }

    fn violation(&self, f: &PrimeField) -> Option<String> {
        let h = self.rounds.first()?.rows();
        for (i, p) in self.rounds.iter().enumerate() {
            if p.rows() != h || p.cols() != h {
                return Some(format!("round {} pad matrix is not {h} x {h}", i + 1));
            }
            if !p.is_invertible(f) {
                return Some(format!("round {} pad symbols are linearly dependent", i + 1));
            }
            if let Some(s) = (0..h).find(|&s| p.get(s, h - 1) == 0) {
                return Some(format!("round {} symbol {s} is not padded", i + 1));
            }
        }
        None
    }

    pub fn is_valid(&self, f: &PrimeField) -> bool {
        !self.rounds.is_empty() && self.violation(f).is_none()
    }

    pub fn rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn round(&self, i: usize) -> &FieldMatrix {
        &self.rounds[i]
    }

    /// `c1 + δ`, `c2 + δ`, `c1 + c2 + δ` in each of three rounds.
    pub fn h3(f: &PrimeField) -> Self {
        let m = FieldMatrix::from_i64_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]], 3, f)
            .expect("static shape");
        Self::new(vec![m; 3], f).expect("invertible over every field")
    }

    /// `c1 + δ`, `c1 + c2 + δ`, `c1 - c2 + δ`: only two independent
    /// combinations of `(c1, c2)`, so `δ` cannot be cancelled.
    pub fn h3_rank_deficient(f: &PrimeField) -> Self {
        let m = FieldMatrix::from_i64_rows(&[vec![1, 0, 1], vec![1, 1, 1], vec![1, -1, 1]], 3, f)
            .expect("static shape");
        Self::unchecked(vec![m; 3])
    }

    /// `c + δ` and `δ` in each of `n` rounds.
    pub fn hadamard(n: usize, f: &PrimeField) -> Self {
        let m = FieldMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]], 2, f).expect("static shape");
        Self::new(vec![m; n], f).expect("invertible")
    }

    /// Round `i`: `S_j` gets `x_j + δ` for `j < i`, `sum(x) + δ` for
    /// `j = i` and `x_{j-1} + δ` for `j > i`, where `x = T^{-1} c` with
    /// `T = J - I`. Needs `h - 2` invertible.
    pub fn plus_one(h: usize, f: &PrimeField) -> Result<Self> {
        let hm = h - 1;
        let mut t = FieldMatrix::zeros(hm, hm);
        for r in 0..hm {
            for c in 0..hm {
                t.set(r, c, if r == c { 0 } else { 1 });
            }
        }
        let t_inv = t.inverse(f).ok_or_else(|| {
            Error::InvalidParameters(format!("J - I is singular for h={h} over {f}"))
        })?;
        let rounds = (1..=h)
            .map(|i| {
                let mut p = FieldMatrix::zeros(h, h);
                for j in 1..=h {
                    let x: Vec<Elem> = match j.cmp(&i) {
                        std::cmp::Ordering::Less => unit(hm, j - 1),
                        std::cmp::Ordering::Equal => vec![1; hm],
                        std::cmp::Ordering::Greater => unit(hm, j - 2),
                    };
                    // a.x = a.T^{-1} c, and T^{-1} is symmetric.
                    let c = t_inv.apply(&x, f);
                    for (col, v) in c.into_iter().enumerate() {
                        p.set(j - 1, col, v);
                    }
                    p.set(j - 1, hm, 1);
                }
                p
            })
            .collect();
        Self::new(rounds, f)
    }
}

fn unit(n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Runs a routing scheme whose message is `generator.rows()` symbols and
/// whose codeword is `c = G^T w` of length `N (h - 1)`.
pub fn routing_trace(
    routing: &RoutingMatrix,
    pads: &PadProfile,
    generator: &FieldMatrix,
    f: &PrimeField,
) -> Result<Trace> {
    let (h, m, n) = (routing.h(), routing.cols(), routing.rounds());
    if pads.rounds() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} pad rounds for a {n}-round routing matrix",
            pads.rounds()
        )));
    }
    if generator.cols() != n * (h - 1) {
        return Err(Error::DimensionMismatch(format!(
            "codeword length {} but {n} rounds of {} symbols",
            generator.cols(),
            h - 1
        )));
    }
    let net = build_ccn(m, h, Orientation::Directed)?;
    let mut s = new_session(net, generator.rows(), *f)?;
    let src = s.network().source();
    let deltas = s.fresh_named(src, "d", n)?;
    let w = s.messages();
    let codeword: Vec<LinearForm> = (0..generator.cols())
        .map(|t| {
            let terms: Vec<_> = w
                .iter()
                .enumerate()
                .map(|(a, wa)| (generator.get(a, t) as i64, wa))
                .collect();
            LinearForm::combine(f, &terms)
        })
        .collect();

    for i in 0..n {
        let round = i as u32 + 1;
        let p = pads.round(i);
        let c = &codeword[i * (h - 1)..(i + 1) * (h - 1)];
        let delta = LinearForm::var(deltas[i]);
        let symbols: Vec<LinearForm> = (0..h)
            .map(|sym| {
                let mut terms: Vec<_> = c
                    .iter()
                    .enumerate()
                    .map(|(j, cj)| (p.get(sym, j) as i64, cj))
                    .collect();
                terms.push((p.get(sym, h - 1) as i64, &delta));
                LinearForm::combine(f, &terms)
            })
            .collect();
        for (l, sym) in symbols.iter().enumerate() {
            s.send(round, "S", &format!("S{}", l + 1), sym.clone())?;
        }
        let mut values = Vec::with_capacity(m);
        for j in 0..m {
            let sym = routing.get(i, j);
            let v = symbols[sym].clone();
            s.send(round, &format!("S{}", sym + 1), &format!("A{}", j + 1), v.clone())?;
            s.send(round, &format!("A{}", j + 1), &format!("B{}", j + 1), v.clone())?;
            values.push(v);
        }
        deliver(&mut s, round, &values)?;
    }
    s.finalize()
}

fn every_receiver_decodes(trace: &Trace) -> Result<bool> {
    for &r in trace.network().receivers() {
        if !decodability_check(trace, r)?.ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn searched(routing: &RoutingMatrix, pads: &PadProfile, k: usize, f: &PrimeField) -> Result<Trace> {
    let n = routing.rounds() * (routing.h() - 1);
    let g = search_generator(n, k, f, |g| every_receiver_decodes(&routing_trace(routing, pads, g, f)?))?;
    routing_trace(routing, pads, &g, f)
}

/// Rate `4/3` against one node for `h = 3`, `4 <= m <= 6`, odd `p`.
pub fn routing_h3(m: usize, f: &PrimeField) -> Result<Trace> {
    if !f.is_odd() {
        return Err(Error::InvalidParameters("h = 3 routing needs an odd field".into()));
    }
    searched(&RoutingMatrix::h3(m)?, &PadProfile::h3(f), 4, f)
}

/// [`routing_h3`]'s routing with the rank-deficient pads. Uses the first
/// candidate generator since no generator can make it decodable.
pub fn routing_h3_rank_deficient(m: usize, f: &PrimeField) -> Result<Trace> {
    let g = generator_candidates(6, 4, f).next().expect("candidates exist");
    routing_trace(&RoutingMatrix::h3(m)?, &PadProfile::h3_rank_deficient(f), &g, f)
}

/// Rate `1/2` against one node for `h = 2`, any `m >= 3`.
pub fn hadamard_h2(m: usize, f: &PrimeField) -> Result<Trace> {
    let routing = RoutingMatrix::hadamard(m)?;
    let n = routing.rounds();
    searched(&routing, &PadProfile::hadamard(n, f), n / 2, f)
}

/// Rate `(h-1)^2 / h` against one node for `m = h + 1`.
pub fn plus_one(h: usize, f: &PrimeField) -> Result<Trace> {
    if h < 3 {
        return Err(Error::InvalidParameters(format!("needs h >= 3, got {h}")));
    }
    if !f.is_odd() {
        return Err(Error::InvalidParameters("needs an odd field".into()));
    }
    let pads = PadProfile::plus_one(h, f)?;
    searched(&RoutingMatrix::plus_one(h)?, &pads, (h - 1) * (h - 1), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::AdversarySpec;
    use crate::verifier::verify_all;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn h3_matrix_layout() {
        let r = RoutingMatrix::h3(6).unwrap();
        let col = |j| (0..3).map(|i| r.get(i, j)).collect::<Vec<_>>();
        assert_eq!(col(3), [0, 1, 2]);
        assert_eq!(col(4), [1, 2, 0]);
        assert_eq!(col(5), [2, 0, 1]);
        assert!(RoutingMatrix::h3(7).is_err());
    }

    #[test]
    fn hadamard_lengths() {
        assert_eq!(hadamard_length(3), 2);
        assert_eq!(hadamard_length(4), 2);
        assert_eq!(hadamard_length(5), 4);
        assert_eq!(hadamard_length(8), 4);
        assert_eq!(hadamard_length(9), 8);
        let r = RoutingMatrix::hadamard(5).unwrap();
        assert_eq!((r.rounds(), r.cols()), (4, 5));
    }

    #[test]
    fn pad_validation() {
        let f = gf(13);
        assert!(PadProfile::h3(&f).is_valid(&f));
        assert!(!PadProfile::h3_rank_deficient(&f).is_valid(&f));
        assert!(PadProfile::plus_one(4, &gf(3)).is_ok());
        // h - 2 = 3 vanishes mod 3.
        assert!(PadProfile::plus_one(5, &gf(3)).is_err());
    }

    #[test]
    fn routing_h3_passes() {
        let f = gf(13);
        for m in 4..=6 {
            let t = routing_h3(m, &f).unwrap();
            assert_eq!((t.message_dim(), t.rounds()), (4, 3));
            assert!(verify_all(&t, &AdversarySpec::nodes(1)).unwrap().passed());
        }
    }

    #[test]
    fn rank_deficient_pads_never_decode() {
        let f = gf(13);
        let t = routing_h3_rank_deficient(4, &f).unwrap();
        let v = verify_all(&t, &AdversarySpec::nodes(1)).unwrap();
        assert!(v.receivers.iter().all(|r| !r.decodable));
    }

    #[test]
    fn hadamard_and_plus_one_pass() {
        let f = gf(13);
        for m in [3, 5] {
            let t = hadamard_h2(m, &f).unwrap();
            assert!(verify_all(&t, &AdversarySpec::nodes(1)).unwrap().passed());
        }
        let t = plus_one(3, &f).unwrap();
        assert_eq!((t.message_dim(), t.rounds()), (4, 3));
        assert!(verify_all(&t, &AdversarySpec::nodes(1)).unwrap().passed());
    }
}
