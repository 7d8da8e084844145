//! Exhaustive entropy computation. Enumerates every joint assignment of
//! message and random symbols, evaluates what the adversary observes, and
//! computes `H(W)` and `H(W | view)` from the resulting counts. Shares no
//! code with the rank-based checks beyond field arithmetic.

use std::collections::HashMap;
use std::hash::Hash;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};
use crate::network::AdversarySet;
use crate::protocol::{Trace, VarKind};

/// Joint assignments enumerated before giving up.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub states: u128,
    /// `H(W)` in units of `log p`.
    pub message_entropy: Ratio<u64>,
    /// `H(W | view)` in units of `log p`; `None` when some conditional law
    /// is not uniform over `p^e` messages.
    pub conditional_entropy: Option<Ratio<u64>>,
    pub message_entropy_bits: f64,
    pub conditional_entropy_bits: f64,
}

impl OracleResult {
    pub fn secure(&self) -> bool {
        self.conditional_entropy == Some(self.message_entropy)
    }

    /// `H(W) - H(W | view)` in units of `log p`.
    pub fn leakage(&self) -> Option<Ratio<u64>> {
        self.conditional_entropy.map(|c| self.message_entropy - c)
    }
}

/// Number of joint assignments for `trace`, or `None` on overflow.
pub fn state_count(trace: &Trace) -> Option<u128> {
    (trace.field().modulus() as u128).checked_pow(trace.dim() as u32)
}

fn observed_rows(trace: &Trace, adv: &AdversarySet) -> Result<Vec<Vec<Elem>>> {
    let dim = trace.dim();
    let net = trace.network();
    let mut rows = Vec::new();
    match adv {
        AdversarySet::Nodes(nodes) => {
            for &n in nodes {
                if !net.contains_node(n) {
                    return Err(Error::UnknownNode(format!("#{}", n.0)));
                }
                for (v, var) in trace.variables().iter() {
                    if var.owner == n {
                        let mut row = vec![0; dim];
                        row[v.0] = 1;
                        rows.push(row);
                    }
                }
                for t in trace.transmissions().iter().filter(|t| t.receiver == n) {
                    rows.push(t.payload.dense(dim));
                }
            }
        }
        AdversarySet::Edges(edges) => {
            for &e in edges {
                net.edge(e)?;
                for t in trace.transmissions().iter().filter(|t| t.edge == e) {
                    rows.push(t.payload.dense(dim));
                }
            }
        }
    }
    Ok(rows)
}

/// Exact `H(W)` and `H(W | V_A)` by enumeration of `p^(r+s)` assignments.
pub fn brute_force_oracle(trace: &Trace, adv: &AdversarySet, budget: u128) -> Result<OracleResult> {
    let states = state_count(trace).unwrap_or(u128::MAX);
    if states > budget {
        return Err(Error::BudgetExceeded { states, budget });
    }
    let rows = observed_rows(trace, adv)?;
    let field = *trace.field();
    let bits_per_symbol = 32 - (field.modulus() - 1).leading_zeros();
    if rows.len() as u32 * bits_per_symbol <= 128 {
        let p = field.modulus() as u128;
        Ok(enumerate(trace, &rows, states, |obs| {
            obs.iter().fold(0u128, |acc, &v| acc * p + v as u128)
        }))
    } else {
        Ok(enumerate(trace, &rows, states, |obs| obs.to_vec()))
    }
}

fn enumerate<K, F>(trace: &Trace, rows: &[Vec<Elem>], states: u128, key: F) -> OracleResult
where
    K: Hash + Eq + Clone,
    F: Fn(&[Elem]) -> K,
{
    let field: PrimeField = *trace.field();
    let p = field.modulus();
    let dim = trace.dim();
    let msg_vars: Vec<usize> = trace
        .variables()
        .iter()
        .filter(|(_, v)| v.kind == VarKind::Message)
        .map(|(id, _)| id.0)
        .collect();
    // Column-major copy so an odometer step touches one column.
    let columns: Vec<Vec<Elem>> = (0..dim).map(|c| rows.iter().map(|r| r[c]).collect()).collect();

    let mut joint: HashMap<(K, u64), u64> = HashMap::new();
    let mut message_counts: HashMap<u64, u64> = HashMap::new();
    let mut assignment = vec![0 as Elem; dim];
    let mut obs = vec![0 as Elem; rows.len()];
    for _ in 0..states {
        let w = msg_vars
            .iter()
            .fold(0u64, |acc, &i| acc * p as u64 + assignment[i] as u64);
        *joint.entry((key(&obs), w)).or_default() += 1;
        *message_counts.entry(w).or_default() += 1;
        // Odometer: every digit that moves advances by one mod p.
        for i in 0..dim {
            assignment[i] = (assignment[i] + 1) % p;
            for (o, &c) in obs.iter_mut().zip(&columns[i]) {
                *o = field.add(*o, c);
            }
            if assignment[i] != 0 {
                break;
            }
        }
    }

    let total = states as u64;
    let message_entropy_bits = entropy_bits(message_counts.values().copied(), total);
    let message_entropy = uniform_exponent(message_counts.values().copied(), p)
        .map(|e| Ratio::from_integer(e as u64))
        .expect("message symbols are uniform");

    // Group the joint counts by observation.
    let mut by_view: HashMap<K, Vec<u64>> = HashMap::new();
    for ((v, _), n) in joint {
        by_view.entry(v).or_default().push(n);
    }
    let mut weighted = 0u64;
    let mut exact = true;
    let mut bits = 0.0;
    for counts in by_view.values() {
        let n_v: u64 = counts.iter().sum();
        bits += n_v as f64 / total as f64 * entropy_bits(counts.iter().copied(), n_v);
        match uniform_exponent(counts.iter().copied(), p) {
            Some(e) => weighted += n_v * e as u64,
            None => exact = false,
        }
    }
    OracleResult {
        states,
        message_entropy,
        conditional_entropy: exact.then(|| Ratio::new(weighted, total)),
        message_entropy_bits,
        conditional_entropy_bits: bits,
    }
}

fn entropy_bits(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    counts
        .map(|n| {
            let q = n as f64 / total as f64;
            -q * q.log2()
        })
        .sum()
}

/// `e` when the counts are all equal and there are exactly `p^e` of them.
fn uniform_exponent(counts: impl Iterator<Item = u64>, p: u32) -> Option<u32> {
    let counts: Vec<u64> = counts.collect();
    let first = *counts.first()?;
    if counts.iter().any(|&c| c != first) {
        return None;
    }
    let mut support = counts.len() as u64;
    let mut e = 0;
    while support > 1 {
        if !support.is_multiple_of(p as u64) {
            return None;
        }
        support /= p as u64;
        e += 1;
    }
    Some(e)
}
