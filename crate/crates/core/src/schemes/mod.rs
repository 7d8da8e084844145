//! Secure multicast constructions. Each builder returns a [`Trace`]; the
//! [`SchemeSpec`] registry names them, records their parameters and the
//! adversary they target, and rebuilds them over any field.

pub mod code;
mod directed;
mod feedback;
mod fig2;
pub mod routing;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use code::{secure_code, SecureCode};
pub use directed::{cai_yeung, ksc, ksc_without_share};
pub use feedback::{bidirected_edge, bidirected_node, undirected};
pub use fig2::fig2;
pub use routing::{hadamard_h2, plus_one, routing_h3, routing_h3_rank_deficient, PadProfile, RoutingMatrix};

use crate::error::Result;
use crate::field::PrimeField;
use crate::network::{AdversarySpec, Fig2Variant, NodeId, NodeRole, Orientation, Topology};
use crate::protocol::{LinearForm, Session, Trace};
use crate::rate::Rate;
use crate::verifier::trace_rate;

/// A named construction with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum SchemeSpec {
    CaiYeung { m: usize, h: usize, k: usize },
    Ksc { m: usize, h: usize },
    RoutingH3 { m: usize },
    Hadamard { m: usize },
    PlusOne { h: usize },
    Undirected { m: usize, h: usize },
    BidirectedNode { m: usize, h: usize },
    BidirectedEdge { m: usize, h: usize },
    Fig2 {
        variant: Fig2Variant,
        h: usize,
        #[serde(default)]
        q: usize,
        #[serde(default = "one")]
        k: usize,
    },
}

fn one() -> usize {
    1
}

impl SchemeSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CaiYeung { .. } => "cai_yeung",
            Self::Ksc { .. } => "ksc",
            Self::RoutingH3 { .. } => "routing_h3",
            Self::Hadamard { .. } => "hadamard",
            Self::PlusOne { .. } => "plus_one",
            Self::Undirected { .. } => "undirected",
            Self::BidirectedNode { .. } => "bidirected_node",
            Self::BidirectedEdge { .. } => "bidirected_edge",
            Self::Fig2 { .. } => "fig2",
        }
    }

    pub fn topology(&self) -> Topology {
        use Orientation::*;
        let ccn = |m, h, orientation| Topology::Ccn { m, h, orientation };
        match *self {
            Self::CaiYeung { m, h, .. } | Self::Ksc { m, h } => ccn(m, h, Directed),
            Self::RoutingH3 { m } => ccn(m, 3, Directed),
            Self::Hadamard { m } => ccn(m, 2, Directed),
            Self::PlusOne { h } => ccn(h + 1, h, Directed),
            Self::Undirected { m, h } => ccn(m, h, Undirected),
            Self::BidirectedNode { m, h } | Self::BidirectedEdge { m, h } => ccn(m, h, Bidirected),
            Self::Fig2 { variant, h, q, .. } => Topology::Fig2 {
                variant,
                h,
                q: if variant == Fig2Variant::C { q } else { 0 },
            },
        }
    }

    /// The eavesdropper the construction is designed against.
    pub fn adversary(&self) -> AdversarySpec {
        match *self {
            Self::CaiYeung { k, .. } => AdversarySpec::edges(k),
            Self::BidirectedEdge { .. } => AdversarySpec::edges(1),
            Self::Fig2 { variant: Fig2Variant::D, .. } => AdversarySpec::nodes(1),
            Self::Fig2 { k, .. } => AdversarySpec::edges(k),
            _ => AdversarySpec::nodes(1),
        }
    }

    pub fn build(&self, f: &PrimeField) -> Result<SchemeResult> {
        let trace = match *self {
            Self::CaiYeung { m, h, k } => cai_yeung(m, h, k, f)?,
            Self::Ksc { m, h } => ksc(m, h, f)?,
            Self::RoutingH3 { m } => routing_h3(m, f)?,
            Self::Hadamard { m } => hadamard_h2(m, f)?,
            Self::PlusOne { h } => plus_one(h, f)?,
            Self::Undirected { m, h } => undirected(m, h, f)?,
            Self::BidirectedNode { m, h } => bidirected_node(m, h, f)?,
            Self::BidirectedEdge { m, h } => bidirected_edge(m, h, f)?,
            Self::Fig2 { variant, h, q, k } => fig2(variant, h, q, k, f)?,
        };
        Ok(SchemeResult {
            spec: *self,
            rate: trace_rate(&trace),
            notes: self.notes(),
            trace,
        })
    }

    fn notes(&self) -> Vec<String> {
        match *self {
            Self::RoutingH3 { .. } => vec![
                "pad symbols are c1+d, c2+d, c1+c2+d; c1+d, c1+c2+d, c1-c2+d span only two \
                 dimensions and leave every receiver short"
                    .into(),
            ],
            Self::Hadamard { m } => {
                let n = routing::hadamard_length(m);
                if m < 2 * n {
                    vec![format!("routing uses the first {m} of {} Hadamard codewords", 2 * n)]
                } else {
                    Vec::new()
                }
            }
            Self::Undirected { .. } => {
                vec!["downlink pads are applied only to inputs of non-trivial coding nodes".into()]
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match *self {
            Self::CaiYeung { m, h, k } => write!(f, "{name}(m={m},h={h},k={k})"),
            Self::Ksc { m, h }
            | Self::Undirected { m, h }
            | Self::BidirectedNode { m, h }
            | Self::BidirectedEdge { m, h } => write!(f, "{name}(m={m},h={h})"),
            Self::RoutingH3 { m } | Self::Hadamard { m } => write!(f, "{name}(m={m})"),
            Self::PlusOne { h } => write!(f, "{name}(h={h})"),
            Self::Fig2 { variant, h, q, k } => match variant {
                Fig2Variant::C => write!(f, "{name}{variant}(h={h},q={q},k={k})"),
                Fig2Variant::D => write!(f, "{name}{variant}(h={h})"),
                _ => write!(f, "{name}{variant}(h={h},k={k})"),
            },
        }
    }
}

/// A built scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeResult {
    pub spec: SchemeSpec,
    pub trace: Trace,
    /// `r / N`, reduced.
    pub rate: Rate,
    pub notes: Vec<String>,
}

impl SchemeResult {
    pub fn message_dim(&self) -> usize {
        self.trace.message_dim()
    }

    pub fn rounds(&self) -> u32 {
        self.trace.rounds()
    }
}

// Named entry points returning the trace together with its rate and notes.

pub fn cai_yeung_code(m: usize, h: usize, k: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::CaiYeung { m, h, k }.build(f)
}

pub fn routing_scheme_h3(m: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::RoutingH3 { m }.build(f)
}

pub fn hadamard_scheme_h2(m: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::Hadamard { m }.build(f)
}

pub fn plus_one_scheme(h: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::PlusOne { h }.build(f)
}

pub fn undirected_scheme(m: usize, h: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::Undirected { m, h }.build(f)
}

pub fn bidirected_node_scheme(m: usize, h: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::BidirectedNode { m, h }.build(f)
}

pub fn bidirected_edge_scheme(m: usize, h: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::BidirectedEdge { m, h }.build(f)
}

pub fn fig2_scheme(variant: Fig2Variant, h: usize, q: usize, k: usize, f: &PrimeField) -> Result<SchemeResult> {
    SchemeSpec::Fig2 { variant, h, q, k }.build(f)
}

/// `count - 1` fresh symbols owned by `owner` plus their negated sum, so the
/// `count` forms add to zero.
pub(crate) fn zero_sum_keys(
    s: &mut Session,
    owner: NodeId,
    prefix: &str,
    count: usize,
) -> Result<Vec<LinearForm>> {
    let f = *s.field();
    let mut keys: Vec<LinearForm> = s
        .fresh_named(owner, prefix, count - 1)?
        .into_iter()
        .map(LinearForm::var)
        .collect();
    let last = keys.iter().fold(LinearForm::zero(), |acc, k| acc.minus(k, &f));
    keys.push(last);
    Ok(keys)
}

/// Forwards `values[i - 1]` from each `B_i` to every receiver attached to it.
pub(crate) fn deliver(s: &mut Session, round: u32, values: &[LinearForm]) -> Result<()> {
    let net = s.network().clone();
    for &r in net.receivers() {
        if let NodeRole::Receiver(set) = net.role(r) {
            for &i in set {
                s.send(round, &format!("B{i}"), net.name(r), values[i - 1].clone())?;
            }
        }
    }
    Ok(())
}

/// One round of `code` across the CCN. `S` sends output `l` to `S_l`, which
/// forwards it to `A_l` and a scaled copy plus `pad(j, l)` to each
/// non-trivial `A_j`. Pads must sum to zero over `l` for each `j`, so `A_j`
/// forwards exactly output `j`. Indices passed to `pad` are 1-based.
pub(crate) fn coded_round<P>(
    s: &mut Session,
    round: u32,
    code: &SecureCode,
    inputs: &[LinearForm],
    pad: P,
) -> Result<()>
where
    P: Fn(usize, usize) -> Option<LinearForm>,
{
    let f = *s.field();
    let (m, h) = (code.len(), code.inputs());
    let y: Vec<LinearForm> = (0..h).map(|l| code.encode(inputs, l, &f)).collect();
    for (l, yl) in y.iter().enumerate() {
        s.send(round, "S", &format!("S{}", l + 1), yl.clone())?;
        s.send(round, &format!("S{}", l + 1), &format!("A{}", l + 1), yl.clone())?;
    }
    let mut values = y.clone();
    for j in h + 1..=m {
        let a = code.combination(j - 1, &f);
        let mut sum = LinearForm::zero();
        for (l, yl) in y.iter().enumerate() {
            let mut v = yl.scaled(a[l], &f);
            if let Some(p) = pad(j, l + 1) {
                v = v.plus(&p, &f);
            }
            s.send(round, &format!("S{}", l + 1), &format!("A{j}"), v.clone())?;
            sum = sum.plus(&v, &f);
        }
        values.push(sum);
    }
    for (j, v) in values.iter().enumerate() {
        s.send(round, &format!("A{}", j + 1), &format!("B{}", j + 1), v.clone())?;
    }
    deliver(s, round, &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let spec = SchemeSpec::Fig2 {
            variant: Fig2Variant::C,
            h: 2,
            q: 1,
            k: 2,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"scheme":"fig2","variant":"c","h":2,"q":1,"k":2}"#);
        assert_eq!(serde_json::from_str::<SchemeSpec>(&json).unwrap(), spec);
        assert_eq!(spec.to_string(), "fig2c(h=2,q=1,k=2)");
    }

    #[test]
    fn built_rates() {
        let f = PrimeField::new(13).unwrap();
        let cases = [
            (SchemeSpec::Ksc { m: 4, h: 3 }, Rate::new(1, 1)),
            (SchemeSpec::RoutingH3 { m: 4 }, Rate::new(4, 3)),
            (SchemeSpec::Hadamard { m: 4 }, Rate::new(1, 2)),
            (SchemeSpec::Undirected { m: 4, h: 3 }, Rate::new(4, 3)),
            (SchemeSpec::BidirectedNode { m: 4, h: 3 }, Rate::new(2, 1)),
        ];
        for (spec, rate) in cases {
            let built = spec.build(&f).unwrap();
            assert_eq!(built.rate, rate, "{spec}");
            assert_eq!(built.trace.network().topology(), spec.topology());
        }
    }
}
