use crate::error::{Error, Result};
use crate::network::{AdversaryKind, Fig2Variant, Orientation, Topology};
use crate::rate::Rate;

/// Closed-form outer bound on the secrecy rate, for the combinations that
/// have one: single-node adversaries on CCNs of each orientation, and
/// `k`-edge adversaries on the parallel-edge and cyclic graphs.
pub fn outer_bound(topology: &Topology, kind: AdversaryKind, k: usize) -> Result<Rate> {
    let none = || {
        let what = match *topology {
            Topology::Ccn { m, h, orientation } => {
                format!("{orientation:?} ({m},{h})-CCN with {k}-{kind:?} adversary")
            }
            Topology::Fig2 { variant, h, q } => {
                format!("graph ({variant}) h={h} q={q} with {k}-{kind:?} adversary")
            }
        };
        Error::NoBound(what.to_lowercase())
    };
    match (*topology, kind, k) {
        (Topology::Ccn { m, h, orientation }, AdversaryKind::Node, 1) => {
            let h = h as u64;
            Ok(match orientation {
                Orientation::Directed if m as u64 > h => Rate::new((h - 1) * (h - 1), h),
                Orientation::Directed => Rate::integer(h - 1),
                Orientation::Undirected => Rate::integer(h - 1),
                Orientation::Bidirected => Rate::integer(h),
            })
        }
        (Topology::Fig2 { variant: Fig2Variant::A | Fig2Variant::B, h, .. }, AdversaryKind::Edge, k) => {
            Ok(Rate::integer(h.saturating_sub(k) as u64))
        }
        (Topology::Fig2 { variant: Fig2Variant::C, h, q }, AdversaryKind::Edge, k) => {
            Ok(Rate::integer(h.min((h + q).saturating_sub(k)) as u64))
        }
        _ => Err(none()),
    }
}

/// Best known achievable rate against one node on an `(m, h)`-CCN with
/// `m > h`, by orientation.
pub fn inner_bound(m: usize, h: usize, orientation: Orientation) -> Result<Rate> {
    if h < 2 || m <= h {
        return Err(Error::InvalidParameters(format!("needs m > h >= 2, got m={m} h={h}")));
    }
    let (m, h) = (m as u64, h as u64);
    Ok(match orientation {
        Orientation::Directed => Rate::new((h - 1) * (h - 1), h),
        Orientation::Undirected => Rate::new((h - 1) * (m - h + 1), m - h + 2),
        Orientation::Bidirected => Rate::integer(h - 1),
    })
}
