//! Exact decodability and secrecy checks for traces.
//!
//! An adversary's view is split into a message block and a block over the
//! random symbols it does not own. With uniform, independent symbols the
//! information it gains about the message is
//! `rank([M_w | M_r]) - rank(M_r)` field symbols; perfect secrecy means
//! this leakage is zero. [`oracle`] recomputes the same quantity by brute
//! force over every assignment.

mod bounds;
pub mod oracle;

pub use bounds::{inner_bound, outer_bound};
pub use oracle::{brute_force_oracle, OracleResult, DEFAULT_BUDGET};

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{left_solve, FieldMatrix, PrimeField};
use crate::network::{adversary_sets, AdversaryKind, AdversarySet, AdversarySpec, NodeId};
use crate::protocol::{LinearForm, Trace, VarId, VarKind};
use crate::rate::Rate;

/// Everything an adversary observes, as linear forms split into the
/// message coordinates and the randomness it does not own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryView {
    pub message: FieldMatrix,
    pub randomness: FieldMatrix,
    /// Variable behind each column of `randomness`.
    pub unknown: Vec<VarId>,
}

impl AdversaryView {
    pub fn rows(&self) -> usize {
        self.message.rows()
    }

    /// Builds a view directly from observed forms, treating `known`
    /// random variables as the adversary's own.
    pub fn from_forms(
        forms: &[LinearForm],
        message_dim: usize,
        dim: usize,
        known: &HashSet<VarId>,
    ) -> Self {
        let mut seen = HashSet::new();
        let forms: Vec<_> = forms.iter().filter(|f| seen.insert(*f)).collect();
        let unknown: Vec<VarId> = (message_dim..dim)
            .map(VarId)
            .filter(|v| !known.contains(v))
            .collect();
        let mut message = FieldMatrix::zeros(forms.len(), message_dim);
        let mut randomness = FieldMatrix::zeros(forms.len(), unknown.len());
        for (r, form) in forms.iter().enumerate() {
            for c in 0..message_dim {
                message.set(r, c, form.coeff(VarId(c)));
            }
            for (c, &v) in unknown.iter().enumerate() {
                randomness.set(r, c, form.coeff(v));
            }
        }
        Self {
            message,
            randomness,
            unknown,
        }
    }

    /// View with extra observed rows appended (same column split).
    pub fn with_rows(&self, message: &FieldMatrix, randomness: &FieldMatrix) -> Result<Self> {
        Ok(Self {
            message: self.message.vstack(message)?,
            randomness: self.randomness.vstack(randomness)?,
            unknown: self.unknown.clone(),
        })
    }
}

/// The observations of a node or edge set over the whole run.
pub fn adversary_view(trace: &Trace, adv: &AdversarySet) -> Result<AdversaryView> {
    let net = trace.network();
    let vars = trace.variables();
    let mut forms = Vec::new();
    let mut known = HashSet::new();
    match adv {
        AdversarySet::Nodes(nodes) => {
            for &n in nodes {
                if !net.contains_node(n) {
                    return Err(Error::UnknownNode(format!("#{}", n.0)));
                }
                for v in vars.owned_by(n) {
                    match vars.get(v).kind {
                        VarKind::Message => forms.push(LinearForm::var(v)),
                        VarKind::Random => {
                            known.insert(v);
                        }
                    }
                }
                forms.extend(trace.received_by(n).map(|t| t.payload.clone()));
            }
        }
        AdversarySet::Edges(edges) => {
            for &e in edges {
                net.edge(e)?;
                forms.extend(trace.on_edge(e).map(|t| t.payload.clone()));
            }
        }
    }
    Ok(AdversaryView::from_forms(
        &forms,
        trace.message_dim(),
        trace.dim(),
        &known,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SecrecyOutcome {
    pub secure: bool,
    /// Independent message functionals exposed, in field symbols.
    pub leakage: usize,
}

pub fn secrecy_check(view: &AdversaryView, field: &PrimeField) -> SecrecyOutcome {
    let joint = view
        .message
        .hstack(&view.randomness)
        .expect("view blocks share rows");
    let leakage = joint.rank(field) - view.randomness.rank(field);
    SecrecyOutcome {
        secure: leakage == 0,
        leakage,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoding {
    pub ok: bool,
    /// `D` with `D * knowledge = [I_r | 0]` when decoding succeeds.
    pub decoder: Option<FieldMatrix>,
}

/// Whether `receiver` recovers every message symbol from its final
/// knowledge (received payloads plus its own random symbols).
pub fn decodability_check(trace: &Trace, receiver: NodeId) -> Result<Decoding> {
    let net = trace.network();
    if !net.contains_node(receiver) || !net.is_receiver(receiver) {
        return Err(Error::InvalidParameters(format!(
            "`{}` is not a receiver",
            if net.contains_node(receiver) {
                net.name(receiver)
            } else {
                "?"
            }
        )));
    }
    let knowledge = trace.final_knowledge(receiver);
    let r = trace.message_dim();
    let mut target = FieldMatrix::zeros(r, trace.dim());
    for i in 0..r {
        target.set(i, i, 1);
    }
    let decoder = left_solve(&knowledge, &target, trace.field())?;
    Ok(Decoding {
        ok: decoder.is_some(),
        decoder,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverVerdict {
    pub receiver: String,
    pub decodable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecrecyVerdict {
    pub set: Vec<String>,
    pub secure: bool,
    pub leakage: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub adversary: AdversarySpec,
    pub receivers: Vec<ReceiverVerdict>,
    pub secrecy: Vec<SecrecyVerdict>,
    pub rate: Rate,
    pub bound: Option<Rate>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn all_decodable(&self) -> bool {
        self.receivers.iter().all(|r| r.decodable)
    }

    pub fn all_secure(&self) -> bool {
        self.secrecy.iter().all(|s| s.secure)
    }

    pub fn passed(&self) -> bool {
        self.all_decodable() && self.all_secure()
    }

    pub fn max_leakage(&self) -> usize {
        self.secrecy.iter().map(|s| s.leakage).max().unwrap_or(0)
    }

    pub fn insecure_sets(&self) -> impl Iterator<Item = &SecrecyVerdict> {
        self.secrecy.iter().filter(|s| !s.secure)
    }
}

/// Achieved rate `r / N`.
pub fn trace_rate(trace: &Trace) -> Rate {
    Rate::new(trace.message_dim() as u64, trace.rounds() as u64)
}

/// Decodability at every receiver and secrecy against every candidate set
/// of `spec`, with the rate and the matching outer bound when one exists.
pub fn verify_all(trace: &Trace, spec: &AdversarySpec) -> Result<Verdict> {
    let sets = adversary_sets(trace.network(), spec)?;
    verify_sets(trace, spec, &sets)
}

/// Like [`verify_all`] but against the given sets only. `spec` supplies the
/// bound lookup and notes.
pub fn verify_sets(trace: &Trace, spec: &AdversarySpec, sets: &[AdversarySet]) -> Result<Verdict> {
    let net = trace.network();
    let receivers = net
        .receivers()
        .par_iter()
        .map(|&r| {
            decodability_check(trace, r).map(|d| ReceiverVerdict {
                receiver: net.name(r).to_string(),
                decodable: d.ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let secrecy = sets
        .par_iter()
        .map(|set| {
            let view = adversary_view(trace, set)?;
            let out = secrecy_check(&view, trace.field());
            Ok(SecrecyVerdict {
                set: set.labels(net),
                secure: out.secure,
                leakage: out.leakage,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut notes = Vec::new();
    if spec.kind == AdversaryKind::Node
        && !(spec.policy.include_source || spec.policy.include_receivers)
    {
        notes.push("node adversary candidates exclude the source and all receivers".into());
    }
    let bound = match outer_bound(&net.topology(), spec.kind, spec.k) {
        Ok(b) => Some(b),
        Err(Error::NoBound(what)) => {
            notes.push(format!("no outer bound stated for {what}"));
            None
        }
        Err(e) => return Err(e),
    };
    Ok(Verdict {
        adversary: *spec,
        receivers,
        secrecy,
        rate: trace_rate(trace),
        bound,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_fig2, Fig2Variant};
    use crate::protocol::new_session;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn view(rows: &[(Vec<i64>, Vec<i64>)], f: &PrimeField) -> AdversaryView {
        let r = rows[0].0.len();
        let s = rows[0].1.len();
        let msg: Vec<_> = rows.iter().map(|(m, _)| m.clone()).collect();
        let rnd: Vec<_> = rows.iter().map(|(_, k)| k.clone()).collect();
        AdversaryView {
            message: FieldMatrix::from_i64_rows(&msg, r, f).unwrap(),
            randomness: FieldMatrix::from_i64_rows(&rnd, s, f).unwrap(),
            unknown: (r..r + s).map(VarId).collect(),
        }
    }

    #[test]
    fn one_time_pad_and_revealed_pad() {
        let f = gf(5);
        let padded = view(&[(vec![1], vec![1])], &f);
        assert_eq!(secrecy_check(&padded, &f), SecrecyOutcome { secure: true, leakage: 0 });
        let revealed = view(&[(vec![1], vec![1]), (vec![0], vec![1])], &f);
        assert_eq!(secrecy_check(&revealed, &f), SecrecyOutcome { secure: false, leakage: 1 });
    }

    fn fig2a_plain() -> Trace {
        let f = gf(5);
        let net = build_fig2(Fig2Variant::A, 2, 0).unwrap();
        let mut s = new_session(net, 1, f).unwrap();
        let src = s.network().source();
        let k = LinearForm::var(s.fresh_named(src, "k", 1).unwrap()[0]);
        let e: Vec<_> = s.network().arcs(src, s.network().node("R").unwrap());
        s.transmit(1, e[0].0, e[0].1, s.message(0).plus(&k, &f)).unwrap();
        s.transmit(1, e[1].0, e[1].1, k).unwrap();
        s.finalize().unwrap()
    }

    #[test]
    fn empty_set_and_source_tap() {
        let t = fig2a_plain();
        let empty = adversary_view(&t, &AdversarySet::Nodes(vec![])).unwrap();
        assert_eq!(empty.rows(), 0);
        assert_eq!(secrecy_check(&empty, t.field()).leakage, 0);
        let src = adversary_view(&t, &AdversarySet::Nodes(vec![t.network().source()])).unwrap();
        assert_eq!(secrecy_check(&src, t.field()).leakage, t.message_dim());
        assert!(adversary_view(&t, &AdversarySet::Nodes(vec![NodeId(42)])).is_err());
    }

    #[test]
    fn decodes_and_detects_truncation() {
        let t = fig2a_plain();
        let r = t.network().node("R").unwrap();
        let d = decodability_check(&t, r).unwrap();
        assert!(d.ok);
        let v = verify_all(&t, &AdversarySpec::edges(1)).unwrap();
        assert!(v.passed());
        assert_eq!(v.rate, Rate::integer(1));
        assert_eq!(v.bound, Some(Rate::integer(1)));
        // Both edges together reveal the message.
        let v2 = verify_all(&t, &AdversarySpec::edges(2)).unwrap();
        assert!(!v2.all_secure());
        assert!(decodability_check(&t, t.network().source()).is_err());
    }

    #[test]
    fn owned_randomness_is_folded_out() {
        let f = gf(3);
        let net = build_fig2(Fig2Variant::D, 2, 0).unwrap();
        let mut s = new_session(net, 1, f).unwrap();
        let c1 = s.network().node("C1").unwrap();
        // C1 generates its own pad: useless against C1 itself.
        let k = LinearForm::var(s.fresh_named(c1, "k", 1).unwrap()[0]);
        s.send(1, "C1", "S", k.clone()).unwrap();
        s.send(1, "S", "C1", s.message(0).plus(&k, &f)).unwrap();
        s.send(1, "C1", "R", s.message(0).plus(&k, &f)).unwrap();
        let t = s.finalize().unwrap();
        let at_c1 = adversary_view(&t, &AdversarySet::Nodes(vec![c1])).unwrap();
        assert_eq!(secrecy_check(&at_c1, &f).leakage, 1);
        let at_c2 = adversary_view(&t, &AdversarySet::Nodes(vec![t.network().node("C2").unwrap()]))
            .unwrap();
        assert!(secrecy_check(&at_c2, &f).secure);
    }
}
