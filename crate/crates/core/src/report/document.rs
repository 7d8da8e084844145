use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, PrimeField};
use crate::network::{AdversarySpec, Direction, EdgeId, Topology};
use crate::protocol::{replay_parts, LinearForm, Trace, VarId, VarKind};
use crate::rate::Rate;
use crate::schemes::SchemeSpec;
use crate::verifier::{ReceiverVerdict, SecrecyVerdict, Verdict};

pub const FORMAT_VERSION: &str = "v1";

/// Serialized form of a [`Trace`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub version: String,
    pub field: u64,
    pub topology: Topology,
    /// Present when the trace came from a registered construction, so it can
    /// be rebuilt over another field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeSpec>,
    pub message_dim: usize,
    pub variables: Vec<VariableEntry>,
    pub transmissions: Vec<TransmissionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    pub label: String,
    pub kind: VarKind,
    pub owner: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmissionEntry {
    pub round: u32,
    pub edge: usize,
    pub from: String,
    pub to: String,
    pub direction: Direction,
    /// Nonzero coefficients keyed by variable label.
    pub payload: BTreeMap<String, Elem>,
}

impl TraceDocument {
    pub fn from_trace(trace: &Trace, scheme: Option<SchemeSpec>) -> Self {
        let net = trace.network();
        let vars = trace.variables();
        let variables = vars
            .iter()
            .map(|(_, v)| VariableEntry {
                label: v.label.clone(),
                kind: v.kind,
                owner: net.name(v.owner).to_string(),
            })
            .collect();
        let transmissions = trace
            .transmissions()
            .iter()
            .map(|t| TransmissionEntry {
                round: t.round,
                edge: t.edge.0,
                from: net.name(t.sender).to_string(),
                to: net.name(t.receiver).to_string(),
                direction: t.direction,
                payload: t
                    .payload
                    .support()
                    .map(|(v, c)| (vars.get(v).label.clone(), c))
                    .collect(),
            })
            .collect();
        Self {
            version: FORMAT_VERSION.into(),
            field: trace.field().modulus() as u64,
            topology: net.topology(),
            scheme,
            message_dim: trace.message_dim(),
            variables,
            transmissions,
        }
    }

    /// Parses JSON, reporting the line and column of syntax or schema errors.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if doc.version != FORMAT_VERSION {
            return Err(Error::Document(format!(
                "version: expected \"{FORMAT_VERSION}\", found \"{}\"",
                doc.version
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Rebuilds the trace, re-validating every transmission. Structural
    /// problems are [`Error::Document`] naming the offending field; protocol
    /// violations (uncomputable payloads, reused edges) come back as the
    /// corresponding protocol error.
    pub fn to_trace(&self) -> Result<Trace> {
        let doc = |msg: String| Error::Document(msg);
        let field = PrimeField::new(self.field).map_err(|e| doc(format!("field: {e}")))?;
        let net = self.topology.build().map_err(|e| doc(format!("topology: {e}")))?;
        let node = |path: String, name: &str| {
            net.node(name)
                .map_err(|_| doc(format!("{path}: no node named `{name}`")))
        };

        let mut labels: HashMap<&str, VarId> = HashMap::new();
        let mut randomness = Vec::new();
        for (i, v) in self.variables.iter().enumerate() {
            let path = format!("variables[{i}]");
            let owner = node(format!("{path}.owner"), &v.owner)?;
            if labels.insert(&v.label, VarId(i)).is_some() {
                return Err(doc(format!("{path}.label: duplicate `{}`", v.label)));
            }
            let is_message = i < self.message_dim;
            match (is_message, v.kind) {
                (true, VarKind::Message) => {
                    let expected = format!("w{}", i + 1);
                    if v.label != expected || owner != net.source() {
                        return Err(doc(format!(
                            "{path}: message symbol {} must be `{expected}` owned by the source",
                            i + 1
                        )));
                    }
                }
                (false, VarKind::Random) => randomness.push((v.label.clone(), owner)),
                _ => {
                    return Err(doc(format!(
                        "{path}.kind: the first {} variables are the message symbols",
                        self.message_dim
                    )))
                }
            }
        }

        let mut transmissions = Vec::with_capacity(self.transmissions.len());
        for (i, t) in self.transmissions.iter().enumerate() {
            let path = format!("transmissions[{i}]");
            let edge = net
                .edge(EdgeId(t.edge))
                .map_err(|_| doc(format!("{path}.edge: no edge {}", t.edge)))?;
            let (from, to) = edge.endpoints(t.direction);
            if net.name(from) != t.from || net.name(to) != t.to {
                return Err(doc(format!(
                    "{path}: edge {} used {:?} runs {} -> {}, not {} -> {}",
                    t.edge,
                    t.direction,
                    net.name(from),
                    net.name(to),
                    t.from,
                    t.to
                )));
            }
            let mut coeffs = vec![0; self.variables.len()];
            for (label, &c) in &t.payload {
                let v = labels
                    .get(label.as_str())
                    .ok_or_else(|| doc(format!("{path}.payload.{label}: unknown variable")))?;
                if c >= field.modulus() {
                    return Err(doc(format!(
                        "{path}.payload.{label}: residue {c} not below {}",
                        field.modulus()
                    )));
                }
                coeffs[v.0] = c;
            }
            transmissions.push((t.round, edge.id, t.direction, LinearForm::from_dense(coeffs)));
        }
        replay_parts(net, field, self.message_dim, randomness, transmissions)
    }
}

/// Outcome of the exhaustive cross-check for one report row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum OracleStatus {
    NotRun,
    Agrees { field: u64, sets: usize },
    Disagrees { field: u64, sets: Vec<Vec<String>> },
    OverBudget { states: String },
}

/// One verified scheme instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<SchemeSpec>,
    pub topology: Topology,
    pub adversary: AdversarySpec,
    pub message_dim: usize,
    pub rounds: u32,
    pub rate: Rate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_bound: Option<Rate>,
    pub outer_bound: Option<Rate>,
    pub decodable: bool,
    pub secure: bool,
    pub max_leakage: usize,
    pub receivers: Vec<ReceiverVerdict>,
    pub secrecy: Vec<SecrecyVerdict>,
    pub oracle: OracleStatus,
    pub notes: Vec<String>,
}

impl ReportRow {
    pub fn new(label: String, trace: &Trace, scheme: Option<SchemeSpec>, verdict: Verdict) -> Self {
        Self {
            scheme: label,
            parameters: scheme,
            topology: trace.network().topology(),
            adversary: verdict.adversary,
            message_dim: trace.message_dim(),
            rounds: trace.rounds(),
            rate: verdict.rate,
            inner_bound: None,
            outer_bound: verdict.bound,
            decodable: verdict.all_decodable(),
            secure: verdict.all_secure(),
            max_leakage: verdict.max_leakage(),
            receivers: verdict.receivers,
            secrecy: verdict.secrecy,
            oracle: OracleStatus::NotRun,
            notes: verdict.notes,
        }
    }

    pub fn passed(&self) -> bool {
        self.decodable && self.secure
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    pub field: u64,
    pub rows: Vec<ReportRow>,
}

impl ReportDocument {
    pub fn new(field: &PrimeField, rows: Vec<ReportRow>) -> Self {
        Self {
            version: FORMAT_VERSION.into(),
            field: field.modulus() as u64,
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(ReportRow::passed)
    }
}
