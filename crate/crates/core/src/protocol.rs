//! Round-based execution of linear protocols. Every payload is a
//! homogeneous linear form over the message and randomness variables; a
//! session checks edge budgets and that each sender can actually compute
//! what it sends, and finalizes into an immutable [`Trace`].

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldMatrix, PrimeField, RowSpace};
use crate::network::{Direction, EdgeId, Network, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Message,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub label: String,
    pub kind: VarKind,
    pub owner: NodeId,
}

/// Message symbols `w1..wr` (owned by the source) followed by every
/// random symbol in creation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableSpace {
    vars: Vec<Variable>,
    by_label: HashMap<String, VarId>,
    message_dim: usize,
}

impl VariableSpace {
    fn push(&mut self, label: String, kind: VarKind, owner: NodeId) -> Result<VarId> {
        if self.by_label.contains_key(&label) {
            return Err(Error::DuplicateVariable(label));
        }
        if kind == VarKind::Message {
            debug_assert_eq!(self.message_dim, self.vars.len());
            self.message_dim += 1;
        }
        let id = VarId(self.vars.len());
        self.by_label.insert(label.clone(), id);
        self.vars.push(Variable { label, kind, owner });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn message_dim(&self) -> usize {
        self.message_dim
    }

    pub fn get(&self, v: VarId) -> &Variable {
        &self.vars[v.0]
    }

    pub fn lookup(&self, label: &str) -> Result<VarId> {
        self.by_label
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(label.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Variable)> {
        self.vars.iter().enumerate().map(|(i, v)| (VarId(i), v))
    }

    pub fn owned_by(&self, node: NodeId) -> Vec<VarId> {
        self.iter()
            .filter(|(_, v)| v.owner == node)
            .map(|(id, _)| id)
            .collect()
    }

    pub fn message_vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.message_dim).map(VarId)
    }
}

/// Homogeneous linear form over the variable space. Stored densely with
/// trailing zeros trimmed, so forms built before later variables existed
/// compare equal to their padded versions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<Elem>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(v: VarId) -> Self {
        Self::term(v, 1)
    }

    pub fn term(v: VarId, c: Elem) -> Self {
        let mut coeffs = vec![0; v.0 + 1];
        coeffs[v.0] = c;
        Self::from_dense(coeffs)
    }

    pub fn from_dense(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeff(&self, v: VarId) -> Elem {
        self.coeffs.get(v.0).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn dense(&self, len: usize) -> Vec<Elem> {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), 0);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero `(variable, coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (VarId, Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (VarId(i), c))
    }

    pub fn plus(&self, other: &Self, f: &PrimeField) -> Self {
        Self::combine(f, &[(1, self), (1, other)])
    }

    pub fn minus(&self, other: &Self, f: &PrimeField) -> Self {
        Self::combine(f, &[(1, self), (-1, other)])
    }

    pub fn scaled(&self, c: Elem, f: &PrimeField) -> Self {
        Self::from_dense(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// `sum c_i * form_i`, with signed integer coefficients.
    pub fn combine(f: &PrimeField, terms: &[(i64, &LinearForm)]) -> Self {
        let len = terms.iter().map(|(_, l)| l.coeffs.len()).max().unwrap_or(0);
        let mut out = vec![0; len];
        for &(c, form) in terms {
            let c = f.reduce(c);
            for (o, &x) in out.iter_mut().zip(&form.coeffs) {
                *o = f.mul_add(c, x, *o);
            }
        }
        Self::from_dense(out)
    }

    pub fn sum<'a>(f: &PrimeField, forms: impl IntoIterator<Item = &'a LinearForm>) -> Self {
        let forms: Vec<_> = forms.into_iter().map(|l| (1, l)).collect();
        Self::combine(f, &forms)
    }

    /// Value under a concrete assignment of all variables.
    pub fn evaluate(&self, values: &[Elem], f: &PrimeField) -> Elem {
        self.coeffs
            .iter()
            .zip(values)
            .fold(0, |acc, (&c, &v)| f.mul_add(c, v, acc))
    }
}

/// One edge use. The sequence index is the position in the trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transmission {
    pub round: u32,
    pub edge: EdgeId,
    pub direction: Direction,
    pub sender: NodeId,
    pub receiver: NodeId,
    pub payload: LinearForm,
}

/// A protocol under construction.
#[derive(Clone, Debug)]
pub struct Session {
    net: Network,
    field: PrimeField,
    vars: VariableSpace,
    transmissions: Vec<Transmission>,
    spans: Vec<RowSpace>,
    used: HashSet<(u32, EdgeId)>,
    next_auto: usize,
}

/// Starts a session whose message has `r` symbols.
pub fn new_session(net: Network, r: usize, field: PrimeField) -> Result<Session> {
    Session::new(net, r, field)
}

impl Session {
    pub fn new(net: Network, r: usize, field: PrimeField) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameters("message dimension must be >= 1".into()));
        }
        let spans = vec![RowSpace::new(field); net.nodes().len()];
        let mut s = Self {
            net,
            field,
            vars: VariableSpace::default(),
            transmissions: Vec::new(),
            spans,
            used: HashSet::new(),
            next_auto: 1,
        };
        let src = s.net.source();
        for i in 1..=r {
            s.register(format!("w{i}"), VarKind::Message, src)?;
        }
        Ok(s)
    }

    fn register(&mut self, label: String, kind: VarKind, owner: NodeId) -> Result<VarId> {
        if !self.net.contains_node(owner) {
            return Err(Error::UnknownNode(format!("#{}", owner.0)));
        }
        let id = self.vars.push(label, kind, owner)?;
        self.spans[owner.0].insert(LinearForm::var(id).coeffs());
        Ok(id)
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn variables(&self) -> &VariableSpace {
        &self.vars
    }

    /// Message symbol `w_{i+1}` as a form.
    pub fn message(&self, i: usize) -> LinearForm {
        LinearForm::var(VarId(i))
    }

    pub fn messages(&self) -> Vec<LinearForm> {
        self.vars.message_vars().map(LinearForm::var).collect()
    }

    /// `count` fresh uniform symbols private to `owner`, labelled `r1, r2, ...`.
    pub fn fresh_randomness(&mut self, owner: NodeId, count: usize) -> Result<Vec<VarId>> {
        (0..count)
            .map(|_| {
                let label = loop {
                    let l = format!("r{}", self.next_auto);
                    self.next_auto += 1;
                    if self.vars.lookup(&l).is_err() {
                        break l;
                    }
                };
                self.register(label, VarKind::Random, owner)
            })
            .collect()
    }

    /// Like [`Session::fresh_randomness`] with labels `{prefix}1..{prefix}count`.
    pub fn fresh_named(&mut self, owner: NodeId, prefix: &str, count: usize) -> Result<Vec<VarId>> {
        (1..=count)
            .map(|i| self.register(format!("{prefix}{i}"), VarKind::Random, owner))
            .collect()
    }

    /// Registers a single random symbol with an explicit label.
    pub fn fresh_labelled(&mut self, owner: NodeId, label: &str) -> Result<VarId> {
        self.register(label.to_string(), VarKind::Random, owner)
    }

    /// Whether `node` can currently compute `payload`.
    pub fn can_compute(&self, node: NodeId, payload: &LinearForm) -> bool {
        self.spans[node.0].contains(payload.coeffs())
    }

    /// Sends `payload` over `edge` in `direction` during `round`.
    pub fn transmit(
        &mut self,
        round: u32,
        edge: EdgeId,
        direction: Direction,
        payload: LinearForm,
    ) -> Result<()> {
        let seq = self.transmissions.len();
        let e = self.net.edge(edge)?.clone();
        if round == 0 {
            return Err(Error::InvalidParameters("rounds are numbered from 1".into()));
        }
        if let Some(prev) = self.transmissions.last() {
            if round < prev.round {
                return Err(Error::RoundOrder {
                    seq,
                    round,
                    previous: prev.round,
                });
            }
        }
        if direction == Direction::Backward && !e.undirected {
            return Err(Error::BadDirection { seq, edge: edge.0 });
        }
        if self.used.contains(&(round, edge)) {
            return Err(Error::EdgeReused {
                seq,
                round,
                edge: edge.0,
            });
        }
        if payload.coeffs().len() > self.vars.len() {
            return Err(Error::UnknownVariable(format!("#{}", payload.coeffs().len() - 1)));
        }
        let (sender, receiver) = e.endpoints(direction);
        if !self.can_compute(sender, &payload) {
            return Err(Error::NotComputable {
                seq,
                round,
                sender: self.net.name(sender).to_string(),
            });
        }
        self.used.insert((round, edge));
        self.spans[receiver.0].insert(payload.coeffs());
        self.transmissions.push(Transmission {
            round,
            edge,
            direction,
            sender,
            receiver,
            payload,
        });
        Ok(())
    }

    /// Sends along the unique arc between two named nodes.
    pub fn send(&mut self, round: u32, from: &str, to: &str, payload: LinearForm) -> Result<()> {
        let (edge, dir) = self.net.arc_by_name(from, to)?;
        self.transmit(round, edge, dir, payload)
    }

    /// Knowledge rows of `node` after the first `upto` transmissions.
    pub fn knowledge(&self, node: NodeId, upto: usize) -> FieldMatrix {
        knowledge_matrix(&self.vars, &self.transmissions, node, upto)
    }

    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    pub fn finalize(self) -> Result<Trace> {
        let Some(last) = self.transmissions.last() else {
            return Err(Error::EmptySession);
        };
        let rounds = last.round;
        Ok(Trace {
            message_dim: self.vars.message_dim(),
            network: self.net,
            field: self.field,
            variables: self.vars,
            transmissions: self.transmissions,
            rounds,
        })
    }
}

fn knowledge_matrix(
    vars: &VariableSpace,
    transmissions: &[Transmission],
    node: NodeId,
    upto: usize,
) -> FieldMatrix {
    let owned: Vec<_> = vars.owned_by(node).into_iter().map(LinearForm::var).collect();
    let received = transmissions
        .iter()
        .take(upto)
        .filter(|t| t.receiver == node)
        .map(|t| &t.payload);
    FieldMatrix::from_padded_rows(owned.iter().chain(received).map(|l| l.coeffs()), vars.len())
}

/// A finished protocol run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    network: Network,
    field: PrimeField,
    variables: VariableSpace,
    transmissions: Vec<Transmission>,
    message_dim: usize,
    rounds: u32,
}

impl Trace {
    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn variables(&self) -> &VariableSpace {
        &self.variables
    }

    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    pub fn message_dim(&self) -> usize {
        self.message_dim
    }

    /// Number of rounds `N`.
    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    /// Owned-variable unit rows plus payloads received among the first
    /// `upto` transmissions.
    pub fn knowledge(&self, node: NodeId, upto: usize) -> FieldMatrix {
        knowledge_matrix(&self.variables, &self.transmissions, node, upto)
    }

    pub fn final_knowledge(&self, node: NodeId) -> FieldMatrix {
        self.knowledge(node, self.transmissions.len())
    }

    /// Number of transmissions in rounds `1..=round`.
    pub fn end_of_round(&self, round: u32) -> usize {
        self.transmissions.iter().take_while(|t| t.round <= round).count()
    }

    pub fn received_by(&self, node: NodeId) -> impl Iterator<Item = &Transmission> {
        self.transmissions.iter().filter(move |t| t.receiver == node)
    }

    pub fn on_edge(&self, edge: EdgeId) -> impl Iterator<Item = &Transmission> {
        self.transmissions.iter().filter(move |t| t.edge == edge)
    }

    /// Re-executes every transmission through a fresh session.
    pub fn replay(&self) -> Result<Trace> {
        replay_parts(
            self.network.clone(),
            self.field,
            self.message_dim,
            self.variables
                .iter()
                .filter(|(_, v)| v.kind == VarKind::Random)
                .map(|(_, v)| (v.label.clone(), v.owner)),
            self.transmissions
                .iter()
                .map(|t| (t.round, t.edge, t.direction, t.payload.clone())),
        )
    }

    /// Copy keeping only rounds `1..=last`; used to build deliberately
    /// incomplete runs.
    pub fn truncated(&self, last: u32) -> Result<Trace> {
        let mut t = self.clone();
        t.transmissions.retain(|x| x.round <= last);
        t.rounds = t.transmissions.last().ok_or(Error::EmptySession)?.round;
        Ok(t)
    }
}

/// Rebuilds a trace from its parts, validating every transmission.
pub fn replay_parts(
    network: Network,
    field: PrimeField,
    message_dim: usize,
    randomness: impl IntoIterator<Item = (String, NodeId)>,
    transmissions: impl IntoIterator<Item = (u32, EdgeId, Direction, LinearForm)>,
) -> Result<Trace> {
    let mut s = Session::new(network, message_dim, field)?;
    for (label, owner) in randomness {
        s.register(label, VarKind::Random, owner)?;
    }
    for (round, edge, dir, payload) in transmissions {
        s.transmit(round, edge, dir, payload)?;
    }
    s.finalize()
}
