//! Topologies: the directed, undirected and bidirected `(m, h)` canonical
//! combination networks and the four small source/receiver graphs used to
//! illustrate feedback. Also adversary candidate enumeration and unit
//! capacity max-flow.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeRole {
    Source,
    /// `S_i`, fed directly by the source.
    FirstLayer(usize),
    /// `A_i`; trivial coding nodes have a single input.
    CodingNode { index: usize, trivial: bool },
    RelayB(usize),
    /// Attached to the listed `B` indices (empty for the single sink of the
    /// small graphs).
    Receiver(Vec<usize>),
    /// `C_i` on the two-hop paths.
    Intermediate(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Directed,
    Undirected,
    Bidirected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fig2Variant {
    /// `h` parallel directed edges.
    A,
    /// `h` parallel undirected edges.
    B,
    /// `h` forward and `q` backward directed edges.
    C,
    /// `h` two-hop paths through `C_i`, each hop bidirected.
    D,
}

impl std::str::FromStr for Fig2Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Self::A),
            "b" | "B" => Ok(Self::B),
            "c" | "C" => Ok(Self::C),
            "d" | "D" => Ok(Self::D),
            other => Err(Error::InvalidParameters(format!("unknown variant `{other}`"))),
        }
    }
}

impl fmt::Display for Fig2Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::D => "d",
        };
        f.write_str(s)
    }
}

/// Parameters sufficient to rebuild a network deterministically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Topology {
    Ccn {
        m: usize,
        h: usize,
        orientation: Orientation,
    },
    Fig2 {
        variant: Fig2Variant,
        h: usize,
        #[serde(default)]
        q: usize,
    },
}

impl Topology {
    pub fn build(&self) -> Result<Network> {
        match *self {
            Topology::Ccn { m, h, orientation } => build_ccn(m, h, orientation),
            Topology::Fig2 { variant, h, q } => build_fig2(variant, h, q),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
    /// Usable once per round in either direction.
    pub undirected: bool,
    /// For the added arcs of a bidirected graph: the forward arc they pair with.
    pub reverse_of: Option<EdgeId>,
}

impl Edge {
    /// `(sender, receiver)` when used in `dir`.
    pub fn endpoints(&self, dir: Direction) -> (NodeId, NodeId) {
        match dir {
            Direction::Forward => (self.tail, self.head),
            Direction::Backward => (self.head, self.tail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub role: NodeRole,
}

/// An immutable topology instance with unit-capacity edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    topology: Topology,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    source: NodeId,
    receivers: Vec<NodeId>,
    by_name: HashMap<String, NodeId>,
}

impl Network {
    fn empty(topology: Topology) -> Self {
        Self {
            topology,
            nodes: Vec::new(),
            edges: Vec::new(),
            source: NodeId(0),
            receivers: Vec::new(),
            by_name: HashMap::new(),
        }
    }

    fn add_node(&mut self, name: String, role: NodeRole) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.by_name.insert(name.clone(), id);
        if matches!(role, NodeRole::Receiver(_)) {
            self.receivers.push(id);
        }
        if role == NodeRole::Source {
            self.source = id;
        }
        self.nodes.push(Node { name, role });
        id
    }

    fn add_edge(&mut self, tail: NodeId, head: NodeId, undirected: bool) -> EdgeId {
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge {
            id,
            tail,
            head,
            undirected,
            reverse_of: None,
        });
        id
    }

    /// Appends a reversed copy of every current edge.
    fn add_backward_edges(&mut self) {
        let forward: Vec<_> = self.edges.clone();
        for e in forward {
            let id = self.add_edge(e.head, e.tail, false);
            self.edges[id.0].reverse_of = Some(e.id);
        }
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn orientation(&self) -> Orientation {
        match self.topology {
            Topology::Ccn { orientation, .. } => orientation,
            Topology::Fig2 { variant, .. } => match variant {
                Fig2Variant::A | Fig2Variant::C => Orientation::Directed,
                Fig2Variant::B => Orientation::Undirected,
                Fig2Variant::D => Orientation::Bidirected,
            },
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id.0).ok_or(Error::UnknownEdge(id.0))
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn receivers(&self) -> &[NodeId] {
        &self.receivers
    }

    pub fn is_receiver(&self, n: NodeId) -> bool {
        self.receivers.contains(&n)
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.nodes[n.0].name
    }

    pub fn role(&self, n: NodeId) -> &NodeRole {
        &self.nodes[n.0].role
    }

    pub fn node(&self, name: &str) -> Result<NodeId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn contains_node(&self, n: NodeId) -> bool {
        n.0 < self.nodes.len()
    }

    /// Every way to send from `from` to `to` over a single edge.
    pub fn arcs(&self, from: NodeId, to: NodeId) -> Vec<(EdgeId, Direction)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.tail == from && e.head == to {
                out.push((e.id, Direction::Forward));
            } else if e.undirected && e.head == from && e.tail == to {
                out.push((e.id, Direction::Backward));
            }
        }
        out
    }

    /// The single edge usable from `from` to `to`. Parallel edges resolve to
    /// the lowest id.
    pub fn arc(&self, from: NodeId, to: NodeId) -> Result<(EdgeId, Direction)> {
        self.arcs(from, to).into_iter().next().ok_or_else(|| Error::NoArc {
            from: self.name(from).to_string(),
            to: self.name(to).to_string(),
        })
    }

    /// Arc lookup by node names.
    pub fn arc_by_name(&self, from: &str, to: &str) -> Result<(EdgeId, Direction)> {
        self.arc(self.node(from)?, self.node(to)?)
    }

    /// Number of edges entering `n` in forward orientation.
    pub fn in_degree(&self, n: NodeId) -> usize {
        self.edges
            .iter()
            .filter(|e| e.head == n && e.reverse_of.is_none())
            .count()
    }

    /// The CCN receiver attached to exactly these B indices (1-based).
    pub fn receiver_for(&self, subset: &[usize]) -> Result<NodeId> {
        self.node(&receiver_name(subset))
    }
}

pub fn receiver_name(subset: &[usize]) -> String {
    format!("R{{{}}}", subset.iter().join(","))
}

/// Builds the `(m, h)` canonical combination network.
pub fn build_ccn(m: usize, h: usize, orientation: Orientation) -> Result<Network> {
    if h < 2 || m < h {
        return Err(Error::InvalidParameters(format!(
            "CCN needs m >= h >= 2, got m={m} h={h}"
        )));
    }
    let mut net = Network::empty(Topology::Ccn { m, h, orientation });
    let undirected = orientation == Orientation::Undirected;
    let s = net.add_node("S".into(), NodeRole::Source);
    let first: Vec<_> = (1..=h)
        .map(|i| net.add_node(format!("S{i}"), NodeRole::FirstLayer(i)))
        .collect();
    let coding: Vec<_> = (1..=m)
        .map(|i| {
            net.add_node(
                format!("A{i}"),
                NodeRole::CodingNode {
                    index: i,
                    trivial: i <= h,
                },
            )
        })
        .collect();
    let relays: Vec<_> = (1..=m)
        .map(|i| net.add_node(format!("B{i}"), NodeRole::RelayB(i)))
        .collect();
    let subsets: Vec<Vec<usize>> = (1..=m).combinations(h).collect();
    let receivers: Vec<_> = subsets
        .iter()
        .map(|t| net.add_node(receiver_name(t), NodeRole::Receiver(t.clone())))
        .collect();

    for &si in &first {
        net.add_edge(s, si, undirected);
    }
    for i in 0..h {
        net.add_edge(first[i], coding[i], undirected);
    }
    for &aj in &coding[h..] {
        for &si in &first {
            net.add_edge(si, aj, undirected);
        }
    }
    for i in 0..m {
        net.add_edge(coding[i], relays[i], undirected);
    }
    for (t, &r) in subsets.iter().zip(&receivers) {
        for &i in t {
            net.add_edge(relays[i - 1], r, undirected);
        }
    }
    if orientation == Orientation::Bidirected {
        net.add_backward_edges();
    }
    Ok(net)
}

/// Builds one of the small single-source, single-receiver graphs. `q` is
/// only meaningful for variant C.
pub fn build_fig2(variant: Fig2Variant, h: usize, q: usize) -> Result<Network> {
    if h < 1 {
        return Err(Error::InvalidParameters("needs h >= 1".into()));
    }
    let q = if variant == Fig2Variant::C { q } else { 0 };
    let mut net = Network::empty(Topology::Fig2 { variant, h, q });
    let s = net.add_node("S".into(), NodeRole::Source);
    let r = net.add_node("R".into(), NodeRole::Receiver(Vec::new()));
    match variant {
        Fig2Variant::A | Fig2Variant::B => {
            for _ in 0..h {
                net.add_edge(s, r, variant == Fig2Variant::B);
            }
        }
        Fig2Variant::C => {
            for _ in 0..h {
                net.add_edge(s, r, false);
            }
            for _ in 0..q {
                net.add_edge(r, s, false);
            }
        }
        Fig2Variant::D => {
            let mids: Vec<_> = (1..=h)
                .map(|i| net.add_node(format!("C{i}"), NodeRole::Intermediate(i)))
                .collect();
            for &c in &mids {
                net.add_edge(s, c, false);
            }
            for &c in &mids {
                net.add_edge(c, r, false);
            }
            net.add_backward_edges();
        }
    }
    Ok(net)
}

/// Max-flow value from `from` to `to` with unit capacities. An undirected
/// edge carries one unit in either direction.
pub fn mincut(net: &Network, from: NodeId, to: NodeId) -> Result<usize> {
    for n in [from, to] {
        if !net.contains_node(n) {
            return Err(Error::UnknownNode(format!("#{}", n.0)));
        }
    }
    if from == to {
        return Err(Error::InvalidParameters("mincut needs distinct endpoints".into()));
    }
    let mut flow = UnitFlow::new(net.nodes.len());
    for e in &net.edges {
        flow.link(e.tail.0, e.head.0, if e.undirected { 1 } else { 0 });
    }
    Ok(flow.max_flow(from.0, to.0))
}

// Residual graph stored as paired arcs: arc 2i and its partner 2i+1.
struct UnitFlow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<i32>,
}

impl UnitFlow {
    fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            residual: Vec::new(),
        }
    }

    fn link(&mut self, u: usize, v: usize, back_capacity: i32) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.residual.push(1);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.residual.push(back_capacity);
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut total = 0;
        loop {
            let mut via = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let v = self.to[a];
                    if !seen[v] && self.residual[a] > 0 {
                        seen[v] = true;
                        via[v] = a;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.residual[a] -= 1;
                self.residual[a ^ 1] += 1;
                v = self.to[a ^ 1];
            }
            total += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryKind {
    Node,
    Edge,
}

impl std::str::FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node" => Ok(Self::Node),
            "edge" => Ok(Self::Edge),
            other => Err(Error::InvalidParameters(format!("unknown adversary kind `{other}`"))),
        }
    }
}

/// Which nodes a node adversary may tap. The default excludes the source
/// and every receiver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePolicy {
    pub include_source: bool,
    pub include_receivers: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub kind: AdversaryKind,
    pub k: usize,
    #[serde(default)]
    pub policy: CandidatePolicy,
}

impl AdversarySpec {
    pub fn nodes(k: usize) -> Self {
        Self {
            kind: AdversaryKind::Node,
            k,
            policy: CandidatePolicy::default(),
        }
    }

    pub fn edges(k: usize) -> Self {
        Self {
            kind: AdversaryKind::Edge,
            k,
            policy: CandidatePolicy::default(),
        }
    }
}

/// What one adversary taps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AdversarySet {
    Nodes(Vec<NodeId>),
    Edges(Vec<EdgeId>),
}

impl AdversarySet {
    pub fn len(&self) -> usize {
        match self {
            Self::Nodes(v) => v.len(),
            Self::Edges(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Human-readable labels: node names, or `tail->head#id` for edges.
    pub fn labels(&self, net: &Network) -> Vec<String> {
        match self {
            Self::Nodes(v) => v.iter().map(|&n| net.name(n).to_string()).collect(),
            Self::Edges(v) => v
                .iter()
                .map(|&e| {
                    let edge = &net.edges[e.0];
                    let sep = if edge.undirected { "--" } else { "->" };
                    format!("{}{sep}{}#{}", net.name(edge.tail), net.name(edge.head), e.0)
                })
                .collect(),
        }
    }
}

/// The candidate pool a spec draws from, before taking subsets.
pub fn candidate_pool(net: &Network, spec: &AdversarySpec) -> AdversarySet {
    match spec.kind {
        AdversaryKind::Node => AdversarySet::Nodes(
            net.node_ids()
                .filter(|&n| spec.policy.include_source || n != net.source())
                .filter(|&n| spec.policy.include_receivers || !net.is_receiver(n))
                .collect(),
        ),
        AdversaryKind::Edge => AdversarySet::Edges(net.edges.iter().map(|e| e.id).collect()),
    }
}

/// All `k`-subsets of the candidate pool, in lexicographic order.
pub fn adversary_sets(net: &Network, spec: &AdversarySpec) -> Result<Vec<AdversarySet>> {
    if spec.k == 0 {
        return Err(Error::InvalidParameters("adversary strength must be >= 1".into()));
    }
    let pool = candidate_pool(net, spec);
    if spec.k > pool.len() {
        return Err(Error::AdversaryPool {
            k: spec.k,
            pool: pool.len(),
        });
    }
    Ok(match pool {
        AdversarySet::Nodes(v) => v
            .into_iter()
            .combinations(spec.k)
            .map(AdversarySet::Nodes)
            .collect(),
        AdversarySet::Edges(v) => v
            .into_iter()
            .combinations(spec.k)
            .map(AdversarySet::Edges)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ccn_3_2_shape() {
        let net = build_ccn(3, 2, Orientation::Directed).unwrap();
        assert_eq!(net.receivers().len(), 3);
        assert_eq!(net.in_degree(net.node("A3").unwrap()), 2);
        assert_eq!(net.in_degree(net.node("A1").unwrap()), 1);
        assert!(net.node("R{1,3}").is_ok());
    }

    #[test]
    fn ccn_4_3_has_four_receivers() {
        let net = build_ccn(4, 3, Orientation::Directed).unwrap();
        assert_eq!(net.receivers().len(), 4);
        let mut subsets: Vec<_> = net
            .receivers()
            .iter()
            .map(|&r| match net.role(r) {
                NodeRole::Receiver(t) => t.clone(),
                _ => unreachable!(),
            })
            .collect();
        subsets.dedup();
        assert_eq!(subsets.len(), 4);
        for &r in net.receivers() {
            assert_eq!(net.in_degree(r), 3);
        }
    }

    #[test]
    fn degenerate_m_equals_h() {
        let net = build_ccn(3, 3, Orientation::Directed).unwrap();
        assert_eq!(net.receivers().len(), 1);
        for i in 1..=3 {
            let a = net.node(&format!("A{i}")).unwrap();
            assert_eq!(net.role(a), &NodeRole::CodingNode { index: i, trivial: true });
        }
        assert!(build_ccn(2, 3, Orientation::Directed).is_err());
        assert!(build_ccn(3, 1, Orientation::Directed).is_err());
    }

    #[test]
    fn orientation_variants() {
        let d = build_ccn(4, 3, Orientation::Directed).unwrap();
        let u = build_ccn(4, 3, Orientation::Undirected).unwrap();
        let b = build_ccn(4, 3, Orientation::Bidirected).unwrap();
        assert_eq!(d.edges().len(), u.edges().len());
        assert!(u.edges().iter().all(|e| e.undirected));
        assert_eq!(b.edges().len(), 2 * d.edges().len());
        for e in &b.edges()[d.edges().len()..] {
            let fwd = &b.edges()[e.reverse_of.unwrap().0];
            assert_eq!((e.tail, e.head), (fwd.head, fwd.tail));
        }
        // Undirected edges can be traversed backwards, directed ones cannot.
        let (_, dir) = u.arc_by_name("S1", "S").unwrap();
        assert_eq!(dir, Direction::Backward);
        assert!(d.arc_by_name("S1", "S").is_err());
        assert_eq!(b.arc_by_name("S1", "S").unwrap().1, Direction::Forward);
    }

    #[test]
    fn fig2_shapes() {
        let c = build_fig2(Fig2Variant::C, 2, 1).unwrap();
        assert_eq!(c.edges().len(), 3);
        assert_eq!(mincut(&c, c.source(), c.receivers()[0]).unwrap(), 2);
        let d = build_fig2(Fig2Variant::D, 2, 0).unwrap();
        assert!(d.node("C1").is_ok() && d.node("C2").is_ok());
        assert!(d.node("C3").is_err());
        let a = build_fig2(Fig2Variant::A, 3, 0).unwrap();
        assert_eq!(mincut(&a, a.source(), a.receivers()[0]).unwrap(), 3);
        assert_eq!(a.arcs(a.source(), a.receivers()[0]).len(), 3);
        assert!("x".parse::<Fig2Variant>().is_err());
    }

    #[test]
    fn mincut_of_ccns_is_h() {
        for (m, h) in [(3, 2), (4, 3), (6, 3)] {
            for o in [Orientation::Directed, Orientation::Undirected, Orientation::Bidirected] {
                let net = build_ccn(m, h, o).unwrap();
                for &r in net.receivers() {
                    assert_eq!(mincut(&net, net.source(), r).unwrap(), h, "({m},{h}) {o:?}");
                }
            }
        }
    }

    #[test]
    fn mincut_cyclic_graph_counts_forward_edges_only() {
        let c = build_fig2(Fig2Variant::C, 2, 3).unwrap();
        assert_eq!(mincut(&c, c.source(), c.receivers()[0]).unwrap(), 2);
        // Unreachable target.
        let d = build_ccn(3, 2, Orientation::Directed).unwrap();
        let r = d.receivers()[0];
        assert_eq!(mincut(&d, r, d.source()).unwrap(), 0);
        assert!(mincut(&d, r, r).is_err());
    }

    #[test]
    fn adversary_pool_excludes_source_and_receivers() {
        let net = build_ccn(3, 2, Orientation::Directed).unwrap();
        let sets = adversary_sets(&net, &AdversarySpec::nodes(1)).unwrap();
        let names: Vec<_> = sets.iter().flat_map(|s| s.labels(&net)).collect();
        assert_eq!(names, ["S1", "S2", "A1", "A2", "A3", "B1", "B2", "B3"]);

        let mut spec = AdversarySpec::nodes(1);
        spec.policy.include_source = true;
        spec.policy.include_receivers = true;
        assert_eq!(adversary_sets(&net, &spec).unwrap().len(), net.nodes().len());

        let a = build_fig2(Fig2Variant::A, 3, 0).unwrap();
        assert_eq!(adversary_sets(&a, &AdversarySpec::edges(1)).unwrap().len(), 3);
        assert_eq!(adversary_sets(&a, &AdversarySpec::edges(2)).unwrap().len(), 3);
        assert!(adversary_sets(&a, &AdversarySpec::edges(0)).is_err());
        assert!(matches!(
            adversary_sets(&a, &AdversarySpec::edges(4)),
            Err(Error::AdversaryPool { k: 4, pool: 3 })
        ));
    }

    #[test]
    fn build_is_deterministic() {
        let a = build_ccn(5, 3, Orientation::Bidirected).unwrap();
        let b = build_ccn(5, 3, Orientation::Bidirected).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.topology().build().unwrap(), a);
    }
}
