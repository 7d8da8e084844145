use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::network::{
    adversary_sets, mincut, AdversaryKind, AdversarySet, AdversarySpec, CandidatePolicy, EdgeId,
    Fig2Variant, Network, Orientation, Topology,
};
use crate::protocol::Trace;
use crate::schemes::SchemeSpec;
use crate::verifier::oracle::state_count;
use crate::verifier::{
    adversary_view, brute_force_oracle, inner_bound, secrecy_check, verify_all, verify_sets,
};

use super::{ReportDocument, ReportRow, TraceDocument};

/// Process exit status of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Budget = 3,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }

    fn from_pass(ok: bool) -> Self {
        if ok {
            Exit::Pass
        } else {
            Exit::Fail
        }
    }
}

/// Exit status for a command that failed with `e`.
pub fn exit_for(e: &Error) -> Exit {
    match e {
        Error::BudgetExceeded { .. } => Exit::Budget,
        Error::NotComputable { .. }
        | Error::EdgeReused { .. }
        | Error::BadDirection { .. }
        | Error::RoundOrder { .. }
        | Error::EmptySession => Exit::Fail,
        _ => Exit::Usage,
    }
}

/// Optional scheme parameters as given on the command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct SchemeArgs {
    pub m: Option<usize>,
    pub h: Option<usize>,
    pub q: Option<usize>,
    pub k: Option<usize>,
    pub variant: Option<Fig2Variant>,
}

/// Resolves a scheme name (`ksc`, `fig2c`, `fig2` with a variant, ...) and
/// its parameters.
pub fn scheme_from_args(name: &str, a: &SchemeArgs) -> Result<SchemeSpec> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Error::InvalidParameters(format!("`{name}` needs --{flag}")))
    };
    let (base, variant) = match name.strip_prefix("fig2") {
        Some("") => ("fig2", a.variant),
        Some(v) => ("fig2", Some(v.parse()?)),
        None => (name, None),
    };
    Ok(match base {
        "cai_yeung" => SchemeSpec::CaiYeung {
            m: need(a.m, "m")?,
            h: need(a.h, "h")?,
            k: need(a.k, "k")?,
        },
        "ksc" => SchemeSpec::Ksc { m: need(a.m, "m")?, h: need(a.h, "h")? },
        "routing_h3" => SchemeSpec::RoutingH3 { m: need(a.m, "m")? },
        "hadamard" => SchemeSpec::Hadamard { m: need(a.m, "m")? },
        "plus_one" => SchemeSpec::PlusOne { h: need(a.h, "h")? },
        "undirected" => SchemeSpec::Undirected { m: need(a.m, "m")?, h: need(a.h, "h")? },
        "bidirected_node" => SchemeSpec::BidirectedNode { m: need(a.m, "m")?, h: need(a.h, "h")? },
        "bidirected_edge" => SchemeSpec::BidirectedEdge { m: need(a.m, "m")?, h: need(a.h, "h")? },
        "fig2" => SchemeSpec::Fig2 {
            variant: variant.ok_or_else(|| Error::InvalidParameters("fig2 needs --variant".into()))?,
            h: need(a.h, "h")?,
            q: a.q.unwrap_or(0),
            k: a.k.unwrap_or(1),
        },
        other => return Err(Error::InvalidParameters(format!("unknown scheme `{other}`"))),
    })
}

/// Who the adversary is: a strength `k` (every candidate set of that size)
/// or one explicit set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Strength(AdversarySpec),
    Nodes(Vec<String>),
    Edges(Vec<usize>),
}

impl Target {
    /// `K` or a comma-separated list of node names.
    pub fn node(arg: &str) -> Result<Self> {
        match arg.parse::<usize>() {
            Ok(k) => Ok(Self::Strength(AdversarySpec::nodes(k))),
            Err(_) => Ok(Self::Nodes(arg.split(',').map(|s| s.trim().to_string()).collect())),
        }
    }

    /// `K` or a comma-separated list of edge ids each prefixed with `#`.
    pub fn edge(arg: &str) -> Result<Self> {
        if let Ok(k) = arg.parse::<usize>() {
            return Ok(Self::Strength(AdversarySpec::edges(k)));
        }
        arg.split(',')
            .map(|s| {
                s.trim()
                    .strip_prefix('#')
                    .and_then(|id| id.parse().ok())
                    .ok_or_else(|| Error::InvalidParameters(format!("`{s}` is not an edge id like #3")))
            })
            .collect::<Result<_>>()
            .map(Self::Edges)
    }

    fn resolve(&self, net: &Network) -> Result<(AdversarySpec, Vec<AdversarySet>)> {
        let all = CandidatePolicy {
            include_source: true,
            include_receivers: true,
        };
        match self {
            Self::Strength(spec) => Ok((*spec, adversary_sets(net, spec)?)),
            Self::Nodes(names) => {
                let ids = names.iter().map(|n| net.node(n)).collect::<Result<Vec<_>>>()?;
                let spec = AdversarySpec {
                    kind: AdversaryKind::Node,
                    k: ids.len(),
                    policy: all,
                };
                Ok((spec, vec![AdversarySet::Nodes(ids)]))
            }
            Self::Edges(ids) => {
                let ids = ids
                    .iter()
                    .map(|&e| net.edge(EdgeId(e)).map(|e| e.id))
                    .collect::<Result<Vec<_>>>()?;
                let spec = AdversarySpec {
                    kind: AdversaryKind::Edge,
                    k: ids.len(),
                    policy: all,
                };
                Ok((spec, vec![AdversarySet::Edges(ids)]))
            }
        }
    }
}

fn load(path: &Path) -> Result<TraceDocument> {
    let text = fs::read_to_string(path)?;
    TraceDocument::parse(&text).map_err(|e| match e {
        Error::Document(msg) => Error::Document(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn default_target(doc: &TraceDocument) -> Target {
    Target::Strength(doc.scheme.map_or(AdversarySpec::nodes(1), |s| s.adversary()))
}

fn summary(out: &mut dyn Write, row: &ReportRow, field: &PrimeField) -> Result<()> {
    writeln!(out, "scheme     {} over {field}", row.scheme)?;
    writeln!(
        out,
        "rate       {} ({} symbols in {} rounds)",
        row.rate, row.message_dim, row.rounds
    )?;
    match row.outer_bound {
        Some(b) => writeln!(out, "bound      {b}")?,
        None => writeln!(out, "bound      none stated")?,
    }
    let decoded = row.receivers.iter().filter(|r| r.decodable).count();
    writeln!(out, "receivers  {decoded}/{} decode", row.receivers.len())?;
    for r in row.receivers.iter().filter(|r| !r.decodable) {
        writeln!(out, "  cannot decode: {}", r.receiver)?;
    }
    let secure = row.secrecy.iter().filter(|s| s.secure).count();
    writeln!(
        out,
        "secrecy    {secure}/{} {}-{} sets secure",
        row.secrecy.len(),
        row.adversary.k,
        format!("{:?}", row.adversary.kind).to_lowercase()
    )?;
    for s in row.secrecy.iter().filter(|s| !s.secure) {
        writeln!(out, "  leaks {}: {{{}}}", s.leakage, s.set.join(", "))?;
    }
    for n in &row.notes {
        writeln!(out, "note       {n}")?;
    }
    writeln!(out, "{}", if row.passed() { "PASS" } else { "FAIL" })?;
    Ok(())
}

/// Builds a scheme, writes its trace to `out_path` if given, and prints a
/// verdict summary.
pub fn cmd_run(
    spec: &SchemeSpec,
    field: &PrimeField,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Exit> {
    let built = spec.build(field)?;
    let verdict = verify_all(&built.trace, &spec.adversary())?;
    let mut row = ReportRow::new(spec.to_string(), &built.trace, Some(*spec), verdict);
    row.notes.extend(built.notes);
    if let Some(path) = out_path {
        fs::write(path, TraceDocument::from_trace(&built.trace, Some(*spec)).to_json())?;
    }
    summary(out, &row, field)?;
    Ok(Exit::from_pass(row.passed()))
}

/// Verifies a stored trace and prints a report document.
pub fn cmd_verify(path: &Path, target: Option<&Target>, out: &mut dyn Write) -> Result<Exit> {
    let doc = load(path)?;
    let trace = doc.to_trace()?;
    let target = target.cloned().unwrap_or_else(|| default_target(&doc));
    let (spec, sets) = target.resolve(trace.network())?;
    let verdict = verify_sets(&trace, &spec, &sets)?;
    let label = doc
        .scheme
        .map_or_else(|| path.display().to_string(), |s| s.to_string());
    let row = ReportRow::new(label, &trace, doc.scheme, verdict);
    let report = ReportDocument::new(trace.field(), vec![row]);
    writeln!(out, "{}", report.to_json())?;
    Ok(Exit::from_pass(report.passed()))
}

/// Cross-checks the rank verdict against exhaustive enumeration.
pub fn cmd_oracle(
    path: &Path,
    target: Option<&Target>,
    field: Option<&PrimeField>,
    budget: u128,
    out: &mut dyn Write,
) -> Result<Exit> {
    let doc = load(path)?;
    let trace = match (field, doc.scheme) {
        (Some(f), _) if f.modulus() as u64 == doc.field => doc.to_trace()?,
        (Some(f), Some(scheme)) => scheme.build(f)?.trace,
        (Some(f), None) => {
            return Err(Error::Document(format!(
                "{}: no scheme descriptor, cannot rebuild over {f}",
                path.display()
            )))
        }
        (None, _) => doc.to_trace()?,
    };
    let target = target.cloned().unwrap_or_else(|| default_target(&doc));
    let (_, sets) = target.resolve(trace.network())?;
    let states = state_count(&trace).unwrap_or(u128::MAX);
    if states > budget {
        return Err(Error::BudgetExceeded { states, budget });
    }
    writeln!(
        out,
        "{} over {}: {states} joint states per set, {} sets",
        doc.scheme.map_or_else(|| path.display().to_string(), |s| s.to_string()),
        trace.field(),
        sets.len()
    )?;
    let mut all_agree = true;
    for set in &sets {
        let check = oracle_check(&trace, set, budget)?;
        all_agree &= check.agree;
        let cond = check
            .conditional
            .map_or_else(|| "non-uniform".to_string(), |c| c.to_string());
        writeln!(
            out,
            "{{{}}}: H(W) = {} log p, H(W|V) = {cond} log p, rank leakage {}, {}",
            set.labels(trace.network()).join(", "),
            check.message,
            check.rank_leakage,
            if check.agree { "agree" } else { "DISAGREE" }
        )?;
    }
    Ok(Exit::from_pass(all_agree))
}

/// Oracle and rank verdict for one adversary set.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleCheck {
    pub message: crate::rate::Rate,
    pub conditional: Option<crate::rate::Rate>,
    pub rank_leakage: usize,
    pub agree: bool,
}

/// Runs both checks for `set`; they agree when `H(W) - H(W|V)` equals the
/// rank leakage exactly.
pub fn oracle_check(trace: &Trace, set: &AdversarySet, budget: u128) -> Result<OracleCheck> {
    let oracle = brute_force_oracle(trace, set, budget)?;
    let rank = secrecy_check(&adversary_view(trace, set)?, trace.field());
    let to_rate = |r: num_rational::Ratio<u64>| crate::rate::Rate::new(*r.numer(), *r.denom());
    let agree = oracle.leakage().map(to_rate) == Some(crate::rate::Rate::integer(rank.leakage as u64))
        && oracle.secure() == rank.secure;
    Ok(OracleCheck {
        message: to_rate(oracle.message_entropy),
        conditional: oracle.conditional_entropy.map(to_rate),
        rank_leakage: rank.leakage,
        agree,
    })
}

/// The scheme each rate-table row runs.
pub fn table1_scheme(orientation: Orientation, m: usize, h: usize) -> SchemeSpec {
    match orientation {
        Orientation::Directed if h == 2 => SchemeSpec::Hadamard { m },
        Orientation::Directed => SchemeSpec::RoutingH3 { m },
        Orientation::Undirected => SchemeSpec::Undirected { m, h },
        Orientation::Bidirected => SchemeSpec::BidirectedNode { m, h },
    }
}

/// Achieved rates against one node for `h` in `{2, 3}`, `h < m <= 6`, on
/// each orientation, with inner and outer bounds.
pub fn table1(field: &PrimeField) -> Result<ReportDocument> {
    let mut rows = Vec::new();
    for orientation in [Orientation::Directed, Orientation::Undirected, Orientation::Bidirected] {
        for h in 2..=3 {
            for m in h + 1..=6 {
                let spec = table1_scheme(orientation, m, h);
                let built = spec.build(field)?;
                let verdict = verify_all(&built.trace, &spec.adversary())?;
                let mut row = ReportRow::new(spec.to_string(), &built.trace, Some(spec), verdict);
                let inner = inner_bound(m, h, orientation)?;
                if row.rate != inner {
                    row.notes.push(format!("achieved {} differs from inner bound {inner}", row.rate));
                }
                row.inner_bound = Some(inner);
                row.notes.extend(built.notes);
                rows.push(row);
            }
        }
    }
    Ok(ReportDocument::new(field, rows))
}

/// Prints the rate table and optionally writes the full report.
pub fn cmd_table1(field: &PrimeField, out_path: Option<&Path>, out: &mut dyn Write) -> Result<Exit> {
    let report = table1(field)?;
    writeln!(
        out,
        "{:<11} {:<6} {:<28} {:>8} {:>6} {:>6}  status",
        "graph", "(m,h)", "scheme", "achieved", "inner", "outer"
    )?;
    let mut ok = true;
    for row in &report.rows {
        let Topology::Ccn { m, h, orientation } = row.topology else {
            unreachable!("table rows are CCNs")
        };
        let matches = row.inner_bound == Some(row.rate);
        ok &= matches && row.passed();
        let status = match (row.passed(), matches) {
            (true, true) => "ok",
            (false, _) => "VERIFICATION FAILED",
            (true, false) => "RATE MISMATCH",
        };
        let fmt = |r: Option<crate::rate::Rate>| r.map_or("-".to_string(), |r| r.to_string());
        writeln!(
            out,
            "{:<11} {:<6} {:<28} {:>8} {:>6} {:>6}  {status}",
            format!("{orientation:?}").to_lowercase(),
            format!("({m},{h})"),
            row.scheme,
            row.rate.to_string(),
            fmt(row.inner_bound),
            fmt(row.outer_bound),
        )?;
    }
    if let Some(path) = out_path {
        fs::write(path, report.to_json())?;
    }
    Ok(Exit::from_pass(ok))
}

/// Prints the source-to-receiver mincut of every receiver.
pub fn cmd_mincut(topology: &Topology, out: &mut dyn Write) -> Result<Exit> {
    let net = topology.build()?;
    let mut cuts = Vec::new();
    for &r in net.receivers() {
        let c = mincut(&net, net.source(), r)?;
        writeln!(out, "{} -> {}: {c}", net.name(net.source()), net.name(r))?;
        cuts.push(c);
    }
    writeln!(out, "min {}", cuts.iter().min().copied().unwrap_or(0))?;
    Ok(Exit::Pass)
}
