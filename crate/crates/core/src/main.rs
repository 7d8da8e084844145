use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ccn_secrecy::field::DEFAULT_MODULUS;
use ccn_secrecy::network::{AdversaryKind, AdversarySpec, Fig2Variant, Orientation, Topology};
use ccn_secrecy::report::{self, Exit, SchemeArgs, Target};
use ccn_secrecy::verifier::DEFAULT_BUDGET;
use ccn_secrecy::{PrimeField, Result};

#[derive(Parser)]
#[command(version, about = "Secret multicast on combination networks with feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Small-graph variant: a, b, c or d.
    #[arg(long)]
    variant: Option<Fig2Variant>,
}

#[derive(Args)]
struct AdversaryArgs {
    /// Node adversary: a strength K or node names like A3,B1.
    #[arg(long, conflicts_with_all = ["edge", "adversary"])]
    node: Option<String>,
    /// Edge adversary: a strength K or edge ids like #0,#4.
    #[arg(long, conflicts_with = "adversary")]
    edge: Option<String>,
    #[arg(long, value_parser = ["node", "edge"], requires = "k")]
    adversary: Option<String>,
    #[arg(long)]
    k: Option<usize>,
}

impl AdversaryArgs {
    fn target(&self) -> Result<Option<Target>> {
        Ok(match (&self.node, &self.edge, &self.adversary) {
            (Some(n), _, _) => Some(Target::node(n)?),
            (_, Some(e), _) => Some(Target::edge(e)?),
            (_, _, Some(kind)) => {
                let k = self.k.expect("clap requires --k");
                Some(Target::Strength(match kind.parse()? {
                    AdversaryKind::Node => AdversarySpec::nodes(k),
                    AdversaryKind::Edge => AdversarySpec::edges(k),
                }))
            }
            _ => None,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a scheme, verify it and optionally save its trace.
    Run {
        /// ksc, cai_yeung, routing_h3, hadamard, plus_one, undirected,
        /// bidirected_node, bidirected_edge, fig2 or fig2a..fig2d.
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        scheme: Option<String>,
        #[command(flatten)]
        params: Params,
        #[arg(short = 'p', long = "field", visible_alias = "p", default_value_t = DEFAULT_MODULUS as u64)]
        field: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a saved trace; prints a JSON report.
    Verify {
        trace: PathBuf,
        #[command(flatten)]
        adversary: AdversaryArgs,
    },
    /// Exhaustive entropy cross-check of a saved trace.
    Oracle {
        trace: PathBuf,
        #[command(flatten)]
        adversary: AdversaryArgs,
        /// Rebuild the scheme over GF(P) first.
        #[arg(short = 'p', long = "field", visible_alias = "p")]
        field: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Achieved rates against one node next to the inner and outer bounds.
    Table1 {
        #[arg(short = 'p', long = "field", visible_alias = "p", default_value_t = DEFAULT_MODULUS as u64)]
        field: u64,
        /// Also write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Source-to-receiver mincuts.
    Mincut {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "directed")]
        orientation: String,
    },
}

fn orientation(s: &str) -> Result<Orientation> {
    serde_json::from_value(serde_json::Value::String(s.to_lowercase())).map_err(|_| {
        ccn_secrecy::Error::InvalidParameters(format!("unknown orientation `{s}`"))
    })
}

fn execute(cmd: Command) -> Result<Exit> {
    let mut out = io::stdout().lock();
    match cmd {
        Command::Run {
            name,
            scheme,
            params,
            field,
            out: path,
        } => {
            let name = name.or(scheme).ok_or_else(|| {
                ccn_secrecy::Error::InvalidParameters("missing scheme name".into())
            })?;
            let args = SchemeArgs {
                m: params.m,
                h: params.h,
                q: params.q,
                k: params.k,
                variant: params.variant,
            };
            let spec = report::scheme_from_args(&name, &args)?;
            report::cmd_run(&spec, &PrimeField::new(field)?, path.as_deref(), &mut out)
        }
        Command::Verify { trace, adversary } => {
            report::cmd_verify(&trace, adversary.target()?.as_ref(), &mut out)
        }
        Command::Oracle {
            trace,
            adversary,
            field,
            budget,
        } => {
            let field = field.map(PrimeField::new).transpose()?;
            report::cmd_oracle(&trace, adversary.target()?.as_ref(), field.as_ref(), budget, &mut out)
        }
        Command::Table1 { field, out: path } => {
            report::cmd_table1(&PrimeField::new(field)?, path.as_deref(), &mut out)
        }
        Command::Mincut {
            params,
            orientation: o,
        } => {
            let missing = |flag: &str| {
                ccn_secrecy::Error::InvalidParameters(format!("mincut needs --{flag}"))
            };
            let h = params.h.ok_or_else(|| missing("h"))?;
            let topology = match params.variant {
                Some(variant) => Topology::Fig2 {
                    variant,
                    h,
                    q: params.q.unwrap_or(0),
                },
                None => Topology::Ccn {
                    m: params.m.ok_or_else(|| missing("m"))?,
                    h,
                    orientation: orientation(&o)?,
                },
            };
            report::cmd_mincut(&topology, &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = execute(cli.command).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        report::exit_for(&e)
    });
    ExitCode::from(exit.code())
}
