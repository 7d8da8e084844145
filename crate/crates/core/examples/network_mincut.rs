//! Combination networks in three orientations and their receiver mincuts.

use std::io::{self, Write};

use ccn_secrecy::network::{build_ccn, mincut};
use ccn_secrecy::Orientation;

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    for orientation in [Orientation::Directed, Orientation::Undirected, Orientation::Bidirected] {
        let net = build_ccn(4, 3, orientation)?;
        let cuts: Vec<usize> = net
            .receivers()
            .iter()
            .map(|&r| mincut(&net, net.source(), r))
            .collect::<Result<_, _>>()?;
        writeln!(
            out,
            "{orientation:?} (4,3): {} nodes, {} edges, receiver mincuts {cuts:?}",
            net.nodes().len(),
            net.edges().len()
        )?;
    }
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
