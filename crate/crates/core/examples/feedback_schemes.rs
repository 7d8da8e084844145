//! Feedback beats the directed optimum: receivers generate keys and send
//! them upstream before the message flows down.

use std::io::{self, Write};

use ccn_secrecy::verifier::outer_bound;
use ccn_secrecy::{verify_all, AdversaryKind, Orientation, PrimeField, SchemeSpec, Topology};

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(13)?;
    let directed = Topology::Ccn { m: 5, h: 3, orientation: Orientation::Directed };
    writeln!(out, "directed (5,3) capacity: {}", outer_bound(&directed, AdversaryKind::Node, 1)?)?;
    let specs = [
        SchemeSpec::Undirected { m: 5, h: 3 },
        SchemeSpec::BidirectedNode { m: 5, h: 3 },
        SchemeSpec::BidirectedEdge { m: 5, h: 3 },
    ];
    for spec in specs {
        let built = spec.build(&f)?;
        let adv = spec.adversary();
        let v = verify_all(&built.trace, &adv)?;
        writeln!(
            out,
            "{spec}: rate {}, {} rounds, secure against {} {:?}: {}",
            built.rate,
            built.rounds(),
            adv.k,
            adv.kind,
            v.passed()
        )?;
    }
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
