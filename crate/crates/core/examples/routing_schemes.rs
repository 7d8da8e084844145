//! Routing-matrix schemes on directed networks: h = 3 with three rounds,
//! Hadamard routing for h = 2, and the m = h + 1 construction.

use std::io::{self, Write};

use ccn_secrecy::schemes::{PadProfile, RoutingMatrix};
use ccn_secrecy::{PrimeField, SchemeSpec};

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(13)?;
    let r = RoutingMatrix::h3(4)?;
    writeln!(out, "h=3 routing matrix for m=4, {} rounds:", r.rounds())?;
    for t in 0..r.rounds() {
        let row: Vec<_> = (0..r.cols()).map(|j| r.get(t, j)).collect();
        writeln!(out, "  {row:?}")?;
    }
    writeln!(out, "literal pads valid: {}", PadProfile::h3_rank_deficient(&f).is_valid(&f))?;
    writeln!(out, "corrected pads valid: {}", PadProfile::h3(&f).is_valid(&f))?;

    for spec in [SchemeSpec::RoutingH3 { m: 5 }, SchemeSpec::Hadamard { m: 5 }, SchemeSpec::PlusOne { h: 4 }] {
        let built = spec.build(&f)?;
        writeln!(out, "{spec}: rate {} in {} rounds", built.rate, built.rounds())?;
        for note in &built.notes {
            writeln!(out, "  note: {note}")?;
        }
    }
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
