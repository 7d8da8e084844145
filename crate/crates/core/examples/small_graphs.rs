//! Secure codes on four small graphs: parallel edges, a relay layer, return
//! edges from the receiver, and a two-hop path.

use std::io::{self, Write};

use ccn_secrecy::network::Fig2Variant;
use ccn_secrecy::{verify_all, PrimeField, SchemeSpec};

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(13)?;
    let fig2 = |variant, h, q, k| SchemeSpec::Fig2 { variant, h, q, k };
    let specs = [
        fig2(Fig2Variant::A, 3, 0, 1),
        fig2(Fig2Variant::B, 3, 0, 1),
        fig2(Fig2Variant::C, 2, 2, 2),
        fig2(Fig2Variant::D, 3, 0, 1),
    ];
    for spec in specs {
        let built = spec.build(&f)?;
        let v = verify_all(&built.trace, &spec.adversary())?;
        writeln!(out, "{spec}: rate {}, secure {}", built.rate, v.passed())?;
    }
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
