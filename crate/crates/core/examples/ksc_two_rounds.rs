//! Two-round key sharing on a directed network, and what happens when one
//! share is withheld.

use std::io::{self, Write};

use ccn_secrecy::schemes::{ksc, ksc_without_share};
use ccn_secrecy::{verify_all, AdversarySpec, PrimeField};

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(13)?;
    let t = ksc(3, 2, &f)?;
    let v = verify_all(&t, &AdversarySpec::nodes(1))?;
    writeln!(out, "ksc(3,2): {} transmissions over {} rounds", t.transmissions().len(), t.rounds())?;
    writeln!(out, "rate {}, decodable {}, secure {}", v.rate, v.all_decodable(), v.all_secure())?;

    let leaky = ksc_without_share(3, 2, 1, &f)?;
    let v = verify_all(&leaky, &AdversarySpec::nodes(1))?;
    let exposed: Vec<String> = v.insecure_sets().map(|s| s.set.join(",")).collect();
    writeln!(out, "without share 1: max leakage {}, exposed to {exposed:?}", v.max_leakage())?;
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
