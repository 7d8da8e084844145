//! Checks rank-based leakage against exhaustive entropy counting over GF(3).

use std::io::{self, Write};

use ccn_secrecy::network::adversary_sets;
use ccn_secrecy::report::oracle_check;
use ccn_secrecy::schemes::ksc_without_share;
use ccn_secrecy::verifier::DEFAULT_BUDGET;
use ccn_secrecy::{AdversarySpec, PrimeField, SchemeSpec, Trace};

fn compare(out: &mut impl Write, label: &str, t: &Trace, spec: &AdversarySpec) -> ccn_secrecy::Result<()> {
    for set in adversary_sets(t.network(), spec)? {
        let c = oracle_check(t, &set, DEFAULT_BUDGET)?;
        let cond = c.conditional.map_or("non-uniform".into(), |r| r.to_string());
        writeln!(
            out,
            "{label} {:?}: H(W) = {}, H(W|V) = {cond}, rank leakage {}, {}",
            set.labels(t.network()),
            c.message,
            c.rank_leakage,
            if c.agree { "agree" } else { "DISAGREE" }
        )?;
    }
    Ok(())
}

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(3)?;
    let spec = SchemeSpec::Ksc { m: 3, h: 2 };
    compare(out, "ksc", &spec.build(&f)?.trace, &spec.adversary())?;
    compare(out, "leaky", &ksc_without_share(3, 2, 1, &f)?, &AdversarySpec::nodes(1))?;
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
