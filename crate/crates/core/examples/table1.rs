//! Achieved rates next to inner and outer bounds for every orientation,
//! h in {2, 3} and m up to 6.

use std::io::{self, Write};

use ccn_secrecy::report::table1;
use ccn_secrecy::PrimeField;

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let report = table1(&PrimeField::new(13)?)?;
    for row in &report.rows {
        let show = |r: Option<ccn_secrecy::Rate>| r.map_or("-".into(), |r| r.to_string());
        writeln!(
            out,
            "{:<24} achieved {:>4}  inner {:>4}  outer {:>4}  {}",
            row.scheme,
            row.rate.to_string(),
            show(row.inner_bound),
            show(row.outer_bound),
            if row.passed() { "verified" } else { "FAILED" }
        )?;
    }
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
