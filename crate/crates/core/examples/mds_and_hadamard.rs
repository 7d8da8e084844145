//! The two code families used by the schemes.

use std::io::{self, Write};

use ccn_secrecy::field::{hamming_distance, is_mds, mds_generator, sylvester_hadamard_codewords, PrimeField};
use itertools::Itertools;

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(13)?;
    let g = mds_generator(6, 4, &f)?;
    writeln!(out, "[6,4] Vandermonde generator over GF(13):")?;
    for r in 0..g.rows() {
        writeln!(out, "  {:?}", g.row(r))?;
    }
    writeln!(out, "MDS: {}", is_mds(&g, &f))?;

    for n in [4, 8] {
        let words = sylvester_hadamard_codewords(n)?;
        let min = words
            .iter()
            .tuple_combinations()
            .map(|(a, b)| hamming_distance(a, b))
            .min()
            .unwrap_or(0);
        writeln!(out, "Hadamard N={n}: {} words, minimum distance {min}", words.len())?;
    }
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
