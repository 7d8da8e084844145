//! Arithmetic in GF(p), matrix rank and left solving.

use std::io::{self, Write};

use ccn_secrecy::field::{left_solve, FieldMatrix, PrimeField};

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(13)?;
    let inverses: Vec<_> = (1..13).map(|a| f.inv(a).unwrap()).collect();
    writeln!(out, "inverses mod 13: {inverses:?}")?;
    writeln!(out, "3 - 5 = {}, 2^12 = {}", f.sub(3, 5), f.pow(2, 12))?;

    // Three padded symbols over (c1, c2, d); only two are independent mod 5.
    let f5 = PrimeField::new(5)?;
    let pads = FieldMatrix::from_i64_rows(&[vec![1, 0, 1], vec![1, 1, 1], vec![1, -1, 1]], 3, &f5)?;
    writeln!(out, "rank of pad rows over GF(5): {}", pads.rank(&f5))?;

    // Recover c2 = (c1 + c2 + d) - (c1 + d).
    let target = FieldMatrix::from_i64_rows(&[vec![0, 1, 0]], 3, &f5)?;
    let decoder = left_solve(&pads, &target, &f5)?.expect("c2 is in the row space");
    writeln!(out, "decoder for c2: {:?}", decoder.row(0))?;
    let c1 = FieldMatrix::from_i64_rows(&[vec![1, 0, 0]], 3, &f5)?;
    writeln!(out, "c1 recoverable: {}", left_solve(&pads, &c1, &f5)?.is_some())?;
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
