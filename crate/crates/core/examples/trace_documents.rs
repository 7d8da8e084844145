//! Serialises a trace, edits the JSON, and shows replay catching the edit.

use std::io::{self, Write};

use ccn_secrecy::report::TraceDocument;
use ccn_secrecy::{PrimeField, SchemeSpec};

pub fn run(out: &mut impl Write) -> ccn_secrecy::Result<()> {
    let f = PrimeField::new(13)?;
    let spec = SchemeSpec::Ksc { m: 3, h: 2 };
    let trace = spec.build(&f)?.trace;
    let doc = TraceDocument::from_trace(&trace, Some(spec));
    let json = doc.to_json();
    writeln!(out, "document: {} bytes, {} transmissions", json.len(), doc.transmissions.len())?;

    let back = TraceDocument::parse(&json)?.to_trace()?;
    writeln!(out, "round trip identical: {}", back == trace)?;

    // Make the first relay forward a message symbol it never saw.
    let mut edited = doc.clone();
    let relay = edited
        .transmissions
        .iter_mut()
        .find(|t| t.from == "S1" && t.to == "A1")
        .expect("relay hop exists");
    relay.payload = [("w1".to_string(), 1)].into();
    match edited.to_trace() {
        Ok(_) => writeln!(out, "edited document replayed")?,
        Err(e) => writeln!(out, "edited document rejected: {e}")?,
    }
    Ok(())
}

fn main() -> ccn_secrecy::Result<()> {
    run(&mut io::stdout().lock())
}
