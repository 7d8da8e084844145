//! Hand-computed reference values. Each constant here was worked out by
//! hand before the corresponding code existed; a change in any of them is
//! a behaviour change, not a refactor.

use ccn_secrecy::field::{
    left_solve, mds_generator, sylvester_hadamard_codewords, FieldMatrix, PrimeField,
};
use ccn_secrecy::network::{build_ccn, build_fig2, mincut, AdversarySet, Fig2Variant, Orientation};
use ccn_secrecy::report::table1;
use ccn_secrecy::schemes::{ksc, routing_h3, undirected};
use ccn_secrecy::verifier::{brute_force_oracle, DEFAULT_BUDGET};
use ccn_secrecy::Rate;
use num_rational::Ratio;

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

#[test]
fn gf13_inverses() {
    let f = gf(13);
    let table: Vec<_> = (1..13).map(|a| f.inv(a).unwrap()).collect();
    assert_eq!(table, [1, 7, 9, 10, 8, 11, 2, 5, 3, 4, 6, 12]);
    assert_eq!(f.inv(0), None);
    assert_eq!(f.pow(2, 12), 1);
    assert_eq!(f.reduce(-1), 12);
}

#[test]
fn vandermonde_6_4_over_gf13() {
    let g = mds_generator(6, 4, &gf(13)).unwrap();
    let expected = [
        [1, 1, 1, 1, 1, 1],
        [1, 2, 3, 4, 5, 6],
        [1, 4, 9, 3, 12, 10],
        [1, 8, 1, 12, 8, 8],
    ];
    for (r, row) in expected.iter().enumerate() {
        assert_eq!(g.row(r), row);
    }
}

#[test]
fn hadamard_length_four() {
    let words = sylvester_hadamard_codewords(4).unwrap();
    let expected: [[u8; 4]; 8] = [
        [0, 0, 0, 0],
        [1, 1, 1, 1],
        [0, 1, 0, 1],
        [0, 0, 1, 1],
        [0, 1, 1, 0],
        [1, 0, 1, 0],
        [1, 1, 0, 0],
        [1, 0, 0, 1],
    ];
    assert_eq!(words, expected.map(|w| w.to_vec()).to_vec());
}

#[test]
fn rank_and_solve_small_cases() {
    let f5 = gf(5);
    // c1 + d, c1 + c2 + d, c1 - c2 + d over (c1, c2, d).
    let pads = FieldMatrix::from_i64_rows(&[vec![1, 0, 1], vec![1, 1, 1], vec![1, -1, 1]], 3, &f5).unwrap();
    assert_eq!(pads.rank(&f5), 2);
    assert_eq!(pads.determinant(&f5).unwrap(), 0);

    let f2 = gf(2);
    let a = FieldMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]], 2, &f2).unwrap();
    let t = FieldMatrix::from_i64_rows(&[vec![1, 0]], 2, &f2).unwrap();
    let d = left_solve(&a, &t, &f2).unwrap().unwrap();
    assert_eq!(d.row(0), [1, 1]);
}

#[test]
fn protocol_sizes() {
    let f = gf(13);
    // Round 1: two shares. Round 2: 2 + 2 + 2 first-layer sends, 3 relays,
    // 6 receiver links.
    let t = ksc(3, 2, &f).unwrap();
    assert_eq!((t.transmissions().len(), t.dim(), t.rounds()), (17, 3, 2));
    // Per round: 3 + 4 + 4 + 12.
    let t = routing_h3(4, &f).unwrap();
    assert_eq!((t.transmissions().len(), t.dim(), t.rounds()), (69, 7, 3));
    // Uplink 15, two downlinks of 25; 4 message, 8 random symbols.
    let t = undirected(4, 3, &gf(3)).unwrap();
    assert_eq!((t.transmissions().len(), t.dim(), t.rounds()), (65, 12, 3));
}

#[test]
fn small_graph_mincuts() {
    for (variant, h, q) in [(Fig2Variant::A, 3, 0), (Fig2Variant::B, 3, 0), (Fig2Variant::C, 2, 4), (Fig2Variant::D, 4, 0)] {
        let net = build_fig2(variant, h, q).unwrap();
        let r = net.receivers()[0];
        assert_eq!(mincut(&net, net.source(), r).unwrap(), h, "{variant}");
    }
    let net = build_ccn(5, 3, Orientation::Directed).unwrap();
    assert_eq!(net.receivers().len(), 10);
    assert_eq!(net.edges().len(), 3 + 3 + 2 * 3 + 5 + 10 * 3);
}

#[test]
fn ksc_oracle_over_gf3() {
    let f = gf(3);
    let t = ksc(3, 2, &f).unwrap();
    let a3 = AdversarySet::Nodes(vec![t.network().node("A3").unwrap()]);
    let r = brute_force_oracle(&t, &a3, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.states, 27);
    assert_eq!(r.message_entropy, Ratio::from_integer(1));
    assert_eq!(r.conditional_entropy, Some(Ratio::from_integer(1)));
}

#[test]
fn table_one_rates() {
    let report = table1(&gf(13)).unwrap();
    let rates: Vec<String> = report.rows.iter().map(|r| r.rate.to_string()).collect();
    let expected = [
        // directed, h = 2 then h = 3
        "1/2", "1/2", "1/2", "1/2", "4/3", "4/3", "4/3",
        // undirected
        "2/3", "3/4", "4/5", "5/6", "4/3", "3/2", "8/5",
        // bidirected
        "1/1", "1/1", "1/1", "1/1", "2/1", "2/1", "2/1",
    ];
    assert_eq!(rates, expected);
    assert_eq!(report.rows[4].outer_bound, Some(Rate::new(4, 3)));
    assert_eq!(report.rows[11].outer_bound, Some(Rate::integer(2)));
    assert_eq!(report.rows[18].outer_bound, Some(Rate::integer(3)));
}

#[test]
fn named_entry_points() {
    use ccn_secrecy::schemes::*;
    let f = gf(13);
    let rates = [
        cai_yeung_code(4, 3, 1, &f).unwrap().rate,
        routing_scheme_h3(4, &f).unwrap().rate,
        hadamard_scheme_h2(4, &f).unwrap().rate,
        plus_one_scheme(3, &f).unwrap().rate,
        undirected_scheme(5, 3, &f).unwrap().rate,
        bidirected_node_scheme(4, 3, &f).unwrap().rate,
        bidirected_edge_scheme(4, 3, &f).unwrap().rate,
        fig2_scheme(Fig2Variant::C, 3, 1, 2, &f).unwrap().rate,
    ];
    let expected = [Rate::integer(2), Rate::new(4, 3), Rate::new(1, 2), Rate::new(4, 3),
        Rate::new(3, 2), Rate::integer(2), Rate::integer(3), Rate::integer(2)];
    assert_eq!(rates, expected);
}
