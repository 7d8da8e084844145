use std::collections::HashSet;

use ccn_secrecy::field::{left_solve, rank, Elem, FieldMatrix, PrimeField};
use ccn_secrecy::network::{adversary_sets, build_fig2, AdversarySpec, Fig2Variant};
use ccn_secrecy::protocol::{new_session, LinearForm, Trace, VarId};
use ccn_secrecy::report::{oracle_check, TraceDocument};
use ccn_secrecy::schemes::SchemeSpec;
use ccn_secrecy::verifier::{decodability_check, secrecy_check, AdversaryView, DEFAULT_BUDGET};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(vec![2u64, 3, 5, 7, 13]).prop_map(|p| PrimeField::new(p).unwrap())
}

fn matrix(f: PrimeField, rows: usize, cols: usize) -> impl Strategy<Value = FieldMatrix> {
    prop::collection::vec(0..f.modulus(), rows * cols)
        .prop_map(move |data| FieldMatrix::new(rows, cols, data, &f).unwrap())
}

fn field_and_matrix() -> impl Strategy<Value = (PrimeField, FieldMatrix)> {
    (field(), 1..6usize, 1..6usize).prop_flat_map(|(f, r, c)| (Just(f), matrix(f, r, c)))
}

fn small_scheme() -> impl Strategy<Value = SchemeSpec> {
    use Fig2Variant::*;
    prop_oneof![
        (3..6usize).prop_map(|m| SchemeSpec::Ksc { m, h: 2 }),
        (4..6usize).prop_map(|m| SchemeSpec::Ksc { m, h: 3 }),
        (4..7usize).prop_map(|m| SchemeSpec::RoutingH3 { m }),
        (3..7usize).prop_map(|m| SchemeSpec::Hadamard { m }),
        (3..5usize).prop_map(|h| SchemeSpec::PlusOne { h }),
        (3..6usize).prop_map(|m| SchemeSpec::Undirected { m, h: 2 }),
        (4..6usize).prop_map(|m| SchemeSpec::BidirectedNode { m, h: 3 }),
        (2..5usize).prop_map(|m| SchemeSpec::BidirectedEdge { m, h: 2 }),
        (2..5usize, 1..4usize).prop_map(|(h, q)| SchemeSpec::Fig2 { variant: C, h, q, k: q }),
        (2..5usize).prop_map(|h| SchemeSpec::Fig2 { variant: D, h, q: 0, k: 1 }),
        (2..5usize).prop_map(|h| SchemeSpec::Fig2 { variant: A, h, q: 0, k: h - 1 }),
    ]
}

fn built(spec: &SchemeSpec) -> Trace {
    spec.build(&PrimeField::new(13).unwrap()).unwrap().trace
}

/// A one-round protocol on `h` parallel edges where the source sends
/// arbitrary combinations of `r` message and `s` key symbols.
fn random_protocol() -> impl Strategy<Value = Trace> {
    (prop::sample::select(vec![2u64, 3]), 1..3usize, 0..3usize, 1..4usize).prop_flat_map(|(p, r, s, h)| {
        prop::collection::vec(prop::collection::vec(0..p as Elem, r + s), h).prop_map(move |rows| {
            let f = PrimeField::new(p).unwrap();
            let net = build_fig2(Fig2Variant::A, h, 0).unwrap();
            let mut session = new_session(net, r, f).unwrap();
            let src = session.network().source();
            session.fresh_named(src, "k", s).unwrap();
            for (i, row) in rows.into_iter().enumerate() {
                let edge = session.network().edges()[i].id;
                let dir = ccn_secrecy::network::Direction::Forward;
                session.transmit(1, edge, dir, LinearForm::from_dense(row)).unwrap();
            }
            session.finalize().unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_equals_transpose_rank((f, m) in field_and_matrix()) {
        prop_assert_eq!(rank(&m, &f), rank(&m.transpose(), &f));
        prop_assert!(rank(&m, &f) <= m.rows().min(m.cols()));
    }

    #[test]
    fn left_solve_is_sound(
        (f, a, t) in field_and_matrix().prop_flat_map(|(f, a)| {
            let cols = a.cols();
            (Just(f), Just(a), (1..4usize).prop_flat_map(move |r| matrix(f, r, cols)))
        })
    ) {
        match left_solve(&a, &t, &f).unwrap() {
            Some(d) => prop_assert_eq!(d.mul(&a, &f).unwrap(), t),
            None => prop_assert!(rank(&a.vstack(&t).unwrap(), &f) > rank(&a, &f)),
        }
    }

    #[test]
    fn leakage_never_drops_with_more_observations(
        (f, base, extra) in (field(), 1..4usize, 0..4usize, 1..4usize).prop_flat_map(|(f, r, s, rows)| {
            (Just(f), (matrix(f, rows, r), matrix(f, rows, s)), (matrix(f, 2, r), matrix(f, 2, s)))
        })
    ) {
        let unknown = (0..base.1.cols()).map(|i| VarId(base.0.cols() + i)).collect();
        let view = AdversaryView { message: base.0, randomness: base.1, unknown };
        let more = view.with_rows(&extra.0, &extra.1).unwrap();
        let before = secrecy_check(&view, &f).leakage;
        let after = secrecy_check(&more, &f).leakage;
        prop_assert!(after >= before);
        prop_assert!(after <= more.message.cols());
    }

    #[test]
    fn oracle_matches_rank_on_random_protocols(t in random_protocol()) {
        let spec = AdversarySpec::edges(1);
        for set in adversary_sets(t.network(), &spec).unwrap() {
            let check = oracle_check(&t, &set, DEFAULT_BUDGET).unwrap();
            prop_assert!(check.agree, "{:?}", check);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn documents_round_trip(spec in small_scheme()) {
        let t = built(&spec);
        let doc = TraceDocument::from_trace(&t, Some(spec));
        let parsed = TraceDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_trace().unwrap(), t);
    }

    #[test]
    fn replay_is_deterministic(spec in small_scheme()) {
        let t = built(&spec);
        prop_assert_eq!(t.replay().unwrap(), t.clone());
        prop_assert_eq!(built(&spec), t);
    }

    #[test]
    fn knowledge_only_grows(spec in small_scheme()) {
        let t = built(&spec);
        let f = *t.field();
        for node in t.network().node_ids() {
            let mut prev = 0;
            for upto in 0..=t.transmissions().len() {
                let r = t.knowledge(node, upto).rank(&f);
                prop_assert!(r >= prev);
                prev = r;
            }
            let owned: HashSet<_> = t.variables().owned_by(node).into_iter().collect();
            prop_assert!(t.knowledge(node, 0).rank(&f) == owned.len());
        }
    }

    #[test]
    fn decoders_recover_concrete_messages(
        spec in small_scheme(),
        seed in prop::collection::vec(0u32..13, 64),
    ) {
        let t = built(&spec);
        let f = *t.field();
        let values: Vec<Elem> = (0..t.dim()).map(|i| seed[i % seed.len()]).collect();
        for &r in t.network().receivers() {
            let d = decodability_check(&t, r).unwrap();
            let decoder = d.decoder.expect("schemes decode everywhere");
            // What the receiver actually holds: its own symbols, then payloads.
            let held: Vec<Elem> = t
                .variables()
                .owned_by(r)
                .into_iter()
                .map(|v| values[v.0])
                .chain(t.received_by(r).map(|x| x.payload.evaluate(&values, &f)))
                .collect();
            let decoded = decoder.apply(&held, &f);
            prop_assert_eq!(&decoded[..], &values[..t.message_dim()]);
        }
    }
}
