//! Schemes on the small single-receiver graphs.

use crate::error::{Error, Result};
use crate::field::{projective_points, vandermonde, PrimeField, RowSpace};
use crate::network::{build_fig2, Fig2Variant};
use crate::protocol::{new_session, LinearForm, Trace};

use super::code::secure_code;

/// Rate `h - k` against `k` tapped edges on `h` parallel edges (variants
/// A and B); rate `min(h, h + q - k)` when the receiver can also send `q`
/// keys back (variant C); rate `h` against one intermediate node when each
/// two-hop path can be used in reverse (variant D, `k` ignored).
pub fn fig2(variant: Fig2Variant, h: usize, q: usize, k: usize, f: &PrimeField) -> Result<Trace> {
    match variant {
        Fig2Variant::A | Fig2Variant::B => parallel(variant, h, k, f),
        Fig2Variant::C => with_return_edges(h, q, k, f),
        Fig2Variant::D => two_hop(h, f),
    }
}

fn parallel(variant: Fig2Variant, h: usize, k: usize, f: &PrimeField) -> Result<Trace> {
    if k == 0 || k >= h {
        return Err(Error::InvalidParameters(format!("needs 1 <= k < h, got k={k} h={h}")));
    }
    let net = build_fig2(variant, h, 0)?;
    let code = secure_code(h, h, k, f)?;
    let mut s = new_session(net, h - k, *f)?;
    let src = s.network().source();
    let mut inputs = s.messages();
    inputs.extend(s.fresh_named(src, "z", k)?.into_iter().map(LinearForm::var));
    let edges = s.network().arcs(src, s.network().node("R")?);
    for (i, (edge, dir)) in edges.into_iter().enumerate() {
        let payload = code.encode(&inputs, i, f);
        s.transmit(1, edge, dir, payload)?;
    }
    s.finalize()
}

/// The receiver returns `q` keys `r`, the source adds `d - q` keys `t` of
/// its own (`d = max(k, q)`), and forward edge `i` carries a message part
/// plus key part `K_i (t, r)`, where any `k` of the `q + h` key columns are
/// independent. The first `q` columns are units on `r`, so the return edges
/// are the key columns that carry the `r` symbols themselves.
fn with_return_edges(h: usize, q: usize, k: usize, f: &PrimeField) -> Result<Trace> {
    if k == 0 || k >= h + q {
        return Err(Error::InvalidParameters(format!(
            "needs 1 <= k < h + q, got k={k} h={h} q={q}"
        )));
    }
    let d = k.max(q);
    let t = d - q;
    let r_dim = h - t;
    let cols = q + h;
    let points = projective_points(f);
    if cols > points.len() {
        return Err(Error::FieldTooSmall {
            needed: cols - 1,
            modulus: f.modulus(),
        });
    }
    let m = vandermonde(&points[..cols], d, f);
    // Re-base so that the return-edge columns become units after the `t`
    // source-key coordinates and forward columns `0..t` become units on `t`.
    let order: Vec<usize> = (q..q + t).chain(0..q).collect();
    let to_units = m
        .select_columns(&order)
        .inverse(f)
        .ok_or_else(|| Error::ConstructionFailed("key columns are dependent".into()))?;
    let key = to_units.mul(&m, f)?;

    // Message coefficients: units completing the t-parts to a basis.
    let t_parts: Vec<Vec<u32>> = (0..h).map(|i| (0..t).map(|b| key.get(b, q + i)).collect()).collect();
    let mut span = RowSpace::new(*f);
    for b in 0..t {
        span.insert(&t_parts.iter().map(|p| p[b]).collect::<Vec<_>>());
    }
    let mut msg_cols = Vec::with_capacity(r_dim);
    for i in 0..h {
        let mut e = vec![0; h];
        e[i] = 1;
        if span.insert(&e) {
            msg_cols.push(i);
        }
    }
    if msg_cols.len() != r_dim {
        return Err(Error::ConstructionFailed("forward key parts are dependent".into()));
    }

    let net = build_fig2(Fig2Variant::C, h, q)?;
    let mut s = new_session(net, r_dim, *f)?;
    let (src, rcv) = (s.network().source(), s.network().node("R")?);
    let returned: Vec<LinearForm> = s.fresh_named(rcv, "r", q)?.into_iter().map(LinearForm::var).collect();
    let own: Vec<LinearForm> = s.fresh_named(src, "t", t)?.into_iter().map(LinearForm::var).collect();
    for ((edge, dir), r) in s.network().arcs(rcv, src).into_iter().zip(&returned) {
        s.transmit(1, edge, dir, r.clone())?;
    }
    let w = s.messages();
    let coords: Vec<&LinearForm> = own.iter().chain(&returned).collect();
    for (i, (edge, dir)) in s.network().arcs(src, rcv).into_iter().enumerate() {
        let mut terms: Vec<(i64, &LinearForm)> = coords
            .iter()
            .enumerate()
            .map(|(row, &x)| (key.get(row, q + i) as i64, x))
            .collect();
        if let Some(a) = msg_cols.iter().position(|&c| c == i) {
            terms.push((1, &w[a]));
        }
        s.transmit(1, edge, dir, LinearForm::combine(f, &terms))?;
    }
    s.finalize()
}

fn two_hop(h: usize, f: &PrimeField) -> Result<Trace> {
    if h < 2 {
        return Err(Error::InvalidParameters(format!("needs h >= 2, got {h}")));
    }
    let net = build_fig2(Fig2Variant::D, h, 0)?;
    let mut s = new_session(net, h, *f)?;
    let rcv = s.network().node("R")?;
    let keys: Vec<LinearForm> = s.fresh_named(rcv, "k", h)?.into_iter().map(LinearForm::var).collect();
    for (i, key) in keys.iter().enumerate() {
        let c = format!("C{}", i + 1);
        s.send(1, "R", &c, key.clone())?;
        s.send(1, &c, "S", key.clone())?;
    }
    let pad = LinearForm::sum(f, &keys);
    for (i, w) in s.messages().iter().enumerate() {
        let c = format!("C{}", i + 1);
        let v = w.plus(&pad, f);
        s.send(1, "S", &c, v.clone())?;
        s.send(1, &c, "R", v)?;
    }
    s.finalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::AdversarySpec;
    use crate::field::FieldMatrix;
    use crate::verifier::verify_all;
    use itertools::Itertools;

    fn key_matrix_is_mds(key: &FieldMatrix, k: usize, f: &PrimeField) -> bool {
        (0..key.cols())
            .combinations(k)
            .all(|c| key.select_columns(&c).rank(f) == k)
    }

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn parallel_edges() {
        let f = gf(13);
        for v in [Fig2Variant::A, Fig2Variant::B] {
            let t = fig2(v, 3, 0, 1, &f).unwrap();
            assert_eq!(t.message_dim(), 2);
            assert!(verify_all(&t, &AdversarySpec::edges(1)).unwrap().passed());
        }
    }

    #[test]
    fn return_edges_raise_rate() {
        let f = gf(13);
        for (h, q, k, r) in [(2, 1, 1, 2), (2, 1, 2, 1), (3, 2, 1, 3), (3, 1, 2, 2), (2, 2, 3, 1)] {
            let t = fig2(Fig2Variant::C, h, q, k, &f).unwrap();
            assert_eq!(t.message_dim(), r, "h={h} q={q} k={k}");
            assert!(verify_all(&t, &AdversarySpec::edges(k)).unwrap().passed(), "h={h} q={q} k={k}");
        }
    }

    #[test]
    fn vandermonde_key_matrix() {
        let f = gf(5);
        let m = vandermonde(&projective_points(&f)[..4], 2, &f);
        assert!(key_matrix_is_mds(&m, 2, &f));
    }

    #[test]
    fn two_hop_node_secure() {
        let f = gf(13);
        let t = fig2(Fig2Variant::D, 2, 0, 1, &f).unwrap();
        assert_eq!(t.message_dim(), 2);
        assert!(verify_all(&t, &AdversarySpec::nodes(1)).unwrap().passed());
        assert!(fig2(Fig2Variant::D, 1, 0, 1, &f).is_err());
    }
}
