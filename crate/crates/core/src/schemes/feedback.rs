//! Schemes that send keys against the flow of the message: on undirected
//! CCNs (edges shared by both directions within a round budget) and on
//! bidirected CCNs (a dedicated backward edge for every forward edge).

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::network::{build_ccn, NodeId, Orientation};
use crate::protocol::{new_session, LinearForm, Session, Trace};

use super::code::secure_code;
use super::{coded_round, zero_sum_keys};

fn needs_coding_node(m: usize, h: usize) -> Result<()> {
    if m <= h {
        return Err(Error::InvalidParameters(format!(
            "needs a non-trivial coding node (m > h), got m={m} h={h}"
        )));
    }
    Ok(())
}

/// Sends each share of `keys` from the receiver `R{1..h}` up through
/// `B_l`, `A_l` to `S_l`.
fn keys_from_receiver(s: &mut Session, round: u32, h: usize, keys: &[LinearForm]) -> Result<()> {
    let r: Vec<usize> = (1..=h).collect();
    let rname = s.network().name(s.network().receiver_for(&r)?).to_string();
    for (l, key) in keys.iter().enumerate() {
        let l = l + 1;
        s.send(round, &rname, &format!("B{l}"), key.clone())?;
        s.send(round, &format!("B{l}"), &format!("A{l}"), key.clone())?;
        s.send(round, &format!("A{l}"), &format!("S{l}"), key.clone())?;
    }
    Ok(())
}

fn first_receiver(s: &Session, h: usize) -> Result<NodeId> {
    let r: Vec<usize> = (1..=h).collect();
    s.network().receiver_for(&r)
}

/// Rate `(h-1)(m-h+1) / (m-h+2)` against one node on an undirected CCN
/// with `m > h`.
///
/// An uplink round gathers zero-sum key sets at the first layer: one from
/// the source, one from receiver `R{1..h}` and one from each non-trivial
/// coding node. Each of the `m - h + 1` downlink rounds then runs a one-key
/// secure code whose inputs to non-trivial coding nodes are padded with a
/// key set that node did not generate, rotating so no set is reused.
pub fn undirected(m: usize, h: usize, f: &PrimeField) -> Result<Trace> {
    needs_coding_node(m, h)?;
    let net = build_ccn(m, h, Orientation::Undirected)?;
    let code = secure_code(m, h, 1, f)?;
    let downlinks = m - h + 1;
    let mut s = new_session(net, (h - 1) * downlinks, *f)?;
    let src = s.network().source();

    let from_source = zero_sum_keys(&mut s, src, "kS", h)?;
    for (l, key) in from_source.iter().enumerate() {
        s.send(1, "S", &format!("S{}", l + 1), key.clone())?;
    }
    let receiver = first_receiver(&s, h)?;
    let from_receiver = zero_sum_keys(&mut s, receiver, "kR", h)?;
    keys_from_receiver(&mut s, 1, h, &from_receiver)?;
    let mut from_coding = Vec::with_capacity(m - h);
    for i in h + 1..=m {
        let node = s.network().node(&format!("A{i}"))?;
        let keys = zero_sum_keys(&mut s, node, &format!("kA{i}_"), h)?;
        for (l, key) in keys.iter().enumerate() {
            s.send(1, &format!("A{i}"), &format!("S{}", l + 1), key.clone())?;
        }
        from_coding.push(keys);
    }

    let w = s.messages();
    for t in 1..=downlinks {
        let u = s.fresh_labelled(src, &format!("u{t}"))?;
        let mut inputs = w[(t - 1) * (h - 1)..t * (h - 1)].to_vec();
        inputs.push(LinearForm::var(u));
        let pads = |j: usize, l: usize| -> Option<LinearForm> {
            let set = match t {
                1 => &from_source,
                2 => &from_receiver,
                _ => &from_coding[(j - h - 1 + t - 2) % (m - h)],
            };
            Some(set[l - 1].clone())
        };
        coded_round(&mut s, t as u32 + 1, &code, &inputs, pads)?;
    }
    s.finalize()
}

/// Rate `h - 1` in one round against one node on a bidirected CCN with
/// `m > h`: receiver `R{1..h}` feeds a zero-sum key back to the first layer,
/// which pads the inputs of non-trivial coding nodes.
pub fn bidirected_node(m: usize, h: usize, f: &PrimeField) -> Result<Trace> {
    needs_coding_node(m, h)?;
    let net = build_ccn(m, h, Orientation::Bidirected)?;
    let code = secure_code(m, h, 1, f)?;
    let mut s = new_session(net, h - 1, *f)?;
    let src = s.network().source();
    let receiver = first_receiver(&s, h)?;
    let keys = zero_sum_keys(&mut s, receiver, "kR", h)?;
    keys_from_receiver(&mut s, 1, h, &keys)?;
    let u = s.fresh_labelled(src, "u")?;
    let mut inputs = s.messages();
    inputs.push(LinearForm::var(u));
    coded_round(&mut s, 1, &code, &inputs, |_, l| Some(keys[l - 1].clone()))?;
    s.finalize()
}

/// Sends `value` from `from` to `to` one-time padded with a key that `to`
/// first returns on the paired backward edge.
fn guarded_send(s: &mut Session, from: &str, to: &str, value: &LinearForm, n: &mut usize) -> Result<()> {
    let f = *s.field();
    let head = s.network().node(to)?;
    *n += 1;
    let key = LinearForm::var(s.fresh_labelled(head, &format!("g{n}"))?);
    s.send(1, to, from, key.clone())?;
    s.send(1, from, to, value.plus(&key, &f))
}

/// Rate `h` in one round against one edge on a bidirected CCN: every forward
/// edge is one-time padded by its head over the backward edge.
pub fn bidirected_edge(m: usize, h: usize, f: &PrimeField) -> Result<Trace> {
    let net = build_ccn(m, h, Orientation::Bidirected)?;
    let code = secure_code(m, h, 0, f)?;
    let mut s = new_session(net, h, *f)?;
    let w = s.messages();
    let mut n = 0;
    let y: Vec<LinearForm> = (0..h).map(|l| code.encode(&w, l, f)).collect();
    for (l, yl) in y.iter().enumerate() {
        guarded_send(&mut s, "S", &format!("S{}", l + 1), yl, &mut n)?;
    }
    for (l, yl) in y.iter().enumerate() {
        guarded_send(&mut s, &format!("S{}", l + 1), &format!("A{}", l + 1), yl, &mut n)?;
    }
    let mut values = y.clone();
    for j in h..m {
        let a = code.combination(j, f);
        for (l, yl) in y.iter().enumerate() {
            let v = yl.scaled(a[l], f);
            guarded_send(&mut s, &format!("S{}", l + 1), &format!("A{}", j + 1), &v, &mut n)?;
        }
        values.push(code.encode(&w, j, f));
    }
    for (j, v) in values.iter().enumerate() {
        guarded_send(&mut s, &format!("A{}", j + 1), &format!("B{}", j + 1), v, &mut n)?;
    }
    let net = s.network().clone();
    for &r in net.receivers() {
        if let crate::network::NodeRole::Receiver(set) = net.role(r) {
            for &i in set {
                guarded_send(&mut s, &format!("B{i}"), net.name(r), &values[i - 1], &mut n)?;
            }
        }
    }
    s.finalize()
}
