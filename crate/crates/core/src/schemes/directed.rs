//! Single-path schemes on the directed CCN: the classical `k`-edge secure
//! code and the two-round key-sharing construction against one node.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::network::{build_ccn, Orientation};
use crate::protocol::{new_session, LinearForm, Trace};

use super::code::secure_code;
use super::{coded_round, zero_sum_keys};

/// Rate `h - k` against `k` tapped edges in one round, using no feedback.
pub fn cai_yeung(m: usize, h: usize, k: usize, f: &PrimeField) -> Result<Trace> {
    let net = build_ccn(m, h, Orientation::Directed)?;
    if k == 0 || k >= h {
        return Err(Error::InvalidParameters(format!("needs 1 <= k < h, got k={k} h={h}")));
    }
    let code = secure_code(m, h, k, f)?;
    let mut s = new_session(net, h - k, *f)?;
    let src = s.network().source();
    let keys = s.fresh_named(src, "z", k)?;
    let mut inputs = s.messages();
    inputs.extend(keys.into_iter().map(LinearForm::var));
    coded_round(&mut s, 1, &code, &inputs, |_, _| None)?;
    s.finalize()
}

/// Two-round scheme of rate `(h - 1) / 2` against one node on a directed
/// CCN with `m > h`.
///
/// Round one hands `S_l` a share `k_l` of a zero-sum key. Round two runs a
/// one-key secure code; each `S_l` pads its inputs to non-trivial coding
/// nodes with `k_l`, and the shares cancel in the coding node's sum.
pub fn ksc(m: usize, h: usize, f: &PrimeField) -> Result<Trace> {
    build_ksc(m, h, None, f)
}

/// [`ksc`] with share `k_{skip}` (1-based, `skip < h`) never sent, so that
/// the first layer node `S_{skip}` forwards unpadded symbols. Used as a
/// negative control: some coding node then learns a message combination.
pub fn ksc_without_share(m: usize, h: usize, skip: usize, f: &PrimeField) -> Result<Trace> {
    if skip == 0 || skip >= h {
        return Err(Error::InvalidParameters(format!("share index {skip} outside 1..{h}")));
    }
    build_ksc(m, h, Some(skip), f)
}

fn build_ksc(m: usize, h: usize, skip: Option<usize>, f: &PrimeField) -> Result<Trace> {
    if m <= h {
        return Err(Error::InvalidParameters(format!(
            "key sharing needs a non-trivial coding node (m > h), got m={m} h={h}"
        )));
    }
    let net = build_ccn(m, h, Orientation::Directed)?;
    let code = secure_code(m, h, 1, f)?;
    let mut s = new_session(net, h - 1, *f)?;
    let src = s.network().source();

    let mut shares = zero_sum_keys(&mut s, src, "k", h)?;
    if let Some(skip) = skip {
        shares[skip - 1] = LinearForm::zero();
        let last = shares[..h - 1].iter().fold(LinearForm::zero(), |acc, k| acc.minus(k, f));
        shares[h - 1] = last;
    }
    for (l, share) in shares.iter().enumerate() {
        if !share.is_zero() {
            s.send(1, "S", &format!("S{}", l + 1), share.clone())?;
        }
    }

    let u = s.fresh_labelled(src, "u")?;
    let mut inputs = s.messages();
    inputs.push(LinearForm::var(u));
    coded_round(&mut s, 2, &code, &inputs, |_, l| Some(shares[l - 1].clone()))?;
    s.finalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::AdversarySpec;
    use crate::verifier::verify_all;

    #[test]
    fn ksc_three_two() {
        let f = PrimeField::new(13).unwrap();
        let t = ksc(3, 2, &f).unwrap();
        assert_eq!(t.rounds(), 2);
        assert_eq!(t.message_dim(), 1);
        let v = verify_all(&t, &AdversarySpec::nodes(1)).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn missing_share_leaks() {
        let f = PrimeField::new(13).unwrap();
        let t = ksc_without_share(4, 3, 1, &f).unwrap();
        let v = verify_all(&t, &AdversarySpec::nodes(1)).unwrap();
        assert!(v.all_decodable());
        assert!(!v.all_secure());
    }

    #[test]
    fn cai_yeung_edges() {
        let f = PrimeField::new(13).unwrap();
        let t = cai_yeung(4, 3, 2, &f).unwrap();
        let v = verify_all(&t, &AdversarySpec::edges(2)).unwrap();
        assert!(v.passed());
        assert!(cai_yeung(4, 3, 3, &f).is_err());
    }
}
