//! Simulation and exact verification of secret multicast over canonical
//! combination networks (CCNs) and small feedback graphs.
//!
//! Protocols are recorded as traces of linear transmissions over GF(p).
//! Decodability and perfect secrecy against node or edge eavesdroppers
//! then reduce to rank conditions, which [`verifier`] checks and
//! cross-validates against an exhaustive entropy computation.

pub mod error;
pub mod field;
pub mod network;
pub mod protocol;
pub mod rate;
pub mod report;
pub mod schemes;
pub mod verifier;

pub use error::{Error, Result};
pub use field::{FieldMatrix, PrimeField};
pub use network::{AdversaryKind, AdversarySpec, Network, Orientation, Topology};
pub use protocol::{LinearForm, Session, Trace};
pub use rate::Rate;
pub use schemes::{SchemeResult, SchemeSpec};
pub use verifier::{verify_all, Verdict};
