//! Exact computations in the representation ring `R(Q_{2^n})` of the
//! generalized quaternion group and in the K-ring of its classifying space.
//!
//! * [`rep_ring`]: `R(Q_{4k})` on irreducibles, with a character-table oracle.
//! * [`adams`]: `ψ^i(φ)` (two constructions) and the relation polynomial `g_{2k}`.
//! * [`kring`]: the presentation on `v1, v2, φ`, its rewriting normal form, and
//!   certificates through the embedding into `R(Q_{4k})`.
//! * [`truncated`]: element orders in `R/φ^e R` via Smith normal form.
//! * [`lens`]: restriction to the cyclic subgroup `Z_{2k}`.
//! * [`cohomology`]: `H^*(BQ_{4k}; Z)` and order bookkeeping.
//! * [`suites`]: registry of named verification suites.

pub mod adams;
pub mod arith;
pub mod cohomology;
pub mod kring;
pub mod lens;
pub mod linalg;
pub mod rep_ring;
pub mod report;
pub mod suites;
pub mod truncated;

use thiserror::Error;

pub use rep_ring::GroupParams;
pub use report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] arith::ArithError),
    #[error(transparent)]
    Rep(#[from] rep_ring::RepError),
    #[error(transparent)]
    Adams(#[from] adams::AdamsError),
    #[error(transparent)]
    KRing(#[from] kring::KRingError),
    #[error(transparent)]
    Lens(#[from] lens::LensError),
}
