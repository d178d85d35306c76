//! Lifted affine-invariant codes over GF(p^l).
//!
//! Finite fields, the affine domain F_q^m, Reed-Solomon and single-parity-check
//! base codes, lifting, a bounded-distance decoder, a high-error majority
//! decoder for lifted parity-check codes, and a q-ary symmetric channel.

pub mod base;
pub mod channel;
pub mod cli;
pub mod decode_bd;
pub mod decode_he;
pub mod domain;
pub mod error;
pub mod gf;
pub mod lift;
mod linalg;

pub use base::{BaseCode, BaseCodeSpec, BaseKind, LocalOutcome};
pub use channel::{fixed_weight_error, qsc_apply, ChannelParams};
pub use decode_bd::{decode_bd, local_tally, BdOptions, DecodeMode, TallyTable};
pub use decode_he::{
    decode_he, he_vote, required_lines, sum_zero_prob, vote_probs, VoteProbs, VoteTally,
};
pub use domain::{AffineSubspace, Point, PointSpace, Spread, SpreadKind, Word};
pub use error::{Error, FailureReason, Result};
pub use gf::{Elem, Extension, FieldCtx, FieldSpec};
pub use lift::{build_lifted_code, CodeInfo, CodeSpec, DegreeTuple, LiftedCode, Membership};
