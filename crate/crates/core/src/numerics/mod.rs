//! Exact rationals, rational points under the max metric, and the
//! natural-number codings of both.

mod coding;
mod rat;

pub use coding::{
    decode_point, decode_rat, encode_point, encode_rat, pair, pair3, unpair, unpair3, NatCode,
};
pub(crate) mod coding_u64 {
    pub(crate) use super::coding::unpair_u64 as unpair;
}

pub use rat::{dist, Point, Rat};
