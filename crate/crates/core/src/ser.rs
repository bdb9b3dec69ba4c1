//! Serde helpers for values JSON cannot hold exactly.

use std::fmt::Display;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serializer;

/// Largest integer every JSON consumer reads exactly (`2⁵³ − 1`).
pub const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

/// A number when it fits in the exact range, a decimal string otherwise.
pub fn big_int<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) if v.unsigned_abs() <= MAX_SAFE_INTEGER => s.serialize_i64(v),
        _ => s.collect_str(n),
    }
}

pub fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
