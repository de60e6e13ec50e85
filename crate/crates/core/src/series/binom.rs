//! Generalized binomial coefficients for integer upper argument.
//!
//! Moving x^k past a coefficient needs C(k, t) for possibly negative k.
//! These are always integers; they are computed exactly and consumed
//! reduced modulo the additive exponent of the coefficient ring.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// C(k, t) for any integer k, exactly.
///
/// Uses the stepwise recurrence C(k, t+1) = C(k, t)(k - t)/(t + 1), in which
/// every division is exact.
pub fn binom_int(k: i64, t: u64) -> BigInt {
    if k >= 0 && t > k as u64 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for s in 0..t {
        acc = acc * (BigInt::from(k) - s) / (s + 1);
    }
    acc
}

/// Rows of C(k, ·) reduced modulo the additive exponent of a ring.
///
/// Each row keeps its exact BigInt tail so extension stays O(1) big
/// multiplications per new entry.
pub(crate) struct BinomCache {
    modulus: u64,
    rows: HashMap<i64, Row>,
}

struct Row {
    reduced: Vec<u64>,
    /// Exact value of C(k, reduced.len() - 1).
    tail: BigInt,
}

impl BinomCache {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus > 0, "additive exponent is always positive");
        BinomCache {
            modulus,
            rows: HashMap::new(),
        }
    }

    /// C(k, t) mod the ring exponent, as a nonnegative residue.
    pub fn get(&mut self, k: i64, t: u64) -> u64 {
        if k >= 0 && t > k as u64 {
            return 0;
        }
        let modulus = self.modulus;
        let row = self.rows.entry(k).or_insert_with(|| Row {
            reduced: vec![1 % modulus],
            tail: BigInt::one(),
        });
        while (row.reduced.len() as u64) <= t {
            let s = row.reduced.len() as u64 - 1;
            row.tail = &row.tail * (BigInt::from(k) - s) / (s + 1);
            row.reduced.push(reduce(&row.tail, modulus));
        }
        row.reduced[t as usize]
    }
}

fn reduce(v: &BigInt, modulus: u64) -> u64 {
    let m = BigInt::from(modulus);
    let mut r = v % &m;
    if r.is_negative() {
        r += &m;
    }
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}
