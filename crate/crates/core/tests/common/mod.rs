//! Brute-force oracles shared by the integration tests. They use plain
//! integer arithmetic only, never the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;

/// All 2x2 matrices over Z/p with Q^T Q = I, by trying every one.
pub fn brute_force_orthogonal(p: u64) -> BTreeSet<[u64; 4]> {
    let mut out = BTreeSet::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let c11 = (a * a + c * c) % p;
                    let c12 = (a * b + c * d) % p;
                    let c22 = (b * b + d * d) % p;
                    if c11 == 1 && c12 == 0 && c22 == 1 {
                        out.insert([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Tables of `X -> Q X + t` for every brute-force `Q` and every `t`.
pub fn canonical_tables(p: u64) -> HashSet<Vec<u32>> {
    let mut out = HashSet::new();
    for [a, b, c, d] in brute_force_orthogonal(p) {
        for t1 in 0..p {
            for t2 in 0..p {
                let table = (0..p * p)
                    .map(|idx| {
                        let (x1, x2) = (idx / p, idx % p);
                        let y1 = (a * x1 + b * x2 + t1) % p;
                        let y2 = (c * x1 + d * x2 + t2) % p;
                        (y1 * p + y2) as u32
                    })
                    .collect();
                out.insert(table);
            }
        }
    }
    out
}

/// `a + b sqrt 2` as a pair of rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct Sqrt2(pub BigRational, pub BigRational);

impl Sqrt2 {
    pub fn new(a: (i64, i64), b: (i64, i64)) -> Sqrt2 {
        let r = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
        Sqrt2(r(a), r(b))
    }

    pub fn mul(&self, o: &Sqrt2) -> Sqrt2 {
        let two = BigRational::from_integer(BigInt::from(2));
        Sqrt2(
            &self.0 * &o.0 + two * &self.1 * &o.1,
            &self.0 * &o.1 + &self.1 * &o.0,
        )
    }

    pub fn sub(&self, o: &Sqrt2) -> Sqrt2 {
        Sqrt2(&self.0 - &o.0, &self.1 - &o.1)
    }

    /// `sqrt 2 -> -sqrt 2`.
    pub fn conj(&self) -> Sqrt2 {
        Sqrt2(self.0.clone(), -&self.1)
    }
}
