//! Monodromy data for cyclic covers of the line branched at `0, 1, ∞`.
//!
//! A datum is a pair `(m, a)` with `a = (a1, a2, a3)` the local monodromies.
//! Two data are equivalent when their triples differ by a permutation and a
//! common unit scaling mod `m`; the canonical representative is the
//! lexicographically least ascending triple in the orbit.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_integer::Integer;

use crate::arith::{divisors, fractional_part, units};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatumError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("a({index}) ≡ 0 mod {m}")]
    ZeroMonodromy { index: usize, m: u64 },
    #[error("gcd(m, a(1), a(2), a(3)) = {gcd}, expected 1")]
    GcdNotOne { gcd: u64 },
    #[error("a(1)+a(2)+a(3) ≡ {sum} mod {m}, expected 0")]
    SumNotZero { sum: u64, m: u64 },
}

/// A valid monodromy datum `(m, a)`; entries are normalized to `[1, m-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonodromyDatum {
    m: u64,
    a: [u64; 3],
}

impl MonodromyDatum {
    /// Validates the three conditions on `(m, a)`, reducing entries mod `m`
    /// first. Each violated condition has its own error.
    pub fn new(m: u64, a: [i64; 3]) -> Result<Self, DatumError> {
        if m < 2 {
            return Err(DatumError::ModulusTooSmall(m));
        }
        let mut red = [0u64; 3];
        for (i, &ai) in a.iter().enumerate() {
            let r = ai.rem_euclid(m as i64) as u64;
            if r == 0 {
                return Err(DatumError::ZeroMonodromy { index: i + 1, m });
            }
            red[i] = r;
        }
        let gcd = m.gcd(&red[0]).gcd(&red[1]).gcd(&red[2]);
        if gcd != 1 {
            return Err(DatumError::GcdNotOne { gcd });
        }
        let sum = (red[0] + red[1] + red[2]) % m;
        if sum != 0 {
            return Err(DatumError::SumNotZero { sum, m });
        }
        Ok(MonodromyDatum { m, a: red })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn a(&self) -> [u64; 3] {
        self.a
    }

    /// Genus of the cover: `1 + (m − Σ gcd(a(i), m)) / 2`.
    pub fn genus(&self) -> u64 {
        let s: u64 = self.a.iter().map(|&ai| ai.gcd(&self.m)).sum();
        // m + 2 - s is even and nonnegative for a valid datum.
        (self.m + 2 - s) / 2
    }

    /// Divisors `d` of `m` with `1 < d` and `d ∤ a(i)` for every `i`; the
    /// Jacobian has CM by the product of the cyclotomic fields `K_d`.
    pub fn cm_factors(&self) -> BTreeSet<u64> {
        divisors(self.m)
            .into_iter()
            .filter(|&d| d > 1 && self.a.iter().all(|&ai| ai % d != 0))
            .collect()
    }

    /// The signature vector together with the sets `S_1`, `S_0`.
    pub fn signature(&self) -> Signature {
        let m = self.m as i64;
        let mut f = Vec::with_capacity(self.m as usize - 1);
        let mut s1 = BTreeSet::new();
        let mut s0 = BTreeSet::new();
        for n in 1..self.m {
            let mut sum = Rational::from_integer(-1);
            for &ai in &self.a {
                sum += fractional_part(Rational::new(-(n as i64) * ai as i64, m));
            }
            assert!(sum.is_integer(), "signature value must be an integer");
            let val = sum.to_integer();
            assert!(val == 0 || val == 1, "signature value must be 0 or 1");
            f.push(val as u8);
            // Only residues whose order divides none of the a(i) enter S_0/S_1.
            let d = self.m / n.gcd(&self.m);
            if self.a.iter().all(|&ai| ai % d != 0) {
                if val == 1 {
                    s1.insert(n);
                } else {
                    s0.insert(n);
                }
            }
        }
        Signature {
            datum: *self,
            f,
            s1,
            s0,
        }
    }

    /// Canonical representative of the equivalence class under permutation
    /// and unit scaling: the lexicographically least ascending triple.
    pub fn canonical_form(&self) -> MonodromyDatum {
        let mut best: Option<[u64; 3]> = None;
        for u in units(self.m) {
            let mut scaled = [
                self.a[0] * u % self.m,
                self.a[1] * u % self.m,
                self.a[2] * u % self.m,
            ];
            scaled.sort_unstable();
            if best.map_or(true, |b| scaled < b) {
                best = Some(scaled);
            }
        }
        MonodromyDatum {
            m: self.m,
            a: best.expect("unit group is nonempty"),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical_form()
    }
}

/// The signature `(f(1), …, f(m−1))` of a datum, with the derived sets
/// `S_1 = {n : f(n) = 1}` and `S_0 = {n : f(n) = 0}` restricted to residues
/// whose order divides none of the `a(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    datum: MonodromyDatum,
    f: Vec<u8>,
    s1: BTreeSet<u64>,
    s0: BTreeSet<u64>,
}

impl Signature {
    pub fn datum(&self) -> &MonodromyDatum {
        &self.datum
    }

    /// `f(n)` for `n` in `[1, m-1]`.
    pub fn f(&self, n: u64) -> u8 {
        self.f[n as usize - 1]
    }

    pub fn values(&self) -> &[u8] {
        &self.f
    }

    pub fn s1(&self) -> &BTreeSet<u64> {
        &self.s1
    }

    pub fn s0(&self) -> &BTreeSet<u64> {
        &self.s0
    }
}

/// One canonical representative per equivalence class of monodromy data
/// with the given `m`, sorted lexicographically.
pub fn enumerate_classes(m: u64) -> Vec<MonodromyDatum> {
    let mut out = Vec::new();
    for a1 in 1..m {
        for a2 in a1..m {
            let a3 = (2 * m - (a1 + a2) % m) % m;
            if a3 == 0 || a3 < a2 {
                continue;
            }
            if let Ok(d) = MonodromyDatum::new(m, [a1 as i64, a2 as i64, a3 as i64]) {
                if d.is_canonical() {
                    out.push(d);
                }
            }
        }
    }
    out.sort();
    out
}
