//! Modular-arithmetic and orbit primitives.
//!
//! The central object is the partition of the nonzero residues mod `m` into
//! orbits of multiplication by `p`. Each orbit corresponds to a prime of the
//! cyclotomic group algebra above `p`; its size and self-duality drive the
//! slope computation in [`crate::shimura`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use num_integer::Integer;
use num_traits::Zero;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("residue {value} is not a unit mod {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("{p} divides the modulus {modulus}")]
    DividesModulus { p: u64, modulus: u64 },
    #[error("orbit members disagree on the order: {0} vs {1}")]
    CorruptOrbit(u64, u64),
}

/// An element of `Z/mZ`, stored reduced to `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self, ArithError> {
        if modulus < 2 {
            return Err(ArithError::ModulusTooSmall(modulus));
        }
        let m = modulus as i64;
        let value = value.rem_euclid(m) as u64;
        Ok(Residue { value, modulus })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_unit(&self) -> bool {
        self.value.gcd(&self.modulus) == 1
    }
}

/// The fractional part `⟨q⟩ = q − ⌊q⌋`, exact.
pub fn fractional_part(q: Rational) -> Rational {
    q - q.floor()
}

/// Trial-division primality test; `p` stays small in this crate.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Least `k ≥ 1` with `x^k ≡ 1`; rejects non-units.
pub fn multiplicative_order(x: Residue) -> Result<u64, ArithError> {
    if !x.is_unit() {
        return Err(ArithError::NotAUnit {
            value: x.value,
            modulus: x.modulus,
        });
    }
    let m = x.modulus;
    let mut acc = x.value % m;
    let mut k = 1;
    while acc != 1 {
        acc = acc * x.value % m;
        k += 1;
    }
    Ok(k)
}

/// The cyclic subgroup `⟨p mod m⟩` of `(Z/mZ)^*`.
pub fn subgroup_generated(m: u64, p: u64) -> Result<BTreeSet<u64>, ArithError> {
    if m < 2 {
        return Err(ArithError::ModulusTooSmall(m));
    }
    let r = p % m;
    if r.gcd(&m) != 1 {
        return Err(ArithError::DividesModulus { p, modulus: m });
    }
    let mut set = BTreeSet::new();
    let mut acc = 1;
    loop {
        set.insert(acc);
        acc = acc * r % m;
        if acc == 1 {
            break;
        }
    }
    Ok(set)
}

/// One orbit of multiplication by a fixed unit on the nonzero residues mod `m`.
///
/// Members are kept in increasing numeric order (the canonical order for
/// equality tests; powering order is not retained).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusOrbit {
    members: BTreeSet<u64>,
    modulus: u64,
    order: u64,
    self_dual: bool,
}

impl FrobeniusOrbit {
    fn from_members(members: BTreeSet<u64>, modulus: u64) -> Self {
        let n = *members.iter().next().expect("orbit is nonempty");
        let order = modulus / n.gcd(&modulus);
        let self_dual = members.iter().all(|&n| members.contains(&((modulus - n) % modulus)));
        FrobeniusOrbit {
            members,
            modulus,
            order,
            self_dual,
        }
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Least member, used for canonical ordering of partitions.
    pub fn least(&self) -> u64 {
        *self.members.iter().next().expect("orbit is nonempty")
    }

    /// The common order `m / gcd(n, m)` of the members.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn self_dual(&self) -> bool {
        self.self_dual
    }

    /// The negated orbit `o* = {−n : n ∈ o}`.
    pub fn dual(&self) -> FrobeniusOrbit {
        let members = self
            .members
            .iter()
            .map(|&n| (self.modulus - n) % self.modulus)
            .collect();
        FrobeniusOrbit::from_members(members, self.modulus)
    }
}

/// `m / gcd(n, m)` for any member `n`; signals a corrupt orbit if the
/// members disagree.
pub fn orbit_order(o: &FrobeniusOrbit) -> Result<u64, ArithError> {
    let mut orders = o
        .members
        .iter()
        .map(|&n| o.modulus / n.gcd(&o.modulus));
    let first = orders.next().expect("orbit is nonempty");
    for d in orders {
        if d != first {
            return Err(ArithError::CorruptOrbit(first, d));
        }
    }
    Ok(first)
}

/// True iff negation mod `m` maps the orbit onto itself.
pub fn is_self_dual(o: &FrobeniusOrbit) -> bool {
    o.self_dual
}

/// The partition of the nonzero residues mod `m` into `⟨p⟩`-orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusOrbitPartition {
    m: u64,
    p: u64,
    orbits: Vec<FrobeniusOrbit>,
}

impl FrobeniusOrbitPartition {
    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn multiplier(&self) -> u64 {
        self.p
    }

    pub fn orbits(&self) -> &[FrobeniusOrbit] {
        &self.orbits
    }
}

/// Orbits of multiplication by `p` on the nonzero residues mod `m`,
/// sorted by least member.
///
/// `p` must be prime and coprime to `m`; for orbit partitions of an
/// arbitrary unit see [`orbits_of_unit`].
pub fn frobenius_orbits(m: u64, p: u64) -> Result<FrobeniusOrbitPartition, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime { p });
    }
    orbits_of_unit(m, p)
}

/// Same as [`frobenius_orbits`] but for any multiplier coprime to `m`
/// (used when a congruence class or subgroup stands in for a prime).
pub fn orbits_of_unit(m: u64, r: u64) -> Result<FrobeniusOrbitPartition, ArithError> {
    if m < 2 {
        return Err(ArithError::ModulusTooSmall(m));
    }
    let rm = r % m;
    if rm.gcd(&m) != 1 {
        return Err(ArithError::DividesModulus { p: r, modulus: m });
    }
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for n in 1..m {
        if seen.contains(&n) {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut cur = n;
        while members.insert(cur) {
            seen.insert(cur);
            cur = cur * rm % m;
        }
        orbits.push(FrobeniusOrbit::from_members(members, m));
    }
    // Scanning n in increasing order already yields orbits sorted by least
    // member.
    Ok(FrobeniusOrbitPartition { m, p: r, orbits })
}

/// Orbit partition of the action of a full subgroup `H ⊆ (Z/mZ)^*` on the
/// nonzero residues: the orbit of `n` is `nH`.
pub fn orbits_of_subgroup(m: u64, subgroup: &BTreeSet<u64>) -> Result<Vec<FrobeniusOrbit>, ArithError> {
    if m < 2 {
        return Err(ArithError::ModulusTooSmall(m));
    }
    for &h in subgroup {
        if (h % m).gcd(&m) != 1 {
            return Err(ArithError::NotAUnit { value: h, modulus: m });
        }
    }
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for n in 1..m {
        if seen.contains(&n) {
            continue;
        }
        let members: BTreeSet<u64> = subgroup.iter().map(|&h| n * (h % m) % m).collect();
        seen.extend(members.iter().copied());
        orbits.push(FrobeniusOrbit::from_members(members, m));
    }
    Ok(orbits)
}

/// Unit residues mod `m` in increasing order.
pub fn units(m: u64) -> Vec<u64> {
    (1..m).filter(|n| n.gcd(&m) == 1).collect()
}

/// Euler phi, by counting; `m` stays small.
pub fn euler_phi(m: u64) -> u64 {
    units(m).len() as u64
}

/// Groups the units mod `m` by the subgroup they generate, keyed by the
/// subgroup itself.
pub fn units_by_generated_subgroup(m: u64) -> BTreeMap<BTreeSet<u64>, Vec<u64>> {
    let mut map: BTreeMap<BTreeSet<u64>, Vec<u64>> = BTreeMap::new();
    for r in units(m) {
        let h = subgroup_generated(m, r).expect("r is a unit");
        map.entry(h).or_default().push(r);
    }
    map
}

/// Divisors of `m` in increasing order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// `base^exp mod m` without overflow for the sizes used here.
pub fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    let mut result = 1u128;
    let mut base = (base % m) as u128;
    let m = m as u128;
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    result as u64
}

/// Exact `p`-adic valuation of a nonzero integer.
pub fn valuation(mut n: i128, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero is infinite");
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn fractional_part_examples() {
        assert_eq!(fractional_part(rat(-2, 7)), rat(5, 7));
        assert_eq!(fractional_part(rat(3, 1)), rat(0, 1));
        assert_eq!(fractional_part(rat(-10, 9)), rat(8, 9));
    }

    #[test]
    fn multiplicative_order_examples() {
        assert_eq!(multiplicative_order(Residue::new(1, 7).unwrap()).unwrap(), 1);
        assert_eq!(multiplicative_order(Residue::new(-1, 11).unwrap()).unwrap(), 2);
        assert_eq!(multiplicative_order(Residue::new(2, 7).unwrap()).unwrap(), 3);
        assert!(multiplicative_order(Residue::new(3, 9).unwrap()).is_err());
    }

    #[test]
    fn subgroup_examples() {
        let h: BTreeSet<u64> = [1, 2, 4, 5, 7, 8].into_iter().collect();
        assert_eq!(subgroup_generated(9, 2).unwrap(), h);
        assert_eq!(
            subgroup_generated(7, 8).unwrap(),
            [1].into_iter().collect::<BTreeSet<u64>>()
        );
        // Thm 5.4 proof: ⟨2⟩ = {2,4,8,1} mod 15.
        assert_eq!(
            subgroup_generated(15, 2).unwrap(),
            [1, 2, 4, 8].into_iter().collect::<BTreeSet<u64>>()
        );
        assert!(subgroup_generated(15, 3).is_err());
    }

    #[test]
    fn orbit_partition_m8_p3() {
        let part = frobenius_orbits(8, 3).unwrap();
        let got: Vec<Vec<u64>> = part
            .orbits()
            .iter()
            .map(|o| o.members().iter().copied().collect())
            .collect();
        assert_eq!(got, vec![vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]);
    }

    #[test]
    fn orbit_partition_m11_p3() {
        let part = frobenius_orbits(11, 3).unwrap();
        let got: Vec<Vec<u64>> = part
            .orbits()
            .iter()
            .map(|o| o.members().iter().copied().collect())
            .collect();
        assert_eq!(got, vec![vec![1, 3, 4, 5, 9], vec![2, 6, 7, 8, 10]]);
    }

    #[test]
    fn orbit_partition_split_class() {
        // p ≡ 1 mod m: all singletons.
        let part = frobenius_orbits(12, 13).unwrap();
        assert_eq!(part.orbits().len(), 11);
        assert!(part.orbits().iter().all(|o| o.len() == 1));
    }

    #[test]
    fn rejects_bad_multiplier() {
        assert!(frobenius_orbits(9, 3).is_err());
        assert!(matches!(frobenius_orbits(9, 4), Err(ArithError::NotPrime { p: 4 })));
        assert!(orbits_of_unit(9, 4).is_ok());
    }

    #[test]
    fn orbit_order_examples() {
        let part = frobenius_orbits(8, 3).unwrap();
        let by_least = |n: u64| part.orbits().iter().find(|o| o.least() == n).unwrap();
        assert_eq!(orbit_order(by_least(4)).unwrap(), 2);
        assert_eq!(orbit_order(by_least(2)).unwrap(), 4);
        assert_eq!(orbit_order(by_least(1)).unwrap(), 8);
    }

    #[test]
    fn self_duality_examples() {
        let part = orbits_of_unit(11, 10).unwrap();
        assert!(part.orbits().iter().all(is_self_dual));
        let part = frobenius_orbits(11, 3).unwrap();
        assert!(!is_self_dual(&part.orbits()[0]));
        // {4} mod 8 is its own negation.
        let part = frobenius_orbits(8, 3).unwrap();
        let single = part.orbits().iter().find(|o| o.least() == 4).unwrap();
        assert!(is_self_dual(single));
    }

    #[test]
    fn orbit_sizes_sum_to_m_minus_one() {
        for m in 2..40u64 {
            for p in [2, 3, 5, 7, 11, 13, 97] {
                if m % p == 0 {
                    continue;
                }
                let part = frobenius_orbits(m, p).unwrap();
                let total: u64 = part.orbits().iter().map(|o| o.len()).sum();
                assert_eq!(total, m - 1, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn orbit_size_is_order_of_p_mod_suborder() {
        for m in 2..40u64 {
            for p in [2, 3, 5, 7, 11, 13] {
                if m % p == 0 {
                    continue;
                }
                let part = frobenius_orbits(m, p).unwrap();
                for o in part.orbits() {
                    let d = orbit_order(o).unwrap();
                    let expected = multiplicative_order(Residue::new((p % d) as i64, d).unwrap())
                        .unwrap();
                    assert_eq!(o.len(), expected, "m={m} p={p} orbit {:?}", o.members());
                }
            }
        }
    }

    #[test]
    fn p_minus_one_gives_self_dual_orbits() {
        for m in 3..40u64 {
            let r = m - 1;
            if r.gcd(&m) != 1 {
                continue;
            }
            let part = orbits_of_unit(m, r).unwrap();
            assert!(part.orbits().iter().all(is_self_dual), "m={m}");
        }
    }

    #[test]
    fn divisors_and_units() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(units(9), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(euler_phi(2027), 2026);
    }
}
