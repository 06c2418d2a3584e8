//! Explicit Galois data for abelian CM fields: the multiplicative group
//! `(Z/n)^*` as the Galois group of the n-th cyclotomic field, with
//! decomposition and inertia groups of any rational prime, ramified ones
//! included.
//!
//! Everything is CRT-based: `(Z/n)^* = (Z/p^a)^* x (Z/m)^*` for
//! `n = p^a * m`. The inertia group of a prime above `p` is the full
//! `(Z/p^a)^*` factor, and the decomposition group is generated by inertia
//! together with the Frobenius residue (`p` on the prime-to-p part,
//! trivial on the `p`-part). No polynomial or ideal arithmetic is needed.

use thiserror::Error;

use crate::arith;
use crate::group::{ElementId, FiniteGroup, Subgroup, MAX_GROUP_ORDER};

/// Largest accepted conductor.
pub const MAX_CONDUCTOR: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("conductor {0} out of range (need 3 <= n <= {MAX_CONDUCTOR} with phi(n) <= {MAX_GROUP_ORDER})")]
    ConductorOutOfRange(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p} and {m} are not coprime")]
    NotCoprime { p: u64, m: u64 },
}

/// The unit group `(Z/n)^*`, realised as a [`FiniteGroup`] whose element
/// labels are the residues.
#[derive(Clone, Debug)]
pub struct UnitGroupModN {
    conductor: u64,
    group: FiniteGroup,
    /// identifier -> residue, ascending (so the identity residue 1 is 0)
    residues: Vec<u64>,
}

impl UnitGroupModN {
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.residues.len()
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn residue(&self, id: ElementId) -> u64 {
        self.residues[id as usize]
    }

    pub fn id_of_residue(&self, r: u64) -> Option<ElementId> {
        let r = r % self.conductor;
        self.residues
            .binary_search(&r)
            .ok()
            .map(|i| i as ElementId)
    }

    /// The residue `-1`, which acts as complex conjugation on the
    /// cyclotomic field.
    pub fn conjugation(&self) -> ElementId {
        self.id_of_residue(self.conductor - 1)
            .expect("-1 is a unit mod n")
    }
}

/// Builds `(Z/n)^*` for `3 <= n <= 10^5` with `phi(n) <= 10^4`.
pub fn unit_group(n: u64) -> Result<UnitGroupModN, CyclotomicError> {
    if !(3..=MAX_CONDUCTOR).contains(&n) {
        return Err(CyclotomicError::ConductorOutOfRange(n));
    }
    let residues: Vec<u64> = (1..n).filter(|&r| arith::gcd(r, n) == 1).collect();
    let phi = residues.len();
    if phi > MAX_GROUP_ORDER {
        return Err(CyclotomicError::ConductorOutOfRange(n));
    }
    let mut id_of = vec![u16::MAX; n as usize];
    for (i, &r) in residues.iter().enumerate() {
        id_of[r as usize] = i as u16;
    }
    let table: Vec<Vec<usize>> = residues
        .iter()
        .map(|&a| {
            residues
                .iter()
                .map(|&b| id_of[(a * b % n) as usize] as usize)
                .collect()
        })
        .collect();
    let labels: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
    let group = FiniteGroup::from_table(table, Some(labels))
        .expect("modular multiplication is a valid group law");
    Ok(UnitGroupModN {
        conductor: n,
        group,
        residues,
    })
}

/// Decomposition group `D` and inertia group `I` of (any) prime above `p`
/// in the n-th cyclotomic field. Independent of the choice of prime since
/// the group is abelian. `|D| = phi(p^a) * ord_m(p)` and `|I| = phi(p^a)`
/// where `n = p^a * m` with `p` not dividing `m`.
pub fn decomposition_and_inertia(
    units: &UnitGroupModN,
    p: u64,
) -> Result<(Subgroup, Subgroup), CyclotomicError> {
    if !arith::is_prime(p) {
        return Err(CyclotomicError::NotPrime(p));
    }
    let n = units.conductor;
    let (pa, m) = arith::split_prime_power(n, p);
    let group = units.group();

    // Inertia: residues congruent to 1 mod m (the (Z/p^a)^* factor).
    let inertia_ids: Vec<ElementId> = units
        .residues
        .iter()
        .enumerate()
        .filter(|(_, &r)| r % m == 1 % m)
        .map(|(i, _)| i as ElementId)
        .collect();
    let inertia = Subgroup::generated(group, &inertia_ids)
        .expect("inertia members are group elements");

    // Frobenius: congruent to p mod m and to 1 mod p^a.
    let mut seeds = inertia_ids;
    if m > 1 {
        let frob = if pa == 1 {
            p % n
        } else {
            // x = 1 + p^a * t with t = (p - 1) / p^a mod m
            let inv = arith::mod_inverse(pa % m, m).expect("p^a invertible mod m");
            let t = (p % m + m - 1) * inv % m;
            (1 + pa * t) % n
        };
        let frob_id = units
            .id_of_residue(frob)
            .expect("Frobenius residue is a unit");
        seeds.push(frob_id);
    }
    let decomposition =
        Subgroup::generated(group, &seeds).expect("decomposition members are group elements");
    Ok((decomposition, inertia))
}

/// Multiplicative order of `p` modulo `m` — the residue degree of an
/// unramified prime `p` in the m-th cyclotomic field.
pub fn frobenius_order(p: u64, m: u64) -> Result<u64, CyclotomicError> {
    if m == 1 {
        return Ok(1);
    }
    if m == 0 || arith::gcd(p % m, m) != 1 {
        return Err(CyclotomicError::NotCoprime { p, m });
    }
    Ok(arith::multiplicative_order(p, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::double_cosets;

    #[test]
    fn unit_group_mod_8() {
        let u = unit_group(8).unwrap();
        assert_eq!(u.order(), 4);
        assert_eq!(u.residues(), &[1, 3, 5, 7]);
        assert_eq!(u.conjugation(), u.id_of_residue(7).unwrap());
        // every element squares to the identity
        let g = u.group();
        for a in g.elements() {
            assert_eq!(g.product(a, a), 0);
        }
    }

    #[test]
    fn unit_group_small_conductors() {
        let u = unit_group(3).unwrap();
        assert_eq!(u.residues(), &[1, 2]);
        let u = unit_group(4).unwrap();
        assert_eq!(u.residues(), &[1, 3]);
    }

    #[test]
    fn conductor_range() {
        assert_eq!(
            unit_group(2).unwrap_err(),
            CyclotomicError::ConductorOutOfRange(2)
        );
        assert_eq!(
            unit_group(100_001).unwrap_err(),
            CyclotomicError::ConductorOutOfRange(100_001)
        );
        // phi(65536) = 32768 > 10^4
        assert_eq!(
            unit_group(65_536).unwrap_err(),
            CyclotomicError::ConductorOutOfRange(65_536)
        );
    }

    #[test]
    fn decomposition_mod_8() {
        let u = unit_group(8).unwrap();
        // p = 3: unramified, 3 generates D = {1, 3}
        let (d, i) = decomposition_and_inertia(&u, 3).unwrap();
        let id = |r| u.id_of_residue(r).unwrap();
        assert_eq!(d.members(), &[id(1), id(3)]);
        assert_eq!(i.members(), &[id(1)]);
        // p = 2: totally ramified, D = I = whole group
        let (d, i) = decomposition_and_inertia(&u, 2).unwrap();
        assert_eq!(d.order(), 4);
        assert_eq!(i.order(), 4);
        assert_eq!(d.members(), i.members());
    }

    #[test]
    fn decomposition_mod_15_at_5() {
        let u = unit_group(15).unwrap();
        let (d, i) = decomposition_and_inertia(&u, 5).unwrap();
        // e = phi(5) = 4, f = ord of 5 mod 3 = 2
        assert_eq!(i.order(), 4);
        assert_eq!(d.order(), 8);
        for &m in i.members() {
            assert_eq!(u.residue(m) % 3, 1);
        }
        assert!(i.is_subgroup_of(&d));
    }

    #[test]
    fn rejects_composite_p() {
        let u = unit_group(8).unwrap();
        assert_eq!(
            decomposition_and_inertia(&u, 9).unwrap_err(),
            CyclotomicError::NotPrime(9)
        );
    }

    #[test]
    fn frobenius_orders() {
        assert_eq!(frobenius_order(3, 8).unwrap(), 2);
        assert_eq!(frobenius_order(7, 8).unwrap(), 2);
        assert_eq!(frobenius_order(11, 1).unwrap(), 1);
        assert_eq!(
            frobenius_order(3, 6).unwrap_err(),
            CyclotomicError::NotCoprime { p: 3, m: 6 }
        );
    }

    #[test]
    fn decomposition_sizes_against_coset_count() {
        // |D| = phi(p^a) * ord_m(p), and the number of primes above p is
        // phi(n) / |D| = number of double cosets D \ G / {1}.
        let phi_of = crate::arith::euler_phi;
        for n in [8u64, 12, 15, 16, 21, 35, 40] {
            let u = unit_group(n).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13] {
                let (d, i) = decomposition_and_inertia(&u, p).unwrap();
                let (pa, m) = crate::arith::split_prime_power(n, p);
                let e = phi_of(pa);
                let f = frobenius_order(p, m).unwrap();
                assert_eq!(d.order() as u64, e * f, "n={n} p={p}");
                assert_eq!(i.order() as u64, e, "n={n} p={p}");
                assert!(i.is_subgroup_of(&d));
                assert!(i.has_cyclic_quotient_in(&d));

                let trivial = Subgroup::trivial(u.group());
                let cosets = double_cosets(u.group(), &d, &trivial).unwrap();
                assert_eq!(
                    cosets.len() as u64,
                    phi_of(n) / d.order() as u64,
                    "primes above {p} in Q(zeta_{n})"
                );
            }
        }
    }
}
