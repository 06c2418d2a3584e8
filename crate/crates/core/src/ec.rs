//! Elliptic-curve point counting over prime fields: an independent
//! empirical check of the one-dimensional case.
//!
//! For a CM elliptic curve the reduction at a good prime `p >= 5` is
//! supersingular exactly when the Frobenius trace `a_p = p + 1 - #E(F_p)`
//! vanishes, which classically happens exactly when `p` is inert or
//! ramified in the CM field. Counting points directly therefore
//! cross-validates the group-theoretic slope computation without sharing
//! any code path with it.

use num_rational::Rational64;
use thiserror::Error;

use crate::arith;
use crate::cm::{enumerate_cm_types, CmField, CmTypeLift};
use crate::cyclotomic::{decomposition_and_inertia, unit_group, UnitGroupModN};
use crate::group::Subgroup;
use crate::newton::{
    classify, newton_polygon, NewtonPolygon, PrimeContext, Reduction, SlopeBlock,
};

/// Largest prime accepted by the naive counter.
pub const MAX_ORACLE_PRIME: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("curve is singular (discriminant zero)")]
    SingularCurve,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("curve has bad reduction at {0}")]
    BadReductionPrime(u64),
    #[error("prime {0} outside the supported range 5..={MAX_ORACLE_PRIME}")]
    PrimeOutOfRange(u64),
    #[error("cm conductor {0} does not describe an imaginary quadratic field")]
    ConductorNotImaginaryQuadratic(u64),
}

/// A short Weierstrass curve `y^2 = x^3 + a x + b` with complex
/// multiplication by the quadratic field inside the `cm_conductor`-th
/// cyclotomic field.
#[derive(Clone, Debug)]
pub struct ShortWeierstrassCurve {
    a: i64,
    b: i64,
    cm_conductor: u64,
    bad_primes: Vec<u64>,
}

impl ShortWeierstrassCurve {
    /// No CM detection is attempted: the conductor is taken on trust.
    pub fn new(a: i64, b: i64, cm_conductor: u64) -> Result<Self, EcError> {
        let disc: i128 = -16 * (4 * (a as i128).pow(3) + 27 * (b as i128).pow(2));
        if disc == 0 {
            return Err(EcError::SingularCurve);
        }
        let mut bad_primes = Vec::new();
        let mut d = disc.unsigned_abs();
        let mut p = 2u128;
        while p * p <= d {
            if d % p == 0 {
                bad_primes.push(p as u64);
                while d % p == 0 {
                    d /= p;
                }
            }
            p += 1;
        }
        if d > 1 {
            bad_primes.push(d as u64);
        }
        Ok(ShortWeierstrassCurve {
            a,
            b,
            cm_conductor,
            bad_primes,
        })
    }

    /// `y^2 = x^3 - x`, CM by the Gaussian field (conductor 4).
    pub fn gaussian() -> Self {
        Self::new(-1, 0, 4).expect("nonsingular")
    }

    /// `y^2 = x^3 + 1`, CM by the Eisenstein field (conductor 3).
    pub fn eisenstein() -> Self {
        Self::new(0, 1, 3).expect("nonsingular")
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn cm_conductor(&self) -> u64 {
        self.cm_conductor
    }

    pub fn bad_primes(&self) -> &[u64] {
        &self.bad_primes
    }

    pub fn has_good_reduction_at(&self, p: u64) -> bool {
        !self.bad_primes.contains(&p)
    }
}

/// The reduction of a curve at a good prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EcReduction {
    pub p: u64,
    pub point_count: u64,
    pub trace: i64,
    pub label: Reduction,
}

/// Counts `#E(F_p)` exactly via the quadratic character: each `x`
/// contributes `1 + chi(x^3 + ax + b)` affine points, plus the point at
/// infinity.
pub fn count_points(curve: &ShortWeierstrassCurve, p: u64) -> Result<EcReduction, EcError> {
    if !(5..=MAX_ORACLE_PRIME).contains(&p) {
        return Err(EcError::PrimeOutOfRange(p));
    }
    if !arith::is_prime(p) {
        return Err(EcError::NotPrime(p));
    }
    if !curve.has_good_reduction_at(p) {
        return Err(EcError::BadReductionPrime(p));
    }
    let mut is_square = vec![false; p as usize];
    for x in 0..p {
        is_square[(x * x % p) as usize] = true;
    }
    let a = (curve.a as i128).rem_euclid(p as i128) as u64;
    let b = (curve.b as i128).rem_euclid(p as i128) as u64;
    let mut count = 1u64; // infinity
    for x in 0..p {
        let fx = ((x as u128 * x as u128 % p as u128) * x as u128
            + a as u128 * x as u128
            + b as u128)
            % p as u128;
        if fx == 0 {
            count += 1;
        } else if is_square[fx as usize] {
            count += 2;
        }
    }
    let trace = p as i64 + 1 - count as i64;
    assert!(
        (trace as i128) * (trace as i128) <= 4 * p as i128,
        "Hasse bound violated at p = {p}"
    );
    let label = if trace == 0 {
        Reduction::Supersingular
    } else {
        Reduction::Ordinary
    };
    Ok(EcReduction {
        p,
        point_count: count,
        trace,
        label,
    })
}

/// Newton polygon of the Frobenius quadratic `T^2 - a_p T + p`: slopes
/// `{0, 1}` when `p` does not divide `a_p`, otherwise `{1/2, 1/2}`.
pub fn newton_from_trace(red: &EcReduction) -> NewtonPolygon {
    let supersingular = red.trace == 0 || red.trace.unsigned_abs() % red.p == 0;
    let blocks = if supersingular {
        vec![SlopeBlock {
            slope: Rational64::new(1, 2),
            multiplicity: 2,
            coset: None,
        }]
    } else {
        vec![
            SlopeBlock {
                slope: Rational64::from_integer(0),
                multiplicity: 1,
                coset: None,
            },
            SlopeBlock {
                slope: Rational64::from_integer(1),
                multiplicity: 1,
                coset: None,
            },
        ]
    };
    NewtonPolygon::from_blocks(blocks)
}

/// One disagreement between prediction and point count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub p: u64,
    pub predicted: Reduction,
    pub observed: Reduction,
}

/// Outcome of comparing the group-theoretic classification with point
/// counts over all good primes up to a bound.
#[derive(Clone, Debug)]
pub struct AgreementReport {
    pub bound: u64,
    pub checked: usize,
    pub supersingular: usize,
    pub ordinary: usize,
    pub mismatches: Vec<Mismatch>,
}

fn g1_field(units: &UnitGroupModN) -> CmField {
    let h = Subgroup::trivial(units.group());
    CmField::new(units.group(), h, units.conjugation())
        .expect("-1 is a central involution outside the trivial subgroup")
}

/// Compares, for every good prime `5 <= p <= bound`, the supersingularity
/// label predicted by the slope formula (through the cyclotomic model of
/// the CM field) against the exact point count.
pub fn deuring_agreement(
    curve: &ShortWeierstrassCurve,
    bound: u64,
) -> Result<AgreementReport, EcError> {
    if bound > MAX_ORACLE_PRIME {
        return Err(EcError::PrimeOutOfRange(bound));
    }
    let n = curve.cm_conductor;
    if arith::euler_phi(n) != 2 || n < 3 {
        return Err(EcError::ConductorNotImaginaryQuadratic(n));
    }
    let units = unit_group(n).expect("n in {3, 4, 6}");
    let field = g1_field(&units);
    let cm_type: CmTypeLift = enumerate_cm_types(&field)
        .expect("g = 1")
        .into_iter()
        .next()
        .expect("two types exist");

    let mut report = AgreementReport {
        bound,
        checked: 0,
        supersingular: 0,
        ordinary: 0,
        mismatches: Vec::new(),
    };
    for p in arith::primes_up_to(bound) {
        if p < 5 || !curve.has_good_reduction_at(p) {
            continue;
        }
        let observed = count_points(curve, p)?;
        let (d, i) = decomposition_and_inertia(&units, p).expect("p is prime");
        let pc = PrimeContext::new(&field, d, Some(i)).expect("abelian context");
        let predicted = classify(&newton_polygon(&cm_type, &pc).expect("same field"));
        report.checked += 1;
        match observed.label {
            Reduction::Supersingular => report.supersingular += 1,
            _ => report.ordinary += 1,
        }
        if predicted != observed.label {
            report.mismatches.push(Mismatch {
                p,
                predicted,
                observed: observed.label,
            });
        }
    }
    Ok(report)
}
