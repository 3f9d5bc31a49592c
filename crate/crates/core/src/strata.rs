//! Deuring's mass formula by brute-force enumeration, and the K3
//! height-stratification bookkeeping: stratum class coefficients,
//! codimensions, dimensions, and the Artin bound predicate.

use crate::field::{Field, FieldElement};
use crate::fgl::hasse_invariant;
use crate::ring::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrataError {
    #[error("p must be a prime >= 5, got {0}")]
    BadPrime(u64),
    #[error("height must be in 1..=11, got {0}")]
    BadHeight(u32),
}

/// Supersingular j-invariants over `F_{p^2}` with automorphism orders and
/// the exact mass `Σ 1/#Aut = (p-1)/24`.
#[derive(Clone, Debug)]
pub struct MassReport {
    pub p: u64,
    pub j_invariants: Vec<FieldElement>,
    pub aut_orders: Vec<u32>,
    pub mass: BigRational,
    /// The field `F_{p^2}` the j-invariants live in.
    pub field: Field,
}

/// The class of the height-`h` stratum closure: `c · v^{h-1}` with
/// `c = (p-1)(p^2-1)⋯(p^{h-1}-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumClass {
    pub p: u64,
    pub h: u32,
    pub coefficient: BigInt,
    pub v_exponent: u32,
    pub note: Option<String>,
}

/// One row of the stratification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRow {
    pub h: u32,
    pub codim: u32,
    pub open_dim: u32,
    pub coefficient: BigInt,
    pub note: Option<String>,
}

fn field_p2(p: u64) -> Result<Field, StrataError> {
    if p < 5 {
        return Err(StrataError::BadPrime(p));
    }
    Field::new(p, 2, None).map_err(|_| StrataError::BadPrime(p))
}

/// A representative curve `y^2 = x^3 + a4 x + a6` with the given
/// j-invariant: j=0 and j=1728 specially, otherwise
/// `a4 = 3j(1728-j)`, `a6 = 2j(1728-j)^2`.
pub fn curve_from_j(j: &FieldElement, field: &Field) -> (FieldElement, FieldElement) {
    if field.is_zero(j) {
        return (field.zero(), field.one());
    }
    let j1728 = field.from_int(1728);
    if *j == j1728 {
        return (field.one(), field.zero());
    }
    let u = field.sub(&j1728, j);
    let a4 = field.mul(&field.from_int(3), &field.mul(j, &u));
    let a6 = field.mul(&field.from_int(2), &field.mul(j, &field.mul(&u, &u)));
    (a4, a6)
}

/// Sorted supersingular j-invariants in `F_{p^2}`, found by testing the
/// Hasse invariant of a representative curve for every candidate j.
pub fn ss_j_list(p: u64) -> Result<(Vec<FieldElement>, Field), StrataError> {
    let field = field_p2(p)?;
    let mut out = Vec::new();
    for j in field.elements() {
        let (a4, a6) = curve_from_j(&j, &field);
        let h = hasse_invariant(a4, a6, &field).expect("representative is nonsingular");
        if field.is_zero(&h) {
            out.push(j);
        }
    }
    out.sort();
    Ok((out, field))
}

/// Automorphism order of a curve with invariant j in characteristic >= 5:
/// 6 at j=0, 4 at j=1728, else 2.
pub fn aut_order(j: &FieldElement, field: &Field) -> Result<u32, StrataError> {
    if field.p() < 5 {
        return Err(StrataError::BadPrime(field.p()));
    }
    if field.is_zero(j) {
        Ok(6)
    } else if *j == field.from_int(1728) {
        Ok(4)
    } else {
        Ok(2)
    }
}

/// Enumerates the supersingular locus and asserts the Deuring mass formula
/// `Σ 1/#Aut = (p-1)/24` exactly.
pub fn deuring_mass(p: u64) -> Result<MassReport, StrataError> {
    let (j_invariants, field) = ss_j_list(p)?;
    let mut aut_orders = Vec::with_capacity(j_invariants.len());
    let mut mass = BigRational::from_integer(BigInt::from(0));
    for j in &j_invariants {
        let a = aut_order(j, &field)?;
        aut_orders.push(a);
        mass += BigRational::new(BigInt::from(1), BigInt::from(a));
    }
    let expected = BigRational::new(BigInt::from(p - 1), BigInt::from(24));
    assert_eq!(mass, expected, "Deuring mass mismatch at p={p}");
    Ok(MassReport {
        p,
        j_invariants,
        aut_orders,
        mass,
        field,
    })
}

/// The class coefficient `Π_{i=1}^{h-1} (p^i - 1)` with the formal
/// v-exponent h-1; h=11 carries the supersingular multiplicity note.
pub fn stratum_class(p: u64, h: u32) -> Result<StratumClass, StrataError> {
    if h == 0 || h > 11 {
        return Err(StrataError::BadHeight(h));
    }
    let mut coefficient = BigInt::from(1);
    let bp = BigInt::from(p);
    let mut power = BigInt::from(1);
    for _ in 1..h {
        power *= &bp;
        coefficient *= &power - BigInt::from(1);
    }
    let note = if h == 11 {
        Some("supersingular locus counted with multiplicity (2 for p != 2)".to_string())
    } else {
        None
    };
    Ok(StratumClass {
        p,
        h,
        coefficient,
        v_exponent: h - 1,
        note,
    })
}

/// The full table: rows `(h, codim h-1, open-stratum dim 20-h, coefficient)`.
pub fn strata_table(p: u64, h_max: u32) -> Result<Vec<StratumRow>, StrataError> {
    (1..=h_max.min(11))
        .map(|h| {
            let class = stratum_class(p, h)?;
            Ok(StratumRow {
                h,
                codim: h - 1,
                open_dim: 20 - h,
                coefficient: class.coefficient,
                note: class.note,
            })
        })
        .collect()
}

/// The Artin bound: a K3 surface of finite height h with Picard number rho
/// satisfies `2h <= B2 - rho`.  A projective K3 always has rho >= 1, so
/// inputs with rho outside 1..=B2 fail the predicate; in particular h = 11
/// is impossible for every admissible rho.
pub fn artin_bound_check(h: u32, rho: u32, b2: u32) -> bool {
    rho >= 1 && rho <= b2 && 2 * h <= b2 - rho
}
