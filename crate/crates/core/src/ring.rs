//! Commutative ring contexts.
//!
//! All algebraic structures in this crate follow the "context object" pattern:
//! a [`Ring`] value carries the structure (modulus, field data, truncation),
//! and its associated `Elem` type is plain data.  This keeps elements cheap
//! and lets the same generic code run over finite fields, `Z/m`, big
//! rationals, and the Čech chart rings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// A commutative ring with identity, presented as a context object.
pub trait Ring: Clone {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Image of an arbitrary-precision integer under `Z -> R`.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// `Some(p)` when the ring is an `F_p`-algebra of prime characteristic p.
    fn characteristic(&self) -> Option<u64>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// Binary exponentiation; `a^0 = 1`.
    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
}

/// The ring `Z/m` with arbitrary-precision modulus; elements are reduced
/// representatives in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZmodRing {
    pub m: BigInt,
}

impl ZmodRing {
    pub fn new(m: BigInt) -> Self {
        assert!(m > BigInt::one(), "modulus must exceed 1");
        ZmodRing { m }
    }

    fn reduce(&self, n: &BigInt) -> BigInt {
        let r = n % &self.m;
        if r.is_negative() {
            r + &self.m
        } else {
            r
        }
    }
}

impl Ring for ZmodRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(&(-a))
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        self.reduce(n)
    }
    fn characteristic(&self) -> Option<u64> {
        None
    }
}

/// Exact rational numbers; used by the Lubin–Tate construction, whose
/// intermediate coefficients live in `Z` localized at p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatRing;

impl Ring for RatRing {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> Option<u64> {
        None
    }
}
