//! Multivariate polynomials over arbitrary-precision integers.
//!
//! The only client is the Witt layer, which derives structural polynomials
//! from ghost-component identities; everything there must divide exactly, so
//! [`IntPoly::divexact`] treats a non-divisible coefficient as a hard error.

use crate::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntPolyError {
    #[error("arity mismatch: polynomial has {0} variables, argument has {1}")]
    Arity(usize, usize),
    #[error("coefficient {0} not divisible by {1}")]
    NotDivisible(BigInt, BigInt),
}

/// A polynomial in `arity` variables with `BigInt` coefficients, stored as a
/// sorted term map (exponent vector, lexicographic order) for deterministic
/// iteration.  Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub arity: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(arity: usize) -> Self {
        IntPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: BigInt) -> Self {
        let mut poly = IntPoly::zero(arity);
        if !c.is_zero() {
            poly.terms.insert(vec![0; arity], c);
        }
        poly
    }

    /// The variable with the given index.
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity);
        let mut exps = vec![0; arity];
        exps[index] = 1;
        let mut poly = IntPoly::zero(arity);
        poly.terms.insert(exps, BigInt::one());
        poly
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        assert_eq!(exps.len(), self.arity, "arity mismatch");
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = IntPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.arity);
        }
        IntPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut result = IntPoly::constant(self.arity, BigInt::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact division of every coefficient by `m`.
    pub fn divexact(&self, m: &BigInt) -> Result<IntPoly, IntPolyError> {
        assert!(!m.is_zero());
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(m);
            if !r.is_zero() {
                return Err(IntPolyError::NotDivisible(c.clone(), m.clone()));
            }
            terms.insert(e.clone(), q);
        }
        Ok(IntPoly {
            arity: self.arity,
            terms,
        })
    }

    /// Evaluates in any ring via `Z -> R` on coefficients; `args` must have
    /// the polynomial's arity.  Powers of each argument are cached.
    pub fn eval<R: Ring>(&self, ring: &R, args: &[R::Elem]) -> Result<R::Elem, IntPolyError> {
        if args.len() != self.arity {
            return Err(IntPolyError::Arity(self.arity, args.len()));
        }
        let mut pow_cache: Vec<Vec<R::Elem>> = args.iter().map(|a| vec![ring.one(), a.clone()]).collect();
        let mut acc = ring.zero();
        for (exps, c) in &self.terms {
            let mut term = ring.from_bigint(c);
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut pow_cache[v];
                while cache.len() <= e as usize {
                    let next = ring.mul(cache.last().unwrap(), &args[v]);
                    cache.push(next);
                }
                term = ring.mul(&term, &cache[e as usize]);
            }
            acc = ring.add(&acc, &term);
        }
        Ok(acc)
    }
}
