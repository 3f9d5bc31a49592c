//! Truncated Witt vectors `W_n(A)` over any commutative ring.
//!
//! The ring structure is derived, not postulated: the sum/product/negation
//! structural polynomials are solved over `Z` from the ghost-component
//! identities
//!
//! ```text
//! w_k(X) = X_0^{p^k} + p X_1^{p^{k-1}} + ... + p^k X_k,
//! w_k(S) = w_k(X) + w_k(Y),   w_k(P) = w_k(X) * w_k(Y),
//! ```
//!
//! using exact division by `p^k` at each step.  Over an `F_p`-algebra the
//! polynomials are evaluated in their mod-p reduction, which keeps larger
//! lengths feasible.  The operators are
//!
//! * `F(a_0,...,a_{n-1}) = (a_0^p, ..., a_{n-1}^p)` (characteristic p),
//! * `V(a) = (0, a_0, ..., a_{n-1})` (length n+1),
//! * `R(a_0,...,a_n) = (a_0, ..., a_{n-1})` (length n),
//!
//! satisfying `RVF = FRV = RFV = p` and, over an `F_p`-algebra,
//! `p·(a_0,...,a_{n-1}) = (0, a_0^p, ..., a_{n-2}^p)`.

use crate::intpoly::{IntPoly, IntPolyError};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

/// Hard cap on the generic Witt length; the structural polynomials blow up
/// combinatorially beyond this.
pub const MAX_LENGTH: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WittError {
    #[error("Witt length {0} out of range 1..={MAX_LENGTH}")]
    BadLength(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("operation requires a ring of characteristic {0}")]
    NotCharP(u64),
    #[error("restriction requires length >= 2")]
    RestrictLength,
    #[error("ghost identity failed to divide: {0}")]
    Internal(#[from] IntPolyError),
}

/// A structural polynomial reduced mod p: coefficients in `0..p`.
#[derive(Clone, Debug)]
pub struct ModPoly {
    pub terms: Vec<(Vec<u32>, u64)>,
}

impl ModPoly {
    fn from_intpoly(poly: &IntPoly, p: u64) -> ModPoly {
        let pb = BigInt::from(p);
        let mut terms = Vec::new();
        for (e, c) in &poly.terms {
            let mut r = c.mod_floor(&pb);
            if r.is_negative() {
                r += &pb;
            }
            let r = r.to_u64().expect("residue fits u64");
            if r != 0 {
                terms.push((e.clone(), r));
            }
        }
        ModPoly { terms }
    }

    /// Evaluates over a characteristic-p ring, caching argument powers.
    pub fn eval<R: Ring>(&self, ring: &R, args: &[R::Elem]) -> R::Elem {
        let mut pow_cache: Vec<BTreeMap<u32, R::Elem>> = vec![BTreeMap::new(); args.len()];
        let mut acc = ring.zero();
        for (exps, c) in &self.terms {
            let mut term = ring.from_u64(*c);
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cached = pow_cache[v]
                    .entry(e)
                    .or_insert_with(|| ring.pow(&args[v], e as u64))
                    .clone();
                term = ring.mul(&term, &cached);
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }
}

/// Sum, product and negation polynomials for `W_n` at the prime p, over `Z`
/// and reduced mod p.  Sum/product polynomials live in 2n variables
/// (`X_0..X_{n-1}` then `Y_0..Y_{n-1}`), negation in n.
#[derive(Debug)]
pub struct StructuralPolys {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
    pub neg: Vec<IntPoly>,
    pub sum_modp: Vec<ModPoly>,
    pub prod_modp: Vec<ModPoly>,
    pub neg_modp: Vec<ModPoly>,
}

/// Ghost polynomial `w_k` in the variables `offset..offset+k` of an
/// `arity`-variable polynomial ring.
pub fn ghost_poly(p: u64, k: usize, offset: usize, arity: usize) -> IntPoly {
    let mut acc = IntPoly::zero(arity);
    for i in 0..=k {
        let coeff = BigInt::from(p).pow(i as u32);
        let power = (p as u32).pow((k - i) as u32);
        let term = IntPoly::var(arity, offset + i).pow(power).scale(&coeff);
        acc = acc.add(&term);
    }
    acc
}

fn derive_polys(p: u64, n: usize) -> Result<StructuralPolys, WittError> {
    let arity2 = 2 * n;
    let mut sum: Vec<IntPoly> = Vec::with_capacity(n);
    let mut prod: Vec<IntPoly> = Vec::with_capacity(n);
    let mut neg: Vec<IntPoly> = Vec::with_capacity(n);
    for k in 0..n {
        let wx = ghost_poly(p, k, 0, arity2);
        let wy = ghost_poly(p, k, n, arity2);
        let pk = BigInt::from(p).pow(k as u32);

        // Solve w_k(S) = w_k(X) + w_k(Y) for S_k: subtract the already-known
        // lower components' ghost contributions, then divide by p^k.
        let mut target = wx.add(&wy);
        for (i, s) in sum.iter().enumerate() {
            let pi = BigInt::from(p).pow(i as u32);
            let power = (p as u32).pow((k - i) as u32);
            target = target.sub(&s.pow(power).scale(&pi));
        }
        sum.push(target.divexact(&pk)?);

        let mut target = wx.mul(&wy);
        for (i, q) in prod.iter().enumerate() {
            let pi = BigInt::from(p).pow(i as u32);
            let power = (p as u32).pow((k - i) as u32);
            target = target.sub(&q.pow(power).scale(&pi));
        }
        prod.push(target.divexact(&pk)?);

        let wx1 = ghost_poly(p, k, 0, n);
        let mut target = wx1.neg();
        for (i, m) in neg.iter().enumerate() {
            let pi = BigInt::from(p).pow(i as u32);
            let power = (p as u32).pow((k - i) as u32);
            target = target.sub(&m.pow(power).scale(&pi));
        }
        neg.push(target.divexact(&pk)?);
    }
    let sum_modp = sum.iter().map(|f| ModPoly::from_intpoly(f, p)).collect();
    let prod_modp = prod.iter().map(|f| ModPoly::from_intpoly(f, p)).collect();
    let neg_modp = neg.iter().map(|f| ModPoly::from_intpoly(f, p)).collect();
    Ok(StructuralPolys {
        p,
        n,
        sum,
        prod,
        neg,
        sum_modp,
        prod_modp,
        neg_modp,
    })
}

static POLY_CACHE: Lazy<Mutex<HashMap<(u64, usize), Arc<StructuralPolys>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Structural polynomials for `(p, n)`, derived once and cached.
pub fn structural_polys(p: u64, n: usize) -> Result<Arc<StructuralPolys>, WittError> {
    if n == 0 || n > MAX_LENGTH {
        return Err(WittError::BadLength(n));
    }
    if let Some(hit) = POLY_CACHE.lock().unwrap().get(&(p, n)) {
        return Ok(hit.clone());
    }
    let derived = Arc::new(derive_polys(p, n)?);
    POLY_CACHE
        .lock()
        .unwrap()
        .entry((p, n))
        .or_insert_with(|| derived.clone());
    Ok(derived)
}

/// A Witt vector: a length-n tuple of ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector<E> {
    pub comps: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn new(comps: Vec<E>) -> Self {
        WittVector { comps }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
}

/// Arithmetic context for `W_m(A)` with `m <= n`: the structural polynomials
/// for length n evaluate any shorter vector by zero-padding, since `S_k`,
/// `P_k`, `N_k` only involve components of index ≤ k.
#[derive(Clone)]
pub struct WittCtx<R: Ring> {
    pub ring: R,
    pub n: usize,
    pub polys: Arc<StructuralPolys>,
}

impl<R: Ring> WittCtx<R> {
    pub fn new(ring: R, p: u64, n: usize) -> Result<Self, WittError> {
        if let Some(q) = ring.characteristic() {
            assert_eq!(q, p, "ring characteristic disagrees with requested prime");
        }
        let polys = structural_polys(p, n)?;
        Ok(WittCtx { ring, n, polys })
    }

    pub fn p(&self) -> u64 {
        self.polys.p
    }

    pub fn zero(&self, len: usize) -> WittVector<R::Elem> {
        WittVector::new(vec![self.ring.zero(); len])
    }

    pub fn one(&self, len: usize) -> WittVector<R::Elem> {
        let mut comps = vec![self.ring.zero(); len];
        comps[0] = self.ring.one();
        WittVector::new(comps)
    }

    pub fn is_zero(&self, a: &WittVector<R::Elem>) -> bool {
        a.comps.iter().all(|c| self.ring.is_zero(c))
    }

    fn check_len(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<usize, WittError> {
        if a.len() != b.len() {
            return Err(WittError::LengthMismatch(a.len(), b.len()));
        }
        if a.len() > self.n {
            return Err(WittError::BadLength(a.len()));
        }
        Ok(a.len())
    }

    fn padded_pair(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Vec<R::Elem> {
        let mut args = vec![self.ring.zero(); 2 * self.n];
        args[..a.len()].clone_from_slice(&a.comps);
        args[self.n..self.n + b.len()].clone_from_slice(&b.comps);
        args
    }

    fn eval_binary(
        &self,
        generic: &[IntPoly],
        modp: &[ModPoly],
        a: &WittVector<R::Elem>,
        b: &WittVector<R::Elem>,
    ) -> Result<WittVector<R::Elem>, WittError> {
        let len = self.check_len(a, b)?;
        let args = self.padded_pair(a, b);
        let char_p = self.ring.characteristic() == Some(self.p());
        let mut comps = Vec::with_capacity(len);
        for k in 0..len {
            let v = if char_p {
                modp[k].eval(&self.ring, &args)
            } else {
                generic[k].eval(&self.ring, &args)?
            };
            comps.push(v);
        }
        Ok(WittVector::new(comps))
    }

    pub fn add(
        &self,
        a: &WittVector<R::Elem>,
        b: &WittVector<R::Elem>,
    ) -> Result<WittVector<R::Elem>, WittError> {
        self.eval_binary(&self.polys.sum, &self.polys.sum_modp, a, b)
    }

    pub fn mul(
        &self,
        a: &WittVector<R::Elem>,
        b: &WittVector<R::Elem>,
    ) -> Result<WittVector<R::Elem>, WittError> {
        self.eval_binary(&self.polys.prod, &self.polys.prod_modp, a, b)
    }

    pub fn neg(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        if a.len() > self.n {
            return Err(WittError::BadLength(a.len()));
        }
        let mut args = vec![self.ring.zero(); a.len()];
        args.clone_from_slice(&a.comps);
        args.resize(self.n, self.ring.zero());
        let char_p = self.ring.characteristic() == Some(self.p());
        let mut comps = Vec::with_capacity(a.len());
        for k in 0..a.len() {
            let v = if char_p {
                self.polys.neg_modp[k].eval(&self.ring, &args)
            } else {
                self.polys.neg[k].eval(&self.ring, &args)?
            };
            comps.push(v);
        }
        Ok(WittVector::new(comps))
    }

    pub fn sub(
        &self,
        a: &WittVector<R::Elem>,
        b: &WittVector<R::Elem>,
    ) -> Result<WittVector<R::Elem>, WittError> {
        self.add(a, &self.neg(b)?)
    }

    /// Frobenius: componentwise p-th power (characteristic p only).
    pub fn witt_f(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        if self.ring.characteristic() != Some(self.p()) {
            return Err(WittError::NotCharP(self.p()));
        }
        Ok(WittVector::new(
            a.comps.iter().map(|c| self.ring.pow(c, self.p())).collect(),
        ))
    }

    /// Verschiebung: prepend a zero (length grows by one).
    pub fn witt_v(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let mut comps = Vec::with_capacity(a.len() + 1);
        comps.push(self.ring.zero());
        comps.extend(a.comps.iter().cloned());
        WittVector::new(comps)
    }

    /// Restriction: drop the last component (length shrinks by one).
    pub fn witt_r(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        if a.len() < 2 {
            return Err(WittError::RestrictLength);
        }
        Ok(WittVector::new(a.comps[..a.len() - 1].to_vec()))
    }

    /// Multiplication by p over an `F_p`-algebra:
    /// `(a_0,...,a_{n-1}) -> (0, a_0^p, ..., a_{n-2}^p)`.
    pub fn mul_p(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        if self.ring.characteristic() != Some(self.p()) {
            return Err(WittError::NotCharP(self.p()));
        }
        if a.is_empty() {
            return Ok(a.clone());
        }
        let mut comps = Vec::with_capacity(a.len());
        comps.push(self.ring.zero());
        for c in &a.comps[..a.len() - 1] {
            comps.push(self.ring.pow(c, self.p()));
        }
        Ok(WittVector::new(comps))
    }

    /// Ghost component `w_k(a) = sum p^i a_i^{p^{k-i}}`, evaluated in the
    /// ambient ring; meaningful as a ring homomorphism over torsion-free (or
    /// `Z/p^m`) coefficient rings.
    pub fn ghost(&self, a: &WittVector<R::Elem>, k: usize) -> R::Elem {
        let p = self.p();
        let mut acc = self.ring.zero();
        for i in 0..=k.min(a.len() - 1) {
            let coeff = self.ring.from_bigint(&BigInt::from(p).pow(i as u32));
            let power = p.pow((k - i) as u32);
            let term = self.ring.mul(&coeff, &self.ring.pow(&a.comps[i], power));
            acc = self.ring.add(&acc, &term);
        }
        acc
    }

    /// All ghost components `w_0..w_{len-1}`.
    pub fn ghost_all(&self, a: &WittVector<R::Elem>) -> Vec<R::Elem> {
        (0..a.len()).map(|k| self.ghost(a, k)).collect()
    }
}

/// p-adic valuation data for Witt vectors over a field: the ideal structure
/// of `W_m(F_q)` is `p^v W_m = V^v W_m`, so the valuation of a vector is the
/// index of its first nonzero component (`None` for zero).
pub fn valuation<R: Ring>(ring: &R, a: &WittVector<R::Elem>) -> Option<usize> {
    a.comps.iter().position(|c| !ring.is_zero(c))
}

impl std::fmt::Display for WittVector<crate::field::FieldElement> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{:?}", c.c)?;
        }
        write!(f, ")")
    }
}
