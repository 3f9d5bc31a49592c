//! Prime fields `F_p` and small extensions `F_q = F_p[t]/(g)`.
//!
//! Extension degrees are limited to d ≤ 4 (q ≤ 625 at the primes used here),
//! which is all the desk-scale computations need; an algebraically closed
//! field is approximated by growing d on demand.  Elements are fixed-size
//! coefficient vectors, so they are `Copy` and cheap to move through the
//! polynomial layers above.

use crate::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use std::fmt;
use thiserror::Error;

/// Hard cap on the extension degree.
pub const MAX_DEGREE: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} out of range 1..={MAX_DEGREE}")]
    BadDegree(usize),
    #[error("supplied modulus has wrong degree (expected {0})")]
    ModulusDegree(usize),
    #[error("supplied modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of `F_q`, stored as d coefficients of powers of the generator
/// `t` (low to high); unused slots are zero.  Interpretation requires the
/// owning [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElement {
    pub c: [u64; MAX_DEGREE],
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

impl FieldElement {
    pub fn from_coeffs(coeffs: &[u64]) -> Self {
        let mut c = [0u64; MAX_DEGREE];
        c[..coeffs.len()].copy_from_slice(coeffs);
        FieldElement { c }
    }
}

/// The finite field `F_{p^d}`.  For d > 1 the modulus is a monic irreducible
/// degree-d polynomial over `F_p`, stored by its non-leading coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
    d: usize,
    /// Non-leading coefficients `c_0..c_{d-1}` of the monic modulus
    /// `t^d + c_{d-1} t^{d-1} + ... + c_0`; all zero when d = 1.
    modulus: [u64; MAX_DEGREE],
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

impl Field {
    /// Builds `F_{p^d}`.  When `modulus` is `None` and d > 1, searches monic
    /// degree-d polynomials in order of their base-p coefficient encoding
    /// (constant coefficient least significant) and takes the first
    /// irreducible one; the search is deterministic, e.g. `F_4` always gets
    /// `t^2 + t + 1`.
    pub fn new(p: u64, d: usize, modulus: Option<&[u64]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(FieldError::BadDegree(d));
        }
        if d == 1 {
            return Ok(Field {
                p,
                d,
                modulus: [0; MAX_DEGREE],
            });
        }
        let low = match modulus {
            Some(m) => {
                if m.len() != d {
                    return Err(FieldError::ModulusDegree(d));
                }
                let mut low = [0u64; MAX_DEGREE];
                for (i, &c) in m.iter().enumerate() {
                    low[i] = c % p;
                }
                if !irreducible_monic(p, d, &low) {
                    return Err(FieldError::Reducible(p));
                }
                low
            }
            None => {
                let mut found = None;
                'outer: for code in 0..p.pow(d as u32) {
                    let mut low = [0u64; MAX_DEGREE];
                    let mut rest = code;
                    for slot in low.iter_mut().take(d) {
                        *slot = rest % p;
                        rest /= p;
                    }
                    if irreducible_monic(p, d, &low) {
                        found = Some(low);
                        break 'outer;
                    }
                }
                // A monic irreducible of every degree exists over F_p.
                found.expect("irreducible polynomial search cannot fail")
            }
        };
        Ok(Field { p, d, modulus: low })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.d as u32)
    }

    /// Non-leading coefficients of the modulus (low to high), length d.
    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.modulus[..self.d]
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.p as i64;
        let r = n.rem_euclid(p) as u64;
        FieldElement::from_coeffs(&[r])
    }

    /// The generator `t` (requires d ≥ 2).
    pub fn gen(&self) -> FieldElement {
        assert!(self.d >= 2, "prime field has no extension generator");
        FieldElement::from_coeffs(&[0, 1])
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q() - 2))
    }

    /// `x^p`; the absolute Frobenius.  Iterating d times is the identity.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p)
    }

    /// Inverse of the Frobenius (`x^{p^{d-1}}`).
    pub fn frobenius_inv(&self, a: &FieldElement) -> FieldElement {
        let mut r = *a;
        for _ in 0..self.d - 1 {
            r = self.frobenius(&r);
        }
        r
    }

    /// All q elements, in deterministic base-p order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.q();
        (0..q).map(move |code| {
            let mut c = [0u64; MAX_DEGREE];
            let mut rest = code;
            for slot in c.iter_mut().take(self.d) {
                *slot = rest % self.p;
                rest /= self.p;
            }
            FieldElement { c }
        })
    }

    /// Renders an element as an integer (d = 1) or polynomial in `t`.
    pub fn elem_to_string(&self, a: &FieldElement) -> String {
        if self.d == 1 {
            return a.c[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.c.iter().enumerate().take(self.d) {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}*t"),
                (_, 1) => format!("t^{i}"),
                (_, _) => format!("{c}*t^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// Multiplies two coefficient vectors of length ≤ d and reduces by the monic
/// modulus.
fn mul_reduce(p: u64, d: usize, modulus: &[u64; MAX_DEGREE], a: &[u64], b: &[u64]) -> FieldElement {
    let mut prod = [0u64; 2 * MAX_DEGREE - 1];
    for (i, &ai) in a.iter().enumerate().take(d) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(d) {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // t^k = t^{k-d} * (-(c_{d-1} t^{d-1} + ... + c_0)) for k >= d.
    for k in (d..2 * d - 1).rev() {
        let top = prod[k];
        if top == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &mj) in modulus.iter().enumerate().take(d) {
            let sub = (top * mj) % p;
            prod[k - d + j] = (prod[k - d + j] + p - sub) % p;
        }
    }
    let mut c = [0u64; MAX_DEGREE];
    c[..d].copy_from_slice(&prod[..d]);
    FieldElement { c }
}

/// Irreducibility of a monic degree-d polynomial over `F_p` by exhaustive
/// search: no roots (sufficient for d ≤ 3) and, at d = 4, no monic quadratic
/// factors.  Acceptable at q ≤ 625.
fn irreducible_monic(p: u64, d: usize, low: &[u64; MAX_DEGREE]) -> bool {
    let eval = |x: u64| -> u64 {
        let mut acc = 1u64; // monic leading term
        for i in (0..d).rev() {
            acc = (acc * x + low[i]) % p;
        }
        acc
    };
    for x in 0..p {
        if eval(x) == 0 {
            return false;
        }
    }
    if d == 4 {
        // Trial-divide by every monic quadratic t^2 + b t + a.
        for a in 0..p {
            for b in 0..p {
                // Remainder of t^4 + c3 t^3 + c2 t^2 + c1 t + c0 mod t^2+bt+a,
                // computed by synthetic division.
                let mut rem = [low[0], low[1], low[2], low[3], 1u64];
                for k in (2..=4).rev() {
                    let top = rem[k];
                    if top == 0 {
                        continue;
                    }
                    rem[k] = 0;
                    rem[k - 1] = (rem[k - 1] + p - (top * b) % p) % p;
                    rem[k - 2] = (rem[k - 2] + p - (top * a) % p) % p;
                }
                if rem[0] == 0 && rem[1] == 0 {
                    return false;
                }
            }
        }
    }
    true
}

impl Ring for Field {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement::default()
    }

    fn one(&self) -> FieldElement {
        FieldElement::from_coeffs(&[1])
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut c = [0u64; MAX_DEGREE];
        for i in 0..self.d {
            c[i] = (a.c[i] + b.c[i]) % self.p;
        }
        FieldElement { c }
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut c = [0u64; MAX_DEGREE];
        for i in 0..self.d {
            c[i] = (self.p - a.c[i]) % self.p;
        }
        FieldElement { c }
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        mul_reduce(self.p, self.d, &self.modulus, &a.c, &b.c)
    }

    fn from_bigint(&self, n: &BigInt) -> FieldElement {
        let p = BigInt::from(self.p);
        let mut r = n.mod_floor(&p);
        if r.is_negative() {
            r += &p;
        }
        FieldElement::from_coeffs(&[r.to_u64().expect("reduced residue fits u64")])
    }

    fn characteristic(&self) -> Option<u64> {
        Some(self.p)
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.c.iter().all(|&x| x == 0)
    }
}
