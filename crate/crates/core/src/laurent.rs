//! Multivariate Laurent polynomials over a finite field.
//!
//! Negative exponents are first-class: Čech cochains on chart intersections
//! live in localizations where the chart coordinates are inverted.  Terms are
//! kept in a sorted map keyed by fixed-width exponent vectors, so iteration
//! order (and hence all serialized output) is deterministic.

use crate::field::{Field, FieldElement};
use crate::ring::Ring;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Hard cap on the number of variables (quintic threefolds need 5).
pub const MAX_VARS: usize = 6;

/// Exponent vector, fixed width; slots past the arity stay zero.
/// Lexicographic `Ord` on the array gives the canonical term order.
pub type Exp = [i32; MAX_VARS];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("arity mismatch: {0} vs {1}")]
    Arity(usize, usize),
}

/// A Laurent polynomial in `arity` variables with nonzero coefficients only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    pub arity: usize,
    pub terms: BTreeMap<Exp, FieldElement>,
}

pub fn exp_from_slice(exps: &[i32]) -> Exp {
    let mut e = [0i32; MAX_VARS];
    e[..exps.len()].copy_from_slice(exps);
    e
}

impl LaurentPoly {
    pub fn zero(arity: usize) -> Self {
        assert!(arity <= MAX_VARS);
        LaurentPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(arity: usize, exps: &[i32], c: FieldElement, field: &Field) -> Self {
        assert_eq!(arity, exps.len());
        let mut poly = LaurentPoly::zero(arity);
        if !field.is_zero(&c) {
            poly.terms.insert(exp_from_slice(exps), c);
        }
        poly
    }

    pub fn constant(arity: usize, c: FieldElement, field: &Field) -> Self {
        let mut poly = LaurentPoly::zero(arity);
        if !field.is_zero(&c) {
            poly.terms.insert([0; MAX_VARS], c);
        }
        poly
    }

    pub fn var(arity: usize, index: usize, field: &Field) -> Self {
        assert!(index < arity);
        let mut exps = [0i32; MAX_VARS];
        exps[index] = 1;
        let mut poly = LaurentPoly::zero(arity);
        poly.terms.insert(exps, field.one());
        poly
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[i32]) -> Result<FieldElement, LaurentError> {
        if exps.len() != self.arity {
            return Err(LaurentError::Arity(self.arity, exps.len()));
        }
        Ok(self
            .terms
            .get(&exp_from_slice(exps))
            .copied()
            .unwrap_or_default())
    }

    pub fn insert_term(&mut self, exps: Exp, c: FieldElement, field: &Field) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = field.add(e.get(), &c);
                if field.is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly, field: &Field) -> LaurentPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(*e, *c, field);
        }
        out
    }

    pub fn neg(&self, field: &Field) -> LaurentPoly {
        LaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (*e, field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly, field: &Field) -> LaurentPoly {
        self.add(&other.neg(field), field)
    }

    pub fn scale(&self, c: &FieldElement, field: &Field) -> LaurentPoly {
        if field.is_zero(c) {
            return LaurentPoly::zero(self.arity);
        }
        LaurentPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e, field.mul(v, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly, field: &Field) -> LaurentPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = LaurentPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut exps = [0i32; MAX_VARS];
                for i in 0..self.arity {
                    exps[i] = ea[i] + eb[i];
                }
                out.insert_term(exps, field.mul(ca, cb), field);
            }
        }
        out
    }

    pub fn pow(&self, e: u64, field: &Field) -> LaurentPoly {
        let mut result = LaurentPoly::constant(self.arity, field.one(), field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, field);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, field);
            }
        }
        result
    }

    /// p-th power, using that raising to the p-th power is additive in
    /// characteristic p: exponent vectors scale by p, coefficients by `x^p`.
    pub fn frobenius(&self, field: &Field) -> LaurentPoly {
        let p = field.p() as i32;
        LaurentPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut exps = [0i32; MAX_VARS];
                    for i in 0..self.arity {
                        exps[i] = e[i] * p;
                    }
                    (exps, field.frobenius(c))
                })
                .collect(),
        }
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize, field: &Field) -> LaurentPoly {
        assert!(index < self.arity);
        let mut out = LaurentPoly::zero(self.arity);
        for (e, c) in &self.terms {
            let k = e[index];
            if k == 0 {
                continue;
            }
            let factor = field.from_int(k as i64);
            let v = field.mul(c, &factor);
            if field.is_zero(&v) {
                continue;
            }
            let mut exps = *e;
            exps[index] = k - 1;
            out.insert_term(exps, v, field);
        }
        out
    }

    /// Smallest exponent appearing in any variable (0 for the zero
    /// polynomial); used to police Čech window bounds.
    pub fn min_exponent(&self) -> i32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .min()
            .unwrap_or(0)
    }

    /// True when every term has the same total degree `deg`.
    pub fn is_homogeneous_of(&self, deg: i32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<i32>() == deg)
    }

    /// Substitutes `x_i -> sum_j m[i][j] x_j` (only valid for polynomials
    /// with non-negative exponents); used by hypersurface normalization.
    pub fn substitute_linear(&self, m: &[Vec<FieldElement>], field: &Field) -> LaurentPoly {
        assert_eq!(m.len(), self.arity);
        let images: Vec<LaurentPoly> = m
            .iter()
            .map(|row| {
                assert_eq!(row.len(), self.arity);
                let mut img = LaurentPoly::zero(self.arity);
                for (j, c) in row.iter().enumerate() {
                    img = img.add(
                        &LaurentPoly::var(self.arity, j, field).scale(c, field),
                        field,
                    );
                }
                img
            })
            .collect();
        let mut out = LaurentPoly::zero(self.arity);
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(self.arity, *c, field);
            for (i, img) in images.iter().enumerate() {
                let k = e[i];
                assert!(k >= 0, "linear substitution requires non-negative exponents");
                if k > 0 {
                    term = term.mul(&img.pow(k as u64, field), field);
                }
            }
            out = out.add(&term, field);
        }
        out
    }

    /// Deterministic rendering with variables `x0..`, for certificates and
    /// digests.
    pub fn render(&self, field: &Field) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push('+');
            }
            let mut factors: Vec<String> = Vec::new();
            let coeff = field.elem_to_string(c);
            let has_vars = e[..self.arity].iter().any(|&k| k != 0);
            if coeff != "1" || !has_vars {
                if field.d() > 1 && coeff.contains('+') {
                    factors.push(format!("({coeff})"));
                } else {
                    factors.push(coeff);
                }
            }
            for (v, &k) in e[..self.arity].iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k == 1 {
                    factors.push(format!("x{v}"));
                } else {
                    factors.push(format!("x{v}^{k}"));
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}
