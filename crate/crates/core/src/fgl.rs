//! One-dimensional commutative formal group laws over `F_q` and height
//! detection from the multiplication-by-p series.
//!
//! The height of a formal group law `F` is the integer h with
//! `[p](t) = a t^{p^h} + higher terms`, `a != 0` (∞ when `[p] = 0`).  Besides
//! validation and the height scan, the module provides two fixture families:
//!
//! * Lubin–Tate laws of prescribed height, built from the explicit logarithm
//!   `l(t) = sum_i t^{p^{hi}} / p^i` over exact rationals and reduced mod p
//!   (the coefficients of `l^{-1}(l(x)+l(y))` are p-integral, so the
//!   reduction is exact);
//! * formal groups of elliptic curves `y^2 = x^3 + a4 x + a6` in the
//!   parameter `t = -x/y`, for characteristic ≥ 5, together with the
//!   classical Hasse invariant as an independent supersingularity oracle.

use crate::field::{Field, FieldElement};
use crate::ring::{RatRing, Ring};
use crate::series::{compose_bi, BiSeries, InnerSlot, TriSeries, UniSeries};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FglError {
    #[error("truncation order {0} too small (need at least {1})")]
    TruncationTooSmall(usize, usize),
    #[error("[p](t) has leading term at degree {0}, which is not a power of p")]
    NotPPower(usize),
    #[error("curve is singular (discriminant zero)")]
    SingularCurve,
    #[error("elliptic expansion requires characteristic >= 5, got {0}")]
    SmallCharacteristic(u64),
    #[error("Lubin-Tate coefficient has denominator divisible by p (internal bug)")]
    NotPIntegral,
}

/// A formal group law: a truncated bivariate series over `F_q`.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    pub field: Field,
    pub series: BiSeries<Field>,
}

impl FormalGroupLaw {
    pub fn trunc(&self) -> usize {
        self.series.n
    }
}

/// Result of validating the formal-group-law axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FglCheckReport {
    pub identity_ok: bool,
    pub commutative_ok: bool,
    pub associative_ok: bool,
    /// Monomial of the first violation, rendered, if any.
    pub first_violation: Option<String>,
}

impl FglCheckReport {
    pub fn valid(&self) -> bool {
        self.identity_ok && self.commutative_ok && self.associative_ok
    }
}

/// Verdict of the height scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightKind {
    Exact { h: u32, leading: FieldElement },
    AtLeast { bound: u32 },
    InfiniteWithinTruncation,
}

/// Height verdict together with a prefix of `[p](t)` for inspection.
#[derive(Clone, Debug)]
pub struct HeightReport {
    pub kind: HeightKind,
    pub p_series_prefix: Vec<FieldElement>,
}

/// Validates the axioms `F(x,0) = x`, `F(0,y) = y`, commutativity, and
/// associativity modulo total degree N.
pub fn fgl_check(fgl: &FormalGroupLaw) -> FglCheckReport {
    let field = &fgl.field;
    let f = &fgl.series;
    let n = f.n;
    let mut first_violation = None;

    let mut identity_ok = true;
    for i in 0..=n {
        let expect_x = if i == 1 { field.one() } else { field.zero() };
        if *f.coeff(i, 0) != expect_x {
            identity_ok = false;
            first_violation.get_or_insert(format!("x^{i}*y^0"));
        }
        if *f.coeff(0, i) != expect_x {
            identity_ok = false;
            first_violation.get_or_insert(format!("x^0*y^{i}"));
        }
    }

    let mut commutative_ok = true;
    'comm: for (i, j, v) in f.iter_terms() {
        if v != f.coeff(j, i) {
            commutative_ok = false;
            first_violation.get_or_insert(format!("x^{i}*y^{j}"));
            break 'comm;
        }
    }

    let lhs: TriSeries<Field> = compose_bi(f, f, InnerSlot::First, field);
    let rhs: TriSeries<Field> = compose_bi(f, f, InnerSlot::Second, field);
    let diff = lhs.sub(&rhs, field);
    let associative_ok = match diff.first_nonzero(field) {
        None => true,
        Some((i, j, k)) => {
            first_violation.get_or_insert(format!("x^{i}*y^{j}*z^{k}"));
            false
        }
    };

    FglCheckReport {
        identity_ok,
        commutative_ok,
        associative_ok,
        first_violation,
    }
}

/// `[m](t)`: `[1](t) = t`, `[m](t) = F([m-1](t), t)`.
pub fn mult_by(m: u64, fgl: &FormalGroupLaw) -> UniSeries<Field> {
    let field = &fgl.field;
    let n = fgl.trunc();
    let t = UniSeries::t(field, n);
    let mut acc = t.clone();
    for _ in 1..m {
        acc = fgl.series.eval_uni(&acc, &t, field);
    }
    acc
}

/// Scans `[p](t)` for the height.  Requires `N >= p^hmax + 1` for an exact
/// verdict up to `hmax`.
pub fn height_of(fgl: &FormalGroupLaw, hmax: u32) -> Result<HeightReport, FglError> {
    let field = &fgl.field;
    let p = field.p();
    let n = fgl.trunc();
    let needed = (p as usize).pow(hmax) + 1;
    if n < needed {
        return Err(FglError::TruncationTooSmall(n, needed));
    }
    let ps = mult_by(p, fgl);
    let prefix: Vec<FieldElement> = ps.c.iter().take(20).copied().collect();
    let first = (1..=n).find(|&k| !field.is_zero(&ps.c[k]));
    match first {
        None => Ok(HeightReport {
            kind: HeightKind::InfiniteWithinTruncation,
            p_series_prefix: prefix,
        }),
        Some(k) => {
            // k must be p^h for some h.
            let mut h = 0u32;
            let mut v = 1usize;
            while v < k {
                v *= p as usize;
                h += 1;
            }
            if v != k {
                return Err(FglError::NotPPower(k));
            }
            Ok(HeightReport {
                kind: HeightKind::Exact {
                    h,
                    leading: ps.c[k],
                },
                p_series_prefix: prefix,
            })
        }
    }
}

/// p-adic valuation of a rational (0 for zero numerators is irrelevant here).
fn rational_mod_p(v: &BigRational, field: &Field) -> Result<FieldElement, FglError> {
    let p = BigInt::from(field.p());
    let denom = v.denom();
    if denom.mod_floor(&p).is_zero() {
        return Err(FglError::NotPIntegral);
    }
    let num = field.from_bigint(v.numer());
    let den = field.from_bigint(denom);
    let den_inv = field.inv(&den).expect("denominator is a unit mod p");
    Ok(field.mul(&num, &den_inv))
}

/// The Lubin–Tate formal group law of height h over `F_p`, truncated at
/// total degree N; satisfies `[p](t) = t^{p^h}` exactly mod p.
pub fn lubin_tate(p: u64, h: u32, n_trunc: usize) -> Result<FormalGroupLaw, FglError> {
    let needed = (p as usize).pow(h) + 1;
    if n_trunc < needed {
        return Err(FglError::TruncationTooSmall(n_trunc, needed));
    }
    let ring = RatRing;
    let field = Field::new(p, 1, None).expect("p validated by caller");

    // Logarithm l(t) = sum_{i >= 0} t^{p^{hi}} / p^i (sparse).
    let mut log = UniSeries::zero(&ring, n_trunc);
    let mut exp = 1usize;
    let mut denom = BigInt::one();
    while exp <= n_trunc {
        log.set(exp, BigRational::new(BigInt::one(), denom.clone()));
        // Next exponent p^h times larger, next denominator p times larger.
        match exp.checked_mul((p as usize).pow(h)) {
            Some(next) if next <= n_trunc => {
                exp = next;
                denom *= BigInt::from(p);
            }
            _ => break,
        }
    }

    // Compositional inverse by fixed-point iteration
    // g = t - sum_{i >= 1} g^{p^{hi}} / p^i; each pass extends the correct
    // prefix by p^h - 1 degrees.
    let mut g = UniSeries::t(&ring, n_trunc);
    loop {
        let mut next = UniSeries::t(&ring, n_trunc);
        let mut e = (p as usize).pow(h);
        let mut d = BigInt::from(p);
        while e <= n_trunc {
            let term = g.pow(e as u64, &ring).scale(
                &BigRational::new(BigInt::from(-1), d.clone()),
                &ring,
            );
            next = next.add(&term, &ring);
            match e.checked_mul((p as usize).pow(h)) {
                Some(ne) if ne <= n_trunc => {
                    e = ne;
                    d *= BigInt::from(p);
                }
                _ => break,
            }
        }
        if next == g {
            break;
        }
        g = next;
    }

    // w = l(x) + l(y) as a (sparse) bivariate series; F = g(w) by Horner.
    let mut w = BiSeries::zero(&ring, n_trunc);
    for (k, c) in log.c.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        w.add_at(k, 0, c, &ring);
        w.add_at(0, k, c, &ring);
    }
    let mut acc = BiSeries::zero(&ring, n_trunc);
    for k in (1..=n_trunc).rev() {
        acc = acc.mul(&w, &ring);
        acc.add_at(0, 0, g.coeff(k), &ring);
    }
    acc = acc.mul(&w, &ring);

    // Reduce mod p; every coefficient is p-integral.
    let mut series = BiSeries::zero(&field, n_trunc);
    for (i, j, v) in acc.iter_terms() {
        if v.is_zero() {
            continue;
        }
        series.set(i, j, rational_mod_p(v, &field)?);
    }
    Ok(FormalGroupLaw { field, series })
}

/// `[p](t)` of the Lubin–Tate law computed by the independent route
/// `g(p * l(t))` over the rationals, reduced mod p.  Used as a test oracle.
pub fn lubin_tate_p_series_oracle(
    p: u64,
    h: u32,
    n_trunc: usize,
) -> Result<UniSeries<Field>, FglError> {
    let ring = RatRing;
    let field = Field::new(p, 1, None).expect("prime");
    let mut log = UniSeries::zero(&ring, n_trunc);
    let mut exp = 1usize;
    let mut denom = BigInt::one();
    while exp <= n_trunc {
        log.set(exp, BigRational::new(BigInt::one(), denom.clone()));
        match exp.checked_mul((p as usize).pow(h)) {
            Some(next) if next <= n_trunc => {
                exp = next;
                denom *= BigInt::from(p);
            }
            _ => break,
        }
    }
    let mut g = UniSeries::t(&ring, n_trunc);
    loop {
        let mut next = UniSeries::t(&ring, n_trunc);
        let mut e = (p as usize).pow(h);
        let mut d = BigInt::from(p);
        while e <= n_trunc {
            let term = g
                .pow(e as u64, &ring)
                .scale(&BigRational::new(BigInt::from(-1), d.clone()), &ring);
            next = next.add(&term, &ring);
            match e.checked_mul((p as usize).pow(h)) {
                Some(ne) if ne <= n_trunc => {
                    e = ne;
                    d *= BigInt::from(p);
                }
                _ => break,
            }
        }
        if next == g {
            break;
        }
        g = next;
    }
    let p_log = log.scale(&BigRational::from_integer(BigInt::from(p)), &ring);
    let series = g.compose(&p_log, &ring);
    let mut out = UniSeries::zero(&field, n_trunc);
    for (k, v) in series.c.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        out.set(k, rational_mod_p(v, &field)?);
    }
    Ok(out)
}

/// The formal group of `y^2 = x^3 + a4 x + a6` in the parameter `t = -x/y`,
/// truncated at total degree N.  Characteristic ≥ 5 only.
pub fn ec_fgl(
    a4: FieldElement,
    a6: FieldElement,
    n_trunc: usize,
    field: &Field,
) -> Result<FormalGroupLaw, FglError> {
    let p = field.p();
    if p < 5 {
        return Err(FglError::SmallCharacteristic(p));
    }
    // Discriminant condition 4 a4^3 + 27 a6^2 != 0.
    let disc = field.add(
        &field.mul(&field.from_int(4), &field.pow(&a4, 3)),
        &field.mul(&field.from_int(27), &field.pow(&a6, 2)),
    );
    if field.is_zero(&disc) {
        return Err(FglError::SingularCurve);
    }

    // In coordinates t = -x/y, w = -1/y the curve reads
    //   w = t^3 + a4 t w^2 + a6 w^3,
    // solved by fixed-point iteration from w = t^3 (order of contact grows
    // each pass).  Carried a few degrees past N so the slope series below is
    // full precision.
    let wn = n_trunc + 3;
    let mut w = UniSeries::zero(field, wn);
    w.set(3, field.one());
    loop {
        let w2 = w.mul(&w, field);
        let w3 = w2.mul(&w, field);
        let mut next = UniSeries::zero(field, wn);
        next.set(3, field.one());
        let mut tw2 = UniSeries::zero(field, wn);
        for k in 0..wn {
            tw2.set(k + 1, *w2.coeff(k));
        }
        next = next.add(&tw2.scale(&a4, field), field);
        next = next.add(&w3.scale(&a6, field), field);
        if next == w {
            break;
        }
        w = next;
    }

    // Chord slope lambda(t1,t2) = (w(t1) - w(t2)) / (t1 - t2)
    //                           = sum_k c_k sum_{a+b=k-1} t1^a t2^b.
    let mut lambda = BiSeries::zero(field, n_trunc);
    for (k, ck) in w.c.iter().enumerate() {
        if field.is_zero(ck) || k == 0 {
            continue;
        }
        for a in 0..k {
            let b = k - 1 - a;
            if a + b <= n_trunc {
                lambda.add_at(a, b, ck, field);
            }
        }
    }
    // nu = w(t1) - lambda * t1.
    let mut w_t1 = BiSeries::zero(field, n_trunc);
    for (k, ck) in w.c.iter().enumerate() {
        if k <= n_trunc && !field.is_zero(ck) {
            w_t1.set(k, 0, *ck);
        }
    }
    let mut lambda_t1 = BiSeries::zero(field, n_trunc);
    for (i, j, v) in lambda.iter_terms() {
        if i + 1 + j <= n_trunc && !field.is_zero(v) {
            lambda_t1.add_at(i + 1, j, v, field);
        }
    }
    let nu = w_t1.sub(&lambda_t1, field);

    // The line w = lambda t + nu meets the cubic where
    //   (1 + a4 l^2 + a6 l^3) t^3 + (2 a4 l nu + 3 a6 l^2 nu) t^2 + ... = 0,
    // so the three parameters sum to -c2/c3 and
    //   F(t1,t2) = t1 + t2 + c2/c3   (inversion is t -> -t).
    let l2 = lambda.mul(&lambda, field);
    let l3 = l2.mul(&lambda, field);
    let mut c3 = l2.scale(&a4, field).add(&l3.scale(&a6, field), field);
    c3.add_at(0, 0, &field.one(), field);
    let c2 = lambda
        .mul(&nu, field)
        .scale(&field.mul(&field.from_int(2), &a4), field)
        .add(
            &l2.mul(&nu, field)
                .scale(&field.mul(&field.from_int(3), &a6), field),
            field,
        );
    let c3_inv = c3.inverse(&field.one(), field);
    let mut series = c2.mul(&c3_inv, field);
    series.add_at(1, 0, &field.one(), field);
    series.add_at(0, 1, &field.one(), field);
    Ok(FormalGroupLaw {
        field: field.clone(),
        series,
    })
}

/// Multinomial coefficient `m! / (i! k! l!)` mod p for `m < p`, from a
/// precomputed factorial table.
fn multinomial_mod_p(
    fact: &[FieldElement],
    m: u64,
    i: u64,
    k: u64,
    l: u64,
    field: &Field,
) -> FieldElement {
    debug_assert_eq!(i + k + l, m);
    let den = field.mul(
        &field.mul(&fact[i as usize], &fact[k as usize]),
        &fact[l as usize],
    );
    field.mul(
        &fact[m as usize],
        &field.inv(&den).expect("m < p keeps factorials units"),
    )
}

/// The Hasse invariant: the coefficient of `x^{p-1}` in
/// `(x^3 + a4 x + a6)^{(p-1)/2}`; vanishes exactly for supersingular curves.
/// Computed by the closed multinomial sum (the constraint 3i + k = p-1 with
/// i + k + l = (p-1)/2 leaves ~p/12 terms), exact over `F_q`.
pub fn hasse_invariant(
    a4: FieldElement,
    a6: FieldElement,
    field: &Field,
) -> Result<FieldElement, FglError> {
    let p = field.p();
    if p < 5 {
        return Err(FglError::SmallCharacteristic(p));
    }
    let disc = field.add(
        &field.mul(&field.from_int(4), &field.pow(&a4, 3)),
        &field.mul(&field.from_int(27), &field.pow(&a6, 2)),
    );
    if field.is_zero(&disc) {
        return Err(FglError::SingularCurve);
    }
    let m = (p - 1) / 2;
    let mut fact = Vec::with_capacity(m as usize + 1);
    fact.push(field.one());
    for v in 1..=m {
        let prev = fact[v as usize - 1];
        fact.push(field.mul(&prev, &field.from_int(v as i64)));
    }
    let mut acc = field.zero();
    // Choose i cubes, k linear terms, l constants: 3i + k = p - 1.
    for i in 0..=m {
        if 3 * i > p - 1 {
            break;
        }
        let k = p - 1 - 3 * i;
        if i + k > m {
            continue;
        }
        let l = m - i - k;
        let c = multinomial_mod_p(&fact, m, i, k, l, field);
        let term = field.mul(
            &c,
            &field.mul(&field.pow(&a4, k), &field.pow(&a6, l)),
        );
        acc = field.add(&acc, &term);
    }
    Ok(acc)
}
