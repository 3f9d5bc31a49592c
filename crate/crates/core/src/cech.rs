//! Čech cohomology of `O_X` and `W_i(O_X)` for Calabi–Yau hypersurfaces
//! `X = {f = 0} ⊂ P^{n+1}` in characteristic p, the Frobenius action on the
//! top cohomology, and the tower of maps whose witnesses determine the
//! height of the associated formal group (the formal Brauer group for K3
//! surfaces, n = 2).
//!
//! # Representation
//!
//! After a linear change of coordinates, f is monic in the last variable
//! `x_{n+1}`.  The point `(0,…,0,1)` then misses X, so the n+1 charts
//! `U_0, …, U_n` (with `x_j` inverted) already cover X, and the Čech
//! complex stops in degree n with a single top component on `U_0 ∩ … ∩ U_n`.
//! Sections are degree-0 Laurent polynomials reduced to a unique normal
//! form with `x_{n+1}`-degree ≤ n+1 by the monic relation.
//!
//! In this normal form the only monomial that is regular on no chart
//! complement is `ζ = x_{n+1}^{n+1}/(x_0⋯x_n)`: a degree-0 monomial with
//! all of `e_0,…,e_n ≤ -1` must have them all equal to -1.  Hence
//! `H^n(O_X) = k·ζ` and the coboundary equation in top degree is solved by
//! pure monomial bookkeeping: a monomial with `e_k ≥ 0` is the coboundary
//! of itself placed (with sign) on the cochain component omitting chart k.
//! The Witt-level equation peels one Witt component at a time, using the
//! honest structural-polynomial arithmetic for the corrections.

use crate::field::{Field, FieldElement};
use crate::laurent::{LaurentPoly, MAX_VARS};
use crate::linalg::Matrix;
use crate::ring::Ring;
use crate::witt::{WittCtx, WittError, WittVector};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CechError {
    #[error("f must be homogeneous of degree equal to its arity (got degree {0}, arity {1})")]
    BadDegree(i32, usize),
    #[error("arity {0} out of range (need 3..=5: curves, surfaces, threefolds)")]
    BadArity(usize),
    #[error("degenerate input: variable x{0} does not occur in f")]
    Degenerate(usize),
    #[error("no coordinate change makes f monic in the last variable over the allowed fields")]
    NoNormalization,
    #[error("exponent window exhausted at level {level} (cap {cap})")]
    WindowExhausted { level: usize, cap: i64 },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("witt arithmetic: {0}")]
    Witt(#[from] WittError),
}

/// A normalized hypersurface with its per-chart normal-form engine.
#[derive(Clone, Debug)]
pub struct HypersurfaceRing {
    pub field: Field,
    /// Dimension of X; the ambient projective space is P^{n+1}.
    pub n: usize,
    /// The normalized equation, monic in the last variable.
    pub f: LaurentPoly,
    /// The equation as given by the caller.
    pub input_f: LaurentPoly,
    /// The substitution `x_j -> x_j + c_j x_{n+1}` applied (None = identity).
    pub substitution: Option<Vec<FieldElement>>,
    /// `x_{n+1}^{n+2} ≡ minus_tail (mod f)`.
    minus_tail: LaurentPoly,
}

/// A cohomology class in top degree at some Witt level, with its exact
/// cocycle representative.
#[derive(Clone, Debug)]
pub struct CohomClass {
    pub degree: usize,
    pub level: usize,
    pub rep: LaurentPoly,
}

/// Outcome of the top-degree coboundary equation.
#[derive(Clone, Debug)]
pub enum SolveResult {
    /// `∂γ = β`; components indexed by the omitted chart.
    Solved {
        gamma: Vec<WittVector<LaurentPoly>>,
        window: i64,
    },
    /// The class is certified nonzero: at Witt depth `depth` the obstruction
    /// functional (the ζ-coefficient) takes a nonzero value.
    Obstructed {
        depth: usize,
        obstruction: FieldElement,
        window: i64,
    },
}

/// Verdict of the height tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Exact { h: usize, witness: String },
    AtLeast { bound: usize },
    Infinite,
}

/// Per-level record: the witness scalar at the terminating level, or the
/// digest of the coboundary corrections at a passed level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub i: usize,
    pub window: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_digest: Option<String>,
}

/// Replayable height certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightCertificate {
    pub p: u64,
    pub d: usize,
    pub f: String,
    pub verdict: Verdict,
    pub levels: Vec<LevelRecord>,
}

/// Evaluates a polynomial (non-negative exponents) at a point.
fn eval_at(f: &LaurentPoly, point: &[FieldElement], field: &Field) -> FieldElement {
    let mut acc = field.zero();
    for (e, c) in &f.terms {
        let mut term = *c;
        for (v, x) in point.iter().enumerate() {
            let k = e[v];
            assert!(k >= 0);
            term = field.mul(&term, &field.pow(x, k as u64));
        }
        acc = field.add(&acc, &term);
    }
    acc
}

/// Re-coefficients a polynomial into an extension field: `F_{p^d}` embeds
/// into `F_{p^{2d}}` by sending the generator to a root of its minimal
/// polynomial, found by scanning.
fn embed_poly(
    f: &LaurentPoly,
    small: &Field,
    big: &Field,
) -> Result<LaurentPoly, CechError> {
    let embed_elem = |root: &FieldElement, c: &FieldElement| -> FieldElement {
        // c = sum c_i t^i with c_i in F_p.
        let mut acc = big.zero();
        for i in (0..small.d()).rev() {
            acc = big.mul(&acc, root);
            acc = big.add(&acc, &big.from_int(c.c[i] as i64));
        }
        acc
    };
    // Root of the small modulus in the big field.
    let modulus = small.modulus_coeffs();
    let root = big
        .elements()
        .find(|r| {
            // Monic: g(r) = r^d + sum_{i<d} m_i r^i.
            let mut acc = big.one();
            for i in (0..small.d()).rev() {
                acc = big.mul(&acc, r);
                acc = big.add(&acc, &big.from_int(modulus[i] as i64));
            }
            big.is_zero(&acc)
        })
        .ok_or(CechError::NoNormalization)?;
    let mut out = LaurentPoly::zero(f.arity);
    for (e, c) in &f.terms {
        out.insert_term(*e, embed_elem(&root, c), big);
    }
    Ok(out)
}

fn normalize(
    f: &LaurentPoly,
    field: &Field,
) -> Option<(LaurentPoly, Option<Vec<FieldElement>>)> {
    let arity = f.arity;
    let last = arity - 1;
    let mut top_exp = [0i32; MAX_VARS];
    top_exp[last] = arity as i32;
    // Identity first.
    if !field.is_zero(&f.coefficient(&top_exp[..arity]).unwrap()) {
        return Some((f.clone(), None));
    }
    // Deterministic scan over substitution vectors (c_0, ..., c_n).
    let elems: Vec<FieldElement> = field.elements().collect();
    let m = arity - 1;
    let mut idx = vec![0usize; m];
    loop {
        let point: Vec<FieldElement> = idx.iter().map(|&i| elems[i]).collect();
        let mut full = point.clone();
        full.push(field.one());
        if !field.is_zero(&eval_at(f, &full, field)) {
            // Build x_j -> x_j + c_j x_{n+1}.
            let mut mat = vec![vec![field.zero(); arity]; arity];
            for (j, row) in mat.iter_mut().enumerate() {
                row[j] = field.one();
            }
            for (j, c) in point.iter().enumerate() {
                mat[j][last] = *c;
            }
            return Some((f.substitute_linear(&mat, field), Some(point)));
        }
        // Advance odometer.
        let mut k = 0;
        loop {
            if k == m {
                return None;
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Builds the normalized hypersurface ring, performing a deterministic
/// search for a monic-in-last-variable coordinate change (extending the
/// base field once, quadratically, if no change exists over F_q).
pub fn make_hypersurface(f: &LaurentPoly, field: &Field) -> Result<HypersurfaceRing, CechError> {
    let arity = f.arity;
    if !(3..=5).contains(&arity) {
        return Err(CechError::BadArity(arity));
    }
    let deg = arity as i32;
    if f.is_zero() || !f.is_homogeneous_of(deg) {
        return Err(CechError::BadDegree(deg, arity));
    }
    if f.min_exponent() < 0 {
        return Err(CechError::BadDegree(deg, arity));
    }
    for v in 0..arity {
        if f.terms.keys().all(|e| e[v] == 0) {
            return Err(CechError::Degenerate(v));
        }
    }
    let (normalized, substitution, work_field, input_f) = match normalize(f, field) {
        Some((g, s)) => (g, s, field.clone(), f.clone()),
        None => {
            // One quadratic extension attempt.
            if 2 * field.d() > 4 {
                return Err(CechError::NoNormalization);
            }
            let big = Field::new(field.p(), 2 * field.d(), None)
                .map_err(|_| CechError::NoNormalization)?;
            let fe = embed_poly(f, field, &big)?;
            let (g, s) = normalize(&fe, &big).ok_or(CechError::NoNormalization)?;
            (g, s, big, fe)
        }
    };
    // Scale monic.
    let mut top_exp = [0i32; MAX_VARS];
    top_exp[arity - 1] = deg;
    let lead = normalized.coefficient(&top_exp[..arity]).unwrap();
    let inv = work_field.inv(&lead).expect("leading coefficient nonzero");
    let monic = normalized.scale(&inv, &work_field);
    // minus_tail = x_{n+1}^{n+2} - f.
    let top = LaurentPoly::monomial(arity, &top_exp[..arity], work_field.one(), &work_field);
    let minus_tail = top.sub(&monic, &work_field);
    Ok(HypersurfaceRing {
        field: work_field,
        n: arity - 2,
        f: monic,
        input_f,
        substitution,
        minus_tail,
    })
}

impl HypersurfaceRing {
    pub fn arity(&self) -> usize {
        self.n + 2
    }

    /// Reduces the last-variable degree below n+2 by the monic relation;
    /// the result is the unique normal form of the section.
    pub fn normal_form(&self, a: &LaurentPoly) -> LaurentPoly {
        let arity = self.arity();
        let last = arity - 1;
        let deg = arity as i32;
        let mut cur = a.clone();
        loop {
            let mut high = LaurentPoly::zero(arity);
            for (e, c) in &cur.terms {
                if e[last] >= deg {
                    high.insert_term(*e, *c, &self.field);
                }
            }
            if high.is_zero() {
                return cur;
            }
            cur = cur.sub(&high, &self.field);
            for (e, c) in &high.terms {
                let mut shifted = *e;
                shifted[last] -= deg;
                let m = LaurentPoly::monomial(arity, &shifted[..arity], *c, &self.field);
                cur = cur.add(&m.mul(&self.minus_tail, &self.field), &self.field);
            }
        }
    }

    /// The exponent vector of the generator ζ.
    pub fn zeta_exp(&self) -> [i32; MAX_VARS] {
        let mut e = [0i32; MAX_VARS];
        for v in 0..=self.n {
            e[v] = -1;
        }
        e[self.n + 1] = self.n as i32 + 1;
        e
    }

    /// The Ring view of the chart coordinate ring (arithmetic is chartwise
    /// identical; regularity constraints are handled by the solver).
    pub fn chart_ring(self: &Arc<Self>) -> ChartRing {
        ChartRing { data: self.clone() }
    }
}

/// The coordinate ring of the chart intersections, as a `Ring` context so
/// Witt-vector structural arithmetic applies verbatim to sections.
#[derive(Clone, Debug)]
pub struct ChartRing {
    data: Arc<HypersurfaceRing>,
}

impl Ring for ChartRing {
    type Elem = LaurentPoly;

    fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero(self.data.arity())
    }

    fn one(&self) -> LaurentPoly {
        LaurentPoly::constant(self.data.arity(), self.data.field.one(), &self.data.field)
    }

    fn add(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        a.add(b, &self.data.field)
    }

    fn neg(&self, a: &LaurentPoly) -> LaurentPoly {
        a.neg(&self.data.field)
    }

    fn mul(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        self.data.normal_form(&a.mul(b, &self.data.field))
    }

    fn from_bigint(&self, n: &BigInt) -> LaurentPoly {
        LaurentPoly::constant(
            self.data.arity(),
            self.data.field.from_bigint(n),
            &self.data.field,
        )
    }

    fn characteristic(&self) -> Option<u64> {
        Some(self.data.field.p())
    }
}

/// The generator class of `H^n(O_X)`, certified nonzero by the coboundary
/// solver.
pub fn hn_o_basis(x: &Arc<HypersurfaceRing>) -> Result<CohomClass, CechError> {
    let e = x.zeta_exp();
    let zeta = LaurentPoly::monomial(x.arity(), &e[..x.arity()], x.field.one(), &x.field);
    let (obstruction, _gamma, _w) = solve_plain(x, &zeta)?;
    if x.field.is_zero(&obstruction) {
        return Err(CechError::Inconsistent(
            "generator projected to zero".to_string(),
        ));
    }
    Ok(CohomClass {
        degree: x.n,
        level: 1,
        rep: zeta,
    })
}

/// Splits a normal-form top section into its ζ-coefficient and a plain
/// coboundary preimage (component k collects the monomials with e_k >= 0,
/// signed).  Exact: the monomial decomposition is forced by the grading.
fn solve_plain(
    x: &HypersurfaceRing,
    beta: &LaurentPoly,
) -> Result<(FieldElement, Vec<LaurentPoly>, i64), CechError> {
    let arity = x.arity();
    let zeta = x.zeta_exp();
    let mut obstruction = x.field.zero();
    let mut gamma = vec![LaurentPoly::zero(arity); x.n + 1];
    let mut window = 0i64;
    for (e, c) in &beta.terms {
        for &v in e[..arity].iter() {
            window = window.max(v.unsigned_abs() as i64);
        }
        if e[..arity] == zeta[..arity] {
            obstruction = x.field.add(&obstruction, c);
            continue;
        }
        let k = (0..=x.n)
            .find(|&k| e[k] >= 0)
            .expect("only the generator monomial avoids every chart");
        let signed = if k % 2 == 0 {
            *c
        } else {
            x.field.neg(c)
        };
        gamma[k].insert_term(*e, signed, &x.field);
    }
    Ok((obstruction, gamma, window))
}

/// Alternating sum of the lower-cochain components, as Witt vectors of
/// common length, restricted to the top intersection.
fn boundary(
    x: &Arc<HypersurfaceRing>,
    gamma: &[WittVector<LaurentPoly>],
) -> Result<WittVector<LaurentPoly>, CechError> {
    let len = gamma[0].len();
    let ring = x.chart_ring();
    let ctx = WittCtx::new(ring, x.field.p(), len)?;
    let mut acc = ctx.zero(len);
    for (k, comp) in gamma.iter().enumerate() {
        let term = if k % 2 == 0 {
            comp.clone()
        } else {
            ctx.neg(comp)?
        };
        acc = ctx.add(&acc, &term)?;
    }
    Ok(acc)
}

/// Solves the Witt-level coboundary equation `∂γ = β` in top degree by
/// component peeling: the leading Witt component is the plain monomial
/// projection; the correction is subtracted with honest structural
/// arithmetic, the vanished component stripped, and the tail recursed.
pub fn coboundary_solve(
    x: &Arc<HypersurfaceRing>,
    beta: &WittVector<LaurentPoly>,
    cap: i64,
) -> Result<SolveResult, CechError> {
    solve_witt(x, beta, cap, 0)
}

fn solve_witt(
    x: &Arc<HypersurfaceRing>,
    beta: &WittVector<LaurentPoly>,
    cap: i64,
    depth: usize,
) -> Result<SolveResult, CechError> {
    let len = beta.len();
    let first = x.normal_form(&beta.comps[0]);
    let (obstruction, gamma0, window) = solve_plain(x, &first)?;
    if window > cap {
        return Err(CechError::WindowExhausted { level: depth + 1, cap });
    }
    if !x.field.is_zero(&obstruction) {
        return Ok(SolveResult::Obstructed {
            depth,
            obstruction,
            window,
        });
    }
    if len == 1 {
        let gamma = gamma0
            .into_iter()
            .map(|g| WittVector::new(vec![g]))
            .collect();
        return Ok(SolveResult::Solved { gamma, window });
    }
    let ring = x.chart_ring();
    let ctx = WittCtx::new(ring.clone(), x.field.p(), len)?;
    // Lift the plain solution to length len (zero tail) and subtract.
    let gamma0_lift: Vec<WittVector<LaurentPoly>> = gamma0
        .iter()
        .map(|g| {
            let mut comps = vec![ring.zero(); len];
            comps[0] = g.clone();
            WittVector::new(comps)
        })
        .collect();
    let bound = boundary(x, &gamma0_lift)?;
    let rest = ctx.sub(beta, &bound)?;
    let head = x.normal_form(&rest.comps[0]);
    if !head.is_zero() {
        return Err(CechError::Inconsistent(
            "leading Witt component did not cancel".to_string(),
        ));
    }
    // rest = V(tail): strip the vanished leading component.
    let tail = WittVector::new(rest.comps[1..].to_vec());
    match solve_witt(x, &tail, cap, depth + 1)? {
        SolveResult::Obstructed {
            depth,
            obstruction,
            window: w2,
        } => Ok(SolveResult::Obstructed {
            depth,
            obstruction,
            window: window.max(w2),
        }),
        SolveResult::Solved { gamma: delta, window: w2 } => {
            let mut gamma = Vec::with_capacity(x.n + 1);
            for (g0, dl) in gamma0_lift.iter().zip(&delta) {
                // γ_k = (γ0_k, 0, …) ⊕ V(δ_k).
                let mut v = vec![ring.zero(); len];
                v[1..].clone_from_slice(&dl.comps);
                let sum = ctx.add(g0, &WittVector::new(v))?;
                gamma.push(sum);
            }
            Ok(SolveResult::Solved {
                gamma,
                window: window.max(w2),
            })
        }
    }
}

/// Componentwise Frobenius of a Witt section (the Witt-vector Frobenius of
/// a characteristic-p ring).
fn witt_frobenius(
    x: &HypersurfaceRing,
    a: &WittVector<LaurentPoly>,
) -> WittVector<LaurentPoly> {
    WittVector::new(
        a.comps
            .iter()
            .map(|g| x.normal_form(&g.frobenius(&x.field)))
            .collect(),
    )
}

/// The scalar a with `F(ζ) = a·ζ` in `H^n(O_X)`; a = 0 exactly when the
/// height exceeds 1.
pub fn frobenius_scalar(x: &Arc<HypersurfaceRing>) -> Result<FieldElement, CechError> {
    let zeta = hn_o_basis(x)?;
    let fz = x.normal_form(&zeta.rep.frobenius(&x.field));
    let (a, _gamma, _w) = solve_plain(x, &fz)?;
    Ok(a)
}

fn digest_gamma(x: &HypersurfaceRing, gamma: &[WittVector<LaurentPoly>]) -> String {
    let mut hasher = Sha256::new();
    for comp in gamma {
        for g in &comp.comps {
            hasher.update(g.render(&x.field).as_bytes());
            hasher.update(b";");
        }
        hasher.update(b"|");
    }
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Default exponent window cap at tower level i: `p^i (n+2)`.
pub fn default_window(x: &HypersurfaceRing, level: usize) -> i64 {
    (x.field.p() as i64).pow(level as u32) * (x.arity() as i64)
}

/// Runs the height tower: level i tests whether Frobenius vanishes on the
/// top cohomology of `W_i(O_X)`; the first nonzero witness scalar pins the
/// height exactly, and passing a level raises the lower bound by one.
/// A K3 surface passing level 10 has infinite height.
pub fn phi_tower(
    x: &Arc<HypersurfaceRing>,
    i_max: usize,
    cap: Option<i64>,
) -> Result<HeightCertificate, CechError> {
    assert!(i_max >= 1);
    if x.n == 2 {
        // Prerequisite for the K3 tower: H^1(O_X) vanishes.
        if !h1_vanishing_check(x, 2)? {
            return Err(CechError::Inconsistent(
                "H^1(O_X) did not vanish in the windowed complex".to_string(),
            ));
        }
    }
    let mut levels = Vec::new();
    let zeta = hn_o_basis(x)?;
    let mut verdict = None;
    for i in 1..=i_max {
        let level_cap = cap.unwrap_or_else(|| default_window(x, i));
        // α = (ζ, 0, …, 0) at level i (top cochains are automatically
        // cocycles, and R^{i-1} α = ζ).
        let ring = x.chart_ring();
        let mut comps = vec![ring.zero(); i];
        comps[0] = zeta.rep.clone();
        let alpha = WittVector::new(comps);
        let falpha = witt_frobenius(x, &alpha);
        let (g, gamma, window) = if i == 1 {
            (falpha.comps[0].clone(), Vec::new(), 0i64)
        } else {
            let beta = WittVector::new(falpha.comps[..i - 1].to_vec());
            let outcome = match solve_witt(x, &beta, level_cap, 0) {
                Err(CechError::WindowExhausted { cap, .. }) => {
                    levels.push(LevelRecord {
                        i,
                        window: cap,
                        witness: None,
                        gamma_digest: None,
                    });
                    verdict = Some(Verdict::AtLeast { bound: i });
                    break;
                }
                other => other?,
            };
            match outcome {
                SolveResult::Obstructed { depth, .. } => {
                    return Err(CechError::Inconsistent(format!(
                        "restricted class obstructed at depth {depth} despite passed levels"
                    )));
                }
                SolveResult::Solved { gamma, window } => {
                    let ctx = WittCtx::new(ring.clone(), x.field.p(), i)?;
                    let gamma_lift: Vec<WittVector<LaurentPoly>> = gamma
                        .iter()
                        .map(|c| {
                            let mut v = c.comps.clone();
                            v.push(ring.zero());
                            WittVector::new(v)
                        })
                        .collect();
                    let t = ctx.sub(&falpha, &boundary(x, &gamma_lift)?)?;
                    for c in &t.comps[..i - 1] {
                        if !x.normal_form(c).is_zero() {
                            return Err(CechError::Inconsistent(
                                "tower difference not concentrated in the last component"
                                    .to_string(),
                            ));
                        }
                    }
                    (t.comps[i - 1].clone(), gamma, window)
                }
            }
        };
        let gnf = x.normal_form(&g);
        let (b, _proj, w2) = solve_plain(x, &gnf)?;
        let window = window.max(w2);
        if window > level_cap {
            levels.push(LevelRecord {
                i,
                window,
                witness: None,
                gamma_digest: None,
            });
            verdict = Some(Verdict::AtLeast { bound: i });
            break;
        }
        if !x.field.is_zero(&b) {
            levels.push(LevelRecord {
                i,
                window,
                witness: Some(x.field.elem_to_string(&b)),
                gamma_digest: None,
            });
            verdict = Some(Verdict::Exact {
                h: i,
                witness: x.field.elem_to_string(&b),
            });
            break;
        }
        levels.push(LevelRecord {
            i,
            window,
            witness: None,
            gamma_digest: Some(digest_gamma(x, &gamma)),
        });
    }
    let verdict = verdict.unwrap_or(if x.n == 2 && i_max >= 10 {
        Verdict::Infinite
    } else {
        Verdict::AtLeast { bound: i_max + 1 }
    });
    Ok(HeightCertificate {
        p: x.field.p(),
        d: x.field.d(),
        f: x.f.render(&x.field),
        verdict,
        levels,
    })
}

/// Replays a certificate by re-running the tower deterministically up to
/// the recorded depth and comparing every field.
pub fn verify_certificate(
    x: &Arc<HypersurfaceRing>,
    cert: &HeightCertificate,
) -> Result<bool, CechError> {
    let depth = cert.levels.last().map(|l| l.i).unwrap_or(1);
    let fresh = phi_tower(x, depth, None)?;
    Ok(fresh.p == cert.p
        && fresh.d == cert.d
        && fresh.f == cert.f
        && fresh.levels == cert.levels
        && match (&fresh.verdict, &cert.verdict) {
            // A replay to the recorded depth cannot distinguish the final
            // at-least bound from a deeper run's verdict beyond that depth.
            (Verdict::Exact { h, witness }, Verdict::Exact { h: h2, witness: w2 }) => {
                h == h2 && witness == w2
            }
            (Verdict::AtLeast { bound }, Verdict::AtLeast { bound: b2 }) => bound == b2,
            (Verdict::AtLeast { bound }, Verdict::Infinite) => *bound == depth + 1,
            (Verdict::Infinite, Verdict::Infinite) => true,
            _ => false,
        })
}

/// The V-filtration representative of the class with coordinates
/// `(c_0, …, c_{k-1})`: `(c_0 ζ, 0, …) ⊕ V(rep(c_1, …))`.
fn filtration_rep(
    x: &Arc<HypersurfaceRing>,
    zeta: &LaurentPoly,
    coords: &[FieldElement],
) -> Result<WittVector<LaurentPoly>, CechError> {
    let ring = x.chart_ring();
    let len = coords.len();
    let mut head_comps = vec![ring.zero(); len];
    head_comps[0] = zeta.scale(&coords[0], &x.field);
    let head = WittVector::new(head_comps);
    if len == 1 {
        return Ok(head);
    }
    let tail = filtration_rep(x, zeta, &coords[1..])?;
    let mut v = vec![ring.zero(); len];
    v[1..].clone_from_slice(&tail.comps);
    let ctx = WittCtx::new(ring, x.field.p(), len)?;
    Ok(ctx.add(&head, &WittVector::new(v))?)
}

/// Dimension of ker F on `H^n(W_i(O_X))`, by enumerating all q^i classes
/// through their V-filtration coordinates and testing `F(class) = 0` with
/// the coboundary solver.
pub fn ker_f_dim_cech(x: &Arc<HypersurfaceRing>, i: usize) -> Result<usize, CechError> {
    assert!(i >= 1);
    let zeta = hn_o_basis(x)?.rep;
    let elems: Vec<FieldElement> = x.field.elements().collect();
    let q = elems.len();
    let cap = default_window(x, i + 1);
    let mut kernel = 0usize;
    let total = q.pow(i as u32);
    for mut idx in 0..total {
        let mut coords = Vec::with_capacity(i);
        for _ in 0..i {
            coords.push(elems[idx % q]);
            idx /= q;
        }
        let rep = filtration_rep(x, &zeta, &coords)?;
        let frep = witt_frobenius(x, &rep);
        match solve_witt(x, &frep, cap, 0)? {
            SolveResult::Solved { .. } => kernel += 1,
            SolveResult::Obstructed { .. } => {}
        }
    }
    let mut dim = 0;
    let mut power = 1usize;
    while power < kernel {
        power *= q;
        dim += 1;
    }
    if power != kernel {
        return Err(CechError::Inconsistent(format!(
            "kernel cardinality {kernel} is not a power of q={q}"
        )));
    }
    Ok(dim)
}

/// Serre's additive map on length-i Witt vectors of Laurent elements over
/// the free algebra:
/// `D_i(a_0,…,a_{i-1}) = Σ_{j ≤ i-2} a_j^{p^{i-1-j}-1} da_j + da_{i-1}`,
/// returned as the coefficient of `dx_v` for each variable v.
pub fn serre_d(w: &WittVector<LaurentPoly>, field: &Field) -> Vec<LaurentPoly> {
    let i = w.len();
    let arity = w.comps[0].arity;
    let p = field.p();
    let mut out = vec![LaurentPoly::zero(arity); arity];
    for (j, a) in w.comps.iter().enumerate() {
        let factor = if j + 1 < i {
            let e = p.pow((i - 1 - j) as u32) - 1;
            Some(a.pow(e, field))
        } else {
            None
        };
        for (v, slot) in out.iter_mut().enumerate() {
            let da = a.derivative(v, field);
            let term = match &factor {
                Some(fp) => fp.mul(&da, field),
                None => da,
            };
            *slot = slot.add(&term, field);
        }
    }
    out
}

/// Windowed check that `H^1(O_X) = 0` for a K3 quartic: within the
/// exponent window, every Čech 1-cocycle is a coboundary of a windowed
/// 0-cochain.
pub fn h1_vanishing_check(x: &Arc<HypersurfaceRing>, window: i32) -> Result<bool, CechError> {
    assert_eq!(x.n, 2, "H^1 check is specific to surfaces");
    let arity = x.arity();
    let field = &x.field;
    // Monomial basis of degree-0 normal forms with e_j >= lo[j].
    let basis_for = |lo: [i32; 3]| -> Vec<[i32; MAX_VARS]> {
        let mut out = Vec::new();
        let hi = window * 2 + 3;
        for e0 in lo[0]..=hi {
            for e1 in lo[1]..=hi {
                for e2 in lo[2]..=hi {
                    let e3 = -(e0 + e1 + e2);
                    if (0..=3).contains(&e3) {
                        let mut e = [0i32; MAX_VARS];
                        e[0] = e0;
                        e[1] = e1;
                        e[2] = e2;
                        e[3] = e3;
                        out.push(e);
                    }
                }
            }
        }
        out
    };
    let lo_for = |inverted: &[usize]| -> [i32; 3] {
        let mut lo = [0i32; 3];
        for &j in inverted {
            lo[j] = -window;
        }
        lo
    };
    // 1-cochain components indexed by chart pairs, in lexicographic order.
    let pairs = [[0usize, 1], [0, 2], [1, 2]];
    let pair_bases: Vec<Vec<[i32; MAX_VARS]>> =
        pairs.iter().map(|pr| basis_for(lo_for(pr))).collect();
    let single_bases: Vec<Vec<[i32; MAX_VARS]>> =
        (0..3).map(|j| basis_for(lo_for(&[j]))).collect();

    // Index the top monomials reachable from either map.
    let mut top_index: BTreeMap<[i32; MAX_VARS], usize> = BTreeMap::new();
    let top_of = |poly: &LaurentPoly, top_index: &mut BTreeMap<[i32; MAX_VARS], usize>| {
        for e in poly.terms.keys() {
            let next = top_index.len();
            top_index.entry(*e).or_insert(next);
        }
    };
    // ∂¹(γ)_{012} = γ_{12} − γ_{02} + γ_{01}; columns are basis monomials.
    let mut d1_cols: Vec<LaurentPoly> = Vec::new();
    for (ci, basis) in pair_bases.iter().enumerate() {
        // Component {0,1} is the one omitting chart 2, etc.
        let omitted = 2 - ci;
        let sign_neg = omitted % 2 == 1;
        for e in basis {
            let mut c = field.one();
            if sign_neg {
                c = field.neg(&c);
            }
            let m = LaurentPoly::monomial(arity, &e[..arity], c, field);
            let nf = x.normal_form(&m);
            top_of(&nf, &mut top_index);
            d1_cols.push(nf);
        }
    }
    // ∂⁰(g)_{jk} = g_k − g_j on component {j,k}: build the composite map
    // 0-cochains -> 1-cochains -> (as columns in the 1-cochain coordinate
    // space).  For the rank comparison we work in the 1-cochain monomial
    // coordinates directly.
    let mut one_index: BTreeMap<(usize, [i32; MAX_VARS]), usize> = BTreeMap::new();
    for (ci, basis) in pair_bases.iter().enumerate() {
        for e in basis {
            let next = one_index.len();
            one_index.entry((ci, *e)).or_insert(next);
        }
    }
    let one_dim = one_index.len();
    let pair_pos = |j: usize, k: usize| -> usize {
        pairs.iter().position(|pr| pr == &[j, k]).unwrap()
    };
    let mut d0_rows: Vec<Vec<(usize, FieldElement)>> = Vec::new();
    for (j, basis) in single_bases.iter().enumerate() {
        for e in basis {
            let mut row = Vec::new();
            for k in 0..3 {
                if k == j {
                    continue;
                }
                let (a, b) = if j < k { (j, k) } else { (k, j) };
                let ci = pair_pos(a, b);
                // (∂g)_{ab} = g_b − g_a; our generator sits at chart j.
                let sign = if j == b { field.one() } else { field.neg(&field.one()) };
                if let Some(&pos) = one_index.get(&(ci, *e)) {
                    row.push((pos, sign));
                }
            }
            d0_rows.push(row);
        }
    }
    // Kernel dimension of ∂¹ within the window = #cols − rank(∂¹).
    let top_dim = top_index.len();
    let mut d1 = Matrix::zero(d1_cols.len(), top_dim);
    for (r, col) in d1_cols.iter().enumerate() {
        for (e, c) in &col.terms {
            d1.set(r, top_index[e], *c);
        }
    }
    let ker_dim = d1_cols.len() - d1.rank(field);
    // Rank of ∂⁰ in 1-cochain coordinates.
    let mut d0 = Matrix::zero(d0_rows.len(), one_dim);
    for (r, row) in d0_rows.iter().enumerate() {
        for (pos, c) in row {
            d0.set(r, *pos, *c);
        }
    }
    let im_dim = d0.rank(field);
    Ok(ker_dim == im_dim)
}
