//! An explicit model of the Dieudonné module of a one-dimensional formal
//! group of height h, and its V-adic truncations.
//!
//! The module is free of rank h over `W_m(F_q)` with basis `e_0, …, e_{h-1}`
//! realizing `e_j = V^j e_0`, and actions
//!
//! ```text
//! F e_0 = e_{h-1},   F e_j = p e_{j-1}  (j >= 1)      (σ-linear)
//! V e_j = e_{j+1}  (j < h-1),   V e_{h-1} = p e_0     (σ⁻¹-linear)
//! ```
//!
//! Both operators permute the basis coordinates up to a factor of p, so all
//! dimension computations reduce to exact valuation bookkeeping in
//! `W_m(F_q)`: the submodule `p^c W_m` consists precisely of the vectors
//! whose first c components vanish, and `W_m / p^c W_m ≅ W_c` by dropping
//! the tail.  This module is the trusted oracle the Čech engine is
//! validated against.

use crate::field::{Field, FieldElement};
use crate::ring::Ring;
use crate::witt::{valuation, WittCtx, WittError, WittVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DieudonneError {
    #[error("height must be in 1..=10, got {0}")]
    BadHeight(usize),
    #[error("Witt length must be at least 1, got {0}")]
    BadLength(usize),
    #[error("truncation level {level} is not representable at Witt length {m}")]
    LevelTooDeep { level: usize, m: usize },
    #[error("witt arithmetic: {0}")]
    Witt(#[from] WittError),
}

/// The truncated Witt ring `W_m(F_q)` together with its Frobenius σ
/// (componentwise p-th power; an automorphism because `F_q` is perfect).
#[derive(Clone, Debug)]
pub struct TruncWittRing {
    pub field: Field,
    pub m: usize,
}

impl TruncWittRing {
    pub fn new(field: Field, m: usize) -> Result<Self, DieudonneError> {
        if m == 0 {
            return Err(DieudonneError::BadLength(m));
        }
        Ok(TruncWittRing { field, m })
    }

    pub fn zero(&self) -> WittVector<FieldElement> {
        WittVector::new(vec![self.field.zero(); self.m])
    }

    pub fn one(&self) -> WittVector<FieldElement> {
        let mut c = vec![self.field.zero(); self.m];
        c[0] = self.field.one();
        WittVector::new(c)
    }

    pub fn is_zero(&self, a: &WittVector<FieldElement>) -> bool {
        a.comps.iter().all(|x| self.field.is_zero(x))
    }

    /// σ: componentwise Frobenius.
    pub fn sigma(&self, a: &WittVector<FieldElement>) -> WittVector<FieldElement> {
        WittVector::new(a.comps.iter().map(|x| self.field.frobenius(x)).collect())
    }

    /// σ⁻¹: componentwise inverse Frobenius.
    pub fn sigma_inv(&self, a: &WittVector<FieldElement>) -> WittVector<FieldElement> {
        WittVector::new(
            a.comps
                .iter()
                .map(|x| self.field.frobenius_inv(x))
                .collect(),
        )
    }

    /// Multiplication by p: `(0, a_0^p, …, a_{m-2}^p)`.
    pub fn mul_p(&self, a: &WittVector<FieldElement>) -> WittVector<FieldElement> {
        let mut c = Vec::with_capacity(self.m);
        c.push(self.field.zero());
        for x in &a.comps[..self.m - 1] {
            c.push(self.field.frobenius(x));
        }
        WittVector::new(c)
    }

    /// p-adic valuation: index of the first nonzero component (None = 0).
    pub fn valuation(&self, a: &WittVector<FieldElement>) -> Option<usize> {
        valuation(&self.field, a)
    }

    /// Full Witt-vector addition; delegates to the structural-polynomial
    /// engine, so it is only available at small lengths.
    pub fn add(
        &self,
        a: &WittVector<FieldElement>,
        b: &WittVector<FieldElement>,
    ) -> Result<WittVector<FieldElement>, DieudonneError> {
        let ctx = WittCtx::new(self.field.clone(), self.field.p(), self.m)?;
        Ok(ctx.add(a, b)?)
    }

    /// Full Witt-vector multiplication (small lengths only, as for `add`).
    pub fn mul(
        &self,
        a: &WittVector<FieldElement>,
        b: &WittVector<FieldElement>,
    ) -> Result<WittVector<FieldElement>, DieudonneError> {
        let ctx = WittCtx::new(self.field.clone(), self.field.p(), self.m)?;
        Ok(ctx.mul(a, b)?)
    }
}

/// Module element: coordinates with respect to `e_0, …, e_{h-1}`.
pub type DElem = Vec<WittVector<FieldElement>>;

/// The rank-h Dieudonné module `W[F,V]/W[F,V](F − V^{h-1})` over `W_m(F_q)`.
#[derive(Clone, Debug)]
pub struct DieudonneModule {
    pub ring: TruncWittRing,
    pub h: usize,
}

/// Dimension report for the three quotients of §-style invariants:
/// dim M/VM (the dimension of the formal group), dim M/FM, dim M/pM
/// (the height), and the additivity identity between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub dim_m_mod_vm: usize,
    pub dim_m_mod_fm: usize,
    pub dim_m_mod_pm: usize,
    pub sum_identity_ok: bool,
}

/// The quotient `M / V^i M` with its induced σ-linear F.
///
/// Coordinate j survives as `W_m / p^{caps[j]} W_m ≅ W_{caps[j]}`, so an
/// element is a vector of Witt vectors of the per-coordinate lengths and
/// the total dimension over `F_q` is `Σ caps[j] = i`.
#[derive(Clone, Debug)]
pub struct TruncatedDModule {
    pub ring: TruncWittRing,
    pub h: usize,
    pub level: usize,
    pub caps: Vec<usize>,
    /// For each source coordinate j: (target coordinate, power of p) of
    /// `F e_j`, measured by applying the honest operator.
    fmap: Vec<(usize, usize)>,
}

impl DieudonneModule {
    pub fn zero(&self) -> DElem {
        vec![self.ring.zero(); self.h]
    }

    pub fn basis(&self, j: usize) -> DElem {
        let mut e = self.zero();
        e[j] = self.ring.one();
        e
    }

    pub fn is_zero_elem(&self, x: &DElem) -> bool {
        x.iter().all(|c| self.ring.is_zero(c))
    }

    /// `F(Σ x_j e_j) = Σ σ(x_j) F e_j`.
    pub fn apply_f(&self, x: &DElem) -> DElem {
        let h = self.h;
        let mut out = self.zero();
        out[h - 1] = self.ring.sigma(&x[0]);
        for j in 1..h {
            out[j - 1] = self.ring.mul_p(&self.ring.sigma(&x[j]));
        }
        out
    }

    /// `V(Σ x_j e_j) = Σ σ⁻¹(x_j) V e_j`.
    pub fn apply_v(&self, x: &DElem) -> DElem {
        let h = self.h;
        let mut out = self.zero();
        for j in 0..h - 1 {
            out[j + 1] = self.ring.sigma_inv(&x[j]);
        }
        out[0] = self.ring.mul_p(&self.ring.sigma_inv(&x[h - 1]));
        out
    }

    pub fn mul_p_elem(&self, x: &DElem) -> DElem {
        x.iter().map(|c| self.ring.mul_p(c)).collect()
    }

    /// Coordinatewise Witt addition (small Witt lengths only).
    pub fn add_elem(&self, x: &DElem, y: &DElem) -> Result<DElem, DieudonneError> {
        x.iter()
            .zip(y)
            .map(|(a, b)| self.ring.add(a, b))
            .collect()
    }

    /// The support of a monomial image: every F/V/p image of a basis vector
    /// lives in a single coordinate; returns (coordinate, valuation).
    fn monomial_support(&self, x: &DElem) -> Option<(usize, usize)> {
        let mut found = None;
        for (t, c) in x.iter().enumerate() {
            if let Some(v) = self.ring.valuation(c) {
                assert!(found.is_none(), "image not supported on one coordinate");
                found = Some((t, v));
            }
        }
        found
    }

    /// Dimension over F_q (= log_q of the cardinality) of the cokernel of a
    /// basis-monomial operator, from the valuation profile of its images.
    fn cokernel_dim(&self, images: &[DElem]) -> usize {
        let m = self.ring.m;
        let mut best = vec![m; self.h];
        for img in images {
            if let Some((t, v)) = self.monomial_support(img) {
                best[t] = best[t].min(v.min(m));
            }
        }
        best.iter().sum()
    }
}

/// Builds the model and validates `FV = VF = p` on every basis vector.
pub fn d_model(h: usize, m: usize, field: &Field) -> Result<DieudonneModule, DieudonneError> {
    if h == 0 || h > 10 {
        return Err(DieudonneError::BadHeight(h));
    }
    let ring = TruncWittRing::new(field.clone(), m)?;
    let module = DieudonneModule { ring, h };
    for j in 0..h {
        let e = module.basis(j);
        let fv = module.apply_f(&module.apply_v(&e));
        let vf = module.apply_v(&module.apply_f(&e));
        let pe = module.mul_p_elem(&e);
        assert_eq!(fv, pe, "FV != p on e_{j}");
        assert_eq!(vf, pe, "VF != p on e_{j}");
    }
    Ok(module)
}

/// Computes dim M/VM, dim M/FM and dim M/pM by applying the honest
/// operators to the basis and reading off valuation profiles.
pub fn check_dims(module: &DieudonneModule) -> DimReport {
    let images = |op: &dyn Fn(&DElem) -> DElem| -> Vec<DElem> {
        (0..module.h).map(|j| op(&module.basis(j))).collect()
    };
    let dim_m_mod_vm = module.cokernel_dim(&images(&|x| module.apply_v(x)));
    let dim_m_mod_fm = module.cokernel_dim(&images(&|x| module.apply_f(x)));
    let dim_m_mod_pm = module.cokernel_dim(&images(&|x| module.mul_p_elem(x)));
    DimReport {
        dim_m_mod_vm,
        dim_m_mod_fm,
        dim_m_mod_pm,
        sum_identity_ok: dim_m_mod_vm + dim_m_mod_fm == dim_m_mod_pm,
    }
}

/// The quotient `M / V^i M`; errors when the Witt length cannot represent
/// the level (the quotient would have dimension < i).
pub fn truncate(module: &DieudonneModule, i: usize) -> Result<TruncatedDModule, DieudonneError> {
    let m = module.ring.m;
    if i == 0 {
        return Err(DieudonneError::LevelTooDeep { level: i, m });
    }
    // Caps from the valuation profile of V^i on the basis.
    let mut caps = vec![m; module.h];
    for j in 0..module.h {
        let mut x = module.basis(j);
        for _ in 0..i {
            x = module.apply_v(&x);
        }
        if let Some((t, v)) = module.monomial_support(&x) {
            caps[t] = v.min(m);
        }
        // A vanished image leaves the cap at m: V^i hit p-power >= m there.
    }
    if caps.iter().sum::<usize>() != i {
        return Err(DieudonneError::LevelTooDeep { level: i, m });
    }
    // Measure (target, p-power) of F on each basis vector in a ring one
    // component longer, so a power of p never vanishes out of sight.
    let probe = DieudonneModule {
        ring: TruncWittRing::new(module.ring.field.clone(), m + 1)?,
        h: module.h,
    };
    let fmap = (0..module.h)
        .map(|j| {
            let img = probe.apply_f(&probe.basis(j));
            probe
                .monomial_support(&img)
                .expect("F of a basis vector is nonzero")
        })
        .collect();
    Ok(TruncatedDModule {
        ring: module.ring.clone(),
        h: module.h,
        level: i,
        caps,
        fmap,
    })
}

impl TruncatedDModule {
    /// Total dimension over F_q; equals the level by construction.
    pub fn dim(&self) -> usize {
        self.caps.iter().sum()
    }

    /// Class of a full module element: coordinate j truncated to its cap.
    pub fn reduce(&self, x: &DElem) -> Vec<WittVector<FieldElement>> {
        x.iter()
            .zip(&self.caps)
            .map(|(c, &cap)| WittVector::new(c.comps[..cap].to_vec()))
            .collect()
    }

    /// Induced F on the quotient, computed through any lift.
    pub fn apply_f_class(
        &self,
        module: &DieudonneModule,
        x: &[WittVector<FieldElement>],
    ) -> Vec<WittVector<FieldElement>> {
        let lift: DElem = x
            .iter()
            .map(|c| {
                let mut comps = c.comps.clone();
                comps.resize(self.ring.m, self.ring.field.zero());
                WittVector::new(comps)
            })
            .collect();
        self.reduce(&module.apply_f(&lift))
    }
}

/// True exactly when the induced F on `M/V^iM` is the zero map.
///
/// F sends coordinate j to the single coordinate `fmap[j].0` with a fixed
/// extra p-power, and σ preserves valuations, so F vanishes on the whole
/// coordinate iff it vanishes on the unit generator.
pub fn f_is_zero(t: &TruncatedDModule, module: &DieudonneModule) -> bool {
    for j in 0..t.h {
        if t.caps[j] == 0 {
            continue;
        }
        let img = t.reduce(&module.apply_f(&module.basis(j)));
        if img.iter().any(|c| !c.comps.iter().all(|x| t.ring.field.is_zero(x))) {
            return false;
        }
    }
    true
}

/// Dimension over F_q of ker F on `M/V^iM`.
///
/// The kernel splits over coordinates (F permutes them), and within
/// coordinate j it is the valuation subgroup `{val >= caps[target] - delta}`
/// of `W_{caps[j]}`.
pub fn ker_f_dim(t: &TruncatedDModule) -> usize {
    let mut dim = 0;
    for j in 0..t.h {
        let (target, delta) = t.fmap[j];
        let need = t.caps[target].saturating_sub(delta).min(t.caps[j]);
        dim += t.caps[j] - need;
    }
    dim
}

/// Comparison of im F with im V^{h-1} inside `H = M/V^{10}M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    pub images_equal: bool,
    pub image_dim: usize,
    pub codim: usize,
}

/// In `H = M/V^{10}M`, compares the image of F with the image of V^{h-1}
/// (the restriction-twisted V-power collapsed onto the single quotient) and
/// reports equality plus the common dimension and codimension.
pub fn filtration_image_check(module: &DieudonneModule) -> Result<FiltrationReport, DieudonneError> {
    let t = truncate(module, 10)?;
    let profile = |apply: &dyn Fn(&DElem) -> DElem| -> Vec<usize> {
        let mut best = t.caps.clone();
        for j in 0..module.h {
            let img = apply(&module.basis(j));
            if let Some((tgt, v)) = module.monomial_support(&img) {
                best[tgt] = best[tgt].min(v.min(t.caps[tgt]));
            }
        }
        best
    };
    let f_profile = profile(&|x| module.apply_f(x));
    let v_profile = profile(&|x| {
        let mut y = x.clone();
        for _ in 0..module.h - 1 {
            y = module.apply_v(&y);
        }
        y
    });
    let image_dim: usize = t
        .caps
        .iter()
        .zip(&f_profile)
        .map(|(&cap, &c)| cap - c)
        .sum();
    Ok(FiltrationReport {
        images_equal: f_profile == v_profile,
        image_dim,
        codim: t.dim() - image_dim,
    })
}
