//! Exact arithmetic for heights of one-dimensional formal groups in
//! characteristic p.
//!
//! The crate provides, bottom-up:
//!
//! * [`field`] — prime fields `F_p` and small extensions `F_q = F_p[t]/(g)`;
//! * [`intpoly`] — multivariate polynomials over arbitrary-precision integers
//!   (used to derive Witt structural polynomials from ghost components);
//! * [`laurent`] — multivariate Laurent polynomials over `F_q`;
//! * [`witt`] — truncated Witt vectors `W_n(A)` over any commutative ring,
//!   with the Frobenius `F`, Verschiebung `V` and restriction `R` operators;
//! * [`fgl`] — one-dimensional formal group laws, height detection from the
//!   multiplication-by-p series, Lubin–Tate and elliptic-curve fixtures, and
//!   the Hasse invariant;
//! * [`dieudonne`] — an explicit rank-h Dieudonné module with σ-linear `F`
//!   and σ⁻¹-linear `V`, and its V-adic truncations;
//! * [`cech`] — Čech cohomology of `O_X` and `W_i(O_X)` for Calabi–Yau
//!   hypersurfaces, the Frobenius action on top cohomology, and the tower
//!   that certifies the height of the formal Brauer group;
//! * [`strata`] — the Deuring mass formula and the height-stratum class
//!   table for K3 moduli.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod cech;
pub mod dieudonne;
pub mod field;
pub mod fgl;
pub mod intpoly;
pub mod laurent;
pub mod linalg;
pub mod ring;
pub mod series;
pub mod strata;
pub mod witt;



pub use cech::{CohomClass, HeightCertificate, HypersurfaceRing, Verdict};
pub use dieudonne::{DieudonneModule, TruncWittRing, TruncatedDModule};
pub use field::{Field, FieldElement};
pub use fgl::{FormalGroupLaw, HeightKind, HeightReport};
pub use intpoly::IntPoly;
pub use laurent::LaurentPoly;
pub use witt::{StructuralPolys, WittCtx, WittVector};
