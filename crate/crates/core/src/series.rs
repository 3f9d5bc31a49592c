//! Truncated power series over a ring context: univariate, bivariate (total
//! degree), and trivariate (for associativity checks).
//!
//! Representation is dense; multiplication skips zero coefficients, which
//! matters when one factor is sparse (the Lubin–Tate construction multiplies
//! by a four-term series thousands of times).

use crate::ring::Ring;

/// Univariate series truncated at degree `n` (inclusive).
#[derive(Clone, Debug, PartialEq)]
pub struct UniSeries<R: Ring> {
    pub n: usize,
    pub c: Vec<R::Elem>,
}

impl<R: Ring> UniSeries<R> {
    pub fn zero(ring: &R, n: usize) -> Self {
        UniSeries {
            n,
            c: vec![ring.zero(); n + 1],
        }
    }

    /// The identity series `t`.
    pub fn t(ring: &R, n: usize) -> Self {
        let mut s = Self::zero(ring, n);
        if n >= 1 {
            s.c[1] = ring.one();
        }
        s
    }

    pub fn coeff(&self, k: usize) -> &R::Elem {
        &self.c[k]
    }

    pub fn set(&mut self, k: usize, v: R::Elem) {
        self.c[k] = v;
    }

    pub fn add(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.n, other.n);
        UniSeries {
            n: self.n,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.n, other.n);
        UniSeries {
            n: self.n,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, v: &R::Elem, ring: &R) -> Self {
        UniSeries {
            n: self.n,
            c: self.c.iter().map(|a| ring.mul(a, v)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(ring, self.n);
        for (i, a) in self.c.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if i + j > self.n {
                    break;
                }
                if ring.is_zero(b) {
                    continue;
                }
                out.c[i + j] = ring.add(&out.c[i + j], &ring.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, e: u64, ring: &R) -> Self {
        let mut result = Self::zero(ring, self.n);
        result.c[0] = ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, ring);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ring);
            }
        }
        result
    }

    pub fn is_zero(&self, ring: &R) -> bool {
        self.c.iter().all(|a| ring.is_zero(a))
    }

    /// Composition `self(inner)`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self, ring: &R) -> Self {
        assert!(ring.is_zero(&inner.c[0]), "inner series must vanish at 0");
        // Horner from the top coefficient down.
        let mut acc = Self::zero(ring, self.n);
        for k in (1..=self.n).rev() {
            acc = acc.mul(inner, ring);
            acc.c[0] = ring.add(&acc.c[0], &self.c[k]);
        }
        acc = acc.mul(inner, ring);
        acc.c[0] = ring.add(&acc.c[0], &self.c[0]);
        acc
    }
}

/// Bivariate series truncated at total degree `n`; triangular storage.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<R: Ring> {
    pub n: usize,
    c: Vec<R::Elem>,
}

fn bi_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Linear index of `(i, j)` with `i + j <= n`.
fn bi_idx(n: usize, i: usize, j: usize) -> usize {
    // Row i holds n+1-i entries.
    i * (n + 1) - i * (i.wrapping_sub(1)) / 2 + j
}

impl<R: Ring> BiSeries<R> {
    pub fn zero(ring: &R, n: usize) -> Self {
        BiSeries {
            n,
            c: vec![ring.zero(); bi_len(n)],
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> &R::Elem {
        &self.c[bi_idx(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        let idx = bi_idx(self.n, i, j);
        self.c[idx] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &R::Elem, ring: &R) {
        let idx = bi_idx(self.n, i, j);
        self.c[idx] = ring.add(&self.c[idx], v);
    }

    pub fn var_x(ring: &R, n: usize) -> Self {
        let mut s = Self::zero(ring, n);
        s.set(1, 0, ring.one());
        s
    }

    pub fn var_y(ring: &R, n: usize) -> Self {
        let mut s = Self::zero(ring, n);
        s.set(0, 1, ring.one());
        s
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (usize, usize, &R::Elem)> {
        let n = self.n;
        (0..=n).flat_map(move |i| (0..=n - i).map(move |j| (i, j, self.coeff(i, j))))
    }

    pub fn add(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.n, other.n);
        BiSeries {
            n: self.n,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.n, other.n);
        BiSeries {
            n: self.n,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, v: &R::Elem, ring: &R) -> Self {
        BiSeries {
            n: self.n,
            c: self.c.iter().map(|a| ring.mul(a, v)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(ring, n);
        for (i1, j1, a) in self.iter_terms() {
            if ring.is_zero(a) {
                continue;
            }
            for i2 in 0..=n - i1 - j1 {
                for j2 in 0..=n - i1 - j1 - i2 {
                    let b = other.coeff(i2, j2);
                    if ring.is_zero(b) {
                        continue;
                    }
                    out.add_at(i1 + i2, j1 + j2, &ring.mul(a, b), ring);
                }
            }
        }
        out
    }

    pub fn is_zero(&self, ring: &R) -> bool {
        self.c.iter().all(|a| ring.is_zero(a))
    }

    /// Multiplicative inverse; requires the constant term to be a unit whose
    /// inverse is supplied by the caller.
    pub fn inverse(&self, const_inv: &R::Elem, ring: &R) -> Self {
        // Newton iteration g <- g(2 - u g) doubles the correct order.
        let mut g = Self::zero(ring, self.n);
        g.set(0, 0, const_inv.clone());
        let two = ring.from_u64(2);
        let mut correct = 1usize;
        while correct <= self.n {
            let ug = self.mul(&g, ring);
            let mut corr = ug.scale(&ring.neg(&ring.one()), ring);
            corr.add_at(0, 0, &two, ring);
            g = g.mul(&corr, ring);
            correct *= 2;
        }
        g
    }

    /// Truncates to a smaller total degree.
    pub fn truncate_to(&self, m: usize, ring: &R) -> Self {
        assert!(m <= self.n);
        let mut out = Self::zero(ring, m);
        for (i, j, v) in self.iter_terms() {
            if i + j <= m {
                out.set(i, j, v.clone());
            }
        }
        out
    }

    /// Evaluates the series at a pair of univariate series (each vanishing
    /// at 0), producing a univariate series of the same truncation order.
    pub fn eval_uni(&self, u: &UniSeries<R>, v: &UniSeries<R>, ring: &R) -> UniSeries<R> {
        assert!(ring.is_zero(&u.c[0]) && ring.is_zero(&v.c[0]));
        let n = self.n;
        assert_eq!(u.n, n);
        assert_eq!(v.n, n);
        let mut u_pows: Vec<UniSeries<R>> = Vec::with_capacity(n + 1);
        let mut v_pows: Vec<UniSeries<R>> = Vec::with_capacity(n + 1);
        let mut one = UniSeries::zero(ring, n);
        one.c[0] = ring.one();
        u_pows.push(one.clone());
        v_pows.push(one);
        for k in 1..=n {
            u_pows.push(u_pows[k - 1].mul(u, ring));
            v_pows.push(v_pows[k - 1].mul(v, ring));
        }
        let mut out = UniSeries::zero(ring, n);
        for (i, j, cij) in self.iter_terms() {
            if ring.is_zero(cij) {
                continue;
            }
            let term = u_pows[i].mul(&v_pows[j], ring).scale(cij, ring);
            out = out.add(&term, ring);
        }
        out
    }
}

/// Trivariate series truncated at total degree `n`; used only to check
/// associativity of formal group laws.
#[derive(Clone, Debug, PartialEq)]
pub struct TriSeries<R: Ring> {
    pub n: usize,
    c: Vec<R::Elem>,
}

impl<R: Ring> TriSeries<R> {
    pub fn zero(ring: &R, n: usize) -> Self {
        TriSeries {
            n,
            c: vec![ring.zero(); (n + 1) * (n + 1) * (n + 1)],
        }
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * (self.n + 1) + j) * (self.n + 1) + k
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &R::Elem {
        &self.c[self.idx(i, j, k)]
    }

    pub fn add_at(&mut self, i: usize, j: usize, k: usize, v: &R::Elem, ring: &R) {
        let idx = self.idx(i, j, k);
        self.c[idx] = ring.add(&self.c[idx], v);
    }

    pub fn sub(&self, other: &Self, ring: &R) -> Self {
        assert_eq!(self.n, other.n);
        TriSeries {
            n: self.n,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn first_nonzero(&self, ring: &R) -> Option<(usize, usize, usize)> {
        for i in 0..=self.n {
            for j in 0..=self.n - i {
                for k in 0..=self.n - i - j {
                    if !ring.is_zero(self.coeff(i, j, k)) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

/// Which slot of the outer bivariate series receives the inner series.
pub enum InnerSlot {
    /// `outer(inner(x,y), z)`
    First,
    /// `outer(x, inner(y,z))`
    Second,
}

/// Composes two bivariate series into a trivariate one, truncated at total
/// degree `n`; both series must vanish at the origin.
pub fn compose_bi<R: Ring>(
    outer: &BiSeries<R>,
    inner: &BiSeries<R>,
    slot: InnerSlot,
    ring: &R,
) -> TriSeries<R> {
    let n = outer.n;
    assert_eq!(inner.n, n);
    assert!(ring.is_zero(outer.coeff(0, 0)) && ring.is_zero(inner.coeff(0, 0)));
    // Powers of the inner series.
    let mut powers: Vec<BiSeries<R>> = Vec::with_capacity(n + 1);
    let mut one = BiSeries::zero(ring, n);
    one.set(0, 0, ring.one());
    powers.push(one);
    for k in 1..=n {
        powers.push(powers[k - 1].mul(inner, ring));
    }
    let mut out = TriSeries::zero(ring, n);
    for (a, b, cab) in outer.iter_terms() {
        if ring.is_zero(cab) {
            continue;
        }
        match slot {
            InnerSlot::First => {
                // inner(x,y)^a contributes (i,j); z-exponent is b.
                for (i, j, v) in powers[a].iter_terms() {
                    if i + j + b > n || ring.is_zero(v) {
                        continue;
                    }
                    out.add_at(i, j, b, &ring.mul(cab, v), ring);
                }
            }
            InnerSlot::Second => {
                // x-exponent a; inner(y,z)^b contributes (j,k).
                for (j, k, v) in powers[b].iter_terms() {
                    if a + j + k > n || ring.is_zero(v) {
                        continue;
                    }
                    out.add_at(a, j, k, &ring.mul(cab, v), ring);
                }
            }
        }
    }
    out
}
