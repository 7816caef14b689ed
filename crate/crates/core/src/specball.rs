//! Numeric geometry of the 2x2 spectral ball and its elementary automorphisms.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
// shadowed by inherent float methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{Fiber, Invariant, NumPoly, Poly, Ring};

/// Default tolerance for eigenvalue comparisons.
pub const SPECTRUM_TOL: f64 = 1e-10;
/// Relative threshold below which a matrix counts as scalar.
pub const CYCLIC_TOL: f64 = 1e-12;
/// Below this `|w|` the function `(e^w - 1)/w` is summed as a series.
pub const SERIES_THRESHOLD: f64 = 1e-3;
const SERIES_TERMS: usize = 12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Matrix2 {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Matrix2 {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(c(a11), c(a12), c(a21), c(a22))
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn scalar(z: Complex64) -> Self {
        Self::new(z, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), z)
    }

    /// Companion matrix of `l^2 - s l + p`.
    pub fn companion(s: Complex64, p: Complex64) -> Self {
        Self::new(c(0.0), -p, c(1.0), s)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn from_entries(e: [Complex64; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::from_entries(self.entries().map(|e| e * z))
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == c(0.0) || !d.is_finite() {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(self.a22 * inv, -self.a12 * inv, -self.a21 * inv, self.a11 * inv))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries().iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, o: &Matrix2) -> f64 {
        (*self - *o).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|e| e.is_finite())
    }

    /// `sigma_max / sigma_min`.
    pub fn condition_number(&self) -> f64 {
        let f2 = self.entries().iter().map(|e| e.norm_sqr()).sum::<f64>();
        let d = self.det().norm();
        if d == 0.0 {
            return f64::INFINITY;
        }
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        (f2 + disc) / (2.0 * d)
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

/// Unordered pair of eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumPair(pub Complex64, pub Complex64);

impl SpectrumPair {
    /// Max deviation under the better of the two matchings.
    pub fn distance(&self, o: &SpectrumPair) -> f64 {
        let straight = (self.0 - o.0).norm().max((self.1 - o.1).norm());
        let crossed = (self.0 - o.1).norm().max((self.1 - o.0).norm());
        straight.min(crossed)
    }

    pub fn approx_eq(&self, o: &SpectrumPair, tol: f64) -> bool {
        self.distance(o) <= tol
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> SpectrumPair {
        SpectrumPair(f(self.0), f(self.1))
    }

    pub fn radius(&self) -> f64 {
        self.0.norm().max(self.1.norm())
    }
}

/// Roots of `l^2 - s l + p` given the discriminant, avoiding cancellation.
fn roots(s: Complex64, p: Complex64, disc: Complex64) -> SpectrumPair {
    let r = disc.sqrt();
    let plus = s + r;
    let minus = s - r;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } * 0.5;
    if q == c(0.0) {
        return SpectrumPair(q, q);
    }
    SpectrumPair(q, p / q)
}

pub fn spectrum(m: &Matrix2) -> SpectrumPair {
    let s = m.trace();
    let p = m.det();
    let d = m.a11 - m.a22;
    let bc = m.a12 * m.a21;
    let mut disc = d * d + bc * 4.0;
    // exact double eigenvalue lost to rounding in the entries
    let scale = d.norm_sqr() + 4.0 * bc.norm() + f64::EPSILON * (s.norm_sqr() + 4.0 * p.norm());
    if disc.norm() <= 16.0 * f64::EPSILON * scale {
        disc = c(0.0);
    }
    roots(s, p, disc)
}

pub fn spectral_radius(m: &Matrix2) -> f64 {
    spectrum(m).radius()
}

pub fn in_ball(m: &Matrix2) -> bool {
    spectral_radius(m) < 1.0
}

/// Not a scalar multiple of the identity, relative to [`CYCLIC_TOL`].
pub fn is_cyclic(m: &Matrix2) -> bool {
    is_cyclic_tol(m, CYCLIC_TOL)
}

pub fn is_cyclic_tol(m: &Matrix2, tol: f64) -> bool {
    let norm = m.max_abs();
    if norm == 0.0 {
        return false;
    }
    let off = m.a12.norm().max(m.a21.norm()).max((m.a11 - m.a22).norm());
    off > tol * norm
}

/// `(s, p)` in the symmetrized bidisc.
pub fn in_g2(s: Complex64, p: Complex64) -> bool {
    roots(s, p, s * s - p * 4.0).radius() < 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecballError {
    #[error("1 - conj(alpha) M is singular")]
    SingularResolvent,
    #[error("matrix is scalar (not cyclic)")]
    NonCyclic,
    #[error("Q is singular")]
    SingularQ,
    #[error("no solution in span{{I, X}}")]
    NoSolution,
    #[error("eigenvalue outside the unit disc")]
    OutsideDisc,
}

/// `z -> gamma (z - alpha) / (1 - conj(alpha) z)`.
pub fn mobius_scalar(alpha: Complex64, gamma: Complex64, z: Complex64) -> Complex64 {
    gamma * (z - alpha) / (c(1.0) - alpha.conj() * z)
}

/// `gamma (M - alpha) (1 - conj(alpha) M)^{-1}`.
pub fn mobius_apply(alpha: Complex64, gamma: Complex64, m: &Matrix2) -> Result<Matrix2, SpecballError> {
    let id = Matrix2::identity();
    let resolvent = id - m.scale(alpha.conj());
    let scale = 1.0 + alpha.norm() * m.max_abs();
    if resolvent.det().norm() <= 1e-14 * scale * scale {
        return Err(SpecballError::SingularResolvent);
    }
    let inv = resolvent.inverse().ok_or(SpecballError::SingularResolvent)?;
    Ok(((*m - id.scale(alpha)) * inv).scale(gamma))
}

/// `(e^w - 1) / w`, with the removable singularity filled in.
pub fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < SERIES_THRESHOLD {
        exprel_series(w)
    } else {
        exprel_closed(w)
    }
}

/// `sum_k w^k / (k+1)!`
fn exprel_series(w: Complex64) -> Complex64 {
    let mut term = c(1.0);
    let mut acc = c(1.0);
    for k in 1..SERIES_TERMS {
        term = term * w / (k as f64 + 1.0);
        acc += term;
    }
    acc
}

/// `e^w - 1 = 2 e^{w/2} sinh(w/2)`, without cancellation.
fn exprel_closed(w: Complex64) -> Complex64 {
    let h = w * 0.5;
    h.exp() * h.sinh() / h
}

/// A polynomial payload together with its compiled numeric form.
#[derive(Clone)]
pub struct Payload<R: Ring> {
    pub poly: Arc<Poly<R>>,
    num: Arc<NumPoly>,
}

impl<R: Ring> Payload<R> {
    pub fn new(poly: Poly<R>) -> Self {
        let num = Arc::new(poly.compile());
        Self { poly: Arc::new(poly), num }
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.num.eval(point)
    }
}

impl<R: Ring> PartialEq for Payload<R> {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.poly, &o.poly) || self.poly == o.poly
    }
}

impl<R: Ring> fmt::Debug for Payload<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl<R: Ring> fmt::Display for Payload<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Closed-form automorphisms of the ball. Conjugation variants are
/// one-parameter groups in `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementaryMap {
    Transpose,
    Mobius { alpha: Complex64, gamma: Complex64 },
    /// Conjugation by `diag(e^{ta/2}, e^{-ta/2})`, `a` at `(x11, x22, x12 x21)`.
    Diag { a: Payload<Invariant>, t: f64 },
    /// Conjugation by `[[1, 0], [t beta, 1]]`, `beta` at `(x12, tr, det)`.
    Shear { beta: Payload<Fiber>, t: f64 },
    /// Conjugation by `[[1, 0], [b, 1]]`, `b = x11 (1 - e^{t x12 alpha}) / x12`.
    Over { alpha: Payload<Fiber>, t: f64 },
    ShearT { beta: Payload<Fiber>, t: f64 },
    OverT { alpha: Payload<Fiber>, t: f64 },
}

fn lower_conjugate(m: &Matrix2, b: Complex64) -> Matrix2 {
    let (x11, x12, x21, x22) = (m.a11, m.a12, m.a21, m.a22);
    Matrix2::new(x11 - b * x12, x12, b * x11 + x21 - b * b * x12 - b * x22, b * x12 + x22)
}

fn fiber_point(m: &Matrix2) -> [Complex64; 3] {
    [m.a12, m.trace(), m.det()]
}

fn shear(beta: &Payload<Fiber>, t: f64, m: &Matrix2) -> Matrix2 {
    let b = beta.eval(&fiber_point(m)) * t;
    lower_conjugate(m, b)
}

fn over(alpha: &Payload<Fiber>, t: f64, m: &Matrix2) -> Matrix2 {
    let ta = alpha.eval(&fiber_point(m)) * t;
    let b = -m.a11 * ta * exprel(m.a12 * ta);
    lower_conjugate(m, b)
}

impl ElementaryMap {
    pub fn diag(a: Poly<Invariant>, t: f64) -> Self {
        ElementaryMap::Diag { a: Payload::new(a), t }
    }

    pub fn shear(beta: Poly<Fiber>, t: f64) -> Self {
        ElementaryMap::Shear { beta: Payload::new(beta), t }
    }

    pub fn over(alpha: Poly<Fiber>, t: f64) -> Self {
        ElementaryMap::Over { alpha: Payload::new(alpha), t }
    }

    pub fn shear_t(beta: Poly<Fiber>, t: f64) -> Self {
        ElementaryMap::ShearT { beta: Payload::new(beta), t }
    }

    pub fn over_t(alpha: Poly<Fiber>, t: f64) -> Self {
        ElementaryMap::OverT { alpha: Payload::new(alpha), t }
    }

    pub fn apply(&self, m: &Matrix2) -> Result<Matrix2, SpecballError> {
        Ok(match self {
            ElementaryMap::Transpose => m.transpose(),
            ElementaryMap::Mobius { alpha, gamma } => return mobius_apply(*alpha, *gamma, m),
            ElementaryMap::Diag { a, t } => {
                let av = a.eval(&[m.a11, m.a22, m.a12 * m.a21]) * *t;
                Matrix2::new(m.a11, m.a12 * av.exp(), m.a21 * (-av).exp(), m.a22)
            }
            ElementaryMap::Shear { beta, t } => shear(beta, *t, m),
            ElementaryMap::Over { alpha, t } => over(alpha, *t, m),
            ElementaryMap::ShearT { beta, t } => shear(beta, *t, &m.transpose()).transpose(),
            ElementaryMap::OverT { alpha, t } => over(alpha, *t, &m.transpose()).transpose(),
        })
    }

    pub fn inverse(&self) -> ElementaryMap {
        let mut out = self.clone();
        match &mut out {
            ElementaryMap::Transpose => {}
            ElementaryMap::Mobius { alpha, gamma } => {
                *alpha = -(*gamma * *alpha);
                *gamma = gamma.conj();
            }
            ElementaryMap::Diag { t, .. }
            | ElementaryMap::Shear { t, .. }
            | ElementaryMap::Over { t, .. }
            | ElementaryMap::ShearT { t, .. }
            | ElementaryMap::OverT { t, .. } => *t = -*t,
        }
        out
    }

    pub fn time(&self) -> Option<f64> {
        match self {
            ElementaryMap::Transpose | ElementaryMap::Mobius { .. } => None,
            ElementaryMap::Diag { t, .. }
            | ElementaryMap::Shear { t, .. }
            | ElementaryMap::Over { t, .. }
            | ElementaryMap::ShearT { t, .. }
            | ElementaryMap::OverT { t, .. } => Some(*t),
        }
    }

    /// Same map at a different time. `None` for maps without a time.
    pub fn with_time(&self, new_t: f64) -> Option<ElementaryMap> {
        let mut out = self.clone();
        match &mut out {
            ElementaryMap::Transpose | ElementaryMap::Mobius { .. } => return None,
            ElementaryMap::Diag { t, .. }
            | ElementaryMap::Shear { t, .. }
            | ElementaryMap::Over { t, .. }
            | ElementaryMap::ShearT { t, .. }
            | ElementaryMap::OverT { t, .. } => *t = new_t,
        }
        Some(out)
    }

    /// Conjugation or transposition: preserves the spectrum.
    pub fn preserves_spectrum(&self) -> bool {
        !matches!(self, ElementaryMap::Mobius { .. })
    }

    /// Same family and payload, so that times add.
    fn same_group(&self, o: &ElementaryMap) -> bool {
        use ElementaryMap::*;
        match (self, o) {
            (Diag { a, .. }, Diag { a: b, .. }) => a == b,
            (Shear { beta: a, .. }, Shear { beta: b, .. })
            | (Over { alpha: a, .. }, Over { alpha: b, .. })
            | (ShearT { beta: a, .. }, ShearT { beta: b, .. })
            | (OverT { alpha: a, .. }, OverT { alpha: b, .. }) => a == b,
            _ => false,
        }
    }
}

/// Maps applied right to left: the last entry acts first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CompositionWord {
    pub maps: Vec<ElementaryMap>,
}

impl CompositionWord {
    pub fn new(maps: Vec<ElementaryMap>) -> Self {
        Self { maps }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from maps listed in the order they act.
    pub fn from_application_order(mut maps: Vec<ElementaryMap>) -> Self {
        maps.reverse();
        Self { maps }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `self o first`: `first` acts before `self`.
    pub fn after(&self, first: &CompositionWord) -> CompositionWord {
        let mut maps = self.maps.clone();
        maps.extend(first.maps.iter().cloned());
        CompositionWord { maps }
    }

    pub fn apply(&self, m: &Matrix2) -> Result<Matrix2, SpecballError> {
        self.apply_traced(m).map(|(out, _)| out)
    }

    /// Result and the largest entry modulus seen along the way.
    pub fn apply_traced(&self, m: &Matrix2) -> Result<(Matrix2, f64), SpecballError> {
        let mut cur = *m;
        let mut peak = cur.max_abs();
        for e in self.maps.iter().rev() {
            cur = e.apply(&cur)?;
            peak = peak.max(cur.max_abs());
        }
        Ok((cur, peak))
    }

    pub fn inverse(&self) -> CompositionWord {
        CompositionWord { maps: self.maps.iter().rev().map(ElementaryMap::inverse).collect() }
    }

    /// Merge adjacent maps of one group, drop zero-time maps and cancel
    /// adjacent transpositions.
    pub fn simplify(&self) -> CompositionWord {
        let mut out: Vec<ElementaryMap> = Vec::with_capacity(self.maps.len());
        for e in &self.maps {
            if e.time() == Some(0.0) {
                continue;
            }
            match out.last() {
                Some(ElementaryMap::Transpose) if *e == ElementaryMap::Transpose => {
                    out.pop();
                }
                Some(last) if last.same_group(e) => {
                    let t = last.time().unwrap_or(0.0) + e.time().unwrap_or(0.0);
                    out.pop();
                    if t != 0.0 {
                        out.push(e.with_time(t).expect("timed map"));
                    }
                }
                _ => out.push(e.clone()),
            }
        }
        CompositionWord { maps: out }
    }

    pub fn preserves_spectrum(&self) -> bool {
        self.maps.iter().all(ElementaryMap::preserves_spectrum)
    }
}

fn random_unit<G: Rng + ?Sized>(rng: &mut G) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn gaussian_int<G: Rng + ?Sized>(rng: &mut G) -> Complex64 {
    Complex64::new(rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64)
}

/// Seeded samples of the fiber over `{l1, l2}`: `S diag(l1, l2) S^{-1}`, or
/// `S J S^{-1}` with the Jordan block `J` when `l1 == l2`.
///
/// `S` has condition number at most 100. In the Jordan case `S` is a
/// unimodular Gaussian-integer matrix, so nilpotent samples are exact.
pub fn fiber_sample(l1: Complex64, l2: Complex64, count: usize, seed: u64) -> Result<Vec<Matrix2>, SpecballError> {
    if l1.norm() >= 1.0 || l2.norm() >= 1.0 {
        return Err(SpecballError::OutsideDisc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if l1 == l2 {
            let up = Matrix2::new(c(1.0), gaussian_int(&mut rng), c(0.0), c(1.0));
            let low = Matrix2::new(c(1.0), c(0.0), gaussian_int(&mut rng), c(1.0));
            let s = up * low;
            if s.condition_number() > 100.0 {
                continue;
            }
            let s_inv = Matrix2::new(s.a22, -s.a12, -s.a21, s.a11);
            let n = s * Matrix2::real(0.0, 1.0, 0.0, 0.0) * s_inv;
            out.push(n + Matrix2::scalar(l1));
        } else {
            let s = Matrix2::from_entries([0; 4].map(|_| random_unit(&mut rng)));
            if s.condition_number() > 100.0 {
                continue;
            }
            let s_inv = s.inverse().expect("well conditioned");
            let d = Matrix2::new(l1, c(0.0), c(0.0), l2);
            out.push(s * d * s_inv);
        }
    }
    Ok(out)
}

/// Solve `P Q^{-1} = a I + b X` in the least-squares sense.
pub fn commutant_solve(p: &Matrix2, q: &Matrix2, x: &Matrix2) -> Result<(Complex64, Complex64), SpecballError> {
    if !is_cyclic(x) {
        return Err(SpecballError::NonCyclic);
    }
    let qn = q.max_abs();
    if qn == 0.0 || q.det().norm() <= 1e-14 * qn * qn {
        return Err(SpecballError::SingularQ);
    }
    let r = *p * q.inverse().ok_or(SpecballError::SingularQ)?;
    let id = Matrix2::identity().entries();
    let xe = x.entries();
    let re = r.entries();
    let dot = |u: &[Complex64; 4], v: &[Complex64; 4]| -> Complex64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    };
    // normal equations of the 4x2 system [vec I, vec X] (a, b) = vec R
    let (g11, g12, g22) = (dot(&id, &id), dot(&id, &xe), dot(&xe, &xe));
    let (h1, h2) = (dot(&id, &re), dot(&xe, &re));
    let det = g11 * g22 - g12 * g12.conj();
    if det.norm() <= 1e-14 * g11.norm() * g22.norm() {
        return Err(SpecballError::NoSolution);
    }
    let a = (g22 * h1 - g12 * h2) / det;
    let b = (g11 * h2 - g12.conj() * h1) / det;
    let fit = Matrix2::identity().scale(a) + x.scale(b);
    let residual = (fit - r).max_abs();
    if residual >= 1e-8 * r.max_abs().max(1.0) || fit.det().norm() <= 1e-14 * fit.max_abs().powi(2) {
        return Err(SpecballError::NoSolution);
    }
    Ok((a, b))
}

/// Dimension of `{M : M X = X M}`, by rank of the 4x4 map `M -> MX - XM`
/// with complete pivoting. `tol` is relative to the largest entry of the map.
pub fn commutant_dimension(x: &Matrix2, tol: f64) -> usize {
    let xe = [[x.a11, x.a12], [x.a21, x.a22]];
    let mut l = [[c(0.0); 4]; 4];
    // column k is the image of the basis matrix E_{ij}, k = 2i + j
    for k in 0..4 {
        let (i, j) = (k / 2, k % 2);
        for r in 0..4 {
            let (p, q) = (r / 2, r % 2);
            let mut v = c(0.0);
            // (E_ij X)_pq = [p == i] X_jq ; (X E_ij)_pq = X_pi [q == j]
            if p == i {
                v += xe[j][q];
            }
            if q == j {
                v -= xe[p][i];
            }
            l[r][k] = v;
        }
    }
    let scale = l.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 4;
    }
    let mut rank = 0;
    let mut rows: Vec<usize> = (0..4).collect();
    let mut cols: Vec<usize> = (0..4).collect();
    for step in 0..4 {
        let mut best = (step, step, 0.0);
        for (ri, &r) in rows.iter().enumerate().skip(step) {
            for (ci, &cc) in cols.iter().enumerate().skip(step) {
                let v = l[r][cc].norm();
                if v > best.2 {
                    best = (ri, ci, v);
                }
            }
        }
        if best.2 <= tol * scale {
            break;
        }
        rows.swap(step, best.0);
        cols.swap(step, best.1);
        let (pr, pc) = (rows[step], cols[step]);
        let pivot = l[pr][pc];
        for &r in rows.iter().skip(step + 1) {
            let f = l[r][pc] / pivot;
            for &cc in cols.iter().skip(step) {
                let sub = f * l[pr][cc];
                l[r][cc] -= sub;
            }
        }
        rank += 1;
    }
    4 - rank
}
