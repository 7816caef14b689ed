//! Exact decomposition of orthogonal polynomial fields into generator terms.
//!
//! The elimination runs on a residual `R` (initially the input) in four
//! steps, each asserting its postcondition:
//!
//! 1. remove the balanced part of `v1` with triple brackets,
//! 2. make the divergence balanced with overshear brackets,
//! 3. remove the rest of `v1` with shear brackets (divergence free),
//! 4. what is left is a single diagonal generator.
//!
//! Signs are never transcribed: each candidate term is realized and compared
//! against the component it must cancel.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::chart;
use crate::coeff::ExactComplex;
use crate::field::{lie_bracket, make_generator, Generator, VectorField};
use crate::poly::{EuclidPoly, FiberPoly, InvariantPoly, Monomial, PolyError, DEFAULT_DEGREE_CAP};

const X12: usize = 1;
const U3: usize = 2;

/// `q = sum_j x12^j f_j + sum_j x21^j g_j + phi` with `f_j, g_j, phi` in
/// `(u1, u2, u3) = (x11, x22, x12 x21)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitV1 {
    pub f: BTreeMap<u32, InvariantPoly>,
    pub g: BTreeMap<u32, InvariantPoly>,
    pub phi: InvariantPoly,
}

impl SplitV1 {
    pub fn reconstruct(&self) -> EuclidPoly {
        let x12 = EuclidPoly::var(1);
        let x21 = EuclidPoly::var(2);
        let mut acc = chart::invariant_to_euclid(&self.phi);
        for (j, f) in &self.f {
            acc = &acc + &(&x12.pow(*j) * &chart::invariant_to_euclid(f));
        }
        for (j, g) in &self.g {
            acc = &acc + &(&x21.pow(*j) * &chart::invariant_to_euclid(g));
        }
        acc
    }

    /// No `x12`- or `x21`-heavy parts.
    pub fn is_balanced(&self) -> bool {
        self.f.is_empty() && self.g.is_empty()
    }
}

fn add_term(map: &mut BTreeMap<u32, InvariantPoly>, j: u32, m: Monomial, c: &ExactComplex) {
    let t = InvariantPoly::term(m, c.clone());
    let e = map.entry(j).or_insert_with(InvariantPoly::zero);
    *e = &*e + &t;
}

/// Route each monomial `x11^a x12^b x21^c x22^d` by the sign of `b - c`.
pub fn split_v1(q: &EuclidPoly) -> SplitV1 {
    let mut out = SplitV1::default();
    let mut phi = BTreeMap::new();
    for (m, c) in q.terms() {
        let [a, b, c21, d, ..] = m.0;
        let k = b.min(c21);
        let inv = Monomial::from_slice(&[a, d, k]);
        if b > c21 {
            add_term(&mut out.f, (b - c21) as u32, inv, c);
        } else if c21 > b {
            add_term(&mut out.g, (c21 - b) as u32, inv, c);
        } else {
            add_term(&mut phi, 0, inv, c);
        }
    }
    out.f.retain(|_, p| !p.is_zero());
    out.g.retain(|_, p| !p.is_zero());
    out.phi = phi.remove(&0).unwrap_or_default();
    out
}

/// Exact defects of the two orthogonality constraints and of `phi(u1, u2, 0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    /// `v1 + v4`
    pub trace_defect: EuclidPoly,
    /// `v1 (x22 - x11) - v2 x21 - v3 x12`
    pub det_defect: EuclidPoly,
    /// `phi` restricted to `u3 = 0`
    pub phi_at_zero: InvariantPoly,
}

impl ConstraintReport {
    pub fn passed(&self) -> bool {
        self.trace_defect.is_zero() && self.det_defect.is_zero() && self.phi_at_zero.is_zero()
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "{} v4 = -v1            defect: {}", mark(self.trace_defect.is_zero()), self.trace_defect)?;
        writeln!(f, "{} V(det) = 0          defect: {}", mark(self.det_defect.is_zero()), self.det_defect)?;
        write!(f, "{} phi(u1, u2, 0) = 0  defect: {}", mark(self.phi_at_zero.is_zero()), self.phi_at_zero)
    }
}

pub fn check_constraints(v: &VectorField) -> ConstraintReport {
    let [v1, v2, v3, v4] = &v.v;
    let x12 = EuclidPoly::var(1);
    let x21 = EuclidPoly::var(2);
    let d = &EuclidPoly::var(3) - &EuclidPoly::var(0);
    let det_defect = &(&(v1 * &d) - &(v2 * &x21)) - &(v3 * &x12);
    let phi = split_v1(v1).phi;
    let phi_at_zero = InvariantPoly::from_terms(
        phi.terms().filter(|(m, _)| m.0[U3] == 0).map(|(m, c)| (*m, c.clone())),
    )
    .expect("subset of a polynomial");
    ConstraintReport { trace_defect: v1 + v4, det_defect, phi_at_zero }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Hd,
    BrDt,
    BrDtT,
    BrDtP,
    BrDtPT,
    Triple,
}

impl TermKind {
    pub const ALL: [TermKind; 6] =
        [TermKind::Hd, TermKind::BrDt, TermKind::BrDtT, TermKind::BrDtP, TermKind::BrDtPT, TermKind::Triple];

    pub fn name(self) -> &'static str {
        match self {
            TermKind::Hd => "HD",
            TermKind::BrDt => "BR_DT",
            TermKind::BrDtT => "BR_DTt",
            TermKind::BrDtP => "BR_DTp",
            TermKind::BrDtPT => "BR_DTpt",
            TermKind::Triple => "TRIPLE",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether the kind carries a fiber payload `b`.
    pub fn has_b(self) -> bool {
        !matches!(self, TermKind::Hd | TermKind::Triple)
    }
}

/// One summand of a certificate:
/// `HD_a`, `[HD_a, HT_b]`, `[HD_a, ~HT_b]`, `[HD_a, HT'_b]`, `[HD_a, ~HT'_b]`
/// or `[[HD_a, HT_1], ~HT'_1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CertificateTerm {
    pub kind: TermKind,
    pub a: InvariantPoly,
    /// Ignored (and kept at 1) for `HD` and `TRIPLE`.
    pub b: FiberPoly,
}

impl CertificateTerm {
    pub fn hd(a: InvariantPoly) -> Self {
        Self { kind: TermKind::Hd, a, b: FiberPoly::one() }
    }

    pub fn triple(a: InvariantPoly) -> Self {
        Self { kind: TermKind::Triple, a, b: FiberPoly::one() }
    }

    pub fn bracket(kind: TermKind, a: InvariantPoly, b: FiberPoly) -> Self {
        assert!(kind.has_b());
        Self { kind, a, b }
    }

    fn negated(&self) -> Self {
        Self { kind: self.kind, a: -&self.a, b: self.b.clone() }
    }
}

impl fmt::Display for CertificateTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TERM {} a={}", self.kind.name(), self.a)?;
        if self.kind.has_b() {
            write!(f, " b={}", self.b)?;
        }
        Ok(())
    }
}

pub fn realize(t: &CertificateTerm) -> VectorField {
    let hd = make_generator(&Generator::Diag(t.a.clone()));
    let b = t.b.clone();
    match t.kind {
        TermKind::Hd => hd,
        TermKind::BrDt => lie_bracket(&hd, &make_generator(&Generator::Shear(b))),
        TermKind::BrDtT => lie_bracket(&hd, &make_generator(&Generator::ShearT(b))),
        TermKind::BrDtP => lie_bracket(&hd, &make_generator(&Generator::Over(b))),
        TermKind::BrDtPT => lie_bracket(&hd, &make_generator(&Generator::OverT(b))),
        TermKind::Triple => {
            let inner = lie_bracket(&hd, &make_generator(&Generator::Shear(FiberPoly::one())));
            lie_bracket(&inner, &make_generator(&Generator::OverT(FiberPoly::one())))
        }
    }
}

/// Hex SHA-256 of the canonical field text.
pub fn field_hash(v: &VectorField) -> String {
    let digest = Sha256::digest(format!("{}", v).as_bytes());
    let mut s = String::with_capacity(64);
    for byte in digest.iter() {
        s += &format!("{:02x}", byte);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub terms: Vec<CertificateTerm>,
    pub input_hash: String,
}

impl Certificate {
    pub fn reconstruct(&self) -> VectorField {
        reconstruct(&self.terms)
    }

    /// Reconstruction hashes to `input_hash`.
    pub fn verify(&self) -> bool {
        field_hash(&self.reconstruct()) == self.input_hash
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CERT v1 input={}", self.input_hash)?;
        for t in &self.terms {
            writeln!(f, "{}", t)?;
        }
        writeln!(f, "RESIDUAL 0")
    }
}

pub fn reconstruct(terms: &[CertificateTerm]) -> VectorField {
    terms.iter().fold(VectorField::zero(), |acc, t| &acc + &realize(t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Balanced,
    Divergence,
    KillV1,
    Remainder,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::Balanced => "balanced v1",
            Step::Divergence => "divergence normalization",
            Step::KillV1 => "kill v1",
            Step::Remainder => "remainder",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("constraint violation:\n{0}")]
    ConstraintViolation(String),
    #[error("internal residual after step '{step}': {detail}")]
    InternalResidual { step: Step, detail: String },
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: i32, cap: i32 },
}

impl From<PolyError> for DecomposeError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::DegreeCap { degree, cap } => DecomposeError::DegreeCap { degree, cap },
            other => DecomposeError::InternalResidual { step: Step::Remainder, detail: format!("{}", other) },
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub certificate: Certificate,
    /// Largest degree of the residual or of any realized term.
    pub max_degree: i32,
}

struct Eliminator {
    residual: VectorField,
    terms: Vec<CertificateTerm>,
    cap: i32,
    max_degree: i32,
}

impl Eliminator {
    fn track(&mut self, v: &VectorField) -> Result<(), DecomposeError> {
        let d = v.degree().unwrap_or(0);
        self.max_degree = self.max_degree.max(d);
        if d > self.cap {
            return Err(DecomposeError::DegreeCap { degree: d, cap: self.cap });
        }
        Ok(())
    }

    /// Append `cand` or its negation, whichever makes `extract(realize(.))`
    /// equal to `target`.
    fn push_signed(
        &mut self,
        step: Step,
        cand: CertificateTerm,
        target: &InvariantPoly,
        extract: impl Fn(&VectorField) -> InvariantPoly,
    ) -> Result<(), DecomposeError> {
        let field = realize(&cand);
        self.track(&field)?;
        let got = extract(&field);
        let (term, field) = if got == *target {
            (cand, field)
        } else if got == -target {
            (cand.negated(), -&field)
        } else {
            return Err(DecomposeError::InternalResidual {
                step,
                detail: format!("{} produced {} instead of +-({})", cand, got, target),
            });
        };
        self.residual = &self.residual - &field;
        self.track(&self.residual.clone())?;
        self.terms.push(term);
        Ok(())
    }
}

fn divide_u3(q: &InvariantPoly) -> Option<InvariantPoly> {
    q.shift(&Monomial::var(U3, -1)).ok()
}

fn y_pow(j: u32) -> FiberPoly {
    FiberPoly::var(0).pow(j - 1)
}

fn inv_scale(q: &InvariantPoly, j: u32) -> InvariantPoly {
    q.scale(&ExactComplex::from_frac(1, j as i64))
}

pub fn decompose(x: &VectorField) -> Result<Decomposition, DecomposeError> {
    decompose_with_cap(x, DEFAULT_DEGREE_CAP)
}

pub fn decompose_with_cap(x: &VectorField, cap: i32) -> Result<Decomposition, DecomposeError> {
    let report = check_constraints(x);
    if !report.passed() {
        return Err(DecomposeError::ConstraintViolation(format!("{}", report)));
    }
    let mut e = Eliminator { residual: x.clone(), terms: Vec::new(), cap, max_degree: 0 };
    e.track(x)?;

    // balanced part of v1
    let phi = split_v1(&e.residual.v[0]).phi;
    if !phi.is_zero() {
        let alpha = divide_u3(&phi).ok_or_else(|| DecomposeError::InternalResidual {
            step: Step::Balanced,
            detail: format!("phi = {} not divisible by u3", phi),
        })?;
        e.push_signed(Step::Balanced, CertificateTerm::triple(alpha), &phi, |f| split_v1(&f.v[0]).phi)?;
    }
    let s = split_v1(&e.residual.v[0]);
    if !s.phi.is_zero() {
        return Err(DecomposeError::InternalResidual { step: Step::Balanced, detail: format!("phi = {}", s.phi) });
    }

    // divergence normalization
    let div = split_v1(&e.residual.divergence());
    for (j, d) in &div.f {
        let cand = CertificateTerm::bracket(TermKind::BrDtP, inv_scale(d, *j), y_pow(*j));
        let j = *j;
        e.push_signed(Step::Divergence, cand, d, move |f| {
            split_v1(&f.divergence()).f.remove(&j).unwrap_or_default()
        })?;
    }
    for (j, d) in &div.g {
        let cand = CertificateTerm::bracket(TermKind::BrDtPT, inv_scale(d, *j), y_pow(*j));
        let j = *j;
        e.push_signed(Step::Divergence, cand, d, move |f| {
            split_v1(&f.divergence()).g.remove(&j).unwrap_or_default()
        })?;
    }
    let div = split_v1(&e.residual.divergence());
    if !div.is_balanced() {
        return Err(DecomposeError::InternalResidual {
            step: Step::Divergence,
            detail: format!("divergence {} not balanced", e.residual.divergence()),
        });
    }

    // kill v1
    let s = split_v1(&e.residual.v[0]);
    for (j, fj) in &s.f {
        let cand = CertificateTerm::bracket(TermKind::BrDt, inv_scale(fj, *j), y_pow(*j));
        let j = *j;
        e.push_signed(Step::KillV1, cand, fj, move |f| split_v1(&f.v[0]).f.remove(&j).unwrap_or_default())?;
    }
    for (j, gj) in &s.g {
        let cand = CertificateTerm::bracket(TermKind::BrDtT, inv_scale(gj, *j), y_pow(*j));
        let j = *j;
        e.push_signed(Step::KillV1, cand, gj, move |f| split_v1(&f.v[0]).g.remove(&j).unwrap_or_default())?;
    }
    if !e.residual.v[0].is_zero() || !e.residual.v[3].is_zero() {
        return Err(DecomposeError::InternalResidual {
            step: Step::KillV1,
            detail: format!("v1 = {}, v4 = {}", e.residual.v[0], e.residual.v[3]),
        });
    }
    if !split_v1(&e.residual.divergence()).is_balanced() {
        return Err(DecomposeError::InternalResidual {
            step: Step::KillV1,
            detail: format!("divergence {} no longer balanced", e.residual.divergence()),
        });
    }

    // remainder: v2 = x12 w, v3 = -x21 w, w balanced, divergence 0
    let remainder_err = |detail: String| DecomposeError::InternalResidual { step: Step::Remainder, detail };
    let psi = e.residual.divergence();
    if !psi.is_zero() {
        return Err(remainder_err(format!("balanced divergence {} is nonzero", psi)));
    }
    let v2 = e.residual.v[1].clone();
    let w = v2
        .shift(&Monomial::var(X12, -1))
        .map_err(|_| remainder_err(format!("v2 = {} not divisible by x12", v2)))?;
    let a = chart::euclid_to_invariant(&w).ok_or_else(|| remainder_err(format!("w = {} not balanced", w)))?;
    if !a.is_zero() {
        let hd = CertificateTerm::hd(a);
        let field = realize(&hd);
        e.residual = &e.residual - &field;
        e.terms.push(hd);
    }
    if !e.residual.is_zero() {
        return Err(remainder_err(format!("residual {}", e.residual)));
    }

    Ok(Decomposition {
        certificate: Certificate { terms: e.terms, input_hash: field_hash(x) },
        max_degree: e.max_degree,
    })
}

/// Euclidean degree of `u1^i u2^j u3^k` or `y^i s^j p^k` is `i + j + 2k`.
fn weighted_degree(m: &Monomial) -> i32 {
    m.0[0] + m.0[1] + 2 * m.0[2]
}

fn random_coeff<G: Rng + ?Sized>(rng: &mut G) -> ExactComplex {
    let mut num = rng.gen_range(1..=3i64);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    ExactComplex::from_frac(num, rng.gen_range(1..=2i64))
}

fn random_payload<G: Rng + ?Sized, R: crate::poly::Ring>(rng: &mut G, weight: i32) -> crate::poly::Poly<R> {
    let mut out = crate::poly::Poly::<R>::zero();
    let n_terms = rng.gen_range(1..=3);
    for _ in 0..n_terms {
        let m = loop {
            let m = Monomial::from_slice(&[
                rng.gen_range(0..=weight.max(0)),
                rng.gen_range(0..=weight.max(0)),
                rng.gen_range(0..=(weight.max(0) / 2)),
            ]);
            if weighted_degree(&m) <= weight {
                break m;
            }
        };
        out = &out + &crate::poly::Poly::term(m, random_coeff(rng));
    }
    if out.is_zero() {
        crate::poly::Poly::one()
    } else {
        out
    }
}

/// A random certificate term whose realization has degree `<= max_degree`
/// (at least 1).
pub fn random_term<G: Rng + ?Sized>(rng: &mut G, max_degree: i32) -> CertificateTerm {
    let max_degree = max_degree.max(1);
    loop {
        let kind = TermKind::ALL[rng.gen_range(0..TermKind::ALL.len())];
        let budget = rng.gen_range(1..=max_degree);
        let t = match kind {
            TermKind::Hd => CertificateTerm::hd(random_payload(rng, budget - 1)),
            TermKind::Triple if budget >= 2 => CertificateTerm::triple(random_payload(rng, budget - 2)),
            TermKind::BrDt | TermKind::BrDtT => {
                let da = rng.gen_range(0..budget);
                CertificateTerm::bracket(kind, random_payload(rng, da), random_payload(rng, budget - 1 - da))
            }
            TermKind::BrDtP | TermKind::BrDtPT if budget >= 2 => {
                let da = rng.gen_range(0..budget - 1);
                CertificateTerm::bracket(kind, random_payload(rng, da), random_payload(rng, budget - 2 - da))
            }
            _ => continue,
        };
        if realize(&t).degree().unwrap_or(0) <= max_degree {
            return t;
        }
    }
}

/// Random orthogonal field of degree `<= max_degree`, built as a sum of
/// `n_terms` random certificate terms. Returns the field and the terms.
pub fn random_orthogonal_field<G: Rng + ?Sized>(
    rng: &mut G,
    max_degree: i32,
    n_terms: usize,
) -> (VectorField, Vec<CertificateTerm>) {
    let terms: Vec<_> = (0..n_terms).map(|_| random_term(rng, max_degree)).collect();
    (reconstruct(&terms), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize) -> EuclidPoly {
        EuclidPoly::var(i)
    }

    fn u(i: usize) -> InvariantPoly {
        InvariantPoly::var(i)
    }

    #[test]
    fn split_examples() {
        let q = &(&(&e(1).pow(2) * &e(0)) + &(&e(1) * &e(2))) + &e(2);
        let s = split_v1(&q);
        assert_eq!(s.f.len(), 1);
        assert_eq!(s.f[&2], u(0));
        assert_eq!(s.g[&1], InvariantPoly::one());
        assert_eq!(s.phi, u(2));
        assert_eq!(s.reconstruct(), q);

        let s = split_v1(&(&e(1).pow(3) * &e(2)));
        assert_eq!(s.f[&2], u(2));
        assert!(s.g.is_empty() && s.phi.is_zero());

        let q = &(&e(0) * &e(3)) - &e(3).pow(2);
        let s = split_v1(&q);
        assert!(s.is_balanced());
        assert_eq!(s.phi, &(&u(0) * &u(1)) - &u(1).pow(2));
    }

    #[test]
    fn constraints() {
        assert!(check_constraints(&make_generator(&Generator::Diag(&u(0) + &u(2)))).passed());
        let v = VectorField::new(e(0), EuclidPoly::zero(), EuclidPoly::zero(), EuclidPoly::zero());
        let r = check_constraints(&v);
        assert!(!r.passed());
        assert_eq!(r.trace_defect, e(0));
    }

    #[test]
    fn hd_is_one_term() {
        let x = make_generator(&Generator::Diag(u(2)));
        let d = decompose(&x).unwrap();
        assert_eq!(d.certificate.terms, [CertificateTerm::hd(u(2))]);
    }

    #[test]
    fn bracket_input() {
        let x = lie_bracket(
            &make_generator(&Generator::Diag(u(0))),
            &make_generator(&Generator::Over(FiberPoly::one())),
        );
        let d = decompose(&x).unwrap();
        assert_eq!(d.certificate.reconstruct(), x);
        assert!(d.certificate.verify());
    }

    #[test]
    fn triple_input() {
        let x = realize(&CertificateTerm::triple(InvariantPoly::one()));
        assert!(!split_v1(&x.v[0]).phi.is_zero());
        let d = decompose(&x).unwrap();
        assert_eq!(d.certificate.terms.iter().filter(|t| t.kind == TermKind::Triple).count(), 1);
        assert_eq!(d.certificate.reconstruct(), x);
    }

    #[test]
    fn zero_field() {
        let d = decompose(&VectorField::zero()).unwrap();
        assert!(d.certificate.terms.is_empty());
        assert!(reconstruct(&[]).is_zero());
    }

    #[test]
    fn rejects_non_orthogonal() {
        let v = VectorField::new(e(0), EuclidPoly::zero(), EuclidPoly::zero(), EuclidPoly::zero());
        assert!(matches!(decompose(&v), Err(DecomposeError::ConstraintViolation(_))));
    }

    #[test]
    fn degree_cap_is_reported() {
        let x = make_generator(&Generator::Diag(u(2).pow(3)));
        assert_eq!(decompose_with_cap(&x, 6).unwrap_err(), DecomposeError::DegreeCap { degree: 7, cap: 6 });
    }

    #[test]
    fn random_fields_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let (x, _) = random_orthogonal_field(&mut rng, 5, 3);
            assert!(x.is_orthogonal());
            assert!(x.degree().unwrap_or(0) <= 5);
            let d = decompose(&x).unwrap();
            assert_eq!(d.certificate.reconstruct(), x);
            assert!(d.max_degree <= 5);
        }
    }
}
