//! Composition words approximating flows of certificate fields.
//!
//! A diagonal term is its own exact flow. A bracket `[A, B]` is reached
//! through group commutators of the two exact flows: with
//! `R(h) = B(-h) A(-h) B(h) A(h)` (A acting first) one has
//! `R(h) = exp(h^2 [A, B] + O(h^3))`, and the symmetric pair
//! `R(-h/sqrt2) R(h/sqrt2)` cancels the `h^3` term. Taking `h = sqrt(t)`
//! gives a local error `O(t^2)`, so Lie-Trotter splitting over `N` steps
//! converges at first order.
//!
//! The triple bracket `[[A, B], C]` is a commutator of an inner word for
//! `[A, B]` with the flow of `C`. The inner word is made odd in time and
//! accurate to `O(s^3)` by combining symmetric pairs so that the `s^2`
//! terms cancel.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// shadowed by inherent float methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::{reconstruct, CertificateTerm, TermKind};
use crate::field::NumField;
use crate::poly::FiberPoly;
use crate::specball::{spectral_radius, spectrum, CompositionWord, ElementaryMap, Matrix2, SpecballError};

/// Entry magnitude at which the reference integrator gives up.
pub const DEFAULT_ENTRY_BOUND: f64 = 1e8;
pub const PROBE_COUNT: usize = 20;
pub const PROBE_RADIUS: f64 = 0.8;
/// Default number of reference RK4 steps per unit time.
pub const REFERENCE_STEPS_PER_UNIT: usize = 4096;
/// Errors at or below this count as roundoff.
pub const ROUNDOFF: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("entries exceeded {bound:e} at step {step}")]
    StepOverflow { step: usize, bound: f64 },
    #[error(transparent)]
    Specball(#[from] SpecballError),
}

fn rk4_rhs(v: &NumField, m: &Matrix2) -> Matrix2 {
    Matrix2::from_entries(v.eval(&m.entries()))
}

/// Classical RK4 for `dM/ds = V(M)` with `steps` fixed steps.
pub fn reference_flow(v: &NumField, m0: &Matrix2, t: f64, steps: usize) -> Result<Matrix2, FlowError> {
    reference_flow_bounded(v, m0, t, steps, DEFAULT_ENTRY_BOUND)
}

pub fn reference_flow_bounded(
    v: &NumField,
    m0: &Matrix2,
    t: f64,
    steps: usize,
    bound: f64,
) -> Result<Matrix2, FlowError> {
    let steps = steps.max(1);
    let h = Complex64::new(t / steps as f64, 0.0);
    let half = h * 0.5;
    let mut m = *m0;
    for step in 0..steps {
        let k1 = rk4_rhs(v, &m);
        let k2 = rk4_rhs(v, &(m + k1.scale(half)));
        let k3 = rk4_rhs(v, &(m + k2.scale(half)));
        let k4 = rk4_rhs(v, &(m + k3.scale(h)));
        let incr = (k1 + k2.scale(Complex64::new(2.0, 0.0)) + k3.scale(Complex64::new(2.0, 0.0)) + k4).scale(h / 6.0);
        m = m + incr;
        if !m.is_finite() || m.max_abs() > bound {
            return Err(FlowError::StepOverflow { step: step + 1, bound });
        }
    }
    Ok(m)
}

/// A word-valued approximation of `s -> exp(s X)`, listed in application order.
trait Flow {
    fn word(&self, s: f64) -> Vec<ElementaryMap>;
}

/// Exact one-parameter group of an elementary map.
struct Exact(ElementaryMap);

impl Flow for Exact {
    fn word(&self, s: f64) -> Vec<ElementaryMap> {
        alloc::vec![self.0.with_time(s).expect("timed map")]
    }
}

fn inverse_order(w: Vec<ElementaryMap>) -> Vec<ElementaryMap> {
    w.into_iter().rev().map(|e| e.inverse()).collect()
}

/// `R(h)`: `A(h)`, `B(h)`, `A(-h)`, `B(-h)` in application order.
fn commutator(a: &dyn Flow, b: &dyn Flow, h: f64) -> Vec<ElementaryMap> {
    let mut w = a.word(h);
    w.extend(b.word(h));
    w.extend(a.word(-h));
    w.extend(b.word(-h));
    w
}

/// `R(h/sqrt2)` then `R(-h/sqrt2)`: `exp(h^2 [A, B] + O(h^4))`.
fn symmetric_commutator(a: &dyn Flow, b: &dyn Flow, h: f64) -> Vec<ElementaryMap> {
    let k = h * core::f64::consts::FRAC_1_SQRT_2;
    let mut w = commutator(a, b, k);
    w.extend(commutator(a, b, -k));
    w
}

/// Bracket flow with `h = sqrt(s)`, extended to `s < 0` by inversion.
struct Bracket<'a> {
    a: &'a dyn Flow,
    b: &'a dyn Flow,
}

impl Flow for Bracket<'_> {
    fn word(&self, s: f64) -> Vec<ElementaryMap> {
        if s < 0.0 {
            return inverse_order(self.word(-s));
        }
        symmetric_commutator(self.a, self.b, s.sqrt())
    }
}

/// Bracket flow odd in `s` with `log = s [A, B] + O(s^3)`.
///
/// With `W(h) = symmetric_commutator(h)`, `log W(h) = h^2 Z2 + h^4 Z4 + h^5 Z5 + ..`
/// and `P(c) = W(-ch) W(ch)` has `log = 2c^2 h^2 Z2 + 2c^4 h^4 Z4 + O(h^6)`.
/// `P(a) P(a) P(b)^{-1}` with `4a^2 - 2b^2 = 1`, `4a^4 = 2b^4` leaves `h^2 Z2`.
struct OddBracket<'a> {
    a: &'a dyn Flow,
    b: &'a dyn Flow,
}

impl OddBracket<'_> {
    fn pair(&self, c: f64, h: f64) -> Vec<ElementaryMap> {
        let mut w = symmetric_commutator(self.a, self.b, c * h);
        w.extend(symmetric_commutator(self.a, self.b, -c * h));
        w
    }
}

impl Flow for OddBracket<'_> {
    fn word(&self, s: f64) -> Vec<ElementaryMap> {
        if s < 0.0 {
            return inverse_order(self.word(-s));
        }
        let h = s.sqrt();
        let a2 = 1.0 / (4.0 - 2.0 * core::f64::consts::SQRT_2);
        let ca = a2.sqrt();
        let cb = (core::f64::consts::SQRT_2 * a2).sqrt();
        let mut w = inverse_order(self.pair(cb, h));
        w.extend(self.pair(ca, h));
        w.extend(self.pair(ca, h));
        w
    }
}

fn term_flows(term: &CertificateTerm) -> (ElementaryMap, ElementaryMap) {
    let diag = ElementaryMap::diag(term.a.clone(), 0.0);
    let b = term.b.clone();
    let other = match term.kind {
        TermKind::BrDt => ElementaryMap::shear(b, 0.0),
        TermKind::BrDtT => ElementaryMap::shear_t(b, 0.0),
        TermKind::BrDtP => ElementaryMap::over(b, 0.0),
        TermKind::BrDtPT => ElementaryMap::over_t(b, 0.0),
        TermKind::Triple => ElementaryMap::shear(FiberPoly::one(), 0.0),
        TermKind::Hd => ElementaryMap::Transpose,
    };
    (diag, other)
}

fn exact_word_application_order(term: &CertificateTerm, t: f64) -> Vec<ElementaryMap> {
    if t == 0.0 {
        return Vec::new();
    }
    if t < 0.0 {
        return inverse_order(exact_word_application_order(term, -t));
    }
    let (diag, other) = term_flows(term);
    match term.kind {
        TermKind::Hd => alloc::vec![diag.with_time(t).expect("timed")],
        TermKind::Triple => {
            let (a, b) = (Exact(diag), Exact(other));
            let inner = OddBracket { a: &a, b: &b };
            let c = Exact(ElementaryMap::over_t(FiberPoly::one(), 0.0));
            Bracket { a: &inner, b: &c }.word(t)
        }
        _ => {
            let (a, b) = (Exact(diag), Exact(other));
            Bracket { a: &a, b: &b }.word(t)
        }
    }
}

/// Word approximating the time-`t` flow of `realize(term)`. Exact for `HD`;
/// local error `O(t^2)` for bracket kinds.
pub fn exact_word(term: &CertificateTerm, t: f64) -> CompositionWord {
    CompositionWord::from_application_order(exact_word_application_order(term, t))
}

/// Lie-Trotter word: `n` steps of size `t/n`, terms in certificate order
/// within a step. Negative `t` gives the inverse of the word for `-t`.
pub fn trotter_word(terms: &[CertificateTerm], t: f64, n: usize) -> CompositionWord {
    if t < 0.0 {
        return trotter_word(terms, -t, n).inverse();
    }
    let n = n.max(1);
    let dt = t / n as f64;
    let mut maps = Vec::new();
    for _ in 0..n {
        for term in terms {
            maps.extend(exact_word_application_order(term, dt));
        }
    }
    CompositionWord::from_application_order(maps).simplify()
}

/// Seeded matrices with small entries and spectral radius at most `radius`.
pub fn probe_set(seed: u64, count: usize, radius: f64) -> Vec<Matrix2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let e = [0; 4].map(|_| Complex64::new(rng.gen_range(-0.35..0.35), rng.gen_range(-0.35..0.35)));
        let m = Matrix2::from_entries(e);
        if spectral_radius(&m) <= radius {
            out.push(m);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Max entrywise error over the probes.
    pub error: f64,
    /// Max matched eigenvalue drift over the probes.
    pub drift: f64,
    pub word_len: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub t: f64,
    pub probe_seed: u64,
    pub probes: Vec<Matrix2>,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted order: minus the slope of `log error` against `log N`.
    pub slope: Option<f64>,
    /// All errors at roundoff level.
    pub exact: bool,
}

impl ConvergenceReport {
    pub fn max_drift(&self) -> f64 {
        self.rows.iter().map(|r| r.drift).fold(0.0, f64::max)
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t = {}  probes = {} (seed {})", self.t, self.probes.len(), self.probe_seed)?;
        writeln!(f, "{:>6}  {:>12}  {:>12}  {:>8}", "N", "error", "drift", "maps")?;
        for r in &self.rows {
            writeln!(f, "{:>6}  {:>12.4e}  {:>12.4e}  {:>8}", r.n, r.error, r.drift, r.word_len)?;
        }
        match (self.exact, self.slope) {
            (true, _) => write!(f, "slope: exact (roundoff at every N)"),
            (false, Some(s)) => write!(f, "slope: {:.4}", s),
            (false, None) => write!(f, "slope: undefined"),
        }
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Trotter words at each `N` against the RK4 flow of the reconstructed field.
pub fn convergence_study(
    terms: &[CertificateTerm],
    t: f64,
    ns: &[usize],
    probes: &[Matrix2],
    probe_seed: u64,
    reference_steps: usize,
) -> Result<ConvergenceReport, FlowError> {
    let field = reconstruct(terms).compile();
    let references = probes
        .iter()
        .map(|m| reference_flow(&field, m, t, reference_steps))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let word = trotter_word(terms, t, n);
        let mut error = 0.0f64;
        let mut drift = 0.0f64;
        for (m, r) in probes.iter().zip(&references) {
            let out = word.apply(m)?;
            error = error.max(out.max_abs_diff(r));
            drift = drift.max(spectrum(&out).distance(&spectrum(m)));
        }
        rows.push(ConvergenceRow { n, error, drift, word_len: word.len() });
    }
    let exact = rows.iter().all(|r| r.error <= ROUNDOFF);
    let slope = if exact {
        None
    } else {
        let x: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.error.max(f64::MIN_POSITIVE).ln()).collect();
        fit_slope(&x, &y).map(|s| -s)
    };
    Ok(ConvergenceReport { t, probe_seed, probes: probes.to_vec(), rows, slope, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::realize;
    use crate::field::{make_generator, Generator};
    use crate::poly::InvariantPoly;

    fn u(i: usize) -> InvariantPoly {
        InvariantPoly::var(i)
    }

    fn probe() -> Matrix2 {
        Matrix2::new(
            Complex64::new(0.2, 0.1),
            Complex64::new(-0.3, 0.05),
            Complex64::new(0.25, -0.1),
            Complex64::new(-0.1, 0.2),
        )
    }

    #[test]
    fn reference_examples() {
        let hd = make_generator(&Generator::Diag(InvariantPoly::one())).compile();
        let n = Matrix2::real(0.0, 1.0, 0.0, 0.0);
        let m = reference_flow(&hd, &n, 1.0, 100).unwrap();
        assert!(m.max_abs_diff(&Matrix2::real(0.0, core::f64::consts::E, 0.0, 0.0)) < 1e-8);
        let zero = crate::field::VectorField::zero().compile();
        assert_eq!(reference_flow(&zero, &probe(), 1.0, 10).unwrap(), probe());
    }

    #[test]
    fn reference_is_fourth_order() {
        let a = &u(0).scale(&crate::coeff::ExactComplex::from_int(4)) + &InvariantPoly::int(3);
        let v = realize(&CertificateTerm::bracket(TermKind::BrDt, a, &FiberPoly::var(1) + &FiberPoly::int(2))).compile();
        let exact = reference_flow(&v, &probe(), 1.0, 4096).unwrap();
        let e1 = reference_flow(&v, &probe(), 1.0, 16).unwrap().max_abs_diff(&exact);
        let e2 = reference_flow(&v, &probe(), 1.0, 32).unwrap().max_abs_diff(&exact);
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {}", ratio);
    }

    #[test]
    fn hd_word_is_exact() {
        let a = &u(0) + &u(2);
        let term = CertificateTerm::hd(a.clone());
        let v = make_generator(&Generator::Diag(a)).compile();
        let m = probe();
        let w = exact_word(&term, 0.7).apply(&m).unwrap();
        let r = reference_flow(&v, &m, 0.7, 2000).unwrap();
        assert!(w.max_abs_diff(&r) < 1e-8);
        assert!(exact_word(&term, 0.0).is_empty());
    }

    fn local_error(term: &CertificateTerm, t: f64) -> f64 {
        let v = realize(term).compile();
        let m = probe();
        let w = exact_word(term, t).apply(&m).unwrap();
        let r = reference_flow(&v, &m, t, 200).unwrap();
        w.max_abs_diff(&r)
    }

    /// The commutator word must approximate `+[A, B]`, not its negative.
    #[test]
    fn commutator_orientation() {
        for kind in [TermKind::BrDt, TermKind::BrDtT, TermKind::BrDtP, TermKind::BrDtPT] {
            let term = CertificateTerm::bracket(kind, InvariantPoly::one(), FiberPoly::one());
            let t = 1e-3;
            let good = local_error(&term, t);
            let flipped = {
                let v = realize(&term).compile();
                let w = exact_word(&term, -t).apply(&probe()).unwrap();
                w.max_abs_diff(&reference_flow(&v, &probe(), t, 200).unwrap())
            };
            assert!(good < 1e-2 * flipped, "{:?}: {} vs {}", kind, good, flipped);
        }
    }

    #[test]
    fn bracket_words_have_second_order_local_error() {
        for term in [
            CertificateTerm::bracket(TermKind::BrDt, InvariantPoly::one(), FiberPoly::one()),
            CertificateTerm::bracket(TermKind::BrDtPT, u(0), FiberPoly::var(0)),
            CertificateTerm::triple(&InvariantPoly::one() + &u(1)),
        ] {
            let e1 = local_error(&term, 1e-2);
            let e2 = local_error(&term, 5e-3);
            let order = (e1 / e2).log2();
            assert!(order > 1.8, "{:?} order {}", term.kind, order);
        }
    }

    #[test]
    fn trotter_reversibility() {
        let terms = [
            CertificateTerm::hd(u(2)),
            CertificateTerm::bracket(TermKind::BrDtP, u(0), FiberPoly::one()),
        ];
        let fwd = trotter_word(&terms, 0.5, 8);
        let back = trotter_word(&terms, -0.5, 8);
        assert_eq!(back, fwd.inverse());
        let m = probe();
        let round = back.apply(&fwd.apply(&m).unwrap()).unwrap();
        assert!(round.max_abs_diff(&m) < 1e-8);
        assert!(trotter_word(&[], 1.0, 4).is_empty());
        assert_eq!(trotter_word(&[CertificateTerm::hd(u(0))], 1.0, 64).len(), 1);
    }

    #[test]
    fn probes_are_inside() {
        let p = probe_set(3, PROBE_COUNT, PROBE_RADIUS);
        assert_eq!(p.len(), PROBE_COUNT);
        assert!(p.iter().all(|m| spectral_radius(m) <= PROBE_RADIUS));
        assert_eq!(p, probe_set(3, PROBE_COUNT, PROBE_RADIUS));
    }

    #[test]
    fn small_study_converges() {
        let terms = [
            CertificateTerm::hd(u(0)),
            CertificateTerm::bracket(TermKind::BrDt, InvariantPoly::one(), FiberPoly::var(0)),
        ];
        let probes = probe_set(1, 4, PROBE_RADIUS);
        let r = convergence_study(&terms, 1.0, &[8, 16, 32], &probes, 1, 1024).unwrap();
        assert!(r.rows.windows(2).all(|w| w[1].error < w[0].error), "{}", r);
        assert!(r.max_drift() <= 1e-10);
        assert!(r.slope.unwrap() > 0.9, "{}", r);
    }
}
