//! Worked examples checked against hand expansions.

use num_complex::Complex64;
use specball_core::chart::{from_spectral, invariant_to_euclid, invariant_to_spectral, to_spectral};
use specball_core::coeff::ExactComplex;
use specball_core::decompose::{check_constraints, decompose, realize, reconstruct, split_v1, CertificateTerm, TermKind};
use specball_core::field::{lie_bracket, make_generator, Generator, VectorField};
use specball_core::flow::{exact_word, reference_flow, trotter_word};
use specball_core::poly::{EuclidPoly, FiberPoly, InvariantPoly, Monomial, Poly, SpectralPoly};
use specball_core::specball::{
    commutant_solve, fiber_sample, is_cyclic, mobius_apply, spectrum, CompositionWord, ElementaryMap, Matrix2,
    SpecballError, SpectrumPair,
};

fn e(i: usize) -> EuclidPoly {
    EuclidPoly::var(i)
}

fn sp(name: &str) -> SpectralPoly {
    SpectralPoly::var_named(name).unwrap()
}

fn u(i: usize) -> InvariantPoly {
    InvariantPoly::var(i)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn polynomial_arithmetic() {
    let lhs = &(&e(0) + &e(3)) * &(&e(0) - &e(3));
    assert_eq!(lhs, &e(0).pow(2) - &e(3).pow(2));
    assert_eq!((&e(1) * &e(2)).derivative(1), e(2));
    // d/dy (y * y^2) = 3 y^2
    let y = sp("y");
    assert_eq!((&y * &y.pow(2)).derivative(1), y.pow(2).scale(&ExactComplex::from_int(3)));
}

#[test]
fn spectral_chart() {
    let (x, y, s, p) = (sp("x"), sp("y"), sp("s"), sp("p"));
    let det = &(&e(0) * &e(3)) - &(&e(1) * &e(2));
    assert_eq!(to_spectral(&e(0)), x);
    assert_eq!(to_spectral(&det), p);
    let x21 = &(&(&(&x * &s) - &x.pow(2)) - &p) * &y.monomial_inverse().unwrap();
    assert_eq!(to_spectral(&e(2)), x21);
    assert_eq!(from_spectral(&p).unwrap(), det);
    assert_eq!(from_spectral(&x21).unwrap(), e(2));
    assert!(from_spectral(&y.monomial_inverse().unwrap()).is_err());
}

#[test]
fn invariant_embeddings() {
    let (x, s, p) = (sp("x"), sp("s"), sp("p"));
    assert_eq!(invariant_to_euclid(&u(2)), &e(1) * &e(2));
    assert_eq!(invariant_to_spectral(&u(2)), &(&x * &(&s - &x)) - &p);
    assert_eq!(invariant_to_spectral(&(&u(0) + &u(1))), s);
}

#[test]
fn generator_action() {
    let hd1 = make_generator(&Generator::Diag(InvariantPoly::one()));
    assert_eq!(hd1.apply(&e(1)), e(1));
    let det = &(&e(0) * &e(3)) - &(&e(1) * &e(2));
    let a = &(&u(0).pow(3) - &u(2)) + &(&u(1) * &u(2));
    assert!(make_generator(&Generator::Diag(a)).apply(&det).is_zero());
    let radial = VectorField::new(e(0), Poly::zero(), Poly::zero(), Poly::zero());
    assert_eq!(radial.apply(&(&e(0) + &e(3))), e(0));
}

#[test]
fn generator_displays() {
    let a = &u(0) + &u(2);
    let hd = make_generator(&Generator::Diag(a.clone()));
    let ae = invariant_to_euclid(&a);
    assert_eq!(hd, VectorField::new(Poly::zero(), &ae * &e(1), -&(&ae * &e(2)), Poly::zero()));

    let ht = make_generator(&Generator::Shear(FiberPoly::one()));
    assert_eq!(ht, VectorField::new(-&e(1), Poly::zero(), &e(0) - &e(3), e(1)));

    let htp = make_generator(&Generator::Over(FiberPoly::one()));
    let x11x12 = &e(0) * &e(1);
    assert_eq!(htp, VectorField::new(x11x12.clone(), Poly::zero(), &(&e(3) - &e(0)) * &e(0), -&x11x12));
}

#[test]
fn brackets_in_spectral_form() {
    let (x, y) = (sp("x"), sp("y"));
    let hd1 = make_generator(&Generator::Diag(InvariantPoly::one()));
    let ht1 = make_generator(&Generator::Shear(FiberPoly::one()));
    let b = lie_bracket(&hd1, &ht1);
    // library convention: v1 = -x12, the negative of the printed display
    assert_eq!(b.v[0], -&e(1));
    let s = b.to_spectral().unwrap();
    assert_eq!((s.p, s.q), (-&y, SpectralPoly::zero()));

    let hdx = make_generator(&Generator::Diag(u(0)));
    let htp1 = make_generator(&Generator::Over(FiberPoly::one()));
    let b = lie_bracket(&hdx, &htp1);
    let s = b.to_spectral().unwrap();
    assert_eq!(s.p, &x.pow(2) * &y);
    assert_eq!(s.q, -&(&x * &y.pow(2)));
    let div = b.divergence_spectral().unwrap();
    assert!(div == &x * &y || div == -&(&x * &y));
    assert!(lie_bracket(&b, &b).is_zero());
}

#[test]
fn divergences() {
    let a = &(&u(0) * &u(2)) + &u(1).pow(3);
    let hd = make_generator(&Generator::Diag(a.clone()));
    assert!(hd.divergence().is_zero());
    let b = &FiberPoly::var(0).pow(2) + &FiberPoly::var(1);
    let br = lie_bracket(&hd, &make_generator(&Generator::Shear(b)));
    assert!(br.divergence().is_zero());
}

#[test]
fn splitter() {
    let q = &(&(&e(1).pow(2) * &e(0)) + &(&e(1) * &e(2))) + &e(2);
    let s = split_v1(&q);
    assert_eq!(s.f.get(&2), Some(&u(0)));
    assert_eq!(s.g.get(&1), Some(&InvariantPoly::one()));
    assert_eq!(s.phi, u(2));
    assert_eq!(s.reconstruct(), q);

    let s = split_v1(&(&e(0).pow(2) - &e(3)));
    assert!(s.is_balanced());
    assert_eq!(s.phi, &u(0).pow(2) - &u(1));

    let s = split_v1(&(&e(1).pow(3) * &e(2)));
    assert_eq!(s.f.get(&2), Some(&u(2)));
}

#[test]
fn constraints_and_certificates() {
    let hd = make_generator(&Generator::Diag(&u(0) - &u(2)));
    assert!(check_constraints(&hd).passed());
    let radial = VectorField::new(e(0), Poly::zero(), Poly::zero(), Poly::zero());
    assert!(!check_constraints(&radial).passed());

    let x = make_generator(&Generator::Diag(u(2)));
    let d = decompose(&x).unwrap();
    assert_eq!(d.certificate.terms, vec![CertificateTerm::hd(u(2))]);

    let x = lie_bracket(&make_generator(&Generator::Diag(u(0))), &make_generator(&Generator::Over(FiberPoly::one())));
    let d = decompose(&x).unwrap();
    assert_eq!(d.certificate.reconstruct(), x);

    let x = realize(&CertificateTerm::triple(InvariantPoly::one()));
    let d = decompose(&x).unwrap();
    assert!(d.certificate.terms.iter().any(|t| t.kind == TermKind::Triple));
    assert_eq!(d.certificate.reconstruct(), x);

    assert_eq!(realize(&CertificateTerm::hd(InvariantPoly::one())), make_generator(&Generator::Diag(InvariantPoly::one())));
    assert!(reconstruct(&[]).is_zero());
}

#[test]
fn spectra() {
    let m = Matrix2::real(0.5, 0.0, 0.0, -0.25);
    assert!(spectrum(&m).approx_eq(&SpectrumPair(c(0.5), c(-0.25)), 1e-15));
    assert!(!is_cyclic(&Matrix2::scalar(c(0.3))));
    assert!(is_cyclic(&Matrix2::real(0.0, 1.0, 0.0, 0.0)));
    let s = spectrum(&Matrix2::companion(c(1.0), c(0.21)));
    assert!(s.approx_eq(&SpectrumPair(c(0.3), c(0.7)), 1e-14));
}

#[test]
fn mobius_examples() {
    let m = Matrix2::real(0.1, 0.2, -0.3, 0.4);
    assert!(mobius_apply(c(0.0), c(1.0), &m).unwrap().max_abs_diff(&m) < 1e-15);
    let alpha = Complex64::new(0.2, -0.1);
    assert!(mobius_apply(alpha, c(1.0), &Matrix2::scalar(alpha)).unwrap().max_abs() < 1e-15);
    // (N - 1/2)(1 - N/2)^-1 = (N - 1/2)(1 + N/2) = -1/2 + 3/4 N
    let out = mobius_apply(c(0.5), c(1.0), &Matrix2::real(0.0, 1.0, 0.0, 0.0)).unwrap();
    assert!(out.max_abs_diff(&Matrix2::real(-0.5, 0.75, 0.0, -0.5)) < 1e-15);
}

#[test]
fn elementary_examples() {
    let n = Matrix2::real(0.0, 1.0, 0.0, 0.0);
    let out = ElementaryMap::shear(FiberPoly::one(), 1.0).apply(&n).unwrap();
    assert!(out.max_abs_diff(&Matrix2::real(-1.0, 1.0, -1.0, 1.0)) < 1e-15);

    let swap = Matrix2::real(0.0, 1.0, 1.0, 0.0);
    let out = ElementaryMap::diag(InvariantPoly::one(), 1.0).apply(&swap).unwrap();
    let en = std::f64::consts::E;
    assert!(out.max_abs_diff(&Matrix2::real(0.0, en, 1.0 / en, 0.0)) < 1e-14);

    // the overshear symbol is finite and continuous across x12 = 0
    let over = ElementaryMap::over(FiberPoly::one(), 0.7);
    let at = over.apply(&Matrix2::real(0.3, 0.0, 0.2, -0.1)).unwrap();
    let near = over.apply(&Matrix2::real(0.3, 1e-9, 0.2, -0.1)).unwrap();
    assert!(at.is_finite() && at.max_abs_diff(&near) < 1e-8);
}

#[test]
fn words() {
    let m = Matrix2::real(0.1, 0.2, -0.3, 0.4);
    assert_eq!(CompositionWord::empty().apply(&m).unwrap(), m);
    let w = CompositionWord::new(vec![
        ElementaryMap::shear(&FiberPoly::var(0) + &FiberPoly::one(), 0.4),
        ElementaryMap::Transpose,
        ElementaryMap::diag(u(2), -0.3),
        ElementaryMap::over_t(FiberPoly::var(2), 0.5),
    ]);
    let out = w.apply(&m).unwrap();
    assert!(spectrum(&out).distance(&spectrum(&m)) < 1e-10);
    assert!(w.inverse().apply(&out).unwrap().max_abs_diff(&m) < 1e-10);
}

#[test]
fn fibers() {
    let ms = fiber_sample(c(0.3), c(0.7), 6, 9).unwrap();
    assert_eq!(ms.len(), 6);
    for m in &ms {
        assert!(spectrum(m).approx_eq(&SpectrumPair(c(0.3), c(0.7)), 1e-10));
    }
    assert_eq!(ms, fiber_sample(c(0.3), c(0.7), 6, 9).unwrap());
    for m in fiber_sample(c(0.0), c(0.0), 4, 1).unwrap() {
        assert!((m * m).max_abs() < 1e-10 && is_cyclic(&m));
    }
}

#[test]
fn commutant_examples() {
    let x = Matrix2::real(0.2, 0.5, -0.1, 0.3);
    let q = Matrix2::real(1.0, 2.0, -1.0, 0.5);
    let p = (Matrix2::scalar(c(2.0)) + x.scale(c(3.0))) * q;
    let (a, b) = commutant_solve(&p, &q, &x).unwrap();
    assert!((a - 2.0).norm() < 1e-12 && (b - 3.0).norm() < 1e-12);
    let (a, b) = commutant_solve(&q, &q, &x).unwrap();
    assert!((a - 1.0).norm() < 1e-12 && b.norm() < 1e-12);

    let nilp = Matrix2::real(0.0, 0.0, 1.0, 0.0);
    assert!((nilp * x).max_abs_diff(&(x * nilp)) > 1e-3);
    let r = Matrix2::identity() + nilp;
    assert_eq!(commutant_solve(&(r * q), &q, &x), Err(SpecballError::NoSolution));
    assert_eq!(commutant_solve(&q, &q, &Matrix2::scalar(c(0.2))), Err(SpecballError::NonCyclic));
}

#[test]
fn flow_examples() {
    let n = Matrix2::real(0.0, 1.0, 0.0, 0.0);
    let hd1 = make_generator(&Generator::Diag(InvariantPoly::one())).compile();
    let out = reference_flow(&hd1, &n, 1.0, 100).unwrap();
    assert!(out.max_abs_diff(&Matrix2::real(0.0, std::f64::consts::E, 0.0, 0.0)) < 1e-8);
    let m = Matrix2::real(0.1, 0.2, -0.3, 0.4);
    assert_eq!(reference_flow(&VectorField::zero().compile(), &m, 1.0, 10).unwrap(), m);

    let a = &u(0) + &InvariantPoly::term(Monomial::from_slice(&[0, 0, 1]), ExactComplex::from_frac(1, 2));
    let term = CertificateTerm::hd(a);
    let exact = exact_word(&term, 0.6).apply(&m).unwrap();
    let rk = reference_flow(&realize(&term).compile(), &m, 0.6, 600).unwrap();
    assert!(exact.max_abs_diff(&rk) < 1e-8);

    assert!(exact_word(&CertificateTerm::bracket(TermKind::BrDt, InvariantPoly::one(), FiberPoly::one()), 0.0).is_empty());
    assert!(trotter_word(&[], 1.0, 16).is_empty());
}
