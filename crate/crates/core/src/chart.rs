//! Substitutions between the polynomial rings.
//!
//! The spectral chart is `(x, y, s, p) = (x11, x12, tr, det)`. Its inverse
//! sends `x21` to `(x(s - x) - p) / y`, which is the only source of negative
//! powers of `y`.

use crate::coeff::ExactComplex;
use crate::poly::{
    EuclidPoly, FiberPoly, InvariantPoly, Monomial, PolyError, SpectralPoly,
};

const X11: usize = 0;
const X12: usize = 1;
const X21: usize = 2;
const X22: usize = 3;

fn e(i: usize) -> EuclidPoly {
    EuclidPoly::var(i)
}

fn sp(i: usize) -> SpectralPoly {
    SpectralPoly::var(i)
}

pub fn trace() -> EuclidPoly {
    &e(X11) + &e(X22)
}

pub fn det() -> EuclidPoly {
    &(&e(X11) * &e(X22)) - &(&e(X12) * &e(X21))
}

/// `x12 * x21` written in spectral coordinates: `x(s - x) - p`.
pub fn spectral_offdiag_product() -> SpectralPoly {
    let x = sp(0);
    let s = sp(2);
    let p = sp(3);
    &(&x * &(&s - &x)) - &p
}

fn y_inverse() -> SpectralPoly {
    SpectralPoly::term(Monomial::from_slice(&[0, -1, 0, 0]), ExactComplex::from_int(1))
}

/// Rewrite a polynomial in matrix entries in spectral coordinates.
pub fn to_spectral(q: &EuclidPoly) -> SpectralPoly {
    let x = sp(0);
    let y = sp(1);
    let s = sp(2);
    let x21 = &spectral_offdiag_product() * &y_inverse();
    let images = [x.clone(), y, x21, &s - &x];
    q.substitute(&images).expect("chart images are polynomial in the Laurent ring")
}

/// Inverse chart. Fails with [`PolyError::NotPolynomial`] when negative
/// powers of `y` do not cancel.
pub fn from_spectral(q: &SpectralPoly) -> Result<EuclidPoly, PolyError> {
    let k = (-q.min_exponent(1)).max(0);
    let cleared = q.shift(&Monomial::from_slice(&[0, k, 0, 0]))?;
    let images = [e(X11), e(X12), trace(), det()];
    let poly = cleared.substitute(&images)?;
    if k == 0 {
        return Ok(poly);
    }
    if poly.min_exponent(X12) < k && !poly.is_zero() {
        return Err(PolyError::NotPolynomial { var: "y" });
    }
    poly.shift(&Monomial::from_slice(&[0, -k, 0, 0]))
        .map_err(|_| PolyError::NotPolynomial { var: "y" })
}

/// `u1 -> x11, u2 -> x22, u3 -> x12*x21`.
pub fn invariant_to_euclid(a: &InvariantPoly) -> EuclidPoly {
    let images = [e(X11), e(X22), &e(X12) * &e(X21)];
    a.substitute(&images).expect("polynomial images")
}

/// `u1 -> x, u2 -> s - x, u3 -> x(s - x) - p`.
pub fn invariant_to_spectral(a: &InvariantPoly) -> SpectralPoly {
    let images = [sp(0), &sp(2) - &sp(0), spectral_offdiag_product()];
    a.substitute(&images).expect("polynomial images")
}

/// `y -> x12, s -> tr, p -> det`.
pub fn fiber_to_euclid(b: &FiberPoly) -> EuclidPoly {
    b.substitute(&[e(X12), trace(), det()]).expect("polynomial images")
}

/// Same as [`fiber_to_euclid`] evaluated at the transposed matrix (`y -> x21`).
pub fn fiber_to_euclid_transposed(b: &FiberPoly) -> EuclidPoly {
    b.substitute(&[e(X21), trace(), det()]).expect("polynomial images")
}

pub fn fiber_to_spectral(b: &FiberPoly) -> SpectralPoly {
    b.substitute(&[sp(1), sp(2), sp(3)]).expect("polynomial images")
}

/// Swap `x12` and `x21`, i.e. precompose with transposition.
pub fn transpose(q: &EuclidPoly) -> EuclidPoly {
    q.substitute(&[e(X11), e(X21), e(X12), e(X22)]).expect("polynomial images")
}

/// Read a balanced Euclidean polynomial (equal `x12` and `x21` exponents in
/// every term) as a polynomial in `(u1, u2, u3)`.
pub fn euclid_to_invariant(q: &EuclidPoly) -> Option<InvariantPoly> {
    let terms = q
        .terms()
        .map(|(m, c)| {
            let [a, b, c21, d, ..] = m.0;
            (b == c21).then(|| (Monomial::from_slice(&[a, d, b]), c.clone()))
        })
        .collect::<Option<alloc::vec::Vec<_>>>()?;
    InvariantPoly::from_terms(terms).ok()
}

/// Read a spectral polynomial without `x` and with non-negative `y` powers as
/// a polynomial in `(y, s, p)`.
pub fn spectral_to_fiber(q: &SpectralPoly) -> Option<FiberPoly> {
    let terms = q
        .terms()
        .map(|(m, c)| {
            let [x, y, s, p, ..] = m.0;
            (x == 0 && y >= 0).then(|| (Monomial::from_slice(&[y, s, p]), c.clone()))
        })
        .collect::<Option<alloc::vec::Vec<_>>>()?;
    FiberPoly::from_terms(terms).ok()
}

/// Chain-rule image of `d/dx_ij` in spectral coordinates, applied to `q`.
///
/// `d/dx11 = d/dx + d/ds + (s - x) d/dp`, `d/dx12 = d/dy - x21 d/dp`,
/// `d/dx21 = -y d/dp`, `d/dx22 = d/ds + x d/dp`.
pub fn spectral_entry_derivative(q: &SpectralPoly, entry: usize) -> SpectralPoly {
    let (x, y, s) = (sp(0), sp(1), sp(2));
    let dx = q.derivative(0);
    let dy = q.derivative(1);
    let ds = q.derivative(2);
    let dp = q.derivative(3);
    match entry {
        X11 => &(&dx + &ds) + &(&(&s - &x) * &dp),
        X12 => {
            let x21 = &spectral_offdiag_product() * &y_inverse();
            &dy - &(&x21 * &dp)
        }
        X21 => -&(&y * &dp),
        X22 => &ds + &(&x * &dp),
        _ => panic!("entry index out of range"),
    }
}

/// Images of the four entries, handy for tests and printing.
pub fn entry_images() -> [SpectralPoly; 4] {
    let x21 = &spectral_offdiag_product() * &y_inverse();
    [sp(0), sp(1), x21, &sp(2) - &sp(0)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_maps_to_p() {
        assert_eq!(to_spectral(&det()), sp(3));
        assert_eq!(to_spectral(&e(X11)), sp(0));
        assert_eq!(to_spectral(&trace()), sp(2));
    }

    #[test]
    fn x21_image_expanded() {
        // (x s - x^2 - p) * y^-1, expanded by hand
        let x = sp(0);
        let s = sp(2);
        let p = sp(3);
        let expected = &(&(&(&x * &s) - &x.pow(2)) - &p) * &y_inverse();
        assert_eq!(to_spectral(&e(X21)), expected);
        assert_eq!(from_spectral(&expected).unwrap(), e(X21));
    }

    #[test]
    fn p_maps_back_to_det() {
        assert_eq!(from_spectral(&sp(3)).unwrap(), det());
    }

    #[test]
    fn y_inverse_has_no_preimage() {
        assert_eq!(from_spectral(&y_inverse()), Err(PolyError::NotPolynomial { var: "y" }));
    }

    #[test]
    fn invariant_embeddings() {
        let u3 = InvariantPoly::var(2);
        assert_eq!(invariant_to_euclid(&u3), &e(X12) * &e(X21));
        assert_eq!(invariant_to_spectral(&u3), spectral_offdiag_product());
        let tr = &InvariantPoly::var(0) + &InvariantPoly::var(1);
        assert_eq!(invariant_to_spectral(&tr), sp(2));
    }

    #[test]
    fn balanced_readback() {
        let q = &(&e(X12) * &e(X21)) * &e(X11);
        let u = euclid_to_invariant(&q).unwrap();
        assert_eq!(u, &InvariantPoly::var(0) * &InvariantPoly::var(2));
        assert!(euclid_to_invariant(&e(X12)).is_none());
    }
}
