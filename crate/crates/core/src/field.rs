//! Polynomial vector fields on 2x2 matrix space.
//!
//! A field is the derivation `v1 d/dx11 + v2 d/dx12 + v3 d/dx21 + v4 d/dx22`.
//! The Lie bracket is `[V, W](q) = V(W(q)) - W(V(q))`.

use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::chart;
use crate::coeff::ExactComplex;
use crate::poly::{EuclidPoly, FiberPoly, InvariantPoly, NumPoly, PolyError, SpectralPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("field is not orthogonal to trace and determinant")]
    NotOrthogonal,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Component index names, in order.
pub const COMPONENT_NAMES: [&str; 4] = ["d11", "d12", "d21", "d22"];

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct VectorField {
    pub v: [EuclidPoly; 4],
}

impl VectorField {
    pub fn new(v1: EuclidPoly, v2: EuclidPoly, v3: EuclidPoly, v4: EuclidPoly) -> Self {
        Self { v: [v1, v2, v3, v4] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(EuclidPoly::is_zero)
    }

    /// `sum_i v_i * dq/dx_i`.
    pub fn apply(&self, q: &EuclidPoly) -> EuclidPoly {
        let mut acc = EuclidPoly::zero();
        for (i, vi) in self.v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            let d = q.derivative(i);
            if !d.is_zero() {
                acc = &acc + &(vi * &d);
            }
        }
        acc
    }

    pub fn bracket(&self, other: &VectorField) -> VectorField {
        lie_bracket(self, other)
    }

    pub fn scale(&self, c: &ExactComplex) -> VectorField {
        VectorField { v: self.v.clone().map(|p| p.scale(c)) }
    }

    pub fn degree(&self) -> Option<i32> {
        self.v.iter().filter_map(EuclidPoly::degree).max()
    }

    /// Euclidean divergence `sum_i dv_i/dx_i`.
    pub fn divergence(&self) -> EuclidPoly {
        let mut acc = EuclidPoly::zero();
        for (i, vi) in self.v.iter().enumerate() {
            acc = &acc + &vi.derivative(i);
        }
        acc
    }

    /// `(V(tr), V(det))`; both vanish exactly for an orthogonal field.
    pub fn orthogonality_defects(&self) -> (EuclidPoly, EuclidPoly) {
        (self.apply(&chart::trace()), self.apply(&chart::det()))
    }

    pub fn is_orthogonal(&self) -> bool {
        let (t, d) = self.orthogonality_defects();
        t.is_zero() && d.is_zero()
    }

    /// `P d/dx + Q d/dy` with `P = v1`, `Q = v2` in spectral coordinates.
    pub fn to_spectral(&self) -> Result<SpectralField, FieldError> {
        if !self.is_orthogonal() {
            return Err(FieldError::NotOrthogonal);
        }
        Ok(SpectralField {
            p: chart::to_spectral(&self.v[0]),
            q: chart::to_spectral(&self.v[1]),
        })
    }

    /// Spectral-chart divergence `dP/dx + dQ/dy - Q/y`.
    pub fn divergence_spectral(&self) -> Result<SpectralPoly, FieldError> {
        Ok(self.to_spectral()?.divergence())
    }

    /// Conjugate by transposition: `(tau V tau)(x) = V(x^t)^t`.
    pub fn transpose(&self) -> VectorField {
        let [v1, v2, v3, v4] = &self.v;
        VectorField::new(
            chart::transpose(v1),
            chart::transpose(v3),
            chart::transpose(v2),
            chart::transpose(v4),
        )
    }

    pub fn compile(&self) -> NumField {
        NumField { v: [self.v[0].compile(), self.v[1].compile(), self.v[2].compile(), self.v[3].compile()] }
    }
}

/// Component `i` of `[V, W]` is `V(w_i) - W(v_i)`.
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> VectorField {
    let mut out = VectorField::zero();
    for i in 0..4 {
        out.v[i] = &v.apply(&w.v[i]) - &w.apply(&v.v[i]);
    }
    out
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, o: &VectorField) -> VectorField {
        VectorField { v: core::array::from_fn(|i| &self.v[i] + &o.v[i]) }
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, o: &VectorField) -> VectorField {
        VectorField { v: core::array::from_fn(|i| &self.v[i] - &o.v[i]) }
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField { v: core::array::from_fn(|i| -&self.v[i]) }
    }
}

/// Field text format: `d11: <poly>; d12: <poly>; d21: <poly>; d22: <poly>`.
impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, p)) in COMPONENT_NAMES.iter().zip(self.v.iter()).enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", name, p)?;
        }
        Ok(())
    }
}

/// Orthogonal field in spectral coordinates: `P d/dx + Q d/dy`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SpectralField {
    pub p: SpectralPoly,
    pub q: SpectralPoly,
}

impl SpectralField {
    pub fn divergence(&self) -> SpectralPoly {
        let y_inv = SpectralPoly::term(
            crate::poly::Monomial::from_slice(&[0, -1, 0, 0]),
            ExactComplex::from_int(1),
        );
        &(&self.p.derivative(0) + &self.q.derivative(1)) - &(&self.q * &y_inv)
    }

    /// Back to matrix entries; `v3` is recovered from `V(det) = 0`.
    pub fn to_euclid(&self) -> Result<VectorField, FieldError> {
        let [x, _, x21, _] = chart::entry_images();
        let s = SpectralPoly::var(2);
        let y_inv = SpectralPoly::term(
            crate::poly::Monomial::from_slice(&[0, -1, 0, 0]),
            ExactComplex::from_int(1),
        );
        // v1 (x22 - x11) = v2 x21 + v3 x12
        let x22_minus_x11 = &s - &x.scale(&ExactComplex::from_int(2));
        let v3 = &(&(&self.p * &x22_minus_x11) - &(&self.q * &x21)) * &y_inv;
        let v1 = chart::from_spectral(&self.p)?;
        Ok(VectorField::new(
            v1.clone(),
            chart::from_spectral(&self.q)?,
            chart::from_spectral(&v3)?,
            -&v1,
        ))
    }
}

impl fmt::Display for SpectralField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dx: {}; dy: {}", self.p, self.q)
    }
}

/// Infinitesimal generators of the elementary conjugation families.
///
/// `Diag(a)` generates conjugation by `diag(e^{ta/2}, e^{-ta/2})`, `Shear(b)`
/// by the lower unipotent matrix with entry `t*b(x12, tr, det)`, and `Over(a)`
/// the overshear whose lower entry is `x11 (1 - exp(t x12 a)) / x12`. The
/// `T` variants are the same families conjugated by transposition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Generator {
    Diag(InvariantPoly),
    Shear(FiberPoly),
    ShearT(FiberPoly),
    Over(FiberPoly),
    OverT(FiberPoly),
}

type Mat = [[EuclidPoly; 2]; 2];

fn zero_mat() -> Mat {
    Default::default()
}

/// `t`-derivative at `t = 0` of the conjugating matrix family.
pub fn conjugator_derivative(g: &Generator) -> Mat {
    let half = ExactComplex::from_frac(1, 2);
    let x11 = EuclidPoly::var(0);
    let mut d = zero_mat();
    match g {
        Generator::Diag(a) => {
            let a = chart::invariant_to_euclid(a).scale(&half);
            d[1][1] = -&a;
            d[0][0] = a;
        }
        Generator::Shear(b) => d[1][0] = chart::fiber_to_euclid(b),
        Generator::Over(a) => d[1][0] = -&(&x11 * &chart::fiber_to_euclid(a)),
        // tau o Phi_t o tau conjugates by P(x^t)^{-t}, derivative -P'(x^t)^t
        Generator::ShearT(b) => d[0][1] = -&chart::fiber_to_euclid_transposed(b),
        Generator::OverT(a) => d[0][1] = &x11 * &chart::fiber_to_euclid_transposed(a),
    }
    d
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = zero_mat();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        }
    }
    out
}

fn entries() -> Mat {
    [
        [EuclidPoly::var(0), EuclidPoly::var(1)],
        [EuclidPoly::var(2), EuclidPoly::var(3)],
    ]
}

/// Generator field `x -> D x - x D` with `D` from [`conjugator_derivative`].
pub fn make_generator(g: &Generator) -> VectorField {
    let d = conjugator_derivative(g);
    let x = entries();
    let dx = mat_mul(&d, &x);
    let xd = mat_mul(&x, &d);
    VectorField::new(
        &dx[0][0] - &xd[0][0],
        &dx[0][1] - &xd[0][1],
        &dx[1][0] - &xd[1][0],
        &dx[1][1] - &xd[1][1],
    )
}

/// Floating-point evaluation form of a field.
#[derive(Clone, Debug)]
pub struct NumField {
    pub v: [NumPoly; 4],
}

impl NumField {
    /// Components at the matrix with entries `[x11, x12, x21, x22]`.
    pub fn eval(&self, m: &[num_complex::Complex64; 4]) -> [num_complex::Complex64; 4] {
        core::array::from_fn(|i| self.v[i].eval(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn e(i: usize) -> EuclidPoly {
        EuclidPoly::var(i)
    }

    fn hd(a: InvariantPoly) -> VectorField {
        make_generator(&Generator::Diag(a))
    }

    #[test]
    fn diag_generator_matches_display() {
        let a = &InvariantPoly::var(0) + &InvariantPoly::var(2);
        let ae = chart::invariant_to_euclid(&a);
        let v = hd(a);
        assert_eq!(v, VectorField::new(EuclidPoly::zero(), &ae * &e(1), -&(&ae * &e(2)), EuclidPoly::zero()));
        assert_eq!(hd(InvariantPoly::one()).apply(&e(1)), e(1));
    }

    #[test]
    fn shear_generator_by_commutator() {
        let b = FiberPoly::var(2);
        let be = chart::fiber_to_euclid(&b);
        let v = make_generator(&Generator::Shear(b));
        assert_eq!(v.v[0], -&(&be * &e(1)));
        assert!(v.v[1].is_zero());
        assert_eq!(v.v[2], &be * &(&e(0) - &e(3)));
        assert_eq!(v.v[3], &be * &e(1));
    }

    #[test]
    fn overshear_fourth_component_is_minus_first() {
        let v = make_generator(&Generator::Over(FiberPoly::one()));
        assert_eq!(v.v[0], &e(0) * &e(1));
        assert_eq!(v.v[2], &(&e(3) - &e(0)) * &e(0));
        assert_eq!(v.v[3], -&(&e(0) * &e(1)));
    }

    #[test]
    fn transposed_generators_are_tau_conjugates() {
        let b = &FiberPoly::var(0) + &FiberPoly::var(1);
        assert_eq!(
            make_generator(&Generator::ShearT(b.clone())),
            make_generator(&Generator::Shear(b.clone())).transpose()
        );
        assert_eq!(
            make_generator(&Generator::OverT(b.clone())),
            make_generator(&Generator::Over(b)).transpose()
        );
    }

    #[test]
    fn not_orthogonal_example() {
        let v = VectorField::new(e(0), EuclidPoly::zero(), EuclidPoly::zero(), EuclidPoly::zero());
        assert_eq!(v.apply(&chart::trace()), e(0));
        assert!(!v.is_orthogonal());
        assert_eq!(v.divergence_spectral(), Err(FieldError::NotOrthogonal));
    }

    #[test]
    fn bracket_hd_ht_units() {
        // hand expansion: [HD_1, HT_1]_1 = HD_1(-x12) = -x12, i.e. -y d/dx
        let br = lie_bracket(&hd(InvariantPoly::one()), &make_generator(&Generator::Shear(FiberPoly::one())));
        let sf = br.to_spectral().unwrap();
        assert_eq!(sf.p, -&SpectralPoly::var(1));
        assert!(sf.q.is_zero());
        assert_eq!(br.v[0], -&e(1));
    }

    #[test]
    fn bracket_hd_over_matches_display() {
        // [HD_x, HT'_1] = x y a (yb)' d/dx - x y^2 a'_x b d/dy with a = x, b = 1
        let br = lie_bracket(&hd(InvariantPoly::var(0)), &make_generator(&Generator::Over(FiberPoly::one())));
        let sf = br.to_spectral().unwrap();
        let x = SpectralPoly::var(0);
        let y = SpectralPoly::var(1);
        assert_eq!(sf.p, &x.pow(2) * &y);
        assert_eq!(sf.q, -&(&x * &y.pow(2)));
        assert_eq!(sf.divergence(), &x * &y);
    }

    #[test]
    fn spectral_roundtrip_of_generator() {
        let v = make_generator(&Generator::OverT(FiberPoly::var(1)));
        assert_eq!(v.to_spectral().unwrap().to_euclid().unwrap(), v);
    }

    #[test]
    fn diag_divergence_vanishes() {
        let a = InvariantPoly::term(Monomial::from_slice(&[1, 2, 3]), ExactComplex::from_int(5));
        assert!(hd(a).divergence().is_zero());
    }

    #[test]
    fn display_field() {
        let v = hd(InvariantPoly::one());
        assert_eq!(alloc::format!("{}", v), "d11: 0; d12: x12; d21: -x21; d22: 0");
    }
}
