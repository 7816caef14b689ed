//! Sparse multivariate polynomials with exact complex-rational coefficients.
//!
//! A polynomial is tagged with a zero-sized [`Ring`] marker that names its
//! variables and says which of them may carry negative (Laurent) exponents.
//! Mixing rings is a type error; moving between rings goes through the
//! substitutions in [`crate::chart`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::marker::PhantomData;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::coeff::ExactComplex;

/// Upper bound on the number of variables of any ring.
pub const MAX_VARS: usize = 8;

/// Default working cap on total degree used by the decomposition pipeline.
pub const DEFAULT_DEGREE_CAP: i32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("result is not a polynomial (negative power of `{var}` survives)")]
    NotPolynomial { var: &'static str },
    #[error("negative exponent on non-Laurent variable `{var}`")]
    NegativeExponent { var: &'static str },
    #[error("total degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: i32, cap: i32 },
}

/// Variable set of a polynomial ring.
pub trait Ring: Copy + Clone + Eq + Ord + Default + fmt::Debug + Send + Sync + 'static {
    const NAMES: &'static [&'static str];
    /// Per-variable flag: may the exponent be negative.
    const LAURENT: &'static [bool];

    fn nvars() -> usize {
        Self::NAMES.len()
    }

    fn index_of(name: &str) -> Option<usize> {
        Self::NAMES.iter().position(|n| *n == name)
    }
}

macro_rules! ring {
    ($(#[$m:meta])* $name:ident, [$($v:expr),+], [$($l:expr),+]) => {
        $(#[$m])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
        pub struct $name;
        impl Ring for $name {
            const NAMES: &'static [&'static str] = &[$($v),+];
            const LAURENT: &'static [bool] = &[$($l),+];
        }
    };
}

ring!(
    /// Matrix entries `x11, x12, x21, x22`.
    Euclid, ["x11", "x12", "x21", "x22"], [false, false, false, false]
);
ring!(
    /// Spectral chart `(x, y, s, p) = (x11, x12, tr, det)`, Laurent in `y`.
    Spectral, ["x", "y", "s", "p"], [false, true, false, false]
);
ring!(
    /// Conjugation invariants `(u1, u2, u3) = (x11, x22, x12*x21)`.
    Invariant, ["u1", "u2", "u3"], [false, false, false]
);
ring!(
    /// Triangular-symbol ring `(y, s, p) = (x12, tr, det)`.
    Fiber, ["y", "s", "p"], [false, false, false]
);
ring!(
    /// Matrix entries together with the entries of a conjugating matrix.
    Conjugation,
    ["x11", "x12", "x21", "x22", "p11", "p12", "p21", "p22"],
    [false, false, false, false, false, false, false, false]
);

pub type EuclidPoly = Poly<Euclid>;
pub type SpectralPoly = Poly<Spectral>;
pub type InvariantPoly = Poly<Invariant>;
pub type FiberPoly = Poly<Fiber>;

/// Exponent vector. Slots beyond the ring's variable count stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [i32; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Self([0; MAX_VARS])
    }

    pub fn var(i: usize, e: i32) -> Self {
        let mut m = Self::one();
        m.0[i] = e;
        m
    }

    pub fn from_slice(exps: &[i32]) -> Self {
        let mut m = Self::one();
        m.0[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        m
    }
}

/// Graded lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in canonical form: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R: Ring> {
    terms: BTreeMap<Monomial, ExactComplex>,
    ring: PhantomData<R>,
}

impl<R: Ring> Default for Poly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<R: Ring> Poly<R> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), ring: PhantomData }
    }

    pub fn one() -> Self {
        Self::constant(ExactComplex::one())
    }

    pub fn constant(c: ExactComplex) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(ExactComplex::from_int(n))
    }

    /// The `i`-th variable. Panics if `i` is out of range for the ring.
    pub fn var(i: usize) -> Self {
        assert!(i < R::nvars(), "variable index {} out of range", i);
        Self::term(Monomial::var(i, 1), ExactComplex::one())
    }

    pub fn var_named(name: &str) -> Option<Self> {
        R::index_of(name).map(Self::var)
    }

    /// Single term. Panics on a negative exponent of a non-Laurent variable.
    pub fn term(m: Monomial, c: ExactComplex) -> Self {
        Self::try_term(m, c).expect("invalid monomial")
    }

    pub fn try_term(m: Monomial, c: ExactComplex) -> Result<Self, PolyError> {
        Self::check_monomial(&m)?;
        let mut p = Self::zero();
        p.add_term(m, c);
        Ok(p)
    }

    fn check_monomial(m: &Monomial) -> Result<(), PolyError> {
        for (i, &e) in m.0.iter().enumerate() {
            if i >= R::nvars() {
                assert_eq!(e, 0, "exponent outside the ring");
            } else if e < 0 && !R::LAURENT[i] {
                return Err(PolyError::NegativeExponent { var: R::NAMES[i] });
            }
        }
        Ok(())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ExactComplex)>>(
        terms: I,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero();
        for (m, c) in terms {
            Self::check_monomial(&m)?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: ExactComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ExactComplex)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ExactComplex {
        self.terms.get(m).cloned().unwrap_or_else(ExactComplex::zero)
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest exponent of variable `i` over all terms (0 for zero).
    pub fn min_exponent(&self, i: usize) -> i32 {
        self.terms.keys().map(|m| m.0[i]).min().unwrap_or(0)
    }

    pub fn max_exponent(&self, i: usize) -> i32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
            ring: PhantomData,
        }
    }

    /// Multiply by a monomial. Fails if a non-Laurent exponent goes negative.
    pub fn shift(&self, by: &Monomial) -> Result<Self, PolyError> {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.mul(by), c.clone())))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.0[i] -= 1;
            out.add_term(m2, c * &ExactComplex::from_int(e as i64));
        }
        out
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    ///
    /// A negative exponent is only allowed when the image of that variable is
    /// a single term that is invertible in the target ring.
    pub fn substitute<S: Ring>(&self, images: &[Poly<S>]) -> Result<Poly<S>, PolyError> {
        assert_eq!(images.len(), R::nvars());
        let mut inverses: Vec<Option<Poly<S>>> = Vec::with_capacity(images.len());
        for img in images {
            inverses.push(img.monomial_inverse());
        }
        let mut cache: Vec<BTreeMap<i32, Poly<S>>> = (0..images.len()).map(|_| BTreeMap::new()).collect();
        let mut out = Poly::<S>::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::<S>::constant(c.clone());
            for i in 0..R::nvars() {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                if !cache[i].contains_key(&e) {
                    let base = if e > 0 {
                        images[i].clone()
                    } else {
                        inverses[i].clone().ok_or(PolyError::NotPolynomial { var: R::NAMES[i] })?
                    };
                    cache[i].insert(e, base.pow(e.unsigned_abs()));
                }
                t = &t * &cache[i][&e];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Inverse of a single-term polynomial, if it exists in this ring.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        let mut inv = Monomial::one();
        for i in 0..R::nvars() {
            inv.0[i] = -m.0[i];
        }
        Self::try_term(inv, c.inv()?).ok()
    }

    /// Numeric evaluation form.
    pub fn compile(&self) -> NumPoly {
        NumPoly {
            nvars: R::nvars(),
            terms: self.terms.iter().map(|(m, c)| (*m, c.to_complex64())).collect(),
        }
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.compile().eval(point)
    }

    /// Substitute exact values for all variables.
    pub fn eval_exact(&self, point: &[ExactComplex]) -> ExactComplex {
        let mut acc = ExactComplex::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in point.iter().enumerate().take(R::nvars()) {
                let e = m.0[i];
                if e > 0 {
                    t *= &v.pow(e as u32);
                } else if e < 0 {
                    t *= &v.inv().expect("negative power of zero").pow((-e) as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn check_degree(&self, cap: i32) -> Result<(), PolyError> {
        match self.degree() {
            Some(d) if d > cap => Err(PolyError::DegreeCap { degree: d, cap }),
            _ => Ok(()),
        }
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, o: &Poly<R>) -> Poly<R> {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, o: &Poly<R>) -> Poly<R> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, o: &Poly<R>) -> Poly<R> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
            ring: PhantomData,
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl<R: Ring> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $f(self, o: Poly<R>) -> Poly<R> { (&self).$f(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        -&self
    }
}

fn fmt_monomial<R: Ring>(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, name) in R::NAMES.iter().enumerate() {
        let e = m.0[i];
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(name)?;
        if e != 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

/// Highest-degree term first, e.g. `x11^2 - 3/2*x12*x21 + (1+i)*x22 + 1`.
impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_like();
            let mag = if neg { -c } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                fmt_monomial::<R>(m, f)?;
            }
        }
        Ok(())
    }
}

/// Floating-point evaluation form of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct NumPoly {
    nvars: usize,
    terms: Vec<(Monomial, Complex64)>,
}

impl NumPoly {
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        debug_assert!(point.len() >= self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, z) in point.iter().enumerate().take(self.nvars) {
                let e = m.0[i];
                if e != 0 {
                    t *= z.powi(e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn x(i: usize) -> EuclidPoly {
        EuclidPoly::var(i)
    }

    #[test]
    fn difference_of_squares() {
        let a = &x(0) + &x(3);
        let b = &x(0) - &x(3);
        assert_eq!(&a * &b, &x(0).pow(2) - &x(3).pow(2));
    }

    #[test]
    fn partial_of_product() {
        assert_eq!((&x(1) * &x(2)).derivative(1), x(2));
    }

    #[test]
    fn derivative_of_y_times_b() {
        // d/dy (y * y^2) = 3 y^2
        let y = FiberPoly::var(0);
        let yb = &y * &y.pow(2);
        assert_eq!(yb.derivative(0), y.pow(2).scale(&ExactComplex::from_int(3)));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let p = &x(0) - &x(0);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
        assert_eq!(p, EuclidPoly::zero());
    }

    #[test]
    fn laurent_only_where_allowed() {
        assert!(SpectralPoly::try_term(Monomial::from_slice(&[0, -1, 0, 0]), ExactComplex::one()).is_ok());
        assert_eq!(
            SpectralPoly::try_term(Monomial::from_slice(&[-1, 0, 0, 0]), ExactComplex::one()),
            Err(PolyError::NegativeExponent { var: "x" })
        );
    }

    #[test]
    fn display_order_and_signs() {
        let p = &(&x(0).pow(2) - &x(1).scale(&ExactComplex::from_frac(3, 2))) + &EuclidPoly::int(-4);
        assert_eq!(p.to_string(), "x11^2 - 3/2*x12 - 4");
        let y = SpectralPoly::var(1);
        let inv = SpectralPoly::term(Monomial::from_slice(&[0, -2, 0, 0]), ExactComplex::i());
        assert_eq!((&y + &inv).to_string(), "y + i*y^-2");
    }

    #[test]
    fn numeric_matches_exact() {
        let p = &(&x(0) * &x(1)) + &x(3).pow(3).scale(&ExactComplex::from_frac(1, 3));
        let pt = [
            ExactComplex::from_frac(1, 2),
            ExactComplex::from_int(3),
            ExactComplex::zero(),
            ExactComplex::from_frac(-2, 5),
        ];
        let exact = p.eval_exact(&pt).to_complex64();
        let num = p.eval(&pt.iter().map(|c| c.to_complex64()).collect::<Vec<_>>());
        assert!((exact - num).norm() < 1e-14);
    }
}
