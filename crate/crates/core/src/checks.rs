//! Seeded numeric sweeps over the elementary maps.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// shadowed by inherent float methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::ExactComplex;
use crate::flow::probe_set;
use crate::poly::{Fiber, Invariant, Monomial, Poly, Ring};
use crate::specball::{
    commutant_dimension, commutant_solve, is_cyclic, mobius_scalar, spectrum, CompositionWord, ElementaryMap,
    Matrix2, SpectrumPair,
};

/// Pointwise tolerance for group laws and spectrum checks.
pub const GROUP_LAW_TOL: f64 = 1e-10;
pub const COMMUTANT_TOL: f64 = 1e-8;
/// Relative pivot threshold for the commutant rank.
pub const RANK_TOL: f64 = 1e-10;

fn small_poly<R: Ring, G: Rng + ?Sized>(rng: &mut G, max_degree: i32) -> Poly<R> {
    let mut p = Poly::<R>::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut exps = [0i32; 3];
        let mut left = rng.gen_range(0..=max_degree);
        for e in exps.iter_mut().take(R::nvars()) {
            let k = rng.gen_range(0..=left);
            *e = k;
            left -= k;
        }
        let num = rng.gen_range(-4..=4i64);
        p = &p + &Poly::term(Monomial::from_slice(&exps[..R::nvars()]), ExactComplex::from_frac(num, 4));
    }
    p
}

fn random_conjugation<G: Rng + ?Sized>(rng: &mut G, family: usize, t: f64) -> ElementaryMap {
    match family {
        0 => ElementaryMap::diag(small_poly::<Invariant, _>(rng, 2), t),
        1 => ElementaryMap::shear(small_poly::<Fiber, _>(rng, 2), t),
        2 => ElementaryMap::over(small_poly::<Fiber, _>(rng, 2), t),
        3 => ElementaryMap::shear_t(small_poly::<Fiber, _>(rng, 2), t),
        _ => ElementaryMap::over_t(small_poly::<Fiber, _>(rng, 2), t),
    }
}

pub const FAMILIES: [&str; 5] = ["diagonal", "shear", "overshear", "shear (transposed)", "overshear (transposed)"];

#[derive(Clone, Debug, PartialEq)]
pub struct GroupLawResult {
    pub family: &'static str,
    pub samples: usize,
    /// Max of `|E(t) E(s) M - E(t+s) M|` relative to `max(1, |M|)`.
    pub max_error: f64,
}

impl GroupLawResult {
    pub fn passed(&self) -> bool {
        self.max_error <= GROUP_LAW_TOL
    }
}

impl fmt::Display for GroupLawResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} group law {:<24} samples={:<5} max error {:.3e}",
            if self.passed() { "ok  " } else { "FAIL" },
            self.family,
            self.samples,
            self.max_error
        )
    }
}

/// `E(t) o E(s) = E(t + s)` for each conjugation family on seeded samples.
pub fn group_law_sweep(seed: u64, samples: usize) -> Vec<GroupLawResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = probe_set(seed ^ 0x9e37_79b9, samples, 0.8);
    (0..FAMILIES.len())
        .map(|family| {
            let mut max_error = 0.0f64;
            for m in &points {
                let t = rng.gen_range(-1.0..1.0);
                let s = rng.gen_range(-1.0..1.0);
                let e = random_conjugation(&mut rng, family, t);
                let es = e.with_time(s).expect("timed");
                let ets = e.with_time(t + s).expect("timed");
                let lhs = e.apply(&es.apply(m).expect("conjugation")).expect("conjugation");
                let rhs = ets.apply(m).expect("conjugation");
                max_error = max_error.max(lhs.max_abs_diff(&rhs) / rhs.max_abs().max(1.0));
            }
            GroupLawResult { family: FAMILIES[family], samples, max_error }
        })
        .collect()
}

/// Random point of the ball with spectral radius below `radius`.
pub fn ball_sample<G: Rng + ?Sized>(rng: &mut G, radius: f64) -> Matrix2 {
    loop {
        let m = Matrix2::from_entries([0; 4].map(|_| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))));
        if spectrum(&m).radius() < radius {
            return m;
        }
    }
}

/// Random word of `len` maps. Möbius maps are included when `mobius` is set.
pub fn random_word<G: Rng + ?Sized>(rng: &mut G, len: usize, mobius: bool) -> CompositionWord {
    let kinds = if mobius { 7 } else { 6 };
    let maps = (0..len)
        .map(|_| match rng.gen_range(0..kinds) {
            5 => ElementaryMap::Transpose,
            6 => {
                let r = rng.gen_range(0.0..0.5);
                let th: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
                let ph: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
                ElementaryMap::Mobius { alpha: Complex64::from_polar(r, th), gamma: Complex64::from_polar(1.0, ph) }
            }
            k => {
                let t = rng.gen_range(-0.5..0.5);
                random_conjugation(rng, k, t)
            }
        })
        .collect();
    CompositionWord::new(maps)
}

/// Spectrum predicted by applying the scalar Möbius maps of the word.
pub fn predicted_spectrum(w: &CompositionWord, m: &Matrix2) -> SpectrumPair {
    let mut s = spectrum(m);
    for e in w.maps.iter().rev() {
        if let ElementaryMap::Mobius { alpha, gamma } = e {
            s = s.map(|z| mobius_scalar(*alpha, *gamma, z));
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSweep {
    pub samples: usize,
    pub word_len: usize,
    pub with_mobius: bool,
    pub max_drift: f64,
    /// Largest entry met along any word.
    pub max_entry: f64,
}

impl SpectrumSweep {
    pub fn passed(&self) -> bool {
        self.max_drift <= GROUP_LAW_TOL
    }
}

impl fmt::Display for SpectrumSweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} spectrum {:<18} samples={:<5} words of {} maps, max drift {:.3e}, max entry {:.3e}",
            if self.passed() { "ok  " } else { "FAIL" },
            if self.with_mobius { "(with Mobius)" } else { "(conjugations)" },
            self.samples,
            self.word_len,
            self.max_drift,
            self.max_entry
        )
    }
}

/// Eigenvalue drift of random words on random points of the ball.
pub fn spectrum_sweep(seed: u64, samples: usize, word_len: usize, with_mobius: bool) -> SpectrumSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_drift = 0.0f64;
    let mut max_entry = 0.0f64;
    for _ in 0..samples {
        let m = ball_sample(&mut rng, 0.95);
        let w = random_word(&mut rng, word_len, with_mobius);
        let (out, peak) = w.apply_traced(&m).expect("points of the ball");
        max_entry = max_entry.max(peak);
        max_drift = max_drift.max(spectrum(&out).distance(&predicted_spectrum(&w, &m)));
    }
    SpectrumSweep { samples, word_len, with_mobius, max_drift, max_entry }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutantSweep {
    pub samples: usize,
    /// Max of `|a - a0| + |b - b0|` over constructed instances.
    pub max_error: f64,
    pub failures: usize,
    pub rank_failures: usize,
}

impl CommutantSweep {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.rank_failures == 0 && self.max_error <= COMMUTANT_TOL
    }
}

impl fmt::Display for CommutantSweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} commutant samples={:<5} max (a,b) error {:.3e}, solve failures {}, rank failures {}",
            if self.passed() { "ok  " } else { "FAIL" },
            self.samples,
            self.max_error,
            self.failures,
            self.rank_failures
        )
    }
}

fn random_complex<G: Rng + ?Sized>(rng: &mut G) -> Complex64 {
    Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// Recover constructed `(a, b)` from `P = (a + b X) Q` and check the
/// commutant dimension (2 for cyclic `X`, 4 for scalar).
pub fn commutant_sweep(seed: u64, samples: usize) -> CommutantSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CommutantSweep { samples, max_error: 0.0, failures: 0, rank_failures: 0 };
    let mut done = 0;
    while done < samples {
        let x = ball_sample(&mut rng, 0.95);
        let q = Matrix2::from_entries([0; 4].map(|_| random_complex(&mut rng)));
        let (a, b) = (random_complex(&mut rng), random_complex(&mut rng));
        let r = Matrix2::identity().scale(a) + x.scale(b);
        if !is_cyclic(&x) || q.condition_number() > 1e3 || r.condition_number() > 1e3 {
            continue;
        }
        done += 1;
        match commutant_solve(&(r * q), &q, &x) {
            Ok((ra, rb)) => out.max_error = out.max_error.max((ra - a).norm() + (rb - b).norm()),
            Err(_) => out.failures += 1,
        }
        if commutant_dimension(&x, RANK_TOL) != 2 {
            out.rank_failures += 1;
        }
        let scalar = Matrix2::scalar(x.a11);
        if commutant_dimension(&scalar, RANK_TOL) != 4 {
            out.rank_failures += 1;
        }
    }
    out
}
