use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::EllipticError;

/// An element `[[a, b], [c, d]]` of SL(2, Z), acting on the upper half-plane
/// by `τ ↦ (aτ + b)/(cτ + d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "[[i64; 2]; 2]")]
pub struct Sl2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl From<Sl2Z> for [[i64; 2]; 2] {
    fn from(m: Sl2Z) -> Self {
        [[m.a, m.b], [m.c, m.d]]
    }
}

impl Sl2Z {
    pub const IDENTITY: Sl2Z = Sl2Z { a: 1, b: 0, c: 0, d: 1 };
    /// `τ ↦ −1/τ`.
    pub const S: Sl2Z = Sl2Z { a: 0, b: -1, c: 1, d: 0 };

    /// Returns `None` unless `ad − bc = 1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        (a * d - b * c == 1).then_some(Self { a, b, c, d })
    }

    /// `τ ↦ τ + n`.
    pub fn translation(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn compose(&self, rhs: &Sl2Z) -> Sl2Z {
        Sl2Z {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn inverse(&self) -> Sl2Z {
        Sl2Z {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (self.a as f64 * tau + self.b as f64) / (self.c as f64 * tau + self.d as f64)
    }
}

impl fmt::Display for Sl2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A point of the upper half-plane with the SL(2, Z) word that produced it
/// from the originally supplied modulus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauPoint {
    pub tau: Complex64,
    pub reducing_word: Sl2Z,
}

impl TauPoint {
    pub fn new(tau: Complex64) -> Result<Self, EllipticError> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(EllipticError::NotInUpperHalfPlane { re: tau.re, im: tau.im });
        }
        Ok(Self {
            tau,
            reducing_word: Sl2Z::IDENTITY,
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.tau.re.abs() <= 0.5 + 1e-12 && self.tau.norm() >= 1.0 - 1e-12
    }
}

const MAX_REDUCTION_STEPS: usize = 10_000;

/// Moves `τ` into `|Re τ| ≤ ½, |τ| ≥ 1` by alternating integer translations
/// and `τ ↦ −1/τ`. The returned word composes onto the input's word, so it
/// always maps the original modulus to the result.
pub fn reduce_to_fundamental_domain(t: &TauPoint) -> Result<TauPoint, EllipticError> {
    let mut tau = t.tau;
    if !(tau.im > 0.0) {
        return Err(EllipticError::NotInUpperHalfPlane { re: tau.re, im: tau.im });
    }
    let mut word = Sl2Z::IDENTITY;
    for _ in 0..MAX_REDUCTION_STEPS {
        let shift = tau.re.round();
        if shift != 0.0 {
            tau -= shift;
            word = Sl2Z::translation(-(shift as i64)).compose(&word);
        }
        if tau.norm_sqr() < 1.0 {
            tau = -1.0 / tau;
            word = Sl2Z::S.compose(&word);
        } else {
            return Ok(TauPoint {
                tau,
                reducing_word: word.compose(&t.reducing_word),
            });
        }
    }
    Err(EllipticError::ReductionDidNotTerminate { re: t.tau.re, im: t.tau.im })
}

/// `σ_k(n) = Σ_{d | n} d^k`.
fn divisor_power_sum(n: usize, k: i32) -> f64 {
    let mut s = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += (d as f64).powi(k);
            let e = n / d;
            if e != d {
                s += (e as f64).powi(k);
            }
        }
        d += 1;
    }
    s
}

/// `E4 = 1 + 240 Σ σ3(n) qⁿ` and `E6 = 1 − 504 Σ σ5(n) qⁿ`, truncated after
/// `terms` terms; the tail is `O(|q|^{terms+1})`.
pub fn eisenstein_e4_e6(tau: Complex64, terms: usize) -> (Complex64, Complex64) {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut e4 = Complex64::new(1.0, 0.0);
    let mut e6 = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        qn *= q;
        e4 += 240.0 * divisor_power_sum(n, 3) * qn;
        e6 -= 504.0 * divisor_power_sum(n, 5) * qn;
    }
    (e4, e6)
}

/// `j(τ) = 1728·E4³/(E4³ − E6²)`.
pub fn j_of_tau(t: &TauPoint, terms: usize) -> Complex64 {
    let (e4, e6) = eisenstein_e4_e6(t.tau, terms);
    let e4_cubed = e4 * e4 * e4;
    1728.0 * e4_cubed / (e4_cubed - e6 * e6)
}
