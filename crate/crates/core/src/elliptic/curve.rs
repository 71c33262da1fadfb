use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::EllipticError;
use crate::linalg::{rational_int, Rational};

/// The curve `y² = 4x³ − t2·x + t3`.
///
/// In classical Weierstrass notation `y² = 4x³ − g2·x − g3` this is
/// `g2 = t2`, `g3 = −t3`, so `Δ = t2³ − 27·t3²` and `j = 1728·t2³/Δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassCurve {
    t2: f64,
    t3: f64,
    exact: Option<(Rational, Rational)>,
}

impl WeierstrassCurve {
    pub fn new(t2: f64, t3: f64) -> Self {
        Self { t2, t3, exact: None }
    }

    /// Exact coefficients; singularity is then decided exactly.
    pub fn from_rationals(t2: Rational, t3: Rational) -> Self {
        Self {
            t2: t2.to_f64().unwrap_or(f64::NAN),
            t3: t3.to_f64().unwrap_or(f64::NAN),
            exact: Some((t2, t3)),
        }
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn t3(&self) -> f64 {
        self.t3
    }

    /// `(g2, g3) = (t2, −t3)`.
    pub fn classical_invariants(&self) -> (f64, f64) {
        (self.t2, -self.t3)
    }

    /// The curve `(λ⁴·t2, λ⁶·t3)`, isomorphic via `x → λ²x`, `y → λ³y`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self::new(lambda.powi(4) * self.t2, lambda.powi(6) * self.t3)
    }

    pub fn exact_discriminant(&self) -> Option<Rational> {
        let (t2, t3) = self.exact.as_ref()?;
        Some(t2 * t2 * t2 - rational_int(27) * t3 * t3)
    }

    pub fn is_singular(&self) -> bool {
        match self.exact_discriminant() {
            Some(d) => d.is_zero(),
            None => discriminant(self) == 0.0,
        }
    }

    pub(crate) fn require_nonsingular(&self) -> Result<(), EllipticError> {
        if self.is_singular() || !self.t2.is_finite() || !self.t3.is_finite() {
            return Err(EllipticError::Singular {
                t2: self.t2,
                t3: self.t3,
            });
        }
        Ok(())
    }

    /// Roots of `4x³ − t2·x + t3`.
    ///
    /// For `Δ > 0` they are real and returned as `e1 > e2 > e3`. For `Δ < 0`
    /// the first is the real root and the second has positive imaginary part.
    pub fn roots(&self) -> Result<[Complex64; 3], EllipticError> {
        self.require_nonsingular()?;
        // Depressed monic cubic x³ + p·x + q.
        let p = -self.t2 / 4.0;
        let q = self.t3 / 4.0;
        let raw = if discriminant(self) > 0.0 {
            let r = 2.0 * (-p / 3.0).sqrt();
            let arg = ((3.0 * q) / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            let third = 2.0 * std::f64::consts::PI / 3.0;
            let mut xs = [r * phi.cos(), r * (phi - third).cos(), r * (phi - 2.0 * third).cos()];
            xs.sort_by(|a, b| b.total_cmp(a));
            xs.map(|x| Complex64::new(x, 0.0))
        } else {
            let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
            let u = (-q / 2.0 + s).cbrt();
            let v = (-q / 2.0 - s).cbrt();
            let re = -(u + v) / 2.0;
            let im = (3.0f64).sqrt() / 2.0 * (u - v).abs();
            [
                Complex64::new(u + v, 0.0),
                Complex64::new(re, im),
                Complex64::new(re, -im),
            ]
        };
        Ok(raw.map(|x| polish_root(x, p, q)))
    }
}

fn polish_root(mut x: Complex64, p: f64, q: f64) -> Complex64 {
    for _ in 0..3 {
        let f = x * x * x + p * x + q;
        let df = 3.0 * x * x + p;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

/// `Δ = t2³ − 27·t3²`.
pub fn discriminant(c: &WeierstrassCurve) -> f64 {
    c.t2 * c.t2 * c.t2 - 27.0 * c.t3 * c.t3
}

/// `j = 1728·t2³/Δ`.
pub fn j_algebraic(c: &WeierstrassCurve) -> Result<f64, EllipticError> {
    c.require_nonsingular()?;
    Ok(1728.0 * c.t2 * c.t2 * c.t2 / discriminant(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;

    #[test]
    fn invariants() {
        let c = WeierstrassCurve::new(4.0, 0.0);
        assert_eq!(discriminant(&c), 64.0);
        assert_eq!(j_algebraic(&c).unwrap(), 1728.0);
        let c = WeierstrassCurve::new(0.0, 1.0);
        assert_eq!(discriminant(&c), -27.0);
        assert_eq!(j_algebraic(&c).unwrap(), 0.0);
        let c = WeierstrassCurve::new(3.0, 1.0);
        assert_eq!(discriminant(&c), 0.0);
        assert!(matches!(j_algebraic(&c), Err(EllipticError::Singular { .. })));
    }

    #[test]
    fn exact_singularity() {
        // (3/4)³ = 27/64 = 27·(1/8)²
        let c = WeierstrassCurve::from_rationals(rational(3, 4), rational(1, 8));
        assert!(c.is_singular());
        assert_eq!(c.exact_discriminant().unwrap(), rational(0, 1));
        let c = WeierstrassCurve::from_rationals(rational(1, 3), rational(1, 10));
        assert!(!c.is_singular());
    }

    #[test]
    fn roots_satisfy_the_cubic() {
        for (t2, t3) in [(4.0, 0.0), (0.0, 1.0), (7.0, -1.5), (-2.0, 3.0), (5.0, 1.2), (0.3, -0.01)] {
            let c = WeierstrassCurve::new(t2, t3);
            let roots = c.roots().unwrap();
            for x in roots {
                let f = 4.0 * x * x * x - t2 * x + t3;
                assert!(f.norm() < 1e-12 * (1.0 + t2.abs() + t3.abs()), "({t2},{t3}) root {x}");
            }
            let sum = roots[0] + roots[1] + roots[2];
            assert!(sum.norm() < 1e-12);
            if discriminant(&c) > 0.0 {
                assert!(roots[0].re > roots[1].re && roots[1].re > roots[2].re);
            } else {
                assert!(roots[0].im == 0.0 && roots[1].im > 0.0);
            }
        }
        let roots = WeierstrassCurve::new(4.0, 0.0).roots().unwrap();
        assert!((roots[0].re - 1.0).abs() < 1e-15 && roots[1].norm() < 1e-15 && (roots[2].re + 1.0).abs() < 1e-15);
    }
}
