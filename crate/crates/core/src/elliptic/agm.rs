use num_complex::Complex64;

use super::EllipticError;

/// Iteration cap. The optimal branch converges quadratically, so hitting it
/// means the inputs or the branch choice are wrong.
pub const MAX_AGM_ITERATIONS: usize = 64;

/// Complex arithmetic-geometric mean with the optimal branch: at every step
/// the square root is taken so that `|a − b| ≤ |a + b|`.
///
/// Stops once `|a − b| ≤ tol·|a|`; the returned mean then carries an error of
/// order `tol²`.
pub fn agm(a: Complex64, b: Complex64, tol: f64) -> Result<Complex64, EllipticError> {
    let tol = tol.max(f64::EPSILON);
    let (mut a, mut b) = (a, b);
    if a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    for _ in 0..MAX_AGM_ITERATIONS {
        if (a - b).norm() <= tol * a.norm() {
            return Ok((a + b) / 2.0);
        }
        let next_a = (a + b) / 2.0;
        let mut next_b = (a * b).sqrt();
        if (next_a - next_b).norm() > (next_a + next_b).norm() {
            next_b = -next_b;
        }
        if !next_a.is_finite() || !next_b.is_finite() {
            break;
        }
        a = next_a;
        b = next_b;
    }
    Err(EllipticError::NonConvergence {
        iterations: MAX_AGM_ITERATIONS,
    })
}

/// Flips the sign of `b` if needed so that `|a − b| ≤ |a + b|`.
pub(crate) fn right_sign(a: Complex64, b: Complex64) -> Complex64 {
    if (a - b).norm() > (a + b).norm() {
        -b
    } else {
        b
    }
}
