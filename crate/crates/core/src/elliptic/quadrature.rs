//! Adaptive Gauss–Kronrod integration of `dx/y`, used as an oracle that is
//! independent of the AGM.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{EllipticError, PeriodLattice, WeierstrassCurve};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 40;

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    ((kronrod * half), ((kronrod - gauss) * half).norm())
}

/// Integrates `f` over `[a, b]` by recursive bisection until each piece's
/// Kronrod–Gauss difference is below its share of `abs_tol`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<Complex64, EllipticError> {
    fn go<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> Result<Complex64, EllipticError> {
        let (value, err) = gk15(f, a, b);
        if !value.is_finite() {
            return Err(EllipticError::Integration { reason: "non-finite integrand".into() });
        }
        if err <= tol || err <= 50.0 * f64::EPSILON * value.norm() {
            return Ok(value);
        }
        if depth >= MAX_DEPTH {
            return Err(EllipticError::Integration {
                reason: format!("tolerance {tol:e} not reached on [{a}, {b}]"),
            });
        }
        let mid = 0.5 * (a + b);
        Ok(go(f, a, mid, tol / 2.0, depth + 1)? + go(f, mid, b, tol / 2.0, depth + 1)?)
    }
    go(f, a, b, abs_tol, 0)
}

/// `∫ dx/y` along the straight segment from `ei` to `ej`, where `ek` is the
/// third root. The substitution `x = ei + (ej − ei)(1 − cos θ)/2` removes the
/// endpoint singularities; the result is half a period.
pub fn half_period(ei: Complex64, ej: Complex64, ek: Complex64, rel_tol: f64) -> Result<Complex64, EllipticError> {
    let scale = (ei - ek).sqrt();
    let c = (ej - ei) / (ei - ek);
    let integrand = move |theta: f64| {
        let s = 0.5 * (1.0 - theta.cos());
        Complex64::new(1.0, 0.0) / (Complex64::new(0.0, 2.0) * scale * (1.0 + c * s).sqrt())
    };
    let rough = integrand(0.0).norm() * PI;
    integrate(&integrand, 0.0, PI, rel_tol * rough)
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    let ab = b - a;
    let ap = p - a;
    let cross = ab.re * ap.im - ab.im * ap.re;
    if cross.abs() > 1e-12 * ab.norm() * ap.norm().max(1.0) {
        return false;
    }
    let t = (ap.re * ab.re + ap.im * ab.im) / ab.norm_sqr();
    (0.0..=1.0).contains(&t)
}

/// Periods from twice the integrals of `dx/y` along two root-to-root
/// segments whose loops form a homology basis.
pub fn periods_by_integration(c: &WeierstrassCurve, rel_tol: f64) -> Result<PeriodLattice, EllipticError> {
    let e = c.roots()?;
    let pairs: Vec<(usize, usize, usize)> = [(0, 1, 2), (1, 2, 0), (0, 2, 1)]
        .into_iter()
        .filter(|&(i, j, k)| !on_segment(e[i], e[j], e[k]))
        .take(2)
        .collect();
    let mut omegas = Vec::with_capacity(2);
    for &(i, j, k) in &pairs {
        omegas.push(2.0 * half_period(e[i], e[j], e[k], rel_tol)?);
    }
    let labels = pairs
        .iter()
        .map(|&(i, j, _)| format!("loop around [e{}, e{}]", i + 1, j + 1))
        .collect::<Vec<_>>();
    Ok(PeriodLattice::oriented(omegas[0], omegas[1], (labels[0].clone(), labels[1].clone())))
}
