use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::agm::{agm, right_sign};
use super::modular::{eisenstein_e4_e6, reduce_to_fundamental_domain, Sl2Z, TauPoint};
use super::{EllipticError, PeriodLattice, WeierstrassCurve};

/// Period lattice of `dx/y` from the complex AGM.
///
/// With `a = √(e1 − e3)`, `b = √(e1 − e2)`, `c = √(e2 − e3)` and the signs of
/// `b`, `c` chosen so that `|a − b| ≤ |a + b|` and `|a − c| ≤ |a + c|`, the
/// lattice is generated by `π/M(a, b)` and `πi/M(a, c)`. For three real roots
/// the first is the real period (loop around `[e3, e2]`) and the second is
/// purely imaginary (loop around `[e2, e1]`).
pub fn periods(c: &WeierstrassCurve, precision: f64) -> Result<PeriodLattice, EllipticError> {
    if !(precision > 0.0 && precision < 1.0) {
        return Err(EllipticError::InvalidPrecision(precision));
    }
    let [e1, e2, e3] = c.roots()?;
    let a = (e1 - e3).sqrt();
    let b = right_sign(a, (e1 - e2).sqrt());
    let cc = right_sign(a, (e2 - e3).sqrt());
    let omega1 = PI / agm(a, b, precision)?;
    let omega2 = Complex64::new(0.0, PI) / agm(a, cc, precision)?;
    Ok(PeriodLattice::oriented(
        omega1,
        omega2,
        ("loop around [e3, e2]".into(), "loop around [e2, e1]".into()),
    ))
}

/// `ω2/ω1`, unreduced.
pub fn tau_of(l: &PeriodLattice) -> Result<TauPoint, EllipticError> {
    TauPoint::new(l.omega2 / l.omega1)
}

/// The lattice basis adapted to the reduced modulus: if the reducing word is
/// `[[a, b], [c, d]]` then `ω1' = c·ω2 + d·ω1` and `ω2' = a·ω2 + b·ω1`.
pub fn reduced_basis(l: &PeriodLattice) -> Result<(PeriodLattice, TauPoint), EllipticError> {
    let t = reduce_to_fundamental_domain(&tau_of(l)?)?;
    let m = t.reducing_word;
    let omega1 = m.c as f64 * l.omega2 + m.d as f64 * l.omega1;
    let omega2 = m.a as f64 * l.omega2 + m.b as f64 * l.omega1;
    let lattice = PeriodLattice {
        omega1,
        omega2,
        cycle_labels: l.cycle_labels.clone(),
    };
    Ok((lattice, t))
}

/// `(g2, g3) = (60·G4(L), 140·G6(L))`, evaluated by q-series after reduction:
/// `g2 = (4π⁴/3)·E4(τ')/ω1'⁴`, `g3 = (8π⁶/27)·E6(τ')/ω1'⁶`. The truncation
/// error is `O(|q|^{terms+1})` relative, with `|q| ≤ e^{−π√3}`.
pub fn lattice_invariants(l: &PeriodLattice, terms: usize) -> Result<(Complex64, Complex64), EllipticError> {
    let (reduced, t) = reduced_basis(l)?;
    let (e4, e6) = eisenstein_e4_e6(t.tau, terms);
    let w2 = reduced.omega1 * reduced.omega1;
    let w4 = w2 * w2;
    let g2 = 4.0 * PI.powi(4) / 3.0 * e4 / w4;
    let g3 = 8.0 * PI.powi(6) / 27.0 * e6 / (w4 * w2);
    Ok((g2, g3))
}

/// The row `(ω1, ω2)` of periods of `dx/y` against the cycle basis `(δ1, δ2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BettiDeRhamMatrix {
    pub entries: [Complex64; 2],
}

impl BettiDeRhamMatrix {
    /// For new cycles `δ'_i = Σ_j m_ij δ_j` the periods transform the same way.
    pub fn change_of_cycles(&self, m: &Sl2Z) -> BettiDeRhamMatrix {
        let [w1, w2] = self.entries;
        BettiDeRhamMatrix {
            entries: [m.a as f64 * w1 + m.b as f64 * w2, m.c as f64 * w1 + m.d as f64 * w2],
        }
    }
}

pub fn betti_de_rham_row(c: &WeierstrassCurve, precision: f64) -> Result<BettiDeRhamMatrix, EllipticError> {
    let l = periods(c, precision)?;
    Ok(BettiDeRhamMatrix {
        entries: [l.omega1, l.omega2],
    })
}

/// Integer matrix `m` with `(ω1', ω2')ᵀ = m·(ω1, ω2)ᵀ`, if both lattices agree
/// within `tol` (relative). `det m = ±1` exactly when the lattices coincide.
pub fn basis_change(from: &PeriodLattice, to: &PeriodLattice, tol: f64) -> Option<[[i64; 2]; 2]> {
    let (w1, w2) = (from.omega1, from.omega2);
    let det = w1.re * w2.im - w1.im * w2.re;
    if det == 0.0 {
        return None;
    }
    let scale = w1.norm().max(w2.norm());
    let solve = |z: Complex64| -> Option<[i64; 2]> {
        let m = (z.re * w2.im - z.im * w2.re) / det;
        let n = (w1.re * z.im - w1.im * z.re) / det;
        let (mr, nr) = (m.round(), n.round());
        let back = mr * w1 + nr * w2;
        ((back - z).norm() <= tol * scale).then_some([mr as i64, nr as i64])
    };
    let r1 = solve(to.omega1)?;
    let r2 = solve(to.omega2)?;
    let m = [r1, r2];
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (d.abs() == 1).then_some(m)
}
