//! Closed forms: the two-mirror energy density, the near-edge power law and
//! the large-`w` asymptotics of the soft wall.
//!
//! Soft-wall quantities use wall units (Beltrami pole at 0, edge at `z = −1`)
//! with signed, negative `z`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::ScaledBessel;
use crate::error::{Error, Result};
use crate::profile::EdgeDescriptor;

/// Smallest polar angle accepted by [`phi`]; the exponent diverges
/// logarithmically as `θ → 0`.
pub const THETA_MIN: f64 = 1e-4;

/// Near-edge law parameters: distance `a` from the edge, inverse derivative
/// jump `b`, and index `n0` at the edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeLaw {
    pub a: f64,
    pub b: f64,
    pub n0: f64,
}

impl EdgeLaw {
    pub fn new(a: f64, b: f64, n0: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(a, "edge distance must be > 0"));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Argument(format!("b must be > 0, got {b}")));
        }
        if !(n0 >= 1.0) || !n0.is_finite() {
            return Err(Error::Argument(format!("n0 must be >= 1, got {n0}")));
        }
        Ok(Self { a, b, n0 })
    }
}

/// `π²/240 · ħc/a⁴` between perfect mirrors a distance `a` apart.
pub fn casimir_ideal(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(a, "mirror separation must be > 0"));
    }
    Ok(PI * PI / 240.0 / a.powi(4))
}

/// `σ_zz = 23/(240 (2π)² n0³) · ħc/(a² b²)`.
pub fn near_edge_stress(law: &EdgeLaw) -> f64 {
    23.0 / (240.0 * (2.0 * PI).powi(2) * law.n0.powi(3)) / (law.a * law.a * law.b * law.b)
}

/// Sum of the near-edge laws of all edges whose graded side contains `z`.
pub fn edge_law_sum(edges: &[EdgeDescriptor], z: f64) -> Result<f64> {
    let mut total = 0.0;
    for e in edges {
        if z == e.z_edge {
            return Err(Error::domain(z, "on an edge"));
        }
        if e.graded_side(z) {
            total += near_edge_stress(&EdgeLaw::new((z - e.z_edge).abs(), e.b(), e.n0)?);
        }
    }
    Ok(total)
}

fn check_phi_args(z: f64, theta: f64) -> Result<()> {
    if !(THETA_MIN..=0.5 * PI).contains(&theta) {
        return Err(Error::domain(z, format!("theta = {theta} outside [{THETA_MIN}, pi/2]")));
    }
    if !(-1.0..0.0).contains(&z) {
        return Err(Error::domain(z, "phi needs -1 <= z < 0"));
    }
    Ok(())
}

/// `φ(z) = √(cos²θ + z² sin²θ) + cos θ · arsinh(cot θ / z)` with signed `z`.
pub fn phi(z: f64, theta: f64) -> Result<f64> {
    check_phi_args(z, theta)?;
    let (s, c) = theta.sin_cos();
    Ok((c * c + z * z * s * s).sqrt() + c * (c / s / z).asinh())
}

/// `∂φ/∂z`.
pub fn dphi_dz(z: f64, theta: f64) -> Result<f64> {
    check_phi_args(z, theta)?;
    let (s, c) = theta.sin_cos();
    let cot = c / s;
    Ok(z * s * s / (c * c + z * z * s * s).sqrt() - c * cot / (z.abs() * (z * z + cot * cot).sqrt()))
}

/// Leading large-`w` reflection coefficients at the edge `z = −1`.
pub fn asympt_reflection(theta: f64, w: f64) -> Result<(ScaledBessel, ScaledBessel)> {
    if !(w > 0.0) {
        return Err(Error::Argument(format!("w must be > 0, got {w}")));
    }
    let c2 = theta.cos().powi(2);
    let ex = -2.0 * w * phi(-1.0, theta)?;
    let base = (PI / (4.0 * w)).ln() + ex;
    let rho_e = if c2 == 0.0 {
        ScaledBessel::new(f64::NEG_INFINITY, -1.0)
    } else {
        ScaledBessel::new(base + c2.ln(), -1.0)
    };
    Ok((rho_e, ScaledBessel::new(base + (2.0 - c2).ln(), 1.0)))
}

/// Leading large-`w` densities `W_E`, `W_M` of the reflected waves.
pub fn asympt_density(z: f64, theta: f64, w: f64) -> Result<(ScaledBessel, ScaledBessel)> {
    let c2 = theta.cos().powi(2);
    let ex = 2.0 * w * phi(z, theta)?;
    let den = 2.0 * PI * z * (z * z - (z * z - 1.0) * c2);
    let num_m = 2.0 * z * z + (1.0 - 2.0 * z * z) * c2;
    let scaled = |num: f64| {
        let v = num / den;
        if v == 0.0 {
            ScaledBessel::new(f64::NEG_INFINITY, 1.0)
        } else {
            ScaledBessel::new(v.abs().ln() + ex, v.signum())
        }
    };
    Ok((scaled(-c2), scaled(num_m)))
}

/// `∫₀¹ (2 − 2ζ² + ζ⁴) dζ`, evaluated by 3-point Gauss–Legendre (exact for
/// quartics).
pub fn angular_integral_check() -> f64 {
    let x = (0.6f64).sqrt();
    let f = |t: f64| {
        let z = 0.5 * (t + 1.0);
        2.0 - 2.0 * z * z + z.powi(4)
    };
    0.5 * (5.0 / 9.0 * f(-x) + 8.0 / 9.0 * f(0.0) + 5.0 / 9.0 * f(x))
}

/// `∫₀^∞ e^{−2wa} w dw = 1/(4a²)`.
pub fn radial_integral(a: f64) -> f64 {
    0.25 / (a * a)
}

/// `(1/16π²)·∫(2 − 2ζ² + ζ⁴)dζ·∫e^{−2wa}w dw` at `a = 1`, i.e. `23/(960π²)`.
pub fn edge_law_prefactor() -> f64 {
    angular_integral_check() * radial_integral(1.0) / (16.0 * PI * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EQ2: f64 = 23.0 / (960.0 * PI * PI);

    #[test]
    fn ideal_mirrors() {
        let u1 = casimir_ideal(1.0).unwrap();
        assert!((u1 - 0.041_123_351_671_205_66).abs() < 1e-15);
        assert!((casimir_ideal(2.0).unwrap() - u1 / 16.0).abs() < 1e-17);
        assert!((casimir_ideal(10.0).unwrap() - 4.112_335e-6).abs() < 1e-11);
        assert!(casimir_ideal(0.0).is_err());
    }

    #[test]
    fn edge_law_values() {
        let s = near_edge_stress(&EdgeLaw::new(1.0, 1.0, 1.0).unwrap());
        assert!((s - EQ2).abs() < 1e-17);
        assert!((s - 2.4275e-3).abs() < 1e-7);
        let s2 = near_edge_stress(&EdgeLaw::new(2.0, 1.0, 1.0).unwrap());
        assert!((s2 - s / 4.0).abs() < 1e-17);
        let s3 = near_edge_stress(&EdgeLaw::new(1.0, 1.0, 2.0).unwrap());
        assert!((s3 - s / 8.0).abs() < 1e-17);
        assert!((s3 - 3.0344e-4).abs() < 1e-8);
        assert!(EdgeLaw::new(-1.0, 1.0, 1.0).is_err());
        assert!(EdgeLaw::new(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn phi_values() {
        assert!((phi(-0.5, 0.5 * PI).unwrap() - 0.5).abs() < 1e-15);
        let expect = 1.0 - (0.5f64).sqrt() * (1.0 + 2.0f64.sqrt()).ln();
        assert!((phi(-1.0, 0.25 * PI).unwrap() - expect).abs() < 1e-14);
        assert!((expect - 0.376_775).abs() < 1e-5);
        assert!(phi(-0.5, 1e-5).is_err());
        assert!(phi(0.1, 1.0).is_err());
    }

    #[test]
    fn dphi_at_edge_is_minus_one() {
        for i in 1..=10 {
            let th = 0.5 * PI * i as f64 / 10.0;
            assert!((dphi_dz(-1.0, th).unwrap() + 1.0).abs() < 1e-14);
            let h = 1e-6;
            let fd = (phi(-1.0 + h, th).unwrap() - phi(-1.0, th).unwrap()) / h;
            assert!((fd + 1.0).abs() < 1e-5, "theta={th}: {fd}");
        }
    }

    #[test]
    fn asymptotic_reflection_shape() {
        let (e, m) = asympt_reflection(0.5 * PI, 10.0).unwrap();
        assert!(e.value().abs() < 1e-30);
        assert!((m.value() - PI / 20.0 * (-20.0f64).exp()).abs() < 1e-20);
        for th in [0.3, 0.8, 1.3] {
            let (e, m) = asympt_reflection(th, 7.0).unwrap();
            assert!(e.value() < 0.0 && m.value() > 0.0);
            let c2 = th.cos().powi(2);
            assert!((m.value() / e.value() + (2.0 - c2) / c2).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptotic_density_special_cases() {
        let z = -0.6;
        let (e, m) = asympt_density(z, 0.5 * PI, 3.0).unwrap();
        assert!(e.value().abs() < 1e-30);
        let expect = (2.0 * 3.0 * z.abs()).exp() / (PI * z);
        assert!((m.value() - expect).abs() < 1e-12 * expect.abs());
        let th: f64 = 0.7;
        let c2 = th.cos().powi(2);
        let (e, m) = asympt_density(-1.0, th, 2.0).unwrap();
        let ex = (4.0 * phi(-1.0, th).unwrap()).exp();
        assert!((e.value() - c2 * ex / (2.0 * PI)).abs() < 1e-13);
        assert!((m.value() + (2.0 - c2) * ex / (2.0 * PI)).abs() < 1e-13);
    }

    #[test]
    fn angular_integral_and_assembly() {
        assert!((angular_integral_check() - 23.0 / 15.0).abs() < 1e-15);
        assert!((radial_integral(1.0) - 0.25).abs() < 1e-16);
        assert!((edge_law_prefactor() - EQ2).abs() < 1e-17);
    }
}
