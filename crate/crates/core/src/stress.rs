//! The stress `σ_zz(z) = −(1/4π²) ∫₀^{π/2} dθ sin θ ∫₀^∞ dw w² (W − W₀)`
//! in polar spectral coordinates `κ = w cos θ`, `u = w sin θ`.
//!
//! The outer θ integral is adaptive Gauss–Kronrod. The radial integrand
//! decays like `e^{−2wa}` with `a` the distance to the nearest interface, so
//! the radial rule is scaled by `1/(2a)`.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::{soft_wall_reflection, GreenOptions, SpectralPoint};
use crate::profile::{detect_edges, Profile};
use crate::quadrature::{adaptive_gk_until, exp_sinh, gauss_laguerre, tanh_sinh, QuadResult};
use crate::renorm::{reflected_density_soft_wall, renormalized_density};

/// Prefactor `1/(2π)²` of the spectral integral.
const PREFACTOR: f64 = 1.0 / (4.0 * PI * PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialScheme {
    /// Double-exponential rule: exp-sinh on `[0, ∞)`, or tanh-sinh on
    /// `[0, w_max]` when a cap is set.
    TanhSinh,
    /// Gauss–Laguerre with a fixed node count (ignores `w_max`).
    GaussLaguerre { nodes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureParams {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Optional radial cutoff in 1/L.
    pub w_max: Option<f64>,
    /// Initial number of θ panels.
    pub theta_panels: usize,
    pub max_theta_panels: usize,
    pub max_radial_level: u32,
    pub radial: RadialScheme,
    /// Budget of spectral-density evaluations per `z`.
    pub max_evals: usize,
    pub green: GreenOptions,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            rel_tol: 1e-4,
            abs_tol: 1e-12,
            w_max: None,
            theta_panels: 4,
            max_theta_panels: 64,
            max_radial_level: 9,
            radial: RadialScheme::TanhSinh,
            max_evals: 2_000_000,
            green: GreenOptions::default(),
        }
    }
}

impl QuadratureParams {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return Err(Error::Config(format!(
                "tolerances must be positive, got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if let Some(w) = self.w_max {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Config(format!("w_max must be > 0, got {w}")));
            }
        }
        if self.theta_panels == 0 || self.max_theta_panels < self.theta_panels {
            return Err(Error::Config("theta panel counts must satisfy 0 < initial <= max".into()));
        }
        if let RadialScheme::GaussLaguerre { nodes } = self.radial {
            if nodes < 2 {
                return Err(Error::Config("Gauss-Laguerre needs at least 2 nodes".into()));
            }
        }
        Ok(())
    }
}

/// One `σ_zz` value with its error estimate (both in ħc/L⁴).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressPoint {
    pub z: f64,
    pub sigma: f64,
    pub err: f64,
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressMetadata {
    pub units: &'static str,
    pub profile_hash: String,
    pub params: QuadratureParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressResult {
    pub points: Vec<StressPoint>,
    pub metadata: StressMetadata,
}

impl StressResult {
    pub fn z(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.z).collect()
    }

    pub fn sigma(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.sigma).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.converged)
    }
}

pub const UNITS: &str = "hbar = c = 1; z in L; sigma_zz in hbar*c/L^4";

/// Distance from `z` to the nearest interface, or `None` when there is none.
fn interface_distance(profile: &Profile, z: f64) -> Result<Option<f64>> {
    let mut best: Option<f64> = None;
    for s in profile.layers().windows(2) {
        let zi = s[0].z_max;
        if z == zi {
            return Err(Error::domain(z, "on an interface"));
        }
        let d = (z - zi).abs();
        best = Some(best.map_or(d, |b: f64| b.min(d)));
    }
    Ok(best)
}

/// `∫₀^{π/2} dθ sin θ ∫ dw w² density(w, θ)`, scaled by `−1/4π²`.
fn polar_integral<D>(density: D, scale: f64, params: &QuadratureParams) -> Result<QuadResult>
where
    D: Fn(SpectralPoint) -> Result<f64>,
{
    params.validate()?;
    let evals = Cell::new(0usize);
    let inner_ok = Cell::new(true);
    let inner_rtol = 0.1 * params.rel_tol;
    let inner_atol = 0.1 * params.abs_tol;
    let theta_fn = |theta: f64| -> Result<(f64, f64)> {
        let (s, c) = theta.sin_cos();
        let radial = |w: f64| -> Result<f64> {
            if w < 1e-150 {
                // w² times any finite density is below the f64 range here
                return Ok(0.0);
            }
            evals.set(evals.get() + 1);
            let pt = SpectralPoint::new(w * c, w * s)?;
            Ok(w * w * density(pt)?)
        };
        let r = match (params.radial, params.w_max) {
            (RadialScheme::TanhSinh, None) => exp_sinh(radial, scale, inner_rtol, inner_atol, params.max_radial_level)?,
            (RadialScheme::TanhSinh, Some(w_max)) => tanh_sinh(radial, w_max, inner_rtol, inner_atol, params.max_radial_level)?,
            (RadialScheme::GaussLaguerre { nodes }, _) => gauss_laguerre(radial, 0.5 * scale, nodes)?,
        };
        if !r.converged {
            inner_ok.set(false);
        }
        Ok((s * r.value, s * r.error))
    };
    let mut outer = adaptive_gk_until(
        theta_fn,
        0.0,
        FRAC_PI_2,
        params.theta_panels,
        params.rel_tol,
        params.abs_tol,
        params.max_theta_panels,
        || evals.get() >= params.max_evals,
    )?;
    outer.converged &= inner_ok.get();
    outer.evaluations = evals.get();
    outer.value *= -PREFACTOR;
    outer.error *= PREFACTOR;
    if !outer.value.is_finite() {
        return Err(Error::Solver {
            z: f64::NAN,
            reason: "non-finite stress integral".into(),
        });
    }
    Ok(outer)
}

fn to_point(z: f64, r: QuadResult, params: &QuadratureParams) -> StressPoint {
    StressPoint {
        z,
        sigma: r.value,
        err: r.error,
        converged: r.converged && r.error <= (params.rel_tol * r.value.abs()).max(params.abs_tol),
        evaluations: r.evaluations,
    }
}

/// `σ_zz(z)` from the renormalized density of the general propagation.
pub fn stress_at(profile: &Profile, z: f64, params: &QuadratureParams) -> Result<StressPoint> {
    profile.layer_index(z)?;
    let Some(dist) = interface_distance(profile, z)? else {
        // a single layer has no reflections at all
        return Ok(StressPoint {
            z,
            sigma: 0.0,
            err: 0.0,
            converged: true,
            evaluations: 0,
        });
    };
    let opts = params.green;
    let r = polar_integral(|pt| Ok(renormalized_density(profile, pt, z, &opts)?.total()), 0.5 / dist, params)
        .map_err(|e| match e {
            Error::Solver { z: zz, reason } if zz.is_nan() => Error::Solver { z, reason },
            other => other,
        })?;
    Ok(to_point(z, r, params))
}

/// `σ_zz` on a grid, one rayon task per point. Results do not depend on the
/// number of workers.
pub fn stress_profile(profile: &Profile, z_grid: &[f64], params: &QuadratureParams) -> Result<StressResult> {
    params.validate()?;
    let points = z_grid
        .par_iter()
        .map(|&z| stress_at(profile, z, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(StressResult {
        points,
        metadata: StressMetadata {
            units: UNITS,
            profile_hash: profile.content_hash(),
            params: *params,
        },
    })
}

/// `σ_zz` inside a nondispersive soft wall `[−n0 b, 0]` (pole at 0) from the
/// closed-form reflection coefficients, independent of the general
/// propagation. `z` is in physical units.
pub fn soft_wall_stress_at(b: f64, n0: f64, z: f64, params: &QuadratureParams) -> Result<StressPoint> {
    if !(b > 0.0) || !(n0 >= 1.0) {
        return Err(Error::Argument(format!("soft wall needs b > 0 and n0 >= 1, got b = {b}, n0 = {n0}")));
    }
    // wall units: lengths divided by the Beltrami scale n0² b
    let scale_len = n0 * n0 * b;
    let zw = z / scale_len;
    if !(zw > -1.0 / n0 && zw < 0.0) {
        return Err(Error::domain(z, "outside the soft wall"));
    }
    let edge = crate::profile::EdgeDescriptor {
        z_edge: -1.0 / n0,
        n0,
        jump: n0 * n0,
        rising: true,
        slope_left: 0.0,
        slope_right: n0 * n0,
    };
    let a = zw + 1.0 / n0;
    let density = |pt: SpectralPoint| -> Result<f64> {
        let refl = soft_wall_reflection(pt, &edge)?;
        Ok(reflected_density_soft_wall(pt, zw, &refl, n0)?.total())
    };
    let mut r = polar_integral(density, 0.5 / a, params)?;
    let s4 = scale_len.powi(4);
    r.value /= s4;
    r.error /= s4;
    Ok(to_point(z, r, params))
}

/// Edge-law sum at each point of a stress profile.
pub fn edge_law_reference(profile: &Profile, z_grid: &[f64]) -> Result<Vec<f64>> {
    let edges = detect_edges(profile)?;
    z_grid.iter().map(|&z| crate::analytic::edge_law_sum(&edges, z)).collect()
}
