//! Spectral stress density and its renormalization.
//!
//! Per polarization the density at coincidence is
//! `W_p = (1/ν)(k² g̃ − ∂_z∂_{z₀} g̃) = (k² − Y_L Y_R)/(Y_R − Y_L)` with
//! `Y = ν y`. The subtracted part `W₀` is the density of the waves travelling
//! freely out of the source point: inside a closed-form layer it is
//! `(k² − a β)/(β − a)` built from the layer's own growing and decaying
//! solutions, elsewhere the geometrical-optics (WKB) density. What remains is
//! carried entirely by the reflection ratios `R_L`, `R_R`, so it is computed
//! without subtracting two large numbers:
//!
//! `W − W₀ = [R_L(k² − β²) + R_R(k² − a²) + 2R_L R_R(k² − aβ)] / ((1 − R_L R_R)(β − a))`.

use crate::bessel::{bessel_ik, ScaledBessel};
use crate::error::{Error, Result};
use crate::green::{soft_wall_order, wall_mode, GreenOptions, Medium, PointState, Polarization, ReflectionPair, SpectralPoint};
use crate::profile::{Local, Profile};

/// Density values per polarization (units 1/L).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    pub e: f64,
    pub m: f64,
}

impl SpectralDensity {
    pub fn total(&self) -> f64 {
        self.e + self.m
    }

    pub fn get(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::E => self.e,
            Polarization::M => self.m,
        }
    }

    fn from_fn(mut f: impl FnMut(Polarization) -> Result<f64>) -> Result<Self> {
        Ok(Self {
            e: f(Polarization::E)?,
            m: f(Polarization::M)?,
        })
    }
}

/// Geometrical-optics density `−k + (ν'/ν − k'/k)²/(8k)` of one polarization.
pub fn wkb_density(point: SpectralPoint, local: &Local, pol: Polarization) -> Result<f64> {
    let k2 = point.k2(local);
    if !(k2 > 0.0) {
        return Err(Error::Singular("k = 0 in the geometrical-optics density".into()));
    }
    let k = k2.sqrt();
    let dk_over_k = 0.5 * point.kappa * point.kappa * (local.deps * local.mu + local.eps * local.dmu) / k2;
    let p = pol.dnu(local) / pol.nu(local) - dk_over_k;
    Ok(-k + p * p / (8.0 * k))
}

fn full(s: &PointState) -> f64 {
    let (yl, yr) = (s.nu * s.y_left, s.nu * s.y_right);
    (s.k2 - yl * yr) / (yr - yl)
}

fn outgoing(s: &PointState, point: SpectralPoint, pol: Polarization) -> Result<f64> {
    match s.reflected {
        Some((b, _, _)) => Ok((s.k2 - b.a * b.b) / (b.b - b.a)),
        None => wkb_density(point, &s.local, pol),
    }
}

fn reflected(s: &PointState, point: SpectralPoint, pol: Polarization) -> Result<f64> {
    match s.reflected {
        Some((b, rl, rr)) => {
            let (rl, rr) = (rl.value(), rr.value());
            if rl == 0.0 && rr == 0.0 {
                return Ok(0.0);
            }
            let (a, bt, k2) = (b.a, b.b, s.k2);
            let num = rl * (k2 - bt * bt) + rr * (k2 - a * a) + 2.0 * rl * rr * (k2 - a * bt);
            Ok(num / ((1.0 - rl * rr) * (bt - a)))
        }
        None => Ok(full(s) - wkb_density(point, &s.local, pol)?),
    }
}

fn states(profile: &Profile, point: SpectralPoint, z: f64, opts: &GreenOptions, pol: Polarization) -> Result<PointState> {
    Medium::new(profile, point, pol, opts).state(z)
}

/// Unrenormalized density `W`.
pub fn spectral_density_w(profile: &Profile, point: SpectralPoint, z: f64, opts: &GreenOptions) -> Result<SpectralDensity> {
    SpectralDensity::from_fn(|p| Ok(full(&states(profile, point, z, opts, p)?)))
}

/// Outgoing-wave density `W₀`.
pub fn spectral_density_w0(profile: &Profile, point: SpectralPoint, z: f64, opts: &GreenOptions) -> Result<SpectralDensity> {
    SpectralDensity::from_fn(|p| outgoing(&states(profile, point, z, opts, p)?, point, p))
}

/// Renormalized density `W − W₀`.
pub fn renormalized_density(profile: &Profile, point: SpectralPoint, z: f64, opts: &GreenOptions) -> Result<SpectralDensity> {
    SpectralDensity::from_fn(|p| reflected(&states(profile, point, z, opts, p)?, point, p))
}

/// `ρ_E W_E + ρ_M W_M` inside a soft wall (wall units, edge at `−1/n0`,
/// pole at 0), with `W_p` built from `H = I_ν(−u z₀) I_ν(−u z)`.
pub fn reflected_density_soft_wall(point: SpectralPoint, z: f64, refl: &ReflectionPair, n0: f64) -> Result<SpectralDensity> {
    if !(z > -1.0 / n0 && z < 0.0) {
        return Err(Error::domain(z, "outside the soft wall"));
    }
    let SpectralPoint { kappa, u } = point;
    let d = -z;
    let eps = 1.0 / (d * d);
    let k2 = u * u + eps * kappa * kappa;
    let ik = bessel_ik(soft_wall_order(kappa), u * d)?;
    SpectralDensity::from_fn(|pol| {
        let (ln_f, l) = wall_mode(pol, u, z, ik.ln_i, ik.dlog_i);
        let c = k2 - l * l;
        let ln_nu = match pol {
            Polarization::E => 0.0,
            Polarization::M => eps.ln(),
        };
        let rho = refl.get(pol);
        // W_p = −F²(k² − ℓ²)/ν
        let w = ScaledBessel::new(2.0 * ln_f + c.abs().ln() - ln_nu, -c.signum());
        Ok((rho * w).value())
    })
}
