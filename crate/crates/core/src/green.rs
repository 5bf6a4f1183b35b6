//! Fourier-space Green functions `g̃_p(z, z₀)` of planar media.
//!
//! For a spectral point `(κ, u)` and polarization `p` the Green function
//! solves `∂_z (1/ν_p) ∂_z g̃ − (k²/ν_p) g̃ = δ(z − z₀)` with
//! `k² = u² + n²κ²`, `ν_E = μ`, `ν_M = ε`. It is built from the solution
//! `ψ_L` decaying to the left and `ψ_R` decaying to the right, carried as
//! impedances `y = ψ'/(ν ψ)`, which stay bounded where `ψ` itself over- or
//! underflows.
//!
//! Inside every analytic layer two closed-form solutions are known: `A`
//! growing to the right and `B` decaying to the right. A solution entering
//! the layer is written `A·(1 + R)` with `R = c·B/A`; `R` only shrinks while
//! moving through the layer, so crossing a layer never overflows. Tabulated
//! layers (and every layer in [`Stepping::Ode`] mode) are crossed by adaptive
//! Runge–Kutta on the Riccati equation instead.

use serde::Serialize;

use crate::bessel::{bessel_ik, ScaledBessel};
use crate::error::{Error, Result};
use crate::ode::{integrate_riccati, OdeTolerance};
use crate::profile::{EdgeDescriptor, Local, Profile, Segment, SegmentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    E,
    M,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::E, Polarization::M];

    /// `ν_E = μ`, `ν_M = ε`.
    pub fn nu(self, l: &Local) -> f64 {
        match self {
            Polarization::E => l.mu,
            Polarization::M => l.eps,
        }
    }

    pub fn dnu(self, l: &Local) -> f64 {
        match self {
            Polarization::E => l.dmu,
            Polarization::M => l.deps,
        }
    }
}

/// Imaginary wavenumber `κ` and transverse wavenumber `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub kappa: f64,
    pub u: f64,
}

impl SpectralPoint {
    pub fn new(kappa: f64, u: f64) -> Result<Self> {
        if !(kappa >= 0.0 && u >= 0.0) || !kappa.is_finite() || !u.is_finite() || kappa + u == 0.0 {
            return Err(Error::Argument(format!(
                "spectral point needs finite kappa, u >= 0, not both zero; got ({kappa}, {u})"
            )));
        }
        Ok(Self { kappa, u })
    }

    /// `κ = w cos θ`, `u = w sin θ`.
    pub fn from_polar(w: f64, theta: f64) -> Result<Self> {
        Self::new(w * theta.cos(), w * theta.sin())
    }

    pub fn w(&self) -> f64 {
        self.kappa.hypot(self.u)
    }

    pub fn theta(&self) -> f64 {
        self.u.atan2(self.kappa)
    }

    /// Local `k² = u² + n²κ²`.
    pub fn k2(&self, l: &Local) -> f64 {
        self.u * self.u + l.eps * l.mu * self.kappa * self.kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stepping {
    /// Closed forms wherever a layer has them.
    Analytic,
    /// Runge–Kutta through every graded layer, closed forms only in uniform
    /// layers and for the solution regular at a terminating pole.
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenOptions {
    pub stepping: Stepping,
    pub ode: OdeTolerance,
}

impl Default for GreenOptions {
    fn default() -> Self {
        Self {
            stepping: Stepping::Analytic,
            ode: OdeTolerance::default(),
        }
    }
}

/// Log-amplitudes and log-derivatives (`d/dz ln`) of the layer basis at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BasisValue {
    pub ln_a: f64,
    pub a: f64,
    pub ln_b: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy)]
enum BesselArg {
    /// `x = u·|z − pole|`, prefactor `|z − pole|^power`.
    Distance { u: f64, pole: f64, s: f64, power: f64 },
    /// `x = t0·exp(h (z − z0))`, prefactor `exp(shift (z − z0))`.
    Exponential { ln_t0: f64, h: f64, z0: f64, shift: f64 },
}

#[derive(Debug, Clone, Copy)]
enum Basis {
    /// `ln A = a z`, `ln B = b z`.
    Linear { a: f64, b: f64 },
    Bessel { order: f64, arg: BesselArg, i_grows: bool },
    /// `u = 0` limit of a Beltrami layer: powers of the pole distance.
    Power { pole: f64, s: f64, p_i: f64, p_k: f64, i_grows: bool },
    Stepped,
}

impl Basis {
    fn eval(&self, z: f64) -> Result<BasisValue> {
        let (ln_i, d_i, ln_k, d_k, i_grows) = match *self {
            Basis::Linear { a, b } => {
                return Ok(BasisValue {
                    ln_a: a * z,
                    a,
                    ln_b: b * z,
                    b,
                })
            }
            Basis::Stepped => unreachable!("stepped layers have no closed-form basis"),
            Basis::Power {
                pole,
                s,
                p_i,
                p_k,
                i_grows,
            } => {
                let d = (z - pole).abs();
                let ld = d.ln();
                (p_i * ld, s * p_i / d, p_k * ld, s * p_k / d, i_grows)
            }
            Basis::Bessel { order, arg, i_grows } => {
                let (x, dx, ln_pre, d_pre) = match arg {
                    BesselArg::Distance { u, pole, s, power } => {
                        let d = (z - pole).abs();
                        (u * d, s * u, power * d.ln(), s * power / d)
                    }
                    BesselArg::Exponential { ln_t0, h, z0, shift } => {
                        let x = (ln_t0 + h * (z - z0)).exp();
                        (x, h * x, shift * (z - z0), shift)
                    }
                };
                if !(x > 0.0) || !x.is_finite() {
                    return Err(Error::Singular(format!("Bessel argument {x} at z = {z}")));
                }
                let ik = bessel_ik(order, x)?;
                (
                    ln_pre + ik.ln_i,
                    d_pre + ik.dlog_i * dx,
                    ln_pre + ik.ln_k,
                    d_pre + ik.dlog_k * dx,
                    i_grows,
                )
            }
        };
        Ok(if i_grows {
            BasisValue {
                ln_a: ln_i,
                a: d_i,
                ln_b: ln_k,
                b: d_k,
            }
        } else {
            BasisValue {
                ln_a: ln_k,
                a: d_k,
                ln_b: ln_i,
                b: d_i,
            }
        })
    }
}

fn layer_basis(seg: &Segment, profile: &Profile, point: SpectralPoint, pol: Polarization) -> Basis {
    let SpectralPoint { kappa, u } = point;
    match &seg.kind {
        SegmentKind::Uniform { eps, mu } => {
            let k = (u * u + eps * mu * kappa * kappa).sqrt();
            Basis::Linear { a: k, b: -k }
        }
        SegmentKind::Beltrami { b, pole, geometric } => {
            let pole_right = *pole >= seg.z_max;
            let s = if pole_right { -1.0 } else { 1.0 };
            let (order, power) = if *geometric {
                (b * kappa, 0.0)
            } else {
                let power = match pol {
                    Polarization::E => 0.5,
                    Polarization::M => -0.5,
                };
                ((b * b * kappa * kappa + 0.25).sqrt(), power)
            };
            if u == 0.0 {
                Basis::Power {
                    pole: *pole,
                    s,
                    p_i: power + order,
                    p_k: power - order,
                    i_grows: !pole_right,
                }
            } else {
                Basis::Bessel {
                    order,
                    arg: BesselArg::Distance {
                        u,
                        pole: *pole,
                        s,
                        power,
                    },
                    i_grows: !pole_right,
                }
            }
        }
        SegmentKind::ExponentialDispersive {
            base,
            exponent_at_min,
            rate,
        } => {
            let l = Segment::log_base(*base, profile.dispersion(), kappa);
            let lambda = rate * l;
            let eps_min = (l * exponent_at_min).exp();
            let k_at = |eps: f64| (u * u + eps * kappa * kappa).sqrt();
            if lambda == 0.0 {
                let k = k_at(eps_min);
                return Basis::Linear { a: k, b: -k };
            }
            if seg.z_min.is_finite() && seg.z_max.is_finite() {
                // nearly uniform: the index varies by less than rounding over the layer
                let dz = seg.z_max - seg.z_min;
                let eps_max = eps_min * (lambda * dz).max(0.0).exp();
                let k2_min = u * u + eps_min.min(eps_min * (lambda * dz).exp()) * kappa * kappa;
                let variation = kappa * kappa * eps_max * (lambda * dz).exp_m1().abs() / k2_min;
                if variation.max(lambda.abs() / k2_min.sqrt()) < 1e-13 {
                    let k = k_at(eps_min * (0.5 * lambda * dz).exp());
                    return Basis::Linear { a: k, b: -k };
                }
            }
            let h = 0.5 * lambda;
            if kappa == 0.0 {
                return match pol {
                    Polarization::E => Basis::Linear { a: u, b: -u },
                    Polarization::M => {
                        let r = (u * u + h * h).sqrt();
                        Basis::Linear { a: h + r, b: h - r }
                    }
                };
            }
            let p = 2.0 * u / lambda.abs();
            let (order, shift) = match pol {
                Polarization::E => (p, 0.0),
                Polarization::M => ((p * p + 1.0).sqrt(), h),
            };
            let ln_t0 = (2.0 * kappa / lambda.abs()).ln() + 0.5 * l * exponent_at_min;
            Basis::Bessel {
                order,
                arg: BesselArg::Exponential {
                    ln_t0,
                    h,
                    z0: seg.z_min,
                    shift,
                },
                i_grows: lambda > 0.0,
            }
        }
        SegmentKind::Tabulated(_) => Basis::Stepped,
    }
}

/// Signed ratio `R` stored as `(ln|R|, sign)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Ratio {
    pub ln_abs: f64,
    pub sign: f64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio {
        ln_abs: f64::NEG_INFINITY,
        sign: 1.0,
    };

    fn from_quotient(num: f64, den: f64) -> Self {
        Ratio {
            ln_abs: num.abs().ln() - den.abs().ln(),
            sign: if (num < 0.0) != (den < 0.0) { -1.0 } else { 1.0 },
        }
    }

    pub fn value(&self) -> f64 {
        self.sign * self.ln_abs.exp()
    }

    /// `(ln|1 + R|, sign(1 + R))`.
    fn ln_one_plus(&self) -> (f64, f64) {
        if self.ln_abs <= 0.0 {
            let v = 1.0 + self.value();
            (v.abs().ln(), v.signum())
        } else {
            let q = self.sign * (-self.ln_abs).exp();
            let v = 1.0 + q;
            (self.ln_abs + v.abs().ln(), self.sign * v.signum())
        }
    }

    /// `(d_own + R d_other)/(1 + R)` without overflow for large `R`.
    fn mix(&self, d_own: f64, d_other: f64) -> f64 {
        if self.ln_abs <= 0.0 {
            let r = self.value();
            (d_own + r * d_other) / (1.0 + r)
        } else {
            let q = self.sign * (-self.ln_abs).exp();
            (d_own * q + d_other) / (q + 1.0)
        }
    }
}

/// Result of carrying a solution across part of a layer.
struct Transfer {
    /// Impedance times `ν` at the end point.
    big_y: f64,
    dln: f64,
    /// Reflection ratio relative to the solution growing in the travel direction.
    ratio: Ratio,
}

/// Carries `ψ` from `p1` to `p2` in a closed-form basis. `own` is the basis
/// member growing in the travel direction, `other` the decaying one.
fn transfer(own1: (f64, f64), other1: (f64, f64), own2: (f64, f64), other2: (f64, f64), big_y1: f64, z2: f64) -> Result<Transfer> {
    let den = other1.1 - big_y1;
    let r1 = Ratio::from_quotient(-(own1.1 - big_y1), den);
    if r1.ln_abs == f64::INFINITY {
        // exactly the decaying member
        return Ok(Transfer {
            big_y: other2.1,
            dln: other2.0 - other1.0,
            ratio: r1,
        });
    }
    let e = (other2.0 - other1.0) - (own2.0 - own1.0);
    let r2 = Ratio {
        ln_abs: r1.ln_abs + e,
        sign: r1.sign,
    };
    // Near R = −1 (both members almost cancel, e.g. k → 0) ln|1 + R| from the
    // stored ratio is pure roundoff; 1 + R₁ = (other₁ − own₁)/(other₁ − Y₁)
    // is exact and 1 + R₂ = (1 + R₁) + R₁ expm1(e).
    let near_minus_one = r1.sign < 0.0 && r1.ln_abs.abs() < 0.5;
    let (l1, s1, opr2) = if near_minus_one {
        let opr1 = (other1.1 - own1.1) / den;
        let opr2 = (e.abs() < 1.0).then(|| opr1 + r1.value() * e.exp_m1());
        (opr1.abs().ln(), opr1.signum(), opr2)
    } else {
        let (l, sg) = r1.ln_one_plus();
        (l, sg, None)
    };
    let (l2, s2) = match opr2 {
        Some(o) => (o.abs().ln(), o.signum()),
        None => r2.ln_one_plus(),
    };
    if s1 != s2 || !l2.is_finite() {
        return Err(Error::PoleCrossing { z: z2 });
    }
    let big_y = match opr2 {
        Some(o) => (own2.1 + r2.value() * other2.1) / o,
        None => r2.mix(own2.1, other2.1),
    };
    Ok(Transfer {
        big_y,
        dln: (own2.0 - own1.0) + l2 - l1,
        ratio: r2,
    })
}

/// State of both solutions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PointState {
    pub local: Local,
    pub nu: f64,
    pub k2: f64,
    pub y_left: f64,
    pub y_right: f64,
    /// Basis and reflection ratios, for points inside analytic layers.
    pub reflected: Option<(BasisValue, Ratio, Ratio)>,
}

/// A profile specialised to one spectral point and polarization.
pub(crate) struct Medium<'a> {
    profile: &'a Profile,
    point: SpectralPoint,
    pol: Polarization,
    ode: OdeTolerance,
    bases: Vec<Basis>,
    /// Layers crossed by Runge–Kutta.
    stepped: Vec<bool>,
}

impl<'a> Medium<'a> {
    pub fn new(profile: &'a Profile, point: SpectralPoint, pol: Polarization, opts: &GreenOptions) -> Self {
        let bases: Vec<Basis> = profile
            .layers()
            .iter()
            .map(|s| layer_basis(s, profile, point, pol))
            .collect();
        let stepped = bases
            .iter()
            .map(|b| match b {
                Basis::Stepped => true,
                Basis::Linear { .. } => false,
                _ => opts.stepping == Stepping::Ode,
            })
            .collect();
        Self {
            profile,
            point,
            pol,
            ode: opts.ode,
            bases,
            stepped,
        }
    }

    fn layer(&self, i: usize) -> &Segment {
        &self.profile.layers()[i]
    }

    fn local(&self, i: usize, z: f64) -> Local {
        self.layer(i).local(z, self.point.kappa, self.profile.dispersion())
    }

    fn nu(&self, i: usize, z: f64) -> f64 {
        self.pol.nu(&self.local(i, z))
    }

    /// Carries impedance `y1` at `z1` to `z2`, both inside layer `i`.
    /// Returns `(y2, ln ψ(z2) − ln ψ(z1))`.
    fn cross(&self, i: usize, z1: f64, z2: f64, y1: f64) -> Result<(f64, f64)> {
        if z1 == z2 {
            return Ok((y1, 0.0));
        }
        if self.stepped[i] {
            let seg = self.layer(i);
            let (kappa, pol, disp, point) = (self.point.kappa, self.pol, self.profile.dispersion(), self.point);
            return integrate_riccati(
                |z| {
                    let l = seg.local(z, kappa, disp);
                    (point.k2(&l), pol.nu(&l))
                },
                z1,
                z2,
                y1,
                self.ode,
            );
        }
        let basis = self.bases[i];
        let b1 = basis.eval(z1)?;
        let b2 = basis.eval(z2)?;
        let t = self.transfer_in(b1, b2, self.nu(i, z1) * y1, z1, z2)?;
        Ok((t.big_y / self.nu(i, z2), t.dln))
    }

    fn transfer_in(&self, b1: BasisValue, b2: BasisValue, big_y1: f64, z1: f64, z2: f64) -> Result<Transfer> {
        let (a1, bb1, a2, bb2) = ((b1.ln_a, b1.a), (b1.ln_b, b1.b), (b2.ln_a, b2.a), (b2.ln_b, b2.b));
        if z2 > z1 {
            transfer(a1, bb1, a2, bb2, big_y1, z2)
        } else {
            transfer(bb1, a1, bb2, a2, big_y1, z2)
        }
    }

    /// Impedance of `ψ_L` entering layer `j` at its left boundary.
    fn y_left_entering(&self, j: usize) -> Result<Option<f64>> {
        if j == 0 {
            return Ok(None);
        }
        let z = self.layer(0).z_max;
        let mut y = self.bases[0].eval(z)?.a / self.nu(0, z);
        for i in 1..j {
            let s = self.layer(i);
            y = self.cross(i, s.z_min, s.z_max, y)?.0;
        }
        Ok(Some(y))
    }

    /// Impedance of `ψ_R` entering layer `j` at its right boundary.
    fn y_right_entering(&self, j: usize) -> Result<Option<f64>> {
        let last = self.bases.len() - 1;
        if j == last {
            return Ok(None);
        }
        let z = self.layer(last).z_min;
        let mut y = self.bases[last].eval(z)?.b / self.nu(last, z);
        for i in (j + 1..last).rev() {
            let s = self.layer(i);
            y = self.cross(i, s.z_max, s.z_min, y)?.0;
        }
        Ok(Some(y))
    }

    pub fn state(&self, z: f64) -> Result<PointState> {
        let j = self.profile.layer_index(z)?;
        let local = self.local(j, z);
        let nu = self.pol.nu(&local);
        let k2 = self.point.k2(&local);
        let seg = self.layer(j);
        let yl_in = self.y_left_entering(j)?;
        let yr_in = self.y_right_entering(j)?;
        if self.stepped[j] {
            // an outer layer ends at a pole: the regular solution there is exact
            let y_left = match yl_in {
                Some(y) => self.cross(j, seg.z_min, z, y)?.0,
                None => self.bases[j].eval(z)?.a / nu,
            };
            let y_right = match yr_in {
                Some(y) => self.cross(j, seg.z_max, z, y)?.0,
                None => self.bases[j].eval(z)?.b / nu,
            };
            return Ok(PointState {
                local,
                nu,
                k2,
                y_left,
                y_right,
                reflected: None,
            });
        }
        let basis = self.bases[j];
        let bz = basis.eval(z)?;
        let r_left = match yl_in {
            None => Ratio::ZERO,
            Some(y) => {
                let b0 = basis.eval(seg.z_min)?;
                let big_y = self.nu(j, seg.z_min) * y;
                transfer((b0.ln_a, b0.a), (b0.ln_b, b0.b), (bz.ln_a, bz.a), (bz.ln_b, bz.b), big_y, z)?.ratio
            }
        };
        let r_right = match yr_in {
            None => Ratio::ZERO,
            Some(y) => {
                let b1 = basis.eval(seg.z_max)?;
                let big_y = self.nu(j, seg.z_max) * y;
                transfer((b1.ln_b, b1.b), (b1.ln_a, b1.a), (bz.ln_b, bz.b), (bz.ln_a, bz.a), big_y, z)?.ratio
            }
        };
        let y_left = r_left.mix(bz.a, bz.b) / nu;
        let y_right = r_right.mix(bz.b, bz.a) / nu;
        Ok(PointState {
            local,
            nu,
            k2,
            y_left,
            y_right,
            reflected: Some((bz, r_left, r_right)),
        })
    }

    /// Impedance and `ln ψ` change carried from `z_from` to `z_to` across layers.
    pub fn propagate(&self, z_from: f64, z_to: f64, y_init: f64) -> Result<(f64, f64)> {
        let mut marks = vec![z_from];
        let (lo, hi) = (z_from.min(z_to), z_from.max(z_to));
        let mut inner: Vec<f64> = self
            .profile
            .layers()
            .windows(2)
            .map(|w| w[0].z_max)
            .filter(|&b| b > lo && b < hi)
            .collect();
        if z_to < z_from {
            inner.reverse();
        }
        marks.extend(inner);
        marks.push(z_to);
        let (mut y, mut ln) = (y_init, 0.0);
        for w in marks.windows(2) {
            let i = self.profile.layer_index(0.5 * (w[0] + w[1]))?;
            let (y2, d) = self.cross(i, w[0], w[1], y)?;
            y = y2;
            ln += d;
        }
        Ok((y, ln))
    }
}

/// Impedance carried by [`propagate_impedance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagation {
    pub z: f64,
    /// `y = ψ'/(ν ψ)` at the end point.
    pub y: f64,
    /// `ln ψ(z_to) − ln ψ(z_from)`.
    pub log_amplitude: f64,
}

pub fn propagate_impedance(
    profile: &Profile,
    pol: Polarization,
    point: SpectralPoint,
    z_from: f64,
    z_to: f64,
    y_init: f64,
    opts: &GreenOptions,
) -> Result<Propagation> {
    if z_from == z_to {
        return Err(Error::Argument("propagation needs z_from != z_to".into()));
    }
    if !y_init.is_finite() {
        return Err(Error::Argument(format!("initial impedance {y_init} is not finite")));
    }
    profile.layer_index(z_from)?;
    profile.layer_index(z_to)?;
    let (y, log_amplitude) = Medium::new(profile, point, pol, opts).propagate(z_from, z_to, y_init)?;
    Ok(Propagation {
        z: z_to,
        y,
        log_amplitude,
    })
}

/// Impedances of the left- and right-decaying solutions at `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenPair {
    pub z: f64,
    pub polarization: Polarization,
    pub y_left: f64,
    pub y_right: f64,
}

pub fn green_pair(profile: &Profile, pol: Polarization, point: SpectralPoint, z: f64, opts: &GreenOptions) -> Result<GreenPair> {
    let s = Medium::new(profile, point, pol, opts).state(z)?;
    Ok(GreenPair {
        z,
        polarization: pol,
        y_left: s.y_left,
        y_right: s.y_right,
    })
}

/// `g̃(z, z)` and `∂_z ∂_{z₀} g̃` at coincidence.
pub fn green_at_coincidence(
    profile: &Profile,
    pol: Polarization,
    point: SpectralPoint,
    z: f64,
    opts: &GreenOptions,
) -> Result<(f64, f64)> {
    let s = Medium::new(profile, point, pol, opts).state(z)?;
    let g = 1.0 / (s.y_right - s.y_left);
    Ok((g, s.nu * s.nu * s.y_left * s.y_right * g))
}

/// `g̃(z, z₀)` away from coincidence.
pub fn green_offdiagonal(
    profile: &Profile,
    pol: Polarization,
    point: SpectralPoint,
    z: f64,
    z0: f64,
    opts: &GreenOptions,
) -> Result<f64> {
    let medium = Medium::new(profile, point, pol, opts);
    let s0 = medium.state(z0)?;
    let g0 = 1.0 / (s0.y_right - s0.y_left);
    if z == z0 {
        return Ok(g0);
    }
    // ψ_L(z)/ψ_L(z0) for z < z0, ψ_R(z)/ψ_R(z0) for z > z0, carried from z
    // towards z0 so the solution grows along the way
    let s = medium.state(z)?;
    let y = if z < z0 { s.y_left } else { s.y_right };
    let (_, ln) = medium.propagate(z, z0, y)?;
    Ok(g0 * (-ln).exp())
}

// ---------------------------------------------------------------------------
// Soft wall in wall units: Beltrami n = −1/z for −1/n0 < z < 0, uniform n0
// for z < −1/n0, realistic ε = n², μ = 1.

/// Reflection coefficients of the soft-wall ansatz `ψ = f_K + ρ f_I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub rho_e: ScaledBessel,
    pub rho_m: ScaledBessel,
}

impl ReflectionPair {
    pub fn get(&self, pol: Polarization) -> ScaledBessel {
        match pol {
            Polarization::E => self.rho_e,
            Polarization::M => self.rho_m,
        }
    }
}

/// Bessel order of the realistic Beltrami wall in wall units.
pub fn soft_wall_order(kappa: f64) -> f64 {
    (kappa * kappa + 0.25).sqrt()
}

/// `ln f` and `d ln f/dz` for `f = |z|^{±1/2} Z_ν(u|z|)` with `Z = I` or `K`.
pub(crate) fn wall_mode(pol: Polarization, u: f64, z: f64, ln_z: f64, dlog_z: f64) -> (f64, f64) {
    let d = -z;
    let power = match pol {
        Polarization::E => 0.5,
        Polarization::M => -0.5,
    };
    (power * d.ln() + ln_z, -(power / d + u * dlog_z))
}

/// Exact `ρ_E`, `ρ_M` from continuity of `ψ'/ψ` at the edge `z = −1/n0`.
/// The spectral point is in wall units.
pub fn soft_wall_reflection(point: SpectralPoint, edge: &EdgeDescriptor) -> Result<ReflectionPair> {
    let n0 = edge.n0;
    let SpectralPoint { kappa, u } = point;
    if !(u > 0.0) {
        return Err(Error::Argument("soft-wall reflection needs u > 0".into()));
    }
    let z_e = -1.0 / n0;
    let k0 = (u * u + n0 * n0 * kappa * kappa).sqrt();
    let ik = bessel_ik(soft_wall_order(kappa), -u * z_e)?;
    let rho = |pol| {
        let (ln_fk, lk) = wall_mode(pol, u, z_e, ik.ln_k, ik.dlog_k);
        let (ln_fi, li) = wall_mode(pol, u, z_e, ik.ln_i, ik.dlog_i);
        let (num, den) = (lk - k0, li - k0);
        ScaledBessel::new(
            ln_fk - ln_fi + num.abs().ln() - den.abs().ln(),
            if (num < 0.0) == (den < 0.0) { -1.0 } else { 1.0 },
        )
    };
    Ok(ReflectionPair {
        rho_e: rho(Polarization::E),
        rho_m: rho(Polarization::M),
    })
}

/// Undisturbed Beltrami Green function in Fourier space (pole at 0, `b = 1`,
/// `z, z₀ < 0`): `−I_κ(−u z_>)K_κ(−u z_<)` for `ε = μ = n`, with extra
/// `√(z z₀)` (E) or `1/√(z z₀)` (M) for `ε = n²`.
pub fn beltrami_green_fourier(point: SpectralPoint, pol: Polarization, geometric: bool, z: f64, z0: f64) -> Result<ScaledBessel> {
    if !(z < 0.0 && z0 < 0.0) {
        return Err(Error::domain(z.max(z0), "Beltrami half-space is z < 0"));
    }
    let order = if geometric {
        point.kappa
    } else {
        soft_wall_order(point.kappa)
    };
    let (z_lo, z_hi) = (z.min(z0), z.max(z0));
    let i = bessel_ik(order, -point.u * z_hi)?;
    let k = bessel_ik(order, -point.u * z_lo)?;
    let pre = if geometric {
        0.0
    } else {
        let l = 0.5 * (z * z0).ln();
        match pol {
            Polarization::E => l,
            Polarization::M => -l,
        }
    };
    Ok(ScaledBessel::new(pre + i.ln_i + k.ln_k, -1.0))
}

/// `c₊`, `c₋` of the real-space Beltrami Green function.
fn c_pm(x: f64, y: f64, z: f64, z0: f64) -> (f64, f64) {
    let r2 = x * x + y * y;
    ((r2 + (z + z0).powi(2)).sqrt(), (r2 + (z - z0).powi(2)).sqrt())
}

/// Optical path length `s = 2 artanh(c₋/c₊)` in the Beltrami half-space.
pub fn geodesic_length(x: f64, y: f64, z: f64, z0: f64) -> Result<f64> {
    if !(z < 0.0 && z0 < 0.0) {
        return Err(Error::domain(z.max(z0), "Beltrami half-space is z < 0"));
    }
    let (cp, cm) = c_pm(x, y, z, z0);
    if cm == 0.0 {
        return Err(Error::domain(z, "source and field point coincide"));
    }
    Ok(2.0 * (cm / cp).atanh())
}

/// Real-space Beltrami Green function `g = −e^{−κ s}/(2π c₊ c₋)`.
pub fn beltrami_green_realspace(kappa: f64, x: f64, y: f64, z: f64, z0: f64) -> Result<f64> {
    let s = geodesic_length(x, y, z, z0)?;
    let (cp, cm) = c_pm(x, y, z, z0);
    Ok(-(-kappa * s).exp() / (2.0 * std::f64::consts::PI * cp * cm))
}
