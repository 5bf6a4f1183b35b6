//! Planar refractive-index profiles.
//!
//! A [`Profile`] is an ordered list of segments tiling a finite interval. The
//! medium continues beyond both ends as a uniform cap that freezes the boundary
//! values of the outermost segment, except where the outermost segment is a
//! Beltrami wall running into its pole: there the profile terminates and the
//! solution regular at the pole is selected.
//!
//! Units: ħ = c = 1, lengths in an implicit unit L, wavenumbers in 1/L.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Continuity tolerance for `n` across segment boundaries (relative).
const CONTINUITY_TOL: f64 = 1e-9;
/// Default tolerance on the jump of `dn/dz` for an edge to be reported.
pub const EDGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionParams {
    /// Resonance position on the imaginary wavenumber axis (1/L).
    pub kappa0: f64,
}

impl DispersionParams {
    /// Lorentzian-type dispersion factor `(κ² + base·κ0²)/(κ² + κ0²)`.
    pub fn factor(&self, base: f64, kappa: f64) -> f64 {
        let k2 = kappa * kappa;
        let q2 = self.kappa0 * self.kappa0;
        (k2 + base * q2) / (k2 + q2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpolation {
    Linear,
    MonotoneCubic,
}

/// Sampled `ε(z)`, `μ(z)` with piecewise interpolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tabulated {
    pub z: Vec<f64>,
    pub eps: Vec<f64>,
    pub mu: Vec<f64>,
    pub interpolation: Interpolation,
    #[serde(skip)]
    eps_slopes: Vec<f64>,
    #[serde(skip)]
    mu_slopes: Vec<f64>,
}

impl Tabulated {
    pub fn new(z: Vec<f64>, eps: Vec<f64>, mu: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if z.len() < 2 || eps.len() != z.len() || mu.len() != z.len() {
            return Err(Error::Validation(
                "tabulated segment needs >= 2 samples with matching z, eps, mu lengths".into(),
            ));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation("tabulated z samples must be strictly increasing".into()));
        }
        if eps.iter().chain(mu.iter()).any(|&v| !(v >= 1.0) || !v.is_finite()) {
            return Err(Error::Validation("tabulated eps and mu samples must be >= 1".into()));
        }
        let (eps_slopes, mu_slopes) = match interpolation {
            Interpolation::Linear => (Vec::new(), Vec::new()),
            Interpolation::MonotoneCubic => (pchip_slopes(&z, &eps), pchip_slopes(&z, &mu)),
        };
        Ok(Self {
            z,
            eps,
            mu,
            interpolation,
            eps_slopes,
            mu_slopes,
        })
    }

    fn interval(&self, z: f64) -> usize {
        match self.z.partition_point(|&zi| zi <= z) {
            0 => 0,
            i if i >= self.z.len() => self.z.len() - 2,
            i => i - 1,
        }
    }

    /// Value and derivative of one sampled quantity at `z`.
    fn eval(&self, values: &[f64], slopes: &[f64], z: f64) -> (f64, f64) {
        let i = self.interval(z);
        let (z0, z1) = (self.z[i], self.z[i + 1]);
        let h = z1 - z0;
        let (y0, y1) = (values[i], values[i + 1]);
        match self.interpolation {
            Interpolation::Linear => {
                let s = (y1 - y0) / h;
                (y0 + s * (z - z0), s)
            }
            Interpolation::MonotoneCubic => {
                let (m0, m1) = (slopes[i], slopes[i + 1]);
                let t = (z - z0) / h;
                let t2 = t * t;
                let t3 = t2 * t;
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                let v = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
                let d00 = (6.0 * t2 - 6.0 * t) / h;
                let d10 = 3.0 * t2 - 4.0 * t + 1.0;
                let d01 = (-6.0 * t2 + 6.0 * t) / h;
                let d11 = 3.0 * t2 - 2.0 * t;
                (v, d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1)
            }
        }
    }
}

/// Fritsch–Carlson slopes (the scheme used by PCHIP) for monotone cubic
/// Hermite interpolation.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SegmentKind {
    /// Constant `ε`, `μ`.
    Uniform { eps: f64, mu: f64 },
    /// `n = b/|z − pole|` with either `ε = n², μ = 1` (realistic) or
    /// `ε = μ = n` (geometric).
    Beltrami { b: f64, pole: f64, geometric: bool },
    /// `ε = ϵ(κ)^{e(z)}`, `μ = 1`, with `e(z) = exponent_at_min + rate·(z − z_min)`
    /// and `ϵ(κ) = (κ² + base·κ0²)/(κ² + κ0²)`; without dispersion `ϵ = base`.
    ExponentialDispersive {
        base: f64,
        exponent_at_min: f64,
        rate: f64,
    },
    Tabulated(Tabulated),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub z_min: f64,
    pub z_max: f64,
}

/// Local material data at a point, with `z`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Local {
    pub eps: f64,
    pub mu: f64,
    pub deps: f64,
    pub dmu: f64,
}

impl Local {
    pub fn n(&self) -> f64 {
        (self.eps * self.mu).sqrt()
    }

    pub fn dn(&self) -> f64 {
        (self.deps * self.mu + self.eps * self.dmu) / (2.0 * self.n())
    }
}

impl Segment {
    pub fn new(kind: SegmentKind, z_min: f64, z_max: f64) -> Self {
        Self { kind, z_min, z_max }
    }

    pub fn contains(&self, z: f64) -> bool {
        z >= self.z_min && z <= self.z_max
    }

    /// `ln ϵ(κ)` for the exponential kind.
    pub(crate) fn log_base(base: f64, dispersion: Option<&DispersionParams>, kappa: f64) -> f64 {
        match dispersion {
            Some(d) => d.factor(base, kappa).ln(),
            None => base.ln(),
        }
    }

    /// Material data at `z` (the formula of this segment, evaluated even
    /// slightly outside its extent).
    pub fn local(&self, z: f64, kappa: f64, dispersion: Option<&DispersionParams>) -> Local {
        match &self.kind {
            SegmentKind::Uniform { eps, mu } => Local {
                eps: *eps,
                mu: *mu,
                deps: 0.0,
                dmu: 0.0,
            },
            SegmentKind::Beltrami { b, pole, geometric } => {
                let d = (pole - z).abs();
                let n = b / d;
                // dn/dz > 0 when the pole lies to the right
                let dn = if *pole > z { n / d } else { -n / d };
                if *geometric {
                    Local {
                        eps: n,
                        mu: n,
                        deps: dn,
                        dmu: dn,
                    }
                } else {
                    Local {
                        eps: n * n,
                        mu: 1.0,
                        deps: 2.0 * n * dn,
                        dmu: 0.0,
                    }
                }
            }
            SegmentKind::ExponentialDispersive {
                base,
                exponent_at_min,
                rate,
            } => {
                let l = Self::log_base(*base, dispersion, kappa);
                let e = if *rate == 0.0 {
                    *exponent_at_min
                } else {
                    exponent_at_min + rate * (z - self.z_min)
                };
                let eps = (e * l).exp();
                Local {
                    eps,
                    mu: 1.0,
                    deps: eps * rate * l,
                    dmu: 0.0,
                }
            }
            SegmentKind::Tabulated(t) => {
                let (eps, deps) = t.eval(&t.eps, &t.eps_slopes, z);
                let (mu, dmu) = t.eval(&t.mu, &t.mu_slopes, z);
                Local { eps, mu, deps, dmu }
            }
        }
    }

    /// A uniform cap carrying this segment's material values at `z`.
    fn frozen_at(&self, z: f64) -> SegmentKind {
        match &self.kind {
            SegmentKind::ExponentialDispersive {
                base,
                exponent_at_min,
                rate,
            } => SegmentKind::ExponentialDispersive {
                base: *base,
                exponent_at_min: exponent_at_min + rate * (z - self.z_min),
                rate: 0.0,
            },
            _ => {
                let l = self.local(z, 0.0, None);
                SegmentKind::Uniform { eps: l.eps, mu: l.mu }
            }
        }
    }

    fn pole(&self) -> Option<f64> {
        match self.kind {
            SegmentKind::Beltrami { pole, .. } => Some(pole),
            _ => None,
        }
    }
}

/// A segment boundary where `dn/dz` jumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeDescriptor {
    pub z_edge: f64,
    /// Index at the edge.
    pub n0: f64,
    /// `dn/dz(z⁺) − dn/dz(z⁻)` in 1/L.
    pub jump: f64,
    pub rising: bool,
    pub slope_left: f64,
    pub slope_right: f64,
}

impl EdgeDescriptor {
    /// Inverse derivative jump `b = 1/|jump|`.
    pub fn b(&self) -> f64 {
        1.0 / self.jump.abs()
    }

    /// True when `z` lies on a side of the edge where the index varies.
    pub fn graded_side(&self, z: f64) -> bool {
        if z < self.z_edge {
            self.slope_left != 0.0
        } else {
            self.slope_right != 0.0
        }
    }
}

/// How the profile ends on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    /// Uniform semi-infinite cap.
    Cap,
    /// Beltrami pole; the domain stops there.
    Pole,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    segments: Vec<Segment>,
    dispersion: Option<DispersionParams>,
    allow_index_jumps: bool,
    /// Segments including the semi-infinite caps.
    #[serde(skip)]
    layers: Vec<Segment>,
    #[serde(skip)]
    left: Termination,
    #[serde(skip)]
    right: Termination,
}

impl Profile {
    pub fn new(segments: Vec<Segment>, dispersion: Option<DispersionParams>) -> Result<Self> {
        Self::build(segments, dispersion, false)
    }

    /// Like [`Profile::new`] but accepting jumps of `n` itself across
    /// boundaries (hard walls, e.g. dielectric half-spaces).
    pub fn with_index_jumps(segments: Vec<Segment>, dispersion: Option<DispersionParams>) -> Result<Self> {
        Self::build(segments, dispersion, true)
    }

    fn build(segments: Vec<Segment>, dispersion: Option<DispersionParams>, allow_index_jumps: bool) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Validation("profile needs at least one segment".into()));
        }
        if let Some(d) = &dispersion {
            if !(d.kappa0 > 0.0) || !d.kappa0.is_finite() {
                return Err(Error::Validation(format!("kappa0 must be > 0, got {}", d.kappa0)));
            }
        }
        for (i, s) in segments.iter().enumerate() {
            if !s.z_min.is_finite() || !s.z_max.is_finite() || !(s.z_max > s.z_min) {
                return Err(Error::Validation(format!(
                    "segment {i}: need finite zmin < zmax, got [{}, {}]",
                    s.z_min, s.z_max
                )));
            }
            if i > 0 && s.z_min != segments[i - 1].z_max {
                return Err(Error::Validation(format!(
                    "segment {i} starts at {} but segment {} ends at {}",
                    s.z_min,
                    i - 1,
                    segments[i - 1].z_max
                )));
            }
            validate_kind(i, s, dispersion.as_ref())?;
        }
        let first = &segments[0];
        let last = &segments[segments.len() - 1];
        let left = if first.pole() == Some(first.z_min) {
            Termination::Pole
        } else {
            Termination::Cap
        };
        let right = if last.pole() == Some(last.z_max) {
            Termination::Pole
        } else {
            Termination::Cap
        };
        let mut layers = Vec::with_capacity(segments.len() + 2);
        if left == Termination::Cap {
            layers.push(Segment::new(first.frozen_at(first.z_min), f64::NEG_INFINITY, first.z_min));
        }
        layers.extend(segments.iter().cloned());
        if right == Termination::Cap {
            layers.push(Segment::new(last.frozen_at(last.z_max), last.z_max, f64::INFINITY));
        }
        let profile = Self {
            segments,
            dispersion,
            allow_index_jumps,
            layers,
            left,
            right,
        };
        if !allow_index_jumps {
            profile.check_continuity()?;
        }
        Ok(profile)
    }

    fn check_continuity(&self) -> Result<()> {
        let scale = self.dispersion.map(|d| d.kappa0).unwrap_or(1.0);
        for kappa in [0.0, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4].map(|k| k * scale) {
            for w in self.layers.windows(2) {
                let z = w[0].z_max;
                let nl = w[0].local(z, kappa, self.dispersion.as_ref()).n();
                let nr = w[1].local(z, kappa, self.dispersion.as_ref()).n();
                if (nl - nr).abs() > CONTINUITY_TOL * nl.max(nr).max(1.0) {
                    return Err(Error::IndexJump { z, left: nl, right: nr });
                }
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn dispersion(&self) -> Option<&DispersionParams> {
        self.dispersion.as_ref()
    }

    pub fn allows_index_jumps(&self) -> bool {
        self.allow_index_jumps
    }

    /// Segments with the semi-infinite caps attached.
    pub fn layers(&self) -> &[Segment] {
        &self.layers
    }

    pub fn left_termination(&self) -> Termination {
        self.left
    }

    pub fn right_termination(&self) -> Termination {
        self.right
    }

    /// Finite interfaces between layers, plus terminating poles.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.layers.windows(2).map(|w| w[0].z_max).collect();
        if self.left == Termination::Pole {
            b.insert(0, self.layers[0].z_min);
        }
        if self.right == Termination::Pole {
            b.push(self.layers[self.layers.len() - 1].z_max);
        }
        b
    }

    /// True when some segment has `μ ≠ 1`; such media are accepted but are
    /// outside the validated configurations.
    pub fn is_magnetic(&self) -> bool {
        self.segments.iter().any(|s| match &s.kind {
            SegmentKind::Uniform { mu, .. } => *mu != 1.0,
            SegmentKind::Beltrami { geometric, .. } => *geometric,
            SegmentKind::Tabulated(t) => t.mu.iter().any(|&m| m != 1.0),
            SegmentKind::ExponentialDispersive { .. } => false,
        })
    }

    /// Index of the layer containing `z`; points on an interface belong to
    /// the layer on their right.
    pub fn layer_index(&self, z: f64) -> Result<usize> {
        if !z.is_finite() {
            return Err(Error::domain(z, "non-finite position"));
        }
        let first = &self.layers[0];
        let last = &self.layers[self.layers.len() - 1];
        if (self.left == Termination::Pole && z <= first.z_min)
            || (self.right == Termination::Pole && z >= last.z_max)
        {
            return Err(Error::domain(z, "at or beyond a Beltrami pole"));
        }
        let i = self.layers.partition_point(|s| s.z_max <= z);
        Ok(i.min(self.layers.len() - 1))
    }

    fn check_kappa(kappa: f64) -> Result<()> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::Argument(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        Ok(())
    }

    /// Material data at `z` from the layer on the right of any interface.
    pub fn local(&self, z: f64, kappa: f64) -> Result<Local> {
        Self::check_kappa(kappa)?;
        let i = self.layer_index(z)?;
        Ok(self.layers[i].local(z, kappa, self.dispersion.as_ref()))
    }

    /// Left and right one-sided material data at `z`.
    pub fn local_sides(&self, z: f64, kappa: f64) -> Result<(Local, Local)> {
        Self::check_kappa(kappa)?;
        let i = self.layer_index(z)?;
        let right = self.layers[i].local(z, kappa, self.dispersion.as_ref());
        let left = if i > 0 && z == self.layers[i].z_min {
            self.layers[i - 1].local(z, kappa, self.dispersion.as_ref())
        } else {
            right
        };
        let zero_slope = |l: Local, seg: &Segment| {
            if seg.z_min.is_infinite() || seg.z_max.is_infinite() {
                Local { deps: 0.0, dmu: 0.0, ..l }
            } else {
                l
            }
        };
        let li = if i > 0 && z == self.layers[i].z_min { i - 1 } else { i };
        Ok((zero_slope(left, &self.layers[li]), zero_slope(right, &self.layers[i])))
    }
}

fn validate_kind(i: usize, s: &Segment, dispersion: Option<&DispersionParams>) -> Result<()> {
    let bad = |msg: String| Err(Error::Validation(format!("segment {i}: {msg}")));
    match &s.kind {
        SegmentKind::Uniform { eps, mu } => {
            if !(*eps >= 1.0 && *mu >= 1.0) || !eps.is_finite() || !mu.is_finite() {
                return bad(format!("uniform eps, mu must be >= 1, got {eps}, {mu}"));
            }
        }
        SegmentKind::Beltrami { b, pole, .. } => {
            if !(*b > 0.0) || !b.is_finite() || !pole.is_finite() {
                return bad(format!("Beltrami b must be > 0 and pole finite, got b = {b}"));
            }
            if *pole > s.z_min && *pole < s.z_max {
                return bad(format!("Beltrami pole {pole} lies inside the segment"));
            }
            let d_max = (pole - s.z_min).abs().max((pole - s.z_max).abs());
            if d_max > b * (1.0 + 1e-12) {
                return bad(format!("Beltrami index b/|z - pole| drops below 1 (b = {b}, distance {d_max})"));
            }
        }
        SegmentKind::ExponentialDispersive {
            base,
            exponent_at_min,
            rate,
        } => {
            if !(*base >= 1.0) || !base.is_finite() {
                return bad(format!("exponential base must be >= 1, got {base}"));
            }
            let e_max = exponent_at_min + rate * (s.z_max - s.z_min);
            if !(*exponent_at_min >= 0.0 && e_max >= 0.0) || !rate.is_finite() {
                return bad("exponential exponent must stay >= 0 on the segment".into());
            }
            let _ = dispersion;
        }
        SegmentKind::Tabulated(t) => {
            if t.z[0] != s.z_min || t.z[t.z.len() - 1] != s.z_max {
                return bad("tabulated samples must span exactly [zmin, zmax]".into());
            }
        }
    }
    Ok(())
}

/// `ε(z, κ)`.
pub fn permittivity(profile: &Profile, z: f64, kappa: f64) -> Result<f64> {
    Ok(profile.local(z, kappa)?.eps)
}

/// `μ(z, κ)`.
pub fn permeability(profile: &Profile, z: f64, kappa: f64) -> Result<f64> {
    Ok(profile.local(z, kappa)?.mu)
}

/// `n` and its one-sided derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexSample {
    pub n: f64,
    pub dn_left: f64,
    pub dn_right: f64,
}

pub fn refractive_index(profile: &Profile, z: f64, kappa: f64) -> Result<IndexSample> {
    let (l, r) = profile.local_sides(z, kappa)?;
    Ok(IndexSample {
        n: r.n(),
        dn_left: l.dn(),
        dn_right: r.dn(),
    })
}

/// Edges of the static (`κ = 0`) profile.
pub fn detect_edges(profile: &Profile) -> Result<Vec<EdgeDescriptor>> {
    detect_edges_at(profile, 0.0, EDGE_TOL)
}

/// Boundaries where the one-sided `dn/dz` differ by more than `tol`.
pub fn detect_edges_at(profile: &Profile, kappa: f64, tol: f64) -> Result<Vec<EdgeDescriptor>> {
    let disp = profile.dispersion();
    let mut edges = Vec::new();
    for w in profile.layers().windows(2) {
        let z = w[0].z_max;
        let mut left = w[0].local(z, kappa, disp);
        let mut right = w[1].local(z, kappa, disp);
        if w[0].z_min.is_infinite() {
            left.deps = 0.0;
            left.dmu = 0.0;
        }
        if w[1].z_max.is_infinite() {
            right.deps = 0.0;
            right.dmu = 0.0;
        }
        let (nl, nr) = (left.n(), right.n());
        if (nl - nr).abs() > CONTINUITY_TOL * nl.max(nr).max(1.0) {
            return Err(Error::IndexJump { z, left: nl, right: nr });
        }
        let (sl, sr) = (left.dn(), right.dn());
        let jump = sr - sl;
        if jump.abs() > tol {
            edges.push(EdgeDescriptor {
                z_edge: z,
                n0: nr,
                jump,
                rising: jump > 0.0,
                slope_left: sl,
                slope_right: sr,
            });
        }
    }
    Ok(edges)
}

// ---------------------------------------------------------------------------
// JSON profile config

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileConfig {
    segments: Vec<SegmentConfig>,
    dispersion: Option<DispersionParams>,
    #[serde(default)]
    allow_index_jumps: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentConfig {
    kind: String,
    zmin: f64,
    zmax: f64,
    params: serde_json::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniformParams {
    eps: f64,
    #[serde(default = "one")]
    mu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeltramiParams {
    b: f64,
    pole: f64,
    #[serde(default)]
    geometric: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExponentialParams {
    #[serde(default = "euler")]
    base: f64,
    exponent_at_zmin: f64,
    rate: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TabulatedParams {
    z: Vec<f64>,
    eps: Vec<f64>,
    mu: Option<Vec<f64>>,
    #[serde(default = "cubic")]
    order: u8,
}

fn one() -> f64 {
    1.0
}

fn euler() -> f64 {
    E
}

fn cubic() -> u8 {
    3
}

fn params<T: serde::de::DeserializeOwned>(i: usize, v: serde_json::Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(format!("segment {i} params: {e}")))
}

impl Profile {
    /// Parses the JSON profile config (see `docs/profile.schema.json`).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ProfileConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut segments = Vec::with_capacity(cfg.segments.len());
        for (i, s) in cfg.segments.into_iter().enumerate() {
            let kind = match s.kind.as_str() {
                "uniform" => {
                    let p: UniformParams = params(i, s.params)?;
                    SegmentKind::Uniform { eps: p.eps, mu: p.mu }
                }
                "beltrami" => {
                    let p: BeltramiParams = params(i, s.params)?;
                    SegmentKind::Beltrami {
                        b: p.b,
                        pole: p.pole,
                        geometric: p.geometric,
                    }
                }
                "exponential" => {
                    let p: ExponentialParams = params(i, s.params)?;
                    SegmentKind::ExponentialDispersive {
                        base: p.base,
                        exponent_at_min: p.exponent_at_zmin,
                        rate: p.rate,
                    }
                }
                "tabulated" => {
                    let p: TabulatedParams = params(i, s.params)?;
                    let interpolation = match p.order {
                        1 => Interpolation::Linear,
                        3 => Interpolation::MonotoneCubic,
                        o => return Err(Error::Config(format!("segment {i}: interpolation order must be 1 or 3, got {o}"))),
                    };
                    let mu = p.mu.unwrap_or_else(|| vec![1.0; p.z.len()]);
                    SegmentKind::Tabulated(Tabulated::new(p.z, p.eps, mu, interpolation)?)
                }
                other => return Err(Error::Config(format!("segment {i}: unknown kind '{other}'"))),
            };
            segments.push(Segment::new(kind, s.zmin, s.zmax));
        }
        Self::build(segments, cfg.dispersion, cfg.allow_index_jumps)
    }

    /// SHA-256 of the canonical serialized profile, hex encoded.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(self).expect("profile serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn vacuum_permittivity_is_one() {
        let p = presets::uniform(1.0);
        for &(z, k) in &[(-3.0, 0.0), (0.2, 5.0), (10.0, 1e3)] {
            assert_eq!(permittivity(&p, z, k).unwrap(), 1.0);
        }
    }

    #[test]
    fn exponential_permittivity_values() {
        let p = presets::exponential_slab();
        let e = permittivity(&p, 0.5, 0.0).unwrap();
        assert!((e - 0.5f64.exp()).abs() < 1e-14);
        assert!((e - 1.648_721_270_700_128).abs() < 1e-12);
        let far = permittivity(&p, 1.0 - 1e-12, 1e9).unwrap();
        assert!((far - 1.0).abs() < 1e-9);
    }

    #[test]
    fn beltrami_index_and_slope() {
        let p = presets::soft_wall(1.0, 1.0);
        let s = refractive_index(&p, -1.0, 0.0).unwrap();
        assert!((s.n - 1.0).abs() < 1e-15);
        assert_eq!(s.dn_left, 0.0);
        assert!((s.dn_right - 1.0).abs() < 1e-15);
        for &z in &[-0.9, -0.5, -0.01] {
            let n = refractive_index(&p, z, 0.0).unwrap().n;
            assert!((n * (0.0 - z) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_slope_is_zero() {
        let p = presets::uniform(2.25);
        let s = refractive_index(&p, 0.3, 1.0).unwrap();
        assert_eq!((s.dn_left, s.dn_right), (0.0, 0.0));
        assert!((s.n - 1.5).abs() < 1e-15);
    }

    #[test]
    fn exponential_slope_at_lower_edge() {
        let p = presets::exponential_slab();
        let s = refractive_index(&p, 0.0, 0.0).unwrap();
        assert!((s.dn_right - 0.5).abs() < 1e-14);
        // finite-difference cross-check of n = e^{z/2}
        let h = 1e-6;
        let fd = (refractive_index(&p, h, 0.0).unwrap().n - refractive_index(&p, 0.0, 0.0).unwrap().n) / h;
        assert!((fd - 0.5).abs() < 1e-6);
    }

    #[test]
    fn soft_wall_has_one_rising_edge() {
        let edges = detect_edges(&presets::soft_wall(1.0, 1.0)).unwrap();
        assert_eq!(edges.len(), 1);
        let e = edges[0];
        assert_eq!(e.z_edge, -1.0);
        assert!((e.n0 - 1.0).abs() < 1e-15);
        assert!((e.jump - 1.0).abs() < 1e-15);
        assert!(e.rising);
    }

    #[test]
    fn uniform_profile_has_no_edges() {
        assert!(detect_edges(&presets::uniform(2.25)).unwrap().is_empty());
    }

    #[test]
    fn exponential_slab_edges() {
        let edges = detect_edges(&presets::exponential_slab()).unwrap();
        assert_eq!(edges.len(), 2);
        let h = 0.5f64.exp();
        assert!((edges[0].z_edge - 0.0).abs() < 1e-15);
        assert!((edges[0].n0 - 1.0).abs() < 1e-14);
        assert!((edges[0].jump - 0.5).abs() < 1e-14);
        assert!((edges[1].z_edge - 1.0).abs() < 1e-15);
        assert!((edges[1].n0 - h).abs() < 1e-14);
        assert!((edges[1].jump + 0.5 * h).abs() < 1e-14);
        assert!(!edges[1].rising);
    }

    #[test]
    fn index_jump_is_rejected_unless_allowed() {
        let segs = || {
            vec![
                Segment::new(SegmentKind::Uniform { eps: 1.0, mu: 1.0 }, 0.0, 1.0),
                Segment::new(SegmentKind::Uniform { eps: 4.0, mu: 1.0 }, 1.0, 2.0),
            ]
        };
        match Profile::new(segs(), None) {
            Err(Error::IndexJump { z, .. }) => assert_eq!(z, 1.0),
            other => panic!("expected index jump, got {other:?}"),
        }
        let p = Profile::with_index_jumps(segs(), None).unwrap();
        assert!(matches!(detect_edges(&p), Err(Error::IndexJump { .. })));
    }

    #[test]
    fn splitting_uniform_segment_keeps_edges() {
        let whole = presets::soft_wall(1.0, 1.0);
        let mut segs = vec![
            Segment::new(SegmentKind::Uniform { eps: 1.0, mu: 1.0 }, -3.0, -2.0),
            Segment::new(SegmentKind::Uniform { eps: 1.0, mu: 1.0 }, -2.0, -1.0),
        ];
        segs.extend(whole.segments().iter().cloned());
        let split = Profile::new(segs, None).unwrap();
        assert_eq!(detect_edges(&whole).unwrap(), detect_edges(&split).unwrap());
        assert_eq!(detect_edges(&split).unwrap(), detect_edges(&split).unwrap());
    }

    #[test]
    fn continuity_on_presets() {
        for p in [presets::exponential_slab(), presets::soft_wall(1.0, 2.0), presets::soft_wall(1.0, 1.0)] {
            let scale = p.dispersion().map(|d| d.kappa0).unwrap_or(1.0);
            for kappa in [0.0, 0.3, 3.0, 30.0, 300.0].map(|k| k * scale) {
                for w in p.layers().windows(2) {
                    let z = w[0].z_max;
                    let nl = w[0].local(z, kappa, p.dispersion()).n();
                    let nr = w[1].local(z, kappa, p.dispersion()).n();
                    assert!((nl - nr).abs() < 1e-12, "z={z} kappa={kappa}");
                }
            }
        }
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let p = presets::soft_wall(1.0, 1.0);
        assert!(matches!(permittivity(&p, 0.0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(permittivity(&p, 0.5, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(permittivity(&p, f64::NAN, 0.0), Err(Error::Domain { .. })));
        assert!(permittivity(&p, -50.0, 0.0).is_ok());
    }

    #[test]
    fn json_config_roundtrip_and_strictness() {
        let text = r#"{"segments":[{"kind":"exponential","zmin":0,"zmax":1,
            "params":{"exponent_at_zmin":0,"rate":1}}],"dispersion":{"kappa0":200}}"#;
        let p = Profile::from_json_str(text).unwrap();
        assert_eq!(p, presets::exponential_slab());
        assert_eq!(p.content_hash(), presets::exponential_slab().content_hash());
        let unknown = r#"{"segments":[],"dispersion":null,"extra":1}"#;
        assert!(matches!(Profile::from_json_str(unknown), Err(Error::Config(_))));
        let bad_param = r#"{"segments":[{"kind":"uniform","zmin":0,"zmax":1,
            "params":{"eps":2,"colour":3}}],"dispersion":null}"#;
        assert!(matches!(Profile::from_json_str(bad_param), Err(Error::Config(_))));
    }

    #[test]
    fn tabulated_monotone_cubic() {
        let z = vec![0.0, 0.5, 1.0, 1.5];
        let eps: Vec<f64> = z.iter().map(|&x: &f64| 1.0 + x * x).collect();
        let t = Tabulated::new(z, eps, vec![1.0; 4], Interpolation::MonotoneCubic).unwrap();
        let seg = Segment::new(SegmentKind::Tabulated(t), 0.0, 1.5);
        let mut prev = 0.0;
        for i in 0..=150 {
            let x = i as f64 * 0.01;
            let l = seg.local(x, 0.0, None);
            assert!(l.eps >= prev - 1e-15, "monotone");
            prev = l.eps;
            assert!((l.eps - (1.0 + x * x)).abs() < 0.02);
        }
    }
}
