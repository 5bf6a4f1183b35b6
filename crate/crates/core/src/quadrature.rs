//! Quadrature rules for the `(w, θ)` stress integral.
//!
//! Integrands may fail (a Bessel or solver error deep inside), so every rule
//! takes `FnMut(f64) -> Result<f64>` and stops at the first error.

use std::f64::consts::FRAC_PI_2;
use std::num::NonZeroUsize;

use gauss_quad::laguerre::GaussLaguerre;

use crate::error::Result;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

// Gauss–Kronrod 7/15 nodes on [-1, 1] (non-negative half).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// One G7/K15 panel: `(Kronrod value, |Kronrod − Gauss|, summed sub-errors)`.
/// `f` returns a value and its own error estimate.
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64, f64)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = KahanSum::default();
    let mut g = KahanSum::default();
    let mut inner = 0.0;
    for (i, &x) in XGK.iter().enumerate() {
        let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for &sgn in pts {
            let (v, e) = f(c + sgn * h * x)?;
            k.add(WGK[i] * v);
            inner += WGK[i] * e;
            if i % 2 == 1 {
                g.add(WG[i / 2] * v);
            }
        }
    }
    let kv = h * k.value();
    let gv = h * g.value();
    Ok((kv, (kv - gv).abs(), h.abs() * inner))
}

/// Adaptive Gauss–Kronrod on `[a, b]` starting from `panels` equal panels and
/// bisecting the worst panel until `error ≤ max(rtol |I|, atol)`.
pub fn adaptive_gk<F>(f: F, a: f64, b: f64, panels: usize, rtol: f64, atol: f64, max_panels: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    adaptive_gk_until(f, a, b, panels, rtol, atol, max_panels, || false)
}

/// [`adaptive_gk`] that also gives up refining once `exhausted()` is true.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_gk_until<F, S>(mut f: F, a: f64, b: f64, panels: usize, rtol: f64, atol: f64, max_panels: usize, exhausted: S) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
    S: Fn() -> bool,
{
    let panels = panels.max(1);
    let mut list: Vec<(f64, f64, f64, f64, f64)> = Vec::new();
    let mut evaluations = 0;
    for i in 0..panels {
        let lo = a + (b - a) * i as f64 / panels as f64;
        let hi = a + (b - a) * (i + 1) as f64 / panels as f64;
        let (v, e, ie) = gk15(&mut f, lo, hi)?;
        evaluations += 15;
        list.push((lo, hi, v, e, ie));
    }
    loop {
        let mut total = KahanSum::default();
        let mut err = 0.0;
        for p in &list {
            total.add(p.2);
            err += p.3 + p.4;
        }
        let value = total.value();
        let converged = err <= (rtol * value.abs()).max(atol);
        if converged || list.len() >= max_panels || exhausted() {
            return Ok(QuadResult {
                value,
                error: err,
                evaluations,
                converged,
            });
        }
        // bisect the panel with the largest quadrature error
        let worst = list
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty panel list");
        let (lo, hi, ..) = list.remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1, i1) = gk15(&mut f, lo, mid)?;
        let (v2, e2, i2) = gk15(&mut f, mid, hi)?;
        evaluations += 30;
        list.insert(worst, (mid, hi, v2, e2, i2));
        list.insert(worst, (lo, mid, v1, e1, i1));
    }
}

/// Trapezoidal sum over `t = k h` (odd `k` only when `odd`), walking out from
/// `t = 0` in both directions until terms become negligible.
fn de_sum<F, M>(f: &mut F, map: &M, h: f64, odd: bool, t_max: f64, evals: &mut usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    M: Fn(f64) -> Option<(f64, f64)>,
{
    let mut s = KahanSum::default();
    let start = if odd { 1 } else { 0 };
    let step = if odd { 2 } else { 1 };
    if !odd {
        if let Some((x, dx)) = map(0.0) {
            s.add(f(x)? * dx);
            *evals += 1;
        }
    }
    for dir in [1.0, -1.0] {
        let mut small = 0;
        let mut k = if odd { start } else { 1 };
        loop {
            let t = dir * k as f64 * h;
            if t.abs() > t_max {
                break;
            }
            let term = match map(t) {
                Some((x, dx)) => {
                    *evals += 1;
                    f(x)? * dx
                }
                None => 0.0,
            };
            s.add(term);
            // zeros near the centre (an underflowing midpoint) do not count
            let negligible = if s.value() != 0.0 {
                term.abs() <= 1e-18 * s.value().abs()
            } else {
                term == 0.0 && t.abs() >= 3.0
            };
            if negligible {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
            k += step;
        }
    }
    Ok(h * s.value())
}

fn de_levels<F, M>(mut f: F, map: M, rtol: f64, atol: f64, max_level: u32) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
    M: Fn(f64) -> Option<(f64, f64)>,
{
    const T_MAX: f64 = 6.5;
    let mut evaluations = 0;
    let mut h = 0.5;
    let mut value = de_sum(&mut f, &map, h, false, T_MAX, &mut evaluations)?;
    let mut error = f64::INFINITY;
    for _ in 0..max_level {
        let odd = de_sum(&mut f, &map, h / 2.0, true, T_MAX, &mut evaluations)?;
        let next = 0.5 * value + odd;
        error = (next - value).abs();
        value = next;
        h /= 2.0;
        if error <= (rtol * value.abs()).max(atol) {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
                converged: true,
            });
        }
    }
    Ok(QuadResult {
        value,
        error,
        evaluations,
        converged: false,
    })
}

/// Exp-sinh rule for `∫_0^∞ f(w) dw` with `w = s·exp(π/2 sinh t)`.
pub fn exp_sinh<F>(f: F, scale: f64, rtol: f64, atol: f64, max_level: u32) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let map = move |t: f64| {
        let w = scale * (FRAC_PI_2 * t.sinh()).exp();
        if w == 0.0 || !w.is_finite() {
            None
        } else {
            Some((w, w * FRAC_PI_2 * t.cosh()))
        }
    };
    de_levels(f, map, rtol, atol, max_level)
}

/// Tanh-sinh rule for `∫_0^b f(w) dw`.
pub fn tanh_sinh<F>(f: F, b: f64, rtol: f64, atol: f64, max_level: u32) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let half = 0.5 * b;
    let map = move |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let c = u.cosh();
        // distance from the nearer endpoint, kept exact near both ends
        let gap = half / (u.exp() * c);
        let w = if t >= 0.0 { b - gap } else { half * u.exp() / c };
        let dw = half * FRAC_PI_2 * t.cosh() / (c * c);
        if dw == 0.0 || w <= 0.0 || w >= b {
            None
        } else {
            Some((w, dw))
        }
    };
    de_levels(f, map, rtol, atol, max_level)
}

/// Gauss–Laguerre rule for `∫_0^∞ f(w) dw` with `w = s x`; the error estimate
/// is the difference to the half-order rule.
pub fn gauss_laguerre<F>(mut f: F, scale: f64, nodes: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut run = |n: usize| -> Result<f64> {
        let rule = GaussLaguerre::new(NonZeroUsize::new(n).expect("positive node count"), 0.0.try_into().expect("alpha = 0"));
        let mut s = KahanSum::default();
        for &(x, wt) in rule.as_node_weight_pairs() {
            s.add(wt * x.exp() * f(scale * x)? * scale);
        }
        Ok(s.value())
    };
    let full = run(nodes)?;
    let half = run((nodes / 2).max(1))?;
    Ok(QuadResult {
        value: full,
        error: (full - half).abs(),
        evaluations: nodes + nodes / 2,
        converged: true,
    })
}
