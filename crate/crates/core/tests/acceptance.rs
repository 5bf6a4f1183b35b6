//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use casimir_core::analytic::{angular_integral_check, asympt_reflection, casimir_ideal, dphi_dz, near_edge_stress, EdgeLaw};
use casimir_core::bessel::{bessel_ik, uniform_asymptotic_i, uniform_asymptotic_k};
use casimir_core::green::{
    beltrami_green_fourier, green_at_coincidence, green_offdiagonal, soft_wall_reflection, GreenOptions, Polarization,
    SpectralPoint, Stepping,
};
use casimir_core::presets;
use casimir_core::profile::{detect_edges, Profile, Segment, SegmentKind};
use casimir_core::stress::{edge_law_reference, stress_at, stress_profile, QuadratureParams, StressPoint};

const LAW_1: f64 = 23.0 / (960.0 * PI * PI);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn params() -> QuadratureParams {
    QuadratureParams::default()
}

/// Ten log-spaced distances from 0.02 to 0.2.
fn a_grid() -> Vec<f64> {
    (0..10).map(|i| 0.02 * 10f64.powf(i as f64 / 9.0)).collect()
}

fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = (x.iter().map(|v| v.ln()).collect(), y.iter().map(|v| v.ln()).collect());
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn wall_points(n0: f64, q: &QuadratureParams) -> Vec<StressPoint> {
    let p = presets::soft_wall(1.0, n0);
    let z: Vec<f64> = a_grid().iter().map(|a| -n0 + a).collect();
    stress_profile(&p, &z, q).unwrap().points
}

fn power_law(n0: f64) -> Outcome {
    let pts = wall_points(n0, &params());
    let a = a_grid();
    let sigma: Vec<f64> = pts.iter().map(|p| p.sigma).collect();
    if sigma.iter().any(|s| *s <= 0.0) {
        return outcome(false, "non-positive stress");
    }
    let slope = fit_slope(&a, &sigma);
    let law = LAW_1 / n0.powi(3);
    let worst = a[..5]
        .iter()
        .zip(&sigma)
        .map(|(a, s)| (s * a * a / law - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        (slope + 2.0).abs() <= 0.05 && worst < 0.05 && pts.iter().all(|p| p.converged),
        format!("slope {slope:.4}, worst small-a prefactor deviation {:.2}%", 100.0 * worst),
    )
}

fn crit1() -> Outcome {
    let p = presets::uniform(2.25);
    let z: Vec<f64> = (0..20).map(|i| -0.95 + 0.1 * i as f64).collect();
    let r = stress_profile(&p, &z, &params()).unwrap();
    let worst = r.points.iter().map(|p| p.sigma.abs()).fold(0.0, f64::max);
    outcome(worst < 1e-8, format!("max |sigma| = {worst:.2e} over {} points", z.len()))
}

fn crit4() -> Outcome {
    let mut worst = 0.0f64;
    for a in [0.05, 0.1] {
        let up = stress_at(&presets::soft_wall(1.0, 1.0), -1.0 + a, &params()).unwrap();
        let down = stress_at(&presets::soft_wall_mirrored(1.0, 1.0), 1.0 - a, &params()).unwrap();
        worst = worst.max((down.sigma / up.sigma - 1.0).abs());
    }
    outcome(worst < 0.02, format!("max falling/rising deviation {:.2e}", worst))
}

fn crit5() -> Outcome {
    let p = presets::exponential_slab();
    let z: Vec<f64> = (1..=50).map(|i| i as f64 / 51.0).collect();
    let r = stress_profile(&p, &z, &params()).unwrap();
    let law = edge_law_reference(&p, &z).unwrap();
    let edges = detect_edges(&p).unwrap();
    let mut pass = edges.len() == 2;
    let mut parts = Vec::new();
    for e in &edges {
        let devs: Vec<f64> = r
            .points
            .iter()
            .zip(&law)
            .filter(|(pt, _)| {
                let a = (pt.z - e.z_edge).abs();
                (0.02..=0.1).contains(&a)
            })
            .map(|(pt, l)| (pt.sigma / l - 1.0).abs())
            .collect();
        let worst = devs.iter().cloned().fold(0.0, f64::max);
        pass &= !devs.is_empty() && worst < 0.1;
        parts.push(format!("edge {}: {} points, worst {:.1}%", e.z_edge, devs.len(), 100.0 * worst));
    }
    pass &= r.all_converged();
    outcome(pass, parts.join("; "))
}

/// `Li₄(x)` for `0 ≤ x ≤ 1`.
fn li4(x: f64) -> f64 {
    let (mut s, mut xn) = (0.0, 1.0);
    for n in 1..200_000u32 {
        xn *= x;
        let t = xn / (n as f64).powi(4);
        s += t;
        if t < 1e-18 * s {
            break;
        }
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Two nondispersive half-spaces of permittivity `eps` across a vacuum gap
/// `a`. The Fresnel coefficients depend only on the polar angle, so the
/// radial integral is `Σₙ r^{2n}·3!/(2na)⁴ = (3/8a⁴) Li₄(r²)`.
fn lifshitz_plates(eps: f64, a: f64) -> f64 {
    let f = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let k1 = (s * s + eps * c * c).sqrt();
        let re = (1.0 - k1) / (1.0 + k1);
        let rm = (eps - k1) / (eps + k1);
        s * (li4(re * re) + li4(rm * rm))
    };
    let (lo, hi) = (0.0, 0.5 * PI);
    let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    let angular = simpson(&f, lo, hi, fa, fm, fb, whole, 1e-13, 40);
    angular * 3.0 / (8.0 * a.powi(4)) / (2.0 * PI * PI)
}

fn crit6() -> Outcome {
    let ideal = casimir_ideal(1.0).unwrap();
    let ideal_oracle = lifshitz_plates(1e12, 1.0);
    let oracle = lifshitz_plates(1e4, 1.0);
    let p = presets::two_plates(1e4, 1.0);
    let r = stress_at(&p, 0.5, &params()).unwrap();
    let vs_ideal = r.sigma / ideal - 1.0;
    let vs_oracle = (r.sigma / oracle - 1.0).abs();
    let bounded = (r.sigma - ideal).abs() <= (oracle - ideal).abs() * (1.0 + 1e-3);
    outcome(
        vs_ideal.abs() < 0.05 && bounded && vs_oracle < 1e-3,
        format!(
            "sigma/ideal - 1 = {:.2}%, Lifshitz oracle/ideal - 1 = {:.2}% (oracle at eps=1e12: {:.1e}), numeric vs oracle {:.1e}",
            100.0 * vs_ideal,
            100.0 * (oracle / ideal - 1.0),
            ideal_oracle / ideal - 1.0,
            vs_oracle
        ),
    )
}

fn crit7() -> Outcome {
    // (a) Ode-stepped Beltrami wall against the Bessel closed form; b = 60 fits
    // the grid into n ≥ 1 and maps κ to 60κ
    let bb = 60.0;
    let mut worst_a = 0.0f64;
    for geometric in [true, false] {
        let p = Profile::new(
            vec![Segment::new(SegmentKind::Beltrami { b: bb, pole: 0.0, geometric }, -bb, 0.0)],
            None,
        )
        .unwrap();
        let opts = GreenOptions {
            stepping: Stepping::Ode,
            ..Default::default()
        };
        for pol in Polarization::ALL {
            let f = match (geometric, pol) {
                (true, _) => bb,
                (false, Polarization::E) => 1.0,
                (false, Polarization::M) => bb * bb,
            };
            for k in [0.1, 0.5, 1.0, 2.5, 5.0] {
                for u in [0.5, 1.0, 2.0, 3.5, 5.0] {
                    for z in [-0.2, -0.5, -1.0, -2.0, -3.0] {
                        let (g, _) = green_at_coincidence(&p, pol, SpectralPoint::new(k / bb, u).unwrap(), z, &opts).unwrap();
                        let exact = f * beltrami_green_fourier(SpectralPoint::new(k, u).unwrap(), pol, geometric, z, z)
                            .unwrap()
                            .value();
                        worst_a = worst_a.max((g / exact - 1.0).abs());
                    }
                }
            }
        }
    }
    // (b) exact reflection against the large-w forms
    let wall = presets::soft_wall(1.0, 1.0);
    let edge = detect_edges(&wall).unwrap()[0];
    let mut worst_b = 0.0f64;
    for th in [PI / 6.0, PI / 4.0, PI / 3.0] {
        let exact = soft_wall_reflection(SpectralPoint::from_polar(200.0, th).unwrap(), &edge).unwrap();
        let (ae, am) = asympt_reflection(th, 200.0).unwrap();
        worst_b = worst_b
            .max(((exact.rho_e / ae).value() - 1.0).abs())
            .max(((exact.rho_m / am).value() - 1.0).abs());
    }
    // (c) unit jump of (1/ν)∂g by one-sided second-order differences
    let mut worst_c = 0.0f64;
    let h = 1e-4;
    for p in [presets::soft_wall(1.0, 2.0), presets::exponential_slab()] {
        let seg = &p.segments()[0];
        let z0 = 0.5 * (seg.z_min + seg.z_max);
        let pt = SpectralPoint::from_polar(3.0, 0.9).unwrap();
        for pol in Polarization::ALL {
            let g = |z: f64| green_offdiagonal(&p, pol, pt, z, z0, &GreenOptions::default()).unwrap();
            let right = (-3.0 * g(z0) + 4.0 * g(z0 + h) - g(z0 + 2.0 * h)) / (2.0 * h);
            let left = (3.0 * g(z0) - 4.0 * g(z0 - h) + g(z0 - 2.0 * h)) / (2.0 * h);
            let nu = pol.nu(&p.local(z0, pt.kappa).unwrap());
            worst_c = worst_c.max(((right - left) / nu - 1.0).abs());
        }
    }
    outcome(
        worst_a < 1e-6 && worst_b < 1e-2 && worst_c < 1e-6,
        format!("(a) {worst_a:.1e} (b) {worst_b:.1e} (c) {worst_c:.1e}"),
    )
}

fn ln_decimal(s: &str) -> f64 {
    let (m, e) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<f64>().unwrap()),
        None => (s, 0.0),
    };
    m.parse::<f64>().unwrap().ln() + e * std::f64::consts::LN_10
}

fn crit8() -> Outcome {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/bessel_golden.csv")).unwrap();
    let (mut rows, mut max_nu) = (0, 0.0f64);
    let (mut golden, mut asym, mut wronsk) = (0.0f64, 0.0f64, 0.0f64);
    for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let (nu, x): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let (li, lk) = (ln_decimal(f[2]), ln_decimal(f[3]));
        let b = bessel_ik(nu, x).unwrap();
        rows += 1;
        max_nu = max_nu.max(nu);
        golden = golden.max((b.ln_i - li).exp_m1().abs()).max((b.ln_k - lk).exp_m1().abs());
        wronsk = wronsk.max((x * (b.ln_i + b.ln_k).exp() * (b.dlog_k - b.dlog_i) + 1.0).abs());
        if nu.hypot(x) > 30.0 {
            let ai = uniform_asymptotic_i(nu, x).unwrap().value.log_magnitude;
            let ak = uniform_asymptotic_k(nu, x).unwrap().value.log_magnitude;
            asym = asym.max((ai - li).exp_m1().abs()).max((ak - lk).exp_m1().abs());
        }
    }
    outcome(
        rows >= 200 && max_nu <= 1000.0 && golden < 1e-10 && asym < 1e-2 && wronsk < 1e-10,
        format!("{rows} rows, golden {golden:.1e}, asymptotics {asym:.1e}, Wronskian {wronsk:.1e}"),
    )
}

fn crit9() -> Outcome {
    let ang = (angular_integral_check() - 23.0 / 15.0).abs();
    let dphi = (1..=10)
        .map(|i| (dphi_dz(-1.0, 0.5 * PI * i as f64 / 10.0).unwrap() + 1.0).abs())
        .fold(0.0, f64::max);
    let reduce = (1..=10)
        .map(|i| {
            let a = 0.05 * i as f64;
            (near_edge_stress(&EdgeLaw::new(a, 1.0, 1.0).unwrap()) / (LAW_1 / (a * a)) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        ang < 1e-12 && dphi < 1e-6 && reduce < 1e-12,
        format!("23/15 {ang:.1e}, dphi/dz {dphi:.1e}, law reduction {reduce:.1e}"),
    )
}

fn crit10() -> Outcome {
    let q = params();
    let bits = |pts: &[StressPoint]| pts.iter().map(|p| (p.sigma.to_bits(), p.err.to_bits())).collect::<Vec<_>>();
    let first = wall_points(1.0, &q);
    let again = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| wall_points(1.0, &q));
    let identical = bits(&first) == bits(&again);
    let finer = wall_points(1.0, &q.with_rel_tol(0.5 * q.rel_tol));
    let worst = first
        .iter()
        .zip(&finer)
        .map(|(c, f)| (f.sigma - c.sigma).abs() / c.err)
        .fold(0.0, f64::max);
    outcome(
        identical && worst < 1.0,
        format!("byte-identical: {identical}, max |shift|/error = {worst:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 homogeneous nullity", crit1),
        ("2 near-edge power law (n0 = 1)", || power_law(1.0)),
        ("3 general edge law (n0 = 2)", || power_law(2.0)),
        ("4 falling-edge symmetry", crit4),
        ("5 exponential slab near both edges", crit5),
        ("6 perfect-mirror limit", crit6),
        ("7 Green-function oracles", crit7),
        ("8 special functions", crit8),
        ("9 closed-form constants", crit9),
        ("10 determinism and refinement", crit10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
