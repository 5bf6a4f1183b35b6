//! Built-in self checks, run by `casimir validate`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analytic::{angular_integral_check, dphi_dz, near_edge_stress, EdgeLaw};
use crate::bessel::{bessel_ik, uniform_asymptotic_i, uniform_asymptotic_k};
use crate::error::Result;
use crate::presets;
use crate::stress::{soft_wall_stress_at, stress_at, QuadratureParams};

const GOLDEN: &str = include_str!("../tests/data/bessel_golden.csv");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

fn ln_decimal(s: &str) -> f64 {
    let (m, e) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<f64>().unwrap_or(f64::NAN)),
        None => (s, 0.0),
    };
    m.parse::<f64>().unwrap_or(f64::NAN).ln() + e * std::f64::consts::LN_10
}

fn golden_rows() -> Vec<(f64, f64, f64, f64)> {
    GOLDEN
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 4 {
                return None;
            }
            Some((f[0].parse().ok()?, f[1].parse().ok()?, ln_decimal(f[2]), ln_decimal(f[3])))
        })
        .collect()
}

fn bessel_checks() -> Result<Vec<Check>> {
    let rows = golden_rows();
    let (mut worst, mut worst_w, mut worst_a) = (0.0f64, 0.0f64, 0.0f64);
    for &(nu, x, li, lk) in &rows {
        let b = bessel_ik(nu, x)?;
        worst = worst.max((b.ln_i - li).abs()).max((b.ln_k - lk).abs());
        let w = x * (b.ln_i + b.ln_k).exp() * (b.dlog_k - b.dlog_i);
        worst_w = worst_w.max((w + 1.0).abs());
        if nu.hypot(x) > 30.0 {
            let ai = uniform_asymptotic_i(nu, x)?.value.log_magnitude;
            let ak = uniform_asymptotic_k(nu, x)?.value.log_magnitude;
            worst_a = worst_a.max((ai - li).exp_m1().abs()).max((ak - lk).exp_m1().abs());
        }
    }
    Ok(vec![
        Check::new("bessel golden table", worst < 1e-10, format!("{} rows, max |d ln| = {worst:.2e}", rows.len())),
        Check::new("bessel wronskian", worst_w < 1e-10, format!("max deviation {worst_w:.2e}")),
        Check::new("uniform asymptotics", worst_a < 1e-2, format!("max relative error {worst_a:.2e}")),
    ])
}

fn closed_form_checks() -> Result<Vec<Check>> {
    let ang = angular_integral_check();
    let mut worst_dphi = 0.0f64;
    for i in 1..=10 {
        worst_dphi = worst_dphi.max((dphi_dz(-1.0, 0.5 * PI * i as f64 / 10.0)? + 1.0).abs());
    }
    let mut worst_law = 0.0f64;
    for i in 1..=10 {
        let a = 0.1 * i as f64;
        let v = near_edge_stress(&EdgeLaw::new(a, 1.0, 1.0)?);
        worst_law = worst_law.max((v * a * a * 960.0 * PI * PI / 23.0 - 1.0).abs());
    }
    Ok(vec![
        Check::new("angular integral 23/15", (ang - 23.0 / 15.0).abs() < 1e-12, format!("{ang:.15}")),
        Check::new("dphi/dz at the edge", worst_dphi < 1e-6, format!("max |dphi/dz + 1| = {worst_dphi:.2e}")),
        Check::new("general law at n0 = b = 1", worst_law < 1e-12, format!("max deviation {worst_law:.2e}")),
    ])
}

fn stress_checks(params: &QuadratureParams) -> Result<Vec<Check>> {
    let uniform = presets::uniform(2.25);
    let mut worst_u = 0.0f64;
    for i in 0..5 {
        worst_u = worst_u.max(stress_at(&uniform, -0.9 + 0.4 * i as f64, params)?.sigma.abs());
    }
    let wall = presets::soft_wall(1.0, 1.0);
    let a = 0.02;
    let s = stress_at(&wall, -1.0 + a, params)?;
    let law = near_edge_stress(&EdgeLaw::new(a, 1.0, 1.0)?);
    let closed = soft_wall_stress_at(1.0, 1.0, -1.0 + a, params)?;
    let agree = (s.sigma - closed.sigma).abs() / closed.sigma.abs();
    Ok(vec![
        Check::new("uniform nullity", worst_u < 1e-8, format!("max |sigma| = {worst_u:.2e}")),
        Check::new(
            "soft wall near-edge law",
            ((s.sigma - law) / law).abs() < 0.05,
            format!("a = {a}: sigma = {:.6e}, law = {law:.6e}", s.sigma),
        ),
        Check::new(
            "general vs closed-form wall",
            agree < 10.0 * params.rel_tol,
            format!("relative difference {agree:.2e}"),
        ),
    ])
}

/// Halving the tolerance twice must move `σ` by less than the coarser error
/// estimate each time.
fn tolerance_sweep(params: &QuadratureParams) -> Result<Vec<Check>> {
    let wall = presets::soft_wall(1.0, 1.0);
    let mut out = Vec::new();
    for a in [0.02, 0.06, 0.2] {
        let tols = [params.rel_tol, 0.5 * params.rel_tol, 0.25 * params.rel_tol];
        let runs: Vec<_> = tols
            .iter()
            .map(|&t| stress_at(&wall, -1.0 + a, &params.with_rel_tol(t)))
            .collect::<Result<_>>()?;
        let ok = runs.windows(2).all(|w| (w[1].sigma - w[0].sigma).abs() <= w[0].err);
        let detail = runs
            .iter()
            .map(|r| format!("{:.12e} +- {:.1e}", r.sigma, r.err))
            .collect::<Vec<_>>()
            .join(", ");
        out.push(Check::new("tolerance refinement", ok, format!("a = {a}: {detail}")));
    }
    Ok(out)
}

/// Runs every check; `sweep` adds the tolerance refinement runs.
pub fn run_suite(params: &QuadratureParams, sweep: bool) -> Result<Vec<Check>> {
    let mut checks = bessel_checks()?;
    checks.extend(closed_form_checks()?);
    checks.extend(stress_checks(params)?);
    if sweep {
        checks.extend(tolerance_sweep(params)?);
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_with_defaults() {
        let checks = run_suite(&QuadratureParams::default(), false).unwrap();
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(checks.len(), 9);
        assert!(golden_rows().len() >= 200);
    }
}
