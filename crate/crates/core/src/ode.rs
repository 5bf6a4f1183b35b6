//! Adaptive stepping of the impedance Riccati equation.
//!
//! With `y = ψ'/(ν ψ)` the second-order wave equation becomes
//! `y' = k²/ν − ν y²`, integrated together with the log-amplitude
//! `(ln ψ)' = ν y`. Integrating a growing solution in its growth direction is
//! stable: `y` is attracted to the local `±k/ν`.

use ode_solvers::{Dopri5, OutputType, System, Vector2};
use serde::Serialize;

use crate::error::{Error, Result};

/// Impedance magnitude treated as a zero of `ψ`.
const BLOW_UP: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeTolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

struct Riccati<F> {
    /// `(k², ν)` at `z`.
    coeffs: F,
}

impl<F: Fn(f64) -> (f64, f64)> System<f64, Vector2<f64>> for Riccati<F> {
    fn system(&self, z: f64, s: &Vector2<f64>, ds: &mut Vector2<f64>) {
        let (k2, nu) = (self.coeffs)(z);
        let y = s[0];
        ds[0] = k2 / nu - nu * y * y;
        ds[1] = nu * y;
    }

    fn solout(&mut self, _z: f64, s: &Vector2<f64>, _ds: &Vector2<f64>) -> bool {
        !s[0].is_finite() || s[0].abs() > BLOW_UP
    }
}

/// Integrates the Riccati system from `z_from` to `z_to` (either direction).
/// Returns `y(z_to)` and `ln ψ(z_to) − ln ψ(z_from)`.
pub fn integrate_riccati<F>(coeffs: F, z_from: f64, z_to: f64, y_init: f64, tol: OdeTolerance) -> Result<(f64, f64)>
where
    F: Fn(f64) -> (f64, f64),
{
    if z_from == z_to {
        return Ok((y_init, 0.0));
    }
    let span = (z_to - z_from).abs();
    let mut solver = Dopri5::from_param(
        Riccati { coeffs },
        z_from,
        z_to,
        span,
        Vector2::new(y_init, 0.0),
        tol.rtol,
        tol.atol,
        0.9,
        0.04,
        0.2,
        10.0,
        span,
        0.0,
        5_000_000,
        u32::MAX,
        OutputType::Sparse,
    );
    solver.integrate().map_err(|e| Error::Solver {
        z: z_from,
        reason: e.to_string(),
    })?;
    let (zs, ys) = solver.results().get();
    let (z_last, s_last) = (zs[zs.len() - 1], ys[ys.len() - 1]);
    if !s_last[0].is_finite() || s_last[0].abs() > BLOW_UP {
        return Err(Error::PoleCrossing { z: z_last });
    }
    if (z_last - z_to).abs() > 1e-12 * span.max(1.0) {
        return Err(Error::Solver {
            z: z_last,
            reason: format!("integration stopped short of z = {z_to}"),
        });
    }
    Ok((s_last[0], s_last[1]))
}
