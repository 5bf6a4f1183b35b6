//! Ready-made profiles used by the tests, the CLI and the shipped configs.

use std::f64::consts::E;

use crate::profile::{DispersionParams, Profile, Segment, SegmentKind};

/// Homogeneous non-magnetic medium with permittivity `eps`.
pub fn uniform(eps: f64) -> Profile {
    Profile::new(
        vec![Segment::new(SegmentKind::Uniform { eps, mu: 1.0 }, -1.0, 1.0)],
        None,
    )
    .expect("uniform preset is valid")
}

/// Uniform medium of index `n0` for `z < −n0·b` meeting a realistic
/// (`ε = n²`, `μ = 1`) Beltrami wall whose `dn/dz` jumps by `+1/b` at the edge.
/// The pole sits at `z = 0`.
pub fn soft_wall(b: f64, n0: f64) -> Profile {
    let b_beltrami = n0 * n0 * b;
    Profile::new(
        vec![Segment::new(
            SegmentKind::Beltrami {
                b: b_beltrami,
                pole: 0.0,
                geometric: false,
            },
            -n0 * b,
            0.0,
        )],
        None,
    )
    .expect("soft wall preset is valid")
}

/// Mirror image of [`soft_wall`]: pole at `z = 0`, edge at `z = +n0·b`, where
/// `dn/dz` drops by `1/b`.
pub fn soft_wall_mirrored(b: f64, n0: f64) -> Profile {
    let b_beltrami = n0 * n0 * b;
    Profile::new(
        vec![Segment::new(
            SegmentKind::Beltrami {
                b: b_beltrami,
                pole: 0.0,
                geometric: false,
            },
            0.0,
            n0 * b,
        )],
        None,
    )
    .expect("mirrored soft wall preset is valid")
}

/// Slab `0 < z < 1` with `ε = ϵ(κ)^z`, `ϵ(κ) = (κ² + eκ0²)/(κ² + κ0²)`,
/// constant continuations outside, `κ0 = 200`.
pub fn exponential_slab() -> Profile {
    exponential_slab_with(200.0)
}

pub fn exponential_slab_with(kappa0: f64) -> Profile {
    Profile::new(
        vec![Segment::new(
            SegmentKind::ExponentialDispersive {
                base: E,
                exponent_at_min: 0.0,
                rate: 1.0,
            },
            0.0,
            1.0,
        )],
        Some(DispersionParams { kappa0 }),
    )
    .expect("exponential slab preset is valid")
}

/// Two dielectric half-spaces of permittivity `eps` separated by a vacuum gap
/// `0 < z < a`.
pub fn two_plates(eps: f64, a: f64) -> Profile {
    Profile::with_index_jumps(
        vec![
            Segment::new(SegmentKind::Uniform { eps, mu: 1.0 }, -a, 0.0),
            Segment::new(SegmentKind::Uniform { eps: 1.0, mu: 1.0 }, 0.0, a),
            Segment::new(SegmentKind::Uniform { eps, mu: 1.0 }, a, 2.0 * a),
        ],
        None,
    )
    .expect("two plates preset is valid")
}
